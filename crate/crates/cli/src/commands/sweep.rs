use rabi_core::eigen::{gap_minima, sweep_with, SweepOptions, DEFAULT_GAP_TOL};

use super::{finish, flag, params, stamp, CliError, CliResult, Outcome};
use crate::args::{Command, SweepArgs};
use crate::output::{fmt_g, Table};

pub fn run(cmd: &Command, a: &SweepArgs) -> CliResult<Outcome> {
    if a.levels == 0 {
        return Err(CliError::Config("--levels must be positive".into()));
    }
    let grid = a.g.points()?;
    let template = params(&a.model, grid[0])?;
    let mut opts = SweepOptions::new(a.levels);
    opts.n_max = a.n_max;
    let graph = sweep_with(&template, &grid, &opts)?;

    let mut cols = vec!["g", "level", "energy", "sx", "sz", "nbar", "tracked_ok"];
    if a.energy_rotated {
        cols.push("energy_rotated");
    }
    let mut t = Table::new(&cols);
    stamp(&mut t, cmd);
    t.meta("n_max", graph.n_max);
    let conv = &graph.convergence;
    match conv.max_changes.last() {
        Some(c) => t.meta(
            "convergence",
            format!(
                "{} (max change {} at n_max {:?})",
                conv.status(),
                fmt_g(*c),
                conv.n_max_sequence
            ),
        ),
        None => t.meta("convergence", conv.status()),
    }
    for b in &graph.breaks {
        t.meta(
            "tracking_break",
            format!(
                "level {} at g={} overlap {}",
                b.level,
                fmt_g(b.g),
                fmt_g(b.overlap)
            ),
        );
    }
    if a.crossings {
        let found = gap_minima(&graph, DEFAULT_GAP_TOL)?;
        if found.is_empty() {
            t.meta("crossings", "none");
        }
        for c in found {
            t.meta(
                "crossing",
                format!(
                    "levels {}/{} at g={} gap={} energy={} {}",
                    c.lower_level,
                    c.lower_level + 1,
                    fmt_g(c.g),
                    fmt_g(c.gap),
                    fmt_g(c.energy),
                    if c.degenerate {
                        "degenerate"
                    } else {
                        "avoided"
                    }
                ),
            );
        }
    }

    for (i, &g) in graph.grid.iter().enumerate() {
        let shift = g * g / template.omega();
        for l in 0..graph.n_levels {
            let pt = graph.tracked(i, l);
            let mut row = vec![
                fmt_g(g),
                l.to_string(),
                fmt_g(pt.energy),
                fmt_g(pt.sx),
                fmt_g(pt.sz),
                fmt_g(pt.nbar),
                flag(graph.tracked_ok(i, l)),
            ];
            if a.energy_rotated {
                row.push(fmt_g(pt.energy + shift));
            }
            t.push(row);
        }
    }

    let script = a.run.output.as_ref().map(|_| script(graph.n_levels));
    finish(&t, a.run.output.as_deref(), script)?;
    Ok(Outcome {
        converged: conv.status() != "not-converged",
    })
}

fn script(levels: usize) -> String {
    let last = levels - 1;
    let panel = |col: usize, label: &str| {
        format!(
            "set ylabel '{label}'\nplot for [l=0:{last}] data using 1:(column(2)==l ? column({col}) : 1/0) with lines title sprintf('%d', l)\n"
        )
    };
    let mut s = String::from("set xlabel 'g'\nset multiplot layout 2,2\n");
    s += &panel(3, "E");
    s += &panel(4, "<sx>");
    s += &panel(5, "<sz>");
    s += &panel(6, "<a+a>");
    s += "unset multiplot\n";
    s
}
