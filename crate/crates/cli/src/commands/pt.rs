use rabi_core::eigen::{converged_spectrum, spectrum_at, Eigensystem};
use rabi_core::model::{ModelParams, Observable};
use rabi_core::perturbation::{lowest_labels, pt_state, unperturbed_energy, PTResult};
use rabi_core::Error;
use rayon::prelude::*;

use super::{finish, params, stamp, CliError, CliResult, Outcome};
use crate::args::{Command, PtArgs};
use crate::output::{fmt_g, Table};

const ED_TOL: f64 = 1e-10;
/// Labels computed beyond the requested count, so second-order shifts
/// cannot push a true low level out of the selection.
const SPARE_LABELS: usize = 4;

struct Row {
    label: String,
    e_ed: f64,
    e_pt: f64,
    sx_ed: f64,
    sx_pt: f64,
    sz_ed: f64,
    sz_pt: f64,
    flag: &'static str,
}

struct Point {
    rows: Vec<Row>,
    n_max: usize,
    status: &'static str,
}

pub fn run(cmd: &Command, a: &PtArgs) -> CliResult<Outcome> {
    match a.delta_sweep {
        None => run_g(cmd, a),
        Some(_) => run_delta(cmd, a),
    }
}

fn default_levels(p: &ModelParams) -> usize {
    match p.integer_m() {
        Some(m) => m as usize + 1,
        None => 4,
    }
}

fn levels_for(a: &PtArgs, p: &ModelParams) -> CliResult<usize> {
    let l = a.levels.unwrap_or_else(|| default_levels(p));
    if l == 0 {
        return Err(CliError::Config("--levels must be positive".into()));
    }
    Ok(l)
}

fn exact(p: &ModelParams, levels: usize, n_max: Option<usize>) -> rabi_core::Result<Eigensystem> {
    match n_max {
        Some(n) => spectrum_at(p, n),
        None => converged_spectrum(p, levels, ED_TOL),
    }
}

fn error_flag(e: &Error) -> &'static str {
    match e {
        Error::Pole { .. } => "pole",
        Error::ZeroDivisor(_) => "zero_divisor",
        Error::WrongCase(_) => "wrong_case",
        _ => "error",
    }
}

/// PT levels matched to exact levels by energy rank.
fn compare_at(p: &ModelParams, levels: usize, n_max: Option<usize>) -> CliResult<Point> {
    let es = exact(p, levels, n_max)?;
    if es.energies().len() < levels {
        return Err(CliError::Core(Error::Truncation(format!(
            "n_max = {} holds fewer than {levels} levels",
            es.basis.n_max()
        ))));
    }
    let mut cands: Vec<(f64, String, Result<PTResult, Error>)> =
        lowest_labels(p, levels + SPARE_LABELS)
            .into_iter()
            .map(|l| {
                let r = pt_state(p, l);
                let key = match &r {
                    Ok(r) => r.energy(),
                    Err(_) => unperturbed_energy(p, l),
                };
                (key, l.to_string(), r)
            })
            .collect();
    cands.sort_by(|x, y| x.0.total_cmp(&y.0));
    cands.truncate(levels);

    let rows = cands
        .into_iter()
        .enumerate()
        .map(|(k, (_, label, r))| {
            let (e_pt, sx_pt, sz_pt, flag) = match r {
                Ok(r) => {
                    let flag = if r.breakdown() {
                        "breakdown"
                    } else if !r.validity.ok() {
                        "outside_regime"
                    } else {
                        "ok"
                    };
                    (r.energy_arm(), r.sx.value, r.sz.value, flag)
                }
                Err(e) => (f64::NAN, f64::NAN, f64::NAN, error_flag(&e)),
            };
            Row {
                label,
                e_ed: es.energies()[k],
                e_pt,
                sx_ed: es.expect(k, Observable::Sx),
                sx_pt,
                sz_ed: es.expect(k, Observable::Sz),
                sz_pt,
                flag,
            }
        })
        .collect();
    Ok(Point {
        rows,
        n_max: es.basis.n_max(),
        status: es.report.status(),
    })
}

fn sweep_points(ps: &[ModelParams], levels: usize, n_max: Option<usize>) -> CliResult<Vec<Point>> {
    ps.par_iter()
        .map(|p| compare_at(p, levels, n_max))
        .collect()
}

fn describe(t: &mut Table, p: &ModelParams, points: &[Point]) -> bool {
    let lo = points.iter().map(|q| q.n_max).min().unwrap_or(0);
    let hi = points.iter().map(|q| q.n_max).max().unwrap_or(0);
    t.meta(
        "n_max",
        if lo == hi {
            lo.to_string()
        } else {
            format!("{lo}..{hi}")
        },
    );
    let failed = points.iter().any(|q| q.status == "not-converged");
    let status = if failed {
        "not-converged"
    } else if points.iter().all(|q| q.status == "converged") {
        "converged"
    } else {
        "unchecked"
    };
    t.meta("convergence", status);
    match p.integer_m() {
        Some(m) => t.meta("case", format!("integer M={m}")),
        None => t.meta("case", format!("noninteger M={}", fmt_g(p.big_m()))),
    }
    !failed
}

fn label_list(points: &[Point]) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for r in points.iter().flat_map(|q| &q.rows) {
        if !seen.contains(&r.label) {
            seen.push(r.label.clone());
        }
    }
    seen
}

fn run_g(cmd: &Command, a: &PtArgs) -> CliResult<Outcome> {
    let grid = a.g.points()?;
    let template = params(&a.model, grid[0])?;
    let levels = levels_for(a, &template)?;
    let ps = grid
        .iter()
        .map(|&g| template.with_g(g))
        .collect::<rabi_core::Result<Vec<_>>>()?;
    let points = sweep_points(&ps, levels, a.n_max)?;

    let mut t = Table::new(&[
        "g",
        "level_label",
        "E_ed",
        "E_pt",
        "sx_ed",
        "sx_pt",
        "sz_ed",
        "sz_pt",
        "validity_flag",
    ]);
    stamp(&mut t, cmd);
    let converged = describe(&mut t, &template, &points);
    for (g, q) in grid.iter().zip(&points) {
        for r in &q.rows {
            t.push(vec![
                fmt_g(*g),
                r.label.clone(),
                fmt_g(r.e_ed),
                fmt_g(r.e_pt),
                fmt_g(r.sx_ed),
                fmt_g(r.sx_pt),
                fmt_g(r.sz_ed),
                fmt_g(r.sz_pt),
                r.flag.to_string(),
            ]);
        }
    }
    let script = a.run.output.as_ref().map(|_| {
        let labels = label_list(&points).join(" ");
        format!(
            "labels = \"{labels}\"\nset xlabel 'g'\nset ylabel 'E'\n\
             plot for [lab in labels] data using 1:(strcol(2) eq lab ? column(3) : 1/0) with points title 'ED '.lab, \\\n     \
             for [lab in labels] data using 1:(strcol(2) eq lab ? column(4) : 1/0) with lines title 'PT '.lab\n"
        )
    });
    finish(&t, a.run.output.as_deref(), script)?;
    Ok(Outcome { converged })
}

/// Least-squares slope of `ln err` against `ln δ`.
fn log_slope(pairs: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(d, e)| *d > 0.0 && *e > 0.0 && e.is_finite())
        .map(|(d, e)| (d.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn run_delta(cmd: &Command, a: &PtArgs) -> CliResult<Outcome> {
    let g =
        a.g.single()
            .ok_or_else(|| CliError::Config("--delta-sweep needs a single --g value".into()))?;
    let deltas = a.delta_sweep.expect("delta sweep mode").points()?;
    let template = params(&a.model, g)?;
    let levels = levels_for(a, &template)?;
    let ps = deltas
        .iter()
        .map(|&d| template.with_delta(d))
        .collect::<rabi_core::Result<Vec<_>>>()?;
    let points = sweep_points(&ps, levels, a.n_max)?;

    let mut t = Table::new(&["delta", "level_label", "E_ed", "E_pt", "abs_err"]);
    stamp(&mut t, cmd);
    let converged = describe(&mut t, &template, &points);
    for k in 0..levels {
        let pairs: Vec<(f64, f64)> = deltas
            .iter()
            .zip(&points)
            .map(|(d, q)| (*d, (q.rows[k].e_ed - q.rows[k].e_pt).abs()))
            .collect();
        let slope = log_slope(&pairs).map_or("nan".to_string(), fmt_g);
        t.meta("loglog_slope", format!("rank {k}: {slope}"));
    }
    for (d, q) in deltas.iter().zip(&points) {
        for r in &q.rows {
            t.push(vec![
                fmt_g(*d),
                r.label.clone(),
                fmt_g(r.e_ed),
                fmt_g(r.e_pt),
                fmt_g((r.e_ed - r.e_pt).abs()),
            ]);
        }
    }
    let script = a.run.output.as_ref().map(|_| {
        let labels = label_list(&points).join(" ");
        format!(
            "labels = \"{labels}\"\nset logscale xy\nset xlabel 'Delta'\nset ylabel '|E_ed - E_pt|'\n\
             plot for [lab in labels] data using 1:(strcol(2) eq lab ? column(5) : 1/0) with linespoints title lab\n"
        )
    });
    finish(&t, a.run.output.as_deref(), script)?;
    Ok(Outcome { converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pairs: Vec<(f64, f64)> = [0.1, 0.2, 0.4]
            .iter()
            .map(|&d| (d, 3.0 * d * d * d))
            .collect();
        assert!((log_slope(&pairs).unwrap() - 3.0).abs() < 1e-12);
        assert!(log_slope(&pairs[..1]).is_none());
    }

    #[test]
    fn noninteger_rows_are_close() {
        let p = ModelParams::new(1.0, 1.5, 0.25, 0.05).unwrap();
        let q = compare_at(&p, 4, None).unwrap();
        assert_eq!(q.status, "converged");
        for r in &q.rows {
            assert_eq!(r.flag, "ok");
            assert!((r.e_ed - r.e_pt).abs() < 1e-3, "{}", r.label);
        }
    }

    #[test]
    fn integer_default_levels() {
        let p = ModelParams::new(1.0, 1.0, 1.0, 0.05).unwrap();
        assert_eq!(default_levels(&p), 3);
        let q = compare_at(&p, 3, None).unwrap();
        assert_eq!(q.rows[0].label, "0;0");
    }
}
