use rabi_core::model::{ModelParams, TruncatedFockBasis};
use rabi_core::parent::{
    f_tilde_diag, f_tilde_direct, f_tilde_geometric_closed, headroom_limit, parent_eigensystem,
    FChoice,
};
use rabi_core::perturbation::StateLabel;
use rabi_core::Error;

use super::{finish, params, stamp, CliError, CliResult, Outcome};
use crate::args::{Command, FSpec, ParentArgs};
use crate::output::{fmt_g, Table};

/// `⌈40(1 + g̃²)⌉`, raised if needed so that `n_report` fits the headroom.
fn default_n_max(p: &ModelParams, big_m: u32, n_report: u32) -> usize {
    let g2 = p.g_tilde() * p.g_tilde();
    let base = (40.0 * (1.0 + g2)).ceil() as usize;
    let need = n_report as usize + big_m as usize + (10.0 * g2).ceil() as usize;
    base.max(need)
}

fn choice(spec: FSpec, p: &ModelParams, big_m: u32, n_max: usize) -> CliResult<FChoice> {
    Ok(match spec {
        FSpec::Special => FChoice::Special,
        FSpec::Zero => FChoice::Zero,
        FSpec::Geometric(s) => FChoice::geometric_normalized(p, s)?,
        // long enough for both the matrix and the f̃ overlap sums
        FSpec::Constant(d) => {
            let g = p.g_tilde();
            let len = n_max + big_m as usize + (g * g + 12.0 * g).ceil() as usize + 200;
            FChoice::ConstantOverW(vec![d; len])
        }
    })
}

pub fn run(cmd: &Command, a: &ParentArgs) -> CliResult<Outcome> {
    let p = params(&a.model, a.g)?;
    let big_m = p.integer_m().ok_or_else(|| {
        CliError::Core(Error::WrongCase(format!(
            "parent-check needs a positive integer M = 2ε/ω, got {}",
            p.big_m()
        )))
    })?;
    let n_max = a
        .n_max
        .unwrap_or_else(|| default_n_max(&p, big_m, a.n_report));
    let b = TruncatedFockBasis::new(n_max);
    let limit = headroom_limit(&p, &b).unwrap_or(0);
    if (limit as u32) < a.n_report {
        return Err(CliError::Core(Error::Truncation(format!(
            "n_max = {n_max} reaches only n = {limit}, below --n-report {}",
            a.n_report
        ))));
    }
    let f = choice(a.f, &p, big_m, n_max)?;
    let pairs = parent_eigensystem(&p, &f, &b)?;

    let mut t = Table::new(&["kind", "n", "alpha", "value", "target", "abs_diff"]);
    stamp(&mut t, cmd);
    t.meta("n_max", n_max);
    t.meta("convergence", "unchecked");
    t.meta("M", big_m);

    let mut worst_res: f64 = 0.0;
    let mut reported = 0u32;
    for e in &pairs {
        let StateLabel::Degenerate { n, alpha } = e.label else {
            continue;
        };
        if n > a.n_report {
            continue;
        }
        reported = reported.max(n);
        worst_res = worst_res.max(e.residual);
        t.push(vec![
            "residual".into(),
            n.to_string(),
            alpha.as_str().into(),
            fmt_g(e.residual),
            "0".into(),
            fmt_g(e.residual),
        ]);
    }
    if reported < a.n_report {
        return Err(CliError::Core(Error::Truncation(format!(
            "analytic eigenpairs stop at n = {reported}, below --n-report {}",
            a.n_report
        ))));
    }

    let mut worst_ft: f64 = 0.0;
    for n in 0..=a.n_report {
        let value = f_tilde_diag(n, &p, &f)?;
        let target = match a.f {
            FSpec::Special => p.delta(),
            FSpec::Zero => 0.0,
            FSpec::Geometric(s) => f_tilde_geometric_closed(n, &p, s)?,
            FSpec::Constant(_) => f_tilde_direct(n as usize, &p, &f, &b)?,
        };
        let diff = (value - target).abs();
        worst_ft = worst_ft.max(diff);
        t.push(vec![
            "f_tilde".into(),
            n.to_string(),
            "*".into(),
            fmt_g(value),
            fmt_g(target),
            fmt_g(diff),
        ]);
    }
    t.meta("max_residual", fmt_g(worst_res));
    t.meta("max_f_tilde_deviation", fmt_g(worst_ft));

    eprintln!(
        "parent-check M={big_m} g~={} f={} n_max={n_max}: max residual {} (n <= {}), max |f~ - target| {}",
        fmt_g(p.g_tilde()),
        a.f,
        fmt_g(worst_res),
        a.n_report,
        fmt_g(worst_ft)
    );
    finish(&t, a.output.as_deref(), None)?;
    Ok(Outcome { converged: true })
}
