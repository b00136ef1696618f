use rabi_core::specfun::asymptotic::MAX_ORDER;
use rabi_core::specfun::series::{
    calf_series, calg_series, curly_c_series, hermite2_recurrence, kummer_reg_direct,
    overlap_f_hermite,
};
use rabi_core::specfun::{
    calf, calf_asymptotic, calg, calg_asymptotic, curly_c, gamma, hermite2, kummer_m, kummer_m_reg,
    overlap_f, EvalResult,
};

use super::{finish, stamp, CliError, CliResult, Outcome};
use crate::args::{Command, SpecfunArgs};
use crate::output::{fmt_g, Table};

pub const NAMES: [&str; 9] = [
    "hermite2",
    "overlap_F",
    "kummer_M",
    "kummer_M_reg",
    "calF",
    "calF_asym",
    "calG",
    "calG_asym",
    "curly_C",
];

/// Argument names per function; a trailing `order` is optional.
fn signature(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "hermite2" => &["n", "m", "x", "y"],
        "overlap_F" => &["n_prime", "n", "x"],
        "kummer_M" | "kummer_M_reg" => &["a", "b", "x"],
        "calF" => &["n", "x", "z"],
        "calF_asym" => &["n", "x", "z", "order"],
        "calG" => &["p", "q", "x"],
        "calG_asym" => &["p", "q", "x", "order"],
        "curly_C" => &["n", "M", "x"],
        _ => return None,
    })
}

fn index(v: f64, what: &str) -> CliResult<u32> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(CliError::Config(format!(
            "{what} must be a nonnegative integer, got {v}"
        )))
    }
}

struct Eval {
    value: f64,
    est_error: f64,
    method: &'static str,
    oracle: Option<f64>,
}

impl Eval {
    fn from(r: EvalResult, oracle: Option<f64>) -> Self {
        Eval {
            value: r.value,
            est_error: r.est_error,
            method: r.method.as_str(),
            oracle,
        }
    }

    /// For routines without their own error estimate.
    fn bare(value: f64, method: &'static str, oracle: Option<f64>) -> Self {
        Eval {
            value,
            est_error: f64::NAN,
            method,
            oracle,
        }
    }
}

fn evaluate(name: &str, v: &[f64]) -> CliResult<Eval> {
    let order =
        |i: usize| -> CliResult<u32> { v.get(i).map_or(Ok(MAX_ORDER), |&o| index(o, "order")) };
    Ok(match name {
        "hermite2" => {
            let (n, m) = (index(v[0], "n")?, index(v[1], "m")?);
            let value = hermite2(n, m, v[2], v[3])?;
            Eval::bare(
                value,
                "binomial_sum",
                Some(hermite2_recurrence(n, m, v[2], v[3])),
            )
        }
        "overlap_F" => {
            let (np, n) = (index(v[0], "n_prime")?, index(v[1], "n")?);
            Eval::bare(
                overlap_f(np, n, v[2]),
                "laguerre",
                overlap_f_hermite(np, n, v[2]).ok(),
            )
        }
        "kummer_M" => {
            let oracle = kummer_reg_direct(v[0], v[1], v[2])
                .ok()
                .and_then(|r| gamma(v[1]).ok().map(|g| r.value * g));
            Eval::from(kummer_m(v[0], v[1], v[2])?, oracle)
        }
        "kummer_M_reg" => Eval::from(
            kummer_m_reg(v[0], v[1], v[2])?,
            kummer_reg_direct(v[0], v[1], v[2]).ok().map(|r| r.value),
        ),
        "calF" => {
            let n = index(v[0], "n")?;
            Eval::from(
                calf(n, v[1], v[2])?,
                calf_series(n, v[1], v[2]).ok().map(|r| r.value),
            )
        }
        "calF_asym" => {
            let n = index(v[0], "n")?;
            Eval::from(
                calf_asymptotic(n, v[1], v[2], order(3)?)?,
                calf_series(n, v[1], v[2]).ok().map(|r| r.value),
            )
        }
        "calG" => {
            let (p, q) = (index(v[0], "p")?, index(v[1], "q")?);
            Eval::from(
                calg(p, q, v[2])?,
                calg_series(p, q, v[2]).ok().map(|r| r.value),
            )
        }
        "calG_asym" => {
            let (p, q) = (index(v[0], "p")?, index(v[1], "q")?);
            Eval::from(
                calg_asymptotic(p, q, v[2], order(3)?)?,
                calg_series(p, q, v[2]).ok().map(|r| r.value),
            )
        }
        "curly_C" => {
            let (n, m) = (index(v[0], "n")?, index(v[1], "M")?);
            if m > n {
                return Err(CliError::Config(format!(
                    "curly_C needs M ≤ n, got n={n}, M={m}"
                )));
            }
            Eval::bare(
                curly_c(n, m, v[2])?,
                "closed_form",
                curly_c_series(n, m, v[2]).ok(),
            )
        }
        _ => unreachable!("name checked against NAMES"),
    })
}

pub fn run(cmd: &Command, a: &SpecfunArgs) -> CliResult<Outcome> {
    let sig = signature(&a.name).ok_or_else(|| {
        CliError::Config(format!(
            "unknown function '{}', expected one of {}",
            a.name,
            NAMES.join(", ")
        ))
    })?;
    let optional = sig.last() == Some(&"order");
    let required = if optional { sig.len() - 1 } else { sig.len() };
    if a.args.len() < required || a.args.len() > sig.len() {
        return Err(CliError::Config(format!(
            "{} takes arguments {}",
            a.name,
            sig.join(" ")
        )));
    }
    let e = evaluate(&a.name, &a.args)?;

    let cols: Vec<&str> = sig[..a.args.len()]
        .iter()
        .copied()
        .chain(["value", "est_error", "method", "oracle_value", "abs_diff"])
        .collect();
    let mut t = Table::new(&cols);
    stamp(&mut t, cmd);
    t.meta("oracle", "direct series");
    let oracle = e.oracle.unwrap_or(f64::NAN);
    let mut row: Vec<String> = a.args.iter().map(|&x| fmt_g(x)).collect();
    row.extend([
        fmt_g(e.value),
        fmt_g(e.est_error),
        e.method.to_string(),
        fmt_g(oracle),
        fmt_g((e.value - oracle).abs()),
    ]);
    t.push(row);
    finish(&t, a.output.as_deref(), None)?;
    Ok(Outcome { converged: true })
}
