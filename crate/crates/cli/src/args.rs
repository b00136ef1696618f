//! Command-line grammar and its canonical echo.
//!
//! Every subcommand can print itself back as a command line. That line goes
//! into the CSV metadata and parses to the same configuration, minus
//! `--jobs` and `--output`, which do not change the data.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

pub const BIN: &str = "rabi-asym";

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = BIN, version, about = "Asymmetric quantum Rabi model: sweeps, perturbation checks, special functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Exact spectrum and expectation values along a g grid.
    Sweep(SweepArgs),
    /// Exact diagonalization against second-order perturbation theory.
    PtCompare(PtArgs),
    /// Residuals of the analytic parent-Hamiltonian eigenpairs.
    ParentCheck(ParentArgs),
    /// Evaluate one special function next to its direct-series oracle.
    SpecfunEval(SpecfunArgs),
}

/// `start:stop:step`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn single(&self) -> Option<f64> {
        (self.start == self.stop).then_some(self.start)
    }

    pub fn points(&self) -> rabi_core::Result<Vec<f64>> {
        match self.single() {
            Some(v) => Ok(vec![v]),
            None => rabi_core::eigen::g_grid(self.start, self.stop, self.step),
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{t}' is not a number"))
        };
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Ok(Grid {
                    start: v,
                    stop: v,
                    step: 0.0,
                })
            }
            [a, b, c] => Ok(Grid {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            }),
            _ => Err(format!(
                "expected start:stop:step or a single value, got '{s}'"
            )),
        }
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.single() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}:{}:{}", self.start, self.stop, self.step),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub delta: f64,
}

impl ModelArgs {
    fn echo(&self, out: &mut String) {
        let _ = write!(
            out,
            " --omega {} --epsilon {} --delta {}",
            self.omega, self.epsilon, self.delta
        );
    }
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct RunArgs {
    /// Worker threads for the grid points (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// CSV destination; a gnuplot script `<stem>.gp` is written beside it.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Coupling grid `start:stop:step`, inclusive.
    #[arg(long)]
    pub g: Grid,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    /// Fixed Fock cutoff instead of the automatic one.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Add an `energy_rotated` column, `energy + g²/ω`.
    #[arg(long)]
    pub energy_rotated: bool,
    /// Locate gap minima between adjacent levels and list them in the metadata.
    #[arg(long)]
    pub crossings: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct PtArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Coupling grid, or a single g together with `--delta-sweep`.
    #[arg(long)]
    pub g: Grid,
    /// Levels compared (default: M+1 for integer M, else 4).
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Sweep Δ over this grid at fixed g and tabulate |E_ed − E_pt|.
    #[arg(long)]
    pub delta_sweep: Option<Grid>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FSpec {
    Special,
    Zero,
    Geometric(f64),
    Constant(f64),
}

impl FromStr for FSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| format!("'{t}' is not a number"))
        };
        match s.split_once(':') {
            None if s == "special" => Ok(FSpec::Special),
            None if s == "zero" => Ok(FSpec::Zero),
            Some(("geometric", v)) => Ok(FSpec::Geometric(num(v)?)),
            Some(("constant", v)) => Ok(FSpec::Constant(num(v)?)),
            _ => Err(format!(
                "unknown f '{s}', expected special, zero, geometric:S or constant:D"
            )),
        }
    }
}

impl std::fmt::Display for FSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FSpec::Special => f.write_str("special"),
            FSpec::Zero => f.write_str("zero"),
            FSpec::Geometric(s) => write!(f, "geometric:{s}"),
            FSpec::Constant(d) => write!(f, "constant:{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ParentArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub g: f64,
    /// Coupling profile of the off-diagonal term.
    #[arg(long, default_value = "special")]
    pub f: FSpec,
    /// Report levels `n ≤ n_report`.
    #[arg(long, default_value_t = 20)]
    pub n_report: u32,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SpecfunArgs {
    /// One of hermite2, overlap_F, kummer_M, kummer_M_reg, calF, calF_asym,
    /// calG, calG_asym, curly_C.
    pub name: String,
    #[arg(allow_negative_numbers = true)]
    pub args: Vec<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep(_) => "sweep",
            Command::PtCompare(_) => "pt-compare",
            Command::ParentCheck(_) => "parent-check",
            Command::SpecfunEval(_) => "specfun-eval",
        }
    }

    /// Canonical command line reproducing this run's data.
    pub fn echo(&self) -> String {
        let mut s = format!("{BIN} {}", self.name());
        match self {
            Command::Sweep(a) => {
                a.model.echo(&mut s);
                let _ = write!(s, " --g {} --levels {}", a.g, a.levels);
                if let Some(n) = a.n_max {
                    let _ = write!(s, " --n-max {n}");
                }
                if a.energy_rotated {
                    s.push_str(" --energy-rotated");
                }
                if a.crossings {
                    s.push_str(" --crossings");
                }
            }
            Command::PtCompare(a) => {
                a.model.echo(&mut s);
                let _ = write!(s, " --g {}", a.g);
                if let Some(l) = a.levels {
                    let _ = write!(s, " --levels {l}");
                }
                if let Some(n) = a.n_max {
                    let _ = write!(s, " --n-max {n}");
                }
                if let Some(d) = a.delta_sweep {
                    let _ = write!(s, " --delta-sweep {d}");
                }
            }
            Command::ParentCheck(a) => {
                a.model.echo(&mut s);
                let _ = write!(s, " --g {} --f {} --n-report {}", a.g, a.f, a.n_report);
                if let Some(n) = a.n_max {
                    let _ = write!(s, " --n-max {n}");
                }
            }
            Command::SpecfunEval(a) => {
                let _ = write!(s, " {}", a.name);
                for v in &a.args {
                    let _ = write!(s, " {v}");
                }
            }
        }
        s
    }

    /// The same command without the flags that leave the data unchanged.
    #[cfg(test)]
    pub fn without_plumbing(&self) -> Command {
        let mut c = self.clone();
        match &mut c {
            Command::Sweep(a) => {
                a.run = RunArgs {
                    jobs: None,
                    output: None,
                }
            }
            Command::PtCompare(a) => {
                a.run = RunArgs {
                    jobs: None,
                    output: None,
                }
            }
            Command::ParentCheck(a) => a.output = None,
            Command::SpecfunEval(a) => a.output = None,
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> Command {
        Cli::try_parse_from(line.split_whitespace())
            .unwrap()
            .command
    }

    fn round_trip(line: &str) {
        let c = parse(line);
        let again = parse(&c.echo());
        assert_eq!(again, c.without_plumbing(), "{}", c.echo());
    }

    #[test]
    fn echoes_parse_back() {
        round_trip("rabi-asym sweep --epsilon 0.25 --delta 0.3 --g 0:3:0.02 --levels 6 --jobs 2 --output a.csv");
        round_trip("rabi-asym sweep --omega 2 --epsilon 0.1 --delta 0.3 --g 0:1:0.1 --n-max 80 --energy-rotated --crossings");
        round_trip("rabi-asym pt-compare --epsilon 0.5 --delta 0.05 --g 0.5:2:0.25 --levels 3");
        round_trip(
            "rabi-asym pt-compare --epsilon 0.25 --delta 0.1 --g 1.5 --delta-sweep 0.01:0.1:0.01",
        );
        round_trip("rabi-asym parent-check --epsilon 1 --delta 0.3 --g 1 --f geometric:0.5 --n-report 5 --n-max 90");
        round_trip("rabi-asym specfun-eval calF 0 1 -0.5");
    }

    #[test]
    fn awkward_floats_survive() {
        let c = parse("rabi-asym sweep --epsilon 0.1 --delta 0.30000000000000004 --g 0.1:0.7:0.030000000000000002");
        let again = parse(&c.echo());
        assert_eq!(again, c);
    }

    #[test]
    fn grids() {
        assert_eq!("1.5".parse::<Grid>().unwrap().single(), Some(1.5));
        let g: Grid = "0:1:0.25".parse().unwrap();
        assert_eq!(g.points().unwrap().len(), 5);
        assert!("0:1".parse::<Grid>().is_err());
        assert!("a:b:c".parse::<Grid>().is_err());
    }

    #[test]
    fn f_specs() {
        assert_eq!(
            "geometric:0.5".parse::<FSpec>().unwrap(),
            FSpec::Geometric(0.5)
        );
        assert_eq!("zero".parse::<FSpec>().unwrap(), FSpec::Zero);
        assert!("geometric".parse::<FSpec>().is_err());
        assert!("constant:x".parse::<FSpec>().is_err());
    }

    #[test]
    fn missing_required_flag_is_an_error() {
        assert!(Cli::try_parse_from(["rabi-asym", "sweep", "--epsilon", "0.1"]).is_err());
    }
}
