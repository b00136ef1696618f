use rayon::prelude::*;

use super::spectrum::{nmax_cap, spectrum_at, ConvergenceReport};
use crate::error::{Error, Result};
use crate::model::{default_n_max, expect, ModelParams, Observable, TruncatedFockBasis};

/// Overlap below which a tracked level is flagged as lost.
pub const TRACKING_MIN_OVERLAP: f64 = 0.5;
/// Greedy matches closer than this to the runner-up go to the optimal assignment.
const AMBIGUITY_MARGIN: f64 = 0.05;

/// Inclusive grid `start, start + step, …, stop`.
pub fn g_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(Error::InvalidParameter(format!(
            "bad grid {start}:{stop}:{step}"
        )));
    }
    let span = (stop - start) / step;
    let count = (span + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(Error::InvalidParameter(format!("grid has {count} points")));
    }
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub n_levels: usize,
    /// Fixed cutoff; `None` uses the default cutoff at the largest g.
    pub n_max: Option<usize>,
    /// Eigenpairs beyond `n_levels` offered to the tracker at each step.
    pub extra_candidates: usize,
    pub min_overlap: f64,
    /// Diagonalize the largest g again at twice the cutoff and report the change.
    pub check_convergence: bool,
}

impl SweepOptions {
    pub fn new(n_levels: usize) -> Self {
        SweepOptions {
            n_levels,
            n_max: None,
            extra_candidates: 4,
            min_overlap: TRACKING_MIN_OVERLAP,
            check_convergence: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPoint {
    pub energy: f64,
    pub sx: f64,
    pub sz: f64,
    pub nbar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingBreak {
    pub grid_index: usize,
    pub g: f64,
    pub level: usize,
    pub overlap: f64,
}

/// Per-point spectra of a g-sweep plus the overlap-tracked level curves.
#[derive(Debug, Clone)]
pub struct SpectralGraph {
    pub template: ModelParams,
    pub grid: Vec<f64>,
    pub n_max: usize,
    pub n_levels: usize,
    /// `points[i]` holds the candidate levels at `grid[i]` in ascending order.
    pub points: Vec<Vec<LevelPoint>>,
    /// `assignment[i][l]`: sorted index followed by curve `l` at `grid[i]`.
    pub assignment: Vec<Vec<usize>>,
    /// `overlaps[i][l]`: |⟨previous|current⟩| for curve `l`, 1 at the first point.
    pub overlaps: Vec<Vec<f64>>,
    pub breaks: Vec<TrackingBreak>,
    pub convergence: ConvergenceReport,
}

impl SpectralGraph {
    pub fn tracked(&self, grid_index: usize, level: usize) -> &LevelPoint {
        &self.points[grid_index][self.assignment[grid_index][level]]
    }

    pub fn tracked_ok(&self, grid_index: usize, level: usize) -> bool {
        self.overlaps[grid_index][level] >= TRACKING_MIN_OVERLAP
            && !self
                .breaks
                .iter()
                .any(|b| b.grid_index == grid_index && b.level == level)
    }

    pub fn curve(&self, level: usize) -> Vec<LevelPoint> {
        (0..self.grid.len())
            .map(|i| *self.tracked(i, level))
            .collect()
    }

    /// Lowest `n_levels` levels at `grid[i]` in energy order.
    pub fn sorted(&self, grid_index: usize) -> &[LevelPoint] {
        &self.points[grid_index][..self.n_levels]
    }

    pub fn all_tracked(&self) -> bool {
        self.breaks.is_empty()
    }
}

struct PointData {
    levels: Vec<LevelPoint>,
    vectors: Vec<Vec<f64>>,
}

fn diagonalize_point(p: &ModelParams, n_max: usize, count: usize) -> Result<PointData> {
    let es = spectrum_at(p, n_max)?;
    let basis = TruncatedFockBasis::new(n_max);
    let count = count.min(basis.dim());
    let mut levels = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for l in 0..count {
        let v = es.state(l);
        levels.push(LevelPoint {
            energy: es.energies()[l],
            sx: expect(&v, Observable::Sx, &basis),
            sz: expect(&v, Observable::Sz, &basis),
            nbar: expect(&v, Observable::Number, &basis),
        });
        vectors.push(v.into_vec());
    }
    Ok(PointData { levels, vectors })
}

pub fn sweep(template: &ModelParams, grid: &[f64], n_levels: usize) -> Result<SpectralGraph> {
    sweep_with(template, grid, &SweepOptions::new(n_levels))
}

/// Diagonalize at every grid point (in parallel) and follow each of the
/// lowest `n_levels` states by maximum eigenvector overlap.
pub fn sweep_with(
    template: &ModelParams,
    grid: &[f64],
    opts: &SweepOptions,
) -> Result<SpectralGraph> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty g grid".into()));
    }
    if opts.n_levels == 0 {
        return Err(Error::InvalidParameter("n_levels must be positive".into()));
    }
    let params: Vec<ModelParams> = grid
        .iter()
        .map(|&g| template.with_g(g))
        .collect::<Result<_>>()?;
    let g_max = params.iter().map(|p| p.g_tilde()).fold(0.0, f64::max);
    let n_max = opts
        .n_max
        .unwrap_or_else(|| default_n_max(g_max))
        .max(opts.n_levels + opts.extra_candidates);
    let count = opts.n_levels + opts.extra_candidates;
    let cap = nmax_cap();
    if n_max > cap {
        return Err(Error::Truncation(format!(
            "n_max = {n_max} exceeds the cap {cap}"
        )));
    }

    let data: Vec<PointData> = params
        .par_iter()
        .map(|p| diagonalize_point(p, n_max, count))
        .collect::<Result<_>>()?;

    // the recheck is clamped to the cap; with no room left it is skipped
    let fine_n_max = (2 * n_max).min(cap);
    let convergence = if opts.check_convergence && fine_n_max > n_max {
        let i_max = params
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.g().abs().total_cmp(&b.1.g().abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let fine = spectrum_at(&params[i_max], fine_n_max)?;
        let change = data[i_max].levels[..opts.n_levels]
            .iter()
            .zip(fine.energies())
            .map(|(a, b)| (a.energy - b).abs() / template.omega())
            .fold(0.0, f64::max);
        let tol = 1e-8;
        ConvergenceReport {
            n_max_sequence: vec![n_max, fine_n_max],
            max_changes: vec![change],
            tol,
            converged: change < tol,
        }
    } else {
        ConvergenceReport::unchecked(n_max)
    };

    let n_levels = opts.n_levels.min(data[0].levels.len());
    let mut assignment = vec![(0..n_levels).collect::<Vec<_>>()];
    let mut overlaps = vec![vec![1.0; n_levels]];
    let mut breaks = Vec::new();
    for i in 1..data.len() {
        let prev = &data[i - 1];
        let cur = &data[i];
        let rows: Vec<Vec<f64>> = assignment[i - 1]
            .iter()
            .map(|&pi| {
                cur.vectors
                    .iter()
                    .map(|cv| {
                        prev.vectors[pi]
                            .iter()
                            .zip(cv)
                            .map(|(a, b)| a * b)
                            .sum::<f64>()
                            .abs()
                    })
                    .collect()
            })
            .collect();
        let assign = assign_max_overlap(&rows);
        let ov: Vec<f64> = assign
            .iter()
            .enumerate()
            .map(|(r, &c)| rows[r][c])
            .collect();
        for (level, &o) in ov.iter().enumerate() {
            if o < opts.min_overlap {
                breaks.push(TrackingBreak {
                    grid_index: i,
                    g: grid[i],
                    level,
                    overlap: o,
                });
            }
        }
        assignment.push(assign);
        overlaps.push(ov);
    }

    Ok(SpectralGraph {
        template: *template,
        grid: grid.to_vec(),
        n_max,
        n_levels,
        points: data.into_iter().map(|d| d.levels).collect(),
        assignment,
        overlaps,
        breaks,
        convergence,
    })
}

/// Column chosen for each row of an overlap table (rows ≤ columns), each column used once.
///
/// Row-wise maxima are taken when they are distinct and clear of the
/// runner-up by a margin; otherwise the total overlap is maximized.
pub fn assign_max_overlap(overlap: &[Vec<f64>]) -> Vec<usize> {
    let cols = overlap.first().map_or(0, |r| r.len());
    assert!(overlap.len() <= cols, "more rows than columns");
    let mut greedy = Vec::with_capacity(overlap.len());
    let mut clear = true;
    for row in overlap {
        let mut best = 0;
        for (c, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = c;
            }
        }
        let runner = row
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != best)
            .map(|(_, &v)| v)
            .fold(f64::NEG_INFINITY, f64::max);
        if row[best] - runner < AMBIGUITY_MARGIN {
            clear = false;
        }
        greedy.push(best);
    }
    let mut seen = greedy.clone();
    seen.sort_unstable();
    seen.dedup();
    if clear && seen.len() == greedy.len() {
        return greedy;
    }
    let cost: Vec<Vec<f64>> = overlap
        .iter()
        .map(|r| r.iter().map(|v| -v).collect())
        .collect();
    hungarian(&cost)
}

/// Minimum-cost assignment for a rows ≤ columns cost table (potentials method).
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let m = cost.first().map_or(0, |r| r.len());
    // 1-based with a sentinel column 0
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=m {
        if owner[j] != 0 {
            out[owner[j] - 1] = j - 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_best(table: &[Vec<f64>]) -> f64 {
        fn rec(t: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
            if row == t.len() {
                return 0.0;
            }
            let mut best = f64::NEG_INFINITY;
            for c in 0..used.len() {
                if !used[c] {
                    used[c] = true;
                    best = best.max(t[row][c] + rec(t, row + 1, used));
                    used[c] = false;
                }
            }
            best
        }
        rec(table, 0, &mut vec![false; table[0].len()])
    }

    #[test]
    fn grid_inclusive() {
        let g = g_grid(0.0, 3.0, 0.02).unwrap();
        assert_eq!(g.len(), 151);
        assert!((g[150] - 3.0).abs() < 1e-12);
        assert_eq!(g_grid(1.0, 1.0, 0.5).unwrap(), vec![1.0]);
        assert!(g_grid(1.0, 0.0, 0.1).is_err());
        assert!(g_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn conflicting_rows_resolved() {
        // both rows prefer column 0
        let t = vec![vec![0.8, 0.6, 0.0], vec![0.7, 0.1, 0.2]];
        assert_eq!(assign_max_overlap(&t), vec![1, 0]);
    }

    #[test]
    fn clear_rows_greedy() {
        let t = vec![vec![0.99, 0.1], vec![0.1, 0.98]];
        assert_eq!(assign_max_overlap(&t), vec![0, 1]);
    }

    proptest! {
        #[test]
        fn hungarian_is_optimal(rows in 1usize..5, extra in 0usize..3,
                                vals in proptest::collection::vec(0.0f64..1.0, 64)) {
            let cols = rows + extra;
            let t: Vec<Vec<f64>> = (0..rows)
                .map(|r| (0..cols).map(|c| vals[r * cols + c]).collect())
                .collect();
            let a = assign_max_overlap(&t);
            let mut s = a.clone();
            s.sort_unstable();
            s.dedup();
            prop_assert_eq!(s.len(), rows);
            let total: f64 = a.iter().enumerate().map(|(r, &c)| t[r][c]).sum();
            prop_assert!((total - brute_best(&t)).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_tracks_decoupled_ladders() {
        let p = ModelParams::new(1.0, 0.0, 0.2, 0.3).unwrap();
        let grid = g_grid(0.0, 0.4, 0.05).unwrap();
        let sg = sweep(&p, &grid, 4).unwrap();
        assert!(sg.all_tracked());
        assert_eq!(sg.points.len(), grid.len());
        assert!(sg.convergence.converged);
        for i in 0..grid.len() {
            for l in 0..4 {
                assert!(sg.tracked_ok(i, l));
            }
            let s = sg.sorted(i);
            assert!(s.windows(2).all(|w| w[0].energy <= w[1].energy));
        }
        let r = (0.2f64 * 0.2 + 0.3 * 0.3).sqrt();
        assert!((sg.tracked(0, 0).energy + r).abs() < 1e-12);
    }

    #[test]
    fn integer_case_crossing_followed() {
        // M = 1, Δ = 0: levels n − g̃² ± ε never mix, so tracking follows the
        // parity-like ladders straight through the crossings
        let p = ModelParams::new(1.0, 0.0, 0.5, 0.0).unwrap();
        let grid = g_grid(0.0, 1.0, 0.05).unwrap();
        let sg = sweep(&p, &grid, 5).unwrap();
        for l in 0..5 {
            let c = sg.curve(l);
            let e0 = c[0].energy;
            for (pt, g) in c.iter().zip(&grid) {
                assert!(
                    (pt.energy - (e0 - g * g)).abs() < 1e-9,
                    "level {l} at g = {g}"
                );
            }
        }
    }
}
