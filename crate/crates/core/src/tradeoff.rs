//! Accuracy/sensitivity frontier curves.
//!
//! Three families are traced: the maximum-likelihood classifier swept over
//! its threshold `eta`, the single-threshold classifier swept over its
//! boundary, and the general classifier with a fixed number of boundaries,
//! which minimises the sensitivity subject to `A(y) = zeta`.
//!
//! Sweeps over `eta` and `y` are not monotone in accuracy: accuracy rises to
//! its maximum and falls on either side. A curve keeps one side, the one with
//! the lower sensitivity over the accuracy range both sides cover, so that
//! accuracy is strictly increasing along it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::boundary_solver::{default_search_interval, ml_boundaries, optimal_linear_boundary};
use crate::classifier::{
    accuracy, best_orientation, boundary_gradient, sensitivity, BoundarySet, Norm, Orientation,
};
use crate::densities::{Hypothesis, HypothesisPair};
use crate::error::{Error, Result};
use crate::numeric::contour::GridField;
use crate::numeric::{linspace, logspace, root, simplex};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    MlSweep { eta: f64 },
    LinearSweep { y: f64 },
    ConstrainedMin { zeta: f64 },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::MlSweep { eta } => write!(f, "ml_sweep(eta={eta})"),
            Self::LinearSweep { y } => write!(f, "linear_sweep(y={y})"),
            Self::ConstrainedMin { zeta } => write!(f, "constrained_min(zeta={zeta})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub boundaries: BoundarySet,
    pub provenance: Provenance,
}

/// A `zeta` value for which no feasible point was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmittedPoint {
    pub zeta: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffCurve {
    pub points: Vec<TradeoffPoint>,
    pub norm: Norm,
    pub pair_digest: String,
    pub omitted: Vec<OmittedPoint>,
    /// Set when the solver gives no global guarantee (more than two boundaries).
    pub best_effort: bool,
}

impl TradeoffCurve {
    /// `accuracy,sensitivity,y1,...,yn,provenance` with one row per point.
    pub fn to_csv(&self) -> String {
        let n = self.points.iter().map(|p| p.boundaries.len()).max().unwrap_or(0);
        let mut out = String::from("accuracy,sensitivity");
        for i in 1..=n {
            out.push_str(&format!(",y{i}"));
        }
        out.push_str(",provenance\n");
        for p in &self.points {
            out.push_str(&format!("{},{}", p.accuracy, p.sensitivity));
            for i in 0..n {
                match p.boundaries.boundaries().get(i) {
                    Some(y) => out.push_str(&format!(",{y}")),
                    None => out.push(','),
                }
            }
            out.push_str(&format!(",\"{}\"\n", p.provenance));
        }
        out
    }

    pub fn accuracies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.accuracy).collect()
    }

    pub fn sensitivities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.sensitivity).collect()
    }

    /// Linear interpolation of the sensitivity at accuracy `a`; `None`
    /// outside the curve's range.
    pub fn sensitivity_at(&self, a: f64) -> Option<f64> {
        interpolate(&self.points, a)
    }
}

fn interpolate(points: &[TradeoffPoint], a: f64) -> Option<f64> {
    let first = points.first()?;
    let last = points.last()?;
    if a < first.accuracy || a > last.accuracy {
        return None;
    }
    let k = points.partition_point(|p| p.accuracy < a);
    if k == 0 {
        return Some(first.sensitivity);
    }
    let (p, q) = (&points[k - 1], &points[k.min(points.len() - 1)]);
    if q.accuracy == p.accuracy {
        return Some(q.sensitivity);
    }
    let t = (a - p.accuracy) / (q.accuracy - p.accuracy);
    Some(p.sensitivity + t * (q.sensitivity - p.sensitivity))
}

/// Short hex digest of the family names, parameters and prior.
pub fn pair_digest(pair: &HypothesisPair) -> String {
    let mut h = Sha256::new();
    for m in [pair.h0(), pair.h1()] {
        h.update(m.family_name().as_bytes());
        for p in m.params() {
            h.update(p.to_bits().to_le_bytes());
        }
    }
    h.update(pair.p0().to_bits().to_le_bytes());
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn check_steps(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("{what} grid needs at least 2 points, got {n}")));
    }
    Ok(())
}

/// `n` log-spaced thresholds over `[1e-3, 1e3]` plus `eta = 1`.
pub fn eta_grid(n: usize) -> Result<Vec<f64>> {
    check_steps(n, "eta")?;
    let mut g = logspace(1e-3, 1e3, n);
    g.push(1.0);
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// `n` uniform boundaries over the default search interval plus the best
/// single threshold.
pub fn y_grid(pair: &HypothesisPair, n: usize) -> Result<Vec<f64>> {
    check_steps(n, "y")?;
    let (lo, hi) = default_search_interval(pair);
    let mut g = linspace(lo, hi, n);
    if let Ok(opt) = optimal_linear_boundary(pair) {
        g.push(opt.y);
        g.sort_by(f64::total_cmp);
        g.dedup();
    }
    Ok(g)
}

/// `n` uniform accuracies from 0.5 to the maximum accuracy.
pub fn zeta_grid(pair: &HypothesisPair, n: usize) -> Result<Vec<f64>> {
    check_steps(n, "zeta")?;
    let a_max = accuracy(&ml_boundaries(pair, 1.0)?.boundary_set(), pair);
    Ok(linspace(0.5, a_max, n))
}

/// [`eta_grid`] with 400 points.
pub fn default_eta_grid() -> Vec<f64> {
    eta_grid(400).expect("fixed size")
}

/// [`y_grid`] with 2001 points.
pub fn default_y_grid(pair: &HypothesisPair) -> Vec<f64> {
    y_grid(pair, 2001).expect("fixed size")
}

/// [`zeta_grid`] with 60 points.
pub fn default_zeta_grid(pair: &HypothesisPair) -> Result<Vec<f64>> {
    zeta_grid(pair, 60)
}

/// Maximum-likelihood points in grid order, without branch selection.
/// Thresholds with no boundaries are skipped.
pub fn ml_sweep(pair: &HypothesisPair, eta_grid: &[f64], norm: Norm) -> Result<Vec<TradeoffPoint>> {
    let mut out = Vec::with_capacity(eta_grid.len());
    for &eta in eta_grid {
        let b = ml_boundaries(pair, eta)?.boundary_set();
        if b.is_empty() {
            continue;
        }
        out.push(TradeoffPoint {
            accuracy: accuracy(&b, pair),
            sensitivity: sensitivity(&b, pair, norm)?,
            boundaries: b,
            provenance: Provenance::MlSweep { eta },
        });
    }
    Ok(out)
}

/// Single-threshold points in grid order, each with its better orientation.
pub fn linear_sweep(pair: &HypothesisPair, y_grid: &[f64], norm: Norm) -> Result<Vec<TradeoffPoint>> {
    y_grid
        .iter()
        .map(|&y| {
            let (b, acc) = best_orientation(&[y], pair)?;
            Ok(TradeoffPoint {
                accuracy: acc,
                sensitivity: sensitivity(&b, pair, norm)?,
                boundaries: b,
                provenance: Provenance::LinearSweep { y },
            })
        })
        .collect()
}

fn same_shape(a: &TradeoffPoint, b: &TradeoffPoint) -> bool {
    a.boundaries.len() == b.boundaries.len() && a.boundaries.orientation() == b.boundaries.orientation()
}

/// Keeps the monotone run on one side of the accuracy maximum, ordered by
/// strictly increasing accuracy, dropping points below 0.5.
pub fn select_branch(points: &[TradeoffPoint]) -> Vec<TradeoffPoint> {
    if points.is_empty() {
        return Vec::new();
    }
    let m = (0..points.len())
        .fold(0, |best, k| if points[k].accuracy > points[best].accuracy { k } else { best });
    // runs start at the peak and walk outwards while accuracy strictly falls
    let mut left = vec![points[m].clone()];
    for k in (0..m).rev() {
        let prev = left.last().expect("non-empty");
        if points[k].accuracy < prev.accuracy && same_shape(&points[k], prev) {
            left.push(points[k].clone());
        } else {
            break;
        }
    }
    let mut right = vec![points[m].clone()];
    for p in &points[m + 1..] {
        let prev = right.last().expect("non-empty");
        if p.accuracy < prev.accuracy && same_shape(p, prev) {
            right.push(p.clone());
        } else {
            break;
        }
    }
    let finish = |mut run: Vec<TradeoffPoint>| {
        run.reverse();
        run.retain(|p| p.accuracy >= 0.5);
        run
    };
    let (left, right) = (finish(left), finish(right));
    if right.len() <= 1 {
        return left;
    }
    if left.len() <= 1 {
        return right;
    }
    let lo = left[0].accuracy.max(right[0].accuracy);
    let hi = left.last().expect("non-empty").accuracy;
    let probes = linspace(lo, hi, 64);
    let mean = |run: &[TradeoffPoint]| {
        probes.iter().filter_map(|&a| interpolate(run, a)).sum::<f64>() / probes.len() as f64
    };
    if mean(&right) < mean(&left) {
        right
    } else {
        left
    }
}

/// Maximum-likelihood tradeoff curve.
pub fn ml_curve(pair: &HypothesisPair, eta_grid: &[f64], norm: Norm) -> Result<TradeoffCurve> {
    if eta_grid.is_empty() {
        return Err(Error::InvalidParameter("empty eta grid".into()));
    }
    Ok(TradeoffCurve {
        points: select_branch(&ml_sweep(pair, eta_grid, norm)?),
        norm,
        pair_digest: pair_digest(pair),
        omitted: Vec::new(),
        best_effort: false,
    })
}

/// Single-threshold tradeoff curve.
pub fn linear_curve(pair: &HypothesisPair, y_grid: &[f64], norm: Norm) -> Result<TradeoffCurve> {
    if y_grid.is_empty() {
        return Err(Error::InvalidParameter("empty boundary grid".into()));
    }
    Ok(TradeoffCurve {
        points: select_branch(&linear_sweep(pair, y_grid, norm)?),
        norm,
        pair_digest: pair_digest(pair),
        omitted: Vec::new(),
        best_effort: false,
    })
}

/// Settings of the constrained-minimum solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralSolverConfig {
    /// Points per axis of the stage-1 grid.
    pub grid: usize,
    /// Contour vertices refined in stage 2.
    pub top_k: usize,
    pub max_iter: usize,
    pub min_step: f64,
    pub accuracy_tol: f64,
    /// Overrides the default search interval.
    pub interval: Option<(f64, f64)>,
    /// Restarts of the penalty method used for more than two boundaries.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for GeneralSolverConfig {
    fn default() -> Self {
        Self {
            grid: 600,
            top_k: 5,
            max_iter: 200,
            min_step: 1e-10,
            accuracy_tol: 1e-6,
            interval: None,
            restarts: 20,
            seed: 0,
        }
    }
}

/// Solves `min S(y) s.t. A(y) = zeta` over classifiers with a fixed number
/// of boundaries. Grid data is built once and shared by all `zeta`.
#[derive(Debug, Clone)]
pub struct GeneralSolver {
    pair: HypothesisPair,
    norm: Norm,
    n: usize,
    cfg: GeneralSolverConfig,
    interval: (f64, f64),
    spacing: f64,
    field: Option<GridField>,
    y_star: BoundarySet,
    a_max: f64,
}

impl GeneralSolver {
    pub fn new(pair: &HypothesisPair, n_boundaries: usize, norm: Norm, cfg: GeneralSolverConfig) -> Result<Self> {
        if n_boundaries == 0 {
            return Err(Error::InvalidParameter("at least one boundary is required".into()));
        }
        if cfg.grid < 3 {
            return Err(Error::InvalidParameter("grid needs at least 3 points per axis".into()));
        }
        let interval = cfg.interval.unwrap_or_else(|| default_search_interval(pair));
        if !(interval.0 < interval.1) {
            return Err(Error::EmptyInterval {
                lo: interval.0,
                hi: interval.1,
            });
        }
        let axis = linspace(interval.0, interval.1, cfg.grid);
        let spacing = axis[1] - axis[0];
        let ml = ml_boundaries(pair, 1.0)?.boundary_set();
        let y_star = pad_boundaries(&ml, n_boundaries, interval, pair)?;
        let a_max = accuracy(&y_star, pair).max(accuracy(&ml, pair));
        let field = (n_boundaries == 2).then(|| {
            let (p0, p1) = (pair.p0(), pair.p1());
            let f0: Vec<f64> = axis.iter().map(|&x| pair.h0().cdf(x)).collect();
            let f1: Vec<f64> = axis.iter().map(|&x| pair.h1().cdf(x)).collect();
            let nx = axis.len();
            let mut z = Vec::with_capacity(nx * nx);
            for i in 0..nx {
                for j in 0..nx {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    z.push(p0 * (f0[a] + 1.0 - f0[b]) + p1 * (f1[b] - f1[a]));
                }
            }
            GridField {
                xs: axis.clone(),
                ys: axis.clone(),
                z,
            }
        });
        Ok(Self {
            pair: pair.clone(),
            norm,
            n: n_boundaries,
            cfg,
            interval,
            spacing,
            field,
            y_star,
            a_max,
        })
    }

    /// Accuracy of the maximum-likelihood classifier, the largest attainable.
    pub fn a_max(&self) -> f64 {
        self.a_max
    }

    pub fn config(&self) -> &GeneralSolverConfig {
        &self.cfg
    }

    pub fn n_boundaries(&self) -> usize {
        self.n
    }

    fn point(&self, b: BoundarySet, zeta: f64) -> Result<TradeoffPoint> {
        Ok(TradeoffPoint {
            accuracy: accuracy(&b, &self.pair),
            sensitivity: sensitivity(&b, &self.pair, self.norm)?,
            boundaries: b,
            provenance: Provenance::ConstrainedMin { zeta },
        })
    }

    fn eval(&self, y: &[f64], o: Orientation) -> Result<(f64, f64, BoundarySet)> {
        let b = BoundarySet::from_unsorted(y.to_vec(), o)?;
        Ok((accuracy(&b, &self.pair), sensitivity(&b, &self.pair, self.norm)?, b))
    }

    /// Lowest-sensitivity classifier found with accuracy `zeta`.
    pub fn solve(&self, zeta: f64) -> Result<TradeoffPoint> {
        if !zeta.is_finite() || zeta > self.a_max + 1e-9 {
            return Err(Error::InfeasibleAccuracy {
                target: zeta,
                max: self.a_max,
            });
        }
        if zeta >= self.a_max - 1e-12 {
            return self.point(self.y_star.clone(), zeta);
        }
        // coincident boundaries classify everything as one label with zero sensitivity
        let centre = 0.5 * (self.interval.0 + self.interval.1);
        for label in [Hypothesis::H0, Hypothesis::H1] {
            if (zeta - self.pair.prior(label)).abs() <= 1e-12 && self.n % 2 == 0 {
                let b = BoundarySet::new(vec![centre; self.n], Orientation::with_first(label))?;
                return self.point(b, zeta);
            }
        }
        let best = match self.n {
            1 => self.solve_single(zeta)?,
            2 => self.solve_pair(zeta)?,
            _ => self.solve_penalty(zeta)?,
        };
        match best {
            Some(b) => self.point(b, zeta),
            None => Err(Error::Solver(format!("no feasible classifier found at accuracy {zeta}"))),
        }
    }

    fn solve_single(&self, zeta: f64) -> Result<Option<BoundarySet>> {
        let axis = linspace(self.interval.0, self.interval.1, self.cfg.grid);
        let mut best: Option<(f64, BoundarySet)> = None;
        for o in [Orientation::H0First, Orientation::H1First] {
            let r = |y: f64| accuracy(&BoundarySet::linear(y, o).expect("finite"), &self.pair) - zeta;
            let vals: Vec<f64> = axis.iter().map(|&y| r(y)).collect();
            for k in 0..axis.len() - 1 {
                if (vals[k] > 0.0) == (vals[k + 1] > 0.0) {
                    continue;
                }
                if let Some(y) = root::brent(r, axis[k], axis[k + 1], 1e-14, 200) {
                    let (_, s, b) = self.eval(&[y], o)?;
                    if best.as_ref().is_none_or(|(bs, _)| s < *bs) {
                        best = Some((s, b));
                    }
                }
            }
        }
        Ok(best.map(|(_, b)| b))
    }

    /// Moves coordinate `k` of `y` so that `A = zeta`, starting at its
    /// current value and expanding a bracket outwards.
    fn restore(&self, y: &[f64], o: Orientation, k: usize, zeta: f64) -> Option<Vec<f64>> {
        let r = |t: f64| {
            let mut v = y.to_vec();
            v[k] = t;
            let b = BoundarySet::from_unsorted(v, o).ok()?;
            Some(accuracy(&b, &self.pair) - zeta)
        };
        let t0 = y[k];
        let r0 = r(t0)?;
        if r0 == 0.0 {
            return Some(y.to_vec());
        }
        let g = {
            let b = BoundarySet::from_unsorted(y.to_vec(), o).ok()?;
            let order = sorted_index(y, k);
            boundary_gradient(&b, &self.pair)[order]
        };
        let dir = if (r0 > 0.0) == (g > 0.0) { -1.0 } else { 1.0 };
        let (lo_lim, hi_lim) = (self.interval.0, self.interval.1);
        let mut step = self.spacing.min(1.0) * 1e-3;
        let mut prev = t0;
        for _ in 0..80 {
            let t = (t0 + dir * step).clamp(lo_lim, hi_lim);
            let rt = r(t)?;
            if (rt > 0.0) != (r0 > 0.0) || rt == 0.0 {
                let (a, b) = if prev < t { (prev, t) } else { (t, prev) };
                let root = root::brent(|x| r(x).unwrap_or(f64::NAN), a, b, 1e-15 * t0.abs().max(1.0), 200)?;
                let mut v = y.to_vec();
                v[k] = root;
                return Some(v);
            }
            if t == lo_lim || t == hi_lim {
                return None;
            }
            prev = t;
            step *= 2.0;
        }
        None
    }

    /// Projects `y` onto `A = zeta` along the coordinate with the steepest
    /// accuracy slope.
    fn project(&self, y: &[f64], o: Orientation, zeta: f64) -> Option<Vec<f64>> {
        let b = BoundarySet::from_unsorted(y.to_vec(), o).ok()?;
        let g = boundary_gradient(&b, &self.pair);
        let mut order: Vec<usize> = (0..y.len()).collect();
        order.sort_by(|&a, &c| g[sorted_index(y, c)].abs().total_cmp(&g[sorted_index(y, a)].abs()));
        order.into_iter().find_map(|k| self.restore(y, o, k, zeta))
    }

    fn feasible(&self, y: &[f64], o: Orientation, zeta: f64) -> Option<(f64, BoundarySet)> {
        let (a, s, b) = self.eval(y, o).ok()?;
        ((a - zeta).abs() <= self.cfg.accuracy_tol).then_some((s, b))
    }

    /// Pattern search along the level set: step one boundary, restore
    /// feasibility with the other, accept on decrease.
    fn refine(&self, mut y: Vec<f64>, o: Orientation, zeta: f64) -> Option<(f64, Vec<f64>)> {
        let (_, mut s, _) = self.eval(&y, o).ok()?;
        let mut h = self.spacing;
        for _ in 0..self.cfg.max_iter {
            if h < self.cfg.min_step {
                break;
            }
            let b = BoundarySet::from_unsorted(y.clone(), o).ok()?;
            let g = boundary_gradient(&b, &self.pair);
            // step the boundary along which the level set runs most steeply
            let free = if g[0].abs() <= g[1].abs() { 0 } else { 1 };
            let solved = 1 - free;
            let mut improved = false;
            for dir in [1.0, -1.0] {
                let mut trial = y.clone();
                trial[free] += dir * h;
                let Some(t) = self.restore(&trial, o, solved, zeta) else {
                    continue;
                };
                let t = sort2(t);
                if let Ok((a, st, _)) = self.eval(&t, o) {
                    if st < s && (a - zeta).abs() <= self.cfg.accuracy_tol {
                        y = t;
                        s = st;
                        improved = true;
                        break;
                    }
                }
            }
            if improved {
                h = (h * 2.0).min(self.spacing * 8.0);
            } else {
                h *= 0.5;
            }
        }
        Some((s, y))
    }

    fn solve_pair(&self, zeta: f64) -> Result<Option<BoundarySet>> {
        let field = self.field.as_ref().expect("grid built for two boundaries");
        let mut cands: Vec<(f64, Vec<f64>, Orientation)> = Vec::new();
        for (level, o) in [(zeta, Orientation::H0First), (1.0 - zeta, Orientation::H1First)] {
            for seg in field.march(level) {
                for (x, y) in seg {
                    if x > y {
                        continue;
                    }
                    if let Ok((_, s, _)) = self.eval(&[x, y], o) {
                        cands.push((s, vec![x, y], o));
                    }
                }
            }
        }
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1[0].total_cmp(&b.1[0])).then(a.1[1].total_cmp(&b.1[1])));
        let sep = 5.0 * self.spacing;
        let mut starts: Vec<(Vec<f64>, Orientation)> = Vec::new();
        for (_, y, o) in cands {
            if starts.len() >= self.cfg.top_k {
                break;
            }
            let far = starts
                .iter()
                .all(|(z, oz)| *oz != o || (z[0] - y[0]).abs().max((z[1] - y[1]).abs()) > sep);
            if far {
                starts.push((y, o));
            }
        }
        // close to a_max the level set can shrink inside a single grid cell,
        // so also walk out from the optimum along each coordinate
        let top = self.y_star.boundaries();
        if top.len() == 2 {
            let o = self.y_star.orientation();
            for k in 0..2 {
                if let Some(y) = self.restore(top, o, k, zeta) {
                    starts.push((y, o));
                }
            }
        }
        let mut best: Option<(f64, BoundarySet)> = None;
        for (y, o) in starts {
            let Some(y) = self.project(&y, o, zeta) else {
                continue;
            };
            let Some((_, y)) = self.refine(sort2(y), o, zeta) else {
                continue;
            };
            if let Some((s, b)) = self.feasible(&y, o, zeta) {
                if best.as_ref().is_none_or(|(bs, _)| s < *bs) {
                    best = Some((s, b));
                }
            }
        }
        Ok(best.map(|(_, b)| b))
    }

    fn solve_penalty(&self, zeta: f64) -> Result<Option<BoundarySet>> {
        let (lo, hi) = self.interval;
        let width = hi - lo;
        let base = self.y_star.boundaries().to_vec();
        let mut best: Option<(f64, BoundarySet)> = None;
        for r in 0..self.cfg.restarts {
            let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed.wrapping_add(r as u64));
            let x0: Vec<f64> = base
                .iter()
                .map(|y| (y + 0.05 * width * (rng.random::<f64>() - 0.5)).clamp(lo, hi))
                .collect();
            for o in [Orientation::H0First, Orientation::H1First] {
                let mut x = x0.clone();
                for rho in [1e2, 1e4, 1e6, 1e8] {
                    let obj = |v: &[f64]| match self.eval(v, o) {
                        Ok((a, s, _)) => {
                            let out: f64 = v.iter().map(|t| (lo - t).max(0.0) + (t - hi).max(0.0)).sum();
                            s + rho * (a - zeta).powi(2) + rho * out * out
                        }
                        Err(_) => f64::INFINITY,
                    };
                    let opts = simplex::SimplexOptions {
                        initial_step: vec![0.02 * width; x.len()],
                        max_evals: 2000,
                        f_tol: 1e-14,
                        x_tol: 1e-10,
                    };
                    x = simplex::minimize(obj, &x, &opts).x;
                }
                let Some(y) = self.project(&x, o, zeta) else {
                    continue;
                };
                if let Some((s, b)) = self.feasible(&y, o, zeta) {
                    if best.as_ref().is_none_or(|(bs, _)| s < *bs) {
                        best = Some((s, b));
                    }
                }
            }
        }
        Ok(best.map(|(_, b)| b))
    }
}

/// Index of `y[k]` after sorting `y`.
fn sorted_index(y: &[f64], k: usize) -> usize {
    y.iter()
        .enumerate()
        .filter(|&(i, v)| v.total_cmp(&y[k]).is_lt() || (v == &y[k] && i < k))
        .count()
}

fn sort2(mut y: Vec<f64>) -> Vec<f64> {
    y.sort_by(f64::total_cmp);
    y
}

/// Pads a maximum-likelihood boundary set to `n` boundaries by appending
/// boundaries at the interval edge, where the densities carry no mass.
fn pad_boundaries(b: &BoundarySet, n: usize, interval: (f64, f64), pair: &HypothesisPair) -> Result<BoundarySet> {
    let mut y = b.boundaries().to_vec();
    let o = b.orientation();
    if y.len() > n {
        // keep the most accurate n-subset of consecutive roots
        let mut best: Option<(f64, BoundarySet)> = None;
        for start in 0..=y.len() - n {
            for orientation in [Orientation::H0First, Orientation::H1First] {
                let c = BoundarySet::new(y[start..start + n].to_vec(), orientation)?;
                let a = accuracy(&c, pair);
                if best.as_ref().is_none_or(|(ba, _)| a > *ba) {
                    best = Some((a, c));
                }
            }
        }
        return Ok(best.expect("at least one subset").1);
    }
    while y.len() < n {
        y.push(interval.1);
    }
    BoundarySet::new(y, o)
}

/// General-classifier tradeoff curve. Points where the solver fails are
/// omitted and listed in [`TradeoffCurve::omitted`].
pub fn general_curve(
    pair: &HypothesisPair,
    zeta_grid: &[f64],
    n_boundaries: usize,
    norm: Norm,
    cfg: GeneralSolverConfig,
) -> Result<TradeoffCurve> {
    if zeta_grid.is_empty() {
        return Err(Error::InvalidParameter("empty zeta grid".into()));
    }
    let solver = GeneralSolver::new(pair, n_boundaries, norm, cfg)?;
    if let Some(&z) = zeta_grid.iter().find(|&&z| z > solver.a_max() + 1e-9) {
        return Err(Error::InfeasibleAccuracy {
            target: z,
            max: solver.a_max(),
        });
    }
    let results = solve_many(&solver, zeta_grid);
    let mut points = Vec::new();
    let mut omitted = Vec::new();
    for (&zeta, r) in zeta_grid.iter().zip(results) {
        match r {
            Ok(p) => points.push(p),
            Err(e) => {
                log::warn!("omitting zeta = {zeta}: {e}");
                omitted.push(OmittedPoint {
                    zeta,
                    reason: e.to_string(),
                });
            }
        }
    }
    points.sort_by(|a, b| a.accuracy.total_cmp(&b.accuracy));
    points.dedup_by(|b, a| b.accuracy <= a.accuracy);
    Ok(TradeoffCurve {
        points,
        norm,
        pair_digest: pair_digest(pair),
        omitted,
        best_effort: n_boundaries > 2,
    })
}

/// Solves every `zeta` independently; results keep the grid order.
pub fn solve_many(solver: &GeneralSolver, zetas: &[f64]) -> Vec<Result<TradeoffPoint>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        zetas.par_iter().map(|&z| solver.solve(z)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        zetas.iter().map(|&z| solver.solve(z)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1() -> HypothesisPair {
        HypothesisPair::gaussian(0.0, 9.0, 9.0, 4.0).unwrap()
    }

    #[test]
    fn ml_curve_points_match_table1() {
        let p = table1();
        let c = ml_curve(&p, &default_eta_grid(), Norm::Inf).unwrap();
        let top = c.points.last().unwrap();
        assert_eq!(top.provenance, Provenance::MlSweep { eta: 1.0 });
        assert!((top.accuracy - 0.7891).abs() < 5e-4);
        assert!((top.sensitivity - 0.0334).abs() < 1e-3);
        let green = ml_sweep(&p, &[0.4603], Norm::Inf).unwrap();
        assert!((green[0].accuracy - 0.7766).abs() < 5e-4);
        assert!((green[0].sensitivity - 0.0201).abs() < 1e-3);
        // the kept side passes below the green dot's sensitivity
        assert!(c.points.iter().any(|q| q.sensitivity <= green[0].sensitivity + 1e-4));
        assert!(c.points.windows(2).all(|w| w[0].accuracy < w[1].accuracy));
        assert!(c.points.iter().all(|q| q.boundaries.len() == 2));
    }

    #[test]
    fn ml_single_eta() {
        let p = table1();
        let c = ml_curve(&p, &[1.0], Norm::Inf).unwrap();
        assert_eq!(c.points.len(), 1);
        assert!(ml_curve(&p, &[], Norm::Inf).is_err());
    }

    #[test]
    fn linear_curve_peak_and_tails() {
        let p = table1();
        let c = linear_curve(&p, &default_y_grid(&p), Norm::Inf).unwrap();
        let top = c.points.last().unwrap();
        let opt = optimal_linear_boundary(&p).unwrap();
        assert!((top.boundaries.boundaries()[0] - 3.65).abs() < 0.01);
        assert_eq!(top.accuracy, opt.accuracy);
        let far = linear_sweep(&p, &[-1e4, 1e4], Norm::Inf).unwrap();
        for q in far {
            assert!((q.accuracy - 0.5).abs() < 1e-12);
            assert!(q.sensitivity < 1e-12);
        }
        let sym = HypothesisPair::gaussian(-1.0, 2.0, 1.0, 2.0).unwrap();
        let q = &linear_sweep(&sym, &[0.0], Norm::Inf).unwrap()[0];
        assert!((q.accuracy - crate::densities::std_normal_cdf(0.5)).abs() < 1e-14);
    }

    #[test]
    fn general_endpoints() {
        let p = table1();
        let s = GeneralSolver::new(&p, 2, Norm::Inf, GeneralSolverConfig::default()).unwrap();
        let top = s.solve(s.a_max()).unwrap();
        assert!((top.boundaries.boundaries()[0] - 3.65).abs() < 0.01);
        assert!((top.sensitivity - 0.0334).abs() < 1e-3);
        let bottom = s.solve(0.5).unwrap();
        assert_eq!(bottom.sensitivity, 0.0);
        assert!(matches!(s.solve(0.9), Err(Error::InfeasibleAccuracy { .. })));
    }

    #[test]
    fn general_point_is_feasible_and_below_ml() {
        let p = table1();
        let s = GeneralSolver::new(&p, 2, Norm::Inf, GeneralSolverConfig::default()).unwrap();
        for eta in [0.2, 0.4603, 0.8, 1.5] {
            let ml = &ml_sweep(&p, &[eta], Norm::Inf).unwrap()[0];
            let g = s.solve(ml.accuracy).unwrap();
            assert!((g.accuracy - ml.accuracy).abs() <= 1e-6);
            assert!(g.sensitivity <= ml.sensitivity + 1e-6, "eta {eta}: {} > {}", g.sensitivity, ml.sensitivity);
        }
    }

    #[test]
    fn general_single_boundary_matches_linear() {
        let p = table1();
        let cfg = GeneralSolverConfig {
            grid: 2001,
            ..GeneralSolverConfig::default()
        };
        let s = GeneralSolver::new(&p, 1, Norm::Inf, cfg).unwrap();
        let lin = &linear_sweep(&p, &[0.0], Norm::Inf).unwrap()[0];
        let g = s.solve(lin.accuracy).unwrap();
        assert!((g.accuracy - lin.accuracy).abs() < 1e-9);
        assert!(g.sensitivity <= lin.sensitivity + 1e-9);
    }

    #[test]
    fn general_three_boundaries_best_effort() {
        let p = table1();
        let cfg = GeneralSolverConfig {
            restarts: 3,
            ..GeneralSolverConfig::default()
        };
        let c = general_curve(&p, &[0.7, 0.75], 3, Norm::Two, cfg).unwrap();
        assert!(c.best_effort);
        for q in &c.points {
            assert_eq!(q.boundaries.len(), 3);
            assert!(q.provenance == Provenance::ConstrainedMin { zeta: 0.7 } || (q.accuracy - 0.75).abs() < 1e-6);
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let p = table1();
        let c = ml_curve(&p, &[0.5, 1.0], Norm::Inf).unwrap();
        let csv = c.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("accuracy,sensitivity,y1,y2,provenance"));
        assert_eq!(lines.count(), c.points.len());
        assert_eq!(pair_digest(&p), pair_digest(&table1()));
        assert_ne!(pair_digest(&p), pair_digest(&HypothesisPair::gaussian(0.0, 9.0, 9.0, 4.5).unwrap()));
    }
}
