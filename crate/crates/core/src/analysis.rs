//! Numerical experiments built on the flows: sampled index-1 region
//! certificates, Lyapunov and tracking diagnostics, basin maps, limit cycle
//! measurement and the global convergence benchmark.

use std::collections::VecDeque;
use std::f64::consts::PI;

use nalgebra::{DVector, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flows::{self, Dynamics, IntegratorConfig, StopEvent, Trajectory};
use crate::landscape::Landscape;
use crate::reduced;
use crate::singularity::SingularityReport;
use crate::spectral::lowest_pairs;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    /// Gradient-norm level `L`.
    pub level: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Cells per axis.
    pub resolution: Vec<usize>,
    pub seed: Vec<f64>,
}

impl RegionSpec {
    /// Square box `[-half, half]^n` seeded at `seed`.
    pub fn square(level: f64, half: f64, resolution: usize, seed: &[f64]) -> Self {
        let n = seed.len();
        RegionSpec {
            level,
            lo: vec![-half; n],
            hi: vec![half; n],
            resolution: vec![resolution; n],
            seed: seed.to_vec(),
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if !(self.level > 0.0 && self.level.is_finite()) {
            return Err(Error::InvalidInput(format!("level must be positive (got {})", self.level)));
        }
        if self.lo.len() != dim || self.hi.len() != dim || self.resolution.len() != dim || self.seed.len() != dim {
            return Err(Error::InvalidInput(format!("region spec must have dimension {dim}")));
        }
        for k in 0..dim {
            if !(self.lo[k] < self.hi[k]) {
                return Err(Error::InvalidInput(format!("empty box along axis {k}")));
            }
            if self.resolution[k] < 8 {
                return Err(Error::InvalidInput(format!(
                    "resolution must be at least 8 per axis (axis {k} has {})",
                    self.resolution[k]
                )));
            }
            if !(self.seed[k] >= self.lo[k] && self.seed[k] <= self.hi[k]) {
                return Err(Error::InvalidInput("seed lies outside the box".into()));
            }
        }
        Ok(())
    }

    pub fn center(&self, cell: &[usize]) -> DVector<f64> {
        DVector::from_fn(cell.len(), |k, _| {
            let h = (self.hi[k] - self.lo[k]) / self.resolution[k] as f64;
            self.lo[k] + (cell[k] as f64 + 0.5) * h
        })
    }
}

/// Result of a sampled check of the index-1 condition on a gradient-norm
/// sublevel component. Only meaningful when `boundary_touch` is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCertificate {
    pub spec: RegionSpec,
    pub seed_cell: Vec<usize>,
    pub cells: Vec<Vec<usize>>,
    pub index1_everywhere: bool,
    /// `min(-lambda1, lambda2)` minimized over the component.
    pub min_margin: f64,
    pub boundary_touch: bool,
}

impl RegionCertificate {
    pub fn valid(&self) -> bool {
        self.index1_everywhere && !self.boundary_touch
    }

    pub fn centers(&self) -> Vec<DVector<f64>> {
        self.cells.iter().map(|c| self.spec.center(c)).collect()
    }
}

fn flat(cell: &[usize], res: &[usize]) -> usize {
    cell.iter().zip(res).fold(0, |acc, (c, r)| acc * r + c)
}

pub fn certify_region<L: Landscape + ?Sized>(model: &L, spec: &RegionSpec) -> Result<RegionCertificate> {
    let n = model.dim();
    spec.validate(n)?;
    let res = &spec.resolution;
    let seed_cell: Vec<usize> = (0..n)
        .map(|k| {
            let h = (spec.hi[k] - spec.lo[k]) / res[k] as f64;
            (((spec.seed[k] - spec.lo[k]) / h).floor() as usize).min(res[k] - 1)
        })
        .collect();
    let g0 = model.gradient(&spec.center(&seed_cell)).norm();
    if !(g0 <= spec.level) {
        return Err(Error::SeedOutsideSublevel {
            grad_norm: g0,
            level: spec.level,
        });
    }

    let total: usize = res.iter().product();
    let mut seen = vec![false; total];
    seen[flat(&seed_cell, res)] = true;
    let mut queue = VecDeque::from([seed_cell.clone()]);
    let mut cells = Vec::new();
    let mut index1 = true;
    let mut margin = f64::INFINITY;
    let mut touch = false;
    while let Some(c) = queue.pop_front() {
        let s = lowest_pairs(&model.hessian(&spec.center(&c)));
        index1 &= s.lambda1 < 0.0 && s.lambda2 > 0.0;
        margin = margin.min(s.margin());
        touch |= c.iter().zip(res).any(|(&i, &r)| i == 0 || i + 1 == r);
        for k in 0..n {
            for up in [false, true] {
                if (!up && c[k] == 0) || (up && c[k] + 1 == res[k]) {
                    continue;
                }
                let mut nb = c.clone();
                nb[k] = if up { c[k] + 1 } else { c[k] - 1 };
                let id = flat(&nb, res);
                if seen[id] {
                    continue;
                }
                seen[id] = true;
                if model.gradient(&spec.center(&nb)).norm() <= spec.level {
                    queue.push_back(nb);
                }
            }
        }
        cells.push(c);
    }
    cells.sort();
    Ok(RegionCertificate {
        spec: spec.clone(),
        seed_cell,
        cells,
        index1_everywhere: index1,
        min_margin: margin,
        boundary_touch: touch,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovReport {
    pub passed: bool,
    pub monotone: bool,
    /// Average decay rate of `|grad E|^2` over the checked samples.
    pub rate: f64,
    /// Decay rate over the second half (in time) of the checked samples.
    pub tail_rate: f64,
    /// `2 min_k min(-lambda1, lambda2)` over the checked samples.
    pub bound: f64,
    pub samples_used: usize,
    /// True when the trajectory left the index-1 region and only a prefix was checked.
    pub partial: bool,
}

const MONOTONE_SLACK: f64 = 1e-8;

pub fn lyapunov_check(traj: &Trajectory) -> LyapunovReport {
    let prefix = traj
        .samples
        .iter()
        .take_while(|s| s.lambda1 < 0.0 && s.lambda2 > 0.0)
        .count();
    let s = &traj.samples[..prefix];
    let partial = prefix < traj.samples.len();
    let monotone = s.windows(2).all(|w| w[1].grad_norm <= w[0].grad_norm + MONOTONE_SLACK);
    let bound = 2.0 * s.iter().map(|p| (-p.lambda1).min(p.lambda2)).fold(f64::INFINITY, f64::min);
    let rate_between = |a: &flows::Sample, b: &flows::Sample| {
        2.0 * (a.grad_norm / b.grad_norm).ln() / (b.t - a.t)
    };
    if prefix < 10 {
        return LyapunovReport {
            passed: false,
            monotone,
            rate: f64::NAN,
            tail_rate: f64::NAN,
            bound,
            samples_used: prefix,
            partial,
        };
    }
    let (first, last) = (&s[0], &s[prefix - 1]);
    let rate = rate_between(first, last);
    let t_mid = 0.5 * (first.t + last.t);
    let mid = s.iter().find(|p| p.t >= t_mid).unwrap_or(first);
    let tail_rate = rate_between(mid, last);
    LyapunovReport {
        passed: monotone && rate >= 0.95 * bound,
        monotone,
        rate,
        tail_rate,
        bound,
        samples_used: prefix,
        partial,
    }
}

/// Largest orientation error `|v - v1(x)|` (up to sign) along a trajectory.
pub fn gad_tracking_check(traj: &Trajectory) -> f64 {
    traj.samples.iter().map(|s| s.v_err).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    /// Uniform random displacement of each node, as a fraction of the spacing.
    #[serde(default)]
    pub jitter: f64,
    #[serde(default)]
    pub seed: u64,
}

impl GridSpec {
    pub fn new(lo: [f64; 2], hi: [f64; 2], nx: usize, ny: usize) -> Self {
        GridSpec {
            lo,
            hi,
            nx,
            ny,
            jitter: 0.0,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 nodes per axis".into()));
        }
        if !(self.lo[0] < self.hi[0] && self.lo[1] < self.hi[1]) {
            return Err(Error::InvalidInput("grid box is empty".into()));
        }
        if !(0.0..=0.5).contains(&self.jitter) {
            return Err(Error::InvalidInput("jitter must lie in [0, 0.5]".into()));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        axis(self.lo[0], self.hi[0], self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        axis(self.lo[1], self.hi[1], self.ny)
    }

    /// Initial condition of node `(i, j)`.
    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        let hx = (self.hi[0] - self.lo[0]) / (self.nx - 1) as f64;
        let hy = (self.hi[1] - self.lo[1]) / (self.ny - 1) as f64;
        let mut p = [self.lo[0] + i as f64 * hx, self.lo[1] + j as f64 * hy];
        if self.jitter > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ ((j * self.nx + i) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            p[0] += self.jitter * hx * rng.random_range(-1.0..1.0);
            p[1] += self.jitter * hy * rng.random_range(-1.0..1.0);
        }
        p
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + i as f64 * (hi - lo) / (n - 1) as f64).collect()
}

/// Label codes used in basin maps.
pub const LABELS: [&str; 7] = [
    "ConvergedToSaddle",
    "ConvergedToCritical",
    "SingularityApproach",
    "BlowUp",
    "DomainExit",
    "MaxTime",
    "Failed",
];

pub fn label_code(tag: &str) -> u8 {
    LABELS.iter().position(|l| *l == tag).unwrap_or(6) as u8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinCell {
    pub i: usize,
    pub j: usize,
    pub x0: [f64; 2],
    pub label: u8,
    pub x_end: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinMap {
    pub grid: GridSpec,
    pub dynamics: Dynamics,
    /// Row-major: cell `(i, j)` is at `j * nx + i`.
    pub cells: Vec<BasinCell>,
}

impl BasinMap {
    pub fn cell(&self, i: usize, j: usize) -> &BasinCell {
        &self.cells[j * self.grid.nx + i]
    }

    pub fn count(&self, label: u8) -> usize {
        self.cells.iter().filter(|c| c.label == label).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,label\n");
        for c in &self.cells {
            out.push_str(&format!("{:.16e},{:.16e},{}\n", c.x0[0], c.x0[1], c.label));
        }
        out
    }

    pub fn legend_json() -> String {
        let map: serde_json::Map<String, serde_json::Value> = LABELS
            .iter()
            .enumerate()
            .map(|(k, l)| (k.to_string(), serde_json::Value::from(*l)))
            .collect();
        serde_json::to_string_pretty(&map).expect("legend serialization cannot fail")
    }
}

fn scan_cell<L: Landscape + ?Sized>(
    model: &L,
    dynamics: Dynamics,
    grid: &GridSpec,
    cfg: &IntegratorConfig,
    k: usize,
) -> BasinCell {
    let (i, j) = (k % grid.nx, k / grid.nx);
    let x0 = grid.point(i, j);
    let result = flows::integrate(model, dynamics, &DVector::from_column_slice(&x0), None, cfg);
    match result {
        Ok(t) => BasinCell {
            i,
            j,
            x0,
            label: label_code(t.stop.tag()),
            x_end: t.stop.x().to_vec(),
            error: None,
        },
        Err(e) => BasinCell {
            i,
            j,
            x0,
            label: 6,
            x_end: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Integrates one trajectory per grid node and labels it by its stop event.
/// Per-node failures are recorded with label 6.
pub fn basin_scan<L: Landscape + ?Sized>(
    model: &L,
    dynamics: Dynamics,
    grid: &GridSpec,
    cfg: &IntegratorConfig,
) -> Result<BasinMap> {
    if model.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "basin scans need a 2D model (got dimension {})",
            model.dim()
        )));
    }
    grid.validate()?;
    cfg.validate()?;
    let total = grid.nx * grid.ny;
    #[cfg(feature = "parallel")]
    let cells = {
        use rayon::prelude::*;
        (0..total)
            .into_par_iter()
            .map(|k| scan_cell(model, dynamics, grid, cfg, k))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let cells = (0..total).map(|k| scan_cell(model, dynamics, grid, cfg, k)).collect();
    Ok(BasinMap {
        grid: grid.clone(),
        dynamics,
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CycleOptions {
    /// Burn-in time in units of `eps`.
    pub burn_in: f64,
    /// Measurement window in units of `eps`.
    pub window: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Initial position angle in the singular plane.
    pub theta0: f64,
    /// Largest tolerated relative anisotropy of the cubic matrix.
    pub max_anisotropy: f64,
}

impl Default for CycleOptions {
    fn default() -> Self {
        CycleOptions {
            burn_in: 50.0,
            window: 100.0,
            rtol: 1e-10,
            atol: 1e-13,
            theta0: 0.0,
            max_anisotropy: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleMeasurement {
    pub z: Vec<f64>,
    pub eps: f64,
    pub burn_in: f64,
    pub window: f64,
    pub r_mean: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub predicted: f64,
    pub width: f64,
    /// Gradient angle relative to the rotation part of `A`.
    pub alpha_eff: f64,
    /// `|A - conformal part| / |conformal part|`.
    pub anisotropy: f64,
    pub samples: usize,
}

/// Conformal part `d R(t)` of a 2x2 matrix and the relative size of the rest.
fn conformal_part(a: &Matrix2<f64>) -> (f64, f64, f64) {
    let p = 0.5 * (a[(0, 0)] + a[(1, 1)]);
    let q = 0.5 * (a[(1, 0)] - a[(0, 1)]);
    let d = p.hypot(q);
    let rest = a - Matrix2::new(p, -q, q, p);
    (d, q.atan2(p), rest.norm() / (d * 2f64.sqrt()).max(f64::MIN_POSITIVE))
}

/// Radius of the stable orbit around a located singularity, using the
/// conformal part `d R(t)` of its cubic matrix: returns
/// `(radius, effective alpha, anisotropy, stable reduced angle omega0)`.
pub fn cycle_prediction(report: &SingularityReport, eps: f64) -> Result<(f64, f64, f64, f64)> {
    let (d, t, aniso) = conformal_part(&report.a_matrix());
    if !(d > 0.0) {
        return Err(Error::Domain("cubic matrix has no rotation part".into()));
    }
    let g = report.grad_norm;
    let alpha = wrap(report.alpha - t);
    let fp = reduced::fixed_points(alpha)?;
    let eps_eff = eps * (g / d).sqrt();
    let radius = reduced::predicted_radius(alpha, eps_eff)?;
    let omega = match fp.stable_branch {
        reduced::Branch::Plus => fp.omega0_plus,
        _ => fp.omega0_minus,
    };
    Ok((radius, alpha, aniso, omega + t))
}

fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

/// Runs GAD from the reduced fixed point around `center` and measures the
/// distance to the center over a window after a burn-in.
pub fn measure_cycle<L: Landscape + ?Sized>(
    model: &L,
    center: &SingularityReport,
    eps: f64,
    opts: &CycleOptions,
) -> Result<CycleMeasurement> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be positive (got {eps})")));
    }
    let n = model.dim();
    let z = center.z();
    if z.len() != n {
        return Err(Error::InvalidInput("center dimension does not match the model".into()));
    }
    let (predicted, alpha_eff, anisotropy, omega) = cycle_prediction(center, eps)?;
    if anisotropy > opts.max_anisotropy {
        return Err(Error::Domain(format!(
            "cubic matrix is too anisotropic for an orbit prediction ({anisotropy:.3})"
        )));
    }
    let frame = center.frame_matrix();
    let e1 = frame.row(0).transpose();
    let e2 = frame.row(1).transpose();
    let th = opts.theta0;
    let phi = 0.5 * (omega + th);
    let x0 = &z + (&e1 * th.cos() + &e2 * th.sin()) * predicted;
    let v0 = &e1 * phi.cos() + &e2 * phi.sin();

    let burn = opts.burn_in * eps;
    let window = opts.window * eps;
    let cfg = IntegratorConfig {
        dt: eps / 100.0,
        dt_max: eps / 20.0,
        rtol: opts.rtol,
        atol: opts.atol,
        t_max: burn + window,
        tol_g: f64::MIN_POSITIVE,
        eps,
        r_max: f64::MAX,
        ..Default::default()
    };
    let traj = flows::integrate(model, Dynamics::Gad, &x0, Some(&v0), &cfg)?;
    let limit = 10.0 * predicted;
    let dist: Vec<(f64, f64)> = traj
        .samples
        .iter()
        .map(|s| (s.t, (DVector::from_column_slice(&s.x) - &z).norm()))
        .collect();
    if let Some(&(_, far)) = dist.iter().find(|(_, r)| *r > limit) {
        return Err(Error::NoCycle { distance: far, limit });
    }
    if !matches!(traj.stop, StopEvent::MaxTime { .. }) {
        return Err(Error::NoCycle {
            distance: (DVector::from_column_slice(traj.stop.x()) - &z).norm(),
            limit,
        });
    }
    let win: Vec<(f64, f64)> = dist.into_iter().filter(|(t, _)| *t >= burn).collect();
    if win.len() < 2 {
        return Err(Error::InvalidInput("measurement window holds fewer than two samples".into()));
    }
    let mut area = 0.0;
    for w in win.windows(2) {
        area += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
    }
    let span = win[win.len() - 1].0 - win[0].0;
    let r_min = win.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let r_max = win.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(CycleMeasurement {
        z: z.iter().cloned().collect(),
        eps,
        burn_in: burn,
        window,
        r_mean: (area / span).clamp(r_min, r_max),
        r_min,
        r_max,
        predicted,
        width: r_max - r_min,
        alpha_eff,
        anisotropy,
        samples: win.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRun {
    pub x0: Vec<f64>,
    pub stop: StopEvent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub radius: f64,
    pub eps: f64,
    pub total: usize,
    pub converged: usize,
    pub fraction: f64,
    pub runs: Vec<BenchmarkRun>,
    /// Runs that did not end in `ConvergedToSaddle`.
    pub failures: Vec<BenchmarkRun>,
}

/// `n` points filling the disk of radius `r` (sunflower pattern).
pub fn sunflower(n: usize, r: f64) -> Vec<[f64; 2]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let rho = r * ((k as f64 + 0.5) / n as f64).sqrt();
            let a = k as f64 * golden;
            [rho * a.cos(), rho * a.sin()]
        })
        .collect()
}

/// Samples the hypotheses of the global convergence result on a 2D model:
/// index 1 on the disk of radius `3r` and a gradient norm on the circle of
/// radius `3r` exceeding its values at the starting points.
pub fn check_global_hypotheses<L: Landscape + ?Sized>(model: &L, r: f64, starts: &[[f64; 2]]) -> Result<()> {
    let outer = 3.0 * r;
    let m = 41;
    for i in 0..m {
        for j in 0..m {
            let p = [
                -outer + 2.0 * outer * i as f64 / (m - 1) as f64,
                -outer + 2.0 * outer * j as f64 / (m - 1) as f64,
            ];
            if p[0].hypot(p[1]) > outer {
                continue;
            }
            let s = lowest_pairs(&model.hessian(&DVector::from_column_slice(&p)));
            if !(s.lambda1 < 0.0 && s.lambda2 > 0.0) {
                return Err(Error::HypothesisViolated(format!(
                    "Morse index {} at ({:.4}, {:.4})",
                    s.index, p[0], p[1]
                )));
            }
        }
    }
    let start_max = starts
        .iter()
        .map(|p| model.gradient(&DVector::from_column_slice(p)).norm())
        .fold(0.0, f64::max);
    let ring_min = (0..360)
        .map(|k| {
            let a = k as f64 * PI / 180.0;
            model.gradient(&DVector::from_vec(vec![outer * a.cos(), outer * a.sin()])).norm()
        })
        .fold(f64::INFINITY, f64::min);
    if !(ring_min > start_max) {
        return Err(Error::HypothesisViolated(format!(
            "gradient norm on radius {outer} ({ring_min:.4}) does not exceed its value at the starts ({start_max:.4})"
        )));
    }
    Ok(())
}

/// GAD from `n` points in the disk of radius `r` with `v0 = v1(x0)`, after a
/// sampled check of the global index-1 and coercivity hypotheses.
pub fn benchmark_global<L: Landscape + ?Sized>(
    model: &L,
    r: f64,
    n: usize,
    cfg: &IntegratorConfig,
) -> Result<BenchmarkReport> {
    if model.dim() != 2 {
        return Err(Error::InvalidInput("benchmark needs a 2D model".into()));
    }
    if !(r > 0.0) || n == 0 {
        return Err(Error::InvalidInput("benchmark needs r > 0 and at least one point".into()));
    }
    cfg.validate()?;
    let starts = sunflower(n, r);
    check_global_hypotheses(model, r, &starts)?;
    let mut runs = Vec::with_capacity(n);
    for p in &starts {
        let x0 = DVector::from_column_slice(p);
        let stop = flows::integrate(model, Dynamics::Gad, &x0, None, cfg)?.stop;
        runs.push(BenchmarkRun { x0: p.to_vec(), stop });
    }
    let failures: Vec<BenchmarkRun> = runs
        .iter()
        .filter(|r| !matches!(r.stop, StopEvent::ConvergedToSaddle { .. }))
        .cloned()
        .collect();
    let converged = n - failures.len();
    Ok(BenchmarkReport {
        radius: r,
        eps: cfg.eps,
        total: n,
        converged,
        fraction: converged as f64 / n as f64,
        runs,
        failures,
    })
}

/// Orientation in the singular plane with in-plane angle `phi`.
pub fn plane_orientation(report: &SingularityReport, phi: f64) -> DVector<f64> {
    let f = report.frame_matrix();
    (f.row(0) * phi.cos() + f.row(1) * phi.sin()).transpose()
}
