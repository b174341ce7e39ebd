//! Gradient flow, ISD and GAD vector fields with event-aware integration.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::Landscape;
use crate::ode::{self, Control, Method, Outcome, StepperConfig};
use crate::spectral::{align_sign, lowest_pairs, SpectralInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dynamics {
    #[serde(rename = "grad")]
    Gradient,
    #[serde(rename = "isd")]
    Isd,
    #[serde(rename = "gad")]
    Gad,
}

impl std::str::FromStr for Dynamics {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grad" | "gradient" => Ok(Dynamics::Gradient),
            "isd" => Ok(Dynamics::Isd),
            "gad" => Ok(Dynamics::Gad),
            other => Err(Error::InvalidInput(format!(
                "unknown dynamics '{other}' (expected grad, isd or gad)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step (RK4) or initial step (RK45).
    pub dt: f64,
    pub atol: f64,
    pub rtol: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub t_max: f64,
    /// Convergence threshold on `|grad E|`.
    pub tol_g: f64,
    /// ISD stops once the spectral gap drops below this.
    pub tol_gap: f64,
    /// Domain radius.
    pub r_max: f64,
    /// GAD relaxation parameter.
    pub eps: f64,
    pub max_steps: usize,
    /// Record every k-th accepted step; 0 keeps only the endpoints.
    pub sample_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk45,
            dt: 1e-3,
            atol: 1e-10,
            rtol: 1e-8,
            dt_min: 1e-12,
            dt_max: 0.1,
            t_max: 100.0,
            tol_g: 1e-8,
            tol_gap: 1e-6,
            r_max: 10.0,
            eps: 0.1,
            max_steps: 2_000_000,
            sample_every: 1,
        }
    }
}

impl IntegratorConfig {
    /// Tight settings for resolving finite-time arrival at a singularity:
    /// the gap threshold is effectively disabled so the run ends only once
    /// the step size collapses.
    pub fn blowup_probe() -> Self {
        IntegratorConfig {
            atol: 1e-14,
            rtol: 1e-11,
            tol_gap: 1e-14,
            dt_min: 1e-12,
            dt_max: 0.01,
            t_max: 10.0,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("atol", self.atol),
            ("rtol", self.rtol),
            ("dt_min", self.dt_min),
            ("dt_max", self.dt_max),
            ("t_max", self.t_max),
            ("tol_g", self.tol_g),
            ("tol_gap", self.tol_gap),
            ("r_max", self.r_max),
            ("eps", self.eps),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "integrator {name} must be positive and finite (got {v})"
                )));
            }
        }
        if self.dt_min >= self.dt_max {
            return Err(Error::InvalidInput(format!(
                "integrator requires dt_min < dt_max (got {} >= {})",
                self.dt_min, self.dt_max
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput("integrator max_steps must be positive".into()));
        }
        Ok(())
    }

    fn stepper(&self) -> StepperConfig {
        StepperConfig {
            method: self.method,
            dt: self.dt,
            atol: self.atol,
            rtol: self.rtol,
            dt_min: self.dt_min,
            dt_max: self.dt_max,
            max_steps: self.max_steps,
        }
    }
}

/// A recorded state. For gradient flow and ISD `v` is the sign-aligned `v1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub grad_norm: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    /// `min |v -+ v1|` for GAD, zero otherwise.
    pub v_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "payload")]
pub enum StopEvent {
    ConvergedToSaddle { x: Vec<f64>, index: usize },
    ConvergedToCritical { x: Vec<f64>, index: usize },
    SingularityApproach { x: Vec<f64>, gap: f64 },
    BlowUp {
        x: Vec<f64>,
        t_star: f64,
        speed: f64,
        gap: f64,
    },
    DomainExit { x: Vec<f64> },
    MaxTime { x: Vec<f64> },
}

impl StopEvent {
    pub fn tag(&self) -> &'static str {
        match self {
            StopEvent::ConvergedToSaddle { .. } => "ConvergedToSaddle",
            StopEvent::ConvergedToCritical { .. } => "ConvergedToCritical",
            StopEvent::SingularityApproach { .. } => "SingularityApproach",
            StopEvent::BlowUp { .. } => "BlowUp",
            StopEvent::DomainExit { .. } => "DomainExit",
            StopEvent::MaxTime { .. } => "MaxTime",
        }
    }

    /// Final position carried by the event.
    pub fn x(&self) -> &[f64] {
        match self {
            StopEvent::ConvergedToSaddle { x, .. }
            | StopEvent::ConvergedToCritical { x, .. }
            | StopEvent::SingularityApproach { x, .. }
            | StopEvent::BlowUp { x, .. }
            | StopEvent::DomainExit { x }
            | StopEvent::MaxTime { x } => x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub stop: StopEvent,
    pub steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least one sample")
    }
}

pub fn gradient_flow_field<L: Landscape + ?Sized>(model: &L, x: &DVector<f64>) -> DVector<f64> {
    -model.gradient(x)
}

/// `-(I - 2 v v^T) g`.
fn reflect(g: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    -(g - v * (2.0 * v.dot(g)))
}

/// ISD field at `x`; `v1` is aligned with `v_prev` when given.
pub fn isd_field<L: Landscape + ?Sized>(
    model: &L,
    x: &DVector<f64>,
    v_prev: Option<&DVector<f64>>,
    tol_gap: f64,
) -> Result<(DVector<f64>, SpectralInfo)> {
    let mut spec = lowest_pairs(&model.hessian(x));
    if spec.gap <= tol_gap {
        return Err(Error::Degenerate {
            gap: spec.gap,
            threshold: tol_gap,
        });
    }
    if let Some(p) = v_prev {
        spec.v1 = align_sign(&spec.v1, p);
    }
    let f = reflect(&model.gradient(x), &spec.v1);
    Ok((f, spec))
}

/// GAD right-hand side `(x', v')` for a unit orientation `v`.
pub fn gad_field<L: Landscape + ?Sized>(
    model: &L,
    x: &DVector<f64>,
    v: &DVector<f64>,
    eps: f64,
) -> (DVector<f64>, DVector<f64>) {
    let xdot = reflect(&model.gradient(x), v);
    let hv = model.hessian(x) * v;
    let vdot = -(&hv - v * v.dot(&hv)) / (eps * eps);
    (xdot, vdot)
}

/// Right-hand side on the stacked state `[x; v]`.
pub fn gad_rhs<'a, L: Landscape + ?Sized>(
    model: &'a L,
    eps: f64,
) -> impl Fn(f64, &DVector<f64>) -> DVector<f64> + 'a {
    move |_t, y| {
        let n = model.dim();
        let x = y.rows(0, n).into_owned();
        let v = y.rows(n, n).into_owned();
        let (xd, vd) = gad_field(model, &x, &v, eps);
        let mut out = DVector::zeros(2 * n);
        out.rows_mut(0, n).copy_from(&xd);
        out.rows_mut(n, n).copy_from(&vd);
        out
    }
}

/// Closed-form Jacobian `-(I - 2 v1 v1^T) H` of the ISD field at an index-1 saddle.
pub fn isd_jacobian_at_saddle<L: Landscape + ?Sized>(
    model: &L,
    x: &DVector<f64>,
    cfg: &IntegratorConfig,
) -> Result<DMatrix<f64>> {
    let g = model.gradient(x).norm();
    if g >= cfg.tol_g {
        return Err(Error::NotASaddle(format!("|grad E| = {g:e} >= tol_g = {:e}", cfg.tol_g)));
    }
    let h = model.hessian(x);
    let s = lowest_pairs(&h);
    if s.index != 1 {
        return Err(Error::NotASaddle(format!("Morse index is {}", s.index)));
    }
    if s.gap <= cfg.tol_gap {
        return Err(Error::NotASaddle(format!("spectral gap {:e} too small", s.gap)));
    }
    let n = model.dim();
    let reflector = DMatrix::identity(n, n) - &s.v1 * s.v1.transpose() * 2.0;
    Ok(-(reflector * h))
}

/// Rate of change of the spectral gap, `d(l2 - l1)/dx_k = v2.T_k.v2 - v1.T_k.v1`.
fn gap_gradient<L: Landscape + ?Sized>(model: &L, x: &DVector<f64>, s: &SpectralInfo) -> Option<DVector<f64>> {
    let v2 = s.v2.as_ref()?;
    let t = model.third(x);
    let n = model.dim();
    Some(DVector::from_fn(n, |k, _| {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += t[(i, j, k)] * (v2[i] * v2[j] - s.v1[i] * s.v1[j]);
            }
        }
        acc
    }))
}

struct Eval {
    sample: Sample,
    spec: SpectralInfo,
    speed: f64,
}

fn evaluate<L: Landscape + ?Sized>(
    model: &L,
    dynamics: Dynamics,
    t: f64,
    y: &DVector<f64>,
    v_ref: &DVector<f64>,
    eps: f64,
) -> Eval {
    let n = model.dim();
    let x = y.rows(0, n).into_owned();
    let g = model.gradient(&x);
    let mut spec = lowest_pairs(&model.hessian(&x));
    spec.v1 = align_sign(&spec.v1, v_ref);
    let (v, v_err, xdot) = match dynamics {
        Dynamics::Gad => {
            let v = y.rows(n, n).into_owned();
            let err = (&v - &spec.v1).norm().min((&v + &spec.v1).norm());
            let xdot = reflect(&g, &v);
            let _ = eps;
            (v, err, xdot)
        }
        Dynamics::Isd => (spec.v1.clone(), 0.0, reflect(&g, &spec.v1)),
        Dynamics::Gradient => (spec.v1.clone(), 0.0, -g.clone()),
    };
    Eval {
        sample: Sample {
            t,
            x: x.iter().cloned().collect(),
            v: v.iter().cloned().collect(),
            grad_norm: g.norm(),
            lambda1: spec.lambda1,
            lambda2: spec.lambda2,
            gap: spec.gap,
            v_err,
        },
        speed: xdot.norm(),
        spec,
    }
}

fn sample_finite(s: &Sample) -> bool {
    s.x.iter().chain(&s.v).all(|c| c.is_finite())
        && s.grad_norm.is_finite()
        && s.lambda1.is_finite()
        && !s.lambda2.is_nan()
        && !s.gap.is_nan()
}

/// Classifies a sample against the non-horizon events, in priority order.
fn check_events(dynamics: Dynamics, s: &Sample, index: usize, cfg: &IntegratorConfig) -> Option<StopEvent> {
    if dynamics == Dynamics::Isd && s.gap < cfg.tol_gap {
        return Some(StopEvent::SingularityApproach {
            x: s.x.clone(),
            gap: s.gap,
        });
    }
    if s.grad_norm < cfg.tol_g {
        let x = s.x.clone();
        return Some(if index == 1 && s.gap > cfg.tol_gap {
            StopEvent::ConvergedToSaddle { x, index }
        } else {
            StopEvent::ConvergedToCritical { x, index }
        });
    }
    let r = s.x.iter().map(|c| c * c).sum::<f64>().sqrt();
    if r > cfg.r_max {
        return Some(StopEvent::DomainExit { x: s.x.clone() });
    }
    None
}

/// Largest |<v1_old, v1_new>| below which the ISD step is treated as a jump of
/// the lowest eigenvector (cosine of 45 degrees).
const JUMP_COS: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Integrates the selected dynamics from `x0`.
///
/// For GAD `v0` is the initial orientation (normalized; defaults to
/// `v1(x0)`); for ISD it only seeds the sign of `v1`.
pub fn integrate<L: Landscape + ?Sized>(
    model: &L,
    dynamics: Dynamics,
    x0: &DVector<f64>,
    v0: Option<&DVector<f64>>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let n = model.dim();
    if x0.len() != n {
        return Err(Error::InvalidInput(format!(
            "initial point has dimension {}, model has {n}",
            x0.len()
        )));
    }
    if x0.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("initial point"));
    }
    if let Some(v) = v0 {
        if v.len() != n || v.iter().any(|c| !c.is_finite()) || v.norm() == 0.0 {
            return Err(Error::InvalidInput(format!(
                "initial orientation must be a finite nonzero vector of length {n}"
            )));
        }
    }

    let spec0 = lowest_pairs(&model.hessian(x0));
    let v_seed = match v0 {
        Some(v) => v.normalize(),
        None => spec0.v1.clone(),
    };
    let y0 = match dynamics {
        Dynamics::Gad => {
            let mut y = DVector::zeros(2 * n);
            y.rows_mut(0, n).copy_from(x0);
            y.rows_mut(n, n).copy_from(&v_seed);
            y
        }
        _ => x0.clone(),
    };

    let first = evaluate(model, dynamics, 0.0, &y0, &v_seed, cfg.eps);
    let gap0 = first.sample.gap;
    let mut samples = vec![first.sample.clone()];
    if let Some(ev) = check_events(dynamics, &first.sample, first.spec.index, cfg) {
        return Ok(Trajectory {
            samples,
            stop: ev,
            steps: 0,
        });
    }

    let mut v_ref = first.spec.v1.clone();
    let mut last = first;
    let mut event: Option<StopEvent> = None;
    let mut failure: Option<f64> = None;
    let mut accepted = 0usize;
    let record = cfg.sample_every;

    let gad = gad_rhs(model, cfg.eps);
    let rhs = |t: f64, y: &DVector<f64>| -> DVector<f64> {
        match dynamics {
            Dynamics::Gradient => gradient_flow_field(model, y),
            Dynamics::Isd => {
                let s = lowest_pairs(&model.hessian(y));
                reflect(&model.gradient(y), &s.v1)
            }
            Dynamics::Gad => gad(t, y),
        }
    };

    let sol = ode::integrate(rhs, 0.0, y0, cfg.t_max, &cfg.stepper(), |t, y, _info| {
        if dynamics == Dynamics::Gad {
            let mut v = y.rows_mut(n, n);
            let norm = v.norm();
            v /= norm;
        }
        let ev = evaluate(model, dynamics, t, y, &v_ref, cfg.eps);
        if !sample_finite(&ev.sample) {
            failure = Some(t);
            return Control::Stop;
        }
        if dynamics == Dynamics::Isd && n > 1 && ev.spec.v1.dot(&v_ref).abs() < JUMP_COS {
            return Control::Reject;
        }
        accepted += 1;
        v_ref = ev.spec.v1.clone();
        let stop = check_events(dynamics, &ev.sample, ev.spec.index, cfg);
        if stop.is_some() || (record > 0 && accepted.is_multiple_of(record)) {
            samples.push(ev.sample.clone());
        }
        last = ev;
        match stop {
            Some(e) => {
                event = Some(e);
                Control::Stop
            }
            None => Control::Continue,
        }
    });

    if let Some(t) = failure {
        let keep = samples.len().saturating_sub(10);
        return Err(Error::NonFiniteState {
            t,
            steps: accepted,
            trail: samples.split_off(keep),
        });
    }

    let tail_recorded = samples.last().map(|s| s.t) == Some(last.sample.t);
    if !tail_recorded {
        samples.push(last.sample.clone());
    }

    let stop = match (sol.outcome, event) {
        (Outcome::Stopped, Some(e)) => e,
        (Outcome::Horizon, _) | (Outcome::StepLimit, _) => StopEvent::MaxTime {
            x: last.sample.x.clone(),
        },
        (Outcome::Stalled { dt }, _) => {
            let s = &last.sample;
            let collapsed = s.gap < 1e-3 * gap0;
            if dynamics == Dynamics::Isd && last.speed > 1e3 * cfg.tol_g && collapsed {
                let xv = DVector::from_column_slice(&s.x);
                let dist = gap_gradient(model, &xv, &last.spec)
                    .map(|gg| s.gap / gg.norm().max(f64::MIN_POSITIVE))
                    .unwrap_or(0.0);
                StopEvent::BlowUp {
                    x: s.x.clone(),
                    t_star: s.t + dist / last.speed,
                    speed: last.speed,
                    gap: s.gap,
                }
            } else {
                return Err(Error::StepSizeUnderflow { t: s.t, dt });
            }
        }
        (Outcome::Failed, _) => {
            let keep = samples.len().saturating_sub(10);
            return Err(Error::NonFiniteState {
                t: sol.t,
                steps: accepted,
                trail: samples.split_off(keep),
            });
        }
        (Outcome::Stopped, None) => unreachable!("observer only stops with an event or a failure"),
    };

    Ok(Trajectory {
        samples,
        stop,
        steps: accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::ModelSpec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn gradient_field_values() {
        let m = ModelSpec::double_well_1d().build().unwrap();
        assert_eq!(gradient_flow_field(&m, &v(&[0.0]))[0], 0.0);
        assert_abs_diff_eq!(gradient_flow_field(&m, &v(&[0.5]))[0], 1.5, epsilon = 1e-15);
        let q = ModelSpec::Quadratic {
            h: vec![vec![2.0, 1.0], vec![1.0, 3.0]],
            b: vec![0.5, -1.0],
        }
        .build()
        .unwrap();
        assert_abs_diff_eq!(gradient_flow_field(&q, &v(&[1.0, 2.0])), v(&[-4.5, -6.0]), epsilon = 1e-14);
    }

    #[test]
    fn isd_double_well_branches() {
        let m = ModelSpec::double_well_2d(2.0).build().unwrap();
        let (f, _) = isd_field(&m, &v(&[0.5, 0.3]), None, 1e-6).unwrap();
        // sigma = +1 branch: (4x(x^2-1), -2 alpha y)
        assert_abs_diff_eq!(f, v(&[-1.5, -1.2]), epsilon = 1e-14);
        let m6 = ModelSpec::double_well_2d(6.0).build().unwrap();
        let (f, _) = isd_field(&m6, &v(&[1.5, 0.2]), None, 1e-6).unwrap();
        assert_abs_diff_eq!(f, v(&[-7.5, 2.4]), epsilon = 1e-13);
    }

    #[test]
    fn isd_rejects_degenerate_points() {
        let m = ModelSpec::double_well_2d(6.0).build().unwrap();
        let rc = (8.0f64 / 6.0).sqrt();
        assert!(matches!(
            isd_field(&m, &v(&[rc, 0.1]), None, 1e-6),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn gad_field_cases() {
        let m = ModelSpec::double_well_2d(2.0).build().unwrap();
        let (xd, vd) = gad_field(&m, &v(&[0.0, 0.0]), &v(&[1.0, 0.0]), 0.1);
        assert_eq!(xd.amax(), 0.0);
        assert_eq!(vd.amax(), 0.0);

        let q = ModelSpec::quadratic_diag(&[-1.0, 2.0]).build().unwrap();
        let (_, vd) = gad_field(&q, &v(&[0.1, 0.1]), &v(&[0.0, 1.0]), 0.1);
        assert_eq!(vd.amax(), 0.0);

        let x = v(&[0.3, 0.2]);
        let (isd, s) = isd_field(&m, &x, None, 1e-6).unwrap();
        let (xd, vd) = gad_field(&m, &x, &s.v1, 0.05);
        assert_abs_diff_eq!(xd, isd, epsilon = 1e-14);
        assert!(vd.amax() < 1e-12);
    }

    #[test]
    fn jacobian_at_saddle_closed_form() {
        let cfg = IntegratorConfig::default();
        let m = ModelSpec::double_well_2d(2.0).build().unwrap();
        let j = isd_jacobian_at_saddle(&m, &v(&[0.0, 0.0]), &cfg).unwrap();
        assert_abs_diff_eq!(j, DMatrix::from_row_slice(2, 2, &[-4.0, 0.0, 0.0, -4.0]), epsilon = 1e-14);
        let q = ModelSpec::quadratic_diag(&[-1.0, 2.0]).build().unwrap();
        let j = isd_jacobian_at_saddle(&q, &v(&[0.0, 0.0]), &cfg).unwrap();
        assert_abs_diff_eq!(j, DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -2.0]), epsilon = 1e-14);
        assert_eq!((&j - j.transpose()).amax(), 0.0);
        assert!(isd_jacobian_at_saddle(&m, &v(&[1.0, 0.0]), &cfg).is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences_of_field() {
        let cfg = IntegratorConfig::default();
        let m = ModelSpec::Quadratic {
            h: vec![vec![-1.0, 0.7], vec![0.7, 2.0]],
            b: vec![0.0, 0.0],
        }
        .build()
        .unwrap();
        let x = v(&[0.0, 0.0]);
        let j = isd_jacobian_at_saddle(&m, &x, &cfg).unwrap();
        let h = 1e-6;
        for k in 0..2 {
            let mut p = x.clone();
            let mut q = x.clone();
            p[k] += h;
            q[k] -= h;
            let col = (isd_field(&m, &p, None, 1e-6).unwrap().0 - isd_field(&m, &q, None, 1e-6).unwrap().0)
                / (2.0 * h);
            assert_abs_diff_eq!(col, j.column(k).into_owned(), epsilon = 1e-8);
        }
    }

    #[test]
    fn isd_1d_dichotomy() {
        let m = ModelSpec::double_well_1d().build().unwrap();
        let cfg = IntegratorConfig::default();
        let t = integrate(&m, Dynamics::Isd, &v(&[0.5]), None, &cfg).unwrap();
        assert_eq!(t.stop.tag(), "ConvergedToSaddle");
        assert!(t.stop.x()[0].abs() < 1e-8);
        let t = integrate(&m, Dynamics::Isd, &v(&[1.5]), None, &cfg).unwrap();
        assert_eq!(t.stop.tag(), "DomainExit");
    }

    #[test]
    fn times_increase_and_gad_stays_normalized() {
        let m = ModelSpec::double_well_2d(2.0).build().unwrap();
        let cfg = IntegratorConfig {
            eps: 0.1,
            t_max: 5.0,
            ..Default::default()
        };
        let t = integrate(&m, Dynamics::Gad, &v(&[0.3, 0.4]), Some(&v(&[0.6, 0.8])), &cfg).unwrap();
        for w in t.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
        for s in &t.samples {
            let norm: f64 = s.v.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-9);
            let x = v(&s.x);
            let vv = v(&s.v);
            let (_, vd) = gad_field(&m, &x, &vv, cfg.eps);
            assert!(vv.dot(&vd).abs() < 1e-10);
        }
    }

    #[test]
    fn gauge_seed_does_not_change_isd() {
        let m = ModelSpec::coercive_quartic().build().unwrap();
        let cfg = IntegratorConfig {
            t_max: 1.0,
            ..Default::default()
        };
        let x0 = v(&[0.1, -0.2]);
        let s = lowest_pairs(&m.hessian(&x0));
        let a = integrate(&m, Dynamics::Isd, &x0, Some(&s.v1), &cfg).unwrap();
        let b = integrate(&m, Dynamics::Isd, &x0, Some(&(-&s.v1)), &cfg).unwrap();
        assert_eq!(a.samples.len(), b.samples.len());
        for (p, q) in a.samples.iter().zip(&b.samples) {
            for (u, w) in p.x.iter().zip(&q.x) {
                assert!((u - w).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn double_well_line_stops_isd() {
        let m = ModelSpec::double_well_2d(6.0).build().unwrap();
        let cfg = IntegratorConfig::default();
        let t = integrate(&m, Dynamics::Isd, &v(&[1.05, 0.2]), None, &cfg).unwrap();
        assert_eq!(t.stop.tag(), "SingularityApproach", "{:?}", t.stop);
        let rc = (8.0f64 / 6.0).sqrt();
        assert!((t.stop.x()[0] - rc).abs() < 1e-6);
    }

    #[test]
    fn stop_event_json_shape() {
        let e = StopEvent::DomainExit { x: vec![11.0] };
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"tag":"DomainExit","payload":{"x":[11.0]}}"#
        );
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::default().validate().is_ok());
        let bad = IntegratorConfig {
            dt_min: 1.0,
            dt_max: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = IntegratorConfig {
            eps: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    proptest! {
        #[test]
        fn isd_field_is_gauge_invariant(x in -1.5f64..1.5, y in -1.5f64..1.5) {
            let m = ModelSpec::coercive_quartic().build().unwrap();
            let p = v(&[x, y]);
            let s = lowest_pairs(&m.hessian(&p));
            prop_assume!(s.gap > 1e-6);
            let (a, _) = isd_field(&m, &p, Some(&s.v1), 1e-6).unwrap();
            let (b, _) = isd_field(&m, &p, Some(&(-&s.v1)), 1e-6).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn gad_orientation_tangent(x in -2.0f64..2.0, y in -2.0f64..2.0, th in 0.0f64..6.3) {
            let m = ModelSpec::coercive_quartic().build().unwrap();
            let vv = v(&[th.cos(), th.sin()]);
            let (_, vd) = gad_field(&m, &v(&[x, y]), &vv, 0.1);
            prop_assert!(vv.dot(&vd).abs() < 1e-10 * vd.norm().max(1.0));
        }
    }
}
