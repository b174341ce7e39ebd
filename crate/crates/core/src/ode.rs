//! Explicit Runge-Kutta steppers with a per-step observer.
//!
//! The observer sees every accepted step, may modify the new state in place
//! (used to renormalize the GAD orientation), and may stop the run or reject
//! the step, which retries it from the previous state with half the step.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Classical fourth-order Runge-Kutta with fixed step `dt`.
    Rk4,
    /// Dormand-Prince 5(4) with error control.
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepperConfig {
    pub method: Method,
    /// Fixed step for RK4, initial step for RK45.
    pub dt: f64,
    pub atol: f64,
    pub rtol: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub max_steps: usize,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            method: Method::Rk45,
            dt: 1e-3,
            atol: 1e-10,
            rtol: 1e-8,
            dt_min: 1e-12,
            dt_max: 0.1,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
    Reject,
}

/// Context handed to the observer after an accepted step.
pub struct StepInfo<'a> {
    pub t_prev: f64,
    pub y_prev: &'a DVector<f64>,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// The observer asked to stop.
    Stopped,
    /// The step size fell below `dt_min`; `dt` is the last attempted step.
    Stalled { dt: f64 },
    /// The right-hand side produced non-finite values with no way to recover.
    Failed,
    /// `t_end` reached.
    Horizon,
    /// Step budget exhausted.
    StepLimit,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub outcome: Outcome,
    pub t: f64,
    pub y: DVector<f64>,
    pub steps: usize,
}

fn all_finite(v: &DVector<f64>) -> bool {
    v.iter().all(|c| c.is_finite())
}

fn rk4_step<F>(f: &mut F, t: f64, y: &DVector<f64>, h: f64) -> DVector<f64>
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &(y + &k1 * (0.5 * h)));
    let k3 = f(t + 0.5 * h, &(y + &k2 * (0.5 * h)));
    let k4 = f(t + h, &(y + &k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince step: returns the fifth-order solution and the error vector.
fn dopri_step<F>(f: &mut F, t: f64, y: &DVector<f64>, h: f64) -> (DVector<f64>, DVector<f64>)
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    let mut k: Vec<DVector<f64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let mut ys = y.clone();
        for (j, kj) in k.iter().enumerate() {
            if A[s][j] != 0.0 {
                ys.axpy(h * A[s][j], kj, 1.0);
            }
        }
        k.push(f(t + C[s] * h, &ys));
    }
    let mut y5 = y.clone();
    let mut err = DVector::zeros(y.len());
    for s in 0..7 {
        y5.axpy(h * B5[s], &k[s], 1.0);
        err.axpy(h * (B5[s] - B4[s]), &k[s], 1.0);
    }
    (y5, err)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end`.
pub fn integrate<F, O>(
    mut f: F,
    t0: f64,
    y0: DVector<f64>,
    t_end: f64,
    cfg: &StepperConfig,
    mut observer: O,
) -> Solution
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
    O: FnMut(f64, &mut DVector<f64>, &StepInfo) -> Control,
{
    let mut t = t0;
    let mut y = y0;
    let mut steps = 0usize;
    let mut dt = cfg.dt.clamp(cfg.dt_min, cfg.dt_max.max(cfg.dt_min));

    let finish = |outcome, t, y, steps| Solution {
        outcome,
        t,
        y,
        steps,
    };

    loop {
        if t >= t_end {
            return finish(Outcome::Horizon, t, y, steps);
        }
        if steps >= cfg.max_steps {
            return finish(Outcome::StepLimit, t, y, steps);
        }
        if dt < cfg.dt_min {
            return finish(Outcome::Stalled { dt }, t, y, steps);
        }
        let remaining = t_end - t;
        let h = dt.min(remaining);

        let (mut y_new, accepted, next_dt) = match cfg.method {
            Method::Rk4 => {
                let y_new = rk4_step(&mut f, t, &y, h);
                if !all_finite(&y_new) {
                    if h * 0.5 < cfg.dt_min {
                        return finish(Outcome::Failed, t, y, steps);
                    }
                    dt = h * 0.5;
                    continue;
                }
                (y_new, true, cfg.dt)
            }
            Method::Rk45 => {
                let (y_new, err) = dopri_step(&mut f, t, &y, h);
                let norm = if all_finite(&y_new) && all_finite(&err) {
                    let n = y.len() as f64;
                    let s: f64 = err
                        .iter()
                        .zip(y.iter().zip(y_new.iter()))
                        .map(|(e, (a, b))| {
                            let sc = cfg.atol + cfg.rtol * a.abs().max(b.abs());
                            (e / sc).powi(2)
                        })
                        .sum();
                    (s / n).sqrt()
                } else {
                    f64::INFINITY
                };
                if norm.is_finite() {
                    let factor = if norm == 0.0 {
                        5.0
                    } else {
                        (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    let next = (h * factor).min(cfg.dt_max);
                    (y_new, norm <= 1.0, next)
                } else {
                    (y_new, false, h * 0.25)
                }
            }
        };

        if !accepted {
            dt = next_dt;
            continue;
        }

        let info = StepInfo {
            t_prev: t,
            y_prev: &y,
            dt: h,
        };
        let t_new = if h == remaining { t_end } else { t + h };
        match observer(t_new, &mut y_new, &info) {
            Control::Reject => {
                dt = h * 0.5;
                continue;
            }
            Control::Stop => {
                return finish(Outcome::Stopped, t_new, y_new, steps + 1);
            }
            Control::Continue => {
                t = t_new;
                y = y_new;
                steps += 1;
                dt = next_dt.max(cfg.dt_min);
            }
        }
    }
}
