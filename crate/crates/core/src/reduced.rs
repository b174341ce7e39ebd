//! Reduced planar systems near an isolated singularity.
//!
//! Near a singularity with `grad E = (cos a, sin a)` and cubic data `A`, GAD
//! to leading order reads
//!
//! ```text
//! x'          = R(-a) vb
//! eps^2 vb'   = -2 <R(pi/2) vb, A x> R(pi/2) vb
//! ```
//!
//! where `vb = (cos 2phi, sin 2phi)` is the doubled-angle orientation. For
//! `A = I`, polar coordinates and the substitution `omega = 2 phi - theta`
//! (in time rescaled by `eps`) reduce this to a planar system in `(r, omega)`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DVector, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::Landscape;
use crate::ode::{self, Control, Method, StepperConfig};
use crate::rotation;
use crate::singularity::{matrix_a, CubicCoeffs};

/// Position and doubled-angle orientation rates of the leading-order GAD.
pub fn leading_gad_field(
    x: &Vector2<f64>,
    vbar: &Vector2<f64>,
    alpha: f64,
    a: &Matrix2<f64>,
    eps: f64,
) -> (Vector2<f64>, Vector2<f64>) {
    let xdot = rotation(-alpha) * vbar;
    let perp = rotation(FRAC_PI_2) * vbar;
    let vdot = perp * (-2.0 * perp.dot(&(a * x)) / (eps * eps));
    (xdot, vdot)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState {
    pub r: f64,
    pub omega: f64,
}

/// Leading-order isotropic GAD in polar form `(r', theta', phi')`.
pub fn polar_field(s: &PolarState, alpha: f64, eps: f64) -> Result<(f64, f64, f64)> {
    if !(s.r > 0.0) {
        return Err(Error::Domain(format!("polar field needs r > 0 (got {})", s.r)));
    }
    let psi = 2.0 * s.phi - alpha - s.theta;
    Ok((
        psi.cos(),
        psi.sin() / s.r,
        s.r * (2.0 * s.phi - s.theta).sin() / (eps * eps),
    ))
}

/// The planar `(r, omega)` system in rescaled variables.
pub fn reduced_field(s: &ReducedState, alpha: f64) -> Result<(f64, f64)> {
    if !(s.r > 0.0) {
        return Err(Error::Domain(format!("reduced field needs r > 0 (got {})", s.r)));
    }
    Ok((
        (s.omega - alpha).cos(),
        2.0 * s.r * s.omega.sin() - (s.omega - alpha).sin() / s.r,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub alpha: f64,
    pub r0: f64,
    pub omega0_plus: f64,
    pub omega0_minus: f64,
    #[serde(rename = "J_plus")]
    pub j_plus: [[f64; 2]; 2],
    #[serde(rename = "J_minus")]
    pub j_minus: [[f64; 2]; 2],
    pub stable_branch: Branch,
}

fn to_rows(m: &Matrix2<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

impl FixedPointReport {
    pub fn j_plus(&self) -> Matrix2<f64> {
        Matrix2::new(self.j_plus[0][0], self.j_plus[0][1], self.j_plus[1][0], self.j_plus[1][1])
    }

    pub fn j_minus(&self) -> Matrix2<f64> {
        Matrix2::new(
            self.j_minus[0][0],
            self.j_minus[0][1],
            self.j_minus[1][0],
            self.j_minus[1][1],
        )
    }
}

/// Jacobian of [`reduced_field`] with respect to `(r, omega)`.
pub fn reduced_jacobian(s: &ReducedState, alpha: f64) -> Matrix2<f64> {
    let (r, w) = (s.r, s.omega);
    Matrix2::new(
        0.0,
        -(w - alpha).sin(),
        2.0 * w.sin() + (w - alpha).sin() / (r * r),
        2.0 * r * w.cos() - (w - alpha).cos() / r,
    )
}

pub fn fixed_points(alpha: f64) -> Result<FixedPointReport> {
    let c = alpha.cos();
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "fixed points need cos(alpha) > 0 (alpha = {alpha})"
        )));
    }
    let r0 = (1.0 / (2.0 * c)).sqrt();
    let wp = alpha + FRAC_PI_2;
    let wm = alpha - FRAC_PI_2;
    let jp = reduced_jacobian(&ReducedState { r: r0, omega: wp }, alpha);
    let jm = reduced_jacobian(&ReducedState { r: r0, omega: wm }, alpha);
    let s = alpha.sin();
    let stable_branch = if s > 0.0 {
        Branch::Plus
    } else if s < 0.0 {
        Branch::Minus
    } else {
        Branch::Undecided
    };
    Ok(FixedPointReport {
        alpha,
        r0,
        omega0_plus: wp,
        omega0_minus: wm,
        j_plus: to_rows(&jp),
        j_minus: to_rows(&jm),
        stable_branch,
    })
}

/// Radius `eps / sqrt(2 cos alpha)` of the stable circular orbit.
pub fn predicted_radius(alpha: f64, eps: f64) -> Result<f64> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be non-negative (got {eps})")));
    }
    let c = alpha.cos();
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "no stable orbit for cos(alpha) <= 0 (alpha = {alpha})"
        )));
    }
    if alpha.sin() == 0.0 {
        return Err(Error::Domain("stability is undecided for sin(alpha) = 0".into()));
    }
    if alpha.abs() > 1.55 {
        log::warn!("alpha = {alpha} is close to pi/2; predicted radius {} is large", eps / (2.0 * c).sqrt());
    }
    Ok(eps / (2.0 * c).sqrt())
}

/// Difference between the full GAD field and its leading-order form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Consistency {
    /// `|x'_full - x'_leading|`.
    pub position: f64,
    /// `eps^2 |vb'_full - vb'_leading|`.
    pub orientation: f64,
}

/// Compares GAD on a 2D `model` whose singularity sits at the origin with
/// its leading-order form, at position `x` and orientation angle `phi`.
pub fn full_vs_leading_consistency<L: Landscape + ?Sized>(
    model: &L,
    x: &Vector2<f64>,
    phi: f64,
    eps: f64,
) -> Result<Consistency> {
    if model.dim() != 2 {
        return Err(Error::InvalidInput("consistency check needs a 2D model".into()));
    }
    let origin = DVector::zeros(2);
    let g0 = model.gradient(&origin);
    let alpha = g0[1].atan2(g0[0]);
    let t = model.third(&origin);
    let a = matrix_a(&CubicCoeffs::new(
        t[(0, 0, 0)],
        t[(0, 0, 1)],
        t[(0, 1, 1)],
        t[(1, 1, 1)],
    ));

    let v = DVector::from_vec(vec![phi.cos(), phi.sin()]);
    let xd = DVector::from_vec(vec![x[0], x[1]]);
    let (fx, fv) = crate::flows::gad_field(model, &xd, &v, eps);
    let phidot = -phi.sin() * fv[0] + phi.cos() * fv[1];
    let vbar = Vector2::new((2.0 * phi).cos(), (2.0 * phi).sin());
    let full_vbar_dot = rotation(FRAC_PI_2) * vbar * (2.0 * phidot);

    let (lx, lv) = leading_gad_field(x, &vbar, alpha, &a, eps);
    Ok(Consistency {
        position: (Vector2::new(fx[0], fx[1]) - lx).norm(),
        orientation: eps * eps * (full_vbar_dot - lv).norm(),
    })
}

fn rk4_path<F>(f: F, y0: DVector<f64>, t_end: f64, dt: f64) -> Vec<(f64, DVector<f64>)>
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    let cfg = StepperConfig {
        method: Method::Rk4,
        dt,
        dt_min: dt * 1e-6,
        dt_max: dt,
        max_steps: usize::MAX,
        ..Default::default()
    };
    let mut path = vec![(0.0, y0.clone())];
    ode::integrate(f, 0.0, y0, t_end, &cfg, |t, y, _| {
        path.push((t, y.clone()));
        Control::Continue
    });
    path
}

/// Fixed-step RK4 solution of [`reduced_field`]; rows are `(t, r, omega)`.
pub fn reduced_path(s: ReducedState, alpha: f64, t_end: f64, dt: f64) -> Result<Vec<[f64; 3]>> {
    reduced_field(&s, alpha)?;
    let f = |_t: f64, y: &DVector<f64>| {
        let (a, b) = reduced_field(&ReducedState { r: y[0], omega: y[1] }, alpha)
            .unwrap_or((f64::NAN, f64::NAN));
        DVector::from_vec(vec![a, b])
    };
    let path = rk4_path(f, DVector::from_vec(vec![s.r, s.omega]), t_end, dt);
    Ok(path.into_iter().map(|(t, y)| [t, y[0], y[1]]).collect())
}

/// Fixed-step RK4 solution of [`polar_field`]; rows are `(t, r, theta, phi)`.
pub fn polar_path(s: PolarState, alpha: f64, eps: f64, t_end: f64, dt: f64) -> Result<Vec<[f64; 4]>> {
    polar_field(&s, alpha, eps)?;
    let f = |_t: f64, y: &DVector<f64>| {
        let (a, b, c) = polar_field(
            &PolarState {
                r: y[0],
                theta: y[1],
                phi: y[2],
            },
            alpha,
            eps,
        )
        .unwrap_or((f64::NAN, f64::NAN, f64::NAN));
        DVector::from_vec(vec![a, b, c])
    };
    let path = rk4_path(f, DVector::from_vec(vec![s.r, s.theta, s.phi]), t_end, dt);
    Ok(path.into_iter().map(|(t, y)| [t, y[0], y[1], y[2]]).collect())
}

/// Fixed-step RK4 solution of [`leading_gad_field`]; rows are `(t, x1, x2, vb1, vb2)`.
pub fn leading_path(
    x: Vector2<f64>,
    vbar: Vector2<f64>,
    alpha: f64,
    a: Matrix2<f64>,
    eps: f64,
    t_end: f64,
    dt: f64,
) -> Vec<[f64; 5]> {
    let f = |_t: f64, y: &DVector<f64>| {
        let (xd, vd) = leading_gad_field(&Vector2::new(y[0], y[1]), &Vector2::new(y[2], y[3]), alpha, &a, eps);
        DVector::from_vec(vec![xd[0], xd[1], vd[0], vd[1]])
    };
    let path = rk4_path(f, DVector::from_vec(vec![x[0], x[1], vbar[0], vbar[1]]), t_end, dt);
    path.into_iter().map(|(t, y)| [t, y[0], y[1], y[2], y[3]]).collect()
}

/// Continuous branch of a sequence of angles given modulo `2 pi`.
pub fn unwrap_angles(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut prev: Option<(f64, f64)> = None;
    for &a in raw {
        let u = match prev {
            None => a,
            Some((praw, pu)) => {
                let d = (a - praw + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU)
                    - std::f64::consts::PI;
                pu + d
            }
        };
        out.push(u);
        prev = Some((a, u));
    }
    out
}

/// Maps a leading-order Cartesian path to rescaled `(t/eps, r/eps, omega)`
/// with unwrapped angles, starting on the branch of `omega_start`.
pub fn cartesian_to_reduced(path: &[[f64; 5]], eps: f64, omega_start: f64) -> Vec<[f64; 3]> {
    let theta = unwrap_angles(&path.iter().map(|p| p[2].atan2(p[1])).collect::<Vec<_>>());
    let two_phi = unwrap_angles(&path.iter().map(|p| p[4].atan2(p[3])).collect::<Vec<_>>());
    let omega0 = two_phi[0] - theta[0];
    let shift = ((omega_start - omega0) / std::f64::consts::TAU).round() * std::f64::consts::TAU;
    path.iter()
        .enumerate()
        .map(|(i, p)| {
            let r = (p[1] * p[1] + p[2] * p[2]).sqrt();
            [p[0] / eps, r / eps, two_phi[i] - theta[i] + shift]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{Landscape, ModelSpec};
    use crate::tensor::Tensor3;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn leading_field_examples() {
        let (xd, vd) = leading_gad_field(
            &Vector2::new(1.0, 0.0),
            &Vector2::new(0.0, 1.0),
            0.0,
            &Matrix2::identity(),
            0.1,
        );
        assert_abs_diff_eq!(xd, Vector2::new(0.0, 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(vd, Vector2::new(-200.0, 0.0), epsilon = 1e-9);

        let a = Matrix2::new(1.2, -0.3, 0.4, 0.8);
        let x = Vector2::new(0.3, -0.5);
        let alpha = 0.7;
        let vbar = -(a * x).normalize();
        let (xd, vd) = leading_gad_field(&x, &vbar, alpha, &a, 0.05);
        assert!(vd.norm() < 1e-12);
        assert_abs_diff_eq!(xd, -(rotation(-alpha) * a * x) / (a * x).norm(), epsilon = 1e-14);
    }

    #[test]
    fn polar_examples() {
        let (r, th, _) = polar_field(&PolarState { r: 0.5, theta: 0.2, phi: (0.3 + 0.2) / 2.0 }, 0.3, 0.1).unwrap();
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(th, 0.0, epsilon = 1e-15);
        let (_, _, ph) = polar_field(&PolarState { r: 0.5, theta: 0.4, phi: 0.2 }, 0.3, 0.1).unwrap();
        assert_eq!(ph, 0.0);
        assert!(polar_field(&PolarState { r: 0.0, theta: 0.0, phi: 0.0 }, 0.3, 0.1).is_err());
    }

    #[test]
    fn reduced_examples() {
        let (r, w) = reduced_field(&ReducedState { r: 1.0, omega: 0.0 }, FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(r, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w, 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(reduced_field(&ReducedState { r: 0.0, omega: 0.0 }, 0.1).is_err());
    }

    #[test]
    fn fixed_points_at_quarter_pi() {
        let f = fixed_points(FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(f.r0, 0.840896415, epsilon = 1e-8);
        assert_abs_diff_eq!(f.j_plus().trace(), -1.189207115, epsilon = 1e-8);
        assert_abs_diff_eq!(f.j_plus[1][0], 2.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_eq!(f.stable_branch, Branch::Plus);
        for w in [f.omega0_plus, f.omega0_minus] {
            let (a, b) = reduced_field(&ReducedState { r: f.r0, omega: w }, FRAC_PI_4).unwrap();
            assert!(a.abs() < 1e-15 && b.abs() < 1e-14);
        }
        assert_eq!(fixed_points(-FRAC_PI_4).unwrap().stable_branch, Branch::Minus);
        assert_eq!(fixed_points(0.0).unwrap().stable_branch, Branch::Undecided);
        assert!(fixed_points(PI / 2.0 + 0.1).is_err());
    }

    #[test]
    fn predicted_radius_values() {
        assert_abs_diff_eq!(predicted_radius(FRAC_PI_4, 0.01).unwrap(), 0.00840896415, epsilon = 1e-10);
        assert_eq!(predicted_radius(FRAC_PI_4, 0.0).unwrap(), 0.0);
        assert!(predicted_radius(1.56, 0.01).unwrap() > 0.05);
        assert!(predicted_radius(2.0, 0.01).is_err());
        assert!(predicted_radius(0.0, 0.01).is_err());
    }

    fn fd_jacobian(s: ReducedState, alpha: f64) -> Matrix2<f64> {
        let h = 1e-6;
        let f = |r: f64, w: f64| {
            let (a, b) = reduced_field(&ReducedState { r, omega: w }, alpha).unwrap();
            Vector2::new(a, b)
        };
        let c0 = (f(s.r + h, s.omega) - f(s.r - h, s.omega)) / (2.0 * h);
        let c1 = (f(s.r, s.omega + h) - f(s.r, s.omega - h)) / (2.0 * h);
        Matrix2::from_columns(&[c0, c1])
    }

    proptest! {
        #[test]
        fn analytic_jacobian_matches_linearization(alpha in -1.5f64..1.5) {
            let f = fixed_points(alpha).unwrap();
            for (w, j) in [(f.omega0_plus, f.j_plus()), (f.omega0_minus, f.j_minus())] {
                let fd = fd_jacobian(ReducedState { r: f.r0, omega: w }, alpha);
                prop_assert!((fd - j).amax() < 1e-8);
            }
            let expected = -2.0 * alpha.sin() / (2.0 * alpha.cos()).sqrt();
            prop_assert!((f.j_plus().trace() - expected).abs() < 1e-12);
            prop_assert!((f.j_minus().trace() + expected).abs() < 1e-12);
            prop_assert!(f.j_plus().determinant() > 0.0 && f.j_minus().determinant() > 0.0);
        }

        #[test]
        fn stable_branch_has_negative_real_parts(alpha in 0.01f64..1.56) {
            let f = fixed_points(alpha).unwrap();
            let re = |m: Matrix2<f64>| m.complex_eigenvalues().iter().map(|z| z.re).fold(f64::MIN, f64::max);
            prop_assert!(re(f.j_plus()) < 0.0);
            prop_assert!(f.j_minus().complex_eigenvalues().iter().all(|z| z.re > 0.0));
        }

        #[test]
        fn leading_orientation_is_tangent(x in -1.0f64..1.0, y in -1.0f64..1.0, p in 0.0f64..6.3, alpha in -3.0f64..3.0) {
            let vbar = Vector2::new(p.cos(), p.sin());
            let a = Matrix2::new(1.0, 0.3, -0.2, 0.7);
            let (_, vd) = leading_gad_field(&Vector2::new(x, y), &vbar, alpha, &a, 0.1);
            prop_assert!(vbar.dot(&vd).abs() < 1e-10 * vd.norm().max(1.0));
        }

        #[test]
        fn polar_matches_cartesian(r in 0.05f64..2.0, th in -3.0f64..3.0, ph in -3.0f64..3.0, alpha in -1.5f64..1.5) {
            let eps = 0.3;
            let (rd, thd, phd) = polar_field(&PolarState { r, theta: th, phi: ph }, alpha, eps).unwrap();
            let x = Vector2::new(r * th.cos(), r * th.sin());
            let vbar = Vector2::new((2.0 * ph).cos(), (2.0 * ph).sin());
            let (xd, vd) = leading_gad_field(&x, &vbar, alpha, &Matrix2::identity(), eps);
            let rhat = Vector2::new(th.cos(), th.sin());
            let that = Vector2::new(-th.sin(), th.cos());
            prop_assert!((xd.dot(&rhat) - rd).abs() < 1e-10);
            prop_assert!((xd.dot(&that) / r - thd).abs() < 1e-10 * (1.0 / r));
            let perp = Vector2::new(-(2.0 * ph).sin(), (2.0 * ph).cos());
            prop_assert!((vd.dot(&perp) / 2.0 - phd).abs() < 1e-10 * phd.abs().max(1.0));
        }
    }

    #[test]
    fn reduced_matches_rescaled_polar() {
        let alpha = FRAC_PI_4;
        let (r, th, w): (f64, f64, f64) = (1.2, 0.4, 0.3);
        let polar = polar_path(PolarState { r, theta: th, phi: (w + th) / 2.0 }, alpha, 1.0, 20.0, 1e-3).unwrap();
        let red = reduced_path(ReducedState { r, omega: w }, alpha, 20.0, 1e-3).unwrap();
        assert_eq!(polar.len(), red.len());
        let mut worst = 0.0f64;
        for (p, q) in polar.iter().zip(&red) {
            worst = worst.max((p[1] - q[1]).abs()).max((2.0 * p[3] - p[2] - q[2]).abs());
        }
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn leading_matches_reduced_after_change_of_variables() {
        let alpha = FRAC_PI_4;
        let eps = 0.05;
        let (r, th, w): (f64, f64, f64) = (1.0, 0.2, 0.3);
        let phi = (w + th) / 2.0;
        let x = Vector2::new(eps * r * th.cos(), eps * r * th.sin());
        let vbar = Vector2::new((2.0 * phi).cos(), (2.0 * phi).sin());
        let lead = leading_path(x, vbar, alpha, Matrix2::identity(), eps, 20.0 * eps, 1e-3 * eps);
        let mapped = cartesian_to_reduced(&lead, eps, w);
        let red = reduced_path(ReducedState { r, omega: w }, alpha, 20.0, 1e-3).unwrap();
        let worst = mapped
            .iter()
            .zip(&red)
            .map(|(a, b)| (a[1] - b[1]).abs().max((a[2] - b[2]).abs()))
            .fold(0.0, f64::max);
        assert!(worst < 1e-5, "{worst}");
    }

    #[test]
    fn reduced_radius_moves_toward_cycle() {
        let alpha = FRAC_PI_4;
        let r0 = fixed_points(alpha).unwrap().r0;
        let mean_rdot = |r: f64| {
            let path = reduced_path(ReducedState { r, omega: 0.0 }, alpha, 1.0, 1e-3).unwrap();
            path.last().unwrap()[1] - path[0][1]
        };
        assert!(mean_rdot(10.0 * r0) < 0.0);
        assert!(mean_rdot(0.1 * r0) > 0.0);
    }

    /// Cubic singularity plus a quartic term so that the Hessian is not affine.
    struct QuarticTilt(crate::landscape::EnergyModel);

    impl Landscape for QuarticTilt {
        fn dim(&self) -> usize {
            2
        }
        fn energy(&self, x: &DVector<f64>) -> f64 {
            self.0.energy(x) + x[0].powi(3) * x[1] + 0.5 * x[1].powi(4)
        }
        fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
            let g = self.0.gradient(x);
            DVector::from_vec(vec![
                g[0] + 3.0 * x[0] * x[0] * x[1],
                g[1] + x[0].powi(3) + 2.0 * x[1].powi(3),
            ])
        }
        fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
            let mut h = self.0.hessian(x);
            h[(0, 0)] += 6.0 * x[0] * x[1];
            h[(0, 1)] += 3.0 * x[0] * x[0];
            h[(1, 0)] += 3.0 * x[0] * x[0];
            h[(1, 1)] += 6.0 * x[1] * x[1];
            h
        }
        fn third(&self, x: &DVector<f64>) -> Tensor3 {
            let mut t = self.0.third(x);
            let mut q = Tensor3::zeros(2);
            q.set_sym(0, 0, 0, 6.0 * x[1]);
            q.set_sym(0, 0, 1, 6.0 * x[0]);
            q.set_sym(1, 1, 1, 12.0 * x[1]);
            t.add_assign(&q);
            t
        }
    }

    #[test]
    fn consistency_orders() {
        let m = ModelSpec::CubicSingularity { alpha: FRAC_PI_4, lambda: 1.0, s: 1.0 }.build().unwrap();
        let dir = Vector2::new(0.6, -0.8);
        let phi = 0.9;
        let c0 = full_vs_leading_consistency(&m, &Vector2::zeros(), phi, 0.1).unwrap();
        assert!(c0.position < 1e-10 && c0.orientation < 1e-10);
        let c1 = full_vs_leading_consistency(&m, &(dir * 0.1), phi, 0.1).unwrap();
        let c2 = full_vs_leading_consistency(&m, &(dir * 0.05), phi, 0.1).unwrap();
        let ratio = c1.position / c2.position;
        assert!((ratio - 2.0).abs() < 0.1, "{ratio}");
        // a pure cubic has an affine Hessian, so the orientation equation is exact
        assert!(c1.orientation < 1e-12);

        let tilted = QuarticTilt(m);
        let c1 = full_vs_leading_consistency(&tilted, &(dir * 0.1), phi, 0.1).unwrap();
        let c2 = full_vs_leading_consistency(&tilted, &(dir * 0.05), phi, 0.1).unwrap();
        let ratio = c1.orientation / c2.orientation;
        assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn unwrap_is_continuous() {
        let raw: Vec<f64> = (0..100).map(|i| (0.2 * i as f64).sin().atan2((0.2 * i as f64).cos())).collect();
        let u = unwrap_angles(&raw);
        for (i, a) in u.iter().enumerate() {
            assert_abs_diff_eq!(*a, 0.2 * i as f64, epsilon = 1e-12);
        }
    }
}
