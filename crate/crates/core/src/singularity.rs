//! Eigenvalue-crossing singularities: location, local cubic data, classification.

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::Landscape;
use crate::rotation;
use crate::spectral::{invariant_subspace, lowest_pairs, sorted_eigen};

/// Third derivatives at a singularity in an orthonormal frame `(e1, e2)` of
/// the degenerate eigenspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoeffs {
    #[serde(rename = "E111")]
    pub e111: f64,
    #[serde(rename = "E112")]
    pub e112: f64,
    #[serde(rename = "E122")]
    pub e122: f64,
    #[serde(rename = "E222")]
    pub e222: f64,
}

impl CubicCoeffs {
    pub fn new(e111: f64, e112: f64, e122: f64, e222: f64) -> Self {
        CubicCoeffs {
            e111,
            e112,
            e122,
            e222,
        }
    }

    /// Coefficients of `E111 x^3/6 + ...` with `E111 = 3, E122 = 1`, the
    /// isotropic case `A = I`.
    pub fn canonical() -> Self {
        CubicCoeffs::new(3.0, 0.0, 1.0, 0.0)
    }
}

pub fn matrix_a(c: &CubicCoeffs) -> Matrix2<f64> {
    Matrix2::new(
        0.5 * (c.e111 - c.e122),
        0.5 * (c.e112 - c.e222),
        c.e112,
        c.e122,
    )
}

/// Determinant of the Jacobian of `(H11 - H22, H12)` at the singularity.
pub fn discriminant(c: &CubicCoeffs) -> f64 {
    c.e111 * c.e122 + c.e112 * c.e222 - c.e112 * c.e112 - c.e122 * c.e122
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularityClass {
    /// ISD trajectories spiral in and reach the singularity in finite time.
    StableSpiral,
    UnstableSpiral,
    Center,
    SaddleLike,
    Degenerate,
}

/// Classifies the leading-order ISD near a singularity with matrix `A` and
/// gradient direction `(cos alpha, sin alpha)` via `B = R(-alpha) A`.
pub fn classify(a: &Matrix2<f64>, alpha: f64) -> SingularityClass {
    let b = rotation(-alpha) * a;
    let scale = b.norm().max(1.0);
    let det = b.determinant();
    if det.abs() <= 1e-12 * scale * scale {
        return SingularityClass::Degenerate;
    }
    if det < 0.0 {
        return SingularityClass::SaddleLike;
    }
    let tr = b.trace();
    if tr.abs() <= 1e-12 * scale {
        SingularityClass::Center
    } else if tr > 0.0 {
        SingularityClass::StableSpiral
    } else {
        SingularityClass::UnstableSpiral
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub z: Vec<f64>,
    pub lambda: f64,
    pub grad_norm: f64,
    pub alpha: f64,
    pub coeffs: CubicCoeffs,
    pub delta_disc: f64,
    #[serde(rename = "A")]
    pub a: [[f64; 2]; 2],
    /// Frame vectors `e1..eN`, one per row.
    pub frame: Vec<Vec<f64>>,
    pub class: SingularityClass,
    /// Largest absolute defining residual at `z`.
    pub residual: f64,
    pub iterations: usize,
}

impl SingularityReport {
    pub fn z(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.z)
    }

    pub fn a_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a[0][0], self.a[0][1], self.a[1][0], self.a[1][1])
    }

    /// Frame as a matrix with `e_i` in column `i`.
    pub fn frame_matrix(&self) -> DMatrix<f64> {
        let n = self.frame.len();
        DMatrix::from_fn(n, n, |r, c| self.frame[c][r])
    }
}

const FD_STEP: f64 = 1e-6;
const NEWTON_TOL: f64 = 1e-11;
const MAX_ITER: usize = 50;

fn assemble<L: Landscape + ?Sized>(
    model: &L,
    z: &DVector<f64>,
    frame: &DMatrix<f64>,
    residual: f64,
    iterations: usize,
) -> SingularityReport {
    let g = model.gradient(z);
    let h = model.hessian(z);
    let t = model.third(z);
    let e1 = frame.column(0).into_owned();
    let e2 = frame.column(1).into_owned();
    let lambda = 0.5 * (e1.dot(&(&h * &e1)) + e2.dot(&(&h * &e2)));
    let coeffs = CubicCoeffs::new(
        t.contract3(&e1, &e1, &e1),
        t.contract3(&e1, &e1, &e2),
        t.contract3(&e1, &e2, &e2),
        t.contract3(&e2, &e2, &e2),
    );
    let alpha = e2.dot(&g).atan2(e1.dot(&g));
    let a = matrix_a(&coeffs);
    let n = z.len();
    SingularityReport {
        z: z.iter().cloned().collect(),
        lambda,
        grad_norm: g.norm(),
        alpha,
        coeffs,
        delta_disc: discriminant(&coeffs),
        a: [[a[(0, 0)], a[(0, 1)]], [a[(1, 0)], a[(1, 1)]]],
        frame: (0..n).map(|c| frame.column(c).iter().cloned().collect()).collect(),
        class: classify(&a, alpha),
        residual,
        iterations,
    }
}

fn residual_2d<L: Landscape + ?Sized>(model: &L, x: &DVector<f64>) -> DVector<f64> {
    let h = model.hessian(x);
    DVector::from_vec(vec![h[(0, 0)] - h[(1, 1)], h[(0, 1)]])
}

fn fd_jacobian<F>(f: &F, x: &DVector<f64>, m: usize) -> DMatrix<f64>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let n = x.len();
    let mut j = DMatrix::zeros(m, n);
    for k in 0..n {
        let mut p = x.clone();
        let mut q = x.clone();
        p[k] += FD_STEP;
        q[k] -= FD_STEP;
        match (f(&p), f(&q)) {
            (Ok(fp), Ok(fq)) => j.set_column(k, &((fp - fq) / (2.0 * FD_STEP))),
            _ => j.column_mut(k).fill(f64::NAN),
        }
    }
    j
}

/// Damped Newton iteration with a finite-difference Jacobian.
fn newton<F>(f: F, guess: &DVector<f64>) -> Result<(DVector<f64>, f64, usize)>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let mut x = guess.clone();
    let mut r = f(&x)?;
    let m = r.len();
    for it in 0..MAX_ITER {
        let norm = r.norm();
        if norm < NEWTON_TOL {
            return Ok((x, r.amax(), it));
        }
        let j = fd_jacobian(&f, &x, m);
        if j.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: norm,
            });
        }
        let det = j.determinant();
        let scale = j.norm().max(1.0).powi(m as i32);
        if det.abs() < 1e-12 * scale {
            return Err(Error::DegenerateJacobian { det });
        }
        let dx = j.lu().solve(&(-&r)).ok_or(Error::DegenerateJacobian { det })?;
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..20 {
            let trial = &x + &dx * step;
            if let Ok(rt) = f(&trial) {
                if rt.norm() < norm || rt.norm() < NEWTON_TOL {
                    accepted = Some((trial, rt));
                    break;
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some((xn, rn)) => {
                x = xn;
                r = rn;
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations: it,
                    residual: norm,
                })
            }
        }
    }
    let norm = r.norm();
    if norm < NEWTON_TOL {
        Ok((x, r.amax(), MAX_ITER))
    } else {
        Err(Error::NoConvergence {
            iterations: MAX_ITER,
            residual: norm,
        })
    }
}

/// Newton solve of `H11 = H22, H12 = 0` for a two-dimensional model.
pub fn locate_2d<L: Landscape + ?Sized>(model: &L, guess: &DVector<f64>) -> Result<SingularityReport> {
    if model.dim() != 2 || guess.len() != 2 {
        return Err(Error::InvalidInput("locate_2d needs a two-dimensional model".into()));
    }
    let (z, res, it) = newton(|x| Ok(residual_2d(model, x)), guess)?;
    Ok(assemble(model, &z, &DMatrix::identity(2, 2), res, it))
}

/// Symmetric orthonormalization of the columns of `u`: `U (U^T U)^{-1/2}`.
fn lowdin(u: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let s = u.transpose() * u;
    let eig = s.symmetric_eigen();
    if eig.eigenvalues.min() <= 1e-16 {
        return None;
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    Some(u * (&eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose()))
}

/// Frame adapted to the two lowest eigenvalues of `H`: the projections of
/// the first two reference vectors onto the window subspace, and of the
/// remaining ones onto its complement, each orthonormalized.
fn adapted_frame(h: &DMatrix<f64>, reference: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = h.nrows();
    let (vals, _) = sorted_eigen(h);
    let center = 0.5 * (vals[0] + vals[1]);
    let radius = if n > 2 {
        0.5 * (vals[1] + vals[2]) - center
    } else {
        (vals[1] - center).abs() + 1.0
    };
    let basis = invariant_subspace(h, center, radius, 2)?;
    let p = &basis * basis.transpose();
    let plane = lowdin(&(&p * reference.columns(0, 2)))
        .ok_or_else(|| Error::Domain("reference vectors are orthogonal to the singular plane".into()))?;
    let mut frame = DMatrix::zeros(n, n);
    frame.columns_mut(0, 2).copy_from(&plane);
    if n > 2 {
        let q = DMatrix::identity(n, n) - p;
        let rest = lowdin(&(q * reference.columns(2, n - 2)))
            .ok_or_else(|| Error::Domain("reference vectors do not span the complement".into()))?;
        frame.columns_mut(2, n - 2).copy_from(&rest);
    }
    Ok(frame)
}

fn residual_nd<L: Landscape + ?Sized>(
    model: &L,
    x: &DVector<f64>,
    reference: &DMatrix<f64>,
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = model.dim();
    let h = model.hessian(x);
    let g = model.gradient(x);
    let frame = adapted_frame(&h, reference)?;
    let e1 = frame.column(0);
    let e2 = frame.column(1);
    let mut r = DVector::zeros(n);
    r[0] = e1.dot(&(&h * e2));
    r[1] = e1.dot(&(&h * e1)) - e2.dot(&(&h * e2));
    for i in 2..n {
        r[i] = frame.column(i).dot(&g);
    }
    Ok((r, frame))
}

/// N-dimensional location: `z` with a repeated lowest eigenvalue and the
/// gradient inside the corresponding eigenspace.
///
/// The in-plane gauge is fixed by a reference basis; this uses the standard
/// basis when it projects well onto the degenerate plane at the guess and
/// the eigenbasis at the guess otherwise.
pub fn locate_nd<L: Landscape + ?Sized>(model: &L, guess: &DVector<f64>) -> Result<SingularityReport> {
    let n = model.dim();
    if n < 2 || guess.len() != n {
        return Err(Error::InvalidInput(format!(
            "locate_nd needs a guess of dimension {n} >= 2"
        )));
    }
    let identity = DMatrix::identity(n, n);
    let h0 = model.hessian(guess);
    let (_, vecs) = sorted_eigen(&h0);
    let plane = vecs.columns(0, 2).into_owned();
    let overlap = (plane.transpose() * identity.columns(0, 2)).singular_values().min();
    let reference = if overlap > 0.5 { identity } else { vecs };
    locate_nd_with_reference(model, guess, &reference)
}

pub fn locate_nd_with_reference<L: Landscape + ?Sized>(
    model: &L,
    guess: &DVector<f64>,
    reference: &DMatrix<f64>,
) -> Result<SingularityReport> {
    let (z, res, it) = newton(|x| residual_nd(model, x, reference).map(|(r, _)| r), guess)?;
    let (_, frame) = residual_nd(model, &z, reference)?;
    Ok(assemble(model, &z, &frame, res, it))
}

/// Local minima of the spectral gap on a uniform grid over `[lo, hi]^2`,
/// sorted by gap. Useful as Newton guesses.
pub fn gap_minima_2d<L: Landscape + ?Sized>(
    model: &L,
    lo: [f64; 2],
    hi: [f64; 2],
    n: usize,
    threshold: f64,
) -> Vec<([f64; 2], f64)> {
    let at = |i: usize, j: usize| {
        let x = lo[0] + (hi[0] - lo[0]) * i as f64 / (n - 1) as f64;
        let y = lo[1] + (hi[1] - lo[1]) * j as f64 / (n - 1) as f64;
        [x, y]
    };
    let gap: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let p = at(i, j);
                    lowest_pairs(&model.hessian(&DVector::from_column_slice(&p))).gap
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let g = gap[i][j];
            let is_min = (-1i32..=1)
                .flat_map(|a| (-1i32..=1).map(move |b| (a, b)))
                .filter(|&(a, b)| (a, b) != (0, 0))
                .all(|(a, b)| g <= gap[(i as i32 + a) as usize][(j as i32 + b) as usize]);
            if is_min && g < threshold {
                out.push((at(i, j), g));
            }
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

/// Bisection along the segment `a -> b` for the point where the two lowest
/// eigenvalues cross, using the signed quantity `u.H.u - w.H.w` built from
/// the eigenvectors `u, w` at `a`.
pub fn bisect_crossing<L: Landscape + ?Sized>(
    model: &L,
    a: &DVector<f64>,
    b: &DVector<f64>,
    tol: f64,
) -> Result<DVector<f64>> {
    let s = lowest_pairs(&model.hessian(a));
    let w = s
        .v2
        .clone()
        .ok_or_else(|| Error::InvalidInput("crossing needs dimension >= 2".into()))?;
    let u = s.v1.clone();
    let signed = |x: &DVector<f64>| {
        let h = model.hessian(x);
        u.dot(&(&h * &u)) - w.dot(&(&h * &w))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let point = |t: f64| a + (b - a) * t;
    let f_lo = signed(&point(lo));
    let f_hi = signed(&point(hi));
    if f_lo * f_hi > 0.0 {
        return Err(Error::Domain("no eigenvalue crossing on the segment".into()));
    }
    let len = (b - a).norm();
    while (hi - lo) * len > tol {
        let mid = 0.5 * (lo + hi);
        if signed(&point(mid)) * f_lo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() < f64::EPSILON {
            break;
        }
    }
    Ok(point(0.5 * (lo + hi)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineStability {
    Attractive,
    Repulsive,
    Transversal,
}

/// Behaviour of the ISD across a singular curve through `point` with unit
/// `normal`, sampled at `point +- offset * normal`.
pub fn line_stability<L: Landscape + ?Sized>(
    model: &L,
    point: &DVector<f64>,
    normal: &DVector<f64>,
    offset: f64,
) -> Result<LineStability> {
    let side = |s: f64| -> Result<f64> {
        let x = point + normal * (s * offset);
        let (f, _) = crate::flows::isd_field(model, &x, None, 0.0)?;
        Ok(f.dot(normal))
    };
    let plus = side(1.0)?;
    let minus = side(-1.0)?;
    Ok(if plus < 0.0 && minus > 0.0 {
        LineStability::Attractive
    } else if plus > 0.0 && minus < 0.0 {
        LineStability::Repulsive
    } else {
        LineStability::Transversal
    })
}
