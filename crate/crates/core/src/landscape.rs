//! Energy landscapes with derivatives up to third order.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

/// A smooth energy `E: R^N -> R` exposing `E`, `grad E`, `grad^2 E` and `grad^3 E`.
pub trait Landscape: Sync {
    fn dim(&self) -> usize;
    fn energy(&self, x: &DVector<f64>) -> f64;
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64>;
    fn third(&self, x: &DVector<f64>) -> Tensor3;
}

/// Serializable description of a builtin model.
///
/// JSON form is `{"variant": "...", "params": {...}}`. Matrices are nested
/// row-major arrays, third-order tensors are `[i][j][k]` nested arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", deny_unknown_fields)]
pub enum ModelSpec {
    /// `E(x) = (1 - x^2)^2`.
    DoubleWell1D {},
    /// `E(x, y) = (1 - x^2)^2 + alpha y^2`, `alpha > 0`.
    DoubleWell2D { alpha: f64 },
    /// `E(x, y) = (x^2 + y^2)^2 + x^2 - y^2 - x + y`.
    CoerciveQuartic {},
    /// `E = cos(a) x1 + sin(a) x2 + (lambda/2)|x|^2 + (s x1^3 + x1 x2^2)/2`.
    CubicSingularity { alpha: f64, lambda: f64, s: f64 },
    /// `CubicSingularity` with `s = 1` (so that `A = I`).
    IsotropicCanonical { alpha: f64, lambda: f64 },
    /// Isotropic singular plane in `(x1, x2)` coupled to a stable block in
    /// `x3..xN` with Hessian `h` and third derivatives `g` at the origin.
    MultiDE0 {
        alpha: f64,
        lambda: f64,
        h: Vec<Vec<f64>>,
        g: Vec<Vec<Vec<f64>>>,
    },
    /// `E = base + delta * perturbation`. Without an explicit perturbation a
    /// product of coordinate cubics is used (see [`ModelSpec::default_bump`]).
    Perturbed {
        base: Box<ModelSpec>,
        delta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perturbation: Option<Box<ModelSpec>>,
    },
    /// `E = b.x + x.H.x / 2`.
    Quadratic { h: Vec<Vec<f64>>, b: Vec<f64> },
    /// `E = b.x + x.H.x / 2 + G[x, x, x] / 6`.
    CubicPolynomial {
        h: Vec<Vec<f64>>,
        b: Vec<f64>,
        g: Vec<Vec<Vec<f64>>>,
    },
    /// `E = prod_m (c0 + c1 x_m + c2 x_m^2 + c3 x_m^3)`, one coefficient row per coordinate.
    ProductCubic { coeffs: Vec<[f64; 4]> },
}

impl ModelSpec {
    pub fn double_well_1d() -> Self {
        ModelSpec::DoubleWell1D {}
    }

    pub fn double_well_2d(alpha: f64) -> Self {
        ModelSpec::DoubleWell2D { alpha }
    }

    pub fn coercive_quartic() -> Self {
        ModelSpec::CoerciveQuartic {}
    }

    pub fn isotropic(alpha: f64, lambda: f64) -> Self {
        ModelSpec::IsotropicCanonical { alpha, lambda }
    }

    pub fn quadratic_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let h = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i] } else { 0.0 }).collect())
            .collect();
        ModelSpec::Quadratic { h, b: vec![0.0; n] }
    }

    /// Three-dimensional model with an attractive singular plane: isotropic
    /// cubic in `(x, y)` at gradient angle `pi/4`, stable direction `z` with
    /// curvature 1.1 and cubic term `z^3`.
    pub fn singular_plane_3d() -> Self {
        ModelSpec::MultiDE0 {
            alpha: FRAC_PI_4,
            lambda: 1.0,
            h: vec![vec![1.1]],
            g: vec![vec![vec![6.0]]],
        }
    }

    /// The default smooth perturbation used by `Perturbed` in dimension `n`.
    pub fn default_bump(n: usize) -> Self {
        ModelSpec::ProductCubic {
            coeffs: vec![[1.0, 0.5, 0.25, 0.125]; n],
        }
    }

    pub fn perturbed(base: ModelSpec, delta: f64) -> Self {
        ModelSpec::Perturbed {
            base: Box::new(base),
            delta,
            perturbation: None,
        }
    }

    /// Short lowercase name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::DoubleWell1D {} => "doublewell1d",
            ModelSpec::DoubleWell2D { .. } => "doublewell2d",
            ModelSpec::CoerciveQuartic {} => "coercive",
            ModelSpec::CubicSingularity { .. } => "cubic",
            ModelSpec::IsotropicCanonical { .. } => "isotropic",
            ModelSpec::MultiDE0 { .. } => "multide0",
            ModelSpec::Perturbed { .. } => "perturbed",
            ModelSpec::Quadratic { .. } => "quadratic",
            ModelSpec::CubicPolynomial { .. } => "cubicpoly",
            ModelSpec::ProductCubic { .. } => "productcubic",
        }
    }

    pub fn build(&self) -> Result<EnergyModel> {
        EnergyModel::new(self.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model spec serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Polynomial `c + b.x + x.H.x/2 + G[x,x,x]/6`.
#[derive(Debug, Clone)]
struct Poly3 {
    c: f64,
    b: DVector<f64>,
    h: DMatrix<f64>,
    g: Tensor3,
}

impl Poly3 {
    fn zeros(n: usize) -> Self {
        Poly3 {
            c: 0.0,
            b: DVector::zeros(n),
            h: DMatrix::zeros(n, n),
            g: Tensor3::zeros(n),
        }
    }

    fn energy(&self, x: &DVector<f64>) -> f64 {
        let gx = self.g.contract1(x);
        self.c + self.b.dot(x) + 0.5 * x.dot(&(&self.h * x)) + x.dot(&(gx * x)) / 6.0
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.b + &self.h * x + 0.5 * self.g.contract2(x, x)
    }

    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        &self.h + self.g.contract1(x)
    }
}

#[derive(Debug, Clone)]
enum Imp {
    Poly(Poly3),
    DoubleWell1D,
    DoubleWell2D(f64),
    CoerciveQuartic,
    ProductCubic(Vec<[f64; 4]>),
    Sum(Box<Imp>, f64, Box<Imp>),
}

/// An immutable, thread-safe energy model built from a [`ModelSpec`].
#[derive(Clone)]
pub struct EnergyModel {
    spec: ModelSpec,
    dim: usize,
    imp: Arc<Imp>,
}

impl fmt::Debug for EnergyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnergyModel")
            .field("spec", &self.spec)
            .field("dim", &self.dim)
            .finish()
    }
}

/// Relative asymmetry tolerated (and then averaged out) in user-supplied tensors.
const SYM_TOL: f64 = 1e-12;

fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidModel(format!("{what} must be square")));
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidModel(format!("{what} has non-finite entries")));
    }
    if (&m - m.transpose()).amax() > SYM_TOL * m.amax().max(1.0) {
        return Err(Error::InvalidModel(format!("{what} must be symmetric")));
    }
    Ok((&m + m.transpose()) * 0.5)
}

fn tensor_from_nested(nested: &[Vec<Vec<f64>>], n: usize, what: &str) -> Result<Tensor3> {
    let t = Tensor3::from_nested(nested)
        .filter(|t| t.dim() == n)
        .ok_or_else(|| Error::InvalidModel(format!("{what} must be {n}x{n}x{n}")))?;
    if !t.is_finite() {
        return Err(Error::InvalidModel(format!("{what} has non-finite entries")));
    }
    if t.max_asymmetry() > SYM_TOL * t.max_abs().max(1.0) {
        return Err(Error::InvalidModel(format!(
            "{what} must be symmetric under index permutations"
        )));
    }
    Ok(t.symmetrized())
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidModel(format!("{what} must be finite")))
    }
}

/// Isotropic-plane cubic used by `CubicSingularity`, `IsotropicCanonical` and `MultiDE0`.
fn singular_cubic(n: usize, alpha: f64, lambda: f64, s: f64) -> Poly3 {
    let mut p = Poly3::zeros(n);
    p.b[0] = alpha.cos();
    p.b[1] = alpha.sin();
    p.h[(0, 0)] = lambda;
    p.h[(1, 1)] = lambda;
    p.g.set_sym(0, 0, 0, 3.0 * s);
    p.g.set_sym(0, 1, 1, 1.0);
    p
}

fn build_imp(spec: &ModelSpec) -> Result<(usize, Imp)> {
    Ok(match spec {
        ModelSpec::DoubleWell1D {} => (1, Imp::DoubleWell1D),
        ModelSpec::DoubleWell2D { alpha } => {
            if !(alpha.is_finite() && *alpha > 0.0) {
                return Err(Error::InvalidModel(format!(
                    "DoubleWell2D requires alpha > 0 (got {alpha})"
                )));
            }
            (2, Imp::DoubleWell2D(*alpha))
        }
        ModelSpec::CoerciveQuartic {} => (2, Imp::CoerciveQuartic),
        ModelSpec::CubicSingularity { alpha, lambda, s } => {
            finite(*alpha, "alpha")?;
            finite(*lambda, "lambda")?;
            finite(*s, "s")?;
            (2, Imp::Poly(singular_cubic(2, *alpha, *lambda, *s)))
        }
        ModelSpec::IsotropicCanonical { alpha, lambda } => {
            finite(*alpha, "alpha")?;
            finite(*lambda, "lambda")?;
            (2, Imp::Poly(singular_cubic(2, *alpha, *lambda, 1.0)))
        }
        ModelSpec::MultiDE0 {
            alpha,
            lambda,
            h,
            g,
        } => {
            finite(*alpha, "alpha")?;
            finite(*lambda, "lambda")?;
            let h0 = matrix_from_rows(h, "MultiDE0 H0")?;
            let m = h0.nrows();
            if m == 0 {
                return Err(Error::InvalidModel(
                    "MultiDE0 needs at least one transverse coordinate (N >= 3)".into(),
                ));
            }
            let g0 = tensor_from_nested(g, m, "MultiDE0 G0")?;
            let min_eig = h0.clone().symmetric_eigenvalues().min();
            let floor = lambda.max(0.0);
            if min_eig <= floor {
                return Err(Error::InvalidModel(format!(
                    "MultiDE0 requires H0 > max(lambda, 0) I: smallest eigenvalue {min_eig} <= {floor}"
                )));
            }
            let n = m + 2;
            let mut p = singular_cubic(n, *alpha, *lambda, 1.0);
            for i in 0..m {
                for j in 0..m {
                    p.h[(i + 2, j + 2)] = h0[(i, j)];
                    for k in 0..m {
                        p.g[(i + 2, j + 2, k + 2)] = g0[(i, j, k)];
                    }
                }
            }
            (n, Imp::Poly(p))
        }
        ModelSpec::Perturbed {
            base,
            delta,
            perturbation,
        } => {
            if !(delta.is_finite() && *delta >= 0.0) {
                return Err(Error::InvalidModel(format!(
                    "Perturbed requires delta >= 0 (got {delta})"
                )));
            }
            let (n, b) = build_imp(base)?;
            let pert_spec = perturbation
                .as_deref()
                .cloned()
                .unwrap_or_else(|| ModelSpec::default_bump(n));
            let (np, p) = build_imp(&pert_spec)?;
            if np != n {
                return Err(Error::InvalidModel(format!(
                    "perturbation dimension {np} does not match base dimension {n}"
                )));
            }
            (n, Imp::Sum(Box::new(b), *delta, Box::new(p)))
        }
        ModelSpec::Quadratic { h, b } => {
            let hm = matrix_from_rows(h, "Quadratic H")?;
            let n = hm.nrows();
            if n == 0 || b.len() != n {
                return Err(Error::InvalidModel(format!(
                    "Quadratic linear term must have length {n} (got {})",
                    b.len()
                )));
            }
            let mut p = Poly3::zeros(n);
            p.h = hm;
            p.b = DVector::from_column_slice(b);
            if p.b.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidModel("Quadratic b has non-finite entries".into()));
            }
            (n, Imp::Poly(p))
        }
        ModelSpec::CubicPolynomial { h, b, g } => {
            let hm = matrix_from_rows(h, "CubicPolynomial H")?;
            let n = hm.nrows();
            if n == 0 || b.len() != n {
                return Err(Error::InvalidModel(format!(
                    "CubicPolynomial linear term must have length {n} (got {})",
                    b.len()
                )));
            }
            let mut p = Poly3::zeros(n);
            p.h = hm;
            p.b = DVector::from_column_slice(b);
            if p.b.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidModel(
                    "CubicPolynomial b has non-finite entries".into(),
                ));
            }
            p.g = tensor_from_nested(g, n, "CubicPolynomial G")?;
            (n, Imp::Poly(p))
        }
        ModelSpec::ProductCubic { coeffs } => {
            if coeffs.is_empty() {
                return Err(Error::InvalidModel("ProductCubic needs at least one coordinate".into()));
            }
            if coeffs.iter().flatten().any(|c| !c.is_finite()) {
                return Err(Error::InvalidModel("ProductCubic coefficients must be finite".into()));
            }
            (coeffs.len(), Imp::ProductCubic(coeffs.clone()))
        }
    })
}

/// `k`-th derivative of `c0 + c1 x + c2 x^2 + c3 x^3`.
fn cubic_deriv(c: &[f64; 4], x: f64, k: usize) -> f64 {
    match k {
        0 => c[0] + x * (c[1] + x * (c[2] + x * c[3])),
        1 => c[1] + x * (2.0 * c[2] + 3.0 * x * c[3]),
        2 => 2.0 * c[2] + 6.0 * x * c[3],
        3 => 6.0 * c[3],
        _ => 0.0,
    }
}

fn product_deriv(coeffs: &[[f64; 4]], x: &DVector<f64>, idx: &[usize]) -> f64 {
    let mut prod = 1.0;
    for (m, c) in coeffs.iter().enumerate() {
        let count = idx.iter().filter(|&&i| i == m).count();
        prod *= cubic_deriv(c, x[m], count);
    }
    prod
}

impl Imp {
    fn energy(&self, x: &DVector<f64>) -> f64 {
        match self {
            Imp::Poly(p) => p.energy(x),
            Imp::DoubleWell1D => (1.0 - x[0] * x[0]).powi(2),
            Imp::DoubleWell2D(a) => (1.0 - x[0] * x[0]).powi(2) + a * x[1] * x[1],
            Imp::CoerciveQuartic => {
                let (u, v) = (x[0], x[1]);
                let rho = u * u + v * v;
                rho * rho + u * u - v * v - u + v
            }
            Imp::ProductCubic(c) => product_deriv(c, x, &[]),
            Imp::Sum(a, d, b) => a.energy(x) + d * b.energy(x),
        }
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Imp::Poly(p) => p.gradient(x),
            Imp::DoubleWell1D => DVector::from_element(1, 4.0 * x[0].powi(3) - 4.0 * x[0]),
            Imp::DoubleWell2D(a) => {
                DVector::from_vec(vec![4.0 * x[0].powi(3) - 4.0 * x[0], 2.0 * a * x[1]])
            }
            Imp::CoerciveQuartic => {
                let (u, v) = (x[0], x[1]);
                let rho = u * u + v * v;
                DVector::from_vec(vec![
                    4.0 * u * rho + 2.0 * u - 1.0,
                    4.0 * v * rho - 2.0 * v + 1.0,
                ])
            }
            Imp::ProductCubic(c) => DVector::from_fn(c.len(), |i, _| product_deriv(c, x, &[i])),
            Imp::Sum(a, d, b) => a.gradient(x) + *d * b.gradient(x),
        }
    }

    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        match self {
            Imp::Poly(p) => p.hessian(x),
            Imp::DoubleWell1D => DMatrix::from_element(1, 1, 12.0 * x[0] * x[0] - 4.0),
            Imp::DoubleWell2D(a) => {
                DMatrix::from_row_slice(2, 2, &[12.0 * x[0] * x[0] - 4.0, 0.0, 0.0, 2.0 * a])
            }
            Imp::CoerciveQuartic => {
                let (u, v) = (x[0], x[1]);
                let off = 8.0 * u * v;
                DMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        12.0 * u * u + 4.0 * v * v + 2.0,
                        off,
                        off,
                        4.0 * u * u + 12.0 * v * v - 2.0,
                    ],
                )
            }
            Imp::ProductCubic(c) => {
                DMatrix::from_fn(c.len(), c.len(), |i, j| product_deriv(c, x, &[i, j]))
            }
            Imp::Sum(a, d, b) => a.hessian(x) + *d * b.hessian(x),
        }
    }

    fn third(&self, x: &DVector<f64>, n: usize) -> Tensor3 {
        match self {
            Imp::Poly(p) => p.g.clone(),
            Imp::DoubleWell1D => {
                let mut t = Tensor3::zeros(1);
                t[(0, 0, 0)] = 24.0 * x[0];
                t
            }
            Imp::DoubleWell2D(_) => {
                let mut t = Tensor3::zeros(2);
                t[(0, 0, 0)] = 24.0 * x[0];
                t
            }
            Imp::CoerciveQuartic => {
                let (u, v) = (x[0], x[1]);
                let mut t = Tensor3::zeros(2);
                t.set_sym(0, 0, 0, 24.0 * u);
                t.set_sym(0, 0, 1, 8.0 * v);
                t.set_sym(0, 1, 1, 8.0 * u);
                t.set_sym(1, 1, 1, 24.0 * v);
                t
            }
            Imp::ProductCubic(c) => {
                let mut t = Tensor3::zeros(n);
                for i in 0..n {
                    for j in i..n {
                        for k in j..n {
                            t.set_sym(i, j, k, product_deriv(c, x, &[i, j, k]));
                        }
                    }
                }
                t
            }
            Imp::Sum(a, d, b) => {
                let mut t = a.third(x, n);
                t.add_assign(&b.third(x, n).scaled(*d));
                t
            }
        }
    }
}

impl EnergyModel {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let (dim, imp) = build_imp(&spec)?;
        Ok(EnergyModel {
            spec,
            dim,
            imp: Arc::new(imp),
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }
}

impl Landscape for EnergyModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn energy(&self, x: &DVector<f64>) -> f64 {
        self.imp.energy(x)
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.imp.gradient(x)
    }

    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.imp.hessian(x)
    }

    fn third(&self, x: &DVector<f64>) -> Tensor3 {
        self.imp.third(x, self.dim)
    }
}

/// Result of [`eval`].
#[derive(Debug, Clone, PartialEq)]
pub enum Derivative {
    Energy(f64),
    Gradient(DVector<f64>),
    Hessian(DMatrix<f64>),
    Third(Tensor3),
}

/// Uniform access to the derivative of the given order (0 to 3).
pub fn eval<L: Landscape + ?Sized>(model: &L, x: &DVector<f64>, order: usize) -> Result<Derivative> {
    if x.len() != model.dim() {
        return Err(Error::InvalidInput(format!(
            "point has dimension {}, model has {}",
            x.len(),
            model.dim()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("evaluation point"));
    }
    Ok(match order {
        0 => Derivative::Energy(model.energy(x)),
        1 => Derivative::Gradient(model.gradient(x)),
        2 => Derivative::Hessian(model.hessian(x)),
        3 => Derivative::Third(model.third(x)),
        _ => {
            return Err(Error::InvalidInput(format!(
                "derivative order must be at most 3 (got {order})"
            )))
        }
    })
}

/// Maximum relative discrepancies between analytic derivatives and central
/// differences of the next lower order. The scale is `max(1, max|analytic|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub gradient: f64,
    pub hessian: f64,
    pub third: f64,
}

impl DerivativeReport {
    pub fn max(&self) -> f64 {
        self.gradient.max(self.hessian).max(self.third)
    }
}

pub fn check_derivatives<L: Landscape + ?Sized>(model: &L, x: &DVector<f64>, h: f64) -> DerivativeReport {
    let n = model.dim();
    let shifted = |i: usize, s: f64| {
        let mut y = x.clone();
        y[i] += s;
        y
    };

    let g = model.gradient(x);
    let g_fd = DVector::from_fn(n, |i, _| {
        (model.energy(&shifted(i, h)) - model.energy(&shifted(i, -h))) / (2.0 * h)
    });
    let gradient = (&g - &g_fd).amax() / g.amax().max(1.0);

    let hm = model.hessian(x);
    let mut h_fd = DMatrix::zeros(n, n);
    for j in 0..n {
        let col = (model.gradient(&shifted(j, h)) - model.gradient(&shifted(j, -h))) / (2.0 * h);
        h_fd.set_column(j, &col);
    }
    let hessian = (&hm - &h_fd).amax() / hm.amax().max(1.0);

    let t = model.third(x);
    let mut t_fd = Tensor3::zeros(n);
    for k in 0..n {
        let d = (model.hessian(&shifted(k, h)) - model.hessian(&shifted(k, -h))) / (2.0 * h);
        for i in 0..n {
            for j in 0..n {
                t_fd[(i, j, k)] = d[(i, j)];
            }
        }
    }
    let third = t.max_abs_diff(&t_fd) / t.max_abs().max(1.0);

    DerivativeReport {
        gradient,
        hessian,
        third,
    }
}

type EnergyFn = dyn Fn(&DVector<f64>) -> f64 + Send + Sync;

/// A user-supplied energy whose derivatives come from central differences.
#[derive(Clone)]
pub struct FiniteDifferenceModel {
    dim: usize,
    f: Arc<EnergyFn>,
    /// Step for the gradient.
    pub h: f64,
    /// Step for the Hessian (second differences of the energy).
    pub h2: f64,
    /// Step for the third derivative (differences of the Hessian).
    pub h3: f64,
}

impl FiniteDifferenceModel {
    pub fn new<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&DVector<f64>) -> f64 + Send + Sync + 'static,
    {
        FiniteDifferenceModel {
            dim,
            f: Arc::new(f),
            h: 1e-5,
            h2: 1e-4,
            h3: 1e-3,
        }
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    fn hessian_step(&self, x: &DVector<f64>, h: f64) -> DMatrix<f64> {
        let n = self.dim;
        let f = &self.f;
        let at = |i: usize, si: f64, j: usize, sj: f64| {
            let mut y = x.clone();
            y[i] += si;
            y[j] += sj;
            f(&y)
        };
        let mut m = DMatrix::zeros(n, n);
        let f0 = f(x);
        for i in 0..n {
            m[(i, i)] = (at(i, h, i, 0.0) - 2.0 * f0 + at(i, -h, i, 0.0)) / (h * h);
            for j in 0..i {
                let v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h))
                    / (4.0 * h * h);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }
}

impl Landscape for FiniteDifferenceModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn energy(&self, x: &DVector<f64>) -> f64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let h = self.h;
        DVector::from_fn(self.dim, |i, _| {
            let mut p = x.clone();
            let mut m = x.clone();
            p[i] += h;
            m[i] -= h;
            ((self.f)(&p) - (self.f)(&m)) / (2.0 * h)
        })
    }

    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.hessian_step(x, self.h2)
    }

    fn third(&self, x: &DVector<f64>) -> Tensor3 {
        let n = self.dim;
        let h = self.h3;
        let mut t = Tensor3::zeros(n);
        for k in 0..n {
            let mut p = x.clone();
            let mut m = x.clone();
            p[k] += h;
            m[k] -= h;
            let d = (self.hessian_step(&p, self.h2) - self.hessian_step(&m, self.h2)) / (2.0 * h);
            for i in 0..n {
                for j in 0..n {
                    t[(i, j, k)] = d[(i, j)];
                }
            }
        }
        // differencing only treats the last index specially
        t.symmetrized()
    }
}
