//! Lowest eigenpairs, sign gauge and spectral windows of symmetric matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Lowest two eigenpairs of a symmetric matrix.
///
/// For `N = 1` there is no second eigenvalue; `lambda2` and `gap` are then
/// `+inf` and `v2` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInfo {
    pub lambda1: f64,
    pub lambda2: f64,
    pub v1: DVector<f64>,
    pub v2: Option<DVector<f64>>,
    pub gap: f64,
    pub index: usize,
}

impl SpectralInfo {
    /// Degenerate when `gap < 1e-9 max(1, |lambda1|)`.
    pub fn is_degenerate(&self) -> bool {
        self.gap < 1e-9 * self.lambda1.abs().max(1.0)
    }

    /// `lambda1 < 0 < lambda2`.
    pub fn is_index1(&self) -> bool {
        self.lambda1 < 0.0 && self.lambda2 > 0.0
    }

    /// `min(-lambda1, lambda2)`, the index-1 margin.
    pub fn margin(&self) -> f64 {
        (-self.lambda1).min(self.lambda2)
    }
}

/// Flips `v` so its first component above `1e-12` in magnitude is positive.
pub fn canonical_sign(mut v: DVector<f64>) -> DVector<f64> {
    if let Some(c) = v.iter().find(|c| c.abs() > 1e-12) {
        if *c < 0.0 {
            v.neg_mut();
        }
    }
    v
}

/// Full decomposition with eigenvalues ascending and canonically signed vectors.
pub fn sorted_eigen(h: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = h.nrows();
    // shifting by the mean eigenvalue keeps relative accuracy near crossings
    let shift = h.trace() / n as f64;
    let shifted = h - DMatrix::identity(n, n) * shift;
    let eig = shifted.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]] + shift);
    let mut vectors = DMatrix::zeros(n, n);
    for (c, &k) in order.iter().enumerate() {
        let col = canonical_sign(eig.eigenvectors.column(k).normalize());
        vectors.set_column(c, &col);
    }
    (values, vectors)
}

pub fn lowest_pairs(h: &DMatrix<f64>) -> SpectralInfo {
    let n = h.nrows();
    let (values, vectors) = sorted_eigen(h);
    let index = values.iter().filter(|&&l| l < 0.0).count();
    let lambda1 = values[0];
    let v1 = vectors.column(0).into_owned();
    if n == 1 {
        return SpectralInfo {
            lambda1,
            lambda2: f64::INFINITY,
            v1,
            v2: None,
            gap: f64::INFINITY,
            index,
        };
    }
    let lambda2 = values[1];
    SpectralInfo {
        lambda1,
        lambda2,
        v1,
        v2: Some(vectors.column(1).into_owned()),
        gap: (lambda2 - lambda1).max(0.0),
        index,
    }
}

/// Returns `v` or `-v`, whichever has non-negative overlap with `prev`.
pub fn align_sign(v: &DVector<f64>, prev: &DVector<f64>) -> DVector<f64> {
    if v.dot(prev) < 0.0 {
        -v
    } else {
        v.clone()
    }
}

/// Orthonormal basis (as columns) of the eigenvectors whose eigenvalues lie
/// in `[center - radius, center + radius]`.
pub fn invariant_subspace(
    h: &DMatrix<f64>,
    center: f64,
    radius: f64,
    expected_rank: usize,
) -> Result<DMatrix<f64>> {
    const EDGE_TOL: f64 = 1e-9;
    let (values, vectors) = sorted_eigen(h);
    let (lo, hi) = (center - radius, center + radius);
    let mut cols = Vec::new();
    for (i, &l) in values.iter().enumerate() {
        if (l - lo).abs() < EDGE_TOL || (l - hi).abs() < EDGE_TOL {
            return Err(Error::AmbiguousWindow {
                value: l,
                tol: EDGE_TOL,
            });
        }
        if l > lo && l < hi {
            cols.push(vectors.column(i).into_owned());
        }
    }
    if cols.len() != expected_rank {
        return Err(Error::RankMismatch {
            expected: expected_rank,
            found: cols.len(),
        });
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Largest principal-angle sine between the column spans of two orthonormal bases.
pub fn subspace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let pa = a * a.transpose();
    let pb = b * b.transpose();
    (pa - pb).singular_values().max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn diagonal_matrix() {
        let s = lowest_pairs(&DMatrix::from_row_slice(2, 2, &[-4.0, 0.0, 0.0, 12.0]));
        assert_eq!(s.lambda1, -4.0);
        assert_eq!(s.lambda2, 12.0);
        assert_abs_diff_eq!(s.v1, DVector::from_vec(vec![1.0, 0.0]), epsilon = 1e-15);
        assert_eq!(s.index, 1);
    }

    #[test]
    fn identity_is_degenerate() {
        let s = lowest_pairs(&DMatrix::identity(3, 3));
        assert_eq!(s.gap, 0.0);
        assert!(s.is_degenerate());
    }

    #[test]
    fn one_dimensional_has_infinite_gap() {
        let s = lowest_pairs(&DMatrix::from_element(1, 1, -4.0));
        assert_eq!(s.lambda1, -4.0);
        assert!(s.gap.is_infinite());
        assert!(s.v2.is_none());
        assert_eq!(s.index, 1);
    }

    #[test]
    fn align_sign_cases() {
        let v = DVector::from_vec(vec![0.6, 0.8]);
        assert_eq!(align_sign(&v, &v), v);
        assert_eq!(align_sign(&(-&v), &v), v);
        let w = DVector::from_vec(vec![0.8, -0.6]);
        assert_eq!(align_sign(&w, &v), w);
    }

    #[test]
    fn window_selects_pair() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 5.0]));
        let b = invariant_subspace(&h, 1.0, 1.0, 2).unwrap();
        let e12 = DMatrix::from_columns(&[
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
        ]);
        assert!(subspace_distance(&b, &e12) < 1e-12);
        assert!(matches!(
            invariant_subspace(&h, 1.0, 1.0, 3),
            Err(Error::RankMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            invariant_subspace(&h, 1.0, 4.0, 2),
            Err(Error::AmbiguousWindow { .. })
        ));
    }

    fn sym(entries: &[f64], n: usize) -> DMatrix<f64> {
        let a = DMatrix::from_column_slice(n, n, &entries[..n * n]);
        (&a + a.transpose()) * 0.5
    }

    proptest! {
        #[test]
        fn spectral_invariants(entries in prop::collection::vec(-3.0f64..3.0, 16)) {
            let h = sym(&entries, 4);
            let s = lowest_pairs(&h);
            prop_assert!(s.lambda1 <= s.lambda2);
            prop_assert!(s.gap >= 0.0);
            prop_assert!((s.v1.norm() - 1.0).abs() < 1e-12);
            let v2 = s.v2.clone().unwrap();
            prop_assert!((v2.norm() - 1.0).abs() < 1e-12);
            prop_assert!(s.v1.dot(&v2).abs() < 1e-10);
            let res = (&h * &s.v1 - &s.v1 * s.lambda1).norm();
            prop_assert!(res < 1e-9 * h.norm().max(1.0));
        }

        #[test]
        fn reconstruction(entries in prop::collection::vec(-3.0f64..3.0, 9)) {
            let h = sym(&entries, 3);
            let (vals, vecs) = sorted_eigen(&h);
            let back = &vecs * DMatrix::from_diagonal(&vals) * vecs.transpose();
            prop_assert!((back - &h).norm() < 1e-9 * h.norm().max(1.0));
        }
    }
}
