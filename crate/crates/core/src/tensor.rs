use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Dense `n x n x n` tensor, row-major in `(i, j, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    /// Builds a tensor from nested `[i][j][k]` vectors.
    pub fn from_nested(nested: &[Vec<Vec<f64>>]) -> Option<Self> {
        let n = nested.len();
        let mut t = Self::zeros(n);
        for (i, plane) in nested.iter().enumerate() {
            if plane.len() != n {
                return None;
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != n {
                    return None;
                }
                for (k, &v) in row.iter().enumerate() {
                    t[(i, j, k)] = v;
                }
            }
        }
        Some(t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets `value` at every permutation of `(i, j, k)`.
    pub fn set_sym(&mut self, i: usize, j: usize, k: usize, value: f64) {
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            self[(a, b, c)] = value;
        }
    }

    /// `T[u]_{ij} = sum_k T_{ijk} u_k`.
    pub fn contract1(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| (0..n).map(|k| self[(i, j, k)] * u[k]).sum())
    }

    /// `T[u, v]_i = sum_{jk} T_{ijk} u_j v_k`.
    pub fn contract2(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        self.contract1(v) * u
    }

    pub fn contract3(&self, u: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> f64 {
        self.contract2(v, w).dot(u)
    }

    /// Expresses the tensor in the orthonormal basis given by the columns of `frame`.
    pub fn change_basis(&self, frame: &DMatrix<f64>) -> Tensor3 {
        let n = self.n;
        let cols: Vec<DVector<f64>> = (0..n).map(|c| frame.column(c).into_owned()).collect();
        let mut out = Tensor3::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let m = self.contract1(&cols[j]);
                for k in 0..n {
                    out[(i, j, k)] = (&m * &cols[k]).dot(&cols[i]);
                }
            }
        }
        out
    }

    /// Largest difference between an entry and any of its index permutations.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self[(i, j, k)];
                    for (a, b, c) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        worst = worst.max((v - self[(a, b, c)]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Average over all index permutations.
    pub fn symmetrized(&self) -> Tensor3 {
        let n = self.n;
        let mut s = Tensor3::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    s[(i, j, k)] = (self[(i, j, k)]
                        + self[(i, k, j)]
                        + self[(j, i, k)]
                        + self[(j, k, i)]
                        + self[(k, i, j)]
                        + self[(k, j, i)])
                        / 6.0;
                }
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.data.iter_mut().for_each(|v| *v *= factor);
        self
    }

    pub fn add_assign(&mut self, other: &Tensor3) {
        self.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self[(i, j, k)]).collect()).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        &self.data[(i * self.n + j) * self.n + k]
    }
}

impl std::ops::IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut f64 {
        &mut self.data[(i * self.n + j) * self.n + k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_sym_fills_all_permutations() {
        let mut t = Tensor3::zeros(3);
        t.set_sym(0, 1, 2, 5.0);
        assert_eq!(t[(2, 1, 0)], 5.0);
        assert_eq!(t[(1, 0, 2)], 5.0);
        assert_eq!(t.max_asymmetry(), 0.0);
    }

    #[test]
    fn contractions_agree() {
        let mut t = Tensor3::zeros(2);
        t.set_sym(0, 0, 0, 3.0);
        t.set_sym(0, 1, 1, 1.0);
        let u = DVector::from_vec(vec![0.5, -2.0]);
        let m = t.contract1(&u);
        // [[3 u1, u2], [u2, u1]]
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[1.5, -2.0, -2.0, 0.5]));
        let s = t.contract3(&u, &u, &u);
        assert!((s - (3.0 * 0.125 + 3.0 * 0.5 * 4.0)).abs() < 1e-14);
    }

    #[test]
    fn change_basis_identity_is_noop() {
        let mut t = Tensor3::zeros(3);
        t.set_sym(0, 1, 2, 1.0);
        t.set_sym(2, 2, 2, 4.0);
        let same = t.change_basis(&DMatrix::identity(3, 3));
        assert_eq!(same.max_abs_diff(&t), 0.0);
    }
}
