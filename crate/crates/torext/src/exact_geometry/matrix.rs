//! Dense rational matrices (Gaussian elimination, kernels, solving) and
//! integer column Hermite normal forms.

use super::{IVec, Int, QVec, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    nrows: usize,
    ncols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        QMat {
            nrows,
            ncols,
            data: vec![Rat::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows.
    pub fn from_rows(rows: &[QVec]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        QMat { nrows, ncols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[QVec]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, |c| c.len());
        let mut m = QMat::zero(nrows, ncols);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                *m.at_mut(i, j) = x.clone();
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[IVec]) -> Self {
        let qrows: Vec<QVec> = rows.iter().map(|r| super::iv_to_qv(r)).collect();
        QMat::from_rows(&qrows)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.ncols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.ncols + j]
    }

    pub fn row(&self, i: usize) -> QVec {
        self.data[i * self.ncols..(i + 1) * self.ncols].to_vec()
    }

    pub fn col(&self, j: usize) -> QVec {
        (0..self.nrows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zero(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rat]) -> QVec {
        assert_eq!(v.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                (0..self.ncols)
                    .map(|j| self.at(i, j) * &v[j])
                    .sum::<Rat>()
            })
            .collect()
    }

    /// Matrix product.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.ncols, other.nrows);
        let mut out = QMat::zero(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for j in 0..other.ncols {
                let mut acc = Rat::zero();
                for k in 0..self.ncols {
                    acc += self.at(i, k) * other.at(k, j);
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns the pivot
    /// columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.ncols {
                    self.data.swap(r * self.ncols + j, p * self.ncols + j);
                }
            }
            let inv = Rat::one() / self.at(r, c).clone();
            for j in c..self.ncols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.nrows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in c..self.ncols {
                        let v = self.at(i, j) - &f * self.at(r, j);
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{x : Ax = 0}`.
    pub fn kernel(&self) -> Vec<QVec> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.ncols];
            v[free] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `Ax = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<QVec> {
        assert_eq!(b.len(), self.nrows);
        let mut aug = QMat::zero(self.nrows, self.ncols + 1);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.ncols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.ncols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.ncols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut aug = QMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Rat::one();
        }
        let pivots = aug.rref();
        // Invertible iff the pivots are exactly the left block's columns.
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Some(inv)
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Rat {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            det *= m.at(c, c).clone();
            let inv = Rat::one() / m.at(c, c).clone();
            for i in (c + 1)..n {
                if !m.at(i, c).is_zero() {
                    let f = m.at(i, c) * &inv;
                    for j in c..n {
                        let v = m.at(i, j) - &f * m.at(c, j);
                        *m.at_mut(i, j) = v;
                    }
                }
            }
        }
        det
    }
}

/// Rank of a set of integer vectors.
pub fn int_rank(vecs: &[IVec]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    QMat::from_int_rows(vecs).rank()
}

/// Column Hermite normal form.
///
/// Returns `(h, u)` with `a · u = h`, `u` unimodular, and `h` in column
/// echelon form: pivot rows strictly increase column by column, pivots are
/// positive, entries to the left of a pivot in its row are reduced modulo the
/// pivot, and zero columns are collected at the right end. The result is the
/// canonical basis matrix of the column span (as a lattice).
pub fn hnf_cols(a: &[IVec]) -> (Vec<IVec>, Vec<IVec>) {
    // `a` is given as a list of rows; we operate on columns.
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut h: Vec<IVec> = a.to_vec();
    let mut u: Vec<IVec> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect();
    // u is stored as rows of the ncols × ncols transformation.

    let col_addmul = |h: &mut Vec<IVec>, u: &mut Vec<IVec>, dst: usize, src: usize, q: &Int| {
        // column dst -= q * column src
        for row in h.iter_mut() {
            let v = &row[dst] - q * &row[src];
            row[dst] = v;
        }
        for row in u.iter_mut() {
            let v = &row[dst] - q * &row[src];
            row[dst] = v;
        }
    };
    let col_swap = |h: &mut Vec<IVec>, u: &mut Vec<IVec>, x: usize, y: usize| {
        for row in h.iter_mut() {
            row.swap(x, y);
        }
        for row in u.iter_mut() {
            row.swap(x, y);
        }
    };
    let col_negate = |h: &mut Vec<IVec>, u: &mut Vec<IVec>, x: usize| {
        for row in h.iter_mut() {
            row[x] = -row[x].clone();
        }
        for row in u.iter_mut() {
            row[x] = -row[x].clone();
        }
    };

    let mut c = 0; // next pivot column position
    for i in 0..nrows {
        if c == ncols {
            break;
        }
        // Euclidean reduction across columns c.. in row i until at most one
        // nonzero entry remains.
        loop {
            let nz: Vec<usize> = (c..ncols).filter(|&j| !h[i][j].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            // Pick the entry with smallest absolute value as the reducer.
            let &jmin = nz
                .iter()
                .min_by_key(|&&j| h[i][j].abs())
                .expect("nonempty");
            for &j in &nz {
                if j != jmin {
                    let q = h[i][j].div_floor(&h[i][jmin]);
                    if !q.is_zero() {
                        col_addmul(&mut h, &mut u, j, jmin, &q);
                    }
                }
            }
        }
        let Some(j) = (c..ncols).find(|&j| !h[i][j].is_zero()) else {
            continue;
        };
        if j != c {
            col_swap(&mut h, &mut u, c, j);
        }
        if h[i][c].is_negative() {
            col_negate(&mut h, &mut u, c);
        }
        // Reduce the columns left of the pivot modulo the pivot.
        let pivot = h[i][c].clone();
        for j in 0..c {
            let q = h[i][j].div_floor(&pivot);
            if !q.is_zero() {
                col_addmul(&mut h, &mut u, j, c, &q);
            }
        }
        c += 1;
    }
    (h, u)
}

/// Canonical Hermite basis of the lattice generated by the given integer
/// vectors: the nonzero columns of the column HNF, returned as vectors.
pub fn hnf_basis(gens: &[IVec]) -> Vec<IVec> {
    if gens.is_empty() {
        return Vec::new();
    }
    let dim = gens[0].len();
    // Assemble the matrix whose columns are the generators.
    let rows: Vec<IVec> = (0..dim)
        .map(|i| gens.iter().map(|g| g[i].clone()).collect())
        .collect();
    let (h, _) = hnf_cols(&rows);
    let ncols = gens.len();
    let mut basis = Vec::new();
    for j in 0..ncols {
        let col: IVec = (0..dim).map(|i| h[i][j].clone()).collect();
        if !super::is_zero_vec(&col) {
            basis.push(col);
        }
    }
    basis
}

/// Basis of the integer kernel `{x ∈ ℤⁿ : Ax = 0}` of an integer matrix given
/// by rows. The result is saturated (a basis of the full kernel lattice) and
/// canonical.
pub fn int_kernel(rows: &[IVec], ncols: usize) -> Vec<IVec> {
    if rows.is_empty() {
        // Kernel is all of ℤⁿ; canonical basis is the identity.
        return (0..ncols)
            .map(|i| {
                (0..ncols)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
    }
    let (h, u) = hnf_cols(rows);
    let mut kernel_gens: Vec<IVec> = Vec::new();
    for j in 0..ncols {
        let col_is_zero = (0..rows.len()).all(|i| h[i][j].is_zero());
        if col_is_zero {
            kernel_gens.push((0..ncols).map(|i| u[i][j].clone()).collect());
        }
    }
    hnf_basis(&kernel_gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::{ivec, qvec, qvec_frac};

    #[test]
    fn rref_rank_kernel() {
        let m = QMat::from_rows(&[qvec(&[1, 2, 3]), qvec(&[2, 4, 6]), qvec(&[1, 0, 1])]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x == &Rat::zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = QMat::from_rows(&[qvec(&[2, 1]), qvec(&[1, 1])]);
        let x = m.solve(&qvec(&[3, 2])).unwrap();
        assert_eq!(x, qvec(&[1, 1]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
        let singular = QMat::from_rows(&[qvec(&[1, 2]), qvec(&[2, 4])]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&qvec(&[0, 1])).is_none());
    }

    #[test]
    fn det_values() {
        let m = QMat::from_rows(&[qvec(&[2, 1]), qvec(&[1, 1])]);
        assert_eq!(m.det(), Rat::one());
        let m2 = QMat::from_rows(&[qvec_frac(&[(1, 2), (0, 1)]), qvec(&[0, 3])]);
        assert_eq!(m2.det(), qvec_frac(&[(3, 2)])[0]);
    }

    #[test]
    fn hnf_basis_canonicalises_generators() {
        // Columns (2,0),(0,2),(1,0) generate the lattice (1,0),(0,2).
        let basis = hnf_basis(&[ivec(&[2, 0]), ivec(&[0, 2]), ivec(&[1, 0])]);
        assert_eq!(basis, vec![ivec(&[1, 0]), ivec(&[0, 2])]);
    }

    #[test]
    fn int_kernel_is_saturated() {
        // Kernel of (2, 4) in ℤ²: generated by (2,-1), not (4,-2).
        let k = int_kernel(&[ivec(&[2, 4])], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(super::super::primitive_signless(&k[0]), ivec(&[2, -1]));
        // Kernel of the empty system is everything.
        let full = int_kernel(&[], 3);
        assert_eq!(full.len(), 3);
    }

    #[test]
    fn hnf_transformation_is_consistent() {
        let rows = vec![ivec(&[2, 4, 6]), ivec(&[1, 3, 5])];
        let (h, u) = hnf_cols(&rows);
        // a·u = h, checked entrywise.
        for i in 0..2 {
            for j in 0..3 {
                let mut acc = Int::zero();
                for k in 0..3 {
                    acc += &rows[i][k] * &u[k][j];
                }
                assert_eq!(acc, h[i][j]);
            }
        }
    }
}
