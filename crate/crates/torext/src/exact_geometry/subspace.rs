//! Linear subspaces of ℚⁿ in a canonical basis, with the lattice operations
//! (sum, intersection, containment) used by filtration data.

use super::matrix::QMat;
use super::{QVec, Rat};
use num_traits::{One, Zero};

/// A linear subspace of ℚⁿ.
///
/// The basis is kept in reduced column echelon form: each basis vector has a
/// leading 1 in a distinct pivot row, pivot rows strictly increase, and every
/// pivot row is zero in all other basis vectors. Two subspaces are equal iff
/// their canonical bases are equal, so `PartialEq` is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<QVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        Subspace { ambient, basis }
    }

    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: &[QVec]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
        }
        // Row-reduce the transpose: the RREF rows of the transposed matrix
        // are exactly the reduced-column-echelon basis.
        let mut m = QMat::from_rows(vectors);
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|i| m.row(i)).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn contains_vec(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce v against the echelon basis.
        let mut w = v.to_vec();
        for b in &self.basis {
            let pivot = b
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis vector is nonzero");
            if !w[pivot].is_zero() {
                let f = w[pivot].clone();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= &f * bi;
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vec(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vectors)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        // x ∈ A∩B ⟺ x = A·s = B·t. Solve [A | -B] (a,b-coeff) kernel and
        // map the A-part back.
        let cols: Vec<QVec> = self
            .basis
            .iter()
            .cloned()
            .chain(other.basis.iter().map(|v| super::qneg(v)))
            .collect();
        if cols.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let m = QMat::from_cols(&cols);
        let kernel = m.kernel();
        let vectors: Vec<QVec> = kernel
            .iter()
            .map(|k| {
                let mut v = vec![Rat::zero(); self.ambient];
                for (j, b) in self.basis.iter().enumerate() {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += &k[j] * bi;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vectors)
    }
}
