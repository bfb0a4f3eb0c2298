//! Full-rank lattices in ℚⁿ: canonical bases, duals, joins and quotient
//! orders.

use super::matrix::{hnf_basis, QMat};
use super::{denominator_lcm, iv_to_qv, IVec, Int, QVec, Rat};
use crate::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Zero};

/// A full-rank lattice `L ⊆ ℚⁿ`, stored by its canonical (Hermite) basis.
/// Equal lattices have equal bases, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    /// Basis columns in canonical form.
    basis: Vec<QVec>,
    /// Cached inverse of the basis matrix, for coordinate computations.
    inverse: QMat,
}

impl Lattice {
    /// The standard lattice ℤⁿ.
    pub fn standard(ambient: usize) -> Lattice {
        let basis: Vec<QVec> = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        Lattice {
            ambient,
            basis,
            inverse: QMat::identity(ambient),
        }
    }

    /// The lattice generated by the given vectors. Fails unless the
    /// generators span the ambient space.
    pub fn from_generators(ambient: usize, generators: &[QVec]) -> Result<Lattice> {
        for g in generators {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch(
                    "lattice generator length mismatch".into(),
                ));
            }
        }
        let mut den = Int::one();
        for g in generators {
            den = den.lcm(&denominator_lcm(g));
        }
        let int_gens: Vec<IVec> = generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| x.numer() * (&den / x.denom()))
                    .collect::<IVec>()
            })
            .collect();
        let hermite = hnf_basis(&int_gens);
        if hermite.len() != ambient {
            return Err(Error::Lattice(format!(
                "lattice generators span a rank-{} sublattice of a rank-{} space",
                hermite.len(),
                ambient
            )));
        }
        let den_rat = Rat::from_integer(den);
        let basis: Vec<QVec> = hermite
            .iter()
            .map(|col| {
                col.iter()
                    .map(|x| Rat::from_integer(x.clone()) / &den_rat)
                    .collect()
            })
            .collect();
        let mat = QMat::from_cols(&basis);
        let inverse = mat
            .inverse()
            .expect("full-rank basis matrix is invertible");
        Ok(Lattice {
            ambient,
            basis,
            inverse,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    /// Coordinates of a vector in the lattice basis.
    pub fn coordinates(&self, v: &[Rat]) -> QVec {
        self.inverse.mul_vec(v)
    }

    /// The ambient vector with the given basis coordinates.
    pub fn from_coordinates(&self, coords: &[Rat]) -> QVec {
        assert_eq!(coords.len(), self.ambient);
        let mut out = vec![Rat::zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, bi) in out.iter_mut().zip(b) {
                *o += c * bi;
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v).iter().all(|c| c.denom().is_one())
    }

    pub fn contains_int(&self, v: &[Int]) -> bool {
        self.contains(&iv_to_qv(v))
    }

    /// The smallest lattice containing this one and all the given points.
    pub fn join(&self, points: &[QVec]) -> Result<Lattice> {
        let mut gens = self.basis.clone();
        gens.extend(points.iter().cloned());
        Lattice::from_generators(self.ambient, &gens)
    }

    /// The dual lattice `{u : ⟨u, v⟩ ∈ ℤ ∀ v ∈ L}`.
    pub fn dual(&self) -> Lattice {
        let mat = QMat::from_cols(&self.basis);
        let dual_cols = mat
            .transpose()
            .inverse()
            .expect("basis matrix is invertible");
        let cols: Vec<QVec> = (0..self.ambient).map(|j| dual_cols.col(j)).collect();
        Lattice::from_generators(self.ambient, &cols)
            .expect("dual of a full-rank lattice is full-rank")
    }

    /// True if this lattice contains `other` as a sublattice.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// The order of `v` in the quotient (ambient ℚ-span)/L, i.e. the least
    /// `k ≥ 1` with `k·v ∈ L`.
    pub fn order_in_quotient(&self, v: &[Rat]) -> Int {
        denominator_lcm(&self.coordinates(v))
    }
}
