//! Graded sheaf cohomology of differences of nef line bundles on a toric
//! surface, computed combinatorially.
//!
//! For compatible polyhedra `plus` and `minus`, the degree-`m` cohomology of
//! the difference bundle is read off the topology of `minus ∖ (plus - m)`:
//! degree zero is one-dimensional exactly when the difference is empty, and
//! degree one counts its connected components beyond the first. A Čech
//! complex over the maximal-cone cover provides an independent oracle.

use crate::difference_topology::components;
use crate::exact_geometry::{qdot, qneg, Cone, Polyhedron, QMat, QVec, Rat};
use crate::fans_divisors::{divisor_of, is_compatible, Fan, ToricDivisor};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Dimensions of the reduced cohomology (degrees -1 and 0) of the difference
/// `minus ∖ plus`: `(1, 0)` when the difference is empty, otherwise
/// `(0, #components - 1)`.
pub fn reduced_dims(minus: &Polyhedron, plus: &Polyhedron) -> Result<(usize, usize)> {
    if minus.is_empty() {
        return Err(Error::EmptyInput("difference with an empty minuend"));
    }
    if !plus.is_empty() && plus.contains_polyhedron(minus) {
        return Ok((1, 0));
    }
    let d = components(minus, plus)?;
    Ok((0, d.components.len().saturating_sub(1)))
}

/// The nonzero graded cohomology of a difference bundle, keyed by grading
/// vector (a point of the dual lattice).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedTable {
    h0: BTreeMap<QVec, usize>,
    h1: BTreeMap<QVec, usize>,
}

impl GradedTable {
    pub fn h0(&self) -> &BTreeMap<QVec, usize> {
        &self.h0
    }

    pub fn h1(&self) -> &BTreeMap<QVec, usize> {
        &self.h1
    }

    pub fn h0_at(&self, m: &[Rat]) -> usize {
        self.h0.get(m).copied().unwrap_or(0)
    }

    pub fn h1_at(&self, m: &[Rat]) -> usize {
        self.h1.get(m).copied().unwrap_or(0)
    }

    pub fn h0_total(&self) -> usize {
        self.h0.values().sum()
    }

    pub fn h1_total(&self) -> usize {
        self.h1.values().sum()
    }
}

/// Computes the full graded cohomology table of `O(plus) ⊗ O(minus)^{-1}`.
///
/// Both polyhedra must be bounded and compatible with the fan. Gradings
/// range over the lattice points of `plus + (-minus)`; outside that window
/// all cohomology vanishes.
pub fn graded_cohomology_table(
    fan: &Fan,
    plus: &Polyhedron,
    minus: &Polyhedron,
) -> Result<GradedTable> {
    if plus.is_empty() || minus.is_empty() {
        return Err(Error::EmptyInput("cohomology of an empty polyhedron"));
    }
    if !plus.is_bounded() || !minus.is_bounded() {
        return Err(Error::Unbounded(
            "graded tables need bounded polyhedra".into(),
        ));
    }
    for (name, p) in [("first", plus), ("second", minus)] {
        if !is_compatible(p, fan) {
            return Err(Error::Incompatible(format!(
                "the {} polyhedron is not compatible with the fan",
                name
            )));
        }
    }
    let window = plus.minkowski(&minus.negated())?;
    let m_lattice = fan.lattice().dual();
    let mut h0: BTreeMap<QVec, usize> = BTreeMap::new();
    let mut h1: BTreeMap<QVec, usize> = BTreeMap::new();
    for m in window.lattice_points(&m_lattice)? {
        let shifted = plus.translate(&qneg(&m));
        let (a, b) = reduced_dims(minus, &shifted)?;
        if a > 0 {
            h0.insert(m.clone(), a);
        }
        if b > 0 {
            h1.insert(m.clone(), b);
        }
    }
    Ok(GradedTable { h0, h1 })
}

/// The dimension of the space of equivariant degree-zero extensions of
/// `O(minus)` by `O(plus)`: one less than the number of connected components
/// of `minus ∖ plus` (zero if the difference is empty).
pub fn ext_dim_equivariant(fan: &Fan, plus: &Polyhedron, minus: &Polyhedron) -> Result<usize> {
    for p in [plus, minus] {
        if !is_compatible(p, fan) {
            return Err(Error::Incompatible(
                "extension dimensions need fan-compatible polyhedra".into(),
            ));
        }
    }
    Ok(reduced_dims(minus, plus)?.1)
}

fn section_exists(
    tau: &Cone,
    fan: &Fan,
    lp: &ToricDivisor,
    lm: &ToricDivisor,
    m: &[Rat],
) -> Result<bool> {
    for r in tau.rays() {
        let (cp, cm) = match (lp.coeff_of(r), lm.coeff_of(r)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidFan(
                    "cone ray is not a ray of the fan".into(),
                ))
            }
        };
        if qdot(m, &fan.lattice_ray(r)) + cp - cm < Rat::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Čech cohomology dimensions `(h⁰, h¹)` of the difference bundle in degree
/// `m`, over the cover by maximal-cone charts. Independent of the
/// component-counting formula; used to cross-validate it.
pub fn cech_cohomology_dims(
    fan: &Fan,
    plus: &Polyhedron,
    minus: &Polyhedron,
    m: &[Rat],
) -> Result<(usize, usize)> {
    let lp = divisor_of(plus, fan)?;
    let lm = divisor_of(minus, fan)?;
    let cones = fan.maximal_cones();
    let k = cones.len();

    let mut c0: Vec<usize> = Vec::new();
    for (i, c) in cones.iter().enumerate() {
        if section_exists(c, fan, &lp, &lm, m)? {
            c0.push(i);
        }
    }
    let mut c1: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let tau = cones[i].intersect(&cones[j]);
            if section_exists(&tau, fan, &lp, &lm, m)? {
                c1.push((i, j));
            }
        }
    }
    let mut c2: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let tau = cones[i].intersect(&cones[j]);
            for l in (j + 1)..k {
                let tau2 = tau.intersect(&cones[l]);
                if section_exists(&tau2, fan, &lp, &lm, m)? {
                    c2.push((i, j, l));
                }
            }
        }
    }

    // d⁰: (f_i) ↦ (f_j - f_i) on overlaps.
    let mut d0 = QMat::zero(c1.len(), c0.len());
    for (row, &(i, j)) in c1.iter().enumerate() {
        if let Some(col) = c0.iter().position(|&x| x == i) {
            *d0.at_mut(row, col) = -Rat::one();
        }
        if let Some(col) = c0.iter().position(|&x| x == j) {
            *d0.at_mut(row, col) += Rat::one();
        }
    }
    // d¹: (g_{ij}) ↦ g_{jl} - g_{il} + g_{ij}.
    let mut d1 = QMat::zero(c2.len(), c1.len());
    for (row, &(i, j, l)) in c2.iter().enumerate() {
        for (pair, sign) in [((j, l), 1), ((i, l), -1), ((i, j), 1)] {
            if let Some(col) = c1.iter().position(|&x| x == pair) {
                *d1.at_mut(row, col) += if sign > 0 { Rat::one() } else { -Rat::one() };
            }
        }
    }
    let rank_d0 = d0.rank();
    let rank_d1 = d1.rank();
    let h0 = c0.len() - rank_d0;
    let h1 = c1.len() - rank_d1 - rank_d0;
    Ok((h0, h1))
}
