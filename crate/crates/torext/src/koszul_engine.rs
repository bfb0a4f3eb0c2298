//! Koszul complexes of polyhedral functors.
//!
//! A *polyhedral functor* assigns to every subset `I` of a finite index set a
//! (possibly empty) polyhedral region, decreasing under inclusion. Its Koszul
//! complex has one basis vector `e_I` per subset with nonempty value in
//! degree `|I|`, with boundary `d(e_I) = Σ_j (-1)^j e_{I∖{i_j}}` over the
//! ascending elements `i_j` of `I`.
//!
//! Evaluating membership of a point in every value cuts out a subcomplex;
//! the functor is *exact over the fan* when every such evaluation of every
//! cone-localized functor is an exact sequence. Exactness is decided by
//! sampling one point per cell of the hyperplane arrangement spanned by the
//! values' facets — membership is constant on cells, so finitely many
//! samples decide all real points at once, including regions free of lattice
//! points.

use crate::difference_topology::certified_union_hull;
use crate::exact_geometry::{
    primitive_signless, sort_dedup, Cone, HPolyhedron, IVec, Polyhedron, QMat, QVec, Rat,
};
use crate::fans_divisors::{is_compatible, Fan};
use crate::{Error, Result};
use num_traits::{One, Signed};

/// A decreasing assignment of polyhedral regions to subsets of `{0..n-1}`,
/// over a fixed fan. Values are indexed by subset bitmask.
#[derive(Debug, Clone)]
pub struct PolyFunctor {
    fan: Fan,
    index_count: usize,
    values: Vec<HPolyhedron>,
}

impl PolyFunctor {
    /// Builds a functor from explicit values (`values[mask]` is the value on
    /// the subset with that bitmask; `2^n` entries). Checks that values
    /// decrease under subset inclusion.
    pub fn new(fan: Fan, index_count: usize, values: Vec<HPolyhedron>) -> Result<PolyFunctor> {
        if index_count == 0 || index_count > 20 {
            return Err(Error::InvalidFamily(
                "the index set must have between 1 and 20 elements".into(),
            ));
        }
        if values.len() != 1usize << index_count {
            return Err(Error::InvalidFamily(format!(
                "expected {} values, got {}",
                1usize << index_count,
                values.len()
            )));
        }
        for v in &values {
            if v.ambient() != fan.ambient() {
                return Err(Error::DimensionMismatch(
                    "functor values and fan live in different dimensions".into(),
                ));
            }
        }
        for mask in 0..values.len() {
            for b in 0..index_count {
                if mask & (1 << b) != 0 {
                    let sub = mask & !(1usize << b);
                    if !values[sub].contains_hpolyhedron(&values[mask]) {
                        return Err(Error::InvalidFamily(format!(
                            "values do not decrease: value on mask {:#b} is \
                             not contained in the value on mask {:#b}",
                            mask, sub
                        )));
                    }
                }
            }
        }
        Ok(PolyFunctor {
            fan,
            index_count,
            values,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn index_count(&self) -> usize {
        self.index_count
    }

    pub fn value(&self, mask: usize) -> &HPolyhedron {
        &self.values[mask]
    }

    /// Shifts every value by the dual cone of `cone` (for the zero cone: by
    /// the dual of the fan's support, so that the evaluation matches graded
    /// sections over the whole fan).
    pub fn localize(&self, cone: &Cone) -> Result<PolyFunctor> {
        if cone.ambient() != self.fan.ambient() {
            return Err(Error::DimensionMismatch(
                "cone and fan live in different dimensions".into(),
            ));
        }
        let shift = if cone.is_zero() {
            self.fan.support().dual()
        } else {
            cone.dual()
        };
        let values = self.values.iter().map(|v| v.add_cone(&shift)).collect();
        Ok(PolyFunctor {
            fan: self.fan.clone(),
            index_count: self.index_count,
            values,
        })
    }
}

/// Builds the functor of a family of polyhedra compatible with `fan`:
/// nonempty subsets map to intersections, the empty set to the union. Checks
/// the family conditions: every member and every nonempty intersection is
/// compatible with the fan, and the union is convex and compatible.
pub fn sigma_family(fan: &Fan, members: &[Polyhedron]) -> Result<PolyFunctor> {
    let n = members.len();
    if n == 0 {
        return Err(Error::EmptyInput("family with no members"));
    }
    for (i, m) in members.iter().enumerate() {
        if m.is_empty() {
            return Err(Error::EmptyInput("family with an empty member"));
        }
        if !is_compatible(m, fan) {
            return Err(Error::Incompatible(format!(
                "family member {} is not compatible with the fan",
                i
            )));
        }
    }
    let ambient = fan.ambient();
    let mut polys: Vec<Option<Polyhedron>> = vec![None; 1usize << n];
    for mask in 1..(1usize << n) {
        let mut current: Option<Polyhedron> = None;
        for (i, m) in members.iter().enumerate() {
            if mask & (1 << i) != 0 {
                current = Some(match current {
                    None => m.clone(),
                    Some(c) => c.intersect(m)?,
                });
            }
        }
        let value = current.expect("mask is nonempty");
        if !value.is_empty() && mask.count_ones() > 1 && !is_compatible(&value, fan) {
            return Err(Error::Incompatible(format!(
                "intersection of family members (mask {:#b}) is nonempty but \
                 not compatible with the fan",
                mask
            )));
        }
        polys[mask] = Some(value);
    }
    let refs: Vec<&Polyhedron> = members.iter().collect();
    let union = certified_union_hull(ambient, &refs)?;
    if !is_compatible(&union, fan) {
        return Err(Error::Incompatible(
            "union of the family is not compatible with the fan".into(),
        ));
    }
    polys[0] = Some(union);
    let values: Vec<HPolyhedron> = polys
        .into_iter()
        .map(|p| HPolyhedron::from_polyhedron(&p.expect("all masks filled")))
        .collect();
    PolyFunctor::new(fan.clone(), n, values)
}

/// A Koszul (sub)complex: `labels[p]` lists the subset bitmasks alive in
/// degree `p`, `boundary(p)` maps degree `p` to degree `p-1`.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    index_count: usize,
    labels: Vec<Vec<usize>>,
    boundaries: Vec<QMat>,
}

impl KoszulComplex {
    fn from_keep(index_count: usize, keep: impl Fn(usize) -> bool) -> Result<KoszulComplex> {
        let mut labels: Vec<Vec<usize>> = vec![Vec::new(); index_count + 1];
        for mask in 0..(1usize << index_count) {
            if keep(mask) {
                labels[mask.count_ones() as usize].push(mask);
            }
        }
        // Downward closure makes the boundary well-defined.
        for level in &labels {
            for &mask in level {
                for b in 0..index_count {
                    if mask & (1 << b) != 0 {
                        let sub = mask & !(1usize << b);
                        if !labels[sub.count_ones() as usize].contains(&sub) {
                            return Err(Error::InvalidFamily(
                                "evaluation is not closed under taking subsets".into(),
                            ));
                        }
                    }
                }
            }
        }
        let mut boundaries: Vec<QMat> = Vec::new();
        for p in 1..=index_count {
            let rows = labels[p - 1].len();
            let cols = labels[p].len();
            let mut d = QMat::zero(rows, cols);
            for (col, &mask) in labels[p].iter().enumerate() {
                let mut sign = Rat::one();
                for b in 0..index_count {
                    if mask & (1 << b) != 0 {
                        let sub = mask & !(1usize << b);
                        let row = labels[p - 1]
                            .iter()
                            .position(|&m| m == sub)
                            .expect("downward closure was checked");
                        *d.at_mut(row, col) = sign.clone();
                        sign = -sign;
                    }
                }
            }
            boundaries.push(d);
        }
        Ok(KoszulComplex {
            index_count,
            labels,
            boundaries,
        })
    }

    pub fn index_count(&self) -> usize {
        self.index_count
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    /// Dimensions of the terms by homological degree `0..=n`.
    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    /// The boundary map from degree `p` to degree `p-1` (`1 ≤ p ≤ n`).
    pub fn boundary(&self, p: usize) -> &QMat {
        &self.boundaries[p - 1]
    }

    /// The lowest homological degree with nonzero homology, if any.
    pub fn first_inexact_position(&self) -> Option<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(|d| d.rank()).collect();
        for p in 0..=self.index_count {
            let dim = self.labels[p].len();
            let rank_out = if p >= 1 { ranks[p - 1] } else { 0 };
            let rank_in = if p < self.index_count { ranks[p] } else { 0 };
            if dim != rank_out + rank_in {
                return Some(p);
            }
        }
        None
    }

    pub fn is_exact(&self) -> bool {
        self.first_inexact_position().is_none()
    }
}

/// The full Koszul complex of a functor (all subsets with nonempty value).
pub fn full_complex(f: &PolyFunctor) -> Result<KoszulComplex> {
    KoszulComplex::from_keep(f.index_count, |mask| !f.values[mask].is_empty())
}

/// The subcomplex of basis vectors whose value contains `point`.
pub fn evaluation_subcomplex(f: &PolyFunctor, point: &[Rat]) -> Result<KoszulComplex> {
    KoszulComplex::from_keep(f.index_count, |mask| f.values[mask].contains(point))
}

/// A witness that some localized evaluation has homology.
#[derive(Debug, Clone)]
pub struct ExactnessFailure {
    pub cone: Cone,
    pub sample: QVec,
    pub position: usize,
}

/// One relative-interior sample per cell of the arrangement of the given
/// hyperplanes (homogeneous integer rows `[offset, normal]`). Cells are sign
/// classes; the samples cover every cell, so any property constant on cells
/// is decided by the samples.
fn arrangement_samples(ambient: usize, rows: &[IVec]) -> Vec<QVec> {
    type Sys = (Vec<(IVec, Rat)>, Vec<(IVec, Rat)>);
    let mut cells: Vec<Sys> = vec![(Vec::new(), Vec::new())];
    for row in rows {
        let hs = (row[1..].to_vec(), Rat::from_integer(row[0].clone()));
        let neg = (
            crate::exact_geometry::ineg(&hs.0),
            -hs.1.clone(),
        );
        let eval = |x: &[Rat]| -> Rat {
            &hs.1 + crate::exact_geometry::qidot(x, &hs.0)
        };
        let mut next: Vec<Sys> = Vec::new();
        for (ineqs, eqs) in cells {
            let mut plus = ineqs.clone();
            plus.push(hs.clone());
            let plus_ok = crate::exact_geometry::dd::feasible_sample(&plus, &eqs, ambient)
                .map_or(false, |s| eval(&s).is_positive());
            let mut minus = ineqs.clone();
            minus.push(neg.clone());
            let minus_ok = crate::exact_geometry::dd::feasible_sample(&minus, &eqs, ambient)
                .map_or(false, |s| eval(&s).is_negative());
            match (plus_ok, minus_ok) {
                (true, true) => {
                    let mut on = eqs.clone();
                    on.push(hs.clone());
                    next.push((plus, eqs.clone()));
                    next.push((minus, eqs));
                    next.push((ineqs, on));
                }
                (true, false) => next.push((plus, eqs)),
                (false, true) => next.push((minus, eqs)),
                (false, false) => {
                    let mut on = eqs;
                    on.push(hs.clone());
                    next.push((ineqs, on));
                }
            }
        }
        cells = next;
    }
    cells
        .into_iter()
        .map(|(ineqs, eqs)| {
            crate::exact_geometry::dd::feasible_sample(&ineqs, &eqs, ambient)
                .expect("cells are nonempty by construction")
        })
        .collect()
}

/// Checks exactness of every evaluation of every cone-localization of the
/// functor, sampling one point per arrangement cell. Returns all failures
/// (empty means the complex of sheaves the functor describes is exact).
pub fn verify_exactness_everywhere(f: &PolyFunctor) -> Result<Vec<ExactnessFailure>> {
    let ambient = f.fan.ambient();
    let mut failures: Vec<ExactnessFailure> = Vec::new();
    for cone in f.fan.all_cones() {
        let localized = f.localize(&cone)?;
        let mut keys: Vec<IVec> = Vec::new();
        for v in &localized.values {
            for h in v.facets().iter().chain(v.equations()) {
                keys.push(primitive_signless(&h.homog_row()));
            }
        }
        let keys = sort_dedup(keys);
        for sample in arrangement_samples(ambient, &keys) {
            let complex = evaluation_subcomplex(&localized, &sample)?;
            if let Some(position) = complex.first_inexact_position() {
                failures.push(ExactnessFailure {
                    cone: cone.clone(),
                    sample,
                    position,
                });
            }
        }
    }
    Ok(failures)
}
