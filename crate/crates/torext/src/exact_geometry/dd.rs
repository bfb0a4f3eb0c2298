//! Double-description engine: converts between inequality descriptions and
//! generator descriptions of convex cones.
//!
//! Everything runs in integer arithmetic. Inequality rows are integer vectors
//! `a` meaning `⟨a, x⟩ ≥ 0`; generators come back as a [`GenForm`] holding the
//! extreme rays of the pointed part plus a canonical basis of the lineality
//! space. Polyhedra reach this engine through homogenization (an extra first
//! coordinate).

use super::matrix::{int_kernel, int_rank, QMat};
use super::{idot, ineg, is_zero_vec, primitive, primitive_direction, IVec, Int, QVec, Rat};
use num_traits::{Signed, Zero};

/// Generator description of a convex cone: `cone(rays) + span(lineality)`.
///
/// Rays are primitive, nonzero and lexicographically sorted; the lineality
/// basis is the canonical Hermite basis of the lineality lattice. Equal cones
/// therefore have equal `GenForm`s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenForm {
    pub rays: Vec<IVec>,
    pub lineality: Vec<IVec>,
}

impl GenForm {
    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }
}

struct RayRec {
    v: IVec,
    /// `tight[i]` ⟺ the i-th input row vanishes on this ray.
    tight: Vec<bool>,
}

fn tight_set(rows: &[IVec], v: &IVec) -> Vec<bool> {
    rows.iter().map(|r| idot(r, v).is_zero()).collect()
}

/// Greedily selects a maximal linearly independent subset of rows; returns
/// their indices.
fn independent_rows(rows: &[IVec]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut mat: Vec<IVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        mat.push(r.clone());
        if int_rank(&mat) == mat.len() {
            chosen.push(i);
        } else {
            mat.pop();
        }
    }
    chosen
}

/// Extreme rays of the pointed cone `{x : ⟨row, x⟩ ≥ 0 ∀ rows}`.
///
/// Precondition: the rows have full column rank `dim` (no lineality); the
/// caller strips lineality first.
fn pointed_dd(rows: &[IVec], dim: usize) -> Vec<IVec> {
    if dim == 0 {
        return Vec::new();
    }
    let base = independent_rows(rows);
    assert_eq!(
        base.len(),
        dim,
        "pointed double description requires rows of full column rank"
    );
    let b0 = QMat::from_int_rows(&base.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>());
    let inv = b0.inverse().expect("independent rows are invertible");
    let mut rays: Vec<RayRec> = (0..dim)
        .map(|j| {
            let col: QVec = (0..dim).map(|i| inv.at(i, j).clone()).collect();
            let v = primitive_direction(&col);
            let tight = tight_set(rows, &v);
            RayRec { v, tight }
        })
        .collect();
    let mut processed = vec![false; rows.len()];
    for &i in &base {
        processed[i] = true;
    }

    for (ri, row) in rows.iter().enumerate() {
        if processed[ri] {
            continue;
        }
        let signs: Vec<Int> = rays.iter().map(|r| idot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| signs[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| signs[k].is_negative()).collect();
        if neg.is_empty() {
            processed[ri] = true;
            continue;
        }
        let mut next: Vec<RayRec> = Vec::new();
        let mut new_rays: Vec<IVec> = Vec::new();
        if dim >= 2 {
            for &p in &pos {
                for &n in &neg {
                    // Algebraic adjacency: the rows processed so far that are
                    // tight on both rays must cut out a 2-dimensional face.
                    let common: Vec<IVec> = (0..rows.len())
                        .filter(|&i| processed[i] && rays[p].tight[i] && rays[n].tight[i])
                        .map(|i| rows[i].clone())
                        .collect();
                    if int_rank(&common) != dim - 2 {
                        continue;
                    }
                    let sp = &signs[p];
                    let sn = &signs[n];
                    let combo: IVec = rays[n]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(nv, pv)| sp * nv - sn * pv)
                        .collect();
                    let combo = primitive(&combo);
                    if !is_zero_vec(&combo) {
                        new_rays.push(combo);
                    }
                }
            }
        }
        new_rays.sort();
        new_rays.dedup();
        for (k, r) in rays.drain(..).enumerate() {
            if !signs[k].is_negative() {
                next.push(r);
            }
        }
        for v in new_rays {
            if next.iter().any(|r| r.v == v) {
                continue;
            }
            let tight = tight_set(rows, &v);
            next.push(RayRec { v, tight });
        }
        rays = next;
        processed[ri] = true;
    }

    let mut out: Vec<IVec> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    debug_assert!(out
        .iter()
        .all(|r| rows.iter().all(|a| !idot(a, r).is_negative())));
    out
}

/// Generator description of `{x ∈ ℝ^dim : ⟨row, x⟩ ≥ 0 ∀ rows}`.
pub fn generators_from_inequalities(rows: &[IVec], dim: usize) -> GenForm {
    for r in rows {
        assert_eq!(r.len(), dim, "row length mismatch");
    }
    let lineality = int_kernel(rows, dim);
    if lineality.is_empty() {
        return GenForm {
            rays: pointed_dd(rows, dim),
            lineality,
        };
    }
    if lineality.len() == dim {
        return GenForm {
            rays: Vec::new(),
            lineality,
        };
    }
    // Restrict to the orthogonal complement W of the lineality space, run the
    // pointed case there, and lift back: C = (C ∩ W) + lineality.
    let complement = int_kernel(&lineality, dim);
    debug_assert_eq!(complement.len() + lineality.len(), dim);
    let restricted: Vec<IVec> = rows
        .iter()
        .map(|a| complement.iter().map(|p| idot(a, p)).collect())
        .collect();
    let restricted_rays = pointed_dd(&restricted, complement.len());
    let mut rays: Vec<IVec> = restricted_rays
        .iter()
        .map(|y| {
            let mut x = vec![Int::zero(); dim];
            for (yi, p) in y.iter().zip(&complement) {
                for (xj, pj) in x.iter_mut().zip(p) {
                    *xj += yi * pj;
                }
            }
            primitive(&x)
        })
        .collect();
    rays.sort();
    rays.dedup();
    GenForm { rays, lineality }
}

/// Inequality description of the cone generated by `gens`, itself returned as
/// a generator form of the polar dual: `rays` are the irredundant inequality
/// normals (facets), `lineality` spans the normals of the equations cutting
/// out the linear hull.
pub fn dual_generators(gens: &GenForm, dim: usize) -> GenForm {
    let mut rows: Vec<IVec> = gens.rays.clone();
    for l in &gens.lineality {
        rows.push(l.clone());
        rows.push(ineg(l));
    }
    generators_from_inequalities(&rows, dim)
}

/// Homogenizes the system `⟨x, v⟩ ≥ -λ` (rows) and `⟨x, v⟩ = -λ` (equations)
/// into integer cone rows in dimension `ambient + 1`, with the extra
/// coordinate first and the ray `x₀ ≥ 0` included.
pub fn homogenize(
    rows: &[(IVec, Rat)],
    equations: &[(IVec, Rat)],
    ambient: usize,
) -> Vec<IVec> {
    let mut out: Vec<IVec> = Vec::new();
    let push_row = |v: &IVec, offset: &Rat, out: &mut Vec<IVec>| {
        // ⟨x, v⟩ + λ·x₀ ≥ 0, scaled to integers.
        let den = offset.denom().clone();
        let mut row = Vec::with_capacity(ambient + 1);
        row.push(offset.numer().clone());
        for c in v {
            row.push(c * &den);
        }
        out.push(primitive(&row));
    };
    for (v, off) in rows {
        assert_eq!(v.len(), ambient);
        push_row(v, off, &mut out);
    }
    for (v, off) in equations {
        assert_eq!(v.len(), ambient);
        push_row(v, off, &mut out);
        push_row(&ineg(v), &(-off), &mut out);
    }
    let mut x0 = vec![Int::zero(); ambient + 1];
    x0[0] = Int::from(1);
    out.push(x0);
    out
}

/// A relative-interior point of `{x : ⟨x, v⟩ ≥ -λ ∀ rows, ⟨x, v⟩ = -λ ∀ eqs}`,
/// or `None` if the set is empty. Works for arbitrary polyhedra, including
/// ones containing lines.
pub fn feasible_sample(
    rows: &[(IVec, Rat)],
    equations: &[(IVec, Rat)],
    ambient: usize,
) -> Option<QVec> {
    let hom = homogenize(rows, equations, ambient);
    let gens = generators_from_inequalities(&hom, ambient + 1);
    let mut s = vec![Int::zero(); ambient + 1];
    for r in &gens.rays {
        for (si, ri) in s.iter_mut().zip(r) {
            *si += ri;
        }
    }
    if s[0].is_zero() {
        // All rays live at x₀ = 0; look for a lineality direction with
        // nonzero first coordinate. Adding it keeps us in the relative
        // interior.
        let l = gens.lineality.iter().find(|l| !l[0].is_zero())?;
        let l = if l[0].is_negative() { ineg(l) } else { l.clone() };
        // Scale the lineality direction up so the sum stays dominated by it
        // being added once; any positive multiple works.
        for (si, li) in s.iter_mut().zip(&l) {
            *si += li;
        }
    }
    if !s[0].is_positive() {
        return None;
    }
    let s0 = Rat::from_integer(s[0].clone());
    Some(
        s[1..]
            .iter()
            .map(|x| Rat::from_integer(x.clone()) / &s0)
            .collect(),
    )
}

/// Emptiness test for the same system (no sample construction shortcuts: a
/// system is nonempty iff it admits a feasible sample).
pub fn is_feasible(rows: &[(IVec, Rat)], equations: &[(IVec, Rat)], ambient: usize) -> bool {
    feasible_sample(rows, equations, ambient).is_some()
}
