//! Polyhedral convex cones with synchronized generator and inequality
//! descriptions.

use super::dd::{dual_generators, generators_from_inequalities, GenForm};
use super::{idot, ineg, iv_to_qv, qidot, IVec, Int, QVec, Rat};
use num_traits::Zero;

/// A closed convex polyhedral cone in ℝⁿ.
///
/// Both descriptions are stored in canonical form, so equality of cones is
/// structural equality of the fields:
/// * `rays`: extreme rays of the pointed part (primitive, sorted),
/// * `lineality`: Hermite basis of the lineality space,
/// * `facets`: irredundant inequality normals (`⟨x, f⟩ ≥ 0`),
/// * `equations`: normals of the linear hull (`⟨x, e⟩ = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    ambient: usize,
    rays: Vec<IVec>,
    lineality: Vec<IVec>,
    facets: Vec<IVec>,
    equations: Vec<IVec>,
}

impl Cone {
    fn from_genform(ambient: usize, gens: GenForm) -> Cone {
        let dual = dual_generators(&gens, ambient);
        Cone {
            ambient,
            rays: gens.rays,
            lineality: gens.lineality,
            facets: dual.rays,
            equations: dual.lineality,
        }
    }

    /// Cone generated by the given vectors (zero vectors are ignored; hidden
    /// lineality such as `v` and `-v` both appearing is detected).
    pub fn from_rays(ambient: usize, generators: &[IVec]) -> Cone {
        let rays: Vec<IVec> = generators
            .iter()
            .filter(|v| !super::is_zero_vec(v))
            .map(|v| super::primitive(v))
            .collect();
        for r in &rays {
            assert_eq!(r.len(), ambient, "generator length mismatch");
        }
        let raw = GenForm {
            rays,
            lineality: Vec::new(),
        };
        // Dualize twice to reach the canonical generator form.
        let ineqs = dual_generators(&raw, ambient);
        let mut rows: Vec<IVec> = ineqs.rays.clone();
        for e in &ineqs.lineality {
            rows.push(e.clone());
            rows.push(ineg(e));
        }
        let gens = generators_from_inequalities(&rows, ambient);
        Cone {
            ambient,
            rays: gens.rays,
            lineality: gens.lineality,
            facets: ineqs.rays,
            equations: ineqs.lineality,
        }
    }

    /// Cone `{x : ⟨x, row⟩ ≥ 0 for all rows}`.
    pub fn from_inequalities(ambient: usize, rows: &[IVec]) -> Cone {
        let gens = generators_from_inequalities(rows, ambient);
        Cone::from_genform(ambient, gens)
    }

    /// The zero cone `{0}`.
    pub fn zero(ambient: usize) -> Cone {
        Cone::from_rays(ambient, &[])
    }

    /// The whole space as a cone.
    pub fn full(ambient: usize) -> Cone {
        Cone::from_inequalities(ambient, &[])
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[IVec] {
        &self.lineality
    }

    pub fn facets(&self) -> &[IVec] {
        &self.facets
    }

    pub fn equations(&self) -> &[IVec] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_fulldim(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Polar dual `{y : ⟨x, y⟩ ≥ 0 ∀ x ∈ C}`.
    ///
    /// By biduality this is a pure swap of the two stored descriptions.
    pub fn dual(&self) -> Cone {
        Cone {
            ambient: self.ambient,
            rays: self.facets.clone(),
            lineality: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.facets.iter().all(|f| qidot(v, f) >= Rat::zero())
            && self.equations.iter().all(|e| qidot(v, e).is_zero())
    }

    pub fn contains_int(&self, v: &[Int]) -> bool {
        self.facets.iter().all(|f| !num_traits::Signed::is_negative(&idot(v, f)))
            && self.equations.iter().all(|e| idot(v, e).is_zero())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains_int(r))
            && other
                .lineality
                .iter()
                .all(|l| self.contains_int(l) && self.contains_int(&ineg(l)))
    }

    /// Intersection of two cones.
    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.ambient, other.ambient);
        let mut rows: Vec<IVec> = Vec::new();
        for c in [self, other] {
            rows.extend(c.facets.iter().cloned());
            for e in &c.equations {
                rows.push(e.clone());
                rows.push(ineg(e));
            }
        }
        Cone::from_inequalities(self.ambient, &rows)
    }

    /// Minkowski sum (the cone generated by both sets of generators).
    pub fn sum(&self, other: &Cone) -> Cone {
        assert_eq!(self.ambient, other.ambient);
        let mut gens: Vec<IVec> = Vec::new();
        gens.extend(self.rays.iter().cloned());
        gens.extend(other.rays.iter().cloned());
        for l in self.lineality.iter().chain(&other.lineality) {
            gens.push(l.clone());
            gens.push(ineg(l));
        }
        Cone::from_rays(self.ambient, &gens)
    }

    /// The face cut out by requiring the given supported inequality rows to be
    /// tight. (Internal building block for `faces`.)
    fn face_by_tightening(&self, tight: &IVec) -> Cone {
        let mut rows: Vec<IVec> = self.facets.clone();
        for e in &self.equations {
            rows.push(e.clone());
            rows.push(ineg(e));
        }
        rows.push(tight.clone());
        rows.push(ineg(tight));
        Cone::from_inequalities(self.ambient, &rows)
    }

    /// All faces of the cone, including the cone itself and the minimal face.
    /// Sorted by increasing dimension, deterministic order.
    pub fn faces(&self) -> Vec<Cone> {
        let mut seen: Vec<Cone> = vec![self.clone()];
        let mut queue: Vec<usize> = vec![0];
        while let Some(idx) = queue.pop() {
            let current = seen[idx].clone();
            for f in current.facets.clone() {
                let child = current.face_by_tightening(&f);
                if !seen.contains(&child) {
                    seen.push(child);
                    queue.push(seen.len() - 1);
                }
            }
        }
        seen.sort_by_key(|c| (c.dim(), c.rays.clone(), c.lineality.clone()));
        seen
    }

    /// True if `other` is a face of this cone.
    pub fn has_face(&self, other: &Cone) -> bool {
        self.faces().contains(other)
    }

    /// A point in the relative interior (the sum of the extreme rays; the
    /// origin for linear subspaces).
    pub fn relative_interior_point(&self) -> QVec {
        let mut s = vec![Int::zero(); self.ambient];
        for r in &self.rays {
            for (si, ri) in s.iter_mut().zip(r) {
                *si += ri;
            }
        }
        iv_to_qv(&s)
    }
}
