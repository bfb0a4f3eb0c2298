//! Fans, normal fans, refinements, and divisors of compatible polyhedra.
//!
//! A fan here is a finite collection of pointed full-dimensional cones whose
//! pairwise intersections are faces of each and whose support is convex and
//! full-dimensional. A polyhedron is *compatible* with a fan when its
//! recession cone is dual to the fan's support and the minimum of every
//! maximal cone's linear functionals is attained at a single point of the
//! polyhedron (its local minimizer data); divisor coefficients are read off
//! from the minima against the fan lattice's primitive ray generators.

use crate::exact_geometry::{
    idot, iv_to_qv, qidot, Cone, IVec, Int, Lattice, Polyhedron, QVec, Rat,
};
use crate::{Error, Result};
use num_traits::Zero;

/// A fan of pointed, full-dimensional cones with convex full-dimensional
/// support, over a full-rank lattice.
#[derive(Debug, Clone)]
pub struct Fan {
    lattice: Lattice,
    maximal_cones: Vec<Cone>,
    rays: Vec<IVec>,
    support: Cone,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.maximal_cones == other.maximal_cones
    }
}
impl Eq for Fan {}

impl Fan {
    /// Validates and builds a fan from its maximal cones.
    pub fn new(lattice: Lattice, cones: Vec<Cone>) -> Result<Fan> {
        if cones.is_empty() {
            return Err(Error::InvalidFan("a fan needs at least one cone".into()));
        }
        let ambient = lattice.ambient();
        let mut maximal: Vec<Cone> = Vec::new();
        for c in cones {
            if c.ambient() != ambient {
                return Err(Error::InvalidFan(
                    "cone and lattice dimensions disagree".into(),
                ));
            }
            if !c.is_pointed() {
                return Err(Error::InvalidFan(format!(
                    "cone with rays {:?} is not pointed",
                    c.rays()
                )));
            }
            if !maximal.contains(&c) {
                maximal.push(c);
            }
        }
        for a in &maximal {
            for b in &maximal {
                if a != b && a.contains_cone(b) {
                    return Err(Error::InvalidFan(
                        "maximal cone list contains a cone inside another".into(),
                    ));
                }
            }
        }
        for c in &maximal {
            if !c.is_fulldim() {
                return Err(Error::InvalidFan(format!(
                    "maximal cone with rays {:?} is not full-dimensional",
                    c.rays()
                )));
            }
        }
        // Pairwise intersections must be faces of both cones.
        let face_lists: Vec<Vec<Cone>> = maximal.iter().map(|c| c.faces()).collect();
        for i in 0..maximal.len() {
            for j in (i + 1)..maximal.len() {
                let cap = maximal[i].intersect(&maximal[j]);
                if !face_lists[i].contains(&cap) || !face_lists[j].contains(&cap) {
                    return Err(Error::InvalidFan(format!(
                        "cones {:?} and {:?} do not meet in a common face",
                        maximal[i].rays(),
                        maximal[j].rays()
                    )));
                }
            }
        }
        // Support: convex hull cone of all rays; require full-dimensional and
        // verify the union actually fills it via facet coverage.
        let mut all_rays: Vec<IVec> = Vec::new();
        for c in &maximal {
            all_rays.extend(c.rays().iter().cloned());
        }
        let support = Cone::from_rays(ambient, &all_rays);
        if !support.is_fulldim() {
            return Err(Error::InvalidFan(
                "fan support is not full-dimensional".into(),
            ));
        }
        for (i, c) in maximal.iter().enumerate() {
            for f in &face_lists[i] {
                if f.dim() + 1 != c.dim() {
                    continue;
                }
                let shared = maximal
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && &c.intersect(other) == f);
                let on_boundary = support
                    .facets()
                    .iter()
                    .any(|n| f.rays().iter().all(|r| idot(n, r).is_zero()));
                if !shared && !on_boundary {
                    return Err(Error::InvalidFan(format!(
                        "support is not convex: facet {:?} of cone {:?} is neither \
                         shared nor on the support boundary",
                        f.rays(),
                        c.rays()
                    )));
                }
            }
        }
        maximal.sort_by(|a, b| a.rays().cmp(b.rays()));
        let rays = crate::exact_geometry::sort_dedup(all_rays);
        Ok(Fan {
            lattice,
            maximal_cones: maximal,
            rays,
            support,
        })
    }

    /// Builds a fan from a ray list and maximal cones given as ray index
    /// lists (the JSON input form).
    pub fn from_ray_indices(
        lattice: Lattice,
        rays: &[IVec],
        cones: &[Vec<usize>],
    ) -> Result<Fan> {
        let mut maximal = Vec::with_capacity(cones.len());
        for cone_rays in cones {
            let mut gens = Vec::with_capacity(cone_rays.len());
            for &i in cone_rays {
                let r = rays.get(i).ok_or_else(|| {
                    Error::IndexOutOfRange(format!("ray index {} of {}", i, rays.len()))
                })?;
                gens.push(r.clone());
            }
            maximal.push(Cone::from_rays(lattice.ambient(), &gens));
        }
        Fan::new(lattice, maximal)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn ambient(&self) -> usize {
        self.lattice.ambient()
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    /// All rays of the fan, primitive (with respect to ℤⁿ) and sorted.
    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    /// The convex support cone `|Σ|`.
    pub fn support(&self) -> &Cone {
        &self.support
    }

    pub fn is_complete(&self) -> bool {
        self.support == Cone::full(self.ambient())
    }

    /// The multiplicity of a ray against the fan lattice: the least `d ≥ 1`
    /// with `d·v` in the lattice (1 for standard-lattice fans).
    pub fn ray_multiplicity(&self, ray: &IVec) -> Int {
        self.lattice.order_in_quotient(&iv_to_qv(ray))
    }

    /// The primitive generator of the ray inside the fan lattice,
    /// `d·v` where `d` is the ray multiplicity.
    pub fn lattice_ray(&self, ray: &IVec) -> QVec {
        let d = Rat::from_integer(self.ray_multiplicity(ray));
        iv_to_qv(ray).iter().map(|x| x * &d).collect()
    }

    /// Every face of every maximal cone, deduplicated, ordered by dimension
    /// then ray data. Includes the zero cone and the maximal cones.
    pub fn all_cones(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = Vec::new();
        for c in &self.maximal_cones {
            for f in c.faces() {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        out.sort_by(|a, b| {
            (a.dim(), a.rays(), a.lineality()).cmp(&(b.dim(), b.rays(), b.lineality()))
        });
        out
    }

    /// Replaces the lattice, keeping the cones (used when passing to a finer
    /// ray-compatible lattice).
    pub fn with_lattice(&self, lattice: Lattice) -> Result<Fan> {
        if lattice.ambient() != self.ambient() {
            return Err(Error::DimensionMismatch(
                "fan lattice replacement must preserve the dimension".into(),
            ));
        }
        Ok(Fan {
            lattice,
            maximal_cones: self.maximal_cones.clone(),
            rays: self.rays.clone(),
            support: self.support.clone(),
        })
    }
}

/// The inner normal fan of a full-dimensional polyhedron: one maximal cone
/// per vertex, dual to the cone of feasible directions there. Its support is
/// the dual of the recession cone.
pub fn normal_fan(p: &Polyhedron) -> Result<Fan> {
    if p.is_empty() {
        return Err(Error::EmptyInput("normal fan of the empty polyhedron"));
    }
    if !p.is_fulldim() {
        return Err(Error::NotFullDimensional(
            "the normal fan of a lower-dimensional polyhedron has no pointed cones".into(),
        ));
    }
    let cones: Vec<Cone> = p
        .vertices()
        .iter()
        .map(|v| p.vertex_cone(v).dual())
        .collect();
    Fan::new(Lattice::standard(p.ambient()), cones)
}

/// True if `fine` refines `coarse`: equal supports, and every maximal cone of
/// `fine` is contained in a maximal cone of `coarse`.
pub fn refines(fine: &Fan, coarse: &Fan) -> bool {
    fine.support() == coarse.support()
        && fine.maximal_cones().iter().all(|c| {
            coarse
                .maximal_cones()
                .iter()
                .any(|big| big.contains_cone(c))
        })
}

/// The coarsest common refinement of two fans with equal support: all
/// full-dimensional pairwise intersections.
pub fn common_refinement(a: &Fan, b: &Fan) -> Result<Fan> {
    if a.lattice() != b.lattice() {
        return Err(Error::InvalidFan(
            "common refinement needs fans over the same lattice".into(),
        ));
    }
    if a.support() != b.support() {
        return Err(Error::InvalidFan(
            "common refinement needs fans with equal support".into(),
        ));
    }
    let mut cones: Vec<Cone> = Vec::new();
    for s in a.maximal_cones() {
        for t in b.maximal_cones() {
            let cap = s.intersect(t);
            if cap.is_fulldim() && !cones.contains(&cap) {
                cones.push(cap);
            }
        }
    }
    Fan::new(a.lattice().clone(), cones)
}

/// Refines a fan so that every cone has a single local minimizer on `p`:
/// intersects the fan with the (possibly non-pointed) dual vertex cones of
/// `p`. Requires the fan support to sit inside the dual of `p`'s recession
/// cone, so that minima exist on all of it.
pub fn refine_by_polyhedron(fan: &Fan, p: &Polyhedron) -> Result<Fan> {
    if p.is_empty() {
        return Err(Error::EmptyInput("refining a fan by an empty polyhedron"));
    }
    let tail_dual = p.tail_cone().dual();
    if !tail_dual.contains_cone(fan.support()) {
        return Err(Error::Incompatible(format!(
            "fan support is not contained in the dual of the recession cone \
             (recession rays {:?})",
            p.rays()
        )));
    }
    let duals: Vec<Cone> = p
        .vertices()
        .iter()
        .map(|v| p.vertex_cone(v).dual())
        .collect();
    let mut cones: Vec<Cone> = Vec::new();
    for s in fan.maximal_cones() {
        for d in &duals {
            let cap = s.intersect(d);
            if cap.is_fulldim() && !cones.contains(&cap) {
                cones.push(cap);
            }
        }
    }
    Fan::new(fan.lattice().clone(), cones)
}

/// Per-maximal-cone minimizer data of a compatible polyhedron: for each
/// maximal cone the unique point of `p` minimizing every functional in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierData {
    /// One minimizer per maximal cone, aligned with `fan.maximal_cones()`.
    pub minimizers: Vec<QVec>,
}

/// Computes per-cone minimizer data, or an explanation of the failure.
pub fn cartier_data(p: &Polyhedron, fan: &Fan) -> Result<CartierData> {
    if p.is_empty() {
        return Err(Error::EmptyInput("minimizer data of the empty polyhedron"));
    }
    if p.ambient() != fan.ambient() {
        return Err(Error::DimensionMismatch(
            "polyhedron and fan dimensions disagree".into(),
        ));
    }
    if p.tail_cone() != fan.support().dual() {
        return Err(Error::Incompatible(format!(
            "recession cone {:?} is not dual to the fan support",
            p.rays()
        )));
    }
    let mut minimizers = Vec::with_capacity(fan.maximal_cones().len());
    for c in fan.maximal_cones() {
        let mut face: Option<Polyhedron> = None;
        for r in c.rays() {
            let mf = p.min_face(r).ok_or_else(|| {
                Error::Incompatible(format!("functional {:?} is unbounded below", r))
            })?;
            face = Some(match face {
                None => mf,
                Some(prev) => prev.intersect(&mf)?,
            });
        }
        let face = face.expect("maximal cones have rays");
        if face.is_empty() {
            return Err(Error::Incompatible(format!(
                "no common minimizer on the cone with rays {:?}",
                c.rays()
            )));
        }
        if face.dim() != Some(0) {
            return Err(Error::Incompatible(format!(
                "minimizer on the cone with rays {:?} is not unique",
                c.rays()
            )));
        }
        minimizers.push(face.vertices()[0].clone());
    }
    Ok(CartierData { minimizers })
}

/// True if the polyhedron is compatible with the fan (recession cone dual to
/// the support, one local minimizer per maximal cone).
pub fn is_compatible(p: &Polyhedron, fan: &Fan) -> bool {
    cartier_data(p, fan).is_ok()
}

/// A divisor on the toric variety of a fan: one coefficient per ray, aligned
/// with `fan.rays()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDivisor {
    pub rays: Vec<IVec>,
    pub coeffs: Vec<Rat>,
}

impl ToricDivisor {
    pub fn coeff_of(&self, ray: &IVec) -> Option<&Rat> {
        self.rays.iter().position(|r| r == ray).map(|i| &self.coeffs[i])
    }
}

/// The divisor of a compatible polyhedron: coefficient `-min ⟨p, v_ρ⟩` at
/// each ray, where `v_ρ` is the primitive generator in the fan's lattice.
pub fn divisor_of(p: &Polyhedron, fan: &Fan) -> Result<ToricDivisor> {
    cartier_data(p, fan)?;
    let mut coeffs = Vec::with_capacity(fan.rays().len());
    for ray in fan.rays() {
        let v = fan.lattice_ray(ray);
        let min = p
            .vertices()
            .iter()
            .map(|m| qidot(m, &v.iter().map(|x| x.numer().clone()).collect::<IVec>()))
            .min()
            .expect("compatible polyhedra are nonempty");
        coeffs.push(-min);
    }
    Ok(ToricDivisor {
        rays: fan.rays().to_vec(),
        coeffs,
    })
}

/// The polyhedron of a divisor: `{m : ⟨m, v_ρ⟩ ≥ -λ_ρ}` over the fan's
/// lattice rays.
pub fn polyhedron_of_divisor(d: &ToricDivisor, fan: &Fan) -> Result<Polyhedron> {
    let halfspaces: Vec<crate::exact_geometry::HalfSpace> = d
        .rays
        .iter()
        .zip(&d.coeffs)
        .map(|(ray, coeff)| {
            let v = fan.lattice_ray(ray);
            let iv: IVec = v.iter().map(|x| x.numer().clone()).collect();
            crate::exact_geometry::HalfSpace::new(iv, coeff.clone())
        })
        .collect();
    Polyhedron::from_hrep(fan.ambient(), &halfspaces)
}

/// True if the polyhedron's normal fan is exactly the given fan (so the
/// polyhedron is full-dimensional with one vertex per maximal cone).
pub fn is_ample(p: &Polyhedron, fan: &Fan) -> bool {
    match normal_fan(p) {
        Ok(nf) => {
            nf.maximal_cones() == fan.maximal_cones()
        }
        Err(_) => false,
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::exact_geometry::{ivec, qvec, rat};

    fn hull(pts: &[&[i64]]) -> Polyhedron {
        let points: Vec<QVec> = pts.iter().map(|p| qvec(p)).collect();
        Polyhedron::hull(2, &points, &[]).unwrap()
    }

    #[test]
    fn normal_fan_of_quadrilateral_is_hirzebruch() {
        // {x ≥ 0, y ≥ 0, x + y ≤ 2, y ≤ 1}
        let p = hull(&[&[0, 0], &[2, 0], &[1, 1], &[0, 1]]);
        let nf = normal_fan(&p).unwrap();
        assert_eq!(nf, hirzebruch_fan());
        assert!(nf.is_complete());
        assert!(is_ample(&p, &nf));
    }

    #[test]
    fn normal_fan_of_triangle() {
        let p = hull(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(normal_fan(&p).unwrap(), plane_triangle_fan());
    }

    #[test]
    fn normal_fan_rejects_lower_dimensional() {
        let seg = hull(&[&[0, 0], &[1, 0]]);
        assert!(matches!(
            normal_fan(&seg),
            Err(Error::NotFullDimensional(_))
        ));
    }

    #[test]
    fn normal_fan_of_unbounded_polyhedron() {
        // Quadrant-shaped polyhedron: support of its normal fan is a quadrant.
        let p = Polyhedron::hull(
            2,
            &[qvec(&[0, 0]), qvec(&[1, 0])],
            &[ivec(&[0, 1]), ivec(&[1, 1])],
        )
        .unwrap();
        let nf = normal_fan(&p).unwrap();
        assert!(!nf.is_complete());
        assert_eq!(nf.maximal_cones().len(), 2);
        assert_eq!(nf.support(), &p.tail_cone().dual());
    }

    #[test]
    fn refinement_relations() {
        let fine = hirzebruch_fan();
        let coarse = plane_triangle_fan();
        assert!(refines(&fine, &coarse));
        assert!(!refines(&coarse, &fine));
        assert!(refines(&fine, &fine));
        assert_eq!(common_refinement(&fine, &coarse).unwrap(), fine);
        assert_eq!(common_refinement(&coarse, &fine).unwrap(), fine);
    }

    #[test]
    fn refine_by_segment_splits_the_triangle_fan() {
        // Refining the triangle fan by the segment [(0,0),(1,0)] introduces
        // the ray (0,-1) and yields the Hirzebruch fan.
        let seg = hull(&[&[0, 0], &[1, 0]]);
        let refined = refine_by_polyhedron(&plane_triangle_fan(), &seg).unwrap();
        assert_eq!(refined, hirzebruch_fan());
    }

    #[test]
    fn invalid_fans_are_rejected() {
        // Overlapping cones.
        let bad = Fan::new(
            Lattice::standard(2),
            vec![
                Cone::from_rays(2, &[ivec(&[1, 0]), ivec(&[1, 1])]),
                Cone::from_rays(2, &[ivec(&[1, 2]), ivec(&[0, 1])]),
            ],
        );
        assert!(matches!(bad, Err(Error::InvalidFan(_))));
        // Non-pointed cone.
        let halfplane = Cone::from_inequalities(2, &[ivec(&[0, 1])]);
        assert!(matches!(
            Fan::new(Lattice::standard(2), vec![halfplane]),
            Err(Error::InvalidFan(_))
        ));
        // Non-convex support (opposite quadrants).
        let bad_support = Fan::new(
            Lattice::standard(2),
            vec![
                Cone::from_rays(2, &[ivec(&[1, 0]), ivec(&[0, 1])]),
                Cone::from_rays(2, &[ivec(&[-1, 0]), ivec(&[0, -1])]),
            ],
        );
        assert!(matches!(bad_support, Err(Error::InvalidFan(_))));
    }

    #[test]
    fn single_cone_fan_is_valid() {
        let quadrant = Cone::from_rays(2, &[ivec(&[1, 0]), ivec(&[0, 1])]);
        let fan = Fan::new(Lattice::standard(2), vec![quadrant.clone()]).unwrap();
        assert!(!fan.is_complete());
        assert_eq!(fan.support(), &quadrant);
        assert_eq!(fan.all_cones().len(), 4);
    }

    #[test]
    fn minimizer_data_of_a_segment_on_the_hirzebruch_fan() {
        let seg = hull(&[&[0, 0], &[1, 0]]);
        let fan = hirzebruch_fan();
        let cd = cartier_data(&seg, &fan).unwrap();
        // Maximal cones are sorted by ray data; minimizers follow suit.
        let expected: Vec<QVec> = vec![qvec(&[1, 0]), qvec(&[1, 0]), qvec(&[0, 0]), qvec(&[0, 0])];
        assert_eq!(cd.minimizers, expected);
        assert!(is_compatible(&seg, &fan));
    }

    #[test]
    fn incompatibility_cases() {
        let fan = hirzebruch_fan();
        // The hexagon needs all six rays; the Hirzebruch fan cannot order it.
        let hexagon = hull(&[&[-1, -1], &[0, -1], &[1, 0], &[1, 1], &[0, 1], &[-1, 0]]);
        assert!(!is_compatible(&hexagon, &fan));
        assert!(is_compatible(&hexagon, &hexagon_fan()));
        // An unbounded polyhedron is incompatible with a complete fan.
        let ub = Polyhedron::hull(2, &[qvec(&[0, 0])], &[ivec(&[1, 0])]).unwrap();
        assert!(!is_compatible(&ub, &fan));
    }

    #[test]
    fn divisor_of_hexagon_is_all_ones() {
        let hexagon = hull(&[&[-1, -1], &[0, -1], &[1, 0], &[1, 1], &[0, 1], &[-1, 0]]);
        let fan = hexagon_fan();
        let d = divisor_of(&hexagon, &fan).unwrap();
        assert_eq!(d.coeffs, vec![rat(1); 6]);
        assert_eq!(polyhedron_of_divisor(&d, &fan).unwrap(), hexagon);
        assert!(is_ample(&hexagon, &fan));
        assert!(!is_ample(&hexagon, &hirzebruch_fan()));
    }

    #[test]
    fn divisors_on_the_hirzebruch_fan() {
        let fan = hirzebruch_fan();
        // fan.rays() is sorted: (-1,-1), (0,-1), (0,1), (1,0).
        assert_eq!(
            fan.rays(),
            &[ivec(&[-1, -1]), ivec(&[0, -1]), ivec(&[0, 1]), ivec(&[1, 0])]
        );
        let quad = hull(&[&[0, 0], &[2, 0], &[1, 1], &[0, 1]]);
        let d = divisor_of(&quad, &fan).unwrap();
        assert_eq!(d.coeffs, vec![rat(2), rat(1), rat(0), rat(0)]);
        let tri = hull(&[&[0, 0], &[2, 0], &[0, 2]]);
        let d2 = divisor_of(&tri, &fan).unwrap();
        assert_eq!(d2.coeffs, vec![rat(2), rat(2), rat(0), rat(0)]);
        assert_eq!(polyhedron_of_divisor(&d2, &fan).unwrap(), tri);
    }

    #[test]
    fn ray_multiplicities_against_a_sublattice() {
        let sub = Lattice::from_generators(2, &[qvec(&[2, 0]), qvec(&[0, 1])]).unwrap();
        let fan = hirzebruch_fan().with_lattice(sub).unwrap();
        assert_eq!(fan.ray_multiplicity(&ivec(&[1, 0])), Int::from(2));
        assert_eq!(fan.ray_multiplicity(&ivec(&[0, 1])), Int::from(1));
        assert_eq!(fan.ray_multiplicity(&ivec(&[-1, -1])), Int::from(2));
        assert_eq!(fan.lattice_ray(&ivec(&[1, 0])), qvec(&[2, 0]));
    }

    #[test]
    fn all_cones_of_hirzebruch() {
        let fan = hirzebruch_fan();
        let cones = fan.all_cones();
        // 1 zero cone + 4 rays + 4 two-dimensional cones.
        assert_eq!(cones.len(), 9);
        assert_eq!(cones[0], Cone::zero(2));
        assert_eq!(cones.iter().filter(|c| c.dim() == 1).count(), 4);
    }
}
