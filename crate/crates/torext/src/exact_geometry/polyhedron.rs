//! Convex polyhedra with synchronized vertex/ray and inequality descriptions,
//! plus a lightweight inequality-only form for vertex-free regions.

use super::cone::Cone;
use super::dd::{
    dual_generators, feasible_sample, generators_from_inequalities, homogenize, GenForm,
};
use super::lattice::Lattice;
use super::{
    denominator_lcm, idot, ineg, iv_to_qv, primitive, qadd, qidot, qneg, qsub, IVec, Int, QVec,
    Rat,
};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// The closed halfspace `{x : ⟨x, normal⟩ ≥ -offset}`.
///
/// Canonical form: the combined integer vector `(offset, normal)` is
/// primitive, so the offset is always an integer (stored as a rational for
/// convenience at construction sites).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: IVec,
    pub offset: Rat,
}

impl HalfSpace {
    pub fn new(normal: IVec, offset: Rat) -> HalfSpace {
        let den = offset.denom().clone();
        let mut row: IVec = Vec::with_capacity(normal.len() + 1);
        row.push(offset.numer().clone());
        for c in &normal {
            row.push(c * &den);
        }
        let row = primitive(&row);
        HalfSpace {
            normal: row[1..].to_vec(),
            offset: Rat::from_integer(row[0].clone()),
        }
    }

    fn from_homog_row(row: &[Int]) -> HalfSpace {
        HalfSpace {
            normal: row[1..].to_vec(),
            offset: Rat::from_integer(row[0].clone()),
        }
    }

    /// The homogenized integer row `(offset, normal)`.
    pub fn homog_row(&self) -> IVec {
        let mut row = Vec::with_capacity(self.normal.len() + 1);
        row.push(self.offset.numer().clone());
        row.extend(self.normal.iter().cloned());
        row
    }

    /// Evaluates `⟨x, normal⟩ + offset` (nonnegative inside the halfspace).
    pub fn eval(&self, x: &[Rat]) -> Rat {
        qidot(x, &self.normal) + &self.offset
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        !self.eval(x).is_negative()
    }

    pub fn tight_at(&self, x: &[Rat]) -> bool {
        self.eval(x).is_zero()
    }

    /// The opposite closed halfspace `{x : ⟨x, normal⟩ ≤ -offset}`.
    pub fn flipped(&self) -> HalfSpace {
        HalfSpace {
            normal: ineg(&self.normal),
            offset: -self.offset.clone(),
        }
    }

    /// The pair `(normal, offset)` as an inequality row, for feasibility
    /// queries.
    pub fn as_row(&self) -> (IVec, Rat) {
        (self.normal.clone(), self.offset.clone())
    }
}

/// A convex polyhedron `P ⊆ ℝⁿ` that is either empty or has at least one
/// vertex (it contains no line).
///
/// All four descriptions are canonical, so equality is structural:
/// * `vertices`: sorted rational points (empty ⟺ the polyhedron is empty),
/// * `rays`: extreme rays of the recession cone, primitive and sorted,
/// * `facets`: irredundant halfspaces,
/// * `equations`: the affine hull, as tight halfspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    ambient: usize,
    vertices: Vec<QVec>,
    rays: Vec<IVec>,
    facets: Vec<HalfSpace>,
    equations: Vec<HalfSpace>,
}

impl Polyhedron {
    pub fn empty(ambient: usize) -> Polyhedron {
        Polyhedron {
            ambient,
            vertices: Vec::new(),
            rays: Vec::new(),
            facets: Vec::new(),
            equations: Vec::new(),
        }
    }

    /// Builds the polyhedron cut out by the given halfspaces.
    ///
    /// Fails with [`Error::NoVertex`] if the set is nonempty but contains a
    /// line.
    pub fn from_hrep(ambient: usize, halfspaces: &[HalfSpace]) -> Result<Polyhedron> {
        for h in halfspaces {
            if h.normal.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "halfspace normal has length {}, ambient dimension is {}",
                    h.normal.len(),
                    ambient
                )));
            }
        }
        let mut rows: Vec<IVec> = halfspaces.iter().map(|h| h.homog_row()).collect();
        let mut x0 = vec![Int::zero(); ambient + 1];
        x0[0] = Int::one();
        rows.push(x0);
        let gens = generators_from_inequalities(&rows, ambient + 1);
        Polyhedron::from_homog_gens(ambient, gens)
    }

    /// Convex hull of points plus a cone of rays.
    ///
    /// Fails with [`Error::EmptyInput`] when no points are given, and with
    /// [`Error::NoVertex`] when the ray set spans a line.
    pub fn hull(ambient: usize, points: &[QVec], rays: &[IVec]) -> Result<Polyhedron> {
        if points.is_empty() {
            return Err(Error::EmptyInput("convex hull of no points"));
        }
        let mut gens: Vec<IVec> = Vec::new();
        for p in points {
            if p.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "point has length {}, ambient dimension is {}",
                    p.len(),
                    ambient
                )));
            }
            let den = denominator_lcm(p);
            let mut g = Vec::with_capacity(ambient + 1);
            g.push(den.clone());
            for x in p {
                g.push(x.numer() * (&den / x.denom()));
            }
            gens.push(primitive(&g));
        }
        for r in rays {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "ray has length {}, ambient dimension is {}",
                    r.len(),
                    ambient
                )));
            }
            if super::is_zero_vec(r) {
                continue;
            }
            let mut g = Vec::with_capacity(ambient + 1);
            g.push(Int::zero());
            g.extend(r.iter().cloned());
            gens.push(primitive(&g));
        }
        let raw = GenForm {
            rays: gens,
            lineality: Vec::new(),
        };
        let ineqs = dual_generators(&raw, ambient + 1);
        let mut rows: Vec<IVec> = ineqs.rays.clone();
        for e in &ineqs.lineality {
            rows.push(e.clone());
            rows.push(ineg(e));
        }
        let mut x0 = vec![Int::zero(); ambient + 1];
        x0[0] = Int::one();
        rows.push(x0);
        let gens = generators_from_inequalities(&rows, ambient + 1);
        Polyhedron::from_homog_gens(ambient, gens)
    }

    /// A single point.
    pub fn point(p: &QVec) -> Polyhedron {
        Polyhedron::hull(p.len(), std::slice::from_ref(p), &[]).expect("a point is a polyhedron")
    }

    fn from_homog_gens(ambient: usize, gens: GenForm) -> Result<Polyhedron> {
        let has_point = gens.rays.iter().any(|r| r[0].is_positive());
        if !has_point {
            return Ok(Polyhedron::empty(ambient));
        }
        if !gens.lineality.is_empty() {
            return Err(Error::NoVertex);
        }
        let mut vertices: Vec<QVec> = Vec::new();
        let mut rays: Vec<IVec> = Vec::new();
        for r in &gens.rays {
            if r[0].is_positive() {
                let den = Rat::from_integer(r[0].clone());
                vertices.push(
                    r[1..]
                        .iter()
                        .map(|x| Rat::from_integer(x.clone()) / &den)
                        .collect(),
                );
            } else {
                rays.push(primitive(&r[1..].to_vec()));
            }
        }
        vertices.sort();
        rays.sort();
        let dual = dual_generators(&gens, ambient + 1);
        let mut facets: Vec<HalfSpace> = Vec::new();
        for row in &dual.rays {
            if super::is_zero_vec(&row[1..]) {
                // The trivial inequality x₀ ≥ 0 of the homogenization.
                continue;
            }
            facets.push(HalfSpace::from_homog_row(row));
        }
        facets.sort();
        let mut equations: Vec<HalfSpace> = dual
            .lineality
            .iter()
            .map(|row| HalfSpace::from_homog_row(row))
            .collect();
        equations.sort();
        Ok(Polyhedron {
            ambient,
            vertices,
            rays,
            facets,
            equations,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    pub fn equations(&self) -> &[HalfSpace] {
        &self.equations
    }

    /// Dimension, or `None` for the empty polyhedron.
    pub fn dim(&self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.ambient - self.equations.len())
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_fulldim(&self) -> bool {
        !self.is_empty() && self.equations.is_empty()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        if self.is_empty() {
            return false;
        }
        self.facets.iter().all(|h| h.satisfied_by(x))
            && self.equations.iter().all(|h| h.tight_at(x))
    }

    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        if other.is_empty() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        let tail = self.tail_cone();
        other.vertices.iter().all(|v| self.contains(v))
            && other.rays.iter().all(|r| tail.contains_int(r))
    }

    /// The recession cone.
    pub fn tail_cone(&self) -> Cone {
        Cone::from_rays(self.ambient, &self.rays)
    }

    /// All halfspaces (facets and both sides of each equation).
    pub fn all_halfspaces(&self) -> Vec<HalfSpace> {
        let mut out = self.facets.clone();
        for e in &self.equations {
            out.push(e.clone());
            out.push(e.flipped());
        }
        out
    }

    pub fn translate(&self, t: &[Rat]) -> Polyhedron {
        assert_eq!(t.len(), self.ambient);
        if self.is_empty() {
            return self.clone();
        }
        let shift = |h: &HalfSpace| {
            HalfSpace::new(h.normal.clone(), &h.offset - qidot(t, &h.normal))
        };
        let mut vertices: Vec<QVec> = self.vertices.iter().map(|v| qadd(v, t)).collect();
        vertices.sort();
        let mut facets: Vec<HalfSpace> = self.facets.iter().map(&shift).collect();
        facets.sort();
        let mut equations: Vec<HalfSpace> = self.equations.iter().map(&shift).collect();
        equations.sort();
        Polyhedron {
            ambient: self.ambient,
            vertices,
            rays: self.rays.clone(),
            facets,
            equations,
        }
    }

    /// The reflection `-P`.
    pub fn negated(&self) -> Polyhedron {
        let flip = |h: &HalfSpace| HalfSpace {
            normal: ineg(&h.normal),
            offset: h.offset.clone(),
        };
        let mut vertices: Vec<QVec> = self.vertices.iter().map(|v| qneg(v)).collect();
        vertices.sort();
        let mut rays: Vec<IVec> = self.rays.iter().map(|r| ineg(r)).collect();
        rays.sort();
        let mut facets: Vec<HalfSpace> = self.facets.iter().map(&flip).collect();
        facets.sort();
        let mut equations: Vec<HalfSpace> = self.equations.iter().map(&flip).collect();
        equations.sort();
        Polyhedron {
            ambient: self.ambient,
            vertices,
            rays,
            facets,
            equations,
        }
    }

    /// Minkowski sum. The sum with an empty polyhedron is empty.
    pub fn minkowski(&self, other: &Polyhedron) -> Result<Polyhedron> {
        assert_eq!(self.ambient, other.ambient);
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.ambient));
        }
        let mut points = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                points.push(qadd(a, b));
            }
        }
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        Polyhedron::hull(self.ambient, &points, &rays)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        assert_eq!(self.ambient, other.ambient);
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.ambient));
        }
        let mut rows = self.all_halfspaces();
        rows.extend(other.all_halfspaces());
        Polyhedron::from_hrep(self.ambient, &rows)
    }

    /// Intersection with one extra halfspace.
    pub fn cut(&self, h: &HalfSpace) -> Result<Polyhedron> {
        if self.is_empty() {
            return Ok(self.clone());
        }
        let mut rows = self.all_halfspaces();
        rows.push(h.clone());
        Polyhedron::from_hrep(self.ambient, &rows)
    }

    /// Minimum of `x ↦ ⟨x, w⟩` over the polyhedron, `None` when unbounded
    /// below (or the polyhedron is empty).
    pub fn min_pairing(&self, w: &[Int]) -> Option<Rat> {
        if self.is_empty() {
            return None;
        }
        if self.rays.iter().any(|r| idot(r, w).is_negative()) {
            return None;
        }
        self.vertices.iter().map(|v| qidot(v, w)).min()
    }

    /// The face on which `x ↦ ⟨x, w⟩` attains its minimum, `None` when
    /// unbounded below.
    pub fn min_face(&self, w: &[Int]) -> Option<Polyhedron> {
        let min = self.min_pairing(w)?;
        let mut rows = self.all_halfspaces();
        rows.push(HalfSpace::new(w.to_vec(), -min.clone()));
        rows.push(HalfSpace::new(ineg(w), min));
        Some(Polyhedron::from_hrep(self.ambient, &rows).expect("face of a polyhedron"))
    }

    /// All nonempty faces, including the polyhedron itself, ordered by
    /// dimension then vertex data.
    pub fn faces(&self) -> Vec<Polyhedron> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut seen: Vec<Polyhedron> = vec![self.clone()];
        let mut queue: Vec<usize> = vec![0];
        while let Some(idx) = queue.pop() {
            let current = seen[idx].clone();
            for f in current.facets.clone() {
                let mut rows = current.all_halfspaces();
                rows.push(f.flipped());
                let child = Polyhedron::from_hrep(self.ambient, &rows)
                    .expect("face of a polyhedron has a vertex");
                if child.is_empty() {
                    continue;
                }
                if !seen.contains(&child) {
                    seen.push(child);
                    queue.push(seen.len() - 1);
                }
            }
        }
        seen.sort_by(|a, b| {
            (a.dim(), &a.vertices, &a.rays).cmp(&(b.dim(), &b.vertices, &b.rays))
        });
        seen
    }

    /// A point in the relative interior.
    pub fn relative_interior_point(&self) -> Option<QVec> {
        if self.is_empty() {
            return None;
        }
        let centroid = super::centroid(&self.vertices);
        let mut p = centroid;
        for r in &self.rays {
            p = qadd(&p, &iv_to_qv(r));
        }
        Some(p)
    }

    /// The cone of feasible directions `cone(P - v)` at a point `v ∈ P`.
    pub fn vertex_cone(&self, v: &QVec) -> Cone {
        debug_assert!(self.contains(v));
        let mut gens: Vec<IVec> = Vec::new();
        for w in &self.vertices {
            let d = qsub(w, v);
            if !d.iter().all(|x| x.is_zero()) {
                gens.push(super::primitive_direction(&d));
            }
        }
        gens.extend(self.rays.iter().cloned());
        Cone::from_rays(self.ambient, &gens)
    }

    /// All points of the given lattice inside a bounded polyhedron, sorted.
    pub fn lattice_points(&self, lattice: &Lattice) -> Result<Vec<QVec>> {
        if !self.is_bounded() {
            return Err(Error::Unbounded(
                "lattice point enumeration needs a bounded polyhedron".into(),
            ));
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        if lattice.ambient() != self.ambient {
            return Err(Error::DimensionMismatch(
                "lattice and polyhedron live in different dimensions".into(),
            ));
        }
        // Work in lattice coordinates: y = B⁻¹x ranges over an integer box.
        let coords: Vec<QVec> = self
            .vertices
            .iter()
            .map(|v| lattice.coordinates(v))
            .collect();
        let dim = self.ambient;
        let mut lo = vec![Int::zero(); dim];
        let mut hi = vec![Int::zero(); dim];
        for i in 0..dim {
            let mut min = coords[0][i].clone();
            let mut max = coords[0][i].clone();
            for c in &coords[1..] {
                if c[i] < min {
                    min = c[i].clone();
                }
                if c[i] > max {
                    max = c[i].clone();
                }
            }
            lo[i] = min.ceil().to_integer();
            hi[i] = max.floor().to_integer();
        }
        let mut out: Vec<QVec> = Vec::new();
        let mut cursor = lo.clone();
        'outer: loop {
            let point = lattice.from_coordinates(&iv_to_qv(&cursor));
            if self.contains(&point) {
                out.push(point);
            }
            // Advance the mixed-radix counter.
            for i in (0..dim).rev() {
                cursor[i] += 1;
                if cursor[i] <= hi[i] {
                    continue 'outer;
                }
                cursor[i] = lo[i].clone();
                if i == 0 {
                    break 'outer;
                }
            }
            if dim == 0 {
                break;
            }
        }
        out.sort();
        Ok(out)
    }

    /// True if every vertex lies in the lattice.
    pub fn is_lattice(&self, lattice: &Lattice) -> bool {
        self.vertices.iter().all(|v| lattice.contains(v))
    }

    /// Area of a polygon in the plane (zero for lower-dimensional sets).
    pub fn area_2d(&self) -> Rat {
        assert_eq!(self.ambient, 2, "area is defined for plane polygons");
        assert!(self.is_bounded(), "area of an unbounded polyhedron");
        if self.dim() != Some(2) {
            return Rat::zero();
        }
        // Order the vertices counterclockwise around the centroid and apply
        // the shoelace formula.
        let c = super::centroid(&self.vertices);
        let mut pts: Vec<QVec> = self.vertices.clone();
        pts.sort_by(|a, b| {
            let (da, db) = (qsub(a, &c), qsub(b, &c));
            let half = |d: &QVec| {
                // 0 for upper halfplane (including positive x-axis), 1 below.
                if d[1].is_positive() || (d[1].is_zero() && d[0].is_positive()) {
                    0u8
                } else {
                    1u8
                }
            };
            half(&da).cmp(&half(&db)).then_with(|| {
                let cross = &da[0] * &db[1] - &da[1] * &db[0];
                Rat::zero().cmp(&cross)
            })
        });
        let mut twice_area = Rat::zero();
        for i in 0..pts.len() {
            let a = &pts[i];
            let b = &pts[(i + 1) % pts.len()];
            twice_area += &a[0] * &b[1] - &a[1] * &b[0];
        }
        twice_area / Rat::from_integer(Int::from(2))
    }
}

/// A polyhedron given only by inequalities: may contain lines, so it has no
/// vertex description. Used for localized functor values (a polyhedron plus a
/// possibly vertex-free dual cone).
///
/// Facets and equations are canonical (extreme rays / lineality basis of the
/// dual of the homogenization), so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    ambient: usize,
    empty: bool,
    facets: Vec<HalfSpace>,
    equations: Vec<HalfSpace>,
}

impl HPolyhedron {
    pub fn empty(ambient: usize) -> HPolyhedron {
        HPolyhedron {
            ambient,
            empty: true,
            facets: Vec::new(),
            equations: Vec::new(),
        }
    }

    pub fn from_polyhedron(p: &Polyhedron) -> HPolyhedron {
        HPolyhedron::minkowski_with_cone(p, &Cone::zero(p.ambient()))
    }

    /// The Minkowski sum `P + C` in inequality form (no vertex structure is
    /// required, so `C` may have lineality).
    pub fn minkowski_with_cone(p: &Polyhedron, c: &Cone) -> HPolyhedron {
        assert_eq!(p.ambient(), c.ambient());
        let ambient = p.ambient();
        if p.is_empty() {
            return HPolyhedron::empty(ambient);
        }
        // Homogenize the generators of P and adjoin the cone generators at
        // height zero, then dualize.
        let mut gens: Vec<IVec> = Vec::new();
        for v in p.vertices() {
            let den = denominator_lcm(v);
            let mut g = Vec::with_capacity(ambient + 1);
            g.push(den.clone());
            for x in v {
                g.push(x.numer() * (&den / x.denom()));
            }
            gens.push(primitive(&g));
        }
        for r in p.rays().iter().chain(c.rays()) {
            let mut g = Vec::with_capacity(ambient + 1);
            g.push(Int::zero());
            g.extend(r.iter().cloned());
            gens.push(g);
        }
        let mut lineality: Vec<IVec> = Vec::new();
        for l in c.lineality() {
            let mut g = Vec::with_capacity(ambient + 1);
            g.push(Int::zero());
            g.extend(l.iter().cloned());
            lineality.push(g);
        }
        HPolyhedron::from_homog_generators(ambient, &GenForm { rays: gens, lineality })
    }

    /// Assembles canonical facets/equations from homogeneous generators of a
    /// nonempty polyhedron.
    fn from_homog_generators(ambient: usize, gens: &GenForm) -> HPolyhedron {
        let dual = dual_generators(gens, ambient + 1);
        let mut facets: Vec<HalfSpace> = Vec::new();
        for row in &dual.rays {
            if super::is_zero_vec(&row[1..]) {
                continue;
            }
            facets.push(HalfSpace::from_homog_row(row));
        }
        facets.sort();
        let mut equations: Vec<HalfSpace> = dual
            .lineality
            .iter()
            .map(|row| HalfSpace::from_homog_row(row))
            .collect();
        equations.sort();
        HPolyhedron {
            ambient,
            empty: false,
            facets,
            equations,
        }
    }

    /// The Minkowski sum `self + C` in inequality form.
    pub fn add_cone(&self, c: &Cone) -> HPolyhedron {
        assert_eq!(self.ambient, c.ambient());
        if self.empty || c.is_zero() {
            return self.clone();
        }
        let rows: Vec<(IVec, Rat)> = self.facets.iter().map(|h| h.as_row()).collect();
        let eqs: Vec<(IVec, Rat)> = self.equations.iter().map(|h| h.as_row()).collect();
        let hom = homogenize(&rows, &eqs, self.ambient);
        let mut gens = generators_from_inequalities(&hom, self.ambient + 1);
        for r in c.rays() {
            let mut g = Vec::with_capacity(self.ambient + 1);
            g.push(Int::zero());
            g.extend(r.iter().cloned());
            gens.rays.push(g);
        }
        for l in c.lineality() {
            let mut g = Vec::with_capacity(self.ambient + 1);
            g.push(Int::zero());
            g.extend(l.iter().cloned());
            gens.lineality.push(g);
        }
        HPolyhedron::from_homog_generators(self.ambient, &gens)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    pub fn equations(&self) -> &[HalfSpace] {
        &self.equations
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.empty
            && self.facets.iter().all(|h| h.satisfied_by(x))
            && self.equations.iter().all(|h| h.tight_at(x))
    }

    /// True if `self` lies inside the halfspace `h ≥ 0` (empty sets do).
    fn inside_halfspace(&self, h: &HalfSpace) -> bool {
        if self.empty {
            return true;
        }
        let mut rows: Vec<(IVec, Rat)> = self.facets.iter().map(|f| f.as_row()).collect();
        rows.push(h.flipped().as_row());
        let eqs: Vec<(IVec, Rat)> = self.equations.iter().map(|e| e.as_row()).collect();
        match feasible_sample(&rows, &eqs, self.ambient) {
            None => true,
            // A relative-interior point of `self ∩ {h ≤ 0}`: the overlap is
            // harmless exactly when it lies in the boundary hyperplane.
            Some(s) => h.eval(&s).is_zero(),
        }
    }

    /// Set-theoretic inclusion `other ⊆ self`.
    pub fn contains_hpolyhedron(&self, other: &HPolyhedron) -> bool {
        if other.empty {
            return true;
        }
        if self.empty {
            return false;
        }
        self.facets.iter().all(|h| other.inside_halfspace(h))
            && self
                .equations
                .iter()
                .all(|e| other.inside_halfspace(e) && other.inside_halfspace(&e.flipped()))
    }
}

/// Relative-interior sample of an intersection of halfspaces and hyperplanes,
/// `None` if empty (re-export of the engine-level helper in halfspace terms).
pub fn sample_region(
    ambient: usize,
    halfspaces: &[HalfSpace],
    equations: &[HalfSpace],
) -> Option<QVec> {
    let rows: Vec<(IVec, Rat)> = halfspaces.iter().map(|h| h.as_row()).collect();
    let eqs: Vec<(IVec, Rat)> = equations.iter().map(|h| h.as_row()).collect();
    feasible_sample(&rows, &eqs, ambient)
}
