//! Topology of a difference `minus ∖ plus` of convex polyhedra: the cell
//! complex induced by the facet hyperplanes of `plus`, its connected
//! components, and the convex hulls `component ∪ core` with certified
//! convexity.
//!
//! Cells are the faces of the pieces obtained by cutting `minus` along every
//! facet hyperplane of `plus`. Membership in `plus` is constant on the
//! relative interior of every cell, so a single interior sample point decides
//! which cells belong to the difference; connectivity is read off the
//! face-containment relation between those cells.

use crate::exact_geometry::{
    centroid, qdot, sort_dedup, HalfSpace, IVec, Int, Polyhedron, QVec, Rat,
};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// One cell of the arrangement: a face of a region of `minus`, with a sample
/// point in its relative interior and its position relative to every
/// hyperplane and to `plus`.
#[derive(Debug, Clone)]
pub struct Cell {
    pub poly: Polyhedron,
    pub dim: usize,
    /// A point in the relative interior.
    pub sample: QVec,
    /// Sign of each arrangement hyperplane at the sample (-1, 0, +1).
    pub signs: Vec<i8>,
    /// True if the cell's relative interior is disjoint from `plus`.
    pub outside: bool,
}

/// The cell complex of a difference of polyhedra.
#[derive(Debug, Clone)]
pub struct CellComplex {
    pub minus: Polyhedron,
    pub plus: Polyhedron,
    /// Deduplicated facet hyperplanes of `plus`, canonically oriented.
    pub hyperplanes: Vec<HalfSpace>,
    /// All cells, ordered by dimension then vertex data.
    pub cells: Vec<Cell>,
    /// Face containment pairs `(i, j)` with `cells[i] ⊆ cells[j]`, `i ≠ j`.
    pub incidence: Vec<(usize, usize)>,
}

/// A connected component of the difference.
#[derive(Debug, Clone)]
pub struct Component {
    /// Indices into `CellComplex::cells` of the component's cells.
    pub cell_indices: Vec<usize>,
    /// Convex hull of the component's closure. Equals the closure exactly
    /// when the component is convex (which the downstream construction
    /// verifies where it matters).
    pub hull: Polyhedron,
}

/// The full decomposition of `minus ∖ plus`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub complex: CellComplex,
    /// Components in canonical order: ascending by the lexicographically
    /// largest vertex of the hull.
    pub components: Vec<Component>,
    /// The intersection `minus ∩ plus`.
    pub core: Polyhedron,
}

/// Canonical representative of a hyperplane (sign-free halfspace).
fn hyperplane_key(h: &HalfSpace) -> IVec {
    crate::exact_geometry::primitive_signless(&h.homog_row())
}

/// Builds the cell complex of `minus ∖ plus` for a bounded `minus`.
pub fn arrangement_cells(minus: &Polyhedron, plus: &Polyhedron) -> Result<CellComplex> {
    if minus.is_empty() {
        return Err(Error::EmptyInput("cell complex of an empty polyhedron"));
    }
    if !minus.is_bounded() {
        return Err(Error::Unbounded(
            "cell complexes are built for bounded polyhedra; truncate first".into(),
        ));
    }
    if !plus.is_empty() && plus.ambient() != minus.ambient() {
        return Err(Error::DimensionMismatch(
            "the two polyhedra live in different dimensions".into(),
        ));
    }
    // Hyperplanes: every facet or equation hyperplane of `plus`, deduplicated
    // up to sign.
    let mut keys: Vec<IVec> = Vec::new();
    for h in plus.facets().iter().chain(plus.equations()) {
        keys.push(hyperplane_key(h));
    }
    let keys = sort_dedup(keys);
    let hyperplanes: Vec<HalfSpace> = keys
        .iter()
        .map(|row| HalfSpace {
            normal: row[1..].to_vec(),
            offset: Rat::from_integer(row[0].clone()),
        })
        .collect();

    // Cut `minus` into full-dimensional (relative to `minus`) regions.
    let minus_dim = minus.dim();
    let mut regions: Vec<Polyhedron> = vec![minus.clone()];
    for h in &hyperplanes {
        let mut next: Vec<Polyhedron> = Vec::new();
        for r in regions {
            let above = r.cut(h)?;
            let below = r.cut(&h.flipped())?;
            if above.dim() == minus_dim && below.dim() == minus_dim {
                next.push(above);
                next.push(below);
            } else {
                next.push(r);
            }
        }
        regions = next;
    }

    // Collect all faces of all regions, deduplicated.
    let mut polys: Vec<Polyhedron> = Vec::new();
    for r in &regions {
        for f in r.faces() {
            if !polys.contains(&f) {
                polys.push(f);
            }
        }
    }
    polys.sort_by(|a, b| (a.dim(), a.vertices()).cmp(&(b.dim(), b.vertices())));

    let cells: Vec<Cell> = polys
        .into_iter()
        .map(|poly| {
            let sample = centroid(poly.vertices());
            let signs = hyperplanes
                .iter()
                .map(|h| {
                    let v = h.eval(&sample);
                    if v.is_zero() {
                        0
                    } else if v.is_positive() {
                        1
                    } else {
                        -1
                    }
                })
                .collect();
            let outside = !plus.contains(&sample);
            let dim = poly.dim().expect("cells are nonempty");
            Cell {
                poly,
                dim,
                sample,
                signs,
                outside,
            }
        })
        .collect();

    let mut incidence: Vec<(usize, usize)> = Vec::new();
    for i in 0..cells.len() {
        for j in 0..cells.len() {
            if i != j
                && cells[i].dim < cells[j].dim
                && cells[j].poly.contains_polyhedron(&cells[i].poly)
            {
                incidence.push((i, j));
            }
        }
    }

    Ok(CellComplex {
        minus: minus.clone(),
        plus: plus.clone(),
        hyperplanes,
        cells,
        incidence,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }
    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri] = rj;
        }
    }
}

/// A halfspace that cuts both polyhedra down to bounded ones: its normal is
/// an interior vector of the dual of the common recession cone, its offset
/// exceeds every vertex pairing by `margin`.
pub fn truncation_halfspace(
    minus: &Polyhedron,
    plus: &Polyhedron,
    margin: &Rat,
) -> Result<HalfSpace> {
    let tail = minus.tail_cone();
    let dual = tail.dual();
    if !dual.is_fulldim() {
        return Err(Error::Internal(
            "recession cone of a polyhedron with a vertex must be pointed".into(),
        ));
    }
    let mut w = vec![Int::zero(); minus.ambient()];
    for r in dual.rays() {
        for (wi, ri) in w.iter_mut().zip(r) {
            *wi += ri;
        }
    }
    let wq: QVec = crate::exact_geometry::iv_to_qv(&w);
    let mut c = Rat::zero();
    let mut first = true;
    for v in minus.vertices().iter().chain(plus.vertices()) {
        let val = qdot(v, &wq);
        if first || val > c {
            c = val;
            first = false;
        }
    }
    // ⟨x, w⟩ ≤ c + margin.
    Ok(HalfSpace::new(
        crate::exact_geometry::ineg(&w),
        c + margin,
    ))
}

/// Decomposes `minus ∖ plus` into connected components.
///
/// Unbounded inputs are allowed when both polyhedra have the same recession
/// cone; they are truncated by a common halfspace first and the decomposition
/// is reported on the truncated pieces.
pub fn components(minus: &Polyhedron, plus: &Polyhedron) -> Result<Decomposition> {
    components_with_margin(minus, plus, &Rat::one())
}

/// Like [`components`], with an explicit truncation margin (the decomposition
/// must not depend on it; tests vary it).
pub fn components_with_margin(
    minus: &Polyhedron,
    plus: &Polyhedron,
    margin: &Rat,
) -> Result<Decomposition> {
    if minus.is_empty() {
        return Err(Error::EmptyInput("difference with an empty minuend"));
    }
    let unbounded = !minus.is_bounded() || (!plus.is_empty() && !plus.is_bounded());
    let (m, p) = if unbounded {
        if plus.is_empty() || minus.tail_cone() != plus.tail_cone() {
            return Err(Error::Unbounded(
                "difference of unbounded polyhedra needs equal recession cones".into(),
            ));
        }
        let h = truncation_halfspace(minus, plus, margin)?;
        (minus.cut(&h)?, plus.cut(&h)?)
    } else {
        (minus.clone(), plus.clone())
    };

    let core = m.intersect(&p)?;
    let complex = arrangement_cells(&m, &p)?;
    let n = complex.cells.len();
    let mut uf = UnionFind::new(n);
    for &(i, j) in &complex.incidence {
        if complex.cells[i].outside && complex.cells[j].outside {
            uf.union(i, j);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        if complex.cells[i].outside {
            let root = uf.find(i);
            groups.entry(root).or_default().push(i);
        }
    }
    let mut components: Vec<Component> = Vec::new();
    for (_, cell_indices) in groups {
        let mut points: Vec<QVec> = Vec::new();
        for &i in &cell_indices {
            points.extend(complex.cells[i].poly.vertices().iter().cloned());
        }
        let hull = Polyhedron::hull(m.ambient(), &points, &[])?;
        components.push(Component { cell_indices, hull });
    }
    // Canonical order: ascending by lexicographically largest vertex, then by
    // the descending-sorted vertex lists, then by smallest cell index.
    components.sort_by(|a, b| {
        let key = |c: &Component| {
            let mut vs = c.hull.vertices().to_vec();
            vs.sort_by(|x, y| y.cmp(x));
            vs
        };
        key(a)
            .cmp(&key(b))
            .then_with(|| a.cell_indices.cmp(&b.cell_indices))
    });
    Ok(Decomposition {
        complex,
        components,
        core,
    })
}

/// The convex hull of a union of polyhedra, certified to equal the union.
///
/// The certificate cuts the hull along every facet/equation hyperplane of the
/// pieces; membership in each piece is constant on the relative interior of
/// each resulting cell, so checking one sample per cell proves the union
/// covers the hull. Fails with [`Error::Incompatible`] otherwise.
pub fn certified_union_hull(ambient: usize, pieces: &[&Polyhedron]) -> Result<Polyhedron> {
    let live: Vec<&Polyhedron> = pieces.iter().copied().filter(|p| !p.is_empty()).collect();
    if live.is_empty() {
        return Err(Error::EmptyInput("hull of a union of empty polyhedra"));
    }
    let mut points: Vec<QVec> = Vec::new();
    let mut rays: Vec<IVec> = Vec::new();
    let mut keys: Vec<IVec> = Vec::new();
    for piece in &live {
        points.extend(piece.vertices().iter().cloned());
        rays.extend(piece.rays().iter().cloned());
        for h in piece.facets().iter().chain(piece.equations()) {
            keys.push(hyperplane_key(h));
        }
    }
    let hull = Polyhedron::hull(ambient, &points, &rays)?;
    let keys = sort_dedup(keys);
    let hdim = hull.dim();
    let mut regions: Vec<Polyhedron> = vec![hull.clone()];
    for row in &keys {
        let h = HalfSpace {
            normal: row[1..].to_vec(),
            offset: Rat::from_integer(row[0].clone()),
        };
        let mut next: Vec<Polyhedron> = Vec::new();
        for r in regions {
            let above = r.cut(&h)?;
            let below = r.cut(&h.flipped())?;
            if above.dim() == hdim && below.dim() == hdim {
                next.push(above);
                next.push(below);
            } else {
                next.push(r);
            }
        }
        regions = next;
    }
    for r in &regions {
        let sample = r
            .relative_interior_point()
            .expect("regions of a nonempty hull are nonempty");
        if !live.iter().any(|p| p.contains(&sample)) {
            return Err(Error::Incompatible(format!(
                "union of polyhedra is not convex: hull point {:?} is in no piece",
                sample
            )));
        }
    }
    Ok(hull)
}

/// The convex hull of `component ∪ core`, certified to equal the union; in
/// the plane the areas are additionally reconciled.
pub fn nabla_of(component: &Polyhedron, core: &Polyhedron) -> Result<Polyhedron> {
    if component.is_empty() {
        return Err(Error::EmptyInput("hull of an empty component"));
    }
    let ambient = component.ambient();
    let hull = certified_union_hull(ambient, &[component, core])?;
    if ambient == 2 && hull.is_bounded() && hull.dim() == Some(2) && !core.is_empty() {
        let cap = component.intersect(core)?;
        let expected = component.area_2d() + core.area_2d()
            - if cap.is_empty() { Rat::zero() } else { cap.area_2d() };
        if hull.area_2d() != expected {
            return Err(Error::Internal(format!(
                "area mismatch while verifying a hull: {} vs {}",
                hull.area_2d(),
                expected
            )));
        }
    }
    Ok(hull)
}
