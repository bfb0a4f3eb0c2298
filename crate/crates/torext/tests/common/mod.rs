//! Fixture fans, polyhedron pairs and small builders shared by the
//! integration tests.

#![allow(dead_code)]

use torext::exact_geometry::{ivec, qvec, Cone, Int, Lattice, Polyhedron, QMat, QVec, Rat};
use torext::fans_divisors::Fan;

/// Convex hull of integer points in the plane.
pub fn hull(points: &[[i64; 2]]) -> Polyhedron {
    let pts: Vec<QVec> = points.iter().map(|p| qvec(p)).collect();
    Polyhedron::hull(2, &pts, &[]).expect("hull of a nonempty point set")
}

/// Convex hull of integer points on the line.
pub fn hull1(xs: &[i64]) -> Polyhedron {
    let pts: Vec<QVec> = xs.iter().map(|&x| qvec(&[x])).collect();
    Polyhedron::hull(1, &pts, &[]).expect("hull of a nonempty point set")
}

/// Equality of polyhedra as point sets.
pub fn same_set(a: &Polyhedron, b: &Polyhedron) -> bool {
    a.contains_polyhedron(b) && b.contains_polyhedron(a)
}

/// A rational matrix from machine-integer rows.
pub fn int_matrix(rows: &[&[i64]]) -> QMat {
    let rows: Vec<QVec> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(Int::from(x))).collect())
        .collect();
    QMat::from_rows(&rows)
}

fn complete_plane_fan(rays: &[[i64; 2]]) -> Fan {
    let rays: Vec<_> = rays.iter().map(|r| ivec(r)).collect();
    let n = rays.len();
    let cones: Vec<Cone> = (0..n)
        .map(|i| Cone::from_rays(2, &[rays[i].clone(), rays[(i + 1) % n].clone()]))
        .collect();
    Fan::new(Lattice::standard(2), cones).expect("valid complete fan")
}

/// The complete plane fan with rays (1,0),(0,1),(-1,-1),(0,-1): the normal
/// fan of the quadrilateral `{x ≥ 0, y ≥ 0, x + y ≤ 2, y ≤ 1}`.
pub fn hirzebruch_fan() -> Fan {
    complete_plane_fan(&[[1, 0], [0, 1], [-1, -1], [0, -1]])
}

/// The complete plane fan with rays (1,0),(0,1),(-1,-1): the normal fan of
/// the standard triangle.
pub fn plane_triangle_fan() -> Fan {
    complete_plane_fan(&[[1, 0], [0, 1], [-1, -1]])
}

/// The complete plane fan with the six rays ±(1,0), ±(0,1), ±(1,-1): the
/// normal fan of the hexagon.
pub fn hexagon_fan() -> Fan {
    complete_plane_fan(&[[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]])
}

/// A smooth complete plane fan with rays
/// (1,0),(0,1),(-1,0),(-2,-1),(-1,-1),(0,-1).
pub fn six_ray_fan() -> Fan {
    complete_plane_fan(&[[1, 0], [0, 1], [-1, 0], [-2, -1], [-1, -1], [0, -1]])
}

/// The segment/triangle pair: the segment `conv{(0,1),(1,1)}` inside the
/// doubled standard triangle, on the Hirzebruch-type fan. The difference has
/// two components and a one-dimensional extension space.
pub fn segment_triangle_pair() -> (Fan, Polyhedron, Polyhedron) {
    (
        hirzebruch_fan(),
        hull(&[[0, 1], [1, 1]]),
        hull(&[[0, 0], [2, 0], [0, 2]]),
    )
}

/// The same pair with the segment at height zero: the untranslated bundle
/// whose graded obstruction table has a single entry.
pub fn segment_triangle_pair_origin() -> (Fan, Polyhedron, Polyhedron) {
    (
        hirzebruch_fan(),
        hull(&[[0, 0], [1, 0]]),
        hull(&[[0, 0], [2, 0], [0, 2]]),
    )
}

/// The triangle/triangle pair on the hexagon fan: the central triangle
/// inside the big triangle. The difference has three components.
pub fn triangle_pair() -> (Fan, Polyhedron, Polyhedron) {
    (
        hexagon_fan(),
        hull(&[[0, 0], [1, 0], [0, -1]]),
        hull(&[[1, -1], [-1, -1], [1, 1]]),
    )
}

/// The overhanging pair on the six-ray fan: the segment pokes out of the
/// triangle, the core is a half-integral sub-segment, and the middle sheaf
/// of the universal extension is not a sum of line bundles.
pub fn overhanging_pair() -> (Fan, Polyhedron, Polyhedron) {
    (
        six_ray_fan(),
        hull(&[[0, 0], [1, 0]]),
        hull(&[[0, -1], [1, -1], [0, 1]]),
    )
}
