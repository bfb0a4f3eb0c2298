//! Exact rational geometry: scalars, vectors, matrices, cones, polyhedra and
//! lattices.
//!
//! All conversions between inequality descriptions and generator descriptions
//! go through a single double-description engine ([`dd`]), so the two
//! representations of every cone and polyhedron are kept consistent by
//! construction. Generator data is normalised to a canonical form (primitive
//! integer vectors, sorted; Hermite-normal bases for linear parts) so that
//! equality of geometric objects is plain structural equality.

pub mod cone;
pub mod dd;
pub mod lattice;
pub mod matrix;
pub mod polyhedron;
pub mod subspace;

pub use cone::Cone;
pub use lattice::Lattice;
pub use matrix::QMat;
pub use polyhedron::{HPolyhedron, HalfSpace, Polyhedron};
pub use subspace::Subspace;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision integer scalar.
pub type Int = BigInt;
/// Arbitrary-precision rational scalar.
pub type Rat = BigRational;
/// Integer vector (lattice vector, ray direction, facet normal).
pub type IVec = Vec<Int>;
/// Rational vector (point of the ambient vector space).
pub type QVec = Vec<Rat>;

/// Builds an integer vector from machine integers (test/fixture helper).
pub fn ivec(xs: &[i64]) -> IVec {
    xs.iter().map(|&x| Int::from(x)).collect()
}

/// Builds a rational vector from machine integers (test/fixture helper).
pub fn qvec(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| Rat::from_integer(Int::from(x))).collect()
}

/// Builds a rational vector from numerator/denominator pairs.
pub fn qvec_frac(xs: &[(i64, i64)]) -> QVec {
    xs.iter()
        .map(|&(n, d)| Rat::new(Int::from(n), Int::from(d)))
        .collect()
}

/// Converts an integer vector to a rational vector.
pub fn iv_to_qv(v: &[Int]) -> QVec {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Rational scalar from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Integer dot product.
pub fn idot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rational dot product.
pub fn qdot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairing of a rational point with an integer linear form.
pub fn qidot(a: &[Rat], b: &[Int]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * Rat::from_integer(y.clone()))
        .sum()
}

/// Componentwise sum of rational vectors.
pub fn qadd(a: &[Rat], b: &[Rat]) -> QVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Componentwise difference of rational vectors.
pub fn qsub(a: &[Rat], b: &[Rat]) -> QVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scales a rational vector.
pub fn qscale(c: &Rat, v: &[Rat]) -> QVec {
    v.iter().map(|x| c * x).collect()
}

/// Negates a rational vector.
pub fn qneg(v: &[Rat]) -> QVec {
    v.iter().map(|x| -x).collect()
}

/// Negates an integer vector.
pub fn ineg(v: &[Int]) -> IVec {
    v.iter().map(|x| -x).collect()
}

/// True if all entries are zero.
pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Divides an integer vector by the gcd of its entries. The zero vector is
/// returned unchanged.
pub fn primitive(v: &[Int]) -> IVec {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators of a rational vector, returning the primitive integer
/// vector with the same direction.
pub fn primitive_direction(v: &[Rat]) -> IVec {
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: IVec = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    primitive(&ints)
}

/// Scales an integer vector so that the gcd of the entries is one and the
/// first nonzero entry is positive (canonical form for sign-free directions
/// such as hyperplane normals).
pub fn primitive_signless(v: &[Int]) -> IVec {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => ineg(&p),
        _ => p,
    }
}

/// Least common multiple of the denominators of a rational vector.
pub fn denominator_lcm(v: &[Rat]) -> Int {
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    lcm
}

/// True if every entry is an integer.
pub fn is_integer_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.denom().is_one())
}

/// Average of a nonempty set of rational points.
pub fn centroid(points: &[QVec]) -> QVec {
    assert!(!points.is_empty(), "centroid of an empty point set");
    let n = rat(points.len() as i64);
    let dim = points[0].len();
    let mut acc = vec![Rat::zero(); dim];
    for p in points {
        acc = qadd(&acc, p);
    }
    qscale(&(Rat::one() / n), &acc)
}

/// Sorts and deduplicates a list of vectors (lexicographic order).
pub fn sort_dedup<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v.dedup();
    v
}
