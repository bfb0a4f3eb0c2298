//! Explicit extension sequences for pairs of nef divisor polyhedra.
//!
//! Given two polyhedra `Δ⁺` and `Δ⁻` compatible with (a refinement of) a
//! fan, the difference `Δ⁻ ∖ Δ⁺` falls apart into connected components
//! `C_0, …, C_n`; each hull `∇_i = conv(C_i ∪ core)` over the common core
//! `Δ⁺ ∩ Δ⁻` carries a nef line bundle, and the bundles assemble into the
//! universal short exact sequence
//!
//! ```text
//!   0 → O(Δ⁺)ⁿ → E → O(Δ⁻) → 0
//! ```
//!
//! whose middle sheaf is glued from the `O(∇_i)` along `O(core)`.  This
//! module builds:
//!
//! * [`long_koszul_sequence`] — the full alternating-intersection resolution
//!   of `O(∪ ∇_i)`, with exactness verified over every cone chart first;
//! * [`universal_extension`] — the short sequence above, together with the
//!   component decomposition, the refined lattice on which all hull
//!   divisors are integral, and the middle sheaf's filtration data;
//! * [`pushout_single`] — the rank-two extension obtained by pushing the
//!   universal sequence along one coordinate projection (or along the
//!   all-`-1` functional for the class `[C_0] = -[C_1] - … - [C_n]`);
//! * [`refine_lattice_for_intersection`] and [`ray_orders`] — the lattice
//!   bookkeeping for cores with fractional vertices;
//! * [`ExtClass`] and [`class_sum`] — integer coordinates of extension
//!   classes in the component basis `[C_1], …, [C_n]`.

use num_traits::{One, Zero};

use crate::difference_topology::{components, nabla_of, Decomposition};
use crate::exact_geometry::{
    iv_to_qv, qdot, Cone, IVec, Int, Lattice, Polyhedron, QMat, QVec, Rat,
};
use crate::fans_divisors::{divisor_of, is_compatible, refine_by_polyhedron, Fan, ToricDivisor};
use crate::graded_cohomology::ext_dim_equivariant;
use crate::klyachko_filtrations::{
    check_compatibility, kernel_embedding, line_bundle_filtration, pushout_filtration,
    quotient_filtration, Filtration, PushoutFiltration,
};
use crate::koszul_engine::{full_complex, sigma_family, verify_exactness_everywhere};
use crate::{Error, Result};

/// What kind of sequence an [`ExtensionSequence`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// The alternating-intersection resolution of the union bundle.
    LongKoszul,
    /// The universal extension `0 → O(Δ⁺)ⁿ → E → O(Δ⁻) → 0`.
    ShortUniversal,
    /// A rank-two pushout of the universal extension along one coordinate.
    SinglePushout,
}

/// One line-bundle summand of a term: a labelled divisor polyhedron, its
/// divisor on the working fan, and the lattice on which that divisor is
/// integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub label: String,
    pub polyhedron: Polyhedron,
    pub divisor: ToricDivisor,
    pub lattice: Lattice,
}

/// One term of a sequence.  A term that is a direct sum of line bundles
/// lists its summands and carries no filtration; a term that is not (known
/// to be) split carries its filtration data instead, with `summands` then
/// listing the generating hull bundles when those are meaningful and empty
/// otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafTerm {
    pub summands: Vec<Summand>,
    pub filtration: Option<Filtration>,
}

impl SheafTerm {
    fn of_summands(summands: Vec<Summand>) -> SheafTerm {
        SheafTerm { summands, filtration: None }
    }

    /// The rank of the term: the filtration rank when present, otherwise the
    /// number of line-bundle summands.
    pub fn rank(&self) -> usize {
        self.filtration.as_ref().map_or(self.summands.len(), Filtration::rank)
    }
}

/// A complex of sheaf terms with integer matrices between consecutive terms:
/// `maps[k]` sends `terms[k]` to `terms[k+1]` and has `terms[k+1].rank()`
/// rows and `terms[k].rank()` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSequence {
    pub kind: SequenceKind,
    pub terms: Vec<SheafTerm>,
    pub maps: Vec<QMat>,
}

impl ExtensionSequence {
    /// Checks the structural invariants: at least two terms, one map per
    /// consecutive pair, matching shapes, and vanishing compositions.
    pub fn verify(&self) -> Result<()> {
        if self.terms.len() < 2 {
            return Err(Error::InvalidFamily("a sequence needs at least two terms".into()));
        }
        if self.maps.len() + 1 != self.terms.len() {
            return Err(Error::DimensionMismatch(
                "a sequence needs exactly one map between consecutive terms".into(),
            ));
        }
        for (k, map) in self.maps.iter().enumerate() {
            if map.nrows() != self.terms[k + 1].rank() || map.ncols() != self.terms[k].rank() {
                return Err(Error::DimensionMismatch(format!(
                    "map {k} is {}x{} but connects terms of ranks {} and {}",
                    map.nrows(),
                    map.ncols(),
                    self.terms[k].rank(),
                    self.terms[k + 1].rank()
                )));
            }
        }
        for k in 0..self.maps.len().saturating_sub(1) {
            if !self.maps[k + 1].mul(&self.maps[k]).is_zero() {
                return Err(Error::InvalidFamily(format!(
                    "maps {k} and {} do not compose to zero",
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

/// An extension class in integer coordinates with respect to the component
/// basis `[C_1], …, [C_n]`.  The class of the zeroth component is not an
/// extra coordinate: `[C_0] = -[C_1] - … - [C_n]`, so it is represented by
/// the all-`-1` vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtClass {
    /// Coordinates with respect to `[C_1], …, [C_n]`.
    pub coordinates: IVec,
    /// The number `n + 1` of components behind the basis.
    pub component_count: usize,
}

impl ExtClass {
    /// The class `[C_i]` for `1 ≤ i ≤ n`, or the all-`-1` vector for
    /// `i = 0`.
    pub fn component_class(i: usize, component_count: usize) -> Result<ExtClass> {
        let n = component_count
            .checked_sub(1)
            .ok_or_else(|| Error::EmptyInput("a class needs at least one component"))?;
        if i > n {
            return Err(Error::IndexOutOfRange(format!(
                "component {i} of a decomposition into {component_count}"
            )));
        }
        let coordinates = if i == 0 {
            vec![-Int::one(); n]
        } else {
            let mut e = vec![Int::zero(); n];
            e[i - 1] = Int::one();
            e
        };
        Ok(ExtClass { coordinates, component_count })
    }

    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Int::is_zero)
    }
}

/// Coordinate-wise sum of extension classes over the same component basis.
pub fn class_sum(classes: &[ExtClass]) -> Result<ExtClass> {
    let Some(first) = classes.first() else {
        return Err(Error::EmptyInput("sum of no extension classes"));
    };
    let mut coordinates = first.coordinates.clone();
    for class in &classes[1..] {
        if class.component_count != first.component_count {
            return Err(Error::DimensionMismatch(
                "extension classes live over different component bases".into(),
            ));
        }
        for (a, b) in coordinates.iter_mut().zip(&class.coordinates) {
            *a += b;
        }
    }
    Ok(ExtClass { coordinates, component_count: first.component_count })
}

/// The lattice generated by `L` together with the vertices of
/// `plus ∩ minus`.  Every polyhedron in the extension pipeline — the
/// component hulls and the core — is a lattice polyhedron for the result,
/// even when the intersection cuts the boundary of `plus` at fractional
/// points.
pub fn refine_lattice_for_intersection(
    plus: &Polyhedron,
    minus: &Polyhedron,
    lattice: &Lattice,
) -> Result<Lattice> {
    let core = plus.intersect(minus)?;
    if core.is_empty() {
        return Err(Error::Incompatible(
            "the polyhedra do not intersect, so there is no common core to refine by".into(),
        ));
    }
    lattice.join(core.vertices())
}

/// For each primitive ray direction, the order of the direction in the
/// quotient of the ambient lattice by the dual of `refined`: the factor by
/// which filtration levels at that ray stretch when passing to the refined
/// lattice.
pub fn ray_orders(refined: &Lattice, rays: &[IVec]) -> Vec<Int> {
    let dual = refined.dual();
    rays.iter().map(|r| dual.order_in_quotient(&iv_to_qv(r))).collect()
}

/// The label of the intersection `∇_I` of the members indexed by a bitmask:
/// `"union"` for the empty mask, `"nabla_2"` for a singleton, and
/// `"nabla_{0,2}"` for larger index sets.
fn mask_label(mask: usize, index_count: usize) -> String {
    let indices: Vec<usize> = (0..index_count).filter(|i| mask & (1 << i) != 0).collect();
    match indices.len() {
        0 => "union".to_string(),
        1 => format!("nabla_{}", indices[0]),
        _ => {
            let joined: Vec<String> = indices.iter().map(usize::to_string).collect();
            format!("nabla_{{{}}}", joined.join(","))
        }
    }
}

/// The polyhedron of a bitmask: the intersection of the indexed members,
/// with the empty mask standing for their union.
fn mask_polyhedron(mask: usize, members: &[Polyhedron]) -> Result<Polyhedron> {
    if mask == 0 {
        let refs: Vec<&Polyhedron> = members.iter().collect();
        return crate::difference_topology::certified_union_hull(members[0].ambient(), &refs);
    }
    let mut current: Option<Polyhedron> = None;
    for (i, m) in members.iter().enumerate() {
        if mask & (1 << i) != 0 {
            current = Some(match current {
                None => m.clone(),
                Some(c) => c.intersect(m)?,
            });
        }
    }
    Ok(current.expect("nonzero mask"))
}

/// The full alternating resolution of the union bundle of a family: the
/// terms are the direct sums `⊕_{#I = p} O(∇_I)` for `p = k, …, 1`, ending
/// in `O(∇_{I = ∅}) = O(union)`, with the signed inclusion-exclusion
/// boundaries between them.  The family must have all members, all nonempty
/// intersections, and the union compatible with the fan, and the resolution
/// is certified exact over every cone chart (including at non-lattice
/// degrees) before it is returned.
pub fn long_koszul_sequence(fan: &Fan, members: &[Polyhedron]) -> Result<ExtensionSequence> {
    let family = sigma_family(fan, members)?;
    let failures = verify_exactness_everywhere(&family)?;
    if let Some(failure) = failures.first() {
        return Err(Error::InvalidFamily(format!(
            "the family resolution has homology at position {} over the cone with rays {:?} \
             in degree {:?}",
            failure.position,
            failure.cone.rays(),
            failure.sample
        )));
    }
    let complex = full_complex(&family)?;
    let lattice = fan.lattice().dual();
    let k = complex.index_count();

    let mut terms = Vec::with_capacity(k + 1);
    for p in (0..=k).rev() {
        let summands = complex.labels()[p]
            .iter()
            .map(|&mask| {
                let polyhedron = mask_polyhedron(mask, members)?;
                let divisor = divisor_of(&polyhedron, fan)?;
                Ok(Summand {
                    label: mask_label(mask, k),
                    polyhedron,
                    divisor,
                    lattice: lattice.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        terms.push(SheafTerm::of_summands(summands));
    }
    let maps: Vec<QMat> = (1..=k).rev().map(|p| complex.boundary(p).clone()).collect();

    let sequence = ExtensionSequence { kind: SequenceKind::LongKoszul, terms, maps };
    sequence.verify()?;
    Ok(sequence)
}

/// The universal extension of `O(Δ⁻)` by copies of `O(Δ⁺)`, with all the
/// data produced along the way.
#[derive(Debug, Clone)]
pub struct UniversalExtension {
    /// The short sequence `0 → O(Δ⁺)ⁿ → E → O(Δ⁻) → 0`.
    pub sequence: ExtensionSequence,
    /// The classes `[C_1], …, [C_n]` — the universal extension restricts to
    /// each basis class, and the tuple spans the equivariant extension
    /// space.
    pub classes: Vec<ExtClass>,
    /// The component decomposition of `Δ⁻ ∖ Δ⁺`.
    pub decomposition: Decomposition,
    /// The hulls `∇_i = conv(C_i ∪ core)`, in component order (just the
    /// core itself when the difference is empty).
    pub nablas: Vec<Polyhedron>,
    pub plus: Polyhedron,
    pub minus: Polyhedron,
    /// The common core `Δ⁺ ∩ Δ⁻`.
    pub core: Polyhedron,
    /// The input fan, refined until every pipeline polyhedron is
    /// compatible.
    pub working_fan: Fan,
    /// The working fan with the lattice dual to `refined_lattice`; all hull
    /// divisors are integral over it.
    pub cover_fan: Fan,
    /// The character lattice joined with the core's vertices.
    pub refined_lattice: Lattice,
    /// Per working-fan ray (in ray order): the factor by which levels
    /// stretch on the cover.
    pub stretch_factors: Vec<Int>,
    /// The gluing of `n` copies of `O(Δ⁺)` with the hull bundles along the
    /// core, over the cover fan.
    pub glued: PushoutFiltration,
    /// The filtration of the middle sheaf on the working fan's own lattice
    /// (the glued data squished back by `stretch_factors`).
    pub middle_filtration: Filtration,
    /// Whether the middle sheaf is the plain direct sum `⊕ O(∇_i)` (true
    /// exactly when `Δ⁺ ⊆ Δ⁻`, so the core is all of `Δ⁺`).
    pub middle_is_line_bundle_sum: bool,
    /// The dimension `n` of the equivariant extension space.
    pub ext_dim: usize,
}

/// Integer points of `lattice` in the bounding box of `around`, inflated by
/// `margin` basis steps in every direction.
fn lattice_window(lattice: &Lattice, around: &Polyhedron, margin: i64) -> Result<Vec<QVec>> {
    let d = lattice.ambient();
    let mut lo: Vec<Rat> = Vec::new();
    let mut hi: Vec<Rat> = Vec::new();
    for v in around.vertices() {
        let c = lattice.coordinates(v);
        if lo.is_empty() {
            lo = c.clone();
            hi = c;
        } else {
            for a in 0..d {
                if c[a] < lo[a] {
                    lo[a] = c[a].clone();
                }
                if c[a] > hi[a] {
                    hi[a] = c[a].clone();
                }
            }
        }
    }
    if lo.is_empty() {
        return Err(Error::EmptyInput("degree window around an empty polyhedron"));
    }
    let lo: Vec<Int> = lo.iter().map(|r| r.floor().to_integer() - Int::from(margin)).collect();
    let hi: Vec<Int> = hi.iter().map(|r| r.ceil().to_integer() + Int::from(margin)).collect();

    let mut counter = lo.clone();
    let mut out = Vec::new();
    'odometer: loop {
        let coords: QVec = counter.iter().map(|i| Rat::from_integer(i.clone())).collect();
        out.push(lattice.from_coordinates(&coords));
        for a in 0..d {
            counter[a] += Int::one();
            if counter[a] <= hi[a] {
                continue 'odometer;
            }
            counter[a] = lo[a].clone();
        }
        break;
    }
    Ok(out)
}

/// Whether the degree-`m` section space of the divisor is nonzero on the
/// chart of `cone`: every ray of the cone must satisfy
/// `⟨m, v_ρ⟩ + λ_ρ ≥ 0`.
fn chart_has_section(d: &ToricDivisor, fan: &Fan, cone: &Cone, m: &QVec) -> Result<bool> {
    for r in cone.rays() {
        let c = d
            .coeff_of(r)
            .ok_or_else(|| Error::Internal("cone ray missing from a divisor".into()))?;
        if qdot(m, &fan.lattice_ray(r)) + c < Rat::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certifies, degree by degree on every maximal-cone chart of the working
/// fan, that the hull bundles assemble the target: the section count of the
/// hulls minus `n` copies of the core must equal the section count of
/// `O(Δ⁻)`.  Together with the fiber-level bookkeeping inside the gluing,
/// this pins the chart dimension identity
/// `dim(middle) = n·dim(O(Δ⁺)) + dim(O(Δ⁻))` for the universal sequence.
fn verify_chart_dimensions(
    fan: &Fan,
    minus_d: &ToricDivisor,
    core_d: &ToricDivisor,
    nabla_ds: &[ToricDivisor],
    n: usize,
    window: &[QVec],
) -> Result<()> {
    for cone in fan.maximal_cones() {
        for m in window {
            let lhs = usize::from(chart_has_section(minus_d, fan, cone, m)?)
                + n * usize::from(chart_has_section(core_d, fan, cone, m)?);
            let mut rhs = 0usize;
            for d in nabla_ds {
                rhs += usize::from(chart_has_section(d, fan, cone, m)?);
            }
            if lhs != rhs {
                return Err(Error::Incompatible(format!(
                    "chart dimension bookkeeping fails in degree {:?} on the cone with rays \
                     {:?}: hull sections do not assemble the union's sections",
                    m,
                    cone.rays()
                )));
            }
        }
    }
    Ok(())
}

/// The level below which a rank-one profile is alive.
fn line_level(f: &Filtration, ray_index: usize) -> Int {
    &f.profiles()[ray_index].jumps()[0].0 - Int::one()
}

/// Checks that a rank-two quotient filtration is, level by level, exactly as
/// big as the direct sum of the `plus` and `minus` line bundles — the
/// fiber-level form of `0 → O(Δ⁺) → E_i → O(Δ⁻) → 0`.
fn verify_rank_two_additivity(
    q: &Filtration,
    plus_line: &Filtration,
    minus_line: &Filtration,
) -> Result<()> {
    for (ri, profile) in q.profiles().iter().enumerate() {
        let lp = line_level(plus_line, ri);
        let lm = line_level(minus_line, ri);
        let mut levels: Vec<Int> = profile.jumps().iter().map(|(l, _)| l.clone()).collect();
        levels.push(&lp + Int::one());
        levels.push(&lm + Int::one());
        for l in levels.clone() {
            levels.push(l - Int::one());
        }
        for l in levels {
            let expected = usize::from(l <= lp) + usize::from(l <= lm);
            if profile.dim_at(&l) != expected {
                return Err(Error::Incompatible(format!(
                    "pushout dimension bookkeeping fails at ray {:?}, level {l}: \
                     expected {expected}, found {}",
                    q.rays()[ri],
                    profile.dim_at(&l)
                )));
            }
        }
    }
    Ok(())
}

/// Builds the universal extension of `O(Δ⁻)` by `n` copies of `O(Δ⁺)`,
/// where `n + 1` is the number of connected components of `Δ⁻ ∖ Δ⁺`.
///
/// The fan is refined until `Δ⁺`, `Δ⁻`, the core and every hull `∇_i` are
/// compatible with it.  The hull family's resolution is certified exact on
/// every chart, the equivariant extension dimension is checked to equal
/// `n`, and the middle sheaf is produced as Klyachko filtration data over
/// the refined character lattice (squished back to the working lattice).
/// When `Δ⁺ ⊆ Δ⁻` the middle is the plain direct sum `⊕ O(∇_i)` and is
/// additionally checked against it.
pub fn universal_extension(
    plus: &Polyhedron,
    minus: &Polyhedron,
    fan: &Fan,
) -> Result<UniversalExtension> {
    for (what, p) in [("plus", plus), ("minus", minus)] {
        if p.is_empty() {
            return Err(Error::EmptyInput("extension of an empty polyhedron"));
        }
        if !p.is_bounded() {
            return Err(Error::Unbounded(format!(
                "the {what} polyhedron must be bounded to build extensions"
            )));
        }
        if p.ambient() != fan.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "the {what} polyhedron lives in dimension {}, the fan in {}",
                p.ambient(),
                fan.ambient()
            )));
        }
    }

    let decomposition = components(minus, plus)?;
    let core = decomposition.core.clone();
    if core.is_empty() {
        return Err(Error::Incompatible(
            "the polyhedra do not intersect; extensions need a common core".into(),
        ));
    }
    let (n, nablas) = if decomposition.components.is_empty() {
        // minus ⊆ plus: nothing to glue, the sequence degenerates to the
        // identity on O(minus) (and the core is all of minus).
        (0usize, vec![core.clone()])
    } else {
        let n = decomposition.components.len() - 1;
        let nablas = decomposition
            .components
            .iter()
            .map(|c| nabla_of(&c.hull, &core))
            .collect::<Result<Vec<_>>>()?;
        (n, nablas)
    };

    // Refine the fan until the whole pipeline is compatible with it.  A
    // refinement never breaks compatibility that already holds, so one pass
    // suffices; the second loop just certifies that.
    let mut working = fan.clone();
    for p in [plus, minus, &core].into_iter().chain(&nablas) {
        if !is_compatible(p, &working) {
            working = refine_by_polyhedron(&working, p)?;
        }
    }
    for p in [plus, minus, &core].into_iter().chain(&nablas) {
        if !is_compatible(p, &working) {
            return Err(Error::Internal(
                "refining by every pipeline polyhedron did not make the fan compatible".into(),
            ));
        }
    }

    // The hull family must resolve O(Δ⁻) exactly over every chart.
    let family = sigma_family(&working, &nablas)?;
    let failures = verify_exactness_everywhere(&family)?;
    if let Some(failure) = failures.first() {
        return Err(Error::InvalidFamily(format!(
            "the hull family is not exact at position {} over the cone with rays {:?} in \
             degree {:?}",
            failure.position,
            failure.cone.rays(),
            failure.sample
        )));
    }

    // The equivariant extension space must have one dimension per
    // non-zeroth component.
    let ext_dim = ext_dim_equivariant(&working, plus, minus)?;
    if ext_dim != n {
        return Err(Error::Internal(format!(
            "component count predicts an extension space of dimension {n}, cohomology gives \
             {ext_dim}"
        )));
    }

    // Divisors over the working fan (rational coefficients allowed here).
    let lattice_m = working.lattice().dual();
    let plus_d = divisor_of(plus, &working)?;
    let minus_d = divisor_of(minus, &working)?;
    let core_d = divisor_of(&core, &working)?;
    let nabla_ds = nablas
        .iter()
        .map(|p| divisor_of(p, &working))
        .collect::<Result<Vec<_>>>()?;

    // Degree-by-degree section counts on every chart.
    let window = lattice_window(&lattice_m, minus, 2)?;
    verify_chart_dimensions(&working, &minus_d, &core_d, &nabla_ds, n, &window)?;

    // The refined lattice makes every pipeline divisor integral.
    let refined_lattice = refine_lattice_for_intersection(plus, minus, &lattice_m)?;
    let cover_fan = working.with_lattice(refined_lattice.dual())?;
    let stretch_factors: Vec<Int> =
        working.rays().iter().map(|r| cover_fan.ray_multiplicity(r)).collect();

    // Glue n copies of O(Δ⁺) with the hull bundles along the core, over the
    // cover, then squish the levels back to the working lattice.
    let plus_f = line_bundle_filtration(&cover_fan, plus)?;
    let core_f = line_bundle_filtration(&cover_fan, &core)?;
    let nabla_fs = nablas
        .iter()
        .map(|p| line_bundle_filtration(&cover_fan, p))
        .collect::<Result<Vec<_>>>()?;
    let glued = pushout_filtration(&plus_f, &nabla_fs, &core_f, &kernel_embedding(n))?;
    let middle_filtration = glued.filtration.squish(&stretch_factors)?;
    if !check_compatibility(&middle_filtration, &working)? {
        return Err(Error::Internal(
            "the glued middle filtration fails the bundle criterion on the working fan".into(),
        ));
    }

    // In the inclusion case the middle must literally be the direct sum of
    // the hull bundles.
    let middle_is_line_bundle_sum = minus.contains_polyhedron(plus);
    if middle_is_line_bundle_sum {
        let on_working = nablas
            .iter()
            .map(|p| line_bundle_filtration(&working, p))
            .collect::<Result<Vec<_>>>();
        if let Ok(lines) = on_working {
            if middle_filtration != Filtration::direct_sum(&lines)? {
                return Err(Error::Internal(
                    "the glued middle does not match the direct sum of the hull bundles".into(),
                ));
            }
        }
    }

    let plus_summand = |label: &str| Summand {
        label: label.to_string(),
        polyhedron: plus.clone(),
        divisor: plus_d.clone(),
        lattice: lattice_m.clone(),
    };
    let left = SheafTerm::of_summands(vec![plus_summand("plus"); n]);
    let middle = SheafTerm {
        summands: nablas
            .iter()
            .zip(&nabla_ds)
            .enumerate()
            .map(|(j, (p, d))| Summand {
                label: format!("nabla_{j}"),
                polyhedron: p.clone(),
                divisor: d.clone(),
                lattice: refined_lattice.clone(),
            })
            .collect(),
        filtration: (!middle_is_line_bundle_sum).then(|| middle_filtration.clone()),
    };
    let right = SheafTerm::of_summands(vec![Summand {
        label: "minus".to_string(),
        polyhedron: minus.clone(),
        divisor: minus_d,
        lattice: lattice_m,
    }]);
    let ones_row = QMat::from_rows(&[vec![Rat::one(); n + 1]]);
    let sequence = ExtensionSequence {
        kind: SequenceKind::ShortUniversal,
        terms: vec![left, middle, right],
        maps: vec![kernel_embedding(n), ones_row],
    };
    sequence.verify()?;

    let classes = (1..=n)
        .map(|i| ExtClass::component_class(i, n + 1))
        .collect::<Result<Vec<_>>>()?;

    Ok(UniversalExtension {
        sequence,
        classes,
        decomposition,
        nablas,
        plus: plus.clone(),
        minus: minus.clone(),
        core,
        working_fan: working,
        cover_fan,
        refined_lattice,
        stretch_factors,
        glued,
        middle_filtration,
        middle_is_line_bundle_sum,
        ext_dim,
    })
}

/// Pushes the universal extension along the `i`-th coordinate projection of
/// `O(Δ⁺)ⁿ` (for `1 ≤ i ≤ n`), or along the all-`-1` functional for
/// `i = 0`, producing the rank-two extension
/// `0 → O(Δ⁺) → E_i → O(Δ⁻) → 0` whose class is `[C_i]`.
pub fn pushout_single(
    ext: &UniversalExtension,
    i: usize,
) -> Result<(ExtensionSequence, ExtClass, Filtration)> {
    let n = ext.ext_dim;
    if n == 0 {
        return Err(Error::IndexOutOfRange(
            "the extension space is zero; there is nothing to push along".into(),
        ));
    }
    if i > n {
        return Err(Error::IndexOutOfRange(format!(
            "component {i} of a decomposition into {}",
            n + 1
        )));
    }

    // E_i = (O(Δ⁺) ⊕ E) / ⟨(φ_i(e_k), -ι(e_k)) : k = 1..n⟩ where ι is the
    // universal inclusion and φ_i the chosen functional.
    let plus_line = line_bundle_filtration(&ext.cover_fan, &ext.plus)?;
    let minus_line = line_bundle_filtration(&ext.cover_fan, &ext.minus)?;
    let big = Filtration::direct_sum(&[plus_line.clone(), ext.glued.filtration.clone()])?;
    let rank = n + 2;
    let mut relations = Vec::with_capacity(n);
    for k in 1..=n {
        let mut row = vec![Rat::zero(); rank];
        row[0] = if i == 0 {
            -Rat::one()
        } else if i == k {
            Rat::one()
        } else {
            Rat::zero()
        };
        for (j, c) in ext.glued.plus_images[k - 1].iter().enumerate() {
            row[1 + j] = -c.clone();
        }
        relations.push(row);
    }
    let (quotient, basis_images) = quotient_filtration(&big, &relations)?;
    verify_rank_two_additivity(&quotient, &plus_line, &minus_line)?;
    let filtration = quotient.squish(&ext.stretch_factors)?;
    if !check_compatibility(&filtration, &ext.working_fan)? {
        return Err(Error::Internal(
            "the pushed-out filtration fails the bundle criterion on the working fan".into(),
        ));
    }

    // The left map embeds the new O(Δ⁺) generator; the right map is the sum
    // of the hull coordinates, which the quotient basis inherits unchanged.
    let alpha = QMat::from_cols(&[basis_images[0].clone()]);
    let beta = QMat::from_rows(&[vec![Rat::one(); 2]]);
    if !beta.mul(&alpha).is_zero() {
        return Err(Error::Internal("pushout maps do not compose to zero".into()));
    }

    let left = ext.sequence.terms[0]
        .summands
        .first()
        .cloned()
        .expect("a positive-dimensional extension space has plus summands");
    let right = ext.sequence.terms[2].clone();
    let sequence = ExtensionSequence {
        kind: SequenceKind::SinglePushout,
        terms: vec![
            SheafTerm::of_summands(vec![left]),
            SheafTerm { summands: Vec::new(), filtration: Some(filtration.clone()) },
            right,
        ],
        maps: vec![alpha, beta],
    };
    sequence.verify()?;
    let class = ExtClass::component_class(i, n + 1)?;
    Ok((sequence, class, filtration))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::{ivec, qvec, qvec_frac, Subspace};
    use crate::fans_divisors::fixtures::{hexagon_fan, hirzebruch_fan, six_ray_fan};
    use crate::fans_divisors::{common_refinement, normal_fan};
    use crate::klyachko_filtrations::is_split;

    fn hull(points: &[[i64; 2]]) -> Polyhedron {
        let pts: Vec<QVec> = points.iter().map(|p| qvec(p)).collect();
        Polyhedron::hull(2, &pts, &[]).unwrap()
    }

    fn same_set(a: &Polyhedron, b: &Polyhedron) -> bool {
        a.contains_polyhedron(b) && b.contains_polyhedron(a)
    }

    fn int_matrix(rows: &[&[i64]]) -> QMat {
        let rows: Vec<QVec> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(Int::from(x))).collect())
            .collect();
        QMat::from_rows(&rows)
    }

    fn profile_dims(f: &Filtration, ray: &IVec, levels: std::ops::RangeInclusive<i64>) -> Vec<usize> {
        let p = f.profile_of(ray).unwrap();
        levels.map(|l| p.dim_at(&Int::from(l))).collect()
    }

    #[test]
    fn segment_pair_universal_extension_is_the_hand_computation() {
        let fan = hirzebruch_fan();
        let plus = hull(&[[0, 1], [1, 1]]);
        let minus = hull(&[[0, 0], [2, 0], [0, 2]]);
        let ext = universal_extension(&plus, &minus, &fan).unwrap();

        assert_eq!(ext.ext_dim, 1);
        assert!(ext.middle_is_line_bundle_sum);
        assert!(same_set(&ext.core, &plus));
        assert_eq!(ext.nablas.len(), 2);
        assert!(same_set(&ext.nablas[0], &hull(&[[0, 1], [1, 1], [0, 2]])));
        assert!(same_set(&ext.nablas[1], &hull(&[[0, 0], [2, 0], [1, 1], [0, 1]])));

        assert_eq!(ext.sequence.maps[0], int_matrix(&[&[-1], &[1]]));
        assert_eq!(ext.sequence.maps[1], int_matrix(&[&[1, 1]]));
        assert_eq!(ext.sequence.terms[1].summands.len(), 2);
        assert!(ext.sequence.terms[1].filtration.is_none());
        assert_eq!(ext.classes.len(), 1);
        assert_eq!(ext.classes[0].coordinates, ivec(&[1]));

        // No fractional core vertices: the lattice stays put and nothing
        // stretches.
        assert!(ext.refined_lattice.contains_lattice(&Lattice::standard(2)));
        assert!(Lattice::standard(2).contains_lattice(&ext.refined_lattice));
        assert!(ext.stretch_factors.iter().all(|d| *d == Int::one()));

        // The middle data is the split direct sum of the two hull bundles.
        let expected = Filtration::direct_sum(&[
            line_bundle_filtration(&ext.working_fan, &ext.nablas[0]).unwrap(),
            line_bundle_filtration(&ext.working_fan, &ext.nablas[1]).unwrap(),
        ])
        .unwrap();
        assert_eq!(ext.middle_filtration, expected);
        assert!(is_split(&ext.middle_filtration));
    }

    #[test]
    fn triangle_pair_universal_extension_matches_the_plane_cremona_data() {
        let fan = hexagon_fan();
        let plus = hull(&[[0, 0], [1, 0], [0, -1]]);
        let minus = hull(&[[1, -1], [-1, -1], [1, 1]]);
        let ext = universal_extension(&plus, &minus, &fan).unwrap();

        assert_eq!(ext.ext_dim, 2);
        assert!(ext.middle_is_line_bundle_sum);
        assert!(same_set(&ext.core, &plus));

        // Components in canonical order, and their hulls over the core.
        let comps = &ext.decomposition.components;
        assert_eq!(comps.len(), 3);
        assert!(same_set(&comps[0].hull, &hull(&[[-1, -1], [0, -1], [0, 0]])));
        assert!(same_set(&comps[1].hull, &hull(&[[0, -1], [1, -1], [1, 0]])));
        assert!(same_set(&comps[2].hull, &hull(&[[0, 0], [1, 0], [1, 1]])));
        assert!(same_set(&ext.nablas[0], &hull(&[[-1, -1], [0, -1], [1, 0], [0, 0]])));
        assert!(same_set(&ext.nablas[1], &hull(&[[0, 0], [1, 0], [1, -1], [0, -1]])));
        assert!(same_set(&ext.nablas[2], &hull(&[[0, 0], [1, 0], [1, 1], [0, -1]])));

        // Hull divisors in the hexagon's ray order (1,0),(0,1),(-1,1),
        // (-1,0),(0,-1),(1,-1).
        let paper_rays =
            [ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, 1]), ivec(&[-1, 0]), ivec(&[0, -1]), ivec(&[1, -1])];
        let coeffs = |d: &ToricDivisor| -> Vec<Rat> {
            paper_rays.iter().map(|r| d.coeff_of(r).unwrap().clone()).collect()
        };
        let as_rats = |v: &[i64]| -> Vec<Rat> {
            v.iter().map(|&x| Rat::from_integer(Int::from(x))).collect()
        };
        let middle = &ext.sequence.terms[1].summands;
        assert_eq!(coeffs(&middle[0].divisor), as_rats(&[1, 1, 1, 1, 0, 0]));
        assert_eq!(coeffs(&middle[1].divisor), as_rats(&[0, 1, 2, 1, 0, 0]));
        assert_eq!(coeffs(&middle[2].divisor), as_rats(&[0, 1, 1, 1, 1, 0]));
        assert_eq!(
            coeffs(&ext.sequence.terms[2].summands[0].divisor),
            as_rats(&[1, 1, 2, 1, 1, 0])
        );

        assert_eq!(ext.sequence.maps[0], int_matrix(&[&[-1, -1], &[1, 0], &[0, 1]]));
        assert_eq!(ext.sequence.maps[1], int_matrix(&[&[1, 1, 1]]));
        assert_eq!(ext.classes.len(), 2);
        assert_eq!(ext.classes[0].coordinates, ivec(&[1, 0]));
        assert_eq!(ext.classes[1].coordinates, ivec(&[0, 1]));
    }

    #[test]
    fn overhanging_pair_runs_the_refined_lattice_route() {
        let fan = six_ray_fan();
        let plus = hull(&[[0, 0], [1, 0]]);
        let minus = hull(&[[0, -1], [1, -1], [0, 1]]);
        let ext = universal_extension(&plus, &minus, &fan).unwrap();

        assert_eq!(ext.ext_dim, 1);
        assert!(!ext.middle_is_line_bundle_sum);
        let half_point = Polyhedron::hull(2, &[qvec(&[0, 0]), qvec_frac(&[(1, 2), (0, 1)])], &[])
            .unwrap();
        assert!(same_set(&ext.core, &half_point));
        assert!(ext.refined_lattice.contains(&qvec_frac(&[(1, 2), (0, 1)])));

        // Levels stretch by two exactly at the rays with even pairing
        // against the refined dual lattice.
        let factor_of = |ray: &[i64]| -> Int {
            let pos = ext.working_fan.rays().iter().position(|r| r == &ivec(ray)).unwrap();
            ext.stretch_factors[pos].clone()
        };
        assert_eq!(factor_of(&[1, 0]), Int::from(2));
        assert_eq!(factor_of(&[0, 1]), Int::one());
        assert_eq!(factor_of(&[-1, 0]), Int::from(2));
        assert_eq!(factor_of(&[-2, -1]), Int::one());
        assert_eq!(factor_of(&[-1, -1]), Int::from(2));
        assert_eq!(factor_of(&[0, -1]), Int::one());

        // The squished middle reproduces the frozen per-ray table.
        let expect: [(&[i64], [usize; 4]); 6] = [
            (&[1, 0], [2, 0, 0, 0]),
            (&[0, 1], [2, 1, 0, 0]),
            (&[-1, 0], [2, 2, 0, 0]),
            (&[-2, -1], [2, 2, 1, 0]),
            (&[-1, -1], [2, 2, 0, 0]),
            (&[0, -1], [2, 1, 0, 0]),
        ];
        for (ray, want) in &expect {
            assert_eq!(
                profile_dims(&ext.middle_filtration, &ivec(ray), 0..=3),
                want.to_vec(),
                "ray {ray:?}"
            );
        }
        assert!(!is_split(&ext.middle_filtration));
        assert!(ext.sequence.terms[1].filtration.is_some());

        // The sole single pushout is the universal middle itself, and the
        // zeroth pushout is the same sheaf with the opposite sign choice.
        let (seq, class, filt) = pushout_single(&ext, 1).unwrap();
        assert_eq!(filt, ext.middle_filtration);
        assert_eq!(class.coordinates, ivec(&[1]));
        assert_eq!(seq.maps[1], int_matrix(&[&[1, 1]]));
        let (_, class0, filt0) = pushout_single(&ext, 0).unwrap();
        assert_eq!(class0.coordinates, ivec(&[-1]));
        assert_eq!(filt0, ext.middle_filtration);
    }

    #[test]
    fn coarse_normal_fan_input_gets_refined_automatically() {
        let minus = hull(&[[0, -1], [1, -1], [0, 1]]);
        let plus = hull(&[[0, 0], [1, 0]]);
        let coarse = normal_fan(&minus).unwrap();
        assert_eq!(coarse.rays().len(), 3);

        let ext = universal_extension(&plus, &minus, &coarse).unwrap();
        assert_eq!(ext.working_fan.rays().len(), 4);
        assert!(ext.working_fan.rays().contains(&ivec(&[0, -1])));
        assert_eq!(ext.ext_dim, 1);

        // Profiles at shared rays agree with the six-ray route: the data
        // only depends on the divisor pairing at each ray.
        let expect: [(&[i64], [usize; 4]); 4] = [
            (&[1, 0], [2, 0, 0, 0]),
            (&[0, 1], [2, 1, 0, 0]),
            (&[-2, -1], [2, 2, 1, 0]),
            (&[0, -1], [2, 1, 0, 0]),
        ];
        for (ray, want) in &expect {
            assert_eq!(
                profile_dims(&ext.middle_filtration, &ivec(ray), 0..=3),
                want.to_vec(),
                "ray {ray:?}"
            );
        }
    }

    #[test]
    fn long_sequences_carry_signed_inclusion_exclusion_boundaries() {
        let fan = hirzebruch_fan();
        // Singleton family: the resolution is the identity on the member.
        let triangle = hull(&[[0, 0], [1, 0], [0, 1]]);
        let single = long_koszul_sequence(&fan, std::slice::from_ref(&triangle)).unwrap();
        assert_eq!(single.terms.len(), 2);
        assert_eq!(single.maps[0], int_matrix(&[&[1]]));
        assert_eq!(single.terms[0].summands[0].label, "nabla_0");
        assert_eq!(single.terms[1].summands[0].label, "union");

        // The segment pair's hulls.
        let nablas = [hull(&[[0, 1], [1, 1], [0, 2]]), hull(&[[0, 0], [2, 0], [1, 1], [0, 1]])];
        let seq = long_koszul_sequence(&fan, &nablas).unwrap();
        assert_eq!(seq.terms.len(), 3);
        assert_eq!(
            seq.terms.iter().map(SheafTerm::rank).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
        assert_eq!(seq.maps[0], int_matrix(&[&[-1], &[1]]));
        assert_eq!(seq.maps[1], int_matrix(&[&[1, 1]]));
        assert!(same_set(&seq.terms[0].summands[0].polyhedron, &hull(&[[0, 1], [1, 1]])));
        assert!(same_set(&seq.terms[2].summands[0].polyhedron, &hull(&[[0, 0], [2, 0], [0, 2]])));
        assert_eq!(seq.terms[0].summands[0].label, "nabla_{0,1}");

        // The triangle pair's three hulls on the hexagon: every pairwise
        // and triple intersection is the core triangle.
        let fan = hexagon_fan();
        let plus = hull(&[[0, 0], [1, 0], [0, -1]]);
        let nablas = [
            hull(&[[-1, -1], [0, -1], [1, 0], [0, 0]]),
            hull(&[[0, 0], [1, 0], [1, -1], [0, -1]]),
            hull(&[[0, 0], [1, 0], [1, 1], [0, -1]]),
        ];
        let seq = long_koszul_sequence(&fan, &nablas).unwrap();
        assert_eq!(
            seq.terms.iter().map(SheafTerm::rank).collect::<Vec<_>>(),
            vec![1, 3, 3, 1]
        );
        for s in &seq.terms[1].summands {
            assert!(same_set(&s.polyhedron, &plus), "pair hulls meet in the core");
        }
        assert_eq!(
            seq.terms[1].summands.iter().map(|s| s.label.clone()).collect::<Vec<_>>(),
            vec!["nabla_{0,1}", "nabla_{0,2}", "nabla_{1,2}"]
        );
    }

    #[test]
    fn equal_polyhedra_make_the_zero_extension() {
        let fan = hirzebruch_fan();
        let p = hull(&[[0, 0], [2, 0], [0, 2]]);
        let ext = universal_extension(&p, &p, &fan).unwrap();
        assert_eq!(ext.ext_dim, 0);
        assert!(ext.classes.is_empty());
        assert_eq!(ext.sequence.terms[0].rank(), 0);
        assert_eq!(ext.sequence.terms[1].rank(), 1);
        assert!(same_set(&ext.nablas[0], &p));
        assert_eq!(ext.sequence.maps[1], int_matrix(&[&[1]]));
        assert_eq!(
            ext.middle_filtration,
            line_bundle_filtration(&ext.working_fan, &p).unwrap()
        );
        assert!(matches!(pushout_single(&ext, 0), Err(Error::IndexOutOfRange(_))));

        // Disjoint polyhedra have no common core to glue along.
        let far = hull(&[[5, 5], [6, 5]]);
        assert!(matches!(
            universal_extension(&far, &p, &fan),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn single_pushouts_give_basis_classes_that_sum_to_zero() {
        let fan = hexagon_fan();
        let plus = hull(&[[0, 0], [1, 0], [0, -1]]);
        let minus = hull(&[[1, -1], [-1, -1], [1, 1]]);
        let ext = universal_extension(&plus, &minus, &fan).unwrap();

        let mut classes = Vec::new();
        for i in [1, 2, 0] {
            let (seq, class, filt) = pushout_single(&ext, i).unwrap();
            assert_eq!(filt.rank(), 2);
            assert!(check_compatibility(&filt, &ext.working_fan).unwrap());
            seq.verify().unwrap();
            assert_eq!(seq.maps[1], int_matrix(&[&[1, 1]]));
            classes.push(class);
        }
        assert_eq!(classes[0].coordinates, ivec(&[1, 0]));
        assert_eq!(classes[1].coordinates, ivec(&[0, 1]));
        assert_eq!(classes[2].coordinates, ivec(&[-1, -1]));
        assert!(class_sum(&classes).unwrap().is_zero());
        assert!(matches!(pushout_single(&ext, 3), Err(Error::IndexOutOfRange(_))));

        // The two basis pushouts restrict the universal gluing to a single
        // plus copy: their fibers at each ray see the plus line exactly up
        // to the plus divisor's level.
        let (_, _, e1) = pushout_single(&ext, 1).unwrap();
        let plus_d = divisor_of(&plus, &ext.working_fan).unwrap();
        for ray in ext.working_fan.rays() {
            let level = plus_d.coeff_of(ray).unwrap().to_integer();
            let p = e1.profile_of(ray).unwrap();
            assert!(p.dim_at(&level) >= 1);
        }
    }

    #[test]
    fn refined_lattices_report_ray_orders() {
        // The overhanging pair halves the character lattice horizontally.
        let plus = hull(&[[0, 0], [1, 0]]);
        let minus = hull(&[[0, -1], [1, -1], [0, 1]]);
        let refined =
            refine_lattice_for_intersection(&plus, &minus, &Lattice::standard(2)).unwrap();
        assert!(refined.contains(&qvec_frac(&[(1, 2), (0, 1)])));
        assert!(!refined.contains(&qvec_frac(&[(1, 4), (0, 1)])));
        assert!(!refined.contains(&qvec_frac(&[(0, 1), (1, 2)])));
        let paper_rays = [
            ivec(&[1, 0]),
            ivec(&[0, 1]),
            ivec(&[-1, 0]),
            ivec(&[-2, -1]),
            ivec(&[-1, -1]),
            ivec(&[0, -1]),
        ];
        let orders = ray_orders(&refined, &paper_rays);
        let expected: Vec<Int> = [2i64, 1, 2, 1, 2, 1].iter().map(|&x| Int::from(x)).collect();
        assert_eq!(orders, expected);

        // The triangle pair's core has lattice vertices: nothing refines.
        let plus = hull(&[[0, 0], [1, 0], [0, -1]]);
        let minus = hull(&[[1, -1], [-1, -1], [1, 1]]);
        let refined =
            refine_lattice_for_intersection(&plus, &minus, &Lattice::standard(2)).unwrap();
        assert!(refined.contains_lattice(&Lattice::standard(2)));
        assert!(Lattice::standard(2).contains_lattice(&refined));
        assert_eq!(ray_orders(&refined, &paper_rays), vec![Int::one(); 6]);
    }

    #[test]
    fn finer_fans_leave_divisor_data_on_shared_rays_unchanged() {
        let coarse = hirzebruch_fan();
        let fine = common_refinement(&coarse, &hexagon_fan()).unwrap();
        assert!(fine.rays().len() > coarse.rays().len());

        let plus = hull(&[[0, 1], [1, 1]]);
        let minus = hull(&[[0, 0], [2, 0], [0, 2]]);
        let on_coarse = universal_extension(&plus, &minus, &coarse).unwrap();
        let on_fine = universal_extension(&plus, &minus, &fine).unwrap();

        assert_eq!(on_coarse.ext_dim, on_fine.ext_dim);
        assert_eq!(on_coarse.nablas.len(), on_fine.nablas.len());
        for (a, b) in on_coarse.nablas.iter().zip(&on_fine.nablas) {
            assert!(same_set(a, b));
        }
        for (ta, tb) in on_coarse.sequence.terms.iter().zip(&on_fine.sequence.terms) {
            for (sa, sb) in ta.summands.iter().zip(&tb.summands) {
                for ray in coarse.rays() {
                    assert_eq!(
                        sa.divisor.coeff_of(ray),
                        sb.divisor.coeff_of(ray),
                        "summand {} at ray {ray:?}",
                        sa.label
                    );
                }
            }
        }
        // The middle filtration profiles agree at shared rays too.
        for ray in coarse.rays() {
            assert_eq!(
                on_coarse.middle_filtration.profile_of(ray).unwrap(),
                on_fine.middle_filtration.profile_of(ray).unwrap()
            );
        }
    }

    #[test]
    fn class_arithmetic_checks_its_inputs() {
        let a = ExtClass::component_class(1, 3).unwrap();
        let b = ExtClass::component_class(2, 3).unwrap();
        let zero = ExtClass::component_class(0, 3).unwrap();
        let total = class_sum(&[a.clone(), b.clone(), zero]).unwrap();
        assert!(total.is_zero());
        assert_eq!(class_sum(&[a.clone(), a]).unwrap().coordinates, ivec(&[2, 0]));
        let other = ExtClass::component_class(1, 2).unwrap();
        assert!(matches!(class_sum(&[b, other]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(ExtClass::component_class(4, 3), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn sequence_verification_rejects_malformed_data() {
        let fan = hirzebruch_fan();
        let p = hull(&[[0, 0], [1, 0], [0, 1]]);
        let summand = Summand {
            label: "plus".into(),
            polyhedron: p.clone(),
            divisor: divisor_of(&p, &fan).unwrap(),
            lattice: Lattice::standard(2),
        };
        let term = SheafTerm::of_summands(vec![summand]);
        // Wrong shape.
        let bad = ExtensionSequence {
            kind: SequenceKind::ShortUniversal,
            terms: vec![term.clone(), term.clone()],
            maps: vec![int_matrix(&[&[1, 1]])],
        };
        assert!(matches!(bad.verify(), Err(Error::DimensionMismatch(_))));
        // Nonzero composition.
        let bad = ExtensionSequence {
            kind: SequenceKind::ShortUniversal,
            terms: vec![term.clone(), term.clone(), term.clone()],
            maps: vec![int_matrix(&[&[1]]), int_matrix(&[&[1]])],
        };
        assert!(matches!(bad.verify(), Err(Error::InvalidFamily(_))));
        // Identity followed by zero is a fine complex.
        let good = ExtensionSequence {
            kind: SequenceKind::ShortUniversal,
            terms: vec![term.clone(), term.clone(), term],
            maps: vec![int_matrix(&[&[1]]), int_matrix(&[&[0]])],
        };
        good.verify().unwrap();
    }

    #[test]
    fn pushout_images_span_distinct_lines_in_the_overhanging_case() {
        let fan = six_ray_fan();
        let plus = hull(&[[0, 0], [1, 0]]);
        let minus = hull(&[[0, -1], [1, -1], [0, 1]]);
        let ext = universal_extension(&plus, &minus, &fan).unwrap();

        let lines: Vec<Subspace> = ext
            .glued
            .plus_images
            .iter()
            .chain(&ext.glued.nabla_images)
            .map(|v| Subspace::span(2, std::slice::from_ref(v)))
            .collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0] != lines[1] && lines[0] != lines[2] && lines[1] != lines[2]);
    }
}
