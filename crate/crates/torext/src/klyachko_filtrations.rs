//! Filtration data for equivariant sheaves on toric varieties.
//!
//! An equivariant vector bundle on a toric variety is equivalent to a finite
//! dimensional vector space `V` together with one decreasing filtration
//! `… ⊇ F^l(ρ) ⊇ F^{l+1}(ρ) ⊇ …` of `V` for every ray `ρ` of the fan, full
//! for `l ≪ 0` and zero for `l ≫ 0`, subject to a per-cone compatibility
//! condition.  This module provides:
//!
//! * [`Profile`] — a single such filtration, stored by its jumps;
//! * [`Filtration`] — one profile per fan ray, with direct sums and the
//!   level-rescaling maps [`Filtration::stretch`] / [`Filtration::squish`]
//!   used when passing between a lattice and a finite-index sublattice;
//! * [`divisor_filtration`], [`line_bundle_filtration`] and
//!   [`tangent_filtration`] — the rank-one data of a divisor or a divisor
//!   polyhedron, and the data of the tangent bundle;
//! * [`pushout_filtration`] — the filtration of the sheaf glued from copies
//!   of a rank-one `plus` and hull bundles `∇_j` along a common `core`, and
//!   the general [`quotient_filtration`] underlying it;
//! * [`is_split`] — does the data decompose into rank-one summands;
//! * [`check_compatibility`] — Klyachko's criterion: on every maximal cone
//!   the profiles must admit a common eigenspace decomposition whose
//!   characters are integral;
//! * [`equivalent_up_to_basis`] — comparison of two filtrations modulo one
//!   global change of basis.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::exact_geometry::{iv_to_qv, IVec, Int, Polyhedron, QMat, QVec, Rat, Subspace};
use crate::fans_divisors::{divisor_of, Fan, ToricDivisor};
use crate::{Error, Result};

/// A decreasing filtration of `ℂ^r` indexed by integer levels: full for all
/// sufficiently small levels, zero for all sufficiently large ones, and
/// constant between its finitely many jumps.
///
/// The filtration is stored by its jumps `(l, W)`, sorted by strictly
/// increasing level with strictly decreasing subspaces: the value at level
/// `l` is the subspace of the last jump at level `≤ l`, or the full space if
/// there is none.  The final jump subspace is always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    ambient: usize,
    jumps: Vec<(Int, Subspace)>,
}

impl Profile {
    /// Builds a profile from its jump list, validating the chain conditions.
    pub fn new(ambient: usize, jumps: Vec<(Int, Subspace)>) -> Result<Profile> {
        if ambient == 0 {
            return Err(Error::Filtration("profile ambient rank must be positive".into()));
        }
        if jumps.is_empty() {
            return Err(Error::Filtration(
                "a profile needs at least one jump (it must reach zero)".into(),
            ));
        }
        let mut prev = Subspace::full(ambient);
        let mut prev_level: Option<&Int> = None;
        for (level, sub) in &jumps {
            if sub.ambient() != ambient {
                return Err(Error::Filtration(format!(
                    "jump subspace lives in dimension {}, expected {}",
                    sub.ambient(),
                    ambient
                )));
            }
            if let Some(pl) = prev_level {
                if pl >= level {
                    return Err(Error::Filtration(
                        "jump levels must be strictly increasing".into(),
                    ));
                }
            }
            if !(prev.contains(sub) && sub.dim() < prev.dim()) {
                return Err(Error::Filtration(
                    "jump subspaces must form a strictly decreasing chain from the full space"
                        .into(),
                ));
            }
            prev = sub.clone();
            prev_level = Some(level);
        }
        if !prev.is_zero() {
            return Err(Error::Filtration(
                "the final jump subspace must be zero".into(),
            ));
        }
        Ok(Profile { ambient, jumps })
    }

    /// Builds a profile from candidate jumps sorted by strictly increasing
    /// level, dropping candidates that do not strictly shrink the value.
    pub fn normalized(ambient: usize, candidates: Vec<(Int, Subspace)>) -> Result<Profile> {
        let mut jumps: Vec<(Int, Subspace)> = Vec::new();
        let mut prev = Subspace::full(ambient);
        for (level, sub) in candidates {
            if let Some((pl, _)) = jumps.last() {
                if *pl >= level {
                    return Err(Error::Filtration(
                        "jump levels must be strictly increasing".into(),
                    ));
                }
            }
            if !prev.contains(&sub) {
                return Err(Error::Filtration(
                    "candidate jump subspaces must be decreasing".into(),
                ));
            }
            if sub.dim() < prev.dim() {
                prev = sub.clone();
                jumps.push((level, sub));
            }
        }
        Profile::new(ambient, jumps)
    }

    /// The rank-one profile of a line that survives exactly up to `level`.
    pub fn line(level: Int) -> Profile {
        Profile {
            ambient: 1,
            jumps: vec![(level + Int::one(), Subspace::zero(1))],
        }
    }

    /// Dimension of the surrounding vector space.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The jump list: `(level, value from that level on)`.
    pub fn jumps(&self) -> &[(Int, Subspace)] {
        &self.jumps
    }

    /// The value of the filtration at `level`.
    pub fn at(&self, level: &Int) -> Subspace {
        let mut current = Subspace::full(self.ambient);
        for (l, sub) in &self.jumps {
            if level >= l {
                current = sub.clone();
            } else {
                break;
            }
        }
        current
    }

    /// `dim F^level`.
    pub fn dim_at(&self, level: &Int) -> usize {
        let mut dim = self.ambient;
        for (l, sub) in &self.jumps {
            if level >= l {
                dim = sub.dim();
            } else {
                break;
            }
        }
        dim
    }

    /// The largest level whose value still contains `sub`, which must be a
    /// nonzero subspace (every nonzero subspace drops out eventually).
    fn deepest_level_containing(&self, sub: &Subspace) -> Int {
        debug_assert!(!sub.is_zero());
        let mut level = &self.jumps[0].0 - Int::one();
        for (i, (_, value)) in self.jumps.iter().enumerate() {
            if value.contains(sub) {
                level = match self.jumps.get(i + 1) {
                    Some((next, _)) => next - Int::one(),
                    None => unreachable!("the final jump value is zero"),
                };
            } else {
                break;
            }
        }
        level
    }

    /// Reindexes the profile by `F'^l = F^{⌈l/d⌉}` (each level gets repeated
    /// `d` times); a jump at `l` moves to `d(l-1)+1`.
    pub fn stretch(&self, d: &Int) -> Result<Profile> {
        if !d.is_positive() {
            return Err(Error::Filtration("stretch factor must be positive".into()));
        }
        let jumps = self
            .jumps
            .iter()
            .map(|(l, s)| (d * (l - Int::one()) + Int::one(), s.clone()))
            .collect();
        Ok(Profile {
            ambient: self.ambient,
            jumps,
        })
    }

    /// Reindexes the profile by `F'^l = F^{dl}`, the inverse of
    /// [`Profile::stretch`].  Fails unless every jump level is `≡ 1 (mod d)`,
    /// i.e. unless the profile is constant on each block of `d` levels.
    pub fn squish(&self, d: &Int) -> Result<Profile> {
        if !d.is_positive() {
            return Err(Error::Filtration("squish factor must be positive".into()));
        }
        let mut jumps = Vec::with_capacity(self.jumps.len());
        for (l, s) in &self.jumps {
            let (q, r) = (l - Int::one()).div_mod_floor(d);
            if !r.is_zero() {
                return Err(Error::Filtration(format!(
                    "profile jump at level {l} is not aligned to blocks of {d} levels"
                )));
            }
            jumps.push((q + Int::one(), s.clone()));
        }
        Ok(Profile {
            ambient: self.ambient,
            jumps,
        })
    }
}

/// Filtration data for an equivariant sheaf: one [`Profile`] of a common
/// vector space `ℂ^rank` per fan ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    rays: Vec<IVec>,
    rank: usize,
    profiles: Vec<Profile>,
}

impl Filtration {
    /// Builds filtration data from parallel lists of rays and profiles.
    pub fn new(rays: Vec<IVec>, profiles: Vec<Profile>) -> Result<Filtration> {
        if rays.is_empty() {
            return Err(Error::EmptyInput("filtration needs at least one ray"));
        }
        if rays.len() != profiles.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rays but {} profiles",
                rays.len(),
                profiles.len()
            )));
        }
        for i in 1..rays.len() {
            if rays[i..].contains(&rays[i - 1]) {
                return Err(Error::Filtration("duplicate ray".into()));
            }
        }
        let rank = profiles[0].ambient();
        if profiles.iter().any(|p| p.ambient() != rank) {
            return Err(Error::DimensionMismatch(
                "all profiles of a filtration must share one ambient rank".into(),
            ));
        }
        Ok(Filtration {
            rays,
            rank,
            profiles,
        })
    }

    /// Rank of the sheaf (dimension of the common vector space).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The rays, parallel to [`Filtration::profiles`].
    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    /// The profiles, parallel to [`Filtration::rays`].
    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    /// The profile attached to a ray, if the ray is present.
    pub fn profile_of(&self, ray: &IVec) -> Option<&Profile> {
        self.rays
            .iter()
            .position(|r| r == ray)
            .map(|i| &self.profiles[i])
    }

    /// Block direct sum: the summands must list the same rays in the same
    /// order.
    pub fn direct_sum(parts: &[Filtration]) -> Result<Filtration> {
        let Some(first) = parts.first() else {
            return Err(Error::EmptyInput("direct sum needs at least one summand"));
        };
        if parts.iter().any(|p| p.rays != first.rays) {
            return Err(Error::Filtration(
                "direct summands must share the same ray list".into(),
            ));
        }
        let total: usize = parts.iter().map(|p| p.rank).sum();
        let offsets: Vec<usize> = parts
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.rank;
                Some(o)
            })
            .collect();
        let mut profiles = Vec::with_capacity(first.rays.len());
        for ri in 0..first.rays.len() {
            let mut levels: Vec<Int> = parts
                .iter()
                .flat_map(|p| p.profiles[ri].jumps().iter().map(|(l, _)| l.clone()))
                .collect();
            levels.sort();
            levels.dedup();
            let mut candidates = Vec::with_capacity(levels.len());
            for level in levels {
                let mut vectors: Vec<QVec> = Vec::new();
                for (part, &offset) in parts.iter().zip(&offsets) {
                    for basis_vec in part.profiles[ri].at(&level).basis() {
                        vectors.push(embed(basis_vec, offset, total));
                    }
                }
                candidates.push((level, Subspace::span(total, &vectors)));
            }
            profiles.push(Profile::normalized(total, candidates)?);
        }
        Filtration::new(first.rays.clone(), profiles)
    }

    /// Stretches every profile, with one factor per ray (parallel to
    /// [`Filtration::rays`]).
    pub fn stretch(&self, factors: &[Int]) -> Result<Filtration> {
        self.rescaled(factors, Profile::stretch)
    }

    /// Squishes every profile, with one factor per ray (parallel to
    /// [`Filtration::rays`]).
    pub fn squish(&self, factors: &[Int]) -> Result<Filtration> {
        self.rescaled(factors, Profile::squish)
    }

    fn rescaled(
        &self,
        factors: &[Int],
        op: impl Fn(&Profile, &Int) -> Result<Profile>,
    ) -> Result<Filtration> {
        if factors.len() != self.rays.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rescaling factors for {} rays",
                factors.len(),
                self.rays.len()
            )));
        }
        let profiles = self
            .profiles
            .iter()
            .zip(factors)
            .map(|(p, d)| op(p, d))
            .collect::<Result<Vec<_>>>()?;
        Filtration::new(self.rays.clone(), profiles)
    }
}

fn embed(v: &QVec, offset: usize, total: usize) -> QVec {
    let mut out = vec![Rat::zero(); total];
    out[offset..offset + v.len()].clone_from_slice(v);
    out
}

/// Rank-one filtration data of the line bundle of a torus-invariant divisor:
/// at ray `ρ` the fiber line survives exactly up to the coefficient `λ_ρ`,
/// which must be an integer for the divisor to define an honest equivariant
/// line bundle.
pub fn divisor_filtration(d: &ToricDivisor) -> Result<Filtration> {
    let profiles = d
        .coeffs
        .iter()
        .zip(&d.rays)
        .map(|(c, ray)| {
            if c.is_integer() {
                Ok(Profile::line(c.to_integer()))
            } else {
                Err(Error::Filtration(format!(
                    "fractional divisor coefficient {c} at ray {ray:?} does not \
                     define an equivariant line bundle"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Filtration::new(d.rays.clone(), profiles)
}

/// Rank-one filtration data of the line bundle of a compatible lattice
/// polyhedron: the filtration of its divisor on `fan`.
pub fn line_bundle_filtration(fan: &Fan, p: &Polyhedron) -> Result<Filtration> {
    divisor_filtration(&divisor_of(p, fan)?)
}

/// Filtration data of the tangent bundle: at ray `ρ` the full space up to
/// level 0, the line spanned by `ρ` at level 1, zero from level 2 on.
pub fn tangent_filtration(fan: &Fan) -> Result<Filtration> {
    let dim = fan.ambient();
    let profiles = fan
        .rays()
        .iter()
        .map(|ray| {
            let line = Subspace::span(dim, &[iv_to_qv(ray)]);
            Profile::normalized(
                dim,
                vec![(Int::one(), line), (Int::from(2), Subspace::zero(dim))],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Filtration::new(fan.rays().to_vec(), profiles)
}

/// Closes a set of subspaces under pairwise intersection (the full space is
/// always included).
fn meet_closure(ambient: usize, subspaces: &[Subspace]) -> Vec<Subspace> {
    let mut closure: Vec<Subspace> = vec![Subspace::full(ambient)];
    for s in subspaces {
        if !closure.contains(s) {
            closure.push(s.clone());
        }
    }
    loop {
        let mut added = false;
        for i in 0..closure.len() {
            for j in i + 1..closure.len() {
                let meet = closure[i].intersect(&closure[j]);
                if !closure.contains(&meet) {
                    closure.push(meet);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    closure
}

/// For every member `X` of the closure, the dimension of `U_X = Σ {Y ∈ C :
/// Y ⊊ X}`, the part of `X` already accounted for by smaller members.
fn covered_dims(closure: &[Subspace]) -> Vec<usize> {
    closure
        .iter()
        .map(|x| {
            let mut covered = Subspace::zero(x.ambient());
            for y in closure {
                if y != x && x.contains(y) {
                    covered = covered.sum(y);
                }
            }
            covered.dim()
        })
        .collect()
}

/// Whether the filtration data decomposes into rank-one summands: true iff
/// some basis of the common vector space splits every subspace appearing in
/// every profile.  Equivalently, with `C` the meet-closure of all appearing
/// subspaces, the multiplicities `dim X - dim U_X` over `X ∈ C` must add up
/// to the full rank.
pub fn is_split(f: &Filtration) -> bool {
    let subspaces: Vec<Subspace> = f
        .profiles()
        .iter()
        .flat_map(|p| p.jumps().iter().map(|(_, s)| s.clone()))
        .collect();
    let closure = meet_closure(f.rank(), &subspaces);
    let covered = covered_dims(&closure);
    let total: usize = closure
        .iter()
        .zip(&covered)
        .map(|(x, u)| x.dim() - u)
        .sum();
    total == f.rank()
}

/// Klyachko's compatibility criterion.  On each maximal cone `σ` the
/// profiles of the rays of `σ` must admit a common decomposition
/// `V = ⊕ V_u` into eigenspaces with integral characters `u` such that
/// `F^l(ρ) = ⊕ {V_u : ⟨u, v_ρ⟩ ≥ l}` for every ray `ρ` of `σ`; here `v_ρ`
/// is the primitive ray generator in the fan's lattice and `u` ranges over
/// the dual lattice.
///
/// Returns `Ok(false)` when the data is consistent but defines no bundle
/// (no common decomposition, or a character fails to be integral).
pub fn check_compatibility(f: &Filtration, fan: &Fan) -> Result<bool> {
    if f.rays() != fan.rays() {
        return Err(Error::Filtration(
            "filtration rays do not match the fan's rays".into(),
        ));
    }
    let dual = fan.lattice().dual();
    for cone in fan.maximal_cones() {
        let cone_rays = cone.rays();
        let profiles: Vec<&Profile> = cone_rays
            .iter()
            .map(|ray| {
                f.profile_of(ray)
                    .ok_or_else(|| Error::Internal("maximal cone ray missing from fan rays".into()))
            })
            .collect::<Result<Vec<_>>>()?;

        let subspaces: Vec<Subspace> = profiles
            .iter()
            .flat_map(|p| p.jumps().iter().map(|(_, s)| s.clone()))
            .collect();
        let closure = meet_closure(f.rank(), &subspaces);
        let covered = covered_dims(&closure);
        let multiplicity: Vec<usize> = closure
            .iter()
            .zip(&covered)
            .map(|(x, u)| x.dim() - u)
            .collect();
        if multiplicity.iter().sum::<usize>() != f.rank() {
            return Ok(false);
        }

        // Jump vector of each atom: per ray, the deepest level whose value
        // still contains the atom.
        let atoms: Vec<(usize, Vec<Int>)> = closure
            .iter()
            .enumerate()
            .filter(|(i, _)| multiplicity[*i] > 0)
            .map(|(i, x)| {
                let jumps = profiles
                    .iter()
                    .map(|p| p.deepest_level_containing(x))
                    .collect();
                (i, jumps)
            })
            .collect();

        // The candidate decomposition must reproduce every profile value.
        for (pi, profile) in profiles.iter().enumerate() {
            for (level, value) in profile.jumps() {
                let rebuilt: usize = atoms
                    .iter()
                    .filter(|(_, jumps)| &jumps[pi] >= level)
                    .map(|(i, _)| multiplicity[*i])
                    .sum();
                if rebuilt != value.dim() {
                    return Ok(false);
                }
            }
        }

        // Each atom's jump vector must come from an integral character.
        let rows: Vec<QVec> = cone_rays.iter().map(|r| fan.lattice_ray(r)).collect();
        let matrix = QMat::from_rows(&rows);
        for (_, jumps) in &atoms {
            let rhs: QVec = jumps.iter().map(|j| Rat::from_integer(j.clone())).collect();
            match matrix.solve(&rhs) {
                None => return Ok(false),
                Some(u) => {
                    if !dual.contains(&u) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Whether two filtrations agree up to a single change of basis of the
/// common vector space: same rays, for every ray the same jump levels with
/// the same dimension profile, and matching dimensions of all pairwise
/// intersections among the jump subspaces across the whole ray list.
///
/// These are invariants of the basis-change action, so equivalent data
/// always passes.  They separate the configurations this crate produces
/// (where at most three pairwise-distinct lines occur); incidence data of
/// four or more distinct hyperplanes carries finer invariants that no
/// pairwise comparison sees.  Exact equality of the canonical forms is the
/// stricter check, via `==` on [`Filtration`].
pub fn equivalent_up_to_basis(a: &Filtration, b: &Filtration) -> bool {
    if a.rank() != b.rank() || a.rays().len() != b.rays().len() {
        return false;
    }
    let mut subs_a: Vec<&Subspace> = Vec::new();
    let mut subs_b: Vec<&Subspace> = Vec::new();
    for (ray, pa) in a.rays().iter().zip(a.profiles()) {
        let Some(pb) = b.profile_of(ray) else { return false };
        if pa.jumps().len() != pb.jumps().len() {
            return false;
        }
        for ((la, sa), (lb, sb)) in pa.jumps().iter().zip(pb.jumps()) {
            if la != lb || sa.dim() != sb.dim() {
                return false;
            }
            subs_a.push(sa);
            subs_b.push(sb);
        }
    }
    for i in 0..subs_a.len() {
        for j in i + 1..subs_a.len() {
            if subs_a[i].intersect(subs_a[j]).dim() != subs_b[i].intersect(subs_b[j]).dim() {
                return false;
            }
        }
    }
    true
}

/// The standard embedding of the kernel of the coordinate-sum map
/// `ℂ^{n+1} → ℂ`, spanned by `{e_i - e_0 : i = 1, …, n}`: the `(n+1)×n`
/// matrix whose first row is all `-1` over an identity block.
pub fn kernel_embedding(n: usize) -> QMat {
    let mut m = QMat::zero(n + 1, n);
    for c in 0..n {
        *m.at_mut(0, c) = -Rat::one();
        *m.at_mut(c + 1, c) = Rat::one();
    }
    m
}

/// The filtration of the sheaf obtained by gluing `n` copies of the rank-one
/// sheaf `plus` and the hull sheaves `∇_0, …, ∇_n` along the rank-one `core`,
/// together with the images of the `2n+1` generators in the rank-`n+1`
/// quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutFiltration {
    /// The glued sheaf's filtration data, of rank `n+1`.
    pub filtration: Filtration,
    /// Images of the generators of the `n` copies of `plus`.
    pub plus_images: Vec<QVec>,
    /// Images of the generators of `∇_0, …, ∇_n`.
    pub nabla_images: Vec<QVec>,
}

/// Glues `n` copies of the rank-one filtration `plus` with the rank-one
/// filtrations `∇_0, …, ∇_n` along `core`: the quotient of
/// `plus^n ⊕ ⊕_j ∇_j` by the `n` relations `plus_i - Σ_j K_{ji} ∇_j`, where
/// `K` is the kernel embedding matrix (the `{e_i - e_0}` choice is the
/// column matrix with first row `-1` over an identity block).  Each relation
/// is a copy of `core`, and the result carries the image filtration on the
/// rank-`n+1` quotient space.
///
/// All inputs must be rank one and share the same ray list.  The quotient
/// dimensions are checked against the gluing bookkeeping
/// `dim H^l = n·dim plus^l + Σ_j dim ∇_j^l - n·dim core^l`; a failure means
/// the inputs are not the data of a common-core gluing and is reported as an
/// error.
pub fn pushout_filtration(
    plus: &Filtration,
    nablas: &[Filtration],
    core: &Filtration,
    kernel_basis: &QMat,
) -> Result<PushoutFiltration> {
    let Some(first) = nablas.first() else {
        return Err(Error::EmptyInput("gluing needs at least one hull filtration"));
    };
    let rays = first.rays().to_vec();
    for f in nablas.iter().chain([plus, core]) {
        if f.rank() != 1 {
            return Err(Error::Filtration(
                "gluing summands must all have rank one".into(),
            ));
        }
        if f.rays() != rays {
            return Err(Error::Filtration(
                "gluing summands must share the same ray list".into(),
            ));
        }
    }
    let n = nablas.len() - 1;
    if kernel_basis.nrows() != n + 1 || kernel_basis.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "kernel embedding must be {}x{}, got {}x{}",
            n + 1,
            n,
            kernel_basis.nrows(),
            kernel_basis.ncols()
        )));
    }

    // The level up to which a rank-one profile is alive (its single jump,
    // minus one).
    let line_level = |f: &Filtration, ri: usize| -> Int { &f.profiles()[ri].jumps()[0].0 - Int::one() };

    // Summands in order: n copies of plus, then ∇_0 … ∇_n.
    let summands = 2 * n + 1;
    let rank = n + 1;

    // Relations r_i = plus_i - Σ_j K_{ji} ∇_j span the kernel of the
    // quotient map.  Each has its pivot in the plus block.
    let mut relations = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![Rat::zero(); summands];
        row[i] = Rat::one();
        for j in 0..=n {
            row[n + j] -= kernel_basis.at(j, i);
        }
        relations.push(row);
    }
    let mut reduced = QMat::from_rows(&relations);
    let pivots = reduced.rref();
    if pivots.len() != n {
        return Err(Error::Filtration(
            "the kernel embedding does not have independent columns".into(),
        ));
    }
    let free: Vec<usize> = (0..summands).filter(|c| !pivots.contains(c)).collect();
    if free.len() != rank {
        return Err(Error::Internal("gluing quotient has the wrong rank".into()));
    }

    // Image of the k-th generator in quotient coordinates.
    let project = |k: usize| -> QVec {
        let mut v = vec![Rat::zero(); summands];
        v[k] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            if !v[pc].is_zero() {
                let c = v[pc].clone();
                for j in 0..summands {
                    let delta = &c * reduced.at(r, j);
                    v[j] -= delta;
                }
            }
        }
        free.iter().map(|&c| v[c].clone()).collect()
    };
    let images: Vec<QVec> = (0..summands).map(project).collect();

    let mut profiles = Vec::with_capacity(rays.len());
    for ri in 0..rays.len() {
        let plus_level = line_level(plus, ri);
        let core_level = line_level(core, ri);
        let nabla_levels: Vec<Int> = nablas.iter().map(|f| line_level(f, ri)).collect();
        let summand_level =
            |k: usize| -> &Int { if k < n { &plus_level } else { &nabla_levels[k - n] } };

        let mut levels: Vec<Int> = (0..summands)
            .map(|k| summand_level(k) + Int::one())
            .collect();
        levels.sort();
        levels.dedup();
        let mut candidates = Vec::with_capacity(levels.len());
        for level in levels {
            let alive: Vec<QVec> = (0..summands)
                .filter(|&k| *summand_level(k) >= level)
                .map(|k| images[k].clone())
                .collect();
            let value = Subspace::span(rank, &alive);

            // The quotient dimension must match the gluing bookkeeping.
            let survives = |c: &Int| -> isize { isize::from(*c >= level) };
            let expected = n as isize * survives(&plus_level)
                + nabla_levels.iter().map(survives).sum::<isize>()
                - n as isize * survives(&core_level);
            if value.dim() as isize != expected {
                return Err(Error::Incompatible(format!(
                    "gluing dimension bookkeeping fails at ray {:?}, level {level}: \
                     quotient has dimension {}, summands predict {expected}",
                    rays[ri],
                    value.dim(),
                )));
            }
            candidates.push((level, value));
        }
        profiles.push(Profile::normalized(rank, candidates)?);
    }

    Ok(PushoutFiltration {
        filtration: Filtration::new(rays, profiles)?,
        plus_images: images[..n].to_vec(),
        nabla_images: images[n..].to_vec(),
    })
}

/// The image filtration on the quotient of the filtered space by the span of
/// `relations`: per ray and level, the image of the value under the quotient
/// map, in the canonical non-pivot coordinates.  Also returns the images of
/// the original basis vectors, in order.
///
/// This is the filtration of a quotient sheaf whenever the relation span is
/// the fiber of an equivariant subsheaf; the caller is responsible for the
/// dimension bookkeeping that certifies this.
pub fn quotient_filtration(f: &Filtration, relations: &[QVec]) -> Result<(Filtration, Vec<QVec>)> {
    let dim = f.rank();
    if relations.iter().any(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch(
            "relation vectors must match the filtration rank".into(),
        ));
    }
    let mut reduced = QMat::from_rows(relations);
    let pivots = reduced.rref();
    if pivots.len() != relations.len() {
        return Err(Error::Filtration("relations must be independent".into()));
    }
    let rank = dim - pivots.len();
    if rank == 0 {
        return Err(Error::Filtration("quotient must have positive rank".into()));
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let project = |vector: &QVec| -> QVec {
        let mut v = vector.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            if !v[pc].is_zero() {
                let c = v[pc].clone();
                for j in 0..dim {
                    let delta = &c * reduced.at(r, j);
                    v[j] -= delta;
                }
            }
        }
        free.iter().map(|&c| v[c].clone()).collect()
    };

    let mut profiles = Vec::with_capacity(f.rays().len());
    for profile in f.profiles() {
        let candidates = profile
            .jumps()
            .iter()
            .map(|(level, sub)| {
                let image: Vec<QVec> = sub.basis().iter().map(&project).collect();
                (level.clone(), Subspace::span(rank, &image))
            })
            .collect();
        profiles.push(Profile::normalized(rank, candidates)?);
    }
    let basis_images = (0..dim)
        .map(|k| {
            let mut e = vec![Rat::zero(); dim];
            e[k] = Rat::one();
            project(&e)
        })
        .collect();
    Ok((Filtration::new(f.rays().to_vec(), profiles)?, basis_images))
}
