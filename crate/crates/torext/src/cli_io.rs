//! Command dispatch, JSON input/output of all domain objects, and SVG
//! emission of 2D polyhedra, differences, and fans.
//!
//! The input is a single JSON document declaring named objects and jobs:
//!
//! ```json
//! {
//!   "lattices":  { "M": { "basis": [["1","0"],["0","1"]] } },
//!   "polyhedra": { "P": { "vertices": [["0","1"],["1","1"]] } },
//!   "fans":      { "S": { "rays": [["-1","-1"],["0","-1"],["0","1"],["1","0"]],
//!                         "maximal_cones": [[0,1],[0,2],[1,3],[2,3]] } },
//!   "jobs": [ { "command": "ext", "fan": "S", "plus": "P", "minus": "Q" } ]
//! }
//! ```
//!
//! Supported commands: `components`, `cohomology`, `ext`, `klyachko`,
//! `verify`, `plot`.  Every exact scalar (rational, integer, coordinate,
//! level) is serialized as a string in lowest terms — never as a float —
//! and all maps are emitted with sorted keys, so output is byte-identical
//! across runs.  Polyhedra serialize with both the vertex and the
//! half-space description; when an input supplies both they are checked
//! against each other before use.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::difference_topology::{components, Decomposition};
use crate::exact_geometry::{
    centroid, HalfSpace, IVec, Int, Lattice, Polyhedron, QMat, QVec, Rat, Subspace,
};
use crate::extension_builder::{universal_extension, ExtensionSequence, SequenceKind, SheafTerm};
use crate::fans_divisors::{divisor_of, Fan, ToricDivisor};
use crate::graded_cohomology::{cech_cohomology_dims, graded_cohomology_table, GradedTable};
use crate::klyachko_filtrations::{
    check_compatibility, is_split, line_bundle_filtration, Filtration, Profile,
};
use crate::koszul_engine::{full_complex, sigma_family, verify_exactness_everywhere};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Exact scalar text format
// ---------------------------------------------------------------------------

/// Parses an exact rational from `-?[0-9]+(/[1-9][0-9]*)?`.  The result is
/// reduced to lowest terms; malformed text reports the byte position of the
/// first offending character.
pub fn parse_rational(text: &str) -> Result<Rat> {
    let bytes = text.as_bytes();
    let fail = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let mut i = usize::from(bytes.first() == Some(&b'-'));
    let numer_start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i == numer_start {
        return Err(fail(i, "expected a digit"));
    }
    let numer: Int = text[..i].parse().expect("sign and digits form an integer");
    if i == bytes.len() {
        return Ok(Rat::from_integer(numer));
    }
    if bytes[i] != b'/' {
        return Err(fail(i, "expected '/' or end of input"));
    }
    i += 1;
    if i == bytes.len() || !(b'1'..=b'9').contains(&bytes[i]) {
        return Err(fail(i, "denominator must start with a nonzero digit"));
    }
    let denom_start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i != bytes.len() {
        return Err(fail(i, "trailing input after the rational"));
    }
    let denom: Int = text[denom_start..].parse().expect("digits form an integer");
    Ok(Rat::new(numer, denom))
}

/// Canonical lowest-terms text of a rational: `p` or `p/q` with `q > 1`.
pub fn serialize_rational(r: &Rat) -> String {
    r.to_string()
}

/// Parses an integer in the same format, rejecting proper fractions.
pub fn parse_integer(text: &str) -> Result<Int> {
    let r = parse_rational(text)?;
    if !r.is_integer() {
        return Err(Error::Parse { pos: 0, msg: format!("expected an integer, found {r}") });
    }
    Ok(r.to_integer())
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

fn bad(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Json(format!("{what}: {detail}"))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(what, "expected a JSON object"))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, "expected a JSON array"))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(what, "expected a JSON string"))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| bad(what, "expected a nonnegative JSON integer"))
}

fn rational_value(r: &Rat) -> Value {
    Value::String(serialize_rational(r))
}

fn int_value(i: &Int) -> Value {
    Value::String(i.to_string())
}

pub fn qvec_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn ivec_value(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

fn rational_from_value(v: &Value, what: &str) -> Result<Rat> {
    let text = as_str(v, what)?;
    parse_rational(text).map_err(|e| bad(what, e))
}

pub fn qvec_from_value(v: &Value, what: &str) -> Result<QVec> {
    as_array(v, what)?.iter().map(|x| rational_from_value(x, what)).collect()
}

pub fn ivec_from_value(v: &Value, what: &str) -> Result<IVec> {
    as_array(v, what)?
        .iter()
        .map(|x| parse_integer(as_str(x, what)?).map_err(|e| bad(what, e)))
        .collect()
}

/// The key used for a lattice degree in table objects, e.g. `"(0,-1)"`.
pub fn degree_key(m: &[Rat]) -> String {
    let parts: Vec<String> = m.iter().map(serialize_rational).collect();
    format!("({})", parts.join(","))
}

// ---------------------------------------------------------------------------
// Domain objects <-> JSON
// ---------------------------------------------------------------------------

pub fn lattice_to_json(l: &Lattice) -> Value {
    json!({ "basis": l.basis().iter().map(|row| qvec_value(row)).collect::<Vec<_>>() })
}

pub fn lattice_from_json(v: &Value) -> Result<Lattice> {
    let obj = as_object(v, "lattice")?;
    let basis = obj.get("basis").ok_or_else(|| bad("lattice", "missing \"basis\""))?;
    let rows: Vec<QVec> = as_array(basis, "lattice basis")?
        .iter()
        .map(|r| qvec_from_value(r, "lattice basis vector"))
        .collect::<Result<_>>()?;
    let Some(first) = rows.first() else {
        return Err(bad("lattice", "basis must not be empty"));
    };
    Lattice::from_generators(first.len(), &rows)
}

fn halfspace_to_json(h: &HalfSpace) -> Value {
    let (normal, offset) = h.as_row();
    json!({ "normal": ivec_value(&normal), "offset": rational_value(&offset) })
}

fn halfspace_from_json(v: &Value) -> Result<HalfSpace> {
    let obj = as_object(v, "half-space")?;
    let normal = obj.get("normal").ok_or_else(|| bad("half-space", "missing \"normal\""))?;
    let offset = obj.get("offset").ok_or_else(|| bad("half-space", "missing \"offset\""))?;
    Ok(HalfSpace::new(
        ivec_from_value(normal, "half-space normal")?,
        rational_from_value(offset, "half-space offset")?,
    ))
}

/// Serializes a polyhedron with both descriptions: vertices and recession
/// rays on one side, bounding half-spaces on the other.
pub fn polyhedron_to_json(p: &Polyhedron) -> Value {
    if p.is_empty() {
        return json!({ "ambient": p.ambient(), "empty": true });
    }
    json!({
        "ambient": p.ambient(),
        "hrep": p.all_halfspaces().iter().map(halfspace_to_json).collect::<Vec<_>>(),
        "rays": p.rays().iter().map(|r| ivec_value(r)).collect::<Vec<_>>(),
        "vertices": p.vertices().iter().map(|v| qvec_value(v)).collect::<Vec<_>>(),
    })
}

/// Reads a polyhedron from either description; when both are present they
/// must describe the same set, and the vertex description wins.
pub fn polyhedron_from_json(v: &Value) -> Result<Polyhedron> {
    let obj = as_object(v, "polyhedron")?;
    let declared_ambient = obj.get("ambient").map(|a| as_usize(a, "polyhedron ambient")).transpose()?;
    if obj.get("empty").and_then(Value::as_bool) == Some(true) {
        let ambient = declared_ambient
            .ok_or_else(|| bad("polyhedron", "an empty polyhedron needs an \"ambient\" field"))?;
        return Ok(Polyhedron::empty(ambient));
    }

    let vertices: Option<Vec<QVec>> = obj
        .get("vertices")
        .map(|v| {
            as_array(v, "polyhedron vertices")?
                .iter()
                .map(|x| qvec_from_value(x, "polyhedron vertex"))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let rays: Vec<IVec> = match obj.get("rays") {
        None => Vec::new(),
        Some(v) => as_array(v, "polyhedron rays")?
            .iter()
            .map(|x| ivec_from_value(x, "polyhedron ray"))
            .collect::<Result<_>>()?,
    };
    let hrep: Option<Vec<HalfSpace>> = obj
        .get("hrep")
        .map(|v| {
            as_array(v, "polyhedron hrep")?
                .iter()
                .map(halfspace_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;

    let ambient = declared_ambient
        .or_else(|| vertices.as_ref().and_then(|vs| vs.first().map(Vec::len)))
        .or_else(|| hrep.as_ref().and_then(|hs| hs.first().map(|h| h.as_row().0.len())))
        .ok_or_else(|| {
            bad("polyhedron", "cannot infer the ambient dimension; give \"ambient\"")
        })?;

    let from_vertices = match &vertices {
        Some(vs) if !vs.is_empty() => Some(Polyhedron::hull(ambient, vs, &rays)?),
        Some(_) => return Err(bad("polyhedron", "vertex list must not be empty")),
        None => None,
    };
    let from_halfspaces = match &hrep {
        Some(hs) => Some(Polyhedron::from_hrep(ambient, hs)?),
        None => None,
    };
    match (from_vertices, from_halfspaces) {
        (Some(a), Some(b)) => {
            if !(a.contains_polyhedron(&b) && b.contains_polyhedron(&a)) {
                return Err(bad(
                    "polyhedron",
                    "the vertex and half-space descriptions disagree",
                ));
            }
            Ok(a)
        }
        (Some(a), None) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(bad("polyhedron", "needs \"vertices\" (with \"rays\") or \"hrep\"")),
    }
}

/// Serializes a fan as its sorted primitive ray list plus one index set per
/// maximal cone, with the lattice spelled out.
pub fn fan_to_json(f: &Fan) -> Result<Value> {
    let rays = f.rays();
    let mut cones = Vec::with_capacity(f.maximal_cones().len());
    for cone in f.maximal_cones() {
        let mut indices = Vec::with_capacity(cone.rays().len());
        for r in cone.rays() {
            let i = rays
                .iter()
                .position(|s| s == r)
                .ok_or_else(|| Error::Internal("cone ray missing from its fan's rays".into()))?;
            indices.push(i);
        }
        indices.sort_unstable();
        cones.push(Value::Array(indices.into_iter().map(|i| json!(i)).collect()));
    }
    Ok(json!({
        "lattice": lattice_to_json(f.lattice()),
        "maximal_cones": cones,
        "rays": rays.iter().map(|r| ivec_value(r)).collect::<Vec<_>>(),
    }))
}

pub fn fan_from_json(v: &Value) -> Result<Fan> {
    let obj = as_object(v, "fan")?;
    let rays: Vec<IVec> = as_array(
        obj.get("rays").ok_or_else(|| bad("fan", "missing \"rays\""))?,
        "fan rays",
    )?
    .iter()
    .map(|x| ivec_from_value(x, "fan ray"))
    .collect::<Result<_>>()?;
    let Some(first) = rays.first() else {
        return Err(bad("fan", "ray list must not be empty"));
    };
    let cones: Vec<Vec<usize>> = as_array(
        obj.get("maximal_cones").ok_or_else(|| bad("fan", "missing \"maximal_cones\""))?,
        "fan maximal cones",
    )?
    .iter()
    .map(|c| {
        as_array(c, "fan cone")?
            .iter()
            .map(|i| as_usize(i, "fan cone ray index"))
            .collect::<Result<Vec<_>>>()
    })
    .collect::<Result<_>>()?;
    let lattice = match obj.get("lattice") {
        Some(l) => lattice_from_json(l)?,
        None => Lattice::standard(first.len()),
    };
    Fan::from_ray_indices(lattice, &rays, &cones)
}

pub fn divisor_to_json(d: &ToricDivisor) -> Value {
    json!({
        "coeffs": d.coeffs.iter().map(rational_value).collect::<Vec<_>>(),
        "rays": d.rays.iter().map(|r| ivec_value(r)).collect::<Vec<_>>(),
    })
}

pub fn divisor_from_json(v: &Value) -> Result<ToricDivisor> {
    let obj = as_object(v, "divisor")?;
    let rays: Vec<IVec> = as_array(
        obj.get("rays").ok_or_else(|| bad("divisor", "missing \"rays\""))?,
        "divisor rays",
    )?
    .iter()
    .map(|x| ivec_from_value(x, "divisor ray"))
    .collect::<Result<_>>()?;
    let coeffs: Vec<Rat> = as_array(
        obj.get("coeffs").ok_or_else(|| bad("divisor", "missing \"coeffs\""))?,
        "divisor coefficients",
    )?
    .iter()
    .map(|x| rational_from_value(x, "divisor coefficient"))
    .collect::<Result<_>>()?;
    if rays.len() != coeffs.len() {
        return Err(bad("divisor", "rays and coeffs must have the same length"));
    }
    Ok(ToricDivisor { rays, coeffs })
}

fn subspace_to_json(s: &Subspace) -> Value {
    Value::Array(s.basis().iter().map(|row| qvec_value(row)).collect())
}

fn subspace_from_json(ambient: usize, v: &Value) -> Result<Subspace> {
    let rows: Vec<QVec> = as_array(v, "subspace")?
        .iter()
        .map(|r| qvec_from_value(r, "subspace basis vector"))
        .collect::<Result<_>>()?;
    for row in &rows {
        if row.len() != ambient {
            return Err(bad("subspace", "basis vector length does not match the rank"));
        }
    }
    Ok(Subspace::span(ambient, &rows))
}

pub fn filtration_to_json(f: &Filtration) -> Value {
    let profiles: Vec<Value> = f
        .profiles()
        .iter()
        .map(|p| {
            let jumps: Vec<Value> = p
                .jumps()
                .iter()
                .map(|(level, sub)| {
                    json!({ "level": int_value(level), "subspace": subspace_to_json(sub) })
                })
                .collect();
            json!({ "jumps": jumps })
        })
        .collect();
    json!({
        "profiles": profiles,
        "rank": f.rank(),
        "rays": f.rays().iter().map(|r| ivec_value(r)).collect::<Vec<_>>(),
    })
}

pub fn filtration_from_json(v: &Value) -> Result<Filtration> {
    let obj = as_object(v, "filtration")?;
    let rank = as_usize(
        obj.get("rank").ok_or_else(|| bad("filtration", "missing \"rank\""))?,
        "filtration rank",
    )?;
    let rays: Vec<IVec> = as_array(
        obj.get("rays").ok_or_else(|| bad("filtration", "missing \"rays\""))?,
        "filtration rays",
    )?
    .iter()
    .map(|x| ivec_from_value(x, "filtration ray"))
    .collect::<Result<_>>()?;
    let profiles: Vec<Profile> = as_array(
        obj.get("profiles").ok_or_else(|| bad("filtration", "missing \"profiles\""))?,
        "filtration profiles",
    )?
    .iter()
    .map(|p| {
        let pobj = as_object(p, "profile")?;
        let jumps = as_array(
            pobj.get("jumps").ok_or_else(|| bad("profile", "missing \"jumps\""))?,
            "profile jumps",
        )?
        .iter()
        .map(|j| {
            let jobj = as_object(j, "jump")?;
            let level_text =
                as_str(jobj.get("level").ok_or_else(|| bad("jump", "missing \"level\""))?, "jump level")?;
            let level = parse_integer(level_text).map_err(|e| bad("jump level", e))?;
            let sub = subspace_from_json(
                rank,
                jobj.get("subspace").ok_or_else(|| bad("jump", "missing \"subspace\""))?,
            )?;
            Ok((level, sub))
        })
        .collect::<Result<Vec<_>>>()?;
        Profile::new(rank, jumps)
    })
    .collect::<Result<_>>()?;
    Filtration::new(rays, profiles)
}

fn table_to_json(t: &GradedTable) -> Value {
    let mut degrees: BTreeSet<&QVec> = t.h0().keys().collect();
    degrees.extend(t.h1().keys());
    let mut map = Map::new();
    for m in degrees {
        map.insert(degree_key(m), json!({ "h0": t.h0_at(m), "h1": t.h1_at(m) }));
    }
    Value::Object(map)
}

fn decomposition_to_json(d: &Decomposition) -> Value {
    json!({
        "component_count": d.components.len(),
        "components": d
            .components
            .iter()
            .map(|c| json!({
                "cell_count": c.cell_indices.len(),
                "hull": polyhedron_to_json(&c.hull),
            }))
            .collect::<Vec<_>>(),
        "core": polyhedron_to_json(&d.core),
    })
}

// ---------------------------------------------------------------------------
// Divisor classes relative to a user-chosen basis
// ---------------------------------------------------------------------------

/// Writes the divisor class of `target` as coordinates in the classes of
/// `basis`, by solving `target ≡ Σ xᵢ·basisᵢ` modulo the divisors of
/// characters.  Fails when the basis classes are dependent or do not span
/// the target's class.
fn class_in_basis(target: &ToricDivisor, basis: &[ToricDivisor], fan: &Fan) -> Result<QVec> {
    let rays = fan.rays();
    let aligned = |d: &ToricDivisor| -> Result<QVec> {
        rays.iter()
            .map(|r| {
                d.coeff_of(r).cloned().ok_or_else(|| {
                    Error::Incompatible(format!(
                        "class-basis divisor is missing the fan ray {r:?}"
                    ))
                })
            })
            .collect()
    };
    let mut cols: Vec<QVec> = basis.iter().map(aligned).collect::<Result<_>>()?;
    for j in 0..fan.ambient() {
        cols.push(rays.iter().map(|r| fan.lattice_ray(r)[j].clone()).collect());
    }
    let a = QMat::from_cols(&cols);
    if a.rank() != cols.len() {
        return Err(Error::Incompatible(
            "the class basis is dependent modulo divisors of characters".into(),
        ));
    }
    let rhs = aligned(target)?;
    let x = a.solve(&rhs).ok_or_else(|| {
        Error::Incompatible("the divisor class is not spanned by the class basis".into())
    })?;
    Ok(x[..basis.len()].to_vec())
}

// ---------------------------------------------------------------------------
// Input document and job resolution
// ---------------------------------------------------------------------------

/// The command verbs the CLI accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Components,
    Cohomology,
    Ext,
    Klyachko,
    Verify,
    Plot,
}

impl CommandKind {
    pub fn parse(text: &str) -> Result<CommandKind> {
        match text {
            "components" => Ok(CommandKind::Components),
            "cohomology" => Ok(CommandKind::Cohomology),
            "ext" => Ok(CommandKind::Ext),
            "klyachko" => Ok(CommandKind::Klyachko),
            "verify" => Ok(CommandKind::Verify),
            "plot" => Ok(CommandKind::Plot),
            other => Err(Error::Json(format!(
                "unknown command {other:?}; expected one of components, cohomology, ext, \
                 klyachko, verify, plot"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Components => "components",
            CommandKind::Cohomology => "cohomology",
            CommandKind::Ext => "ext",
            CommandKind::Klyachko => "klyachko",
            CommandKind::Verify => "verify",
            CommandKind::Plot => "plot",
        }
    }
}

/// The named objects and raw job entries of an input document.
#[derive(Debug, Clone)]
pub struct InputDocument {
    pub lattices: BTreeMap<String, Lattice>,
    pub polyhedra: BTreeMap<String, Polyhedron>,
    pub fans: BTreeMap<String, Fan>,
    jobs: Vec<Map<String, Value>>,
}

pub fn parse_document(text: &str) -> Result<InputDocument> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Json(format!("input is not valid JSON: {e}")))?;
    let obj = as_object(&root, "input document")?;

    let section = |key: &str| -> Result<Vec<(String, Value)>> {
        match obj.get(key) {
            None => Ok(Vec::new()),
            Some(v) => Ok(as_object(v, key)?
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect()),
        }
    };

    let mut lattices = BTreeMap::new();
    for (name, v) in section("lattices")? {
        lattices.insert(name, lattice_from_json(&v)?);
    }
    let mut polyhedra = BTreeMap::new();
    for (name, v) in section("polyhedra")? {
        polyhedra.insert(name, polyhedron_from_json(&v)?);
    }
    let mut fans = BTreeMap::new();
    for (name, v) in section("fans")? {
        fans.insert(name, fan_from_json(&v)?);
    }
    let jobs = match obj.get("jobs") {
        None => Vec::new(),
        Some(v) => as_array(v, "jobs")?
            .iter()
            .map(|j| as_object(j, "job").cloned())
            .collect::<Result<_>>()?,
    };
    Ok(InputDocument { lattices, polyhedra, fans, jobs })
}

/// A fully resolved job: the command, the objects it operates on, and its
/// options.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: CommandKind,
    pub fan: Option<Fan>,
    pub plus: Option<Polyhedron>,
    pub minus: Option<Polyhedron>,
    pub polyhedron: Option<Polyhedron>,
    pub members: Vec<Polyhedron>,
    pub class_basis: Vec<Polyhedron>,
    pub degree: Option<QVec>,
    pub verify_oracle: bool,
}

/// Options passed on the command line; they override the job entry's own.
#[derive(Debug, Clone, Default)]
pub struct CliOptions {
    pub degree: Option<String>,
    pub verify_oracle: bool,
}

/// Parses a degree option `"a,b"` into exact coordinates.
pub fn parse_degree(text: &str) -> Result<QVec> {
    text.split(',')
        .map(|part| parse_rational(part.trim()))
        .collect::<Result<QVec>>()
        .map_err(|e| Error::Json(format!("degree option: {e}")))
}

/// Resolves the job entry for `command` against the document's named
/// objects.  When the document has no matching job entry, conventional
/// names are used: polyhedra `plus`, `minus`, `polyhedron`, and the
/// document's only fan.
pub fn resolve_job(
    doc: &InputDocument,
    command: CommandKind,
    options: &CliOptions,
) -> Result<JobSpec> {
    let empty = Map::new();
    let entry = doc
        .jobs
        .iter()
        .find(|j| j.get("command").and_then(Value::as_str) == Some(command.name()))
        .unwrap_or(&empty);

    let name_of = |key: &str| -> Result<Option<String>> {
        match entry.get(key) {
            None => Ok(None),
            Some(v) => Ok(Some(as_str(v, key)?.to_string())),
        }
    };
    let polyhedron_named = |name: &str| -> Result<Polyhedron> {
        doc.polyhedra
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Json(format!("job references unknown polyhedron {name:?}")))
    };
    let lookup_polyhedron = |key: &str| -> Result<Option<Polyhedron>> {
        match name_of(key)? {
            Some(name) => Ok(Some(polyhedron_named(&name)?)),
            None => match doc.polyhedra.get(key) {
                Some(p) => Ok(Some(p.clone())),
                None => Ok(None),
            },
        }
    };

    let fan = match name_of("fan")? {
        Some(name) => Some(doc.fans.get(&name).cloned().ok_or_else(|| {
            Error::Json(format!("job references unknown fan {name:?}"))
        })?),
        None if doc.fans.len() == 1 => doc.fans.values().next().cloned(),
        None => None,
    };

    let list_of = |key: &str| -> Result<Vec<Polyhedron>> {
        match entry.get(key) {
            None => Ok(Vec::new()),
            Some(v) => as_array(v, key)?
                .iter()
                .map(|n| polyhedron_named(as_str(n, key)?))
                .collect(),
        }
    };

    let degree_text = match &options.degree {
        Some(t) => Some(t.clone()),
        None => name_of("degree")?,
    };
    let degree = degree_text.as_deref().map(parse_degree).transpose()?;
    if degree.is_some() && command != CommandKind::Cohomology {
        return Err(Error::Json(
            "the degree option only applies to the cohomology command".into(),
        ));
    }
    let verify_oracle = options.verify_oracle
        || entry.get("verify_oracle").and_then(Value::as_bool).unwrap_or(false);

    Ok(JobSpec {
        command,
        fan,
        plus: lookup_polyhedron("plus")?,
        minus: lookup_polyhedron("minus")?,
        polyhedron: lookup_polyhedron("polyhedron")?,
        members: list_of("members")?,
        class_basis: list_of("class_basis")?,
        degree,
        verify_oracle,
    })
}

// ---------------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------------

/// The result of a run: a JSON report, and for `plot` an SVG figure.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub json: String,
    pub svg: Option<String>,
}

fn finish(v: Value) -> RunOutput {
    let mut json = serde_json::to_string_pretty(&v).expect("tree serialization cannot fail");
    json.push('\n');
    RunOutput { json, svg: None }
}

fn need<'a, T>(x: &'a Option<T>, command: CommandKind, what: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| {
        Error::Json(format!("the {} command needs {what}", command.name()))
    })
}

/// Parses the document, resolves the job for `command`, and runs it.
pub fn execute(command: &str, input: &str, options: &CliOptions) -> Result<RunOutput> {
    let kind = CommandKind::parse(command)?;
    let doc = parse_document(input)?;
    let job = resolve_job(&doc, kind, options)?;
    run(&job)
}

/// Runs one resolved job.
pub fn run(job: &JobSpec) -> Result<RunOutput> {
    match job.command {
        CommandKind::Components => run_components(job),
        CommandKind::Cohomology => run_cohomology(job),
        CommandKind::Ext => run_ext(job),
        CommandKind::Klyachko => run_klyachko(job),
        CommandKind::Verify => run_verify(job),
        CommandKind::Plot => run_plot(job),
    }
}

fn run_components(job: &JobSpec) -> Result<RunOutput> {
    let plus = need(&job.plus, job.command, "a \"plus\" polyhedron")?;
    let minus = need(&job.minus, job.command, "a \"minus\" polyhedron")?;
    let d = components(minus, plus)?;
    Ok(finish(json!({
        "command": "components",
        "decomposition": decomposition_to_json(&d),
    })))
}

fn run_cohomology(job: &JobSpec) -> Result<RunOutput> {
    let fan = need(&job.fan, job.command, "a fan")?;
    let plus = need(&job.plus, job.command, "a \"plus\" polyhedron")?;
    let minus = need(&job.minus, job.command, "a \"minus\" polyhedron")?;
    let table = graded_cohomology_table(fan, plus, minus)?;

    let mut degrees: BTreeSet<QVec> = table.h0().keys().cloned().collect();
    degrees.extend(table.h1().keys().cloned());
    if let Some(m) = &job.degree {
        if m.len() != fan.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "degree has {} coordinates, the fan lives in dimension {}",
                m.len(),
                fan.ambient()
            )));
        }
        degrees.insert(m.clone());
    }
    if job.verify_oracle {
        for m in &degrees {
            let (c0, c1) = cech_cohomology_dims(fan, plus, minus, m)?;
            if (c0, c1) != (table.h0_at(m), table.h1_at(m)) {
                return Err(Error::Internal(format!(
                    "affine-cover complex disagrees with the component formula in degree {:?}",
                    m
                )));
            }
        }
    }

    let table_json = match &job.degree {
        None => table_to_json(&table),
        Some(m) => {
            let mut map = Map::new();
            map.insert(degree_key(m), json!({ "h0": table.h0_at(m), "h1": table.h1_at(m) }));
            Value::Object(map)
        }
    };
    Ok(finish(json!({
        "command": "cohomology",
        "h0_total": table.h0_total(),
        "h1_total": table.h1_total(),
        "oracle_checked": job.verify_oracle,
        "table": table_json,
    })))
}

fn sequence_to_json(
    seq: &ExtensionSequence,
    class_basis: &[ToricDivisor],
    fan: &Fan,
) -> Result<Value> {
    let kind = match seq.kind {
        SequenceKind::LongKoszul => "long_koszul",
        SequenceKind::ShortUniversal => "short_universal",
        SequenceKind::SinglePushout => "single_pushout",
    };
    let term_json = |t: &SheafTerm| -> Result<Value> {
        let summands = t
            .summands
            .iter()
            .map(|s| {
                let mut obj = Map::new();
                obj.insert("divisor".into(), divisor_to_json(&s.divisor));
                obj.insert("label".into(), Value::String(s.label.clone()));
                obj.insert("lattice".into(), lattice_to_json(&s.lattice));
                obj.insert("polyhedron".into(), polyhedron_to_json(&s.polyhedron));
                if !class_basis.is_empty() {
                    let class = class_in_basis(&s.divisor, class_basis, fan)?;
                    obj.insert("class".into(), Value::String(degree_key(&class)));
                }
                Ok(Value::Object(obj))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut obj = Map::new();
        obj.insert("rank".into(), json!(t.rank()));
        obj.insert("summands".into(), Value::Array(summands));
        if let Some(f) = &t.filtration {
            obj.insert("filtration".into(), filtration_to_json(f));
        }
        Ok(Value::Object(obj))
    };
    let matrix_json = |m: &QMat| -> Value {
        Value::Array((0..m.nrows()).map(|i| qvec_value(&m.row(i))).collect())
    };
    Ok(json!({
        "kind": kind,
        "maps": seq.maps.iter().map(matrix_json).collect::<Vec<_>>(),
        "terms": seq.terms.iter().map(term_json).collect::<Result<Vec<_>>>()?,
    }))
}

fn run_ext(job: &JobSpec) -> Result<RunOutput> {
    let fan = need(&job.fan, job.command, "a fan")?;
    let plus = need(&job.plus, job.command, "a \"plus\" polyhedron")?;
    let minus = need(&job.minus, job.command, "a \"minus\" polyhedron")?;
    let ext = universal_extension(plus, minus, fan)?;

    let basis: Vec<ToricDivisor> = job
        .class_basis
        .iter()
        .map(|p| divisor_of(p, &ext.working_fan))
        .collect::<Result<_>>()?;
    let classes: Vec<Value> = ext
        .classes
        .iter()
        .map(|c| ivec_value(&c.coordinates))
        .collect();
    Ok(finish(json!({
        "classes": classes,
        "command": "ext",
        "ext_dim": ext.ext_dim,
        "middle_is_line_bundle_sum": ext.middle_is_line_bundle_sum,
        "refined_lattice": lattice_to_json(&ext.refined_lattice),
        "sequence": sequence_to_json(&ext.sequence, &basis, &ext.working_fan)?,
        "stretch_factors": ivec_value(&ext.stretch_factors),
        "working_fan": fan_to_json(&ext.working_fan)?,
    })))
}

fn run_klyachko(job: &JobSpec) -> Result<RunOutput> {
    let fan = need(&job.fan, job.command, "a fan")?;
    let (filtration, detail) = match (&job.polyhedron, &job.plus, &job.minus) {
        (Some(p), _, _) => {
            let f = line_bundle_filtration(fan, p)?;
            (f, json!({ "source": "line_bundle" }))
        }
        (None, Some(plus), Some(minus)) => {
            let ext = universal_extension(plus, minus, fan)?;
            (
                ext.middle_filtration.clone(),
                json!({
                    "ext_dim": ext.ext_dim,
                    "middle_is_line_bundle_sum": ext.middle_is_line_bundle_sum,
                    "source": "universal_extension_middle",
                }),
            )
        }
        _ => {
            return Err(Error::Json(
                "the klyachko command needs a \"polyhedron\", or \"plus\" and \"minus\"".into(),
            ))
        }
    };
    let compatible = check_compatibility(&filtration, fan)?;
    Ok(finish(json!({
        "command": "klyachko",
        "compatible": compatible,
        "detail": detail,
        "filtration": filtration_to_json(&filtration),
        "is_split": is_split(&filtration),
    })))
}

fn run_verify(job: &JobSpec) -> Result<RunOutput> {
    let fan = need(&job.fan, job.command, "a fan")?;
    if job.members.is_empty() {
        return Err(Error::Json(
            "the verify command needs a nonempty \"members\" list".into(),
        ));
    }
    let family = match sigma_family(fan, &job.members) {
        Ok(f) => f,
        Err(e) => {
            return Ok(finish(json!({
                "command": "verify",
                "exact_everywhere": false,
                "family_valid": false,
                "reason": e.to_string(),
            })))
        }
    };
    let complex = full_complex(&family)?;
    let failures = verify_exactness_everywhere(&family)?;
    Ok(finish(json!({
        "command": "verify",
        "complex_dims": complex.dims(),
        "exact_everywhere": failures.is_empty(),
        "failures": failures
            .iter()
            .map(|f| json!({
                "cone_rays": f.cone.rays().iter().map(|r| ivec_value(r)).collect::<Vec<_>>(),
                "position": f.position,
                "sample": qvec_value(&f.sample),
            }))
            .collect::<Vec<_>>(),
        "family_valid": true,
    })))
}

// ---------------------------------------------------------------------------
// SVG emission
// ---------------------------------------------------------------------------

fn to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("figure coordinates fit in a double")
}

/// The vertices of a bounded 2D polyhedron in counterclockwise boundary
/// order, starting deterministically from the canonical vertex order.
fn boundary_cycle(p: &Polyhedron) -> Vec<QVec> {
    let mut vs: Vec<QVec> = p.vertices().to_vec();
    if vs.len() <= 2 {
        return vs;
    }
    let c = centroid(p.vertices());
    let half = |v: &QVec| -> u8 {
        let dx = &v[0] - &c[0];
        let dy = &v[1] - &c[1];
        u8::from(!(dy.is_positive() || (dy.is_zero() && dx.is_positive())))
    };
    vs.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let (ax, ay) = (&a[0] - &c[0], &a[1] - &c[1]);
            let (bx, by) = (&b[0] - &c[0], &b[1] - &c[1]);
            // Counterclockwise within a half-plane: positive cross product
            // means `a` comes first.
            (&bx * &ay).cmp(&(&ax * &by))
        })
    });
    vs
}

struct Canvas {
    min_x: f64,
    max_y: f64,
    scale: f64,
    pad: f64,
    width: f64,
    height: f64,
}

impl Canvas {
    fn around(points: &[QVec]) -> Canvas {
        let xs: Vec<f64> = points.iter().map(|p| to_f64(&p[0])).collect();
        let ys: Vec<f64> = points.iter().map(|p| to_f64(&p[1])).collect();
        let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
        let (min_x, max_x) = (fold(&xs, f64::min, f64::MAX), fold(&xs, f64::max, f64::MIN));
        let (min_y, max_y) = (fold(&ys, f64::min, f64::MAX), fold(&ys, f64::max, f64::MIN));
        let scale = 60.0;
        let pad = 40.0;
        Canvas {
            min_x,
            max_y,
            scale,
            pad,
            width: (max_x - min_x) * scale + 2.0 * pad,
            height: (max_y - min_y) * scale + 2.0 * pad,
        }
    }

    fn point(&self, v: &QVec) -> (f64, f64) {
        (
            (to_f64(&v[0]) - self.min_x) * self.scale + self.pad,
            (self.max_y - to_f64(&v[1])) * self.scale + self.pad,
        )
    }
}

fn svg_shape(out: &mut String, p: &Polyhedron, canvas: &Canvas, style: &str, title: &str) {
    let cycle = boundary_cycle(p);
    match cycle.len() {
        0 => {}
        1 => {
            let (x, y) = canvas.point(&cycle[0]);
            let _ = writeln!(
                out,
                "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" {style}><title>{title}</title></circle>"
            );
        }
        2 => {
            let (x1, y1) = canvas.point(&cycle[0]);
            let (x2, y2) = canvas.point(&cycle[1]);
            let _ = writeln!(
                out,
                "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" {style}><title>{title}</title></line>"
            );
        }
        _ => {
            let points: Vec<String> = cycle
                .iter()
                .map(|v| {
                    let (x, y) = canvas.point(v);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                "  <polygon points=\"{}\" {style}><title>{title}</title></polygon>",
                points.join(" ")
            );
        }
    }
}

const COMPONENT_FILLS: [&str; 6] =
    ["#8ecae6", "#ffb4a2", "#b5e48c", "#f9dc5c", "#cdb4db", "#90be6d"];

/// Renders a static figure: the `minus` region, the components of the
/// difference shaded in distinct fills, the `plus` outline, and (when a fan
/// is given) its rays from the origin.
fn svg_figure(
    plus: Option<&Polyhedron>,
    minus: Option<&Polyhedron>,
    decomposition: Option<&Decomposition>,
    fan: Option<&Fan>,
) -> Result<String> {
    let mut frame_points: Vec<QVec> = Vec::new();
    for p in [plus, minus].into_iter().flatten() {
        if p.ambient() != 2 {
            return Err(Error::DimensionMismatch(
                "plots are drawn for 2-dimensional polyhedra only".into(),
            ));
        }
        if !p.is_bounded() {
            return Err(Error::Unbounded("plots need bounded polyhedra".into()));
        }
        frame_points.extend(p.vertices().iter().cloned());
    }
    if fan.is_some() {
        frame_points.push(vec![Rat::zero(), Rat::zero()]);
    }
    if frame_points.is_empty() {
        return Err(Error::EmptyInput("nothing to plot"));
    }
    let canvas = Canvas::around(&frame_points);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">",
        canvas.width, canvas.height, canvas.width, canvas.height
    );
    let _ = writeln!(
        out,
        "  <rect width=\"{:.0}\" height=\"{:.0}\" fill=\"#ffffff\"/>",
        canvas.width, canvas.height
    );

    if let Some(m) = minus {
        svg_shape(
            &mut out,
            m,
            &canvas,
            "fill=\"#f1f1f1\" stroke=\"#555555\" stroke-width=\"1\"",
            "minus",
        );
    }
    if let Some(d) = decomposition {
        for (i, c) in d.components.iter().enumerate() {
            let style = format!(
                "fill=\"{}\" fill-opacity=\"0.85\" stroke=\"#333333\" stroke-width=\"0.8\"",
                COMPONENT_FILLS[i % COMPONENT_FILLS.len()]
            );
            svg_shape(&mut out, &c.hull, &canvas, &style, &format!("component {i}"));
        }
    }
    if let Some(p) = plus {
        svg_shape(
            &mut out,
            p,
            &canvas,
            "fill=\"none\" stroke=\"#d62828\" stroke-width=\"1.6\"",
            "plus",
        );
    }
    if let Some(f) = fan {
        let origin = canvas.point(&vec![Rat::zero(), Rat::zero()]);
        for ray in f.rays() {
            let (dx, dy) = (ray[0].to_f64().unwrap_or(0.0), ray[1].to_f64().unwrap_or(0.0));
            let norm = (dx * dx + dy * dy).sqrt();
            let len = canvas.pad * 0.9;
            let (ex, ey) = (origin.0 + dx / norm * len, origin.1 - dy / norm * len);
            let _ = writeln!(
                out,
                "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{ex:.2}\" y2=\"{ey:.2}\" stroke=\"#1d3557\" stroke-width=\"1\" stroke-dasharray=\"3 2\"><title>ray {ray:?}</title></line>",
                origin.0, origin.1
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn run_plot(job: &JobSpec) -> Result<RunOutput> {
    let (svg, manifest) = match (&job.polyhedron, &job.plus, &job.minus) {
        (Some(p), _, _) => {
            let svg = svg_figure(Some(p), None, None, job.fan.as_ref())?;
            (svg, json!({ "command": "plot", "component_count": 0 }))
        }
        (None, Some(plus), Some(minus)) => {
            let d = components(minus, plus)?;
            let svg = svg_figure(Some(plus), Some(minus), Some(&d), job.fan.as_ref())?;
            (svg, json!({ "command": "plot", "component_count": d.components.len() }))
        }
        _ => {
            return Err(Error::Json(
                "the plot command needs a \"polyhedron\", or \"plus\" and \"minus\"".into(),
            ))
        }
    };
    let mut output = finish(manifest);
    output.svg = Some(svg);
    Ok(output)
}

// ---------------------------------------------------------------------------
// Error reporting
// ---------------------------------------------------------------------------

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::EmptyInput(_) => "empty_input",
        Error::NoVertex => "no_vertex",
        Error::Unbounded(_) => "unbounded",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::NotFullDimensional(_) => "not_full_dimensional",
        Error::Incompatible(_) => "incompatible",
        Error::InvalidFan(_) => "invalid_fan",
        Error::InvalidFamily(_) => "invalid_family",
        Error::Lattice(_) => "lattice",
        Error::Filtration(_) => "filtration",
        Error::IndexOutOfRange(_) => "index_out_of_range",
        Error::Parse { .. } => "parse",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
        Error::Internal(_) => "internal",
    }
}

/// A machine-readable error report, printed to stderr by the binary before
/// exiting nonzero.
pub fn error_json(e: &Error) -> String {
    let v = json!({
        "error": {
            "exit_code": e.exit_code(),
            "kind": error_kind(e),
            "message": e.to_string(),
        }
    });
    let mut text = serde_json::to_string_pretty(&v).expect("tree serialization cannot fail");
    text.push('\n');
    text
}
