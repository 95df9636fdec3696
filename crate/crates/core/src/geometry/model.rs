use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::parse::{parse_polynomial, Compiled, ParseError};
use crate::field::{build_field, embed_subfield, Field, FieldDescriptor, FieldElement, FieldError};
use crate::perm;

pub const DEFAULT_POINT_CAP: u64 = 1 << 26;

const NONE: u32 = u32::MAX;
const CHUNK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Cap on the ambient coordinate count `q^(W k)`.
    pub points: u64,
    /// Cap on the working field order.
    pub field: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            points: DEFAULT_POINT_CAP,
            field: crate::field::DEFAULT_FIELD_CAP,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("in `{text}`: {source}")]
    Parse { text: String, source: ParseError },
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("enumeration needs {needed} coordinate tuples, cap is {cap}")]
    CapExceeded { needed: String, cap: u64 },
    #[error("generator `{generator}` sends point {point} outside V; it is not an automorphism")]
    NotAnAutomorphism { generator: String, point: String },
    #[error("generator `{generator}` is not a bijection of the point set")]
    NotBijective { generator: String },
    #[error("the endomorphism sends point {point} outside V")]
    NotAnEndomorphism { point: String },
    #[error("Frobenius sends point {point} outside the point set")]
    FrobeniusEscapes { point: String },
    #[error("Frobenius is not a bijection, or its order does not divide W = {working_degree}")]
    FrobeniusOrder { working_degree: u32 },
    #[error("`{left}` and `{right}` do not commute at point {point}")]
    Commutation {
        left: String,
        right: String,
        point: String,
    },
    #[error("counts over F_q^{n} for subgroups of order {h} are not certified by W = {working_degree} on an incomplete model")]
    Exactness { n: u64, h: u64, working_degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseField {
    pub p: u64,
    pub e: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub map: Vec<String>,
}

fn default_n_values() -> Vec<u32> {
    vec![1]
}

fn default_n_max() -> usize {
    8
}

fn yes() -> bool {
    true
}

/// Polynomial description of `(V, G, f)` over `F_q`, `q = p^e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub field: BaseField,
    pub working_degree: u32,
    pub variables: Vec<String>,
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endomorphism: Option<Vec<String>>,
    #[serde(default = "default_n_values")]
    pub n_values: Vec<u32>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Declared completeness. When absent, the builder compares point counts
    /// at `W` and `2W`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
}

/// Explicit finite model: a point count with Frobenius, generators and `f`
/// given as index arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractSpec {
    pub points: usize,
    pub frobenius: Vec<u32>,
    #[serde(default)]
    pub generators: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endomorphism: Option<Vec<u32>>,
    #[serde(default = "yes")]
    pub complete: bool,
    #[serde(default = "default_n_values")]
    pub n_values: Vec<u32>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

/// How the completeness flag was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// The spec asserted `complete: true`.
    Declared,
    /// Point count unchanged from `W` to `2W` (necessary, not sufficient).
    Doubling,
    /// Abstract model flagged complete.
    Abstract,
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPerm {
    pub name: String,
    pub perm: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelMeta {
    pub q: Option<u64>,
    pub working_degree: u32,
    pub complete: bool,
    pub completeness: Completeness,
    pub spec_hash: String,
    pub n_values: Vec<u32>,
    pub n_max: usize,
}

#[derive(Clone, Debug)]
enum Points {
    Coords {
        field: Field,
        variables: Vec<String>,
        keys: Vec<u64>,
    },
    Abstract,
}

/// The finite point set `V(F_{q^W})` with Frobenius, the group action and
/// the endomorphism, all as index arrays over canonically ordered points.
#[derive(Clone, Debug)]
pub struct EquivariantModel {
    points: Points,
    frob: Vec<u32>,
    generators: Vec<NamedPerm>,
    group_maps: Vec<Vec<u32>>,
    f_map: Option<Vec<u32>>,
    meta: ModelMeta,
    degrees: OnceLock<Vec<u32>>,
}

/// SHA-256 of the canonical (key-sorted) JSON of an input document.
pub fn spec_hash<T: Serialize>(kind: &str, spec: &T) -> String {
    let mut value = serde_json::to_value(spec).expect("spec serializes");
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("kind".into(), serde_json::Value::String(kind.into()));
    }
    let bytes = serde_json::to_vec(&value).expect("value serializes");
    hex::encode(Sha256::digest(&bytes))
}

struct Compiler {
    base: Field,
    working: Field,
    embed: crate::field::EmbeddingMap,
    vars: Vec<String>,
}

impl Compiler {
    fn new(spec: &VarietySpec, degree: u32, limits: &Limits) -> Result<Compiler, ModelError> {
        let base = build_field(spec.field.p, spec.field.e, limits.field)?;
        let d = spec
            .field
            .e
            .checked_mul(degree)
            .ok_or_else(|| ModelError::InvalidSpec("working degree too large".into()))?;
        let working = build_field(spec.field.p, d, limits.field)?;
        let embed = embed_subfield(&base, &working)?;
        Ok(Compiler {
            base,
            working,
            embed,
            vars: spec.variables.clone(),
        })
    }

    fn compile(&self, text: &str) -> Result<Compiled, ModelError> {
        let expr = parse_polynomial(text, &self.vars, &self.base).map_err(|source| {
            ModelError::Parse {
                text: text.to_string(),
                source,
            }
        })?;
        Ok(Compiled::new(&expr, &self.embed))
    }
}

fn validate_spec(spec: &VarietySpec) -> Result<(), ModelError> {
    let bad = |m: String| Err(ModelError::InvalidSpec(m));
    if spec.working_degree < 1 {
        return bad("working_degree must be at least 1".into());
    }
    if spec.variables.is_empty() {
        return bad("at least one variable is required".into());
    }
    for (i, v) in spec.variables.iter().enumerate() {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || v == "a" {
            return bad(format!("`{v}` cannot be used as a variable name"));
        }
        if spec.variables[..i].contains(v) {
            return bad(format!("variable `{v}` declared twice"));
        }
    }
    let k = spec.variables.len();
    for g in &spec.generators {
        if g.map.len() != k {
            return bad(format!(
                "generator `{}` has {} coordinates, expected {k}",
                g.name,
                g.map.len()
            ));
        }
    }
    if let Some(f) = &spec.endomorphism {
        if f.len() != k {
            return bad(format!("endomorphism has {} coordinates, expected {k}", f.len()));
        }
    }
    if spec.n_values.contains(&0) {
        return bad("n_values must be positive".into());
    }
    Ok(())
}

fn ambient_size(q_w: u64, arity: usize, cap: u64) -> Result<u64, ModelError> {
    let exp = u32::try_from(arity).unwrap_or(u32::MAX);
    q_w.checked_pow(exp)
        .filter(|&s| s <= cap)
        .ok_or_else(|| ModelError::CapExceeded {
            needed: format!("{q_w}^{arity}"),
            cap,
        })
}

fn decode(mut key: u64, base: u64, out: &mut [u64]) {
    for c in out.iter_mut().rev() {
        *c = key % base;
        key /= base;
    }
}

fn encode(coords: &[u64], base: u64) -> u64 {
    coords.iter().fold(0u64, |acc, &c| acc * base + c)
}

fn enumerate_keys(field: &Field, arity: usize, eqs: &[Compiled], ambient: u64) -> Vec<u64> {
    if eqs.is_empty() {
        return (0..ambient).collect();
    }
    let base = field.order();
    let chunks = ambient.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut out = Vec::new();
            let mut coords = vec![0u64; arity];
            for key in c * CHUNK..((c + 1) * CHUNK).min(ambient) {
                decode(key, base, &mut coords);
                if eqs.iter().all(|e| e.eval(field, &coords) == 0) {
                    out.push(key);
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .concat()
}

enum Lookup {
    Full,
    Dense(Vec<u32>),
}

impl Lookup {
    fn new(keys: &[u64], ambient: u64) -> Lookup {
        if keys.len() as u64 == ambient {
            return Lookup::Full;
        }
        let mut table = vec![NONE; ambient as usize];
        for (i, &k) in keys.iter().enumerate() {
            table[k as usize] = i as u32;
        }
        Lookup::Dense(table)
    }

    fn get(&self, key: u64) -> u32 {
        match self {
            Lookup::Full => key as u32,
            Lookup::Dense(t) => t[key as usize],
        }
    }
}

/// Image of every point under a coordinate map; `NONE` where the image is
/// not a point of V.
fn map_points(
    field: &Field,
    keys: &[u64],
    lookup: &Lookup,
    arity: usize,
    image: &(dyn Fn(&[u64], &mut [u64]) + Sync),
) -> Vec<u32> {
    let base = field.order();
    keys.par_chunks(CHUNK as usize)
        .flat_map_iter(|chunk| {
            let mut coords = vec![0u64; arity];
            let mut out = vec![0u64; arity];
            chunk
                .iter()
                .map(|&key| {
                    decode(key, base, &mut coords);
                    image(&coords, &mut out);
                    lookup.get(encode(&out, base))
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn describe_key(key: u64, base: u64, arity: usize) -> String {
    let mut coords = vec![0u64; arity];
    decode(key, base, &mut coords);
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Counts the points of V over `F_{q^degree}` without building maps.
fn count_points(spec: &VarietySpec, degree: u32, limits: &Limits) -> Result<usize, ModelError> {
    let c = Compiler::new(spec, degree, limits)?;
    let ambient = ambient_size(c.working.order(), spec.variables.len(), limits.points)?;
    let eqs = spec
        .equations
        .iter()
        .map(|t| c.compile(t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(enumerate_keys(&c.working, spec.variables.len(), &eqs, ambient).len())
}

/// Enumerates `V(F_{q^W})` and assembles the validated model.
pub fn build_model(spec: &VarietySpec, limits: &Limits) -> Result<EquivariantModel, ModelError> {
    validate_spec(spec)?;
    let w = spec.working_degree;
    let c = Compiler::new(spec, w, limits)?;
    let arity = spec.variables.len();
    let ambient = ambient_size(c.working.order(), arity, limits.points)?;

    let eqs = spec
        .equations
        .iter()
        .map(|t| c.compile(t))
        .collect::<Result<Vec<_>, _>>()?;
    let gens = spec
        .generators
        .iter()
        .map(|g| g.map.iter().map(|t| c.compile(t)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let endo = spec
        .endomorphism
        .as_ref()
        .map(|f| f.iter().map(|t| c.compile(t)).collect::<Result<Vec<_>, _>>())
        .transpose()?;

    let working = &c.working;
    let base = working.order();
    let keys = enumerate_keys(working, arity, &eqs, ambient);
    let lookup = Lookup::new(&keys, ambient);

    let e = spec.field.e;
    let frob = map_points(working, &keys, &lookup, arity, &|x, out| {
        for (o, &v) in out.iter_mut().zip(x) {
            *o = working.frobenius_raw(v, e);
        }
    });
    if let Some(i) = frob.iter().position(|&x| x == NONE) {
        return Err(ModelError::FrobeniusEscapes {
            point: describe_key(keys[i], base, arity),
        });
    }

    let mut generators = Vec::with_capacity(gens.len());
    for (g, exprs) in spec.generators.iter().zip(&gens) {
        let perm = map_points(working, &keys, &lookup, arity, &|x, out| {
            for (o, ex) in out.iter_mut().zip(exprs) {
                *o = ex.eval(working, x);
            }
        });
        if let Some(i) = perm.iter().position(|&x| x == NONE) {
            return Err(ModelError::NotAnAutomorphism {
                generator: g.name.clone(),
                point: describe_key(keys[i], base, arity),
            });
        }
        generators.push(NamedPerm {
            name: g.name.clone(),
            perm,
        });
    }

    let f_map = match &endo {
        None => None,
        Some(exprs) => {
            let f = map_points(working, &keys, &lookup, arity, &|x, out| {
                for (o, ex) in out.iter_mut().zip(exprs) {
                    *o = ex.eval(working, x);
                }
            });
            if let Some(i) = f.iter().position(|&x| x == NONE) {
                return Err(ModelError::NotAnEndomorphism {
                    point: describe_key(keys[i], base, arity),
                });
            }
            Some(f)
        }
    };
    drop(lookup);

    let q = spec.field.p.pow(e);
    let (complete, completeness) = match spec.complete {
        Some(true) => (true, Completeness::Declared),
        Some(false) => (false, Completeness::Incomplete),
        None => match count_points(spec, 2 * w, limits) {
            Ok(n) if n == keys.len() => (true, Completeness::Doubling),
            _ => (false, Completeness::Incomplete),
        },
    };

    let model = EquivariantModel {
        points: Points::Coords {
            field: working.clone(),
            variables: spec.variables.clone(),
            keys,
        },
        frob,
        generators,
        group_maps: Vec::new(),
        f_map,
        meta: ModelMeta {
            q: Some(q),
            working_degree: w,
            complete,
            completeness,
            spec_hash: spec_hash("variety", spec),
            n_values: spec.n_values.clone(),
            n_max: spec.n_max,
        },
        degrees: OnceLock::new(),
    };
    model.validate_maps()?;
    Ok(model)
}

/// Rebuilds at working degree `2W` and compares point counts. Equal counts
/// are evidence of zero-dimensionality, not a proof.
pub fn verify_completeness(
    spec: &VarietySpec,
    model: &EquivariantModel,
    limits: &Limits,
) -> Result<bool, ModelError> {
    let n = count_points(spec, 2 * spec.working_degree, limits)?;
    Ok(n == model.len())
}

pub fn build_abstract(spec: &AbstractSpec) -> Result<EquivariantModel, ModelError> {
    let n = spec.points;
    let bad = |m: String| Err(ModelError::InvalidSpec(m));
    if n >= NONE as usize {
        return bad("too many points".into());
    }
    if spec.frobenius.len() != n {
        return bad(format!("frobenius has length {}, expected {n}", spec.frobenius.len()));
    }
    let names: Vec<String> = match &spec.generator_names {
        Some(names) if names.len() == spec.generators.len() => names.clone(),
        Some(_) => return bad("generator_names does not match generators".into()),
        None => (1..=spec.generators.len()).map(|i| format!("g{i}")).collect(),
    };
    let mut generators = Vec::new();
    for (name, g) in names.into_iter().zip(&spec.generators) {
        if g.len() != n {
            return bad(format!("generator `{name}` has length {}, expected {n}", g.len()));
        }
        generators.push(NamedPerm {
            name,
            perm: g.clone(),
        });
    }
    if let Some(f) = &spec.endomorphism {
        if f.len() != n {
            return bad(format!("endomorphism has length {}, expected {n}", f.len()));
        }
        if f.iter().any(|&x| x as usize >= n) {
            return Err(ModelError::NotAnEndomorphism {
                point: f.iter().position(|&x| x as usize >= n).unwrap().to_string(),
            });
        }
    }
    if !perm::is_bijection(&spec.frobenius) {
        return Err(ModelError::FrobeniusOrder { working_degree: 0 });
    }
    let w = perm::order(&spec.frobenius)
        .and_then(|o| u32::try_from(o).ok())
        .ok_or_else(|| ModelError::InvalidSpec("Frobenius order too large".into()))?;
    let model = EquivariantModel {
        points: Points::Abstract,
        frob: spec.frobenius.clone(),
        generators,
        group_maps: Vec::new(),
        f_map: spec.endomorphism.clone(),
        meta: ModelMeta {
            q: None,
            working_degree: w,
            complete: spec.complete,
            completeness: if spec.complete {
                Completeness::Abstract
            } else {
                Completeness::Incomplete
            },
            spec_hash: spec_hash("abstract", spec),
            n_values: spec.n_values.clone(),
            n_max: spec.n_max,
        },
        degrees: OnceLock::new(),
    };
    model.validate_maps()?;
    Ok(model)
}

/// Serialized form of a built model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub version: String,
    pub spec_hash: String,
    pub q: Option<u64>,
    pub working_degree: u32,
    pub complete: bool,
    pub completeness: Completeness,
    pub field: Option<FieldDescriptor>,
    pub variables: Option<Vec<String>>,
    pub point_count: usize,
    /// Coordinates as canonical indices in the working field.
    pub points: Option<Vec<Vec<u64>>>,
    pub frobenius: Vec<u32>,
    pub generators: Vec<NamedPerm>,
    pub endomorphism: Option<Vec<u32>>,
    pub n_values: Vec<u32>,
    pub n_max: usize,
}

impl EquivariantModel {
    pub fn len(&self) -> usize {
        self.frob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frob.is_empty()
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    pub fn working_degree(&self) -> u32 {
        self.meta.working_degree
    }

    pub fn is_complete(&self) -> bool {
        self.meta.complete
    }

    pub fn frob(&self) -> &[u32] {
        &self.frob
    }

    pub fn f_map(&self) -> Option<&[u32]> {
        self.f_map.as_deref()
    }

    pub fn generators(&self) -> &[NamedPerm] {
        &self.generators
    }

    /// One permutation per group element, once a group has been closed over
    /// this model.
    pub fn group_maps(&self) -> &[Vec<u32>] {
        &self.group_maps
    }

    pub(crate) fn set_group_maps(&mut self, maps: Vec<Vec<u32>>) {
        self.group_maps = maps;
    }

    pub fn working_field(&self) -> Option<&Field> {
        match &self.points {
            Points::Coords { field, .. } => Some(field),
            Points::Abstract => None,
        }
    }

    pub fn variables(&self) -> Option<&[String]> {
        match &self.points {
            Points::Coords { variables, .. } => Some(variables),
            Points::Abstract => None,
        }
    }

    /// Coordinates of point `i`, or `None` for abstract models.
    pub fn point(&self, i: usize) -> Option<Vec<FieldElement>> {
        match &self.points {
            Points::Coords {
                field,
                variables,
                keys,
            } => {
                let mut coords = vec![0u64; variables.len()];
                decode(keys[i], field.order(), &mut coords);
                Some(
                    coords
                        .into_iter()
                        .map(|c| field.element(c).expect("in range"))
                        .collect(),
                )
            }
            Points::Abstract => None,
        }
    }

    pub fn index_of(&self, coords: &[FieldElement]) -> Option<usize> {
        match &self.points {
            Points::Coords {
                field,
                variables,
                keys,
            } => {
                if coords.len() != variables.len()
                    || coords.iter().any(|c| c.field_order() != field.order())
                {
                    return None;
                }
                let raw: Vec<u64> = coords.iter().map(|c| c.index()).collect();
                keys.binary_search(&encode(&raw, field.order())).ok()
            }
            Points::Abstract => None,
        }
    }

    /// Least `m >= 1` with `frob^m` fixing each point.
    pub fn degrees(&self) -> &[u32] {
        self.degrees.get_or_init(|| perm::cycle_lengths(&self.frob))
    }

    pub fn point_degree(&self, i: usize) -> u32 {
        self.degrees()[i]
    }

    /// `|V(F_{q^n})|`, exact when `n | W` or the model is complete.
    pub fn rational_count(&self, n: u64) -> Result<u64, ModelError> {
        if !self.exactness_check(n, 1) {
            return Err(ModelError::Exactness {
                n,
                h: 1,
                working_degree: self.meta.working_degree,
            });
        }
        Ok(self.degrees().iter().filter(|&&d| n.is_multiple_of(d as u64)).count() as u64)
    }

    /// Whether counts over `F_{q^n}` of quotients by subgroups of order at
    /// most `h` are exact on this model.
    pub fn exactness_check(&self, n: u64, h: u64) -> bool {
        exactness_check(self.meta.working_degree, self.meta.complete, n, h)
    }

    /// Checks bijectivity of Frobenius and generators, `frob^W = id`, and
    /// pairwise commutation of Frobenius, generators and `f`.
    pub fn validate_maps(&self) -> Result<(), ModelError> {
        let n = self.len();
        let w = self.meta.working_degree;
        if !perm::is_bijection(&self.frob)
            || self.degrees().iter().any(|&d| !w.is_multiple_of(d))
        {
            return Err(ModelError::FrobeniusOrder { working_degree: w });
        }
        for g in &self.generators {
            if g.perm.len() != n || g.perm.iter().any(|&x| x as usize >= n) {
                return Err(ModelError::NotAnAutomorphism {
                    generator: g.name.clone(),
                    point: "?".into(),
                });
            }
            if !perm::is_bijection(&g.perm) {
                return Err(ModelError::NotBijective {
                    generator: g.name.clone(),
                });
            }
        }
        if let Some(f) = &self.f_map {
            if f.len() != n || f.iter().any(|&x| x as usize >= n) {
                return Err(ModelError::NotAnEndomorphism { point: "?".into() });
            }
        }
        let mut pairs: Vec<(&str, &[u32], &str, &[u32])> = Vec::new();
        if let Some(f) = &self.f_map {
            pairs.push(("endomorphism", f, "frobenius", &self.frob));
        }
        for g in &self.generators {
            pairs.push((&g.name, &g.perm, "frobenius", &self.frob));
            if let Some(f) = &self.f_map {
                pairs.push((&g.name, &g.perm, "endomorphism", f));
            }
        }
        for (ln, lm, rn, rm) in pairs {
            if let Some(pt) = perm::commutation_failure(lm, rm) {
                return Err(ModelError::Commutation {
                    left: ln.to_string(),
                    right: rn.to_string(),
                    point: self.describe_point(pt),
                });
            }
        }
        Ok(())
    }

    pub fn describe_point(&self, i: usize) -> String {
        match &self.points {
            Points::Coords {
                field,
                variables,
                keys,
            } => format!("#{i} {}", describe_key(keys[i], field.order(), variables.len())),
            Points::Abstract => format!("#{i}"),
        }
    }

    /// Sub-model on the points with `keep[i]`; the caller guarantees the set
    /// is closed under every stored map.
    pub(crate) fn restrict(&self, keep: &[bool]) -> EquivariantModel {
        let mut new_index = vec![NONE; self.len()];
        let mut count = 0u32;
        for (i, &k) in keep.iter().enumerate() {
            if k {
                new_index[i] = count;
                count += 1;
            }
        }
        let sub = |m: &[u32]| -> Vec<u32> {
            m.iter()
                .zip(keep)
                .filter(|(_, &k)| k)
                .map(|(&x, _)| new_index[x as usize])
                .collect()
        };
        let points = match &self.points {
            Points::Coords {
                field,
                variables,
                keys,
            } => Points::Coords {
                field: field.clone(),
                variables: variables.clone(),
                keys: keys
                    .iter()
                    .zip(keep)
                    .filter(|(_, &k)| k)
                    .map(|(&x, _)| x)
                    .collect(),
            },
            Points::Abstract => Points::Abstract,
        };
        EquivariantModel {
            points,
            frob: sub(&self.frob),
            generators: self
                .generators
                .iter()
                .map(|g| NamedPerm {
                    name: g.name.clone(),
                    perm: sub(&g.perm),
                })
                .collect(),
            group_maps: self.group_maps.iter().map(|m| sub(m)).collect(),
            f_map: self.f_map.as_ref().map(|f| sub(f)),
            meta: self.meta.clone(),
            degrees: OnceLock::new(),
        }
    }

    pub fn to_file(&self) -> ModelFile {
        let (field, variables, points) = match &self.points {
            Points::Coords {
                field,
                variables,
                keys,
            } => {
                let mut coords = vec![0u64; variables.len()];
                let pts = keys
                    .iter()
                    .map(|&k| {
                        decode(k, field.order(), &mut coords);
                        coords.clone()
                    })
                    .collect();
                (
                    Some(field.descriptor().clone()),
                    Some(variables.clone()),
                    Some(pts),
                )
            }
            Points::Abstract => (None, None, None),
        };
        ModelFile {
            version: env!("CARGO_PKG_VERSION").to_string(),
            spec_hash: self.meta.spec_hash.clone(),
            q: self.meta.q,
            working_degree: self.meta.working_degree,
            complete: self.meta.complete,
            completeness: self.meta.completeness,
            field,
            variables,
            point_count: self.len(),
            points,
            frobenius: self.frob.clone(),
            generators: self.generators.clone(),
            endomorphism: self.f_map.clone(),
            n_values: self.meta.n_values.clone(),
            n_max: self.meta.n_max,
        }
    }

    /// Loads and re-validates a serialized model. For coordinate models the
    /// Frobenius array is recomputed from the coordinates.
    pub fn from_file(file: &ModelFile, limits: &Limits) -> Result<EquivariantModel, ModelError> {
        let n = file.point_count;
        let bad = |m: &str| Err(ModelError::InvalidSpec(m.to_string()));
        if file.frobenius.len() != n {
            return bad("frobenius length does not match point_count");
        }
        let points = match (&file.field, &file.variables, &file.points, file.q) {
            (Some(desc), Some(vars), Some(pts), Some(q)) => {
                let field = Field::from_descriptor(desc, limits.field)?;
                if pts.len() != n || vars.is_empty() {
                    return bad("point list does not match point_count");
                }
                let base = field.order();
                let mut keys = Vec::with_capacity(n);
                for c in pts {
                    if c.len() != vars.len() || c.iter().any(|&x| x >= base) {
                        return bad("malformed point coordinates");
                    }
                    keys.push(encode(c, base));
                }
                if keys.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("points are not in canonical order");
                }
                // q = p^e with e * W = d
                let w = file.working_degree;
                if w == 0 || desc.d % w != 0 || desc.p.checked_pow(desc.d / w) != Some(q) {
                    return bad("q, W and the working field disagree");
                }
                let e = desc.d / w;
                for (i, c) in pts.iter().enumerate() {
                    let img: Vec<u64> = c.iter().map(|&x| field.frobenius_raw(x, e)).collect();
                    let target = file.frobenius[i] as usize;
                    if target >= n || keys[target] != encode(&img, base) {
                        return Err(ModelError::FrobeniusEscapes {
                            point: format!("#{i}"),
                        });
                    }
                }
                Points::Coords {
                    field,
                    variables: vars.clone(),
                    keys,
                }
            }
            (None, None, None, None) => Points::Abstract,
            _ => return bad("coordinate fields must be all present or all absent"),
        };
        let model = EquivariantModel {
            points,
            frob: file.frobenius.clone(),
            generators: file.generators.clone(),
            group_maps: Vec::new(),
            f_map: file.endomorphism.clone(),
            meta: ModelMeta {
                q: file.q,
                working_degree: file.working_degree,
                complete: file.complete,
                completeness: file.completeness,
                spec_hash: file.spec_hash.clone(),
                n_values: file.n_values.clone(),
                n_max: file.n_max,
            },
            degrees: OnceLock::new(),
        };
        model.validate_maps()?;
        Ok(model)
    }
}

/// `complete || n * lcm(1..=h)` divides `W`.
pub fn exactness_check(working_degree: u32, complete: bool, n: u64, h: u64) -> bool {
    if complete {
        return true;
    }
    if n == 0 || h == 0 {
        return false;
    }
    match perm::lcm_up_to(h).and_then(|l| l.checked_mul(n)) {
        Some(m) => (working_degree as u64).is_multiple_of(m),
        None => false,
    }
}
