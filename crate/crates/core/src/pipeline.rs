//! Jobs over input documents: build a model, close its group, find relations,
//! run the requested checks and assemble a JSON report.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{self, count_table, CountKind, DynamicsError, IHReport, Invariance};
use crate::geometry::{build_abstract, build_model, AbstractSpec, EquivariantModel, Limits, ModelError, ModelFile, VarietySpec};
use crate::group::{all_subgroups, close_group, subgroup_name, FiniteGroup, GroupError, Subgroup, DEFAULT_CLOSURE_BOUND};
use crate::relations::{CharacterMatrix, IdempotentRelation, RelationError};
use crate::zeta::{self, ZetaCheck, ZetaError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// An abstract multiplication table, for relation discovery without a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Input {
    Variety(VarietySpec),
    Abstract(AbstractSpec),
    Model(ModelFile),
    Group(GroupTable),
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    Exactness(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Io(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse(_) | PipelineError::Io(_) => 2,
            PipelineError::Validation(_) => 3,
            PipelineError::Exactness(_) | PipelineError::Cap(_) => 4,
        }
    }
}

impl From<ModelError> for PipelineError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Parse { .. } => PipelineError::Parse(e.to_string()),
            ModelError::CapExceeded { .. } | ModelError::Field(crate::field::FieldError::TooLarge { .. }) => {
                PipelineError::Cap(e.to_string())
            }
            ModelError::Exactness { .. } => PipelineError::Exactness(e.to_string()),
            _ => PipelineError::Validation(e.to_string()),
        }
    }
}

impl From<GroupError> for PipelineError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ClosureBound(_) => PipelineError::Cap(e.to_string()),
            _ => PipelineError::Validation(e.to_string()),
        }
    }
}

impl From<DynamicsError> for PipelineError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Exactness { .. } => PipelineError::Exactness(e.to_string()),
            _ => PipelineError::Validation(e.to_string()),
        }
    }
}

impl From<RelationError> for PipelineError {
    fn from(e: RelationError) -> Self {
        PipelineError::Validation(e.to_string())
    }
}

impl From<ZetaError> for PipelineError {
    fn from(e: ZetaError) -> Self {
        PipelineError::Validation(e.to_string())
    }
}

pub fn parse_input(text: &str) -> Result<Input, PipelineError> {
    serde_json::from_str(text).map_err(|e| PipelineError::Parse(e.to_string()))
}

pub fn read_input(path: &std::path::Path) -> Result<Input, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
    parse_input(&text)
}

/// Builds the model an input describes.
pub fn load_model(input: &Input, limits: &Limits) -> Result<EquivariantModel, PipelineError> {
    match input {
        Input::Variety(spec) => Ok(build_model(spec, limits)?),
        Input::Abstract(spec) => Ok(build_abstract(spec)?),
        Input::Model(file) => Ok(EquivariantModel::from_file(file, limits)?),
        Input::Group(_) => Err(PipelineError::Validation("a group table does not describe a model".into())),
    }
}

/// Serialized model document, tagged `"kind": "model"`.
pub fn model_json(model: &EquivariantModel) -> String {
    let mut s = serde_json::to_string(&Input::Model(model.to_file())).expect("model serializes");
    s.push('\n');
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Check {
    A,
    B,
    C,
    D,
    #[serde(rename = "bounds")]
    Bounds,
    #[serde(rename = "iH")]
    IH,
    #[serde(rename = "lemma")]
    Lemma,
}

impl Check {
    pub const ALL: [Check; 7] = [Check::A, Check::B, Check::C, Check::D, Check::Bounds, Check::IH, Check::Lemma];

    pub fn needs_endomorphism(self) -> bool {
        !matches!(self, Check::A | Check::C)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::A => "A",
            Check::B => "B",
            Check::C => "C",
            Check::D => "D",
            Check::Bounds => "bounds",
            Check::IH => "iH",
            Check::Lemma => "lemma",
        };
        f.write_str(s)
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Check::A),
            "B" | "b" => Ok(Check::B),
            "C" | "c" => Ok(Check::C),
            "D" | "d" => Ok(Check::D),
            "bounds" => Ok(Check::Bounds),
            "iH" | "ih" => Ok(Check::IH),
            "lemma" => Ok(Check::Lemma),
            other => Err(format!("unknown check `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    /// `None` runs every check the model supports.
    pub checks: Option<Vec<Check>>,
    /// `None` takes the model's own `n_values`.
    pub n_values: Option<Vec<u64>>,
    pub n_max: Option<usize>,
    pub force: bool,
    /// Replaces the discovered basis.
    pub relations: Option<Vec<IdempotentRelation>>,
    pub closure_bound: usize,
}

impl Default for JobSpec {
    fn default() -> Self {
        JobSpec {
            checks: None,
            n_values: None,
            n_max: None,
            force: false,
            relations: None,
            closure_bound: DEFAULT_CLOSURE_BOUND,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub points: usize,
    pub q: Option<u64>,
    pub working_degree: u32,
    pub complete: bool,
    pub completeness: crate::geometry::Completeness,
    pub has_endomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub exponent: usize,
    pub subgroup_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSummary {
    pub name: String,
    pub order: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsReport {
    pub group: GroupSummary,
    pub subgroups: Vec<SubgroupSummary>,
    pub relations: Vec<IdempotentRelation>,
}

pub fn relations_report(g: &FiniteGroup) -> Result<RelationsReport, PipelineError> {
    let subs = all_subgroups(g);
    let basis = CharacterMatrix::new(g, &subs).basis()?;
    Ok(RelationsReport {
        group: group_summary(g, subs.len()),
        subgroups: subgroup_summaries(g, &subs),
        relations: basis,
    })
}

fn group_summary(g: &FiniteGroup, subgroup_count: usize) -> GroupSummary {
    GroupSummary {
        order: g.order(),
        abelian: g.is_abelian(),
        exponent: g.exponent(),
        subgroup_count,
    }
}

fn subgroup_summaries(g: &FiniteGroup, subs: &[Subgroup]) -> Vec<SubgroupSummary> {
    subs.iter()
        .map(|h| SubgroupSummary {
            name: subgroup_name(g, h),
            order: h.order(),
            members: h.members().to_vec(),
        })
        .collect()
}

/// Group, subgroups and relations for any input: the closed group of a
/// model, or the table itself.
pub fn relations_for_input(input: &Input, limits: &Limits, bound: usize) -> Result<RelationsReport, PipelineError> {
    match input {
        Input::Group(t) => {
            let g = FiniteGroup::from_table(&t.table, t.names.clone())?;
            relations_report(&g)
        }
        other => {
            let mut model = load_model(other, limits)?;
            let g = close_group(&mut model, bound)?;
            relations_report(&g)
        }
    }
}

/// One verification record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check")]
pub enum CheckRecord {
    A(ResidualRecord),
    B(ResidualRecord),
    C(ZetaRecord),
    D(ZetaRecord),
    #[serde(rename = "bounds")]
    Bounds(BoundsRecord),
    #[serde(rename = "iH")]
    IH(IHRecord),
    #[serde(rename = "lemma")]
    Lemma(LemmaRecord),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub relation: Vec<i64>,
    pub n: u64,
    /// Count per subgroup; `null` where the coefficient is zero and no
    /// certificate was needed.
    pub counts: Vec<Option<u64>>,
    pub residual: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaRecord {
    pub relation: Vec<i64>,
    /// `counts[h][n-1]`, empty for subgroups with zero coefficient.
    pub counts: Vec<Vec<u64>>,
    #[serde(flatten)]
    pub result: ZetaCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub m: String,
    pub n: String,
    pub rational_counts: Vec<u64>,
    pub per_n_points: usize,
    pub per_n_invariance: Invariance,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IHRecord {
    pub subgroup: String,
    pub n: String,
    #[serde(flatten)]
    pub result: IHReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRecord {
    pub subgroup: String,
    pub m: String,
    pub pass: bool,
}

impl CheckRecord {
    pub fn pass(&self) -> bool {
        match self {
            CheckRecord::A(r) | CheckRecord::B(r) => r.pass,
            CheckRecord::C(r) | CheckRecord::D(r) => r.result.pass,
            CheckRecord::Bounds(r) => r.pass,
            CheckRecord::IH(r) => r.result.pass,
            CheckRecord::Lemma(r) => r.pass,
        }
    }

    pub fn kind(&self) -> Check {
        match self {
            CheckRecord::A(_) => Check::A,
            CheckRecord::B(_) => Check::B,
            CheckRecord::C(_) => Check::C,
            CheckRecord::D(_) => Check::D,
            CheckRecord::Bounds(_) => Check::Bounds,
            CheckRecord::IH(_) => Check::IH,
            CheckRecord::Lemma(_) => Check::Lemma,
        }
    }

    /// Recomputes the verdict from the recorded numbers.
    pub fn replay(&self) -> Option<bool> {
        match self {
            CheckRecord::A(r) | CheckRecord::B(r) => {
                let mut total = 0i128;
                for (&c, count) in r.relation.iter().zip(&r.counts) {
                    if c != 0 {
                        total += c as i128 * (*count)? as i128;
                    }
                }
                Some(total == r.residual as i128 && (total == 0) == r.pass)
            }
            CheckRecord::C(r) | CheckRecord::D(r) => {
                let rel = IdempotentRelation::new(r.relation.clone());
                let n_max = r.result.n_max;
                let table: Vec<Vec<u64>> = r
                    .counts
                    .iter()
                    .zip(&r.relation)
                    .map(|(row, &c)| if c == 0 { vec![0; n_max] } else { row.clone() })
                    .collect();
                let again = zeta::zeta_product_check(&table, &rel, n_max).ok()?;
                Some(again == r.result)
            }
            CheckRecord::IH(r) => {
                let x = &r.result;
                let agree = x.per_n_orbits == x.per_n_quotient && x.per_n_quotient == x.periodic_quotient;
                Some(
                    agree == x.counts_agree
                        && x.pass == (agree && x.well_defined && x.lands_in_target && x.injective && x.surjective),
                )
            }
            CheckRecord::Bounds(r) => {
                let max = r.rational_counts.iter().copied().max().unwrap_or(0);
                Some(dynamics::factorial(max).to_string() == r.m && r.pass == r.per_n_invariance.all())
            }
            CheckRecord::Lemma(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessCertificate {
    pub n: u64,
    pub subgroup_order: u64,
    /// `complete` or `divides`.
    pub rule: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub load_ms: f64,
    pub group_ms: f64,
    pub checks_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub spec_hash: String,
    pub model: ModelSummary,
    pub group: GroupSummary,
    pub subgroups: Vec<SubgroupSummary>,
    pub relations: Vec<IdempotentRelation>,
    pub checks: Vec<CheckRecord>,
    pub exactness: Vec<ExactnessCertificate>,
    pub timings: Timings,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(CheckRecord::pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass() {
            0
        } else {
            1
        }
    }

    /// The report as JSON with `timings` removed.
    pub fn stable_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let serde_json::Value::Object(m) = &mut v {
            m.remove("timings");
        }
        v
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

struct Exactness<'a> {
    model: &'a EquivariantModel,
    used: BTreeSet<(u64, u64)>,
}

impl Exactness<'_> {
    fn require(&mut self, n: u64, h: u64) -> Result<(), PipelineError> {
        if self.model.exactness_check(n, h) {
            self.used.insert((n, h));
            Ok(())
        } else {
            Err(DynamicsError::Exactness {
                n,
                h,
                working_degree: self.model.working_degree(),
            }
            .into())
        }
    }

    fn certificates(&self) -> Vec<ExactnessCertificate> {
        let rule = if self.model.is_complete() { "complete" } else { "divides" };
        self.used
            .iter()
            .map(|&(n, h)| ExactnessCertificate {
                n,
                subgroup_order: h,
                rule: rule.into(),
            })
            .collect()
    }
}

/// Runs a job on an input document.
pub fn verify_input(input: &Input, job: &JobSpec, limits: &Limits) -> Result<Report, PipelineError> {
    let t = Instant::now();
    let model = load_model(input, limits)?;
    let load_ms = ms(t);
    let mut report = verify_model(model, job)?;
    report.timings.load_ms = load_ms;
    Ok(report)
}

/// Closes the group of `model`, finds its relations and runs the checks.
pub fn verify_model(mut model: EquivariantModel, job: &JobSpec) -> Result<Report, PipelineError> {
    let t = Instant::now();
    let group = close_group(&mut model, job.closure_bound)?;
    let subs = all_subgroups(&group);
    let chars = CharacterMatrix::new(&group, &subs);
    let basis = chars.basis()?;
    let group_ms = ms(t);

    let has_f = model.f_map().is_some();
    let checks: Vec<Check> = match &job.checks {
        Some(c) => {
            if let Some(bad) = c.iter().find(|c| c.needs_endomorphism() && !has_f) {
                return Err(PipelineError::Validation(format!(
                    "check {bad} needs an endomorphism and the model has none"
                )));
            }
            let set: BTreeSet<Check> = c.iter().copied().collect();
            set.into_iter().collect()
        }
        None => Check::ALL.into_iter().filter(|c| has_f || !c.needs_endomorphism()).collect(),
    };
    let relations = match &job.relations {
        Some(r) => {
            for rel in r {
                if rel.len() != subs.len() {
                    return Err(RelationError::LengthMismatch {
                        expected: subs.len(),
                        found: rel.len(),
                    }
                    .into());
                }
                if !job.force && !chars.check(rel)? {
                    return Err(PipelineError::Validation(format!(
                        "{:?} is not an idempotent relation; pass --force to evaluate it anyway",
                        rel.coefficients
                    )));
                }
            }
            r.clone()
        }
        None => basis.clone(),
    };
    let n_values: Vec<u64> = match &job.n_values {
        Some(v) => v.clone(),
        None => model.meta().n_values.iter().map(|&n| n as u64).collect(),
    };
    if n_values.contains(&0) {
        return Err(PipelineError::Validation("n must be positive".into()));
    }
    let n_max = job.n_max.unwrap_or(model.meta().n_max);

    let t = Instant::now();
    let mut ex = Exactness {
        model: &model,
        used: BTreeSet::new(),
    };
    let mut records = Vec::new();
    let wants = |c: Check| checks.contains(&c);

    // certify everything up front so that no work is done on a refused job
    let needs = |rel: &IdempotentRelation| -> Vec<u64> {
        subs.iter()
            .zip(&rel.coefficients)
            .filter(|(_, &c)| c != 0)
            .map(|(h, _)| h.order() as u64)
            .collect()
    };
    for rel in &relations {
        let orders = needs(rel);
        if wants(Check::A) || wants(Check::B) {
            for &n in &n_values {
                for &h in &orders {
                    ex.require(n, h)?;
                }
            }
        }
        if wants(Check::C) || wants(Check::D) {
            for n in 1..=n_max as u64 {
                for &h in &orders {
                    ex.require(n, h)?;
                }
            }
        }
    }
    if wants(Check::Bounds) || wants(Check::IH) || wants(Check::Lemma) {
        for h in &subs {
            ex.require(1, h.order() as u64)?;
        }
    }

    let mut ns: BTreeSet<u64> = BTreeSet::new();
    if wants(Check::A) || wants(Check::B) {
        ns.extend(&n_values);
    }
    if wants(Check::C) || wants(Check::D) {
        ns.extend(1..=n_max as u64);
    }
    let ns: Vec<u64> = ns.into_iter().collect();
    let col = |n: u64| ns.iter().position(|&m| m == n).expect("n in table");

    for (kind, residual_check, zeta_check) in [
        (CountKind::Rational, Check::A, Check::C),
        (CountKind::Periodic, Check::B, Check::D),
    ] {
        if !wants(residual_check) && !wants(zeta_check) {
            continue;
        }
        let table = count_table(&model, &subs, &ns, kind)?;
        if wants(residual_check) {
            for rel in &relations {
                for &n in &n_values {
                    let i = col(n);
                    let residual = i64::try_from(table.residual(rel, i)?).map_err(|_| RelationError::Overflow)?;
                    let counts = table
                        .counts
                        .iter()
                        .zip(&rel.coefficients)
                        .map(|(row, &c)| if c == 0 { None } else { row[i] })
                        .collect();
                    let r = ResidualRecord {
                        relation: rel.coefficients.clone(),
                        n,
                        counts,
                        residual,
                        pass: residual == 0,
                    };
                    records.push(if kind == CountKind::Rational { CheckRecord::A(r) } else { CheckRecord::B(r) });
                }
            }
        }
        if wants(zeta_check) {
            for rel in &relations {
                let rows: Vec<Vec<u64>> = table
                    .counts
                    .iter()
                    .zip(&rel.coefficients)
                    .map(|(row, &c)| {
                        if c == 0 {
                            Vec::new()
                        } else {
                            (1..=n_max as u64).map(|n| row[col(n)].expect("certified")).collect()
                        }
                    })
                    .collect();
                let padded: Vec<Vec<u64>> = rows
                    .iter()
                    .map(|r| if r.is_empty() { vec![0; n_max] } else { r.clone() })
                    .collect();
                let result = zeta::zeta_product_check(&padded, rel, n_max)?;
                let r = ZetaRecord {
                    relation: rel.coefficients.clone(),
                    counts: rows,
                    result,
                };
                records.push(if kind == CountKind::Rational { CheckRecord::C(r) } else { CheckRecord::D(r) });
            }
        }
    }

    if wants(Check::Bounds) || wants(Check::IH) || wants(Check::Lemma) {
        let bounds = dynamics::compute_bounds(&model, &group, &subs)?;
        if wants(Check::Bounds) {
            let keep = dynamics::per_n_locus(&model, &bounds.n)?;
            let inv = dynamics::check_invariance(&model, &keep);
            records.push(CheckRecord::Bounds(BoundsRecord {
                m: bounds.m.to_string(),
                n: bounds.n.to_string(),
                rational_counts: bounds.rational_counts.clone(),
                per_n_points: keep.iter().filter(|&&k| k).count(),
                pass: inv.all(),
                per_n_invariance: inv,
            }));
        }
        for h in &subs {
            let name = subgroup_name(&group, h);
            if wants(Check::IH) {
                let result = dynamics::check_ih_bijection(&model, h, &bounds.n)?;
                records.push(CheckRecord::IH(IHRecord {
                    subgroup: name.clone(),
                    n: bounds.n.to_string(),
                    result,
                }));
            }
            if wants(Check::Lemma) {
                let q = dynamics::quotient_orbits(&model, h)?;
                records.push(CheckRecord::Lemma(LemmaRecord {
                    subgroup: name,
                    m: bounds.m.to_string(),
                    pass: dynamics::lemma_period_check(&q, &bounds.m)?,
                }));
            }
        }
    }
    records.sort_by_key(CheckRecord::kind);
    let checks_ms = ms(t);

    let meta = model.meta();
    Ok(Report {
        version: VERSION.into(),
        spec_hash: meta.spec_hash.clone(),
        model: ModelSummary {
            points: model.len(),
            q: meta.q,
            working_degree: meta.working_degree,
            complete: meta.complete,
            completeness: meta.completeness,
            has_endomorphism: has_f,
        },
        group: group_summary(&group, subs.len()),
        subgroups: subgroup_summaries(&group, &subs),
        relations,
        checks: records,
        exactness: ex.certificates(),
        timings: Timings {
            load_ms: 0.0,
            group_ms,
            checks_ms,
        },
    })
}

/// Re-derives every replayable verdict of a stored report.
pub fn replay_report(report: &Report) -> Vec<(usize, Check, Option<bool>)> {
    report
        .checks
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c.kind(), c.replay()))
        .collect()
}

/// Parses `"1,-1,-1,-1,2"`.
pub fn parse_relation(text: &str) -> Result<IdempotentRelation, PipelineError> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map(IdempotentRelation::new)
        .map_err(|e| PipelineError::Parse(format!("relation `{text}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const X16: &str = r#"{"kind":"variety","field":{"p":2,"e":2},"working_degree":2,"variables":["x"],
        "equations":["x^16 + x"],"generators":[{"name":"t1","map":["x + 1"]},{"name":"ta","map":["x + a"]}],
        "endomorphism":["x^4"],"n_values":[1,2,3,4],"n_max":8}"#;

    #[test]
    fn x16_passes_everything() {
        let input = parse_input(X16).unwrap();
        let report = verify_input(&input, &JobSpec::default(), &Limits::default()).unwrap();
        assert!(report.pass());
        assert_eq!(report.relations, vec![IdempotentRelation::new(vec![1, -1, -1, -1, 2])]);
        // 4 A + 4 B + C + D + bounds + 5 iH + 5 lemma
        assert_eq!(report.checks.len(), 4 + 4 + 1 + 1 + 1 + 5 + 5);
        assert!(replay_report(&report).iter().all(|(_, _, ok)| ok.unwrap_or(true)));
    }

    #[test]
    fn round_trip_through_model_file() {
        let input = parse_input(X16).unwrap();
        let model = load_model(&input, &Limits::default()).unwrap();
        let text = model_json(&model);
        let reloaded = parse_input(&text).unwrap();
        assert!(matches!(reloaded, Input::Model(_)));
        let a = verify_input(&input, &JobSpec::default(), &Limits::default()).unwrap();
        let b = verify_input(&reloaded, &JobSpec::default(), &Limits::default()).unwrap();
        assert_eq!(a.stable_json(), b.stable_json());
        assert_eq!(model_json(&load_model(&reloaded, &Limits::default()).unwrap()), text);
    }

    #[test]
    fn refusals() {
        let input = parse_input(X16).unwrap();
        let job = JobSpec {
            relations: Some(vec![IdempotentRelation::new(vec![1, 0, 0, 0, -1])]),
            checks: Some(vec![Check::A]),
            ..JobSpec::default()
        };
        let err = verify_input(&input, &job, &Limits::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let forced = verify_input(&input, &JobSpec { force: true, ..job }, &Limits::default()).unwrap();
        assert_eq!(forced.exit_code(), 1);
        assert!(matches!(parse_input("{"), Err(PipelineError::Parse(_))));
    }

    #[test]
    fn trivial_group_has_no_relations() {
        let g = FiniteGroup::from_table(&[vec![0]], None).unwrap();
        let r = relations_report(&g).unwrap();
        assert!(r.relations.is_empty());
        assert_eq!(r.subgroups.len(), 1);
    }
}
