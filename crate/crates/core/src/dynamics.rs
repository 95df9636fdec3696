//! Quotients of the model by subgroups, rational and periodic point counts on
//! them, the period bounds `M` and `N = |G| M`, the locus `Per_N` of points of
//! period dividing `N`, the comparison map `i_H`, and the residuals
//! `Σ n_H |(V/H)(F_{q^n})|` and `Σ n_H |Per(V/H, f_H)(F_{q^n})|`.
//!
//! Rational points of `V/H` are Frobenius-stable `H`-orbits; periodicity is
//! read off the functional graph of the induced map on orbits.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{exactness_check, EquivariantModel};
use crate::group::{FiniteGroup, Subgroup};
use crate::perm;
use crate::relations::{CharacterMatrix, IdempotentRelation, RelationError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("counts over F_q^{n} for a subgroup of order {h} are not certified by W = {working_degree}")]
    Exactness { n: u64, h: u64, working_degree: u32 },
    #[error("the model has no endomorphism")]
    MissingEndomorphism,
    #[error("no group has been closed over this model")]
    NoGroup,
    #[error("coefficients do not form an idempotent relation; rerun with force to see the raw sum")]
    NotARelation,
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("{0} is not well defined on orbits")]
    IllDefined(&'static str),
    #[error("Per_N is not invariant under {0}")]
    NotInvariant(String),
}

/// `V/H` as the set of `H`-orbits with the induced Frobenius and `f`.
#[derive(Clone, Debug)]
pub struct QuotientSystem {
    subgroup_order: usize,
    orbit_start: Vec<u32>,
    orbit_members: Vec<u32>,
    orbit_of: Vec<u32>,
    frob_q: Vec<u32>,
    f_q: Option<Vec<u32>>,
    frob_cycle: Vec<u32>,
    f_period: Option<Vec<u32>>,
    working_degree: u32,
    complete: bool,
}

/// Orbits of `h` on the model points, ordered by least member.
pub fn quotient_orbits(model: &EquivariantModel, h: &Subgroup) -> Result<QuotientSystem, DynamicsError> {
    let maps = model.group_maps();
    if maps.is_empty() || h.members().iter().any(|&x| x >= maps.len()) {
        return Err(DynamicsError::NoGroup);
    }
    let n = model.len();
    let hmaps: Vec<&[u32]> = h.members().iter().map(|&x| maps[x].as_slice()).collect();
    const UNSET: u32 = u32::MAX;
    let mut orbit_of = vec![UNSET; n];
    let mut orbit_start = vec![0u32];
    let mut orbit_members: Vec<u32> = Vec::with_capacity(n);
    let mut buf: Vec<u32> = Vec::with_capacity(hmaps.len());
    for x in 0..n {
        if orbit_of[x] != UNSET {
            continue;
        }
        buf.clear();
        buf.extend(hmaps.iter().map(|m| m[x]));
        buf.sort_unstable();
        buf.dedup();
        assert_eq!(h.order() % buf.len(), 0, "orbit size divides |H|");
        let id = (orbit_start.len() - 1) as u32;
        for &y in &buf {
            orbit_of[y as usize] = id;
        }
        orbit_members.extend_from_slice(&buf);
        orbit_start.push(orbit_members.len() as u32);
    }
    let orbits = orbit_start.len() - 1;
    let induce = |m: &[u32]| -> Option<Vec<u32>> {
        let mut out = Vec::with_capacity(orbits);
        for o in 0..orbits {
            let members = &orbit_members[orbit_start[o] as usize..orbit_start[o + 1] as usize];
            let img = orbit_of[m[members[0] as usize] as usize];
            if members.iter().any(|&y| orbit_of[m[y as usize] as usize] != img) {
                return None;
            }
            out.push(img);
        }
        Some(out)
    };
    let frob_q = induce(model.frob()).ok_or(DynamicsError::IllDefined("Frobenius"))?;
    let f_q = match model.f_map() {
        Some(f) => Some(induce(f).ok_or(DynamicsError::IllDefined("the endomorphism"))?),
        None => None,
    };
    if let Some(f) = &f_q {
        if perm::commutation_failure(&frob_q, f).is_some() {
            return Err(DynamicsError::IllDefined("commuting Frobenius and f"));
        }
    }
    let frob_cycle = perm::cycle_lengths(&frob_q);
    let f_period = f_q.as_deref().map(perm::cycle_membership);
    Ok(QuotientSystem {
        subgroup_order: h.order(),
        orbit_start,
        orbit_members,
        orbit_of,
        frob_q,
        f_q,
        frob_cycle,
        f_period,
        working_degree: model.working_degree(),
        complete: model.is_complete(),
    })
}

impl QuotientSystem {
    pub fn orbit_count(&self) -> usize {
        self.frob_q.len()
    }

    pub fn orbit(&self, o: usize) -> &[u32] {
        &self.orbit_members[self.orbit_start[o] as usize..self.orbit_start[o + 1] as usize]
    }

    pub fn orbit_of(&self, point: usize) -> usize {
        self.orbit_of[point] as usize
    }

    pub fn frob_q(&self) -> &[u32] {
        &self.frob_q
    }

    pub fn f_q(&self) -> Option<&[u32]> {
        self.f_q.as_deref()
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order
    }

    /// Period of each orbit under `f_q`; 0 off the cycles.
    pub fn f_periods(&self) -> Option<&[u32]> {
        self.f_period.as_deref()
    }

    fn require_exact(&self, n: u64) -> Result<(), DynamicsError> {
        if exactness_check(self.working_degree, self.complete, n, self.subgroup_order as u64) {
            Ok(())
        } else {
            Err(DynamicsError::Exactness {
                n,
                h: self.subgroup_order as u64,
                working_degree: self.working_degree,
            })
        }
    }

    /// Whether orbit `o` is stable under `frob_q^n`.
    pub fn is_rational(&self, o: usize, n: u64) -> bool {
        n.is_multiple_of(self.frob_cycle[o] as u64)
    }

    /// `|(V/H)(F_{q^n})|`.
    pub fn rational_count(&self, n: u64) -> Result<u64, DynamicsError> {
        self.require_exact(n)?;
        Ok((0..self.orbit_count()).filter(|&o| self.is_rational(o, n)).count() as u64)
    }

    /// `|Per(V/H, f_H)(F_{q^n})|`.
    pub fn periodic_count(&self, n: u64) -> Result<u64, DynamicsError> {
        self.require_exact(n)?;
        let period = self.f_period.as_ref().ok_or(DynamicsError::MissingEndomorphism)?;
        Ok((0..self.orbit_count())
            .filter(|&o| period[o] > 0 && self.is_rational(o, n))
            .count() as u64)
    }
}

pub fn quotient_rational_count(q: &QuotientSystem, n: u64) -> Result<u64, DynamicsError> {
    q.rational_count(n)
}

pub fn periodic_rational_count(q: &QuotientSystem, n: u64) -> Result<u64, DynamicsError> {
    q.periodic_count(n)
}

/// `M = max_H |(V/H)(F_q)|!` and `N = |G| M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodBounds {
    #[serde(with = "biguint_string")]
    pub m: BigUint,
    #[serde(with = "biguint_string")]
    pub n: BigUint,
    /// `|(V/H)(F_q)|` per subgroup.
    pub rational_counts: Vec<u64>,
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn compute_bounds(
    model: &EquivariantModel,
    group: &FiniteGroup,
    subgroups: &[Subgroup],
) -> Result<PeriodBounds, DynamicsError> {
    let mut counts = Vec::with_capacity(subgroups.len());
    for h in subgroups {
        let q = quotient_orbits(model, h)?;
        counts.push(q.rational_count(1)?);
    }
    let m = factorial(counts.iter().copied().max().unwrap_or(0));
    let n = &m * BigUint::from(group.order());
    Ok(PeriodBounds {
        m,
        n,
        rational_counts: counts,
    })
}

fn divides(period: u32, n: &BigUint) -> bool {
    period > 0 && (n % BigUint::from(period)).is_zero()
}

/// Points with `f^N(p) = p`, decided from the cycle structure of `f`.
pub fn per_n_locus(model: &EquivariantModel, n: &BigUint) -> Result<Vec<bool>, DynamicsError> {
    let f = model.f_map().ok_or(DynamicsError::MissingEndomorphism)?;
    let period = perm::cycle_membership(f);
    Ok(period.iter().map(|&l| divides(l, n)).collect())
}

/// Which maps preserve a point subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariance {
    pub frobenius: bool,
    pub group: bool,
    pub endomorphism: bool,
}

impl Invariance {
    pub fn all(&self) -> bool {
        self.frobenius && self.group && self.endomorphism
    }
}

pub fn check_invariance(model: &EquivariantModel, keep: &[bool]) -> Invariance {
    let closed = |m: &[u32]| keep.iter().zip(m).all(|(&k, &y)| !k || keep[y as usize]);
    Invariance {
        frobenius: closed(model.frob()),
        group: model.group_maps().iter().all(|g| closed(g)),
        endomorphism: model.f_map().is_none_or(closed),
    }
}

/// The sub-model `Per_N(V, f)`, with every inherited map restricted. Its
/// invariance under Frobenius, `G` and `f` is asserted.
pub fn per_n_submodel(model: &EquivariantModel, n: &BigUint) -> Result<EquivariantModel, DynamicsError> {
    let keep = per_n_locus(model, n)?;
    let inv = check_invariance(model, &keep);
    if !inv.frobenius {
        return Err(DynamicsError::NotInvariant("Frobenius".into()));
    }
    if !inv.group {
        return Err(DynamicsError::NotInvariant("G".into()));
    }
    if !inv.endomorphism {
        return Err(DynamicsError::NotInvariant("f".into()));
    }
    Ok(model.restrict(&keep))
}

/// Outcome of comparing `(Per_N(V)/H)(F_q)` with `Per_N(V/H)(F_q)` and
/// `Per(V/H)(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IHReport {
    pub subgroup_order: usize,
    /// Frobenius-stable `H`-orbits inside `Per_N(V, f)`.
    pub per_n_orbits: u64,
    /// Rational points of `V/H` with `f_H`-period dividing `N`.
    pub per_n_quotient: u64,
    /// All rational `f_H`-periodic points of `V/H`.
    pub periodic_quotient: u64,
    pub well_defined: bool,
    pub lands_in_target: bool,
    pub injective: bool,
    pub surjective: bool,
    pub counts_agree: bool,
    pub pass: bool,
}

pub fn check_ih_bijection(
    model: &EquivariantModel,
    h: &Subgroup,
    n: &BigUint,
) -> Result<IHReport, DynamicsError> {
    let full = quotient_orbits(model, h)?;
    full.require_exact(1)?;
    let keep = per_n_locus(model, n)?;
    let inv = check_invariance(model, &keep);
    if !inv.all() {
        return Err(DynamicsError::NotInvariant("Frobenius, G or f".into()));
    }
    let sub_to_full: Vec<u32> = keep
        .iter()
        .enumerate()
        .filter(|(_, &k)| k)
        .map(|(i, _)| i as u32)
        .collect();
    let sub = model.restrict(&keep);
    let subq = quotient_orbits(&sub, h)?;

    let period = full.f_periods().ok_or(DynamicsError::MissingEndomorphism)?;
    let in_target: Vec<bool> = (0..full.orbit_count())
        .map(|o| full.is_rational(o, 1) && divides(period[o], n))
        .collect();
    let per_n_quotient = in_target.iter().filter(|&&b| b).count() as u64;
    let periodic_quotient = full.periodic_count(1)?;

    let mut hit = vec![false; full.orbit_count()];
    let (mut well_defined, mut lands, mut injective) = (true, true, true);
    let mut per_n_orbits = 0u64;
    for o in (0..subq.orbit_count()).filter(|&o| subq.is_rational(o, 1)) {
        per_n_orbits += 1;
        let members = subq.orbit(o);
        let image = full.orbit_of(sub_to_full[members[0] as usize] as usize);
        if members
            .iter()
            .any(|&y| full.orbit_of(sub_to_full[y as usize] as usize) != image)
        {
            well_defined = false;
        }
        if !in_target[image] {
            lands = false;
        }
        if hit[image] {
            injective = false;
        }
        hit[image] = true;
    }
    let surjective = in_target.iter().zip(&hit).all(|(&t, &h)| !t || h);
    let counts_agree = per_n_orbits == per_n_quotient && per_n_quotient == periodic_quotient;
    Ok(IHReport {
        subgroup_order: h.order(),
        per_n_orbits,
        per_n_quotient,
        periodic_quotient,
        well_defined,
        lands_in_target: lands,
        injective,
        surjective,
        counts_agree,
        pass: well_defined && lands && injective && surjective && counts_agree,
    })
}

/// Every rational `f_H`-periodic orbit has period dividing `m`.
pub fn lemma_period_check(q: &QuotientSystem, m: &BigUint) -> Result<bool, DynamicsError> {
    q.require_exact(1)?;
    let period = q.f_periods().ok_or(DynamicsError::MissingEndomorphism)?;
    Ok((0..q.orbit_count())
        .filter(|&o| period[o] > 0 && q.is_rational(o, 1))
        .all(|o| divides(period[o], m)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountKind {
    Rational,
    Periodic,
}

/// Quotient counts per subgroup and extension degree; `None` where the model
/// cannot certify the count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub kind: CountKind,
    pub ns: Vec<u64>,
    pub subgroup_orders: Vec<usize>,
    pub working_degree: u32,
    /// `counts[h][i]` is the count for subgroup `h` over `F_{q^ns[i]}`.
    pub counts: Vec<Vec<Option<u64>>>,
}

pub fn count_table(
    model: &EquivariantModel,
    subgroups: &[Subgroup],
    ns: &[u64],
    kind: CountKind,
) -> Result<CountTable, DynamicsError> {
    if kind == CountKind::Periodic && model.f_map().is_none() {
        return Err(DynamicsError::MissingEndomorphism);
    }
    let mut counts = Vec::with_capacity(subgroups.len());
    for h in subgroups {
        let certified: Vec<bool> = ns
            .iter()
            .map(|&n| model.exactness_check(n, h.order() as u64))
            .collect();
        if !certified.iter().any(|&c| c) {
            counts.push(vec![None; ns.len()]);
            continue;
        }
        let q = quotient_orbits(model, h)?;
        let row = ns
            .iter()
            .zip(&certified)
            .map(|(&n, &ok)| {
                if !ok {
                    return Ok(None);
                }
                match kind {
                    CountKind::Rational => q.rational_count(n).map(Some),
                    CountKind::Periodic => q.periodic_count(n).map(Some),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        counts.push(row);
    }
    Ok(CountTable {
        kind,
        ns: ns.to_vec(),
        subgroup_orders: subgroups.iter().map(Subgroup::order).collect(),
        working_degree: model.working_degree(),
        counts,
    })
}

impl CountTable {
    /// `Σ n_H count_H(ns[i])`; errors if a needed count is uncertified.
    pub fn residual(&self, relation: &IdempotentRelation, i: usize) -> Result<i128, DynamicsError> {
        if relation.len() != self.counts.len() {
            return Err(RelationError::LengthMismatch {
                expected: self.counts.len(),
                found: relation.len(),
            }
            .into());
        }
        let mut total = 0i128;
        for (h, &c) in relation.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let count = self.counts[h][i].ok_or(DynamicsError::Exactness {
                n: self.ns[i],
                h: self.subgroup_orders[h] as u64,
                working_degree: self.working_degree,
            })?;
            total += c as i128 * count as i128;
        }
        Ok(total)
    }

    /// Column of counts for `ns[i]`, failing on the first uncertified entry
    /// among subgroups with nonzero coefficient.
    pub fn column(&self, relation: &IdempotentRelation, i: usize) -> Result<Vec<u64>, DynamicsError> {
        self.residual(relation, i)?;
        Ok(self.counts.iter().map(|row| row[i].unwrap_or(0)).collect())
    }
}

fn residual_for(
    model: &EquivariantModel,
    subgroups: &[Subgroup],
    chars: Option<&CharacterMatrix>,
    relation: &IdempotentRelation,
    n: u64,
    kind: CountKind,
) -> Result<i128, DynamicsError> {
    if let Some(chars) = chars {
        if !chars.check(relation)? {
            return Err(DynamicsError::NotARelation);
        }
    }
    if relation.len() != subgroups.len() {
        return Err(RelationError::LengthMismatch {
            expected: subgroups.len(),
            found: relation.len(),
        }
        .into());
    }
    // refuse before doing any work if a needed count is uncertified
    for (h, &c) in subgroups.iter().zip(&relation.coefficients) {
        if c != 0 && !model.exactness_check(n, h.order() as u64) {
            return Err(DynamicsError::Exactness {
                n,
                h: h.order() as u64,
                working_degree: model.working_degree(),
            });
        }
    }
    let used: Vec<Subgroup> = subgroups
        .iter()
        .zip(&relation.coefficients)
        .filter(|(_, &c)| c != 0)
        .map(|(h, _)| h.clone())
        .collect();
    let coeffs: Vec<i64> = relation.coefficients.iter().copied().filter(|&c| c != 0).collect();
    let table = count_table(model, &used, &[n], kind)?;
    table.residual(&IdempotentRelation::new(coeffs), 0)
}

/// `Σ n_H |(V/H)(F_{q^n})|`. Refuses non-relations unless `force`.
pub fn theorem_a_residual(
    model: &EquivariantModel,
    group: &FiniteGroup,
    subgroups: &[Subgroup],
    relation: &IdempotentRelation,
    n: u64,
    force: bool,
) -> Result<i128, DynamicsError> {
    let chars = (!force).then(|| CharacterMatrix::new(group, subgroups));
    residual_for(model, subgroups, chars.as_ref(), relation, n, CountKind::Rational)
}

/// `Σ n_H |Per(V/H, f_H)(F_{q^n})|`. Refuses non-relations unless `force`.
pub fn theorem_b_residual(
    model: &EquivariantModel,
    group: &FiniteGroup,
    subgroups: &[Subgroup],
    relation: &IdempotentRelation,
    n: u64,
    force: bool,
) -> Result<i128, DynamicsError> {
    if model.f_map().is_none() {
        return Err(DynamicsError::MissingEndomorphism);
    }
    let chars = (!force).then(|| CharacterMatrix::new(group, subgroups));
    residual_for(model, subgroups, chars.as_ref(), relation, n, CountKind::Periodic)
}

/// `M` as a `u64` when it fits; handy for display.
pub fn small_bound(m: &BigUint) -> Option<u64> {
    m.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_abstract, build_model, AbstractSpec, Limits, VarietySpec};
    use crate::group::{all_subgroups, close_group, DEFAULT_CLOSURE_BOUND};

    fn x16() -> (EquivariantModel, FiniteGroup, Vec<Subgroup>) {
        let spec: VarietySpec = serde_json::from_str(
            r#"{"field":{"p":2,"e":2},"working_degree":2,"variables":["x"],"equations":["x^16 + x"],
                "generators":[{"name":"t1","map":["x + 1"]},{"name":"ta","map":["x + a"]}],
                "endomorphism":["x^4"]}"#,
        )
        .unwrap();
        let mut m = build_model(&spec, &Limits::default()).unwrap();
        let g = close_group(&mut m, DEFAULT_CLOSURE_BOUND).unwrap();
        let subs = all_subgroups(&g);
        (m, g, subs)
    }

    fn chain() -> EquivariantModel {
        let spec = AbstractSpec {
            points: 3,
            frobenius: vec![0, 1, 2],
            generators: vec![],
            generator_names: None,
            endomorphism: Some(vec![1, 2, 2]),
            complete: true,
            n_values: vec![1],
            n_max: 8,
        };
        let mut m = build_abstract(&spec).unwrap();
        close_group(&mut m, DEFAULT_CLOSURE_BOUND).unwrap();
        m
    }

    #[test]
    fn x16_quotients() {
        let (m, _, subs) = x16();
        let trivial = quotient_orbits(&m, &subs[0]).unwrap();
        assert_eq!(trivial.orbit_count(), 16);
        for n in 1..=4 {
            assert_eq!(trivial.rational_count(n).unwrap(), m.rational_count(n).unwrap());
        }
        // the subgroup generated by x -> x + 1
        let t1 = subs
            .iter()
            .position(|h| h.order() == 2 && m.group_maps()[h.members()[1]][0] == 1)
            .unwrap();
        let q = quotient_orbits(&m, &subs[t1]).unwrap();
        assert_eq!(q.orbit_count(), 8);
        assert!((0..8).all(|o| q.orbit(o).len() == 2));
        assert_eq!(q.rational_count(1).unwrap(), 4);
        let whole = quotient_orbits(&m, subs.last().unwrap()).unwrap();
        assert_eq!(whole.orbit_count(), 4);
        assert_eq!(whole.rational_count(1).unwrap(), 4);
        for h in &subs {
            let q = quotient_orbits(&m, h).unwrap();
            for n in 1..=4 {
                assert_eq!(q.periodic_count(n).unwrap(), q.rational_count(n).unwrap());
                assert!(q.rational_count(n).unwrap() <= m.rational_count(n).unwrap());
            }
        }
    }

    #[test]
    fn x16_bounds_and_bijection() {
        let (m, g, subs) = x16();
        let b = compute_bounds(&m, &g, &subs).unwrap();
        assert_eq!(b.m, BigUint::from(24u32));
        assert_eq!(b.n, BigUint::from(96u32));
        assert_eq!(b.rational_counts, vec![4, 4, 4, 4, 4]);
        let sub = per_n_submodel(&m, &b.n).unwrap();
        assert_eq!(sub.len(), m.len());
        for h in &subs {
            let r = check_ih_bijection(&m, h, &b.n).unwrap();
            assert!(r.pass, "{r:?}");
            let q = quotient_orbits(&m, h).unwrap();
            assert_eq!(r.per_n_orbits, q.rational_count(1).unwrap());
            assert!(lemma_period_check(&q, &b.m).unwrap());
        }
    }

    #[test]
    fn x16_residuals() {
        let (m, g, subs) = x16();
        let rel = IdempotentRelation::new(vec![1, -1, -1, -1, 2]);
        for n in 1..=6 {
            assert_eq!(theorem_a_residual(&m, &g, &subs, &rel, n, false).unwrap(), 0);
            assert_eq!(theorem_b_residual(&m, &g, &subs, &rel, n, false).unwrap(), 0);
        }
        let zero = IdempotentRelation::zero(5);
        assert_eq!(theorem_a_residual(&m, &g, &subs, &zero, 1, false).unwrap(), 0);
        let bogus = IdempotentRelation::new(vec![1, 0, 0, 0, -1]);
        assert_eq!(
            theorem_a_residual(&m, &g, &subs, &bogus, 1, false),
            Err(DynamicsError::NotARelation)
        );
        assert_eq!(theorem_a_residual(&m, &g, &subs, &bogus, 1, true).unwrap(), 0);
        assert_eq!(theorem_a_residual(&m, &g, &subs, &bogus, 2, true).unwrap(), 12);
    }

    #[test]
    fn chain_periodic_points() {
        let m = chain();
        let subs = [Subgroup::new(&FiniteGroup::from_table(&[vec![0]], None).unwrap(), vec![0]).unwrap()];
        let q = quotient_orbits(&m, &subs[0]).unwrap();
        assert_eq!(q.periodic_count(1).unwrap(), 1);
        assert_eq!(q.rational_count(1).unwrap(), 3);
        let sub = per_n_submodel(&m, &BigUint::from(6u32)).unwrap();
        assert_eq!(sub.len(), 1);
        assert!(lemma_period_check(&q, &BigUint::from(1u32)).unwrap());
    }

    #[test]
    fn identity_endomorphism_matches_rational_counts() {
        let spec: VarietySpec = serde_json::from_str(
            r#"{"field":{"p":2,"e":2},"working_degree":2,"variables":["x"],"equations":["x^16 + x"],
                "generators":[{"name":"t1","map":["x + 1"]}],"endomorphism":["x"]}"#,
        )
        .unwrap();
        let mut m = build_model(&spec, &Limits::default()).unwrap();
        let g = close_group(&mut m, DEFAULT_CLOSURE_BOUND).unwrap();
        let subs = all_subgroups(&g);
        for h in &subs {
            let q = quotient_orbits(&m, h).unwrap();
            let r = check_ih_bijection(&m, h, &BigUint::from(1u32)).unwrap();
            assert!(r.pass);
            assert_eq!(r.per_n_orbits, q.rational_count(1).unwrap());
        }
        assert_eq!(per_n_submodel(&m, &BigUint::from(5u32)).unwrap().len(), 16);
    }

    #[test]
    fn exactness_is_enforced() {
        let spec: VarietySpec = serde_json::from_str(
            r#"{"field":{"p":2,"e":2},"working_degree":1,"variables":["x"],
                "generators":[{"name":"t1","map":["x + 1"]},{"name":"ta","map":["x + a"]}],
                "endomorphism":["x^4"]}"#,
        )
        .unwrap();
        let mut m = build_model(&spec, &Limits::default()).unwrap();
        let g = close_group(&mut m, DEFAULT_CLOSURE_BOUND).unwrap();
        let subs = all_subgroups(&g);
        let rel = IdempotentRelation::new(vec![1, -1, -1, -1, 2]);
        assert!(matches!(
            theorem_a_residual(&m, &g, &subs, &rel, 1, false),
            Err(DynamicsError::Exactness { n: 1, h: 2, working_degree: 1 })
        ));
        assert!(matches!(compute_bounds(&m, &g, &subs), Err(DynamicsError::Exactness { .. })));
    }
}
