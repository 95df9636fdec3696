//! Finite groups given by a multiplication table, either closed from point
//! permutations or supplied abstractly, with subgroup enumeration, conjugacy
//! classes and permutation characters on coset spaces.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::geometry::{EquivariantModel, NamedPerm};
use crate::perm;

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group closure exceeded {0} elements")]
    ClosureBound(usize),
    #[error("generator `{0}` is not a permutation of the point set")]
    NotBijective(String),
    #[error("generator `{generator}` does not commute with {with} at point {point}")]
    Commutation {
        generator: String,
        with: String,
        point: usize,
    },
    #[error("not a group table: {0}")]
    BadTable(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
}

/// A finite group as a multiplication table; element 0 is the identity and
/// `mul(i, j)` is `i ∘ j` (apply `j` first when realized as maps).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Validates an abstract table. Identity and inverse laws are checked
    /// exactly; associativity exhaustively up to order 64.
    pub fn from_table(
        table: &[Vec<usize>],
        names: Option<Vec<String>>,
    ) -> Result<FiniteGroup, GroupError> {
        let n = table.len();
        let bad = |m: String| Err(GroupError::BadTable(m));
        if n == 0 {
            return bad("empty table".into());
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("table is not square with entries in range".into());
        }
        for i in 0..n {
            if table[0][i] != i || table[i][0] != i {
                return bad("element 0 is not the identity".into());
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for (i, row) in table.iter().enumerate() {
            match row.iter().position(|&x| x == 0) {
                Some(j) if table[j][i] == 0 => inverse.push(j as u32),
                _ => return bad(format!("element {i} has no two-sided inverse")),
            }
        }
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if table[table[a][b]][c] != table[a][table[b][c]] {
                            return bad(format!("({a}*{b})*{c} != {a}*({b}*{c})"));
                        }
                    }
                }
            }
        }
        let names = match names {
            Some(v) if v.len() == n => v,
            Some(_) => return bad("names do not match the table".into()),
            None => (0..n).map(|i| if i == 0 { "e".into() } else { format!("g{i}") }).collect(),
        };
        Ok(FiniteGroup {
            order: n,
            table: table.iter().flatten().map(|&x| x as u32).collect(),
            inverse,
            names,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, a| {
            perm::lcm(acc as u64, self.element_order(a) as u64).unwrap() as usize
        })
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    /// Sorted members of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }
}

fn fingerprint(p: &[u32]) -> u64 {
    let mut h = DefaultHasher::new();
    p.hash(&mut h);
    h.finish()
}

/// Closes named permutations into a group. Elements are listed breadth-first
/// by word length in the generators; elements first reached in the same
/// layer are ordered lexicographically by permutation. Returns the group and
/// the permutation of each element.
pub fn close_permutations(
    gens: &[NamedPerm],
    points: usize,
    bound: usize,
) -> Result<(FiniteGroup, Vec<Vec<u32>>), GroupError> {
    for g in gens {
        if g.perm.len() != points || !perm::is_bijection(&g.perm) {
            return Err(GroupError::NotBijective(g.name.clone()));
        }
    }
    let mut perms: Vec<Vec<u32>> = vec![perm::identity(points)];
    let mut names = vec!["e".to_string()];
    let mut index: HashMap<u64, Vec<usize>> = HashMap::new();
    index.entry(fingerprint(&perms[0])).or_default().push(0);
    let mut layer = vec![0usize];
    while !layer.is_empty() {
        let mut fresh: Vec<(Vec<u32>, String)> = Vec::new();
        for &x in &layer {
            for g in gens {
                let y = perm::compose(&g.perm, &perms[x]);
                let known = index
                    .get(&fingerprint(&y))
                    .is_some_and(|c| c.iter().any(|&i| perms[i] == y));
                if known || fresh.iter().any(|(p, _)| *p == y) {
                    continue;
                }
                let word = if x == 0 {
                    g.name.clone()
                } else {
                    format!("{}*{}", g.name, names[x])
                };
                fresh.push((y, word));
            }
        }
        fresh.sort_by(|a, b| a.0.cmp(&b.0));
        layer.clear();
        for (p, word) in fresh {
            if perms.len() >= bound {
                return Err(GroupError::ClosureBound(bound));
            }
            index.entry(fingerprint(&p)).or_default().push(perms.len());
            layer.push(perms.len());
            perms.push(p);
            names.push(word);
        }
    }
    drop(index);

    // a base: points whose images separate all elements
    let n = perms.len();
    let mut base: Vec<usize> = Vec::new();
    loop {
        let mut sigs: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut clash = None;
        for (i, p) in perms.iter().enumerate() {
            let sig: Vec<u32> = base.iter().map(|&b| p[b]).collect();
            if let Some(&j) = sigs.get(&sig) {
                clash = Some((j, i));
                break;
            }
            sigs.insert(sig, i);
        }
        match clash {
            None => break,
            Some((j, i)) => {
                let pt = (0..points)
                    .find(|&x| perms[i][x] != perms[j][x])
                    .expect("distinct permutations differ somewhere");
                base.push(pt);
            }
        }
    }
    let sig_of = |p: &[u32]| -> Vec<u32> { base.iter().map(|&b| p[b]).collect() };
    let lookup: HashMap<Vec<u32>, usize> = perms.iter().enumerate().map(|(i, p)| (sig_of(p), i)).collect();
    let mut table = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let sig: Vec<u32> = base.iter().map(|&x| perms[a][perms[b][x] as usize]).collect();
            table[a][b] = *lookup
                .get(&sig)
                .ok_or_else(|| GroupError::BadTable("closure is not closed".into()))?;
        }
    }
    let group = FiniteGroup::from_table(&table, Some(names))?;
    Ok((group, perms))
}

/// Closes the model's generators, checks each commutes with Frobenius and
/// `f`, and installs the element permutations on the model.
pub fn close_group(model: &mut EquivariantModel, bound: usize) -> Result<FiniteGroup, GroupError> {
    for g in model.generators() {
        if g.perm.len() != model.len() || !perm::is_bijection(&g.perm) {
            return Err(GroupError::NotBijective(g.name.clone()));
        }
        if let Some(pt) = perm::commutation_failure(&g.perm, model.frob()) {
            return Err(GroupError::Commutation {
                generator: g.name.clone(),
                with: "frobenius".into(),
                point: pt,
            });
        }
        if let Some(f) = model.f_map() {
            if let Some(pt) = perm::commutation_failure(&g.perm, f) {
                return Err(GroupError::Commutation {
                    generator: g.name.clone(),
                    with: "endomorphism".into(),
                    point: pt,
                });
            }
        }
    }
    let (group, perms) = close_permutations(model.generators(), model.len(), bound)?;
    model.set_group_maps(perms);
    Ok(group)
}

/// A verified subgroup, members sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(g: &FiniteGroup, mut members: Vec<usize>) -> Result<Subgroup, GroupError> {
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::NotASubgroup("missing the identity".into()));
        }
        if members.iter().any(|&x| x >= g.order()) {
            return Err(GroupError::NotASubgroup("element out of range".into()));
        }
        for &a in &members {
            if members.binary_search(&g.inv(a)).is_err() {
                return Err(GroupError::NotASubgroup(format!("not closed under inverse of {a}")));
            }
            for &b in &members {
                if members.binary_search(&g.mul(a, b)).is_err() {
                    return Err(GroupError::NotASubgroup(format!("{a}*{b} escapes")));
                }
            }
        }
        assert_eq!(g.order() % members.len(), 0, "Lagrange");
        Ok(Subgroup { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// Every subgroup once, sorted by `(order, members)`.
///
/// Starts from the cyclic subgroups and joins pairs until nothing new
/// appears; every subgroup is a join of cyclic ones.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    // (members, generating set)
    let mut list: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for x in 0..g.order() {
        let members = g.closure(&[x]);
        if seen.insert(members.clone()) {
            list.push((members, vec![x]));
        }
    }
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            let (a, ga) = &list[i];
            let (b, gb) = &list[j];
            if b.iter().all(|x| a.binary_search(x).is_ok())
                || a.iter().all(|x| b.binary_search(x).is_ok())
            {
                continue;
            }
            let mut gens = ga.clone();
            gens.extend(gb.iter().copied().filter(|x| !ga.contains(x)));
            let members = g.closure(&gens);
            if seen.insert(members.clone()) {
                list.push((members, gens));
            }
        }
        i += 1;
    }
    let mut subs: Vec<Subgroup> = list
        .into_iter()
        .map(|(members, _)| Subgroup { members })
        .collect();
    subs.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    subs
}

/// Conjugacy classes, each sorted, ordered by least member (identity first).
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; g.order()];
    let mut classes = Vec::new();
    for a in 0..g.order() {
        if assigned[a] {
            continue;
        }
        let mut class: Vec<usize> = (0..g.order()).map(|x| g.conjugate(x, a)).collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            assigned[c] = true;
        }
        classes.push(class);
    }
    classes
}

/// Left cosets `xH`, each sorted, in order of least member.
pub fn left_cosets(g: &FiniteGroup, h: &Subgroup) -> Vec<Vec<usize>> {
    let mut covered = vec![false; g.order()];
    let mut cosets = Vec::new();
    for x in 0..g.order() {
        if covered[x] {
            continue;
        }
        let mut coset: Vec<usize> = h.members().iter().map(|&m| g.mul(x, m)).collect();
        coset.sort_unstable();
        for &c in &coset {
            covered[c] = true;
        }
        cosets.push(coset);
    }
    cosets
}

/// `#{xH : g x H = x H}`.
pub fn coset_fixed_count(g: &FiniteGroup, h: &Subgroup, elem: usize) -> usize {
    left_cosets(g, h)
        .iter()
        .filter(|coset| {
            let x = coset[0];
            h.contains(g.mul(g.inv(x), g.mul(elem, x)))
        })
        .count()
}

/// One value per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<BigRational>,
}

impl ClassFunction {
    pub fn zero(classes: usize) -> ClassFunction {
        ClassFunction {
            values: vec![BigRational::from_integer(BigInt::from(0)); classes],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == BigRational::from_integer(BigInt::from(0)))
    }
}

/// The character of `G` acting on `G/H`, evaluated at each class
/// representative.
pub fn permutation_character(g: &FiniteGroup, classes: &[Vec<usize>], h: &Subgroup) -> ClassFunction {
    ClassFunction {
        values: classes
            .iter()
            .map(|c| BigRational::from_integer(BigInt::from(coset_fixed_count(g, h, c[0]))))
            .collect(),
    }
}

/// Display name: `1`, `G`, or `<x, y>` from a greedy generating set.
pub fn subgroup_name(g: &FiniteGroup, h: &Subgroup) -> String {
    if h.order() == 1 {
        return "1".into();
    }
    if h.order() == g.order() {
        return "G".into();
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![0usize];
    for &x in h.members() {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    let names: Vec<&str> = gens.iter().map(|&x| g.name(x)).collect();
    format!("<{}>", names.join(", "))
}
