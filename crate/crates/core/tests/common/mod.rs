#![allow(dead_code)]

use fqdyn_core::geometry::EquivariantModel;
use fqdyn_core::group::Subgroup;

/// Orbit of `x` under the members of `h`, sorted.
fn orbit(model: &EquivariantModel, h: &Subgroup, x: usize) -> Vec<usize> {
    let mut o: Vec<usize> = h.members().iter().map(|&g| model.group_maps()[g][x] as usize).collect();
    o.sort_unstable();
    o.dedup();
    o
}

fn iterate(map: &[u32], x: usize, k: u64) -> usize {
    (0..k).fold(x, |y, _| map[y] as usize)
}

/// `|(V/H)(F_{q^n})|` by walking every point: an orbit counts once, at its
/// least member, when `φ^n` sends that member back into the orbit.
pub fn naive_rational(model: &EquivariantModel, h: &Subgroup, n: u64) -> u64 {
    (0..model.len())
        .filter(|&x| {
            let o = orbit(model, h, x);
            o[0] == x && o.contains(&iterate(model.frob(), x, n))
        })
        .count() as u64
}

/// Rational orbits `O` with `f^k(O) = O` for some `k >= 1`.
pub fn naive_periodic(model: &EquivariantModel, h: &Subgroup, n: u64) -> u64 {
    let f = model.f_map().expect("endomorphism");
    (0..model.len())
        .filter(|&x| {
            let o = orbit(model, h, x);
            if o[0] != x || !o.contains(&iterate(model.frob(), x, n)) {
                return false;
            }
            let mut y = x;
            (1..=model.len()).any(|_| {
                y = f[y] as usize;
                o.contains(&y)
            })
        })
        .count() as u64
}

/// Whether `f^N(x) = x`, by reducing `N` modulo the cycle length found by
/// walking from `x`.
pub fn naive_in_per_n(f: &[u32], x: usize, n: &num_bigint::BigUint) -> bool {
    let mut y = x;
    for k in 1..=f.len() {
        y = f[y] as usize;
        if y == x {
            return (n % num_bigint::BigUint::from(k)) == num_bigint::BigUint::from(0u32);
        }
    }
    false
}
