//! Index-array maps on `0..n`: permutations and general self-maps.

/// `a ∘ b`, i.e. apply `b` first.
pub fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn identity(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

pub fn is_identity(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &x)| x as usize == i)
}

pub fn is_bijection(a: &[u32]) -> bool {
    let mut seen = vec![false; a.len()];
    for &x in a {
        match seen.get_mut(x as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

pub fn inverse(a: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// First `i` with `a[b[i]] != b[a[i]]`.
pub fn commutation_failure(a: &[u32], b: &[u32]) -> Option<usize> {
    (0..a.len()).find(|&i| a[b[i] as usize] != b[a[i] as usize])
}

/// Length of the cycle through each point of a permutation.
pub fn cycle_lengths(a: &[u32]) -> Vec<u32> {
    let mut len = vec![0u32; a.len()];
    for start in 0..a.len() {
        if len[start] != 0 {
            continue;
        }
        let mut l = 1u32;
        let mut x = a[start] as usize;
        while x != start {
            l += 1;
            x = a[x] as usize;
        }
        len[start] = l;
        let mut x = a[start] as usize;
        while x != start {
            len[x] = l;
            x = a[x] as usize;
        }
    }
    len
}

/// For a self-map, the length of the cycle containing each point, or 0 for
/// points not on a cycle (pre-periodic tails).
///
/// Iterative three-colour walk over the functional graph; linear time.
pub fn cycle_membership(f: &[u32]) -> Vec<u32> {
    const NEW: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let n = f.len();
    let mut state = vec![NEW; n];
    let mut period = vec![0u32; n];
    let mut path = Vec::new();
    for start in 0..n {
        if state[start] != NEW {
            continue;
        }
        path.clear();
        let mut x = start;
        while state[x] == NEW {
            state[x] = ACTIVE;
            path.push(x);
            x = f[x] as usize;
        }
        if state[x] == ACTIVE {
            // x closes a fresh cycle
            let pos = path.iter().position(|&y| y == x).expect("active point on path");
            let l = (path.len() - pos) as u32;
            for &y in &path[pos..] {
                period[y] = l;
            }
        }
        for &y in &path {
            state[y] = DONE;
        }
    }
    period
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// `lcm(1, ..., h)`, or `None` on overflow.
pub fn lcm_up_to(h: u64) -> Option<u64> {
    (1..=h).try_fold(1u64, lcm)
}

/// Order of a permutation (lcm of its cycle lengths).
pub fn order(a: &[u32]) -> Option<u64> {
    let mut lens = cycle_lengths(a);
    lens.sort_unstable();
    lens.dedup();
    lens.into_iter().try_fold(1u64, |acc, l| lcm(acc, l as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_of_a_chain() {
        // 0 -> 1 -> 2 -> 2, 3 <-> 4
        let f = [1, 2, 2, 4, 3];
        assert_eq!(cycle_membership(&f), vec![0, 0, 1, 2, 2]);
    }

    #[test]
    fn permutation_basics() {
        let a = [1, 2, 0, 3];
        assert!(is_bijection(&a));
        assert!(!is_bijection(&[0, 0, 1]));
        assert!(is_identity(&compose(&a, &inverse(&a))));
        assert_eq!(cycle_lengths(&a), vec![3, 3, 3, 1]);
        assert_eq!(order(&a), Some(3));
        assert_eq!(lcm_up_to(4), Some(12));
        assert_eq!(commutation_failure(&a, &a), None);
        assert_eq!(commutation_failure(&[1, 0, 2], &[0, 2, 1]), Some(0));
    }
}
