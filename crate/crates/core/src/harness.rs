//! Random abstract models for property testing: disjoint unions of coset
//! spaces `G/K` with Frobenius and `f` drawn from the maps commuting with the
//! `G`-action.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::AbstractSpec;
use crate::group::{all_subgroups, FiniteGroup, Subgroup};
use crate::perm;

/// An abstract group together with the elements used as generators.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub group: FiniteGroup,
    pub generators: Vec<usize>,
    pub label: &'static str,
}

pub fn klein_four() -> GroupPresentation {
    let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    GroupPresentation {
        group: FiniteGroup::from_table(&table, None).expect("valid table"),
        generators: vec![1, 2],
        label: "V4",
    }
}

/// `S3` as permutations of three letters in lexicographic order.
pub fn symmetric_s3() -> GroupPresentation {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("closed");
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
        .collect();
    GroupPresentation {
        group: FiniteGroup::from_table(&table, None).expect("valid table"),
        generators: vec![2, 3],
        label: "S3",
    }
}

/// `G` acting on `⊔_i G/K_i`.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    /// Subgroup of each component.
    pub components: Vec<Subgroup>,
    /// `(component, left coset as a sorted member list)` per point.
    pub points: Vec<(usize, Vec<usize>)>,
    /// Permutation of each group element on the points.
    pub action: Vec<Vec<u32>>,
}

fn coset(g: &FiniteGroup, a: usize, k: &Subgroup) -> Vec<usize> {
    let mut c: Vec<usize> = k.members().iter().map(|&x| g.mul(a, x)).collect();
    c.sort_unstable();
    c
}

impl CosetSpace {
    pub fn new(g: &FiniteGroup, components: Vec<Subgroup>) -> CosetSpace {
        let mut points = Vec::new();
        for (i, k) in components.iter().enumerate() {
            let mut seen: Vec<Vec<usize>> = Vec::new();
            for a in 0..g.order() {
                let c = coset(g, a, k);
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
            points.extend(seen.into_iter().map(|c| (i, c)));
        }
        let action = (0..g.order())
            .map(|x| {
                points
                    .iter()
                    .map(|(i, c)| {
                        let img = coset(g, g.mul(x, c[0]), &components[*i]);
                        points
                            .iter()
                            .position(|(j, d)| j == i && *d == img)
                            .expect("action preserves components") as u32
                    })
                    .collect()
            })
            .collect();
        CosetSpace {
            components,
            points,
            action,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn base_point(&self, i: usize) -> usize {
        self.points.iter().position(|(j, _)| *j == i).expect("nonempty component")
    }

    /// Points `y` that may serve as the image of the base point of component
    /// `i` under an equivariant map: those fixed by `K_i`.
    pub fn admissible_images(&self, i: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| self.components[i].members().iter().all(|&k| self.action[k][y] as usize == y))
            .collect()
    }

    /// The equivariant map sending each base point `b_i` to `images[i]`.
    pub fn equivariant_map(&self, g: &FiniteGroup, images: &[usize]) -> Vec<u32> {
        let mut out = vec![u32::MAX; self.len()];
        for (i, &y) in images.iter().enumerate() {
            let b = self.base_point(i);
            for a in 0..g.order() {
                let x = self.action[a][b] as usize;
                let fx = self.action[a][y];
                debug_assert!(out[x] == u32::MAX || out[x] == fx);
                out[x] = fx;
            }
        }
        out
    }

    pub fn commutes_with_action(&self, m: &[u32]) -> bool {
        self.action.iter().all(|a| perm::commutation_failure(a, m).is_none())
    }

    /// Whether `G` acts faithfully.
    pub fn is_faithful(&self) -> bool {
        self.action.iter().skip(1).all(|a| !perm::is_identity(a))
    }
}

/// A sampled model and the data it came from.
#[derive(Clone, Debug)]
pub struct HarnessModel {
    pub spec: AbstractSpec,
    pub space: CosetSpace,
    pub label: &'static str,
}

fn random_bijection<R: Rng>(rng: &mut R, g: &FiniteGroup, space: &CosetSpace) -> Vec<u32> {
    let k = space.components.len();
    for _ in 0..64 {
        let mut sigma: Vec<usize> = (0..k).collect();
        sigma.shuffle(rng);
        let mut images = Vec::with_capacity(k);
        for (i, &j) in sigma.iter().enumerate() {
            let same_size = space.components[i].order() == space.components[j].order();
            let choices: Vec<usize> = space
                .admissible_images(i)
                .into_iter()
                .filter(|&y| space.points[y].0 == j)
                .collect();
            if !same_size || choices.is_empty() {
                break;
            }
            images.push(*choices.choose(rng).expect("nonempty"));
        }
        if images.len() == k {
            let m = space.equivariant_map(g, &images);
            if perm::is_bijection(&m) {
                return m;
            }
        }
    }
    perm::identity(space.len())
}

fn random_endomorphism<R: Rng>(rng: &mut R, g: &FiniteGroup, space: &CosetSpace, phi: &[u32]) -> Vec<u32> {
    let k = space.components.len();
    let admissible: Vec<Vec<usize>> = (0..k).map(|i| space.admissible_images(i)).collect();
    for _ in 0..256 {
        let images: Vec<usize> = admissible.iter().map(|a| *a.choose(rng).expect("base point fixed")).collect();
        let f = space.equivariant_map(g, &images);
        if perm::commutation_failure(&f, phi).is_none() {
            return f;
        }
    }
    phi.to_vec()
}

/// Samples a model with `1..=max_components` components. The action is
/// faithful, so the closed permutation group has order `|G|`.
pub fn random_model<R: Rng>(rng: &mut R, pres: &GroupPresentation, max_components: usize) -> HarnessModel {
    let g = &pres.group;
    let subs = all_subgroups(g);
    loop {
        let k = rng.gen_range(1..=max_components.max(1));
        let components: Vec<Subgroup> = (0..k).map(|_| subs.choose(rng).expect("subgroups").clone()).collect();
        let space = CosetSpace::new(g, components);
        if !space.is_faithful() {
            continue;
        }
        let phi = if rng.gen_bool(0.3) {
            perm::identity(space.len())
        } else {
            random_bijection(rng, g, &space)
        };
        let f = random_endomorphism(rng, g, &space, &phi);
        debug_assert!(space.commutes_with_action(&phi) && space.commutes_with_action(&f));
        let spec = AbstractSpec {
            points: space.len(),
            frobenius: phi,
            generators: pres.generators.iter().map(|&x| space.action[x].clone()).collect(),
            generator_names: None,
            endomorphism: Some(f),
            complete: true,
            n_values: vec![1, 2, 3, 4],
            n_max: 8,
        };
        return HarnessModel {
            spec,
            space,
            label: pres.label,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_abstract;
    use crate::group::{close_group, DEFAULT_CLOSURE_BOUND};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn presentations_generate() {
        for pres in [klein_four(), symmetric_s3()] {
            assert_eq!(pres.group.closure(&pres.generators).len(), pres.group.order());
        }
        assert!(!symmetric_s3().group.is_abelian());
    }

    #[test]
    fn regular_coset_space() {
        let s3 = symmetric_s3();
        let trivial = Subgroup::new(&s3.group, vec![0]).unwrap();
        let space = CosetSpace::new(&s3.group, vec![trivial]);
        assert_eq!(space.len(), 6);
        assert!(space.is_faithful());
        // the centralizer of the regular action is the right regular action
        assert_eq!(space.admissible_images(0).len(), 6);
    }

    #[test]
    fn sampled_models_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut non_injective = 0;
        for pres in [klein_four(), symmetric_s3()] {
            for _ in 0..40 {
                let h = random_model(&mut rng, &pres, 4);
                let mut m = build_abstract(&h.spec).unwrap();
                let g = close_group(&mut m, DEFAULT_CLOSURE_BOUND).unwrap();
                assert_eq!(g.order(), pres.group.order());
                if !perm::is_bijection(m.f_map().unwrap()) {
                    non_injective += 1;
                }
            }
        }
        assert!(non_injective > 0);
    }
}
