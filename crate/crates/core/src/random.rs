//! Seeded generators for contexts, posets and lattices.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::context::FormalContext;
use crate::lattice::{ConceptLattice, LatticeOptions};
use crate::poset::Poset;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each cell is a cross with probability `density`.
pub fn random_context<R: Rng>(
    rng: &mut R,
    objects: usize,
    attributes: usize,
    density: f64,
) -> FormalContext {
    let rows = (0..objects)
        .map(|_| {
            BitSet::from_indices(
                attributes,
                (0..attributes).filter(|_| rng.gen_bool(density)),
            )
        })
        .collect();
    FormalContext::new(
        (1..=objects).map(|i| format!("g{i}")).collect(),
        (1..=attributes).map(|i| format!("m{i}")).collect(),
        rows,
    )
    .expect("generated names are distinct")
}

/// Random DAG on `0..n` with each edge `i → j`, `i < j`, kept with
/// probability `p`, closed transitively.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Poset {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_relation((0..n).map(|i| format!("p{i}")).collect(), &pairs)
        .expect("edges point upwards, so there is no cycle")
}

/// Context of a join-distributive lattice: the feasible sets of an
/// antimatroid generated by the prefixes of `paths` random orderings of a
/// `ground`-element set. Objects are the feasible sets, attributes the
/// ground elements, and `S I e` iff `e ∉ S`; the extents then correspond to
/// the feasible sets ordered by inclusion.
pub fn random_antimatroid_context<R: Rng>(
    rng: &mut R,
    ground: usize,
    paths: usize,
) -> FormalContext {
    let mut feasible: Vec<BitSet> = vec![BitSet::new(ground)];
    let mut perm: Vec<usize> = (0..ground).collect();
    for _ in 0..paths {
        perm.shuffle(rng);
        let mut prefix = BitSet::new(ground);
        for &e in &perm {
            prefix.insert(e);
            feasible.push(prefix.clone());
        }
    }
    // close under union
    let mut changed = true;
    while changed {
        changed = false;
        feasible.sort_by(|a, b| a.lectic_cmp(b));
        feasible.dedup();
        let n = feasible.len();
        let mut extra = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let u = feasible[i].union(&feasible[j]);
                if feasible.binary_search_by(|s| s.lectic_cmp(&u)).is_err() {
                    extra.push(u);
                }
            }
        }
        if !extra.is_empty() {
            feasible.extend(extra);
            changed = true;
        }
    }
    let rows = feasible.iter().map(BitSet::complement).collect();
    FormalContext::new(
        (0..feasible.len()).map(|i| format!("F{i}")).collect(),
        (0..ground).map(|e| format!("e{e}")).collect(),
        rows,
    )
    .expect("generated names are distinct")
}

/// A random context whose concept lattice has at most `max_size` elements.
/// Mixes plain random contexts with antimatroid contexts and their
/// transposes so that join- and meet-distributive lattices are common.
pub fn random_small_lattice<R: Rng>(
    rng: &mut R,
    max_size: usize,
) -> (FormalContext, ConceptLattice) {
    let opts = LatticeOptions {
        max_concepts: Some(max_size),
        ..LatticeOptions::default()
    };
    loop {
        let ctx = match rng.gen_range(0..4) {
            0 | 1 => {
                let g = rng.gen_range(1..=6);
                let m = rng.gen_range(1..=6);
                let d = rng.gen_range(0.2..0.8);
                random_context(rng, g, m, d)
            }
            2 => {
                let ground = rng.gen_range(2..=5);
                let paths = rng.gen_range(1..=3);
                random_antimatroid_context(rng, ground, paths)
            }
            _ => {
                let ground = rng.gen_range(2..=5);
                let paths = rng.gen_range(1..=3);
                random_antimatroid_context(rng, ground, paths).transpose()
            }
        };
        if let Ok(lat) = ConceptLattice::from_context_with(&ctx, &opts) {
            return (ctx, lat);
        }
    }
}
