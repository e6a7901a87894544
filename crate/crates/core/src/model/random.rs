use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Component, ComponentId, StratifiedFiber, Stratum, StratumId};

/// Highest cell dimension the generator produces.
const MAX_DIM: usize = 3;

/// A random valid fiber with `size` components (multiplicities `1..=max_mult`).
///
/// Cells are added dimension by dimension with parents drawn among the
/// existing strata, so parallel cells occur; only parent choices satisfying
/// the diamond condition are kept. Deterministic in `seed`.
pub fn random_fiber(seed: u64, size: usize, max_mult: u64) -> StratifiedFiber {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = size.max(1);
    let ids: Vec<ComponentId> = (0..size).map(|i| ComponentId(format!("C{i}"))).collect();
    let components = ids
        .iter()
        .map(|id| Component::new(id.clone(), rng.gen_range(1..=max_mult.max(1))))
        .collect();
    let mut strata: Vec<Stratum> = ids
        .iter()
        .map(|id| Stratum::vertex(id.0.clone(), id.clone()))
        .collect();

    for dim in 1..=MAX_DIM.min(size - 1) {
        let attempts = match dim {
            1 => size + rng.gen_range(0..=size),
            _ => rng.gen_range(0..=size),
        };
        let mut made = 0;
        for _ in 0..attempts {
            let mut set: Vec<ComponentId> = ids.choose_multiple(&mut rng, dim + 1).cloned().collect();
            set.sort();
            let options: Vec<Vec<usize>> = set
                .iter()
                .map(|j| {
                    strata
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| {
                            s.components.len() == dim
                                && !s.components.contains(j)
                                && s.components.iter().all(|c| set.contains(c))
                        })
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            let choices = consistent_parents(&strata, &set, &options);
            let Some(parents) = choices.choose(&mut rng) else {
                continue;
            };
            let id = StratumId(format!("s{dim}_{made}"));
            made += 1;
            strata.push(Stratum {
                id,
                components: set.clone(),
                parents: set
                    .iter()
                    .zip(parents)
                    .map(|(j, &p)| (j.clone(), strata[p].id.clone()))
                    .collect(),
            });
        }
    }

    StratifiedFiber { components, strata }
}

/// Parent tuples (indices into `strata`) that satisfy the diamond condition.
/// Enumeration is capped; the fiber stays valid either way.
fn consistent_parents(
    strata: &[Stratum],
    set: &[ComponentId],
    options: &[Vec<usize>],
) -> Vec<Vec<usize>> {
    const CAP: usize = 256;
    let index: BTreeMap<&StratumId, usize> =
        strata.iter().enumerate().map(|(i, s)| (&s.id, i)).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(set.len());
    fn rec(
        k: usize,
        strata: &[Stratum],
        set: &[ComponentId],
        options: &[Vec<usize>],
        index: &BTreeMap<&StratumId, usize>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= CAP {
            return;
        }
        if k == set.len() {
            out.push(current.clone());
            return;
        }
        'next: for &p in &options[k] {
            for (i, &q) in current.iter().enumerate() {
                // drop set[k] then set[i] versus set[i] then set[k]
                let a = &strata[p].parents.get(&set[i]);
                let b = &strata[q].parents.get(&set[k]);
                let same = match (a, b) {
                    (Some(a), Some(b)) => index[a] == index[b],
                    (None, None) => true,
                    _ => false,
                };
                if !same {
                    continue 'next;
                }
            }
            current.push(p);
            rec(k + 1, strata, set, options, index, current, out);
            current.pop();
        }
    }
    rec(0, strata, set, options, &index, &mut current, &mut out);
    out
}
