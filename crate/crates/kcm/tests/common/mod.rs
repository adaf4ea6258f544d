//! Shared test helpers: an independent brute-force reachability oracle and
//! seeded random instance generators.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kcm::{Site, UpdateFamily};

/// Brute-force fixpoint over the full `2^|Λ|` state graph, written directly
/// from the move definition on raw coordinate lists. Nothing here touches the
/// search engine: legality is rescanned per site, states are plain bitmasks,
/// and the closure is recomputed from scratch each round.
///
/// Bit `i` set means site `i` of `sites` is at zero.
pub fn naive_reachable_masks(
    rules: &[Vec<Vec<i64>>],
    sites: &[Vec<i64>],
    budget: u32,
    outside_zero: bool,
) -> BTreeSet<u64> {
    assert!(sites.len() <= 64, "oracle states are single-word bitmasks");
    let index: HashMap<&[i64], usize> = sites
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let legal = |mask: u64, site_idx: usize| -> bool {
        rules.iter().any(|rule| {
            rule.iter().all(|offset| {
                let translated: Vec<i64> = sites[site_idx]
                    .iter()
                    .zip(offset)
                    .map(|(a, b)| a + b)
                    .collect();
                match index.get(translated.as_slice()) {
                    Some(&j) => mask & (1u64 << j) != 0,
                    None => outside_zero,
                }
            })
        })
    };

    let mut reachable: BTreeSet<u64> = BTreeSet::new();
    reachable.insert(0);
    loop {
        let mut grew = false;
        let snapshot: Vec<u64> = reachable.iter().copied().collect();
        for mask in snapshot {
            for site_idx in 0..sites.len() {
                if !legal(mask, site_idx) {
                    continue;
                }
                let next = mask ^ (1u64 << site_idx);
                if next.count_ones() <= budget && reachable.insert(next) {
                    grew = true;
                }
            }
        }
        if !grew {
            return reachable;
        }
    }
}

/// The oracle's reachable set as sorted zero-site coordinate lists, for
/// comparison against engine output.
pub fn naive_reachable_zero_sets(
    rules: &[Vec<Vec<i64>>],
    sites: &[Vec<i64>],
    budget: u32,
    outside_zero: bool,
) -> BTreeSet<Vec<Vec<i64>>> {
    naive_reachable_masks(rules, sites, budget, outside_zero)
        .into_iter()
        .map(|mask| {
            (0..sites.len())
                .filter(|i| mask & (1u64 << i) != 0)
                .map(|i| sites[i].clone())
                .collect()
        })
        .collect()
}

/// Raw rule lists of a family, for feeding the oracle.
pub fn raw_rules(family: &UpdateFamily) -> Vec<Vec<Vec<i64>>> {
    family
        .rules()
        .iter()
        .map(|r| r.sites().iter().map(|s| s.coords().to_vec()).collect())
        .collect()
}

/// A random small family: one or two rules, one or two sites each, with
/// coordinates in `[-2, 2]^d` away from the origin.
pub fn random_family(rng: &mut ChaCha8Rng, d: usize) -> UpdateFamily {
    loop {
        let rule_count = rng.gen_range(1..=2);
        let rules: Vec<Vec<Site>> = (0..rule_count)
            .map(|_| {
                let site_count = rng.gen_range(1..=2);
                (0..site_count)
                    .map(|_| loop {
                        let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
                        if coords.iter().any(|&c| c != 0) {
                            return Site(coords);
                        }
                    })
                    .collect()
            })
            .collect();
        if let Ok(fam) = UpdateFamily::new(d, rules) {
            return fam;
        }
    }
}
