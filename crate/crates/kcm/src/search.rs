//! Exact reachability under a zero budget: the breadth-first closure of the
//! legal-move relation restricted to at most `n` zeroes, started from the
//! all-ones configuration.
//!
//! The engine is level-synchronous: each frontier is expanded (in parallel
//! when the `parallel` feature is enabled and more than one worker is
//! allowed), and the results are merged into the visited set in a fixed
//! order. Verdicts, state counts, and frontier statistics are therefore
//! identical for any worker count; certificates may differ between runs but
//! always replay.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::dynamics::{legal_flip, words_for, BoundaryMode, Configuration};
use crate::family::{Site, UpdateFamily};
use crate::lattice::{Domain, DomainSpec};
use crate::{Error, Result};

/// Environment variable overriding the default visited-state cap.
pub const MAX_STATES_ENV: &str = "KCM_MAX_STATES";

const DEFAULT_MAX_STATES: usize = 1 << 26;

/// Levels whose total site-check count falls below this are expanded
/// sequentially; the per-state work is too small for fork/join to pay off.
#[cfg(feature = "parallel")]
const PARALLEL_EXPAND_MIN_CHECKS: usize = 1 << 14;

/// Resource limits for [`explore`]. Hitting a cap yields a truncated report,
/// never a wrong verdict.
#[derive(Clone, Debug)]
pub struct SearchCaps {
    /// Maximum number of visited states before truncation.
    pub max_states: usize,
    /// Worker threads for frontier expansion: 0 = all available, 1 = strictly
    /// sequential. Ignored when the `parallel` feature is disabled.
    pub workers: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        let max_states = std::env::var(MAX_STATES_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_MAX_STATES);
        SearchCaps {
            max_states,
            workers: 0,
        }
    }
}

impl SearchCaps {
    pub fn with_workers(workers: usize) -> Self {
        SearchCaps {
            workers,
            ..SearchCaps::default()
        }
    }
}

/// Word count stored without a heap allocation (domains up to 256 sites).
const INLINE_WORDS: usize = 4;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum KeyRepr {
    Inline { len: u8, words: [u64; INLINE_WORDS] },
    Heap(Box<[u64]>),
}

/// Canonical bit-packed encoding of a configuration's zero set over the
/// domain's fixed site enumeration. Injective per domain; keys for domains
/// up to 256 sites are stored inline.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StateKey(KeyRepr);

impl StateKey {
    fn from_word_slice(words: &[u64]) -> StateKey {
        if words.len() <= INLINE_WORDS {
            let mut inline = [0u64; INLINE_WORDS];
            inline[..words.len()].copy_from_slice(words);
            StateKey(KeyRepr::Inline {
                len: words.len() as u8,
                words: inline,
            })
        } else {
            StateKey(KeyRepr::Heap(words.to_vec().into_boxed_slice()))
        }
    }

    pub fn all_ones(domain: &Domain) -> StateKey {
        StateKey::from_word_slice(&vec![0u64; words_for(domain.len())])
    }

    pub fn from_configuration(cfg: &Configuration) -> StateKey {
        StateKey::from_word_slice(cfg.words())
    }

    pub fn to_configuration(
        &self,
        domain: Arc<Domain>,
        boundary: BoundaryMode,
    ) -> Configuration {
        Configuration::from_words(domain, boundary, self.words().to_vec())
    }

    pub fn bit(&self, idx: usize) -> bool {
        self.words()[idx >> 6] & (1u64 << (idx & 63)) != 0
    }

    pub fn toggled(&self, idx: usize) -> StateKey {
        let mut next = self.clone();
        match &mut next.0 {
            KeyRepr::Inline { words, .. } => words[idx >> 6] ^= 1u64 << (idx & 63),
            KeyRepr::Heap(words) => words[idx >> 6] ^= 1u64 << (idx & 63),
        }
        next
    }

    pub fn zero_count(&self) -> u32 {
        self.words().iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_all_ones(&self) -> bool {
        self.words().iter().all(|&w| w == 0)
    }

    pub fn zero_sites(&self, domain: &Domain) -> Vec<Site> {
        (0..domain.len())
            .filter(|&i| self.bit(i))
            .map(|i| domain.site(i).clone())
            .collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        match &self.0 {
            KeyRepr::Inline { len, words } => &words[..*len as usize],
            KeyRepr::Heap(words) => words,
        }
    }
}

/// Precomputed legality checks: for every (site, rule) pair, the in-domain
/// indices of the translated rule and whether it sticks out of the domain.
struct FlipTable {
    rules_per_site: usize,
    checks: Vec<RuleCheck>,
}

struct RuleCheck {
    inside: Box<[u32]>,
    touches_outside: bool,
}

impl FlipTable {
    fn build(family: &UpdateFamily, domain: &Domain) -> FlipTable {
        let m = family.rules().len();
        let mut checks = Vec::with_capacity(domain.len() * m);
        for site in domain.sites() {
            for rule in family.rules() {
                let mut inside = Vec::with_capacity(rule.len());
                let mut touches_outside = false;
                for x in rule.sites() {
                    match domain.index_of(&site.translated(x)) {
                        Some(idx) => inside.push(idx as u32),
                        None => touches_outside = true,
                    }
                }
                checks.push(RuleCheck {
                    inside: inside.into_boxed_slice(),
                    touches_outside,
                });
            }
        }
        FlipTable {
            rules_per_site: m,
            checks,
        }
    }

    #[inline]
    fn legal(&self, words: &StateKey, site_idx: usize, outside_zero: bool) -> bool {
        let base = site_idx * self.rules_per_site;
        self.checks[base..base + self.rules_per_site].iter().any(|check| {
            (outside_zero || !check.touches_outside)
                && check.inside.iter().all(|&i| words.bit(i as usize))
        })
    }
}

/// An explicit flip sequence witnessing reachability, replayable on its own.
///
/// `start` lists the zeroes of the initial configuration; an empty list (the
/// serialized default) means the all-ones configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub domain: DomainSpec,
    pub boundary: BoundaryMode,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub start: Vec<Site>,
    pub flips: Vec<Site>,
}

/// Result of an [`explore`] call.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub reached_target: bool,
    pub states_visited: u64,
    pub max_frontier: u64,
    pub v_n_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PathCertificate>,
    pub truncated: bool,
}

/// Predicate selecting target configurations.
pub type Target<'a> = &'a (dyn Fn(&Configuration) -> bool + Sync);

/// Shard count for the partitioned visited set. Keys are assigned by a fixed
/// hash of their packed words, so the partition is stable across runs.
const SHARDS: usize = 32;

/// Successor lists below this size are merged without forking.
#[cfg(feature = "parallel")]
const PARALLEL_MERGE_MIN: usize = 2048;

fn shard_of(key: &StateKey) -> usize {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &w in key.words() {
        h = (h ^ w).wrapping_mul(0x0100_0000_01b3);
    }
    (h >> 32) as usize % SHARDS
}

/// Multiplicative word-at-a-time hasher for the hot visited sets. Keys are
/// packed words, so there is no need for a byte-oriented hash.
#[derive(Default, Clone)]
struct FxHasher(u64);

impl FxHasher {
    #[inline]
    fn add(&mut self, word: u64) {
        self.0 = (self.0.rotate_left(5) ^ word).wrapping_mul(0x517c_c1b7_2722_0a95);
    }
}

impl std::hash::Hasher for FxHasher {
    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }

    #[inline]
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.add(b as u64);
        }
    }

    #[inline]
    fn write_u8(&mut self, n: u8) {
        self.add(n as u64);
    }

    #[inline]
    fn write_u32(&mut self, n: u32) {
        self.add(n as u64);
    }

    #[inline]
    fn write_u64(&mut self, n: u64) {
        self.add(n);
    }

    #[inline]
    fn write_usize(&mut self, n: usize) {
        self.add(n as u64);
    }
}

type FxBuild = std::hash::BuildHasherDefault<FxHasher>;

/// One partition of the visited set, with the parent links for the keys it
/// owns.
#[derive(Default)]
struct Shard {
    seen: HashSet<StateKey, FxBuild>,
    parents: HashMap<StateKey, (StateKey, u32), FxBuild>,
}

/// A successor produced while expanding one level: flip site, resulting key,
/// its zero count, the frontier position of its parent, and the shard that
/// owns the key.
struct Edge {
    parent_pos: u32,
    site_idx: u32,
    shard: u8,
    key: StateKey,
    zeros: u32,
}

/// What one shard accepted from a level: positions into the flat successor
/// list, in increasing order, plus the earliest target hit it saw.
struct ShardAccept {
    positions: Vec<u32>,
    hit: Option<u32>,
}

struct Engine<'a> {
    domain: Arc<Domain>,
    table: FlipTable,
    budget: u32,
    outside_zero: bool,
    boundary: BoundaryMode,
    target: Option<Target<'a>>,
    caps: &'a SearchCaps,
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

struct BfsOutcome {
    shards: Vec<Shard>,
    visited_total: u64,
    hit: Option<StateKey>,
    max_frontier: u64,
    truncated: bool,
}

impl BfsOutcome {
    fn parent_of(&self, key: &StateKey) -> Option<&(StateKey, u32)> {
        self.shards[shard_of(key)].parents.get(key)
    }

    fn into_states(self) -> Vec<StateKey> {
        let mut states: Vec<StateKey> = self
            .shards
            .into_iter()
            .flat_map(|s| s.seen.into_iter())
            .collect();
        states.sort();
        states
    }
}

impl<'a> Engine<'a> {
    #[cfg(feature = "parallel")]
    fn install<T: Send>(&self, work: impl FnOnce() -> T + Send) -> T {
        match &self.pool {
            Some(pool) => pool.install(work),
            None => work(),
        }
    }

    fn expand(&self, parent_pos: usize, entry: &(StateKey, u32)) -> Vec<Edge> {
        let (key, zeros) = entry;
        let mut out = Vec::new();
        for idx in 0..self.domain.len() {
            let is_zero = key.bit(idx);
            let next_zeros = if is_zero {
                zeros - 1
            } else {
                if zeros + 1 > self.budget {
                    continue;
                }
                zeros + 1
            };
            if self.table.legal(key, idx, self.outside_zero) {
                let key = key.toggled(idx);
                out.push(Edge {
                    parent_pos: parent_pos as u32,
                    site_idx: idx as u32,
                    shard: shard_of(&key) as u8,
                    key,
                    zeros: next_zeros,
                });
            }
        }
        out
    }

    /// All successors of the frontier, in frontier order.
    fn expand_level(&self, frontier: &[(StateKey, u32)]) -> Vec<Edge> {
        #[cfg(feature = "parallel")]
        {
            // Forking pays off once the level holds enough site checks.
            let checks = frontier.len().saturating_mul(self.domain.len());
            if self.caps.workers != 1 && checks >= PARALLEL_EXPAND_MIN_CHECKS {
                return self.install(|| {
                    frontier
                        .par_iter()
                        .enumerate()
                        .flat_map_iter(|(pos, e)| self.expand(pos, e))
                        .collect()
                });
            }
        }
        frontier
            .iter()
            .enumerate()
            .flat_map(|(pos, e)| self.expand(pos, e))
            .collect()
    }

    fn matches_target(&self, key: &StateKey) -> bool {
        match self.target {
            Some(pred) => pred(&key.to_configuration(self.domain.clone(), self.boundary)),
            None => false,
        }
    }

    fn accept_into_shard(
        &self,
        shard: &mut Shard,
        my_positions: &[u32],
        edges: &[Edge],
        frontier: &[(StateKey, u32)],
        want_certificate: bool,
    ) -> ShardAccept {
        let mut accept = ShardAccept {
            positions: Vec::new(),
            hit: None,
        };
        for &pos in my_positions {
            let edge = &edges[pos as usize];
            if !shard.seen.insert(edge.key.clone()) {
                continue;
            }
            if want_certificate {
                shard.parents.insert(
                    edge.key.clone(),
                    (frontier[edge.parent_pos as usize].0.clone(), edge.site_idx),
                );
            }
            if accept.hit.is_none() && self.matches_target(&edge.key) {
                accept.hit = Some(pos);
            }
            accept.positions.push(pos);
        }
        accept
    }

    /// Deduplicates a level against the sharded visited set, returning a
    /// bitmap over the successor list, the accepted count, and the earliest
    /// target hit. Each key belongs to exactly one shard and every shard
    /// processes its positions in list order, so all three outputs are
    /// independent of how shards are scheduled.
    fn merge_level(
        &self,
        shards: &mut [Shard],
        edges: &[Edge],
        frontier: &[(StateKey, u32)],
        want_certificate: bool,
    ) -> (Vec<u64>, usize, Option<u32>) {
        let mut by_shard: Vec<Vec<u32>> = vec![Vec::new(); SHARDS];
        for (pos, edge) in edges.iter().enumerate() {
            by_shard[edge.shard as usize].push(pos as u32);
        }

        #[cfg(feature = "parallel")]
        let accepts: Vec<ShardAccept> =
            if self.caps.workers != 1 && edges.len() >= PARALLEL_MERGE_MIN {
                self.install(|| {
                    shards
                        .par_iter_mut()
                        .zip(by_shard.par_iter())
                        .map(|(shard, mine)| {
                            self.accept_into_shard(shard, mine, edges, frontier, want_certificate)
                        })
                        .collect()
                })
            } else {
                shards
                    .iter_mut()
                    .zip(by_shard.iter())
                    .map(|(shard, mine)| {
                        self.accept_into_shard(shard, mine, edges, frontier, want_certificate)
                    })
                    .collect()
            };
        #[cfg(not(feature = "parallel"))]
        let accepts: Vec<ShardAccept> = shards
            .iter_mut()
            .zip(by_shard.iter())
            .map(|(shard, mine)| {
                self.accept_into_shard(shard, mine, edges, frontier, want_certificate)
            })
            .collect();

        let hit = accepts.iter().filter_map(|a| a.hit).min();
        let mut accepted = vec![0u64; edges.len().div_ceil(64)];
        let mut count = 0usize;
        for a in &accepts {
            count += a.positions.len();
            for &pos in &a.positions {
                accepted[(pos >> 6) as usize] |= 1u64 << (pos & 63);
            }
        }
        (accepted, count, hit)
    }

    fn run(&self, want_certificate: bool) -> BfsOutcome {
        let root = StateKey::all_ones(&self.domain);
        let mut shards: Vec<Shard> = (0..SHARDS).map(|_| Shard::default()).collect();
        shards[shard_of(&root)].seen.insert(root.clone());
        let mut visited_total = 1u64;
        let mut max_frontier = 1u64;

        if self.matches_target(&root) {
            return BfsOutcome {
                shards,
                visited_total,
                hit: Some(root),
                max_frontier,
                truncated: false,
            };
        }
        let mut frontier = vec![(root, 0u32)];

        loop {
            let edges = self.expand_level(&frontier);
            let (accepted, count, hit) =
                self.merge_level(&mut shards, &edges, &frontier, want_certificate);
            visited_total += count as u64;
            if let Some(pos) = hit {
                return BfsOutcome {
                    shards,
                    visited_total,
                    hit: Some(edges[pos as usize].key.clone()),
                    max_frontier,
                    truncated: false,
                };
            }
            // Caps apply at level granularity so that truncation points do
            // not depend on the merge schedule.
            if visited_total >= self.caps.max_states as u64 {
                return BfsOutcome {
                    shards,
                    visited_total,
                    hit: None,
                    max_frontier,
                    truncated: true,
                };
            }
            if count == 0 {
                return BfsOutcome {
                    shards,
                    visited_total,
                    hit: None,
                    max_frontier,
                    truncated: false,
                };
            }
            let mut next = Vec::with_capacity(count);
            for (pos, edge) in edges.into_iter().enumerate() {
                if accepted[pos >> 6] & (1u64 << (pos & 63)) != 0 {
                    next.push((edge.key, edge.zeros));
                }
            }
            max_frontier = max_frontier.max(next.len() as u64);
            frontier = next;
        }
    }
}

fn certificate_from(
    outcome: &BfsOutcome,
    domain: &Arc<Domain>,
    boundary: BoundaryMode,
    budget: u32,
) -> Option<PathCertificate> {
    let hit = outcome.hit.as_ref()?;
    let mut flips_rev = Vec::new();
    let mut cur = hit.clone();
    while let Some((parent, site_idx)) = outcome.parent_of(&cur) {
        flips_rev.push(domain.site(*site_idx as usize).clone());
        cur = parent.clone();
    }
    if !cur.is_all_ones() {
        // Parent links were not recorded.
        return None;
    }
    flips_rev.reverse();
    Some(PathCertificate {
        domain: domain.spec(),
        boundary,
        n: budget,
        start: Vec::new(),
        flips: flips_rev,
    })
}

fn run_engine(
    family: &UpdateFamily,
    domain: &Arc<Domain>,
    budget: u32,
    boundary: BoundaryMode,
    target: Option<Target<'_>>,
    want_certificate: bool,
    caps: &SearchCaps,
) -> (SearchReport, BfsOutcome) {
    assert_eq!(
        family.dim(),
        domain.dim(),
        "family and domain dimensions must match"
    );
    let engine = Engine {
        domain: domain.clone(),
        table: FlipTable::build(family, domain),
        budget,
        outside_zero: boundary == BoundaryMode::OutsideAllZero,
        boundary,
        target,
        caps,
        #[cfg(feature = "parallel")]
        pool: (caps.workers > 1)
            .then(|| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(caps.workers)
                    .build()
                    .expect("worker pool")
            }),
    };
    let had_target = engine.target.is_some();
    let outcome = engine.run(want_certificate);
    let certificate = want_certificate
        .then(|| certificate_from(&outcome, domain, boundary, budget))
        .flatten();
    let report = SearchReport {
        reached_target: outcome.hit.is_some(),
        states_visited: outcome.visited_total,
        max_frontier: outcome.max_frontier,
        v_n_size: (!had_target && !outcome.truncated).then_some(outcome.visited_total),
        certificate,
        truncated: outcome.truncated,
    };
    (report, outcome)
}

/// Breadth-first closure of the legal-move relation from the all-ones
/// configuration, restricted to at most `budget` zeroes.
///
/// Without a target (and without truncation) `v_n_size` is the exact number
/// of reachable configurations. With a target, `reached_target` is exact and
/// a certificate is attached when requested.
pub fn explore(
    family: &UpdateFamily,
    domain: &Arc<Domain>,
    budget: u32,
    boundary: BoundaryMode,
    target: Option<Target<'_>>,
    want_certificate: bool,
    caps: &SearchCaps,
) -> SearchReport {
    run_engine(family, domain, budget, boundary, target, want_certificate, caps).0
}

/// Like [`explore`] with no target, but also returns the visited states.
pub fn explore_with_states(
    family: &UpdateFamily,
    domain: &Arc<Domain>,
    budget: u32,
    boundary: BoundaryMode,
    caps: &SearchCaps,
) -> (SearchReport, Vec<StateKey>) {
    let (report, outcome) = run_engine(family, domain, budget, boundary, None, false, caps);
    (report, outcome.into_states())
}

/// Whether some reachable configuration has a zero at the origin.
pub fn origin_reachable(
    family: &UpdateFamily,
    domain: &Arc<Domain>,
    budget: u32,
    boundary: BoundaryMode,
    want_certificate: bool,
    caps: &SearchCaps,
) -> Result<SearchReport> {
    let origin = Site::origin(domain.dim());
    let origin_idx = domain
        .index_of(&origin)
        .ok_or(Error::SiteOutsideDomain { site: origin })?;
    let target = move |cfg: &Configuration| cfg.is_zero_at(origin_idx);
    Ok(explore(
        family,
        domain,
        budget,
        boundary,
        Some(&target),
        want_certificate,
        caps,
    ))
}

/// Result of [`min_zero_budget`].
#[derive(Clone, Debug, Serialize)]
pub struct MinBudgetReport {
    /// Smallest budget reaching the origin, if any at most `n_max`.
    pub budget: Option<u32>,
    /// True when some sub-search truncated, making a `None` unreliable.
    pub truncated: bool,
    pub states_visited: u64,
}

/// Smallest `n <= n_max` for which the origin is reachable.
pub fn min_zero_budget(
    family: &UpdateFamily,
    domain: &Arc<Domain>,
    boundary: BoundaryMode,
    n_max: u32,
    caps: &SearchCaps,
) -> Result<MinBudgetReport> {
    let mut truncated = false;
    let mut states = 0u64;
    for n in 0..=n_max {
        let report = origin_reachable(family, domain, n, boundary, false, caps)?;
        states += report.states_visited;
        truncated |= report.truncated;
        if report.reached_target {
            return Ok(MinBudgetReport {
                budget: Some(n),
                truncated,
                states_visited: states,
            });
        }
    }
    Ok(MinBudgetReport {
        budget: None,
        truncated,
        states_visited: states,
    })
}

/// Verdict of a certificate replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub ok: bool,
    /// Index of the first offending flip (or 0 when the start already breaks
    /// the budget).
    pub failed_at: Option<usize>,
    /// Zeroes of the final configuration when the replay succeeded.
    pub final_zeros: Vec<Site>,
}

/// Replays a certificate with the plain per-move legality check, independent
/// of the search engine's tables.
pub fn verify_certificate(cert: &PathCertificate, family: &UpdateFamily) -> Result<VerifyOutcome> {
    let domain = Arc::new(cert.domain.build()?);
    if family.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: family.dim(),
        });
    }
    let mut cfg = Configuration::with_zeros(domain, cert.boundary, &cert.start)?;
    if cfg.zero_count() > cert.n {
        return Ok(VerifyOutcome {
            ok: false,
            failed_at: Some(0),
            final_zeros: Vec::new(),
        });
    }
    for (step, site) in cert.flips.iter().enumerate() {
        let legal = match legal_flip(&cfg, site, family) {
            Ok(v) => v,
            Err(Error::SiteOutsideDomain { .. }) => false,
            Err(e) => return Err(e),
        };
        if !legal {
            return Ok(VerifyOutcome {
                ok: false,
                failed_at: Some(step),
                final_zeros: Vec::new(),
            });
        }
        cfg = cfg.apply_flip(site).expect("legal flip is inside");
        if cfg.zero_count() > cert.n {
            return Ok(VerifyOutcome {
                ok: false,
                failed_at: Some(step),
                final_zeros: Vec::new(),
            });
        }
    }
    Ok(VerifyOutcome {
        ok: true,
        failed_at: None,
        final_zeros: cfg.zero_sites(),
    })
}

/// The reversed path: starts from the original endpoint and undoes each flip.
/// Reversing twice gives back the original certificate.
pub fn reverse_certificate(cert: &PathCertificate) -> PathCertificate {
    let mut zeros: HashSet<Site> = cert.start.iter().cloned().collect();
    for flip in &cert.flips {
        if !zeros.remove(flip) {
            zeros.insert(flip.clone());
        }
    }
    let mut start: Vec<Site> = zeros.into_iter().collect();
    start.sort();
    let mut flips = cert.flips.clone();
    flips.reverse();
    PathCertificate {
        domain: cert.domain.clone(),
        boundary: cert.boundary,
        n: cert.n,
        start,
        flips,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{east1d, fa1f};
    use crate::lattice::{make_box, BoxSpec};

    fn interval(lo: i64, hi: i64) -> Arc<Domain> {
        Arc::new(make_box(&BoxSpec::interval(lo, hi).unwrap()))
    }

    fn site(c: i64) -> Site {
        Site(vec![c])
    }

    fn caps() -> SearchCaps {
        SearchCaps::default()
    }

    #[test]
    fn east_threshold_examples() {
        let east = east1d();
        let hit = origin_reachable(
            &east,
            &interval(-2, 2),
            2,
            BoundaryMode::OutsideAllZero,
            true,
            &caps(),
        )
        .unwrap();
        assert!(hit.reached_target);
        let cert = hit.certificate.expect("certificate requested");
        let replay = verify_certificate(&cert, &east).unwrap();
        assert!(replay.ok);
        assert!(replay.final_zeros.contains(&site(0)));

        let miss = origin_reachable(
            &east,
            &interval(-3, 3),
            2,
            BoundaryMode::OutsideAllZero,
            false,
            &caps(),
        )
        .unwrap();
        assert!(!miss.reached_target);
        assert!(!miss.truncated);
    }

    #[test]
    fn budget_zero_reaches_only_all_ones() {
        let (report, states) = explore_with_states(
            &fa1f(1),
            &interval(-3, 3),
            0,
            BoundaryMode::OutsideAllZero,
            &caps(),
        );
        assert_eq!(report.v_n_size, Some(1));
        assert_eq!(states.len(), 1);
        assert!(states[0].is_all_ones());
    }

    #[test]
    fn tiny_east_counts_by_hand() {
        // Λ = {0, 1}: with one zero only {} and {0} are reachable; with two
        // zeroes every configuration is.
        let east = east1d();
        let dom = interval(0, 1);
        let (r1, _) = explore_with_states(&east, &dom, 1, BoundaryMode::OutsideAllZero, &caps());
        assert_eq!(r1.v_n_size, Some(2));
        let (r2, _) = explore_with_states(&east, &dom, 2, BoundaryMode::OutsideAllZero, &caps());
        assert_eq!(r2.v_n_size, Some(4));
    }

    #[test]
    fn min_budget_examples() {
        let east = east1d();
        let m = min_zero_budget(&east, &interval(-2, 2), BoundaryMode::OutsideAllZero, 4, &caps())
            .unwrap();
        assert_eq!(m.budget, Some(2));
        let m = min_zero_budget(&east, &interval(0, 0), BoundaryMode::OutsideAllZero, 4, &caps())
            .unwrap();
        assert_eq!(m.budget, Some(1));
        let m = min_zero_budget(
            &fa1f(1),
            &interval(-10, 10),
            BoundaryMode::OutsideAllZero,
            4,
            &caps(),
        )
        .unwrap();
        assert_eq!(m.budget, Some(2));
    }

    #[test]
    fn truncation_is_reported() {
        let caps = SearchCaps {
            max_states: 3,
            workers: 1,
        };
        let report = explore(
            &fa1f(1),
            &interval(-5, 5),
            2,
            BoundaryMode::OutsideAllZero,
            None,
            false,
            &caps,
        );
        assert!(report.truncated);
        assert_eq!(report.v_n_size, None);
        assert_eq!(report.states_visited, 3);
    }

    #[test]
    fn interior_first_flip_fails_verification() {
        let east = east1d();
        let cert = PathCertificate {
            domain: DomainSpec::Bounds {
                lo: vec![-2],
                hi: vec![2],
            },
            boundary: BoundaryMode::OutsideAllZero,
            n: 2,
            start: Vec::new(),
            flips: vec![site(0)],
        };
        let outcome = verify_certificate(&cert, &east).unwrap();
        assert!(!outcome.ok);
        assert_eq!(outcome.failed_at, Some(0));
    }

    #[test]
    fn budget_violation_fails_at_the_right_step() {
        let fam = fa1f(1);
        let cert = PathCertificate {
            domain: DomainSpec::Bounds {
                lo: vec![-3],
                hi: vec![3],
            },
            boundary: BoundaryMode::OutsideAllZero,
            n: 1,
            start: Vec::new(),
            flips: vec![site(-3), site(-2)],
        };
        let outcome = verify_certificate(&cert, &fam).unwrap();
        assert!(!outcome.ok);
        assert_eq!(outcome.failed_at, Some(1));
    }

    #[test]
    fn reversal_is_an_involution_and_replays() {
        let east = east1d();
        let report = origin_reachable(
            &east,
            &interval(-2, 2),
            2,
            BoundaryMode::OutsideAllZero,
            true,
            &caps(),
        )
        .unwrap();
        let cert = report.certificate.unwrap();
        let rev = reverse_certificate(&cert);
        let replay = verify_certificate(&rev, &east).unwrap();
        assert!(replay.ok, "reversed path must replay");
        assert!(replay.final_zeros.is_empty(), "reverse ends at all-ones");
        assert_eq!(reverse_certificate(&rev), cert);

        let empty = PathCertificate {
            domain: DomainSpec::Bounds {
                lo: vec![0],
                hi: vec![0],
            },
            boundary: BoundaryMode::OutsideAllZero,
            n: 0,
            start: Vec::new(),
            flips: Vec::new(),
        };
        assert_eq!(reverse_certificate(&empty), empty);
    }

    #[test]
    fn state_key_roundtrip() {
        let dom = interval(-3, 3);
        let cfg = Configuration::with_zeros(
            dom.clone(),
            BoundaryMode::OutsideAllZero,
            &[site(-1), site(2)],
        )
        .unwrap();
        let key = StateKey::from_configuration(&cfg);
        assert_eq!(key.zero_count(), 2);
        let back = key.to_configuration(dom, BoundaryMode::OutsideAllZero);
        assert_eq!(back, cfg);
        assert_eq!(key.zero_sites(back.domain()), vec![site(-1), site(2)]);
    }

    #[test]
    fn certificate_json_schema() {
        let cert = PathCertificate {
            domain: DomainSpec::Bounds {
                lo: vec![-2],
                hi: vec![2],
            },
            boundary: BoundaryMode::OutsideAllZero,
            n: 2,
            start: Vec::new(),
            flips: vec![site(-2), site(-1)],
        };
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(
            json,
            r#"{"domain":{"lo":[-2],"hi":[2]},"boundary":"zero","n":2,"flips":[[-2],[-1]]}"#
        );
        let back: PathCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }
}
