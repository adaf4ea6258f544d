//! Single-move legality, flips, and the monotone bootstrap closure.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::family::{Site, UpdateFamily};
use crate::lattice::Domain;
use crate::{Error, Result};

/// State assumed for sites outside the domain.
///
/// The default convention treats the outside as all zeroes; the all-ones
/// convention only restricts the set of legal moves.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum BoundaryMode {
    #[serde(rename = "zero")]
    OutsideAllZero,
    #[serde(rename = "one")]
    OutsideAllOne,
}

impl BoundaryMode {
    fn outside_is_zero(self) -> bool {
        self == BoundaryMode::OutsideAllZero
    }
}

/// A `{0,1}`-configuration on a finite domain, stored as the set of zeroes.
///
/// Bit `i` set means site `i` (in the domain's enumeration order) is at zero;
/// the all-ones configuration is the empty bitset. Cloning is cheap and the
/// zero count is maintained incrementally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    domain: Arc<Domain>,
    boundary: BoundaryMode,
    words: Vec<u64>,
    zeros: u32,
}

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl Configuration {
    pub fn all_ones(domain: Arc<Domain>, boundary: BoundaryMode) -> Self {
        let words = vec![0u64; words_for(domain.len())];
        Configuration {
            domain,
            boundary,
            words,
            zeros: 0,
        }
    }

    pub fn with_zeros(
        domain: Arc<Domain>,
        boundary: BoundaryMode,
        zeros: &[Site],
    ) -> Result<Self> {
        let mut cfg = Configuration::all_ones(domain, boundary);
        for s in zeros {
            let idx = cfg
                .domain
                .index_of(s)
                .ok_or_else(|| Error::SiteOutsideDomain { site: s.clone() })?;
            if !cfg.is_zero_at(idx) {
                cfg.toggle_idx(idx);
            }
        }
        Ok(cfg)
    }

    pub(crate) fn from_words(
        domain: Arc<Domain>,
        boundary: BoundaryMode,
        words: Vec<u64>,
    ) -> Self {
        debug_assert_eq!(words.len(), words_for(domain.len()));
        let zeros = words.iter().map(|w| w.count_ones()).sum();
        Configuration {
            domain,
            boundary,
            words,
            zeros,
        }
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn boundary(&self) -> BoundaryMode {
        self.boundary
    }

    pub fn zero_count(&self) -> u32 {
        self.zeros
    }

    pub fn is_all_ones(&self) -> bool {
        self.zeros == 0
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero_at(&self, idx: usize) -> bool {
        self.words[idx >> 6] & (1u64 << (idx & 63)) != 0
    }

    /// State of a site, with the boundary convention applied outside.
    pub fn is_zero(&self, s: &Site) -> bool {
        match self.domain.index_of(s) {
            Some(idx) => self.is_zero_at(idx),
            None => self.boundary.outside_is_zero(),
        }
    }

    pub fn zero_sites(&self) -> Vec<Site> {
        (0..self.domain.len())
            .filter(|&i| self.is_zero_at(i))
            .map(|i| self.domain.site(i).clone())
            .collect()
    }

    pub(crate) fn toggle_idx(&mut self, idx: usize) {
        let word = idx >> 6;
        let mask = 1u64 << (idx & 63);
        if self.words[word] & mask != 0 {
            self.zeros -= 1;
        } else {
            self.zeros += 1;
        }
        self.words[word] ^= mask;
    }

    /// The configuration with the state of `s` flipped. Legality is the
    /// caller's concern.
    pub fn apply_flip(&self, s: &Site) -> Result<Configuration> {
        let idx = self
            .domain
            .index_of(s)
            .ok_or_else(|| Error::SiteOutsideDomain { site: s.clone() })?;
        let mut next = self.clone();
        next.toggle_idx(idx);
        Ok(next)
    }
}

/// Whether flipping `s` is a legal move: some rule, translated to `s`, is
/// entirely at zero under the boundary convention. The condition is the same
/// for both flip directions.
pub fn legal_flip(cfg: &Configuration, s: &Site, family: &UpdateFamily) -> Result<bool> {
    if family.dim() != cfg.domain().dim() {
        return Err(Error::DimensionMismatch {
            expected: cfg.domain().dim(),
            got: family.dim(),
        });
    }
    if !cfg.domain().contains(s) {
        return Err(Error::SiteOutsideDomain { site: s.clone() });
    }
    Ok(family
        .rules()
        .iter()
        .any(|rule| rule.sites().iter().all(|x| cfg.is_zero(&s.translated(x)))))
}

/// Free-function form of [`Configuration::apply_flip`].
pub fn apply_flip(cfg: &Configuration, s: &Site) -> Result<Configuration> {
    cfg.apply_flip(s)
}

/// A monotone infection state on a finite region. Sites outside the region
/// are treated as never infected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BootstrapState {
    region: Arc<Domain>,
    words: Vec<u64>,
    infected: u32,
}

impl BootstrapState {
    pub fn new(region: Arc<Domain>, infected: &[Site]) -> Result<Self> {
        let mut words = vec![0u64; words_for(region.len())];
        let mut count = 0u32;
        for s in infected {
            let idx = region
                .index_of(s)
                .ok_or_else(|| Error::SiteOutsideDomain { site: s.clone() })?;
            let (word, mask) = (idx >> 6, 1u64 << (idx & 63));
            if words[word] & mask == 0 {
                words[word] |= mask;
                count += 1;
            }
        }
        Ok(BootstrapState {
            region,
            words,
            infected: count,
        })
    }

    pub fn region(&self) -> &Arc<Domain> {
        &self.region
    }

    pub fn infected_count(&self) -> u32 {
        self.infected
    }

    pub fn is_infected_at(&self, idx: usize) -> bool {
        self.words[idx >> 6] & (1u64 << (idx & 63)) != 0
    }

    pub fn is_infected(&self, s: &Site) -> bool {
        self.region
            .index_of(s)
            .map(|idx| self.is_infected_at(idx))
            .unwrap_or(false)
    }

    pub fn infected_sites(&self) -> Vec<Site> {
        (0..self.region.len())
            .filter(|&i| self.is_infected_at(i))
            .map(|i| self.region.site(i).clone())
            .collect()
    }

    pub fn is_full(&self) -> bool {
        self.infected as usize == self.region.len()
    }
}

/// One synchronous step: a site joins once some rule translate is entirely
/// infected. Monotone and inflationary.
pub fn bootstrap_step(state: &BootstrapState, family: &UpdateFamily) -> BootstrapState {
    debug_assert_eq!(family.dim(), state.region.dim());
    let mut next = state.clone();
    for idx in 0..state.region.len() {
        if state.is_infected_at(idx) {
            continue;
        }
        let s = state.region.site(idx);
        let fires = family.rules().iter().any(|rule| {
            rule.sites().iter().all(|x| {
                state
                    .region
                    .index_of(&s.translated(x))
                    .map(|j| state.is_infected_at(j))
                    .unwrap_or(false)
            })
        });
        if fires {
            let (word, mask) = (idx >> 6, 1u64 << (idx & 63));
            next.words[word] |= mask;
            next.infected += 1;
        }
    }
    next
}

/// Iterates [`bootstrap_step`] to its fixpoint; returns the closure and the
/// number of productive steps (at most `|region|`).
pub fn bootstrap_closure(state: &BootstrapState, family: &UpdateFamily) -> (BootstrapState, usize) {
    let mut cur = state.clone();
    let mut steps = 0usize;
    loop {
        let next = bootstrap_step(&cur, family);
        if next.infected == cur.infected {
            return (cur, steps);
        }
        cur = next;
        steps += 1;
    }
}

/// The step at which `site` becomes infected in the closure, if it ever does.
pub fn infection_step(state: &BootstrapState, family: &UpdateFamily, site: &Site) -> Option<usize> {
    if state.is_infected(site) {
        return Some(0);
    }
    let mut cur = state.clone();
    let mut step = 0usize;
    loop {
        let next = bootstrap_step(&cur, family);
        if next.infected == cur.infected {
            return None;
        }
        step += 1;
        if next.is_infected(site) {
            return Some(step);
        }
        cur = next;
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

    #[test]
    fn east_boundary_legality() {
        let dom = interval(-2, 2);
        let east = east1d();
        let all_ones = Configuration::all_ones(dom.clone(), BoundaryMode::OutsideAllZero);
        assert!(legal_flip(&all_ones, &site(-2), &east).unwrap());
        assert!(!legal_flip(&all_ones, &site(0), &east).unwrap());

        let restricted = Configuration::all_ones(dom.clone(), BoundaryMode::OutsideAllOne);
        assert!(!legal_flip(&restricted, &site(-2), &east).unwrap());

        let with_zero =
            Configuration::with_zeros(dom, BoundaryMode::OutsideAllZero, &[site(-1)]).unwrap();
        assert!(legal_flip(&with_zero, &site(0), &east).unwrap());
        assert!(!legal_flip(&with_zero, &site(1), &east).unwrap());
    }

    #[test]
    fn legality_errors() {
        let dom = interval(-2, 2);
        let east = east1d();
        let cfg = Configuration::all_ones(dom, BoundaryMode::OutsideAllZero);
        assert_eq!(
            legal_flip(&cfg, &site(7), &east).unwrap_err(),
            Error::SiteOutsideDomain { site: site(7) }
        );
        assert!(matches!(
            legal_flip(&cfg, &site(0), &fa1f(2)).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn flip_is_an_involution() {
        let dom = interval(-2, 2);
        let cfg = Configuration::all_ones(dom, BoundaryMode::OutsideAllZero);
        let once = cfg.apply_flip(&site(1)).unwrap();
        assert_eq!(once.zero_count(), 1);
        assert_eq!(once.zero_sites(), vec![site(1)]);
        let twice = once.apply_flip(&site(1)).unwrap();
        assert_eq!(twice, cfg);

        let two = Configuration::with_zeros(
            cfg.domain().clone(),
            BoundaryMode::OutsideAllZero,
            &[site(-1), site(0)],
        )
        .unwrap();
        let dropped = two.apply_flip(&site(-1)).unwrap();
        assert_eq!(dropped.zero_sites(), vec![site(0)]);
    }

    #[test]
    fn east_bootstrap_grows_rightward_only() {
        let region = interval(0, 5);
        let east = east1d();
        let seed = BootstrapState::new(region.clone(), &[site(0)]).unwrap();
        let one = bootstrap_step(&seed, &east);
        assert_eq!(one.infected_sites(), vec![site(0), site(1)]);
        let (closure, steps) = bootstrap_closure(&seed, &east);
        assert!(closure.is_full());
        assert_eq!(steps, 5);
        assert_eq!(infection_step(&seed, &east, &site(0)), Some(0));
        assert_eq!(infection_step(&seed, &east, &site(5)), Some(5));

        let right_seed = BootstrapState::new(region, &[site(5)]).unwrap();
        let (closure, steps) = bootstrap_closure(&right_seed, &east);
        assert_eq!(closure.infected_sites(), vec![site(5)]);
        assert_eq!(steps, 0);
    }

    #[test]
    fn bootstrap_fixpoints() {
        let region = interval(-3, 3);
        let fam = fa1f(1);
        let empty = BootstrapState::new(region.clone(), &[]).unwrap();
        let (closure, steps) = bootstrap_closure(&empty, &fam);
        assert_eq!(closure.infected_count(), 0);
        assert_eq!(steps, 0);

        let all: Vec<Site> = region.sites().to_vec();
        let full = BootstrapState::new(region.clone(), &all).unwrap();
        let (closure, steps) = bootstrap_closure(&full, &fam);
        assert!(closure.is_full());
        assert_eq!(steps, 0);

        let edge = BootstrapState::new(region, &[site(3)]).unwrap();
        let (closure, _) = bootstrap_closure(&edge, &fam);
        assert!(closure.is_full(), "FA1f spreads in both directions");
    }
}
