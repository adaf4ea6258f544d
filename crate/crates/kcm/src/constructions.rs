//! Built-in families, the closed-form East threshold, and the constructive
//! zero-interval walk for one-dimensional unrooted families.

use std::sync::Arc;

use crate::dynamics::BoundaryMode;
use crate::family::{classify, range, validate_family, Classification, Site, UpdateFamily};
use crate::lattice::Domain;
use crate::search::PathCertificate;
use crate::{Error, Result};

/// East model: a site may flip when its left neighbour is at zero.
pub fn east1d() -> UpdateFamily {
    validate_family(1, &[vec![vec![-1]]]).expect("static family")
}

/// Fredrickson-Andersen one-spin-facilitated model in dimension `d`: any
/// nearest neighbour at zero enables a flip.
pub fn fa1f(d: usize) -> UpdateFamily {
    assert!(d >= 1);
    let mut rules = Vec::with_capacity(2 * d);
    for axis in 0..d {
        for sign in [1i64, -1] {
            let mut coords = vec![0i64; d];
            coords[axis] = sign;
            rules.push(vec![coords]);
        }
    }
    validate_family(d, &rules).expect("static family")
}

/// Two-dimensional East: only the left neighbour counts.
pub fn east2d() -> UpdateFamily {
    validate_family(2, &[vec![vec![-1, 0]]]).expect("static family")
}

/// Rooted corner family: the left neighbour or the bottom neighbour.
pub fn rooted_corner_2d() -> UpdateFamily {
    validate_family(2, &[vec![vec![-1, 0]], vec![vec![0, -1]]]).expect("static family")
}

/// A named built-in family.
#[derive(Clone, Debug)]
pub struct BuiltinFamily {
    pub name: String,
    pub family: UpdateFamily,
}

/// Resolves a built-in family by name: `east1d`, `fa1f<d>` (e.g. `fa1f2`),
/// `east2d`, or `rooted_corner_2d`.
pub fn builtin(name: &str) -> Option<UpdateFamily> {
    match name {
        "east1d" => Some(east1d()),
        "east2d" => Some(east2d()),
        "rooted_corner_2d" => Some(rooted_corner_2d()),
        _ => {
            let d: usize = name.strip_prefix("fa1f")?.parse().ok()?;
            (1..=8).contains(&d).then(|| fa1f(d))
        }
    }
}

/// The standard built-ins, for listings and the verification harness.
pub fn builtins() -> Vec<BuiltinFamily> {
    ["east1d", "fa1f1", "fa1f2", "east2d", "rooted_corner_2d"]
        .iter()
        .map(|name| BuiltinFamily {
            name: name.to_string(),
            family: builtin(name).expect("static name"),
        })
        .collect()
}

/// The East reachability threshold for centered boxes: with `n` zeroes the
/// origin of `{-N, ..., N}` is reachable exactly when `N <= 2^n - 2`.
pub fn cdg_threshold(n: u32) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidBudget);
    }
    assert!(n <= 62, "threshold overflows i64");
    Ok((1i64 << n) - 2)
}

/// Constructive walk for supercritical unrooted one-dimensional families: an
/// interval of `r` zeroes enters at the left boundary, slides one site per
/// grow/shrink pair, and stops once the origin is at zero.
///
/// The returned certificate's budget is its exact peak zero count, at most
/// `r + 1`.
pub fn interval_walk_1d(family: &UpdateFamily, domain: &Arc<Domain>) -> Result<PathCertificate> {
    if family.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: family.dim(),
        });
    }
    if classify(family, &[]) != Classification::SupercriticalUnrooted {
        return Err(Error::NotUnrooted);
    }
    if !domain.is_box() || !domain.contains(&Site::origin(1)) {
        return Err(Error::NoContiguousDomain);
    }
    // No stable direction means one rule sits in the positives and one in the
    // negatives; their translates stay inside the sliding interval.
    debug_assert!(family
        .rules()
        .iter()
        .any(|rule| rule.sites().iter().all(|s| s.coords()[0] < 0)));
    debug_assert!(family
        .rules()
        .iter()
        .any(|rule| rule.sites().iter().all(|s| s.coords()[0] > 0)));

    let r = range(family, None);
    let lo = domain.bounds().0[0];
    let mut flips = Vec::new();
    let mut zeros: u32 = 0;
    let mut peak: u32 = 0;

    // Seed up to r zeroes from the left edge; sites left of the domain are
    // zeroes, so each seeding flip is enabled by the all-negative rule.
    let seed_end = (lo + r - 1).min(0);
    for s in lo..=seed_end {
        flips.push(Site(vec![s]));
        zeros += 1;
        peak = peak.max(zeros);
    }
    if seed_end < 0 {
        // Slide right: grow at s (all-negative rule over the interval), then
        // retract the trailing zero at s - r (all-positive rule).
        let mut s = lo + r;
        loop {
            flips.push(Site(vec![s]));
            zeros += 1;
            peak = peak.max(zeros);
            if s == 0 {
                break;
            }
            flips.push(Site(vec![s - r]));
            zeros -= 1;
            s += 1;
        }
    }

    Ok(PathCertificate {
        domain: domain.spec(),
        boundary: BoundaryMode::OutsideAllZero,
        n: peak,
        start: Vec::new(),
        flips,
    })
}
