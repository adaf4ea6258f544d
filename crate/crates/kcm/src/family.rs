//! Update families on `Z^d`: validation, interaction range, stable
//! directions, and the supercritical-unrooted classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arcs;
use crate::basis::AdaptedBasis;
use crate::{Error, Result};

/// A lattice site in `Z^d`, identified by its integer coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site(pub Vec<i64>);

impl Site {
    pub fn origin(d: usize) -> Site {
        Site(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise translation `self + by`.
    pub fn translated(&self, by: &Site) -> Site {
        debug_assert_eq!(self.dim(), by.dim());
        Site(self.0.iter().zip(&by.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<i64>> for Site {
    fn from(coords: Vec<i64>) -> Self {
        Site(coords)
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One update rule: a finite nonempty set of sites, none of them the origin.
///
/// Sites are kept sorted and deduplicated so equal rules compare equal.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct UpdateRule {
    sites: Vec<Site>,
}

impl UpdateRule {
    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// An update family: the dimension together with a nonempty list of rules.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UpdateFamily {
    d: usize,
    rules: Vec<UpdateRule>,
}

impl UpdateFamily {
    /// Validates and builds a family from per-rule site lists.
    pub fn new(d: usize, rule_sites: Vec<Vec<Site>>) -> Result<Self> {
        if rule_sites.is_empty() {
            return Err(Error::NoRules);
        }
        let mut rules = Vec::with_capacity(rule_sites.len());
        for (index, mut sites) in rule_sites.into_iter().enumerate() {
            if sites.is_empty() {
                return Err(Error::EmptyRule { index });
            }
            for s in &sites {
                if s.dim() != d {
                    return Err(Error::RuleDimensionMismatch {
                        index,
                        expected: d,
                        got: s.dim(),
                    });
                }
                if s.is_origin() {
                    return Err(Error::RuleContainsOrigin { index });
                }
            }
            sites.sort();
            sites.dedup();
            rules.push(UpdateRule { sites });
        }
        Ok(UpdateFamily { d, rules })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rules(&self) -> &[UpdateRule] {
        &self.rules
    }

    /// Interaction range in the canonical lattice coordinates.
    pub fn range(&self) -> i64 {
        range(self, None)
    }
}

/// On-disk form of a family: `{"d": 1, "rules": [[[-1]]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub d: usize,
    pub rules: Vec<Vec<Vec<i64>>>,
}

impl FamilyFile {
    pub fn build(&self) -> Result<UpdateFamily> {
        validate_family(self.d, &self.rules)
    }
}

impl From<&UpdateFamily> for FamilyFile {
    fn from(fam: &UpdateFamily) -> Self {
        FamilyFile {
            d: fam.d,
            rules: fam
                .rules
                .iter()
                .map(|r| r.sites.iter().map(|s| s.0.clone()).collect())
                .collect(),
        }
    }
}

/// Validates raw rule lists into an [`UpdateFamily`].
pub fn validate_family(d: usize, rules: &[Vec<Vec<i64>>]) -> Result<UpdateFamily> {
    UpdateFamily::new(
        d,
        rules
            .iter()
            .map(|r| r.iter().map(|c| Site(c.clone())).collect())
            .collect(),
    )
}

/// A direction of `Z^d`, stored as the primitive integer vector of its ray.
///
/// Two vectors that differ by a positive scaling denote the same direction
/// and normalize to the same representative; `u` and `-u` stay distinct.
/// Serializes as the bare coordinate array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    vec: Vec<i64>,
}

impl Serialize for Direction {
    fn serialize<S>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        self.vec.serialize(serializer)
    }
}

impl Direction {
    pub fn new(vec: Vec<i64>) -> Result<Self> {
        let mut g: i64 = 0;
        for &c in &vec {
            g = gcd(g, c.abs());
        }
        if g == 0 {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction {
            vec: vec.into_iter().map(|c| c / g).collect(),
        })
    }

    pub fn vec(&self) -> &[i64] {
        &self.vec
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn negated(&self) -> Direction {
        Direction {
            vec: self.vec.iter().map(|c| -c).collect(),
        }
    }

    /// Exact inner product with a lattice site.
    pub fn dot(&self, s: &Site) -> i128 {
        debug_assert_eq!(self.dim(), s.dim());
        self.vec
            .iter()
            .zip(&s.0)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let vec = Vec::<i64>::deserialize(deserializer)?;
        Direction::new(vec).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.vec.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Interaction range: the largest `‖x-y‖_∞` over `x, y ∈ X ∪ {0}` across all
/// rules `X`, measured in the adapted coordinates when a basis is supplied
/// (rounded up to an integer there).
pub fn range(family: &UpdateFamily, basis: Option<&AdaptedBasis>) -> i64 {
    match basis {
        None => {
            let mut r: i64 = 1;
            for rule in &family.rules {
                let mut pts: Vec<&[i64]> = rule.sites.iter().map(|s| s.coords()).collect();
                let zero = vec![0i64; family.d];
                pts.push(&zero);
                for i in 0..pts.len() {
                    for j in (i + 1)..pts.len() {
                        let dist = pts[i]
                            .iter()
                            .zip(pts[j])
                            .map(|(a, b)| (a - b).abs())
                            .max()
                            .unwrap_or(0);
                        r = r.max(dist);
                    }
                }
            }
            r
        }
        Some(b) => {
            assert_eq!(b.dim(), family.d, "basis dimension must match the family");
            use crate::basis::Rational;
            let mut r = Rational::from_integer(1);
            for rule in &family.rules {
                let mut pts: Vec<Vec<Rational>> = rule
                    .sites
                    .iter()
                    .map(|s| b.to_coords(s).expect("dimension checked"))
                    .collect();
                pts.push(vec![Rational::from_integer(0); family.d]);
                for i in 0..pts.len() {
                    for j in (i + 1)..pts.len() {
                        for k in 0..family.d {
                            let diff = pts[i][k] - pts[j][k];
                            let diff = if diff < Rational::from_integer(0) { -diff } else { diff };
                            if diff > r {
                                r = diff;
                            }
                        }
                    }
                }
            }
            let ceil = r.ceil().to_integer();
            i64::try_from(ceil).expect("range fits in i64")
        }
    }
}

/// Whether `u` is a stable direction: no rule lies entirely inside the open
/// half-space `{x : <x,u> < 0}`.
pub fn is_stable(family: &UpdateFamily, u: &Direction) -> Result<bool> {
    if u.dim() != family.d {
        return Err(Error::DimensionMismatch {
            expected: family.d,
            got: u.dim(),
        });
    }
    Ok(!family
        .rules
        .iter()
        .any(|rule| rule.sites.iter().all(|x| u.dot(x) < 0)))
}

/// The stable subset of `{+1, -1}` for a one-dimensional family, with `-1`
/// listed first when both are stable.
pub fn stable_set_1d(family: &UpdateFamily) -> Result<Vec<Direction>> {
    if family.d != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: family.d,
        });
    }
    let minus = Direction::new(vec![-1]).unwrap();
    let plus = Direction::new(vec![1]).unwrap();
    let mut out = Vec::new();
    if is_stable(family, &minus)? {
        out.push(minus);
    }
    if is_stable(family, &plus)? {
        out.push(plus);
    }
    Ok(out)
}

/// Outcome of [`classify`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Classification {
    /// All stable directions fit inside one linear hyperplane.
    SupercriticalUnrooted,
    NotSupercriticalUnrooted,
    /// `d >= 3` and no witness was found within the search bound.
    Undecided,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::SupercriticalUnrooted => "SupercriticalUnrooted",
            Classification::NotSupercriticalUnrooted => "NotSupercriticalUnrooted",
            Classification::Undecided => "Undecided",
        };
        f.write_str(s)
    }
}

/// Default `‖·‖_∞` bound for the stable-direction search in `d >= 3`.
pub const DEFAULT_DIRECTION_SEARCH_BOUND: i64 = 5;

/// Decides whether the stable directions fit inside a linear hyperplane.
///
/// Exact for `d <= 2`. For `d >= 3` the verdict is
/// [`Classification::NotSupercriticalUnrooted`] once `d` linearly independent
/// stable directions are found (from `hints` or a bounded search over
/// primitive vectors), and [`Classification::Undecided`] otherwise:
/// unrootedness is never asserted automatically in higher dimension.
pub fn classify(family: &UpdateFamily, hints: &[Direction]) -> Classification {
    classify_with_bound(family, hints, DEFAULT_DIRECTION_SEARCH_BOUND)
}

pub fn classify_with_bound(
    family: &UpdateFamily,
    hints: &[Direction],
    max_norm: i64,
) -> Classification {
    match family.d {
        1 => {
            // The only linear hyperplane of R^1 is {0}, which contains no
            // direction at all.
            if stable_set_1d(family).expect("d = 1").is_empty() {
                Classification::SupercriticalUnrooted
            } else {
                Classification::NotSupercriticalUnrooted
            }
        }
        2 => {
            let arcs = arcs::stable_arcs_2d(family).expect("d = 2");
            if arcs.line_confined() {
                Classification::SupercriticalUnrooted
            } else {
                Classification::NotSupercriticalUnrooted
            }
        }
        d => {
            let mut indep = IndependentSet::new(d);
            for h in hints {
                if h.dim() == d && is_stable(family, h).expect("dimension checked") {
                    indep.try_insert(h.vec());
                }
            }
            if indep.len() < d {
                for v in primitive_vectors(d, max_norm) {
                    let dir = Direction { vec: v };
                    if is_stable(family, &dir).expect("dimension checked") {
                        indep.try_insert(dir.vec());
                        if indep.len() == d {
                            break;
                        }
                    }
                }
            }
            if indep.len() == d {
                Classification::NotSupercriticalUnrooted
            } else {
                Classification::Undecided
            }
        }
    }
}

/// Searches for `d` linearly independent stable directions.
///
/// An absent result means the search failed, not that no such set exists.
pub fn find_spanning_stable_directions(family: &UpdateFamily) -> Option<Vec<Direction>> {
    find_spanning_stable_directions_bounded(family, DEFAULT_DIRECTION_SEARCH_BOUND)
}

pub fn find_spanning_stable_directions_bounded(
    family: &UpdateFamily,
    max_norm: i64,
) -> Option<Vec<Direction>> {
    match family.d {
        1 => {
            let stable = stable_set_1d(family).expect("d = 1");
            stable.into_iter().next().map(|u| vec![u])
        }
        2 => {
            let candidates = arcs::stable_direction_samples(family).expect("d = 2");
            let mut indep = IndependentSet::new(2);
            let mut picked = Vec::new();
            for c in candidates {
                if indep.try_insert(c.vec()) {
                    picked.push(c);
                    if picked.len() == 2 {
                        return Some(picked);
                    }
                }
            }
            None
        }
        d => {
            let mut indep = IndependentSet::new(d);
            let mut picked = Vec::new();
            for v in primitive_vectors(d, max_norm) {
                let dir = Direction { vec: v };
                if is_stable(family, &dir).expect("dimension checked") && indep.try_insert(dir.vec())
                {
                    picked.push(dir);
                    if picked.len() == d {
                        return Some(picked);
                    }
                }
            }
            None
        }
    }
}

/// All primitive integer vectors of `Z^d` with `‖·‖_∞ <= bound`, one per ray.
pub(crate) fn primitive_vectors(d: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; d];
    'outer: loop {
        let mut g = 0i64;
        for &c in &cur {
            g = gcd(g, c);
        }
        if g == 1 {
            out.push(cur.clone());
        }
        for i in (0..d).rev() {
            if cur[i] < bound {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -bound;
                }
                continue 'outer;
            }
        }
        break;
    }
    out
}

/// Incremental exact rank tracking via fraction-free elimination.
pub(crate) struct IndependentSet {
    d: usize,
    rows: Vec<Vec<i128>>,
}

impl IndependentSet {
    pub(crate) fn new(d: usize) -> Self {
        IndependentSet { d, rows: Vec::new() }
    }

    pub(crate) fn len(&self) -> usize {
        self.rows.len()
    }

    /// Returns true (and keeps the vector) when it increases the rank.
    pub(crate) fn try_insert(&mut self, v: &[i64]) -> bool {
        debug_assert_eq!(v.len(), self.d);
        let mut row: Vec<i128> = v.iter().map(|&c| c as i128).collect();
        for prev in &self.rows {
            let lead = prev.iter().position(|&c| c != 0).expect("nonzero row");
            if row[lead] != 0 {
                let (a, b) = (prev[lead], row[lead]);
                for k in 0..self.d {
                    row[k] = row[k] * a - prev[k] * b;
                }
            }
        }
        if row.iter().all(|&c| c == 0) {
            return false;
        }
        self.rows.push(row);
        // Keep rows ordered by leading column so elimination stays triangular.
        self.rows
            .sort_by_key(|r| r.iter().position(|&c| c != 0).unwrap_or(self.d));
        true
    }
}
