//! Finite domains, boxes, and the induction windows `P_n`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::basis::{AdaptedBasis, Rational};
use crate::family::Site;
use crate::{Error, Result};

/// Per-axis closed integer bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl BoxSpec {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        for (axis, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if l > h {
                return Err(Error::EmptyBox { axis, lo: l, hi: h });
            }
        }
        Ok(BoxSpec { lo, hi })
    }

    /// The 1d interval `{lo, ..., hi}`.
    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        BoxSpec::new(vec![lo], vec![hi])
    }

    /// The box `{lo, ..., hi}^d`.
    pub fn hypercube(d: usize, lo: i64, hi: i64) -> Result<Self> {
        BoxSpec::new(vec![lo; d], vec![hi; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn cardinality(&self) -> u128 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| (h - l + 1) as u128)
            .product()
    }
}

/// A finite set of sites with a fixed enumeration order.
///
/// Sites are stored in lexicographic order of their coordinates (row-major
/// over the bounding box), which makes configuration encodings canonical.
#[derive(Debug)]
pub struct Domain {
    d: usize,
    sites: Vec<Site>,
    index: HashMap<Site, u32>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    box_shaped: bool,
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.sites == other.sites
    }
}
impl Eq for Domain {}

impl Domain {
    pub fn from_sites(d: usize, mut sites: Vec<Site>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::EmptyDomain);
        }
        for s in &sites {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: s.dim(),
                });
            }
        }
        sites.sort();
        sites.dedup();
        let mut lo = sites[0].coords().to_vec();
        let mut hi = lo.clone();
        for s in &sites {
            for (axis, &c) in s.coords().iter().enumerate() {
                lo[axis] = lo[axis].min(c);
                hi[axis] = hi[axis].max(c);
            }
        }
        let bbox_card: u128 = lo
            .iter()
            .zip(&hi)
            .map(|(&l, &h)| (h - l + 1) as u128)
            .product();
        let box_shaped = bbox_card == sites.len() as u128;
        let index = sites
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        Ok(Domain {
            d,
            sites,
            index,
            lo,
            hi,
            box_shaped,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site(&self, idx: usize) -> &Site {
        &self.sites[idx]
    }

    pub fn index_of(&self, s: &Site) -> Option<usize> {
        self.index.get(s).map(|&i| i as usize)
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.index.contains_key(s)
    }

    /// Per-axis bounding box (closed bounds).
    pub fn bounds(&self) -> (&[i64], &[i64]) {
        (&self.lo, &self.hi)
    }

    /// Whether the domain is exactly its bounding box.
    pub fn is_box(&self) -> bool {
        self.box_shaped
    }

    pub fn spec(&self) -> DomainSpec {
        if self.box_shaped {
            DomainSpec::Bounds {
                lo: self.lo.clone(),
                hi: self.hi.clone(),
            }
        } else {
            DomainSpec::Sites {
                d: self.d,
                sites: self.sites.clone(),
            }
        }
    }
}

/// Serializable description of a domain: either a box or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Bounds { lo: Vec<i64>, hi: Vec<i64> },
    Sites { d: usize, sites: Vec<Site> },
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        match self {
            DomainSpec::Bounds { lo, hi } => Ok(make_box(&BoxSpec::new(lo.clone(), hi.clone())?)),
            DomainSpec::Sites { d, sites } => Domain::from_sites(*d, sites.clone()),
        }
    }
}

/// All integer sites within the bounds, in enumeration order.
pub fn make_box(spec: &BoxSpec) -> Domain {
    let d = spec.dim();
    let mut sites = Vec::with_capacity(spec.cardinality() as usize);
    let mut cur = spec.lo.clone();
    'outer: loop {
        sites.push(Site(cur.clone()));
        for axis in (0..d).rev() {
            if cur[axis] < spec.hi[axis] {
                cur[axis] += 1;
                for (k, c) in cur.iter_mut().enumerate().skip(axis + 1) {
                    *c = spec.lo[k];
                }
                continue 'outer;
            }
        }
        break;
    }
    Domain::from_sites(d, sites).expect("box bounds validated")
}

/// Window sizes `a_n = r(2^n - 1)` and `b_n = r n 2^(n-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PnSpec {
    pub n: u32,
    pub r: i64,
    pub a: i64,
    pub b: i64,
}

impl PnSpec {
    pub fn new(n: u32, r: i64) -> Self {
        assert!(r >= 1, "range must be positive");
        assert!(n <= 40, "window size overflows i64");
        let a = r * ((1i64 << n) - 1);
        let b = if n == 0 { 0 } else { r * n as i64 * (1i64 << (n - 1)) };
        PnSpec { n, r, a, b }
    }
}

/// The window `P_n`: sites whose coordinates (in the adapted basis when one
/// is supplied) all lie in `[-a_n, b_n]`. Always contains the origin.
pub fn make_pn(n: u32, r: i64, d: usize, basis: Option<&AdaptedBasis>) -> Result<Domain> {
    let spec = PnSpec::new(n, r);
    match basis {
        None => Ok(make_box(
            &BoxSpec::hypercube(d, -spec.a, spec.b).expect("a_n, b_n >= 0"),
        )),
        Some(basis) if basis.is_identity() => {
            if basis.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: basis.dim(),
                });
            }
            Ok(make_box(
                &BoxSpec::hypercube(d, -spec.a, spec.b).expect("a_n, b_n >= 0"),
            ))
        }
        Some(basis) => {
            if basis.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: basis.dim(),
                });
            }
            // Lattice bounding box of the parallelotope V · [-a, b]^d.
            let mut lo = vec![0i64; d];
            let mut hi = vec![0i64; d];
            for axis in 0..d {
                let mut min_sum = 0i128;
                let mut max_sum = 0i128;
                for i in 0..d {
                    let v = basis.column(i)[axis];
                    let at_lo = v * (-spec.a) as i128;
                    let at_hi = v * spec.b as i128;
                    min_sum += at_lo.min(at_hi);
                    max_sum += at_lo.max(at_hi);
                }
                lo[axis] = i64::try_from(min_sum).expect("window fits in i64");
                hi[axis] = i64::try_from(max_sum).expect("window fits in i64");
            }
            let bbox = make_box(&BoxSpec::new(lo, hi)?);
            let lo_r = Rational::from_integer(-spec.a as i128);
            let hi_r = Rational::from_integer(spec.b as i128);
            let sites: Vec<Site> = bbox
                .sites()
                .iter()
                .filter(|s| {
                    basis
                        .to_coords(s)
                        .expect("dimension checked")
                        .iter()
                        .all(|c| *c >= lo_r && *c <= hi_r)
                })
                .cloned()
                .collect();
            Domain::from_sites(d, sites)
        }
    }
}

/// Exact coordinates of a site in an adapted basis.
pub fn to_basis_coords(s: &Site, basis: &AdaptedBasis) -> Result<Vec<Rational>> {
    basis.to_coords(s)
}

/// Inverse of [`to_basis_coords`], returned as exact rationals.
pub fn from_basis_coords(coords: &[Rational], basis: &AdaptedBasis) -> Result<Vec<Rational>> {
    basis.from_coords(coords)
}

/// Shared handle used by configurations and the search engine.
pub type DomainRef = Arc<Domain>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::construct_basis;
    use crate::family::Direction;

    #[test]
    fn box_cardinalities() {
        let d1 = make_box(&BoxSpec::interval(-2, 2).unwrap());
        assert_eq!(d1.len(), 5);
        let d2 = make_box(&BoxSpec::hypercube(2, -1, 1).unwrap());
        assert_eq!(d2.len(), 9);
        assert!(d2.is_box());
        assert_eq!(
            BoxSpec::interval(1, 0).unwrap_err(),
            Error::EmptyBox { axis: 0, lo: 1, hi: 0 }
        );
    }

    #[test]
    fn enumeration_is_row_major() {
        let d = make_box(&BoxSpec::new(vec![0, 0], vec![1, 2]).unwrap());
        let coords: Vec<Vec<i64>> = d.sites().iter().map(|s| s.coords().to_vec()).collect();
        assert_eq!(
            coords,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
        for (i, s) in d.sites().iter().enumerate() {
            assert_eq!(d.index_of(s), Some(i));
        }
    }

    #[test]
    fn pn_formulas() {
        let p = PnSpec::new(1, 1);
        assert_eq!((p.a, p.b), (1, 1));
        let p = PnSpec::new(3, 1);
        assert_eq!((p.a, p.b), (7, 12));
        let p = PnSpec::new(0, 5);
        assert_eq!((p.a, p.b), (0, 0));
    }

    #[test]
    fn pn_windows() {
        let p1 = make_pn(1, 1, 1, None).unwrap();
        assert_eq!(
            p1.sites().iter().map(|s| s.coords()[0]).collect::<Vec<_>>(),
            vec![-1, 0, 1]
        );
        let p3 = make_pn(3, 1, 1, None).unwrap();
        assert_eq!(p3.len(), 20);
        assert_eq!(p3.bounds(), (&[-7][..], &[12][..]));
        let p0 = make_pn(0, 1, 2, None).unwrap();
        assert_eq!(p0.len(), 1);
        assert!(p0.contains(&Site::origin(2)));
    }

    #[test]
    fn pn_nesting_and_identities() {
        for r in [1i64, 2, 3] {
            for n in 1u32..=30 {
                let prev = PnSpec::new(n - 1, r);
                let cur = PnSpec::new(n, r);
                assert_eq!(-cur.a + prev.a + r, -prev.a);
                assert_eq!(cur.b - (prev.b + prev.a + r), prev.b);
            }
        }
        for n in 1u32..=6 {
            let outer = make_pn(n, 1, 1, None).unwrap();
            let inner = make_pn(n - 1, 1, 1, None).unwrap();
            assert!(inner.sites().iter().all(|s| outer.contains(s)));
            assert!(outer.contains(&Site::origin(1)));
        }
    }

    #[test]
    fn pn_in_mirrored_basis() {
        // Stable direction +1 flips the axis: the window extends left.
        let basis = construct_basis(&[Direction::new(vec![1]).unwrap()]).unwrap();
        let p = make_pn(1, 1, 1, Some(&basis)).unwrap();
        assert_eq!(p.bounds(), (&[-1][..], &[1][..]));
        let p2 = make_pn(2, 1, 1, Some(&basis)).unwrap();
        // a_2 = 3, b_2 = 4 in basis coordinates maps to {-4, ..., 3}.
        assert_eq!(p2.bounds(), (&[-4][..], &[3][..]));
        assert!(p2.contains(&Site::origin(1)));
    }

    #[test]
    fn pn_in_skewed_basis_matches_bound_check() {
        let basis = construct_basis(&[
            Direction::new(vec![-2, 1]).unwrap(),
            Direction::new(vec![1, -3]).unwrap(),
        ])
        .unwrap();
        let p = make_pn(1, 1, 2, Some(&basis)).unwrap();
        assert!(p.contains(&Site::origin(2)));
        let lo = Rational::from_integer(-1);
        let hi = Rational::from_integer(1);
        // Every member satisfies the bounds; every bbox site outside p fails.
        let (blo, bhi) = p.bounds();
        let bbox = make_box(&BoxSpec::new(blo.to_vec(), bhi.to_vec()).unwrap());
        for s in bbox.sites() {
            let inside = basis
                .to_coords(s)
                .unwrap()
                .iter()
                .all(|c| *c >= lo && *c <= hi);
            assert_eq!(inside, p.contains(s), "{s}");
        }
    }

    #[test]
    fn domain_spec_roundtrip() {
        let d = make_box(&BoxSpec::interval(-3, 4).unwrap());
        let spec = d.spec();
        assert_eq!(
            spec,
            DomainSpec::Bounds {
                lo: vec![-3],
                hi: vec![4]
            }
        );
        assert_eq!(&spec.build().unwrap(), &d);

        let sparse = Domain::from_sites(1, vec![Site(vec![0]), Site(vec![2])]).unwrap();
        let spec = sparse.spec();
        assert!(matches!(spec, DomainSpec::Sites { .. }));
        assert_eq!(&spec.build().unwrap(), &sparse);
    }
}
