//! Exact computations for kinetically constrained models with general update
//! families on `Z^d`.
//!
//! An update family is a finite collection of finite sets of nonzero lattice
//! sites ("rules"). A site may flip its state (0 or 1) whenever some rule,
//! translated to it, consists entirely of zeroes. This crate classifies update
//! families through their stable directions, builds the adapted coordinate
//! systems and induction windows used to analyse them, and exhaustively
//! explores the set of configurations reachable from the all-ones state under
//! a hard cap on the number of simultaneous zeroes.
//!
//! Everything geometric is exact: directions are primitive integer vectors,
//! basis changes are rational, and no floating point enters any verdict.

pub mod arcs;
pub mod basis;
pub mod constructions;
pub mod dynamics;
pub mod family;
pub mod harness;
pub mod lattice;
pub mod search;

pub use arcs::{Arc, ArcSet};
pub use basis::{construct_basis, AdaptedBasis, Rational};
pub use constructions::{
    builtin, builtins, cdg_threshold, east1d, east2d, fa1f, interval_walk_1d, rooted_corner_2d,
    BuiltinFamily,
};
pub use dynamics::{
    apply_flip, bootstrap_closure, bootstrap_step, infection_step, legal_flip, BootstrapState,
    BoundaryMode, Configuration,
};
pub use family::{
    classify, find_spanning_stable_directions, is_stable, range, stable_set_1d, validate_family,
    Classification, Direction, FamilyFile, Site, UpdateFamily, UpdateRule,
};
pub use lattice::{make_box, make_pn, to_basis_coords, BoxSpec, Domain, DomainSpec, PnSpec};
pub use search::{
    explore, explore_with_states, min_zero_budget, origin_reachable, reverse_certificate,
    verify_certificate, MinBudgetReport, PathCertificate, SearchCaps, SearchReport, StateKey,
    VerifyOutcome,
};

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("update family has no rules")]
    NoRules,
    #[error("rule {index} is empty")]
    EmptyRule { index: usize },
    #[error("rule {index} contains the origin")]
    RuleContainsOrigin { index: usize },
    #[error("rule {index}: site has {got} coordinates, expected {expected}")]
    RuleDimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("empty box: lo {lo} > hi {hi} on axis {axis}")]
    EmptyBox { axis: usize, lo: i64, hi: i64 },
    #[error("domain must contain at least one site")]
    EmptyDomain,
    #[error("site {site} is outside the domain")]
    SiteOutsideDomain { site: family::Site },
    #[error("directions are not linearly independent")]
    NotLinearlyIndependent,
    #[error("zero budget must be at least 1")]
    InvalidBudget,
    #[error("family is not supercritical unrooted")]
    NotUnrooted,
    #[error("domain is not a contiguous interval containing the origin")]
    NoContiguousDomain,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
