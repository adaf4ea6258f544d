//! Desk-scale verification harness: exhaustive checks behind the `verify`
//! commands, with reproducible JSON reports.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::basis::construct_basis;
use crate::constructions::{builtins, cdg_threshold, east1d, fa1f, interval_walk_1d};
use crate::dynamics::BoundaryMode;
use crate::family::{
    classify, find_spanning_stable_directions, is_stable, primitive_vectors, range, Classification,
    Direction, Site, UpdateFamily,
};
use crate::lattice::{make_box, make_pn, BoxSpec, Domain};
use crate::search::{explore_with_states, origin_reachable, verify_certificate, SearchCaps};
use crate::{arcs, Result};

/// What a report was produced for, echoed into the JSON output.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerificationTask {
    EastThreshold {
        n_max: u32,
    },
    Fa1fMobility {
        half_widths: Vec<i64>,
    },
    TheoremBox {
        family: String,
        n_max: u32,
    },
    LemmaZeroOutside {
        family: String,
        n_max: u32,
    },
    Classification,
    BasisProperties {
        sets: u32,
        points: u32,
        seed: u64,
    },
}

/// Per-case outcome. `RefutedExpected` marks a claim that fails exactly the
/// way it should for input outside the claim's hypothesis (an unrooted
/// family fed to a rooted-only statement).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    RefutedExpected,
    Truncated,
}

impl Verdict {
    pub fn counts_as_pass(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::RefutedExpected)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub label: String,
    pub verdict: Verdict,
    pub states: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseReport {
    fn new(label: impl Into<String>, verdict: Verdict, states: u64) -> Self {
        CaseReport {
            label: label.into(),
            verdict,
            states,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Result of one verification task. Overall `pass` holds exactly when every
/// case passes and none truncated.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub task: VerificationTask,
    pub cases: Vec<CaseReport>,
    pub pass: bool,
    pub truncated: bool,
    pub states_visited: u64,
    pub wall_millis: u64,
}

impl RunReport {
    fn collect(task: VerificationTask, cases: Vec<CaseReport>, started: Instant) -> RunReport {
        let truncated = cases.iter().any(|c| c.verdict == Verdict::Truncated);
        let pass = !truncated && cases.iter().all(|c| c.verdict.counts_as_pass());
        let states_visited = cases.iter().map(|c| c.states).sum();
        RunReport {
            task,
            cases,
            pass,
            truncated,
            states_visited,
            wall_millis: started.elapsed().as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with timing zeroed, for bit-identical comparison across runs and
    /// worker counts.
    pub fn canonical_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        value["wall_millis"] = serde_json::Value::from(0u64);
        serde_json::to_string_pretty(&value).expect("value serializes")
    }
}

fn interval_domain(half_width: i64) -> Arc<Domain> {
    Arc::new(make_box(
        &BoxSpec::interval(-half_width, half_width).expect("half_width >= 0"),
    ))
}

/// Checks the closed-form East threshold: on `{-N, ..., N}` with budget `n`,
/// the origin is reachable exactly when `N <= 2^n - 2`.
pub fn verify_east_threshold(n_max: u32, caps: &SearchCaps) -> RunReport {
    let started = Instant::now();
    let east = east1d();
    let mut cases = Vec::new();
    for n in 1..=n_max.max(1) {
        let threshold = cdg_threshold(n).expect("n >= 1");
        for half_width in 0..=(threshold + 1) {
            let expected = half_width <= threshold;
            let report = origin_reachable(
                &east,
                &interval_domain(half_width),
                n,
                BoundaryMode::OutsideAllZero,
                false,
                caps,
            )
            .expect("origin is in a centered box");
            let verdict = if report.truncated {
                Verdict::Truncated
            } else if report.reached_target == expected {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            cases.push(
                CaseReport::new(
                    format!("n={n} N={half_width}"),
                    verdict,
                    report.states_visited,
                )
                .with_note(format!(
                    "expected {}, got {}",
                    expected, report.reached_target
                )),
            );
        }
    }
    RunReport::collect(VerificationTask::EastThreshold { n_max }, cases, started)
}

/// FA1f in one dimension: two zeroes always reach the origin. Small boxes
/// are checked by search, every box by replaying the constructive walk.
pub fn verify_fa1f_mobility(half_widths: &[i64], caps: &SearchCaps) -> RunReport {
    let started = Instant::now();
    let fam = fa1f(1);
    let mut cases = Vec::new();
    for &half_width in half_widths {
        let domain = interval_domain(half_width);
        let cert = match interval_walk_1d(&fam, &domain) {
            Ok(c) => c,
            Err(e) => {
                cases.push(
                    CaseReport::new(format!("N={half_width} walk"), Verdict::Fail, 0)
                        .with_note(e.to_string()),
                );
                continue;
            }
        };
        let replay = verify_certificate(&cert, &fam).expect("walk certificate builds");
        let origin_zero = replay.final_zeros.contains(&Site::origin(1));
        let peak_ok = cert.n <= 2;
        let verdict = if replay.ok && origin_zero && peak_ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        cases.push(
            CaseReport::new(format!("N={half_width} walk"), verdict, 0).with_note(format!(
                "peak={} flips={} replay={}",
                cert.n,
                cert.flips.len(),
                replay.ok
            )),
        );

        // Exhaustive confirmation where the state space is desk-sized.
        if half_width <= 16 {
            let report = origin_reachable(
                &fam,
                &domain,
                2,
                BoundaryMode::OutsideAllZero,
                false,
                caps,
            )
            .expect("origin is in a centered box");
            let verdict = if report.truncated {
                Verdict::Truncated
            } else if report.reached_target {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            cases.push(CaseReport::new(
                format!("N={half_width} search n=2"),
                verdict,
                report.states_visited,
            ));
        }
    }
    RunReport::collect(
        VerificationTask::Fa1fMobility {
            half_widths: half_widths.to_vec(),
        },
        cases,
        started,
    )
}

/// Adapted window for a family: spanning stable directions (when they exist)
/// fix the basis, and the range is measured in those coordinates.
fn window_setup(family: &UpdateFamily) -> (Option<crate::basis::AdaptedBasis>, i64) {
    let basis = find_spanning_stable_directions(family)
        .map(|dirs| construct_basis(&dirs).expect("spanning directions are independent"));
    let r = range(family, basis.as_ref());
    (basis, r)
}

/// Exhaustively checks that no reachable configuration zeroes the origin
/// inside the window `P_n`, for each `n <= n_max`.
pub fn verify_theorem_box(
    label: &str,
    family: &UpdateFamily,
    n_max: u32,
    caps: &SearchCaps,
) -> Result<RunReport> {
    let started = Instant::now();
    let unrooted = classify(family, &[]) == Classification::SupercriticalUnrooted;
    let (basis, r) = window_setup(family);
    let mut cases = Vec::new();
    for n in 0..=n_max {
        let window = Arc::new(make_pn(n, r, family.dim(), basis.as_ref())?);
        let origin_idx = window
            .index_of(&Site::origin(family.dim()))
            .expect("window contains the origin");
        let (report, states) =
            explore_with_states(family, &window, n, BoundaryMode::OutsideAllZero, caps);
        if report.truncated {
            cases.push(CaseReport::new(
                format!("n={n}"),
                Verdict::Truncated,
                report.states_visited,
            ));
            continue;
        }
        let origin_zeroed = states.iter().any(|key| key.bit(origin_idx));
        let verdict = match (origin_zeroed, unrooted) {
            (false, _) => Verdict::Pass,
            (true, true) => Verdict::RefutedExpected,
            (true, false) => Verdict::Fail,
        };
        let mut note = format!("|V|={} window={}", states.len(), window.len());
        if unrooted && !origin_zeroed {
            note.push_str("; unrooted input, refutation may need a larger budget");
        }
        cases.push(CaseReport::new(format!("n={n}"), verdict, report.states_visited).with_note(note));
    }
    Ok(RunReport::collect(
        VerificationTask::TheoremBox {
            family: label.to_string(),
            n_max,
        },
        cases,
        started,
    ))
}

/// Exhaustively checks that every nonempty reachable configuration in
/// `P_n` keeps a zero outside `P_{n-1}`, for `1 <= n <= n_max`.
pub fn verify_lemma_zero_outside(
    label: &str,
    family: &UpdateFamily,
    n_max: u32,
    caps: &SearchCaps,
) -> Result<RunReport> {
    let started = Instant::now();
    let unrooted = classify(family, &[]) == Classification::SupercriticalUnrooted;
    let (basis, r) = window_setup(family);
    let mut cases = Vec::new();
    for n in 1..=n_max.max(1) {
        let window = Arc::new(make_pn(n, r, family.dim(), basis.as_ref())?);
        let inner = make_pn(n - 1, r, family.dim(), basis.as_ref())?;
        let (report, states) =
            explore_with_states(family, &window, n, BoundaryMode::OutsideAllZero, caps);
        if report.truncated {
            cases.push(CaseReport::new(
                format!("n={n}"),
                Verdict::Truncated,
                report.states_visited,
            ));
            continue;
        }
        let violations = states
            .iter()
            .filter(|key| {
                !key.is_all_ones()
                    && key
                        .zero_sites(&window)
                        .iter()
                        .all(|site| inner.contains(site))
            })
            .count();
        let verdict = match (violations > 0, unrooted) {
            (false, _) => Verdict::Pass,
            (true, true) => Verdict::RefutedExpected,
            (true, false) => Verdict::Fail,
        };
        cases.push(
            CaseReport::new(format!("n={n}"), verdict, report.states_visited).with_note(format!(
                "|V|={} violations={}",
                states.len(),
                violations
            )),
        );
    }
    Ok(RunReport::collect(
        VerificationTask::LemmaZeroOutside {
            family: label.to_string(),
            n_max,
        },
        cases,
        started,
    ))
}

/// Classification of the built-in families, plus a pointwise cross-check of
/// the two-dimensional arc sets against the half-space definition.
pub fn verify_classification() -> RunReport {
    let started = Instant::now();
    let mut cases = Vec::new();
    let expected = [
        ("east1d", Classification::NotSupercriticalUnrooted),
        ("fa1f1", Classification::SupercriticalUnrooted),
        ("fa1f2", Classification::SupercriticalUnrooted),
        ("east2d", Classification::NotSupercriticalUnrooted),
        ("rooted_corner_2d", Classification::NotSupercriticalUnrooted),
    ];
    let all = builtins();
    for (name, want) in expected {
        let fam = &all
            .iter()
            .find(|b| b.name == name)
            .expect("builtin exists")
            .family;
        let got = classify(fam, &[]);
        let verdict = if got == want { Verdict::Pass } else { Verdict::Fail };
        cases.push(
            CaseReport::new(format!("classify {name}"), verdict, 0)
                .with_note(format!("expected {want}, got {got}")),
        );
    }
    for b in &all {
        if b.family.dim() != 2 {
            continue;
        }
        let set = arcs::stable_arcs_2d(&b.family).expect("d = 2");
        let mut mismatches = 0usize;
        let mut checked = 0usize;
        for v in primitive_vectors(2, 8) {
            let u = Direction::new(v).expect("nonzero");
            checked += 1;
            if set.contains(&u) != is_stable(&b.family, &u).expect("d = 2") {
                mismatches += 1;
            }
        }
        let verdict = if mismatches == 0 { Verdict::Pass } else { Verdict::Fail };
        cases.push(
            CaseReport::new(format!("arcs {}", b.name), verdict, 0)
                .with_note(format!("checked {checked} directions, {mismatches} mismatches")),
        );
    }
    RunReport::collect(VerificationTask::Classification, cases, started)
}

/// Deterministic generator for the randomized basis checks.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }

    fn chance(&mut self, one_in: u64) -> bool {
        self.next_u64() % one_in == 0
    }
}

fn random_directions(rng: &mut SplitMix64, d: usize) -> Vec<Direction> {
    loop {
        let dirs: Vec<Direction> = (0..d)
            .map(|_| loop {
                let v: Vec<i64> = (0..d).map(|_| rng.int_in(-6, 6)).collect();
                if let Ok(dir) = Direction::new(v) {
                    return dir;
                }
            })
            .collect();
        let mut indep = crate::family::IndependentSet::new(d);
        if dirs.iter().all(|u| indep.try_insert(u.vec())) {
            return dirs;
        }
    }
}

fn random_family(rng: &mut SplitMix64, d: usize) -> UpdateFamily {
    loop {
        let m = rng.int_in(1, 2) as usize;
        let rules: Vec<Vec<Site>> = (0..m)
            .map(|_| {
                let k = rng.int_in(1, 2) as usize;
                (0..k)
                    .map(|_| loop {
                        let coords: Vec<i64> = (0..d).map(|_| rng.int_in(-2, 2)).collect();
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

/// Randomized checks of the adapted-basis contract: orthogonality, the sign
/// convention, invertibility, and the half-space equivalence on lattice
/// points. Spanning sets come both from random independent directions and
/// from stable directions of random families.
pub fn verify_basis_properties(sets: u32, points: u32, seed: u64) -> RunReport {
    let started = Instant::now();
    let mut rng = SplitMix64(seed);
    let mut cases = Vec::new();
    let batch = 50u32.min(sets.max(1));
    let mut done = 0u32;
    while done < sets {
        let in_batch = batch.min(sets - done);
        let mut failures = Vec::new();
        for i in 0..in_batch {
            let idx = done + i;
            let d = if idx % 2 == 0 { 2 } else { 3 };
            let dirs = if rng.chance(2) {
                let fam = random_family(&mut rng, d);
                find_spanning_stable_directions(&fam)
                    .unwrap_or_else(|| random_directions(&mut rng, d))
            } else {
                random_directions(&mut rng, d)
            };
            let basis = match construct_basis(&dirs) {
                Ok(b) => b,
                Err(e) => {
                    failures.push(format!("set {idx}: {e}"));
                    continue;
                }
            };
            for i in 0..d {
                for j in 0..d {
                    let dot: i128 = (0..d)
                        .map(|k| basis.column(i)[k] * dirs[j].vec()[k] as i128)
                        .sum();
                    let ok = if i == j { dot < 0 } else { dot == 0 };
                    if !ok {
                        failures.push(format!("set {idx}: <v_{i}, u_{j}> = {dot}"));
                    }
                }
            }
            for _ in 0..points {
                let site = Site((0..d).map(|_| rng.int_in(-50, 50)).collect());
                let coords = basis.to_coords(&site).expect("dimensions match");
                for i in 0..d {
                    let positive = coords[i] > crate::basis::Rational::from_integer(0);
                    let inside = dirs[i].dot(&site) < 0;
                    if positive != inside {
                        failures.push(format!("set {idx}: half-space mismatch at {site}"));
                    }
                }
            }
        }
        let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
        let mut case = CaseReport::new(
            format!("sets {}..{}", done, done + in_batch),
            verdict,
            0,
        );
        if let Some(first) = failures.first() {
            case = case.with_note(first.clone());
        }
        cases.push(case);
        done += in_batch;
    }
    RunReport::collect(
        VerificationTask::BasisProperties { sets, points, seed },
        cases,
        started,
    )
}

/// One row of a reachability sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub n: u32,
    pub half_width: i64,
    pub reachable: bool,
    pub states: u64,
    pub millis: u64,
}

/// Reachability of the origin on centered boxes `{-N, ..., N}^d` for every
/// budget `n <= n_max` and `N <= half_max`.
pub fn sweep(
    label: &str,
    family: &UpdateFamily,
    n_max: u32,
    half_max: i64,
    caps: &SearchCaps,
) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for half_width in 0..=half_max {
            let domain = Arc::new(make_box(
                &BoxSpec::hypercube(family.dim(), -half_width, half_width).expect("N >= 0"),
            ));
            let t0 = Instant::now();
            let report =
                origin_reachable(family, &domain, n, BoundaryMode::OutsideAllZero, false, caps)
                    .expect("origin is in a centered box");
            rows.push(SweepRow {
                family: label.to_string(),
                n,
                half_width,
                reachable: report.reached_target,
                states: report.states_visited,
                millis: t0.elapsed().as_millis() as u64,
            });
        }
    }
    rows
}

/// CSV rendering with the stable header `family,n,N,reachable,states,millis`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("family,n,N,reachable,states,millis\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.family, row.n, row.half_width, row.reachable, row.states, row.millis
        ));
    }
    out
}
