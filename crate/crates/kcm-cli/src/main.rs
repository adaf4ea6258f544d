//! `kcm` command line: classification, reachability queries, bootstrap
//! closure, verification reports, and CSV sweeps.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage or input
//! error, 3 resource truncation.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use kcm::harness::{self, RunReport};
use kcm::{
    builtin, classify, find_spanning_stable_directions, make_box, range, stable_set_1d,
    BootstrapState, BoundaryMode, BoxSpec, Classification, Domain, FamilyFile, SearchCaps, Site,
    UpdateFamily,
};

#[derive(Parser)]
#[command(
    name = "kcm",
    version,
    about = "Exact analysis of kinetically constrained models with general update families",
    after_help = "FAMILY may be a builtin name (east1d, fa1f1, fa1f2, ..., east2d, \
rooted_corner_2d) or a path to a JSON file {\"d\": .., \"rules\": [[[..]]]}.\n\
The KCM_MAX_STATES environment variable overrides the default visited-state cap."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SearchArgs {
    /// Cap on visited states before the search reports truncation.
    #[arg(long, global = true)]
    max_states: Option<usize>,
    /// Worker threads for frontier expansion (0 = all cores, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
}

impl SearchArgs {
    fn caps(&self) -> SearchCaps {
        let mut caps = SearchCaps::with_workers(self.workers);
        if let Some(max) = self.max_states {
            caps.max_states = max;
        }
        caps
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a family: range, stable directions, rootedness.
    Classify {
        #[arg(short = 'f', long = "family")]
        family: String,
    },
    /// Decide whether the origin is reachable within a zero budget.
    Reach {
        #[arg(short = 'f', long = "family")]
        family: String,
        /// Box bounds: "LO..HI" for all axes, or per-axis "L1..H1,L2..H2".
        #[arg(long = "box", value_name = "LO..HI", allow_hyphen_values = true)]
        box_bounds: String,
        /// Maximum number of simultaneous zeroes.
        #[arg(long)]
        budget: u32,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Zero)]
        boundary: BoundaryArg,
        /// Write a replayable flip-sequence certificate here when reachable.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Bootstrap closure of an infected seed set on a box.
    Bootstrap {
        #[arg(short = 'f', long = "family")]
        family: String,
        #[arg(long = "box", value_name = "LO..HI", allow_hyphen_values = true)]
        box_bounds: String,
        /// Seed sites: coordinates comma-separated, sites semicolon-separated
        /// (e.g. "0,0;1,2").
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
    },
    /// Run a verification task and report per-case verdicts.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// CSV sweep of origin reachability over budgets and box sizes.
    Sweep {
        #[arg(short = 'f', long = "family")]
        family: String,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        /// Largest half-width N of the centered boxes.
        #[arg(long, default_value_t = 8)]
        box_max: i64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// East: origin reachable on {-N..N} iff N <= 2^n - 2.
    EastThreshold {
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// FA1f: two zeroes reach the origin at every box size.
    Fa1f {
        /// Half-widths to check, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8,10000")]
        ns: Vec<i64>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// No reachable configuration zeroes the origin inside the window P_n.
    Theorem {
        #[arg(short = 'f', long = "family")]
        family: String,
        /// Largest budget to check (default: 3 in 1d, 2 otherwise).
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Nonempty reachable configurations keep a zero outside P_{n-1}.
    Lemma {
        #[arg(short = 'f', long = "family")]
        family: String,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Adapted-basis contract on randomly generated spanning sets.
    Basis {
        #[arg(long, default_value_t = 200)]
        sets: u32,
        #[arg(long, default_value_t = 100)]
        points: u32,
        #[arg(long, default_value_t = 0x5eed_0001)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Zero,
    One,
}

impl From<BoundaryArg> for BoundaryMode {
    fn from(value: BoundaryArg) -> Self {
        match value {
            BoundaryArg::Zero => BoundaryMode::OutsideAllZero,
            BoundaryArg::One => BoundaryMode::OutsideAllOne,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_family(spec: &str) -> Result<(String, UpdateFamily), String> {
    if let Some(fam) = builtin(spec) {
        return Ok((spec.to_string(), fam));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("reading {spec}: {e}"))?;
    let file: FamilyFile =
        serde_json::from_str(&text).map_err(|e| format!("parsing {spec}: {e}"))?;
    let fam = file.build().map_err(|e| format!("validating {spec}: {e}"))?;
    let label = PathBuf::from(spec)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    Ok((label, fam))
}

/// "LO..HI" for every axis, or per-axis ranges joined by commas.
fn parse_box(text: &str, d: usize) -> Result<BoxSpec, String> {
    let parse_range = |piece: &str| -> Result<(i64, i64), String> {
        let (lo, hi) = piece
            .split_once("..")
            .ok_or_else(|| format!("expected LO..HI, got {piece:?}"))?;
        let lo: i64 = lo.trim().parse().map_err(|e| format!("bad bound {lo:?}: {e}"))?;
        let hi: i64 = hi.trim().parse().map_err(|e| format!("bad bound {hi:?}: {e}"))?;
        Ok((lo, hi))
    };
    let pieces: Vec<&str> = text.split(',').collect();
    let ranges: Vec<(i64, i64)> = if pieces.len() == 1 {
        vec![parse_range(pieces[0])?; d]
    } else if pieces.len() == d {
        pieces
            .iter()
            .map(|p| parse_range(p))
            .collect::<Result<_, _>>()?
    } else {
        return Err(format!(
            "expected 1 or {d} axis ranges, got {}",
            pieces.len()
        ));
    };
    let (lo, hi): (Vec<i64>, Vec<i64>) = ranges.into_iter().unzip();
    BoxSpec::new(lo, hi).map_err(|e| e.to_string())
}

fn parse_sites(text: &str, d: usize) -> Result<Vec<Site>, String> {
    text.split(';')
        .filter(|piece| !piece.trim().is_empty())
        .map(|piece| {
            let coords: Vec<i64> = piece
                .split(',')
                .map(|c| c.trim().parse().map_err(|e| format!("bad coordinate {c:?}: {e}")))
                .collect::<Result<_, _>>()?;
            if coords.len() != d {
                return Err(format!(
                    "site {piece:?} has {} coordinates, expected {d}",
                    coords.len()
                ));
            }
            Ok(Site(coords))
        })
        .collect()
}

fn print_report(report: &RunReport) {
    for case in &report.cases {
        let verdict = match case.verdict {
            harness::Verdict::Pass => "pass",
            harness::Verdict::Fail => "FAIL",
            harness::Verdict::RefutedExpected => "refuted-expected",
            harness::Verdict::Truncated => "TRUNCATED",
        };
        match &case.note {
            Some(note) => println!("[{verdict}] {} ({note})", case.label),
            None => println!("[{verdict}] {}", case.label),
        }
    }
    println!(
        "overall: {} (cases={}, states={}, millis={})",
        if report.pass { "pass" } else { "fail" },
        report.cases.len(),
        report.states_visited,
        report.wall_millis
    );
}

fn finish_report(report: &RunReport, path: Option<&PathBuf>) -> Result<u8, String> {
    print_report(report);
    if let Some(path) = path {
        std::fs::write(path, report.to_json())
            .map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(if report.truncated {
        3
    } else if report.pass {
        0
    } else {
        1
    })
}

fn default_n_max(family: &UpdateFamily) -> u32 {
    if family.dim() == 1 {
        3
    } else {
        2
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Classify { family } => {
            let (label, fam) = load_family(&family)?;
            let rule_word = if fam.rules().len() == 1 { "rule" } else { "rules" };
            println!(
                "family: {label} (d={}, {} {rule_word})",
                fam.dim(),
                fam.rules().len()
            );
            println!("range: r={}", range(&fam, None));
            match fam.dim() {
                1 => {
                    let stable = stable_set_1d(&fam).map_err(|e| e.to_string())?;
                    let rendered: Vec<String> =
                        stable.iter().map(|u| u.vec()[0].to_string()).collect();
                    println!("stable directions: {{{}}}", rendered.join(", "));
                }
                2 => {
                    let arcs = kcm::arcs::stable_arcs_2d(&fam).map_err(|e| e.to_string())?;
                    println!("stable directions: {arcs}");
                }
                _ => println!("stable directions: not enumerated for d >= 3"),
            }
            let classification = classify(&fam, &[]);
            println!("classification: {classification}");
            if classification == Classification::NotSupercriticalUnrooted {
                match find_spanning_stable_directions(&fam) {
                    Some(dirs) => {
                        let rendered: Vec<String> =
                            dirs.iter().map(|u| u.to_string()).collect();
                        println!("spanning stable directions: [{}]", rendered.join(", "));
                    }
                    None => println!("spanning stable directions: none found within bound"),
                }
            }
            Ok(0)
        }
        Cmd::Reach {
            family,
            box_bounds,
            budget,
            boundary,
            certificate,
            search,
        } => {
            let (_, fam) = load_family(&family)?;
            let spec = parse_box(&box_bounds, fam.dim())?;
            let domain: Arc<Domain> = Arc::new(make_box(&spec));
            let report = kcm::origin_reachable(
                &fam,
                &domain,
                budget,
                boundary.into(),
                certificate.is_some(),
                &search.caps(),
            )
            .map_err(|e| e.to_string())?;
            println!("reachable={}", report.reached_target);
            println!("states={}", report.states_visited);
            println!("max_frontier={}", report.max_frontier);
            println!("truncated={}", report.truncated);
            if let Some(path) = certificate {
                match report.certificate {
                    Some(cert) => {
                        let replay =
                            kcm::verify_certificate(&cert, &fam).map_err(|e| e.to_string())?;
                        if !replay.ok {
                            return Err("internal: emitted certificate failed replay".into());
                        }
                        std::fs::write(&path, serde_json::to_string_pretty(&cert).unwrap())
                            .map_err(|e| format!("writing {}: {e}", path.display()))?;
                        println!(
                            "certificate: wrote {} ({} flips, replay verified)",
                            path.display(),
                            cert.flips.len()
                        );
                    }
                    None => println!("certificate: none (origin not reached)"),
                }
            }
            Ok(if report.truncated { 3 } else { 0 })
        }
        Cmd::Bootstrap {
            family,
            box_bounds,
            seed,
        } => {
            let (_, fam) = load_family(&family)?;
            let spec = parse_box(&box_bounds, fam.dim())?;
            let region: Arc<Domain> = Arc::new(make_box(&spec));
            let seeds = parse_sites(&seed, fam.dim())?;
            let state = BootstrapState::new(region.clone(), &seeds).map_err(|e| e.to_string())?;
            let (closure, steps) = kcm::bootstrap_closure(&state, &fam);
            println!("region={} sites, seed={} sites", region.len(), state.infected_count());
            println!(
                "closure={} sites (full region: {})",
                closure.infected_count(),
                closure.is_full()
            );
            println!("steps={steps}");
            let origin = Site::origin(fam.dim());
            if region.contains(&origin) {
                match kcm::infection_step(&state, &fam, &origin) {
                    Some(step) => println!("origin infected at step {step}"),
                    None => println!("origin not infected"),
                }
            }
            Ok(0)
        }
        Cmd::Verify { what } => match what {
            VerifyCmd::EastThreshold {
                n_max,
                report,
                search,
            } => {
                let run = harness::verify_east_threshold(n_max, &search.caps());
                finish_report(&run, report.as_ref())
            }
            VerifyCmd::Fa1f { ns, report, search } => {
                let run = harness::verify_fa1f_mobility(&ns, &search.caps());
                finish_report(&run, report.as_ref())
            }
            VerifyCmd::Theorem {
                family,
                n_max,
                report,
                search,
            } => {
                let (label, fam) = load_family(&family)?;
                let n_max = n_max.unwrap_or_else(|| default_n_max(&fam));
                let run = harness::verify_theorem_box(&label, &fam, n_max, &search.caps())
                    .map_err(|e| e.to_string())?;
                finish_report(&run, report.as_ref())
            }
            VerifyCmd::Lemma {
                family,
                n_max,
                report,
                search,
            } => {
                let (label, fam) = load_family(&family)?;
                let n_max = n_max.unwrap_or_else(|| default_n_max(&fam));
                let run = harness::verify_lemma_zero_outside(&label, &fam, n_max, &search.caps())
                    .map_err(|e| e.to_string())?;
                finish_report(&run, report.as_ref())
            }
            VerifyCmd::Basis {
                sets,
                points,
                seed,
                report,
            } => {
                let run = harness::verify_basis_properties(sets, points, seed);
                finish_report(&run, report.as_ref())
            }
        },
        Cmd::Sweep {
            family,
            n_max,
            box_max,
            out,
            search,
        } => {
            let (label, fam) = load_family(&family)?;
            let rows = harness::sweep(&label, &fam, n_max, box_max, &search.caps());
            let csv = harness::sweep_csv(&rows);
            match out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| format!("writing {}: {e}", path.display()))?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
    }
}
