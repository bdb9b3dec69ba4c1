mod commands;
mod report;

use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::json;

use semistable_core::curves::WeierstrassCurve;

use commands::*;

/// Exact verification reports for semistable curves, ℓ-adic lattices and
/// small division fields. Every subcommand prints one JSON report and exits
/// nonzero when any check fails.
#[derive(Debug, Parser)]
#[command(name = "semistable-lab", version)]
struct Cli {
    /// Add a `meta` object (version, timing, threads) outside the report body.
    #[arg(long, global = true)]
    meta: bool,
    /// Pretty-print the JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

fn parse_list(s: &str) -> Result<Vec<i64>, String> {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad integer {t:?}")))
        .collect()
}

fn parse_orders(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad order {t:?}")))
        .collect()
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Primes p = u² + 64 up to a bound and their pair of curves.
    NsEnumerate {
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Box search for semistable curves of prime conductor with rational ℓ-torsion.
    MiyawakiSearch {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// The curve maximizing ord_ℓ(ord_p Δ) in the family isogeny class.
    Dagger {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
    },
    /// Group-ring identities of the toroidal model, exactly in M_2d(Z/ℓ^N).
    VerifyIdentities {
        #[arg(long)]
        ell: u64,
        /// Defaults to ℓ.
        #[arg(long)]
        s: Option<i64>,
        #[arg(long, default_value_t = 6)]
        precision: u32,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Walk the stable kernels in A[ℓ^n] and locate the maximal component group.
    IsogenyMaximal {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        s: i64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// ℓ-part of the starting component group; defaults to (ℓ-part of s)^d.
        #[arg(long)]
        phi: Option<u64>,
    },
    /// Class number of a fundamental discriminant D < 0.
    ClassNumber {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Degree of the maximal (2,p)-controlled 2-extension of Q.
    ControlledDegree {
        #[arg(long)]
        p: u64,
    },
    /// Rank of Γ_S and of the image of the global units.
    GammaRank {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
    },
    /// Herbrand function, conductor exponent and the upper-numbering bound.
    Ramification {
        /// Lower-numbering orders |G_0|,|G_1|,...
        #[arg(long, value_parser = parse_orders)]
        orders: std::vec::Vec<u64>,
        #[arg(long)]
        ell: u64,
    },
    /// Invariants, reduction, traces and rational torsion of a curve.
    CurveInfo {
        /// a1,a2,a3,a4,a6
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long, default_value_t = 50)]
        max_prime: u64,
    },
    /// disc(4P + Q²) of y² + Q(x)y = P(x), with its 2-part split off.
    Genus2Disc {
        /// Coefficients of P, constant term first.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        p: Option<std::vec::Vec<i64>>,
        /// Coefficients of Q, constant term first.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        q: Option<std::vec::Vec<i64>>,
        /// Check that the odd part is a power of this prime.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Run every literature-backed check and summarize.
    PaperSuite,
}

fn configure_threads() -> usize {
    if let Some(n) = std::env::var("SEMISTABLE_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    rayon::current_num_threads()
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::NsEnumerate { bound } => ns_enumerate_cmd(bound),
        Command::MiyawakiSearch { ell, bound } => miyawaki_search_cmd(ell, bound),
        Command::Dagger { ell, p } => dagger_cmd(ell, p),
        Command::VerifyIdentities {
            ell,
            s,
            precision,
            d,
        } => verify_identities_cmd(ell, s.unwrap_or(ell as i64), precision, d),
        Command::IsogenyMaximal { ell, s, n, d, phi } => isogeny_maximal_cmd(ell, s, n, d, phi),
        Command::ClassNumber { d } => class_number_cmd(d),
        Command::ControlledDegree { p } => controlled_degree_cmd(p),
        Command::GammaRank { ell, p } => gamma_rank_cmd(ell, p),
        Command::Ramification { orders, ell } => ramification_cmd(orders, ell),
        Command::CurveInfo { curve, max_prime } => {
            let e: WeierstrassCurve = curve.parse()?;
            curve_info_cmd(&e, max_prime)
        }
        Command::Genus2Disc { p, q, prime } => {
            let p = p.unwrap_or(GENUS2_P.to_vec());
            let q = q.unwrap_or(GENUS2_Q.to_vec());
            genus2_disc_cmd(&p, &q, prime)
        }
        Command::PaperSuite => paper_suite_cmd(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = configure_threads();
    let start = Instant::now();
    let mut report = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.meta {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        report.meta = Some(json!({
            "version": env!("CARGO_PKG_VERSION"),
            "elapsed_ms": start.elapsed().as_millis() as u64,
            "threads": threads,
            "unix_time": now,
        }));
    }
    let value = report.to_value();
    let text = if cli.pretty {
        serde_json::to_string_pretty(&value)
    } else {
        serde_json::to_string(&value)
    }
    .expect("JSON values print");
    println!("{text}");
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
