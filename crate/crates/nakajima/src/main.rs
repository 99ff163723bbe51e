//! Exact verification toolkit for wildly ramified curve actions — the
//! command-line front end over the library's towers, covers, groups, and
//! counting bounds.
//!
//! Subcommands:
//! - `verify <scenario|all>` — run built-in verification scenarios and print
//!   every step; `--json <path>` additionally writes the machine-readable
//!   report, `--extended` enables the larger opt-in searches, `--jobs N`
//!   runs scenarios in parallel (output order is fixed either way).
//! - `genus --tower <file>` — genus of a one-step Artin–Schreier cover
//!   t^p − t = φ(x) after pole reduction.
//! - `prank --cover <file>` — Deuring–Šafarevič p-rank of a described cover.
//! - `bounds --p P --g G --gamma C` — the fixed-place bound p/(p−1)·g, the
//!   Nakajima bound, and the classifier threshold p²/(p²−p−1)·(g−1).
//! - `group --file <file> --op fingerprint|maximals|isom` — structure of a
//!   group built from permutations, field maps, or a presentation.
//! - `count --frbound --group L --gamma C` / `count --bh --p P --n N --d D`
//!   — subgroup counts and automorphism-order bounds.
//!
//! All numeric output is exact: integers, or rationals printed as `num/den`.
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on a
//! usage or input error. The `NAKAJIMA_CATALOG` environment variable
//! overrides the directory scenario input files are read from.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Rational64;

use nakajima::counting::{bh_bound, frbound_count, not_div_p_check, sylow_bh_bound, GroupProfile};
use nakajima::group::constructions::{by_label, identify};
use nakajima::group::fingerprint::{fingerprint, maximal_subgroups};
use nakajima::group::iso::{aut_order_bruteforce, is_isomorphic};
use nakajima::input::{
    build_group, build_tower, read_cover_file, read_group_file, read_tower_file, BuiltGroup,
};
use nakajima::ramify::{bounds, ds_prank, hurwitz_genus};
use nakajima::report::{reports_to_json, Report};
use nakajima::scenario::{run_all, run_scenario, RunOptions};
use nakajima::tower::reduce::as_step_genus;

#[derive(Parser)]
#[command(
    name = "nakajima",
    version,
    about = "Exact checks for automorphism groups of curves in characteristic p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification scenario, or `all` of them.
    Verify {
        /// Scenario name, or `all`.
        scenario: String,
        /// Also write the report as JSON to this path.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Enable the larger opt-in searches (exhaustive coefficient fields).
        #[arg(long)]
        extended: bool,
        /// Number of scenarios to run in parallel; output order is fixed.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..=64))]
        jobs: u16,
    },
    /// Genus of a one-step cover t^p − t = φ(x) from a tower file.
    Genus {
        /// Tower description (JSON) with exactly one relation.
        #[arg(long, value_name = "FILE")]
        tower: PathBuf,
    },
    /// Deuring–Šafarevič p-rank of a cover description.
    Prank {
        /// Cover description (JSON): order, quotient invariants, orbits.
        #[arg(long, value_name = "FILE")]
        cover: PathBuf,
    },
    /// Genus bounds for an automorphism p-group: fixed-place, Nakajima, threshold.
    Bounds {
        /// The (odd) characteristic.
        #[arg(long)]
        p: u64,
        /// Genus of the curve (≥ 2).
        #[arg(long)]
        g: u64,
        /// p-rank of the curve.
        #[arg(long)]
        gamma: u64,
    },
    /// Structure of a group given by a group file.
    Group {
        /// Group description (JSON): permutations, tower maps, or a presentation.
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
        /// What to compute.
        #[arg(long, value_enum)]
        op: GroupOp,
        /// Reference construction label for `--op isom` (e.g. `UT(3,3)`, `C9:C3`).
        #[arg(long, value_name = "LABEL")]
        against: Option<String>,
    },
    /// Subgroup counts and automorphism-order bounds.
    Count {
        /// Count conjugacy-closed index-p subgroups with p-rank ≥ gamma.
        #[arg(long)]
        frbound: bool,
        /// Print the automorphism-order bound p^(n·d − d(d+1)/2) · GL(d,p)-order.
        #[arg(long)]
        bh: bool,
        /// With --bh: bound only the p-part (Sylow p-subgroup of Aut).
        #[arg(long)]
        sylow: bool,
        /// With --frbound: reference construction label for the group G.
        #[arg(long, value_name = "LABEL")]
        group: Option<String>,
        /// With --frbound: lower bound on the quotient p-rank.
        #[arg(long)]
        gamma: Option<u32>,
        /// With --bh: the (odd) prime p.
        #[arg(long)]
        p: Option<u64>,
        /// With --bh: |G| = p^n.
        #[arg(long)]
        n: Option<u32>,
        /// With --bh: minimal generator count d(G).
        #[arg(long)]
        d: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupOp {
    /// Order, exponent, class, centre, derived and Frattini data, census.
    Fingerprint,
    /// Identify every maximal subgroup.
    Maximals,
    /// Isomorphism test against a reference construction (`--against`).
    Isom,
}

/// How a command run ends when it does not succeed.
enum Failure {
    /// A mathematical check failed; details were already printed.
    Check,
    /// Bad usage, unreadable input, or an inconsistent description.
    Input(String),
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify {
            scenario,
            json,
            extended,
            jobs,
        } => cmd_verify(&scenario, json.as_deref(), extended, jobs as usize),
        Command::Genus { tower } => cmd_genus(&tower),
        Command::Prank { cover } => cmd_prank(&cover),
        Command::Bounds { p, g, gamma } => cmd_bounds(p, g, gamma),
        Command::Group { file, op, against } => cmd_group(&file, op, against.as_deref()),
        Command::Count {
            frbound,
            bh,
            sylow,
            group,
            gamma,
            p,
            n,
            d,
        } => cmd_count(frbound, bh, sylow, group.as_deref(), gamma, p, n, d),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_verify(
    scenario: &str,
    json: Option<&Path>,
    extended: bool,
    jobs: usize,
) -> Result<(), Failure> {
    let opts = RunOptions {
        extended,
        catalog_dir: std::env::var_os("NAKAJIMA_CATALOG").map(PathBuf::from),
    };
    let reports: Vec<Report> = if scenario == "all" {
        run_all(&opts, jobs).map_err(input_err)?
    } else {
        vec![run_scenario(scenario, &opts).map_err(input_err)?]
    };
    for r in &reports {
        print!("{}", r.render_text());
    }
    if let Some(path) = json {
        // A single scenario writes one report object; `all` writes the array.
        let body = if scenario == "all" {
            reports_to_json(&reports)
        } else {
            let mut s = serde_json::to_string_pretty(&reports[0]).expect("reports serialize");
            s.push('\n');
            s
        };
        std::fs::write(path, body)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    if reports.iter().all(Report::passed) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_genus(path: &Path) -> Result<(), Failure> {
    let spec = read_tower_file(path).map_err(input_err)?;
    if spec.relations.len() != 1 {
        return Err(Failure::Input(format!(
            "genus expects a one-step tower, but {} declares {} relations",
            path.display(),
            spec.relations.len()
        )));
    }
    let built = build_tower(&spec).map_err(input_err)?;
    let phi = built
        .tower
        .phi(1)
        .as_base()
        .expect("a level-1 right-hand side lies in the rational base field");
    let sg = as_step_genus(&phi).map_err(input_err)?;
    println!("genus={}", sg.genus);
    Ok(())
}

fn cmd_prank(path: &Path) -> Result<(), Failure> {
    let cover = read_cover_file(path).map_err(input_err)?;
    let gamma = ds_prank(&cover).map_err(input_err)?;
    let g = hurwitz_genus(&cover).map_err(input_err)?;
    println!("prank={gamma}");
    println!("genus={g}");
    Ok(())
}

fn cmd_bounds(p: u64, g: u64, gamma: u64) -> Result<(), Failure> {
    let b = bounds(p, g, gamma).map_err(input_err)?;
    println!("stichtenoth={}", fmt_rat(b.stichtenoth));
    match b.nakajima {
        Some(n) => println!("nakajima={}", fmt_rat(n)),
        None => println!("nakajima=undefined"),
    }
    println!("threshold={}", fmt_rat(b.hyp_threshold));
    Ok(())
}

fn cmd_group(path: &Path, op: GroupOp, against: Option<&str>) -> Result<(), Failure> {
    let spec = read_group_file(path).map_err(input_err)?;
    let built = build_group(&spec).map_err(input_err)?;
    let mut check_failed = false;
    if let BuiltGroup::Presentation { report, .. } = &built {
        if report.holds() {
            println!("presentation=holds");
        } else {
            for rel in &report.failed_relators {
                println!("failed-relator {rel}");
            }
            if !report.generates {
                println!("images do not generate the group");
            }
            check_failed = true;
        }
    }
    let g = built.group();
    match op {
        GroupOp::Fingerprint => {
            let fp = fingerprint(g);
            println!("order={}", fp.order);
            println!("exponent={}", fp.exponent);
            match fp.nilpotency_class {
                Some(c) => println!("class={c}"),
                None => println!("class=not nilpotent"),
            }
            println!("center={}", fp.center_order);
            println!("derived={}", fp.derived_order);
            if let Some(f) = fp.frattini_order {
                println!("frattini={f}");
            }
            if let Some(d) = fp.d {
                println!("d={d}");
            }
            println!("census={}", fmt_census(&fp.order_census));
            let ab: Vec<String> = fp.abelianization.iter().map(u64::to_string).collect();
            println!("abelianization=[{}]", ab.join(", "));
            println!("identify={}", identify(g));
        }
        GroupOp::Maximals => {
            let maximals = maximal_subgroups(g).map_err(input_err)?;
            let mut labels: Vec<String> = maximals
                .iter()
                .map(|m| format!("{} (order {})", identify(m), m.order()))
                .collect();
            labels.sort();
            for l in &labels {
                println!("maximal {l}");
            }
        }
        GroupOp::Isom => {
            let label = against.ok_or_else(|| {
                Failure::Input("--op isom requires --against <LABEL>".to_string())
            })?;
            let reference = by_label(label).map_err(input_err)?;
            let ok = is_isomorphic(g, &reference);
            println!("isomorphic={ok}");
            if !ok {
                check_failed = true;
            }
        }
    }
    if check_failed {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_count(
    frbound: bool,
    bh: bool,
    sylow: bool,
    group: Option<&str>,
    gamma: Option<u32>,
    p: Option<u64>,
    n: Option<u32>,
    d: Option<u32>,
) -> Result<(), Failure> {
    match (frbound, bh) {
        (true, false) => {
            let label = group
                .ok_or_else(|| Failure::Input("--frbound requires --group <LABEL>".to_string()))?;
            let gamma = gamma
                .ok_or_else(|| Failure::Input("--frbound requires --gamma <GAMMA>".to_string()))?;
            let g = by_label(label).map_err(input_err)?;
            let fp = fingerprint(&g);
            let p = least_prime_factor(fp.order);
            let n = fp.order.ilog(p);
            let d = fp
                .d
                .ok_or_else(|| Failure::Input(format!("{label} is not a p-group")))?;
            let alpha = aut_order_bruteforce(&g).map_err(input_err)?;
            let profile = GroupProfile {
                p,
                n,
                d,
                alpha: Some(alpha.into()),
            };
            let count = frbound_count(&profile, gamma).map_err(input_err)?;
            println!("count={count}");
            println!("not-divisible-by-p={}", not_div_p_check(&count, p));
            Ok(())
        }
        (false, true) => {
            let missing = |flag: &str| Failure::Input(format!("--bh requires --{flag}"));
            let p = p.ok_or_else(|| missing("p <P>"))?;
            let n = n.ok_or_else(|| missing("n <N>"))?;
            let d = d.ok_or_else(|| missing("d <D>"))?;
            let bound = if sylow {
                sylow_bh_bound(p, n, d).map_err(input_err)?
            } else {
                bh_bound(p, n, d).map_err(input_err)?
            };
            println!("bound={bound}");
            Ok(())
        }
        _ => Err(Failure::Input(
            "count requires exactly one of --frbound or --bh".to_string(),
        )),
    }
}

/// Exact rendering: plain integer when the denominator is 1, else `num/den`.
fn fmt_rat(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `{1:1, 3:26}`-style rendering of an element-order census.
fn fmt_census(census: &std::collections::BTreeMap<u64, u64>) -> String {
    let inner: Vec<String> = census.iter().map(|(o, c)| format!("{o}:{c}")).collect();
    format!("{{{}}}", inner.join(", "))
}

fn least_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return f;
        }
        f += 2;
    }
    n
}
