//! The `oscrank` command line: `rank`, `check` and `derive`.
//!
//! Reports are JSON with sorted keys by default. Exit codes: `0` success,
//! `1` a law failed, `2` bad input, `3` an undecided (capped) rank.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{build_system, SystemDescriptor};
use crate::engine::{
    beta_by_level, beta_of_map, beta_of_system, is_fragmented_report, iterate_derivative, DerivativeChain, Fragmentation,
    RankValue, DEFAULT_CAP,
};
use crate::error::{Error, Result};
use crate::laws::{run_law, Grid, Law};
use crate::space::literal::parse_set;
use crate::space::{Partition, SymbolicSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LAW_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_CAPPED: i32 = 3;

const SET_HELP: &str = "Set literal: intervals [0+,1-], points {3}, products with × or x, \
unions with ∪ or U, difference with \\, X for everything, {} for nothing; cut points -inf, +inf, q, q-, q+";

#[derive(Parser, Debug)]
#[command(name = "oscrank", version, about = "Oscillation ranks of maps on Stone-space dynamical systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// β(f, P) for one map, or every map and β(X, G) with --all.
    Rank {
        /// acf, dlo, cyclic, multiorder:<n>, cylinder or finite:<path>.
        #[arg(long)]
        system: String,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        map: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include wall-clock timings (breaks byte-identical output).
        #[arg(long)]
        timings: bool,
    },
    /// Runs a law suite over the catalog grid.
    Check {
        /// monotonicity, conjugation, br-le-cb, directions, factor,
        /// continuity, osc-consistency or all.
        #[arg(long, default_value = "all")]
        law: String,
        #[arg(long, default_value = "small")]
        grid: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        timings: bool,
    },
    /// Prints the derivative chain stage by stage.
    Derive {
        #[arg(long)]
        system: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, help = SET_HELP)]
        set: Option<String>,
        /// Include oscillation certificates for sampled stage points.
        #[arg(long)]
        steps: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        timings: bool,
    },
}

fn chain_json(chain: &DerivativeChain, steps: bool) -> Value {
    let mut v = json!({
        "stages": chain.stages.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "termination": chain.termination,
    });
    if steps {
        v["witnesses"] = chain
            .certificates
            .iter()
            .map(|c| {
                json!({
                    "stage": c.stage,
                    "point": c.point.to_string(),
                    "neighborhood": c.neighborhood.to_string(),
                    "v1": c.v1.to_string(),
                    "v2": c.v2.to_string(),
                })
            })
            .collect();
    }
    v
}

fn rank_text(v: &RankValue) -> String {
    match v {
        RankValue::Finite(n) => format!("finite {n}"),
        RankValue::Infinite => "infinite".into(),
        RankValue::Capped(n) => format!("capped after {n} steps"),
    }
}

fn base(command: &str) -> Value {
    json!({ "command": command, "version": env!("CARGO_PKG_VERSION") })
}

fn fragmentation_json(fr: &Fragmentation) -> Value {
    match fr {
        Fragmentation::Fragmented { beta, stabilized } => json!({ "fragmented": { "beta": beta, "stabilized": stabilized } }),
        Fragmentation::NotFragmented { fixed, level, .. } => {
            json!({ "not_fragmented": { "fixed": fixed.to_string(), "level": level } })
        }
        Fragmentation::Indeterminate { cap } => json!({ "indeterminate": { "cap": cap } }),
    }
}

struct Outcome {
    report: Value,
    text: Vec<String>,
    code: i32,
}

fn rank_one(sys: &SystemDescriptor, name: &str, level: u32, cap: u64) -> Result<Outcome> {
    let f = sys.resolve_map(name)?;
    let p = Partition::canonical(&sys.space, level)?;
    let chain = iterate_derivative(&SymbolicSet::full(&sys.space), &f, &p, cap)?;
    let rank = chain.rank();
    let by_level = beta_by_level(&f, level, cap)?;
    let (sup, stabilized) = beta_of_map(&f, level, cap)?;
    let fr = is_fragmented_report(&f, level, cap)?;
    let mut report = base("rank");
    report["system"] = json!(sys.spec);
    report["map"] = json!(f.name);
    report["level"] = json!(level);
    report["rank"] = json!(rank);
    report["by_level"] = json!(by_level);
    report["beta_of_map"] = json!(sup);
    report["stabilized"] = json!(stabilized);
    report["chain"] = chain_json(&chain, true);
    report["fragmentation"] = fragmentation_json(&fr);
    report["in_ellis"] = json!(f.claimed_in_ellis);
    let text = vec![
        format!("system {} map {} level {level}", sys.spec, f.name),
        format!("beta(f, P) = {}", rank_text(&rank)),
        format!("beta(f) over levels 1..={level} = {} (stabilized: {stabilized})", rank_text(&sup)),
    ];
    let code = if rank.is_capped() || sup.is_capped() { EXIT_CAPPED } else { EXIT_OK };
    Ok(Outcome { report, text, code })
}

fn rank_all(sys: &SystemDescriptor, level: u32, cap: u64) -> Result<Outcome> {
    let p = Partition::canonical(&sys.space, level)?;
    let mut maps = Vec::new();
    let mut text = vec![format!("system {} level {level}", sys.spec)];
    let mut capped = false;
    for c in &sys.catalog {
        let rank = iterate_derivative(&SymbolicSet::full(&sys.space), &c.map, &p, cap)?.rank();
        let (sup, stabilized) = beta_of_map(&c.map, level, cap)?;
        capped |= rank.is_capped() || sup.is_capped();
        text.push(format!("  {:<24} beta(f, P) = {:<10} beta(f) = {}", c.map.name, rank_text(&rank), rank_text(&sup)));
        maps.push(json!({
            "map": c.map.name,
            "rank": rank,
            "beta_of_map": sup,
            "stabilized": stabilized,
            "expected": c.expected_beta,
            "in_ellis": c.map.claimed_in_ellis,
        }));
    }
    let ellis = sys.ellis_maps();
    let system_beta = beta_of_system(&ellis, level, cap)?;
    capped |= system_beta.is_capped();
    text.push(format!("beta(X, G) over the Ellis catalog = {}", rank_text(&system_beta)));
    let mut report = base("rank");
    report["system"] = json!(sys.spec);
    report["level"] = json!(level);
    report["maps"] = json!(maps);
    report["system_beta"] = json!(system_beta);
    report["expected_system_beta"] = json!(sys.expected_beta);
    report["group"] = json!(sys.group_description);
    Ok(Outcome { report, text, code: if capped { EXIT_CAPPED } else { EXIT_OK } })
}

fn check(law: &str, grid: &str) -> Result<Outcome> {
    let laws = Law::parse_selection(law)?;
    let grid_name = grid;
    let grid = Grid::parse(grid)?;
    let mut reports = Vec::new();
    let mut text = Vec::new();
    let mut all = true;
    for l in laws {
        let r = run_law(l, &grid)?;
        all &= r.passed();
        text.push(format!("{} {} ({} cases)", if r.passed() { "PASS" } else { "FAIL" }, r.law, r.cases));
        text.extend(r.failures.iter().map(|f| format!("  {f}")));
        reports.push(r);
    }
    let mut report = base("check");
    report["grid"] = json!(grid_name);
    report["laws"] = json!(reports);
    report["passed"] = json!(all);
    Ok(Outcome { report, text, code: if all { EXIT_OK } else { EXIT_LAW_FAILED } })
}

fn derive(sys: &SystemDescriptor, name: &str, level: u32, set: Option<&str>, steps: bool, cap: u64) -> Result<Outcome> {
    let f = sys.resolve_map(name)?;
    let p = Partition::canonical(&sys.space, level)?;
    let y = match set {
        Some(s) => parse_set(&sys.space, s)?,
        None => SymbolicSet::full(&sys.space),
    };
    if !y.is_closed() {
        return Err(Error::InvalidArgument(format!("{y} is not closed")));
    }
    let chain = iterate_derivative(&y, &f, &p, cap)?;
    let mut text = vec![format!("system {} map {} level {level}", sys.spec, f.name)];
    for (i, s) in chain.stages.iter().enumerate() {
        text.push(format!("  stage {i}: {s}"));
    }
    text.push(format!("termination: {:?}, rank {}", chain.termination, rank_text(&chain.rank())));
    if steps {
        for c in &chain.certificates {
            text.push(format!("  {} in stage {}: {} and {} in {}", c.point, c.stage, c.v1, c.v2, c.neighborhood));
        }
    }
    let mut report = base("derive");
    report["system"] = json!(sys.spec);
    report["map"] = json!(f.name);
    report["level"] = json!(level);
    report["set"] = json!(y.to_string());
    report["chain"] = chain_json(&chain, steps);
    report["rank"] = json!(chain.rank());
    let code = if chain.rank().is_capped() { EXIT_CAPPED } else { EXIT_OK };
    Ok(Outcome { report, text, code })
}

fn execute(command: &Command) -> Result<(Outcome, Format, bool)> {
    Ok(match command {
        Command::Rank { system, map, all, level, cap, format, timings } => {
            let sys = build_system(system)?;
            let out = if *all { rank_all(&sys, *level, *cap)? } else { rank_one(&sys, map.as_deref().unwrap_or(""), *level, *cap)? };
            (out, *format, *timings)
        }
        Command::Check { law, grid, format, timings } => (check(law, grid)?, *format, *timings),
        Command::Derive { system, map, level, set, steps, cap, format, timings } => {
            let sys = build_system(system)?;
            (derive(&sys, map, *level, set.as_deref(), *steps, *cap)?, *format, *timings)
        }
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var("OSCRANK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    configure_threads();
    let start = Instant::now();
    match execute(&cli.command) {
        Ok((mut outcome, format, timings)) => {
            let elapsed = start.elapsed();
            match format {
                Format::Json => {
                    if timings {
                        outcome.report["timings"] = json!({ "total_ms": elapsed.as_secs_f64() * 1000.0 });
                    }
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&outcome.report).expect("serializable"));
                }
                Format::Text => {
                    for line in &outcome.text {
                        let _ = writeln!(out, "{line}");
                    }
                    if timings {
                        let _ = writeln!(out, "time: {:.1} ms", elapsed.as_secs_f64() * 1000.0);
                    }
                }
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_BAD_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("oscrank").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn report(args: &[&str]) -> Value {
        let (code, out, err) = call(args);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn rank_shift_limit() {
        let v = report(&["rank", "--system", "multiorder:2", "--map", "shift-limit", "--level", "1"]);
        assert_eq!(v["rank"], json!({ "finite": 2 }));
        assert!(v.get("timings").is_none());
    }

    #[test]
    fn rank_identity_and_tail() {
        let v = report(&["rank", "--system", "dlo", "--map", "identity", "--level", "3"]);
        assert_eq!(v["rank"], json!({ "finite": 0 }));
        let v = report(&["rank", "--system", "cylinder", "--map", "tail-map", "--level", "1"]);
        assert_eq!(v["rank"], json!("infinite"));
    }

    #[test]
    fn rank_all_reports_the_system() {
        let v = report(&["rank", "--system", "cyclic", "--all", "--level", "2"]);
        assert_eq!(v["system_beta"], json!({ "finite": 1 }));
    }

    #[test]
    fn capped_exit_code() {
        let (code, out, _) = call(&["rank", "--system", "multiorder:3", "--map", "shift-limit", "--level", "1", "--cap", "2"]);
        assert_eq!(code, EXIT_CAPPED);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rank"], json!({ "capped": 2 }));
    }

    #[test]
    fn derive_chains() {
        let v = report(&["derive", "--system", "multiorder:3", "--map", "shift-limit", "--level", "1"]);
        assert_eq!(v["chain"]["stages"].as_array().unwrap().len(), 5);
        assert_eq!(v["chain"]["stages"][4], json!("{}"));
        let v = report(&["derive", "--system", "dlo", "--map", "stretch-limit", "--level", "2"]);
        assert_eq!(v["chain"]["stages"], json!(["[-inf,+inf]", "{0+}", "{}"]));
        let v = report(&["derive", "--system", "dlo", "--map", "stretch-limit", "--set", "{}"]);
        assert_eq!(v["chain"]["stages"], json!(["{}"]));
        let v = report(&["derive", "--system", "dlo", "--map", "stretch-limit", "--level", "1", "--steps"]);
        assert!(!v["chain"]["witnesses"].as_array().unwrap().is_empty());
    }

    #[test]
    fn bad_inputs_exit_2() {
        assert_eq!(call(&["rank", "--system", "nope", "--map", "identity"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["rank", "--system", "dlo", "--map", "nope"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["check", "--law", "nope"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["derive", "--system", "dlo", "--map", "identity", "--set", "[0,"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["frobnicate"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["rank", "--system", "dlo", "--all", "--level", "2"];
        assert_eq!(call(&args).1, call(&args).1);
    }

    #[test]
    fn text_format() {
        let (code, out, _) = call(&["rank", "--system", "dlo", "--map", "stretch-limit", "--level", "1", "--format", "text"]);
        assert_eq!(code, 0);
        assert!(out.contains("beta(f, P) = finite 1"), "{out}");
    }
}
