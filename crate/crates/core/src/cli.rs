//! The `dlal` command line.

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{bench, fuel_for, DEFAULT_FUEL};
use crate::deriv::{check_ndlal, check_nlal, translate_to_lal, DerivScript};
use crate::infer::{infer_report, InferOptions};
use crate::lla::simulate_run;
use crate::stdlib;
use crate::stratify::{decorate, normalize_levels, tower_bound};
use crate::term::{normalize, Strategy, Term};

#[derive(Parser, Debug)]
#[command(name = "dlal", version, about = "Dual light affine logic toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Lo,
    Ri,
    Random,
}

#[derive(Args, Debug)]
pub struct RunFlags {
    #[arg(long, value_enum, default_value = "lo")]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub fuel: Option<u64>,
}

impl RunFlags {
    fn strategy(&self) -> Strategy {
        to_strategy(self.strategy, self.seed)
    }
}

fn to_strategy(s: StrategyArg, seed: u64) -> Strategy {
    match s {
        StrategyArg::Lo => Strategy::LeftmostOutermost,
        StrategyArg::Ri => Strategy::RightmostInnermost,
        StrategyArg::Random => Strategy::Random(seed),
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a term and print it back
    Parse { input: String },
    /// Number of nodes of a term
    Size { input: String },
    /// β-normalize a term
    Normalize {
        input: String,
        #[command(flatten)]
        run: RunFlags,
        /// Certificate used to pick the default fuel
        #[arg(long)]
        cert: Option<String>,
    },
    /// Check a certificate (a JSON file or `stdlib:NAME`)
    Check {
        cert: String,
        /// Check as an NLAL script
        #[arg(long)]
        lal: bool,
    },
    /// Translate an NDLAL certificate to NLAL
    Translate { cert: String },
    /// Level-by-level normalization of a certified term
    Stratify {
        cert: String,
        /// Print the level table as CSV
        #[arg(long)]
        csv: bool,
    },
    /// Infer DLAL types
    Infer {
        input: String,
        #[arg(long, default_value_t = 8)]
        level_cap: u32,
    },
    /// Simulate β-reduction in the light affine calculus
    Lla {
        cert: String,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Step counts of a corpus against the bounds
    Bench {
        /// `stdlib` or a directory of `.lam` files with certificates
        #[arg(long, default_value = "stdlib")]
        corpus: String,
        /// Strategies to run; defaults to lo, ri and random
        #[arg(long, value_enum)]
        strategy: Vec<StrategyArg>,
        /// Number of seeds for the random strategy
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// First seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status with the text for stdout and stderr.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn fail(msg: impl ToString) -> Outcome {
        Outcome { code: 1, stdout: String::new(), stderr: format!("error: {}\n", msg.to_string()) }
    }
}

fn read_term(input: &str) -> Result<Term, String> {
    let text = if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?
    } else {
        input.to_string()
    };
    text.trim().parse::<Term>().map_err(|e| e.to_string())
}

fn read_cert(input: &str) -> Result<DerivScript, String> {
    if let Some(name) = input.strip_prefix("stdlib:") {
        let p = stdlib::by_name(name).map_err(|e| e.to_string())?;
        return p
            .certificate
            .or(p.lal_certificate)
            .ok_or_else(|| format!("{name} has no certificate"));
    }
    let text = std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?;
    DerivScript::from_json(&text).map_err(|e| format!("{input}: {e}"))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Parse arguments (program name first) and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let fmt = cli.format.unwrap_or(Format::Human);
    let res = match &cli.command {
        Command::Parse { input } => read_term(input).map(|t| match fmt {
            Format::Human => format!("{t}\n"),
            Format::Json => json(&serde_json::json!({
                "term": t.to_string(),
                "size": t.size(),
                "free": t.free_vars(),
            })),
        }),
        Command::Size { input } => read_term(input).map(|t| match fmt {
            Format::Human => format!("{}\n", t.size()),
            Format::Json => json(&serde_json::json!({ "size": t.size() })),
        }),
        Command::Normalize { input, run, cert } => normalize_cmd(input, run, cert.as_deref(), fmt),
        Command::Check { cert, lal } => check_cmd(cert, *lal, fmt),
        Command::Translate { cert } => translate_cmd(cert, fmt),
        Command::Stratify { cert, csv } => stratify_cmd(cert, *csv, fmt),
        Command::Infer { input, level_cap } => return infer_cmd(input, *level_cap, cli.format.unwrap_or(Format::Json)),
        Command::Lla { cert, run } => lla_cmd(cert, run, fmt),
        Command::Bench { corpus, strategy, seeds, seed } => return bench_cmd(corpus, strategy, *seeds, *seed, fmt),
    };
    match res {
        Ok(s) => Outcome::ok(s),
        Err(e) => Outcome::fail(e),
    }
}

fn normalize_cmd(input: &str, run: &RunFlags, cert: Option<&str>, fmt: Format) -> Result<String, String> {
    let t = read_term(input)?;
    let fuel = match (run.fuel, cert) {
        (Some(f), _) => f,
        (None, Some(c)) => {
            let s = read_cert(c)?;
            fuel_for(tower_bound(s.size(), s.depth() + 1))
        }
        (None, None) => DEFAULT_FUEL,
    };
    let tr = normalize(&t, run.strategy(), fuel);
    if !tr.normal {
        return Err(format!("no normal form within {fuel} steps"));
    }
    Ok(match fmt {
        Format::Human => format!("{}\nsteps: {}\n", tr.final_term, tr.count),
        Format::Json => json(&tr),
    })
}

fn check_cmd(cert: &str, lal: bool, fmt: Format) -> Result<String, String> {
    let s = read_cert(cert)?;
    let (judgement, subject, ty, depth) = if lal {
        let c = check_nlal(&s).map_err(|e| e.to_string())?;
        (c.j.to_string(), c.j.subject.to_string(), c.j.ty.to_string(), s.depth())
    } else {
        let c = check_ndlal(&s).map_err(|e| e.to_string())?;
        (c.j.to_string(), c.j.subject.to_string(), c.j.ty.to_string(), s.depth())
    };
    Ok(match fmt {
        Format::Human => format!("{judgement}\n"),
        Format::Json => json(&serde_json::json!({
            "judgement": judgement,
            "term": subject,
            "type": ty,
            "size": s.size(),
            "depth": depth,
        })),
    })
}

fn translate_cmd(cert: &str, fmt: Format) -> Result<String, String> {
    let s = read_cert(cert)?;
    let t = translate_to_lal(&s).map_err(|e| e.to_string())?;
    let c = check_nlal(&t).map_err(|e| e.to_string())?;
    Ok(match fmt {
        Format::Human => format!("{}\n", c.j),
        Format::Json => t.to_json() + "\n",
    })
}

fn stratify_cmd(cert: &str, csv: bool, fmt: Format) -> Result<String, String> {
    let s = read_cert(cert)?;
    let st = decorate(&s).map_err(|e| e.to_string())?;
    let tr = normalize_levels(&st);
    if csv {
        return Ok(tr.to_csv());
    }
    Ok(match fmt {
        Format::Human => {
            let mut out = format!("{st}\n");
            out.push_str(&tr.to_csv());
            out.push_str(&format!("normal form: {}\n", tr.final_term));
            for v in &tr.violations {
                out.push_str(&format!("violation: {v}\n"));
            }
            out
        }
        Format::Json => json(&tr),
    })
}

fn infer_cmd(input: &str, level_cap: u32, fmt: Format) -> Outcome {
    let t = match read_term(input) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(e),
    };
    let rep = match infer_report(&t, &InferOptions::with_cap(level_cap)) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(e),
    };
    let stdout = match fmt {
        Format::Json => json(&rep.results),
        Format::Human => {
            let mut out = String::new();
            for r in &rep.results {
                out.push_str(&format!("{}\n", r.ty));
            }
            if let Some(first) = rep.rejected.first() {
                out.push_str(&format!("rejected {} of {} solutions, e.g. {first}\n", rep.rejected.len(), rep.solutions_tried));
            }
            out
        }
    };
    let code = if rep.results.is_empty() { 1 } else { 0 };
    let stderr = if code == 1 { "error: no DLAL type found\n".to_string() } else { String::new() };
    Outcome { code, stdout, stderr }
}

fn lla_cmd(cert: &str, run: &RunFlags, fmt: Format) -> Result<String, String> {
    let s = read_cert(cert)?;
    let fuel = run.fuel.unwrap_or_else(|| fuel_for(tower_bound(s.size(), s.depth() + 1)));
    let r = simulate_run(&s, run.strategy(), fuel).map_err(|e| e.to_string())?;
    if !r.violations.is_empty() {
        return Err(format!("simulation violations: {}", r.violations.join("; ")));
    }
    Ok(match fmt {
        Format::Human => format!(
            "strategy {}: {} beta steps, {} light affine steps, bound {}\n",
            r.strategy,
            r.beta_steps,
            r.lla_steps,
            r.bound.map(|b| b.to_string()).unwrap_or_else(|| "overflow".into())
        ),
        Format::Json => json(&r),
    })
}

fn bench_cmd(corpus: &str, strategy: &[StrategyArg], seeds: u64, seed: u64, fmt: Format) -> Outcome {
    let programs = if corpus == "stdlib" {
        stdlib::corpus()
    } else {
        match stdlib::load_corpus(Path::new(corpus)) {
            Ok(p) => p,
            Err(e) => return Outcome::fail(e),
        }
    };
    let chosen: Vec<StrategyArg> =
        if strategy.is_empty() { vec![StrategyArg::Lo, StrategyArg::Ri, StrategyArg::Random] } else { strategy.to_vec() };
    let mut strategies = Vec::new();
    for s in chosen {
        if s == StrategyArg::Random {
            strategies.extend((seed..seed + seeds).map(Strategy::Random));
        } else {
            strategies.push(to_strategy(s, seed));
        }
    }
    let report = bench(&programs, &strategies);
    let stdout = match fmt {
        Format::Human => report.to_string(),
        Format::Json => json(&report),
    };
    let code = if report.failures() > 0 { 1 } else { 0 };
    Outcome { code, stdout, stderr: String::new() }
}
