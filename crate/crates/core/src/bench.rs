//! Step counts of certified programs against their polynomial bounds.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::deriv::check_ndlal;
use crate::lla::simulate_run;
use crate::stdlib::NamedProgram;
use crate::stratify::{decorate, normalize_levels, tower_bound};
use crate::term::{normalize, Strategy};

/// Fuel used when a bound is absent or too large to be useful.
pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub levels: usize,
    pub total_steps: usize,
    pub size_sum: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub term_size: usize,
    pub cert_size: usize,
    pub depth: usize,
    /// `|t|^(2^d)`, absent past `u128`.
    pub bound: Option<u128>,
    /// β-steps to normal form, per strategy label.
    pub steps: BTreeMap<String, usize>,
    pub level_trace: Option<LevelSummary>,
    pub lla_steps: Option<u64>,
    pub status: Status,
    pub problems: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Fail).count()
    }
}

/// Fuel below `bound`, capped.
pub fn fuel_for(bound: Option<u128>) -> u64 {
    match bound {
        Some(b) if b < DEFAULT_FUEL as u128 => b as u64 + 1,
        _ => DEFAULT_FUEL,
    }
}

fn row(p: &NamedProgram, strategies: &[Strategy]) -> BenchRow {
    let mut problems = Vec::new();
    let term_size = p.term.size();
    let (cert_size, depth) = p.certificate.as_ref().map(|c| (c.size(), c.depth())).unwrap_or((0, 0));
    let bound = tower_bound(term_size, depth);
    let fuel = fuel_for(bound);
    let mut steps = BTreeMap::new();
    let mut normal_form = None;
    for &s in strategies {
        let tr = normalize(&p.term, s, fuel);
        if !tr.normal {
            problems.push(format!("{}: no normal form within {fuel} steps", s.label()));
        }
        if bound.is_some_and(|b| tr.count as u128 > b) {
            problems.push(format!("{}: {} steps exceed the bound", s.label(), tr.count));
        }
        match &normal_form {
            None => normal_form = Some(tr.final_term.clone()),
            Some(nf) if !nf.alpha_eq(&tr.final_term) => problems.push(format!("{}: different normal form", s.label())),
            _ => {}
        }
        steps.insert(s.label(), tr.count);
    }
    let mut level_trace = None;
    let mut lla_steps = None;
    match &p.certificate {
        None => problems.push("no NDLAL certificate".into()),
        Some(cert) => {
            if let Err(e) = check_ndlal(cert) {
                problems.push(format!("certificate: {e}"));
            } else {
                match decorate(cert) {
                    Ok(st) => {
                        let tr = normalize_levels(&st);
                        problems.extend(tr.violations.iter().map(|v| format!("levels: {v}")));
                        level_trace = Some(LevelSummary { levels: tr.levels.len(), total_steps: tr.total_steps, size_sum: tr.size_sum });
                    }
                    Err(e) => problems.push(format!("decorate: {e}")),
                }
                let lfuel = fuel_for(tower_bound(cert_size, depth + 1));
                match simulate_run(cert, Strategy::LeftmostOutermost, lfuel) {
                    Ok(r) => {
                        problems.extend(r.violations.iter().map(|v| format!("simulation: {v}")));
                        lla_steps = Some(r.lla_steps);
                    }
                    Err(e) => problems.push(format!("simulation: {e}")),
                }
            }
        }
    }
    let status = if problems.is_empty() { Status::Pass } else { Status::Fail };
    BenchRow { name: p.name.clone(), term_size, cert_size, depth, bound, steps, level_trace, lla_steps, status, problems }
}

/// One row per program, in input order; rows are computed independently.
pub fn bench(programs: &[NamedProgram], strategies: &[Strategy]) -> BenchReport {
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = programs.iter().map(|p| scope.spawn(move || row(p, strategies))).collect();
        handles.into_iter().map(|h| h.join().expect("bench row")).collect()
    });
    BenchReport { rows }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<18} {:>5} {:>5} {:>3} {:>14} {:>24} {:>8} {:>6}", "program", "|t|", "|D|", "d", "bound", "steps", "lla", "status")?;
        for r in &self.rows {
            let bound = r.bound.map(|b| b.to_string()).unwrap_or_else(|| "overflow".into());
            let bound = if bound.len() > 14 { format!("{:.3e}", r.bound.unwrap_or(0) as f64) } else { bound };
            let steps: Vec<String> = r.steps.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let lla = r.lla_steps.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            writeln!(f, "{:<18} {:>5} {:>5} {:>3} {:>14} {:>24} {:>8} {:>6}", r.name, r.term_size, r.cert_size, r.depth, bound, steps.join(" "), lla, status)?;
            for p in &r.problems {
                writeln!(f, "    {p}")?;
            }
        }
        Ok(())
    }
}
