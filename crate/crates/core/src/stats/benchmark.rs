//! Seeded Monte Carlo comparison of planners.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{anytime_violations, summarize, welch_one_sided, McSeries, SummaryRow, WelchReport};
use crate::error::{Error, Result};
use crate::planners::{plan, Environment, PlannerConfig, PlannerKind, PlannerResult, Timing};
use crate::vessel::VesselState;

/// Deterministic part of a benchmark: identical for identical seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub n_mc: usize,
    pub base_seed: u64,
    pub alpha: f64,
    pub planners: Vec<PlannerSummary>,
    /// PQ-RRT* against each other planner on solution length.
    pub welch: Vec<WelchEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerSummary {
    pub planner: PlannerKind,
    pub n_mc: usize,
    pub successes: usize,
    pub rho_mc: f64,
    pub d_sol: Option<SummaryRow>,
    /// Solution lengths of the successful runs in seed order.
    pub d_sol_samples: Vec<f64>,
    pub first_solution_iteration: Option<SummaryRow>,
    pub node_count: SummaryRow,
    /// Iterations, over all runs, where the best cost increased after the
    /// first solution.
    pub anytime_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WelchEntry {
    pub a: PlannerKind,
    pub b: PlannerKind,
    pub report: Option<WelchReport>,
    /// Why no test was run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Wall-clock measurements, kept apart from the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkTimings {
    pub planners: Vec<PlannerTimings>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerTimings {
    pub planner: PlannerKind,
    pub t_sol0: Option<SummaryRow>,
    pub t_sol: Option<SummaryRow>,
    pub runs: Vec<Timing>,
}

#[derive(Debug, Clone)]
pub struct Benchmark {
    pub report: BenchmarkReport,
    pub timings: BenchmarkTimings,
    pub series: Vec<(PlannerKind, McSeries)>,
    /// Every run, grouped by planner and in seed order within a planner.
    pub results: Vec<PlannerResult>,
}

/// Runs every planner `n_mc` times with seeds `base_seed..base_seed + n_mc`
/// on up to `jobs` threads and compares PQ-RRT* with the others.
#[allow(clippy::too_many_arguments)]
pub fn run_benchmark(
    env: &Environment,
    start: &VesselState,
    goal: &VesselState,
    planners: &[(PlannerKind, PlannerConfig)],
    n_mc: usize,
    base_seed: u64,
    alpha: f64,
    jobs: usize,
) -> Result<Benchmark> {
    if n_mc == 0 {
        return Err(Error::invalid("n_mc must be at least 1"));
    }
    if planners.is_empty() {
        return Err(Error::invalid("no planners selected"));
    }
    for (_, cfg) in planners {
        cfg.validate()?;
    }
    let tasks: Vec<(usize, u64)> = (0..planners.len())
        .flat_map(|p| (0..n_mc as u64).map(move |i| (p, base_seed.wrapping_add(i))))
        .collect();
    let slots: Mutex<Vec<Option<Result<PlannerResult>>>> = Mutex::new((0..tasks.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(p, seed)) = tasks.get(i) else {
            break;
        };
        let (kind, cfg) = &planners[p];
        let cfg = PlannerConfig { seed, ..cfg.clone() };
        let r = plan(*kind, env, start, goal, &cfg);
        slots.lock().expect("worker panicked")[i] = Some(r);
    };
    std::thread::scope(|s| {
        for _ in 1..jobs.clamp(1, tasks.len()) {
            s.spawn(worker);
        }
        worker();
    });
    let results = slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every task ran"))
        .collect::<Result<Vec<_>>>()?;
    aggregate(planners, results, n_mc, base_seed, alpha)
}

fn summarize_opt(v: &[f64]) -> Option<SummaryRow> {
    summarize(v).ok()
}

fn aggregate(
    planners: &[(PlannerKind, PlannerConfig)],
    results: Vec<PlannerResult>,
    n_mc: usize,
    base_seed: u64,
    alpha: f64,
) -> Result<Benchmark> {
    let mut summaries = Vec::new();
    let mut timings = Vec::new();
    let mut series = Vec::new();
    for (p, (kind, _)) in planners.iter().enumerate() {
        let runs = &results[p * n_mc..(p + 1) * n_mc];
        let ok: Vec<&PlannerResult> = runs.iter().filter(|r| r.success).collect();
        let mc = McSeries {
            n_mc,
            successes: ok.len(),
            t_sol0: ok.iter().filter_map(|r| r.timing.t_first_solution).collect(),
            t_sol: ok.iter().map(|r| r.timing.t_total).collect(),
            d_sol: ok.iter().filter_map(|r| r.length).collect(),
        };
        let first: Vec<f64> = ok
            .iter()
            .filter_map(|r| r.first_solution_iteration.map(|i| i as f64))
            .collect();
        let nodes: Vec<f64> = runs.iter().map(|r| r.node_count as f64).collect();
        summaries.push(PlannerSummary {
            planner: *kind,
            n_mc,
            successes: mc.successes,
            rho_mc: mc.rho_mc(),
            d_sol: summarize_opt(&mc.d_sol),
            d_sol_samples: mc.d_sol.clone(),
            first_solution_iteration: summarize_opt(&first),
            node_count: summarize(&nodes)?,
            anytime_violations: runs.iter().map(|r| anytime_violations(&r.best_cost_series)).sum(),
        });
        timings.push(PlannerTimings {
            planner: *kind,
            t_sol0: summarize_opt(&mc.t_sol0),
            t_sol: summarize_opt(&mc.t_sol),
            runs: runs.iter().map(|r| r.timing).collect(),
        });
        series.push((*kind, mc));
    }

    let mut welch = Vec::new();
    if let Some(pq) = summaries.iter().find(|s| s.planner == PlannerKind::PqRrtStar) {
        for other in summaries.iter().filter(|s| s.planner != PlannerKind::PqRrtStar) {
            let (report, note) = match (pq.d_sol, other.d_sol) {
                (Some(a), Some(b)) if a.n == b.n && a.n >= 2 => {
                    match welch_one_sided(a.mean, a.std, b.mean, b.std, a.n, alpha) {
                        Ok(r) => (Some(r), None),
                        Err(e) => (None, Some(e.to_string())),
                    }
                }
                (Some(a), Some(b)) if a.n != b.n => (
                    None,
                    Some(format!("unsupported: unequal sample sizes ({} and {})", a.n, b.n)),
                ),
                _ => (None, Some("insufficient samples (need at least two solutions each)".into())),
            };
            welch.push(WelchEntry {
                a: pq.planner,
                b: other.planner,
                report,
                note,
            });
        }
    }

    Ok(Benchmark {
        report: BenchmarkReport {
            n_mc,
            base_seed,
            alpha,
            planners: summaries,
            welch,
        },
        timings: BenchmarkTimings { planners: timings },
        series,
        results,
    })
}

fn pm(row: Option<SummaryRow>, digits: usize) -> String {
    match row {
        Some(r) => format!("{:.*} ± {:.*}", digits, r.mean, digits, r.std),
        None => "-".into(),
    }
}

impl Benchmark {
    /// Plain-text tables: per-planner results, then the Welch tests.
    pub fn text_report(&self) -> String {
        let mut out = String::new();
        let w = 22;
        let _ = write!(out, "{:<16}", "");
        for s in &self.report.planners {
            let _ = write!(out, "{:>w$}", s.planner.label());
        }
        out.push('\n');
        let mut row = |name: &str, cells: Vec<String>| {
            let _ = write!(out, "{name:<16}");
            for c in cells {
                let _ = write!(out, "{c:>w$}");
            }
            out.push('\n');
        };
        row(
            "rho_mc [%]",
            self.report.planners.iter().map(|s| format!("{:.0}", s.rho_mc)).collect(),
        );
        row("t_sol,0 [s]", self.timings.planners.iter().map(|t| pm(t.t_sol0, 2)).collect());
        row("t_sol [s]", self.timings.planners.iter().map(|t| pm(t.t_sol, 2)).collect());
        row("d_sol [m]", self.report.planners.iter().map(|s| pm(s.d_sol, 1)).collect());

        if !self.report.welch.is_empty() {
            out.push('\n');
            let _ = write!(out, "{:<16}", format!("alpha = {}", self.report.alpha));
            for e in &self.report.welch {
                let _ = write!(out, "{:>w$}", format!("{} vs {}", e.a.label(), e.b.label()));
            }
            out.push('\n');
            let cell = |f: &dyn Fn(&WelchReport) -> String| -> Vec<String> {
                self.report
                    .welch
                    .iter()
                    .map(|e| e.report.as_ref().map_or_else(|| "-".into(), f))
                    .collect()
            };
            let rows: [(&str, Vec<String>); 5] = [
                ("t_s", cell(&|r| format!("{:.4}", r.t_s))),
                ("s_i [m]", cell(&|r| format!("{:.4}", r.s_i))),
                ("N_DOF", cell(&|r| r.dof.to_string())),
                ("t_(1-alpha)", cell(&|r| format!("{:.4}", r.t_threshold))),
                ("p", cell(&|r| format!("{:.4}", r.p_value))),
            ];
            for (name, cells) in rows {
                let _ = write!(out, "{name:<16}");
                for c in cells {
                    let _ = write!(out, "{c:>w$}");
                }
                out.push('\n');
            }
            for e in &self.report.welch {
                if let Some(note) = &e.note {
                    let _ = writeln!(out, "{} vs {}: {note}", e.a.label(), e.b.label());
                }
            }
        }
        out
    }

    /// One row per planner and metric.
    pub fn csv_report(&self) -> String {
        let mut out = String::from("planner,metric,n,mean,std,min,max\n");
        let mut push = |planner: PlannerKind, metric: &str, row: Option<SummaryRow>| {
            match row {
                Some(r) => {
                    let _ = writeln!(out, "{planner},{metric},{},{},{},{},{}", r.n, r.mean, r.std, r.min, r.max);
                }
                None => {
                    let _ = writeln!(out, "{planner},{metric},0,,,,");
                }
            }
        };
        for (s, t) in self.report.planners.iter().zip(&self.timings.planners) {
            push(s.planner, "d_sol", s.d_sol);
            push(s.planner, "t_sol0", t.t_sol0);
            push(s.planner, "t_sol", t.t_sol);
        }
        out
    }
}
