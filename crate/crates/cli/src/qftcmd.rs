//! Transition probabilities for the configured Fock-space problems, next to
//! Dyson partial sums.

use std::collections::BTreeMap;
use std::path::Path;

use genfun_core::qft::{dyson_partial_sums, final_distribution, sweep_epsilon, transition, truncation_study};
use genfun_core::{Epsilon, EpsilonGrid};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ClosedForm, QftBlock, Validated};
use crate::output::{self, fmt_float};

pub const SCHEMA_VERSION: u32 = 1;
pub const QFT_HEADER: [&str; 6] = ["problem", "epsilon", "N", "time", "probability", "unitarity_defect"];
pub const DYSON_HEADER: [&str; 4] = ["problem", "order", "partial_sum_probability", "exact_probability"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QftRow {
    pub problem: String,
    pub epsilon: f64,
    pub dimension: usize,
    pub time: f64,
    pub probability: f64,
    pub unitarity_defect: f64,
    /// `|Σ_n P(n) − 1|`; summary only.
    #[serde(skip)]
    pub completeness_defect: f64,
}

impl QftRow {
    fn fields(&self) -> [String; 6] {
        [
            self.problem.clone(),
            fmt_float(self.epsilon),
            self.dimension.to_string(),
            fmt_float(self.time),
            fmt_float(self.probability),
            fmt_float(self.unitarity_defect),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DysonRow {
    pub problem: String,
    pub order: usize,
    pub partial_sum_probability: f64,
    pub exact_probability: f64,
}

impl DysonRow {
    fn fields(&self) -> [String; 4] {
        [
            self.problem.clone(),
            self.order.to_string(),
            fmt_float(self.partial_sum_probability),
            fmt_float(self.exact_probability),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DysonSummary {
    pub epsilon: f64,
    pub time: f64,
    pub time_steps: usize,
    pub max_order: usize,
    pub exact_probability: f64,
    pub first_divergence_order: Option<usize>,
    pub max_partial_sum_probability: f64,
    pub last_partial_sum_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub time: f64,
    pub dimension: usize,
    pub verdict: String,
    pub limit: Option<f64>,
    pub limit_exists: bool,
    pub spread: f64,
    pub all_in_unit_interval: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationEntry {
    pub dimension: usize,
    pub probability: f64,
    pub difference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSummary {
    pub epsilon: f64,
    pub time: f64,
    pub rows: Vec<TruncationEntry>,
    pub tolerance: f64,
    pub first_converged_dimension: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSummary {
    pub name: String,
    pub note: Option<String>,
    pub rows: usize,
    pub max_unitarity_defect: f64,
    pub max_completeness_defect: f64,
    pub closed_form_max_error: Option<f64>,
    pub sweep: Option<SweepSummary>,
    pub truncation: Option<TruncationSummary>,
    pub dyson: Option<DysonSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub problems: Vec<ProblemSummary>,
    pub gates: BTreeMap<String, bool>,
    pub failures: Vec<String>,
}

pub struct Outcome {
    pub rows: Vec<QftRow>,
    pub dyson: Vec<DysonRow>,
    pub summary: Summary,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.summary.failures.is_empty()
    }
}

struct Cell<'a> {
    block: &'a QftBlock,
    eps: Epsilon,
    dimension: usize,
    time: f64,
}

fn block_epsilons(block: &QftBlock, grid: &EpsilonGrid) -> Vec<Epsilon> {
    let all = grid.epsilons();
    if block.sweep {
        all
    } else {
        all[..1].to_vec()
    }
}

fn row_id(problem: &str, eps: f64, n: usize, t: f64) -> String {
    format!("{problem} eps={} N={n} t={}", fmt_float(eps), fmt_float(t))
}

pub fn run(v: &Validated) -> Outcome {
    let blocks = &v.config.qft;
    let tol = &v.config.tolerances;
    let cells: Vec<Cell> = blocks
        .iter()
        .flat_map(|b| {
            let eps = block_epsilons(b, &v.grid);
            b.dims().into_iter().flat_map(move |dimension| {
                let eps = eps.clone();
                b.times.iter().flat_map(move |&time| eps.clone().into_iter().map(move |eps| Cell { block: b, eps, dimension, time }))
            })
        })
        .collect();

    let results: Vec<Result<QftRow, String>> = cells
        .par_iter()
        .map(|c| {
            let id = row_id(&c.block.name, c.eps.value(), c.dimension, c.time);
            let problem = c.block.problem(c.dimension, c.time).map_err(|e| format!("{id}: {e}"))?;
            let tr = transition(&problem, c.eps).map_err(|e| format!("{id}: {e}"))?;
            let dist = final_distribution(&problem, c.eps).map_err(|e| format!("{id}: {e}"))?;
            Ok(QftRow {
                problem: c.block.name.clone(),
                epsilon: c.eps.value(),
                dimension: c.dimension,
                time: c.time,
                probability: tr.probability,
                unitarity_defect: tr.unitarity_defect,
                completeness_defect: (dist.iter().sum::<f64>() - 1.0).abs(),
            })
        })
        .collect();

    let mut failures = Vec::new();
    let mut gates: BTreeMap<String, bool> = BTreeMap::new();
    let gate = |name: &str, ok: bool, gates: &mut BTreeMap<String, bool>| {
        *gates.entry(name.to_string()).or_insert(true) &= ok;
    };
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                gate("all_rows_computed", false, &mut gates);
                failures.push(e);
            }
        }
    }
    gate("all_rows_computed", true, &mut gates);
    rows.sort_by(|a, b| {
        a.problem
            .cmp(&b.problem)
            .then(a.epsilon.total_cmp(&b.epsilon))
            .then(a.dimension.cmp(&b.dimension))
            .then(a.time.total_cmp(&b.time))
    });

    for r in &rows {
        let id = row_id(&r.problem, r.epsilon, r.dimension, r.time);
        let in_range = (0.0..=1.0).contains(&r.probability);
        gate("probability_range", in_range, &mut gates);
        if !in_range {
            failures.push(format!("{id}: probability {} outside [0, 1]", fmt_float(r.probability)));
        }
        let unitary = r.unitarity_defect < tol.unitarity;
        gate("unitarity", unitary, &mut gates);
        if !unitary {
            failures.push(format!("{id}: unitarity defect {:.3e}", r.unitarity_defect));
        }
        let complete = r.completeness_defect < tol.completeness;
        gate("completeness", complete, &mut gates);
        if !complete {
            failures.push(format!("{id}: completeness defect {:.3e}", r.completeness_defect));
        }
    }

    // per-block extras are independent of each other
    let extras: Vec<(ProblemSummary, Vec<DysonRow>, Vec<Check>)> =
        blocks.par_iter().map(|b| block_extras(b, v, &rows)).collect();
    let mut problems = Vec::new();
    let mut dyson = Vec::new();
    for (summary, drows, checks) in extras {
        problems.push(summary);
        dyson.extend(drows);
        for (name, ok, failure) in checks {
            gate(&name, ok, &mut gates);
            failures.extend(failure);
        }
    }
    dyson.sort_by(|a, b| a.problem.cmp(&b.problem).then(a.order.cmp(&b.order)));
    problems.sort_by(|a, b| a.name.cmp(&b.name));

    Outcome { rows, dyson, summary: Summary { schema_version: SCHEMA_VERSION, problems, gates, failures } }
}

type Check = (String, bool, Option<String>);

fn check(name: &str, ok: bool, failure: impl FnOnce() -> String) -> Check {
    (name.to_string(), ok, if ok { None } else { Some(failure()) })
}

fn block_extras(b: &QftBlock, v: &Validated, rows: &[QftRow]) -> (ProblemSummary, Vec<DysonRow>, Vec<Check>) {
    let tol = &v.config.tolerances;
    let eps0 = v.grid.epsilons()[0];
    let mine: Vec<&QftRow> = rows.iter().filter(|r| r.problem == b.name).collect();
    let mut checks = Vec::new();
    let name = &b.name;
    let last_time = *b.times.last().unwrap();

    let closed_form_max_error = b.closed_form.map(|ClosedForm::Rabi| {
        let g = b.coupling.constant_value().unwrap_or(f64::NAN);
        mine.iter().map(|r| (r.probability - (g * r.time).sin().powi(2)).abs()).fold(0.0, f64::max)
    });
    if let Some(err) = closed_form_max_error {
        checks.push(check("closed_form", err <= tol.closed_form, || format!("{name}: closed-form error {err:.3e}")));
    }

    let sweep = b.sweep.then(|| {
        let problem = b.problem(b.dimension, last_time);
        match problem.map_err(|e| e.to_string()).and_then(|p| {
            sweep_epsilon(&p, &v.grid, &tol.thresholds()).map_err(|e| e.to_string())
        }) {
            Ok(s) => {
                let spread = s.spread();
                let all_in = s.samples.iter().all(|&(_, p)| (0.0..=1.0).contains(&p));
                checks.push(check("probability_range", all_in, || format!("{name}: sweep left [0, 1]")));
                if b.expect_eps_independent {
                    checks.push(check("eps_independent", spread < tol.sweep_spread, || {
                        format!("{name}: probabilities spread {spread:.3e} over the grid")
                    }));
                }
                Some(SweepSummary {
                    time: last_time,
                    dimension: b.dimension,
                    verdict: s.class.verdict.name().into(),
                    limit: s.class.verdict.limit(),
                    limit_exists: s.limit_exists,
                    spread,
                    all_in_unit_interval: all_in,
                })
            }
            Err(e) => {
                checks.push(check("sweep", false, || format!("{name}: sweep failed: {e}")));
                None
            }
        }
    });

    let truncation = b.dimensions.as_ref().map(|dims| {
        let result = b
            .problem(dims[0], last_time)
            .map_err(|e| e.to_string())
            .and_then(|p| truncation_study(&p, eps0, dims).map_err(|e| e.to_string()));
        match result {
            Ok(study) => Some(TruncationSummary {
                epsilon: eps0.value(),
                time: last_time,
                first_converged_dimension: study.first_converged(tol.truncation),
                tolerance: tol.truncation,
                rows: study
                    .rows
                    .iter()
                    .map(|r| TruncationEntry { dimension: r.dimension, probability: r.probability, difference: r.difference })
                    .collect(),
            }),
            Err(e) => {
                checks.push(check("truncation", false, || format!("{name}: truncation study failed: {e}")));
                None
            }
        }
    });

    let mut drows = Vec::new();
    let dyson = b.dyson.as_ref().and_then(|d| {
        let time = b.dyson_time().unwrap();
        let result = b
            .problem(b.dimension, time)
            .map_err(|e| e.to_string())
            .and_then(|p| dyson_partial_sums(&p, eps0, d.max_order, d.time_steps).map_err(|e| e.to_string()));
        match result {
            Ok(series) => {
                for s in &series.partial_sums {
                    drows.push(DysonRow {
                        problem: name.clone(),
                        order: s.order,
                        partial_sum_probability: s.probability,
                        exact_probability: series.exact_probability,
                    });
                }
                let last = series.partial_sums.last().unwrap();
                let last_err = (last.probability - series.exact_probability).abs();
                let exact_ok = (0.0..=1.0).contains(&series.exact_probability);
                checks.push(check("probability_range", exact_ok, || format!("{name}: exact probability outside [0, 1]")));
                if d.expect_divergence {
                    checks.push(check("dyson_divergence", series.first_divergence_order.is_some(), || {
                        format!("{name}: no partial sum up to order {} misbehaved", d.max_order)
                    }));
                }
                if let Some(within) = d.agree_within {
                    checks.push(check("dyson_agreement", last_err <= within, || {
                        format!("{name}: order-{} partial sum off by {last_err:.3e}", d.max_order)
                    }));
                }
                Some(DysonSummary {
                    epsilon: eps0.value(),
                    time,
                    time_steps: d.time_steps,
                    max_order: d.max_order,
                    exact_probability: series.exact_probability,
                    first_divergence_order: series.first_divergence_order,
                    max_partial_sum_probability: series.partial_sums.iter().map(|s| s.probability).fold(0.0, f64::max),
                    last_partial_sum_error: last_err,
                })
            }
            Err(e) => {
                checks.push(check("dyson", false, || format!("{name}: dyson series failed: {e}")));
                None
            }
        }
    });

    let summary = ProblemSummary {
        name: name.clone(),
        note: b.note.clone(),
        rows: mine.len(),
        max_unitarity_defect: mine.iter().map(|r| r.unitarity_defect).fold(0.0, f64::max),
        max_completeness_defect: mine.iter().map(|r| r.completeness_defect).fold(0.0, f64::max),
        closed_form_max_error,
        sweep: sweep.flatten(),
        truncation: truncation.flatten(),
        dyson,
    };
    (summary, drows, checks)
}

pub fn write(outcome: &Outcome, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    output::write_csv(&dir.join("qft.csv"), &QFT_HEADER, outcome.rows.iter().map(QftRow::fields))?;
    output::write_csv(&dir.join("dyson.csv"), &DYSON_HEADER, outcome.dyson.iter().map(DysonRow::fields))?;
    output::write_json(&dir.join("qft_summary.json"), &outcome.summary)
}
