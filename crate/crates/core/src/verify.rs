//! Named scenarios reproducing each characterization result, and their
//! reports.
//!
//! Every number in a [`ScenarioResult`] comes from a library operation; a
//! scenario only decides which operations to run and which expectations to
//! hold them to. Reports are deterministic for a given seed: wall-clock
//! runtime is kept out of the JSON form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::checks::{
    check_decomposable_binary, check_dpi, check_shannon_inequality, check_sufficiency, sufficiency_gap, trial_rng,
    CheckReport,
};
use crate::divergence::{catalog, Divergence, DivergenceSpec, Generator};
use crate::error::{Error, Result};
use crate::family::{bregman_from_symmetric_g, build_f_from_h, kl_type_from_h, random_symmetric_convex_g, HGenerator};
use crate::fitting::{bregman_f_residual, fit_bregman_binary, fit_f_divergence, ConvexPiecewiseLinearFit};
use crate::function::ScalarFunction;
use crate::simplex::{Distribution, SufficiencyScenario};

/// Version tag of the JSON report layout.
pub const SCHEMA: &str = "divergence-lab/1";

/// Checker sizes used by the scenarios.
pub const DPI_GRID: usize = 50;
pub const DPI_TRIALS: u64 = 100_000;
pub const FAMILY_DPI_GRID: usize = 12;
pub const SWAP_GRID: usize = 200;
pub const SUFFICIENCY_TRIALS: u64 = 10_000;
pub const SHANNON_TRIALS: u64 = 20_000;
pub const FIT_PAIRS: usize = 1000;
pub const FIT_KNOTS: usize = 48;
pub const RANDOM_FAMILY_SIZE: u64 = 20;

/// A registered scenario and the claim it reproduces.
#[derive(Clone, Copy, Debug)]
pub struct ScenarioInfo {
    pub id: &'static str,
    pub claim: &'static str,
}

pub const SCENARIOS: &[ScenarioInfo] = &[
    ScenarioInfo {
        id: "catalog-dpi",
        claim: "KL, total variation, Hellinger and chi-squared satisfy data processing",
    },
    ScenarioInfo {
        id: "tv-squared-counterexample",
        claim: "squared total variation is decomposable and satisfies data processing on two symbols, yet is not an f-divergence",
    },
    ScenarioInfo {
        id: "kl-type-dpi-converse",
        claim: "KL-type distances built from a nondecreasing h satisfy binary data processing; a decreasing h breaks it",
    },
    ScenarioInfo {
        id: "kl-type-example",
        claim: "h(x) = x^2 yields f(x) = x^2/2 - x + C and L = (p - q)^2/2; h(x) = x/(1 - x) yields binary KL",
    },
    ScenarioInfo {
        id: "sufficiency-uniqueness-n3",
        claim: "on three or more symbols the squared Euclidean Bregman divergence violates sufficiency while KL satisfies it",
    },
    ScenarioInfo {
        id: "sufficiency-binary-family",
        claim: "on two symbols every Bregman divergence with a symmetric convex generator satisfies sufficiency",
    },
    ScenarioInfo {
        id: "bregman-f-residual",
        claim: "the Bregman divergence of negative entropy coincides with the f-divergence of x ln x; the Brier generator does not",
    },
    ScenarioInfo {
        id: "kl-unique-bregman-f",
        claim: "among kl, brier, tv_squared and two-symbol euclidean only KL is both a Bregman divergence and an f-divergence",
    },
    ScenarioInfo {
        id: "shannon-inequality",
        claim: "f(x) = c ln x + b with c <= 0 satisfies the Shannon-type inequality on every alphabet; x^2/2 - x only on two symbols",
    },
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// One asserted fact of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub description: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario_id: String,
    pub claim: String,
    pub status: Status,
    pub seed: u64,
    pub expectations: Vec<Expectation>,
    /// Scalar quantities computed along the way, keyed by name.
    pub values: BTreeMap<String, f64>,
    pub reports: Vec<CheckReport>,
    pub fits: Vec<ConvexPiecewiseLinearFit>,
    /// Wall-clock seconds; not serialized so reports stay reproducible.
    #[serde(skip)]
    pub runtime: f64,
}

impl ScenarioResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Accumulates expectations; component errors become failed expectations.
struct Run {
    result: ScenarioResult,
}

impl Run {
    fn new(info: &ScenarioInfo, seed: u64) -> Self {
        Self {
            result: ScenarioResult {
                scenario_id: info.id.to_string(),
                claim: info.claim.to_string(),
                status: Status::Pass,
                seed,
                expectations: Vec::new(),
                values: BTreeMap::new(),
                reports: Vec::new(),
                fits: Vec::new(),
                runtime: 0.0,
            },
        }
    }

    fn expect(&mut self, description: impl Into<String>, passed: bool) {
        self.result.expectations.push(Expectation { description: description.into(), passed });
    }

    fn value(&mut self, key: impl Into<String>, v: f64) {
        self.result.values.insert(key.into(), v);
    }

    fn ok<T>(&mut self, context: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.expect(format!("{context}: {e}"), false);
                None
            }
        }
    }

    /// Records a check report and returns whether it found a violation.
    fn report(&mut self, context: &str, r: Result<CheckReport>) -> Option<bool> {
        let report = self.ok(context, r)?;
        let violated = report.is_violation();
        self.result.reports.push(report);
        Some(violated)
    }

    fn fit(&mut self, context: &str, r: Result<ConvexPiecewiseLinearFit>) -> Option<ConvexPiecewiseLinearFit> {
        let fit = self.ok(context, r)?;
        self.result.fits.push(fit.clone());
        Some(fit)
    }

    fn finish(mut self) -> ScenarioResult {
        let all = !self.result.expectations.is_empty() && self.result.expectations.iter().all(|e| e.passed);
        self.result.status = if all { Status::Pass } else { Status::Fail };
        self.result
    }
}

/// Looks up a registered scenario.
pub fn scenario_info(id: &str) -> Result<&'static ScenarioInfo> {
    SCENARIOS.iter().find(|s| s.id == id).ok_or_else(|| Error::UnknownName(id.to_string()))
}

pub fn run_scenario(id: &str, seed: u64) -> Result<ScenarioResult> {
    let info = scenario_info(id)?;
    let start = Instant::now();
    let mut run = Run::new(info, seed);
    match info.id {
        "catalog-dpi" => catalog_dpi(&mut run, seed),
        "tv-squared-counterexample" => tv_squared_counterexample(&mut run, seed),
        "kl-type-dpi-converse" => kl_type_dpi_converse(&mut run, seed),
        "kl-type-example" => kl_type_example(&mut run),
        "sufficiency-uniqueness-n3" => sufficiency_uniqueness(&mut run, seed),
        "sufficiency-binary-family" => sufficiency_binary_family(&mut run, seed),
        "bregman-f-residual" => bregman_residual(&mut run),
        "kl-unique-bregman-f" => kl_unique_bregman_f(&mut run, seed),
        "shannon-inequality" => shannon_inequality(&mut run, seed),
        _ => unreachable!("registered scenario without a runner"),
    }
    let mut result = run.finish();
    result.runtime = start.elapsed().as_secs_f64();
    Ok(result)
}

/// Every registered scenario, in registration order.
pub fn run_all(seed: u64) -> Vec<ScenarioResult> {
    SCENARIOS.iter().map(|s| run_scenario(s.id, seed).expect("registered scenario")).collect()
}

fn catalog_dpi(run: &mut Run, seed: u64) {
    for name in ["kl", "tv", "hellinger", "chi2"] {
        let Some(d) = run.ok(name, catalog(name)) else { continue };
        for n in [2, 3, 4] {
            let context = format!("{name} data processing at n = {n}");
            if let Some(violated) = run.report(&context, check_dpi(&d, n, DPI_GRID, DPI_TRIALS, seed)) {
                run.expect(format!("{context}: no violation"), !violated);
            }
        }
    }
}

fn tv_squared_counterexample(run: &mut Run, seed: u64) {
    let (Some(tv2), Some(kl)) = (run.ok("tv_squared", catalog("tv_squared")), run.ok("kl", catalog("kl"))) else {
        return;
    };
    if let Some(violated) = run.report("tv_squared swap symmetry", check_decomposable_binary(&tv2, SWAP_GRID)) {
        run.expect("tv_squared is swap-symmetric on two symbols", !violated);
    }
    if let Some(violated) = run.report("tv_squared data processing", check_dpi(&tv2, 2, DPI_GRID, DPI_TRIALS, seed)) {
        run.expect("tv_squared satisfies data processing on two symbols", !violated);
    }
    let fit_tv2 = run.fit("tv_squared f-divergence fit", fit_f_divergence(&tv2, FIT_PAIRS, FIT_KNOTS, seed));
    let fit_kl = run.fit("kl f-divergence fit", fit_f_divergence(&kl, FIT_PAIRS, FIT_KNOTS, seed));
    if let (Some(a), Some(b)) = (fit_tv2, fit_kl) {
        run.value("tv_squared_fit_residual", a.residual);
        run.value("kl_fit_residual", b.residual);
        run.expect("tv_squared fails the f-divergence fit", !a.passed);
        run.expect("tv_squared fit residual exceeds 100x the KL fit residual", a.residual > 100.0 * b.residual);
    }
}

/// The generating functions with nondecreasing h exercised by the scenarios.
pub const NONDECREASING_H: &[&str] = &["square", "identity", "odds", "ramp"];

fn kl_type_dpi_converse(run: &mut Run, seed: u64) {
    for name in NONDECREASING_H {
        let spec = ScalarFunction::named(name).and_then(|h| HGenerator::new(h, HGenerator::DEFAULT_SAMPLES));
        let Some(d) = run.ok(name, spec.and_then(|g| kl_type_from_h(&g))) else { continue };
        let context = format!("KL-type distance from h = {name}");
        if let Some(violated) = run.report(&context, check_dpi(&d, 2, FAMILY_DPI_GRID, DPI_TRIALS, seed)) {
            run.expect(format!("{context}: no data processing violation"), !violated);
        }
    }
    let decreasing = HGenerator::unchecked(ScalarFunction::Polynomial(vec![0.5, -1.0]), 1024);
    let Some(d) = run.ok("h = 0.5 - x", kl_type_from_h(&decreasing)) else { return };
    let Some(report) = run.ok("h = 0.5 - x", check_dpi(&d, 2, FAMILY_DPI_GRID, DPI_TRIALS, seed)) else { return };
    let gap = report.witness.as_ref().map_or(f64::NEG_INFINITY, |w| w.gap);
    run.value("decreasing_h_witness_gap", gap);
    run.expect("h = 0.5 - x yields a violation witness with gap > 1e-6", gap > 1e-6);
    run.result.reports.push(report);
}

fn kl_type_example(run: &mut Run) {
    let grid: Vec<f64> = (1..=200).map(|i| i as f64 / 201.0).collect();
    let square = HGenerator::new(ScalarFunction::named("square").expect("named"), HGenerator::DEFAULT_SAMPLES);
    if let Some(gen) = run.ok("h = x^2", square) {
        if let Some(f) = run.ok("h = x^2 generator", build_f_from_h(&gen)) {
            // f is anchored at f(1/2) = 0, which fixes C = 3/8.
            let err = (1..=99)
                .map(|i| i as f64 / 100.0)
                .map(|x| (f.value(x) - (0.5 * x * x - x + 0.375)).abs())
                .fold(0.0, f64::max);
            run.value("square_f_max_error", err);
            run.expect("f matches x^2/2 - x + C within 1e-8 on [0.01, 0.99]", err <= 1e-8);
        }
        if let Some(d) = run.ok("h = x^2 distance", kl_type_from_h(&gen)) {
            let err = max_grid_error(&grid, |p, q| Ok((d.evaluate(&bin(p), &bin(q))? - 0.5 * (p - q) * (p - q)).abs()));
            if let Some(err) = run.ok("h = x^2 distance", err) {
                run.value("square_distance_max_error", err);
                run.expect("L equals (p - q)^2/2 within 1e-8 on a 200 x 200 grid", err <= 1e-8);
            }
        }
    }
    let odds = HGenerator::new(ScalarFunction::Odds, HGenerator::DEFAULT_SAMPLES).and_then(|g| kl_type_from_h(&g));
    if let (Some(d), Some(kl)) = (run.ok("h = x/(1 - x)", odds), run.ok("kl", catalog("kl"))) {
        let err = max_grid_error(&grid, |p, q| {
            Ok((d.evaluate(&bin(p), &bin(q))? - kl.evaluate(&bin(p), &bin(q))?).abs())
        });
        if let Some(err) = run.ok("h = x/(1 - x) distance", err) {
            run.value("odds_kl_max_error", err);
            run.expect("h = x/(1 - x) reproduces binary KL within 1e-8", err <= 1e-8);
        }
    }
}

fn bin(p: f64) -> Distribution<f64> {
    Distribution::from_trusted(vec![p, 1.0 - p])
}

fn max_grid_error(grid: &[f64], err: impl Fn(f64, f64) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &p in grid {
        for &q in grid {
            let e = err(p, q)?;
            worst = if e.is_nan() { f64::NAN } else { worst.max(e) };
        }
    }
    Ok(worst)
}

fn sufficiency_uniqueness(run: &mut Run, seed: u64) {
    let (Some(euclid), Some(kl)) = (run.ok("euclidean", catalog("euclidean")), run.ok("kl", catalog("kl"))) else {
        return;
    };
    let merge = Distribution::new(vec![0.2, 0.2, 0.6])
        .and_then(|p| Ok((p, Distribution::new(vec![0.1, 0.1, 0.8])?)))
        .and_then(|(p, q)| SufficiencyScenario::merge(p, q, 0, 1));
    if let Some(sc) = run.ok("merge of the first two symbols", merge) {
        if let Some((before, after, gap)) = run.ok("euclidean merge", sufficiency_gap(&euclid, &sc)) {
            run.value("euclidean_merge_before", before);
            run.value("euclidean_merge_after", after);
            run.value("euclidean_merge_gap", gap);
            run.expect("euclidean changes by at least 0.02 under the proportional merge", gap >= 0.02 - 1e-12);
        }
        if let Some((_, _, gap)) = run.ok("kl merge", sufficiency_gap(&kl, &sc)) {
            run.value("kl_merge_gap", gap);
            run.expect("KL is unchanged by the proportional merge", gap <= 1e-9);
        }
    }
    if let Some(violated) = run.report("euclidean sufficiency", check_sufficiency(&euclid, 3, SUFFICIENCY_TRIALS, seed)) {
        run.expect("random search finds a euclidean sufficiency violation at n = 3", violated);
    }
    for n in [3, 4, 5] {
        let context = format!("kl sufficiency at n = {n}");
        if let Some(report) = run.ok(&context, check_sufficiency(&kl, n, SUFFICIENCY_TRIALS, seed)) {
            run.expect(format!("{context}: max gap <= 1e-9"), !report.is_violation() && report.max_gap <= 1e-9);
            run.result.reports.push(report);
        }
    }
}

fn sufficiency_binary_family(run: &mut Run, seed: u64) {
    let mut worst: f64 = 0.0;
    let mut all = true;
    for k in 0..RANDOM_FAMILY_SIZE {
        let mut rng = trial_rng(seed, k);
        let d = bregman_from_symmetric_g(&random_symmetric_convex_g(&mut rng));
        let context = format!("random symmetric generator {k}");
        let Some(report) = run.ok(&context, check_decomposable_binary(&d, 50)) else {
            all = false;
            continue;
        };
        worst = worst.max(report.max_gap);
        all &= !report.is_violation() && report.eval_failures == 0 && report.max_gap <= 1e-10;
        run.result.reports.push(report);
    }
    run.value("max_permutation_gap", worst);
    run.expect("all 20 random binary Bregman divergences are permutation-invariant within 1e-10", all);
}

fn bregman_residual(run: &mut Run) {
    let entropy = bregman_f_residual(&Generator::negative_entropy(), &ScalarFunction::XLogX, 200);
    run.value("negative_entropy_residual", entropy);
    run.expect("negative entropy against x ln x: residual <= 1e-9", entropy <= 1e-9);
    let brier = Generator::Binary(ScalarFunction::named("brier").expect("named"));
    let mixed = bregman_f_residual(&brier, &ScalarFunction::XLogX, 200);
    run.value("brier_residual", mixed);
    run.expect("Brier generator against x ln x: residual > 0.01", mixed > 0.01);
}

fn kl_unique_bregman_f(run: &mut Run, seed: u64) {
    let specs: Vec<(&str, Result<DivergenceSpec>)> = vec![
        ("kl", catalog("kl")),
        ("brier", catalog("brier")),
        ("tv_squared", catalog("tv_squared")),
        ("euclidean", catalog("euclidean").map(|d| d.with_alphabet(2))),
    ];
    let mut passing = Vec::new();
    for (name, spec) in specs {
        let Some(d) = run.ok(name, spec) else { continue };
        let f = run.fit(&format!("{name} f-divergence fit"), fit_f_divergence(&d, FIT_PAIRS, FIT_KNOTS, seed));
        let b = run.fit(&format!("{name} Bregman fit"), fit_bregman_binary(&d, FIT_PAIRS, FIT_KNOTS, seed));
        if let (Some(f), Some(b)) = (f, b) {
            run.value(format!("{name}_f_residual"), f.residual);
            run.value(format!("{name}_bregman_residual"), b.residual);
            if f.passed && b.passed {
                passing.push(name);
            }
        }
    }
    run.expect(format!("only kl passes both fits (passing: {passing:?})"), passing == ["kl"]);
}

fn shannon_inequality(run: &mut Run, seed: u64) {
    for (c, b) in [(-1.0, 0.0), (-2.0, 0.5), (0.0, 1.0)] {
        let f = ScalarFunction::LogAffine { c, b };
        for n in [2, 3, 4] {
            let context = format!("{c} ln x + {b} at n = {n}");
            if let Some(violated) = run.report(&context, check_shannon_inequality(&f, n, SHANNON_TRIALS, seed)) {
                run.expect(format!("{context}: no violation"), !violated);
            }
        }
    }
    let f = ScalarFunction::named("half_square_minus_x").expect("named");
    if let Some(violated) = run.report("x^2/2 - x at n = 2", check_shannon_inequality(&f, 2, SHANNON_TRIALS, seed)) {
        run.expect("x^2/2 - x satisfies the inequality on two symbols", !violated);
    }
    if let Some(violated) = run.report("x^2/2 - x at n = 3", check_shannon_inequality(&f, 3, SHANNON_TRIALS, seed)) {
        run.expect("x^2/2 - x violates the inequality on three symbols", violated);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Markdown,
}

/// JSON report layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub passed: bool,
    pub scenarios: Vec<ScenarioResult>,
}

impl Report {
    pub fn new(results: &[ScenarioResult]) -> Self {
        Self { schema: SCHEMA.to_string(), passed: results.iter().all(|r| r.passed()), scenarios: results.to_vec() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(text)?;
        if report.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported report schema `{}`", report.schema)));
        }
        Ok(report)
    }
}

/// Renders results in stable (input) order.
pub fn render_report(results: &[ScenarioResult], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(&Report::new(results))? + "\n"),
        ReportFormat::Markdown => Ok(render_markdown(results)),
    }
}

pub fn emit_report(results: &[ScenarioResult], path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    std::fs::write(path, render_report(results, format)?)?;
    Ok(())
}

fn render_markdown(results: &[ScenarioResult]) -> String {
    let mut out = String::new();
    let passed = results.iter().filter(|r| r.passed()).count();
    let _ = writeln!(out, "# divergence-lab verification report\n");
    let _ = writeln!(out, "Schema `{SCHEMA}`. {passed} of {} scenarios passed.\n", results.len());
    let _ = writeln!(out, "| Scenario | Claim | Status | Seed | Runtime (s) |");
    let _ = writeln!(out, "|---|---|---|---|---|");
    for r in results {
        let status = if r.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(out, "| `{}` | {} | {status} | {} | {:.2} |", r.scenario_id, r.claim, r.seed, r.runtime);
    }
    for r in results {
        let _ = writeln!(out, "\n## {}\n", r.scenario_id);
        for e in &r.expectations {
            let _ = writeln!(out, "- [{}] {}", if e.passed { "x" } else { " " }, e.description);
        }
        if !r.values.is_empty() {
            let _ = writeln!(out);
            for (k, v) in &r.values {
                let _ = writeln!(out, "- `{k}` = {v:e}");
            }
        }
        if !r.reports.is_empty() {
            let _ = writeln!(out);
            for report in &r.reports {
                let _ = writeln!(out, "- {}", report.summary());
            }
        }
    }
    out
}
