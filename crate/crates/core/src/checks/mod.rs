//! Randomized and grid falsifiers for divergence properties.
//!
//! Every checker returns a [`CheckReport`]. A [`Verdict::Violation`] always
//! carries a [`Witness`] that has been re-evaluated from scratch; a
//! [`Verdict::NoViolationFound`] only means the search came up empty.
//!
//! Trials derive their randomness from `(seed, trial_index)` alone, so
//! reports are identical for any number of worker threads.

mod dpi;
mod sufficiency;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergence::Divergence;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::simplex::{sample_distribution, Distribution};

pub use dpi::{check_dpi, dpi_local_refine, REFINE_ITERATIONS};
pub use sufficiency::{check_sufficiency, sufficiency_gap, SUFFICIENCY_TOL};

/// Absolute part of the violation tolerance.
pub const ABS_TOL: f64 = 1e-9;
/// Relative part of the violation tolerance.
pub const REL_TOL: f64 = 1e-7;

const NOT_A_PROOF: &str = "no violation found by finite search; this is evidence, not a proof";

/// `1e-9 + 1e-7 |reference|`.
pub fn tolerance(reference: f64) -> f64 {
    ABS_TOL + REL_TOL * reference.abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Dpi,
    Sufficiency,
    Decomposability,
    ShannonInequality,
    Nonnegativity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoViolationFound,
    Violation,
}

/// A concrete input demonstrating a violation.
///
/// `value_before` and `value_after` are the two sides being compared:
/// `D(P_X; Q_X)` and `D(P_Y; Q_Y)` for data processing and sufficiency,
/// `D(P; Q)` and its swapped counterpart for decomposability,
/// `sum p f(p)` and `sum p f(q)` for the Shannon-type inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<String>,
    pub value_before: f64,
    pub value_after: f64,
    pub gap: f64,
}

/// Sampling parameters echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: Property,
    pub subject: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Inputs examined, grid points included.
    pub trials: u64,
    pub violations: u64,
    pub eval_failures: u64,
    /// Largest gap seen over all trials (`-inf` serializes as `null`).
    pub max_gap: f64,
    pub config: CheckConfig,
    pub note: String,
}

impl CheckReport {
    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::Violation
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One-line summary for terminals.
    pub fn summary(&self) -> String {
        let verdict = match self.verdict {
            Verdict::NoViolationFound => "no_violation_found",
            Verdict::Violation => "violation",
        };
        format!(
            "{:?} {}: {verdict} ({} trials, {} violations, {} evaluation failures, max gap {:e})",
            self.property, self.subject, self.trials, self.violations, self.eval_failures, self.max_gap
        )
    }

    fn finish(
        property: Property,
        subject: String,
        tally: Tally,
        witness: Option<Witness>,
        config: CheckConfig,
    ) -> Self {
        let (verdict, note) = match &witness {
            Some(_) => (Verdict::Violation, String::new()),
            None if tally.violations > 0 => (
                Verdict::NoViolationFound,
                "flagged trials did not survive independent re-evaluation".to_string(),
            ),
            None => (Verdict::NoViolationFound, NOT_A_PROOF.to_string()),
        };
        Self {
            property,
            subject,
            verdict,
            witness,
            trials: tally.trials,
            violations: tally.violations,
            eval_failures: tally.failures,
            max_gap: tally.max_gap,
            config,
            note,
        }
    }
}

/// RNG for one trial: the seed picks the key, the trial index the stream.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Result of a single trial.
#[derive(Clone, Copy, Debug)]
enum Outcome {
    /// Gap and whether it exceeds the tolerance.
    Gap { gap: f64, violation: bool },
    Skipped,
    Failed,
}

/// Order-independent reduction of trial outcomes.
#[derive(Clone, Copy, Debug)]
struct Tally {
    trials: u64,
    violations: u64,
    failures: u64,
    max_gap: f64,
    /// `(gap, index)` of the largest violation, lowest index on ties.
    worst: Option<(f64, u64)>,
}

impl Tally {
    fn empty() -> Self {
        Self { trials: 0, violations: 0, failures: 0, max_gap: f64::NEG_INFINITY, worst: None }
    }

    fn record(mut self, index: u64, outcome: Outcome) -> Self {
        self.trials += 1;
        match outcome {
            Outcome::Gap { gap, violation } => {
                self.max_gap = self.max_gap.max(gap);
                if violation {
                    self.violations += 1;
                    self.worst = better(self.worst, Some((gap, index)));
                }
            }
            Outcome::Skipped => {}
            Outcome::Failed => self.failures += 1,
        }
        self
    }

    fn merge(self, other: Self) -> Self {
        Self {
            trials: self.trials + other.trials,
            violations: self.violations + other.violations,
            failures: self.failures + other.failures,
            max_gap: self.max_gap.max(other.max_gap),
            worst: better(self.worst, other.worst),
        }
    }
}

fn better(a: Option<(f64, u64)>, b: Option<(f64, u64)>) -> Option<(f64, u64)> {
    match (a, b) {
        (Some(x), Some(y)) => {
            if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                Some(y)
            } else {
                Some(x)
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}

/// Runs `trial` on every index in `range` in parallel.
fn run_trials<F>(range: std::ops::Range<u64>, trial: F) -> Tally
where
    F: Fn(u64) -> Outcome + Sync,
{
    range
        .into_par_iter()
        .fold(Tally::empty, |t, i| t.record(i, trial(i)))
        .reduce(Tally::empty, Tally::merge)
}

fn gap_outcome(gap: f64, violation: bool) -> Outcome {
    if gap.is_nan() {
        Outcome::Failed
    } else {
        Outcome::Gap { gap, violation }
    }
}

fn interior_grid(grid: usize) -> Vec<f64> {
    (1..=grid).map(|i| i as f64 / (grid + 1) as f64).collect()
}

fn binary(p: f64) -> Distribution<f64> {
    Distribution::from_trusted(vec![p, 1.0 - p])
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::AlphabetTooSmall(n));
    }
    Ok(())
}

fn config(n: usize, grid: Option<usize>, trials: u64, seed: u64) -> CheckConfig {
    CheckConfig { n, grid, trials, seed, abs_tol: ABS_TOL, rel_tol: REL_TOL }
}

/// Binary swap symmetry `D((p, 1-p); (q, 1-q)) = D((1-p, p); (1-q, q))` on
/// an interior `grid x grid` grid. On two symbols this is equivalent to
/// decomposability.
pub fn check_decomposable_binary<D: Divergence + ?Sized>(d: &D, grid: usize) -> Result<CheckReport> {
    let points = interior_grid(grid);
    let g = grid as u64;
    let swap_gap = |p: f64, q: f64| -> Result<(f64, f64, f64)> {
        let (a, b) = (binary(p), binary(q));
        let direct = d.evaluate(&a, &b)?;
        let swapped = d.evaluate(&a.reversed(), &b.reversed())?;
        let gap = if direct == swapped { 0.0 } else { (direct - swapped).abs() };
        Ok((direct, swapped, gap))
    };
    let tally = run_trials(0..g * g, |i| {
        let (p, q) = (points[(i / g) as usize], points[(i % g) as usize]);
        match swap_gap(p, q) {
            Ok((direct, _, gap)) => gap_outcome(gap, gap > tolerance(direct)),
            Err(_) => Outcome::Failed,
        }
    });
    let witness = tally.worst.and_then(|(_, i)| {
        let (p, q) = (points[(i / g) as usize], points[(i % g) as usize]);
        let (direct, swapped, gap) = swap_gap(p, q).ok()?;
        (gap > tolerance(direct)).then(|| Witness {
            p: vec![p, 1.0 - p],
            q: vec![q, 1.0 - q],
            channel: Some(vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
            transform: Some("swap".into()),
            value_before: direct,
            value_after: swapped,
            gap,
        })
    });
    Ok(CheckReport::finish(Property::Decomposability, d.label(), tally, witness, config(2, Some(grid), g * g, 0)))
}

/// `sum_k p_k f(p_k) <= sum_k p_k f(q_k)` over random interior pairs.
pub fn check_shannon_inequality(f: &ScalarFunction, n: usize, trials: u64, seed: u64) -> Result<CheckReport> {
    check_n(n)?;
    let sides = |p: &Distribution<f64>, q: &Distribution<f64>| -> (f64, f64) {
        let own: f64 = p.probs().iter().map(|&x| x * f.value(x)).sum();
        let cross: f64 = p.probs().iter().zip(q.probs()).map(|(&x, &y)| x * f.value(y)).sum();
        (own, cross)
    };
    let draw = |i: u64| {
        let mut rng = trial_rng(seed, i);
        (sample_distribution(n, &mut rng), sample_distribution(n, &mut rng))
    };
    let tally = run_trials(0..trials, |i| {
        let (p, q) = draw(i);
        if !p.is_interior() || !q.is_interior() {
            return Outcome::Skipped;
        }
        let (own, cross) = sides(&p, &q);
        if !own.is_finite() || !cross.is_finite() {
            return Outcome::Failed;
        }
        let gap = own - cross;
        gap_outcome(gap, gap > tolerance(own))
    });
    let witness = tally.worst.and_then(|(_, i)| {
        let (p, q) = draw(i);
        // Independent re-evaluation through validated distributions.
        let p = Distribution::new(p.probs().to_vec()).ok()?;
        let q = Distribution::new(q.probs().to_vec()).ok()?;
        let (own, cross) = sides(&p, &q);
        let gap = own - cross;
        (gap > tolerance(own)).then(|| Witness {
            p: p.probs().to_vec(),
            q: q.probs().to_vec(),
            channel: None,
            transform: None,
            value_before: own,
            value_after: cross,
            gap,
        })
    });
    Ok(CheckReport::finish(Property::ShannonInequality, f.to_string(), tally, witness, config(n, None, trials, seed)))
}

/// `D(P; Q) >= -tol`: an interior grid for `n = 2` plus random pairs.
pub fn check_nonnegativity<D: Divergence + ?Sized>(
    d: &D,
    n: usize,
    grid: usize,
    trials: u64,
    seed: u64,
) -> Result<CheckReport> {
    check_n(n)?;
    let points = interior_grid(if n == 2 { grid } else { 0 });
    let g = points.len() as u64;
    let draw = |i: u64| {
        if i < g * g {
            (binary(points[(i / g) as usize]), binary(points[(i % g) as usize]))
        } else {
            let mut rng = trial_rng(seed, i - g * g);
            (sample_distribution(n, &mut rng), sample_distribution(n, &mut rng))
        }
    };
    let total = g * g + trials;
    let tally = run_trials(0..total, |i| {
        let (p, q) = draw(i);
        match d.evaluate(&p, &q) {
            Ok(v) => gap_outcome(-v, -v > ABS_TOL),
            Err(_) => Outcome::Failed,
        }
    });
    let witness = tally.worst.and_then(|(_, i)| {
        let (p, q) = draw(i);
        let v = d.evaluate(&p, &q).ok()?;
        (-v > ABS_TOL).then(|| Witness {
            p: p.probs().to_vec(),
            q: q.probs().to_vec(),
            channel: None,
            transform: None,
            value_before: 0.0,
            value_after: v,
            gap: -v,
        })
    });
    let grid = (n == 2).then_some(grid);
    Ok(CheckReport::finish(Property::Nonnegativity, d.label(), tally, witness, config(n, grid, trials, seed)))
}
