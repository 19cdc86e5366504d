use rand::Rng;

use super::{check_n, config, run_trials, trial_rng, CheckReport, Outcome, Property, Witness};
use crate::divergence::Divergence;
use crate::error::Result;
use crate::simplex::{sample_distribution, sample_permutation, Distribution, SufficiencyScenario, TransformKind};

/// Absolute tolerance on `|D(before) - D(after)|`.
pub const SUFFICIENCY_TOL: f64 = 1e-9;

/// `(D(P; Q), D(P'; Q'), |difference|)` for one scenario; two infinite
/// values count as equal.
pub fn sufficiency_gap<D: Divergence + ?Sized>(d: &D, scenario: &SufficiencyScenario) -> Result<(f64, f64, f64)> {
    let before = d.evaluate(&scenario.p, &scenario.q)?;
    let (p, q) = scenario.apply()?;
    let after = d.evaluate(&p, &q)?;
    let gap = if before == after { 0.0 } else { (after - before).abs() };
    Ok((before, after, gap))
}

/// Pair on `n` symbols whose coordinates `i` and `j` share one likelihood
/// ratio: a random pair on `n - 1` symbols with coordinate `i` split in the
/// same proportion under both.
fn proportional_pair<R: Rng + ?Sized>(n: usize, i: usize, j: usize, rng: &mut R) -> (Distribution<f64>, Distribution<f64>) {
    let s: f64 = rng.random_range(0.05..0.95);
    let make = |rng: &mut R| {
        let base = sample_distribution(n - 1, rng);
        let mut probs = insert_zero(base.probs(), j);
        let mass = probs[i];
        probs[i] = s * mass;
        probs[j] = mass - probs[i];
        Distribution::from_trusted(probs)
    };
    let p = make(rng);
    let q = make(rng);
    (p, q)
}

fn insert_zero(probs: &[f64], j: usize) -> Vec<f64> {
    let mut out = probs.to_vec();
    out.insert(j, 0.0);
    out
}

fn distinct_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Scenario for one trial: permutations, proportional merges and splits in
/// rotation. Half of the splits move mass into an empty symbol, the rest
/// into a proportional one.
fn scenario(n: usize, seed: u64, index: u64) -> Result<SufficiencyScenario> {
    let mut rng = trial_rng(seed, index);
    let (i, j) = distinct_pair(n, &mut rng);
    match index % 3 {
        0 => {
            let p = sample_distribution(n, &mut rng);
            let q = sample_distribution(n, &mut rng);
            let perm = sample_permutation(n, &mut rng);
            SufficiencyScenario::permutation(p, q, &perm)
        }
        1 => {
            let (p, q) = proportional_pair(n, i, j, &mut rng);
            SufficiencyScenario::merge(p, q, i, j)
        }
        _ => {
            let t: f64 = rng.random_range(0.05..0.95);
            let (p, q) = if index.is_multiple_of(2) {
                let p = sample_distribution(n - 1, &mut rng);
                let q = sample_distribution(n - 1, &mut rng);
                (
                    Distribution::from_trusted(insert_zero(p.probs(), j)),
                    Distribution::from_trusted(insert_zero(q.probs(), j)),
                )
            } else {
                proportional_pair(n, i, j, &mut rng)
            };
            SufficiencyScenario::split(p, q, i, j, t)
        }
    }
}

fn kind_name(kind: TransformKind) -> &'static str {
    match kind {
        TransformKind::Permutation => "permutation",
        TransformKind::Merge => "merge",
        TransformKind::Split => "split",
    }
}

/// Sufficiency in equality form: `|D(P; Q) - D(P'; Q')| <= 1e-9` for random
/// permutations, merges of proportional coordinates, and splits.
pub fn check_sufficiency<D: Divergence + ?Sized>(d: &D, n: usize, trials: u64, seed: u64) -> Result<CheckReport> {
    check_n(n)?;
    let tally = run_trials(0..trials, |i| {
        let Ok(sc) = scenario(n, seed, i) else { return Outcome::Failed };
        match sufficiency_gap(d, &sc) {
            Ok((_, _, gap)) if gap.is_nan() => Outcome::Failed,
            Ok((_, _, gap)) => Outcome::Gap { gap, violation: gap > SUFFICIENCY_TOL },
            Err(_) => Outcome::Failed,
        }
    });
    let witness = tally.worst.and_then(|(_, i)| {
        let sc = scenario(n, seed, i).ok()?;
        let p = Distribution::new(sc.p.probs().to_vec()).ok()?;
        let q = Distribution::new(sc.q.probs().to_vec()).ok()?;
        let fresh = SufficiencyScenario { p, q, transform: sc.transform.clone(), kind: sc.kind };
        let (before, after, gap) = sufficiency_gap(d, &fresh).ok()?;
        (gap > SUFFICIENCY_TOL).then(|| Witness {
            p: fresh.p.probs().to_vec(),
            q: fresh.q.probs().to_vec(),
            channel: Some(fresh.transform.rows()),
            transform: Some(kind_name(fresh.kind).to_string()),
            value_before: before,
            value_after: after,
            gap,
        })
    });
    let mut config = config(n, None, trials, seed);
    config.abs_tol = SUFFICIENCY_TOL;
    config.rel_tol = 0.0;
    Ok(CheckReport::finish(Property::Sufficiency, d.label(), tally, witness, config))
}
