//! Convex-regression probes for representability of binary divergences.
//!
//! [`fit_f_divergence`] asks whether `D` is of the form
//! `q f(p/q) + (1 - q) f((1 - p)/(1 - q))` for a convex piecewise-linear `f`;
//! [`fit_bregman_binary`] whether it is `g2(p) - g2(q) - g2'(q)(p - q)` for a
//! convex `g2`. Both are least-squares problems over a cone of nondecreasing
//! sequences, solved by projected gradient with a pool-adjacent-violators
//! projection.
//!
//! A fit "passes" when the RMS residual is at most `1e-5` times the RMS of
//! `D` over the samples. The threshold is a scale-free choice, reported with
//! every fit; a failing fit is evidence against representability, not a
//! proof of it.

use std::io::Write;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::checks::trial_rng;
use crate::divergence::{Divergence, Generator};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::simplex::Distribution;

/// Pass threshold relative to the RMS of the target.
pub const RELATIVE_THRESHOLD: f64 = 1e-5;
pub const MAX_ITERATIONS: usize = 10_000;
/// Stop once the objective improves by less than this fraction over
/// [`STALL_WINDOW`] iterations.
pub const MIN_RELATIVE_IMPROVEMENT: f64 = 1e-12;
pub const STALL_WINDOW: usize = 50;
/// Sample pairs use `p, q` in `[SAMPLE_LO, SAMPLE_HI]`.
pub const SAMPLE_LO: f64 = 0.05;
pub const SAMPLE_HI: f64 = 0.95;
/// Ratio knots span `[RATIO_LO, RATIO_HI]` geometrically, with a knot at 1.
pub const RATIO_LO: f64 = 0.05;
pub const RATIO_HI: f64 = 20.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    FDivergence,
    Bregman,
}

/// Fitted convex generator on a knot grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexPiecewiseLinearFit {
    pub kind: FitKind,
    pub subject: String,
    pub knots: Vec<f64>,
    /// Fitted generator at the knots.
    pub values: Vec<f64>,
    /// Fitted `g2'` at the knots (Bregman fits only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivatives: Option<Vec<f64>>,
    /// RMS of `fit - D` over the samples.
    pub residual: f64,
    /// RMS of `D` over the samples.
    pub target_rms: f64,
    pub threshold: f64,
    pub passed: bool,
    pub samples: usize,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
    /// Objective `0.5 |A z - y|^2` after each iteration.
    #[serde(skip)]
    pub objective: Vec<f64>,
}

impl ConvexPiecewiseLinearFit {
    /// Smallest second divided difference of the fitted values.
    pub fn min_second_difference(&self) -> f64 {
        let slopes: Vec<f64> = self
            .knots
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
            .collect();
        slopes.windows(2).map(|s| s[1] - s[0]).fold(f64::INFINITY, f64::min)
    }

    /// Piecewise-linear interpolation of the fitted values.
    pub fn value_at(&self, x: f64) -> f64 {
        let k = self.knots.partition_point(|&t| t <= x).clamp(1, self.knots.len() - 1) - 1;
        let (x0, x1) = (self.knots[k], self.knots[k + 1]);
        let (v0, v1) = (self.values[k], self.values[k + 1]);
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }

    /// `knot,value` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        writer.write_record(["knot", "value"]).map_err(io)?;
        for (x, v) in self.knots.iter().zip(&self.values) {
            writer.write_record([x.to_string(), v.to_string()]).map_err(io)?;
        }
        writer.flush()?;
        Ok(())
    }

    /// `{residual, passed, threshold, ...}` summary.
    pub fn summary_json(&self) -> Result<String> {
        let summary = serde_json::json!({
            "kind": self.kind,
            "subject": self.subject,
            "residual": self.residual,
            "target_rms": self.target_rms,
            "threshold": self.threshold,
            "passed": self.passed,
            "samples": self.samples,
            "knots": self.knots.len(),
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed,
        });
        Ok(serde_json::to_string_pretty(&summary)?)
    }
}

/// Euclidean projection onto nondecreasing sequences (pool adjacent
/// violators).
pub fn pav(y: &[f64]) -> Vec<f64> {
    // Blocks of (mean, size).
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(y.len());
    for &v in y {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (m2, n2) = blocks[blocks.len() - 1];
            let (m1, n1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.pop();
            let size = n1 + n2;
            *blocks.last_mut().expect("two blocks") = ((m1 * n1 as f64 + m2 * n2 as f64) / size as f64, size);
        }
    }
    blocks.into_iter().flat_map(|(m, n)| std::iter::repeat_n(m, n)).collect()
}

/// Dense row-major design matrix.
struct Design {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
}

impl Design {
    fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, a: vec![0.0; rows * cols] }
    }

    fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.a[r * self.cols..(r + 1) * self.cols]
    }

    fn apply(&self, z: &[f64]) -> Vec<f64> {
        self.a.chunks(self.cols).map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum()).collect()
    }

    fn apply_t(&self, r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (row, &ri) in self.a.chunks(self.cols).zip(r) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * ri;
            }
        }
        out
    }

    fn objective(&self, z: &[f64], y: &[f64]) -> f64 {
        0.5 * self.apply(z).iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
    }

    /// Largest eigenvalue of `A^T A` by power iteration.
    fn lipschitz(&self) -> f64 {
        let mut v: Vec<f64> = (0..self.cols).map(|k| 1.0 + 0.5 * ((k + 1) as f64).sin()).collect();
        let mut lambda = 0.0;
        for _ in 0..100 {
            let w = self.apply_t(&self.apply(&v));
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            lambda = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v = w.iter().map(|x| x / norm).collect();
        }
        lambda
    }

    /// Conjugate gradient on the normal equations, from zero.
    fn cgls(&self, y: &[f64], iterations: usize) -> Vec<f64> {
        let mut z = vec![0.0; self.cols];
        let mut r = y.to_vec();
        let mut s = self.apply_t(&r);
        let mut p = s.clone();
        let mut gamma: f64 = s.iter().map(|x| x * x).sum();
        let start = gamma;
        for _ in 0..iterations {
            if gamma <= 1e-30 * start.max(f64::MIN_POSITIVE) {
                break;
            }
            let q = self.apply(&p);
            let qq: f64 = q.iter().map(|x| x * x).sum();
            if qq == 0.0 {
                break;
            }
            let alpha = gamma / qq;
            z.iter_mut().zip(&p).for_each(|(zi, pi)| *zi += alpha * pi);
            r.iter_mut().zip(&q).for_each(|(ri, qi)| *ri -= alpha * qi);
            s = self.apply_t(&r);
            let next: f64 = s.iter().map(|x| x * x).sum();
            let beta = next / gamma;
            gamma = next;
            p.iter_mut().zip(&s).for_each(|(pi, si)| *pi = si + beta * *pi);
        }
        z
    }
}

struct Solution {
    z: Vec<f64>,
    objective: Vec<f64>,
    iterations: usize,
    converged: bool,
}

/// `min 0.5 |A z - y|^2` over nondecreasing `z`: monotone FISTA with a PAV
/// projection, warm-started from the projected unconstrained solution.
fn solve_monotone(design: &Design, y: &[f64]) -> Solution {
    let start = pav(&design.cgls(y, 4 * design.cols));
    let lipschitz = design.lipschitz() * 1.01;
    let mut x = start;
    let mut fx = design.objective(&x, y);
    let mut objective = vec![fx];
    if lipschitz == 0.0 || fx == 0.0 {
        return Solution { z: x, objective, iterations: 0, converged: true };
    }
    let mut x_prev = x.clone();
    let mut v = x.clone();
    let mut t = 1.0f64;
    let mut converged = false;
    let mut iterations = 0;
    for k in 0..MAX_ITERATIONS {
        iterations = k + 1;
        let residual: Vec<f64> = design.apply(&v).iter().zip(y).map(|(a, b)| a - b).collect();
        let grad = design.apply_t(&residual);
        let step: Vec<f64> = v.iter().zip(&grad).map(|(vi, gi)| vi - gi / lipschitz).collect();
        let candidate = pav(&step);
        let fc = design.objective(&candidate, y);
        x_prev.clone_from(&x);
        if fc <= fx {
            x.clone_from(&candidate);
            fx = fc;
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        v = (0..x.len())
            .map(|i| x[i] + (t / t_next) * (candidate[i] - x[i]) + ((t - 1.0) / t_next) * (x[i] - x_prev[i]))
            .collect();
        t = t_next;
        objective.push(fx);
        if fx == 0.0 {
            converged = true;
            break;
        }
        if objective.len() > STALL_WINDOW {
            let old = objective[objective.len() - 1 - STALL_WINDOW];
            if old - fx <= MIN_RELATIVE_IMPROVEMENT * old {
                converged = true;
                break;
            }
        }
    }
    Solution { z: x, objective, iterations, converged }
}

fn binary(p: f64) -> Distribution<f64> {
    Distribution::from_trusted(vec![p, 1.0 - p])
}

fn rms(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

/// Picks `count` of `total` candidates (all of them when `count >= total`),
/// in increasing order.
fn choose(total: usize, count: usize, seed: u64) -> Vec<usize> {
    if count >= total {
        return (0..total).collect();
    }
    let mut rng = trial_rng(seed, 0);
    let mut picked = sample(&mut rng, total, count).into_vec();
    picked.sort_unstable();
    picked
}

/// Geometric ratio knots on `[RATIO_LO, RATIO_HI]` with a knot at 1; the
/// index of that knot is returned alongside.
pub fn ratio_knots(count: usize) -> (Vec<f64>, usize) {
    let count = count.max(4);
    let (lo, hi) = (RATIO_LO.ln(), RATIO_HI.ln());
    let below = ((count - 1) as f64 * -lo / (hi - lo)).round().clamp(1.0, (count - 2) as f64) as usize;
    let above = count - 1 - below;
    let mut knots: Vec<f64> = (0..below).map(|k| (lo * (below - k) as f64 / below as f64).exp()).collect();
    knots.push(1.0);
    knots.extend((1..=above).map(|k| (hi * k as f64 / above as f64).exp()));
    (knots, below)
}

/// Fits `D(P; Q) ~ q f(p/q) + (1 - q) f((1 - p)/(1 - q))` with convex
/// piecewise-linear `f`, `f(1) = 0`.
///
/// Samples are pairs whose two likelihood ratios `r1 > 1 > r2` are both
/// knots (`q = (1 - r2)/(r1 - r2)`, `p = r1 q`), restricted to
/// `p, q in [0.05, 0.95]`; `sample_pairs` of them are drawn with `seed`.
/// `f` is only determined up to `c (x - 1)`; the reported `f` has the two
/// slopes adjacent to `x = 1` summing to zero.
pub fn fit_f_divergence<D: Divergence + ?Sized>(
    d: &D,
    sample_pairs: usize,
    knots: usize,
    seed: u64,
) -> Result<ConvexPiecewiseLinearFit> {
    let (xs, one) = ratio_knots(knots);
    let mut candidates = Vec::new();
    for hi in one + 1..xs.len() {
        for lo in 0..one {
            let (r1, r2) = (xs[hi], xs[lo]);
            let q = (1.0 - r2) / (r1 - r2);
            let p = r1 * q;
            if (SAMPLE_LO..=SAMPLE_HI).contains(&p) && (SAMPLE_LO..=SAMPLE_HI).contains(&q) {
                candidates.push((hi, lo, p, q));
            }
        }
    }
    let chosen = choose(candidates.len(), sample_pairs, seed);
    if chosen.is_empty() {
        return Err(Error::OutOfRange { name: "knots", value: knots as f64 });
    }
    // Slope s_k lives on [x_k, x_{k+1}]; f(x_j) = sum of signed lengths.
    let cols = xs.len() - 1;
    let mut design = Design::new(chosen.len(), cols);
    let mut y = Vec::with_capacity(chosen.len());
    for (r, &c) in chosen.iter().enumerate() {
        let (hi, lo, p, q) = candidates[c];
        let row = design.row_mut(r);
        for k in one..hi {
            row[k] += q * (xs[k + 1] - xs[k]);
        }
        for k in lo..one {
            row[k] -= (1.0 - q) * (xs[k + 1] - xs[k]);
        }
        y.push(d.evaluate(&binary(p), &binary(q))?);
    }
    // Intervals outside every sample carry no information; solve on the
    // covered ones and extend the edge slopes outward.
    let first = chosen.iter().map(|&c| candidates[c].1).min().unwrap_or(0);
    let last = chosen.iter().map(|&c| candidates[c].0).max().unwrap_or(cols);
    let mut covered = Design::new(design.rows, last - first);
    for r in 0..design.rows {
        let src = design.a[r * cols + first..r * cols + last].to_vec();
        covered.row_mut(r).copy_from_slice(&src);
    }
    let sol = solve_monotone(&covered, &y);
    let mut slopes: Vec<f64> = (0..cols).map(|k| sol.z[k.clamp(first, last - 1) - first]).collect();
    let shift = 0.5 * (slopes[one - 1] + slopes[one]);
    slopes.iter_mut().for_each(|s| *s -= shift);
    let mut values = vec![0.0; xs.len()];
    for k in one + 1..xs.len() {
        values[k] = values[k - 1] + slopes[k - 1] * (xs[k] - xs[k - 1]);
    }
    for k in (0..one).rev() {
        values[k] = values[k + 1] - slopes[k] * (xs[k + 1] - xs[k]);
    }
    Ok(finish(FitKind::FDivergence, d.label(), xs, values, None, &covered, &y, sol.objective, sol.iterations, sol.converged, seed))
}

/// Fits `D(P; Q) ~ g2(p) - g2(q) - g2'(q)(p - q)` with convex `g2` given by
/// values and derivatives on uniform knots over `[0.05, 0.95]`.
///
/// Convexity of such Hermite data is `g2'(u_k) <= secant_k <= g2'(u_{k+1})`,
/// so the unknowns `(g2'(u_0), secant_0, g2'(u_1), ...)` form one
/// nondecreasing sequence. Samples are ordered knot pairs. `g2` is only
/// determined up to an affine term; the reported `g2` has `g2(u_0) = 0`.
pub fn fit_bregman_binary<D: Divergence + ?Sized>(
    d: &D,
    sample_pairs: usize,
    knots: usize,
    seed: u64,
) -> Result<ConvexPiecewiseLinearFit> {
    let count = knots.max(3);
    let step = (SAMPLE_HI - SAMPLE_LO) / (count - 1) as f64;
    let us: Vec<f64> = (0..count).map(|k| SAMPLE_LO + k as f64 * step).collect();
    let pairs: Vec<(usize, usize)> =
        (0..count).flat_map(|i| (0..count).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let chosen = choose(pairs.len(), sample_pairs, seed);
    // z = (d_0, s_0, d_1, s_1, ..., s_{K-2}, d_{K-1}).
    let deriv = |k: usize| 2 * k;
    let secant = |k: usize| 2 * k + 1;
    let cols = 2 * count - 1;
    let mut design = Design::new(chosen.len(), cols);
    let mut y = Vec::with_capacity(chosen.len());
    for (r, &c) in chosen.iter().enumerate() {
        let (i, j) = pairs[c];
        let row = design.row_mut(r);
        // g_i - g_j = step * (sum_{l<i} s_l - sum_{l<j} s_l).
        let (lo, hi, sign) = if i > j { (j, i, 1.0) } else { (i, j, -1.0) };
        for l in lo..hi {
            row[secant(l)] += sign * step;
        }
        row[deriv(j)] -= us[i] - us[j];
        y.push(d.evaluate(&binary(us[i]), &binary(us[j]))?);
    }
    let sol = solve_monotone(&design, &y);
    let z = sol.z;
    let mut values = vec![0.0; count];
    for k in 1..count {
        values[k] = values[k - 1] + step * z[secant(k - 1)];
    }
    let derivatives: Vec<f64> = (0..count).map(|k| z[deriv(k)]).collect();
    Ok(finish(
        FitKind::Bregman,
        d.label(),
        us,
        values,
        Some(derivatives),
        &design,
        &y,
        sol.objective,
        sol.iterations,
        sol.converged,
        seed,
    ))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    kind: FitKind,
    subject: String,
    knots: Vec<f64>,
    values: Vec<f64>,
    derivatives: Option<Vec<f64>>,
    design: &Design,
    y: &[f64],
    objective: Vec<f64>,
    iterations: usize,
    converged: bool,
    seed: u64,
) -> ConvexPiecewiseLinearFit {
    let fx = objective.last().copied().unwrap_or(0.0);
    let residual = (2.0 * fx / design.rows as f64).sqrt();
    let target_rms = rms(y);
    let threshold = RELATIVE_THRESHOLD * target_rms;
    ConvexPiecewiseLinearFit {
        kind,
        subject,
        knots,
        values,
        derivatives,
        residual,
        target_rms,
        threshold,
        passed: residual <= threshold,
        samples: design.rows,
        iterations,
        converged,
        seed,
        objective,
    }
}

/// `max |h(p) - h(q) - h'(q)(p - q) - q f(p/q) - (1 - q) f((1 - p)/(1 - q))|`
/// over interior `p, q = i / (grid + 1)`, with `h(p) = G(p, 1 - p)`.
///
/// Zero exactly when the Bregman divergence of `G` coincides with the
/// f-divergence of `f` on two symbols.
pub fn bregman_f_residual(generator: &Generator, f: &ScalarFunction, grid: usize) -> f64 {
    let points: Vec<f64> = (1..=grid).map(|i| i as f64 / (grid + 1) as f64).collect();
    let restricted: Vec<(f64, f64)> = points.iter().map(|&p| generator.binary_restriction(p)).collect();
    let mut worst: f64 = 0.0;
    for (a, &p) in points.iter().enumerate() {
        for (b, &q) in points.iter().enumerate() {
            let (hp, _) = restricted[a];
            let (hq, dq) = restricted[b];
            let bregman = hp - hq - dq * (p - q);
            let fdiv = q * f.value(p / q) + (1.0 - q) * f.value((1.0 - p) / (1.0 - q));
            let r = (bregman - fdiv).abs();
            worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
            if worst.is_nan() {
                return worst;
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::{catalog, FnDivergence};

    #[test]
    fn pav_projects_onto_monotone_sequences() {
        assert_eq!(pav(&[1.0, 3.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(pav(&[3.0, 2.0, 1.0]), vec![2.0, 2.0, 2.0]);
        assert_eq!(pav(&[]), Vec::<f64>::new());
        let y = [0.3, -1.0, 2.0, 2.0, 0.5, 7.0];
        let z = pav(&y);
        assert!(z.windows(2).all(|w| w[0] <= w[1]));
        assert!((z.iter().sum::<f64>() - y.iter().sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn ratio_knots_pin_one() {
        let (xs, one) = ratio_knots(64);
        assert_eq!(xs.len(), 64);
        assert_eq!(xs[one], 1.0);
        assert!((xs[0] - RATIO_LO).abs() < 1e-12 && (xs[63] - RATIO_HI).abs() < 1e-9);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn kl_is_an_f_divergence() {
        let fit = fit_f_divergence(&catalog("kl").unwrap(), 2000, 64, 42).unwrap();
        assert!(fit.residual <= 1e-6, "{}", fit.residual);
        assert!(fit.passed);
        assert!(fit.min_second_difference() >= -1e-10);
        let (xs, one) = ratio_knots(64);
        assert_eq!(fit.values[one], 0.0);
        // Project out c (x - 1) on [0.2, 3] and compare with x ln x.
        let pts: Vec<usize> = (0..xs.len()).filter(|&k| (0.2..=3.0).contains(&xs[k])).collect();
        let num: f64 = pts.iter().map(|&k| (fit.values[k] - xs[k] * xs[k].ln()) * (xs[k] - 1.0)).sum();
        let den: f64 = pts.iter().map(|&k| (xs[k] - 1.0) * (xs[k] - 1.0)).sum();
        let c = num / den;
        for &k in &pts {
            let x = xs[k];
            assert!((fit.values[k] - c * (x - 1.0) - x * x.ln()).abs() < 1e-3, "x = {x}");
        }
    }

    #[test]
    fn squared_tv_is_not_an_f_divergence() {
        let kl = fit_f_divergence(&catalog("kl").unwrap(), 2000, 64, 42).unwrap();
        let tv2 = fit_f_divergence(&catalog("tv_squared").unwrap(), 2000, 64, 42).unwrap();
        assert!(!tv2.passed);
        assert!(tv2.residual >= 100.0 * kl.residual.max(f64::MIN_POSITIVE));
        let history = &tv2.objective;
        assert!(history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn zero_divergence_fits_exactly() {
        let zero = FnDivergence::new("zero", |_: &Distribution<f64>, _: &Distribution<f64>| Ok(0.0));
        let fit = fit_f_divergence(&zero, 500, 32, 1).unwrap();
        assert_eq!(fit.residual, 0.0);
        assert!(fit.passed);
        assert!(fit.values.iter().all(|&v| v == 0.0));
        let fit = fit_bregman_binary(&zero, 500, 32, 1).unwrap();
        assert_eq!(fit.residual, 0.0);
    }

    #[test]
    fn brier_is_bregman_and_tv_is_not() {
        let brier = fit_bregman_binary(&catalog("brier").unwrap(), 2000, 41, 42).unwrap();
        assert!(brier.residual <= 1e-6 && brier.passed, "{}", brier.residual);
        // g2 = x^2 + (1 - x)^2 up to an affine term.
        let target: Vec<f64> = brier.knots.iter().map(|x| x * x + (1.0 - x) * (1.0 - x)).collect();
        let diff: Vec<f64> = brier.values.iter().zip(&target).map(|(a, b)| a - b).collect();
        let (x0, x1) = (brier.knots[0], brier.knots[brier.knots.len() - 1]);
        let slope = (diff[diff.len() - 1] - diff[0]) / (x1 - x0);
        for (k, x) in brier.knots.iter().enumerate() {
            assert!((diff[k] - diff[0] - slope * (x - x0)).abs() < 1e-6);
        }
        let tv = fit_bregman_binary(&catalog("tv").unwrap(), 2000, 41, 42).unwrap();
        assert!(!tv.passed);
        assert!(tv.residual >= 100.0 * brier.residual.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn bregman_residual_examples() {
        let ent = Generator::negative_entropy();
        assert!(bregman_f_residual(&ent, &ScalarFunction::XLogX, 200) <= 1e-9);
        let brier = Generator::Binary(ScalarFunction::named("brier").unwrap());
        assert!(bregman_f_residual(&brier, &ScalarFunction::XLogX, 200) > 0.01);
        let a = 3.0;
        let scaled = Generator::Binary(ScalarFunction::named("brier").unwrap().scaled(a));
        let base = bregman_f_residual(&brier, &ScalarFunction::XLogX, 50);
        let both = bregman_f_residual(&scaled, &ScalarFunction::XLogX.scaled(a), 50);
        assert!((both - a * base).abs() < 1e-9 * both);
    }

    #[test]
    fn fit_outputs() {
        let fit = fit_f_divergence(&catalog("kl").unwrap(), 200, 16, 3).unwrap();
        let mut buf = Vec::new();
        fit.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 17);
        let summary: serde_json::Value = serde_json::from_str(&fit.summary_json().unwrap()).unwrap();
        assert_eq!(summary["passed"], serde_json::Value::Bool(fit.passed));
        assert!(summary["threshold"].as_f64().unwrap() > 0.0);
    }
}
