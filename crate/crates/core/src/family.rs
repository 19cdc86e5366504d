//! Constructive divergence families.
//!
//! - KL-type distances `L(P; Q) = sum_k p_k (f(q_k) - f(p_k))` on two symbols,
//!   generated from a nondecreasing `h >= 0` on `(0, 1/2]` through
//!   `x G(x) = (x - 1) h(x)`, `G(x) = G(1 - x)` and `f'(x) = G(x) / x`.
//! - Binary Bregman divergences from a symmetric convex `g2`, with
//!   `G(p, 1 - p) = g2(p)`.
//!
//! `f` is tabulated in logit coordinates `t = ln(x / (1 - x))`, where the
//! integrand `df/dt = G(x) (1 - x)` stays bounded near both endpoints.

use std::io::Write;
use std::sync::Arc;

use rand::Rng;

use crate::divergence::spec::{check_univariate_convex, find_kink};
use crate::divergence::{DivergenceSpec, Family, Generator};
use crate::error::{Error, Result};
use crate::function::{g_from_h, hermite_basis, ScalarFunction};
use crate::quadrature::integrate;

/// Knots cover `x` in `[1e-9, 1 - 1e-9]`.
pub const TRUNCATION: f64 = 1e-9;
/// Total quadrature tolerance for the knot table.
pub const QUADRATURE_TOL: f64 = 1e-10;
const LOCAL_TOL: f64 = 1e-13;
const SMOOTH_TOL: f64 = 1e-13;
const GRID_TOL: f64 = 1e-12;
const CHECK_POINTS: usize = 2000;
const TAIL_SPAN: f64 = 30.0;

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn logit(x: f64) -> f64 {
    x.ln() - (-x).ln_1p()
}

/// `df/dt` at `t = logit(x)`, written so neither side loses precision.
fn integrand(h: &ScalarFunction, t: f64) -> f64 {
    if t <= 0.0 {
        let x = sigmoid(t);
        let hx: f64 = h.value(x);
        if hx == 0.0 {
            return 0.0;
        }
        let y = sigmoid(-t);
        -y * y * hx / x
    } else {
        let y = sigmoid(-t);
        let hy: f64 = h.value(y);
        if hy == 0.0 {
            return 0.0;
        }
        -sigmoid(t) * hy
    }
}

/// Nondecreasing `h >= 0` on `(0, 1/2]` together with the number of
/// quadrature knots used to tabulate `f`.
#[derive(Clone, Debug)]
pub struct HGenerator {
    h: ScalarFunction,
    samples: usize,
}

impl HGenerator {
    pub const DEFAULT_SAMPLES: usize = 4096;

    /// Checks `h >= 0` and `h(x_{k+1}) >= h(x_k) - 1e-12` on a grid.
    pub fn new(h: ScalarFunction, samples: usize) -> Result<Self> {
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=CHECK_POINTS {
            let x = 0.5 * k as f64 / CHECK_POINTS as f64;
            let v: f64 = h.value(x);
            if !v.is_finite() {
                return Err(Error::InvalidGenerator(format!("h({x}) = {v} is not finite")));
            }
            if v < -GRID_TOL {
                return Err(Error::InvalidGenerator(format!("h({x}) = {v} is negative")));
            }
            if v < prev - GRID_TOL {
                return Err(Error::InvalidGenerator(format!("h decreases near x = {x}: {prev} then {v}")));
            }
            prev = v;
        }
        Ok(Self::unchecked(h, samples))
    }

    /// Skips the invariant checks, e.g. to build a deliberately decreasing `h`.
    pub fn unchecked(h: ScalarFunction, samples: usize) -> Self {
        Self { h, samples: samples.max(8) }
    }

    pub fn h(&self) -> &ScalarFunction {
        &self.h
    }

    pub fn samples(&self) -> usize {
        self.samples
    }
}

/// `G(x) = (x - 1) h(x) / x` on `(0, 1/2]`, reflected about `1/2`.
pub fn build_g_from_h(gen: &HGenerator) -> ScalarFunction {
    ScalarFunction::GFromH(Arc::new(gen.h.clone()))
}

/// `f` with `f'(x) = G(x) / x` and `f(1/2) = 0`.
pub fn build_f_from_h(gen: &HGenerator) -> Result<ScalarFunction> {
    Ok(ScalarFunction::FFromH(Arc::new(FTable::build(gen)?)))
}

/// Binary KL-type distance generated by `h`.
pub fn kl_type_from_h(gen: &HGenerator) -> Result<DivergenceSpec> {
    let f = build_f_from_h(gen)?;
    Ok(DivergenceSpec::unchecked(format!("kl_type[h={}]", gen.h), Family::KlType { f }, Some(2)))
}

/// Tabulated `f` for a KL-type family.
///
/// Values come from the nearest knot plus a short adaptive quadrature, so
/// accuracy does not depend on the smoothness of `h`. [`FTable::interpolate`]
/// is the cubic Hermite shortcut through the same knots.
#[derive(Debug)]
pub struct FTable {
    h: ScalarFunction,
    bound: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    /// Per interval: Hermite interpolation agrees with quadrature.
    smooth: Vec<bool>,
    at_zero: f64,
    at_one: f64,
}

impl FTable {
    fn build(gen: &HGenerator) -> Result<Self> {
        let h = gen.h.clone();
        let count = gen.samples | 1;
        let bound = logit(1.0 - TRUNCATION);
        let step = 2.0 * bound / (count - 1) as f64;
        let mid = count / 2;
        let knot = |k: usize| -bound + k as f64 * step;
        let panel_tol = QUADRATURE_TOL / count as f64;
        let panel = |a: f64, b: f64| {
            integrate(|t| integrand(&h, t), a, b, panel_tol).map_err(|e| match e {
                Error::Quadrature { lo, hi } => Error::Quadrature { lo: sigmoid(lo), hi: sigmoid(hi) },
                other => other,
            })
        };
        let mut values = vec![0.0; count];
        for k in mid + 1..count {
            values[k] = values[k - 1] + panel(knot(k - 1), knot(k))?;
        }
        for k in (0..mid).rev() {
            values[k] = values[k + 1] - panel(knot(k), knot(k + 1))?;
        }
        let slopes: Vec<f64> = (0..count).map(|k| integrand(&h, knot(k))).collect();
        let at_zero = tail_limit(&h, -bound, values[0], -1.0)?;
        let at_one = tail_limit(&h, bound, values[count - 1], 1.0)?;
        let mut table = Self { h: h.clone(), bound, step, values, slopes, smooth: Vec::new(), at_zero, at_one };
        let mut smooth = Vec::with_capacity(count - 1);
        for k in 0..count - 1 {
            let t = knot(k) + 0.5 * step;
            let exact = table.values[k] + panel(knot(k), t)?;
            smooth.push((table.hermite(k, 0.5) - exact).abs() <= SMOOTH_TOL * (1.0 + exact.abs()));
        }
        table.smooth = smooth;
        Ok(table)
    }

    pub fn h(&self) -> &ScalarFunction {
        &self.h
    }

    fn count(&self) -> usize {
        self.values.len()
    }

    fn knot(&self, k: usize) -> f64 {
        -self.bound + k as f64 * self.step
    }

    fn hermite(&self, k: usize, s: f64) -> f64 {
        let (h00, h10, h01, h11) = hermite_basis(s);
        h00 * self.values[k]
            + h10 * self.step * self.slopes[k]
            + h01 * self.values[k + 1]
            + h11 * self.step * self.slopes[k + 1]
    }

    /// `(x_k, f(x_k))` at every knot.
    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.count()).map(|k| (sigmoid(self.knot(k)), self.values[k]))
    }

    /// `f(0+)`; `+inf` when the integral diverges.
    pub fn value_at_zero(&self) -> f64 {
        self.at_zero
    }

    /// `f(1-)`; `-inf` when the integral diverges.
    pub fn value_at_one(&self) -> f64 {
        self.at_one
    }

    pub fn value(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return f64::NAN;
        }
        if x == 0.0 {
            return self.at_zero;
        }
        if x == 1.0 {
            return self.at_one;
        }
        let t = logit(x);
        let last = self.count() - 1;
        let (k, from) = if t < -self.bound {
            (0, -self.bound)
        } else if t > self.bound {
            (last, self.bound)
        } else {
            let pos = (t + self.bound) / self.step;
            let j = (pos.floor() as usize).min(last - 1);
            if self.smooth[j] {
                return self.hermite(j, pos - j as f64);
            }
            let k = (pos.round() as usize).min(last);
            (k, self.knot(k))
        };
        let tol = LOCAL_TOL * (1.0 + self.values[k].abs());
        match integrate(|s| integrand(&self.h, s), from, t, tol) {
            Ok(v) => self.values[k] + v,
            Err(_) => f64::NAN,
        }
    }

    /// Cubic Hermite interpolation in logit coordinates; `NaN` outside the
    /// tabulated range.
    pub fn interpolate(&self, x: f64) -> f64 {
        let t = logit(x);
        if !(t >= -self.bound && t <= self.bound) {
            return f64::NAN;
        }
        let pos = (t + self.bound) / self.step;
        let j = (pos.floor() as usize).min(self.count() - 2);
        self.hermite(j, pos - j as f64)
    }

    /// `G(x) / x`, exact.
    pub fn derivative(&self, x: f64) -> f64 {
        g_from_h(&self.h, x) / x
    }
}

/// `f` at `t -> sign * inf`, starting from `f(t0) = start`.
///
/// Integrates two consecutive spans of length 30 in `t`. The tail is
/// treated as convergent when the second span is less than half the first
/// (geometric decay), and is then extrapolated geometrically.
fn tail_limit(h: &ScalarFunction, t0: f64, start: f64, sign: f64) -> Result<f64> {
    let span = |a: f64| integrate(|t| integrand(h, t), a, a + sign * TAIL_SPAN, LOCAL_TOL);
    let first = span(t0)?;
    let second = span(t0 + sign * TAIL_SPAN)?;
    if first == 0.0 && second == 0.0 {
        return Ok(start);
    }
    let ratio = second / first;
    let tail = if first != 0.0 && (0.0..0.5).contains(&ratio) {
        first + second / (1.0 - ratio)
    } else if second.abs() <= f64::MIN_POSITIVE {
        first
    } else {
        return Ok(second.signum() * f64::INFINITY);
    };
    Ok(start + tail)
}

/// Convex `g2` on `[0, 1]` with `g2(x) = g2(1 - x)`.
#[derive(Clone, Debug)]
pub struct SymmetricConvexG {
    g2: ScalarFunction,
}

impl SymmetricConvexG {
    /// Checks symmetry to `1e-12`, midpoint convexity and differentiability
    /// on interior grids.
    pub fn new(g2: ScalarFunction) -> Result<Self> {
        for k in 0..=CHECK_POINTS {
            let x = k as f64 / CHECK_POINTS as f64;
            let a: f64 = g2.value(x);
            let b: f64 = g2.value(1.0 - x);
            if (a - b).is_nan() || (a - b).abs() > GRID_TOL {
                return Err(Error::InvalidGenerator(format!("g2 is not symmetric at x = {x}: {a} vs {b}")));
            }
        }
        if let Some(x) = find_kink(&g2) {
            return Err(Error::InvalidGenerator(format!("g2 = {g2} has a derivative jump near x = {x}")));
        }
        check_univariate_convex(&g2)?;
        Ok(Self { g2 })
    }

    pub fn g2(&self) -> &ScalarFunction {
        &self.g2
    }
}

/// Binary Bregman divergence with `G(p, 1 - p) = g2(p)`.
pub fn bregman_from_symmetric_g(g: &SymmetricConvexG) -> DivergenceSpec {
    DivergenceSpec::unchecked(
        format!("bregman[g2={}]", g.g2),
        Family::Bregman { generator: Generator::Binary(g.g2.clone()), smoothing: true },
        Some(2),
    )
}

/// Random `g2 = sum_k w_k (phi_k(x) + phi_k(1 - x))` with `phi_k` drawn from
/// `x^2`, `exp(r x)`, `x ln x` and `x^4`, `w_k` in `[0.1, 1)`.
pub fn random_symmetric_convex_g<R: Rng + ?Sized>(rng: &mut R) -> SymmetricConvexG {
    let terms = rng.random_range(1..=3);
    let mut parts = Vec::with_capacity(terms);
    for _ in 0..terms {
        let w = rng.random_range(0.1..1.0);
        let phi = match rng.random_range(0..4) {
            0 => ScalarFunction::Polynomial(vec![0.0, 0.0, 1.0]),
            1 => ScalarFunction::Exp { rate: rng.random_range(-3.0..3.0) },
            2 => ScalarFunction::XLogX,
            _ => ScalarFunction::Polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0]),
        };
        parts.push((w, phi.symmetrized()));
    }
    SymmetricConvexG::new(ScalarFunction::Combination(parts)).expect("symmetrized convex terms")
}

/// Writes the family table `x,G,f` at every knot of `f`.
pub fn write_family_table<W: Write>(gen: &HGenerator, out: W) -> Result<()> {
    let f = build_f_from_h(gen)?;
    let ScalarFunction::FFromH(table) = &f else { unreachable!("build_f_from_h returns a table") };
    let g = build_g_from_h(gen);
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["x", "G", "f"]).map_err(csv_error)?;
    for (x, fx) in table.knots() {
        let gx: f64 = g.value(x);
        writer
            .write_record([format!("{x:e}"), format!("{gx:e}"), format!("{fx:e}")])
            .map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
