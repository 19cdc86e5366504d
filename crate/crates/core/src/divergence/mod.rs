//! Divergence families on the probability simplex.
//!
//! | family        | value                                          |
//! |---------------|------------------------------------------------|
//! | f-divergence  | `sum_i q_i f(p_i / q_i)`                       |
//! | Bregman       | `G(P) - G(Q) - <grad G(Q), P - Q>`             |
//! | KL-type       | `sum_k p_k (f(q_k) - f(p_k))`                  |
//! | decomposable  | `sum_i delta(p_i, q_i)`                        |
//! | composed      | `k(D(P; Q))` for nondecreasing `k`, `k(0) = 0` |
//!
//! Boundary conventions: `0 ln 0 = 0`; an f-divergence term with
//! `q_i = 0 < p_i` is `p_i * lim_{x->inf} f(x)/x` (possibly `+inf`); a
//! KL-type term with `p_k = 0` contributes nothing. Bregman divergences at a
//! boundary `Q` use the direct formula when the gradient there is finite and
//! otherwise extrapolate from smoothed `Q`.

mod document;
mod generator;
pub(crate) mod spec;

pub use document::SpecDocument;
pub use generator::{Generator, FD_STEP};
pub use spec::{catalog, Delta, DivergenceSpec, Family, FamilyTag, CATALOG_NAMES};

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::scalar::Scalar;
use crate::simplex::Distribution;

/// Smoothing levels for boundary Bregman evaluation.
pub const SMOOTHING_LEVELS: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// Anything that maps a pair of double-precision distributions to an
/// extended nonnegative real. Checkers accept any implementor.
pub trait Divergence: Sync {
    fn evaluate(&self, p: &Distribution<f64>, q: &Distribution<f64>) -> Result<f64>;

    fn label(&self) -> String;
}

impl Divergence for DivergenceSpec {
    fn evaluate(&self, p: &Distribution<f64>, q: &Distribution<f64>) -> Result<f64> {
        self.eval(p, q)
    }

    fn label(&self) -> String {
        self.label().to_string()
    }
}

/// Adapter turning a closure into a [`Divergence`].
pub struct FnDivergence<F> {
    label: String,
    f: F,
}

impl<F> FnDivergence<F>
where
    F: Fn(&Distribution<f64>, &Distribution<f64>) -> Result<f64> + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self { label: label.into(), f }
    }
}

impl<F> Divergence for FnDivergence<F>
where
    F: Fn(&Distribution<f64>, &Distribution<f64>) -> Result<f64> + Sync,
{
    fn evaluate(&self, p: &Distribution<f64>, q: &Distribution<f64>) -> Result<f64> {
        (self.f)(p, q)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

fn same_len<T: Scalar>(p: &Distribution<T>, q: &Distribution<T>) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    Ok(())
}

fn outside(f: &ScalarFunction, x: f64) -> Error {
    Error::OutsideDomain { function: f.to_string(), x }
}

/// `sum_i q_i f(p_i / q_i)` with the perspective-limit boundary convention.
pub fn eval_f_divergence<T: Scalar>(f: &ScalarFunction, p: &Distribution<T>, q: &Distribution<T>) -> Result<T> {
    same_len(p, q)?;
    let mut total = T::zero();
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if qi > T::zero() {
            let ratio = pi / qi;
            if !f.in_domain(ratio.to_f64_lossy()) {
                return Err(outside(f, ratio.to_f64_lossy()));
            }
            total = total + qi * f.value(ratio);
        } else if pi > T::zero() {
            let slope = f
                .slope_at_infinity()
                .ok_or_else(|| Error::Unsupported(format!("lim f(x)/x unknown for {f}")))?;
            if slope == f64::INFINITY {
                return Ok(T::infinity());
            }
            total = total + pi * T::lit(slope);
        }
    }
    Ok(total)
}

/// `G(P) - G(Q) - <grad G(Q), P - Q>`.
///
/// `Q` on the boundary is evaluated directly when the gradient there is
/// finite. Otherwise, with `smoothing` enabled, `Q_eps = (1 - eps) Q +
/// eps * uniform` is evaluated at each of [`SMOOTHING_LEVELS`] and the
/// limit is Richardson-extrapolated; a sequence that keeps growing is
/// reported as `+inf`.
pub fn eval_bregman<T: Scalar>(
    generator: &Generator,
    p: &Distribution<T>,
    q: &Distribution<T>,
    smoothing: bool,
) -> Result<T> {
    same_len(p, q)?;
    if q.is_interior() {
        return bregman_direct(generator, p, q);
    }
    if let Ok(v) = bregman_direct(generator, p, q) {
        if v.is_finite() {
            return Ok(v);
        }
    }
    if !smoothing {
        return Err(Error::Boundary(format!("Q = {q} and smoothing is disabled")));
    }
    let mut values = [T::zero(); 3];
    for (slot, &eps) in values.iter_mut().zip(&SMOOTHING_LEVELS) {
        let v = bregman_direct(generator, p, &q.smoothed(T::lit(eps)))?;
        if !v.is_finite() {
            return Ok(T::infinity());
        }
        *slot = v;
    }
    let [d4, d5, d6] = values;
    let step1 = d5 - d4;
    let step2 = d6 - d5;
    if step2 > T::lit(1e-9) && step2 >= T::lit(0.5) * step1 {
        return Ok(T::infinity());
    }
    let ten = T::lit(10.0);
    let nine = T::lit(9.0);
    let r1 = (ten * d5 - d4) / nine;
    let r2 = (ten * d6 - d5) / nine;
    Ok((T::lit(100.0) * r2 - r1) / T::lit(99.0))
}

fn bregman_direct<T: Scalar>(generator: &Generator, p: &Distribution<T>, q: &Distribution<T>) -> Result<T> {
    let grad = generator.gradient(q.probs())?;
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::Boundary(format!("gradient not finite at {q}")));
    }
    let gp = generator.value(p.probs())?;
    let gq = generator.value(q.probs())?;
    let inner: T = grad
        .iter()
        .zip(p.probs().iter().zip(q.probs()))
        .map(|(&g, (&pi, &qi))| g * (pi - qi))
        .sum();
    Ok(gp - gq - inner)
}

/// `sum_k p_k (f(q_k) - f(p_k))`, skipping `p_k = 0` and `q_k = p_k` terms.
/// A term with `q_k = 0 < p_k` and `f(0) = +inf` makes the value `+inf`.
pub fn eval_kl_type<T: Scalar>(f: &ScalarFunction, p: &Distribution<T>, q: &Distribution<T>) -> Result<T> {
    same_len(p, q)?;
    let mut terms = Vec::with_capacity(p.len());
    for (&pk, &qk) in p.probs().iter().zip(q.probs()) {
        if pk == T::zero() || pk == qk {
            continue;
        }
        for x in [pk, qk] {
            if !f.in_domain(x.to_f64_lossy()) {
                return Err(outside(f, x.to_f64_lossy()));
            }
        }
        terms.push((pk, qk));
    }
    if terms
        .iter()
        .any(|&(_, qk)| qk == T::zero() && f.value(qk) == T::infinity())
    {
        return Ok(T::infinity());
    }
    Ok(terms.into_iter().map(|(pk, qk)| pk * (f.value(qk) - f.value(pk))).sum())
}

/// `k(D(P; Q))`.
pub fn eval_composed<T: Scalar>(
    base: &DivergenceSpec,
    outer: &ScalarFunction,
    p: &Distribution<T>,
    q: &Distribution<T>,
) -> Result<T> {
    let inner = base.eval(p, q)?;
    Ok(outer.value(inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn d(v: &[f64]) -> Distribution<f64> {
        Distribution::new(v.to_vec()).unwrap()
    }

    // KL((0.5,0.5) || (0.25,0.75)) computed term by term
    fn kl_half_quarter() -> f64 {
        0.5 * (0.5f64 / 0.25).ln() + 0.5 * (0.5f64 / 0.75).ln()
    }

    #[test]
    fn f_divergence_examples() {
        let tv = eval_f_divergence(&ScalarFunction::AbsMinusOne, &d(&[0.3, 0.7]), &d(&[0.5, 0.5])).unwrap();
        assert_abs_diff_eq!(tv, 0.4, epsilon = 1e-15);
        let p = d(&[0.1, 0.2, 0.7]);
        for f in [ScalarFunction::XLogX, ScalarFunction::AbsMinusOne, ScalarFunction::SqrtMinusOneSquared] {
            assert_eq!(eval_f_divergence(&f, &p, &p).unwrap(), 0.0);
        }
        let kl = eval_f_divergence(&ScalarFunction::XLogX, &d(&[0.5, 0.5]), &d(&[0.25, 0.75])).unwrap();
        assert_abs_diff_eq!(kl, kl_half_quarter(), epsilon = 1e-15);
        assert_abs_diff_eq!(kl, 0.143841, epsilon = 1e-6);
    }

    #[test]
    fn f_divergence_boundary_conventions() {
        let p = d(&[0.5, 0.5, 0.0]);
        let q = d(&[0.0, 0.5, 0.5]);
        assert_eq!(eval_f_divergence(&ScalarFunction::XLogX, &p, &q).unwrap(), f64::INFINITY);
        // |x-1|: q_0 = 0 term contributes p_0 * 1, p_2 = 0 term contributes q_2 * f(0) = 0.5
        assert_abs_diff_eq!(eval_f_divergence(&ScalarFunction::AbsMinusOne, &p, &q).unwrap(), 1.0);
        // 0 * f(0/0) terms vanish
        let r = d(&[1.0, 0.0]);
        assert_eq!(eval_f_divergence(&ScalarFunction::XLogX, &r, &r).unwrap(), 0.0);
        assert!(eval_f_divergence(&ScalarFunction::Odds, &p, &q).is_err());
    }

    #[test]
    fn bregman_examples() {
        let brier = Generator::Binary(ScalarFunction::named("brier").unwrap());
        let v = eval_bregman(&brier, &d(&[0.3, 0.7]), &d(&[0.5, 0.5]), false).unwrap();
        assert_abs_diff_eq!(v, 0.08, epsilon = 1e-15);
        let p = d(&[0.3, 0.7]);
        assert_eq!(eval_bregman(&brier, &p, &p, false).unwrap(), 0.0);
        let kl = eval_bregman(&Generator::negative_entropy(), &d(&[0.5, 0.5]), &d(&[0.25, 0.75]), false).unwrap();
        assert_abs_diff_eq!(kl, kl_half_quarter(), epsilon = 1e-15);
    }

    #[test]
    fn bregman_boundary_handling() {
        let ent = Generator::negative_entropy();
        let p = d(&[0.4, 0.0, 0.6]);
        let q = d(&[0.2, 0.0, 0.8]);
        assert!(matches!(eval_bregman(&ent, &p, &q, false), Err(Error::Boundary(_))));
        let smoothed = eval_bregman(&ent, &p, &q, true).unwrap();
        let exact = 0.4 * 2f64.ln() + 0.6 * 0.75f64.ln();
        assert_abs_diff_eq!(smoothed, exact, epsilon = 1e-9);
        let diverging = eval_bregman(&ent, &d(&[0.5, 0.5, 0.0]), &d(&[1.0, 0.0, 0.0]), true).unwrap();
        assert_eq!(diverging, f64::INFINITY);
        // finite boundary gradient: direct formula, no smoothing needed
        let euclid = Generator::Separable(ScalarFunction::named("square").unwrap());
        let v = eval_bregman(&euclid, &d(&[0.4, 0.0, 0.6]), &d(&[0.2, 0.0, 0.8]), false).unwrap();
        assert_abs_diff_eq!(v, 0.08, epsilon = 1e-15);
    }

    #[test]
    fn kl_type_examples() {
        let kl = eval_kl_type(&ScalarFunction::NegLog, &d(&[0.5, 0.5]), &d(&[0.25, 0.75])).unwrap();
        assert_abs_diff_eq!(kl, kl_half_quarter(), epsilon = 1e-15);
        let f = ScalarFunction::named("half_square_minus_x").unwrap();
        let v = eval_kl_type(&f, &d(&[0.3, 0.7]), &d(&[0.5, 0.5])).unwrap();
        assert_abs_diff_eq!(v, 0.02, epsilon = 1e-15);
        let p = d(&[0.3, 0.7]);
        assert_eq!(eval_kl_type(&f, &p, &p).unwrap(), 0.0);
        assert_eq!(
            eval_kl_type(&ScalarFunction::NegLog, &d(&[0.5, 0.5]), &d(&[1.0, 0.0])).unwrap(),
            f64::INFINITY
        );
        let tab = ScalarFunction::Table(std::sync::Arc::new(
            crate::function::KnotTable::new(vec![0.1, 0.9], vec![0.0, 1.0]).unwrap(),
        ));
        assert!(matches!(eval_kl_type(&tab, &d(&[0.05, 0.95]), &d(&[0.5, 0.5])), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn single_precision_evaluation() {
        let p = Distribution::<f32>::new(vec![0.5, 0.5]).unwrap();
        let q = Distribution::<f32>::new(vec![0.25, 0.75]).unwrap();
        let kl: f32 = eval_f_divergence(&ScalarFunction::XLogX, &p, &q).unwrap();
        assert!((kl as f64 - kl_half_quarter()).abs() < 1e-6);
        let br: f32 = eval_bregman(&Generator::negative_entropy(), &p, &q, true).unwrap();
        assert!((br as f64 - kl_half_quarter()).abs() < 1e-6);
        let spec = catalog("hellinger").unwrap();
        let h: f32 = spec.eval(&p, &q).unwrap();
        let h64 = spec.eval(&p.cast::<f64>(), &q.cast::<f64>()).unwrap();
        assert!((h as f64 - h64).abs() < 1e-6);
    }
}
