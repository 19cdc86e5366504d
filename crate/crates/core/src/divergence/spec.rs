use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{eval_bregman, eval_composed, eval_f_divergence, eval_kl_type, Generator};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::scalar::Scalar;
use crate::simplex::{sample_distribution, Distribution};

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: &[&str] = &["kl", "tv", "hellinger", "chi2", "brier", "euclidean", "tv_squared"];

const CONVEXITY_TOL: f64 = 1e-10;
const ANCHOR_TOL: f64 = 1e-12;
const CONVEXITY_TRIALS: usize = 1000;
const KINK_STEP: f64 = 1e-6;
const KINK_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    FDivergence,
    Bregman,
    KlType,
    Decomposable,
    Composed,
}

/// Per-coordinate term of a decomposable divergence.
#[derive(Clone, Debug)]
pub enum Delta {
    /// `scale * (u - v)^2`.
    SquaredDifference { scale: f64 },
    /// `g(u) - g(v) - g'(v) (u - v)`.
    BregmanTerm(ScalarFunction),
    /// `v f(u / v)`.
    FTerm(ScalarFunction),
}

impl Delta {
    fn eval<T: Scalar>(&self, u: T, v: T) -> Result<T> {
        Ok(match self {
            Self::SquaredDifference { scale } => T::lit(*scale) * (u - v) * (u - v),
            Self::BregmanTerm(g) => g.value(u) - g.value(v) - g.derivative(v) * (u - v),
            Self::FTerm(f) => {
                if v > T::zero() {
                    v * f.value(u / v)
                } else if u > T::zero() {
                    let slope = f
                        .slope_at_infinity()
                        .ok_or_else(|| Error::Unsupported(format!("lim f(x)/x unknown for {f}")))?;
                    u * T::lit(slope)
                } else {
                    T::zero()
                }
            }
        })
    }
}

#[derive(Clone, Debug)]
pub enum Family {
    FDivergence { f: ScalarFunction },
    Bregman { generator: Generator, smoothing: bool },
    KlType { f: ScalarFunction },
    Decomposable { delta: Delta },
    Composed { base: Box<DivergenceSpec>, outer: ScalarFunction },
}

impl Family {
    pub fn tag(&self) -> FamilyTag {
        match self {
            Self::FDivergence { .. } => FamilyTag::FDivergence,
            Self::Bregman { .. } => FamilyTag::Bregman,
            Self::KlType { .. } => FamilyTag::KlType,
            Self::Decomposable { .. } => FamilyTag::Decomposable,
            Self::Composed { .. } => FamilyTag::Composed,
        }
    }
}

/// Closed, evaluable description of one divergence.
///
/// Constructors spot-check the family's generator invariants; use
/// [`DivergenceSpec::unchecked`] to build deliberately invalid specs.
#[derive(Clone, Debug)]
pub struct DivergenceSpec {
    label: String,
    family: Family,
    alphabet: Option<usize>,
}

impl DivergenceSpec {
    /// f-divergence; requires `|f(1)| <= 1e-12` and midpoint convexity on a
    /// geometric grid over `[1e-3, 1e3]`.
    pub fn f_divergence(label: impl Into<String>, f: ScalarFunction) -> Result<Self> {
        let at_one: f64 = f.value(1.0);
        if at_one.abs() > ANCHOR_TOL {
            return Err(Error::InvalidGenerator(format!("f(1) = {at_one}, expected 0")));
        }
        let grid: Vec<f64> = (0..=200).map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / 200.0)).collect();
        check_midpoint_convex(&f, &grid)?;
        Ok(Self::unchecked(label, Family::FDivergence { f }, None))
    }

    /// Bregman divergence; the generator is checked for convexity (grid and
    /// random midpoint tests) and for kinks in the interior.
    pub fn bregman(label: impl Into<String>, generator: Generator) -> Result<Self> {
        check_generator(&generator)?;
        let alphabet = generator.alphabet();
        Ok(Self::unchecked(label, Family::Bregman { generator, smoothing: true }, alphabet))
    }

    /// KL-type distance measure generated by `f` on `(0, 1)`.
    pub fn kl_type(label: impl Into<String>, f: ScalarFunction) -> Result<Self> {
        let (lo, hi) = f.domain();
        if lo > 0.0 || hi < 1.0 {
            return Err(Error::InvalidGenerator(format!("{f} is not defined on (0, 1)")));
        }
        Ok(Self::unchecked(label, Family::KlType { f }, None))
    }

    pub fn decomposable(label: impl Into<String>, delta: Delta) -> Self {
        Self::unchecked(label, Family::Decomposable { delta }, None)
    }

    /// `outer(base)`; `outer` must be nondecreasing with `outer(0) = 0`.
    pub fn composed(label: impl Into<String>, base: DivergenceSpec, outer: ScalarFunction) -> Result<Self> {
        let at_zero: f64 = outer.value(0.0);
        if at_zero.abs() > ANCHOR_TOL {
            return Err(Error::InvalidGenerator(format!("k(0) = {at_zero}, expected 0")));
        }
        let mut prev: f64 = at_zero;
        for k in 1..=1000 {
            let v: f64 = outer.value(100.0 * k as f64 / 1000.0);
            if v < prev - ANCHOR_TOL {
                return Err(Error::InvalidGenerator(format!("outer function {outer} decreases")));
            }
            prev = v;
        }
        let alphabet = base.alphabet;
        Ok(Self::unchecked(label, Family::Composed { base: Box::new(base), outer }, alphabet))
    }

    pub fn unchecked(label: impl Into<String>, family: Family, alphabet: Option<usize>) -> Self {
        Self { label: label.into(), family, alphabet }
    }

    /// Restricts evaluation to alphabets of size `n`.
    pub fn with_alphabet(mut self, n: usize) -> Self {
        self.alphabet = Some(n);
        self
    }

    /// Enables or disables boundary smoothing for Bregman specs.
    pub fn with_smoothing(mut self, enabled: bool) -> Self {
        if let Family::Bregman { smoothing, .. } = &mut self.family {
            *smoothing = enabled;
        }
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn alphabet(&self) -> Option<usize> {
        self.alphabet
    }

    /// Evaluates `D(P; Q)` in any [`Scalar`] precision.
    pub fn eval<T: Scalar>(&self, p: &Distribution<T>, q: &Distribution<T>) -> Result<T> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch(p.len(), q.len()));
        }
        if let Some(n) = self.alphabet {
            if p.len() != n {
                return Err(Error::Unsupported(format!(
                    "`{}` is defined on {n} symbols, got {}",
                    self.label,
                    p.len()
                )));
            }
        }
        match &self.family {
            Family::FDivergence { f } => eval_f_divergence(f, p, q),
            Family::Bregman { generator, smoothing } => eval_bregman(generator, p, q, *smoothing),
            Family::KlType { f } => eval_kl_type(f, p, q),
            Family::Decomposable { delta } => p
                .probs()
                .iter()
                .zip(q.probs())
                .map(|(&u, &v)| delta.eval(u, v))
                .sum(),
            Family::Composed { base, outer } => eval_composed(base, outer, p, q),
        }
    }
}

/// Named catalog entries with analytic generators.
///
/// `tv` is `sum |p_i - q_i|` (`f(x) = |x - 1|`); `tv_squared` is its square,
/// which on two symbols equals `4 (p - q)^2`.
pub fn catalog(name: &str) -> Result<DivergenceSpec> {
    let named = |s: &str| ScalarFunction::named(s).expect("catalog function");
    match name {
        "kl" => DivergenceSpec::f_divergence(name, ScalarFunction::XLogX),
        "tv" => DivergenceSpec::f_divergence(name, ScalarFunction::AbsMinusOne),
        "hellinger" => DivergenceSpec::f_divergence(name, ScalarFunction::SqrtMinusOneSquared),
        "chi2" => DivergenceSpec::f_divergence(name, named("chi2")),
        "brier" => DivergenceSpec::bregman(name, Generator::Binary(named("brier"))),
        "euclidean" => DivergenceSpec::bregman(name, Generator::Separable(named("square"))),
        "tv_squared" => DivergenceSpec::composed(name, catalog("tv")?, named("square")),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn check_midpoint_convex(f: &ScalarFunction, grid: &[f64]) -> Result<()> {
    for stride in [1, 5, 25] {
        for w in 0..grid.len().saturating_sub(stride) {
            let (a, b) = (grid[w], grid[w + stride]);
            let fa: f64 = f.value(a);
            let fb: f64 = f.value(b);
            let fm: f64 = f.value(0.5 * (a + b));
            if !(fa.is_finite() && fb.is_finite() && fm.is_finite()) {
                continue;
            }
            if fm > 0.5 * (fa + fb) + CONVEXITY_TOL * (1.0 + fa.abs() + fb.abs()) {
                return Err(Error::InvalidGenerator(format!(
                    "{f} violates midpoint convexity on [{a}, {b}]"
                )));
            }
        }
    }
    Ok(())
}

/// Largest jump between one-sided difference quotients on an interior grid.
pub(crate) fn find_kink(g: &ScalarFunction) -> Option<f64> {
    for k in 1..1000 {
        let x = k as f64 / 1000.0;
        let v: f64 = g.value(x);
        let right = (g.value(x + KINK_STEP) - v) / KINK_STEP;
        let left = (v - g.value(x - KINK_STEP)) / KINK_STEP;
        if (right - left).abs() > KINK_THRESHOLD * (1.0 + right.abs().max(left.abs())) {
            return Some(x);
        }
    }
    None
}

pub(crate) fn check_univariate_convex(g: &ScalarFunction) -> Result<()> {
    let grid: Vec<f64> = (0..=400).map(|k| k as f64 / 400.0).collect();
    check_midpoint_convex(g, &grid)?;
    if let Some(x) = find_kink(g) {
        return Err(Error::InvalidGenerator(format!("{g} is not differentiable near x = {x}")));
    }
    Ok(())
}

fn check_generator(generator: &Generator) -> Result<()> {
    for g in generator.scalar_functions() {
        check_univariate_convex(g)?;
    }
    let dims: Vec<usize> = match generator.alphabet() {
        Some(n) => vec![n],
        None => vec![2, 3],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..CONVEXITY_TRIALS {
        let n = dims[trial % dims.len()];
        let a = sample_distribution(n, &mut rng);
        let b = sample_distribution(n, &mut rng);
        let t: f64 = rng.random();
        let mid: Vec<f64> = a.probs().iter().zip(b.probs()).map(|(x, y)| t * x + (1.0 - t) * y).collect();
        let ga = generator.value(a.probs())?;
        let gb = generator.value(b.probs())?;
        let gm = generator.value(&mid)?;
        if gm > t * ga + (1.0 - t) * gb + CONVEXITY_TOL * (1.0 + ga.abs() + gb.abs()) {
            return Err(Error::InvalidGenerator(format!("generator is not convex between {a} and {b}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn d(v: &[f64]) -> Distribution<f64> {
        Distribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn catalog_entries_evaluate() {
        for name in CATALOG_NAMES {
            let spec = catalog(name).unwrap();
            let p = d(&[0.3, 0.7]);
            assert_eq!(spec.eval(&p, &p).unwrap(), 0.0, "{name}");
            assert!(spec.eval(&p, &d(&[0.6, 0.4])).unwrap() > 0.0, "{name}");
        }
        assert!(matches!(catalog("renyi"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn composed_examples() {
        let tv2 = catalog("tv_squared").unwrap();
        assert_abs_diff_eq!(tv2.eval(&d(&[0.3, 0.7]), &d(&[0.5, 0.5])).unwrap(), 0.16, epsilon = 1e-15);
        for &(p, q) in &[(0.1, 0.9), (0.42, 0.37), (0.8, 0.05)] {
            let v = tv2.eval(&d(&[p, 1.0 - p]), &d(&[q, 1.0 - q])).unwrap();
            assert_abs_diff_eq!(v, 4.0 * (p - q) * (p - q), epsilon = 1e-14);
        }
    }

    #[test]
    fn catalog_shapes() {
        assert!(matches!(catalog("kl").unwrap().family(), Family::FDivergence { f: ScalarFunction::XLogX }));
        let brier = catalog("brier").unwrap();
        assert_eq!(brier.alphabet(), Some(2));
        assert!(brier.eval(&d(&[0.2, 0.3, 0.5]), &d(&[0.2, 0.3, 0.5])).is_err());
        let euclid = catalog("euclidean").unwrap();
        assert_abs_diff_eq!(
            euclid.eval(&d(&[0.2, 0.2, 0.6]), &d(&[0.1, 0.1, 0.8])).unwrap(),
            0.06,
            epsilon = 1e-15
        );
    }

    #[test]
    fn rejects_invalid_generators() {
        assert!(DivergenceSpec::f_divergence("bad", ScalarFunction::XLogX.scaled(-1.0)).is_err());
        assert!(DivergenceSpec::f_divergence("shifted", ScalarFunction::Polynomial(vec![1.0, 0.0, 1.0])).is_err());
        assert!(DivergenceSpec::bregman("concave", Generator::Separable(ScalarFunction::named("square").unwrap().scaled(-1.0))).is_err());
        assert!(DivergenceSpec::bregman("kink", Generator::Binary(ScalarFunction::MaxReflect)).is_err());
        assert!(DivergenceSpec::composed("dec", catalog("tv").unwrap(), ScalarFunction::Polynomial(vec![0.0, -1.0])).is_err());
        assert!(DivergenceSpec::composed("offset", catalog("tv").unwrap(), ScalarFunction::Polynomial(vec![1.0, 1.0])).is_err());
        assert!(DivergenceSpec::kl_type("narrow", ScalarFunction::Table(std::sync::Arc::new(
            crate::function::KnotTable::new(vec![0.2, 0.8], vec![0.0, 1.0]).unwrap()
        ))).is_err());
    }

    #[test]
    fn decomposable_terms() {
        let sq = DivergenceSpec::decomposable("sq", Delta::SquaredDifference { scale: 2.0 });
        assert_abs_diff_eq!(sq.eval(&d(&[0.3, 0.7]), &d(&[0.5, 0.5])).unwrap(), 0.16, epsilon = 1e-15);
        let breg = DivergenceSpec::decomposable("breg", Delta::BregmanTerm(ScalarFunction::XLogX));
        let kl = catalog("kl").unwrap();
        let (p, q) = (d(&[0.2, 0.5, 0.3]), d(&[0.4, 0.4, 0.2]));
        assert_abs_diff_eq!(breg.eval(&p, &q).unwrap(), kl.eval(&p, &q).unwrap(), epsilon = 1e-14);
        let fterm = DivergenceSpec::decomposable("fterm", Delta::FTerm(ScalarFunction::XLogX));
        assert_abs_diff_eq!(fterm.eval(&p, &q).unwrap(), kl.eval(&p, &q).unwrap(), epsilon = 1e-14);
    }
}
