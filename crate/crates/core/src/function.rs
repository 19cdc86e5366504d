//! Univariate generator functions.
//!
//! A [`ScalarFunction`] is a closed description of `f`, `h`, `G`, `k` or `g`
//! in the divergence families: analytic catalog entries, polynomials,
//! weighted combinations, interpolated knot tables, and the functions built
//! from a nondecreasing `h` in [`crate::family`].
//!
//! Text syntax (used by the CLI and the JSON spec documents):
//!
//! | syntax            | meaning                                      |
//! |-------------------|----------------------------------------------|
//! | `name:square`     | catalog entry, see [`ScalarFunction::named`] |
//! | `poly:0,0,1`      | polynomial, coefficients low to high         |
//! | `table:path.csv`  | two-column `x,y` knot table                  |

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::FTable;
use crate::scalar::Scalar;

/// Names accepted by [`ScalarFunction::named`].
pub const FUNCTION_NAMES: &[&str] = &[
    "zero",
    "identity",
    "square",
    "xlogx",
    "neglog",
    "abs_minus_one",
    "hellinger",
    "chi2",
    "odds",
    "ramp",
    "half_square_minus_x",
    "neg_binary_entropy",
    "brier",
    "max_reflect",
];

#[derive(Clone, Debug)]
pub enum ScalarFunction {
    /// Coefficients from low to high degree.
    Polynomial(Vec<f64>),
    /// `x ln x`, with `0 ln 0 = 0`.
    XLogX,
    /// `-ln x`.
    NegLog,
    /// `|x - 1|`.
    AbsMinusOne,
    /// `(sqrt(x) - 1)^2`.
    SqrtMinusOneSquared,
    /// `c ln x + b`.
    LogAffine { c: f64, b: f64 },
    /// `x / (1 - x)`.
    Odds,
    /// `min(x, cap)`.
    Ramp { cap: f64 },
    /// `exp(rate * x)`.
    Exp { rate: f64 },
    /// `x ln x + (1 - x) ln(1 - x)`.
    NegBinaryEntropy,
    /// `max(x, 1 - x)`.
    MaxReflect,
    /// `phi(1 - x)`.
    Reflect(Box<ScalarFunction>),
    /// `sum_k w_k phi_k(x)`.
    Combination(Vec<(f64, ScalarFunction)>),
    /// Monotone cubic interpolation of user-supplied knots.
    Table(Arc<KnotTable>),
    /// `G(x) = (x - 1) h(x) / x` on `(0, 1/2]`, reflected about `1/2`.
    GFromH(Arc<ScalarFunction>),
    /// `f` with `f'(x) = G(x)/x`, anchored at `f(1/2) = 0`.
    FFromH(Arc<FTable>),
}

impl ScalarFunction {
    pub fn named(name: &str) -> Result<Self> {
        Ok(match name {
            "zero" => Self::Polynomial(vec![]),
            "identity" => Self::Polynomial(vec![0.0, 1.0]),
            "square" => Self::Polynomial(vec![0.0, 0.0, 1.0]),
            "xlogx" => Self::XLogX,
            "neglog" => Self::NegLog,
            "abs_minus_one" => Self::AbsMinusOne,
            "hellinger" => Self::SqrtMinusOneSquared,
            "chi2" => Self::Polynomial(vec![1.0, -2.0, 1.0]),
            "odds" => Self::Odds,
            "ramp" => Self::Ramp { cap: 0.25 },
            "half_square_minus_x" => Self::Polynomial(vec![0.0, -1.0, 0.5]),
            "neg_binary_entropy" => Self::NegBinaryEntropy,
            "brier" => Self::Polynomial(vec![1.0, -2.0, 2.0]),
            "max_reflect" => Self::MaxReflect,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }

    /// Parses `name:...`, `poly:...`, `log:c,b` (`c ln x + b`) or `table:...`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `kind:value`, got `{text}`")))?;
        match kind {
            "name" => Self::named(rest.trim()),
            "poly" => {
                let coeffs = rest
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::Polynomial(coeffs))
            }
            "log" => match Self::parse(&format!("poly:{rest}"))? {
                Self::Polynomial(c) if c.len() == 2 => Ok(Self::LogAffine { c: c[0], b: c[1] }),
                _ => Err(Error::Parse(format!("expected `log:c,b`, got `{text}`"))),
            },
            "table" => Ok(Self::Table(Arc::new(KnotTable::from_csv(rest.trim())?))),
            other => Err(Error::Parse(format!("unknown function kind `{other}`"))),
        }
    }

    /// Text form accepted by [`ScalarFunction::parse`], when one exists.
    pub fn syntax(&self) -> Option<String> {
        for name in FUNCTION_NAMES {
            let named = Self::named(name).expect("listed name");
            if named.same_shape(self) {
                return Some(format!("name:{name}"));
            }
        }
        match self {
            Self::Polynomial(c) => Some(format!(
                "poly:{}",
                c.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
            )),
            Self::LogAffine { c, b } => Some(format!("log:{c},{b}")),
            Self::Table(t) => t.source.as_ref().map(|s| format!("table:{s}")),
            _ => None,
        }
    }

    fn same_shape(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Polynomial(a), Self::Polynomial(b)) => trimmed(a) == trimmed(b),
            (Self::Ramp { cap: a }, Self::Ramp { cap: b }) => a == b,
            (Self::XLogX, Self::XLogX)
            | (Self::NegLog, Self::NegLog)
            | (Self::AbsMinusOne, Self::AbsMinusOne)
            | (Self::SqrtMinusOneSquared, Self::SqrtMinusOneSquared)
            | (Self::Odds, Self::Odds)
            | (Self::NegBinaryEntropy, Self::NegBinaryEntropy)
            | (Self::MaxReflect, Self::MaxReflect) => true,
            _ => false,
        }
    }

    /// `a * self`.
    pub fn scaled(self, a: f64) -> Self {
        Self::Combination(vec![(a, self)])
    }

    /// `phi(x) + phi(1 - x)`: symmetric about `1/2`.
    pub fn symmetrized(self) -> Self {
        Self::Combination(vec![(1.0, self.clone()), (1.0, Self::Reflect(Box::new(self)))])
    }

    pub fn value<T: Scalar>(&self, x: T) -> T {
        let one = T::one();
        match self {
            Self::Polynomial(c) => c.iter().rev().fold(T::zero(), |acc, &a| acc * x + T::lit(a)),
            Self::XLogX => {
                if x == T::zero() {
                    T::zero()
                } else {
                    x * x.ln()
                }
            }
            Self::NegLog => -x.ln(),
            Self::AbsMinusOne => (x - one).abs(),
            Self::SqrtMinusOneSquared => {
                let s = x.sqrt() - one;
                s * s
            }
            Self::LogAffine { c, b } => T::lit(*c) * x.ln() + T::lit(*b),
            Self::Odds => x / (one - x),
            Self::Ramp { cap } => x.min(T::lit(*cap)),
            Self::Exp { rate } => (T::lit(*rate) * x).exp(),
            Self::NegBinaryEntropy => Self::XLogX.value(x) + Self::XLogX.value(one - x),
            Self::MaxReflect => x.max(one - x),
            Self::Reflect(inner) => inner.value(one - x),
            Self::Combination(terms) => terms
                .iter()
                .filter(|(w, _)| *w != 0.0)
                .map(|(w, f)| T::lit(*w) * f.value(x))
                .sum(),
            Self::Table(t) => T::lit(t.value(x.to_f64_lossy())),
            Self::GFromH(h) => T::lit(g_from_h(h, x.to_f64_lossy())),
            Self::FFromH(t) => T::lit(t.value(x.to_f64_lossy())),
        }
    }

    /// Derivative; the right derivative at kinks.
    pub fn derivative<T: Scalar>(&self, x: T) -> T {
        let one = T::one();
        match self {
            Self::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(T::zero(), |acc, (k, &a)| acc * x + T::lit(a * k as f64)),
            Self::XLogX => x.ln() + one,
            Self::NegLog => -one / x,
            Self::AbsMinusOne => {
                if x >= one {
                    one
                } else {
                    -one
                }
            }
            Self::SqrtMinusOneSquared => one - one / x.sqrt(),
            Self::LogAffine { c, .. } => T::lit(*c) / x,
            Self::Odds => one / ((one - x) * (one - x)),
            Self::Ramp { cap } => {
                if x < T::lit(*cap) {
                    one
                } else {
                    T::zero()
                }
            }
            Self::Exp { rate } => T::lit(*rate) * (T::lit(*rate) * x).exp(),
            Self::NegBinaryEntropy => x.ln() - (one - x).ln(),
            Self::MaxReflect => {
                if x >= T::lit(0.5) {
                    one
                } else {
                    -one
                }
            }
            Self::Reflect(inner) => -inner.derivative(one - x),
            Self::Combination(terms) => terms
                .iter()
                .filter(|(w, _)| *w != 0.0)
                .map(|(w, f)| T::lit(*w) * f.derivative(x))
                .sum(),
            Self::Table(t) => T::lit(t.derivative(x.to_f64_lossy())),
            Self::GFromH(h) => T::lit(g_from_h_derivative(h, x.to_f64_lossy())),
            Self::FFromH(t) => T::lit(t.derivative(x.to_f64_lossy())),
        }
    }

    /// Whether [`derivative`](Self::derivative) is analytic rather than read
    /// off an interpolant.
    pub fn has_exact_derivative(&self) -> bool {
        match self {
            Self::Table(_) => false,
            Self::Reflect(inner) => inner.has_exact_derivative(),
            Self::Combination(terms) => terms.iter().all(|(_, f)| f.has_exact_derivative()),
            Self::GFromH(h) => h.has_exact_derivative(),
            _ => true,
        }
    }

    /// Closed interval on which the function (or its boundary limit) is
    /// defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::Polynomial(_)
            | Self::AbsMinusOne
            | Self::Ramp { .. }
            | Self::Exp { .. }
            | Self::MaxReflect => (f64::NEG_INFINITY, f64::INFINITY),
            Self::XLogX | Self::NegLog | Self::SqrtMinusOneSquared | Self::LogAffine { .. } => {
                (0.0, f64::INFINITY)
            }
            Self::Odds | Self::NegBinaryEntropy | Self::GFromH(_) | Self::FFromH(_) => (0.0, 1.0),
            Self::Reflect(inner) => {
                let (lo, hi) = inner.domain();
                (1.0 - hi, 1.0 - lo)
            }
            Self::Combination(terms) => terms.iter().fold((f64::NEG_INFINITY, f64::INFINITY), |acc, (_, f)| {
                let (lo, hi) = f.domain();
                (acc.0.max(lo), acc.1.min(hi))
            }),
            Self::Table(t) => (t.xs[0], *t.xs.last().expect("non-empty table")),
        }
    }

    pub fn in_domain(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x >= lo && x <= hi
    }

    /// `lim_{x -> inf} f(x) / x`, when known in closed form.
    pub fn slope_at_infinity(&self) -> Option<f64> {
        match self {
            Self::Polynomial(c) => {
                let c = trimmed(c);
                Some(match c.len() {
                    0 | 1 => 0.0,
                    2 => c[1],
                    _ => c[c.len() - 1].signum() * f64::INFINITY,
                })
            }
            Self::XLogX => Some(f64::INFINITY),
            Self::NegLog | Self::LogAffine { .. } | Self::Ramp { .. } => Some(0.0),
            Self::AbsMinusOne | Self::SqrtMinusOneSquared | Self::MaxReflect => Some(1.0),
            Self::Exp { rate } => Some(if *rate > 0.0 { f64::INFINITY } else { 0.0 }),
            Self::Combination(terms) => {
                let mut total = 0.0;
                for (w, f) in terms {
                    if *w == 0.0 {
                        continue;
                    }
                    total += w * f.slope_at_infinity()?;
                }
                (!total.is_nan()).then_some(total)
            }
            _ => None,
        }
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.syntax() {
            return write!(f, "{s}");
        }
        match self {
            Self::LogAffine { c, b } => write!(f, "{c}*ln(x)+{b}"),
            Self::Ramp { cap } => write!(f, "min(x,{cap})"),
            Self::Exp { rate } => write!(f, "exp({rate}*x)"),
            Self::Reflect(inner) => write!(f, "({inner})(1-x)"),
            Self::Combination(terms) => {
                for (i, (w, g)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{w}*{g}")?;
                }
                Ok(())
            }
            Self::Table(_) => write!(f, "table"),
            Self::GFromH(h) => write!(f, "G[h={h}]"),
            Self::FFromH(t) => write!(f, "f[h={}]", t.h()),
            _ => write!(f, "{self:?}"),
        }
    }
}

fn trimmed(c: &[f64]) -> &[f64] {
    let mut end = c.len();
    while end > 0 && c[end - 1] == 0.0 {
        end -= 1;
    }
    &c[..end]
}

/// `G(x) = (x - 1) h(x) / x` for `x <= 1/2`, `G(1 - x)` above.
pub(crate) fn g_from_h(h: &ScalarFunction, x: f64) -> f64 {
    let y = if x > 0.5 { 1.0 - x } else { x };
    let hy: f64 = h.value(y);
    if hy == 0.0 {
        return 0.0;
    }
    (y - 1.0) * hy / y
}

fn g_from_h_derivative(h: &ScalarFunction, x: f64) -> f64 {
    let (y, sign) = if x > 0.5 { (1.0 - x, -1.0) } else { (x, 1.0) };
    let hy: f64 = h.value(y);
    let dh: f64 = h.derivative(y);
    // d/dy [h - h/y] = h' - h'/y + h/y^2
    sign * (dh - dh / y + hy / (y * y))
}

/// Knot table interpolated by a monotonicity-preserving cubic Hermite
/// spline (Fritsch–Carlson slopes).
#[derive(Debug)]
pub struct KnotTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
    source: Option<String>,
}

impl KnotTable {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch(xs.len(), ys.len()));
        }
        if xs.len() < 2 {
            return Err(Error::Parse("knot table needs at least two rows".into()));
        }
        if let Some(w) = xs.windows(2).find(|w| w[1].is_nan() || w[0].is_nan() || w[1] <= w[0]) {
            return Err(Error::Parse(format!("knots must be strictly increasing: {} then {}", w[0], w[1])));
        }
        if let Some((idx, &value)) = xs.iter().chain(&ys).enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { idx, value });
        }
        let slopes = fritsch_carlson(&xs, &ys);
        Ok(Self { xs, ys, slopes, source: None })
    }

    /// Reads a two-column `x,y` CSV file; a non-numeric header row is skipped.
    pub fn from_csv(path: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(Path::new(path))
            .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            if record.len() < 2 {
                return Err(Error::Parse(format!("{path}:{}: expected two columns", line + 1)));
            }
            match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    xs.push(x);
                    ys.push(y);
                }
                _ if line == 0 => continue,
                _ => return Err(Error::Parse(format!("{path}:{}: non-numeric row", line + 1))),
            }
        }
        let mut table = Self::new(xs, ys)?;
        table.source = Some(path.to_string());
        Ok(table)
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    fn locate(&self, x: f64) -> Option<usize> {
        let last = self.xs.len() - 1;
        if !(x >= self.xs[0] && x <= self.xs[last]) {
            return None;
        }
        Some(self.xs.partition_point(|&k| k <= x).clamp(1, last) - 1)
    }

    pub fn value(&self, x: f64) -> f64 {
        let Some(k) = self.locate(x) else { return f64::NAN };
        let (h, t) = self.local(k, x);
        let (h00, h10, h01, h11) = hermite_basis(t);
        h00 * self.ys[k] + h10 * h * self.slopes[k] + h01 * self.ys[k + 1] + h11 * h * self.slopes[k + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let Some(k) = self.locate(x) else { return f64::NAN };
        let (h, t) = self.local(k, x);
        let d00 = 6.0 * t * t - 6.0 * t;
        let d10 = 3.0 * t * t - 4.0 * t + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * t * t - 2.0 * t;
        (d00 * self.ys[k] + d01 * self.ys[k + 1]) / h + d10 * self.slopes[k] + d11 * self.slopes[k + 1]
    }

    fn local(&self, k: usize, x: f64) -> (f64, f64) {
        let h = self.xs[k + 1] - self.xs[k];
        (h, (x - self.xs[k]) / h)
    }
}

pub(crate) fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + t, -2.0 * t3 + 3.0 * t2, t3 - t2)
}

fn fritsch_carlson(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let secants: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])).collect();
    let mut m = vec![0.0; n];
    m[0] = secants[0];
    m[n - 1] = secants[n - 2];
    for k in 1..n - 1 {
        m[k] = if secants[k - 1] * secants[k] <= 0.0 {
            0.0
        } else {
            0.5 * (secants[k - 1] + secants[k])
        };
    }
    for k in 0..n - 1 {
        if secants[k] == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let a = m[k] / secants[k];
        let b = m[k + 1] / secants[k];
        let s = a * a + b * b;
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            m[k] = tau * a * secants[k];
            m[k + 1] = tau * b * secants[k];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::io::Write;

    #[test]
    fn catalog_values() {
        assert_eq!(ScalarFunction::XLogX.value(0.0f64), 0.0);
        assert_abs_diff_eq!(ScalarFunction::XLogX.value(2.0f64), 2.0 * 2f64.ln());
        assert_eq!(ScalarFunction::NegLog.value(0.0f64), f64::INFINITY);
        assert_abs_diff_eq!(ScalarFunction::named("half_square_minus_x").unwrap().value(0.4f64), 0.08 - 0.4);
        assert_abs_diff_eq!(ScalarFunction::named("brier").unwrap().value(0.3f64), 0.09 + 0.49, epsilon = 1e-15);
        assert_eq!(ScalarFunction::Ramp { cap: 0.25 }.value(0.4f64), 0.25);
        assert!(ScalarFunction::named("nope").is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let fns = [
            ScalarFunction::XLogX,
            ScalarFunction::NegLog,
            ScalarFunction::SqrtMinusOneSquared,
            ScalarFunction::Odds,
            ScalarFunction::NegBinaryEntropy,
            ScalarFunction::Exp { rate: 1.5 },
            ScalarFunction::Polynomial(vec![0.3, -1.0, 0.5, 2.0]),
            ScalarFunction::Exp { rate: 2.0 }.symmetrized(),
            ScalarFunction::GFromH(Arc::new(ScalarFunction::named("square").unwrap())),
            ScalarFunction::GFromH(Arc::new(ScalarFunction::Odds)),
        ];
        let h = 1e-6;
        for f in &fns {
            for &x in &[0.1, 0.3, 0.45, 0.7, 0.9] {
                let fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
                let an: f64 = f.derivative(x);
                assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "{f}: x={x} fd={fd} an={an}");
            }
        }
    }

    #[test]
    fn g_from_h_closed_forms() {
        let odds = ScalarFunction::GFromH(Arc::new(ScalarFunction::Odds));
        for &x in &[0.01, 0.2, 0.5, 0.8, 0.99] {
            assert_abs_diff_eq!(odds.value(x), -1.0, epsilon = 1e-12);
        }
        let sq = ScalarFunction::GFromH(Arc::new(ScalarFunction::named("square").unwrap()));
        assert_abs_diff_eq!(sq.value(0.3), 0.3 * (0.3 - 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(sq.value(0.7), sq.value(0.3), epsilon = 1e-15);
    }

    #[test]
    fn slopes_at_infinity() {
        assert_eq!(ScalarFunction::XLogX.slope_at_infinity(), Some(f64::INFINITY));
        assert_eq!(ScalarFunction::AbsMinusOne.slope_at_infinity(), Some(1.0));
        assert_eq!(ScalarFunction::named("chi2").unwrap().slope_at_infinity(), Some(f64::INFINITY));
        assert_eq!(ScalarFunction::Polynomial(vec![1.0, -2.0, 0.0]).slope_at_infinity(), Some(-2.0));
        assert_eq!(ScalarFunction::Odds.slope_at_infinity(), None);
    }

    #[test]
    fn syntax_round_trip() {
        for s in ["name:square", "name:xlogx", "poly:0.5,-1", "name:ramp", "log:-2,0.5"] {
            let f = ScalarFunction::parse(s).unwrap();
            assert_eq!(f.syntax().unwrap(), s);
        }
        assert_eq!(ScalarFunction::parse("poly:0,0,1").unwrap().syntax().unwrap(), "name:square");
        assert!(ScalarFunction::parse("square").is_err());
        assert!(ScalarFunction::parse("poly:1,x").is_err());
        assert!(ScalarFunction::parse("log:1").is_err());
        assert_eq!(ScalarFunction::parse("log:-1,0").unwrap().value(1.0f64), 0.0);
    }

    #[test]
    fn knot_table_from_csv() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "x,h").unwrap();
        for k in 0..=50 {
            let x = 0.5 * k as f64 / 50.0;
            writeln!(file, "{x},{}", x * x).unwrap();
        }
        let path = file.path().to_str().unwrap().to_string();
        let f = ScalarFunction::parse(&format!("table:{path}")).unwrap();
        assert_eq!(f.syntax().unwrap(), format!("table:{path}"));
        assert!(!f.has_exact_derivative());
        assert_abs_diff_eq!(f.value(0.123), 0.123 * 0.123, epsilon = 1e-4);
        assert_abs_diff_eq!(f.derivative(0.3), 0.6, epsilon = 1e-2);
        assert!(f.value(0.6f64).is_nan());
        assert_eq!(f.domain(), (0.0, 0.5));
    }

    #[test]
    fn knot_table_rejects_unsorted() {
        assert!(KnotTable::new(vec![0.0, 0.2, 0.1], vec![0.0, 1.0, 2.0]).is_err());
        assert!(KnotTable::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn monotone_interpolation_stays_monotone() {
        let t = KnotTable::new(vec![0.0, 0.1, 0.2, 0.3, 0.5], vec![0.0, 0.0, 0.25, 0.25, 0.3]).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=500 {
            let v = t.value(0.5 * k as f64 / 500.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }
}
