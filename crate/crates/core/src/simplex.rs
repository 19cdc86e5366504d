//! Probability vectors, Markov channels and sufficient transformations.
//!
//! Channels act on row vectors: `push_forward(p, ch)[y] = Σ_x p[x] ch[x][y]`,
//! so applying `A` then `B` is the channel `A.compose(&B)` (the matrix
//! product `A·B`). Output alphabets always equal the input alphabet.
//!
//! Indices are zero-based throughout.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Entries produced within this distance below zero are clamped to exactly 0.
pub const CLAMP_TOLERANCE: f64 = 1e-15;

/// Default cross-product tolerance for [`proportional_pairs`].
pub const DEFAULT_PROPORTIONALITY_TOL: f64 = 1e-12;

/// A point of the probability simplex on `n >= 2` symbols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<T>",
    into = "Vec<T>",
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct Distribution<T> {
    probs: Vec<T>,
}

impl<T: Scalar> Distribution<T> {
    /// Validates and wraps a probability vector.
    ///
    /// Entries in `[-1e-15, 0)` are clamped to zero; the sum must be within
    /// `1e-12` of one.
    pub fn new(mut probs: Vec<T>) -> Result<Self> {
        let n = probs.len();
        if n < 2 {
            return Err(Error::AlphabetTooSmall(n));
        }
        let clamp = T::lit(-CLAMP_TOLERANCE);
        for (idx, v) in probs.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { idx, value: v.to_f64_lossy() });
            }
            if *v < T::zero() {
                if *v >= clamp {
                    *v = T::zero();
                } else {
                    return Err(Error::Negative { idx, value: v.to_f64_lossy() });
                }
            }
        }
        let sum: T = probs.iter().copied().sum();
        if (sum - T::one()).abs() > T::sum_tolerance(n) {
            return Err(Error::NotNormalized { sum: sum.to_f64_lossy() });
        }
        Ok(Self { probs })
    }

    /// Binary distribution `(p, 1 - p)`.
    pub fn binary(p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::OutOfRange { name: "p", value: p.to_f64_lossy() });
        }
        Ok(Self { probs: vec![p, T::one() - p] })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::AlphabetTooSmall(n));
        }
        let w = T::one() / T::lit(n as f64);
        Ok(Self { probs: vec![w; n] })
    }

    /// Parses a comma-separated list of decimals, e.g. `"0.2, 0.2, 0.6"`.
    pub fn parse(text: &str) -> Result<Self> {
        let probs = parse_list(text)?
            .into_iter()
            .map(T::lit)
            .collect::<Vec<_>>();
        Self::new(probs)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> T {
        self.probs[i]
    }

    /// Membership in the relative interior: all entries strictly positive.
    pub fn is_interior(&self) -> bool {
        self.probs.iter().all(|&v| v > T::zero())
    }

    /// `(1 - eps) * self + eps * uniform`.
    pub fn smoothed(&self, eps: T) -> Self {
        let w = eps / T::lit(self.len() as f64);
        let probs = self.probs.iter().map(|&v| (T::one() - eps) * v + w).collect();
        Self { probs }
    }

    /// The coordinate swap `(p_1, p_0)` of a binary distribution, or the
    /// reversal in general.
    pub fn reversed(&self) -> Self {
        let mut probs = self.probs.clone();
        probs.reverse();
        Self { probs }
    }

    pub fn cast<U: Scalar>(&self) -> Distribution<U> {
        Distribution {
            probs: self.probs.iter().map(|v| U::lit(v.to_f64_lossy())).collect(),
        }
    }

    /// Wraps a vector already known to lie on the simplex, clamping tiny
    /// negatives produced by rounding.
    pub(crate) fn from_trusted(mut probs: Vec<T>) -> Self {
        let clamp = T::lit(-CLAMP_TOLERANCE);
        for v in probs.iter_mut() {
            if *v < T::zero() && *v >= clamp {
                *v = T::zero();
            }
        }
        debug_assert!(probs.iter().all(|v| *v >= T::zero()));
        Self { probs }
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for Distribution<T> {
    type Error = Error;

    fn try_from(probs: Vec<T>) -> Result<Self> {
        Self::new(probs)
    }
}

impl<T> From<Distribution<T>> for Vec<T> {
    fn from(d: Distribution<T>) -> Self {
        d.probs
    }
}

impl<T: Scalar> fmt::Display for Distribution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.probs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// An `n x n` row-stochastic matrix `P_{Y|X}(y|x)`, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<Vec<T>>",
    into = "Vec<Vec<T>>",
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct Channel<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Channel<T> {
    /// Validates rows: square, entries in `[0, 1]`, each row summing to one
    /// within `1e-12`.
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::AlphabetTooSmall(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        let clamp = T::lit(-CLAMP_TOLERANCE);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(row.len(), n));
            }
            let mut sum = T::zero();
            for mut v in row {
                if !v.is_finite() {
                    return Err(Error::InvalidRow { row: r, reason: format!("non-finite entry {v}") });
                }
                if v < T::zero() && v >= clamp {
                    v = T::zero();
                }
                if v < T::zero() || v > T::one() + T::sum_tolerance(n) {
                    return Err(Error::InvalidRow { row: r, reason: format!("entry {v} outside [0, 1]") });
                }
                sum = sum + v;
                entries.push(v);
            }
            if (sum - T::one()).abs() > T::sum_tolerance(n) {
                return Err(Error::InvalidRow { row: r, reason: format!("sums to {sum}") });
            }
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::permutation(&(0..n).collect::<Vec<_>>())
    }

    /// Deterministic channel sending symbol `x` to `perm[x]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        if n < 2 {
            return Err(Error::AlphabetTooSmall(n));
        }
        let mut seen = vec![false; n];
        for &y in perm {
            if y >= n {
                return Err(Error::IndexOutOfRange { index: y, n });
            }
            if seen[y] {
                return Err(Error::Parse(format!("{perm:?} is not a permutation")));
            }
            seen[y] = true;
        }
        let mut entries = vec![T::zero(); n * n];
        for (x, &y) in perm.iter().enumerate() {
            entries[x * n + y] = T::one();
        }
        Ok(Self { n, entries })
    }

    /// Parses row-major text: entries separated by commas, rows by `;` or
    /// newlines, e.g. `"0.9,0.1; 0.2,0.8"`.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .split([';', '\n'])
            .filter(|r| !r.trim().is_empty())
            .map(|r| parse_list(r).map(|v| v.into_iter().map(T::lit).collect()))
            .collect::<Result<Vec<Vec<T>>>>()?;
        Self::new(rows)
    }

    /// Parses a JSON array of arrays.
    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<Vec<f64>> = serde_json::from_str(text)?;
        Self::new(rows.into_iter().map(|r| r.into_iter().map(T::lit).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, x: usize, y: usize) -> T {
        self.entries[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[T] {
        &self.entries[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n).map(<[T]>::to_vec).collect()
    }

    /// Matrix product `self · other`: apply `self`, then `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut entries = vec![T::zero(); n * n];
        for x in 0..n {
            for m in 0..n {
                let a = self.entry(x, m);
                if a == T::zero() {
                    continue;
                }
                for y in 0..n {
                    entries[x * n + y] = entries[x * n + y] + a * other.entry(m, y);
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn cast<U: Scalar>(&self) -> Channel<U> {
        Channel {
            n: self.n,
            entries: self.entries.iter().map(|v| U::lit(v.to_f64_lossy())).collect(),
        }
    }

    /// Row-stochastic matrix from entries that are known to be valid.
    pub(crate) fn from_trusted(n: usize, entries: Vec<T>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }
}

impl<T: Scalar> TryFrom<Vec<Vec<T>>> for Channel<T> {
    type Error = Error;

    fn try_from(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl<T: Scalar> From<Channel<T>> for Vec<Vec<T>> {
    fn from(c: Channel<T>) -> Self {
        c.rows()
    }
}

impl<T: Scalar> fmt::Display for Channel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, row) in self.entries.chunks(self.n).enumerate() {
            if x > 0 {
                write!(f, "; ")?;
            }
            for (y, v) in row.iter().enumerate() {
                if y > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}"))))
        .collect()
}

/// Marginal of `Y` when `X ~ p` passes through `ch`.
pub fn push_forward<T: Scalar>(p: &Distribution<T>, ch: &Channel<T>) -> Result<Distribution<T>> {
    let n = ch.n();
    if p.len() != n {
        return Err(Error::DimensionMismatch(p.len(), n));
    }
    let mut out = vec![T::zero(); n];
    for (x, &px) in p.probs().iter().enumerate() {
        if px == T::zero() {
            continue;
        }
        for (o, &w) in out.iter_mut().zip(ch.row(x)) {
            *o = *o + px * w;
        }
    }
    Ok(Distribution::from_trusted(out))
}

/// Binary channel with rows `(alpha, 1 - alpha)` and `(beta, 1 - beta)`.
pub fn binary_channel<T: Scalar>(alpha: T, beta: T) -> Result<Channel<T>> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v >= T::zero() && v <= T::one()) {
            return Err(Error::OutOfRange { name, value: v.to_f64_lossy() });
        }
    }
    Ok(Channel::from_trusted(
        2,
        vec![alpha, T::one() - alpha, beta, T::one() - beta],
    ))
}

/// Deterministic channel sending symbol `j` to `i` and fixing the rest.
pub fn merge_transform<T: Scalar>(i: usize, j: usize, n: usize) -> Result<Channel<T>> {
    check_pair(i, j, n)?;
    let mut entries = vec![T::zero(); n * n];
    for x in 0..n {
        let y = if x == j { i } else { x };
        entries[x * n + y] = T::one();
    }
    Ok(Channel::from_trusted(n, entries))
}

/// Channel sending symbol `i` to `i` with probability `t` and to `j` with
/// probability `1 - t`, fixing the rest.
pub fn split_transform<T: Scalar>(i: usize, j: usize, t: T, n: usize) -> Result<Channel<T>> {
    check_pair(i, j, n)?;
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::OutOfRange { name: "t", value: t.to_f64_lossy() });
    }
    let mut entries = vec![T::zero(); n * n];
    for x in 0..n {
        entries[x * n + x] = T::one();
    }
    entries[i * n + i] = t;
    entries[i * n + j] = T::one() - t;
    Ok(Channel::from_trusted(n, entries))
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::AlphabetTooSmall(n));
    }
    for index in [i, j] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
    }
    if i == j {
        return Err(Error::Parse(format!("indices must differ, got ({i}, {j})")));
    }
    Ok(())
}

/// Whether `p_i q_j = p_j q_i` within `tol`.
pub fn is_proportional<T: Scalar>(p: &Distribution<T>, q: &Distribution<T>, i: usize, j: usize, tol: T) -> bool {
    (p.get(i) * q.get(j) - p.get(j) * q.get(i)).abs() <= tol
}

/// All pairs `(i, j)`, `i < j`, whose coordinates are proportional between
/// `p` and `q`. Merging exactly these pairs is sufficient for the pair.
pub fn proportional_pairs<T: Scalar>(
    p: &Distribution<T>,
    q: &Distribution<T>,
    tol: T,
) -> Result<Vec<(usize, usize)>> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    let n = p.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if is_proportional(p, q, i, j, tol) {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Kind of sufficient transformation in a [`SufficiencyScenario`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Permutation,
    Merge,
    Split,
}

/// A pair of conditionals `P_{X|1} = p`, `P_{X|2} = q` together with a
/// transformation that is sufficient for the binary index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SufficiencyScenario {
    pub p: Distribution<f64>,
    pub q: Distribution<f64>,
    pub transform: Channel<f64>,
    pub kind: TransformKind,
}

impl SufficiencyScenario {
    pub fn permutation(p: Distribution<f64>, q: Distribution<f64>, perm: &[usize]) -> Result<Self> {
        ensure_dims(&p, &q, perm.len())?;
        Ok(Self { transform: Channel::permutation(perm)?, p, q, kind: TransformKind::Permutation })
    }

    /// Merge of symbol `j` into `i`; requires the pair to be proportional.
    pub fn merge(p: Distribution<f64>, q: Distribution<f64>, i: usize, j: usize) -> Result<Self> {
        ensure_dims(&p, &q, p.len())?;
        let transform = merge_transform(i, j, p.len())?;
        if !is_proportional(&p, &q, i, j, DEFAULT_PROPORTIONALITY_TOL) {
            return Err(Error::NotSufficient(format!(
                "coordinates ({i}, {j}) are not proportional between {p} and {q}"
            )));
        }
        Ok(Self { p, q, transform, kind: TransformKind::Merge })
    }

    /// Split of symbol `i` into `j` with retained fraction `t`. Sufficient
    /// when `j` is empty under both conditionals or `(i, j)` is proportional.
    pub fn split(p: Distribution<f64>, q: Distribution<f64>, i: usize, j: usize, t: f64) -> Result<Self> {
        ensure_dims(&p, &q, p.len())?;
        let transform = split_transform(i, j, t, p.len())?;
        let empty_target = p.get(j) == 0.0 && q.get(j) == 0.0;
        if !empty_target && !is_proportional(&p, &q, i, j, DEFAULT_PROPORTIONALITY_TOL) {
            return Err(Error::NotSufficient(format!(
                "split target {j} is neither empty nor proportional to {i}"
            )));
        }
        Ok(Self { p, q, transform, kind: TransformKind::Split })
    }

    /// The transformed pair `(P_{Y|1}, P_{Y|2})`.
    pub fn apply(&self) -> Result<(Distribution<f64>, Distribution<f64>)> {
        Ok((push_forward(&self.p, &self.transform)?, push_forward(&self.q, &self.transform)?))
    }
}

fn ensure_dims(p: &Distribution<f64>, q: &Distribution<f64>, n: usize) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    if p.len() != n {
        return Err(Error::DimensionMismatch(p.len(), n));
    }
    Ok(())
}

/// Uniform sample from the simplex by normalizing i.i.d. exponentials.
pub fn sample_distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Distribution<f64> {
    Distribution::from_trusted(sample_row(n, rng))
}

/// Channel whose rows are independent uniform simplex samples.
pub fn sample_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Channel<f64> {
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n {
        entries.extend(sample_row(n, rng));
    }
    Channel::from_trusted(n, entries)
}

pub fn sample_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

fn sample_row<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            let mut row: Vec<f64> = draws.iter().map(|d| d / total).collect();
            // absorb rounding into the largest entry so the row sums to 1
            let err = 1.0 - row.iter().sum::<f64>();
            let k = row
                .iter()
                .enumerate()
                .fold(0, |best, (i, v)| if *v > row[best] { i } else { best });
            row[k] += err;
            return row;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(v: &[f64]) -> Distribution<f64> {
        Distribution::new(v.to_vec()).unwrap()
    }

    fn assert_close(a: &Distribution<f64>, b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.probs().iter().zip(b) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
        }
    }

    #[test]
    fn push_forward_examples() {
        let p = d(&[0.3, 0.7]);
        assert_close(&push_forward(&p, &binary_channel(1.0, 0.0).unwrap()).unwrap(), &[0.3, 0.7]);
        assert_close(&push_forward(&p, &binary_channel(0.4, 0.4).unwrap()).unwrap(), &[0.4, 0.6]);
        assert_close(&push_forward(&p, &binary_channel(0.9, 0.2).unwrap()).unwrap(), &[0.41, 0.59]);
    }

    #[test]
    fn push_forward_dimension_mismatch() {
        let p = d(&[0.3, 0.7]);
        let ch = Channel::<f64>::identity(3).unwrap();
        assert!(matches!(push_forward(&p, &ch), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn binary_channel_examples() {
        assert_eq!(binary_channel(1.0, 0.0).unwrap(), Channel::identity(2).unwrap());
        assert_eq!(binary_channel(0.0, 1.0).unwrap(), Channel::permutation(&[1, 0]).unwrap());
        let erase = binary_channel(0.5, 0.5).unwrap();
        assert_eq!(erase.rows(), vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert!(binary_channel(1.5, 0.0).is_err());
        assert!(binary_channel(0.5, -0.1).is_err());
    }

    #[test]
    fn merge_examples() {
        let m = merge_transform::<f64>(0, 1, 3).unwrap();
        assert_close(&push_forward(&d(&[0.2, 0.2, 0.6]), &m).unwrap(), &[0.4, 0.0, 0.6]);
        assert_close(&push_forward(&d(&[0.1, 0.1, 0.8]), &m).unwrap(), &[0.2, 0.0, 0.8]);
        let m2 = merge_transform::<f64>(0, 1, 2).unwrap();
        assert_close(&push_forward(&d(&[0.35, 0.65]), &m2).unwrap(), &[1.0, 0.0]);
        assert!(matches!(merge_transform::<f64>(0, 3, 3), Err(Error::IndexOutOfRange { index: 3, n: 3 })));
        assert!(merge_transform::<f64>(1, 1, 3).is_err());
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_transform::<f64>(0, 1, 1.0, 3).unwrap(), Channel::identity(3).unwrap());
        let s = split_transform::<f64>(0, 1, 0.5, 3).unwrap();
        let split = push_forward(&d(&[0.4, 0.0, 0.6]), &s).unwrap();
        assert_close(&split, &[0.2, 0.2, 0.6]);
        let back = push_forward(&split, &merge_transform(0, 1, 3).unwrap()).unwrap();
        assert_close(&back, &[0.4, 0.0, 0.6]);
        assert!(split_transform::<f64>(0, 1, 1.5, 3).is_err());
        assert!(split_transform::<f64>(0, 5, 0.5, 3).is_err());
    }

    #[test]
    fn proportional_pairs_examples() {
        let pairs = proportional_pairs(&d(&[0.2, 0.2, 0.6]), &d(&[0.1, 0.1, 0.8]), 1e-12).unwrap();
        assert_eq!(pairs, vec![(0, 1)]);
        let p = d(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(proportional_pairs(&p, &p, 1e-12).unwrap().len(), 6);
        assert!(proportional_pairs(&d(&[0.5, 0.5]), &d(&[0.25, 0.75]), 1e-12).unwrap().is_empty());
    }

    #[test]
    fn proportional_zero_coordinates() {
        // cross-product test is well-defined on zero coordinates
        let p = d(&[0.0, 0.0, 1.0]);
        let q = d(&[0.0, 0.5, 0.5]);
        assert_eq!(proportional_pairs(&p, &q, 1e-12).unwrap(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn distribution_validation() {
        assert!(matches!(Distribution::new(vec![1.0]), Err(Error::AlphabetTooSmall(1))));
        assert!(matches!(Distribution::new(vec![0.5, 0.6]), Err(Error::NotNormalized { .. })));
        assert!(matches!(Distribution::new(vec![1.1, -0.1]), Err(Error::Negative { idx: 1, .. })));
        assert!(Distribution::new(vec![f64::NAN, 1.0]).is_err());
        let clamped = Distribution::new(vec![1.0, -1e-16]).unwrap();
        assert_eq!(clamped.get(1), 0.0);
        assert!(!clamped.is_interior());
        assert!(d(&[0.5, 0.5]).is_interior());
    }

    #[test]
    fn parsing() {
        let p: Distribution<f64> = Distribution::parse("0.2, 0.2,0.6").unwrap();
        assert_eq!(p.probs(), &[0.2, 0.2, 0.6]);
        assert!(Distribution::<f64>::parse("0.2,x").is_err());
        let c: Channel<f64> = Channel::parse("0.9,0.1; 0.2,0.8").unwrap();
        assert_eq!(c.row(0), &[0.9, 0.1]);
        assert_eq!(c.row(1), &[0.2, 0.8]);
        let j: Channel<f64> = Channel::from_json("[[0.9,0.1],[0.2,0.8]]").unwrap();
        assert_eq!(j, c);
        assert!(Channel::<f64>::parse("0.9,0.2;0.2,0.8").is_err());
        assert!(Channel::<f64>::parse("0.9,0.1,0.0;0.2,0.8").is_err());
    }

    #[test]
    fn serde_validates() {
        let p: Distribution<f64> = serde_json::from_str("[0.25,0.75]").unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[0.25,0.75]");
        assert!(serde_json::from_str::<Distribution<f64>>("[0.25,0.7]").is_err());
    }

    #[test]
    fn single_precision() {
        let p = Distribution::<f32>::new(vec![0.3, 0.7]).unwrap();
        let out = push_forward(&p, &binary_channel(0.9f32, 0.2).unwrap()).unwrap();
        assert!((out.get(0) - 0.41).abs() < 1e-6);
    }

    #[test]
    fn sufficiency_scenarios_validate() {
        let p = d(&[0.2, 0.2, 0.6]);
        let q = d(&[0.1, 0.1, 0.8]);
        let s = SufficiencyScenario::merge(p.clone(), q.clone(), 0, 1).unwrap();
        let (py, qy) = s.apply().unwrap();
        assert_close(&py, &[0.4, 0.0, 0.6]);
        assert_close(&qy, &[0.2, 0.0, 0.8]);
        assert!(matches!(
            SufficiencyScenario::merge(p.clone(), q.clone(), 0, 2),
            Err(Error::NotSufficient(_))
        ));
        assert!(SufficiencyScenario::split(p.clone(), q.clone(), 0, 1, 0.3).is_ok());
        assert!(SufficiencyScenario::split(p, q, 0, 2, 0.3).is_err());
    }

    #[test]
    fn samples_lie_on_simplex() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..6 {
            let p = sample_distribution(n, &mut rng);
            assert!(Distribution::new(p.probs().to_vec()).is_ok());
            let c = sample_channel(n, &mut rng);
            assert!(Channel::new(c.rows()).is_ok());
        }
    }
}
