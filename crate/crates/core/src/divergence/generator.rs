use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::scalar::Scalar;

/// Central finite-difference step for generators without an analytic
/// gradient.
pub const FD_STEP: f64 = 1e-6;

/// Convex generator `G` of a Bregman divergence.
#[derive(Clone, Debug)]
pub enum Generator {
    /// `G(P) = sum_i g(p_i)`, any alphabet size.
    Separable(ScalarFunction),
    /// Binary alphabet only: `G(p, 1 - p) = g2(p)`, extended off the simplex
    /// as a function of the first coordinate.
    Binary(ScalarFunction),
    /// `base(P) + <linear, P> + constant`.
    Affine {
        base: Box<Generator>,
        linear: Vec<f64>,
        constant: f64,
    },
}

impl Generator {
    /// Negative Shannon entropy `sum_i p_i ln p_i`.
    pub fn negative_entropy() -> Self {
        Self::Separable(ScalarFunction::XLogX)
    }

    /// Required alphabet size, if any.
    pub fn alphabet(&self) -> Option<usize> {
        match self {
            Self::Separable(_) => None,
            Self::Binary(_) => Some(2),
            Self::Affine { base, linear, .. } => base.alphabet().or(Some(linear.len())),
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self.alphabet() {
            Some(m) if m != n => Err(Error::DimensionMismatch(n, m)),
            _ => Ok(()),
        }
    }

    pub fn value<T: Scalar>(&self, p: &[T]) -> Result<T> {
        self.check_dim(p.len())?;
        Ok(self.value_unchecked(p))
    }

    fn value_unchecked<T: Scalar>(&self, p: &[T]) -> T {
        match self {
            Self::Separable(g) => p.iter().map(|&x| g.value(x)).sum(),
            Self::Binary(g2) => g2.value(p[0]),
            Self::Affine { base, linear, constant } => {
                base.value_unchecked(p)
                    + p.iter().zip(linear).map(|(&x, &a)| T::lit(a) * x).sum::<T>()
                    + T::lit(*constant)
            }
        }
    }

    pub fn has_analytic_gradient(&self) -> bool {
        match self {
            Self::Separable(g) | Self::Binary(g) => g.has_exact_derivative(),
            Self::Affine { base, .. } => base.has_analytic_gradient(),
        }
    }

    /// Gradient at `q`: analytic when available, otherwise central finite
    /// differences with step [`FD_STEP`].
    pub fn gradient<T: Scalar>(&self, q: &[T]) -> Result<Vec<T>> {
        self.check_dim(q.len())?;
        if self.has_analytic_gradient() {
            Ok(self.analytic_gradient(q))
        } else {
            self.finite_difference_gradient(q)
        }
    }

    fn analytic_gradient<T: Scalar>(&self, q: &[T]) -> Vec<T> {
        match self {
            Self::Separable(g) => q.iter().map(|&x| g.derivative(x)).collect(),
            Self::Binary(g2) => {
                let mut grad = vec![T::zero(); q.len()];
                grad[0] = g2.derivative(q[0]);
                grad
            }
            Self::Affine { base, linear, .. } => base
                .analytic_gradient(q)
                .into_iter()
                .zip(linear)
                .map(|(g, &a)| g + T::lit(a))
                .collect(),
        }
    }

    /// Componentwise central differences. Fails when any coordinate is
    /// closer than `2 * FD_STEP` to the boundary.
    pub fn finite_difference_gradient<T: Scalar>(&self, q: &[T]) -> Result<Vec<T>> {
        self.check_dim(q.len())?;
        let step = T::lit(FD_STEP);
        let two = T::lit(2.0);
        if let Some(i) = q.iter().position(|&x| x < two * step || x > T::one() - two * step) {
            return Err(Error::Boundary(format!(
                "coordinate {i} = {} is within the finite-difference stencil of the boundary",
                q[i]
            )));
        }
        let mut point = q.to_vec();
        let mut grad = Vec::with_capacity(q.len());
        for i in 0..q.len() {
            point[i] = q[i] + step;
            let up = self.value_unchecked(&point);
            point[i] = q[i] - step;
            let down = self.value_unchecked(&point);
            point[i] = q[i];
            grad.push((up - down) / (two * step));
        }
        Ok(grad)
    }

    /// The binary restriction `p -> G(p, 1 - p)` and its derivative along
    /// the simplex.
    pub fn binary_restriction<T: Scalar>(&self, p: T) -> (T, T) {
        let point = [p, T::one() - p];
        let v = self.value_unchecked(&point);
        let g = self.analytic_or_fd(&point);
        (v, g[0] - g[1])
    }

    fn analytic_or_fd<T: Scalar>(&self, q: &[T]) -> Vec<T> {
        if self.has_analytic_gradient() {
            self.analytic_gradient(q)
        } else {
            self.finite_difference_gradient(q)
                .unwrap_or_else(|_| vec![T::nan(); q.len()])
        }
    }

    pub(crate) fn scalar_functions(&self) -> Vec<&ScalarFunction> {
        match self {
            Self::Separable(g) | Self::Binary(g) => vec![g],
            Self::Affine { base, .. } => base.scalar_functions(),
        }
    }
}
