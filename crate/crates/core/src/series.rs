//! Truncated univariate power series.
//!
//! A [`TruncatedSeries`] of order `n` stores the Taylor coefficients
//! `c[0], ..., c[n]` of a function around `t = 0`, i.e. `c[i] = f^(i)(0) / i!`.
//! Every binary operation truncates to the smaller of the two operand orders, so
//! a result never claims more precision than its least precise input.

use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// Hard cap on the retained degree.
pub const MAX_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a series needs at least one coefficient".into()));
        }
        if coeffs.len() > MAX_ORDER + 1 {
            return Err(Error::OrderExceeded {
                requested: coeffs.len() - 1,
                available: MAX_ORDER,
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("series coefficients"));
        }
        Ok(Self { coeffs })
    }

    /// Builds a series from the first `order + 1` coefficients, padding with zeros.
    pub fn from_slice(coeffs: &[f64], order: usize) -> Result<Self> {
        let mut c = vec![0.0; order + 1];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Self::new(c)
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(0.0, order)
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order.min(MAX_ORDER) + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The identity series `t`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[1] = 1.0;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero past the stored order.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// The `k`-th order information `(f(0), f'(0), f''(0)/2!, ..., f^(k)(0)/k!)`.
    pub fn coef(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.order() {
            return Err(Error::OrderExceeded {
                requested: k,
                available: self.order(),
            });
        }
        Ok(self.coeffs[..=k].to_vec())
    }

    /// `f^(k)(0)`, the plain derivative rather than the Taylor coefficient.
    pub fn derivative_at_zero(&self, k: usize) -> f64 {
        self.coeff(k) * factorial(k)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add_constant(&self, value: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum())
            .collect();
        Self { coeffs }
    }

    pub fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::constant(1.0, self.order());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// `1 / f`; requires `f(0) != 0`.
    pub fn recip(&self) -> Result<Self> {
        let f0 = self.coeffs[0];
        if f0 == 0.0 {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let n = self.order();
        let mut g = vec![0.0; n + 1];
        g[0] = 1.0 / f0;
        for k in 1..=n {
            let s: f64 = (1..=k).map(|i| self.coeffs[i] * g[k - i]).sum();
            g[k] = -s / f0;
        }
        Self::new(g)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// `f^(num/den)` for `f(0) > 0`, to the order of `f`.
    ///
    /// Uses the power recurrence obtained from `f g' = (num/den) f' g`, which
    /// yields the solution of `g^den = f^num` with `g(0) = f(0)^(num/den)`.
    pub fn rational_power(&self, num: i32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("rational power with zero denominator".into()));
        }
        let f0 = self.coeffs[0];
        if !(f0 > 0.0) {
            return Err(Error::NonpositiveLeadingCoefficient(f0));
        }
        let alpha = num as f64 / den as f64;
        let n = self.order();
        let mut g = vec![0.0; n + 1];
        g[0] = f0.powf(alpha);
        for k in 1..=n {
            let s: f64 = (1..=k)
                .map(|i| ((alpha + 1.0) * i as f64 - k as f64) * self.coeffs[i] * g[k - i])
                .sum();
            g[k] = s / (k as f64 * f0);
        }
        Self::new(g)
    }

    /// `f(g(t))`; requires `g(0) = 0`. Truncated to the smaller order.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.coeffs[0] != 0.0 {
            return Err(Error::NonzeroInnerConstant(inner.coeffs[0]));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n], n);
        for i in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeffs[i];
        }
        Ok(acc)
    }

    /// Compositional inverse: `g` with `f(g(t)) = t` to the order of `f`.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs[0] != 0.0 {
            return Err(Error::NotInvertible("constant term is nonzero"));
        }
        let n = self.order();
        if n == 0 {
            return Err(Error::NotInvertible("order 0 series has no linear term"));
        }
        let f1 = self.coeffs[1];
        if f1 == 0.0 {
            return Err(Error::NotInvertible("linear coefficient vanishes"));
        }
        let mut g = Self::zero(n);
        g.coeffs[1] = 1.0 / f1;
        // Fix one coefficient per pass: the t^k coefficient of f(g) is linear in
        // g_k with slope f1 once g_1..g_{k-1} are settled.
        for k in 2..=n {
            let fg = self.compose(&g)?;
            g.coeffs[k] -= fg.coeffs[k] / f1;
        }
        Ok(g)
    }

    /// Termwise derivative; the order drops by one (an order-0 series maps to 0).
    pub fn derive(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|i| i as f64 * self.coeffs[i])
            .collect();
        Self { coeffs }
    }

    /// Antiderivative vanishing at 0; the order grows by one up to [`MAX_ORDER`].
    pub fn integrate(&self) -> Self {
        let n = (self.order() + 1).min(MAX_ORDER);
        let mut coeffs = vec![0.0; n + 1];
        for i in 1..=n {
            coeffs[i] = self.coeffs[i - 1] / i as f64;
        }
        Self { coeffs }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.scale(-1.0)
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
