use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{int, Rational};

/// Finite Laurent polynomial in `z` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, int(1))
    }

    pub fn monomial(deg: i64, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(deg, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (d, c) in terms {
            p.add_term(d, c);
        }
        p
    }

    /// `z − 2 + z⁻¹`, the square of `√z − 1/√z`.
    pub fn kernel() -> Self {
        Self::from_terms([(-1, int(1)), (0, int(-2)), (1, int(1))])
    }

    pub fn add_term(&mut self, deg: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(deg).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&deg);
        }
    }

    pub fn coeff(&self, deg: i64) -> Rational {
        self.coeffs.get(&deg).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max_deg − min_deg`; zero for the zero polynomial.
    pub fn width(&self) -> i64 {
        match (self.min_deg(), self.max_deg()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Whether `coeff(k) == coeff(−k)` for all `k`.
    pub fn is_palindromic(&self) -> bool {
        self.terms().all(|(d, c)| self.coeff(-d) == *c)
    }

    pub fn eval_at_one(&self) -> Rational {
        self.coeffs.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// The single term, if this polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(i64, &Rational)> {
        (self.coeffs.len() == 1).then(|| self.terms().next().unwrap())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(d, c)| (d, c * k)))
    }

    pub fn shift(&self, by: i64) -> Self {
        Self::from_terms(self.terms().map(|(d, c)| (d + by, c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (d1, c1) in self.terms() {
            for (d2, c2) in other.terms() {
                out.add_term(d1 + d2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Keeps only degrees in `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        Self::from_terms(self.terms().filter(|(d, _)| (lo..=hi).contains(d)).map(|(d, c)| (d, c.clone())))
    }

    /// Solves `(z − 2 + z⁻¹)·F = self` for `F` expanded in ascending powers of
    /// `z`, i.e. `F = z·self/(1 − z)²`, keeping degrees `≤ z_max`.
    pub fn divide_by_kernel(&self, z_max: i64) -> Self {
        let mut out = Self::zero();
        for (d, c) in self.terms() {
            // z^{d+1} Σ_{m≥0} (m+1) z^m
            let mut m = 0;
            while d + 1 + m <= z_max {
                out.add_term(d + 1 + m, c * int(m + 1));
                m += 1;
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(d, c)| format!("({c})z^{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
