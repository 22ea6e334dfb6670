use std::collections::BTreeMap;

use num_traits::Zero;

use super::{int, LaurentPoly, Rational};
use crate::error::{Error, Result};

/// Truncated `q`-series with Laurent-polynomial coefficients in `z`.
///
/// Coefficients of `q^m` are known for `q_min ≤ m ≤ q_max`; `q_min` may be
/// negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QZSeries {
    q_min: i64,
    q_max: i64,
    coeffs: BTreeMap<i64, LaurentPoly>,
}

impl QZSeries {
    pub fn zero(q_min: i64, q_max: i64) -> Self {
        Self { q_min, q_max, coeffs: BTreeMap::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = (i64, LaurentPoly)>>(q_min: i64, q_max: i64, rows: I) -> Self {
        let mut s = Self::zero(q_min, q_max);
        for (m, p) in rows {
            s.add_row(m, &p);
        }
        s
    }

    /// `c` at `q^q_min`, known up to `q^q_max`.
    pub fn monomial(q_min: i64, q_max: i64, c: LaurentPoly) -> Self {
        Self::from_rows(q_min, q_max, [(q_min, c)])
    }

    pub fn q_min(&self) -> i64 {
        self.q_min
    }

    pub fn q_max(&self) -> i64 {
        self.q_max
    }

    pub fn coeff(&self, m: i64) -> LaurentPoly {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn rows(&self) -> impl Iterator<Item = (i64, &LaurentPoly)> {
        self.coeffs.iter().map(|(&m, p)| (m, p))
    }

    pub fn add_row(&mut self, m: i64, p: &LaurentPoly) {
        if m < self.q_min || m > self.q_max || p.is_zero() {
            return;
        }
        let sum = self.coeff(m).add(p);
        if sum.is_zero() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, sum);
        }
    }

    pub fn truncate(&self, q_max: i64) -> Self {
        Self::from_rows(
            self.q_min,
            q_max.min(self.q_max),
            self.rows().map(|(m, p)| (m, p.clone())),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let q_min = self.q_min + other.q_min;
        let q_max = (self.q_max + other.q_min).min(other.q_max + self.q_min);
        let mut out = Self::zero(q_min, q_max);
        for (i, a) in self.rows() {
            for (j, b) in other.rows() {
                if i + j <= q_max {
                    out.add_row(i + j, &a.mul(b));
                }
            }
        }
        debug_assert!(!(self.satisfies_width_bound() && other.satisfies_width_bound()) || out.satisfies_width_bound());
        out
    }

    /// Series inverse. The coefficient of `q^q_min` must be a monomial `c·z^k`.
    pub fn invert(&self) -> Result<Self> {
        let lead = self.coeff(self.q_min);
        let Some((k, c)) = lead.as_monomial() else {
            return Err(Error::Domain(format!(
                "leading coefficient {lead} of q^{} is not a unit monomial",
                self.q_min
            )));
        };
        let lead_inv = LaurentPoly::monomial(-k, c.recip());
        let precision = self.q_max - self.q_min;
        let q_min = -self.q_min;
        let mut rows: Vec<LaurentPoly> = vec![lead_inv.clone()];
        for j in 1..=precision {
            let mut acc = LaurentPoly::zero();
            for i in 1..=j {
                let a = self.coeff(self.q_min + i);
                if !a.is_zero() {
                    acc = acc.add(&a.mul(&rows[(j - i) as usize]));
                }
            }
            rows.push(acc.mul(&lead_inv).scale(&int(-1)));
        }
        let out = Self::from_rows(q_min, q_min + precision, rows.into_iter().enumerate().map(|(j, p)| (q_min + j as i64, p)));
        debug_assert!(!self.satisfies_width_bound() || out.satisfies_width_bound());
        Ok(out)
    }

    /// Each `q^m` coefficient has `z`-width at most `2(m − q_min)`.
    pub fn satisfies_width_bound(&self) -> bool {
        self.rows().all(|(m, p)| p.width() <= 2 * (m - self.q_min))
    }

    pub fn is_palindromic(&self) -> bool {
        self.rows().all(|(_, p)| p.is_palindromic())
    }

    /// Coefficients of the `z = 1` specialization, indexed by `q`-exponent.
    pub fn at_z_one(&self) -> BTreeMap<i64, Rational> {
        self.rows()
            .map(|(m, p)| (m, p.eval_at_one()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Multiplies every row by a fixed Laurent polynomial in `z`.
    pub fn mul_z_poly(&self, p: &LaurentPoly) -> Self {
        Self::from_rows(self.q_min, self.q_max, self.rows().map(|(m, r)| (m, r.mul(p))))
    }
}
