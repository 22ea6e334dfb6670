//! The product `Δ(z, q) = q ∏ (1 − q^n)^20 (1 − z q^n)^2 (1 − z⁻¹ q^n)^2`,
//! its inverse, and the kernel `z − 2 + z⁻¹` relating `1/Δ` to the
//! Kawai-Yoshioka pair series.
//!
//! Half-integer powers of `z` never appear: every identity involving
//! `(√z − 1/√z)^{±2}` is multiplied through by the kernel.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::series::eta::eta_power;
use crate::series::{int, LaurentPoly, QZSeries, Rational};

/// `Δ` (leading term `q¹`) or `1/Δ` (leading term `q⁻¹`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSeries {
    series: QZSeries,
}

impl DeltaSeries {
    pub fn series(&self) -> &QZSeries {
        &self.series
    }

    pub fn into_series(self) -> QZSeries {
        self.series
    }

    pub fn coeff(&self, m: i64) -> LaurentPoly {
        self.series.coeff(m)
    }

    pub fn q_min(&self) -> i64 {
        self.series.q_min()
    }

    pub fn q_max(&self) -> i64 {
        self.series.q_max()
    }
}

/// `(1 − z^c q^n)²` for `n ≤ q_max`, as a `QZSeries` starting at `q⁰`.
fn squared_z_factor(c: i64, n: i64, q_max: i64) -> QZSeries {
    QZSeries::from_rows(
        0,
        q_max,
        [
            (0, LaurentPoly::one()),
            (n, LaurentPoly::monomial(c, int(-2))),
            (2 * n, LaurentPoly::monomial(2 * c, int(1))),
        ],
    )
}

/// `Δ(z, q)` truncated after `q^q_max`.
pub fn delta(q_max: i64) -> Result<DeltaSeries> {
    if q_max < 1 {
        return Err(Error::Parameter(format!("delta needs q_max >= 1, got {q_max}")));
    }
    // q · ∏(1 − q^n)^20 through the dense kernel, shifted by one.
    let eta20 = eta_power(20, (q_max - 1) as usize);
    let mut acc = QZSeries::from_rows(
        1,
        q_max,
        eta20
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i as i64 + 1, LaurentPoly::monomial(0, Rational::from_integer(c)))),
    );
    for n in 1..q_max {
        for c in [1, -1] {
            acc = acc.mul(&squared_z_factor(c, n, q_max - 1));
        }
    }
    debug_assert!(acc.satisfies_width_bound());
    Ok(DeltaSeries { series: acc })
}

/// `1/Δ(z, q)`, known through `q^q_max`.
pub fn inv_delta(q_max: i64) -> Result<DeltaSeries> {
    if q_max < -1 {
        return Err(Error::Parameter(format!("inv_delta needs q_max >= -1, got {q_max}")));
    }
    // Δ to q^{q_max+2} inverts to q^{q_max}.
    let d = delta(q_max + 2)?;
    let series = d.series.invert()?;
    debug_assert_eq!(series.q_max(), q_max);
    Ok(DeltaSeries { series })
}

/// The kernel `(√z − 1/√z)² = z − 2 + z⁻¹`.
pub fn ky_kernel() -> LaurentPoly {
    LaurentPoly::kernel()
}

/// `1/Δ`, which equals the kernel times the Kawai-Yoshioka pair series.
pub fn ky_rhs_times_kernel(q_max: i64) -> Result<QZSeries> {
    Ok(inv_delta(q_max)?.into_series())
}

/// The `q^{h−1}` row of the Kawai-Yoshioka pair series, recovered from `1/Δ`
/// by dividing by the kernel and keeping `z`-degrees up to `z_max`.
pub fn ky_lhs_row(h: i64, z_max: i64) -> Result<LaurentPoly> {
    if h < 0 {
        return Err(Error::Parameter(format!("h must be >= 0, got {h}")));
    }
    let rhs = ky_rhs_times_kernel(h - 1)?;
    Ok(rhs.coeff(h - 1).divide_by_kernel(z_max))
}

/// The `z = 1` specialization of `1/Δ` as integers indexed by `q`-exponent.
pub fn inv_delta_at_z_one(q_max: i64) -> Result<Vec<(i64, BigInt)>> {
    let inv = inv_delta(q_max)?;
    Ok((-1..=q_max)
        .map(|m| {
            let c = inv.coeff(m).eval_at_one();
            assert!(c.is_integer(), "non-integral coefficient of 1/Δ at z = 1");
            (m, c.to_integer())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::hilb_euler;

    #[test]
    fn delta_low_coefficients() {
        let d = delta(4).unwrap();
        assert_eq!(d.coeff(1), LaurentPoly::one());
        assert_eq!(
            d.coeff(2),
            LaurentPoly::from_terms([(-1, int(-2)), (0, int(-20)), (1, int(-2))])
        );
        assert!(d.series().is_palindromic());
        assert!(d.series().satisfies_width_bound());
    }

    #[test]
    fn delta_at_z_one_is_eta_24() {
        let d = delta(12).unwrap();
        let eta24 = eta_power(24, 11);
        for m in 1..=12 {
            assert_eq!(d.coeff(m).eval_at_one(), Rational::from_integer(eta24[(m - 1) as usize].clone()));
        }
    }

    #[test]
    fn inverse_rows() {
        let inv = inv_delta(3).unwrap();
        assert_eq!(inv.q_min(), -1);
        assert_eq!(inv.coeff(-1), LaurentPoly::one());
        assert_eq!(
            inv.coeff(0),
            LaurentPoly::from_terms([(-1, int(2)), (0, int(20)), (1, int(2))])
        );
        let prod = delta(5).unwrap().series().mul(inv.series());
        assert_eq!(prod, QZSeries::monomial(0, 4, LaurentPoly::one()));
    }

    #[test]
    fn specialization_matches_goettsche() {
        for (m, c) in inv_delta_at_z_one(29).unwrap() {
            assert_eq!(c, hilb_euler(m + 1));
        }
    }

    #[test]
    fn lhs_first_row() {
        let row = ky_lhs_row(0, 6).unwrap();
        assert_eq!(row, LaurentPoly::from_terms((1..=6).map(|n| (n, int(n)))));
        assert_eq!(ky_kernel(), LaurentPoly::from_terms([(-1, int(1)), (0, int(-2)), (1, int(1))]));
    }

    #[test]
    fn parameter_minima() {
        assert!(delta(0).is_err());
        assert!(inv_delta(-2).is_err());
        assert!(inv_delta(-1).is_ok());
    }
}
