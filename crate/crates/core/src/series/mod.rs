//! Exact truncated series arithmetic.
//!
//! Two carriers live here: [`MultiSeries`], graded by curve classes with a
//! windowed Laurent variable `z`, and [`QZSeries`], a `q`-series whose
//! coefficients are Laurent polynomials in `z`. Coefficients are exact
//! rationals throughout.

pub mod eta;
pub mod laurent;
pub mod multi;
pub mod qz;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use laurent::LaurentPoly;
pub use multi::{pow_binomial, MultiSeries, Truncation};
pub use qz::QZSeries;

/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `"p/q"`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.trim().parse().ok()?)),
    }
}

/// Generalized binomial coefficient `C(e, k)` for any integer `e`.
pub fn binomial(e: &BigInt, k: u64) -> BigInt {
    // Falling factorial over k!, kept integral at every step.
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (e - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_negative_exponent() {
        // C(-24, k) (-1)^k = C(k + 23, 23)
        assert_eq!(binomial(&BigInt::from(-24), 2), BigInt::from(300));
        assert_eq!(binomial(&BigInt::from(-24), 3), BigInt::from(-2600));
        assert_eq!(binomial(&BigInt::from(5), 7), BigInt::zero());
        assert_eq!(binomial(&BigInt::from(7), 0), BigInt::one());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(2, 18)), "1/9");
        assert_eq!(format_rational(&int(176337)), "176337/1");
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("12"), Some(int(12)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
