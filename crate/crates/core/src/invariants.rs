//! Euler characteristics of Hilbert schemes of points on a K3 surface and the
//! sheaf-counting invariants `J(v)`, `N(r, β, n)` evaluated through the
//! multiple-cover formula.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{CurveClass, MukaiVector};
use crate::series::eta::eta_power;
use crate::series::{int, Rational};

/// `χ(Hilb^n(S))` for `0 ≤ n ≤ max_n`, the coefficients of `∏(1 − q^k)^{−24}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbTable {
    values: Vec<BigInt>,
}

impl HilbTable {
    pub fn new(max_n: usize) -> Self {
        Self { values: eta_power(-24, max_n) }
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Returns `None` beyond the table, zero for negative `n`.
    pub fn get(&self, n: i64) -> Option<BigInt> {
        if n < 0 {
            return Some(BigInt::zero());
        }
        self.values.get(n as usize).cloned()
    }
}

fn shared_table() -> &'static RwLock<Arc<HilbTable>> {
    static TABLE: OnceLock<RwLock<Arc<HilbTable>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Arc::new(HilbTable::new(64))))
}

/// A shared table covering at least `max_n`. Grows by doubling.
pub fn hilb_table(max_n: usize) -> Arc<HilbTable> {
    {
        let table = shared_table().read().unwrap();
        if table.max_n() >= max_n {
            return Arc::clone(&table);
        }
    }
    let mut table = shared_table().write().unwrap();
    if table.max_n() < max_n {
        let size = max_n.max(2 * table.max_n());
        *table = Arc::new(HilbTable::new(size));
    }
    Arc::clone(&table)
}

/// `χ(Hilb^n(S))`, with the convention that it vanishes for `n < 0`.
pub fn hilb_euler(n: i64) -> BigInt {
    if n < 0 {
        return BigInt::zero();
    }
    hilb_table(n as usize).get(n).expect("table covers n")
}

/// `J(v) = Σ_{k | v} k⁻² χ(Hilb^{(v/k, v/k)/2 + 1})`.
///
/// This is the conjectural multiple-cover formula; it is evaluated on every
/// nonzero `v` without deciding which classes are realized by sheaves.
pub fn conjectural_j(v: MukaiVector) -> Result<Rational> {
    let d = v.divisibility()?.abs();
    let square = v.square();
    let mut total = Rational::zero();
    for k in divisors(d) {
        let k2 = k * k;
        // (v/k)² = (v,v)/k² is even because v/k is integral.
        debug_assert_eq!(square % (2 * k2), 0);
        let m = square / (2 * k2) + 1;
        let chi = hilb_euler(m);
        if !chi.is_zero() {
            total += Rational::new(chi, BigInt::from(k2));
        }
    }
    Ok(total)
}

/// Positive divisors of `d > 0`, ascending.
pub(crate) fn divisors(d: i64) -> Vec<i64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= d {
        if d % k == 0 {
            small.push(k);
            if k * k != d {
                large.push(d / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `N(r, β, n) = 2·J(r, β, r + n)` for a Chern-character triple.
pub fn n_from_j(r: i64, beta: CurveClass, n: i64) -> Result<Rational> {
    if r == 0 && beta.is_zero() && n == 0 {
        return Err(Error::Domain("N is undefined on the zero Chern character".into()));
    }
    Ok(conjectural_j(MukaiVector::new(r, beta, r + n))? * int(2))
}

/// Closed form `J(0, 0, n) = 24·Σ_{k | n} k⁻²`.
pub fn j_closed_00n(n: i64) -> Result<Rational> {
    if n < 1 {
        return Err(Error::Domain(format!("J(0,0,n) closed form needs n >= 1, got {n}")));
    }
    let sum = divisors(n)
        .into_iter()
        .fold(Rational::zero(), |acc, k| acc + Rational::new(BigInt::one(), BigInt::from(k * k)));
    Ok(sum * int(24))
}

/// Closed form `J(r, 0, r) = 1/r²`.
pub fn j_closed_r0r(r: i64) -> Result<Rational> {
    if r < 1 {
        return Err(Error::Domain(format!("J(r,0,r) closed form needs r >= 1, got {r}")));
    }
    Ok(Rational::new(BigInt::one(), BigInt::from(r * r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn mv(r: i64, a: i64, b: i64, n: i64) -> MukaiVector {
        MukaiVector::new(r, CurveClass::new(a, b), n)
    }

    #[test]
    fn goettsche_values() {
        let expected = [1, 24, 324, 3200, 25650, 176256];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(hilb_euler(n as i64), BigInt::from(*e));
        }
        assert_eq!(hilb_euler(-3), BigInt::zero());
    }

    #[test]
    fn table_grows() {
        let t = hilb_table(300);
        assert!(t.max_n() >= 300);
        assert_eq!(t.get(-1), Some(BigInt::zero()));
        assert_eq!(t.get(5), Some(BigInt::from(176256)));
    }

    #[test]
    fn j_examples() {
        assert_eq!(conjectural_j(mv(0, 2, 4, -2)).unwrap(), int(176337));
        assert_eq!(conjectural_j(mv(3, 0, 0, 3)).unwrap(), rat(1, 9));
        assert_eq!(conjectural_j(mv(0, 0, 0, 2)).unwrap(), int(30));
        assert_eq!(conjectural_j(mv(0, 1, 2, 0)).unwrap(), int(324));
        assert!(matches!(conjectural_j(MukaiVector::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn stratum_sum() {
        let strata = [70956, 104652, 810, -81];
        assert_eq!(int(strata.iter().sum::<i64>()), conjectural_j(mv(0, 2, 4, -2)).unwrap());
    }

    #[test]
    fn n_examples() {
        assert_eq!(n_from_j(0, CurveClass::ZERO, 1).unwrap(), int(48));
        assert_eq!(n_from_j(0, CurveClass::ZERO, 2).unwrap(), int(60));
        assert_eq!(n_from_j(1, CurveClass::ZERO, 0).unwrap(), int(2));
        assert_eq!(n_from_j(0, CurveClass::new(1, 2), 0).unwrap(), int(648));
        assert!(n_from_j(0, CurveClass::ZERO, 0).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(j_closed_00n(1).unwrap(), int(24));
        assert_eq!(j_closed_00n(4).unwrap(), rat(63, 2));
        assert_eq!(j_closed_r0r(2).unwrap(), rat(1, 4));
        assert!(j_closed_00n(0).is_err());
        assert!(j_closed_r0r(-1).is_err());
        for n in 1..=50 {
            assert_eq!(conjectural_j(mv(0, 0, 0, n)).unwrap(), j_closed_00n(n).unwrap());
            assert_eq!(conjectural_j(mv(n, 0, 0, n)).unwrap(), j_closed_r0r(n).unwrap());
        }
    }

    #[test]
    fn primitive_vectors_give_hilbert_scheme() {
        for v in [mv(1, 1, 3, 2), mv(0, 1, 5, 7), mv(2, 1, 1, -3)] {
            assert_eq!(v.divisibility().unwrap(), 1);
            let expected = hilb_euler(v.square() / 2 + 1);
            assert_eq!(conjectural_j(v).unwrap(), Rational::from_integer(expected));
        }
    }
}
