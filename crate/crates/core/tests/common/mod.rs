//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use k3_pairs::lattice::{CurveClass, MukaiVector};
use k3_pairs::series::{rat, LaurentPoly, MultiSeries, QZSeries, Rational, Truncation};
use num_bigint::BigInt;
use rand::Rng;

/// Random sparse series with small rational coefficients. Weight-zero terms
/// appear only when `allow_constant` is set.
pub fn random_series<R: Rng>(rng: &mut R, trunc: Truncation, n_terms: usize, allow_constant: bool) -> MultiSeries {
    let mut s = MultiSeries::zero(trunc);
    for _ in 0..n_terms {
        let w_lo = if allow_constant { 0 } else { 1 };
        if trunc.y_max < w_lo {
            break;
        }
        let w = rng.gen_range(w_lo..=trunc.y_max);
        let a = rng.gen_range(0..=w);
        let z = rng.gen_range(trunc.z_lo..=trunc.z_hi);
        let num = rng.gen_range(-5..=5);
        let den = rng.gen_range(1..=4);
        s.add_term(CurveClass::new(a, w - a), z, rat(num, den));
    }
    s
}

/// Schoolbook product: every pair of terms, kept iff the truncation keeps it.
pub fn naive_mul(x: &MultiSeries, y: &MultiSeries) -> MultiSeries {
    let trunc = x.truncation();
    let mut out = MultiSeries::zero(trunc);
    for (c1, z1, a) in x.terms() {
        for (c2, z2, b) in y.terms() {
            let class = c1.add(c2);
            if trunc.keeps(class, z1 + z2) {
                out.add_term(class, z1 + z2, a * b);
            }
        }
    }
    out
}

/// `χ(Hilb^n)` for `n ≤ n_max` from `n·p(n) = 24 Σ_{k=1}^n σ(k) p(n − k)`.
pub fn hilb_by_sigma(n_max: usize) -> Vec<BigInt> {
    let sigma: Vec<BigInt> = (0..=n_max)
        .map(|k| BigInt::from((1..=k).filter(|d| k % d == 0).sum::<usize>()))
        .collect();
    let mut p = vec![BigInt::from(1)];
    for n in 1..=n_max {
        let mut acc = BigInt::from(0);
        for k in 1..=n {
            acc += &sigma[k] * &p[n - k];
        }
        acc *= 24;
        assert_eq!(&acc % n, BigInt::from(0));
        p.push(acc / n);
    }
    p
}

pub fn random_mukai<R: Rng>(rng: &mut R, bound: i64) -> MukaiVector {
    loop {
        let v = MukaiVector::new(
            rng.gen_range(-bound..=bound),
            CurveClass::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)),
            rng.gen_range(-bound..=bound),
        );
        if !v.is_zero() {
            return v;
        }
    }
}

/// `q^{q_min}` times a random product of factors `(1 ± z^c q^n)^{±k}`
/// with `c ∈ {−1, 0, 1}`.
pub fn random_qz<R: Rng>(rng: &mut R) -> QZSeries {
    let q_min = rng.gen_range(-2..=1);
    let precision = rng.gen_range(1..=6);
    let mut acc = QZSeries::monomial(q_min, q_min + precision, LaurentPoly::one());
    for _ in 0..rng.gen_range(1..=5) {
        let n = rng.gen_range(1..=precision);
        let c = rng.gen_range(-1..=1);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let factor = QZSeries::from_rows(
            0,
            precision,
            [(0, LaurentPoly::one()), (n, LaurentPoly::monomial(c, rat(sign, 1)))],
        );
        let factor = if rng.gen_bool(0.5) { factor } else { factor.invert().unwrap() };
        for _ in 0..rng.gen_range(1..=3) {
            acc = acc.mul(&factor);
        }
    }
    acc
}

/// `q·1/Δ` by expanding every factor of
/// `∏(1 − q^n)^{−20}(1 − z q^n)^{−2}(1 − z⁻¹ q^n)^{−2}` as a geometric series
/// over plain integers. Keys are `(q-exponent, z-exponent)`.
pub fn inverse_delta_brute_force(q_max: i64) -> BTreeMap<(i64, i64), i128> {
    let mut acc: BTreeMap<(i64, i64), i128> = BTreeMap::from([((0, 0), 1)]);
    for n in 1..=q_max {
        for (zc, times) in [(0, 20), (1, 2), (-1, 2)] {
            for _ in 0..times {
                let mut next = BTreeMap::new();
                for (&(q, z), &c) in &acc {
                    let mut j = 0;
                    while q + n * j <= q_max {
                        *next.entry((q + n * j, z + zc * j)).or_insert(0) += c;
                        j += 1;
                    }
                }
                acc = next;
            }
        }
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Rows of `1/Δ` (shifted back by `q⁻¹`) from the brute-force expansion.
pub fn inverse_delta_rows(q_max: i64) -> BTreeMap<i64, LaurentPoly> {
    let mut rows: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for ((q, z), c) in inverse_delta_brute_force(q_max + 1) {
        rows.entry(q - 1)
            .or_default()
            .add_term(z, Rational::from_integer(BigInt::from(c)));
    }
    rows
}
