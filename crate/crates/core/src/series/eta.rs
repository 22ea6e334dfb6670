//! Dense single-variable kernels for `∏_{k≥1} (1 − q^k)^e`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients `[q^0 .. q^n_max]` of `∏_{k≥1} (1 − q^k)^exponent`.
pub fn eta_power(exponent: i64, n_max: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n_max + 1];
    c[0] = BigInt::one();
    for k in 1..=n_max {
        if exponent < 0 {
            // multiply by 1/(1 − q^k): strided prefix sums in ascending order
            for _ in 0..-exponent {
                for i in k..=n_max {
                    let prev = c[i - k].clone();
                    c[i] += prev;
                }
            }
        } else {
            for _ in 0..exponent {
                for i in (k..=n_max).rev() {
                    let prev = c[i - k].clone();
                    c[i] -= prev;
                }
            }
        }
    }
    c
}
