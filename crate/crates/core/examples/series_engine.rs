//! The truncated series engine on its own: products, exp and log.

use k3_pairs::lattice::CurveClass;
use k3_pairs::series::{int, pow_binomial, MultiSeries, Truncation};
use num_bigint::BigInt;

fn main() {
    let t = Truncation::symmetric(3, 3).unwrap();
    let f = MultiSeries::from_terms(t, [(CurveClass::FIBER, 1, int(1)), (CurveClass::SECTION, -1, int(2))]);
    let e = f.exp().unwrap();
    println!("f        = {f}");
    println!("exp f    = {e}");
    println!("log exp f == f: {}", e.log().unwrap() == f);

    // (1 − y^f)^{-24} · (1 − y^f)^{24} = 1
    let up = pow_binomial(t, CurveClass::FIBER, 0, -1, &BigInt::from(-24)).unwrap();
    let down = pow_binomial(t, CurveClass::FIBER, 0, -1, &BigInt::from(24)).unwrap();
    println!("(1 - y^f)^-24 = {up}");
    println!("product is one: {}", up.mul(&down).unwrap() == MultiSeries::one(t));
}
