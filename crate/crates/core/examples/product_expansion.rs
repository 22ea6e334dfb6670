//! The stable pair series built two ways: as an exponential weighted by `J`,
//! and as a product of binomial factors. They must agree term by term.

use std::time::Instant;

use k3_pairs::lattice::CurveClass;
use k3_pairs::ptseries::{pt_borcherds, pt_main, PTParams};

fn main() {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let y_max = args.first().copied().unwrap_or(3);
    let z_max = args.get(1).copied().unwrap_or(4);

    for signed in [false, true] {
        let params = PTParams::new(y_max, z_max, signed).unwrap();
        let start = Instant::now();
        let main = pt_main(&params).unwrap();
        let product = pt_borcherds(&params).unwrap();
        let diff = main.differences(&product);
        println!(
            "signed = {signed}: {} nonzero terms, {} differences, {:.2?}",
            main.len(),
            diff.len(),
            start.elapsed()
        );
    }

    let params = PTParams::new(y_max, z_max, false).unwrap();
    let pt = pt_main(&params).unwrap();
    for class in [CurveClass::FIBER, CurveClass::SECTION, CurveClass::new(1, 1)] {
        let row: Vec<String> = (-z_max..=z_max).map(|z| pt.coeff(class, z).to_string()).collect();
        println!("y^({class}): [{}]", row.join(", "));
    }
}
