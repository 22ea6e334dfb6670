//! The multiple-cover formula for `J(v)` on a few Mukai vectors.

use k3_pairs::invariants::{conjectural_j, n_from_j};
use k3_pairs::lattice::{CurveClass, MukaiVector};
use k3_pairs::series::format_rational;

fn main() {
    let vectors = ["0;2,4;-2", "3;0,0;3", "0;0,0;2", "0;1,2;0", "2;2,2;-4"];
    for s in vectors {
        let v: MukaiVector = s.parse().expect("valid vector");
        let j = conjectural_j(v).expect("nonzero vector");
        println!(
            "v = ({s:>9})  (v,v) = {:>3}  divisibility = {}  J = {}",
            v.square(),
            v.divisibility().unwrap(),
            format_rational(&j)
        );
    }

    // N(r, β, n) = 2 J(r, β, r + n)
    let n = n_from_j(0, CurveClass::new(1, 2), 0).unwrap();
    println!("N(0, s+2f, 0) = {}", format_rational(&n));
}
