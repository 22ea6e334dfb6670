//! Euler characteristics of stable pairs on a K3 surface against `1/Δ`.

use k3_pairs::modular::{inv_delta, ky_lhs_row};
use k3_pairs::ptseries::{ky_identity_check, ky_pairs_euler};

fn main() {
    for h in 0..=3 {
        let row: Vec<String> = (-3..=5).map(|n| ky_pairs_euler(h, n).to_string()).collect();
        println!("h = {h}: chi(P_n), n = -3..5: {}", row.join(" "));
    }

    println!("row q^0 of the pair series from 1/Delta: {}", ky_lhs_row(1, 4).unwrap());
    let inv = inv_delta(2).unwrap();
    for m in -1..=2 {
        println!("1/Delta, q^{m}: {}", inv.coeff(m));
    }

    let mismatches = ky_identity_check(4, 8).unwrap();
    println!("identity at q_max = 4, z_window = 8: {} mismatches", mismatches.len());
}
