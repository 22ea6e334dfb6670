//! Euler characteristics of Hilbert schemes of points on a K3 surface.

use k3_pairs::invariants::{hilb_euler, HilbTable};

fn main() {
    let table = HilbTable::new(12);
    for (n, chi) in table.values().iter().enumerate() {
        println!("chi(Hilb^{n:<2}) = {chi}");
    }
    println!("chi(Hilb^100) = {}", hilb_euler(100));
}
