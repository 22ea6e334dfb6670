//! The series indexed by the set of Chern characters, weighted by `N`,
//! squares the stable pair series.

use k3_pairs::ptseries::{pt_main_squared, pt_xbar, PTParams};

fn main() {
    let params = PTParams::new(3, 4, false).unwrap();
    let xbar = pt_xbar(&params).unwrap();
    let square = pt_main_squared(&params).unwrap();
    println!("{}", xbar);
    println!("differences from PT^2: {}", xbar.differences(&square).len());
}
