//! Isometries of the Mukai lattice leave `J` unchanged.

use k3_pairs::invariants::conjectural_j;
use k3_pairs::lattice::{apply_isometry, HodgeIsometry, MukaiVector};
use k3_pairs::series::format_rational;

fn main() {
    let v: MukaiVector = "2;1,3;-1".parse().unwrap();
    let j = conjectural_j(v).unwrap();
    println!("v = {v}, (v,v) = {}, J = {}", v.square(), format_rational(&j));
    for g in HodgeIsometry::generators() {
        let gv = apply_isometry(&g, v).unwrap();
        let same = conjectural_j(gv).unwrap() == j;
        println!("{g:?}\n    -> {gv}  (gv,gv) = {}  J preserved: {same}", gv.square());
    }

    // reflections need a root, (w, w) = -2
    let bad = HodgeIsometry::Reflection("1;0,0;0".parse().unwrap());
    println!("reflection by a non-root: {}", apply_isometry(&bad, v).unwrap_err());
}
