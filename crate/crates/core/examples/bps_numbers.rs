//! BPS numbers `r_{g,h}`, read off `1/Δ` and off the signed pair series.

use k3_pairs::modular::inv_delta;
use k3_pairs::ptseries::{bps_extract, gv_extract, pt_main_padded, PTParams};

fn main() {
    let q_max = 5;
    let table = bps_extract(inv_delta(q_max).unwrap().series(), q_max).unwrap();
    println!("     g=0       g=1      g=2    g=3   g=4");
    for h in 0..=q_max {
        let row: Vec<String> = (0..=4).map(|g| format!("{:>8}", table.get(g, h).to_string())).collect();
        println!("h={h} {}", row.join(""));
    }

    let params = PTParams::new(3, 4, true).unwrap();
    let gv = gv_extract(&pt_main_padded(&params).unwrap(), true).unwrap();
    println!("from the pair series at Y = 3:");
    for (&(g, h), r) in gv.entries() {
        println!("  r_{g},{h} = {r}");
    }
    println!("disagreements on the overlap: {}", gv.compare_on_overlap(&table).len());
}
