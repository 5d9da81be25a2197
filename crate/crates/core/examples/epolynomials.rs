//! Point counts over F_q, summed over strata.
use linecfg::enumerate::total_epoly;
use linecfg::trees::Space;

fn main() {
    for n in 1..=6 {
        let p = total_epoly(Space::P, n).unwrap();
        let l = total_epoly(Space::L, n).unwrap();
        println!("n = {n}\n  P: {p}\n  L: {l}");
    }
}
