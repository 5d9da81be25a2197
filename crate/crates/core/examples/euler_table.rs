//! Euler characteristics of both compactifications, side by side.
//!
//! Run with `cargo run --release --example euler_table -- 7`.

use linecfg::enumerate::total_chi;
use linecfg::trees::Space;

fn main() {
    let max_n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("max n must be an integer"))
        .unwrap_or(6);
    println!("{:>3} {:>12} {:>12}", "n", "chi(P)", "chi(L)");
    for n in 1..=max_n {
        let p = total_chi(Space::P, n).expect("n within the enumeration bound");
        let l = total_chi(Space::L, n).expect("n within the enumeration bound");
        println!("{n:>3} {p:>12} {l:>12}");
    }
}
