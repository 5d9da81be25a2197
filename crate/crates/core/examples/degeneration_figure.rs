//! Where each stratum of L3 goes as the group law degenerates to addition.
use linecfg::limit::{degenerate_stratum_sample, of_dimension, DEFAULT_DEPTH, DEFAULT_EXPONENT_BOUND, DEFAULT_SEEDS};
use linecfg::trees::StratumType;

fn main() {
    println!("seeds {DEFAULT_SEEDS:?}");
    for source in ["(1,2,3)", "(1,2|3)", "(1|2,3)", "(1|2|3)"] {
        let s: StratumType = source.parse().unwrap();
        let reached = degenerate_stratum_sample(&s, DEFAULT_EXPONENT_BOUND, DEFAULT_DEPTH, &DEFAULT_SEEDS).unwrap();
        let top: Vec<String> = of_dimension(&reached, s.dimension()).iter().map(ToString::to_string).collect();
        println!("{s} -> {}", top.join("  "));
    }
}
