//! Lists every stratum type of both spaces for a given n (default 3).
use linecfg::enumerate::enumerate_types;
use linecfg::trees::Space;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for space in [Space::P, Space::L] {
        let catalog = enumerate_types(space, n).unwrap();
        println!("{space}{n}: {} strata", catalog.len());
        for e in &catalog.entries {
            println!("  {:<32} dim {}  chi {:>3}  E = {}", e.ty.to_string(), e.dimension, e.chi, e.epoly);
        }
    }
}
