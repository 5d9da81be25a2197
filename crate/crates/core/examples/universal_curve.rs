//! Adding a mark fibers the space over the one with fewer marks; the Euler
//! characteristic computed fiberwise agrees with the direct count.
use linecfg::enumerate::universal_curve_chi_check;
use linecfg::trees::Space;

fn main() {
    for space in [Space::P, Space::L] {
        for n in 1..=6 {
            let (fiberwise, direct) = universal_curve_chi_check(space, n).unwrap();
            println!("{space}: n = {n}  fiberwise {fiberwise}  direct {direct}");
        }
    }
}
