//! The permutohedron behind the Losev-Manin space: vertices, faces, lattice points.
use linecfg::enumerate::{fubini_count, permutohedron_stats};

fn main() {
    for n in 2..=5 {
        let s = permutohedron_stats(n).unwrap();
        println!(
            "n = {n}: {} vertices, f-vector {:?} ({} proper faces plus the polytope: Fubini number {}), {} lattice points",
            s.vertices,
            s.f_vector,
            s.f_vector.iter().sum::<usize>(),
            fubini_count(n),
            s.lattice_points
        );
    }
}
