//! Building curves by inserting marks, at t = 0 and at t = 1, then forgetting one.
use linecfg::laurent::rat;
use linecfg::stab::{forget_mark, insert_mark, seed_curve, CurveLocation};

fn main() {
    let p = seed_curve(rat(0, 1));
    let p = insert_mark(&p, &CurveLocation::finite(vec![], rat(5, 1))).unwrap();
    let p = insert_mark(&p, &CurveLocation::x_infinity()).unwrap();
    println!("t = 0: {}\n{}", p.canonical_type(), p.to_json_value());
    let q = forget_mark(&p, 1).unwrap();
    println!("forget 1: {}", q.canonical_type());

    let c = seed_curve(rat(1, 1));
    let c = insert_mark(&c, &CurveLocation::finite(vec![], rat(-1, 1))).unwrap();
    let c = insert_mark(&c, &CurveLocation::finite(vec![], rat(3, 1))).unwrap();
    println!("t = 1: {}\n{}", c.canonical_type(), c.to_json_value());
}
