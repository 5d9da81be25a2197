//! Stable limit at t = 0 of marks moving with t.
use linecfg::limit::{branch_windows, limit_json, stable_limit, MovingConfiguration};

fn main() {
    let marks = ["t^-2", "t^-2 + t^-1", "3*t^-1", "0", "1/2"];
    let cfg = MovingConfiguration::new(marks.iter().map(|m| m.parse().unwrap()).collect()).unwrap();
    for w in branch_windows(&cfg).unwrap() {
        println!("window centered at {} with scale {}", w.center, w.scale);
    }
    let tree = stable_limit(&cfg).unwrap();
    println!("{}", serde_json::to_string_pretty(&limit_json(&tree)).unwrap());
    print!("{}", tree.to_dot());
}
