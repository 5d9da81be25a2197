//! Exact Laurent series: parsing, products, quotients and truncation.
use linecfg::laurent::LaurentSeries;

fn main() {
    let a: LaurentSeries = "t^-1 + 2 + 1/3*t".parse().unwrap();
    let b: LaurentSeries = "1 - t + O(t^3)".parse().unwrap();
    println!("a       = {a}");
    println!("b       = {b}");
    println!("a + b   = {}", &a + &b);
    println!("a * b   = {}", &a * &b);
    println!("1 / b   = {}", b.invert(4).unwrap());
    println!("a / b   = {}", a.div(&b, 4).unwrap());
    println!("val(a)  = {:?}", a.valuation().unwrap());
    println!("a mod t^1 = {}", a.truncated(1));
}
