//! The one-parameter group law `x ⋆ y = x + y + txy` and its chart `u = 1 + tx`.
use linecfg::group::GroupElement;
use linecfg::laurent::{rat, LaurentSeries};

fn main() {
    for t in [rat(0, 1), rat(1, 1), rat(-1, 3)] {
        let x = GroupElement::new(t.clone(), rat(2, 1)).unwrap();
        let y = GroupElement::new(t.clone(), rat(-1, 3)).unwrap();
        let xy = x.star(&y).unwrap();
        println!(
            "t = {t}: {} ⋆ {} = {}, inverse of x = {}, u(x⋆y) = {} = u(x)u(y) = {}",
            x.x(),
            y.x(),
            xy.x(),
            x.inverse().unwrap().x(),
            xy.to_multiplicative(),
            x.to_multiplicative() * y.to_multiplicative(),
        );
    }
    // over the Laurent field the group acts on moving marks
    let g = GroupElement::new(LaurentSeries::t(), "t^-1 + 1".parse().unwrap()).unwrap();
    let mark: LaurentSeries = "3*t^-2".parse().unwrap();
    println!("{g} moves {mark} to {}", g.act_on_mark(&mark));
}
