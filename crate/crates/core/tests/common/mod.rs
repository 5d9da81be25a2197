#![allow(dead_code)]

use linecfg::laurent::{LaurentSeries, Rational};
use linecfg::limit::MovingConfiguration;
use linecfg::stab::{insert_mark, seed_curve, Coordinate, Curve, CurveLocation, FdrtPoint};
use linecfg::trees::Vertex;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-6..=6);
    let den: i64 = rng.gen_range(1..=3);
    Rational::new(num.into(), den.into())
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = small_rational(rng);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

pub fn poly(terms: impl IntoIterator<Item = (i64, Rational)>) -> LaurentSeries {
    LaurentSeries::from_terms(terms, None)
}

/// Marks that cluster: shared leading coefficients in the multiplicative
/// chart with random orders, mixed with raw additive Laurent polynomials.
pub fn random_configuration(rng: &mut ChaCha8Rng, n: usize) -> MovingConfiguration {
    let leads = [1i64, 2, -1, 3];
    let mut marks = Vec::with_capacity(n);
    for _ in 0..n {
        let x = if rng.gen_bool(0.75) {
            let e: i64 = rng.gen_range(0..=3);
            let c = Rational::from_integer(leads[rng.gen_range(0..leads.len())].into());
            let mut terms = vec![(e, c)];
            for k in 1..=2 {
                if rng.gen_bool(0.6) {
                    terms.push((e + k, small_rational(rng)));
                }
            }
            let u = poly(terms);
            (u - LaurentSeries::one()).shift(-1)
        } else {
            let lo: i64 = rng.gen_range(-3..=0);
            poly((lo..=1).map(|k| (k, small_rational(rng))))
        };
        marks.push(x);
    }
    match MovingConfiguration::new(marks) {
        Ok(c) => c,
        Err(_) => random_configuration(rng, n),
    }
}

fn vertex_paths(v: &Vertex, prefix: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, bool, usize)>) {
    out.push((prefix.clone(), v.is_leaf(), v.children.len()));
    for (i, c) in v.children.iter().enumerate() {
        prefix.push(i);
        vertex_paths(&c.vertex, prefix, out);
        prefix.pop();
    }
}

pub fn random_location(p: &FdrtPoint, rng: &mut ChaCha8Rng) -> CurveLocation {
    match p.curve() {
        Curve::Tree(g) => {
            let mut paths = Vec::new();
            vertex_paths(&g.root, &mut Vec::new(), &mut paths);
            let (path, leaf, kids) = paths.choose(rng).unwrap().clone();
            match rng.gen_range(0..4) {
                0 => CurveLocation::new(path, Coordinate::Infinity),
                1 if !leaf => CurveLocation::new(path, Coordinate::Node(rng.gen_range(0..kids))),
                2 if !leaf => {
                    let v = g.root.at_path(&path).unwrap();
                    CurveLocation::finite(path, v.children.choose(rng).unwrap().at.clone())
                }
                _ => CurveLocation::finite(path, small_rational(rng)),
            }
        }
        Curve::Chain(c) => {
            let k = rng.gen_range(0..c.components.len());
            match rng.gen_range(0..4) {
                0 => CurveLocation::new(vec![k], Coordinate::Infinity),
                1 => CurveLocation::finite(vec![k], c.components[k].zero.clone()),
                2 if c.components.len() > 1 => {
                    CurveLocation::new(vec![], Coordinate::Node(rng.gen_range(0..c.components.len() - 1)))
                }
                _ => CurveLocation::finite(vec![k], small_rational(rng)),
            }
        }
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, t: Rational, n: usize) -> FdrtPoint {
    let mut p = seed_curve(t);
    while p.n() < n {
        let loc = random_location(&p, rng);
        if let Ok(q) = insert_mark(&p, &loc) {
            p = q;
        }
    }
    p
}

pub fn random_t(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.5) {
        Rational::from_integer(0.into())
    } else {
        nonzero_rational(rng)
    }
}
