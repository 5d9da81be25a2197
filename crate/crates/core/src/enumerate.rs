//! Catalogs of strata of `P̄ₙ` and `L̄ₙ`, aggregate invariants, and the
//! independent cross-checks on them.
//!
//! `P̄ₙ` types are produced by recursive assembly: a type on a mark set is
//! either a single leaf, or a trunk over a partition of the marks into at
//! least two blocks with a type on each block. The per-size shape lists are
//! built once on `1..=k` and relabeled order-preservingly, which keeps the
//! children sorted by their smallest mark.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_integer::Integer;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::trees::{EPolynomial, Mark, OrderedPartition, Shape, Space, StratumType};

/// Largest `n` accepted by the enumeration entry points.
pub const DEFAULT_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("n = {n} is outside the supported range 1..={bound}")]
    BoundExceeded { n: usize, bound: usize },
}

fn check_bound(n: usize, bound: usize) -> Result<(), EnumerateError> {
    if n == 0 || n > bound {
        return Err(EnumerateError::BoundExceeded { n, bound });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub ty: StratumType,
    pub dimension: usize,
    pub chi: i64,
    pub epoly: EPolynomial,
    pub components: usize,
}

impl CatalogEntry {
    pub fn new(ty: StratumType) -> Self {
        CatalogEntry {
            dimension: ty.dimension(),
            chi: ty.chi(),
            epoly: ty.epoly(),
            components: ty.component_count(),
            ty,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "type": self.ty.to_string(),
            "dimension": self.dimension,
            "chi": self.chi,
            "epoly": self.epoly.coeffs(),
            "components": self.components,
        })
    }
}

/// All strata of one space for one `n`, in canonical type order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataCatalog {
    pub space: Space,
    pub n: usize,
    pub entries: Vec<CatalogEntry>,
}

impl StrataCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_chi(&self) -> i64 {
        self.entries.iter().map(|e| e.chi).sum()
    }

    pub fn total_epoly(&self) -> EPolynomial {
        self.entries.iter().map(|e| e.epoly.clone()).sum()
    }

    pub fn contains(&self, ty: &StratumType) -> bool {
        self.entries.binary_search_by(|e| e.ty.cmp(ty)).is_ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "space": self.space.to_string(),
            "n": self.n,
            "total_chi": self.total_chi(),
            "total_epoly": self.total_epoly().coeffs(),
            "strata": self.entries.iter().map(CatalogEntry::to_json).collect::<Vec<_>>(),
        })
    }

    /// One row per stratum: `type,dimension,chi,epoly,components`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("type,dimension,chi,epoly,components\n");
        for e in &self.entries {
            out.push_str(&format!(
                "\"{}\",{},{},\"{}\",{}\n",
                e.ty, e.dimension, e.chi, e.epoly, e.components
            ));
        }
        out
    }
}

/// Set partitions of `0..n` as restricted growth strings; blocks come out
/// ordered by their smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    if n > 0 {
        go(0, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Ordered set partitions of `1..=n`, each block sorted.
pub fn ordered_partitions(n: usize) -> Vec<OrderedPartition> {
    set_partitions(n)
        .into_iter()
        .flat_map(|p| {
            let r = p.len();
            p.into_iter()
                .map(|b| b.into_iter().map(|i| i + 1).collect::<Vec<Mark>>())
                .permutations(r)
                .map(OrderedPartition::new)
                .collect::<Vec<_>>()
        })
        .collect()
}

fn relabel(shape: &Shape, labels: &[Mark]) -> Shape {
    match shape {
        Shape::Leaf(m) => Shape::Leaf(m.iter().map(|k| labels[k - 1]).collect()),
        Shape::Trunk(cs) => Shape::Trunk(cs.iter().map(|c| relabel(c, labels)).collect()),
    }
}

/// Shapes on `1..=k` for every `k < n`, indexed by `k`.
fn shape_tables(n: usize) -> Vec<Vec<Shape>> {
    let mut tables: Vec<Vec<Shape>> = vec![Vec::new()];
    for k in 1..n {
        let shapes = top_level_shapes(k, &tables, |s| s);
        tables.push(shapes);
    }
    tables
}

/// Trunk shapes on `1..=k` over one partition of the marks.
fn trunks_over<F, T>(partition: &[Vec<usize>], tables: &[Vec<Shape>], f: &F) -> Vec<T>
where
    F: Fn(Shape) -> T,
{
    let labels: Vec<Vec<Mark>> = partition
        .iter()
        .map(|b| b.iter().map(|i| i + 1).collect())
        .collect();
    partition
        .iter()
        .map(|b| tables[b.len()].iter())
        .multi_cartesian_product()
        .map(|children| {
            let cs = children
                .into_iter()
                .zip(&labels)
                .map(|(c, l)| relabel(c, l))
                .collect();
            f(Shape::Trunk(cs))
        })
        .collect()
}

fn top_level_shapes<F, T>(k: usize, tables: &[Vec<Shape>], f: F) -> Vec<T>
where
    F: Fn(Shape) -> T,
{
    let mut out = vec![f(Shape::Leaf((1..=k).collect()))];
    for p in set_partitions(k).into_iter().filter(|p| p.len() >= 2) {
        out.extend(trunks_over(&p, tables, &f));
    }
    out
}

/// Visits every `P̄ₙ` type, mapping each through `f` and summing, with the
/// top-level partitions spread across the rayon pool.
fn fold_p_types<T, F>(n: usize, f: F) -> T
where
    T: Send + std::iter::Sum<T>,
    F: Fn(&Shape) -> T + Sync,
{
    let tables = shape_tables(n);
    let irreducible = f(&Shape::Leaf((1..=n).collect()));
    let parts: Vec<_> = set_partitions(n).into_iter().filter(|p| p.len() >= 2).collect();
    let rest: T = parts
        .par_iter()
        .map(|p| trunks_over(p, &tables, &|s| f(&s)).into_iter().sum::<T>())
        .sum();
    [irreducible, rest].into_iter().sum()
}

fn p_types(n: usize) -> Vec<StratumType> {
    let tables = shape_tables(n);
    let parts: Vec<_> = set_partitions(n).into_iter().filter(|p| p.len() >= 2).collect();
    let mut out: Vec<StratumType> = parts
        .par_iter()
        .flat_map_iter(|p| trunks_over(p, &tables, &StratumType::P))
        .collect();
    out.push(StratumType::P(Shape::Leaf((1..=n).collect())));
    out
}

pub fn enumerate_types(space: Space, n: usize) -> Result<StrataCatalog, EnumerateError> {
    enumerate_types_bounded(space, n, DEFAULT_BOUND)
}

pub fn enumerate_types_bounded(
    space: Space,
    n: usize,
    bound: usize,
) -> Result<StrataCatalog, EnumerateError> {
    check_bound(n, bound)?;
    let types = match space {
        Space::P => p_types(n),
        Space::L => ordered_partitions(n).into_iter().map(StratumType::L).collect(),
    };
    let mut entries: Vec<CatalogEntry> = types.into_par_iter().map(CatalogEntry::new).collect();
    entries.par_sort_unstable_by(|a, b| a.ty.cmp(&b.ty));
    entries.dedup_by(|a, b| a.ty == b.ty);
    Ok(StrataCatalog { space, n, entries })
}

/// Sum of `f` over all types, without materializing the catalog on the
/// additive side.
fn fold_types<T, F>(space: Space, n: usize, f: F) -> Result<T, EnumerateError>
where
    T: Send + std::iter::Sum<T>,
    F: Fn(&StratumType) -> T + Sync,
{
    check_bound(n, DEFAULT_BOUND)?;
    Ok(match space {
        Space::P => fold_p_types(n, |s| f(&StratumType::P(s.clone()))),
        Space::L => ordered_partitions(n)
            .into_par_iter()
            .map(|p| f(&StratumType::L(p)))
            .sum(),
    })
}

pub fn total_chi(space: Space, n: usize) -> Result<i64, EnumerateError> {
    fold_types(space, n, |t| t.chi())
}

pub fn total_epoly(space: Space, n: usize) -> Result<EPolynomial, EnumerateError> {
    fold_types(space, n, |t| t.epoly())
}

/// `(Σ_S χ(S)·(components(S) + 1), χ(space, n + 1))`; equal when the
/// space over `n + 1` marks is the universal curve over the one over `n`.
pub fn universal_curve_chi_check(space: Space, n: usize) -> Result<(i64, i64), EnumerateError> {
    check_bound(n + 1, DEFAULT_BOUND)?;
    let weighted = fold_types(space, n, |t| t.chi() * (t.component_count() as i64 + 1))?;
    Ok((weighted, total_chi(space, n + 1)?))
}

/// Number of ordered set partitions of an `n`-set.
pub fn fubini_count(n: usize) -> u128 {
    let mut a: Vec<u128> = vec![1];
    for m in 1..=n {
        let mut binom: u128 = 1;
        let mut acc: u128 = 0;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u128 / k as u128;
            acc += binom * a[m - k];
        }
        a.push(acc);
    }
    a[n]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutohedronStats {
    pub vertices: usize,
    /// Numbers of proper faces by dimension `0..=n-2`.
    pub f_vector: Vec<usize>,
    pub lattice_points: usize,
}

/// Rank of an integer matrix by elimination, keeping rows primitive.
fn integer_rank(mut rows: Vec<Vec<i64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = pivot[c] * *x - f * y;
            }
            let g = row.iter().fold(0i64, |g, x| g.gcd(x));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

/// Face numbers and lattice point count of the hull of the permutations of
/// `(1, …, n)`, by brute force.
pub fn permutohedron_stats(n: usize) -> Result<PermutohedronStats, EnumerateError> {
    if !(2..=6).contains(&n) {
        return Err(EnumerateError::BoundExceeded { n, bound: 6 });
    }
    let verts: Vec<Vec<i64>> = (1..=n as i64).permutations(n).collect();

    // every face is the maximizer set of a functional with weights in 0..n
    let faces: BTreeSet<Vec<usize>> = (0..n)
        .map(|_| 0..n as i64)
        .multi_cartesian_product()
        .filter(|w| w.iter().any(|x| *x != w[0]))
        .map(|w| {
            let vals: Vec<i64> = verts
                .iter()
                .map(|v| v.iter().zip(&w).map(|(a, b)| a * b).sum())
                .collect();
            let best = *vals.iter().max().unwrap();
            (0..verts.len()).filter(|&i| vals[i] == best).collect()
        })
        .collect();
    let mut f_vector = vec![0usize; n - 1];
    for face in &faces {
        let base = &verts[face[0]];
        let diffs: Vec<Vec<i64>> = face[1..]
            .iter()
            .map(|&i| verts[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        f_vector[integer_rank(diffs)] += 1;
    }

    let target = (n * (n + 1) / 2) as i64;
    let subsets: Vec<Vec<usize>> = (1..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    let lattice_points = (0..n)
        .map(|_| 1..=n as i64)
        .multi_cartesian_product()
        .filter(|x| x.iter().sum::<i64>() == target)
        .filter(|x| {
            subsets.iter().all(|s| {
                let k = s.len() as i64;
                s.iter().map(|&i| x[i]).sum::<i64>() >= k * (k + 1) / 2
            })
        })
        .count();

    Ok(PermutohedronStats {
        vertices: verts.len(),
        f_vector,
        lattice_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalogs() {
        assert_eq!(enumerate_types(Space::P, 1).unwrap().len(), 1);
        let p3 = enumerate_types(Space::P, 3).unwrap();
        assert_eq!(p3.len(), 8);
        for s in [
            "⟨{1,2,3}⟩",
            "⟨∞: {1,2},{3}⟩",
            "⟨∞: {1,3},{2}⟩",
            "⟨∞: {1},{2,3}⟩",
            "⟨∞: {1},{2},{3}⟩",
            "⟨∞: ({1},{2}),{3}⟩",
            "⟨∞: ({1},{3}),{2}⟩",
            "⟨∞: {1},({2},{3})⟩",
        ] {
            assert!(p3.contains(&s.parse().unwrap()), "{s}");
        }
        assert_eq!(enumerate_types(Space::L, 3).unwrap().len(), 13);
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            enumerate_types(Space::P, 9),
            Err(EnumerateError::BoundExceeded { n: 9, bound: 8 })
        ));
        assert!(enumerate_types(Space::L, 0).is_err());
        assert!(universal_curve_chi_check(Space::P, 8).is_err());
        assert!(permutohedron_stats(7).is_err());
        assert!(permutohedron_stats(1).is_err());
    }

    #[test]
    fn small_totals() {
        assert_eq!(total_chi(Space::P, 4).unwrap(), 27);
        assert_eq!(total_chi(Space::L, 5).unwrap(), 120);
        assert_eq!(total_epoly(Space::P, 3).unwrap(), EPolynomial::new(vec![1, 4, 1]));
        assert_eq!(total_epoly(Space::L, 3).unwrap(), EPolynomial::new(vec![1, 4, 1]));
        assert_eq!(total_epoly(Space::L, 2).unwrap(), EPolynomial::new(vec![1, 1]));
    }

    #[test]
    fn universal_curve_examples() {
        assert_eq!(universal_curve_chi_check(Space::P, 2).unwrap(), (6, 6));
        assert_eq!(universal_curve_chi_check(Space::P, 3).unwrap(), (27, 27));
        assert_eq!(universal_curve_chi_check(Space::L, 3).unwrap(), (24, 24));
    }

    #[test]
    fn fubini_examples() {
        assert_eq!(fubini_count(1), 1);
        assert_eq!(fubini_count(2), 3);
        assert_eq!(fubini_count(4), 75);
        assert_eq!(fubini_count(0), 1);
    }

    #[test]
    fn hexagon() {
        let s = permutohedron_stats(3).unwrap();
        assert_eq!(s.vertices, 6);
        assert_eq!(s.f_vector, vec![6, 6]);
        assert_eq!(s.lattice_points, 7);
    }

    #[test]
    fn catalog_totals_match_streaming_totals() {
        for n in 1..=5 {
            for space in [Space::P, Space::L] {
                let c = enumerate_types(space, n).unwrap();
                assert_eq!(c.total_chi(), total_chi(space, n).unwrap());
                assert_eq!(c.total_epoly(), total_epoly(space, n).unwrap());
            }
        }
    }

    #[test]
    fn exports() {
        let c = enumerate_types(Space::L, 2).unwrap();
        let v = c.to_json();
        assert_eq!(v["total_chi"], 2);
        assert_eq!(v["strata"].as_array().unwrap().len(), 3);
        assert_eq!(c.to_csv().lines().count(), 4);
    }

    #[test]
    fn integer_rank_examples() {
        assert_eq!(integer_rank(vec![vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(vec![vec![1, 0, -1], vec![0, 1, -1], vec![1, 1, -2]]), 2);
        assert_eq!(integer_rank(Vec::new()), 0);
    }
}
