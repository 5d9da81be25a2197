//! Stable limits at `t = 0` of marks moving with the family.
//!
//! The curve over the punctured disc is `ℙ¹` with the vector field
//! `(1 + tx)∂/∂x`, which vanishes at `x_∞ = ∞` and at the sentinel
//! `q = -1/t`. A limit component is seen through a window `(b, s)`, the
//! coordinate `y = (x - b)/t^s`. In that coordinate the field tends to
//! `c∂/∂y` with `c` the `t^s` coefficient of `1 + tb` when
//! `val(1 + tb) = s`, and to zero when `val(1 + tb) > s`.
//!
//! Each mark is seen on the window at its own scale `a_i = val(1 + t x_i)`,
//! where the field is nonzero; those windows are the leaves. The trunks
//! are the branch windows of the ultrametric hierarchy of the leaf centers
//! together with `q`. Every branch window contains `q`, so on a single
//! moving line the trunks always form a chain.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::enumerate::set_partitions;
use crate::laurent::{LaurentError, LaurentSeries, Rational, Valuation};
use crate::trees::{GaTree, Mark, StratumType, Vertex};

/// Number of times the precision budget is doubled before giving up.
pub const MAX_RETRIES: usize = 3;

/// Default randomized suite for the degeneration sampler.
pub const DEFAULT_SEEDS: [u64; 5] = [11, 23, 37, 41, 53];
pub const DEFAULT_EXPONENT_BOUND: i64 = 3;
pub const DEFAULT_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("mark {0} sits on the second fixed point: 1 + t*x is exactly zero")]
    InvalidMark(Mark),
    #[error("no marks given")]
    Empty,
    #[error("precision budget too small: {0}")]
    Precision(LaurentError),
    #[error("not a Losev-Manin type: {0}")]
    NotAnLType(String),
    #[error("bad input: {0}")]
    Parse(String),
}

impl From<LaurentError> for LimitError {
    fn from(e: LaurentError) -> Self {
        LimitError::Precision(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// Marks given as `x_i`.
    #[default]
    Additive,
    /// Marks given as `u_i = 1 + t x_i`.
    Multiplicative,
}

impl FromStr for Chart {
    type Err = LimitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "additive" | "x" => Ok(Chart::Additive),
            "multiplicative" | "u" => Ok(Chart::Multiplicative),
            _ => Err(LimitError::Parse(format!("unknown chart `{s}`"))),
        }
    }
}

/// Marks `x_1..x_n` moving in the additive chart, with a precision budget.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingConfiguration {
    marks: Vec<LaurentSeries>,
    precision: usize,
}

fn u_of(x: &LaurentSeries) -> LaurentSeries {
    LaurentSeries::one() + LaurentSeries::t() * x
}

fn lowest_order(x: &LaurentSeries) -> Option<i64> {
    x.terms().next().map(|(k, _)| k).or(x.trunc())
}

impl MovingConfiguration {
    pub fn new(marks: Vec<LaurentSeries>) -> Result<Self, LimitError> {
        if marks.is_empty() {
            return Err(LimitError::Empty);
        }
        if let Some(i) = marks.iter().position(|x| u_of(x).is_exact_zero()) {
            return Err(LimitError::InvalidMark(i + 1));
        }
        let precision = default_budget(&marks);
        Ok(MovingConfiguration { marks, precision })
    }

    pub fn with_precision(mut self, precision: usize) -> Self {
        self.precision = precision.max(1);
        self
    }

    /// `x_i = (u_i - 1)/t`.
    pub fn from_multiplicative(u: Vec<LaurentSeries>) -> Result<Self, LimitError> {
        if let Some(i) = u.iter().position(LaurentSeries::is_exact_zero) {
            return Err(LimitError::InvalidMark(i + 1));
        }
        let one = LaurentSeries::one();
        MovingConfiguration::new(u.iter().map(|u| (u - &one).shift(-1)).collect())
    }

    pub fn n(&self) -> usize {
        self.marks.len()
    }

    pub fn marks(&self) -> &[LaurentSeries] {
        &self.marks
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Applies `f` to every mark.
    pub fn map_marks(&self, f: impl Fn(usize, &LaurentSeries) -> LaurentSeries) -> Result<Self, LimitError> {
        let marks = self.marks.iter().enumerate().map(|(i, x)| f(i, x)).collect();
        Ok(MovingConfiguration::new(marks)?.with_precision(self.precision))
    }

    /// The marks cut off at `t^(base + budget)`, where `base` is the lowest
    /// order present (and at most `-1`, the order of `q`). Exact marks that
    /// end below the cut are kept exact.
    fn truncated(&self, budget: usize) -> Vec<LaurentSeries> {
        let base = self
            .marks
            .iter()
            .filter_map(lowest_order)
            .min()
            .unwrap_or(0)
            .min(-1);
        let cut = base + budget as i64;
        self.marks
            .iter()
            .map(|x| {
                if x.is_exact() && x.degree().is_none_or(|d| d < cut) {
                    x.clone()
                } else {
                    x.truncated(cut)
                }
            })
            .collect()
    }

    /// Parses `{"marks": [...], "chart": "additive"|"multiplicative", "precision": int}`.
    pub fn from_json(s: &str) -> Result<Self, LimitError> {
        #[derive(Deserialize)]
        struct Input {
            marks: Vec<String>,
            #[serde(default)]
            chart: Chart,
            precision: Option<usize>,
        }
        let raw: Input = serde_json::from_str(s).map_err(|e| LimitError::Parse(e.to_string()))?;
        let marks = raw
            .marks
            .iter()
            .map(|m| m.parse::<LaurentSeries>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| LimitError::Parse(e.to_string()))?;
        let cfg = match raw.chart {
            Chart::Additive => MovingConfiguration::new(marks)?,
            Chart::Multiplicative => MovingConfiguration::from_multiplicative(marks)?,
        };
        Ok(match raw.precision {
            Some(p) => cfg.with_precision(p),
            None => cfg,
        })
    }
}

/// `4 + (max leaf scale - min pairwise-difference valuation)`, using what
/// the given marks determine.
fn default_budget(marks: &[LaurentSeries]) -> usize {
    let scales: Vec<i64> = marks
        .iter()
        .filter_map(|x| u_of(x).valuation().ok().and_then(Valuation::finite))
        .collect();
    let mut diffs: Vec<i64> = Vec::new();
    for (i, a) in marks.iter().enumerate() {
        for b in &marks[i + 1..] {
            if let Ok(Valuation::Finite(v)) = (a - b).valuation() {
                diffs.push(v);
            }
        }
    }
    let hi = scales.iter().max().copied().unwrap_or(0);
    let lo = diffs.iter().min().copied().unwrap_or(-1).min(-1);
    4 + (hi - lo).max(0) as usize
}

/// Whether `val(s) ≥ k`, failing when the known terms cannot tell.
fn val_at_least(s: &LaurentSeries, k: i64) -> Result<bool, LaurentError> {
    if s.terms().next().is_some_and(|(e, _)| e < k) {
        return Ok(false);
    }
    match s.trunc() {
        Some(trunc) if trunc < k => Err(LaurentError::IndeterminateValuation { trunc }),
        _ => Ok(true),
    }
}

/// A frame `(center, scale)` with `alpha = val(1 + t·center)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub center: LaurentSeries,
    pub scale: i64,
    pub alpha: Valuation,
}

impl Window {
    /// The field tends to zero in this frame.
    pub fn is_trunk(&self) -> bool {
        self.alpha > Valuation::Finite(self.scale)
    }

    pub fn is_action_carrying(&self) -> bool {
        self.alpha == Valuation::Finite(self.scale)
    }

    /// Same frame: equal scale and `val(b - b') ≥ s`.
    pub fn equivalent(&self, other: &Window) -> Result<bool, LaurentError> {
        Ok(self.scale == other.scale && val_at_least(&(&self.center - &other.center), self.scale)?)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, t^{}) alpha={}", self.center, self.scale, self.alpha)
    }
}

/// Where each branch window is centered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterChoice {
    /// At `q` when the window holds it, else at its lowest-index leaf.
    #[default]
    Sentinel,
    /// Always at the center of its lowest-index leaf.
    LowestMark,
}

/// Knobs that must not change the answer; exposed for testing that.
#[derive(Debug, Clone, Default)]
pub struct LimitOptions {
    pub center: CenterChoice,
    /// Center each leaf at its highest-index mark instead of its lowest.
    pub leaf_from_highest: bool,
    /// Per-mark `δ_i` (valuation ≥ 0); a leaf represented by mark `i` is
    /// centered at `x_i + δ_i t^a`, an equivalent center.
    pub leaf_offsets: Vec<LaurentSeries>,
}

struct Leaf {
    center: LaurentSeries,
    scale: i64,
    marks: Vec<Mark>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Point {
    Leaf(usize),
    Sentinel,
}

enum Node {
    Leaf(usize),
    Trunk(Vec<(Rational, Node)>),
}

struct Solver<'a> {
    marks: Vec<LaurentSeries>,
    leaves: Vec<Leaf>,
    q: LaurentSeries,
    opts: &'a LimitOptions,
    windows: Vec<Window>,
}

impl Solver<'_> {
    fn center_of(&self, p: Point) -> &LaurentSeries {
        match p {
            Point::Leaf(l) => &self.leaves[l].center,
            Point::Sentinel => &self.q,
        }
    }

    fn distance(&self, a: Point, b: Point) -> Result<i64, LaurentError> {
        match (a, b) {
            // x - q = u/t
            (Point::Leaf(l), Point::Sentinel) | (Point::Sentinel, Point::Leaf(l)) => {
                Ok(self.leaves[l].scale - 1)
            }
            _ => {
                let d = self.center_of(a) - self.center_of(b);
                match d.valuation()? {
                    Valuation::Finite(v) => Ok(v),
                    Valuation::Infinite => unreachable!("distinct leaves have distinct centers"),
                }
            }
        }
    }

    fn window(&mut self, points: Vec<Point>) -> Result<Node, LaurentError> {
        let mut scale = i64::MAX;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                scale = scale.min(self.distance(*a, *b)?);
            }
        }
        let lowest_leaf = points.iter().find_map(|p| match p {
            Point::Leaf(l) => Some(*l),
            Point::Sentinel => None,
        });
        let center_point = match (self.opts.center, points.contains(&Point::Sentinel)) {
            (CenterChoice::Sentinel, true) => Point::Sentinel,
            _ => Point::Leaf(lowest_leaf.expect("a window holds at least one leaf")),
        };
        let center = self.center_of(center_point).clone();
        let alpha = u_of(&center).valuation()?;
        let window = Window { center: center.clone(), scale, alpha };
        debug_assert!(window.is_trunk(), "branch windows always contain q");
        self.windows.push(window);

        // blocks of the partition val(p - p') ≥ scale + 1
        let mut parts: Vec<Vec<Point>> = Vec::new();
        'points: for p in points {
            for part in parts.iter_mut() {
                if self.distance(p, part[0])? > scale {
                    part.push(p);
                    continue 'points;
                }
            }
            parts.push(vec![p]);
        }
        let mut children = Vec::new();
        for part in parts {
            let rep = part[0];
            let at = (self.center_of(rep) - &center).coefficient_at(scale)?;
            let node = match part.as_slice() {
                [Point::Sentinel] => continue,
                [Point::Leaf(l)] => Node::Leaf(*l),
                _ => self.window(part)?,
            };
            children.push((at, node));
        }
        Ok(Node::Trunk(children))
    }

    fn leaf_vertex(&self, l: usize) -> Result<Vertex, LaurentError> {
        let leaf = &self.leaves[l];
        let speed = u_of(&leaf.center).coefficient_at(leaf.scale)?;
        let mut positions = Vec::new();
        for &m in &leaf.marks {
            let p = (&self.marks[m - 1] - &leaf.center).coefficient_at(leaf.scale)?;
            positions.push((m, p / &speed));
        }
        Ok(Vertex::leaf(positions, Rational::one()))
    }

    fn to_vertex(&self, node: Node) -> Result<Vertex, LaurentError> {
        match node {
            Node::Leaf(l) => self.leaf_vertex(l),
            Node::Trunk(children) => {
                let kids = children
                    .into_iter()
                    .map(|(at, c)| Ok((at, self.to_vertex(c)?)))
                    .collect::<Result<Vec<_>, LaurentError>>()?;
                Ok(Vertex::trunk(kids))
            }
        }
    }
}

/// Drops `q`-only branches and contracts trunks left with one child, which
/// then takes the trunk's place.
fn sweep(node: Node) -> Option<Node> {
    match node {
        Node::Leaf(l) => Some(Node::Leaf(l)),
        Node::Trunk(children) => {
            let mut kids: Vec<(Rational, Node)> = children
                .into_iter()
                .filter_map(|(at, c)| sweep(c).map(|c| (at, c)))
                .collect();
            match kids.len() {
                0 => None,
                1 => kids.pop().map(|(_, c)| c),
                _ => Some(Node::Trunk(kids)),
            }
        }
    }
}

fn solve(
    cfg: &MovingConfiguration,
    budget: usize,
    opts: &LimitOptions,
) -> Result<(GaTree, Vec<Window>), LimitError> {
    let marks = cfg.truncated(budget);
    let mut scales = Vec::with_capacity(marks.len());
    for (i, x) in marks.iter().enumerate() {
        let u = u_of(x);
        if u.is_exact_zero() {
            return Err(LimitError::InvalidMark(i + 1));
        }
        scales.push(u.valuation()?.finite().expect("u is not exactly zero"));
    }

    let mut groups: Vec<Vec<Mark>> = Vec::new();
    'marks: for (i, x) in marks.iter().enumerate() {
        for g in groups.iter_mut() {
            let r = g[0] - 1;
            if scales[r] == scales[i] && val_at_least(&(x - &marks[r]), scales[i])? {
                g.push(i + 1);
                continue 'marks;
            }
        }
        groups.push(vec![i + 1]);
    }
    let leaves: Vec<Leaf> = groups
        .into_iter()
        .map(|g| {
            let rep = if opts.leaf_from_highest { *g.last().unwrap() } else { g[0] };
            let scale = scales[rep - 1];
            let mut center = marks[rep - 1].clone();
            if let Some(d) = opts.leaf_offsets.get(rep - 1) {
                center = center + d.shift(scale);
            }
            Leaf { center, scale, marks: g }
        })
        .collect();

    let mut solver = Solver {
        marks,
        q: LaurentSeries::monomial(-Rational::one(), -1),
        opts,
        windows: Vec::new(),
        leaves,
    };
    let mut points: Vec<Point> = (0..solver.leaves.len()).map(Point::Leaf).collect();
    points.push(Point::Sentinel);
    let root = solver.window(points)?;
    let root = sweep(root).expect("at least one leaf survives");
    let tree = GaTree::new(cfg.n(), solver.to_vertex(root)?);
    Ok((tree, solver.windows))
}

fn with_retries<T>(
    cfg: &MovingConfiguration,
    mut f: impl FnMut(usize) -> Result<T, LimitError>,
) -> Result<T, LimitError> {
    let mut budget = cfg.precision;
    let mut attempt = 0;
    loop {
        match f(budget) {
            Err(LimitError::Precision(_)) if attempt < MAX_RETRIES => {
                attempt += 1;
                budget *= 2;
            }
            other => return other,
        }
    }
}

/// The stable limit at `t = 0`, with positions divided by leaf speeds.
pub fn stable_limit(cfg: &MovingConfiguration) -> Result<GaTree, LimitError> {
    stable_limit_with(cfg, &LimitOptions::default())
}

pub fn stable_limit_with(cfg: &MovingConfiguration, opts: &LimitOptions) -> Result<GaTree, LimitError> {
    with_retries(cfg, |budget| solve(cfg, budget, opts).map(|(t, _)| t))
}

/// Branch windows visited, outermost first, before stabilization.
pub fn branch_windows(cfg: &MovingConfiguration) -> Result<Vec<Window>, LimitError> {
    with_retries(cfg, |budget| solve(cfg, budget, &LimitOptions::default()).map(|(_, w)| w))
}

pub fn limit_type(cfg: &MovingConfiguration) -> Result<StratumType, LimitError> {
    Ok(stable_limit(cfg)?.canonical_type())
}

/// `u_i ↦ x_i = (u_i - 1)/t`.
pub fn from_multiplicative(u: Vec<LaurentSeries>) -> Result<MovingConfiguration, LimitError> {
    MovingConfiguration::from_multiplicative(u)
}

/// Limit output as JSON: the tree schema plus `type` and `dimension`.
pub fn limit_json(tree: &GaTree) -> serde_json::Value {
    let ty = tree.canonical_type();
    let mut v = tree.to_json_value();
    v["type"] = serde_json::Value::String(ty.to_string());
    v["dimension"] = ty.dimension().into();
    v
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let k: i64 = rng.gen_range(-20..=20);
        if k != 0 {
            break k;
        }
    };
    let den: i64 = rng.gen_range(1..=7);
    Rational::new(num.into(), den.into())
}

/// Strictly decreasing exponents ending at 0, consecutive gaps in `1..=bound`.
fn exponent_patterns(r: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64]];
    for _ in 1..r {
        out = out
            .into_iter()
            .flat_map(|tail| {
                (1..=bound).map(move |g| {
                    let mut e = vec![tail[0] + g];
                    e.extend(&tail);
                    e
                })
            })
            .collect();
    }
    out
}

/// One way of letting marks of each block share leading coefficients.
type Coincidences = Vec<Vec<Vec<Mark>>>;

fn coincidence_patterns(blocks: &[Vec<Mark>]) -> Vec<Coincidences> {
    let mut out: Vec<Coincidences> = vec![Vec::new()];
    for b in blocks {
        let classes: Vec<Vec<Vec<Mark>>> = set_partitions(b.len())
            .into_iter()
            .map(|p| p.into_iter().map(|c| c.into_iter().map(|i| b[i]).collect()).collect())
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                classes.iter().map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c.clone());
                    next
                })
            })
            .collect();
    }
    out
}

fn sample_u(
    n: usize,
    exponents: &[i64],
    classes: &Coincidences,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<LaurentSeries> {
    let mut u = vec![LaurentSeries::zero(); n];
    for (e, block_classes) in exponents.iter().zip(classes) {
        let mut used: Vec<Rational> = Vec::new();
        for class in block_classes {
            let lead = loop {
                let c = random_nonzero(rng);
                if !used.contains(&c) {
                    break c;
                }
            };
            used.push(lead.clone());
            for &m in class {
                let terms = std::iter::once((0, lead.clone()))
                    .chain((1..=depth).map(|k| (k as i64, random_nonzero(rng))))
                    .collect::<Vec<_>>();
                u[m - 1] = LaurentSeries::from_terms(terms, None).shift(*e);
            }
        }
    }
    u
}

/// Types reached at `t = 0` by curves approaching the stratum `s` of `L̄ₙ`.
///
/// Blocks get exponents `e_1 > … > e_r = 0`; within a block, marks are
/// split in every possible way into classes sharing a leading coefficient,
/// then perturbed to `depth` with random coefficients drawn from each seed.
pub fn degenerate_stratum_sample(
    s: &StratumType,
    exponent_bound: i64,
    depth: usize,
    seeds: &[u64],
) -> Result<BTreeSet<StratumType>, LimitError> {
    let StratumType::L(partition) = s else {
        return Err(LimitError::NotAnLType(s.to_string()));
    };
    if !partition.is_valid() {
        return Err(LimitError::NotAnLType(s.to_string()));
    }
    let n = partition.mark_count();
    let blocks = partition.blocks();
    let mut cells = Vec::new();
    for exps in exponent_patterns(blocks.len(), exponent_bound.max(1)) {
        for classes in coincidence_patterns(blocks) {
            for &seed in seeds {
                cells.push((exps.clone(), classes.clone(), seed));
            }
        }
    }
    let results: Vec<Result<StratumType, LimitError>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, (exps, classes, seed))| {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rng.set_stream(i as u64);
            let u = sample_u(n, exps, classes, depth, &mut rng);
            limit_type(&from_multiplicative(u)?)
        })
        .collect();
    results.into_iter().collect()
}

/// Keeps the types of dimension `d`.
pub fn of_dimension(types: &BTreeSet<StratumType>, d: usize) -> BTreeSet<StratumType> {
    types.iter().filter(|t| t.dimension() == d).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;
    use crate::trees::ComponentKind;

    fn ls(s: &str) -> LaurentSeries {
        s.parse().unwrap()
    }

    fn cfg(marks: &[&str]) -> MovingConfiguration {
        MovingConfiguration::new(marks.iter().map(|m| ls(m)).collect()).unwrap()
    }

    fn ty(s: &str) -> StratumType {
        s.parse().unwrap()
    }

    #[test]
    fn constant_configuration_stays_irreducible() {
        let t = stable_limit(&cfg(&["0", "1"])).unwrap();
        assert_eq!(t, GaTree::irreducible(&[rat(0, 1), rat(1, 1)]));
    }

    #[test]
    fn diverging_mark_bubbles_off() {
        let t = stable_limit(&cfg(&["0", "1", "t^-1"])).unwrap();
        assert_eq!(t.canonical_type(), ty("⟨∞: {1,2},{3}⟩"));
        let leaf = t.root.children.iter().find(|c| c.vertex.marks.len() == 2).unwrap();
        let positions: Vec<Rational> = leaf.vertex.marks.values().cloned().collect();
        assert_eq!(positions, vec![rat(0, 1), rat(1, 1)]);
        assert!(t.is_stable().unwrap());
    }

    #[test]
    fn marks_at_the_sentinel_separate() {
        let t = stable_limit(&cfg(&["-t^-1 + 1", "-t^-1 + 2", "-t^-1 + 3"])).unwrap();
        assert_eq!(t.canonical_type(), ty("⟨∞: {1},{2},{3}⟩"));
        assert_eq!(t.root.kind, ComponentKind::Trunk);
        let ats: Vec<Rational> = t.root.children.iter().map(|c| c.at.clone()).collect();
        assert_eq!(ats, vec![rat(1, 1), rat(2, 1), rat(3, 1)]);
    }

    #[test]
    fn mark_on_the_second_fixed_point_is_rejected() {
        assert_eq!(
            MovingConfiguration::new(vec![ls("-t^-1")]),
            Err(LimitError::InvalidMark(1))
        );
        assert!(from_multiplicative(vec![ls("1"), LaurentSeries::zero()]).is_err());
    }

    #[test]
    fn limit_type_examples() {
        assert_eq!(limit_type(&cfg(&["0", "1"])).unwrap(), ty("⟨{1,2}⟩"));
        assert_eq!(limit_type(&cfg(&["0", "1", "t^-1"])).unwrap(), ty("⟨∞: {1,2},{3}⟩"));
        let m = from_multiplicative(vec![ls("t + t^2"), ls("t"), ls("1")]).unwrap();
        let t = stable_limit(&m).unwrap();
        assert_eq!(t.canonical_type(), ty("⟨∞: {1,2},{3}⟩"));
        let leaf = t.root.children.iter().find(|c| c.vertex.marks.len() == 2).unwrap();
        let p: Vec<Rational> = leaf.vertex.marks.values().cloned().collect();
        assert_ne!(p[0], p[1]);
    }

    #[test]
    fn multiplicative_chart_examples() {
        let m = from_multiplicative(vec![ls("1"), ls("2")]).unwrap();
        assert_eq!(m.marks(), &[ls("0"), ls("t^-1")]);
        let m = from_multiplicative(vec![ls("5/2*t")]).unwrap();
        assert_eq!(m.marks(), &[ls("-t^-1 + 5/2")]);
        let m = from_multiplicative(vec![ls("1 + t")]).unwrap();
        assert_eq!(m.marks(), &[ls("1")]);
    }

    #[test]
    fn identical_marks_share_a_leaf() {
        let t = stable_limit(&cfg(&["t^-2 + 3*t^5", "t^-2 + 3*t^5", "0"])).unwrap();
        assert_eq!(t.canonical_type(), ty("⟨∞: {1,2},{3}⟩"));
    }

    #[test]
    fn coarse_input_precision_is_reported() {
        let m = cfg(&["1 + O(t^0)", "1"]);
        assert!(matches!(stable_limit(&m), Err(LimitError::Precision(_))));
    }

    #[test]
    fn retries_recover_from_a_small_budget() {
        let m = cfg(&["t^6", "2*t^6", "0"]).with_precision(1);
        let t = stable_limit(&m).unwrap();
        assert_eq!(t.canonical_type(), ty("⟨{1,2,3}⟩"));
    }

    #[test]
    fn windows_are_trunks_and_contain_the_sentinel() {
        let m = from_multiplicative(vec![ls("t^3"), ls("t"), ls("1"), ls("2")]).unwrap();
        let ws = branch_windows(&m).unwrap();
        assert!(ws.len() >= 2);
        let q = LaurentSeries::monomial(-Rational::one(), -1);
        for w in &ws {
            assert!(w.is_trunk(), "{w}");
            assert!(!w.is_action_carrying());
            assert_eq!(w.center, q);
        }
        let a = Window { center: ls("1 + t"), scale: 1, alpha: Valuation::Finite(0) };
        let b = Window { center: ls("1 + 2*t"), scale: 1, alpha: Valuation::Finite(0) };
        let c = Window { center: ls("1 + 2*t"), scale: 2, alpha: Valuation::Finite(0) };
        assert!(a.equivalent(&b).unwrap());
        assert!(!a.equivalent(&Window { center: ls("2 + t"), ..a.clone() }).unwrap());
        assert!(!b.equivalent(&c).unwrap());
        assert!(!c.equivalent(&Window { center: ls("1 + t"), ..c.clone() }).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let m = MovingConfiguration::from_json(
            r#"{"marks": ["t", "1", "2"], "chart": "multiplicative", "precision": 12}"#,
        )
        .unwrap();
        assert_eq!(m.precision(), 12);
        let v = limit_json(&stable_limit(&m).unwrap());
        assert_eq!(v["type"], "⟨∞: {1},{2},{3}⟩");
        assert_eq!(v["dimension"], 1);
        assert!(GaTree::from_json_value(v).is_ok());
        assert!(MovingConfiguration::from_json(r#"{"marks": ["t^"]}"#).is_err());
    }

    #[test]
    fn degeneration_arrows() {
        let sample = |s: &str| {
            let t = ty(s);
            let d = t.dimension();
            of_dimension(
                &degenerate_stratum_sample(&t, DEFAULT_EXPONENT_BOUND, DEFAULT_DEPTH, &DEFAULT_SEEDS)
                    .unwrap(),
                d,
            )
        };
        assert_eq!(sample("(1,2,3)"), BTreeSet::from([ty("⟨{1,2,3}⟩")]));
        assert_eq!(sample("(1,2 | 3)"), BTreeSet::from([ty("⟨∞: {1,2},{3}⟩")]));
        assert_eq!(
            sample("(1 | 2,3)"),
            BTreeSet::from([ty("⟨∞: {1},{2,3}⟩"), ty("⟨∞: {1},{2},{3}⟩")])
        );
        assert_eq!(sample("(1 | 2 | 3)"), BTreeSet::from([ty("⟨∞: ({1},{2}),{3}⟩")]));
    }

    #[test]
    fn sampler_rejects_p_types() {
        assert!(degenerate_stratum_sample(&ty("⟨{1}⟩"), 1, 1, &[1]).is_err());
    }

    #[test]
    fn exponent_patterns_shape() {
        assert_eq!(exponent_patterns(1, 3), vec![vec![0]]);
        assert_eq!(exponent_patterns(2, 2), vec![vec![1, 0], vec![2, 0]]);
        assert_eq!(exponent_patterns(3, 3).len(), 9);
    }
}
