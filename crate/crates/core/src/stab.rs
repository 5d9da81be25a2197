//! Adding and removing marks on a single fiber of the degeneration.
//!
//! At `t = 0` a point is a [`GaTree`]. At `t ≠ 0` it is a chain of lines,
//! stored from the `0`-side to the `x_∞`-side; each line has a coordinate
//! in which the field is `t(x - zero)∂/∂x`, so its two special points sit
//! at `zero` and `∞`. The seed line has `zero = -1/t`, which is the chart
//! where the field reads `(1 + tx)∂/∂x`; bubbles have `zero = 0`.
//!
//! Inserting a mark at `x_∞`, at a node, or at a zero of the field grows
//! a new component for it. New components put their node toward the old
//! curve at `0` (trees: the old branch at `0` of a new trunk, the new leaf
//! at `1`) and the new mark at `1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::laurent::Rational;
use crate::trees::{
    ComponentKind, GaTree, Mark, OrderedPartition, StratumType, TreeError, Vertex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabError {
    #[error("invalid location: {0}")]
    InvalidLocation(String),
    #[error("cannot forget the last mark")]
    LastMark,
    #[error("no mark {0}")]
    NoSuchMark(Mark),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("cannot parse: {0}")]
    Parse(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, StabError> {
    Err(StabError::InvalidLocation(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainComponent {
    /// Coordinate of the `0`-side special point.
    pub zero: Rational,
    pub marks: BTreeMap<Mark, Rational>,
}

/// A Losev-Manin chain, `0`-side first; the last component hosts `x_∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub n: usize,
    pub components: Vec<ChainComponent>,
}

impl Chain {
    pub fn canonical_type(&self) -> StratumType {
        StratumType::L(OrderedPartition::new(
            self.components
                .iter()
                .map(|c| c.marks.keys().copied().collect())
                .collect(),
        ))
    }

    /// Every component marked, no mark on a zero of the field.
    pub fn is_stable(&self) -> bool {
        !self.components.is_empty()
            && self
                .components
                .iter()
                .all(|c| !c.marks.is_empty() && c.marks.values().all(|p| *p != c.zero))
    }

    /// Each component moved so that `zero ↦ 0` and its lowest mark `↦ 1`.
    pub fn canonical_point_form(&self) -> Chain {
        Chain {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|c| {
                    let unit = c
                        .marks
                        .values()
                        .next()
                        .map(|p| p - &c.zero)
                        .unwrap_or_else(Rational::one);
                    ChainComponent {
                        zero: Rational::zero(),
                        marks: c.marks.iter().map(|(m, p)| (*m, (p - &c.zero) / &unit)).collect(),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Curve {
    Tree(GaTree),
    Chain(Chain),
}

/// A marked curve in the fiber over `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FdrtPoint {
    t: Rational,
    curve: Curve,
}

/// A point given by the component it lies on and a coordinate there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coordinate {
    Finite(Rational),
    /// `x_∞` on the root (or last chain component), else the node toward it.
    Infinity,
    /// On a trunk, the node to the given child; on a chain, the node
    /// joining components `k` and `k + 1`.
    Node(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveLocation {
    /// Child indices from the root; on a chain, one component index, or
    /// none for the component hosting `x_∞`.
    pub vertex: Vec<usize>,
    pub at: Coordinate,
}

impl CurveLocation {
    pub fn new(vertex: Vec<usize>, at: Coordinate) -> Self {
        CurveLocation { vertex, at }
    }

    pub fn x_infinity() -> Self {
        CurveLocation::new(Vec::new(), Coordinate::Infinity)
    }

    pub fn finite(vertex: Vec<usize>, at: Rational) -> Self {
        CurveLocation::new(vertex, Coordinate::Finite(at))
    }
}

pub fn seed_curve(t: Rational) -> FdrtPoint {
    let one = Rational::one();
    let curve = if t.is_zero() {
        Curve::Tree(GaTree::irreducible(&[one]))
    } else {
        // at t = -1 the section x = 1 meets the second fixed point
        let zero = if (&one + &t).is_zero() {
            Rational::zero()
        } else {
            -t.recip()
        };
        Curve::Chain(Chain {
            n: 1,
            components: vec![ChainComponent {
                zero,
                marks: BTreeMap::from([(1, one)]),
            }],
        })
    };
    FdrtPoint { t, curve }
}

impl FdrtPoint {
    pub fn from_tree(tree: GaTree) -> Self {
        FdrtPoint { t: Rational::zero(), curve: Curve::Tree(tree) }
    }

    pub fn from_chain(t: Rational, chain: Chain) -> Result<Self, StabError> {
        if t.is_zero() {
            return Err(StabError::Parse("a chain needs t ≠ 0".into()));
        }
        Ok(FdrtPoint { t, curve: Curve::Chain(chain) })
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn n(&self) -> usize {
        match &self.curve {
            Curve::Tree(g) => g.n,
            Curve::Chain(c) => c.n,
        }
    }

    pub fn is_stable(&self) -> bool {
        match &self.curve {
            Curve::Tree(g) => g.is_stable().unwrap_or(false),
            Curve::Chain(c) => c.is_stable(),
        }
    }

    pub fn canonical_type(&self) -> StratumType {
        match &self.curve {
            Curve::Tree(g) => g.canonical_type(),
            Curve::Chain(c) => c.canonical_type(),
        }
    }

    pub fn canonical_point_form(&self) -> FdrtPoint {
        let curve = match &self.curve {
            Curve::Tree(g) => Curve::Tree(g.canonical_point_form()),
            Curve::Chain(c) => Curve::Chain(c.canonical_point_form()),
        };
        FdrtPoint { t: self.t.clone(), curve }
    }

    pub fn as_tree(&self) -> Option<&GaTree> {
        match &self.curve {
            Curve::Tree(g) => Some(g),
            Curve::Chain(_) => None,
        }
    }

    pub fn as_chain(&self) -> Option<&Chain> {
        match &self.curve {
            Curve::Chain(c) => Some(c),
            Curve::Tree(_) => None,
        }
    }
}

pub fn coresidue(p: &FdrtPoint) -> Rational {
    p.t.clone()
}

fn new_leaf(mark: Mark) -> Vertex {
    Vertex::leaf([(mark, Rational::one())], Rational::one())
}

/// A trunk holding `old` at 0 and a leaf with `mark` at 1.
fn bubble_over(old: Vertex, mark: Mark) -> Vertex {
    Vertex::trunk([(Rational::zero(), old), (Rational::one(), new_leaf(mark))])
}

fn insert_in_tree(tree: &GaTree, loc: &CurveLocation) -> Result<GaTree, StabError> {
    let mark = tree.n + 1;
    let mut root = tree.root.clone();
    if tree.root.at_path(&loc.vertex).is_none() {
        return invalid(format!("no component at {:?}", loc.vertex));
    }
    // the node toward the parent is the parent's node to this child
    let (path, at) = match (&loc.at, loc.vertex.split_last()) {
        (Coordinate::Infinity, Some((last, parent))) => (parent.to_vec(), Coordinate::Node(*last)),
        _ => (loc.vertex.clone(), loc.at.clone()),
    };
    let v = root.at_path_mut(&path).expect("path checked");
    let at = match (v.kind, at) {
        (ComponentKind::Trunk, Coordinate::Finite(r)) => {
            match v.children.iter().position(|c| c.at == r) {
                Some(k) => Coordinate::Node(k),
                None => Coordinate::Finite(r),
            }
        }
        (_, at) => at,
    };
    match (v.kind, at) {
        (_, Coordinate::Infinity) => {
            let old = std::mem::replace(v, Vertex::trunk([]));
            *v = bubble_over(old, mark);
        }
        (ComponentKind::Leaf, Coordinate::Finite(r)) => {
            v.marks.insert(mark, r);
        }
        (ComponentKind::Trunk, Coordinate::Finite(r)) => {
            v.children.push(crate::trees::Child { at: r, vertex: new_leaf(mark) });
        }
        (ComponentKind::Trunk, Coordinate::Node(k)) => {
            let Some(child) = v.children.get_mut(k) else {
                return invalid(format!("trunk has no child {k}"));
            };
            let old = std::mem::replace(&mut child.vertex, Vertex::trunk([]));
            child.vertex = bubble_over(old, mark);
        }
        (ComponentKind::Leaf, Coordinate::Node(_)) => {
            return invalid("a leaf has no child nodes");
        }
    }
    Ok(GaTree::new(mark, root))
}

fn insert_in_chain(chain: &Chain, loc: &CurveLocation) -> Result<Chain, StabError> {
    let mark = chain.n + 1;
    let len = chain.components.len();
    let mut out = chain.clone();
    out.n = mark;
    let bubble = ChainComponent {
        zero: Rational::zero(),
        marks: BTreeMap::from([(mark, Rational::one())]),
    };
    let index = match &loc.at {
        Coordinate::Node(k) if k + 1 < len => k + 1,
        Coordinate::Node(k) => return invalid(format!("chain has no node {k}")),
        at => {
            // like the root of a tree, the empty path is the component with x_∞
            let c = match loc.vertex[..] {
                [] => len - 1,
                [c] => c,
                _ => return invalid("a chain location names one component"),
            };
            let Some(comp) = out.components.get_mut(c) else {
                return invalid(format!("chain has no component {c}"));
            };
            match at {
                Coordinate::Finite(r) if *r != comp.zero => {
                    comp.marks.insert(mark, r.clone());
                    return Ok(out);
                }
                // the zero of the field: the 0-end or the node below
                Coordinate::Finite(_) => c,
                _ => c + 1,
            }
        }
    };
    out.components.insert(index, bubble);
    Ok(out)
}

/// The curve with mark `n + 1` added at `loc`.
pub fn insert_mark(p: &FdrtPoint, loc: &CurveLocation) -> Result<FdrtPoint, StabError> {
    let curve = match &p.curve {
        Curve::Tree(g) => Curve::Tree(insert_in_tree(g, loc)?),
        Curve::Chain(c) => Curve::Chain(insert_in_chain(c, loc)?),
    };
    Ok(FdrtPoint { t: p.t.clone(), curve })
}

/// Contracts trunks left with fewer than two children; `None` if nothing
/// marked remains below.
fn contract(v: Vertex) -> Option<Vertex> {
    match v.kind {
        ComponentKind::Leaf => (!v.marks.is_empty()).then_some(v),
        ComponentKind::Trunk => {
            let mut kids: Vec<(Rational, Vertex)> = v
                .children
                .into_iter()
                .filter_map(|c| contract(c.vertex).map(|x| (c.at, x)))
                .collect();
            match kids.len() {
                0 => None,
                1 => kids.pop().map(|(_, x)| x),
                _ => Some(Vertex::trunk(kids)),
            }
        }
    }
}

fn renumber(i: Mark) -> impl Fn(Mark) -> Mark {
    move |m| if m > i { m - 1 } else { m }
}

/// The curve with mark `i` removed, marks above `i` shifted down, and
/// every component that became unstable contracted.
pub fn forget_mark(p: &FdrtPoint, i: Mark) -> Result<FdrtPoint, StabError> {
    let n = p.n();
    if n <= 1 {
        return Err(StabError::LastMark);
    }
    if i == 0 || i > n {
        return Err(StabError::NoSuchMark(i));
    }
    let curve = match &p.curve {
        Curve::Tree(g) => {
            let mut root = g.root.clone();
            remove_mark(&mut root, i);
            let root = contract(root).expect("other marks remain");
            Curve::Tree(GaTree::new(n - 1, root).relabeled(&renumber(i)))
        }
        Curve::Chain(c) => {
            let map = renumber(i);
            let components = c
                .components
                .iter()
                .filter_map(|comp| {
                    let marks: BTreeMap<Mark, Rational> = comp
                        .marks
                        .iter()
                        .filter(|(m, _)| **m != i)
                        .map(|(m, x)| (map(*m), x.clone()))
                        .collect();
                    (!marks.is_empty()).then(|| ChainComponent { zero: comp.zero.clone(), marks })
                })
                .collect();
            Curve::Chain(Chain { n: n - 1, components })
        }
    };
    Ok(FdrtPoint { t: p.t.clone(), curve })
}

fn remove_mark(v: &mut Vertex, i: Mark) -> bool {
    if v.marks.remove(&i).is_some() {
        return true;
    }
    v.children.iter_mut().any(|c| remove_mark(&mut c.vertex, i))
}

/// Moves mark `i` to another regular point of its own component.
pub fn move_mark(p: &FdrtPoint, i: Mark, to: Rational) -> Result<FdrtPoint, StabError> {
    let mut out = p.clone();
    let found = match &mut out.curve {
        Curve::Tree(g) => move_in_vertex(&mut g.root, i, &to),
        Curve::Chain(c) => {
            let comp = c.components.iter_mut().find(|c| c.marks.contains_key(&i));
            match comp {
                Some(comp) if comp.zero == to => return invalid("the field vanishes there"),
                Some(comp) => {
                    comp.marks.insert(i, to.clone());
                    true
                }
                None => false,
            }
        }
    };
    if found {
        Ok(out)
    } else {
        Err(StabError::NoSuchMark(i))
    }
}

fn move_in_vertex(v: &mut Vertex, i: Mark, to: &Rational) -> bool {
    if let Some(p) = v.marks.get_mut(&i) {
        *p = to.clone();
        return true;
    }
    v.children.iter_mut().any(|c| move_in_vertex(&mut c.vertex, i, to))
}

// JSON wire formats.

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    zero: String,
    marks: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    n: usize,
    components: Vec<ComponentJson>,
}

fn parse_rational(s: &str) -> Result<Rational, StabError> {
    Rational::from_str(s.trim()).map_err(|_| StabError::Parse(format!("bad rational `{s}`")))
}

impl FdrtPoint {
    /// `{"t": "r", "tree": …}` or `{"t": "r", "chain": {"n", "components": [{"zero", "marks"}]}}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        match &self.curve {
            Curve::Tree(g) => json!({"t": self.t.to_string(), "tree": g.to_json_value()}),
            Curve::Chain(c) => {
                let chain = ChainJson {
                    n: c.n,
                    components: c
                        .components
                        .iter()
                        .map(|comp| ComponentJson {
                            zero: comp.zero.to_string(),
                            marks: comp
                                .marks
                                .iter()
                                .map(|(m, x)| (m.to_string(), x.to_string()))
                                .collect(),
                        })
                        .collect(),
                };
                json!({"t": self.t.to_string(), "chain": chain})
            }
        }
    }

    /// Accepts the point format above or a bare tree (taken at `t = 0`).
    pub fn from_json(s: &str) -> Result<Self, StabError> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| StabError::Parse(e.to_string()))?;
        if v.get("root").is_some() {
            return Ok(FdrtPoint::from_tree(GaTree::from_json_value(v)?));
        }
        let t = match v.get("t") {
            Some(serde_json::Value::String(s)) => parse_rational(s)?,
            Some(other) => parse_rational(&other.to_string())?,
            None => Rational::zero(),
        };
        if let Some(tree) = v.get("tree") {
            if !t.is_zero() {
                return Err(StabError::Parse("a tree lives over t = 0".into()));
            }
            return Ok(FdrtPoint::from_tree(GaTree::from_json_value(tree.clone())?));
        }
        let Some(chain) = v.get("chain") else {
            return Err(StabError::Parse("expected `tree`, `chain`, or `root`".into()));
        };
        let raw: ChainJson =
            serde_json::from_value(chain.clone()).map_err(|e| StabError::Parse(e.to_string()))?;
        let components = raw
            .components
            .iter()
            .map(|c| {
                let marks = c
                    .marks
                    .iter()
                    .map(|(m, x)| {
                        let m: Mark =
                            m.parse().map_err(|_| StabError::Parse(format!("bad mark `{m}`")))?;
                        Ok((m, parse_rational(x)?))
                    })
                    .collect::<Result<_, StabError>>()?;
                Ok(ChainComponent { zero: parse_rational(&c.zero)?, marks })
            })
            .collect::<Result<Vec<_>, StabError>>()?;
        FdrtPoint::from_chain(t, Chain { n: raw.n, components })
    }
}

impl CurveLocation {
    /// `{"vertex": [path], "at": "r" | "infinity" | {"node": k}}`.
    pub fn from_json(s: &str) -> Result<Self, StabError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum At {
            Text(String),
            Node { node: usize },
        }
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            vertex: Vec<usize>,
            at: At,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| StabError::Parse(e.to_string()))?;
        let at = match raw.at {
            At::Node { node } => Coordinate::Node(node),
            At::Text(s) if s == "infinity" || s == "∞" => Coordinate::Infinity,
            At::Text(s) => Coordinate::Finite(parse_rational(&s)?),
        };
        Ok(CurveLocation { vertex: raw.vertex, at })
    }

    pub fn to_json(&self) -> String {
        let at = match &self.at {
            Coordinate::Finite(r) => json!(r.to_string()),
            Coordinate::Infinity => json!("infinity"),
            Coordinate::Node(k) => json!({"node": k}),
        };
        json!({"vertex": self.vertex, "at": at}).to_string()
    }
}

impl fmt::Display for FdrtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t = {}: {}", self.t, self.canonical_type())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    fn ty(s: &str) -> StratumType {
        s.parse().unwrap()
    }

    #[test]
    fn seeds() {
        let s = seed_curve(r(0));
        assert_eq!(s.as_tree(), Some(&GaTree::irreducible(&[r(1)])));
        let s = seed_curve(r(1));
        let c = s.as_chain().unwrap();
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].zero, r(-1));
        assert_eq!(c.components[0].marks, BTreeMap::from([(1, r(1))]));
        assert!(seed_curve(r(-1)).is_stable());
        for t in [rat(3, 7), r(-5), r(0)] {
            assert_eq!(coresidue(&seed_curve(t.clone())), t);
        }
    }

    #[test]
    fn insert_at_a_regular_point() {
        let p = FdrtPoint::from_tree(GaTree::irreducible(&[r(0)]));
        let q = insert_mark(&p, &CurveLocation::finite(vec![], r(5))).unwrap();
        assert_eq!(q.as_tree(), Some(&GaTree::irreducible(&[r(0), r(5)])));
    }

    #[test]
    fn insert_at_x_infinity_gives_the_boundary_point() {
        let p = FdrtPoint::from_tree(GaTree::irreducible(&[r(0)]));
        let q = insert_mark(&p, &CurveLocation::x_infinity()).unwrap();
        assert_eq!(q.canonical_type(), ty("⟨∞: {1},{2}⟩"));
        assert!(q.is_stable());
    }

    #[test]
    fn insert_at_the_second_fixed_point() {
        let p = insert_mark(&seed_curve(r(1)), &CurveLocation::finite(vec![0], r(-1))).unwrap();
        let c = p.as_chain().unwrap();
        assert_eq!(c.components.len(), 2);
        assert_eq!(c.components[0].marks.keys().collect::<Vec<_>>(), vec![&2]);
        assert_eq!(p.canonical_type(), ty("(2 | 1)"));
        assert_eq!(coresidue(&p), r(1));
    }

    #[test]
    fn chain_nodes_and_ends() {
        let p = seed_curve(r(2));
        let p = insert_mark(&p, &CurveLocation::new(vec![0], Coordinate::Infinity)).unwrap();
        assert_eq!(p.canonical_type(), ty("(1 | 2)"));
        let p = insert_mark(&p, &CurveLocation::new(vec![], Coordinate::Node(0))).unwrap();
        assert_eq!(p.canonical_type(), ty("(1 | 3 | 2)"));
        let p = insert_mark(&p, &CurveLocation::finite(vec![1], r(0))).unwrap();
        assert_eq!(p.canonical_type(), ty("(1 | 4 | 3 | 2)"));
        let p = insert_mark(&p, &CurveLocation::finite(vec![1], r(7))).unwrap();
        assert_eq!(p.canonical_type(), ty("(1 | 4,5 | 3 | 2)"));
        assert!(insert_mark(&p, &CurveLocation::new(vec![], Coordinate::Node(4))).is_err());
        assert!(insert_mark(&p, &CurveLocation::finite(vec![9], r(1))).is_err());
    }

    #[test]
    fn tree_nodes_and_trunk_points() {
        let p = FdrtPoint::from_tree(GaTree::irreducible(&[r(0)]));
        let p = insert_mark(&p, &CurveLocation::x_infinity()).unwrap();
        // a trunk point away from the nodes grows a leaf
        let q = insert_mark(&p, &CurveLocation::finite(vec![], r(5))).unwrap();
        assert_eq!(q.canonical_type(), ty("⟨∞: {1},{2},{3}⟩"));
        // the node to child 0, three equivalent ways
        for loc in [
            CurveLocation::new(vec![], Coordinate::Node(0)),
            CurveLocation::new(vec![0], Coordinate::Infinity),
            CurveLocation::finite(vec![], r(0)),
        ] {
            let q = insert_mark(&p, &loc).unwrap();
            assert_eq!(q.canonical_type(), ty("⟨∞: ({1},{3}),{2}⟩"));
            assert!(q.is_stable());
        }
        let q = insert_mark(&p, &CurveLocation::finite(vec![1], r(1))).unwrap();
        assert_eq!(q.canonical_type(), ty("⟨∞: {1},{2,3}⟩"));
        assert!(insert_mark(&p, &CurveLocation::new(vec![1], Coordinate::Node(0))).is_err());
        assert!(insert_mark(&p, &CurveLocation::new(vec![], Coordinate::Node(2))).is_err());
    }

    #[test]
    fn coincident_insertion_does_not_bubble() {
        let p = FdrtPoint::from_tree(GaTree::irreducible(&[r(3)]));
        let q = insert_mark(&p, &CurveLocation::finite(vec![], r(3))).unwrap();
        assert_eq!(q.canonical_type(), ty("⟨{1,2}⟩"));
    }

    #[test]
    fn forget_examples() {
        let p = FdrtPoint::from_tree(GaTree::irreducible(&[r(0)]));
        let b = insert_mark(&p, &CurveLocation::x_infinity()).unwrap();
        let f = forget_mark(&b, 2).unwrap();
        assert_eq!(f.canonical_type(), ty("⟨{1}⟩"));

        let two = FdrtPoint::from_tree(GaTree::irreducible(&[r(0), r(4)]));
        let f = forget_mark(&two, 1).unwrap();
        assert_eq!(f.as_tree(), Some(&GaTree::irreducible(&[r(4)])));

        assert_eq!(forget_mark(&p, 1), Err(StabError::LastMark));
        assert_eq!(forget_mark(&two, 3), Err(StabError::NoSuchMark(3)));
    }

    #[test]
    fn forget_renumbers_and_contracts_chains() {
        let p = seed_curve(r(1));
        let p = insert_mark(&p, &CurveLocation::finite(vec![0], r(-1))).unwrap();
        let p = insert_mark(&p, &CurveLocation::finite(vec![1], r(4))).unwrap();
        assert_eq!(p.canonical_type(), ty("(2 | 1,3)"));
        let f = forget_mark(&p, 2).unwrap();
        assert_eq!(f.canonical_type(), ty("(1,2)"));
        assert_eq!(coresidue(&f), r(1));
        let f = forget_mark(&p, 1).unwrap();
        assert_eq!(f.canonical_type(), ty("(1 | 2)"));
    }

    #[test]
    fn round_trip_on_the_boundary() {
        let p = FdrtPoint::from_tree(GaTree::irreducible(&[r(0), r(2)]));
        let p = insert_mark(&p, &CurveLocation::x_infinity()).unwrap();
        for loc in [
            CurveLocation::x_infinity(),
            CurveLocation::new(vec![], Coordinate::Node(1)),
            CurveLocation::finite(vec![], rat(1, 2)),
            CurveLocation::finite(vec![0], r(2)),
        ] {
            let q = insert_mark(&p, &loc).unwrap();
            let back = forget_mark(&q, 4).unwrap();
            assert_eq!(back.canonical_point_form(), p.canonical_point_form());
        }
    }

    #[test]
    fn move_mark_stays_on_its_component() {
        let p = seed_curve(r(0));
        let q = move_mark(&p, 1, r(7)).unwrap();
        assert_eq!(q.as_tree(), Some(&GaTree::irreducible(&[r(7)])));
        assert!(move_mark(&seed_curve(r(1)), 1, r(-1)).is_err());
        assert_eq!(move_mark(&p, 2, r(0)), Err(StabError::NoSuchMark(2)));
    }

    #[test]
    fn json_round_trips() {
        let p = insert_mark(&seed_curve(rat(1, 2)), &CurveLocation::x_infinity()).unwrap();
        let back = FdrtPoint::from_json(&p.to_json_value().to_string()).unwrap();
        assert_eq!(back, p);
        let z = insert_mark(&seed_curve(r(0)), &CurveLocation::x_infinity()).unwrap();
        let back = FdrtPoint::from_json(&z.to_json_value().to_string()).unwrap();
        assert_eq!(back, z);
        let bare = FdrtPoint::from_json(&z.as_tree().unwrap().to_json()).unwrap();
        assert_eq!(bare, z);

        for s in [
            r#"{"vertex": [0, 1], "at": "3/4"}"#,
            r#"{"vertex": [], "at": "infinity"}"#,
            r#"{"vertex": [2], "at": {"node": 1}}"#,
        ] {
            let loc = CurveLocation::from_json(s).unwrap();
            assert_eq!(CurveLocation::from_json(&loc.to_json()).unwrap(), loc);
        }
        assert!(CurveLocation::from_json(r#"{"at": "x"}"#).is_err());
    }

    #[test]
    fn canonical_chain_form() {
        let c = Chain {
            n: 2,
            components: vec![ChainComponent {
                zero: r(-2),
                marks: BTreeMap::from([(1, r(0)), (2, r(4))]),
            }],
        };
        let f = c.canonical_point_form();
        assert_eq!(f.components[0].zero, r(0));
        assert_eq!(f.components[0].marks, BTreeMap::from([(1, r(1)), (2, r(3))]));
        assert_eq!(f.canonical_point_form(), f);
    }
}
