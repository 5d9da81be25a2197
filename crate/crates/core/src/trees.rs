//! Stable marked trees over a point, their combinatorial types, and the
//! per-stratum invariants.
//!
//! A [`GaTree`] is a rooted tree of rational components. Trunk components
//! carry the trivial action and no marks; leaf components carry the
//! translation action with some speed and at least one mark. The root
//! hosts `x_∞` at the coordinate `∞`, and every component sees its parent
//! node at `∞` as well, so attachment positions and mark positions are
//! plain rationals.
//!
//! A [`StratumType`] forgets all coordinates. On the additive side it is a
//! [`Shape`]; on the multiplicative side it is an [`OrderedPartition`] of the
//! marks into the components of a Losev-Manin chain, listed from the
//! `0`-side to the `x_∞`-side.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::Rational;

pub type Mark = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("cannot parse: {0}")]
    Parse(String),
}

fn malformed<T>(msg: impl Into<String>) -> Result<T, TreeError> {
    Err(TreeError::MalformedTree(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Trunk,
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Child {
    pub at: Rational,
    pub vertex: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub kind: ComponentKind,
    /// Mark index to position in the component's coordinate.
    pub marks: BTreeMap<Mark, Rational>,
    /// Coefficient of the vector field; leaves only.
    pub speed: Option<Rational>,
    pub children: Vec<Child>,
}

impl Vertex {
    pub fn leaf<I>(positions: I, speed: Rational) -> Self
    where
        I: IntoIterator<Item = (Mark, Rational)>,
    {
        Vertex {
            kind: ComponentKind::Leaf,
            marks: positions.into_iter().collect(),
            speed: Some(speed),
            children: Vec::new(),
        }
    }

    pub fn trunk<I>(children: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Vertex)>,
    {
        Vertex {
            kind: ComponentKind::Trunk,
            marks: BTreeMap::new(),
            speed: None,
            children: children
                .into_iter()
                .map(|(at, vertex)| Child { at, vertex })
                .collect(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.kind == ComponentKind::Leaf
    }

    /// Smallest mark in the subtree.
    pub fn min_mark(&self) -> Option<Mark> {
        let own = self.marks.keys().next().copied();
        self.children
            .iter()
            .filter_map(|c| c.vertex.min_mark())
            .chain(own)
            .min()
    }

    pub fn subtree_marks(&self, out: &mut Vec<Mark>) {
        out.extend(self.marks.keys().copied());
        for c in &self.children {
            c.vertex.subtree_marks(out);
        }
    }

    pub fn component_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|c| c.vertex.component_count())
            .sum::<usize>()
    }

    /// Follows a path of child indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&Vertex> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children.get(*i)?.vertex.at_path(rest),
        }
    }

    pub fn at_path_mut(&mut self, path: &[usize]) -> Option<&mut Vertex> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children.get_mut(*i)?.vertex.at_path_mut(rest),
        }
    }

    fn relabel(&mut self, map: &dyn Fn(Mark) -> Mark) {
        self.marks = std::mem::take(&mut self.marks)
            .into_iter()
            .map(|(m, p)| (map(m), p))
            .collect();
        for c in &mut self.children {
            c.vertex.relabel(map);
        }
    }
}

/// A marked tree over a point at `t = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaTree {
    pub n: usize,
    pub root: Vertex,
}

impl GaTree {
    pub fn new(n: usize, root: Vertex) -> Self {
        GaTree { n, root }
    }

    /// The irreducible curve with marks `1..=n` at `positions` and speed 1.
    pub fn irreducible(positions: &[Rational]) -> Self {
        GaTree {
            n: positions.len(),
            root: Vertex::leaf(
                positions.iter().cloned().enumerate().map(|(i, p)| (i + 1, p)),
                Rational::one(),
            ),
        }
    }

    pub fn component_count(&self) -> usize {
        self.root.component_count()
    }

    /// Applies `map` to every mark index.
    pub fn relabeled(&self, map: &dyn Fn(Mark) -> Mark) -> GaTree {
        let mut out = self.clone();
        out.root.relabel(map);
        out
    }

    /// Checks the structural contract; stability is not part of it.
    pub fn validate(&self) -> Result<(), TreeError> {
        if self.n == 0 {
            return malformed("a tree needs at least one mark");
        }
        let mut seen = BTreeSet::new();
        validate_vertex(&self.root, self.n, &mut seen)?;
        if seen.len() != self.n {
            return malformed(format!(
                "marks {:?} missing",
                (1..=self.n).filter(|m| !seen.contains(m)).collect::<Vec<_>>()
            ));
        }
        Ok(())
    }

    /// Stability of the underlying curve: every markless component meets at
    /// least three others, or hosts `x_∞` and meets at least two.
    pub fn is_stable(&self) -> Result<bool, TreeError> {
        self.validate()?;
        Ok(vertex_stable(&self.root, true))
    }

    pub fn canonical_type(&self) -> StratumType {
        StratumType::P(Shape::of_vertex(&self.root))
    }

    /// Canonical representative of the isomorphism class: leaves get speed
    /// 1 with their smallest mark at 0; trunks send their first two children
    /// (in canonical child order) to 0 and 1.
    pub fn canonical_point_form(&self) -> GaTree {
        GaTree {
            n: self.n,
            root: normalize_vertex(&self.root),
        }
    }

    pub fn is_isomorphic(&self, other: &GaTree) -> bool {
        self.n == other.n && self.canonical_point_form() == other.canonical_point_form()
    }
}

fn validate_vertex(v: &Vertex, n: usize, seen: &mut BTreeSet<Mark>) -> Result<(), TreeError> {
    for m in v.marks.keys() {
        if *m == 0 || *m > n {
            return malformed(format!("mark {m} outside 1..={n}"));
        }
        if !seen.insert(*m) {
            return malformed(format!("mark {m} appears twice"));
        }
    }
    match v.kind {
        ComponentKind::Trunk => {
            if !v.marks.is_empty() {
                return malformed("marks on a trunk component");
            }
            if v.speed.is_some() {
                return malformed("speed on a trunk component");
            }
            let mut positions = BTreeSet::new();
            for c in &v.children {
                if !positions.insert(&c.at) {
                    return malformed(format!("two nodes at {} on one trunk", c.at));
                }
            }
        }
        ComponentKind::Leaf => {
            if !v.children.is_empty() {
                return malformed("a leaf component with children");
            }
            match &v.speed {
                Some(s) if !s.is_zero() => {}
                _ => return malformed("a leaf needs a nonzero speed"),
            }
        }
    }
    for c in &v.children {
        validate_vertex(&c.vertex, n, seen)?;
    }
    Ok(())
}

fn vertex_stable(v: &Vertex, is_root: bool) -> bool {
    let here = match v.kind {
        ComponentKind::Leaf => !v.marks.is_empty(),
        // the root meets its children and hosts x_∞; others meet their parent too
        ComponentKind::Trunk => v.children.len() >= 2,
    };
    let _ = is_root;
    here && v.children.iter().all(|c| vertex_stable(&c.vertex, false))
}

fn sorted_children(v: &Vertex) -> Vec<&Child> {
    let mut kids: Vec<&Child> = v.children.iter().collect();
    kids.sort_by_key(|c| c.vertex.min_mark().unwrap_or(usize::MAX));
    kids
}

fn normalize_vertex(v: &Vertex) -> Vertex {
    match v.kind {
        ComponentKind::Leaf => {
            let speed = v.speed.clone().unwrap_or_else(Rational::one);
            let origin = v.marks.values().next().cloned().unwrap_or_else(Rational::zero);
            Vertex::leaf(
                v.marks
                    .iter()
                    .map(|(m, p)| (*m, (p - &origin) / &speed)),
                Rational::one(),
            )
        }
        ComponentKind::Trunk => {
            let kids = sorted_children(v);
            let origin = kids.first().map(|c| c.at.clone()).unwrap_or_else(Rational::zero);
            let unit = match kids.get(1) {
                Some(c) => &c.at - &origin,
                None => Rational::one(),
            };
            Vertex::trunk(
                kids.iter()
                    .map(|c| ((&c.at - &origin) / &unit, normalize_vertex(&c.vertex))),
            )
        }
    }
}

/// Coordinate-free shape of a tree on the additive side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    /// Sorted marks of a leaf component.
    Leaf(Vec<Mark>),
    /// Children sorted by their smallest mark.
    Trunk(Vec<Shape>),
}

impl Shape {
    pub fn leaf<I: IntoIterator<Item = Mark>>(marks: I) -> Self {
        let mut m: Vec<Mark> = marks.into_iter().collect();
        m.sort_unstable();
        Shape::Leaf(m)
    }

    pub fn trunk(mut children: Vec<Shape>) -> Self {
        children.sort_by_key(|c| c.min_mark());
        Shape::Trunk(children)
    }

    pub fn of_vertex(v: &Vertex) -> Self {
        match v.kind {
            ComponentKind::Leaf => Shape::leaf(v.marks.keys().copied()),
            ComponentKind::Trunk => {
                Shape::trunk(v.children.iter().map(|c| Shape::of_vertex(&c.vertex)).collect())
            }
        }
    }

    pub fn min_mark(&self) -> Mark {
        match self {
            Shape::Leaf(m) => m.first().copied().unwrap_or(usize::MAX),
            Shape::Trunk(cs) => cs.first().map_or(usize::MAX, Shape::min_mark),
        }
    }

    pub fn mark_count(&self) -> usize {
        match self {
            Shape::Leaf(m) => m.len(),
            Shape::Trunk(cs) => cs.iter().map(Shape::mark_count).sum(),
        }
    }

    pub fn marks(&self, out: &mut Vec<Mark>) {
        match self {
            Shape::Leaf(m) => out.extend(m),
            Shape::Trunk(cs) => cs.iter().for_each(|c| c.marks(out)),
        }
    }

    pub fn component_count(&self) -> usize {
        match self {
            Shape::Leaf(_) => 1,
            Shape::Trunk(cs) => 1 + cs.iter().map(Shape::component_count).sum::<usize>(),
        }
    }

    /// Combinatorial stability: leaves marked, trunks with at least two
    /// children.
    pub fn is_stable(&self) -> bool {
        match self {
            Shape::Leaf(m) => !m.is_empty(),
            Shape::Trunk(cs) => cs.len() >= 2 && cs.iter().all(Shape::is_stable),
        }
    }

    fn fold_invariants(&self, leaf: &mut dyn FnMut(usize), trunk: &mut dyn FnMut(usize)) {
        match self {
            Shape::Leaf(m) => leaf(m.len()),
            Shape::Trunk(cs) => {
                // parent node (or x_∞ at the root) plus one node per child
                trunk(cs.len() + 1);
                for c in cs {
                    c.fold_invariants(leaf, trunk);
                }
            }
        }
    }

    /// A representative tree with distinct integer coordinates, speed 1.
    pub fn realize(&self) -> Vertex {
        match self {
            Shape::Leaf(m) => Vertex::leaf(
                m.iter()
                    .enumerate()
                    .map(|(i, k)| (*k, Rational::from_integer((i as i64).into()))),
                Rational::one(),
            ),
            Shape::Trunk(cs) => Vertex::trunk(
                cs.iter()
                    .enumerate()
                    .map(|(i, c)| (Rational::from_integer((i as i64).into()), c.realize())),
            ),
        }
    }

    fn write_notation(&self, out: &mut String) {
        match self {
            Shape::Leaf(m) => {
                out.push('{');
                out.push_str(&join_marks(m, ","));
                out.push('}');
            }
            Shape::Trunk(cs) => {
                out.push('(');
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write_notation(out);
                }
                out.push(')');
            }
        }
    }
}

fn join_marks(m: &[Mark], sep: &str) -> String {
    m.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(sep)
}

/// Blocks of marks along a Losev-Manin chain, from the `0`-side to `x_∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedPartition(Vec<Vec<Mark>>);

impl OrderedPartition {
    pub fn new(blocks: Vec<Vec<Mark>>) -> Self {
        OrderedPartition(
            blocks
                .into_iter()
                .map(|mut b| {
                    b.sort_unstable();
                    b
                })
                .collect(),
        )
    }

    pub fn blocks(&self) -> &[Vec<Mark>] {
        &self.0
    }

    pub fn mark_count(&self) -> usize {
        self.0.iter().map(Vec::len).sum()
    }

    /// Blocks nonempty and covering `1..=n` exactly once.
    pub fn is_valid(&self) -> bool {
        let mut all: Vec<Mark> = self.0.iter().flatten().copied().collect();
        all.sort_unstable();
        !self.0.iter().any(Vec::is_empty) && all.iter().copied().eq(1..=all.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    P,
    L,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::P => "P",
            Space::L => "L",
        })
    }
}

impl FromStr for Space {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" | "p" => Ok(Space::P),
            "L" | "l" => Ok(Space::L),
            _ => Err(TreeError::Parse(format!("unknown space `{s}` (expected P or L)"))),
        }
    }
}

/// Combinatorial type of a stratum in one of the two spaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StratumType {
    P(Shape),
    L(OrderedPartition),
}

impl StratumType {
    pub fn space(&self) -> Space {
        match self {
            StratumType::P(_) => Space::P,
            StratumType::L(_) => Space::L,
        }
    }

    pub fn mark_count(&self) -> usize {
        match self {
            StratumType::P(s) => s.mark_count(),
            StratumType::L(p) => p.mark_count(),
        }
    }

    pub fn is_stable(&self) -> bool {
        match self {
            StratumType::P(s) => s.is_stable(),
            StratumType::L(p) => p.is_valid(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            StratumType::P(s) => {
                let mut d = 0usize;
                let mut trunk_excess = 0usize;
                s.fold_invariants(&mut |k| d += k - 1, &mut |m| trunk_excess += m - 3);
                d + trunk_excess
            }
            StratumType::L(p) => p.mark_count() - p.blocks().len(),
        }
    }

    /// Virtual invariant of the open stratum.
    pub fn epoly(&self) -> EPolynomial {
        match self {
            StratumType::P(s) => {
                let mut e = EPolynomial::one();
                let mut leaf_degree = 0usize;
                s.fold_invariants(&mut |k| leaf_degree += k - 1, &mut |m| {
                    e = &e * &EPolynomial::open_m0n(m);
                });
                &e * &EPolynomial::monomial(1, leaf_degree)
            }
            StratumType::L(p) => {
                let q_minus_one = EPolynomial::new(vec![-1, 1]);
                (0..p.mark_count() - p.blocks().len())
                    .fold(EPolynomial::one(), |acc, _| &acc * &q_minus_one)
            }
        }
    }

    /// Euler characteristic of the open stratum.
    pub fn chi(&self) -> i64 {
        match self {
            StratumType::P(s) => {
                let mut chi = 1i64;
                s.fold_invariants(&mut |_| {}, &mut |m| {
                    let k = m - 3;
                    let fact: i64 = (1..=k as i64).product();
                    chi *= if k % 2 == 0 { fact } else { -fact };
                });
                chi
            }
            StratumType::L(p) => {
                if p.blocks().iter().all(|b| b.len() == 1) {
                    1
                } else {
                    0
                }
            }
        }
    }

    pub fn component_count(&self) -> usize {
        match self {
            StratumType::P(s) => s.component_count(),
            StratumType::L(p) => p.blocks().len(),
        }
    }

    /// Graphviz description of the dual graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph stratum {\n");
        match self {
            StratumType::P(s) => {
                let mut next = 0usize;
                dot_shape(s, None, true, &mut next, &mut out);
            }
            StratumType::L(p) => {
                let r = p.blocks().len();
                for (i, b) in p.blocks().iter().enumerate() {
                    let mut label = format!("{{{}}}", join_marks(b, ","));
                    if i == 0 {
                        label = format!("0 {label}");
                    }
                    if i + 1 == r {
                        label.push_str(" ∞");
                    }
                    let _ = writeln!(out, "  v{i} [label=\"{label}\"];");
                }
                for i in 1..r {
                    let _ = writeln!(out, "  v{} -- v{i};", i - 1);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn dot_shape(s: &Shape, parent: Option<usize>, root: bool, next: &mut usize, out: &mut String) {
    let id = *next;
    *next += 1;
    let mut label = match s {
        Shape::Leaf(m) => format!("{{{}}}", join_marks(m, ",")),
        Shape::Trunk(_) => "trunk".to_string(),
    };
    if root {
        label.push_str(" ∞");
    }
    let _ = writeln!(out, "  v{id} [label=\"{label}\"];");
    if let Some(p) = parent {
        let _ = writeln!(out, "  v{p} -- v{id};");
    }
    if let Shape::Trunk(cs) = s {
        for c in cs {
            dot_shape(c, Some(id), false, next, out);
        }
    }
}

impl fmt::Display for StratumType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumType::P(Shape::Leaf(m)) => write!(f, "⟨{{{}}}⟩", join_marks(m, ",")),
            StratumType::P(Shape::Trunk(cs)) => {
                let mut s = String::new();
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    c.write_notation(&mut s);
                }
                write!(f, "⟨∞: {s}⟩")
            }
            StratumType::L(p) => {
                let blocks: Vec<String> = p.blocks().iter().map(|b| join_marks(b, ",")).collect();
                write!(f, "({})", blocks.join(" | "))
            }
        }
    }
}

struct NotationParser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl NotationParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, TreeError> {
        Err(TreeError::Parse(msg.to_string()))
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn expect(&mut self, c: char) -> Result<(), TreeError> {
        match self.chars.next() {
            Some(x) if x == c => Ok(()),
            _ => self.err(&format!("expected `{c}`")),
        }
    }

    fn marks_until(&mut self, close: char, sep: char) -> Result<Vec<Vec<Mark>>, TreeError> {
        let mut groups = vec![Vec::new()];
        let mut num = String::new();
        loop {
            match self.chars.next() {
                Some(c) if c.is_ascii_digit() => num.push(c),
                Some(c) if c == ',' || c == sep || c == close => {
                    if num.is_empty() {
                        return self.err("empty mark");
                    }
                    groups.last_mut().unwrap().push(num.parse().unwrap());
                    num.clear();
                    if c == sep && sep != ',' {
                        groups.push(Vec::new());
                    }
                    if c == close {
                        return Ok(groups);
                    }
                }
                _ => return self.err("unexpected character in mark list"),
            }
        }
    }

    fn shape(&mut self) -> Result<Shape, TreeError> {
        match self.peek() {
            Some('{') => {
                self.chars.next();
                let m = self.marks_until('}', ',')?.concat();
                Ok(Shape::leaf(m))
            }
            Some('(') => {
                self.chars.next();
                let cs = self.shape_list(')')?;
                Ok(Shape::trunk(cs))
            }
            _ => self.err("expected `{` or `(`"),
        }
    }

    fn shape_list(&mut self, close: char) -> Result<Vec<Shape>, TreeError> {
        let mut cs = vec![self.shape()?];
        loop {
            match self.chars.next() {
                Some(',') => cs.push(self.shape()?),
                Some(c) if c == close => return Ok(cs),
                _ => return self.err("expected `,` or closing bracket"),
            }
        }
    }
}

impl FromStr for StratumType {
    type Err = TreeError;

    /// Accepts `⟨{1,2,3}⟩`, `⟨∞: {1,2},{3}⟩`, `(1,2 | 3)` and the ASCII
    /// spellings `<{1,2,3}>`, `<inf: {1,2},{3}>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s
            .replace("inf", "∞")
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '<' => '⟨',
                '>' => '⟩',
                c => c,
            })
            .collect();
        let mut p = NotationParser {
            chars: compact.chars().peekable(),
        };
        let out = match p.peek() {
            Some('⟨') => {
                p.chars.next();
                if p.peek() == Some('∞') {
                    p.chars.next();
                    p.expect(':')?;
                    StratumType::P(Shape::trunk(p.shape_list('⟩')?))
                } else {
                    let shape = p.shape()?;
                    p.expect('⟩')?;
                    match shape {
                        Shape::Leaf(_) => StratumType::P(shape),
                        Shape::Trunk(_) => return p.err("use ⟨∞: …⟩ for a root trunk"),
                    }
                }
            }
            Some('(') => {
                p.chars.next();
                StratumType::L(OrderedPartition::new(p.marks_until(')', '|')?))
            }
            _ => return p.err("a type starts with ⟨ or ("),
        };
        if p.chars.next().is_some() {
            return p.err("trailing characters");
        }
        Ok(out)
    }
}

/// Integer polynomial in `q`, coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EPolynomial(Vec<i64>);

impl EPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        EPolynomial(coeffs)
    }

    pub fn zero() -> Self {
        EPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        EPolynomial(vec![1])
    }

    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        EPolynomial::new(v)
    }

    /// `Π_{j=2}^{m-2} (q - j)`, the open moduli of `m` points on a line.
    pub fn open_m0n(m: usize) -> Self {
        (2..=m.saturating_sub(2) as i64)
            .fold(EPolynomial::one(), |acc, j| &acc * &EPolynomial::new(vec![-j, 1]))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, c| acc * q + c)
    }
}

impl std::ops::Add for &EPolynomial {
    type Output = EPolynomial;
    fn add(self, rhs: &EPolynomial) -> EPolynomial {
        let len = self.0.len().max(rhs.0.len());
        EPolynomial::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&0) + rhs.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }
}

impl std::ops::Mul for &EPolynomial {
    type Output = EPolynomial;
    fn mul(self, rhs: &EPolynomial) -> EPolynomial {
        if self.0.is_empty() || rhs.0.is_empty() {
            return EPolynomial::zero();
        }
        let mut out = vec![0i64; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EPolynomial::new(out)
    }
}

impl std::iter::Sum for EPolynomial {
    fn sum<I: Iterator<Item = EPolynomial>>(iter: I) -> Self {
        iter.fold(EPolynomial::zero(), |acc, p| &acc + &p)
    }
}

impl fmt::Display for EPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("q")?,
                (1, _) => write!(f, "{a}q")?,
                (_, 1) => write!(f, "q^{k}")?,
                _ => write!(f, "{a}q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

// JSON wire format.

#[derive(Debug, Serialize, Deserialize)]
struct TreeJson {
    n: usize,
    root: VertexJson,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexJson {
    kind: ComponentKind,
    #[serde(default)]
    marks: Vec<Mark>,
    #[serde(default)]
    positions: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    speed: Option<String>,
    #[serde(default)]
    children: Vec<ChildJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ChildJson {
    at: String,
    vertex: VertexJson,
}

fn parse_rational(s: &str) -> Result<Rational, TreeError> {
    Rational::from_str(s.trim()).map_err(|_| TreeError::Parse(format!("bad rational `{s}`")))
}

impl VertexJson {
    fn from_vertex(v: &Vertex) -> Self {
        VertexJson {
            kind: v.kind,
            marks: v.marks.keys().copied().collect(),
            positions: v
                .marks
                .iter()
                .map(|(m, p)| (m.to_string(), p.to_string()))
                .collect(),
            speed: v.speed.as_ref().map(|s| s.to_string()),
            children: v
                .children
                .iter()
                .map(|c| ChildJson {
                    at: c.at.to_string(),
                    vertex: VertexJson::from_vertex(&c.vertex),
                })
                .collect(),
        }
    }

    fn into_vertex(self) -> Result<Vertex, TreeError> {
        let mut marks = BTreeMap::new();
        for (k, p) in &self.positions {
            let m: Mark = k
                .parse()
                .map_err(|_| TreeError::Parse(format!("bad mark key `{k}`")))?;
            marks.insert(m, parse_rational(p)?);
        }
        let listed: BTreeSet<Mark> = self.marks.iter().copied().collect();
        if listed.len() != self.marks.len() || listed != marks.keys().copied().collect() {
            return malformed("`marks` and `positions` disagree");
        }
        let speed = self.speed.as_deref().map(parse_rational).transpose()?;
        let children = self
            .children
            .into_iter()
            .map(|c| {
                Ok(Child {
                    at: parse_rational(&c.at)?,
                    vertex: c.vertex.into_vertex()?,
                })
            })
            .collect::<Result<_, TreeError>>()?;
        Ok(Vertex {
            kind: self.kind,
            marks,
            speed,
            children,
        })
    }
}

impl GaTree {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(TreeJson {
            n: self.n,
            root: VertexJson::from_vertex(&self.root),
        })
        .expect("tree always serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("tree always serializes")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self, TreeError> {
        let raw: TreeJson = serde_json::from_value(v).map_err(|e| TreeError::Parse(e.to_string()))?;
        let tree = GaTree {
            n: raw.n,
            root: raw.root.into_vertex()?,
        };
        tree.validate()?;
        Ok(tree)
    }

    pub fn from_json(s: &str) -> Result<Self, TreeError> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| TreeError::Parse(e.to_string()))?;
        GaTree::from_json_value(v)
    }

    /// Graphviz description with coordinates in the labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree {\n");
        let mut next = 0usize;
        dot_vertex(&self.root, None, true, &mut next, &mut out);
        out.push_str("}\n");
        out
    }
}

fn dot_vertex(v: &Vertex, parent: Option<(usize, &Rational)>, root: bool, next: &mut usize, out: &mut String) {
    let id = *next;
    *next += 1;
    let mut label = match v.kind {
        ComponentKind::Leaf => {
            let marks: Vec<String> = v.marks.iter().map(|(m, p)| format!("{m}@{p}")).collect();
            format!("leaf {}", marks.join(" "))
        }
        ComponentKind::Trunk => "trunk".to_string(),
    };
    if root {
        label.push_str(" ∞");
    }
    let _ = writeln!(out, "  v{id} [label=\"{label}\"];");
    if let Some((p, at)) = parent {
        let _ = writeln!(out, "  v{p} -- v{id} [label=\"{at}\"];");
    }
    for c in &v.children {
        dot_vertex(&c.vertex, Some((id, &c.at)), false, next, out);
    }
}
