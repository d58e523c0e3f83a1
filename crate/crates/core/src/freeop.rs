//! Free symmetric operads over a set of generating symbols.
//!
//! Elements are linear trees: internal nodes carry symbols, leaves carry the
//! labels `1..n`, each exactly once. Composition grafts `g_i` onto the leaf
//! labelled `i`, shifting the labels of `g_i` by `k_1 + … + k_{i-1}`; blocks
//! are ordered by leaf label, not by planar position.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::opcore::{EffectiveOperad, OperadError};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not linear: leaf labels {labels:?} are not exactly 1..={expected}")]
    Linearity { labels: Vec<usize>, expected: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("symbol {name} has arity {arity} but was given {children} children")]
    SymbolArity { name: String, arity: usize, children: usize },
    #[error("symbol {0} is not assigned in this signature")]
    Unassigned(String),
    #[error(transparent)]
    Operad(#[from] OperadError),
}

/// A generating symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub name: Arc<str>,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Self {
        Symbol {
            name: Arc::from(name),
            arity,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Is `name` usable in the term grammar?
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Leaf(usize),
    Node(Symbol, Vec<Term>),
}

impl Term {
    pub fn node(symbol: Symbol, children: Vec<Term>) -> Result<Term, TermError> {
        if symbol.arity != children.len() {
            return Err(TermError::SymbolArity {
                name: symbol.name.to_string(),
                arity: symbol.arity,
                children: children.len(),
            });
        }
        Ok(Term::Node(symbol, children))
    }

    /// Number of leaves.
    pub fn arity(&self) -> usize {
        match self {
            Term::Leaf(_) => 1,
            Term::Node(_, cs) => cs.iter().map(Term::arity).sum(),
        }
    }

    /// Number of `Node` constructors; the enumeration depth measure.
    pub fn node_count(&self) -> usize {
        match self {
            Term::Leaf(_) => 0,
            Term::Node(_, cs) => 1 + cs.iter().map(Term::node_count).sum::<usize>(),
        }
    }

    /// Leaf labels in planar (left to right) order.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<usize>) {
        match self {
            Term::Leaf(i) => out.push(*i),
            Term::Node(_, cs) => cs.iter().for_each(|c| c.collect_labels(out)),
        }
    }

    /// Checks node arities and that the leaves are labelled bijectively by
    /// `1..n`; returns `n`.
    pub fn check_linear(&self) -> Result<usize, TermError> {
        self.check_node_arities()?;
        let labels = self.labels();
        let n = labels.len();
        let mut seen = vec![false; n];
        for &l in &labels {
            if l == 0 || l > n || seen[l - 1] {
                return Err(TermError::Linearity { labels, expected: n });
            }
            seen[l - 1] = true;
        }
        Ok(n)
    }

    fn check_node_arities(&self) -> Result<(), TermError> {
        if let Term::Node(s, cs) = self {
            if s.arity != cs.len() {
                return Err(TermError::SymbolArity {
                    name: s.name.to_string(),
                    arity: s.arity,
                    children: cs.len(),
                });
            }
            cs.iter().try_for_each(Term::check_node_arities)?;
        }
        Ok(())
    }

    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Leaf(i) => Term::Leaf(f(*i)),
            Term::Node(s, cs) => Term::Node(s.clone(), cs.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    /// Replaces every leaf `i` by `f(i)` verbatim (no relabelling).
    pub fn substitute(&self, f: &impl Fn(usize) -> Term) -> Term {
        match self {
            Term::Leaf(i) => f(*i),
            Term::Node(s, cs) => Term::Node(s.clone(), cs.iter().map(|c| c.substitute(f)).collect()),
        }
    }

    /// Rewrites every node symbol, keeping the shape.
    pub fn map_symbols<E>(&self, f: &impl Fn(&Symbol) -> Result<Symbol, E>) -> Result<Term, E> {
        Ok(match self {
            Term::Leaf(i) => Term::Leaf(*i),
            Term::Node(s, cs) => Term::Node(
                f(s)?,
                cs.iter().map(|c| c.map_symbols(f)).collect::<Result<_, _>>()?,
            ),
        })
    }

    pub fn symbols(&self) -> Vec<&Symbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a Symbol>) {
        if let Term::Node(s, cs) = self {
            out.push(s);
            cs.iter().for_each(|c| c.collect_symbols(out));
        }
    }

    /// Splits a linear node `s(c_1, …, c_m)` into `π · (s ∘ (c'_1, …, c'_m))`
    /// where each `c'_j` is `c_j` with its labels renumbered `1..k_j` in
    /// order, and `π` sends position `p` of the concatenated blocks to the
    /// original label found there.
    pub fn decompose(&self) -> Option<(&Symbol, Vec<Term>, Permutation)> {
        let Term::Node(s, cs) = self else { return None };
        let mut images = Vec::new();
        let mut standardized = Vec::with_capacity(cs.len());
        for c in cs {
            let mut labels = c.labels();
            labels.sort_unstable();
            let rank: HashMap<usize, usize> =
                labels.iter().enumerate().map(|(r, &l)| (l, r + 1)).collect();
            standardized.push(c.relabel(&|l| rank[&l]));
            images.extend(labels);
        }
        let pi = Permutation::from_images(images).ok()?;
        Some((s, standardized, pi))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Leaf(i) => write!(f, "x{i}"),
            Term::Node(s, cs) => {
                write!(f, "{}(", s.name)?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_term(&text).map_err(serde::de::Error::custom)
    }
}

/// Text form of a term.
pub fn format_term(t: &Term) -> String {
    t.to_string()
}

/// The unit of the free operad, the single leaf.
pub fn unit_term() -> Term {
    Term::Leaf(1)
}

/// Operadic composition `f ∘ (g_1, …, g_n)`.
pub fn compose_terms(f: &Term, gs: &[Term]) -> Result<Term, TermError> {
    let n = f.check_linear()?;
    if gs.len() != n {
        return Err(TermError::ArityMismatch {
            expected: n,
            found: gs.len(),
        });
    }
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for g in gs {
        offsets.push(total);
        total += g.check_linear()?;
    }
    Ok(f.substitute(&|i| {
        let shift = offsets[i - 1];
        gs[i - 1].relabel(&|j| shift + j)
    }))
}

/// Left action: leaf `i` becomes leaf `σ(i)`.
pub fn act_term(sigma: &Permutation, t: &Term) -> Result<Term, TermError> {
    let n = t.check_linear()?;
    if sigma.degree() != n {
        return Err(TermError::ArityMismatch {
            expected: n,
            found: sigma.degree(),
        });
    }
    Ok(t.relabel(&|i| sigma.apply(i)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Hole,
    Node(Symbol, Vec<Shape>),
}

impl Shape {
    fn nodes(&self) -> usize {
        match self {
            Shape::Hole => 0,
            Shape::Node(_, cs) => 1 + cs.iter().map(Shape::nodes).sum::<usize>(),
        }
    }

    fn fill(&self, labels: &mut impl Iterator<Item = usize>) -> Term {
        match self {
            Shape::Hole => Term::Leaf(labels.next().expect("enough labels")),
            Shape::Node(s, cs) => Term::Node(s.clone(), cs.iter().map(|c| c.fill(labels)).collect()),
        }
    }
}

/// Enumeration order on shapes: node count, then leaf before node, then
/// root symbol (name, arity), then children lexicographically.
fn shape_order(a: &Shape, b: &Shape) -> Ordering {
    a.nodes().cmp(&b.nodes()).then_with(|| match (a, b) {
        (Shape::Hole, Shape::Hole) => Ordering::Equal,
        (Shape::Hole, Shape::Node(..)) => Ordering::Less,
        (Shape::Node(..), Shape::Hole) => Ordering::Greater,
        (Shape::Node(s, xs), Shape::Node(t, ys)) => s
            .name
            .cmp(&t.name)
            .then(s.arity.cmp(&t.arity))
            .then_with(|| {
                xs.iter()
                    .zip(ys)
                    .map(|(x, y)| shape_order(x, y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
    })
}

struct ShapeTable<'a> {
    symbols: Vec<&'a Symbol>,
    memo: HashMap<(usize, usize), Vec<Shape>>,
}

impl<'a> ShapeTable<'a> {
    fn new(symbols: &'a [Symbol]) -> Self {
        let mut symbols: Vec<&Symbol> = symbols.iter().collect();
        symbols.sort();
        symbols.dedup();
        ShapeTable {
            symbols,
            memo: HashMap::new(),
        }
    }

    /// All shapes with exactly `nodes` nodes and `holes` holes, sorted.
    fn exact(&mut self, nodes: usize, holes: usize) -> Vec<Shape> {
        if let Some(v) = self.memo.get(&(nodes, holes)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if nodes == 0 {
            if holes == 1 {
                out.push(Shape::Hole);
            }
        } else {
            for s in self.symbols.clone() {
                for children in self.distribute(s.arity, nodes - 1, holes) {
                    out.push(Shape::Node(s.clone(), children));
                }
            }
        }
        out.sort_by(shape_order);
        self.memo.insert((nodes, holes), out.clone());
        out
    }

    /// Child shape tuples of length `m` with the given totals.
    fn distribute(&mut self, m: usize, nodes: usize, holes: usize) -> Vec<Vec<Shape>> {
        if m == 0 {
            return if nodes == 0 && holes == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for k in 0..=nodes {
            for h in 0..=holes {
                let firsts = self.exact(k, h);
                if firsts.is_empty() {
                    continue;
                }
                let rests = self.distribute(m - 1, nodes - k, holes - h);
                for first in &firsts {
                    for rest in &rests {
                        let mut v = Vec::with_capacity(m);
                        v.push(first.clone());
                        v.extend(rest.iter().cloned());
                        out.push(v);
                    }
                }
            }
        }
        out
    }
}

/// All linear terms of arity `n` with exactly `nodes` nodes, in enumeration
/// order (shape order, then leaf labelling as a permutation word).
pub fn enumerate_terms_exact(symbols: &[Symbol], n: usize, nodes: usize) -> Vec<Term> {
    let mut table = ShapeTable::new(symbols);
    let shapes = table.exact(nodes, n);
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let mut out = Vec::with_capacity(shapes.len() * perms.len());
    for shape in &shapes {
        for p in &perms {
            out.push(shape.fill(&mut p.images().iter().copied()));
        }
    }
    out
}

/// All linear terms of arity `n` with at most `max_nodes` nodes, ordered by
/// node count, root symbol, children, then leaf labelling.
pub fn enumerate_terms(symbols: &[Symbol], n: usize, max_nodes: usize) -> Vec<Term> {
    let mut table = ShapeTable::new(symbols);
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let mut out = Vec::new();
    for nodes in 0..=max_nodes {
        for shape in table.exact(nodes, n) {
            for p in &perms {
                out.push(shape.fill(&mut p.images().iter().copied()));
            }
        }
    }
    out
}

const UNREACHABLE: usize = usize::MAX / 4;

/// Fewest nodes needed for a shape with `h` holes, for every `h ≤ max_holes`.
fn min_nodes_table(symbols: &[Symbol], max_holes: usize) -> Vec<usize> {
    let mut best = vec![UNREACHABLE; max_holes + 1];
    if max_holes >= 1 {
        best[1] = 0;
    }
    loop {
        let mut changed = false;
        for s in symbols {
            let sums = child_sums(&best, s.arity);
            for h in 0..=max_holes {
                let cand = sums[h].saturating_add(1);
                if cand < best[h] {
                    best[h] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            return best;
        }
    }
}

/// `sums[h]` = min over splits of `h` into `m` parts of Σ best[h_i].
fn child_sums(best: &[usize], m: usize) -> Vec<usize> {
    let mut sums = vec![UNREACHABLE; best.len()];
    sums[0] = 0;
    for _ in 0..m {
        let mut next = vec![UNREACHABLE; best.len()];
        for (h, slot) in next.iter_mut().enumerate() {
            for h1 in 0..=h {
                *slot = (*slot).min(best[h1].saturating_add(sums[h - h1]));
            }
        }
        sums = next;
    }
    sums.iter().map(|&x| x.min(UNREACHABLE)).collect()
}

/// A random linear term of arity `n` with at most `max_nodes` nodes, or
/// `None` when no such term exists.
pub fn random_term(symbols: &[Symbol], n: usize, max_nodes: usize, rng: &mut dyn RngCore) -> Option<Term> {
    let best = min_nodes_table(symbols, n);
    if best[n] > max_nodes {
        return None;
    }
    let shape = random_shape(symbols, &best, n, max_nodes, rng);
    let mut labels: Vec<usize> = (1..=n).collect();
    rand::seq::SliceRandom::shuffle(labels.as_mut_slice(), rng);
    Some(shape.fill(&mut labels.into_iter()))
}

fn random_shape(symbols: &[Symbol], best: &[usize], holes: usize, budget: usize, rng: &mut dyn RngCore) -> Shape {
    let mut options: Vec<Option<&Symbol>> = Vec::new();
    if holes == 1 {
        options.push(None);
    }
    for s in symbols {
        if child_sums(best, s.arity)[holes] < budget {
            options.push(Some(s));
        }
    }
    let pick = options[rng.gen_range(0..options.len())];
    let Some(s) = pick else { return Shape::Hole };

    let m = s.arity;
    let inner = budget - 1;
    let split = (0..32)
        .map(|_| random_split(rng, holes, m))
        .find(|hs| hs.iter().map(|&h| best[h]).sum::<usize>() <= inner)
        .unwrap_or_else(|| greedy_split(best, holes, m));
    let needed: Vec<usize> = split.iter().map(|&h| best[h]).collect();
    let mut spare = inner - needed.iter().sum::<usize>();
    let mut children = Vec::with_capacity(m);
    for (i, &h) in split.iter().enumerate() {
        let extra = if i + 1 == m { spare } else { rng.gen_range(0..=spare) };
        spare -= extra;
        children.push(random_shape(symbols, best, h, needed[i] + extra, rng));
    }
    Shape::Node(s.clone(), children)
}

fn random_split(rng: &mut dyn RngCore, total: usize, parts: usize) -> Vec<usize> {
    if parts == 0 {
        return Vec::new();
    }
    let mut cuts: Vec<usize> = (0..parts - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out: Vec<usize> = cuts
        .into_iter()
        .map(|c| {
            let d = c - prev;
            prev = c;
            d
        })
        .collect();
    out.push(total - prev);
    out
}

fn greedy_split(best: &[usize], total: usize, parts: usize) -> Vec<usize> {
    // reconstruct an optimal split from the knapsack table
    let mut out = Vec::with_capacity(parts);
    let mut remaining = total;
    for left in (1..=parts).rev() {
        let rest = child_sums(best, left - 1);
        let h = (0..=remaining)
            .min_by_key(|&h| best[h].saturating_add(rest[remaining - h]))
            .expect("nonempty range");
        out.push(h);
        remaining -= h;
    }
    out
}

/// Evaluates a linear term in `operad`, sending each symbol through
/// `assign`; this is the free extension of `assign` to a morphism.
pub fn eval_term<P: EffectiveOperad>(
    operad: &P,
    assign: &BTreeMap<Symbol, P::Elem>,
    t: &Term,
) -> Result<P::Elem, TermError> {
    t.check_linear()?;
    eval_linear(operad, assign, t)
}

fn eval_linear<P: EffectiveOperad>(
    operad: &P,
    assign: &BTreeMap<Symbol, P::Elem>,
    t: &Term,
) -> Result<P::Elem, TermError> {
    match t.decompose() {
        None => Ok(operad.unit()),
        Some((s, children, pi)) => {
            let head = assign
                .get(s)
                .ok_or_else(|| TermError::Unassigned(s.name.to_string()))?;
            let inner = children
                .iter()
                .map(|c| eval_linear(operad, assign, c))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(operad.act(&pi, &operad.compose(head, &inner)?)?)
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TermError> {
        Err(TermError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<&'a str, TermError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.pos += 1,
            Some(c) => return self.err(format!("unexpected '{}'", *c as char)),
            None => return self.err("unexpected end of input"),
        }
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn term(&mut self) -> Result<Term, TermError> {
        let start = self.pos;
        let name = self.ident()?;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut children = Vec::new();
            if self.peek() == Some(b')') {
                self.pos += 1;
            } else {
                loop {
                    children.push(self.term()?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected ',' or ')'"),
                    }
                }
            }
            return Ok(Term::Node(Symbol::new(name, children.len()), children));
        }
        match name.strip_prefix('x').map(str::parse::<usize>) {
            Some(Ok(i)) if i >= 1 && !name[1..].starts_with('+') => Ok(Term::Leaf(i)),
            _ => {
                self.pos = start;
                self.skip_ws();
                self.err(format!("expected a leaf xN or a symbol application, found '{name}'"))
            }
        }
    }
}

/// Parses the term grammar
/// `term := 'x'NAT | IDENT '(' ')' | IDENT '(' term (',' term)* ')'`
/// and rejects non-linear input.
pub fn parse_term(src: &str) -> Result<Term, TermError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let t = p.term()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    t.check_linear()?;
    Ok(t)
}

/// The free symmetric operad `FΦ` as an effective operad; carriers are
/// enumerated up to `max_nodes` nodes.
#[derive(Debug, Clone)]
pub struct FreeOperad {
    symbols: Vec<Symbol>,
    max_nodes: usize,
    sample_nodes: usize,
}

impl FreeOperad {
    pub fn new(symbols: Vec<Symbol>, max_nodes: usize) -> Self {
        FreeOperad {
            symbols,
            max_nodes,
            sample_nodes: max_nodes + 4,
        }
    }

    /// Node bound for random elements (defaults to `max_nodes + 4`).
    pub fn with_sample_nodes(mut self, nodes: usize) -> Self {
        self.sample_nodes = nodes;
        self
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }
}

fn foreign(e: TermError) -> OperadError {
    match e {
        TermError::Operad(o) => o,
        TermError::ArityMismatch { expected, found } => OperadError::InputCount { expected, found },
        other => OperadError::Foreign(other.to_string()),
    }
}

impl EffectiveOperad for FreeOperad {
    type Elem = Term;

    fn name(&self) -> String {
        let syms: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        format!("F{{{}}}", syms.join(", "))
    }

    fn arity(&self, p: &Term) -> usize {
        p.arity()
    }

    fn unit(&self) -> Term {
        unit_term()
    }

    fn compose(&self, f: &Term, gs: &[Term]) -> Result<Term, OperadError> {
        compose_terms(f, gs).map_err(foreign)
    }

    fn act(&self, sigma: &Permutation, p: &Term) -> Result<Term, OperadError> {
        if sigma.degree() != p.arity() {
            return Err(OperadError::DegreeMismatch {
                degree: sigma.degree(),
                arity: p.arity(),
            });
        }
        act_term(sigma, p).map_err(foreign)
    }

    fn carrier(&self, n: usize) -> Option<Vec<Term>> {
        Some(enumerate_terms(&self.symbols, n, self.max_nodes))
    }

    fn arity_cap(&self) -> Option<usize> {
        None
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Option<Term> {
        random_term(&self.symbols, n, self.sample_nodes, rng)
    }
}
