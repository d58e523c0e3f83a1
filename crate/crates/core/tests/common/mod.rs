#![allow(dead_code)]

use std::collections::BTreeMap;

use catop_core::{
    end_operad, perm_groupoid, EffectiveOperad, EndOperad, FnTable, OperadError, Permutation, SmcStructure, Term,
};
use rand::RngCore;

/// Grafting by hand: leaf `i` of `f` becomes `gs[i-1]` with its leaves
/// shifted past the earlier blocks.
pub fn graft(f: &Term, gs: &[Term]) -> Term {
    let mut offsets = vec![0];
    for g in gs {
        offsets.push(offsets.last().unwrap() + leaves(g));
    }
    fn go(t: &Term, gs: &[Term], offsets: &[usize]) -> Term {
        match t {
            Term::Leaf(i) => shift(&gs[i - 1], offsets[i - 1]),
            Term::Node(s, cs) => Term::Node(s.clone(), cs.iter().map(|c| go(c, gs, offsets)).collect()),
        }
    }
    go(f, gs, &offsets)
}

fn shift(t: &Term, by: usize) -> Term {
    match t {
        Term::Leaf(i) => Term::Leaf(i + by),
        Term::Node(s, cs) => Term::Node(s.clone(), cs.iter().map(|c| shift(c, by)).collect()),
    }
}

pub fn leaves(t: &Term) -> usize {
    match t {
        Term::Leaf(_) => 1,
        Term::Node(_, cs) => cs.iter().map(leaves).sum(),
    }
}

/// Truth table of a term over `{0,1}` with `dot ↦ xor`, `e ↦ 0`, inputs in
/// lexicographic order.
pub fn xor_truth_table(t: &Term, n: usize) -> Vec<usize> {
    fn walk(t: &Term, bits: &[usize]) -> usize {
        match t {
            Term::Leaf(i) => bits[i - 1],
            Term::Node(s, cs) => match &*s.name {
                "dot" => walk(&cs[0], bits) ^ walk(&cs[1], bits),
                "e" => 0,
                other => panic!("unexpected symbol {other}"),
            },
        }
    }
    (0..1usize << n)
        .map(|code| {
            let bits: Vec<usize> = (0..n).map(|j| (code >> (n - 1 - j)) & 1).collect();
            walk(t, &bits)
        })
        .collect()
}

/// `End({0,1})` with one composite corrupted: `xor ∘ (id, id)` returns
/// `xnor` instead of `xor`.
#[derive(Debug, Clone)]
pub struct CorruptedEnd {
    pub inner: EndOperad,
}

impl CorruptedEnd {
    pub fn new(arity_cap: usize) -> Self {
        CorruptedEnd {
            inner: end_operad(2, arity_cap),
        }
    }
}

pub fn xor_table() -> FnTable {
    FnTable::new(2, 2, vec![0, 1, 1, 0]).unwrap()
}

pub fn id_table() -> FnTable {
    FnTable::new(2, 1, vec![0, 1]).unwrap()
}

impl EffectiveOperad for CorruptedEnd {
    type Elem = FnTable;

    fn name(&self) -> String {
        "corrupted End({0,1})".into()
    }

    fn arity(&self, p: &FnTable) -> usize {
        self.inner.arity(p)
    }

    fn unit(&self) -> FnTable {
        self.inner.unit()
    }

    fn compose(&self, f: &FnTable, gs: &[FnTable]) -> Result<FnTable, OperadError> {
        if *f == xor_table() && gs == [id_table(), id_table()] {
            return Ok(FnTable::new(2, 2, vec![1, 0, 0, 1]).unwrap());
        }
        self.inner.compose(f, gs)
    }

    fn act(&self, sigma: &Permutation, p: &FnTable) -> Result<FnTable, OperadError> {
        self.inner.act(sigma, p)
    }

    fn carrier(&self, n: usize) -> Option<Vec<FnTable>> {
        self.inner.carrier(n)
    }

    fn arity_cap(&self) -> Option<usize> {
        self.inner.arity_cap()
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Option<FnTable> {
        self.inner.sample(n, rng)
    }
}

/// The size-3 permutation groupoid with `α_{1,1,1}` replaced by the
/// transposition `[2,1,3]`.
pub fn mutated_groupoid() -> SmcStructure {
    let mut s = perm_groupoid(3);
    let wrong = s.base.find_arrow("3:[2,1,3]").unwrap();
    s.alpha.components.insert(vec![1, 1, 1], wrong);
    s
}

pub fn parse(s: &str) -> Term {
    catop_core::parse_term(s).unwrap()
}

pub fn by_arity(terms: &[Term]) -> BTreeMap<usize, Vec<Term>> {
    let mut m: BTreeMap<usize, Vec<Term>> = BTreeMap::new();
    for t in terms {
        m.entry(t.arity()).or_default().push(t.clone());
    }
    m
}
