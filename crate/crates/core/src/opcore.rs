//! Effective symmetric operads: decidable equality, computable composition,
//! unit and symmetric actions, plus executable checkers for the operad
//! axioms and for morphisms.

use std::fmt;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::report::{CheckReport, LawOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("composition expects {expected} inputs, got {found}")]
    InputCount { expected: usize, found: usize },
    #[error("permutation of degree {degree} cannot act on an element of arity {arity}")]
    DegreeMismatch { degree: usize, arity: usize },
    #[error("element does not belong to this operad: {0}")]
    Foreign(String),
    #[error("carrier of arity {0} is not enumerable")]
    NotEnumerable(usize),
}

/// A symmetric operad presented by an oracle.
///
/// `carrier(n)` returns `None` when arity `n` is outside the enumerable
/// range; equality, composition and actions are always available.
pub trait EffectiveOperad {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display;

    fn name(&self) -> String;

    fn arity(&self, p: &Self::Elem) -> usize;

    fn unit(&self) -> Self::Elem;

    fn compose(&self, f: &Self::Elem, gs: &[Self::Elem]) -> Result<Self::Elem, OperadError>;

    fn act(&self, sigma: &Permutation, p: &Self::Elem) -> Result<Self::Elem, OperadError>;

    fn carrier(&self, n: usize) -> Option<Vec<Self::Elem>>;

    /// Largest enumerable arity, `None` when every arity is enumerable.
    fn arity_cap(&self) -> Option<usize>;

    /// A random element of arity `n`, if one can be produced.
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Option<Self::Elem> {
        self.carrier(n)?.choose(rng).cloned()
    }
}

/// The terminal symmetric operad: one element `★_n` in every arity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TerminalOperad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Star(pub usize);

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "★{}", self.0)
    }
}

pub fn terminal_operad() -> TerminalOperad {
    TerminalOperad
}

impl EffectiveOperad for TerminalOperad {
    type Elem = Star;

    fn name(&self) -> String {
        "terminal".into()
    }

    fn arity(&self, p: &Star) -> usize {
        p.0
    }

    fn unit(&self) -> Star {
        Star(1)
    }

    fn compose(&self, f: &Star, gs: &[Star]) -> Result<Star, OperadError> {
        if gs.len() != f.0 {
            return Err(OperadError::InputCount {
                expected: f.0,
                found: gs.len(),
            });
        }
        Ok(Star(gs.iter().map(|g| g.0).sum()))
    }

    fn act(&self, sigma: &Permutation, p: &Star) -> Result<Star, OperadError> {
        check_degree(sigma, p.0)?;
        Ok(*p)
    }

    fn carrier(&self, n: usize) -> Option<Vec<Star>> {
        Some(vec![Star(n)])
    }

    fn arity_cap(&self) -> Option<usize> {
        None
    }

    fn sample(&self, n: usize, _rng: &mut dyn RngCore) -> Option<Star> {
        Some(Star(n))
    }
}

fn check_degree(sigma: &Permutation, arity: usize) -> Result<(), OperadError> {
    if sigma.degree() != arity {
        return Err(OperadError::DegreeMismatch {
            degree: sigma.degree(),
            arity,
        });
    }
    Ok(())
}

/// A function `A^n → A` on `A = {0..size}`, tabulated over argument tuples
/// in lexicographic order (first argument most significant).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnTable {
    arity: usize,
    values: Vec<usize>,
}

impl FnTable {
    pub fn new(size: usize, arity: usize, values: Vec<usize>) -> Result<Self, OperadError> {
        let expected = table_len(size, arity);
        if values.len() != expected || values.iter().any(|&v| v >= size) {
            return Err(OperadError::Foreign(format!(
                "table of arity {arity} over {size} points needs {expected} values in 0..{size}, got {values:?}"
            )));
        }
        Ok(FnTable { arity, values })
    }

    /// Tabulates `f` over every argument tuple.
    pub fn tabulate(size: usize, arity: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        let values = (0..table_len(size, arity))
            .map(|idx| f(&decode(idx, size, arity)))
            .collect();
        FnTable { arity, values }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn eval(&self, size: usize, args: &[usize]) -> usize {
        self.values[encode(args, size)]
    }

    /// Nested-array JSON form: `table[a1][a2]…`; a bare value for arity 0.
    pub fn to_json(&self, size: usize) -> serde_json::Value {
        fn nest(values: &[usize], size: usize, depth: usize) -> serde_json::Value {
            if depth == 0 {
                return serde_json::Value::from(values[0]);
            }
            let stride = values.len() / size.max(1);
            serde_json::Value::Array(
                (0..size)
                    .map(|a| nest(&values[a * stride..(a + 1) * stride], size, depth - 1))
                    .collect(),
            )
        }
        if self.values.is_empty() {
            return serde_json::Value::Array(Vec::new());
        }
        nest(&self.values, size, self.arity)
    }

    pub fn from_json(size: usize, arity: usize, value: &serde_json::Value) -> Result<Self, OperadError> {
        fn flatten(v: &serde_json::Value, depth: usize, size: usize, out: &mut Vec<usize>) -> Result<(), OperadError> {
            if depth == 0 {
                let x = v
                    .as_u64()
                    .ok_or_else(|| OperadError::Foreign(format!("expected a point, got {v}")))?;
                out.push(x as usize);
                return Ok(());
            }
            let arr = v
                .as_array()
                .ok_or_else(|| OperadError::Foreign(format!("expected an array, got {v}")))?;
            if arr.len() != size {
                return Err(OperadError::Foreign(format!(
                    "expected {size} entries, got {}",
                    arr.len()
                )));
            }
            arr.iter().try_for_each(|x| flatten(x, depth - 1, size, out))
        }
        let mut values = Vec::new();
        if !(size == 0 && arity > 0) {
            flatten(value, arity, size, &mut values)?;
        }
        FnTable::new(size, arity, values)
    }
}

impl fmt::Display for FnTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fn{}<", self.arity)?;
        for v in &self.values {
            write!(f, "{v}")?;
        }
        write!(f, ">")
    }
}

fn table_len(size: usize, arity: usize) -> usize {
    size.pow(arity as u32)
}

fn decode(mut idx: usize, size: usize, arity: usize) -> Vec<usize> {
    let mut args = vec![0; arity];
    for slot in args.iter_mut().rev() {
        *slot = idx % size;
        idx /= size;
    }
    args
}

fn encode(args: &[usize], size: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

/// `End(A)` for `A = {0..size}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndOperad {
    size: usize,
    arity_cap: usize,
}

/// Endomorphism operad of a finite set, enumerable up to `arity_cap`.
pub fn end_operad(size: usize, arity_cap: usize) -> EndOperad {
    EndOperad { size, arity_cap }
}

impl EndOperad {
    pub fn size(&self) -> usize {
        self.size
    }

    fn check(&self, t: &FnTable) -> Result<(), OperadError> {
        if t.values.len() != table_len(self.size, t.arity) {
            return Err(OperadError::Foreign(t.to_string()));
        }
        Ok(())
    }
}

impl EffectiveOperad for EndOperad {
    type Elem = FnTable;

    fn name(&self) -> String {
        format!("End({})", self.size)
    }

    fn arity(&self, p: &FnTable) -> usize {
        p.arity
    }

    fn unit(&self) -> FnTable {
        FnTable::tabulate(self.size, 1, |a| a[0])
    }

    fn compose(&self, f: &FnTable, gs: &[FnTable]) -> Result<FnTable, OperadError> {
        if gs.len() != f.arity {
            return Err(OperadError::InputCount {
                expected: f.arity,
                found: gs.len(),
            });
        }
        self.check(f)?;
        gs.iter().try_for_each(|g| self.check(g))?;
        let total: usize = gs.iter().map(|g| g.arity).sum();
        let size = self.size;
        Ok(FnTable::tabulate(size, total, |args| {
            let mut offset = 0;
            let inner: Vec<usize> = gs
                .iter()
                .map(|g| {
                    let v = g.eval(size, &args[offset..offset + g.arity]);
                    offset += g.arity;
                    v
                })
                .collect();
            f.eval(size, &inner)
        }))
    }

    fn act(&self, sigma: &Permutation, p: &FnTable) -> Result<FnTable, OperadError> {
        check_degree(sigma, p.arity)?;
        self.check(p)?;
        let size = self.size;
        Ok(FnTable::tabulate(size, p.arity, |args| {
            p.eval(size, &sigma.permute_args(args))
        }))
    }

    fn carrier(&self, n: usize) -> Option<Vec<FnTable>> {
        if n > self.arity_cap {
            return None;
        }
        let len = table_len(self.size, n);
        let count = (self.size as u128).checked_pow(len as u32)?;
        if count > 1 << 22 {
            return None;
        }
        Some(
            (0..count as usize)
                .map(|idx| FnTable {
                    arity: n,
                    values: decode(idx, self.size, len),
                })
                .collect(),
        )
    }

    fn arity_cap(&self) -> Option<usize> {
        Some(self.arity_cap)
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Option<FnTable> {
        let len = table_len(self.size, n);
        if self.size == 0 && len > 0 {
            return None;
        }
        if self.size == 0 {
            // the empty function on an empty domain
            return (n > 0).then(|| FnTable { arity: n, values: Vec::new() });
        }
        Some(FnTable {
            arity: n,
            values: (0..len).map(|_| rng.gen_range(0..self.size)).collect(),
        })
    }
}

/// Sampling bounds for the axiom and morphism checkers.
///
/// The exhaustive part runs over every instance whose element arities and
/// total arity stay within `arity_cap`; the random part draws
/// `random_samples` instances whose total arity is at most
/// `random_arity_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub arity_cap: usize,
    pub random_samples: usize,
    pub random_arity_cap: usize,
    pub seed: u64,
}

impl Budget {
    pub fn exhaustive(arity_cap: usize) -> Self {
        Budget {
            arity_cap,
            random_samples: 0,
            random_arity_cap: 0,
            seed: 0,
        }
    }

    pub fn with_random(mut self, samples: usize, arity_cap: usize, seed: u64) -> Self {
        self.random_samples = samples;
        self.random_arity_cap = arity_cap;
        self.seed = seed;
        self
    }
}

fn carriers_upto<P: EffectiveOperad>(p: &P, cap: usize) -> Vec<Vec<P::Elem>> {
    (0..=cap).map(|n| p.carrier(n).unwrap_or_default()).collect()
}

/// Every tuple of `len` elements whose arities sum to at most `max_total`.
fn tuples<E: Clone>(carriers: &[Vec<E>], len: usize, max_total: usize) -> Vec<Vec<E>> {
    fn go<E: Clone>(carriers: &[Vec<E>], len: usize, budget: usize, prefix: &mut Vec<E>, out: &mut Vec<Vec<E>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=budget.min(carriers.len().saturating_sub(1)) {
            for e in &carriers[k] {
                prefix.push(e.clone());
                go(carriers, len, budget - k, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(carriers, len, max_total, &mut Vec::new(), &mut out);
    out
}

/// Random weak composition of a random total `≤ max_total` into `parts`.
fn random_arities(rng: &mut impl Rng, parts: usize, max_total: usize) -> Vec<usize> {
    if parts == 0 {
        return Vec::new();
    }
    let total = rng.gen_range(0..=max_total);
    let mut cuts: Vec<usize> = (0..parts - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

fn show<E: fmt::Display>(items: &[E]) -> String {
    let parts: Vec<String> = items.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn shown<E: fmt::Display>(r: &Result<E, OperadError>) -> String {
    match r {
        Ok(e) => e.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn sides<A: fmt::Display, B: fmt::Display>(r: &Result<(A, B), OperadError>) -> String {
    match r {
        Ok((l, r)) => format!("{l} ≠ {r}"),
        Err(e) => format!("error: {e}"),
    }
}

fn arities<P: EffectiveOperad>(p: &P, items: &[P::Elem]) -> Vec<usize> {
    items.iter().map(|e| p.arity(e)).collect()
}

/// The six law families checked for a symmetric operad.
pub const OPERAD_LAWS: [&str; 6] = [
    "left unit",
    "right unit",
    "associativity",
    "left action",
    "equivariance (permuted inputs)",
    "equivariance (acted inputs)",
];

struct AxiomChecker<'a, P: EffectiveOperad> {
    p: &'a P,
    outcomes: Vec<LawOutcome>,
}

impl<'a, P: EffectiveOperad> AxiomChecker<'a, P> {
    fn law(&mut self, idx: usize) -> &mut LawOutcome {
        &mut self.outcomes[idx]
    }

    fn units(&mut self, f: &P::Elem) {
        let p = self.p;
        let one = p.unit();
        let left = p.compose(&one, std::slice::from_ref(f));
        self.law(0).record(left.as_ref() == Ok(f), || format!("f = {f}: 1∘f = {}", shown(&left)));
        let ones = vec![one; p.arity(f)];
        let right = p.compose(f, &ones);
        self.law(1).record(right.as_ref() == Ok(f), || format!("f = {f}: f∘(1,…,1) = {}", shown(&right)));
    }

    fn associativity(&mut self, f: &P::Elem, gs: &[P::Elem], hs: &[P::Elem]) {
        let p = self.p;
        let result = (|| {
            let mut offset = 0;
            let mut inner = Vec::with_capacity(gs.len());
            for g in gs {
                let k = p.arity(g);
                inner.push(p.compose(g, &hs[offset..offset + k])?);
                offset += k;
            }
            let lhs = p.compose(f, &inner)?;
            let rhs = p.compose(&p.compose(f, gs)?, hs)?;
            Ok::<_, OperadError>((lhs, rhs))
        })();
        self.law(2).record(matches!(&result, Ok((l, r)) if l == r), || {
            format!("f = {f}, g = {}, h = {}: {}", show(gs), show(hs), sides(&result))
        });
    }

    fn left_action(&mut self, s: &Permutation, t: &Permutation, x: &P::Elem) {
        let p = self.p;
        let result = (|| {
            let id = p.act(&Permutation::identity(s.degree()), x)?;
            let st = p.act(&s.compose(t).expect("same degree"), x)?;
            let s_t = p.act(s, &p.act(t, x)?)?;
            Ok::<_, OperadError>((id, st, s_t))
        })();
        self.law(3).record(
            matches!(&result, Ok((id, st, s_t)) if id == x && st == s_t),
            || match &result {
                Ok((id, st, s_t)) => format!("σ = {s}, τ = {t}, p = {x}: 1·p = {id}, (στ)·p = {st}, σ·(τ·p) = {s_t}"),
                Err(e) => format!("σ = {s}, τ = {t}, p = {x}: {e}"),
            },
        );
    }

    fn permuted_inputs(&mut self, f: &P::Elem, s: &Permutation, gs: &[P::Elem]) {
        let p = self.p;
        let result = (|| {
            let lhs = p.compose(&p.act(s, f)?, gs)?;
            let reordered: Vec<P::Elem> = s.permute_args(gs);
            let blocks = arities(p, &reordered);
            let bp = s.block_permutation(&blocks).expect("block count");
            let rhs = p.act(&bp, &p.compose(f, &reordered)?)?;
            Ok::<_, OperadError>((lhs, rhs))
        })();
        self.law(4).record(matches!(&result, Ok((l, r)) if l == r), || {
            format!("f = {f}, σ = {s}, g = {}: {}", show(gs), sides(&result))
        });
    }

    fn acted_inputs(&mut self, f: &P::Elem, gs: &[P::Elem], taus: &[Permutation]) {
        let p = self.p;
        let result = (|| {
            let acted = gs
                .iter()
                .zip(taus)
                .map(|(g, t)| p.act(t, g))
                .collect::<Result<Vec<_>, _>>()?;
            let lhs = p.compose(f, &acted)?;
            let rhs = p.act(&Permutation::direct_sum(taus), &p.compose(f, gs)?)?;
            Ok::<_, OperadError>((lhs, rhs))
        })();
        self.law(5).record(matches!(&result, Ok((l, r)) if l == r), || {
            let ts: Vec<String> = taus.iter().map(|t| t.to_string()).collect();
            format!("f = {f}, g = {}, τ = ({}): {}", show(gs), ts.join(", "), sides(&result))
        });
    }
}

/// Checks the symmetric-operad axioms of `p` within `budget`.
pub fn check_operad_axioms<P: EffectiveOperad>(p: &P, budget: &Budget) -> CheckReport {
    let mut ck = AxiomChecker {
        p,
        outcomes: OPERAD_LAWS
            .iter()
            .map(|l| LawOutcome {
                law: l.to_string(),
                cases: 0,
                counterexample: None,
            })
            .collect(),
    };
    let cap = budget.arity_cap;
    let carriers = carriers_upto(p, cap);

    for (n, fs) in carriers.iter().enumerate() {
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        let g_tuples = tuples(&carriers, n, cap);
        for f in fs {
            ck.units(f);
            for s in &perms {
                for t in &perms {
                    ck.left_action(s, t, f);
                }
            }
            for gs in &g_tuples {
                let k_total: usize = arities(p, gs).iter().sum();
                for hs in tuples(&carriers, k_total, cap) {
                    ck.associativity(f, gs, &hs);
                }
                for s in &perms {
                    ck.permuted_inputs(f, s, gs);
                }
                let tau_choices: Vec<Vec<Permutation>> =
                    gs.iter().map(|g| Permutation::all(p.arity(g)).collect()).collect();
                for taus in cartesian(&tau_choices) {
                    ck.acted_inputs(f, gs, &taus);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let rcap = budget.random_arity_cap;
    for _ in 0..budget.random_samples {
        let n = rng.gen_range(0..=rcap);
        let Some(f) = p.sample(n, &mut rng) else { continue };
        let Some(gs) = random_elems(p, &random_arities(&mut rng, n, rcap), &mut rng) else {
            continue;
        };
        let k_total: usize = arities(p, &gs).iter().sum();
        let spare = rcap - k_total.min(rcap);
        let Some(hs) = random_elems(p, &random_arities(&mut rng, k_total, k_total + spare), &mut rng)
        else {
            continue;
        };
        let s = random_perm(&mut rng, n);
        let t = random_perm(&mut rng, n);
        let taus: Vec<Permutation> = gs.iter().map(|g| random_perm(&mut rng, p.arity(g))).collect();
        ck.units(&f);
        ck.left_action(&s, &t, &f);
        ck.associativity(&f, &gs, &hs);
        ck.permuted_inputs(&f, &s, &gs);
        ck.acted_inputs(&f, &gs, &taus);
    }

    CheckReport {
        subject: format!("operad axioms for {}", p.name()),
        laws: ck.outcomes,
    }
}

fn random_elems<P: EffectiveOperad>(p: &P, arities: &[usize], rng: &mut ChaCha8Rng) -> Option<Vec<P::Elem>> {
    arities.iter().map(|&k| p.sample(k, rng)).collect()
}

pub(crate) fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffled identity")
}

pub(crate) fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    choices.iter().fold(vec![Vec::new()], |acc, options| {
        acc.into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// An arity-wise map between effective operads, checked rather than assumed
/// to be a morphism.
pub struct OperadMorphism<'a, S: EffectiveOperad, T: EffectiveOperad> {
    pub source: &'a S,
    pub target: &'a T,
    map: Box<dyn Fn(&S::Elem) -> T::Elem + 'a>,
}

impl<'a, S: EffectiveOperad, T: EffectiveOperad> OperadMorphism<'a, S, T> {
    pub fn new(source: &'a S, target: &'a T, map: impl Fn(&S::Elem) -> T::Elem + 'a) -> Self {
        OperadMorphism {
            source,
            target,
            map: Box::new(map),
        }
    }

    pub fn apply(&self, p: &S::Elem) -> T::Elem {
        (self.map)(p)
    }
}

/// The unique map into the terminal operad.
pub fn to_terminal<'a, S: EffectiveOperad>(source: &'a S) -> OperadMorphism<'a, S, TerminalOperad> {
    const T: TerminalOperad = TerminalOperad;
    OperadMorphism::new(source, &T, move |p| Star(source.arity(p)))
}

/// Checks unit preservation, arity preservation, the composition square and
/// the action square.
pub fn check_morphism<S: EffectiveOperad, T: EffectiveOperad>(
    m: &OperadMorphism<'_, S, T>,
    budget: &Budget,
) -> CheckReport {
    let (src, tgt) = (m.source, m.target);
    let mut report = CheckReport::new(format!("morphism {} → {}", src.name(), tgt.name()));

    let image_unit = m.apply(&src.unit());
    report
        .track("unit")
        .record(image_unit == tgt.unit(), || format!("φ(1) = {image_unit}, expected {}", tgt.unit()));

    let cap = budget.arity_cap;
    let carriers = carriers_upto(src, cap);
    let mut outcomes = [
        LawOutcome { law: "arity".into(), cases: 0, counterexample: None },
        LawOutcome { law: "composition square".into(), cases: 0, counterexample: None },
        LawOutcome { law: "action square".into(), cases: 0, counterexample: None },
    ];

    let arity_ok = |outcomes: &mut [LawOutcome; 3], p: &S::Elem| {
        let q = m.apply(p);
        outcomes[0].record(tgt.arity(&q) == src.arity(p), || format!("φ({p}) = {q}"));
    };
    let comp = |outcomes: &mut [LawOutcome; 3], f: &S::Elem, gs: &[S::Elem]| {
        let result = (|| {
            let lhs = m.apply(&src.compose(f, gs)?);
            let images: Vec<T::Elem> = gs.iter().map(|g| m.apply(g)).collect();
            let rhs = tgt.compose(&m.apply(f), &images)?;
            Ok::<_, OperadError>((lhs, rhs))
        })();
        outcomes[1].record(matches!(&result, Ok((l, r)) if l == r), || {
            format!("f = {f}, g = {}: {}", show(gs), sides(&result))
        });
    };
    let action = |outcomes: &mut [LawOutcome; 3], s: &Permutation, p: &S::Elem| {
        let result = (|| {
            let lhs = m.apply(&src.act(s, p)?);
            let rhs = tgt.act(s, &m.apply(p))?;
            Ok::<_, OperadError>((lhs, rhs))
        })();
        outcomes[2].record(matches!(&result, Ok((l, r)) if l == r), || {
            format!("σ = {s}, p = {p}: {}", sides(&result))
        });
    };

    for (n, fs) in carriers.iter().enumerate() {
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        let g_tuples = tuples(&carriers, n, cap);
        for f in fs {
            arity_ok(&mut outcomes, f);
            for s in &perms {
                action(&mut outcomes, s, f);
            }
            for gs in &g_tuples {
                comp(&mut outcomes, f, gs);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let rcap = budget.random_arity_cap;
    for _ in 0..budget.random_samples {
        let n = rng.gen_range(0..=rcap);
        let Some(f) = src.sample(n, &mut rng) else { continue };
        let Some(gs) = random_elems(src, &random_arities(&mut rng, n, rcap), &mut rng) else {
            continue;
        };
        let s = random_perm(&mut rng, n);
        arity_ok(&mut outcomes, &f);
        action(&mut outcomes, &s, &f);
        comp(&mut outcomes, &f, &gs);
    }

    report.laws.extend(outcomes);
    report
}

/// A finite algebra `h_n : P_n × A^n → A` over `A = {0..size}`.
pub struct FiniteAlgebra<'a, P: EffectiveOperad> {
    pub operad: &'a P,
    end: EndOperad,
    action: Box<dyn Fn(&P::Elem, &[usize]) -> usize + 'a>,
}

impl<'a, P: EffectiveOperad> FiniteAlgebra<'a, P> {
    pub fn new(operad: &'a P, size: usize, action: impl Fn(&P::Elem, &[usize]) -> usize + 'a) -> Self {
        FiniteAlgebra {
            operad,
            end: end_operad(size, 0),
            action: Box::new(action),
        }
    }

    pub fn size(&self) -> usize {
        self.end.size
    }

    pub fn act(&self, p: &P::Elem, args: &[usize]) -> usize {
        (self.action)(p, args)
    }

    pub fn end_operad(&self) -> &EndOperad {
        &self.end
    }

    /// The operation `p̂ : A^n → A` as a table.
    pub fn operation(&self, p: &P::Elem) -> FnTable {
        FnTable::tabulate(self.end.size, self.operad.arity(p), |args| self.act(p, args))
    }
}

/// Views an algebra as the morphism `P → End(A)`; it is an algebra exactly
/// when this passes [`check_morphism`].
pub fn algebra_as_morphism<'a, P: EffectiveOperad>(
    alg: &'a FiniteAlgebra<'a, P>,
) -> OperadMorphism<'a, P, EndOperad> {
    OperadMorphism::new(alg.operad, &alg.end, move |p| alg.operation(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor2() -> FnTable {
        FnTable::tabulate(2, 2, |a| a[0] ^ a[1])
    }

    #[test]
    fn terminal_values() {
        let t = terminal_operad();
        assert_eq!(t.compose(&Star(2), &[Star(0), Star(3)]).unwrap(), Star(3));
        assert_eq!(t.act(&"[2,1]".parse().unwrap(), &Star(2)).unwrap(), Star(2));
        assert_eq!(t.carrier(7).unwrap().len(), 1);
        assert!(t.compose(&Star(2), &[Star(0)]).is_err());
    }

    #[test]
    fn terminal_passes_axioms() {
        let report = check_operad_axioms(&terminal_operad(), &Budget::exhaustive(4).with_random(200, 8, 3));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn end_carrier_sizes() {
        let e = end_operad(2, 3);
        assert_eq!(e.carrier(2).unwrap().len(), 16);
        assert_eq!(e.carrier(0).unwrap().len(), 2);
        assert_eq!(e.carrier(3).unwrap().len(), 256);
        assert!(e.carrier(4).is_none());
        // empty set: no constants, one empty function in each positive arity
        let empty = end_operad(0, 3);
        assert!(empty.carrier(0).unwrap().is_empty());
        assert_eq!(empty.carrier(2).unwrap().len(), 1);
    }

    #[test]
    fn end_unit_laws_small() {
        let e = end_operad(2, 2);
        for n in 0..=2 {
            for f in e.carrier(n).unwrap() {
                assert_eq!(e.compose(&e.unit(), &[f.clone()]).unwrap(), f);
            }
        }
    }

    #[test]
    fn xor_is_swap_invariant() {
        let e = end_operad(2, 2);
        let swapped = e.act(&"[2,1]".parse().unwrap(), &xor2()).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(swapped.eval(2, &[a, b]), a ^ b);
            }
        }
        assert_eq!(swapped, xor2());
    }

    #[test]
    fn end_action_direction_is_left() {
        // (σ·f)(a) = f(a_σ(1), …) satisfies (στ)·f = σ·(τ·f) on End({0,1})
        let e = end_operad(2, 3);
        let f = FnTable::tabulate(2, 3, |a| (a[0] & (1 - a[1])) | (a[2] & a[1]));
        for s in Permutation::all(3) {
            for t in Permutation::all(3) {
                let st = e.act(&s.compose(&t).unwrap(), &f).unwrap();
                let s_t = e.act(&s, &e.act(&t, &f).unwrap()).unwrap();
                assert_eq!(st, s_t, "σ={s} τ={t}");
            }
        }
        let first = FnTable::tabulate(2, 2, |a| a[0]);
        let moved = e.act(&"[2,1]".parse().unwrap(), &first).unwrap();
        assert_eq!(moved, FnTable::tabulate(2, 2, |a| a[1]));
    }

    #[test]
    fn end_passes_axioms_exhaustively_at_arity_two() {
        let report = check_operad_axioms(&end_operad(2, 2), &Budget::exhaustive(2));
        assert!(report.passed(), "{report}");
        assert!(report.laws.iter().all(|l| l.cases > 0));
    }

    #[test]
    fn end_left_action_exhaustive_at_arity_three() {
        let e = end_operad(2, 3);
        for f in e.carrier(3).unwrap() {
            assert_eq!(e.act(&Permutation::identity(3), &f).unwrap(), f);
            for s in Permutation::all(3) {
                for t in Permutation::all(3) {
                    assert_eq!(
                        e.act(&s.compose(&t).unwrap(), &f).unwrap(),
                        e.act(&s, &e.act(&t, &f).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn end_of_three_points_random() {
        let report = check_operad_axioms(&end_operad(3, 1), &Budget::exhaustive(1).with_random(300, 4, 11));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn identity_and_terminal_morphisms_pass() {
        let t = terminal_operad();
        let id = OperadMorphism::new(&t, &t, |p: &Star| *p);
        assert!(check_morphism(&id, &Budget::exhaustive(4)).passed());

        let e = end_operad(2, 2);
        let bang = to_terminal(&e);
        let report = check_morphism(&bang, &Budget::exhaustive(2).with_random(50, 4, 1));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn morphism_missing_unit_fails() {
        let e = end_operad(2, 2);
        let t = terminal_operad();
        let unit = e.unit();
        let broken = OperadMorphism::new(&e, &t, move |p: &FnTable| {
            if *p == unit {
                Star(0)
            } else {
                Star(p.arity())
            }
        });
        let report = check_morphism(&broken, &Budget::exhaustive(2));
        assert!(!report.law("unit").unwrap().passed());
    }

    #[test]
    fn xor_algebra_of_terminal_is_an_algebra() {
        let t = terminal_operad();
        let alg = FiniteAlgebra::new(&t, 2, |_, args: &[usize]| args.iter().fold(0, |x, a| x ^ a));
        let report = check_morphism(&algebra_as_morphism(&alg), &Budget::exhaustive(3));
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn one_point_algebra_passes() {
        let t = terminal_operad();
        let alg = FiniteAlgebra::new(&t, 1, |_, _| 0);
        assert!(check_morphism(&algebra_as_morphism(&alg), &Budget::exhaustive(3)).passed());
    }

    #[test]
    fn and_with_zero_unit_is_not_an_algebra() {
        let t = terminal_operad();
        let alg = FiniteAlgebra::new(&t, 2, |s: &Star, args: &[usize]| {
            if s.0 == 0 {
                0
            } else {
                args.iter().fold(1, |x, a| x & a)
            }
        });
        let report = check_morphism(&algebra_as_morphism(&alg), &Budget::exhaustive(2));
        let failure = report.law("composition square").unwrap();
        assert!(!failure.passed());
        // AND(0, x) is constant, not the identity
        assert_eq!(alg.act(&Star(2), &[0, 1]), 0);
    }

    #[test]
    fn table_json_round_trip() {
        let x = xor2();
        let json = x.to_json(2);
        assert_eq!(json, serde_json::json!([[0, 1], [1, 0]]));
        assert_eq!(FnTable::from_json(2, 2, &json).unwrap(), x);
        let c = FnTable::new(2, 0, vec![1]).unwrap();
        assert_eq!(c.to_json(2), serde_json::json!(1));
        assert!(FnTable::from_json(2, 2, &serde_json::json!([[0, 1]])).is_err());
    }
}
