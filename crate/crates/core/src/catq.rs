//! The categorification `Q` of an operad `P` along a signature `(Φ, φ)`.
//!
//! Objects of `Q_n` are linear terms of arity `n` over `Φ`; there is exactly
//! one arrow `t1 → t2` when `φ̄(t1) = φ̄(t2)` and none otherwise. `Q` is never
//! materialized: hom queries evaluate on demand.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::freeop::{act_term, compose_terms, enumerate_terms, random_term, Symbol, Term, TermError};
use crate::opcore::{EffectiveOperad, OperadError};
use crate::perm::Permutation;
use crate::report::{CheckReport, LawOutcome};
use crate::signature::{choose_section, unbiased_signature, SectionChoice, Signature, SignatureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatqError {
    #[error("not comparable: {left} has arity {left_arity}, {right} has arity {right_arity}")]
    NotComparable {
        left: String,
        left_arity: usize,
        right: String,
        right_arity: usize,
    },
    #[error("{symbol} maps to an element of arity {arity}, above the cap {cap} of Wk(P)")]
    CapExceeded { symbol: String, arity: usize, cap: usize },
    #[error("no generator or section term for {0}")]
    Uncovered(String),
    #[error("fork condition fails at {object}: {alpha} and {beta} evaluate differently")]
    ForkViolated { object: String, alpha: String, beta: String },
    #[error("the target operads differ at arity {arity}: {witness}")]
    Incomparable { arity: usize, witness: String },
    #[error("arrows do not compose: {0}")]
    NotComposable(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Operad(#[from] OperadError),
}

/// The unique arrow between two terms with equal evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalArrow {
    source: Term,
    target: Term,
}

impl CanonicalArrow {
    pub fn identity(t: Term) -> Self {
        CanonicalArrow {
            source: t.clone(),
            target: t,
        }
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn target(&self) -> &Term {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }

    pub fn arity(&self) -> usize {
        self.source.arity()
    }

    pub fn inverse(&self) -> Self {
        CanonicalArrow {
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &CanonicalArrow) -> Result<Self, CatqError> {
        if self.target != next.source {
            return Err(CatqError::NotComposable(format!("{self} then {next}")));
        }
        Ok(CanonicalArrow {
            source: self.source.clone(),
            target: next.target.clone(),
        })
    }
}

impl fmt::Display for CanonicalArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}", self.source, self.target)
    }
}

/// `Q` as the pair (signature, oracle).
#[derive(Debug, Clone)]
pub struct CategorifiedOperad<P: EffectiveOperad> {
    sig: Signature<P>,
    generator_of: BTreeMap<P::Elem, Symbol>,
}

pub fn categorify<P: EffectiveOperad>(sig: Signature<P>) -> CategorifiedOperad<P> {
    let mut generator_of = BTreeMap::new();
    for (s, p) in sig.assignment() {
        generator_of.entry(p.clone()).or_insert_with(|| s.clone());
    }
    CategorifiedOperad { sig, generator_of }
}

/// `Wk(P)`: the categorification along the unbiased signature.
pub fn build_wk<P: EffectiveOperad>(p: P, arity_cap: usize) -> Result<CategorifiedOperad<P>, CatqError> {
    Ok(categorify(unbiased_signature(p, arity_cap)?))
}

impl<P: EffectiveOperad> CategorifiedOperad<P> {
    pub fn signature(&self) -> &Signature<P> {
        &self.sig
    }

    pub fn oracle(&self) -> &P {
        self.sig.target()
    }

    pub fn eval(&self, t: &Term) -> Result<P::Elem, CatqError> {
        Ok(self.sig.eval(t)?)
    }

    /// Objects of `Q_n` with at most `max_nodes` nodes.
    pub fn objects(&self, n: usize, max_nodes: usize) -> Vec<Term> {
        enumerate_terms(self.sig.symbols(), n, max_nodes)
    }

    /// The first generator assigned to `p`, if any.
    pub fn generator_for(&self, p: &P::Elem) -> Option<&Symbol> {
        self.generator_of.get(p)
    }

    pub fn hom(&self, t1: &Term, t2: &Term) -> Result<Option<CanonicalArrow>, CatqError> {
        let (n1, n2) = (t1.check_linear()?, t2.check_linear()?);
        if n1 != n2 {
            return Err(CatqError::NotComparable {
                left: t1.to_string(),
                left_arity: n1,
                right: t2.to_string(),
                right_arity: n2,
            });
        }
        Ok((self.eval(t1)? == self.eval(t2)?).then(|| CanonicalArrow {
            source: t1.clone(),
            target: t2.clone(),
        }))
    }

    pub fn hom_exists(&self, t1: &Term, t2: &Term) -> Result<bool, CatqError> {
        Ok(self.hom(t1, t2)?.is_some())
    }

    /// Operadic composition of arrows, `f ∘ (g_1, …, g_n)`.
    pub fn compose_arrows(&self, f: &CanonicalArrow, gs: &[CanonicalArrow]) -> Result<CanonicalArrow, CatqError> {
        let sources: Vec<Term> = gs.iter().map(|g| g.source.clone()).collect();
        let targets: Vec<Term> = gs.iter().map(|g| g.target.clone()).collect();
        let source = compose_terms(&f.source, &sources)?;
        let target = compose_terms(&f.target, &targets)?;
        self.hom(&source, &target)?
            .ok_or_else(|| CatqError::NotComposable(format!("{source} and {target} evaluate differently")))
    }

    pub fn act_arrow(&self, sigma: &Permutation, a: &CanonicalArrow) -> Result<CanonicalArrow, CatqError> {
        Ok(CanonicalArrow {
            source: act_term(sigma, &a.source)?,
            target: act_term(sigma, &a.target)?,
        })
    }
}

/// `χ`: relabels every node `s` by the unbiased generator of `φ(s)`.
pub fn chi<P: EffectiveOperad>(
    q: &CategorifiedOperad<P>,
    wk: &CategorifiedOperad<P>,
    t: &Term,
) -> Result<Term, CatqError> {
    let cap = wk.sig.symbols().iter().map(|s| s.arity).max();
    t.map_symbols(&|s: &Symbol| {
        let p = q
            .sig
            .image(s)
            .ok_or_else(|| TermError::Unassigned(s.name.to_string()))?;
        match wk.generator_for(p) {
            Some(g) => Ok(g.clone()),
            None => Err(match cap {
                Some(cap) if s.arity > cap => CatqError::CapExceeded {
                    symbol: s.to_string(),
                    arity: s.arity,
                    cap,
                },
                _ => CatqError::Uncovered(p.to_string()),
            }),
        }
    })
}

/// `ω`: replaces every generator for `p` by `ψ(p)` and grafts.
pub fn omega<P: EffectiveOperad>(
    wk: &CategorifiedOperad<P>,
    psi: &SectionChoice<P>,
    t: &Term,
) -> Result<Term, CatqError> {
    t.check_linear()?;
    omega_linear(wk, psi, t)
}

fn omega_linear<P: EffectiveOperad>(
    wk: &CategorifiedOperad<P>,
    psi: &SectionChoice<P>,
    t: &Term,
) -> Result<Term, CatqError> {
    let Some((g, children, pi)) = t.decompose() else {
        return Ok(t.clone());
    };
    let p = wk
        .sig
        .image(g)
        .ok_or_else(|| TermError::Unassigned(g.name.to_string()))?;
    let head = psi.get(p).ok_or_else(|| CatqError::Uncovered(p.to_string()))?;
    let inner = children
        .iter()
        .map(|c| omega_linear(wk, psi, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(act_term(&pi, &compose_terms(head, &inner)?)?)
}

/// Budgets for the pseudo-inverse and transformation checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CatBudget {
    pub arity_cap: usize,
    pub depth_cap: usize,
    /// Extra random objects, up to `arity_cap + 2` leaves.
    pub random_samples: usize,
    /// Composition instances are exhaustive up to this many nodes in total.
    pub exhaustive_nodes: usize,
    pub seed: u64,
}

impl CatBudget {
    pub fn new(arity_cap: usize, depth_cap: usize) -> Self {
        CatBudget {
            arity_cap,
            depth_cap,
            random_samples: 200,
            exhaustive_nodes: depth_cap.min(2),
            seed: 0,
        }
    }
}

/// One component `η_p : α(p) → β(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentArrow {
    pub source: Term,
    pub target: Term,
}

impl From<&CanonicalArrow> for ComponentArrow {
    fn from(a: &CanonicalArrow) -> Self {
        ComponentArrow {
            source: a.source.clone(),
            target: a.target.clone(),
        }
    }
}

/// A transformation `η : α ⇒ β` between object maps, given on a finite set
/// of objects.
pub struct TransformationData<'a> {
    alpha: Box<dyn Fn(&Term) -> Result<Term, CatqError> + 'a>,
    beta: Box<dyn Fn(&Term) -> Result<Term, CatqError> + 'a>,
    pub components: BTreeMap<Term, ComponentArrow>,
}

impl<'a> TransformationData<'a> {
    pub fn new(
        alpha: impl Fn(&Term) -> Result<Term, CatqError> + 'a,
        beta: impl Fn(&Term) -> Result<Term, CatqError> + 'a,
        components: BTreeMap<Term, ComponentArrow>,
    ) -> Self {
        TransformationData {
            alpha: Box::new(alpha),
            beta: Box::new(beta),
            components,
        }
    }

    pub fn alpha(&self, t: &Term) -> Result<Term, CatqError> {
        (self.alpha)(t)
    }

    pub fn beta(&self, t: &Term) -> Result<Term, CatqError> {
        (self.beta)(t)
    }

    pub fn component(&self, t: &Term) -> Option<&ComponentArrow> {
        self.components.get(t)
    }
}

/// The fork construction: when `γα = γβ` on every object, the unique arrows
/// `α(p) → β(p)` in `target` assemble into `η : α ≅ β`.
pub fn fork_iso<'a, P: EffectiveOperad>(
    target: &CategorifiedOperad<P>,
    alpha: impl Fn(&Term) -> Result<Term, CatqError> + 'a,
    beta: impl Fn(&Term) -> Result<Term, CatqError> + 'a,
    objects: &[Term],
) -> Result<TransformationData<'a>, CatqError> {
    let mut components = BTreeMap::new();
    for p in objects {
        let (a, b) = (alpha(p)?, beta(p)?);
        match target.hom(&a, &b)? {
            Some(arrow) => {
                components.insert(p.clone(), ComponentArrow::from(&arrow));
            }
            None => {
                return Err(CatqError::ForkViolated {
                    object: p.to_string(),
                    alpha: a.to_string(),
                    beta: b.to_string(),
                })
            }
        }
    }
    Ok(TransformationData::new(alpha, beta, components))
}

/// Identity transformation on the given objects.
pub fn identity_transformation<'a>(objects: &[Term]) -> TransformationData<'a> {
    let components = objects
        .iter()
        .map(|t| {
            (
                t.clone(),
                ComponentArrow {
                    source: t.clone(),
                    target: t.clone(),
                },
            )
        })
        .collect();
    TransformationData::new(|t: &Term| Ok(t.clone()), |t: &Term| Ok(t.clone()), components)
}

pub const TRANSFORMATION_LAWS: [&str; 4] = ["component typing", "composition", "unit", "symmetry"];

/// Checks a transformation with values in `target` on its components:
/// typing, the composition equation, the unit equation at `x1` and the
/// symmetry equation. Arrows in `target` are unique, so two arrows agree
/// exactly when their endpoints do.
pub fn check_transformation<P: EffectiveOperad>(
    target: &CategorifiedOperad<P>,
    eta: &TransformationData<'_>,
    budget: &CatBudget,
) -> CheckReport {
    let mut report = CheckReport::new("transformation");
    let objects: Vec<&Term> = eta.components.keys().collect();

    let typing = report.track(TRANSFORMATION_LAWS[0]);
    for (p, c) in &eta.components {
        let ok = matches!((eta.alpha(p), eta.beta(p)), (Ok(a), Ok(b)) if a == c.source && b == c.target)
            && matches!(target.hom(&c.source, &c.target), Ok(Some(_)));
        typing.record(ok, || format!("η at {p} is {} → {}", c.source, c.target));
    }

    let as_arrow = |c: &ComponentArrow| CanonicalArrow {
        source: c.source.clone(),
        target: c.target.clone(),
    };
    let mut composition = LawOutcome::new(TRANSFORMATION_LAWS[1]);
    let mut check_instance = |f: &Term, gs: &[&Term]| {
        let owned: Vec<Term> = gs.iter().map(|g| (*g).clone()).collect();
        let Ok(fg) = compose_terms(f, &owned) else { return };
        let Some(lhs) = eta.component(&fg) else { return };
        let rhs = (|| {
            let ef = eta.component(f)?;
            let egs: Option<Vec<CanonicalArrow>> = gs.iter().map(|g| eta.component(g).map(as_arrow)).collect();
            Some(CanonicalArrow {
                source: compose_terms(&ef.source, &egs.as_ref()?.iter().map(|a| a.source.clone()).collect::<Vec<_>>()).ok()?,
                target: compose_terms(&ef.target, &egs?.iter().map(|a| a.target.clone()).collect::<Vec<_>>()).ok()?,
            })
        })();
        composition.record(rhs.as_ref() == Some(&as_arrow(lhs)), || {
            let gs: Vec<String> = gs.iter().map(|g| g.to_string()).collect();
            format!(
                "f = {f}, g = ({}): η(f∘g) = {} → {}, η_f∘η_g = {}",
                gs.join(", "),
                lhs.source,
                lhs.target,
                rhs.map_or("undefined".into(), |a| a.to_string())
            )
        });
    };

    let mut by_arity: BTreeMap<usize, Vec<&Term>> = BTreeMap::new();
    for t in &objects {
        by_arity.entry(t.arity()).or_default().push(t);
    }
    let small: BTreeMap<usize, Vec<&Term>> = by_arity
        .iter()
        .map(|(n, ts)| (*n, ts.iter().copied().filter(|t| t.node_count() <= budget.exhaustive_nodes).collect()))
        .collect();
    for f in objects.iter().filter(|t| t.node_count() <= budget.exhaustive_nodes) {
        let mut prefix = Vec::new();
        let spare = budget.exhaustive_nodes - f.node_count();
        for_each_tuple(&small, f.arity(), budget.arity_cap, spare, &mut prefix, &mut |gs| {
            check_instance(f, gs)
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    if !objects.is_empty() {
        for _ in 0..budget.random_samples {
            let f = objects[rng.gen_range(0..objects.len())];
            let mut gs = Vec::with_capacity(f.arity());
            let mut total = 0;
            for _ in 0..f.arity() {
                let g = objects[rng.gen_range(0..objects.len())];
                total += g.arity();
                gs.push(g);
            }
            if total <= budget.arity_cap {
                check_instance(f, &gs);
            }
        }
    }
    report.laws.push(composition);

    let unit = report.track(TRANSFORMATION_LAWS[2]);
    let x1 = Term::Leaf(1);
    match eta.component(&x1) {
        Some(c) => unit.record(c.source == x1 && c.target == x1, || format!("η at x1 is {} → {}", c.source, c.target)),
        None => unit.record(false, || "no component at x1".into()),
    }

    let symmetry = report.track(TRANSFORMATION_LAWS[3]);
    for (p, c) in &eta.components {
        for s in Permutation::all(p.arity()) {
            let Ok(sp) = act_term(&s, p) else { continue };
            let Some(lhs) = eta.component(&sp) else { continue };
            let rhs = (act_term(&s, &c.source), act_term(&s, &c.target));
            symmetry.record(matches!(&rhs, (Ok(a), Ok(b)) if *a == lhs.source && *b == lhs.target), || {
                format!("σ = {s}, p = {p}: η(σ·p) = {} → {}, σ·η_p = {} → {}", lhs.source, lhs.target, term_or_error(&rhs.0), term_or_error(&rhs.1))
            });
        }
    }
    report
}

/// Calls `visit` on every tuple of `len` objects with total arity at most
/// `arity_left` and total node count at most `nodes_left`.
fn for_each_tuple<'t>(
    by_arity: &BTreeMap<usize, Vec<&'t Term>>,
    len: usize,
    arity_left: usize,
    nodes_left: usize,
    prefix: &mut Vec<&'t Term>,
    visit: &mut dyn FnMut(&[&'t Term]),
) {
    if prefix.len() == len {
        visit(prefix);
        return;
    }
    for (&k, ts) in by_arity.range(..=arity_left) {
        for &t in ts {
            let nodes = t.node_count();
            if nodes > nodes_left {
                continue;
            }
            prefix.push(t);
            for_each_tuple(by_arity, len, arity_left - k, nodes_left - nodes, prefix, visit);
            prefix.pop();
        }
    }
}

fn sample_objects(symbols: &[Symbol], budget: &CatBudget, salt: u64) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ salt);
    let mut out = Vec::new();
    for _ in 0..budget.random_samples {
        let n = rng.gen_range(0..=budget.arity_cap + 2);
        if let Some(t) = random_term(symbols, n, budget.depth_cap + 3, &mut rng) {
            out.push(t);
        }
    }
    out
}

fn objects_upto(symbols: &[Symbol], arity_cap: usize, depth_cap: usize) -> Vec<Term> {
    (0..=arity_cap)
        .flat_map(|n| enumerate_terms(symbols, n, depth_cap))
        .collect()
}

fn term_or_error<E: fmt::Display>(r: &Result<Term, E>) -> String {
    match r {
        Ok(t) => t.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn arrow_verdict(r: &Result<bool, CatqError>) -> String {
    match r {
        Ok(true) => "arrow exists".into(),
        Ok(false) => "no arrow".into(),
        Err(e) => format!("error: {e}"),
    }
}

/// Checks that `χ` and `ω` are pseudo-inverse: `ωχ(t) ≅ t` on `Q`,
/// `χω(t) ≅ t` on `Wk(P)`, both as fork-built transformations that satisfy
/// the transformation equations, and that `χ`, `ω` preserve composition and
/// actions up to canonical arrow.
pub fn verify_pseudo_inverse<P: EffectiveOperad>(
    q: &CategorifiedOperad<P>,
    wk: &CategorifiedOperad<P>,
    psi: &SectionChoice<P>,
    budget: &CatBudget,
) -> CheckReport {
    let mut report = CheckReport::new("pseudo-inverse");
    let mut q_objects = objects_upto(q.sig.symbols(), budget.arity_cap, budget.depth_cap);
    let mut wk_objects = objects_upto(wk.sig.symbols(), budget.arity_cap, budget.depth_cap);
    let q_extra = sample_objects(q.sig.symbols(), budget, 1);
    let wk_extra = sample_objects(wk.sig.symbols(), budget, 2);

    let chi_q = |t: &Term| chi(q, wk, t);
    let omega_wk = |t: &Term| omega(wk, psi, t);

    let law = report.track("ωχ ≅ 1 on Q");
    for t in q_objects.iter().chain(&q_extra) {
        let back = chi_q(t).and_then(|c| omega_wk(&c));
        law.record(matches!(&back, Ok(b) if q.hom_exists(b, t) == Ok(true)), || {
            format!("t = {t}, ωχ(t) = {}", term_or_error(&back))
        });
    }
    let law = report.track("χω ≅ 1 on Wk(P)");
    for t in wk_objects.iter().chain(&wk_extra) {
        let back = omega_wk(t).and_then(|o| chi_q(&o));
        law.record(matches!(&back, Ok(b) if wk.hom_exists(b, t) == Ok(true)), || {
            format!("t = {t}, χω(t) = {}", term_or_error(&back))
        });
    }

    preservation(&mut report, "χ", wk, &chi_q, &q_objects, budget);
    preservation(&mut report, "ω", q, &omega_wk, &wk_objects, budget);

    q_objects.extend(q_extra);
    wk_objects.extend(wk_extra);
    let chi_omega = fork_iso(wk, |t: &Term| omega_wk(t).and_then(|o| chi_q(&o)), |t: &Term| Ok(t.clone()), &wk_objects);
    merge_fork(&mut report, "η : χω ⇒ 1", wk, &chi_omega, budget);
    let omega_chi = fork_iso(q, |t: &Term| chi_q(t).and_then(|c| omega_wk(&c)), |t: &Term| Ok(t.clone()), &q_objects);
    merge_fork(&mut report, "η : ωχ ⇒ 1", q, &omega_chi, budget);
    report
}

fn merge_fork<P: EffectiveOperad>(
    report: &mut CheckReport,
    name: &str,
    target: &CategorifiedOperad<P>,
    eta: &Result<TransformationData<'_>, CatqError>,
    budget: &CatBudget,
) {
    match eta {
        Ok(eta) => {
            let mut sub = check_transformation(target, eta, budget);
            sub.subject = name.to_string();
            report.merge(sub);
        }
        Err(e) => report
            .track(&format!("{name}: fork condition"))
            .record(false, || e.to_string()),
    }
}

/// `F(f ∘ g•) ≅ F(f) ∘ F(g•)` and `F(σ·t) ≅ σ·F(t)` for an object map `F`.
fn preservation<P: EffectiveOperad>(
    report: &mut CheckReport,
    name: &str,
    target: &CategorifiedOperad<P>,
    map: &dyn Fn(&Term) -> Result<Term, CatqError>,
    objects: &[Term],
    budget: &CatBudget,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x5eed);
    let law = report.track(&format!("{name} preserves composition"));
    if !objects.is_empty() {
        for _ in 0..budget.random_samples {
            let f = &objects[rng.gen_range(0..objects.len())];
            let gs: Vec<Term> = (0..f.arity())
                .map(|_| objects[rng.gen_range(0..objects.len())].clone())
                .collect();
            let result = (|| {
                let whole = map(&compose_terms(f, &gs)?)?;
                let images = gs.iter().map(map).collect::<Result<Vec<_>, _>>()?;
                let parts = compose_terms(&map(f)?, &images)?;
                target.hom_exists(&whole, &parts)
            })();
            law.record(result == Ok(true), || {
                let gs: Vec<String> = gs.iter().map(|g| g.to_string()).collect();
                format!("f = {f}, g = ({}): {}", gs.join(", "), arrow_verdict(&result))
            });
        }
    }
    let law = report.track(&format!("{name} preserves actions"));
    for t in objects {
        let n = t.arity();
        if n > 4 {
            continue;
        }
        for s in Permutation::all(n) {
            let result = (|| target.hom_exists(&map(&act_term(&s, t)?)?, &act_term(&s, &map(t)?)?))();
            law.record(result == Ok(true), || format!("σ = {s}, t = {t}: {}", arrow_verdict(&result)));
        }
    }
}

/// Levelwise equivalence of two categorifications of the same operad, at
/// budget.
#[derive(Debug, Serialize)]
pub struct EquivalenceReport {
    pub skeletons: CheckReport,
    pub pseudo_inverse: Vec<CheckReport>,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.skeletons.passed() && self.pseudo_inverse.iter().all(CheckReport::passed)
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}",
            if self.equivalent() {
                "equivalent at budget"
            } else {
                "not shown equivalent at budget"
            }
        )?;
        write!(f, "{}", self.skeletons)?;
        for r in &self.pseudo_inverse {
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Compares carriers (an error when they differ), the sets of values hit by
/// enumerated objects, and runs [`verify_pseudo_inverse`] for each side
/// through `Wk(P)`.
pub fn check_equivalence<P: EffectiveOperad + Clone>(
    q1: &CategorifiedOperad<P>,
    q2: &CategorifiedOperad<P>,
    budget: &CatBudget,
) -> Result<EquivalenceReport, CatqError> {
    let (p1, p2) = (q1.oracle(), q2.oracle());
    for n in 0..=budget.arity_cap {
        let c1: BTreeSet<P::Elem> = p1.carrier(n).ok_or(SignatureError::NotEnumerable(n))?.into_iter().collect();
        let c2: BTreeSet<P::Elem> = p2.carrier(n).ok_or(SignatureError::NotEnumerable(n))?.into_iter().collect();
        if let Some(w) = c1.symmetric_difference(&c2).next() {
            let side = if c1.contains(w) { "first" } else { "second" };
            return Err(CatqError::Incomparable {
                arity: n,
                witness: format!("{w} is only in the {side} operad"),
            });
        }
    }

    let mut skeletons = CheckReport::new("skeletons");
    let law = skeletons.track("eval images agree");
    for n in 0..=budget.arity_cap {
        let image = |q: &CategorifiedOperad<P>| -> Result<BTreeSet<P::Elem>, CatqError> {
            q.objects(n, budget.depth_cap).iter().map(|t| q.eval(t)).collect()
        };
        let (i1, i2) = (image(q1)?, image(q2)?);
        law.record(i1 == i2, || {
            let diff: Vec<String> = i1.symmetric_difference(&i2).map(|p| p.to_string()).collect();
            format!("arity {n}: values hit by only one side: {}", diff.join(", "))
        });
    }

    let wk = build_wk(p1.clone(), budget.arity_cap)?;
    let mut pseudo_inverse = Vec::new();
    for (i, q) in [q1, q2].into_iter().enumerate() {
        let mut r = match choose_section(q.signature(), budget.arity_cap, budget.depth_cap) {
            Ok(psi) => verify_pseudo_inverse(q, &wk, &psi, budget),
            Err(e) => {
                let mut r = CheckReport::new("pseudo-inverse");
                r.track("section").record(false, || e.to_string());
                r
            }
        };
        r.subject = format!("Q{} vs Wk(P)", i + 1);
        pseudo_inverse.push(r);
    }
    Ok(EquivalenceReport {
        skeletons,
        pseudo_inverse,
    })
}

/// The factorization `FΦ → Q → P` of `φ̄`: the first leg is the identity on
/// objects, the second is `eval`, full and faithful on every enumerated
/// pair.
pub fn check_factorization<P: EffectiveOperad>(q: &CategorifiedOperad<P>, arity_cap: usize, depth_cap: usize) -> CheckReport {
    let mut report = CheckReport::new("factorization");
    let free = q.sig.free_operad(depth_cap);
    let b = report.track("b bijective on objects");
    for n in 0..=arity_cap {
        let objs = q.objects(n, depth_cap);
        let terms = free.carrier(n).unwrap_or_default();
        b.record(objs == terms, || format!("arity {n}: object sets differ"));
    }
    let mut full = LawOutcome::new("f full");
    let mut faithful = LawOutcome::new("f faithful");
    for n in 0..=arity_cap {
        let objs = q.objects(n, depth_cap);
        let values: Vec<Result<P::Elem, CatqError>> = objs.iter().map(|t| q.eval(t)).collect();
        for (i, t1) in objs.iter().enumerate() {
            for (j, t2) in objs.iter().enumerate() {
                let arrow = q.hom(t1, t2);
                let same = matches!((&values[i], &values[j]), (Ok(a), Ok(b)) if a == b);
                // P is discrete: one arrow between equal values, none otherwise
                full.record(!same || matches!(arrow, Ok(Some(_))), || format!("no lift for {t1} → {t2}"));
                faithful.record(same || matches!(arrow, Ok(None)), || format!("{t1} → {t2} over distinct values"));
            }
        }
    }
    report.laws.push(full);
    report.laws.push(faithful);
    report
}

/// Hom-structure laws of `Q_n` on enumerated objects: arrows are unique,
/// existence is an equivalence relation, every arrow has an inverse, and
/// composition and actions descend to evaluation classes.
pub fn check_hom_structure<P: EffectiveOperad>(q: &CategorifiedOperad<P>, arity_cap: usize, depth_cap: usize) -> CheckReport {
    let mut report = CheckReport::new("hom structure");
    let mut subsingleton = LawOutcome::new("subsingleton");
    let mut equivalence = LawOutcome::new("equivalence relation");
    let mut inverses = LawOutcome::new("inverses");
    for n in 0..=arity_cap {
        let objs = q.objects(n, depth_cap);
        let related: Vec<Vec<bool>> = objs
            .iter()
            .map(|a| objs.iter().map(|b| q.hom_exists(a, b) == Ok(true)).collect())
            .collect();
        // related must coincide with the partition it generates
        let mut class: Vec<usize> = (0..objs.len()).collect();
        fn find(class: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while class[r] != r {
                r = class[r];
            }
            class[i] = r;
            r
        }
        for i in 0..objs.len() {
            for j in 0..objs.len() {
                if related[i][j] {
                    let (a, b) = (find(&mut class, i), find(&mut class, j));
                    class[a] = b;
                }
            }
        }
        for i in 0..objs.len() {
            for j in 0..objs.len() {
                let same = find(&mut class, i) == find(&mut class, j);
                equivalence.record(related[i][j] == same, || {
                    format!("{} ~ {}: hom {}, closure {same}", objs[i], objs[j], related[i][j])
                });
                if let Ok(Some(a)) = q.hom(&objs[i], &objs[j]) {
                    subsingleton.record(a.source() == &objs[i] && a.target() == &objs[j], || a.to_string());
                    let round = a.then(&a.inverse());
                    inverses.record(matches!(&round, Ok(r) if r.is_identity()), || a.to_string());
                }
            }
        }
    }
    report.laws.extend([subsingleton, equivalence, inverses]);
    report
}

/// Groups enumerated objects of `Q_n` by evaluation.
pub fn eval_classes<P: EffectiveOperad>(
    q: &CategorifiedOperad<P>,
    n: usize,
    depth_cap: usize,
) -> Result<Vec<(P::Elem, Vec<Term>)>, CatqError> {
    let mut classes: HashMap<P::Elem, Vec<Term>> = HashMap::new();
    let mut order = Vec::new();
    for t in q.objects(n, depth_cap) {
        let v = q.eval(&t)?;
        if !classes.contains_key(&v) {
            order.push(v.clone());
        }
        classes.entry(v).or_default().push(t);
    }
    Ok(order
        .into_iter()
        .map(|v| {
            let ts = classes.remove(&v).unwrap_or_default();
            (v, ts)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeop::parse_term;
    use crate::opcore::terminal_operad;
    use crate::signature::{and_or_generators, generated_suboperad, standard_comm_signature, ternary_comm_signature, xor_generators};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn std_q() -> CategorifiedOperad<crate::opcore::TerminalOperad> {
        categorify(standard_comm_signature())
    }

    #[test]
    fn hom_examples() {
        let q = std_q();
        assert!(q.hom_exists(&t("dot(x1,x2)"), &t("dot(x2,x1)")).unwrap());
        assert!(matches!(
            q.hom(&t("dot(x1,x2)"), &t("x1")),
            Err(CatqError::NotComparable { left_arity: 2, right_arity: 1, .. })
        ));
        assert_eq!(q.objects(2, 1).len(), 2);

        let (_, xor) = generated_suboperad(2, xor_generators(), 3, 4).unwrap();
        let qx = categorify(xor);
        assert!(qx.hom_exists(&t("dot(dot(x1,x2),x3)"), &t("dot(x1,dot(x2,x3))")).unwrap());
        assert!(qx.hom_exists(&t("dot(x1,e())"), &t("x1")).unwrap());
    }

    #[test]
    fn arrows_compose_and_invert() {
        let q = std_q();
        let a = q.hom(&t("dot(x1,x2)"), &t("dot(x2,x1)")).unwrap().unwrap();
        assert!(a.then(&a.inverse()).unwrap().is_identity());
        assert!(a.then(&a).is_err());
        let unit = CanonicalArrow::identity(t("x1"));
        let e = q.hom(&t("e()"), &t("dot(e(),e())")).unwrap().unwrap();
        let h = q.compose_arrows(&a, &[unit, e]).unwrap();
        assert_eq!(h.source(), &t("dot(x1,e())"));
        assert_eq!(h.target(), &t("dot(dot(e(),e()),x1)"));
        let s: Permutation = "[2,1]".parse().unwrap();
        assert_eq!(q.act_arrow(&s, &a).unwrap(), a.inverse());
    }

    #[test]
    fn wk_examples() {
        let wk = build_wk(terminal_operad(), 3).unwrap();
        let names: Vec<String> = wk.signature().symbols().iter().map(|s| s.name.to_string()).collect();
        assert_eq!(names, ["u0", "u1", "u2", "u3"]);
        let objs = wk.objects(2, 2);
        assert!(objs.contains(&t("u2(x1,x2)")) && objs.contains(&t("u1(u2(x2,x1))")));
        for a in &objs {
            for b in &objs {
                assert!(wk.hom_exists(a, b).unwrap());
            }
        }
        assert!(check_hom_structure(&wk, 2, 2).passed());
    }

    #[test]
    fn chi_and_omega_examples() {
        let q = std_q();
        let wk = build_wk(terminal_operad(), 4).unwrap();
        let psi = choose_section(q.signature(), 4, 3).unwrap();
        assert_eq!(chi(&q, &wk, &t("dot(x1,e())")).unwrap(), t("u2(x1,u0())"));
        assert_eq!(chi(&q, &wk, &t("x1")).unwrap(), t("x1"));
        assert_eq!(omega(&wk, &psi, &t("u2(u0(),x1)")).unwrap(), t("dot(e(),x1)"));
        assert_eq!(omega(&wk, &psi, &t("x1")).unwrap(), t("x1"));
        assert_eq!(omega(&wk, &psi, &t("u1(x1)")).unwrap(), t("x1"));
        // ψ_3(★) = dot(x1,dot(x2,x3)): a leaf sorts before a node
        assert_eq!(psi.get(&crate::opcore::Star(3)), Some(&t("dot(x1,dot(x2,x3))")));
        assert_eq!(omega(&wk, &psi, &t("u3(x3,x1,x2)")).unwrap(), t("dot(x3,dot(x1,x2))"));

        let small = build_wk(terminal_operad(), 2).unwrap();
        let qt = categorify(ternary_comm_signature());
        assert!(matches!(
            chi(&qt, &small, &t("t3(x1,x2,x3)")),
            Err(CatqError::CapExceeded { arity: 3, cap: 2, .. })
        ));
    }

    #[test]
    fn pseudo_inverse_small() {
        let q = std_q();
        let wk = build_wk(terminal_operad(), 3).unwrap();
        let psi = choose_section(q.signature(), 3, 2).unwrap();
        let r = verify_pseudo_inverse(&q, &wk, &psi, &CatBudget::new(3, 2));
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn fork_and_transformations() {
        let q = std_q();
        let objs = objects_upto(q.signature().symbols(), 3, 2);
        let id = identity_transformation(&objs);
        assert!(check_transformation(&q, &id, &CatBudget::new(3, 2)).passed());

        let same = fork_iso(&q, |t: &Term| Ok(t.clone()), |t: &Term| Ok(t.clone()), &objs).unwrap();
        assert!(same.components.values().all(|c| c.source == c.target));

        // β differs from α on one object of the xor operad, where
        // dot(x1,x2) and e() do not agree
        let (_, xor) = generated_suboperad(2, and_or_generators(), 3, 3).unwrap();
        let qa = categorify(xor);
        let objs = objects_upto(qa.signature().symbols(), 2, 1);
        let twisted = |s: &Term| -> Result<Term, CatqError> {
            Ok(if *s == t("and(x1,x2)") { t("or(x1,x2)") } else { s.clone() })
        };
        match fork_iso(&qa, |s: &Term| Ok(s.clone()), twisted, &objs) {
            Err(CatqError::ForkViolated { object, .. }) => assert_eq!(object, "and(x1,x2)"),
            other => panic!("expected a fork violation, got {:?}", other.map(|e| e.components.len())),
        }
    }

    #[test]
    fn mutated_component_is_rejected() {
        let q = categorify(crate::signature::generated_suboperad(2, xor_generators(), 3, 3).unwrap().1);
        let objs = objects_upto(q.signature().symbols(), 2, 2);
        let mut eta = identity_transformation(&objs);
        let victim = t("dot(x1,x2)");
        eta.components.get_mut(&victim).unwrap().target = t("dot(e(),e())");
        let r = check_transformation(&q, &eta, &CatBudget::new(2, 2));
        assert!(!r.passed());
        assert!(r.first_failure().unwrap().counterexample.as_ref().unwrap().contains("dot(x1,x2)"));
    }

    #[test]
    fn equivalence_examples() {
        let q1 = std_q();
        let q2 = categorify(ternary_comm_signature());
        let budget = CatBudget::new(3, 2);
        assert!(check_equivalence(&q1, &q2, &budget).unwrap().equivalent());
        assert!(check_equivalence(&q1, &q1, &budget).unwrap().equivalent());
    }

    #[test]
    fn factorization_small() {
        let r = check_factorization(&std_q(), 3, 2);
        assert!(r.passed(), "{r}");
        let (_, xor) = generated_suboperad(2, xor_generators(), 3, 3).unwrap();
        assert!(check_factorization(&categorify(xor), 3, 2).passed());
    }
}
