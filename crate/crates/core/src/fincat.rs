//! Finite categories, symmetric monoidal structures on them, and the
//! translations between symmetric monoidal structures and algebras for the
//! categorified commutative-monoid operad.
//!
//! Conventions: `compose(g, f)` is `g ∘ f`; `α_{a,b,c} : a⊗(b⊗c) → (a⊗b)⊗c`;
//! `λ_a : I⊗a → a`; `ρ_a : a⊗I → a`; `τ_{a,b} : b⊗a → a⊗b`, so the usual
//! symmetry `γ_{x,y} : x⊗y → y⊗x` is `τ_{y,x}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catq::{categorify, CanonicalArrow, CategorifiedOperad};
use crate::freeop::{act_term, compose_terms, parse_term, Term};
use crate::opcore::TerminalOperad;
use crate::perm::Permutation;
use crate::report::{CheckReport, LawOutcome};
use crate::signature::standard_comm_signature;

pub type Ob = usize;
pub type Ar = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinCatError {
    #[error("invalid category: {0}")]
    Invalid(String),
    #[error("invalid structure: {0}")]
    Shape(String),
    #[error("axioms fail: {0}")]
    Axioms(String),
    #[error("{0} is undefined")]
    Undefined(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CategoryFile {
    objects: Vec<String>,
    /// `[name, source, target]`
    arrows: Vec<(String, Ob, Ob)>,
    identities: Vec<Ar>,
    /// `[g, f, g∘f]`
    compose: Vec<(Ar, Ar, Ar)>,
}

/// A finite category with an explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CategoryFile", into = "CategoryFile")]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<(String, Ob, Ob)>,
    identities: Vec<Ar>,
    table: Vec<Option<Ar>>,
    inverses: Vec<Option<Ar>>,
    outgoing: Vec<Vec<Ar>>,
}

impl FinCategory {
    /// Builds and validates: typing, identity laws, associativity.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<(String, Ob, Ob)>,
        identities: Vec<Ar>,
        compose: Vec<(Ar, Ar, Ar)>,
    ) -> Result<Self, FinCatError> {
        let bad = |m: String| Err(FinCatError::Invalid(m));
        let (n, m) = (objects.len(), arrows.len());
        for (name, s, t) in &arrows {
            if *s >= n || *t >= n {
                return bad(format!("arrow {name} has an endpoint out of range"));
            }
        }
        if identities.len() != n {
            return bad(format!("{} identities for {n} objects", identities.len()));
        }
        for (a, &i) in identities.iter().enumerate() {
            if i >= m || arrows[i].1 != a || arrows[i].2 != a {
                return bad(format!("identity of object {a} is not an endomorphism of it"));
            }
        }
        let mut table = vec![None; m * m];
        for &(g, f, gf) in &compose {
            if g >= m || f >= m || gf >= m {
                return bad(format!("composition entry ({g}, {f}, {gf}) out of range"));
            }
            if arrows[f].2 != arrows[g].1 {
                return bad(format!("{} ∘ {} is not composable", arrows[g].0, arrows[f].0));
            }
            if arrows[gf].1 != arrows[f].1 || arrows[gf].2 != arrows[g].2 {
                return bad(format!("{} ∘ {} = {} has the wrong type", arrows[g].0, arrows[f].0, arrows[gf].0));
            }
            if table[g * m + f].replace(gf).is_some_and(|old| old != gf) {
                return bad(format!("{} ∘ {} is defined twice", arrows[g].0, arrows[f].0));
            }
        }
        let mut outgoing = vec![Vec::new(); n];
        for (i, (_, s, _)) in arrows.iter().enumerate() {
            outgoing[*s].push(i);
        }
        let mut cat = FinCategory {
            objects,
            arrows,
            identities,
            table,
            inverses: Vec::new(),
            outgoing,
        };
        for f in 0..m {
            for &g in &cat.outgoing[cat.arrows[f].2] {
                if cat.compose(g, f).is_none() {
                    return bad(format!("{} ∘ {} is missing", cat.arrows[g].0, cat.arrows[f].0));
                }
            }
            let (s, t) = (cat.arrows[f].1, cat.arrows[f].2);
            if cat.compose(f, cat.identities[s]) != Some(f) || cat.compose(cat.identities[t], f) != Some(f) {
                return bad(format!("identity law fails at {}", cat.arrows[f].0));
            }
        }
        for f in 0..m {
            for &g in &cat.outgoing[cat.arrows[f].2] {
                let gf = cat.table[g * m + f].expect("checked");
                for &h in &cat.outgoing[cat.arrows[g].2] {
                    let l = cat.compose(h, gf);
                    let r = cat.compose(h, g).and_then(|hg| cat.compose(hg, f));
                    if l != r {
                        return bad(format!(
                            "associativity fails at ({}, {}, {})",
                            cat.arrows[h].0, cat.arrows[g].0, cat.arrows[f].0
                        ));
                    }
                }
            }
        }
        cat.inverses = (0..m)
            .map(|f| {
                let (s, t) = (cat.arrows[f].1, cat.arrows[f].2);
                cat.outgoing[t].iter().copied().find(|&g| {
                    cat.arrows[g].2 == s
                        && cat.compose(g, f) == Some(cat.identities[s])
                        && cat.compose(f, g) == Some(cat.identities[t])
                })
            })
            .collect();
        Ok(cat)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, a: Ob) -> &str {
        &self.objects[a]
    }

    pub fn arrow_name(&self, f: Ar) -> &str {
        &self.arrows[f].0
    }

    pub fn source(&self, f: Ar) -> Ob {
        self.arrows[f].1
    }

    pub fn target(&self, f: Ar) -> Ob {
        self.arrows[f].2
    }

    pub fn id(&self, a: Ob) -> Ar {
        self.identities[a]
    }

    pub fn is_identity(&self, f: Ar) -> bool {
        self.identities[self.source(f)] == f
    }

    /// `g ∘ f`, when composable.
    pub fn compose(&self, g: Ar, f: Ar) -> Option<Ar> {
        self.table[g * self.arrows.len() + f]
    }

    /// Composes a path given in order of application: `[f, g, h] ↦ h∘g∘f`.
    pub fn path(&self, arrows: &[Option<Ar>]) -> Option<Ar> {
        let (first, rest) = arrows.split_first()?;
        rest.iter().try_fold((*first)?, |acc, g| self.compose((*g)?, acc))
    }

    pub fn inverse(&self, f: Ar) -> Option<Ar> {
        self.inverses[f]
    }

    pub fn arrows_from(&self, a: Ob) -> &[Ar] {
        &self.outgoing[a]
    }

    pub fn find_arrow(&self, name: &str) -> Option<Ar> {
        self.arrows.iter().position(|(n, _, _)| n == name)
    }

    pub fn find_object(&self, name: &str) -> Option<Ob> {
        self.objects.iter().position(|n| n == name)
    }

    pub fn describe_arrow(&self, f: Ar) -> String {
        let (name, s, t) = &self.arrows[f];
        format!("{name}: {} → {}", self.objects[*s], self.objects[*t])
    }

    /// All object tuples of length `n`.
    pub fn object_tuples(&self, n: usize) -> Vec<Vec<Ob>> {
        product(&vec![(0..self.object_count()).collect(); n])
    }
}

impl TryFrom<CategoryFile> for FinCategory {
    type Error = FinCatError;

    fn try_from(f: CategoryFile) -> Result<Self, Self::Error> {
        FinCategory::new(f.objects, f.arrows, f.identities, f.compose)
    }
}

impl From<FinCategory> for CategoryFile {
    fn from(c: FinCategory) -> Self {
        let m = c.arrows.len();
        let compose = (0..m)
            .flat_map(|g| (0..m).map(move |f| (g, f)))
            .filter_map(|(g, f)| c.table[g * m + f].map(|gf| (g, f, gf)))
            .collect();
        CategoryFile {
            objects: c.objects,
            arrows: c.arrows,
            identities: c.identities,
            compose,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct FunctorFile {
    arity: usize,
    objects: Vec<(Vec<Ob>, Ob)>,
    arrows: Vec<(Vec<Ar>, Ar)>,
}

/// A functor `C^n → C`, possibly partial (for bounded structures).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "FunctorFile", into = "FunctorFile")]
pub struct MultiFunctor {
    pub arity: usize,
    pub objects: BTreeMap<Vec<Ob>, Ob>,
    pub arrows: BTreeMap<Vec<Ar>, Ar>,
}

impl MultiFunctor {
    pub fn ob(&self, args: &[Ob]) -> Option<Ob> {
        self.objects.get(args).copied()
    }

    pub fn ar(&self, args: &[Ar]) -> Option<Ar> {
        self.arrows.get(args).copied()
    }

    /// Tabulates a functor from its action, over every object tuple and
    /// every tuple of arrows out of a tuple where the action is defined.
    pub fn tabulate(
        cat: &FinCategory,
        arity: usize,
        ob: impl Fn(&[Ob]) -> Option<Ob>,
        ar: impl Fn(&[Ar]) -> Option<Ar>,
    ) -> Self {
        let mut objects = BTreeMap::new();
        let mut arrows = BTreeMap::new();
        for args in cat.object_tuples(arity) {
            let Some(v) = ob(&args) else { continue };
            objects.insert(args.clone(), v);
            let outs: Vec<Vec<Ar>> = args.iter().map(|&a| cat.arrows_from(a).to_vec()).collect();
            for fs in product(&outs) {
                if let Some(g) = ar(&fs) {
                    arrows.insert(fs, g);
                }
            }
        }
        MultiFunctor { arity, objects, arrows }
    }
}

fn product<T: Clone>(factors: &[Vec<T>]) -> Vec<Vec<T>> {
    factors.iter().fold(vec![Vec::new()], |acc, f| {
        acc.into_iter()
            .flat_map(|prefix| {
                f.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

impl From<FunctorFile> for MultiFunctor {
    fn from(f: FunctorFile) -> Self {
        MultiFunctor {
            arity: f.arity,
            objects: f.objects.into_iter().collect(),
            arrows: f.arrows.into_iter().collect(),
        }
    }
}

impl From<MultiFunctor> for FunctorFile {
    fn from(f: MultiFunctor) -> Self {
        FunctorFile {
            arity: f.arity,
            objects: f.objects.into_iter().collect(),
            arrows: f.arrows.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct NatTransFile {
    arity: usize,
    components: Vec<(Vec<Ob>, Ar)>,
}

/// A natural transformation between functors `C^n → C`, by components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "NatTransFile", into = "NatTransFile")]
pub struct MultiNatTrans {
    pub arity: usize,
    pub components: BTreeMap<Vec<Ob>, Ar>,
}

impl MultiNatTrans {
    pub fn at(&self, args: &[Ob]) -> Option<Ar> {
        self.components.get(args).copied()
    }
}

impl From<NatTransFile> for MultiNatTrans {
    fn from(f: NatTransFile) -> Self {
        MultiNatTrans {
            arity: f.arity,
            components: f.components.into_iter().collect(),
        }
    }
}

impl From<MultiNatTrans> for NatTransFile {
    fn from(f: MultiNatTrans) -> Self {
        NatTransFile {
            arity: f.arity,
            components: f.components.into_iter().collect(),
        }
    }
}

/// `(C, ⊗, I, α, λ, ρ, τ)`. The tensor may be partial; every check is
/// restricted to instances whose objects are all defined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmcStructure {
    pub name: String,
    pub base: FinCategory,
    pub tensor: MultiFunctor,
    pub unit: Ob,
    pub alpha: MultiNatTrans,
    pub lambda: MultiNatTrans,
    pub rho: MultiNatTrans,
    pub tau: MultiNatTrans,
}

impl SmcStructure {
    /// Checks arities and index ranges.
    pub fn validate_shape(&self) -> Result<(), FinCatError> {
        let bad = |m: &str| Err(FinCatError::Shape(m.to_string()));
        let (n, m) = (self.base.object_count(), self.base.arrow_count());
        if self.tensor.arity != 2 {
            return bad("tensor must have arity 2");
        }
        if self.unit >= n {
            return bad("unit object out of range");
        }
        for (name, t, arity) in [
            ("alpha", &self.alpha, 3),
            ("lambda", &self.lambda, 1),
            ("rho", &self.rho, 1),
            ("tau", &self.tau, 2),
        ] {
            if t.arity != arity {
                return Err(FinCatError::Shape(format!("{name} must have arity {arity}")));
            }
            if t.components.iter().any(|(k, &v)| k.len() != arity || k.iter().any(|&a| a >= n) || v >= m) {
                return Err(FinCatError::Shape(format!("{name} has an ill-formed component")));
            }
        }
        if self.tensor.objects.iter().any(|(k, &v)| k.len() != 2 || k.iter().any(|&a| a >= n) || v >= n)
            || self.tensor.arrows.iter().any(|(k, &v)| k.len() != 2 || k.iter().any(|&f| f >= m) || v >= m)
        {
            return bad("tensor has an ill-formed entry");
        }
        Ok(())
    }

    pub fn from_json(src: &str) -> Result<Self, FinCatError> {
        let s: SmcStructure = serde_json::from_str(src).map_err(|e| FinCatError::Json(e.to_string()))?;
        s.validate_shape()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn t(&self, a: Ob, b: Ob) -> Option<Ob> {
        self.tensor.ob(&[a, b])
    }

    pub fn ta(&self, f: Ar, g: Ar) -> Option<Ar> {
        self.tensor.ar(&[f, g])
    }

    fn ta_opt(&self, f: Option<Ar>, g: Option<Ar>) -> Option<Ar> {
        self.ta(f?, g?)
    }

    fn t_opt(&self, a: Option<Ob>, b: Option<Ob>) -> Option<Ob> {
        self.t(a?, b?)
    }

    pub fn alpha_at(&self, a: Ob, b: Ob, c: Ob) -> Option<Ar> {
        self.alpha.at(&[a, b, c])
    }

    pub fn lambda_at(&self, a: Ob) -> Option<Ar> {
        self.lambda.at(&[a])
    }

    pub fn rho_at(&self, a: Ob) -> Option<Ar> {
        self.rho.at(&[a])
    }

    pub fn tau_at(&self, a: Ob, b: Ob) -> Option<Ar> {
        self.tau.at(&[a, b])
    }

    /// `γ_{x,y} : x⊗y → y⊗x`.
    pub fn gamma_at(&self, x: Ob, y: Ob) -> Option<Ar> {
        self.tau_at(y, x)
    }

    fn ob_name(&self, a: Ob) -> &str {
        self.base.object_name(a)
    }

    fn ar_name(&self, f: Option<Ar>) -> String {
        f.map_or("undefined".into(), |f| self.base.arrow_name(f).to_string())
    }
}

pub const SMC_LAWS: [&str; 9] = [
    "tensor functoriality",
    "component typing",
    "invertibility",
    "naturality",
    "pentagon",
    "triangle",
    "symmetry involution",
    "unit symmetry",
    "hexagon",
];

fn check_functor(cat: &FinCategory, f: &MultiFunctor, law: &mut LawOutcome, label: &str) {
    for (args, &v) in &f.objects {
        let ids: Vec<Ar> = args.iter().map(|&a| cat.id(a)).collect();
        law.record(f.ar(&ids) == Some(cat.id(v)), || format!("{label} does not preserve the identity at {args:?}"));
    }
    for (fs, &h) in &f.arrows {
        let src: Vec<Ob> = fs.iter().map(|&x| cat.source(x)).collect();
        let tgt: Vec<Ob> = fs.iter().map(|&x| cat.target(x)).collect();
        let typed = f.ob(&src) == Some(cat.source(h)) && f.ob(&tgt) == Some(cat.target(h));
        law.record(typed, || format!("{label}{fs:?} = {} has the wrong type", cat.describe_arrow(h)));
        let nexts: Vec<Vec<Ar>> = tgt.iter().map(|&b| cat.arrows_from(b).to_vec()).collect();
        for gs in product(&nexts) {
            let Some(k) = f.ar(&gs) else { continue };
            let composed: Option<Vec<Ar>> = gs.iter().zip(fs).map(|(&g, &x)| cat.compose(g, x)).collect();
            let lhs = composed.and_then(|c| f.ar(&c));
            law.record(lhs.is_some() && lhs == cat.compose(k, h), || {
                format!("{label} does not preserve the composite of {gs:?} after {fs:?}")
            });
        }
    }
}

/// Component typing and naturality of `η : F ⇒ G` where `F`, `G` are given
/// by their object and arrow actions.
fn check_transformation_data(
    cat: &FinCategory,
    eta: &dyn Fn(&[Ob]) -> Option<Ar>,
    src: &dyn Fn(&[Ob]) -> Option<Ob>,
    tgt: &dyn Fn(&[Ob]) -> Option<Ob>,
    src_ar: &dyn Fn(&[Ar]) -> Option<Ar>,
    tgt_ar: &dyn Fn(&[Ar]) -> Option<Ar>,
    arity: usize,
    label: &str,
    typing: &mut LawOutcome,
    inverse: &mut LawOutcome,
    natural: &mut LawOutcome,
) {
    for args in cat.object_tuples(arity) {
        let (Some(s), Some(t)) = (src(&args), tgt(&args)) else { continue };
        let c = eta(&args);
        typing.record(c.is_some_and(|c| cat.source(c) == s && cat.target(c) == t), || {
            format!("{label} at {args:?} is {}", c.map_or("missing".into(), |c| cat.describe_arrow(c)))
        });
        let Some(c) = c else { continue };
        inverse.record(cat.inverse(c).is_some(), || format!("{label} at {args:?} is not invertible"));
        let outs: Vec<Vec<Ar>> = args.iter().map(|&a| cat.arrows_from(a).to_vec()).collect();
        for fs in product(&outs) {
            let (Some(fa), Some(ga)) = (src_ar(&fs), tgt_ar(&fs)) else { continue };
            let targets: Vec<Ob> = fs.iter().map(|&f| cat.target(f)).collect();
            let Some(cb) = eta(&targets) else { continue };
            let lhs = cat.compose(cb, fa);
            let rhs = cat.compose(ga, c);
            natural.record(lhs.is_some() && lhs == rhs, || format!("{label} is not natural at {fs:?}"));
        }
    }
}

/// Checks tensor functoriality, typing, invertibility and naturality of
/// `α, λ, ρ, τ`, and the pentagon, triangle, symmetry involution,
/// `ρ_b = λ_b ∘ γ_{b,I}` and the hexagon, on every object tuple whose
/// objects are defined.
pub fn check_smc_axioms(s: &SmcStructure) -> CheckReport {
    let mut report = CheckReport::new(format!("smc {}", s.name));
    let mut laws: Vec<LawOutcome> = SMC_LAWS.iter().map(|l| LawOutcome::new(*l)).collect();
    if let Err(e) = s.validate_shape() {
        laws[0].record(false, || e.to_string());
        report.laws = laws;
        return report;
    }
    let c = &s.base;
    let i = s.unit;
    check_functor(c, &s.tensor, &mut laws[0], "⊗");

    let [_, typing, inverse, natural, ..] = &mut laws[..] else { unreachable!() };
    let t2 = |a: &[Ob]| s.t(a[0], a[1]);
    let ta2 = |f: &[Ar]| s.ta(f[0], f[1]);
    check_transformation_data(
        c,
        &|a| s.alpha_at(a[0], a[1], a[2]),
        &|a| s.t_opt(Some(a[0]), s.t(a[1], a[2])),
        &|a| s.t_opt(s.t(a[0], a[1]), Some(a[2])),
        &|f| s.ta_opt(Some(f[0]), s.ta(f[1], f[2])),
        &|f| s.ta_opt(s.ta(f[0], f[1]), Some(f[2])),
        3,
        "α",
        typing,
        inverse,
        natural,
    );
    check_transformation_data(
        c,
        &|a| s.lambda_at(a[0]),
        &|a| s.t(i, a[0]),
        &|a| Some(a[0]),
        &|f| s.ta(c.id(i), f[0]),
        &|f| Some(f[0]),
        1,
        "λ",
        typing,
        inverse,
        natural,
    );
    check_transformation_data(
        c,
        &|a| s.rho_at(a[0]),
        &|a| s.t(a[0], i),
        &|a| Some(a[0]),
        &|f| s.ta(f[0], c.id(i)),
        &|f| Some(f[0]),
        1,
        "ρ",
        typing,
        inverse,
        natural,
    );
    check_transformation_data(
        c,
        &|a| s.tau_at(a[0], a[1]),
        &|a| s.t(a[1], a[0]),
        &t2,
        &|f| s.ta(f[1], f[0]),
        &ta2,
        2,
        "τ",
        typing,
        inverse,
        natural,
    );

    let n = c.object_count();
    let name = |a: Ob| s.ob_name(a).to_string();
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    // a⊗(b⊗(c⊗d)) → ((a⊗b)⊗c)⊗d
                    let cd = s.t(cc, d);
                    let bc = s.t(b, cc);
                    let ab = s.t(a, b);
                    let objs = [
                        cd,
                        s.t_opt(Some(b), cd),
                        s.t_opt(Some(a), s.t_opt(Some(b), cd)),
                        ab,
                        s.t_opt(ab, cd),
                        s.t_opt(s.t_opt(ab, Some(cc)), Some(d)),
                        bc,
                        s.t_opt(bc, Some(d)),
                        s.t_opt(Some(a), s.t_opt(bc, Some(d))),
                        s.t_opt(Some(a), bc),
                        s.t_opt(s.t_opt(Some(a), bc), Some(d)),
                        s.t_opt(ab, Some(cc)),
                    ];
                    if objs.iter().any(Option::is_none) {
                        continue;
                    }
                    let lhs = c.path(&[
                        s.alpha_at(a, b, cd.unwrap()),
                        s.alpha_at(ab.unwrap(), cc, d),
                    ]);
                    let rhs = c.path(&[
                        s.ta_opt(Some(c.id(a)), s.alpha_at(b, cc, d)),
                        s.alpha_at(a, bc.unwrap(), d),
                        s.ta_opt(s.alpha_at(a, b, cc), Some(c.id(d))),
                    ]);
                    laws[4].record(lhs.is_some() && lhs == rhs, || {
                        format!(
                            "pentagon at ({}, {}, {}, {}): {} ≠ {}",
                            name(a),
                            name(b),
                            name(cc),
                            name(d),
                            s.ar_name(lhs),
                            s.ar_name(rhs)
                        )
                    });
                }
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            // triangle: (ρ_a ⊗ 1_b) ∘ α_{a,I,b} = 1_a ⊗ λ_b
            let ib = s.t(i, b);
            let objs = [ib, s.t_opt(Some(a), ib), s.t(a, i), s.t(a, b)];
            if objs.iter().all(Option::is_some) {
                let lhs = c.path(&[s.alpha_at(a, i, b), s.ta_opt(s.rho_at(a), Some(c.id(b)))]);
                let rhs = s.ta_opt(Some(c.id(a)), s.lambda_at(b));
                laws[5].record(lhs.is_some() && lhs == rhs, || {
                    format!("triangle at ({}, {}): {} ≠ {}", name(a), name(b), s.ar_name(lhs), s.ar_name(rhs))
                });
            }
            // γ_{b,a} ∘ γ_{a,b} = 1
            if let (Some(ab), Some(_)) = (s.t(a, b), s.t(b, a)) {
                let lhs = c.path(&[s.gamma_at(a, b), s.gamma_at(b, a)]);
                laws[6].record(lhs == Some(c.id(ab)), || {
                    format!("γ_{{{0},{1}}} then γ_{{{1},{0}}} is {2}", name(b), name(a), s.ar_name(lhs))
                });
            }
        }
        // ρ_a = λ_a ∘ γ_{a,I}
        if let (Some(_), Some(_)) = (s.t(a, i), s.t(i, a)) {
            let lhs = s.rho_at(a);
            let rhs = c.path(&[s.gamma_at(a, i), s.lambda_at(a)]);
            laws[7].record(lhs.is_some() && lhs == rhs, || {
                format!("at {}: ρ = {}, λ∘γ = {}", name(a), s.ar_name(lhs), s.ar_name(rhs))
            });
        }
    }

    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                // α_{c,a,b} ∘ γ_{a⊗b,c} ∘ α_{a,b,c} = (γ_{a,c}⊗1_b) ∘ α_{a,c,b} ∘ (1_a⊗γ_{b,c})
                let ab = s.t(a, b);
                let bc = s.t(b, cc);
                let cb = s.t(cc, b);
                let ca = s.t(cc, a);
                let ac = s.t(a, cc);
                let objs = [
                    ab,
                    bc,
                    cb,
                    ca,
                    ac,
                    s.t_opt(Some(a), bc),
                    s.t_opt(ab, Some(cc)),
                    s.t_opt(Some(cc), ab),
                    s.t_opt(ca, Some(b)),
                    s.t_opt(Some(a), cb),
                    s.t_opt(ac, Some(b)),
                ];
                if objs.iter().any(Option::is_none) {
                    continue;
                }
                let lhs = c.path(&[
                    s.alpha_at(a, b, cc),
                    s.gamma_at(ab.unwrap(), cc),
                    s.alpha_at(cc, a, b),
                ]);
                let rhs = c.path(&[
                    s.ta_opt(Some(c.id(a)), s.gamma_at(b, cc)),
                    s.alpha_at(a, cc, b),
                    s.ta_opt(s.gamma_at(a, cc), Some(c.id(b))),
                ]);
                laws[8].record(lhs.is_some() && lhs == rhs, || {
                    format!(
                        "hexagon at ({}, {}, {}): {} ≠ {}",
                        name(a),
                        name(b),
                        name(cc),
                        s.ar_name(lhs),
                        s.ar_name(rhs)
                    )
                });
            }
        }
    }

    report.laws = laws;
    report
}

/// The categorified commutative-monoid operad over the terminal operad.
pub fn standard_q() -> CategorifiedOperad<TerminalOperad> {
    categorify(standard_comm_signature())
}

/// An algebra for the categorified commutative-monoid operad on a finite
/// category: terms act as (partial) functors `C^n → C`, canonical arrows
/// as natural transformations.
pub trait QAlgebra {
    fn base(&self) -> &FinCategory;
    fn object_value(&self, t: &Term, args: &[Ob]) -> Option<Ob>;
    fn arrow_value(&self, t: &Term, args: &[Ar]) -> Option<Ar>;
    /// Component at `args` of the action of `δ`.
    fn component(&self, delta: &CanonicalArrow, args: &[Ob]) -> Option<Ar>;

    fn object_action(&self, t: &Term) -> MultiFunctor {
        MultiFunctor::tabulate(
            self.base(),
            t.arity(),
            |a| self.object_value(t, a),
            |f| self.arrow_value(t, f),
        )
    }

    fn arrow_action(&self, delta: &CanonicalArrow) -> MultiNatTrans {
        let n = delta.arity();
        let components = self
            .base()
            .object_tuples(n)
            .into_iter()
            .filter(|a| self.object_value(delta.source(), a).is_some() && self.object_value(delta.target(), a).is_some())
            .filter_map(|a| self.component(delta, &a).map(|c| (a, c)))
            .collect();
        MultiNatTrans { arity: n, components }
    }
}

/// Order in which adjacent swaps sort a tensor word into label order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortStrategy {
    /// Left-to-right bubble passes.
    Bubble,
    /// Bring the smallest remaining label to the front, then recurse.
    Selection,
}

/// The `S` construction: the algebra whose term actions are generated by
/// `⊗` and `I` and whose arrow actions are canonical maps.
#[derive(Debug, Clone)]
pub struct SAlgebra {
    smc: SmcStructure,
    strategy: SortStrategy,
}

type Word = Vec<(usize, Ob)>;

impl SAlgebra {
    /// Requires `check_smc_axioms` to pass.
    pub fn new(smc: SmcStructure) -> Result<Self, FinCatError> {
        let report = check_smc_axioms(&smc);
        if let Some(f) = report.first_failure() {
            return Err(FinCatError::Axioms(format!(
                "{}: {}",
                f.law,
                f.counterexample.clone().unwrap_or_default()
            )));
        }
        Ok(SAlgebra {
            smc,
            strategy: SortStrategy::Bubble,
        })
    }

    /// Skips the axiom check; canonical maps may then depend on the
    /// rewriting path.
    pub fn new_unchecked(smc: SmcStructure) -> Self {
        SAlgebra {
            smc,
            strategy: SortStrategy::Bubble,
        }
    }

    pub fn with_strategy(mut self, strategy: SortStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn smc(&self) -> &SmcStructure {
        &self.smc
    }

    /// Right-combed tensor `w_1 ⊗ (w_2 ⊗ (… ⊗ w_k))`, `I` when empty.
    fn comb(&self, w: &[(usize, Ob)]) -> Option<Ob> {
        match w {
            [] => Some(self.smc.unit),
            [(_, a)] => Some(*a),
            [(_, a), rest @ ..] => self.smc.t(*a, self.comb(rest)?),
        }
    }

    fn id(&self, a: Ob) -> Ar {
        self.smc.base.id(a)
    }

    /// `1_{w_0} ⊗ (1_{w_1} ⊗ (… ⊗ f))` with `depth` identities in front.
    fn under_prefix(&self, w: &[(usize, Ob)], depth: usize, f: Ar) -> Option<Ar> {
        (0..depth).rev().try_fold(f, |acc, j| self.smc.ta(self.id(w[j].1), acc))
    }

    /// `comb(L) ⊗ comb(R) → comb(L ++ R)`.
    fn concat(&self, l: &[(usize, Ob)], r: &[(usize, Ob)]) -> Option<Ar> {
        let s = &self.smc;
        match (l, r) {
            ([], _) => s.lambda_at(self.comb(r)?),
            (_, []) => s.rho_at(self.comb(l)?),
            ([(_, x)], _) => Some(self.id(s.t(*x, self.comb(r)?)?)),
            ([(_, x), rest @ ..], _) => {
                let inv = s.base.inverse(s.alpha_at(*x, self.comb(rest)?, self.comb(r)?)?)?;
                let tail = s.ta(self.id(*x), self.concat(rest, r)?)?;
                s.base.compose(tail, inv)
            }
        }
    }

    /// Swaps positions `i` and `i + 1` of the word: `comb(w) → comb(w')`.
    fn swap(&self, w: &[(usize, Ob)], i: usize) -> Option<Ar> {
        let s = &self.smc;
        let (x, y) = (w[i].1, w[i + 1].1);
        let inner = if i + 2 == w.len() {
            s.gamma_at(x, y)?
        } else {
            let rest = self.comb(&w[i + 2..])?;
            let a = s.alpha_at(x, y, rest)?;
            let g = s.ta(s.gamma_at(x, y)?, self.id(rest))?;
            let back = s.base.inverse(s.alpha_at(y, x, rest)?)?;
            s.base.path(&[Some(a), Some(g), Some(back)])?
        };
        self.under_prefix(w, i, inner)
    }

    /// Sorts the word by label: `comb(w) → comb(sorted w)`.
    fn sort(&self, mut w: Word) -> Option<Ar> {
        let mut acc = self.id(self.comb(&w)?);
        let step = |w: &mut Word, i: usize, acc: &mut Ar| -> Option<()> {
            let f = self.swap(w, i)?;
            *acc = self.smc.base.compose(f, *acc)?;
            w.swap(i, i + 1);
            Some(())
        };
        match self.strategy {
            SortStrategy::Bubble => {
                for end in (1..w.len()).rev() {
                    for i in 0..end {
                        if w[i].0 > w[i + 1].0 {
                            step(&mut w, i, &mut acc)?;
                        }
                    }
                }
            }
            SortStrategy::Selection => {
                for k in 0..w.len() {
                    let pos = (k..w.len()).min_by_key(|&j| w[j].0)?;
                    for i in (k..pos).rev() {
                        step(&mut w, i, &mut acc)?;
                    }
                }
            }
        }
        Some(acc)
    }

    /// The canonical map `t(args) → a_1 ⊗ (a_2 ⊗ (… ⊗ a_n))`.
    pub fn canonical(&self, t: &Term, args: &[Ob]) -> Option<Ar> {
        self.normalize(t, args).map(|(f, _)| f)
    }

    fn normalize(&self, t: &Term, args: &[Ob]) -> Option<(Ar, Word)> {
        match t {
            Term::Leaf(i) => Some((self.id(args[i - 1]), vec![(*i, args[i - 1])])),
            Term::Node(s, cs) => match (&*s.name, cs.as_slice()) {
                ("e", []) => Some((self.id(self.smc.unit), Vec::new())),
                ("dot", [l, r]) => {
                    let (fl, wl) = self.normalize(l, args)?;
                    let (fr, wr) = self.normalize(r, args)?;
                    let both = self.smc.ta(fl, fr)?;
                    let join = self.concat(&wl, &wr)?;
                    let mut w = wl;
                    w.extend(wr);
                    let sorted = self.sort(w.clone())?;
                    w.sort_unstable();
                    let f = self.smc.base.path(&[Some(both), Some(join), Some(sorted)])?;
                    Some((f, w))
                }
                _ => None,
            },
        }
    }
}

impl QAlgebra for SAlgebra {
    fn base(&self) -> &FinCategory {
        &self.smc.base
    }

    fn object_value(&self, t: &Term, args: &[Ob]) -> Option<Ob> {
        match t {
            Term::Leaf(i) => args.get(i - 1).copied(),
            Term::Node(s, cs) => match (&*s.name, cs.as_slice()) {
                ("e", []) => Some(self.smc.unit),
                ("dot", [l, r]) => self.smc.t(self.object_value(l, args)?, self.object_value(r, args)?),
                _ => None,
            },
        }
    }

    fn arrow_value(&self, t: &Term, args: &[Ar]) -> Option<Ar> {
        match t {
            Term::Leaf(i) => args.get(i - 1).copied(),
            Term::Node(s, cs) => match (&*s.name, cs.as_slice()) {
                ("e", []) => Some(self.id(self.smc.unit)),
                ("dot", [l, r]) => self.smc.ta(self.arrow_value(l, args)?, self.arrow_value(r, args)?),
                _ => None,
            },
        }
    }

    fn component(&self, delta: &CanonicalArrow, args: &[Ob]) -> Option<Ar> {
        let to = self.canonical(delta.source(), args)?;
        let from = self.smc.base.inverse(self.canonical(delta.target(), args)?)?;
        self.smc.base.compose(from, to)
    }
}

pub fn smc_to_qalgebra(s: SmcStructure) -> Result<SAlgebra, FinCatError> {
    SAlgebra::new(s)
}

fn defining_arrow(q: &CategorifiedOperad<TerminalOperad>, source: &str, target: &str) -> CanonicalArrow {
    let (s, t) = (parse_term(source).expect("fixed term"), parse_term(target).expect("fixed term"));
    q.hom(&s, &t).expect("same arity").expect("terminal operad identifies all terms")
}

/// The four defining arrows: `α`, `λ`, `ρ` (target the unit leaf) and `τ`.
pub fn defining_arrows() -> [(&'static str, CanonicalArrow); 4] {
    let q = standard_q();
    [
        ("alpha", defining_arrow(&q, "dot(x1,dot(x2,x3))", "dot(dot(x1,x2),x3)")),
        ("lambda", defining_arrow(&q, "dot(e(),x1)", "x1")),
        ("rho", defining_arrow(&q, "dot(x1,e())", "x1")),
        ("tau", defining_arrow(&q, "dot(x2,x1)", "dot(x1,x2)")),
    ]
}

/// The `R` construction: reads `⊗`, `I`, `α`, `λ`, `ρ`, `τ` off the actions
/// of `dot(x1,x2)`, `e()` and the four defining arrows.
pub fn qalgebra_to_smc(a: &dyn QAlgebra, name: &str) -> Result<SmcStructure, FinCatError> {
    let dot = parse_term("dot(x1,x2)").expect("fixed term");
    let e = parse_term("e()").expect("fixed term");
    let unit = a
        .object_value(&e, &[])
        .ok_or_else(|| FinCatError::Undefined("the action of e()".into()))?;
    let [alpha, lambda, rho, tau] = defining_arrows().map(|(_, d)| a.arrow_action(&d));
    let s = SmcStructure {
        name: name.to_string(),
        base: a.base().clone(),
        tensor: a.object_action(&dot),
        unit,
        alpha,
        lambda,
        rho,
        tau,
    };
    s.validate_shape()?;
    Ok(s)
}

/// `RS = 1`: compares every component.
pub fn roundtrip_rs(s: &SmcStructure) -> Result<CheckReport, FinCatError> {
    let alg = smc_to_qalgebra(s.clone())?;
    let back = qalgebra_to_smc(&alg, &s.name)?;
    let mut report = CheckReport::new(format!("RS on {}", s.name));
    report
        .track("category")
        .record(back.base == s.base, || "underlying categories differ".into());
    compare_maps(report.track("⊗ on objects"), &s.tensor.objects, &back.tensor.objects);
    compare_maps(report.track("⊗ on arrows"), &s.tensor.arrows, &back.tensor.arrows);
    report
        .track("I")
        .record(back.unit == s.unit, || format!("I = {}, recovered {}", s.unit, back.unit));
    for (name, orig, got) in [
        ("α", &s.alpha, &back.alpha),
        ("λ", &s.lambda, &back.lambda),
        ("ρ", &s.rho, &back.rho),
        ("τ", &s.tau, &back.tau),
    ] {
        compare_maps(report.track(name), &orig.components, &got.components);
    }
    Ok(report)
}

fn compare_maps(law: &mut LawOutcome, want: &BTreeMap<Vec<usize>, usize>, got: &BTreeMap<Vec<usize>, usize>) {
    for k in want.keys().chain(got.keys().filter(|k| !want.contains_key(*k))) {
        let (w, g) = (want.get(k), got.get(k));
        law.record(w == g, || format!("at {k:?}: {w:?} vs {g:?}"));
    }
}

/// Terms and arrows on which algebras are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraBudget {
    pub arity_cap: usize,
    pub depth_cap: usize,
    /// Pairs sampled at arity 4 and above; lower arities use every pair.
    pub sampled_pairs: usize,
    pub seed: u64,
}

impl Default for AlgebraBudget {
    fn default() -> Self {
        AlgebraBudget {
            arity_cap: 4,
            depth_cap: 3,
            sampled_pairs: 300,
            seed: 0,
        }
    }
}

fn arrow_sample(budget: &AlgebraBudget) -> Vec<CanonicalArrow> {
    let q = standard_q();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out = Vec::new();
    for n in 0..=budget.arity_cap {
        let objs = q.objects(n, budget.depth_cap);
        let mut pairs: Vec<(usize, usize)> = (0..objs.len()).cartesian_product(0..objs.len()).collect();
        if n >= 4 && pairs.len() > budget.sampled_pairs {
            pairs.shuffle(&mut rng);
            pairs.truncate(budget.sampled_pairs);
        }
        for (i, j) in pairs {
            out.push(q.hom(&objs[i], &objs[j]).expect("same arity").expect("all arrows exist"));
        }
    }
    out
}

/// `SR = 1` on sampled terms and arrows.
pub fn roundtrip_sr(a: &dyn QAlgebra, budget: &AlgebraBudget) -> Result<CheckReport, FinCatError> {
    let r = qalgebra_to_smc(a, "R(A)")?;
    let sr = SAlgebra::new(r)?;
    compare_algebras(a, &sr, budget, "SR")
}

/// Compares two algebras on the same category, termwise and arrowwise.
pub fn compare_algebras(
    a: &dyn QAlgebra,
    b: &dyn QAlgebra,
    budget: &AlgebraBudget,
    subject: &str,
) -> Result<CheckReport, FinCatError> {
    let mut report = CheckReport::new(subject);
    report
        .track("category")
        .record(a.base() == b.base(), || "underlying categories differ".into());
    let q = standard_q();
    let objects = report.track("object actions");
    for n in 0..=budget.arity_cap {
        for t in q.objects(n, budget.depth_cap) {
            let (fa, fb) = (a.object_action(&t), b.object_action(&t));
            objects.record(fa == fb, || format!("actions of {t} differ"));
        }
    }
    let arrows = report.track("arrow actions");
    for d in arrow_sample(budget) {
        let (na, nb) = (a.arrow_action(&d), b.arrow_action(&d));
        arrows.record(na == nb, || format!("actions of {d} differ"));
    }
    Ok(report)
}

/// Checks that an algebra is one: term actions are functors compatible with
/// grafting and the symmetric actions, arrow actions are natural, invertible
/// and compatible with vertical composition, grafting and the symmetric
/// actions.
pub fn check_qalgebra(a: &dyn QAlgebra, budget: &AlgebraBudget) -> CheckReport {
    let c = a.base();
    let q = standard_q();
    let mut report = CheckReport::new("Q-algebra");
    let mut functorial = LawOutcome::new("term actions are functors");
    let mut grafting = LawOutcome::new("grafting on objects");
    let mut sym_obj = LawOutcome::new("symmetric action on objects");
    let mut typing = LawOutcome::new("component typing");
    let mut inverse = LawOutcome::new("invertibility");
    let mut natural = LawOutcome::new("naturality");
    let mut vertical = LawOutcome::new("vertical composition");
    let mut horizontal = LawOutcome::new("grafting on arrows");
    let mut sym_arr = LawOutcome::new("symmetric action on arrows");

    let terms: Vec<Term> = (0..=budget.arity_cap)
        .flat_map(|n| q.objects(n, budget.depth_cap))
        .collect();
    for t in &terms {
        let f = a.object_action(t);
        check_functor(c, &f, &mut functorial, &t.to_string());
        let n = t.arity();
        for s in Permutation::all(n) {
            let st = act_term(&s, t).expect("degree matches");
            for args in c.object_tuples(n) {
                let l = a.object_value(&st, &args);
                let r = a.object_value(t, &s.permute_args(&args));
                sym_obj.record(l == r, || format!("σ = {s}, t = {t} at {args:?}"));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let small: Vec<&Term> = terms.iter().filter(|t| t.node_count() <= 1).collect();
    for f in terms.iter().filter(|t| t.arity() <= 2) {
        for gs in product(&vec![small.clone(); f.arity()]) {
            let gs: Vec<Term> = gs.into_iter().cloned().collect();
            let total: usize = gs.iter().map(Term::arity).sum();
            if total > budget.arity_cap {
                continue;
            }
            let fg = compose_terms(f, &gs).expect("linear");
            for args in c.object_tuples(total) {
                let mut offset = 0;
                let inner: Option<Vec<Ob>> = gs
                    .iter()
                    .map(|g| {
                        let v = a.object_value(g, &args[offset..offset + g.arity()]);
                        offset += g.arity();
                        v
                    })
                    .collect();
                let l = a.object_value(&fg, &args);
                let r = inner.and_then(|inner| a.object_value(f, &inner));
                grafting.record(l == r, || format!("f = {f}, g = {gs:?} at {args:?}"));
            }
        }
    }

    let arrows = arrow_sample(budget);
    for d in &arrows {
        let n = d.arity();
        check_transformation_data(
            c,
            &|x| a.component(d, x),
            &|x| a.object_value(d.source(), x),
            &|x| a.object_value(d.target(), x),
            &|f| a.arrow_value(d.source(), f),
            &|f| a.arrow_value(d.target(), f),
            n,
            &d.to_string(),
            &mut typing,
            &mut inverse,
            &mut natural,
        );
        if n <= 3 {
            for s in Permutation::all(n) {
                let sd = q.act_arrow(&s, d).expect("degree matches");
                for args in c.object_tuples(n) {
                    let l = a.component(&sd, &args);
                    let r = a.component(d, &s.permute_args(&args));
                    sym_arr.record(l == r, || format!("σ = {s}, δ = {d} at {args:?}"));
                }
            }
        }
    }

    // vertical: δ2 ∘ δ1 for random composable pairs
    let by_source: HashMap<&Term, Vec<&CanonicalArrow>> = arrows.iter().into_group_map_by(|d| d.source());
    for d1 in arrows.iter().filter(|d| d.arity() <= 3) {
        let Some(nexts) = by_source.get(d1.target()) else { continue };
        let Some(d2) = nexts.choose(&mut rng) else { continue };
        let d21 = d1.then(d2).expect("composable");
        for args in c.object_tuples(d1.arity()) {
            let Some(whole) = a.component(&d21, &args) else { continue };
            let parts = c.path(&[a.component(d1, &args), a.component(d2, &args)]);
            vertical.record(parts == Some(whole), || format!("{d1} then {d2} at {args:?}"));
        }
    }

    // horizontal: δ ∘ (δ_1, …, δ_n) with arity-2 δ and small δ_i
    let small_arrows: Vec<&CanonicalArrow> = arrows
        .iter()
        .filter(|d| d.source().node_count() <= 1 && d.target().node_count() <= 1)
        .collect();
    let heads: Vec<&CanonicalArrow> = arrows.iter().filter(|d| d.arity() == 2).collect();
    for _ in 0..budget.sampled_pairs.min(200) {
        let (Some(head), Some(g1), Some(g2)) = (
            heads.choose(&mut rng),
            small_arrows.choose(&mut rng),
            small_arrows.choose(&mut rng),
        ) else {
            break;
        };
        let gs = [(*g1).clone(), (*g2).clone()];
        if g1.arity() + g2.arity() > budget.arity_cap {
            continue;
        }
        let whole = q.compose_arrows(head, &gs).expect("arrows exist");
        for args in c.object_tuples(whole.arity()) {
            let Some(w) = a.component(&whole, &args) else { continue };
            let (l, r) = args.split_at(g1.arity());
            let inner_src = [a.object_value(g1.source(), l), a.object_value(g2.source(), r)];
            let inner_tgt = [a.object_value(g1.target(), l), a.object_value(g2.target(), r)];
            let pasted = (|| {
                let tgt: Vec<Ob> = inner_tgt.iter().copied().collect::<Option<_>>()?;
                let _: Vec<Ob> = inner_src.iter().copied().collect::<Option<_>>()?;
                let comps = [a.component(g1, l)?, a.component(g2, r)?];
                let first = a.arrow_value(head.source(), &comps)?;
                c.compose(a.component(head, &tgt)?, first)
            })();
            horizontal.record(pasted == Some(w), || format!("{head} ∘ ({g1}, {g2}) at {args:?}"));
        }
    }

    report.laws.extend([
        functorial, grafting, sym_obj, typing, inverse, natural, vertical, horizontal, sym_arr,
    ]);
    report
}

/// Canonical maps computed along two different rewriting orders agree.
pub fn check_well_defined(s: &SmcStructure, budget: &AlgebraBudget) -> CheckReport {
    let bubble = SAlgebra::new_unchecked(s.clone());
    let selection = SAlgebra::new_unchecked(s.clone()).with_strategy(SortStrategy::Selection);
    let mut report = CheckReport::new(format!("canonical maps on {}", s.name));
    let law = report.track("independent of rewriting order");
    for n in 0..=budget.arity_cap {
        for t in standard_q().objects(n, budget.depth_cap) {
            for args in s.base.object_tuples(n) {
                let (x, y) = (bubble.canonical(&t, &args), selection.canonical(&t, &args));
                law.record(x == y, || {
                    format!("{t} at {args:?}: {} vs {}", s.ar_name(x), s.ar_name(y))
                });
            }
        }
    }
    report
}

fn discrete_names(n: usize) -> (Vec<String>, Vec<(String, Ob, Ob)>) {
    (
        (0..n).map(|i| i.to_string()).collect(),
        (0..n).map(|i| (format!("id{i}"), i, i)).collect(),
    )
}

/// The discrete category on `Z/3` with `⊗` = addition and identity
/// structure maps.
pub fn z3_discrete() -> SmcStructure {
    let (objects, arrows) = discrete_names(3);
    let compose = (0..3).map(|i| (i, i, i)).collect();
    let base = FinCategory::new(objects, arrows, (0..3).collect(), compose).expect("valid");
    let tensor = MultiFunctor {
        arity: 2,
        objects: (0..3).cartesian_product(0..3).map(|(a, b)| (vec![a, b], (a + b) % 3)).collect(),
        arrows: (0..3).cartesian_product(0..3).map(|(a, b)| (vec![a, b], (a + b) % 3)).collect(),
    };
    let ids = |arity: usize, shape: &dyn Fn(&[Ob]) -> Ob| MultiNatTrans {
        arity,
        components: base.object_tuples(arity).into_iter().map(|a| {
            let v = shape(&a);
            (a, v)
        }).collect(),
    };
    SmcStructure {
        name: "z3-discrete".into(),
        alpha: ids(3, &|a| (a[0] + a[1] + a[2]) % 3),
        lambda: ids(1, &|a| a[0]),
        rho: ids(1, &|a| a[0]),
        tau: ids(2, &|a| (a[0] + a[1]) % 3),
        base,
        tensor,
        unit: 0,
    }
}

/// Finite sets of size `0..=cap` and bijections; `⊗` is disjoint union
/// (defined while the size stays within `cap`), strict associativity and
/// unit, `τ_{a,b}` the block swap.
pub fn perm_groupoid(cap: usize) -> SmcStructure {
    let mut arrows = Vec::new();
    let mut index: HashMap<Permutation, Ar> = HashMap::new();
    for n in 0..=cap {
        for p in Permutation::all(n) {
            index.insert(p.clone(), arrows.len());
            arrows.push((format!("{n}:{p}"), n, n));
        }
    }
    let perms: Vec<Permutation> = {
        let mut v: Vec<(Ar, Permutation)> = index.iter().map(|(p, &i)| (i, p.clone())).collect();
        v.sort();
        v.into_iter().map(|(_, p)| p).collect()
    };
    let mut compose = Vec::new();
    for (g, pg) in perms.iter().enumerate() {
        for (f, pf) in perms.iter().enumerate() {
            if let Ok(gf) = pg.compose(pf) {
                compose.push((g, f, index[&gf]));
            }
        }
    }
    let identities = (0..=cap).map(|n| index[&Permutation::identity(n)]).collect();
    let objects = (0..=cap).map(|n| n.to_string()).collect();
    let base = FinCategory::new(objects, arrows, identities, compose).expect("valid");

    let mut tensor = MultiFunctor {
        arity: 2,
        objects: BTreeMap::new(),
        arrows: BTreeMap::new(),
    };
    for a in 0..=cap {
        for b in 0..=cap - a {
            tensor.objects.insert(vec![a, b], a + b);
        }
    }
    for (f, pf) in perms.iter().enumerate() {
        for (g, pg) in perms.iter().enumerate() {
            if pf.degree() + pg.degree() <= cap {
                tensor
                    .arrows
                    .insert(vec![f, g], index[&Permutation::direct_sum(&[pf.clone(), pg.clone()])]);
            }
        }
    }
    let id_at = |n: usize| index[&Permutation::identity(n)];
    let mut alpha = BTreeMap::new();
    let mut tau = BTreeMap::new();
    let mut unitors = BTreeMap::new();
    for a in 0..=cap {
        unitors.insert(vec![a], id_at(a));
        for b in 0..=cap - a {
            let swap = Permutation::from_images(vec![2, 1])
                .expect("valid")
                .block_permutation(&[b, a])
                .expect("two blocks");
            tau.insert(vec![a, b], index[&swap]);
            for c in 0..=cap - a - b {
                alpha.insert(vec![a, b, c], id_at(a + b + c));
            }
        }
    }
    SmcStructure {
        name: format!("perm-groupoid-{cap}"),
        base,
        tensor,
        unit: 0,
        alpha: MultiNatTrans { arity: 3, components: alpha },
        lambda: MultiNatTrans { arity: 1, components: unitors.clone() },
        rho: MultiNatTrans { arity: 1, components: unitors },
        tau: MultiNatTrans { arity: 2, components: tau },
    }
}

/// One object with endomorphisms `Z/2 = {0, c}`, `⊗` = addition, and
/// `τ = c`; satisfies everything but the hexagon and the unit symmetry law.
pub fn z2_hexagon() -> SmcStructure {
    let base = FinCategory::new(
        vec!["*".into()],
        vec![("0".into(), 0, 0), ("c".into(), 0, 0)],
        vec![0],
        vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
    )
    .expect("valid");
    let tensor = MultiFunctor {
        arity: 2,
        objects: BTreeMap::from([(vec![0, 0], 0)]),
        arrows: (0..2).cartesian_product(0..2).map(|(f, g)| (vec![f, g], f ^ g)).collect(),
    };
    let constant = |arity: usize, v: Ar| MultiNatTrans {
        arity,
        components: BTreeMap::from([(vec![0; arity], v)]),
    };
    SmcStructure {
        name: "z2-hexagon".into(),
        base,
        tensor,
        unit: 0,
        alpha: constant(3, 0),
        lambda: constant(1, 0),
        rho: constant(1, 0),
        tau: constant(2, 1),
    }
}

pub const BUILTIN_SMCS: [&str; 3] = ["z3-discrete", "perm-groupoid-4", "z2-hexagon"];

pub fn builtin_smc(name: &str) -> Option<SmcStructure> {
    match name {
        "z3-discrete" => Some(z3_discrete()),
        "z2-hexagon" => Some(z2_hexagon()),
        _ => name
            .strip_prefix("perm-groupoid-")
            .and_then(|n| n.parse().ok())
            .filter(|&n: &usize| n <= 5)
            .map(perm_groupoid),
    }
}

impl fmt::Display for SmcStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} objects, {} arrows, I = {}",
            self.name,
            self.base.object_count(),
            self.base.arrow_count(),
            self.ob_name(self.unit)
        )
    }
}
