//! Signatures `(Φ, φ)` for an effective operad: generators, their images,
//! bounded coverage checks, generated sub-operads and sections of `φ̄`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freeop::{enumerate_terms, enumerate_terms_exact, eval_term, is_identifier, FreeOperad, Symbol, Term, TermError};
use crate::opcore::{
    check_morphism, end_operad, terminal_operad, Budget, EffectiveOperad, EndOperad, FnTable, OperadError,
    OperadMorphism, Star, TerminalOperad,
};
use crate::perm::Permutation;
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol {symbol} has arity {expected} but is assigned an element of arity {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("symbol {0} is declared twice")]
    Duplicate(String),
    #[error("symbol name {0:?} is not an identifier")]
    BadName(String),
    #[error("carrier of arity {0} is not enumerable")]
    NotEnumerable(usize),
    #[error("element {element} of arity {arity} is not covered by terms with at most {depth_cap} nodes")]
    Uncovered { arity: usize, element: String, depth_cap: usize },
    #[error("section term {term} evaluates to {found}, not {expected}")]
    NotASection { term: String, expected: String, found: String },
    #[error("invalid signature file: {0}")]
    Json(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Generators `Φ` with their images `φ(s)` in a target operad.
#[derive(Debug, Clone)]
pub struct Signature<P: EffectiveOperad> {
    symbols: Vec<Symbol>,
    assign: BTreeMap<Symbol, P::Elem>,
    target: P,
}

impl<P: EffectiveOperad> Signature<P> {
    pub fn new(target: P, assign: Vec<(Symbol, P::Elem)>) -> Result<Self, SignatureError> {
        let mut map = BTreeMap::new();
        let mut names = BTreeSet::new();
        for (s, p) in assign {
            if !is_identifier(&s.name) {
                return Err(SignatureError::BadName(s.name.to_string()));
            }
            let found = target.arity(&p);
            if found != s.arity {
                return Err(SignatureError::ArityMismatch {
                    symbol: s.to_string(),
                    expected: s.arity,
                    found,
                });
            }
            if !names.insert(s.name.clone()) {
                return Err(SignatureError::Duplicate(s.name.to_string()));
            }
            map.insert(s, p);
        }
        Ok(Signature {
            symbols: map.keys().cloned().collect(),
            assign: map,
            target,
        })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbols_of_arity(&self, n: usize) -> Vec<&Symbol> {
        self.symbols.iter().filter(|s| s.arity == n).collect()
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| &*s.name == name)
    }

    pub fn image(&self, s: &Symbol) -> Option<&P::Elem> {
        self.assign.get(s)
    }

    pub fn assignment(&self) -> &BTreeMap<Symbol, P::Elem> {
        &self.assign
    }

    pub fn target(&self) -> &P {
        &self.target
    }

    /// `φ̄(t)`.
    pub fn eval(&self, t: &Term) -> Result<P::Elem, TermError> {
        eval_term(&self.target, &self.assign, t)
    }

    /// The free operad on `Φ`, enumerated up to `max_nodes`.
    pub fn free_operad(&self, max_nodes: usize) -> FreeOperad {
        FreeOperad::new(self.symbols.clone(), max_nodes)
    }

    /// Checks that `φ̄ : FΦ → P` is a symmetric operad morphism on a budget.
    pub fn check_eval_morphism(&self, budget: &Budget, max_nodes: usize) -> CheckReport {
        let free = self.free_operad(max_nodes);
        let m = OperadMorphism::new(&free, &self.target, |t: &Term| {
            self.eval(t).expect("terms over Φ evaluate")
        });
        check_morphism(&m, budget)
    }

    /// JSON form: symbols with the index of their image in the target's
    /// carrier listing.
    pub fn to_json(&self) -> Result<serde_json::Value, SignatureError> {
        let mut symbols = Vec::new();
        for (s, p) in &self.assign {
            let carrier = self.target.carrier(s.arity).ok_or(SignatureError::NotEnumerable(s.arity))?;
            let target = carrier.iter().position(|q| q == p).ok_or_else(|| {
                SignatureError::Json(format!("{p} is not in the carrier of arity {}", s.arity))
            })?;
            symbols.push(SymbolEntry {
                name: s.name.to_string(),
                arity: s.arity,
                target: Some(target),
            });
        }
        serde_json::to_value(SignatureFile { symbols }).map_err(|e| SignatureError::Json(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SymbolEntry {
    name: String,
    arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SignatureFile {
    symbols: Vec<SymbolEntry>,
}

/// Reads `{"symbols":[{"name":"e","arity":0,"target":0}, …]}`. `target`
/// indexes the target operad's carrier listing and defaults to 0.
pub fn signature_from_json<P: EffectiveOperad>(target: P, src: &str) -> Result<Signature<P>, SignatureError> {
    let file: SignatureFile = serde_json::from_str(src).map_err(|e| SignatureError::Json(e.to_string()))?;
    let mut assign = Vec::new();
    for entry in file.symbols {
        let carrier = target.carrier(entry.arity).ok_or(SignatureError::NotEnumerable(entry.arity))?;
        let idx = entry.target.unwrap_or(0);
        let p = carrier.get(idx).cloned().ok_or_else(|| {
            SignatureError::Json(format!(
                "{}: target {idx} out of range for a carrier of size {}",
                entry.name,
                carrier.len()
            ))
        })?;
        assign.push((Symbol::new(&entry.name, entry.arity), p));
    }
    Signature::new(target, assign)
}

/// `e/0` and `dot/2` into the terminal operad.
pub fn standard_comm_signature() -> Signature<TerminalOperad> {
    Signature::new(
        terminal_operad(),
        vec![(Symbol::new("e", 0), Star(0)), (Symbol::new("dot", 2), Star(2))],
    )
    .expect("valid")
}

/// The standard signature plus a ternary generator `t3 ↦ ★_3`.
pub fn ternary_comm_signature() -> Signature<TerminalOperad> {
    Signature::new(
        terminal_operad(),
        vec![
            (Symbol::new("e", 0), Star(0)),
            (Symbol::new("dot", 2), Star(2)),
            (Symbol::new("t3", 3), Star(3)),
        ],
    )
    .expect("valid")
}

/// Only `dot/2`; misses arity 0.
pub fn dot_only_signature() -> Signature<TerminalOperad> {
    Signature::new(terminal_operad(), vec![(Symbol::new("dot", 2), Star(2))]).expect("valid")
}

/// Name of the unbiased generator for the `index`-th element of a carrier
/// of size `len` at arity `n`.
pub fn unbiased_name(n: usize, index: usize, len: usize) -> String {
    if len == 1 {
        format!("u{n}")
    } else {
        format!("u{n}_{index}")
    }
}

/// One generator per element of `carrier(n)` for `n ≤ arity_cap`, each
/// assigned to itself.
pub fn unbiased_signature<P: EffectiveOperad>(target: P, arity_cap: usize) -> Result<Signature<P>, SignatureError> {
    let mut assign = Vec::new();
    for n in 0..=arity_cap {
        let carrier = target.carrier(n).ok_or(SignatureError::NotEnumerable(n))?;
        let len = carrier.len();
        for (i, p) in carrier.into_iter().enumerate() {
            assign.push((Symbol::new(&unbiased_name(n, i, len), n), p));
        }
    }
    Signature::new(target, assign)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArityCoverage {
    pub arity: usize,
    pub carrier_size: usize,
    pub covered: usize,
    pub terms: usize,
    /// Uncovered elements, in carrier order.
    pub missing: Vec<String>,
}

/// Coverage of `φ̄` relative to explicit budgets. A gap is not a proof of
/// non-surjectivity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub arity_cap: usize,
    pub depth_cap: usize,
    pub arities: Vec<ArityCoverage>,
}

impl CoverageReport {
    pub fn covered(&self) -> bool {
        self.arities.iter().all(|a| a.missing.is_empty())
    }

    pub fn gaps(&self) -> impl Iterator<Item = &ArityCoverage> {
        self.arities.iter().filter(|a| !a.missing.is_empty())
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.covered() {
            "surjective up to budget"
        } else {
            "not covered at budget"
        };
        writeln!(f, "{verdict} (arity ≤ {}, nodes ≤ {})", self.arity_cap, self.depth_cap)?;
        for a in &self.arities {
            write!(f, "  arity {}: {}/{} covered by {} terms", a.arity, a.covered, a.carrier_size, a.terms)?;
            if !a.missing.is_empty() {
                write!(f, "; missing {}", a.missing.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn check_surjective_up_to<P: EffectiveOperad>(
    sig: &Signature<P>,
    arity_cap: usize,
    depth_cap: usize,
) -> Result<CoverageReport, SignatureError> {
    let mut arities = Vec::new();
    for n in 0..=arity_cap {
        let carrier = sig.target.carrier(n).ok_or(SignatureError::NotEnumerable(n))?;
        let terms = enumerate_terms(&sig.symbols, n, depth_cap);
        let mut images = BTreeSet::new();
        for t in &terms {
            images.insert(sig.eval(t)?);
        }
        let missing: Vec<String> = carrier
            .iter()
            .filter(|p| !images.contains(*p))
            .map(|p| p.to_string())
            .collect();
        arities.push(ArityCoverage {
            arity: n,
            carrier_size: carrier.len(),
            covered: carrier.len() - missing.len(),
            terms: terms.len(),
            missing,
        });
    }
    Ok(CoverageReport {
        arity_cap,
        depth_cap,
        arities,
    })
}

/// A sub-operad of `End(A)` generated by named operations, with carriers
/// saturated by term enumeration up to `depth_cap` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedOperad {
    end: EndOperad,
    gens: Vec<(Symbol, FnTable)>,
    depth_cap: usize,
    carriers: Vec<Vec<FnTable>>,
    stabilized: Vec<bool>,
}

impl GeneratedOperad {
    pub fn size(&self) -> usize {
        self.end.size()
    }

    pub fn generators(&self) -> &[(Symbol, FnTable)] {
        &self.gens
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    /// Whether the last node-count increment added no new element, per arity.
    pub fn stabilized(&self) -> &[bool] {
        &self.stabilized
    }
}

impl EffectiveOperad for GeneratedOperad {
    type Elem = FnTable;

    fn name(&self) -> String {
        let gens: Vec<String> = self.gens.iter().map(|(s, _)| s.to_string()).collect();
        format!("⟨{}⟩ ⊆ End({})", gens.join(", "), self.size())
    }

    fn arity(&self, p: &FnTable) -> usize {
        p.arity()
    }

    fn unit(&self) -> FnTable {
        self.end.unit()
    }

    fn compose(&self, f: &FnTable, gs: &[FnTable]) -> Result<FnTable, OperadError> {
        self.end.compose(f, gs)
    }

    fn act(&self, sigma: &Permutation, p: &FnTable) -> Result<FnTable, OperadError> {
        self.end.act(sigma, p)
    }

    fn carrier(&self, n: usize) -> Option<Vec<FnTable>> {
        self.carriers.get(n).cloned()
    }

    fn arity_cap(&self) -> Option<usize> {
        Some(self.carriers.len() - 1)
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Option<FnTable> {
        let c = self.carriers.get(n)?;
        (!c.is_empty()).then(|| c[rand::Rng::gen_range(rng, 0..c.len())].clone())
    }
}

/// Saturates the operations generated by `gens` on `A = {0..size}` for
/// arities `≤ arity_cap` using terms with at most `depth_cap` nodes, and
/// returns the sub-operad with its generating signature.
pub fn generated_suboperad(
    size: usize,
    gens: Vec<(Symbol, FnTable)>,
    arity_cap: usize,
    depth_cap: usize,
) -> Result<(GeneratedOperad, Signature<GeneratedOperad>), SignatureError> {
    let end = end_operad(size, arity_cap);
    let plain = Signature::new(end.clone(), gens.clone())?;
    let mut carriers = Vec::new();
    let mut stabilized = Vec::new();
    for n in 0..=arity_cap {
        let mut found = BTreeSet::new();
        let mut last_added = false;
        for d in 0..=depth_cap {
            let before = found.len();
            for t in enumerate_terms_exact(&plain.symbols, n, d) {
                found.insert(plain.eval(&t)?);
            }
            last_added = found.len() > before;
        }
        carriers.push(found.into_iter().collect());
        stabilized.push(!last_added);
    }
    let op = GeneratedOperad {
        end,
        gens: plain.assign.clone().into_iter().collect(),
        depth_cap,
        carriers,
        stabilized,
    };
    let sig = Signature::new(op.clone(), gens)?;
    Ok((op, sig))
}

fn table2(f: impl Fn(usize, usize) -> usize) -> FnTable {
    FnTable::tabulate(2, 2, |a| f(a[0], a[1]))
}

/// `dot ↦ xor`, `e ↦ 0` on `{0,1}`.
pub fn xor_generators() -> Vec<(Symbol, FnTable)> {
    vec![
        (Symbol::new("dot", 2), table2(|a, b| a ^ b)),
        (Symbol::new("e", 0), FnTable::tabulate(2, 0, |_| 0)),
    ]
}

/// `and`, `or` on `{0,1}`.
pub fn and_or_generators() -> Vec<(Symbol, FnTable)> {
    vec![
        (Symbol::new("and", 2), table2(|a, b| a & b)),
        (Symbol::new("or", 2), table2(|a, b| a | b)),
    ]
}

/// A chosen preimage `ψ(p)` for every element up to an arity cap.
#[derive(Debug, Clone)]
pub struct SectionChoice<P: EffectiveOperad> {
    pub arity_cap: usize,
    pub depth_cap: usize,
    entries: BTreeMap<P::Elem, Term>,
}

impl<P: EffectiveOperad> SectionChoice<P> {
    /// Validates `φ̄(ψ(p)) = p` for every entry.
    pub fn new(
        sig: &Signature<P>,
        arity_cap: usize,
        depth_cap: usize,
        entries: BTreeMap<P::Elem, Term>,
    ) -> Result<Self, SignatureError> {
        for (p, t) in &entries {
            let v = sig.eval(t)?;
            if &v != p {
                return Err(SignatureError::NotASection {
                    term: t.to_string(),
                    expected: p.to_string(),
                    found: v.to_string(),
                });
            }
        }
        Ok(SectionChoice {
            arity_cap,
            depth_cap,
            entries,
        })
    }

    pub fn get(&self, p: &P::Elem) -> Option<&Term> {
        self.entries.get(p)
    }

    pub fn entries(&self) -> &BTreeMap<P::Elem, Term> {
        &self.entries
    }
}

/// For each element of arity `≤ arity_cap`, the first term in enumeration
/// order evaluating to it.
pub fn choose_section<P: EffectiveOperad>(
    sig: &Signature<P>,
    arity_cap: usize,
    depth_cap: usize,
) -> Result<SectionChoice<P>, SignatureError> {
    let mut entries = BTreeMap::new();
    for n in 0..=arity_cap {
        let carrier = sig.target.carrier(n).ok_or(SignatureError::NotEnumerable(n))?;
        let mut wanted: BTreeSet<&P::Elem> = carrier.iter().collect();
        'search: for d in 0..=depth_cap {
            for t in enumerate_terms_exact(&sig.symbols, n, d) {
                let v = sig.eval(&t)?;
                if wanted.remove(&v) {
                    entries.insert(v, t);
                    if wanted.is_empty() {
                        break 'search;
                    }
                }
            }
        }
        if let Some(p) = wanted.first() {
            return Err(SignatureError::Uncovered {
                arity: n,
                element: p.to_string(),
                depth_cap,
            });
        }
    }
    SectionChoice::new(sig, arity_cap, depth_cap, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeop::{parse_term, unit_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn standard_signature_shape() {
        let sig = standard_comm_signature();
        let names = |n| sig.symbols_of_arity(n).iter().map(|s| s.name.to_string()).collect::<Vec<_>>();
        assert_eq!(names(0), ["e"]);
        assert_eq!(names(2), ["dot"]);
        assert!(names(1).is_empty());
    }

    #[test]
    fn unbiased_examples() {
        let sig = unbiased_signature(terminal_operad(), 3).unwrap();
        let names: Vec<String> = sig.symbols().iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["u0/0", "u1/1", "u2/2", "u3/3"]);
        assert_eq!(sig.image(&Symbol::new("u2", 2)), Some(&Star(2)));

        let end = unbiased_signature(end_operad(2, 1), 1).unwrap();
        assert_eq!(end.symbols_of_arity(0).len(), 2);
        assert_eq!(end.symbols_of_arity(1).len(), 4);
        assert!(matches!(
            unbiased_signature(end_operad(2, 1), 2),
            Err(SignatureError::NotEnumerable(2))
        ));
    }

    #[test]
    fn signature_validation() {
        assert!(matches!(
            Signature::new(terminal_operad(), vec![(Symbol::new("dot", 2), Star(3))]),
            Err(SignatureError::ArityMismatch { .. })
        ));
        assert!(matches!(
            Signature::new(terminal_operad(), vec![(Symbol::new(".", 2), Star(2))]),
            Err(SignatureError::BadName(_))
        ));
        assert!(matches!(
            Signature::new(
                terminal_operad(),
                vec![(Symbol::new("m", 2), Star(2)), (Symbol::new("m", 3), Star(3))]
            ),
            Err(SignatureError::Duplicate(_))
        ));
    }

    #[test]
    fn coverage_examples() {
        let std = check_surjective_up_to(&standard_comm_signature(), 5, 5).unwrap();
        assert!(std.covered(), "{std}");

        let dot = check_surjective_up_to(&dot_only_signature(), 0, 3).unwrap();
        assert!(!dot.covered());
        let gaps: Vec<_> = dot.gaps().collect();
        assert_eq!(gaps.len(), 1);
        assert_eq!(gaps[0].arity, 0);
        assert_eq!(gaps[0].missing, ["★0"]);
        assert_eq!(gaps[0].terms, 0);

        let ub = check_surjective_up_to(&unbiased_signature(terminal_operad(), 3).unwrap(), 3, 1).unwrap();
        assert!(ub.covered());
    }

    #[test]
    fn xor_generated_carriers() {
        let (op, _) = generated_suboperad(2, xor_generators(), 3, 4).unwrap();
        let id = FnTable::tabulate(2, 1, |a| a[0]);
        let zero1 = FnTable::tabulate(2, 1, |_| 0);
        // every linear term of arity 1 uses x1 exactly once, so xor-ing in
        // zeros never leaves the identity: the constant map is unreachable
        assert_eq!(op.carrier(1).unwrap(), vec![id]);
        assert!(!op.carrier(1).unwrap().contains(&zero1));
        let xor = table2(|a, b| a ^ b);
        assert_eq!(op.carrier(2).unwrap(), vec![xor]);
        assert_eq!(op.carrier(0).unwrap(), vec![FnTable::tabulate(2, 0, |_| 0)]);
        assert!(op.stabilized().iter().all(|&s| s));
    }

    #[test]
    fn empty_generators() {
        let (op, sig) = generated_suboperad(2, vec![], 3, 3).unwrap();
        assert_eq!(op.carrier(1).unwrap(), vec![op.unit()]);
        for n in [0, 2, 3] {
            assert!(op.carrier(n).unwrap().is_empty());
        }
        assert!(sig.symbols().is_empty());
    }

    #[test]
    fn generated_carriers_are_closed_under_actions() {
        for gens in [xor_generators(), and_or_generators()] {
            let (op, _) = generated_suboperad(2, gens, 3, 4).unwrap();
            for n in 0..=3 {
                let carrier: BTreeSet<FnTable> = op.carrier(n).unwrap().into_iter().collect();
                for p in &carrier {
                    for s in Permutation::all(n) {
                        assert!(carrier.contains(&op.act(&s, p).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn section_examples() {
        let sig = standard_comm_signature();
        let psi = choose_section(&sig, 5, 5).unwrap();
        assert_eq!(psi.get(&Star(0)), Some(&t("e()")));
        assert_eq!(psi.get(&Star(1)), Some(&unit_term()));
        assert_eq!(psi.get(&Star(2)), Some(&t("dot(x1,x2)")));
        for (p, term) in psi.entries() {
            assert_eq!(&sig.eval(term).unwrap(), p);
        }
        assert!(matches!(
            choose_section(&dot_only_signature(), 2, 3),
            Err(SignatureError::Uncovered { arity: 0, .. })
        ));
        let bad = BTreeMap::from([(Star(2), t("dot(x1,dot(x2,x3))"))]);
        assert!(matches!(
            SectionChoice::new(&sig, 2, 3, bad),
            Err(SignatureError::NotASection { .. })
        ));
    }

    #[test]
    fn eval_is_a_morphism_for_builtin_signatures() {
        let budget = Budget::exhaustive(2).with_random(100, 5, 3);
        assert!(standard_comm_signature().check_eval_morphism(&budget, 2).passed());
        assert!(ternary_comm_signature().check_eval_morphism(&budget, 2).passed());
        let (_, xor) = generated_suboperad(2, xor_generators(), 3, 3).unwrap();
        let r = xor.check_eval_morphism(&Budget::exhaustive(2).with_random(100, 5, 4), 2);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn json_round_trip() {
        let sig = ternary_comm_signature();
        let json = sig.to_json().unwrap();
        let back = signature_from_json(terminal_operad(), &json.to_string()).unwrap();
        assert_eq!(back.assignment(), sig.assignment());
        let doc = r#"{"symbols":[{"name":"e","arity":0},{"name":"dot","arity":2}]}"#;
        assert_eq!(
            signature_from_json(terminal_operad(), doc).unwrap().assignment(),
            standard_comm_signature().assignment()
        );
        assert!(signature_from_json(terminal_operad(), r#"{"symbols":[{"name":"m","arity":2,"target":1}]}"#).is_err());
    }
}
