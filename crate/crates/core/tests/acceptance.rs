mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use catop_core::fincat::{compare_algebras, AlgebraBudget};
use catop_core::{
    categorify, check_equivalence, check_hom_structure, check_morphism, check_operad_axioms, check_smc_axioms,
    check_surjective_up_to, check_transformation, choose_section, compose_terms, dot_only_signature, end_operad,
    enumerate_terms, generated_suboperad, identity_transformation, perm_groupoid, roundtrip_rs, roundtrip_sr,
    smc_to_qalgebra, standard_comm_signature, ternary_comm_signature, terminal_operad, xor_generators, z2_hexagon,
    z3_discrete, Budget, CatBudget, EffectiveOperad, FnTable, FreeOperad, OperadMorphism, Signature, Term,
};
use common::{by_arity, graft, leaves, mutated_groupoid, parse, xor_truth_table, CorruptedEnd};

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Free-operad laws, exhaustive at arity ≤ 3 with ≤ 2 nodes plus 500 random
/// instances up to arity 6, and grafting against a hand-written grafting.
fn criterion_1() -> Verdict {
    let sig = standard_comm_signature();
    let free = FreeOperad::new(sig.symbols().to_vec(), 2);
    let r = check_operad_axioms(&free, &Budget::exhaustive(3).with_random(500, 6, 1));
    ensure(r.passed(), || r.to_string())?;
    ensure(r.laws.len() == 6 && r.laws.iter().all(|l| l.cases > 0), || format!("a law was never exercised\n{r}"))?;
    let terms: Vec<Vec<Term>> = (0..=3).map(|n| free.carrier(n).unwrap()).collect();
    let mut grafts = 0;
    for f in terms.iter().flatten() {
        let n = f.arity();
        let mut stack = vec![Vec::new()];
        while let Some(gs) = stack.pop() {
            let used: usize = gs.iter().map(leaves).sum();
            if gs.len() == n {
                let fg = compose_terms(f, &gs).map_err(|e| e.to_string())?;
                ensure(fg == graft(f, &gs), || format!("{f} ∘ {gs:?}"))?;
                grafts += 1;
                continue;
            }
            for k in 0..=(3 - used).min(3) {
                for g in terms[k].iter().filter(|g| g.node_count() <= 1) {
                    let mut next = gs.clone();
                    next.push(g.clone());
                    stack.push(next);
                }
            }
        }
    }
    let cases: usize = r.laws.iter().map(|l| l.cases).sum();
    Ok(format!("{cases} law instances, {grafts} grafts match the oracle"))
}

/// With the terminal operad, arrows exist exactly between terms of equal
/// arity, hom sets are subsingletons and existence is an equivalence.
fn criterion_2() -> Verdict {
    let q = categorify(standard_comm_signature());
    let terms: Vec<Term> = (0..=4).flat_map(|n| q.objects(n, 3)).collect();
    let mut pairs = 0;
    for a in &terms {
        for b in &terms {
            let exists = match q.hom(a, b) {
                Ok(Some(arrow)) => {
                    ensure(arrow.source() == a && arrow.target() == b, || format!("arrow {arrow} for ({a}, {b})"))?;
                    true
                }
                Ok(None) => false,
                Err(_) => false,
            };
            ensure(exists == (leaves(a) == leaves(b)), || format!("hom({a}, {b}) exists = {exists}"))?;
            pairs += 1;
        }
    }
    let classes = by_arity(&terms);
    let mut triples = 0;
    for class in classes.values().filter(|c| c[0].arity() <= 3) {
        for a in class {
            for b in class {
                for c in class {
                    let ok = !(q.hom_exists(a, b).unwrap() && q.hom_exists(b, c).unwrap()) || q.hom_exists(a, c).unwrap();
                    ensure(ok, || format!("not transitive at ({a}, {b}, {c})"))?;
                    triples += 1;
                }
            }
        }
    }
    let r = check_hom_structure(&q, 4, 3);
    ensure(r.passed(), || r.to_string())?;
    Ok(format!("{} terms, {pairs} pairs, {triples} triples", terms.len()))
}

/// For the xor-generated operad, arrows exist exactly when brute-force truth
/// tables agree.
fn criterion_3() -> Verdict {
    let (op, sig) = generated_suboperad(2, xor_generators(), 3, 4).map_err(|e| e.to_string())?;
    let q = categorify(sig);
    let mut pairs = 0;
    for n in 0..=3 {
        let terms = enumerate_terms(q.signature().symbols(), n, 4);
        let tables: Vec<Vec<usize>> = terms.iter().map(|t| xor_truth_table(t, n)).collect();
        for (a, ta) in terms.iter().zip(&tables) {
            for (b, tb) in terms.iter().zip(&tables) {
                let exists = q.hom_exists(a, b).map_err(|e| e.to_string())?;
                ensure(exists == (ta == tb), || format!("hom({a}, {b}) exists = {exists}, tables {ta:?} {tb:?}"))?;
                pairs += 1;
            }
        }
        let reached: BTreeSet<Vec<usize>> = tables.into_iter().collect();
        let carrier: BTreeSet<Vec<usize>> = op.carrier(n).unwrap().iter().map(|p| p.values().to_vec()).collect();
        ensure(reached == carrier, || format!("arity {n}: carrier {carrier:?}, reached {reached:?}"))?;
    }
    Ok(format!("{pairs} pairs against truth tables"))
}

/// Both signatures are pseudo-inverse to Wk(terminal) and equivalent.
fn criterion_4() -> Verdict {
    let q1 = categorify(standard_comm_signature());
    let q2 = categorify(ternary_comm_signature());
    let budget = CatBudget::new(4, 3);
    let r = check_equivalence(&q1, &q2, &budget).map_err(|e| e.to_string())?;
    ensure(r.equivalent(), || r.to_string())?;
    ensure(r.to_string().starts_with("equivalent at budget"), || r.to_string())?;
    for pi in &r.pseudo_inverse {
        for law in ["η : χω ⇒ 1", "η : ωχ ⇒ 1"] {
            let hit = pi.laws.iter().filter(|l| l.law.starts_with(law)).collect::<Vec<_>>();
            ensure(!hit.is_empty() && hit.iter().all(|l| l.passed() && l.cases > 0), || {
                format!("{}: transformation {law} not exercised\n{pi}", pi.subject)
            })?;
        }
    }
    let cases: usize = r.pseudo_inverse.iter().flat_map(|p| &p.laws).map(|l| l.cases).sum();
    Ok(format!("equivalent at budget, {cases} pseudo-inverse checks"))
}

/// `eval(ψ(p)) = p` for every covered operation.
fn criterion_5() -> Verdict {
    let sig = standard_comm_signature();
    let psi = choose_section(&sig, 5, 5).map_err(|e| e.to_string())?;
    for n in 0..=5 {
        let p = terminal_operad().carrier(n).unwrap()[0];
        let t = psi.get(&p).ok_or_else(|| format!("no section at {p}"))?;
        ensure(leaves(t) == n && t.check_linear().is_ok(), || format!("ψ({p}) = {t}"))?;
    }
    let (op, sig) = generated_suboperad(2, xor_generators(), 3, 4).map_err(|e| e.to_string())?;
    let psi = choose_section(&sig, 3, 4).map_err(|e| e.to_string())?;
    let mut count = 6;
    for n in 0..=3 {
        for p in op.carrier(n).unwrap() {
            let t = psi.get(&p).ok_or_else(|| format!("no section at {p}"))?;
            ensure(p.values() == xor_truth_table(t, n), || format!("ψ({p}) = {t}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} operations"))
}

/// RS and SR are identities; the Z/2 structure fails the hexagon.
fn criterion_6() -> Verdict {
    let budget = AlgebraBudget {
        arity_cap: 4,
        depth_cap: 3,
        sampled_pairs: 300,
        seed: 6,
    };
    let mut cases = 0;
    for s in [z3_discrete(), perm_groupoid(4)] {
        let axioms = check_smc_axioms(&s);
        ensure(axioms.passed(), || axioms.to_string())?;
        let rs = roundtrip_rs(&s).map_err(|e| e.to_string())?;
        ensure(rs.passed(), || rs.to_string())?;
        let a = smc_to_qalgebra(s.clone()).map_err(|e| e.to_string())?;
        let sr = roundtrip_sr(&a, &budget).map_err(|e| e.to_string())?;
        ensure(sr.passed(), || sr.to_string())?;
        cases += rs.laws.iter().chain(&sr.laws).map(|l| l.cases).sum::<usize>();
    }
    // SR compared against S of an independently permuted copy must notice
    let s3 = smc_to_qalgebra(z3_discrete()).map_err(|e| e.to_string())?;
    let mut shifted = z3_discrete();
    for v in shifted.tensor.objects.values_mut() {
        *v = (*v + 1) % 3;
    }
    let sanity = compare_algebras(&s3, &catop_core::SAlgebra::new_unchecked(shifted), &budget, "sanity")
        .map_err(|e| e.to_string())?;
    ensure(!sanity.passed(), || "comparison cannot tell different tensors apart".into())?;

    let hex = check_smc_axioms(&z2_hexagon());
    let law = hex.law("hexagon").ok_or("no hexagon law")?;
    let witness = law.counterexample.clone().ok_or_else(|| hex.to_string())?;
    Ok(format!("{cases} componentwise comparisons; z2-hexagon rejected: {witness}"))
}

/// Coverage of the terminal operad by the standard signature, and the
/// arity-0 gap of the dot-only signature.
fn criterion_7() -> Verdict {
    let r = check_surjective_up_to(&standard_comm_signature(), 5, 5).map_err(|e| e.to_string())?;
    ensure(r.covered(), || r.to_string())?;
    let gap = check_surjective_up_to(&dot_only_signature(), 0, 5).map_err(|e| e.to_string())?;
    ensure(!gap.covered(), || gap.to_string())?;
    let g: Vec<_> = gap.gaps().collect();
    ensure(g.len() == 1 && g[0].arity == 0 && g[0].missing == ["★0"] && g[0].terms == 0, || gap.to_string())?;
    ensure(enumerate_terms(dot_only_signature().symbols(), 0, 5).is_empty(), || "a nullary dot-only term".into())?;
    Ok("covered at arities 0..=5; dot-only gap at arity 0: ★0".into())
}

/// Each checker rejects a seeded single-point mutation with a witness.
fn criterion_8() -> Verdict {
    let mut found = Vec::new();

    let r = check_operad_axioms(&CorruptedEnd::new(2), &Budget::exhaustive(2));
    let w = r.first_failure().and_then(|l| l.counterexample.clone()).ok_or("operad axioms accept the corruption")?;
    ensure(check_operad_axioms(&end_operad(2, 2), &Budget::exhaustive(2)).passed(), || "clean End fails".into())?;
    found.push(format!("operad: {w}"));

    let end = end_operad(2, 3);
    let sig = Signature::new(end.clone(), xor_generators()).map_err(|e| e.to_string())?;
    let free = FreeOperad::new(sig.symbols().to_vec(), 2);
    let victim = parse("dot(x2,x1)");
    let and = FnTable::new(2, 2, vec![0, 0, 0, 1]).map_err(|e| e.to_string())?;
    let good = OperadMorphism::new(&free, &end, |t| sig.eval(t).unwrap());
    ensure(check_morphism(&good, &Budget::exhaustive(3)).passed(), || "clean eval fails".into())?;
    let bad = OperadMorphism::new(&free, &end, |t| if *t == victim { and.clone() } else { sig.eval(t).unwrap() });
    let r = check_morphism(&bad, &Budget::exhaustive(3));
    let w = r.first_failure().and_then(|l| l.counterexample.clone()).ok_or("morphism squares accept the corruption")?;
    found.push(format!("morphism: {w}"));

    let (_, xsig) = generated_suboperad(2, xor_generators(), 3, 3).map_err(|e| e.to_string())?;
    let q = categorify(xsig);
    let objects: Vec<Term> = (0..=2).flat_map(|n| q.objects(n, 2)).collect();
    let mut eta = identity_transformation(&objects);
    ensure(check_transformation(&q, &eta, &CatBudget::new(2, 2)).passed(), || "identity fails".into())?;
    eta.components.get_mut(&victim).ok_or("victim missing")?.target = parse("dot(x1,dot(x2,e()))");
    let r = check_transformation(&q, &eta, &CatBudget::new(2, 2));
    let w = r.first_failure().and_then(|l| l.counterexample.clone()).ok_or("transformation accepts the corruption")?;
    found.push(format!("transformation: {w}"));

    ensure(check_smc_axioms(&perm_groupoid(3)).passed(), || "clean groupoid fails".into())?;
    let r = check_smc_axioms(&mutated_groupoid());
    let w = r.first_failure().and_then(|l| l.counterexample.clone()).ok_or("SMC axioms accept the corruption")?;
    found.push(format!("smc: {w}"));

    Ok(found.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, Option<Duration>); 8] = [
        ("free-operad laws", criterion_1, Some(Duration::from_secs(10))),
        ("coherence over the terminal operad", criterion_2, Some(Duration::from_secs(10))),
        ("coherence over the xor operad", criterion_3, None),
        ("pseudo-inverse and equivalence", criterion_4, Some(Duration::from_secs(30))),
        ("section law", criterion_5, None),
        ("round trips", criterion_6, Some(Duration::from_secs(60))),
        ("signature coverage", criterion_7, None),
        ("mutation sensitivity", criterion_8, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let took = start.elapsed();
        let verdict = match (verdict, limit) {
            (Ok(_), Some(l)) if took > *l => Err(format!("took {took:.1?}, limit {l:?}")),
            (v, _) => v,
        };
        match verdict {
            Ok(detail) => println!("criterion {}: PASS {name} ({took:.2?}) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({took:.2?}) {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
