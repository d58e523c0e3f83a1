mod common;

use catop_core::{
    categorify, check_morphism, check_operad_axioms, check_smc_axioms, check_transformation, end_operad,
    generated_suboperad, identity_transformation, xor_generators, Budget, CatBudget, FnTable, FreeOperad,
    OperadMorphism, Signature,
};
use common::{mutated_groupoid, parse, CorruptedEnd};

#[test]
fn corrupted_composition_is_caught() {
    let clean = check_operad_axioms(&end_operad(2, 2), &Budget::exhaustive(2));
    assert!(clean.passed(), "{clean}");
    let r = check_operad_axioms(&CorruptedEnd::new(2), &Budget::exhaustive(2));
    let fail = r.first_failure().expect("the corruption is visible");
    let witness = fail.counterexample.as_deref().unwrap();
    assert!(witness.contains("fn2<0110>"), "{witness}");
}

#[test]
fn corrupted_eval_is_caught() {
    let end = end_operad(2, 3);
    let sig = Signature::new(end.clone(), xor_generators()).unwrap();
    let free = FreeOperad::new(sig.symbols().to_vec(), 2);
    let good = OperadMorphism::new(&free, &end, |t| sig.eval(t).unwrap());
    assert!(check_morphism(&good, &Budget::exhaustive(3)).passed());

    let victim = parse("dot(x2,x1)");
    let and = FnTable::new(2, 2, vec![0, 0, 0, 1]).unwrap();
    let bad = OperadMorphism::new(&free, &end, |t| if *t == victim { and.clone() } else { sig.eval(t).unwrap() });
    let r = check_morphism(&bad, &Budget::exhaustive(3));
    assert!(!r.passed());
    let witness = r.first_failure().unwrap().counterexample.clone().unwrap();
    assert!(witness.contains("dot(x"), "{witness}");
}

#[test]
fn redirected_component_is_caught() {
    let (_, sig) = generated_suboperad(2, xor_generators(), 3, 3).unwrap();
    let q = categorify(sig);
    let objects: Vec<_> = (0..=2).flat_map(|n| q.objects(n, 2)).collect();
    let mut eta = identity_transformation(&objects);
    assert!(check_transformation(&q, &eta, &CatBudget::new(2, 2)).passed());
    eta.components.get_mut(&parse("dot(x2,x1)")).unwrap().target = parse("dot(x1,dot(x2,e()))");
    let r = check_transformation(&q, &eta, &CatBudget::new(2, 2));
    assert!(!r.passed());
    assert!(r.first_failure().unwrap().counterexample.as_ref().unwrap().contains("dot(x2,x1)"));
}

#[test]
fn mutated_associator_is_caught() {
    let r = check_smc_axioms(&mutated_groupoid());
    assert!(!r.passed());
    let hex = r.law("hexagon").unwrap();
    assert!(!hex.passed(), "{r}");
    let w = hex.counterexample.as_deref().unwrap();
    assert!(w.starts_with("hexagon at (1, 1, 1)"), "{w}");
}
