pub mod catq;
pub mod fincat;
pub mod freeop;
pub mod opcore;
pub mod perm;
pub mod report;
pub mod signature;

pub use freeop::{
    act_term, compose_terms, enumerate_terms, enumerate_terms_exact, eval_term, format_term, parse_term,
    random_term, unit_term, FreeOperad, Symbol, Term, TermError,
};
pub use opcore::{
    algebra_as_morphism, check_morphism, check_operad_axioms, end_operad, terminal_operad, to_terminal, Budget,
    EffectiveOperad, EndOperad, FiniteAlgebra, FnTable, OperadError, OperadMorphism, Star, TerminalOperad,
};
pub use perm::{PermError, Permutation};
pub use report::{CheckReport, LawOutcome};
pub use signature::{
    and_or_generators, check_surjective_up_to, choose_section, dot_only_signature, generated_suboperad,
    signature_from_json, standard_comm_signature, ternary_comm_signature, unbiased_signature, xor_generators,
    CoverageReport, GeneratedOperad, SectionChoice, Signature, SignatureError,
};
pub use catq::{
    build_wk, categorify, check_equivalence, check_factorization, check_hom_structure, check_transformation, chi,
    fork_iso, identity_transformation, omega, verify_pseudo_inverse, CanonicalArrow, CatBudget, CategorifiedOperad,
    CatqError, ComponentArrow, EquivalenceReport, TransformationData,
};
pub use fincat::{
    builtin_smc, check_qalgebra, check_smc_axioms, perm_groupoid, qalgebra_to_smc, roundtrip_rs, roundtrip_sr,
    smc_to_qalgebra, z2_hexagon, z3_discrete, AlgebraBudget, FinCatError, FinCategory, MultiFunctor, MultiNatTrans,
    QAlgebra, SAlgebra, SmcStructure,
};
