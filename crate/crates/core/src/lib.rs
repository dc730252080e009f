//! Twisted group algebras over the binary n-space, built from Boolean cubic
//! forms, with search and verification tools for sets whose pairwise sums
//! the twist interlocks into sum-of-squares identities.

pub mod algebra;
pub mod cubic;
pub mod error;
pub mod gf2;
pub mod hadamard;
pub mod identity;
pub mod quadruples;
pub mod search;
pub mod sets;
pub mod twist;

pub use algebra::{
    basis_sign, find_norm_violation, lemma_condition, norm_mult_check, product, AlgebraElement,
};
pub use cubic::{alpha_o_closed, CubicForm};
pub use error::{Error, Result};
pub use gf2::BitVec;
pub use hadamard::{hadamard_paley, hadamard_sylvester, hurwitzian_from_hadamard, HadamardMatrix};
pub use identity::{
    build_identity, hurwitz_radon_identity, mutate_signs, parse_text, render_text,
    verify_symbolic, verify_symbolic_with_budget, Identity, SignedTerm,
};
pub use quadruples::{
    count_proper_quadruples, count_proper_quadruples_ordered, hypothesis_check, quadruple_report,
    QuadrupleReport,
};
pub use search::{conjecture_check_n4, max_hurwitzian, FormSweepReport, SearchOptions, SearchResult};
pub use sets::{
    best_known, construct_mod0_embedded, construct_mod12, construct_mod3, is_hurwitzian, rho,
    VecSet,
};
pub use twist::{
    beta, check_properties, delta_f, is_degree_le3, second_polarization, twist_from_cubic,
    PropertyReport, TruthTable, TwistFn,
};
