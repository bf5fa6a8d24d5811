//! Differential invariants for polynomial ODEs.
//!
//! A small trusted proof kernel for safety properties `A -> [x' = θ & H] B`
//! built from differential induction, differential cuts, differential
//! weakening and differential auxiliaries, backed by a conservative exact
//! real-arithmetic oracle, a class-restricted invariant search, and an RK4
//! based falsifier.
//!
//! ```
//! use diffinv::prelude::*;
//!
//! let sys = OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true");
//! let premise = derive_formula(&fml("x^2 + y^2 >= p^2"), &sys);
//! assert_eq!(premise.to_string(), "0 >= 0");
//! assert!(decide(&[], &premise).is_valid());
//! ```

pub mod arith;
pub mod cli;
pub mod derivation;
pub mod formulas;
pub mod kernel;
pub mod numsim;
pub mod reduce;
pub mod search;
pub mod terms;

pub mod prelude {
    pub use crate::arith::{decide, Certificate, Oracle, Verdict};
    pub use crate::cli::script::{parse_script, Script};
    pub use crate::cli::{run, Outcome, ProblemFile};
    pub use crate::derivation::{derive_formula, derive_formula_with, lie_derivative, DerivationMode, OdeSystem};
    pub use crate::formulas::{classify, fml, is_open, parse_formula, Atom, Formula, OperatorClass, Rel};
    pub use crate::kernel::{check_proof, CheckReport, Fml, Kernel, Problem, ProofNode, Rule, Sequent, TreeVerdict};
    pub use crate::numsim::{derivation_lemma_deviation, falsify, integrate, Counterexample, FalsifyConfig, Trajectory};
    pub use crate::search::{enumerate_candidates, search_invariant, search_with_cuts, Found, SearchConfig};
    pub use crate::terms::{poly, rat, Monomial, Polynomial, Rational, Var};
}
