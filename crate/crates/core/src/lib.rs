//! Exact arithmetic for rational quantum tori `C_q`, the loop algebra
//! `τ = (C_q ⋊ Der C_q) ⊗ B` and the modules `F^α(V, ψ) = V ⊗ C_q`,
//! together with residual checkers for the operator identities they satisfy.
//!
//! All scalars live in a single cyclotomic field `Q(ζ_{2N})`, so every
//! identity is checked with exact equality.

pub mod error;
pub mod exec;
pub mod field;
pub mod fock;
pub mod gln;
pub mod lattice;
pub mod lie;
pub mod parse;
pub mod linalg;
pub mod report;
pub mod scenario;
pub mod smith;
pub mod suites;
pub mod torus;

pub use error::{AlgebraError, FieldError, Result};
pub use field::{Cyclotomic, CyclotomicField};
pub use fock::{FVector, FockModule, ModuleParams, Operator};
pub use gln::GlnModule;
pub use lattice::{CocycleContext, ExpVec, SqrtBranch};
pub use lie::{BAlgebra, BElement, BKind, GElement, LoopAlgebra, LoopElement};
pub use torus::TorusElement;
