//! Classical realizability over Boolean-algebra theories: the λc-calculus and
//! its abstract machine, truth in Boolean algebras, poles built from a
//! theory, a natural-deduction checker, and a finite-rank reflexive domain.

pub mod corpus;
pub mod domain;
pub mod formula;
pub mod kam;
pub mod lambda;
pub mod models;
pub mod pole;
pub mod suite;
pub mod syntax;
pub mod typing;

pub use domain::{DElem, DomainError, Fin};
pub use formula::{BTerm, Formula, FormulaError, Ident};
pub use kam::{evaluate, step, Trace};
pub use lambda::{LambdaError, LcTerm, Process, Stack};
pub use models::{BASpec, ModelError, TheoryOracle, ValidityConfig, Verdict};
pub use pole::{PoleConfig, PoleError};
pub use syntax::{parse_bterm, parse_formula, parse_process, parse_stack, parse_term, ParseError};
pub use typing::{check_derivation, Derivation, Judgement, TypeError};
