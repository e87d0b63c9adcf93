//! The Scott model `D_∞` truncated at rank 3, and the link between its
//! elements and formulas.

mod denote;
mod elem;
mod lattice;
mod seq;

use thiserror::Error;

pub use denote::{cc_elem, denote, denote_closed, denote_formula, peirce, Env, DEFAULT_N_PRIME, MAX_N_PRIME};
pub use elem::{app, arrow, embed, join, join_all, project, DElem, Fin};
pub use lattice::{level, normalize, phi, psi, transport, Level, MAX_RANK};
pub use seq::{arrow_code, seq_check, term_search, theta, SearchOutcome, SeqConfig, SeqReport, SeqVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("rank {rank} exceeds the cap {cap}")]
    RankCap { rank: usize, cap: usize },
    #[error("no element {idx} at rank {rank}")]
    NoSuchElement { rank: usize, idx: u32 },
    #[error("function body is not monotone at rank {rank}")]
    NotMonotone { rank: usize },
    #[error("step function source is not a finite element")]
    NotCompact,
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("formula `{0}` is not closed")]
    OpenFormula(String),
}
