//! Formulas coding finite elements, and the sequentialisability check: a
//! finite `α` is below the denotation of some closed term exactly when its
//! code is true in every Boolean algebra with at least two elements.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use super::denote::{denote_closed, DEFAULT_N_PRIME};
use super::elem::{arrow, DElem, Fin};
use super::lattice::{level, MAX_RANK};
use super::DomainError;
use crate::formula::{subst_term, table_term, verum, bot, BTerm, Formula, Ident};
use crate::lambda::LcTerm;
use crate::models::{valid_all_bas, ValidityConfig, Verdict};

/// Bits needed to address `D_n`.
fn width(n: usize) -> usize {
    let size = level(n).expect("rank in range").size();
    (usize::BITS - (size - 1).leading_zeros()).max(1) as usize
}

fn row_index(row: &[bool]) -> usize {
    row.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum()
}

fn vars(prefix: &str, n: usize, w: usize) -> Vec<Ident> {
    (0..w).map(|i| Ident::new(format!("{prefix}{n}_{i}"))).collect()
}

/// Terms over `us` whose bits spell `f(index of us)`.
fn selector(us: &[Ident], out_width: usize, f: impl Fn(usize) -> u32) -> Vec<BTerm> {
    (0..out_width).map(|j| table_term(|row| (f(row_index(row)) >> j) & 1 == 1, us)).collect()
}

/// `T_n(ē)`: a formula whose denotation is the element of `D_n` indexed by
/// the bits `ē`, clamped to the last element.
fn template(n: usize, es: &[BTerm]) -> Formula {
    if n == 0 {
        return Formula::neq(es[0].clone(), BTerm::One);
    }
    let m = n - 1;
    let (hi, lo) = (level(n).expect("rank"), level(m).expect("rank"));
    let (wn, wm) = (width(n), width(m));
    let us = vars("u", m, wm);
    let evars = vars("e", n, wn);
    let clamp_lo = |i: usize| i.min(lo.size() - 1) as u32;
    let clamp_hi = |i: usize| i.min(hi.size() - 1) as u32;
    let s = selector(&us, wm, clamp_lo);
    let all: Vec<Ident> = evars.iter().chain(&us).cloned().collect();
    let g: Vec<BTerm> = selector(&all, wm, |row| hi.apply(clamp_hi(row & ((1 << wn) - 1)), clamp_lo(row >> wn)))
        .iter()
        .map(|t| subst_term(t, &evars, es).expect("distinct variables"))
        .collect();
    Formula::forall_all(&us, Formula::imp(template(m, &s), template(m, &g)))
}

/// A closed formula `Θ_α` with `⟦Θ_α⟧ = α`: `∀ū (T(β_ū) → T(α(β_ū)))`,
/// joining the steps `β → α(β)` over all `β`.
pub fn theta(alpha: Fin) -> Result<Formula, DomainError> {
    let alpha = Fin::new(alpha.rank, alpha.idx)?;
    if alpha.rank == 0 {
        return Ok(if alpha.idx == 0 { verum() } else { bot() });
    }
    let m = alpha.rank - 1;
    let (hi, lo) = (level(alpha.rank)?, level(m)?);
    let us = vars("u", m, width(m));
    let clamp = |i: usize| i.min(lo.size() - 1) as u32;
    let s = selector(&us, width(m), clamp);
    let c = selector(&us, width(m), |row| hi.apply(alpha.idx, clamp(row)));
    Ok(Formula::forall_all(&us, Formula::imp(template(m, &s), template(m, &c))))
}

fn arrow_codes() -> &'static HashMap<Fin, Formula> {
    static CODES: OnceLock<HashMap<Fin, Formula>> = OnceLock::new();
    CODES.get_or_init(|| {
        let mut known: BTreeMap<Fin, Formula> = BTreeMap::new();
        known.insert(Fin { rank: 0, idx: 0 }, verum());
        known.insert(Fin { rank: 0, idx: 1 }, bot());
        loop {
            let sources: Vec<(Fin, Formula)> =
                known.iter().filter(|(f, _)| f.rank < MAX_RANK).map(|(f, a)| (*f, a.clone())).collect();
            let mut added = false;
            for (x, fx) in &sources {
                for (y, fy) in &sources {
                    let s = arrow(&DElem::finite(*x), &DElem::finite(*y)).expect("compact source");
                    if let Some(z) = s.as_finite() {
                        if let std::collections::btree_map::Entry::Vacant(e) = known.entry(z) {
                            e.insert(Formula::imp(fx.clone(), fy.clone()));
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        known.into_iter().collect()
    })
}

/// A ground formula built from `0 ≠ 1`, `0 ≠ 0` and `→` whose denotation is
/// `α`, when one exists.
pub fn arrow_code(alpha: Fin) -> Option<Formula> {
    arrow_codes().get(&alpha.normalized()).cloned()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqVerdict {
    Sequentialisable,
    NotSequentialisable,
    Unknown(String),
}

impl fmt::Display for SeqVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqVerdict::Sequentialisable => f.write_str("Sequentialisable"),
            SeqVerdict::NotSequentialisable => f.write_str("NotSequentialisable"),
            SeqVerdict::Unknown(why) => write!(f, "Unknown({why})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeqConfig {
    pub validity: ValidityConfig,
    /// Largest term size tried by the witness search; `None` skips it.
    pub search_budget: Option<usize>,
    pub work_rank: usize,
    pub n_prime: usize,
}

impl Default for SeqConfig {
    fn default() -> Self {
        SeqConfig { validity: ValidityConfig::default(), search_budget: None, work_rank: 0, n_prime: DEFAULT_N_PRIME }
    }
}

#[derive(Clone, Debug)]
pub struct SeqReport {
    pub element: Fin,
    pub formula: Formula,
    pub validity: Verdict,
    pub verdict: SeqVerdict,
    pub search: Option<SearchOutcome>,
}

/// Decides sequentialisability of `α` through the validity of its code. A
/// ground arrow code is preferred over `Θ_α` when there is one.
pub fn seq_check(alpha: Fin, cfg: &SeqConfig) -> Result<SeqReport, DomainError> {
    let alpha = Fin::new(alpha.rank, alpha.idx)?;
    let formula = match arrow_code(alpha) {
        Some(a) => a,
        None => theta(alpha)?,
    };
    let validity = valid_all_bas(&formula, &cfg.validity).unwrap_or_else(|e| Verdict::Unknown(e.to_string()));
    let verdict = match &validity {
        Verdict::Valid(_) => SeqVerdict::Sequentialisable,
        Verdict::Refuted { .. } => SeqVerdict::NotSequentialisable,
        Verdict::Unknown(why) => SeqVerdict::Unknown(why.clone()),
    };
    let search = cfg.search_budget.map(|b| term_search(alpha, b, cfg.work_rank, cfg.n_prime));
    Ok(SeqReport { element: alpha, formula, validity, verdict, search })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<LcTerm>,
    pub examined: usize,
    /// Candidates whose denotation could not be computed at the rank asked.
    pub skipped: usize,
}

/// Closed terms of size `s` over binders `x0 … x{d-1}`.
fn terms(s: usize, d: usize, with_cc: bool, memo: &mut HashMap<(usize, usize), Vec<LcTerm>>) -> Vec<LcTerm> {
    if let Some(v) = memo.get(&(s, d)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if s == 1 {
        out.extend((0..d).map(|i| LcTerm::var(format!("x{i}"))));
        if with_cc {
            out.push(LcTerm::Cc);
        }
    } else {
        for body in terms(s - 1, d + 1, with_cc, memo) {
            out.push(LcTerm::lam(format!("x{d}"), body));
        }
        for i in 1..s - 1 {
            let fs = terms(i, d, with_cc, memo);
            let args = terms(s - 1 - i, d, with_cc, memo);
            for f in &fs {
                for a in &args {
                    out.push(LcTerm::app(f.clone(), a.clone()));
                }
            }
        }
    }
    memo.insert((s, d), out.clone());
    out
}

fn mentions_cc(t: &LcTerm) -> bool {
    match t {
        LcTerm::Cc => true,
        LcTerm::App(a, b) => mentions_cc(a) || mentions_cc(b),
        LcTerm::Lam(_, b) => mentions_cc(b),
        _ => false,
    }
}

/// First closed term of size ≤ `budget` whose denotation is above `α`,
/// comparing at `max(rank of α, work_rank)`. Terms without cc are tried
/// before terms with cc.
pub fn term_search(alpha: Fin, budget: usize, work_rank: usize, n_prime: usize) -> SearchOutcome {
    let alpha = alpha.normalized();
    let rank = alpha.rank.max(work_rank).min(MAX_RANK);
    let target = DElem::finite(alpha);
    let mut examined = 0;
    let mut skipped = 0;
    for with_cc in [false, true] {
        let mut memo = HashMap::new();
        for s in 1..=budget {
            for t in terms(s, 0, with_cc, &mut memo) {
                if with_cc && !mentions_cc(&t) {
                    continue;
                }
                examined += 1;
                match denote_closed(&t, n_prime).and_then(|d| target.leq(&d, rank)) {
                    Ok(true) => return SearchOutcome { witness: Some(t), examined, skipped },
                    Ok(false) => {}
                    Err(_) => skipped += 1,
                }
            }
        }
    }
    SearchOutcome { witness: None, examined, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::denote_formula;

    fn roundtrip(x: Fin) -> bool {
        let d = denote_formula(&theta(x).unwrap()).unwrap();
        d.as_finite() == Some(x.normalized())
    }

    #[test]
    fn base_codes() {
        assert_eq!(theta(Fin { rank: 0, idx: 0 }).unwrap(), verum());
        assert_eq!(theta(Fin { rank: 0, idx: 1 }).unwrap(), bot());
        assert_eq!(width(2), 4);
    }

    #[test]
    fn theta_roundtrips_low_ranks() {
        for n in 0..=2 {
            for i in level(n).unwrap().elements() {
                assert!(roundtrip(Fin { rank: n, idx: i }), "rank {n} element {i}");
            }
        }
    }

    #[test]
    fn theta_roundtrips_sampled_rank_three() {
        let l = level(3).unwrap();
        for i in (0..l.size() as u32).step_by(9973).chain([l.top()]) {
            assert!(roundtrip(Fin { rank: 3, idx: i }), "element {i}");
        }
    }

    #[test]
    fn arrow_codes_denote_their_element() {
        for (x, a) in arrow_codes() {
            assert!(a.is_ground());
            assert_eq!(denote_formula(a).unwrap().as_finite(), Some(*x));
        }
    }

    #[test]
    fn search_examples() {
        let id = Fin { rank: 1, idx: 1 };
        assert_eq!(term_search(id, 4, 0, 1).witness, Some(LcTerm::lam("x0", LcTerm::var("x0"))));
        assert!(term_search(Fin { rank: 0, idx: 0 }, 2, 0, 1).witness.is_some());
        assert_eq!(term_search(Fin { rank: 0, idx: 1 }, 4, 0, 1).witness, None);
    }

    #[test]
    fn verdicts() {
        let cfg = SeqConfig::default();
        assert_eq!(seq_check(Fin { rank: 1, idx: 1 }, &cfg).unwrap().verdict, SeqVerdict::Sequentialisable);
        assert_eq!(seq_check(Fin { rank: 0, idx: 1 }, &cfg).unwrap().verdict, SeqVerdict::NotSequentialisable);
    }
}
