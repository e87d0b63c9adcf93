//! The inductive pole `⫫_T = ⋃ₖ ⫫_{T,k}`.
//!
//! `⫫_{T,0}` is empty and a process is in `⫫_{T,k+1}` when either
//!
//! * it makes one machine step to a process of `⫫_{T,k}`, or
//! * it is `γ_A ⋆ t₁ · … · t_m · π` where `A` decomposes as
//!   `∀ȳ₁(B₁ → … → ∀ȳ_m(B_m → ∀ȳ_{m+1} b ≠ b'))` with
//!   `Bᵢ = ∀z̄ᵢ,₁(Cᵢ,₁ → … → ∀z̄ᵢ,ₙᵢ₊₁ cᵢ ≠ c'ᵢ)`, and some `β̄ ∈ {0,1}` makes
//!   `b = b'` true such that for every `i` and every `δ̄` making `cᵢ = c'ᵢ`
//!   true, `tᵢ ⋆ γ_{Cᵢ,₁[β̄,δ̄]} · … · γ_{Cᵢ,ₙᵢ[β̄,δ̄]} · π` is in `⫫_{T,k}`.
//!
//! The sequence is cumulative, so membership is decided by computing the
//! least level of a process up to a budget.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::formula::{
    bot, decompose, eval_term_01, neg, subst_formula, verum, BTerm, Decomposition, Env01, Formula, Ident,
};
use crate::kam::step;
use crate::lambda::{constraint_of, is_proof_like, LcTerm, Process, Stack};
use crate::models::{theory_contains, valid_all_bas, ModelError, TheoryOracle, ValidityConfig, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoleError {
    #[error("instruction tag `{0}` is not closed")]
    OpenTag(String),
    #[error("formula `{0}` is not closed")]
    OpenFormula(String),
    #[error("term `{0}` is not closed")]
    OpenTerm(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GammaClass {
    Unrestricted,
    Restricted,
}

/// `γ_A` is unrestricted exactly when `A` is in the theory.
pub fn gamma_classify(a: &Formula, oracle: &TheoryOracle) -> Result<GammaClass, PoleError> {
    if !a.is_closed() {
        return Err(PoleError::OpenFormula(a.to_string()));
    }
    Ok(if theory_contains(oracle, a)? { GammaClass::Unrestricted } else { GammaClass::Restricted })
}

#[derive(Clone, Copy, Debug)]
enum Level {
    Found(usize),
    NoneUpTo(usize),
}

/// Decomposition of a tag, flattened for the membership rule.
struct Shape {
    ys: Vec<Ident>,
    head: (BTerm, BTerm),
    premises: Vec<PremiseShape>,
}

struct PremiseShape {
    zs: Vec<Ident>,
    head: (BTerm, BTerm),
    hyps: Vec<Formula>,
}

impl Shape {
    fn of(d: &Decomposition) -> Shape {
        Shape {
            ys: d.all_y(),
            head: (d.head_lhs.clone(), d.head_rhs.clone()),
            premises: d
                .outer_blocks
                .iter()
                .map(|b| PremiseShape {
                    zs: b.premise.all_z(),
                    head: (b.premise.head_lhs.clone(), b.premise.head_rhs.clone()),
                    hyps: b.premise.blocks.iter().map(|ib| ib.formula.clone()).collect(),
                })
                .collect(),
        }
    }
}

pub struct PoleConfig {
    pub oracle: TheoryOracle,
    pub k_max: usize,
    /// Longest run of machine steps followed before giving up.
    pub fuel: usize,
    memo: Mutex<HashMap<Process, Level>>,
    shapes: Mutex<HashMap<Formula, Arc<Shape>>>,
}

impl Clone for PoleConfig {
    fn clone(&self) -> Self {
        PoleConfig::new(self.oracle.clone(), self.k_max, self.fuel)
    }
}

impl std::fmt::Debug for PoleConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PoleConfig")
            .field("oracle", &self.oracle)
            .field("k_max", &self.k_max)
            .field("fuel", &self.fuel)
            .finish_non_exhaustive()
    }
}

impl Default for PoleConfig {
    fn default() -> Self {
        PoleConfig::new(TheoryOracle::Family(crate::models::default_family()), 32, 10_000)
    }
}

fn bits(env: &mut Env01, vars: &[Ident], row: u64) {
    for (i, v) in vars.iter().enumerate() {
        env.insert(v.clone(), (row >> i) & 1 == 1);
    }
}

fn holds_eq(head: &(BTerm, BTerm), env: &Env01) -> bool {
    eval_term_01(&head.0, env).expect("bound") == eval_term_01(&head.1, env).expect("bound")
}

fn bit_terms(vars: &[Ident], env: &Env01) -> Vec<BTerm> {
    vars.iter().map(|v| BTerm::bit(env[v])).collect()
}

fn check_tags(p: &Process) -> Result<(), PoleError> {
    let mut tags = Vec::new();
    p.collect_tags(&mut tags);
    match tags.into_iter().find(|a| !a.is_closed()) {
        Some(a) => Err(PoleError::OpenTag(a.to_string())),
        None => Ok(()),
    }
}

impl PoleConfig {
    pub fn new(oracle: TheoryOracle, k_max: usize, fuel: usize) -> PoleConfig {
        PoleConfig { oracle, k_max, fuel, memo: Mutex::new(HashMap::new()), shapes: Mutex::new(HashMap::new()) }
    }

    pub fn with_k_max(mut self, k_max: usize) -> PoleConfig {
        self.k_max = k_max;
        self
    }

    /// Whether `γ_A` counts as an unrestricted instruction.
    pub fn unrestricted(&self, a: &Formula) -> bool {
        matches!(gamma_classify(a, &self.oracle), Ok(GammaClass::Unrestricted))
    }

    pub fn is_proof_like(&self, t: &LcTerm) -> bool {
        is_proof_like(t, &|a: &Formula| self.unrestricted(a))
    }

    /// Every process found in the pole so far, with its least level.
    pub fn certified(&self) -> Vec<(Process, usize)> {
        let memo = self.memo.lock().unwrap();
        let mut out: Vec<(Process, usize)> = memo
            .iter()
            .filter_map(|(p, l)| match l {
                Level::Found(k) => Some((p.clone(), *k)),
                Level::NoneUpTo(_) => None,
            })
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
        out
    }

    pub fn clear_memo(&self) {
        self.memo.lock().unwrap().clear();
    }

    fn shape(&self, a: &Formula) -> Arc<Shape> {
        if let Some(s) = self.shapes.lock().unwrap().get(a) {
            return s.clone();
        }
        let s = Arc::new(Shape::of(&decompose(a)));
        self.shapes.lock().unwrap().insert(a.clone(), s.clone());
        s
    }

    fn recall(&self, p: &Process, budget: usize) -> Option<Option<usize>> {
        match self.memo.lock().unwrap().get(p) {
            Some(Level::Found(k)) => Some(if *k <= budget { Some(*k) } else { None }),
            Some(Level::NoneUpTo(b)) if *b >= budget => Some(None),
            _ => None,
        }
    }

    fn remember(&self, p: &Process, budget: usize, result: Option<usize>) {
        let mut memo = self.memo.lock().unwrap();
        match result {
            Some(k) => {
                memo.insert(p.clone(), Level::Found(k));
            }
            None => {
                let stronger = matches!(memo.get(p), Some(Level::NoneUpTo(b)) if *b >= budget);
                if !stronger {
                    memo.insert(p.clone(), Level::NoneUpTo(budget));
                }
            }
        }
    }

    /// Least `k ≤ budget` with `p ∈ ⫫_{T,k}`.
    fn least_level(&self, p: &Process, budget: usize) -> Option<usize> {
        if budget == 0 {
            return None;
        }
        if let Some(r) = self.recall(p, budget) {
            return r;
        }
        // Follow machine steps; each one costs a level.
        let mut cur = p.clone();
        let mut taken = 0usize;
        let result = loop {
            if taken >= budget || taken > self.fuel {
                break None;
            }
            if taken > 0 {
                if let Some(r) = self.recall(&cur, budget - taken) {
                    break r.map(|k| k + taken);
                }
            }
            match step(&cur) {
                Some((next, _)) => {
                    cur = next;
                    taken += 1;
                }
                None => {
                    let r = match &cur.term {
                        LcTerm::Gamma(a) => self.gamma_rule(a, &cur.stack, budget - taken),
                        _ => None,
                    };
                    if taken > 0 {
                        self.remember(&cur, budget - taken, r);
                    }
                    break r.map(|k| k + taken);
                }
            }
        };
        self.remember(p, budget, result);
        result
    }

    fn gamma_rule(&self, a: &Formula, stack: &Stack, budget: usize) -> Option<usize> {
        let shape = self.shape(a);
        let m = shape.premises.len();
        if stack.len() < m {
            return None;
        }
        let ts: Vec<&LcTerm> = stack.iter().take(m).collect();
        let pi = stack.drop_n(m).expect("length checked");
        let mut best: Option<usize> = None;
        let mut env = Env01::new();
        for beta in 0..1u64 << shape.ys.len() {
            let limit = match best {
                Some(1) => break,
                Some(b) => b - 1,
                None => budget,
            };
            bits(&mut env, &shape.ys, beta);
            if !holds_eq(&shape.head, &env) {
                continue;
            }
            if let Some(level) = self.obligations(&shape, &ts, pi, &mut env, limit) {
                best = Some(level);
            }
        }
        best
    }

    /// `1 + max` level of the obligations for the current `β̄` in `env`, if
    /// all of them fit below `limit`.
    fn obligations(&self, shape: &Shape, ts: &[&LcTerm], pi: &Stack, env: &mut Env01, limit: usize) -> Option<usize> {
        let mut worst = 0usize;
        for (premise, t) in shape.premises.iter().zip(ts) {
            for delta in 0..1u64 << premise.zs.len() {
                bits(env, &premise.zs, delta);
                if !holds_eq(&premise.head, env) {
                    continue;
                }
                let vars: Vec<Ident> = shape.ys.iter().chain(&premise.zs).cloned().collect();
                let vals = bit_terms(&vars, env);
                let tags: Vec<LcTerm> = premise
                    .hyps
                    .iter()
                    .map(|c| LcTerm::gamma(subst_formula(c, &vars, &vals).expect("distinct variables")))
                    .collect();
                let stack = tags.into_iter().rev().fold(pi.clone(), |acc, g| acc.push_unchecked(g));
                let q = Process::new_unchecked((*t).clone(), stack);
                let k = self.least_level(&q, limit - 1)?;
                worst = worst.max(k);
            }
        }
        Some(worst + 1)
    }
}

/// Does `p` belong to `⫫_{T,k}`?
pub fn in_pole(p: &Process, k: usize, cfg: &PoleConfig) -> Result<bool, PoleError> {
    check_tags(p)?;
    Ok(cfg.least_level(p, k).is_some())
}

/// Least `k ≤ cfg.k_max` with `p ∈ ⫫_{T,k}`.
pub fn in_pole_limit(p: &Process, cfg: &PoleConfig) -> Result<Option<usize>, PoleError> {
    check_tags(p)?;
    Ok(cfg.least_level(p, cfg.k_max))
}

/// Tails used to close off canonical falsity stacks: `ω`,
/// `γ_⊥ · ω`, and `k_{γ_⊥·ω} · γ_{0≠1} · ω`.
pub fn stack_pool(depth: usize) -> Vec<Stack> {
    let omega = Stack::empty();
    let g_bot = omega.push_unchecked(LcTerm::gamma(bot()));
    let nested = omega
        .push_unchecked(LcTerm::gamma(verum()))
        .push_unchecked(LcTerm::Kont(g_bot.clone()));
    let mut pool = vec![omega, g_bot, nested];
    pool.truncate((depth + 1).min(3));
    pool
}

/// Stacks `γ_{B₁[β̄]} · … · γ_{B_m[β̄]} · π` for every `β̄` making the head
/// equation true and every `π` of the pool; each is in the falsity value of `a`.
pub fn canonical_falsity_stacks(a: &Formula, depth: usize) -> Result<Vec<Stack>, PoleError> {
    if !a.is_closed() {
        return Err(PoleError::OpenFormula(a.to_string()));
    }
    let d = decompose(a);
    let ys = d.all_y();
    let head = (d.head_lhs.clone(), d.head_rhs.clone());
    let pool = stack_pool(depth);
    let mut out = Vec::new();
    let mut env = Env01::new();
    for beta in 0..1u64 << ys.len() {
        bits(&mut env, &ys, beta);
        if !holds_eq(&head, &env) {
            continue;
        }
        let vals = bit_terms(&ys, &env);
        let premises: Vec<LcTerm> = (0..d.arity())
            .map(|i| LcTerm::gamma(subst_formula(&d.premise(i), &ys, &vals).expect("distinct variables")))
            .collect();
        for pi in &pool {
            out.push(premises.iter().rev().fold(pi.clone(), |acc, g| acc.push_unchecked(g.clone())));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizeReport {
    pub term: LcTerm,
    pub formula: Formula,
    /// Each canonical stack with the least level of `t ⋆ π`, if found.
    pub results: Vec<(Stack, Option<usize>)>,
}

impl RealizeReport {
    pub fn failures(&self) -> Vec<&Stack> {
        self.results.iter().filter(|(_, l)| l.is_none()).map(|(s, _)| s).collect()
    }

    pub fn is_clean(&self) -> bool {
        self.results.iter().all(|(_, l)| l.is_some())
    }
}

/// Checks `t ⋆ π ∈ ⫫` for every canonical falsity stack `π` of `a`.
pub fn realizes_bounded(t: &LcTerm, a: &Formula, cfg: &PoleConfig, depth: usize) -> Result<RealizeReport, PoleError> {
    if !t.is_closed() {
        return Err(PoleError::OpenTerm(t.to_string()));
    }
    let stacks = canonical_falsity_stacks(a, depth)?;
    let mut results = Vec::with_capacity(stacks.len());
    for pi in stacks {
        let p = Process::new_unchecked(t.clone(), pi.clone());
        results.push((pi, in_pole_limit(&p, cfg)?));
    }
    Ok(RealizeReport { term: t.clone(), formula: a.clone(), results })
}

/// Validity of `¬C_p`; a process of the pole must not get `Refuted`.
pub fn constraint_check(p: &Process, cfg: &ValidityConfig) -> Result<Verdict, PoleError> {
    let c = constraint_of(p);
    if !c.is_closed() {
        return Err(PoleError::OpenFormula(c.to_string()));
    }
    Ok(valid_all_bas(&neg(c), cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_process};

    fn cfg() -> PoleConfig {
        PoleConfig::default()
    }

    fn gproc(a: Formula, items: Vec<LcTerm>) -> Process {
        Process::new(LcTerm::gamma(a), Stack::from_terms(items).unwrap()).unwrap()
    }

    #[test]
    fn hand_derived_levels() {
        let c = cfg();
        for pi in stack_pool(2) {
            let p = Process::new(LcTerm::gamma(bot()), pi).unwrap();
            assert_eq!(in_pole_limit(&p, &c).unwrap(), Some(1));
        }
        let p = gproc(verum(), vec![]);
        assert_eq!(in_pole_limit(&p, &c).unwrap(), None);
        assert!(!in_pole(&p, 32, &c).unwrap());

        let chained = gproc(Formula::imp(bot(), bot()), vec![LcTerm::gamma(bot())]);
        assert!(!in_pole(&chained, 1, &c).unwrap());
        assert!(in_pole(&chained, 2, &c).unwrap());

        let applied = Process::new(LcTerm::app(LcTerm::identity(), LcTerm::gamma(bot())), Stack::empty()).unwrap();
        assert_eq!(in_pole_limit(&applied, &c).unwrap(), Some(3));
        assert_eq!(in_pole_limit(&parse_process("cc * []").unwrap(), &c).unwrap(), None);
    }

    #[test]
    fn classification() {
        let pf2 = TheoryOracle::Family(vec![crate::models::BASpec::PowerFinite(2)]);
        let pf1 = TheoryOracle::Family(vec![crate::models::BASpec::PowerFinite(1)]);
        assert_eq!(gamma_classify(&verum(), &pf2).unwrap(), GammaClass::Unrestricted);
        assert_eq!(gamma_classify(&bot(), &pf2).unwrap(), GammaClass::Restricted);
        let z01 = parse_formula("forall z. z == 0 | z == 1").unwrap();
        assert_eq!(gamma_classify(&z01, &pf1).unwrap(), GammaClass::Unrestricted);
        assert_eq!(gamma_classify(&z01, &pf2).unwrap(), GammaClass::Restricted);
        let c = PoleConfig::new(pf2, 32, 1000);
        assert!(!c.is_proof_like(&LcTerm::gamma(bot())));
        assert!(c.is_proof_like(&LcTerm::gamma(verum())));
    }

    #[test]
    fn falsity_stacks() {
        assert_eq!(canonical_falsity_stacks(&bot(), 0).unwrap(), vec![Stack::empty()]);
        assert!(canonical_falsity_stacks(&verum(), 2).unwrap().is_empty());
        let s = canonical_falsity_stacks(&Formula::imp(bot(), bot()), 0).unwrap();
        assert_eq!(s, vec![Stack::from_terms([LcTerm::gamma(bot())]).unwrap()]);
        assert_eq!(canonical_falsity_stacks(&bot(), 2).unwrap().len(), 3);
    }

    #[test]
    fn realizers() {
        let c = cfg();
        let comm = parse_formula("forall x y. x /\\ y == y /\\ x").unwrap();
        assert!(realizes_bounded(&LcTerm::identity(), &comm, &c, 2).unwrap().is_clean());
        let r = realizes_bounded(&LcTerm::identity(), &bot(), &c, 2).unwrap();
        assert!(!r.is_clean());
        assert_eq!(r.failures()[0], &Stack::empty());
        let a = parse_formula("forall z. (z != 0 -> z != 1) -> z == 0").unwrap();
        assert!(realizes_bounded(&LcTerm::gamma(a.clone()), &a, &c, 2).unwrap().is_clean());
    }

    #[test]
    fn constraints() {
        let v = ValidityConfig::default();
        let p = gproc(bot(), vec![]);
        assert!(constraint_check(&p, &v).unwrap().is_valid());
        let q = gproc(verum(), vec![]);
        assert!(constraint_check(&q, &v).unwrap().is_refuted());
        let r = gproc(verum(), vec![LcTerm::gamma(neg(verum()))]);
        assert!(constraint_check(&r, &v).unwrap().is_valid());
    }

    #[test]
    fn open_tags_are_errors() {
        let p = gproc(Formula::neq(BTerm::var("z"), BTerm::Zero), vec![]);
        assert!(matches!(in_pole(&p, 3, &cfg()), Err(PoleError::OpenTag(_))));
    }
}
