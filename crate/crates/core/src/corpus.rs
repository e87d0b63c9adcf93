//! Seeded random and exhaustive corpora of formulas, terms and processes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{eq, BTerm, Formula, Ident};
use crate::lambda::{LcTerm, Process, Stack};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

pub fn random_bterm(rng: &mut CorpusRng, vars: &[Ident], depth: usize) -> BTerm {
    if depth == 0 || rng.gen_bool(0.4) {
        let k = rng.gen_range(0..vars.len() + 2);
        return match k {
            0 => BTerm::Zero,
            1 => BTerm::One,
            _ => BTerm::Var(vars[k - 2].clone()),
        };
    }
    match rng.gen_range(0..3) {
        0 => BTerm::not(random_bterm(rng, vars, depth - 1)),
        1 => BTerm::and(random_bterm(rng, vars, depth - 1), random_bterm(rng, vars, depth - 1)),
        _ => BTerm::or(random_bterm(rng, vars, depth - 1), random_bterm(rng, vars, depth - 1)),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FormulaShape {
    pub max_height: usize,
    pub max_quantifiers: usize,
    pub term_depth: usize,
}

impl Default for FormulaShape {
    fn default() -> Self {
        FormulaShape { max_height: 4, max_quantifiers: 3, term_depth: 2 }
    }
}

/// A closed formula within `shape`.
pub fn random_formula(rng: &mut CorpusRng, shape: FormulaShape) -> Formula {
    fn go(rng: &mut CorpusRng, bound: &mut Vec<Ident>, h: usize, q: usize, td: usize) -> Formula {
        if h == 0 || rng.gen_bool(0.25) {
            return Formula::neq(random_bterm(rng, bound, td), random_bterm(rng, bound, td));
        }
        if q > 0 && rng.gen_bool(0.45) {
            let z = Ident::new(NAMES[bound.len() % NAMES.len()]);
            bound.push(z.clone());
            let body = go(rng, bound, h - 1, q - 1, td);
            bound.pop();
            return Formula::forall(z, body);
        }
        let a = go(rng, bound, h - 1, q, td);
        let b = go(rng, bound, h - 1, q, td);
        Formula::imp(a, b)
    }
    go(rng, &mut Vec::new(), shape.max_height, shape.max_quantifiers, shape.term_depth)
}

/// A closed Horn clause over at most `max_vars` variables: equations
/// implying an equation (definite) or an inequation (goal).
pub fn random_horn(rng: &mut CorpusRng, max_vars: usize) -> Formula {
    let n = rng.gen_range(1..=max_vars.max(1));
    let vars: Vec<Ident> = NAMES[..n].iter().map(|s| Ident::new(*s)).collect();
    let premises: Vec<Formula> = (0..rng.gen_range(0..=2))
        .map(|_| eq(random_bterm(rng, &vars, 2), random_bterm(rng, &vars, 2)))
        .collect();
    let (l, r) = (random_bterm(rng, &vars, 2), random_bterm(rng, &vars, 2));
    let head = if rng.gen_bool(0.5) { eq(l, r) } else { Formula::neq(l, r) };
    let body = premises.into_iter().rev().fold(head, |acc, p| Formula::imp(p, acc));
    Formula::forall_all(&vars, body)
}

/// Mixed corpus: a quarter Horn clauses, the rest general formulas.
pub fn formulas(count: usize, seed: u64) -> Vec<Formula> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| if r.gen_bool(0.25) { random_horn(&mut r, 3) } else { random_formula(&mut r, FormulaShape::default()) })
        .collect()
}

/// Every closed formula of height ≤ 2 built from inequations between
/// `0`, `1`, `z`, implication and `∀z`.
pub fn small_closed_formulas() -> Vec<Formula> {
    let z = Ident::new("z");
    let atoms = [BTerm::Zero, BTerm::One, BTerm::Var(z.clone())];
    let mut levels: Vec<Vec<Formula>> = vec![atoms
        .iter()
        .flat_map(|a| atoms.iter().map(move |b| Formula::neq(a.clone(), b.clone())))
        .collect()];
    for _ in 0..2 {
        let prev = levels.last().expect("nonempty").clone();
        let mut next = prev.clone();
        for a in &prev {
            for b in &prev {
                if a.height().max(b.height()) + 1 == levels.len() {
                    next.push(Formula::imp(a.clone(), b.clone()));
                }
            }
            if a.height() + 1 == levels.len() {
                next.push(Formula::forall(z.clone(), a.clone()));
            }
        }
        levels.push(next);
    }
    levels.pop().expect("nonempty").into_iter().filter(Formula::is_closed).collect()
}

/// A closed λ-term of at most `size` nodes.
pub fn random_term(rng: &mut CorpusRng, size: usize, allow_cc: bool) -> LcTerm {
    fn go(rng: &mut CorpusRng, bound: &mut Vec<Ident>, size: usize, cc: bool) -> LcTerm {
        if size <= 1 || rng.gen_bool(0.2) {
            if !bound.is_empty() && (!cc || rng.gen_bool(0.85)) {
                return LcTerm::Var(bound.choose(rng).expect("nonempty").clone());
            }
            if cc {
                return LcTerm::Cc;
            }
            return LcTerm::identity();
        }
        if rng.gen_bool(0.45) {
            let x = Ident::new(NAMES[bound.len() % NAMES.len()]);
            bound.push(x.clone());
            let body = go(rng, bound, size - 1, cc);
            bound.pop();
            LcTerm::lam(x, body)
        } else {
            let left = rng.gen_range(1..size.max(2));
            let f = go(rng, bound, left, cc);
            let a = go(rng, bound, size.saturating_sub(left + 1).max(1), cc);
            LcTerm::app(f, a)
        }
    }
    go(rng, &mut Vec::new(), size, allow_cc)
}

pub fn terms(count: usize, size: usize, seed: u64, allow_cc: bool) -> Vec<LcTerm> {
    let mut r = rng(seed);
    (0..count).map(|_| random_term(&mut r, size, allow_cc)).collect()
}

/// A closed process mixing λ-terms, cc, continuations and inert constants.
pub fn random_process(rng: &mut CorpusRng) -> Process {
    let entry = |rng: &mut CorpusRng| match rng.gen_range(0..10) {
        0 => LcTerm::Zeta(rng.gen_range(0..3)),
        1 => LcTerm::Eta(rng.gen_range(0..3)),
        2 => LcTerm::Kont(Stack::from_terms([LcTerm::Zeta(rng.gen_range(0..3))]).expect("closed")),
        _ => random_term(rng, 8, true),
    };
    let len = rng.gen_range(0..4);
    let items: Vec<LcTerm> = (0..len).map(|_| entry(rng)).collect();
    let head = if rng.gen_bool(0.8) { random_term(rng, 10, true) } else { entry(rng) };
    Process::new(head, Stack::from_terms(items).expect("closed")).expect("closed")
}

pub fn processes(count: usize, seed: u64) -> Vec<Process> {
    let mut r = rng(seed);
    (0..count).map(|_| random_process(&mut r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{classify_horn, HornKind};

    #[test]
    fn reproducible() {
        assert_eq!(formulas(30, 7), formulas(30, 7));
        assert_ne!(formulas(30, 7), formulas(30, 8));
        assert_eq!(terms(20, 9, 3, true), terms(20, 9, 3, true));
    }

    #[test]
    fn everything_is_closed() {
        assert!(formulas(200, 1).iter().all(Formula::is_closed));
        assert!(terms(200, 12, 1, true).iter().all(LcTerm::is_closed));
        let _ = processes(100, 1);
    }

    #[test]
    fn horn_mix() {
        let fs = formulas(200, 11);
        let horn = fs.iter().filter(|f| classify_horn(f) != HornKind::NotHorn).count();
        assert!(horn > 0 && horn < fs.len());
        let mut r = rng(5);
        assert!((0..100).all(|_| classify_horn(&random_horn(&mut r, 3)) != HornKind::NotHorn));
    }

    #[test]
    fn small_formulas() {
        let fs = small_closed_formulas();
        assert!(fs.iter().all(|f| f.is_closed() && f.height() <= 2));
        assert!(fs.contains(&Formula::neq(BTerm::Zero, BTerm::One)));
        let mut sorted = fs.clone();
        sorted.sort_by_key(|f| f.to_string());
        sorted.dedup();
        assert_eq!(sorted.len(), fs.len());
    }
}
