//! Denotations of λc-terms and closed formulas in `D_∞`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::elem::{app, arrow, join, join_all, DElem, Fin};
use super::lattice::{level, MAX_RANK};
use super::DomainError;
use crate::formula::{eval_term_01, Env01, Formula, Ident};
use crate::lambda::LcTerm;

pub type Env = HashMap<Ident, DElem>;

/// Default `N'` for the cc approximation: the largest index set whose Peirce
/// joinands still have compact sources.
pub const DEFAULT_N_PRIME: usize = 1;

/// Largest `N'` the approximation supports.
pub const MAX_N_PRIME: usize = MAX_RANK - 2;

/// `⋁ ((β→γ)→β)→β` over `β, γ ∈ D_{N'}`, tagged as a truncation at `N'`.
pub fn cc_elem(n_prime: usize) -> Result<DElem, DomainError> {
    static CACHE: OnceLock<Vec<OnceLock<DElem>>> = OnceLock::new();
    if n_prime > MAX_N_PRIME {
        return Err(DomainError::RankCap { rank: n_prime + 3, cap: MAX_RANK + 1 });
    }
    let slots = CACHE.get_or_init(|| (0..=MAX_N_PRIME).map(|_| OnceLock::new()).collect());
    if let Some(e) = slots[n_prime].get() {
        return Ok(e.clone());
    }
    let l = level(n_prime)?;
    let mut parts = Vec::new();
    for b in l.elements() {
        let beta = DElem::finite(Fin { rank: n_prime, idx: b });
        for g in l.elements() {
            let gamma = DElem::finite(Fin { rank: n_prime, idx: g });
            parts.push(peirce(&beta, &gamma)?);
        }
    }
    let e = join_all(parts).with_truncation(Some(n_prime));
    Ok(slots[n_prime].get_or_init(|| e).clone())
}

/// `((β→γ)→β)→β`.
pub fn peirce(beta: &DElem, gamma: &DElem) -> Result<DElem, DomainError> {
    arrow(&arrow(&arrow(beta, gamma)?, beta)?, beta)
}

#[derive(Clone)]
enum Scope {
    Empty,
    Bind(Arc<(Ident, DElem, Scope)>),
    Base(Arc<Env>),
}

impl Scope {
    fn get(&self, x: &Ident) -> Option<&DElem> {
        match self {
            Scope::Empty => None,
            Scope::Base(env) => env.get(x),
            Scope::Bind(cell) => {
                if &cell.0 == x {
                    Some(&cell.1)
                } else {
                    cell.2.get(x)
                }
            }
        }
    }
}

fn has_cc(t: &LcTerm) -> bool {
    match t {
        LcTerm::Cc => true,
        LcTerm::App(a, b) => has_cc(a) || has_cc(b),
        LcTerm::Lam(_, b) => has_cc(b),
        LcTerm::Kont(pi) => pi.iter().any(has_cc),
        _ => false,
    }
}

/// `⟦t⟧` under `env`; cc is read as `cc_elem(n_prime)`.
pub fn denote(t: &LcTerm, env: &Env, n_prime: usize) -> Result<DElem, DomainError> {
    let scope = if env.is_empty() { Scope::Empty } else { Scope::Base(Arc::new(env.clone())) };
    den(t, &scope, n_prime)
}

pub fn denote_closed(t: &LcTerm, n_prime: usize) -> Result<DElem, DomainError> {
    den(t, &Scope::Empty, n_prime)
}

fn den(t: &LcTerm, scope: &Scope, n_prime: usize) -> Result<DElem, DomainError> {
    match t {
        LcTerm::Var(x) => scope.get(x).cloned().ok_or_else(|| DomainError::Unbound(x.to_string())),
        LcTerm::App(f, a) => app(&den(f, scope, n_prime)?, &den(a, scope, n_prime)?),
        LcTerm::Lam(x, body) => {
            let (x, body, scope) = (x.clone(), body.clone(), scope.clone());
            let tag = has_cc(&body).then_some(n_prime);
            let f = DElem::lam(move |a| {
                let inner = Scope::Bind(Arc::new((x.clone(), a.clone(), scope.clone())));
                den(&body, &inner, n_prime)
            });
            Ok(f.with_truncation(tag))
        }
        LcTerm::Cc => cc_elem(n_prime),
        LcTerm::Kont(pi) => {
            let args = pi.iter().map(|u| den(u, &Scope::Empty, n_prime)).collect::<Result<Vec<_>, _>>()?;
            let tag = pi.iter().any(has_cc).then_some(n_prime);
            let f = DElem::lam(move |y| args.iter().try_fold(y.clone(), |acc, u| app(&acc, u)));
            Ok(f.with_truncation(tag))
        }
        LcTerm::Gamma(_) | LcTerm::Zeta(_) | LcTerm::Eta(_) => Ok(DElem::bottom()),
    }
}

/// `⟦A⟧` for a closed formula: a true inequation is `⊥`, a false one `⊤`,
/// implication is the step function and `∀` joins the two instances.
pub fn denote_formula(a: &Formula) -> Result<DElem, DomainError> {
    if !a.is_closed() {
        return Err(DomainError::OpenFormula(a.to_string()));
    }
    den_formula(a, &mut Env01::new())
}

fn den_formula(a: &Formula, env: &mut Env01) -> Result<DElem, DomainError> {
    match a {
        Formula::Neq(l, r) => {
            let holds = eval_term_01(l, env).expect("closed") != eval_term_01(r, env).expect("closed");
            Ok(if holds { DElem::bottom() } else { DElem::top() })
        }
        Formula::Impl(p, q) => arrow(&den_formula(p, env)?, &den_formula(q, env)?),
        Formula::Forall(z, body) => {
            let saved = env.get(z).copied();
            env.insert(z.clone(), false);
            let lo = den_formula(body, env);
            env.insert(z.clone(), true);
            let hi = den_formula(body, env);
            match saved {
                Some(v) => env.insert(z.clone(), v),
                None => env.remove(z),
            };
            Ok(join(&lo?, &hi?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{bot, verum};
    use crate::syntax::parse_term;

    #[test]
    fn formula_denotations() {
        assert_eq!(denote_formula(&verum()).unwrap().as_finite(), Some(Fin { rank: 0, idx: 0 }));
        assert_eq!(denote_formula(&bot()).unwrap().as_finite(), Some(Fin { rank: 0, idx: 1 }));
        let id_like = denote_formula(&Formula::imp(bot(), bot())).unwrap();
        assert_eq!(id_like.as_finite(), Some(Fin { rank: 1, idx: 1 }));
    }

    #[test]
    fn solvability() {
        let id = denote_closed(&LcTerm::identity(), 1).unwrap();
        let omega = denote_closed(&LcTerm::omega(), 1).unwrap();
        for n in 1..=2 {
            assert_ne!(id.comp(n).unwrap(), 0);
            assert_eq!(omega.comp(n).unwrap(), 0);
        }
        assert_eq!(omega.comp(0).unwrap(), 0);
    }

    #[test]
    fn endless_abstraction_is_bottom() {
        let t = crate::syntax::parse_term(r"(\x. \y. x x) (\x. \y. x x)").unwrap();
        let d = denote_closed(&t, 1).unwrap();
        for n in 0..=3 {
            assert_eq!(d.comp(n).unwrap(), 0);
        }
    }

    #[test]
    fn identity_dominates_top_arrow_top() {
        let id = denote_closed(&LcTerm::identity(), 1).unwrap();
        let s = arrow(&DElem::top(), &DElem::top()).unwrap();
        assert!(s.leq(&id, 3).unwrap());
    }

    #[test]
    fn continuations_expand() {
        let k = parse_term("k[\\x. x]").unwrap();
        let e = parse_term("\\y. y (\\x. x)").unwrap();
        let (dk, de) = (denote_closed(&k, 1).unwrap(), denote_closed(&e, 1).unwrap());
        for n in 0..=3 {
            assert!(dk.eq_at(&de, n).unwrap());
        }
    }

    #[test]
    fn cc_is_tagged_and_grows() {
        let c0 = cc_elem(0).unwrap();
        let c1 = cc_elem(1).unwrap();
        assert_eq!(c0.truncation(), Some(0));
        assert_eq!(c1.truncation(), Some(1));
        for n in 0..=3 {
            assert!(c0.leq(&c1, n).unwrap());
        }
        assert!(cc_elem(2).is_err());
        assert!(c1.coherent(3).unwrap());
    }
}
