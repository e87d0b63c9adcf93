//! Typing derivations for the λc-calculus and their checker.
//!
//! Derivations are given explicitly: the rules are not syntax directed
//! (∀-introduction, ∀-elimination and both `≠` rules keep the subject), so
//! nothing is inferred.

mod text;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{alpha_eq, bot, eq, subst_formula, BTerm, Formula, Ident};
use crate::lambda::{lc_alpha_eq, LcTerm};

pub use text::{parse_derivation, print_derivation, TextError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub context: Vec<(Ident, Formula)>,
    pub subject: LcTerm,
    pub ty: Formula,
}

impl Judgement {
    pub fn new(context: Vec<(Ident, Formula)>, subject: LcTerm, ty: Formula) -> Judgement {
        Judgement { context, subject, ty }
    }

    pub fn lookup(&self, x: &Ident) -> Option<&Formula> {
        self.context.iter().find(|(y, _)| y == x).map(|(_, a)| a)
    }

    fn ctx_vars(&self) -> BTreeSet<Ident> {
        self.context.iter().map(|(x, _)| x.clone()).collect()
    }

    /// Same judgement up to permutation and renaming of context variables.
    pub fn equivalent(&self, other: &Judgement) -> bool {
        if self.context.len() != other.context.len() || !alpha_eq(&self.ty, &other.ty) {
            return false;
        }
        let n = self.context.len();
        let mut used = vec![false; n];
        let mut image: Vec<usize> = Vec::with_capacity(n);
        fn search(a: &Judgement, b: &Judgement, used: &mut [bool], image: &mut Vec<usize>) -> bool {
            let i = image.len();
            if i == a.context.len() {
                let xs: Vec<Ident> = a.context.iter().map(|(x, _)| x.clone()).collect();
                let ys: Vec<LcTerm> = image.iter().map(|&j| LcTerm::Var(b.context[j].0.clone())).collect();
                return crate::lambda::subst_lc(&a.subject, &xs, &ys).is_ok_and(|t| lc_alpha_eq(&t, &b.subject));
            }
            for j in 0..b.context.len() {
                if !used[j] && alpha_eq(&a.context[i].1, &b.context[j].1) {
                    used[j] = true;
                    image.push(j);
                    if search(a, b, used, image) {
                        return true;
                    }
                    image.pop();
                    used[j] = false;
                }
            }
            false
        }
        search(self, other, &mut used, &mut image)
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, a)) in self.context.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {a}")?;
        }
        if !self.context.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {} : {}", self.subject, self.ty)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Abs,
    App,
    ForallIntro,
    ForallElim,
    Axiom,
    Peirce,
    NeqSubst,
    NeqElim,
}

impl Rule {
    pub const ALL: [Rule; 8] =
        [Rule::Abs, Rule::App, Rule::ForallIntro, Rule::ForallElim, Rule::Axiom, Rule::Peirce, Rule::NeqSubst, Rule::NeqElim];

    pub fn arity(self) -> usize {
        match self {
            Rule::Axiom | Rule::Peirce => 0,
            Rule::App => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Abs => "Abs",
            Rule::App => "App",
            Rule::ForallIntro => "ForallIntro",
            Rule::ForallElim => "ForallElim",
            Rule::Axiom => "Axiom",
            Rule::Peirce => "Peirce",
            Rule::NeqSubst => "NeqSubst",
            Rule::NeqElim => "NeqElim",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleData {
    None,
    /// The term `b` of a ∀-elimination.
    Inst(BTerm),
    /// `(z, a, b)` of a `≠`-substitution.
    Subst { z: Ident, a: BTerm, b: BTerm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub data: RuleData,
    pub premises: Vec<Derivation>,
    pub conclusion: Judgement,
}

impl Derivation {
    pub fn new(rule: Rule, data: RuleData, premises: Vec<Derivation>, conclusion: Judgement) -> Derivation {
        Derivation { rule, data, premises, conclusion }
    }

    pub fn leaf(rule: Rule, conclusion: Judgement) -> Derivation {
        Derivation::new(rule, RuleData::None, Vec::new(), conclusion)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("expected {expected} premises, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("context variable `{0}` is declared twice")]
    DuplicateVar(Ident),
    #[error("free variable `{0}` of the subject is not in the context")]
    UnboundVar(Ident),
    #[error("missing or wrong rule data")]
    Data,
    #[error("subject has the wrong shape: {0}")]
    Subject(String),
    #[error("type has the wrong shape: {0}")]
    Type(String),
    #[error("premise {0} does not match: {1}")]
    Premise(usize, String),
    #[error("`{0}` is not declared with this type in the context")]
    NotInContext(Ident),
    #[error("side condition `{0} not free in Γ` violated")]
    NotFree(Ident),
    #[error("bound variable `{0}` is already in the context")]
    BinderClash(Ident),
    #[error("contexts are not instances Γ[{z}:=a] and Γ[{z}:=b]")]
    NoTemplate { z: Ident },
}

/// A rejected node: its path from the root (premise indices) and what failed.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at {} ({rule}): {violation}", path_str(.path))]
pub struct TypeError {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub violation: Violation,
}

fn path_str(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

fn same_context(a: &[(Ident, Formula)], b: &[(Ident, Formula)]) -> bool {
    a.len() == b.len() && a.iter().all(|(x, f)| b.iter().any(|(y, g)| x == y && alpha_eq(f, g)))
}

fn formula_free(a: &Formula) -> BTreeSet<Ident> {
    a.free_vars()
}

/// Checks every node of `d` and returns its conclusion.
pub fn check_derivation(d: &Derivation) -> Result<&Judgement, TypeError> {
    let mut path = Vec::new();
    check_node(d, &mut path)?;
    Ok(&d.conclusion)
}

fn check_node(d: &Derivation, path: &mut Vec<usize>) -> Result<(), TypeError> {
    let fail = |v: Violation, path: &Vec<usize>| TypeError { path: path.clone(), rule: d.rule, violation: v };
    check_node_local(d).map_err(|v| fail(v, path))?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(p, path)?;
        path.pop();
    }
    Ok(())
}

fn premise_mismatch(i: usize, what: &str) -> Violation {
    Violation::Premise(i, what.to_string())
}

fn check_node_local(d: &Derivation) -> Result<(), Violation> {
    let j = &d.conclusion;
    if d.premises.len() != d.rule.arity() {
        return Err(Violation::Arity { expected: d.rule.arity(), found: d.premises.len() });
    }
    let vars = j.ctx_vars();
    if vars.len() != j.context.len() {
        let mut seen = BTreeSet::new();
        let dup = j.context.iter().find(|(x, _)| !seen.insert(x.clone())).expect("duplicate exists");
        return Err(Violation::DuplicateVar(dup.0.clone()));
    }
    if let Some(x) = j.subject.free_vars().into_iter().find(|x| !vars.contains(x)) {
        return Err(Violation::UnboundVar(x));
    }
    let needs_none = !matches!(d.rule, Rule::ForallElim | Rule::NeqSubst);
    if needs_none && d.data != RuleData::None {
        return Err(Violation::Data);
    }
    let p = |i: usize| &d.premises[i].conclusion;
    match d.rule {
        Rule::Axiom => match &j.subject {
            LcTerm::Var(x) => match j.lookup(x) {
                Some(a) if alpha_eq(a, &j.ty) => Ok(()),
                _ => Err(Violation::NotInContext(x.clone())),
            },
            _ => Err(Violation::Subject("expected a variable".into())),
        },
        Rule::Peirce => {
            if j.subject != LcTerm::Cc {
                return Err(Violation::Subject("expected cc".into()));
            }
            if let Formula::Impl(lhs, a3) = &j.ty {
                if let Formula::Impl(ab, a2) = &**lhs {
                    if let Formula::Impl(a1, _) = &**ab {
                        if alpha_eq(a1, a2) && alpha_eq(a2, a3) {
                            return Ok(());
                        }
                    }
                }
            }
            Err(Violation::Type("expected ((A -> B) -> A) -> A".into()))
        }
        Rule::Abs => {
            let (LcTerm::Lam(x, body), Formula::Impl(a, b)) = (&j.subject, &j.ty) else {
                return Err(Violation::Subject("expected an abstraction typed by an implication".into()));
            };
            if vars.contains(x) {
                return Err(Violation::BinderClash(x.clone()));
            }
            let q = p(0);
            let mut extended = j.context.clone();
            extended.push((x.clone(), (**a).clone()));
            if !same_context(&q.context, &extended) {
                return Err(premise_mismatch(0, "context must be Γ extended by the bound variable"));
            }
            if !lc_alpha_eq(&q.subject, body) {
                return Err(premise_mismatch(0, "subject must be the body"));
            }
            if !alpha_eq(&q.ty, b) {
                return Err(premise_mismatch(0, "type must be the conclusion of the implication"));
            }
            Ok(())
        }
        Rule::App => {
            let LcTerm::App(t, u) = &j.subject else {
                return Err(Violation::Subject("expected an application".into()));
            };
            let (f, a) = (p(0), p(1));
            if !same_context(&f.context, &j.context) {
                return Err(premise_mismatch(0, "context differs"));
            }
            if !same_context(&a.context, &j.context) {
                return Err(premise_mismatch(1, "context differs"));
            }
            if !lc_alpha_eq(&f.subject, t) {
                return Err(premise_mismatch(0, "subject must be the function"));
            }
            if !lc_alpha_eq(&a.subject, u) {
                return Err(premise_mismatch(1, "subject must be the argument"));
            }
            let Formula::Impl(dom, cod) = &f.ty else {
                return Err(premise_mismatch(0, "type must be an implication"));
            };
            if !alpha_eq(cod, &j.ty) {
                return Err(premise_mismatch(0, "implication must conclude the type"));
            }
            if !alpha_eq(dom, &a.ty) {
                return Err(premise_mismatch(1, "type must be the hypothesis of the implication"));
            }
            Ok(())
        }
        Rule::ForallIntro => {
            let Formula::Forall(z, body) = &j.ty else {
                return Err(Violation::Type("expected a universal formula".into()));
            };
            if j.context.iter().any(|(_, a)| formula_free(a).contains(z)) {
                return Err(Violation::NotFree(z.clone()));
            }
            same_subject(j, p(0))?;
            if !alpha_eq(&p(0).ty, body) {
                return Err(premise_mismatch(0, "type must be the body of the quantifier"));
            }
            Ok(())
        }
        Rule::ForallElim => {
            let RuleData::Inst(b) = &d.data else {
                return Err(Violation::Data);
            };
            same_subject(j, p(0))?;
            let Formula::Forall(z, body) = &p(0).ty else {
                return Err(premise_mismatch(0, "type must be universal"));
            };
            let inst = subst_formula(body, std::slice::from_ref(z), std::slice::from_ref(b)).map_err(|_| Violation::Data)?;
            if !alpha_eq(&inst, &j.ty) {
                return Err(Violation::Type("expected the instance A[z:=b]".into()));
            }
            Ok(())
        }
        Rule::NeqElim => {
            same_subject(j, p(0))?;
            match &p(0).ty {
                Formula::Neq(a, b) if a == b => Ok(()),
                _ => Err(premise_mismatch(0, "type must be an inequation a != a")),
            }
        }
        Rule::NeqSubst => {
            let RuleData::Subst { z, a, b } = &d.data else {
                return Err(Violation::Data);
            };
            let neq = Formula::neq(a.clone(), b.clone());
            if j.ty != neq {
                return Err(Violation::Type("expected the inequation a != b of the rule data".into()));
            }
            let q = p(0);
            if !lc_alpha_eq(&q.subject, &j.subject) {
                return Err(premise_mismatch(0, "subject differs"));
            }
            if q.ty != neq {
                return Err(premise_mismatch(0, "type must be a != b"));
            }
            if q.context.len() != j.context.len() {
                return Err(Violation::NoTemplate { z: z.clone() });
            }
            for (x, after) in &j.context {
                let before = q.lookup(x).ok_or(Violation::NoTemplate { z: z.clone() })?;
                if context_template(before, after, z, a, b).is_none() {
                    return Err(Violation::NoTemplate { z: z.clone() });
                }
            }
            Ok(())
        }
    }
}

fn same_subject(j: &Judgement, q: &Judgement) -> Result<(), Violation> {
    if !same_context(&q.context, &j.context) {
        return Err(premise_mismatch(0, "context differs"));
    }
    if !lc_alpha_eq(&q.subject, &j.subject) {
        return Err(premise_mismatch(0, "subject differs"));
    }
    Ok(())
}

/// A formula `G` with `G[z:=a] ≡ before` and `G[z:=b] ≡ after`, found by
/// anti-unification and then verified.
pub fn context_template(before: &Formula, after: &Formula, z: &Ident, a: &BTerm, b: &BTerm) -> Option<Formula> {
    fn term(p: &BTerm, c: &BTerm, z: &Ident, a: &BTerm, b: &BTerm) -> Option<BTerm> {
        if p == c {
            return Some(p.clone());
        }
        if p == a && c == b {
            return Some(BTerm::Var(z.clone()));
        }
        match (p, c) {
            (BTerm::Or(p1, p2), BTerm::Or(c1, c2)) => Some(BTerm::or(term(p1, c1, z, a, b)?, term(p2, c2, z, a, b)?)),
            (BTerm::And(p1, p2), BTerm::And(c1, c2)) => Some(BTerm::and(term(p1, c1, z, a, b)?, term(p2, c2, z, a, b)?)),
            (BTerm::Not(p1), BTerm::Not(c1)) => Some(BTerm::not(term(p1, c1, z, a, b)?)),
            _ => None,
        }
    }
    fn formula(p: &Formula, c: &Formula, z: &Ident, a: &BTerm, b: &BTerm) -> Option<Formula> {
        match (p, c) {
            (Formula::Neq(p1, p2), Formula::Neq(c1, c2)) => Some(Formula::neq(term(p1, c1, z, a, b)?, term(p2, c2, z, a, b)?)),
            (Formula::Impl(p1, p2), Formula::Impl(c1, c2)) => {
                Some(Formula::imp(formula(p1, c1, z, a, b)?, formula(p2, c2, z, a, b)?))
            }
            (Formula::Forall(v, p1), Formula::Forall(w, c1)) if v == w && v != z => {
                Some(Formula::forall(v.clone(), formula(p1, c1, z, a, b)?))
            }
            _ => None,
        }
    }
    let g = formula(before, after, z, a, b)?;
    let at = |t: &BTerm| subst_formula(&g, std::slice::from_ref(z), std::slice::from_ref(t)).ok();
    (alpha_eq(&at(a)?, before) && alpha_eq(&at(b)?, after)).then_some(g)
}

/// `cc (λk. x (k t))`.
pub fn eq_elim_macro(x: &Ident, t: &LcTerm) -> LcTerm {
    let k = fresh_k(x, t);
    LcTerm::app(LcTerm::Cc, LcTerm::lam(k.clone(), LcTerm::app(LcTerm::Var(x.clone()), LcTerm::app(LcTerm::Var(k), t.clone()))))
}

fn fresh_k(x: &Ident, t: &LcTerm) -> Ident {
    let k = Ident::new("k");
    let taken = |y: &Ident| y == x || t.is_free(y);
    if taken(&k) {
        k.freshen(taken)
    } else {
        k
    }
}

/// Adds `x : e` to every context of `d`.
pub fn weaken(d: &Derivation, x: &Ident, e: &Formula) -> Result<Derivation, TypeError> {
    fn go(d: &Derivation, x: &Ident, e: &Formula, path: &mut Vec<usize>) -> Result<Derivation, TypeError> {
        let fail = |v: Violation| TypeError { path: path.clone(), rule: d.rule, violation: v };
        if d.conclusion.lookup(x).is_some() {
            return Err(fail(Violation::BinderClash(x.clone())));
        }
        let free = e.free_vars();
        match (&d.rule, &d.conclusion.ty, &d.data) {
            (Rule::ForallIntro, Formula::Forall(z, _), _) if free.contains(z) => return Err(fail(Violation::NotFree(z.clone()))),
            (Rule::NeqSubst, _, RuleData::Subst { z, .. }) if free.contains(z) => {
                return Err(fail(Violation::NoTemplate { z: z.clone() }))
            }
            _ => {}
        }
        let mut premises = Vec::with_capacity(d.premises.len());
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            premises.push(go(p, x, e, path)?);
            path.pop();
        }
        let mut conclusion = d.conclusion.clone();
        conclusion.context.push((x.clone(), e.clone()));
        Ok(Derivation { rule: d.rule, data: d.data.clone(), premises, conclusion })
    }
    go(d, x, e, &mut Vec::new())
}

/// From a derivation of `Γ ⊢ t : A[z:=a]`, builds one of
/// `Γ, x : a = b ⊢ cc (λk. x (k t)) : A[z:=b]`.
pub fn rewrite_derivation(
    d: &Derivation,
    x: &Ident,
    z: &Ident,
    a_body: &Formula,
    a: &BTerm,
    b: &BTerm,
) -> Result<Derivation, TypeError> {
    let top = |v: Violation| TypeError { path: Vec::new(), rule: d.rule, violation: v };
    let gamma = d.conclusion.context.clone();
    let t = d.conclusion.subject.clone();
    let k = fresh_k(x, &t);
    if gamma.iter().any(|(y, _)| y == x || y == &k) {
        return Err(top(Violation::BinderClash(x.clone())));
    }
    let mut avoid: BTreeSet<Ident> = a_body.all_vars();
    avoid.extend(a.vars());
    avoid.extend(b.vars());
    for (_, g) in &gamma {
        avoid.extend(g.all_vars());
    }
    let z2 = z.freshen(|v| avoid.contains(v));
    let template = subst_formula(a_body, std::slice::from_ref(z), &[BTerm::Var(z2.clone())]).map_err(|_| top(Violation::Data))?;
    let at = |u: &BTerm| subst_formula(&template, std::slice::from_ref(&z2), std::slice::from_ref(u)).expect("single variable");
    let (a_at, b_at) = (at(a), at(b));
    if !alpha_eq(&a_at, &d.conclusion.ty) {
        return Err(top(Violation::Type("premise type is not A[z:=a]".into())));
    }
    let neq = Formula::neq(a.clone(), b.clone());
    let eqab = eq(a.clone(), b.clone());
    let with = |extra: &[(Ident, Formula)]| {
        let mut c = gamma.clone();
        c.extend(extra.iter().cloned());
        c
    };
    let ctx_x = with(&[(x.clone(), eqab.clone())]);
    let ctx1 = with(&[(x.clone(), eqab.clone()), (k.clone(), Formula::imp(a_at.clone(), neq.clone()))]);
    let ctx2 = with(&[(x.clone(), eqab.clone()), (k.clone(), Formula::imp(b_at.clone(), neq.clone()))]);
    let kv = LcTerm::Var(k.clone());
    let xv = LcTerm::Var(x.clone());
    let kt = LcTerm::app(kv.clone(), t.clone());
    let xkt = LcTerm::app(xv.clone(), kt.clone());

    let weakened = weaken(&weaken(d, x, &eqab)?, &k, &Formula::imp(a_at.clone(), neq.clone()))?;
    let ax_k = Derivation::leaf(Rule::Axiom, Judgement::new(ctx1.clone(), kv, Formula::imp(a_at.clone(), neq.clone())));
    let app_kt = Derivation::new(Rule::App, RuleData::None, vec![ax_k, weakened], Judgement::new(ctx1, kt.clone(), neq.clone()));
    let moved = Derivation::new(
        Rule::NeqSubst,
        RuleData::Subst { z: z2, a: a.clone(), b: b.clone() },
        vec![app_kt],
        Judgement::new(ctx2.clone(), kt, neq.clone()),
    );
    let ax_x = Derivation::leaf(Rule::Axiom, Judgement::new(ctx2.clone(), xv, eqab));
    let absurd = Derivation::new(Rule::App, RuleData::None, vec![ax_x, moved], Judgement::new(ctx2.clone(), xkt.clone(), bot()));
    let elim = Derivation::new(Rule::NeqElim, RuleData::None, vec![absurd], Judgement::new(ctx2, xkt.clone(), b_at.clone()));
    let k_ty = Formula::imp(b_at.clone(), neq);
    let lam = LcTerm::lam(k, xkt);
    let abs = Derivation::new(
        Rule::Abs,
        RuleData::None,
        vec![elim],
        Judgement::new(ctx_x.clone(), lam.clone(), Formula::imp(k_ty.clone(), b_at.clone())),
    );
    let peirce_ty = Formula::imp(Formula::imp(k_ty, b_at.clone()), b_at.clone());
    let cc = Derivation::leaf(Rule::Peirce, Judgement::new(ctx_x.clone(), LcTerm::Cc, peirce_ty));
    Ok(Derivation::new(Rule::App, RuleData::None, vec![cc, abs], Judgement::new(ctx_x, LcTerm::app(LcTerm::Cc, lam), b_at)))
}

/// `⊢ λx.x : A → A`.
pub fn identity_derivation(a: &Formula) -> Derivation {
    let x = Ident::new("x");
    let ax = Derivation::leaf(Rule::Axiom, Judgement::new(vec![(x.clone(), a.clone())], LcTerm::Var(x.clone()), a.clone()));
    Derivation::new(Rule::Abs, RuleData::None, vec![ax], Judgement::new(vec![], LcTerm::lam(x, LcTerm::Var("x".into())), Formula::imp(a.clone(), a.clone())))
}

/// `⊢ cc : ((A → B) → A) → A`.
pub fn peirce_derivation(a: &Formula, b: &Formula) -> Derivation {
    let ty = Formula::imp(Formula::imp(Formula::imp(a.clone(), b.clone()), a.clone()), a.clone());
    Derivation::leaf(Rule::Peirce, Judgement::new(vec![], LcTerm::Cc, ty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_bterm, parse_formula, parse_term};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn identity_and_peirce() {
        let d = identity_derivation(&f("x != y"));
        assert!(check_derivation(&d).is_ok());
        assert!(check_derivation(&peirce_derivation(&f("_|_"), &f("0 != 1"))).is_ok());
        let bad = peirce_derivation(&f("_|_"), &f("0 != 1"));
        let mut bad = bad;
        bad.conclusion.ty = f("((0 != 0 -> 0 != 1) -> 0 != 0) -> 0 != 1");
        assert!(check_derivation(&bad).is_err());
    }

    #[test]
    fn forall_intro_freshness() {
        let a = f("z != 0");
        let ax = Derivation::leaf(Rule::Axiom, Judgement::new(vec![("x".into(), a.clone())], LcTerm::var("x"), a.clone()));
        let bad = Derivation::new(
            Rule::ForallIntro,
            RuleData::None,
            vec![ax],
            Judgement::new(vec![("x".into(), a.clone())], LcTerm::var("x"), Formula::forall("z", a)),
        );
        let err = check_derivation(&bad).unwrap_err();
        assert_eq!(err.violation, Violation::NotFree("z".into()));
        assert!(err.path.is_empty());
        assert!(err.to_string().contains("z not free in Γ"));
    }

    #[test]
    fn forall_rules() {
        let a = f("z != 1 -> z != 1");
        let body = identity_derivation(&f("z != 1"));
        let intro = Derivation::new(
            Rule::ForallIntro,
            RuleData::None,
            vec![body],
            Judgement::new(vec![], LcTerm::identity(), Formula::forall("z", a)),
        );
        let elim = Derivation::new(
            Rule::ForallElim,
            RuleData::Inst(BTerm::Zero),
            vec![intro.clone()],
            Judgement::new(vec![], LcTerm::identity(), f("0 != 1 -> 0 != 1")),
        );
        assert!(check_derivation(&elim).is_ok());
        let mut wrong = elim;
        wrong.data = RuleData::Inst(BTerm::One);
        let err = check_derivation(&wrong).unwrap_err();
        assert_eq!(err.rule, Rule::ForallElim);
    }

    #[test]
    fn rewrite_builds_checked_trees() {
        let a_body = f("z /\\ w != 0");
        let (a, b) = (parse_bterm("w").unwrap(), parse_bterm("~~w").unwrap());
        let premise_ty = subst_formula(&a_body, &["z".into()], std::slice::from_ref(&a)).unwrap();
        let ax = Derivation::leaf(Rule::Axiom, Judgement::new(vec![("y".into(), premise_ty.clone())], LcTerm::var("y"), premise_ty));
        let built = rewrite_derivation(&ax, &"x".into(), &"z".into(), &a_body, &a, &b).unwrap();
        let j = check_derivation(&built).unwrap();
        assert_eq!(j.subject, eq_elim_macro(&"x".into(), &LcTerm::var("y")));
        assert!(alpha_eq(&j.ty, &subst_formula(&a_body, &["z".into()], &[b]).unwrap()));
        let same = rewrite_derivation(&ax, &"x".into(), &"z".into(), &a_body, &a, &a).unwrap();
        assert!(check_derivation(&same).is_ok());
    }

    #[test]
    fn macro_shape() {
        let m = eq_elim_macro(&"x".into(), &LcTerm::var("t"));
        assert_eq!(m, parse_term("cc (\\k. x (k t))").unwrap());
        let clash = eq_elim_macro(&"x".into(), &LcTerm::var("k"));
        assert_eq!(clash, parse_term("cc (\\k'. x (k' k))").unwrap());
    }

    #[test]
    fn weakening() {
        let d = identity_derivation(&f("0 != 1"));
        let w = weaken(&d, &"y".into(), &f("z != 0")).unwrap();
        assert!(check_derivation(&w).is_ok());
        assert!(weaken(&d, &"x".into(), &f("z != 0")).is_err());
    }

    #[test]
    fn equivalence_up_to_renaming() {
        let j1 = Judgement::new(vec![("x".into(), f("_|_")), ("y".into(), f("0 != 1"))], parse_term("x y").unwrap(), f("_|_"));
        let j2 = Judgement::new(vec![("b".into(), f("0 != 1")), ("a".into(), f("_|_"))], parse_term("a b").unwrap(), f("_|_"));
        assert!(j1.equivalent(&j2));
        let j3 = Judgement::new(j2.context.clone(), parse_term("a a").unwrap(), f("_|_"));
        assert!(!j1.equivalent(&j3));
    }
}
