//! λc-terms, stacks and processes.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{conj_all, subst_formula, BTerm, Formula, FormulaError, Ident};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LcTerm {
    Var(Ident),
    App(Arc<LcTerm>, Arc<LcTerm>),
    Lam(Ident, Arc<LcTerm>),
    Cc,
    /// Stack constant `k_π`.
    Kont(Stack),
    /// Instruction `γ_A` carrying its formula.
    Gamma(Arc<Formula>),
    Zeta(u32),
    Eta(u32),
}

/// A stack `t₁ · … · tₙ · ω` of closed terms, shared structurally.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Stack(Option<Arc<StackCell>>);

#[derive(PartialEq, Eq, Hash, Debug)]
struct StackCell {
    head: LcTerm,
    tail: Stack,
    len: usize,
}

/// `t ⋆ π`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Process {
    pub term: LcTerm,
    pub stack: Stack,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error("term `{0}` is not closed")]
    NotClosed(String),
    #[error("substitution length mismatch: {vars} variables but {terms} terms")]
    LengthMismatch { vars: usize, terms: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

impl LcTerm {
    pub fn var(name: impl AsRef<str>) -> LcTerm {
        LcTerm::Var(Ident::new(name))
    }

    pub fn app(t: LcTerm, u: LcTerm) -> LcTerm {
        LcTerm::App(Arc::new(t), Arc::new(u))
    }

    /// `t u₁ … uₙ`.
    pub fn apps(t: LcTerm, us: impl IntoIterator<Item = LcTerm>) -> LcTerm {
        us.into_iter().fold(t, LcTerm::app)
    }

    pub fn lam(x: impl Into<Ident>, body: LcTerm) -> LcTerm {
        LcTerm::Lam(x.into(), Arc::new(body))
    }

    pub fn gamma(a: Formula) -> LcTerm {
        LcTerm::Gamma(Arc::new(a))
    }

    pub fn identity() -> LcTerm {
        LcTerm::lam("x", LcTerm::var("x"))
    }

    /// `(λx. x x)(λx. x x)`.
    pub fn omega() -> LcTerm {
        let delta = LcTerm::lam("x", LcTerm::app(LcTerm::var("x"), LcTerm::var("x")));
        LcTerm::app(delta.clone(), delta)
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        match self {
            LcTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            LcTerm::App(t, u) => {
                t.collect_free(bound, out);
                u.collect_free(bound, out);
            }
            LcTerm::Lam(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            _ => {}
        }
    }

    pub fn is_free(&self, x: &Ident) -> bool {
        match self {
            LcTerm::Var(y) => x == y,
            LcTerm::App(t, u) => t.is_free(x) || u.is_free(x),
            LcTerm::Lam(y, body) => y != x && body.is_free(x),
            _ => false,
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            LcTerm::Var(_) => false,
            LcTerm::App(t, u) => t.is_closed() && u.is_closed(),
            LcTerm::Lam(..) => self.free_vars().is_empty(),
            _ => true,
        }
    }

    /// Number of nodes: variables, constants and instructions count one, a
    /// λ adds one to its body and an application one to both sides.
    pub fn size(&self) -> usize {
        match self {
            LcTerm::App(t, u) => 1 + t.size() + u.size(),
            LcTerm::Lam(_, b) => 1 + b.size(),
            LcTerm::Kont(pi) => 1 + pi.iter().map(LcTerm::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&LcTerm, Vec<&LcTerm>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let LcTerm::App(t, u) = cur {
            args.push(&**u);
            cur = t;
        }
        args.reverse();
        (cur, args)
    }

    fn subst_map(&self, map: &[(Ident, LcTerm)]) -> LcTerm {
        match self {
            LcTerm::Var(x) => match map.iter().find(|(y, _)| y == x) {
                Some((_, u)) => u.clone(),
                None => self.clone(),
            },
            LcTerm::App(t, u) => LcTerm::app(t.subst_map(map), u.subst_map(map)),
            LcTerm::Lam(x, body) => {
                let live: Vec<(Ident, LcTerm)> = map
                    .iter()
                    .filter(|(y, _)| y != x && body.is_free(y))
                    .cloned()
                    .collect();
                if live.is_empty() {
                    return self.clone();
                }
                if !live.iter().any(|(_, u)| u.is_free(x)) {
                    return LcTerm::lam(x.clone(), body.subst_map(&live));
                }
                let fresh = x.freshen(|c| body.is_free(c) || live.iter().any(|(y, u)| y == c || u.is_free(c)));
                let mut renamed = live;
                renamed.push((x.clone(), LcTerm::Var(fresh.clone())));
                LcTerm::lam(fresh, body.subst_map(&renamed))
            }
            _ => self.clone(),
        }
    }

    /// Every `γ_A` tag, term before stack, outer before inner.
    pub fn collect_tags<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            LcTerm::App(t, u) => {
                t.collect_tags(out);
                u.collect_tags(out);
            }
            LcTerm::Lam(_, b) => b.collect_tags(out),
            LcTerm::Kont(pi) => pi.collect_tags(out),
            LcTerm::Gamma(a) => out.push(a),
            _ => {}
        }
    }
}

/// Simultaneous, capture-avoiding `t[x̄ := ū]`. Instruction tags are left alone.
pub fn subst_lc(t: &LcTerm, xs: &[Ident], us: &[LcTerm]) -> Result<LcTerm, LambdaError> {
    if xs.len() != us.len() {
        return Err(LambdaError::LengthMismatch { vars: xs.len(), terms: us.len() });
    }
    let map: Vec<(Ident, LcTerm)> = xs.iter().cloned().zip(us.iter().cloned()).collect();
    Ok(t.subst_map(&map))
}

/// `t[x := u]` for a single variable; the machine's Grab rule.
pub(crate) fn subst1(t: &LcTerm, x: &Ident, u: &LcTerm) -> LcTerm {
    t.subst_map(&[(x.clone(), u.clone())])
}

/// α-equivalence of λ-binders; tags compared up to formula α-equivalence.
pub fn lc_alpha_eq(a: &LcTerm, b: &LcTerm) -> bool {
    fn go(a: &LcTerm, b: &LcTerm, env: &mut Vec<(Ident, Ident)>) -> bool {
        match (a, b) {
            (LcTerm::Var(x), LcTerm::Var(y)) => {
                let lx = env.iter().rposition(|(l, _)| l == x);
                let ry = env.iter().rposition(|(_, r)| r == y);
                match (lx, ry) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (LcTerm::App(t1, u1), LcTerm::App(t2, u2)) => go(t1, t2, env) && go(u1, u2, env),
            (LcTerm::Lam(x, b1), LcTerm::Lam(y, b2)) => {
                env.push((x.clone(), y.clone()));
                let r = go(b1, b2, env);
                env.pop();
                r
            }
            (LcTerm::Cc, LcTerm::Cc) => true,
            (LcTerm::Kont(p), LcTerm::Kont(q)) => {
                p.len() == q.len() && p.iter().zip(q.iter()).all(|(s, t)| lc_alpha_eq(s, t))
            }
            (LcTerm::Gamma(f), LcTerm::Gamma(g)) => crate::formula::alpha_eq(f, g),
            (LcTerm::Zeta(m), LcTerm::Zeta(n)) | (LcTerm::Eta(m), LcTerm::Eta(n)) => m == n,
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

impl Stack {
    pub fn empty() -> Stack {
        Stack(None)
    }

    /// `t · self`; `t` must be closed.
    pub fn push(&self, t: LcTerm) -> Result<Stack, LambdaError> {
        if !t.is_closed() {
            return Err(LambdaError::NotClosed(t.to_string()));
        }
        Ok(self.push_unchecked(t))
    }

    pub(crate) fn push_unchecked(&self, t: LcTerm) -> Stack {
        Stack(Some(Arc::new(StackCell { head: t, tail: self.clone(), len: self.len() + 1 })))
    }

    /// `t₁ · … · tₙ · ω`, `t₁` on top.
    pub fn from_terms(items: impl IntoIterator<Item = LcTerm, IntoIter: DoubleEndedIterator>) -> Result<Stack, LambdaError> {
        items.into_iter().rev().try_fold(Stack::empty(), |acc, t| acc.push(t))
    }

    /// `t₁ · … · tₙ · self`.
    pub fn prepend(&self, items: impl IntoIterator<Item = LcTerm, IntoIter: DoubleEndedIterator>) -> Result<Stack, LambdaError> {
        items.into_iter().rev().try_fold(self.clone(), |acc, t| acc.push(t))
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |c| c.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn pop(&self) -> Option<(&LcTerm, &Stack)> {
        self.0.as_ref().map(|c| (&c.head, &c.tail))
    }

    /// The stack below the first `n` entries.
    pub fn drop_n(&self, n: usize) -> Option<&Stack> {
        let mut cur = self;
        for _ in 0..n {
            cur = cur.pop()?.1;
        }
        Some(cur)
    }

    pub fn iter(&self) -> StackIter<'_> {
        StackIter(self)
    }

    pub fn collect_tags<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        for t in self.iter() {
            t.collect_tags(out);
        }
    }
}

pub struct StackIter<'a>(&'a Stack);

impl<'a> Iterator for StackIter<'a> {
    type Item = &'a LcTerm;

    fn next(&mut self) -> Option<&'a LcTerm> {
        let (h, t) = self.0.pop()?;
        self.0 = t;
        Some(h)
    }
}

/// Structural equality that visits each pair of shared nodes once. Saved
/// continuations nest, so the tree behind a stack can be exponentially
/// larger than its graph.
#[derive(Default)]
pub struct SharedEq {
    seen: HashSet<(usize, usize)>,
}

impl SharedEq {
    pub fn new() -> SharedEq {
        SharedEq::default()
    }

    pub fn terms(&mut self, a: &LcTerm, b: &LcTerm) -> bool {
        match (a, b) {
            (LcTerm::App(f, x), LcTerm::App(g, y)) => self.arcs(f, g) && self.arcs(x, y),
            (LcTerm::Lam(x, t), LcTerm::Lam(y, u)) => x == y && self.arcs(t, u),
            (LcTerm::Kont(p), LcTerm::Kont(q)) => self.stacks(p, q),
            _ => a == b,
        }
    }

    fn arcs(&mut self, a: &Arc<LcTerm>, b: &Arc<LcTerm>) -> bool {
        let key = (Arc::as_ptr(a) as usize, Arc::as_ptr(b) as usize);
        if Arc::ptr_eq(a, b) || self.seen.contains(&key) {
            return true;
        }
        let same = self.terms(a, b);
        if same {
            self.seen.insert(key);
        }
        same
    }

    pub fn stacks(&mut self, a: &Stack, b: &Stack) -> bool {
        match (&a.0, &b.0) {
            (None, None) => true,
            (Some(x), Some(y)) => {
                let key = (Arc::as_ptr(x) as usize, Arc::as_ptr(y) as usize);
                if Arc::ptr_eq(x, y) || self.seen.contains(&key) {
                    return true;
                }
                let same = x.len == y.len && self.terms(&x.head, &y.head) && self.stacks(&x.tail, &y.tail);
                if same {
                    self.seen.insert(key);
                }
                same
            }
            _ => false,
        }
    }

    pub fn processes(&mut self, p: &Process, q: &Process) -> bool {
        self.terms(&p.term, &q.term) && self.stacks(&p.stack, &q.stack)
    }
}

impl Process {
    pub fn new(term: LcTerm, stack: Stack) -> Result<Process, LambdaError> {
        if !term.is_closed() {
            return Err(LambdaError::NotClosed(term.to_string()));
        }
        Ok(Process { term, stack })
    }

    pub(crate) fn new_unchecked(term: LcTerm, stack: Stack) -> Process {
        Process { term, stack }
    }

    pub fn collect_tags<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        self.term.collect_tags(out);
        self.stack.collect_tags(out);
    }
}

/// Substitution of first-order variables inside instruction tags.
pub trait FoSubst: Sized {
    fn fo_subst_map(&self, map: &(Vec<Ident>, Vec<BTerm>)) -> Result<Self, FormulaError>;

    fn fo_subst(&self, zs: &[Ident], bs: &[BTerm]) -> Result<Self, FormulaError> {
        self.fo_subst_map(&(zs.to_vec(), bs.to_vec()))
    }
}

impl FoSubst for LcTerm {
    fn fo_subst_map(&self, map: &(Vec<Ident>, Vec<BTerm>)) -> Result<Self, FormulaError> {
        Ok(match self {
            LcTerm::App(t, u) => LcTerm::app(t.fo_subst_map(map)?, u.fo_subst_map(map)?),
            LcTerm::Lam(x, b) => LcTerm::Lam(x.clone(), Arc::new(b.fo_subst_map(map)?)),
            LcTerm::Kont(pi) => LcTerm::Kont(pi.fo_subst_map(map)?),
            LcTerm::Gamma(a) => LcTerm::gamma(subst_formula(a, &map.0, &map.1)?),
            _ => self.clone(),
        })
    }
}

impl FoSubst for Stack {
    fn fo_subst_map(&self, map: &(Vec<Ident>, Vec<BTerm>)) -> Result<Self, FormulaError> {
        let items: Vec<LcTerm> = self.iter().map(|t| t.fo_subst_map(map)).collect::<Result<_, _>>()?;
        Ok(items.into_iter().rev().fold(Stack::empty(), |acc, t| acc.push_unchecked(t)))
    }
}

impl FoSubst for Process {
    fn fo_subst_map(&self, map: &(Vec<Ident>, Vec<BTerm>)) -> Result<Self, FormulaError> {
        Ok(Process { term: self.term.fo_subst_map(map)?, stack: self.stack.fo_subst_map(map)? })
    }
}

/// Anything that can carry instruction tags.
pub trait Tagged {
    fn tags(&self) -> Vec<&Formula>;
}

impl Tagged for LcTerm {
    fn tags(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_tags(&mut out);
        out
    }
}

impl Tagged for Stack {
    fn tags(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_tags(&mut out);
        out
    }
}

impl Tagged for Process {
    fn tags(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_tags(&mut out);
        out
    }
}

/// Conjunction of every tag in `x`; `0 ≠ 1` when there is none.
pub fn constraint_of(x: &impl Tagged) -> Formula {
    conj_all(x.tags().into_iter().cloned())
}

/// Closed, no stack constant, no `η`, and every `γ_A` unrestricted according
/// to `unrestricted`.
pub fn is_proof_like(t: &LcTerm, unrestricted: &impl Fn(&Formula) -> bool) -> bool {
    fn go(t: &LcTerm, unrestricted: &impl Fn(&Formula) -> bool) -> bool {
        match t {
            LcTerm::App(a, b) => go(a, unrestricted) && go(b, unrestricted),
            LcTerm::Lam(_, b) => go(b, unrestricted),
            LcTerm::Kont(_) | LcTerm::Eta(_) => false,
            LcTerm::Gamma(a) => unrestricted(a),
            _ => true,
        }
    }
    t.is_closed() && go(t, unrestricted)
}

// Printing.

fn write_lc(f: &mut fmt::Formatter<'_>, t: &LcTerm, ctx: Ctx) -> fmt::Result {
    match t {
        LcTerm::Var(x) => write!(f, "{x}"),
        LcTerm::Cc => f.write_str("cc"),
        LcTerm::Zeta(n) => write!(f, "zeta{n}"),
        LcTerm::Eta(n) => write!(f, "eta{n}"),
        LcTerm::Gamma(a) => write!(f, "g{{{a}}}"),
        LcTerm::Kont(pi) => {
            f.write_str("k[")?;
            for (i, u) in pi.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_lc(f, u, Ctx::Top)?;
            }
            f.write_str("]")
        }
        LcTerm::App(a, b) => {
            let paren = ctx == Ctx::Arg;
            if paren {
                f.write_str("(")?;
            }
            write_lc(f, a, Ctx::Fun)?;
            f.write_str(" ")?;
            write_lc(f, b, Ctx::Arg)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        LcTerm::Lam(x, body) => {
            let paren = ctx != Ctx::Top;
            if paren {
                f.write_str("(")?;
            }
            write!(f, "\\{x}. ")?;
            write_lc(f, body, Ctx::Top)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    Fun,
    Arg,
}

impl fmt::Display for LcTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lc(f, self, Ctx::Top)
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.iter() {
            write_lc(f, t, Ctx::Top)?;
            f.write_str(" . ")?;
        }
        f.write_str("[]")
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", self.term, self.stack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{bot, conj, verum};

    fn x() -> LcTerm {
        LcTerm::var("x")
    }

    #[test]
    fn subst_examples() {
        let id = Ident::new;
        assert_eq!(subst_lc(&x(), &[id("x")], &[LcTerm::Cc]).unwrap(), LcTerm::Cc);
        let t = LcTerm::lam("x", LcTerm::app(x(), LcTerm::var("y")));
        assert_eq!(
            subst_lc(&t, &[id("y")], &[LcTerm::Cc]).unwrap(),
            LcTerm::lam("x", LcTerm::app(x(), LcTerm::Cc))
        );
        let i = LcTerm::identity();
        assert_eq!(subst_lc(&i, &[id("x")], &[LcTerm::Cc]).unwrap(), i);
        assert!(subst_lc(&i, &[id("x")], &[]).is_err());
    }

    #[test]
    fn capture_is_avoided_for_open_replacements() {
        let t = LcTerm::lam("x", LcTerm::var("y"));
        let got = subst_lc(&t, &[Ident::new("y")], &[x()]).unwrap();
        assert!(lc_alpha_eq(&got, &LcTerm::lam("z", x())));
    }

    #[test]
    fn fo_subst_examples() {
        let z = Ident::new("z");
        let g = LcTerm::gamma(Formula::neq(BTerm::var("z"), BTerm::Zero));
        assert_eq!(
            g.fo_subst(std::slice::from_ref(&z), &[BTerm::One]).unwrap(),
            LcTerm::gamma(Formula::neq(BTerm::One, BTerm::Zero))
        );
        let k = LcTerm::Kont(Stack::from_terms([g]).unwrap());
        assert_eq!(
            k.fo_subst(std::slice::from_ref(&z), &[BTerm::Zero]).unwrap(),
            LcTerm::Kont(Stack::from_terms([LcTerm::gamma(bot())]).unwrap())
        );
        assert_eq!(LcTerm::Cc.fo_subst(&[z], &[BTerm::One]).unwrap(), LcTerm::Cc);
    }

    #[test]
    fn constraint_examples() {
        assert_eq!(constraint_of(&LcTerm::identity()), verum());
        let a = Formula::neq(BTerm::One, BTerm::Zero);
        let p = Process::new(
            LcTerm::gamma(a.clone()),
            Stack::from_terms([LcTerm::gamma(bot())]).unwrap(),
        )
        .unwrap();
        assert_eq!(constraint_of(&p), conj(a.clone(), bot()));
        let k = LcTerm::Kont(Stack::from_terms([LcTerm::gamma(a.clone())]).unwrap());
        assert_eq!(constraint_of(&k), a);
    }

    #[test]
    fn proof_likeness() {
        let all = |_: &Formula| true;
        assert!(is_proof_like(&LcTerm::identity(), &all));
        assert!(!is_proof_like(&LcTerm::Kont(Stack::empty()), &all));
        assert!(!is_proof_like(&LcTerm::Eta(0), &all));
        assert!(is_proof_like(&LcTerm::Zeta(0), &all));
        assert!(!is_proof_like(&LcTerm::gamma(bot()), &|a: &Formula| a != &bot()));
        assert!(!is_proof_like(&x(), &all));
    }

    #[test]
    fn stacks_require_closed_entries() {
        assert!(Stack::empty().push(x()).is_err());
        assert!(Process::new(x(), Stack::empty()).is_err());
        let s = Stack::from_terms([LcTerm::Cc, LcTerm::identity()]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.pop().unwrap().0, &LcTerm::Cc);
        assert_eq!(s.to_string(), "cc . \\x. x . []");
    }

    #[test]
    fn printing() {
        let t = LcTerm::app(LcTerm::identity(), LcTerm::app(LcTerm::Cc, LcTerm::identity()));
        assert_eq!(t.to_string(), "(\\x. x) (cc (\\x. x))");
        assert_eq!(LcTerm::omega().to_string(), "(\\x. x x) (\\x. x x)");
    }
}
