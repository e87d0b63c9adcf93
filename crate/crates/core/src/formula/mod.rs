//! First-order formulas over the signature `(0, 1, ∨, ∧, ¬)` with `≠`, `→`
//! and `∀` as the only primitive connectives.
//!
//! Everything else (`⊥`, `=`, `∧`, `∨`, `∃`) is an encoding built from those
//! three; see [`bot`], [`eq`], [`conj`], [`disj`] and [`exists`].

mod decompose;
mod horn;
mod table;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use decompose::{decompose, recompose, Decomposition, InnerBlock, InnerDecomposition, OuterBlock};
pub use horn::{classify_horn, HornKind};
pub use table::table_term;

/// A variable name. Used for first-order variables and for λ-variables alike;
/// the two sorts never mix inside a single syntax tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: impl AsRef<str>) -> Self {
        Ident(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `self` with primes appended until it avoids every name in `taken`.
    pub fn freshen(&self, taken: impl Fn(&Ident) -> bool) -> Ident {
        let mut candidate = format!("{}'", self.0);
        loop {
            let id = Ident::new(&candidate);
            if !taken(&id) {
                return id;
            }
            candidate.push('\'');
        }
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::new(s)
    }
}

impl From<String> for Ident {
    fn from(s: String) -> Self {
        Ident::new(s)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("substitution length mismatch: {vars} variables but {terms} terms")]
    LengthMismatch { vars: usize, terms: usize },
    #[error("variable `{0}` appears twice in a substitution")]
    DuplicateVar(Ident),
    #[error("unbound variable `{0}`")]
    Unbound(Ident),
}

/// First-order term of the language of Boolean algebras.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BTerm {
    Var(Ident),
    Zero,
    One,
    Or(Box<BTerm>, Box<BTerm>),
    And(Box<BTerm>, Box<BTerm>),
    Not(Box<BTerm>),
}

impl BTerm {
    pub fn var(name: impl AsRef<str>) -> BTerm {
        BTerm::Var(Ident::new(name))
    }

    pub fn or(a: BTerm, b: BTerm) -> BTerm {
        BTerm::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: BTerm, b: BTerm) -> BTerm {
        BTerm::And(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: BTerm) -> BTerm {
        BTerm::Not(Box::new(a))
    }

    pub fn bit(b: bool) -> BTerm {
        if b {
            BTerm::One
        } else {
            BTerm::Zero
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Ident>) {
        match self {
            BTerm::Var(x) => {
                out.insert(x.clone());
            }
            BTerm::Zero | BTerm::One => {}
            BTerm::Or(a, b) | BTerm::And(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            BTerm::Not(a) => a.collect_vars(out),
        }
    }

    pub fn vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn mentions(&self, x: &Ident) -> bool {
        match self {
            BTerm::Var(y) => x == y,
            BTerm::Zero | BTerm::One => false,
            BTerm::Or(a, b) | BTerm::And(a, b) => a.mentions(x) || b.mentions(x),
            BTerm::Not(a) => a.mentions(x),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            BTerm::Var(_) => false,
            BTerm::Zero | BTerm::One => true,
            BTerm::Or(a, b) | BTerm::And(a, b) => a.is_ground() && b.is_ground(),
            BTerm::Not(a) => a.is_ground(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            BTerm::Var(_) | BTerm::Zero | BTerm::One => 1,
            BTerm::Or(a, b) | BTerm::And(a, b) => 1 + a.size() + b.size(),
            BTerm::Not(a) => 1 + a.size(),
        }
    }

    fn subst_map(&self, map: &[(Ident, BTerm)]) -> BTerm {
        match self {
            BTerm::Var(x) => match map.iter().find(|(z, _)| z == x) {
                Some((_, b)) => b.clone(),
                None => self.clone(),
            },
            BTerm::Zero | BTerm::One => self.clone(),
            BTerm::Or(a, b) => BTerm::or(a.subst_map(map), b.subst_map(map)),
            BTerm::And(a, b) => BTerm::and(a.subst_map(map), b.subst_map(map)),
            BTerm::Not(a) => BTerm::not(a.subst_map(map)),
        }
    }

    /// Evaluation in an arbitrary Boolean algebra given by its operations.
    pub fn eval_with<T: Copy>(
        &self,
        lookup: &impl Fn(&Ident) -> Option<T>,
        ops: &BoolOps<T>,
    ) -> Result<T, FormulaError> {
        Ok(match self {
            BTerm::Var(x) => lookup(x).ok_or_else(|| FormulaError::Unbound(x.clone()))?,
            BTerm::Zero => ops.zero,
            BTerm::One => ops.one,
            BTerm::Or(a, b) => (ops.or)(a.eval_with(lookup, ops)?, b.eval_with(lookup, ops)?),
            BTerm::And(a, b) => (ops.and)(a.eval_with(lookup, ops)?, b.eval_with(lookup, ops)?),
            BTerm::Not(a) => (ops.not)(a.eval_with(lookup, ops)?),
        })
    }
}

/// Operations of a concrete Boolean algebra, for [`BTerm::eval_with`].
pub struct BoolOps<T> {
    pub zero: T,
    pub one: T,
    pub or: fn(T, T) -> T,
    pub and: fn(T, T) -> T,
    pub not: fn(T) -> T,
}

/// First-order formula: `a ≠ b`, `A → B`, `∀z A`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Neq(BTerm, BTerm),
    Impl(Box<Formula>, Box<Formula>),
    Forall(Ident, Box<Formula>),
}

impl Formula {
    pub fn neq(a: BTerm, b: BTerm) -> Formula {
        Formula::Neq(a, b)
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn forall(z: impl Into<Ident>, body: Formula) -> Formula {
        Formula::Forall(z.into(), Box::new(body))
    }

    /// `∀z̄ body`, outermost binder first.
    pub fn forall_all(zs: &[Ident], body: Formula) -> Formula {
        zs.iter().rev().fold(body, |acc, z| Formula::forall(z.clone(), acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        match self {
            Formula::Neq(a, b) => {
                for x in a.vars().into_iter().chain(b.vars()) {
                    if !bound.contains(&x) {
                        out.insert(x);
                    }
                }
            }
            Formula::Impl(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(z, body) => {
                bound.push(z.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, x: &Ident) -> bool {
        match self {
            Formula::Neq(a, b) => a.mentions(x) || b.mentions(x),
            Formula::Impl(a, b) => a.is_free(x) || b.is_free(x),
            Formula::Forall(z, body) => z != x && body.is_free(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Formula::Neq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Impl(a, b) => {
                a.collect_all(out);
                b.collect_all(out);
            }
            Formula::Forall(z, body) => {
                out.insert(z.clone());
                body.collect_all(out);
            }
        }
    }

    /// Neq leaves have height 0; each `→` or `∀` adds one.
    pub fn height(&self) -> usize {
        match self {
            Formula::Neq(..) => 0,
            Formula::Impl(a, b) => 1 + a.height().max(b.height()),
            Formula::Forall(_, body) => 1 + body.height(),
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Neq(..) => 0,
            Formula::Impl(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Forall(_, body) => 1 + body.quantifier_depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Neq(a, b) => 1 + a.size() + b.size(),
            Formula::Impl(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, body) => 1 + body.size(),
        }
    }

    /// No variables at all, hence no quantifiers either.
    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Neq(a, b) => a.is_ground() && b.is_ground(),
            Formula::Impl(a, b) => a.is_ground() && b.is_ground(),
            Formula::Forall(..) => false,
        }
    }

    pub(crate) fn subst_map(&self, map: &[(Ident, BTerm)]) -> Formula {
        match self {
            Formula::Neq(a, b) => Formula::Neq(a.subst_map(map), b.subst_map(map)),
            Formula::Impl(a, b) => Formula::imp(a.subst_map(map), b.subst_map(map)),
            Formula::Forall(y, body) => {
                let live: Vec<(Ident, BTerm)> = map
                    .iter()
                    .filter(|(z, _)| z != y && body.is_free(z))
                    .cloned()
                    .collect();
                if live.is_empty() {
                    return self.clone();
                }
                let captures = live.iter().any(|(_, b)| b.mentions(y));
                if !captures {
                    return Formula::forall(y.clone(), body.subst_map(&live));
                }
                let fresh = y.freshen(|c| {
                    body.is_free(c) || live.iter().any(|(z, b)| z == c || b.mentions(c))
                });
                let mut renamed = live;
                renamed.push((y.clone(), BTerm::Var(fresh.clone())));
                Formula::forall(fresh, body.subst_map(&renamed))
            }
        }
    }
}

fn pair_up(zs: &[Ident], bs: &[BTerm]) -> Result<Vec<(Ident, BTerm)>, FormulaError> {
    if zs.len() != bs.len() {
        return Err(FormulaError::LengthMismatch { vars: zs.len(), terms: bs.len() });
    }
    for (i, z) in zs.iter().enumerate() {
        if zs[..i].contains(z) {
            return Err(FormulaError::DuplicateVar(z.clone()));
        }
    }
    Ok(zs.iter().cloned().zip(bs.iter().cloned()).collect())
}

/// Simultaneous substitution `a[z̄ := b̄]`.
pub fn subst_term(a: &BTerm, zs: &[Ident], bs: &[BTerm]) -> Result<BTerm, FormulaError> {
    Ok(a.subst_map(&pair_up(zs, bs)?))
}

/// Simultaneous, capture-avoiding substitution `A[z̄ := b̄]`.
pub fn subst_formula(a: &Formula, zs: &[Ident], bs: &[BTerm]) -> Result<Formula, FormulaError> {
    Ok(a.subst_map(&pair_up(zs, bs)?))
}

/// α-equivalence: equal up to renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    fn term_eq(a: &BTerm, b: &BTerm, env: &[(Ident, Ident)]) -> bool {
        match (a, b) {
            (BTerm::Var(x), BTerm::Var(y)) => {
                let lx = env.iter().rposition(|(l, _)| l == x);
                let ry = env.iter().rposition(|(_, r)| r == y);
                match (lx, ry) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (BTerm::Zero, BTerm::Zero) | (BTerm::One, BTerm::One) => true,
            (BTerm::Or(a1, a2), BTerm::Or(b1, b2)) | (BTerm::And(a1, a2), BTerm::And(b1, b2)) => {
                term_eq(a1, b1, env) && term_eq(a2, b2, env)
            }
            (BTerm::Not(a1), BTerm::Not(b1)) => term_eq(a1, b1, env),
            _ => false,
        }
    }
    fn go(a: &Formula, b: &Formula, env: &mut Vec<(Ident, Ident)>) -> bool {
        match (a, b) {
            (Formula::Neq(a1, a2), Formula::Neq(b1, b2)) => term_eq(a1, b1, env) && term_eq(a2, b2, env),
            (Formula::Impl(a1, a2), Formula::Impl(b1, b2)) => go(a1, b1, env) && go(a2, b2, env),
            (Formula::Forall(x, a1), Formula::Forall(y, b1)) => {
                env.push((x.clone(), y.clone()));
                let r = go(a1, b1, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

// Encodings of the derived connectives.

/// `⊥` is `0 ≠ 0`.
pub fn bot() -> Formula {
    Formula::Neq(BTerm::Zero, BTerm::Zero)
}

/// The canonical true formula `0 ≠ 1`.
pub fn verum() -> Formula {
    Formula::Neq(BTerm::Zero, BTerm::One)
}

/// `A → ⊥`.
pub fn neg(a: Formula) -> Formula {
    Formula::imp(a, bot())
}

/// `a = b` is `(a ≠ b) → ⊥`.
pub fn eq(a: BTerm, b: BTerm) -> Formula {
    neg(Formula::Neq(a, b))
}

/// `A ∧ B` is `(A → B → ⊥) → ⊥`.
pub fn conj(a: Formula, b: Formula) -> Formula {
    neg(Formula::imp(a, neg(b)))
}

/// `A ∨ B` is `(A → ⊥) → (B → ⊥) → ⊥`.
pub fn disj(a: Formula, b: Formula) -> Formula {
    Formula::imp(neg(a), Formula::imp(neg(b), bot()))
}

/// `∃z A` is `(∀z (A → ⊥)) → ⊥`.
pub fn exists(z: impl Into<Ident>, a: Formula) -> Formula {
    neg(Formula::forall(z, neg(a)))
}

/// Right-nested conjunction; the empty conjunction is [`verum`].
pub fn conj_all(items: impl IntoIterator<Item = Formula>) -> Formula {
    let mut items: Vec<Formula> = items.into_iter().collect();
    let Some(mut acc) = items.pop() else {
        return verum();
    };
    while let Some(prev) = items.pop() {
        acc = conj(prev, acc);
    }
    acc
}

pub type Env01 = HashMap<Ident, bool>;

pub const BOOL_OPS: BoolOps<bool> = BoolOps {
    zero: false,
    one: true,
    or: |a, b| a || b,
    and: |a, b| a && b,
    not: |a| !a,
};

/// Value of a term in the two-element algebra.
pub fn eval_term_01(a: &BTerm, env: &Env01) -> Result<bool, FormulaError> {
    a.eval_with(&|x| env.get(x).copied(), &BOOL_OPS)
}

/// Classical truth in `{0,1}`; `∀` ranges over both elements.
pub fn eval_formula_01(a: &Formula, env: &Env01) -> Result<bool, FormulaError> {
    let mut scope = env.clone();
    eval_in(a, &mut scope)
}

fn eval_in(a: &Formula, env: &mut Env01) -> Result<bool, FormulaError> {
    match a {
        Formula::Neq(l, r) => Ok(eval_term_01(l, env)? != eval_term_01(r, env)?),
        Formula::Impl(p, q) => Ok(!eval_in(p, env)? || eval_in(q, env)?),
        Formula::Forall(z, body) => {
            let saved = env.get(z).copied();
            let mut result = true;
            for bit in [false, true] {
                env.insert(z.clone(), bit);
                match eval_in(body, env) {
                    Ok(true) => {}
                    Ok(false) => {
                        result = false;
                        break;
                    }
                    Err(e) => {
                        restore(env, z, saved);
                        return Err(e);
                    }
                }
            }
            restore(env, z, saved);
            Ok(result)
        }
    }
}

fn restore(env: &mut Env01, z: &Ident, saved: Option<bool>) {
    match saved {
        Some(v) => env.insert(z.clone(), v),
        None => env.remove(z),
    };
}

/// A finite equational axiomatisation of Boolean algebras with at least two
/// elements: `0 ≠ 1` plus commutativity, associativity, absorption,
/// distributivity, complement and unit laws, each as `∀z̄ a = b`.
pub fn tbool_axioms() -> Vec<Formula> {
    let x = || BTerm::var("x");
    let y = || BTerm::var("y");
    let z = || BTerm::var("z");
    let ax = |vars: &[&str], a: BTerm, b: BTerm| {
        let ids: Vec<Ident> = vars.iter().map(Ident::new).collect();
        Formula::forall_all(&ids, eq(a, b))
    };
    vec![
        verum(),
        ax(&["x", "y"], BTerm::or(x(), y()), BTerm::or(y(), x())),
        ax(&["x", "y"], BTerm::and(x(), y()), BTerm::and(y(), x())),
        ax(
            &["x", "y", "z"],
            BTerm::or(x(), BTerm::or(y(), z())),
            BTerm::or(BTerm::or(x(), y()), z()),
        ),
        ax(
            &["x", "y", "z"],
            BTerm::and(x(), BTerm::and(y(), z())),
            BTerm::and(BTerm::and(x(), y()), z()),
        ),
        ax(&["x", "y"], BTerm::or(x(), BTerm::and(x(), y())), x()),
        ax(&["x", "y"], BTerm::and(x(), BTerm::or(x(), y())), x()),
        ax(
            &["x", "y", "z"],
            BTerm::and(x(), BTerm::or(y(), z())),
            BTerm::or(BTerm::and(x(), y()), BTerm::and(x(), z())),
        ),
        ax(
            &["x", "y", "z"],
            BTerm::or(x(), BTerm::and(y(), z())),
            BTerm::and(BTerm::or(x(), y()), BTerm::or(x(), z())),
        ),
        ax(&["x"], BTerm::or(x(), BTerm::not(x())), BTerm::One),
        ax(&["x"], BTerm::and(x(), BTerm::not(x())), BTerm::Zero),
        ax(&["x"], BTerm::or(x(), BTerm::Zero), x()),
        ax(&["x"], BTerm::and(x(), BTerm::One), x()),
    ]
}

// Printing. Precedence: `~` binds tightest, then `/\`, then `\/`; both binary
// operators associate to the left. `->` associates to the right and a
// quantifier body extends as far right as possible.

fn term_prec(a: &BTerm) -> u8 {
    match a {
        BTerm::Or(..) => 1,
        BTerm::And(..) => 2,
        _ => 3,
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, a: &BTerm, min: u8) -> fmt::Result {
    let paren = term_prec(a) < min;
    if paren {
        f.write_str("(")?;
    }
    match a {
        BTerm::Var(x) => write!(f, "{x}")?,
        BTerm::Zero => f.write_str("0")?,
        BTerm::One => f.write_str("1")?,
        BTerm::Or(l, r) => {
            write_term(f, l, 1)?;
            f.write_str(" \\/ ")?;
            write_term(f, r, 2)?;
        }
        BTerm::And(l, r) => {
            write_term(f, l, 2)?;
            f.write_str(" /\\ ")?;
            write_term(f, r, 3)?;
        }
        BTerm::Not(x) => {
            f.write_str("~")?;
            write_term(f, x, 3)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for BTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, 0)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Neq(a, b) => write!(f, "{a} != {b}"),
            Formula::Impl(a, b) => {
                if matches!(**a, Formula::Neq(..)) {
                    write!(f, "{a} -> {b}")
                } else {
                    write!(f, "({a}) -> {b}")
                }
            }
            Formula::Forall(z, body) => write!(f, "forall {z}. {body}"),
        }
    }
}
