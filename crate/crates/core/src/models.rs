//! Truth of closed formulas in concrete Boolean algebras, and the layered
//! validity check "true in every Boolean algebra with at least two elements".
//!
//! The model checker never materialises algebra elements. With variables
//! `z₁ … z_d` in scope it keeps, for every minterm `±z₁ ∧ … ∧ ±z_d`, the size
//! of that region: an exact atom count in `{0,1}^k`, or zero/infinite in the
//! atomless algebra. A term denotes a set of minterms and `a ≠ b` holds iff
//! some minterm of the symmetric difference is nonempty. A quantifier splits
//! every region in all possible ways.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{classify_horn, eval_formula_01, BTerm, Env01, Formula, HornKind, Ident};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BASpec {
    /// `{0,1}^k`.
    PowerFinite(u32),
    /// The countable atomless algebra.
    Atomless,
}

impl fmt::Display for BASpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BASpec::PowerFinite(k) => write!(f, "pf{k}"),
            BASpec::Atomless => f.write_str("atomless"),
        }
    }
}

impl FromStr for BASpec {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("atomless") {
            return Ok(BASpec::Atomless);
        }
        match s.strip_prefix("pf").and_then(|n| n.parse::<u32>().ok()) {
            Some(k) if k >= 1 => Ok(BASpec::PowerFinite(k)),
            _ => Err(ModelError::BadSpec(s.to_string())),
        }
    }
}

/// Comma-separated family: `pf2`, `pf1-4`, `atomless`.
pub fn parse_family(s: &str) -> Result<Vec<BASpec>, ModelError> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        if let Some((lo, hi)) = item.strip_prefix("pf").and_then(|r| r.split_once('-')) {
            let lo: u32 = lo.parse().map_err(|_| ModelError::BadSpec(item.into()))?;
            let hi: u32 = hi.parse().map_err(|_| ModelError::BadSpec(item.into()))?;
            if lo == 0 || hi < lo {
                return Err(ModelError::BadSpec(item.into()));
            }
            out.extend((lo..=hi).map(BASpec::PowerFinite));
        } else {
            out.push(item.parse()?);
        }
    }
    if out.is_empty() {
        return Err(ModelError::BadSpec(s.into()));
    }
    Ok(out)
}

pub fn default_family() -> Vec<BASpec> {
    let mut f: Vec<BASpec> = (1..=4).map(BASpec::PowerFinite).collect();
    f.push(BASpec::Atomless);
    f
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("formula is not closed (free: {0})")]
    Open(String),
    #[error("quantifier depth {depth} exceeds the limit {limit}")]
    TooDeep { depth: usize, limit: usize },
    #[error("{atoms} atoms exceeds the limit {limit}")]
    TooManyAtoms { atoms: u32, limit: u32 },
    #[error("unknown algebra `{0}` (expected pfN, pfA-B or atomless)")]
    BadSpec(String),
}

/// Cost guards for the checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_depth: usize,
    pub max_atoms: u32,
    pub brute_max_atoms: u32,
}

/// Minterm masks are `u128`, so at most seven variables can be in scope.
pub const HARD_MAX_DEPTH: usize = 7;

impl Default for Limits {
    fn default() -> Self {
        Limits { max_depth: 6, max_atoms: 6, brute_max_atoms: 3 }
    }
}

fn require_closed(a: &Formula) -> Result<(), ModelError> {
    let free = a.free_vars();
    if free.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = free.iter().map(Ident::as_str).collect();
        Err(ModelError::Open(names.join(", ")))
    }
}

fn var_mask(i: usize) -> u128 {
    (0..128u32).filter(|m| (m >> i) & 1 == 1).fold(0u128, |acc, m| acc | (1u128 << m))
}

fn full_mask(cells: usize) -> u128 {
    if cells >= 128 {
        u128::MAX
    } else {
        (1u128 << cells) - 1
    }
}

struct Checker {
    atomless: bool,
    var_masks: [u128; HARD_MAX_DEPTH],
}

impl Checker {
    fn new(spec: BASpec) -> Checker {
        let mut var_masks = [0u128; HARD_MAX_DEPTH];
        for (i, m) in var_masks.iter_mut().enumerate() {
            *m = var_mask(i);
        }
        Checker { atomless: spec == BASpec::Atomless, var_masks }
    }

    fn mask(&self, t: &BTerm, scope: &[Ident], full: u128) -> u128 {
        match t {
            BTerm::Var(x) => {
                let i = scope.iter().rposition(|y| y == x).expect("closed formula");
                self.var_masks[i] & full
            }
            BTerm::Zero => 0,
            BTerm::One => full,
            BTerm::Or(a, b) => self.mask(a, scope, full) | self.mask(b, scope, full),
            BTerm::And(a, b) => self.mask(a, scope, full) & self.mask(b, scope, full),
            BTerm::Not(a) => !self.mask(a, scope, full) & full,
        }
    }

    fn eval(&self, a: &Formula, scope: &mut Vec<Ident>, cells: &[u32]) -> bool {
        match a {
            Formula::Neq(l, r) => {
                let full = full_mask(cells.len());
                let diff = self.mask(l, scope, full) ^ self.mask(r, scope, full);
                cells.iter().enumerate().any(|(m, &s)| s > 0 && (diff >> m) & 1 == 1)
            }
            Formula::Impl(p, q) => !self.eval(p, scope, cells) || self.eval(q, scope, cells),
            Formula::Forall(z, body) => {
                scope.push(z.clone());
                let ok = self.failing_split(body, scope, cells).is_none();
                scope.pop();
                ok
            }
        }
    }

    /// The first split of `cells` (by the new variable, already pushed on
    /// `scope`) under which `body` fails.
    fn failing_split(&self, body: &Formula, scope: &mut Vec<Ident>, cells: &[u32]) -> Option<Vec<u32>> {
        let n = cells.len();
        let mut next = vec![0u32; 2 * n];
        let mut found = None;
        self.splits(0, cells, &mut next, &mut |next| {
            if self.eval(body, scope, next) {
                true
            } else {
                found = Some(next.to_vec());
                false
            }
        });
        found
    }

    /// Enumerate every split, stopping when `visit` returns false.
    fn splits(&self, i: usize, cells: &[u32], next: &mut [u32], visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        let n = cells.len();
        if i == n {
            return visit(next);
        }
        let c = cells[i];
        let options: Vec<(u32, u32)> = if self.atomless {
            if c == 0 {
                vec![(0, 0)]
            } else {
                vec![(1, 1), (1, 0), (0, 1)]
            }
        } else {
            (0..=c).map(|j| (c - j, j)).collect()
        };
        for (lo, hi) in options {
            next[i] = lo;
            next[i + n] = hi;
            if !self.splits(i + 1, cells, next, visit) {
                return false;
            }
        }
        true
    }

    fn explain(&self, a: &Formula, scope: &mut Vec<Ident>, cells: &[u32], out: &mut Vec<String>) {
        match a {
            Formula::Neq(l, r) => out.push(format!("{l} = {r} holds here")),
            Formula::Impl(_, q) => self.explain(q, scope, cells, out),
            Formula::Forall(z, body) => {
                scope.push(z.clone());
                if let Some(next) = self.failing_split(body, scope, cells) {
                    out.push(self.describe_split(z, cells, &next));
                    self.explain(body, scope, &next, out);
                }
                scope.pop();
            }
        }
    }

    fn describe_split(&self, z: &Ident, cells: &[u32], next: &[u32]) -> String {
        let n = cells.len();
        let show = |s: u32| {
            if self.atomless {
                if s == 0 { "0".to_string() } else { "inf".to_string() }
            } else {
                s.to_string()
            }
        };
        let parts: Vec<String> = (0..n)
            .filter(|&m| cells[m] > 0)
            .map(|m| format!("m{m}:{}/{}", show(next[m + n]), show(cells[m])))
            .collect();
        format!("{z} takes [{}]", parts.join(" "))
    }
}

fn initial_cells(spec: BASpec) -> Vec<u32> {
    match spec {
        BASpec::PowerFinite(k) => vec![k],
        BASpec::Atomless => vec![1],
    }
}

fn guard(a: &Formula, spec: BASpec, limits: &Limits) -> Result<(), ModelError> {
    require_closed(a)?;
    let depth = a.quantifier_depth();
    let limit = limits.max_depth.min(HARD_MAX_DEPTH);
    if depth > limit {
        return Err(ModelError::TooDeep { depth, limit });
    }
    if let BASpec::PowerFinite(k) = spec {
        if k > limits.max_atoms {
            return Err(ModelError::TooManyAtoms { atoms: k, limit: limits.max_atoms });
        }
    }
    Ok(())
}

/// Truth of a closed formula in the algebra `spec`.
pub fn model_check(a: &Formula, spec: BASpec) -> Result<bool, ModelError> {
    model_check_with(a, spec, &Limits::default())
}

pub fn model_check_with(a: &Formula, spec: BASpec, limits: &Limits) -> Result<bool, ModelError> {
    guard(a, spec, limits)?;
    Ok(Checker::new(spec).eval(a, &mut Vec::new(), &initial_cells(spec)))
}

/// When `a` is false in `spec`, the quantifier choices that falsify it.
pub fn refutation_trace(a: &Formula, spec: BASpec) -> Result<Option<Vec<String>>, ModelError> {
    let limits = Limits::default();
    guard(a, spec, &limits)?;
    let checker = Checker::new(spec);
    let cells = initial_cells(spec);
    if checker.eval(a, &mut Vec::new(), &cells) {
        return Ok(None);
    }
    let mut out = Vec::new();
    checker.explain(a, &mut Vec::new(), &cells, &mut out);
    Ok(Some(out))
}

/// Truth in `{0,1}^k` by enumerating all `2^k` elements at every quantifier.
pub fn brute_check(a: &Formula, k: u32) -> Result<bool, ModelError> {
    brute_check_with(a, k, &Limits::default())
}

pub fn brute_check_with(a: &Formula, k: u32, limits: &Limits) -> Result<bool, ModelError> {
    require_closed(a)?;
    if k == 0 || k > limits.brute_max_atoms || k > 16 {
        return Err(ModelError::TooManyAtoms { atoms: k, limit: limits.brute_max_atoms });
    }
    let top: u32 = (1 << k) - 1;
    fn term(t: &BTerm, env: &[(Ident, u32)], top: u32) -> u32 {
        match t {
            BTerm::Var(x) => env.iter().rev().find(|(y, _)| y == x).map(|p| p.1).expect("closed formula"),
            BTerm::Zero => 0,
            BTerm::One => top,
            BTerm::Or(a, b) => term(a, env, top) | term(b, env, top),
            BTerm::And(a, b) => term(a, env, top) & term(b, env, top),
            BTerm::Not(a) => !term(a, env, top) & top,
        }
    }
    fn go(a: &Formula, env: &mut Vec<(Ident, u32)>, top: u32) -> bool {
        match a {
            Formula::Neq(l, r) => term(l, env, top) != term(r, env, top),
            Formula::Impl(p, q) => !go(p, env, top) || go(q, env, top),
            Formula::Forall(z, body) => (0..=top).all(|e| {
                env.push((z.clone(), e));
                let r = go(body, env, top);
                env.pop();
                r
            }),
        }
    }
    Ok(go(a, &mut Vec::new(), top))
}

/// What licensed a `Valid` answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    Ground,
    Horn,
    Propositional,
    FamilyComplete,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Justification),
    Refuted { witness: BASpec, trace: Vec<String> },
    Unknown(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid(j) => write!(f, "Valid({j:?})"),
            Verdict::Refuted { witness, .. } => write!(f, "Refuted({witness})"),
            Verdict::Unknown(why) => write!(f, "Unknown({why})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityConfig {
    pub family: Vec<BASpec>,
    /// Report `Valid(FamilyComplete)` when every member of the family agrees.
    pub assume_family_complete: bool,
    pub limits: Limits,
}

impl Default for ValidityConfig {
    fn default() -> Self {
        ValidityConfig { family: default_family(), assume_family_complete: false, limits: Limits::default() }
    }
}

fn refuted_in_two(a: &Formula) -> Verdict {
    let trace = refutation_trace(a, BASpec::PowerFinite(1)).ok().flatten().unwrap_or_default();
    Verdict::Refuted { witness: BASpec::PowerFinite(1), trace }
}

/// Is `a` true in every Boolean algebra with at least two elements?
///
/// Ground sentences and Horn clauses are decided in `{0,1}`; propositional
/// tautologies over inequations are accepted outright; anything else is
/// checked against the configured family, which can refute but not confirm.
pub fn valid_all_bas(a: &Formula, cfg: &ValidityConfig) -> Result<Verdict, ModelError> {
    require_closed(a)?;
    if a.is_ground() || classify_horn(a) != HornKind::NotHorn {
        let why = if a.is_ground() { Justification::Ground } else { Justification::Horn };
        return Ok(if eval_formula_01(a, &Env01::new()).expect("closed formula") {
            Verdict::Valid(why)
        } else {
            refuted_in_two(a)
        });
    }
    if propositional_tautology(a) {
        return Ok(Verdict::Valid(Justification::Propositional));
    }
    let mut skipped = Vec::new();
    for &spec in &cfg.family {
        match model_check_with(a, spec, &cfg.limits) {
            Ok(true) => {}
            Ok(false) => {
                let trace = refutation_trace(a, spec).ok().flatten().unwrap_or_default();
                return Ok(Verdict::Refuted { witness: spec, trace });
            }
            Err(e @ (ModelError::TooDeep { .. } | ModelError::TooManyAtoms { .. })) => {
                skipped.push(format!("{spec}: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    if !skipped.is_empty() {
        return Ok(Verdict::Unknown(format!("family-skipped ({})", skipped.join("; "))));
    }
    Ok(if cfg.assume_family_complete {
        Verdict::Valid(Justification::FamilyComplete)
    } else {
        Verdict::Unknown("family-passed".into())
    })
}

// Propositional fast path.

enum Prop {
    Const(bool),
    Letter(usize),
    Impl(Box<Prop>, Box<Prop>),
}

const MAX_LETTERS: usize = 20;
const MAX_ATOM_VARS: usize = 12;

/// Bound variables renamed by depth so α-equivalent formulas share a key.
fn alpha_key(a: &Formula) -> String {
    fn go(a: &Formula, depth: usize) -> Formula {
        match a {
            Formula::Neq(..) => a.clone(),
            Formula::Impl(p, q) => Formula::imp(go(p, depth), go(q, depth)),
            Formula::Forall(z, body) => {
                let canon = Ident::new(format!("#{depth}"));
                let renamed = body.subst_map(&[(z.clone(), BTerm::Var(canon.clone()))]);
                Formula::forall(canon, go(&renamed, depth + 1))
            }
        }
    }
    go(a, 0).to_string()
}

/// `a ≠ b` as a letter keyed by the truth table of `a ⊕ b` over its essential
/// variables, or a constant when that table is constant.
fn atom_key(l: &BTerm, r: &BTerm) -> Result<String, bool> {
    let mut vars: Vec<Ident> = l.vars().into_iter().chain(r.vars()).collect();
    vars.sort();
    vars.dedup();
    if vars.len() > MAX_ATOM_VARS {
        return Ok(format!("raw:{l}!={r}"));
    }
    let n = vars.len();
    let table: Vec<bool> = (0..1u32 << n)
        .map(|row| {
            let env: Env01 = vars.iter().enumerate().map(|(i, v)| (v.clone(), (row >> i) & 1 == 1)).collect();
            let a = crate::formula::eval_term_01(l, &env).expect("bound");
            let b = crate::formula::eval_term_01(r, &env).expect("bound");
            a != b
        })
        .collect();
    let essential: Vec<usize> =
        (0..n).filter(|&i| (0..1usize << n).any(|row| table[row] != table[row ^ (1 << i)])).collect();
    if essential.is_empty() {
        return Err(table[0]);
    }
    let reduced: String = (0..1usize << essential.len())
        .map(|row| {
            let full = essential.iter().enumerate().fold(0usize, |acc, (j, &i)| acc | (((row >> j) & 1) << i));
            if table[full] { '1' } else { '0' }
        })
        .collect();
    let names: Vec<&str> = essential.iter().map(|&i| vars[i].as_str()).collect();
    Ok(format!("atom:{}:{reduced}", names.join(",")))
}

fn to_prop(a: &Formula, letters: &mut HashMap<String, usize>) -> Prop {
    let mut letter = |key: String| {
        let next = letters.len();
        Prop::Letter(*letters.entry(key).or_insert(next))
    };
    match a {
        Formula::Neq(l, r) => match atom_key(l, r) {
            Ok(key) => letter(key),
            Err(b) => Prop::Const(b),
        },
        Formula::Impl(p, q) => Prop::Impl(Box::new(to_prop(p, letters)), Box::new(to_prop(q, letters))),
        Formula::Forall(..) => letter(format!("all:{}", alpha_key(a))),
    }
}

fn eval_prop(p: &Prop, assignment: u32) -> bool {
    match p {
        Prop::Const(b) => *b,
        Prop::Letter(i) => (assignment >> i) & 1 == 1,
        Prop::Impl(a, b) => !eval_prop(a, assignment) || eval_prop(b, assignment),
    }
}

/// After stripping the leading `∀`s, is the body a tautology when every
/// inequation and every inner quantified subformula is read as a letter?
pub fn propositional_tautology(a: &Formula) -> bool {
    let mut body = a;
    while let Formula::Forall(_, b) = body {
        body = b;
    }
    let mut letters = HashMap::new();
    let p = to_prop(body, &mut letters);
    if letters.len() > MAX_LETTERS {
        return false;
    }
    (0..1u32 << letters.len()).all(|v| eval_prop(&p, v))
}

/// A theory given by a family of algebras, or by an explicit finite list of
/// sentences (membership up to α-equivalence, not closed under deduction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryOracle {
    Family(Vec<BASpec>),
    Explicit(Vec<Formula>),
}

impl TheoryOracle {
    pub fn contains(&self, a: &Formula) -> Result<bool, ModelError> {
        theory_contains(self, a)
    }
}

pub fn theory_contains(oracle: &TheoryOracle, a: &Formula) -> Result<bool, ModelError> {
    match oracle {
        TheoryOracle::Family(specs) => {
            for &s in specs {
                if !model_check(a, s)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        TheoryOracle::Explicit(list) => {
            require_closed(a)?;
            Ok(list.iter().any(|b| crate::formula::alpha_eq(a, b)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{bot, conj, disj, eq, exists, verum};
    use crate::syntax::parse_formula;

    #[test]
    fn boolean_axioms_hold_in_every_family_member() {
        for a in crate::formula::tbool_axioms() {
            for spec in default_family() {
                assert!(model_check(&a, spec).unwrap(), "{a} fails in {spec}");
            }
        }
    }

    fn z01() -> Formula {
        let z = || BTerm::var("z");
        Formula::forall("z", disj(eq(z(), BTerm::Zero), eq(z(), BTerm::One)))
    }

    fn atomless_sentence() -> Formula {
        parse_formula("forall z. z != 0 -> exists w. w != 0 & w /\\ z == w & w != z").unwrap()
    }

    #[test]
    fn examples() {
        assert!(model_check(&verum(), BASpec::PowerFinite(1)).unwrap());
        assert!(!model_check(&z01(), BASpec::PowerFinite(2)).unwrap());
        assert!(model_check(&z01(), BASpec::PowerFinite(1)).unwrap());
        assert!(model_check(&atomless_sentence(), BASpec::Atomless).unwrap());
        for k in 1..=4 {
            assert!(!model_check(&atomless_sentence(), BASpec::PowerFinite(k)).unwrap());
        }
        assert!(brute_check(&verum(), 1).unwrap());
        let z = || BTerm::var("z");
        let strict = exists("z", conj(Formula::neq(z(), BTerm::Zero), Formula::neq(z(), BTerm::One)));
        assert!(brute_check(&strict, 2).unwrap());
        assert!(!brute_check(&strict, 1).unwrap());
        assert!(brute_check(&verum(), 4).is_err());
    }

    #[test]
    fn open_formulas_are_rejected() {
        let a = Formula::neq(BTerm::var("q"), BTerm::Zero);
        assert!(matches!(model_check(&a, BASpec::Atomless), Err(ModelError::Open(_))));
    }

    #[test]
    fn validity_layers() {
        let cfg = ValidityConfig::default();
        let comm = parse_formula("forall z w. z /\\ w == w /\\ z").unwrap();
        assert_eq!(valid_all_bas(&comm, &cfg).unwrap(), Verdict::Valid(Justification::Horn));
        match valid_all_bas(&z01(), &cfg).unwrap() {
            Verdict::Refuted { witness, .. } => assert_eq!(witness, BASpec::PowerFinite(2)),
            v => panic!("{v}"),
        }
        assert_eq!(valid_all_bas(&bot(), &cfg).unwrap().to_string(), "Refuted(pf1)");
        assert_eq!(valid_all_bas(&verum(), &cfg).unwrap(), Verdict::Valid(Justification::Ground));
        let peirce = parse_formula("forall a b c d. ((a == b -> c == d) -> a == b) -> a == b").unwrap();
        assert_eq!(valid_all_bas(&peirce, &cfg).unwrap(), Verdict::Valid(Justification::Propositional));
        let atomless = atomless_sentence();
        assert!(valid_all_bas(&atomless, &cfg).unwrap().is_refuted());
    }

    #[test]
    fn family_pass_is_unknown_unless_asserted() {
        // true everywhere but neither Horn nor a tautology over its atoms
        let a = parse_formula("forall z. z != 0 -> exists w. w != 0 & w /\\ z == w").unwrap();
        let mut cfg = ValidityConfig::default();
        assert_eq!(valid_all_bas(&a, &cfg).unwrap(), Verdict::Unknown("family-passed".into()));
        cfg.assume_family_complete = true;
        assert_eq!(valid_all_bas(&a, &cfg).unwrap(), Verdict::Valid(Justification::FamilyComplete));
    }

    #[test]
    fn theories() {
        let pf2 = TheoryOracle::Family(vec![BASpec::PowerFinite(2)]);
        assert!(theory_contains(&pf2, &verum()).unwrap());
        assert!(!theory_contains(&pf2, &bot()).unwrap());
        assert!(!theory_contains(&pf2, &z01()).unwrap());
        assert!(theory_contains(&TheoryOracle::Family(vec![BASpec::PowerFinite(1)]), &z01()).unwrap());
        let explicit = TheoryOracle::Explicit(vec![Formula::forall("u", Formula::neq(BTerm::var("u"), BTerm::One))]);
        assert!(explicit.contains(&Formula::forall("v", Formula::neq(BTerm::var("v"), BTerm::One))).unwrap());
    }

    #[test]
    fn refutation_traces_name_the_choice() {
        let trace = refutation_trace(&z01(), BASpec::PowerFinite(2)).unwrap().unwrap();
        assert_eq!(trace[0], "z takes [m0:1/2]");
        assert!(refutation_trace(&verum(), BASpec::Atomless).unwrap().is_none());
    }

    #[test]
    fn family_syntax() {
        assert_eq!(
            parse_family("pf1-3, atomless").unwrap(),
            vec![BASpec::PowerFinite(1), BASpec::PowerFinite(2), BASpec::PowerFinite(3), BASpec::Atomless]
        );
        assert!(parse_family("pf0").is_err());
        assert!(parse_family("").is_err());
    }
}
