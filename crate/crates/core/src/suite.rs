//! The acceptance checks, runnable one by one or together.

use std::fmt;
use std::time::{Duration, Instant};

use crate::corpus::{self, FormulaShape};
use crate::domain::{
    self, arrow, denote_closed, denote_formula, level, peirce, phi, psi, seq_check, term_search, theta, DElem, Fin, SeqConfig,
    SeqVerdict,
};
use crate::formula::{bot, eval_formula_01, subst_formula, tbool_axioms, verum, BTerm, Env01, Formula, Ident};
use crate::kam::{evaluate, step, Rule as KamRule};
use crate::lambda::{lc_alpha_eq, LcTerm, Process, Stack};
use crate::models::{brute_check, model_check, BASpec, ValidityConfig};
use crate::pole::{canonical_falsity_stacks, constraint_check, in_pole, in_pole_limit, realizes_bounded, PoleConfig};
use crate::syntax::parse_formula;
use crate::typing::{
    check_derivation, eq_elim_macro, identity_derivation, rewrite_derivation, peirce_derivation, Derivation, Judgement, Rule,
    RuleData, Violation,
};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<4} {:<28} {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed
        )
    }
}

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub limit: Option<Duration>,
    run: fn(&mut Shared) -> Result<String, String>,
}

/// State carried between criteria: the pole configuration filled by the
/// γ-realizer run is what the constraint check inspects.
#[derive(Default)]
pub struct Shared {
    pole: Option<PoleConfig>,
}


pub const CRITERIA: &[Criterion] = &[
    Criterion { id: "c1", title: "machine rules", limit: Some(Duration::from_secs(1)), run: c1 },
    Criterion { id: "c2", title: "horn transfer", limit: Some(Duration::from_secs(30)), run: c2 },
    Criterion { id: "c3", title: "model checker oracle", limit: Some(Duration::from_secs(60)), run: c3 },
    Criterion { id: "c4", title: "boolean axioms realized", limit: Some(Duration::from_secs(10)), run: c4 },
    Criterion { id: "c5", title: "instructions realize tags", limit: Some(Duration::from_secs(300)), run: c5 },
    Criterion { id: "c6", title: "pole constraints", limit: None, run: c6 },
    Criterion { id: "c7", title: "pole hand values", limit: None, run: c7 },
    Criterion { id: "c8", title: "lattice sizes and laws", limit: Some(Duration::from_secs(5)), run: c8 },
    Criterion { id: "c9", title: "theta roundtrip", limit: Some(Duration::from_secs(30)), run: c9 },
    Criterion { id: "c10", title: "sequentialisability", limit: Some(Duration::from_secs(120)), run: c10 },
    Criterion { id: "c11", title: "solvability", limit: Some(Duration::from_secs(5)), run: c11 },
    Criterion { id: "c12", title: "typing", limit: None, run: c12 },
];

pub fn find(id: &str) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

impl Criterion {
    pub fn run(&self, shared: &mut Shared) -> Outcome {
        let start = Instant::now();
        let result = (self.run)(shared);
        let elapsed = start.elapsed();
        let over = self.limit.is_some_and(|l| elapsed > l);
        let (passed, mut detail) = match result {
            Ok(d) => (!over, d),
            Err(d) => (false, d),
        };
        if over {
            detail.push_str(&format!("; over the {:?} limit", self.limit.expect("set")));
        }
        Outcome { id: self.id, title: self.title, passed, detail, elapsed, limit: self.limit }
    }
}

pub fn run_all() -> Vec<Outcome> {
    let mut shared = Shared::default();
    CRITERIA.iter().map(|c| c.run(&mut shared)).collect()
}

pub fn run_one(id: &str) -> Option<Outcome> {
    find(id).map(|c| c.run(&mut Shared::default()))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1(_: &mut Shared) -> Result<String, String> {
    let i = LcTerm::identity();
    let z = |n| LcTerm::Zeta(n);
    let proc_ = |t: LcTerm, items: Vec<LcTerm>| Process::new(t, Stack::from_terms(items).expect("closed")).expect("closed");
    let cases = [
        (proc_(LcTerm::app(i.clone(), z(0)), vec![z(1)]), proc_(i.clone(), vec![z(0), z(1)]), KamRule::Push),
        (proc_(i.clone(), vec![z(0), z(1)]), proc_(z(0), vec![z(1)]), KamRule::Grab),
        (
            proc_(LcTerm::Cc, vec![i.clone(), z(1)]),
            proc_(i.clone(), vec![LcTerm::Kont(Stack::from_terms([z(1)]).expect("closed")), z(1)]),
            KamRule::Save,
        ),
        (
            proc_(LcTerm::Kont(Stack::from_terms([z(2)]).expect("closed")), vec![i.clone(), z(1)]),
            proc_(i.clone(), vec![z(2)]),
            KamRule::Restore,
        ),
    ];
    for (p, q, r) in &cases {
        let got = step(p);
        ensure(got.as_ref() == Some(&(q.clone(), *r)), || format!("{p} gave {got:?}, expected {q} by {r}"))?;
    }
    let corpus = corpus::processes(500, 1);
    let mut steps = 0;
    for p in &corpus {
        let a = evaluate(p, 200);
        let b = evaluate(p, 200);
        ensure(a == b, || format!("two runs of {p} differ"))?;
        for (src, rule) in &a.steps {
            let again = step(src).map(|(_, r)| r);
            ensure(again == Some(*rule), || format!("rule at {src} not reproducible"))?;
        }
        steps += a.steps.len();
    }
    Ok(format!("4 literal transitions; 500 processes, {steps} steps, deterministic"))
}

fn truth01(a: &Formula) -> bool {
    eval_formula_01(a, &Env01::new()).expect("closed")
}

fn c2(_: &mut Shared) -> Result<String, String> {
    let mut r = corpus::rng(2);
    let clauses: Vec<Formula> = (0..240).map(|_| corpus::random_horn(&mut r, 3)).collect();
    let specs = [BASpec::PowerFinite(2), BASpec::PowerFinite(3), BASpec::Atomless];
    let mut valid = 0;
    for a in &clauses {
        let t = truth01(a);
        valid += t as usize;
        for s in specs {
            let m = model_check(a, s).map_err(|e| format!("{a}: {e}"))?;
            ensure(m == t, || format!("{a}: {{0,1}} says {t}, {s} says {m}"))?;
        }
    }
    Ok(format!("{} clauses ({valid} true) agree on pf2, pf3, atomless", clauses.len()))
}

fn c3(_: &mut Shared) -> Result<String, String> {
    let mut r = corpus::rng(3);
    let shape = FormulaShape { max_height: 4, max_quantifiers: 3, term_depth: 2 };
    let fs: Vec<Formula> = (0..220).map(|_| corpus::random_formula(&mut r, shape)).collect();
    let mut agree = 0;
    for a in &fs {
        for k in 1..=3 {
            let m = model_check(a, BASpec::PowerFinite(k)).map_err(|e| format!("{a}: {e}"))?;
            let b = brute_check(a, k).map_err(|e| format!("{a}: {e}"))?;
            ensure(m == b, || format!("{a} on pf{k}: cells {m}, brute force {b}"))?;
            agree += 1;
        }
    }
    Ok(format!("{} formulas, {agree} comparisons, no discrepancy", fs.len()))
}

fn strip_foralls(a: &Formula) -> &Formula {
    match a {
        Formula::Forall(_, b) => strip_foralls(b),
        _ => a,
    }
}

fn c4(_: &mut Shared) -> Result<String, String> {
    let cfg = PoleConfig::default();
    let (mut eqs, mut neqs) = (0, 0);
    for a in tbool_axioms() {
        match strip_foralls(&a) {
            Formula::Neq(..) => {
                ensure(truth01(&a), || format!("{a} is not true"))?;
                let stacks = canonical_falsity_stacks(&a, 2).map_err(|e| e.to_string())?;
                ensure(stacks.is_empty(), || format!("{a} has {} canonical falsity stacks", stacks.len()))?;
                neqs += 1;
            }
            _ => {
                let rep = realizes_bounded(&LcTerm::identity(), &a, &cfg, 2).map_err(|e| e.to_string())?;
                ensure(rep.is_clean(), || format!("identity fails {a} on {} stacks", rep.failures().len()))?;
                eqs += 1;
            }
        }
    }
    Ok(format!("identity realizes {eqs} equations; {neqs} true inequation(s) with no falsity stacks"))
}

fn tag_corpus() -> Vec<Formula> {
    let mut fs = corpus::small_closed_formulas();
    let mut r = corpus::rng(5);
    let shape = FormulaShape { max_height: 3, max_quantifiers: 2, term_depth: 2 };
    fs.extend((0..100).map(|_| corpus::random_formula(&mut r, shape)));
    fs
}

fn c5(shared: &mut Shared) -> Result<String, String> {
    let cfg = PoleConfig::default().with_k_max(32);
    let fs = tag_corpus();
    let mut stacks = 0;
    let mut deepest = 0;
    for a in &fs {
        let rep = realizes_bounded(&LcTerm::gamma(a.clone()), a, &cfg, 2).map_err(|e| e.to_string())?;
        ensure(rep.is_clean(), || format!("γ fails {a} on {}", rep.failures()[0]))?;
        stacks += rep.results.len();
        deepest = deepest.max(rep.results.iter().filter_map(|r| r.1).max().unwrap_or(0));
    }
    let certified = cfg.certified().len();
    shared.pole = Some(cfg);
    Ok(format!("{} formulas, {stacks} stacks, levels ≤ {deepest}, {certified} processes certified", fs.len()))
}

fn c6(shared: &mut Shared) -> Result<String, String> {
    if shared.pole.is_none() {
        c5(shared)?;
    }
    let cfg = shared.pole.as_ref().expect("filled by c5");
    let vcfg = ValidityConfig::default();
    let certified = cfg.certified();
    let mut tally = [0usize; 2];
    for (p, _) in &certified {
        let v = constraint_check(p, &vcfg).map_err(|e| e.to_string())?;
        ensure(!v.is_refuted(), || format!("constraint of {p} refuted: {v}"))?;
        tally[v.is_valid() as usize] += 1;
    }
    Ok(format!("{} certified processes, {} valid, {} unknown, none refuted", certified.len(), tally[1], tally[0]))
}

fn c7(_: &mut Shared) -> Result<String, String> {
    let cfg = PoleConfig::default();
    let g = |a: Formula, items: Vec<LcTerm>| Process::new(LcTerm::gamma(a), Stack::from_terms(items).expect("closed")).expect("closed");
    let base = g(bot(), vec![]);
    let l = in_pole_limit(&base, &cfg).map_err(|e| e.to_string())?;
    ensure(l == Some(1), || format!("γ_⊥ ⋆ ω entered at {l:?}"))?;
    let mut outside = 0;
    for pi in crate::pole::stack_pool(2) {
        let p = Process::new(LcTerm::gamma(verum()), pi).expect("closed");
        ensure(in_pole_limit(&p, &cfg).map_err(|e| e.to_string())?.is_none(), || format!("{p} is in the pole"))?;
        outside += 1;
    }
    let chained = g(Formula::imp(bot(), bot()), vec![LcTerm::gamma(bot())]);
    let at1 = in_pole(&chained, 1, &cfg).map_err(|e| e.to_string())?;
    let at2 = in_pole(&chained, 2, &cfg).map_err(|e| e.to_string())?;
    ensure(!at1 && at2, || format!("chained example: k=1 {at1}, k=2 {at2}"))?;
    Ok(format!("γ_⊥⋆ω at 1; γ_(0≠1) outside on {outside} stacks up to 32; chained example at 2"))
}

fn c8(_: &mut Shared) -> Result<String, String> {
    let sizes: Vec<usize> = (0..=2).map(|n| level(n).map(|l| l.size())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(sizes == [2, 3, 10], || format!("sizes {sizes:?}"))?;
    for n in 0..=1 {
        let (lo, hi) = (level(n).expect("rank"), level(n + 1).expect("rank"));
        for x in lo.elements() {
            let back = psi(n, phi(n, x).expect("rank")).expect("rank");
            ensure(back == x, || format!("ψ{n}∘φ{n} moves {x} to {back}"))?;
        }
        for f in hi.elements() {
            let down_up = phi(n, psi(n, f).expect("rank")).expect("rank");
            ensure(hi.leq(down_up, f), || format!("φ{n}∘ψ{n} is not below the identity at {f}"))?;
        }
    }
    let l = level(2).expect("rank");
    let all: Vec<u32> = l.elements().collect();
    for &a in &all {
        ensure(l.join(a, a) == a && l.meet(a, a) == a, || format!("idempotence fails at {a}"))?;
        ensure(l.leq(l.bottom(), a) && l.leq(a, l.top()), || format!("bounds fail at {a}"))?;
        for &b in &all {
            ensure(l.join(a, b) == l.join(b, a) && l.meet(a, b) == l.meet(b, a), || format!("commutativity fails at {a},{b}"))?;
            ensure(l.join(a, l.meet(a, b)) == a && l.meet(a, l.join(a, b)) == a, || format!("absorption fails at {a},{b}"))?;
            ensure(l.leq(a, b) == (l.join(a, b) == b), || format!("order and join disagree at {a},{b}"))?;
            for &c in &all {
                ensure(l.join(a, l.join(b, c)) == l.join(l.join(a, b), c), || format!("join associativity at {a},{b},{c}"))?;
                ensure(l.meet(a, l.meet(b, c)) == l.meet(l.meet(a, b), c), || format!("meet associativity at {a},{b},{c}"))?;
            }
        }
    }
    Ok("sizes 2, 3, 10; projection pairs exact at ranks ≤ 2; lattice laws on all of D2".to_string())
}

fn c9(_: &mut Shared) -> Result<String, String> {
    let mut count = 0;
    for n in 0..=2 {
        for i in level(n).expect("rank").elements() {
            let x = Fin { rank: n, idx: i };
            let code = theta(x).map_err(|e| e.to_string())?;
            let back = denote_formula(&code).map_err(|e| e.to_string())?;
            ensure(back.as_finite() == Some(x.normalized()), || format!("{x} came back as {back:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} elements roundtrip"))
}

fn c10(_: &mut Shared) -> Result<String, String> {
    let cfg = SeqConfig::default();
    let budget = 6;
    let s = |e: domain::DomainError| e.to_string();
    let tt = arrow(&DElem::top(), &DElem::top()).map_err(s)?.as_finite().expect("finite");
    let r = seq_check(tt, &cfg).map_err(s)?;
    ensure(r.verdict == SeqVerdict::Sequentialisable, || format!("⊤→⊤: {}", r.verdict))?;
    let w = term_search(tt, budget, 0, cfg.n_prime).witness;
    ensure(w.as_ref().is_some_and(|w| lc_alpha_eq(w, &LcTerm::identity())), || format!("⊤→⊤ witness {w:?}"))?;

    let top = Fin { rank: 0, idx: 1 };
    let r = seq_check(top, &cfg).map_err(s)?;
    ensure(r.verdict == SeqVerdict::NotSequentialisable, || format!("⊤: {}", r.verdict))?;
    ensure(term_search(top, budget, 0, cfg.n_prime).witness.is_none(), || "⊤ has a witness".to_string())?;

    let p = peirce(&DElem::top(), &DElem::top()).map_err(s)?;
    let pf = p.as_finite().expect("finite");
    let r = seq_check(pf, &cfg).map_err(s)?;
    ensure(r.verdict == SeqVerdict::Sequentialisable, || format!("Peirce: {}", r.verdict))?;
    let cc = denote_closed(&LcTerm::Cc, cfg.n_prime).map_err(s)?;
    ensure(p.leq(&cc, pf.rank).map_err(s)?, || "cc does not dominate the Peirce element".to_string())?;

    let mut compared = 0;
    for n in 0..=1 {
        for i in level(n).expect("rank").elements() {
            let x = Fin { rank: n, idx: i };
            let v = seq_check(x, &cfg).map_err(s)?.verdict;
            let found = term_search(x, budget, 0, cfg.n_prime).witness;
            let clash = matches!((&v, &found), (SeqVerdict::NotSequentialisable, Some(_)));
            ensure(!clash, || format!("{x}: {v} but witness {found:?}"))?;
            if !matches!(v, SeqVerdict::Unknown(_)) {
                compared += 1;
            }
        }
    }
    Ok(format!("⊤→⊤ by λx.x; ⊤ refuted; Peirce under cc (rank {}); {compared} low elements consistent", pf.rank))
}

fn c11(_: &mut Shared) -> Result<String, String> {
    let s = |e: domain::DomainError| e.to_string();
    let id = denote_closed(&LcTerm::identity(), 1).map_err(s)?;
    let omega = denote_closed(&LcTerm::omega(), 1).map_err(s)?;
    let bottom = DElem::bottom();
    let mut strict = Vec::new();
    for n in 0..=2 {
        ensure(bottom.leq(&id, n).map_err(s)?, || format!("λx.x below ⊥ at rank {n}"))?;
        if !id.leq(&bottom, n).map_err(s)? {
            strict.push(n);
        }
        ensure(omega.comp(n).map_err(s)? == 0, || format!("Ω is not ⊥ at rank {n}"))?;
    }
    ensure(!strict.is_empty(), || "λx.x equals ⊥ at every rank".to_string())?;
    Ok(format!("λx.x above ⊥ at ranks {strict:?}; Ω is ⊥ at ranks 0..=2"))
}

fn c12(_: &mut Shared) -> Result<String, String> {
    let f = |s: &str| parse_formula(s).expect("literal formula");
    let a_body = f("z /\\ y != 1");
    let (a, b) = (BTerm::var("y"), BTerm::or(BTerm::var("y"), BTerm::Zero));
    let z = Ident::new("z");
    let premise_ty = subst_formula(&a_body, std::slice::from_ref(&z), std::slice::from_ref(&a)).expect("one variable");
    let t = Derivation::leaf(Rule::Axiom, Judgement::new(vec![("h".into(), premise_ty.clone())], LcTerm::var("h"), premise_ty));
    let built = rewrite_derivation(&t, &"x".into(), &z, &a_body, &a, &b).map_err(|e| e.to_string())?;
    let j = check_derivation(&built).map_err(|e| format!("built derivation rejected: {e}"))?;
    ensure(j.subject == eq_elim_macro(&"x".into(), &LcTerm::var("h")), || format!("subject {}", j.subject))?;

    check_derivation(&peirce_derivation(&f("z != 0"), &f("_|_"))).map_err(|e| format!("Peirce leaf: {e}"))?;
    check_derivation(&identity_derivation(&f("forall w. w != 0"))).map_err(|e| format!("identity: {e}"))?;

    let zf = f("z != 0");
    let ax = Derivation::leaf(Rule::Axiom, Judgement::new(vec![("x".into(), zf.clone())], LcTerm::var("x"), zf.clone()));
    let bad = Derivation::new(
        Rule::ForallIntro,
        RuleData::None,
        vec![ax],
        Judgement::new(vec![("x".into(), zf.clone())], LcTerm::var("x"), Formula::forall("z", zf)),
    );
    match check_derivation(&bad) {
        Err(e) if e.violation == Violation::NotFree("z".into()) && e.rule == Rule::ForallIntro && e.path.is_empty() => {}
        other => return Err(format!("freshness violation not reported: {other:?}")),
    }
    Ok(format!("rewrite tree of {} nodes accepted; Peirce and identity accepted; freshness violation rejected", built.size()))
}
