use std::collections::HashMap;

use proptest::prelude::*;
use rand::Rng;

use realiz_core::corpus::{self, CorpusRng, FormulaShape};
use realiz_core::formula::{alpha_eq, decompose, eval_formula_01, recompose, subst_formula, BTerm, Env01, Formula, Ident};
use realiz_core::parse_formula;

fn closed(seed: u64) -> Formula {
    corpus::random_formula(&mut corpus::rng(seed), FormulaShape::default())
}

/// A formula whose free variables are among `z` and `w`.
fn open(rng: &mut CorpusRng, h: usize) -> Formula {
    let free = [Ident::new("z"), Ident::new("w")];
    fn go(rng: &mut CorpusRng, vars: &mut Vec<Ident>, h: usize) -> Formula {
        if h == 0 || rng.gen_bool(0.3) {
            return Formula::neq(corpus::random_bterm(rng, vars, 2), corpus::random_bterm(rng, vars, 2));
        }
        if rng.gen_bool(0.3) {
            let v = Ident::new(format!("v{}", vars.len()));
            vars.push(v.clone());
            let body = go(rng, vars, h - 1);
            vars.pop();
            return Formula::forall(v, body);
        }
        Formula::imp(go(rng, vars, h - 1), go(rng, vars, h - 1))
    }
    go(rng, &mut free.to_vec(), h)
}

fn term01(t: &BTerm, env: &HashMap<Ident, bool>) -> bool {
    match t {
        BTerm::Var(x) => env[x],
        BTerm::Zero => false,
        BTerm::One => true,
        BTerm::Or(a, b) => term01(a, env) || term01(b, env),
        BTerm::And(a, b) => term01(a, env) && term01(b, env),
        BTerm::Not(a) => !term01(a, env),
    }
}

/// Expands every quantifier into the two instances.
fn expanded01(a: &Formula, env: &mut HashMap<Ident, bool>) -> bool {
    match a {
        Formula::Neq(l, r) => term01(l, env) != term01(r, env),
        Formula::Impl(p, q) => !expanded01(p, env) || expanded01(q, env),
        Formula::Forall(z, body) => {
            let saved = env.get(z).copied();
            let both = [false, true].iter().all(|&v| {
                env.insert(z.clone(), v);
                expanded01(body, env)
            });
            match saved {
                Some(v) => env.insert(z.clone(), v),
                None => env.remove(z),
            };
            both
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let a = closed(seed);
        prop_assert_eq!(parse_formula(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn decomposition_recomposes(seed in any::<u64>()) {
        let a = closed(seed);
        prop_assert!(alpha_eq(&recompose(&decompose(&a)), &a));
    }

    #[test]
    fn substitutions_compose(seed in any::<u64>()) {
        let a = open(&mut corpus::rng(seed), 4);
        let (z, w) = (Ident::new("z"), Ident::new("w"));
        let stepwise = subst_formula(&subst_formula(&a, std::slice::from_ref(&z), &[BTerm::Zero]).unwrap(), std::slice::from_ref(&w), &[BTerm::One]).unwrap();
        let at_once = subst_formula(&a, &[z, w], &[BTerm::Zero, BTerm::One]).unwrap();
        prop_assert!(alpha_eq(&stepwise, &at_once), "{} vs {}", stepwise, at_once);
        prop_assert!(at_once.is_closed());
    }

    #[test]
    fn two_valued_truth_matches_expansion(seed in any::<u64>()) {
        let a = closed(seed);
        prop_assert_eq!(eval_formula_01(&a, &Env01::new()).unwrap(), expanded01(&a, &mut HashMap::new()));
    }
}
