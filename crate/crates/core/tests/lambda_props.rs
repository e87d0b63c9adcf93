use proptest::prelude::*;

use realiz_core::corpus::{self, FormulaShape};
use realiz_core::formula::{alpha_eq, subst_formula, BTerm, Formula, Ident};
use realiz_core::kam::step;
use realiz_core::lambda::{constraint_of, is_proof_like, FoSubst};
use realiz_core::{parse_process, parse_stack, parse_term, LcTerm, Process, Stack};

fn process(seed: u64) -> Process {
    corpus::random_process(&mut corpus::rng(seed))
}

/// A process whose tags mention the free variable `z`.
fn tagged(seed: u64) -> Process {
    let mut r = corpus::rng(seed);
    let z = Ident::new("z");
    let body = corpus::random_formula(&mut r, FormulaShape { max_height: 2, max_quantifiers: 0, term_depth: 1 });
    let open = Formula::imp(Formula::neq(BTerm::Var(z.clone()), BTerm::One), body);
    let p = process(seed);
    let stack = p.stack.push(LcTerm::gamma(open.clone())).unwrap().push(LcTerm::Eta(0)).unwrap();
    Process { term: LcTerm::app(p.term, LcTerm::gamma(Formula::forall(z, open))), stack }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn terms_print_and_parse_back(seed in any::<u64>(), size in 1usize..14) {
        let t = corpus::random_term(&mut corpus::rng(seed), size, true);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn processes_print_and_parse_back(seed in any::<u64>()) {
        let p = process(seed);
        prop_assert_eq!(parse_process(&p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(parse_stack(&p.stack.to_string()).unwrap(), p.stack);
    }

    #[test]
    fn tag_substitution_commutes_with_constraints(seed in any::<u64>(), one in any::<bool>()) {
        let p = tagged(seed);
        let zs = [Ident::new("z")];
        let bs = [if one { BTerm::One } else { BTerm::Zero }];
        let lhs = constraint_of(&p.fo_subst(&zs, &bs).unwrap());
        let rhs = subst_formula(&constraint_of(&p), &zs, &bs).unwrap();
        prop_assert!(alpha_eq(&lhs, &rhs));
    }

    #[test]
    fn adding_eta_or_continuations_loses_proof_likeness(seed in any::<u64>(), n in 0u32..3) {
        let t = corpus::random_term(&mut corpus::rng(seed), 8, true);
        let any_tag = |_: &Formula| true;
        prop_assert!(is_proof_like(&t, &any_tag));
        prop_assert!(!is_proof_like(&LcTerm::app(t.clone(), LcTerm::Eta(n)), &any_tag));
        prop_assert!(!is_proof_like(&LcTerm::app(LcTerm::Kont(Stack::empty()), t), &any_tag));
    }

    #[test]
    fn steps_are_functional_and_keep_processes_closed(seed in any::<u64>()) {
        let mut cur = process(seed);
        for _ in 0..100 {
            let Some((next, rule)) = step(&cur) else { break };
            prop_assert_eq!(step(&cur), Some((next.clone(), rule)));
            prop_assert!(next.term.is_closed());
            prop_assert!(next.stack.iter().all(LcTerm::is_closed));
            cur = next;
        }
    }
}
