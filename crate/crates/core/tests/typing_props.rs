use proptest::prelude::*;
use rand::Rng;

use realiz_core::corpus::{self, FormulaShape};
use realiz_core::formula::{subst_formula, BTerm, Formula, Ident};
use realiz_core::pole::realizes_bounded;
use realiz_core::typing::{
    identity_derivation, rewrite_derivation, parse_derivation, peirce_derivation, print_derivation, weaken, Derivation, Judgement,
    Rule,
};
use realiz_core::{check_derivation, LcTerm, PoleConfig};

fn small(seed: u64) -> Formula {
    corpus::random_formula(&mut corpus::rng(seed), FormulaShape { max_height: 2, max_quantifiers: 1, term_depth: 1 })
}

/// An accepted derivation built from one of the derivation builders.
fn derivation(seed: u64) -> Derivation {
    let mut r = corpus::rng(seed);
    let a = corpus::random_formula(&mut r, FormulaShape::default());
    match r.gen_range(0..3) {
        0 => identity_derivation(&a),
        1 => peirce_derivation(&a, &corpus::random_formula(&mut r, FormulaShape::default())),
        _ => {
            let (z, y) = (Ident::new("z"), Ident::new("y"));
            let vars = [z.clone(), y.clone()];
            let body = Formula::imp(
                Formula::neq(corpus::random_bterm(&mut r, &vars, 2), corpus::random_bterm(&mut r, &vars, 1)),
                Formula::neq(BTerm::Var(z.clone()), corpus::random_bterm(&mut r, &vars, 1)),
            );
            let (lo, hi) = (corpus::random_bterm(&mut r, std::slice::from_ref(&y), 2), corpus::random_bterm(&mut r, &[y], 2));
            let premise = subst_formula(&body, std::slice::from_ref(&z), std::slice::from_ref(&lo)).unwrap();
            let leaf = Derivation::leaf(Rule::Axiom, Judgement::new(vec![("h".into(), premise.clone())], LcTerm::var("h"), premise));
            rewrite_derivation(&leaf, &"x".into(), &z, &body, &lo, &hi).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn builders_produce_accepted_derivations(seed in any::<u64>()) {
        let d = derivation(seed);
        prop_assert!(check_derivation(&d).is_ok(), "{}", print_derivation(&d));
    }

    #[test]
    fn derivations_print_and_parse_back(seed in any::<u64>()) {
        let d = derivation(seed);
        prop_assert_eq!(parse_derivation(&print_derivation(&d)).unwrap(), d);
    }

    #[test]
    fn unused_hypotheses_can_be_added(seed in any::<u64>(), extra in any::<u64>()) {
        let d = derivation(seed);
        let e = small(extra);
        let w = weaken(&d, &"unused".into(), &e).unwrap();
        let j = check_derivation(&w).unwrap();
        prop_assert_eq!(j.context.len(), d.conclusion.context.len() + 1);
        prop_assert_eq!(&j.subject, &d.conclusion.subject);
    }

    #[test]
    fn closed_proofs_realize_their_types(seed in any::<u64>(), other in any::<u64>(), peirce in any::<bool>()) {
        let a = small(seed);
        let d = if peirce { peirce_derivation(&a, &small(other)) } else { identity_derivation(&a) };
        let j = check_derivation(&d).unwrap();
        prop_assume!(j.context.is_empty() && j.ty.is_closed());
        let report = realizes_bounded(&j.subject, &j.ty, &PoleConfig::default(), 2).unwrap();
        prop_assert!(report.is_clean(), "{} : {} fails on {:?}", j.subject, j.ty, report.failures());
    }
}
