use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use realiz_core::corpus::{self, CorpusRng};
use realiz_core::formula::{subst_formula, BTerm, Formula, Ident};
use realiz_core::kam::step;
use realiz_core::lambda::FoSubst;
use realiz_core::pole::{in_pole, in_pole_limit};
use realiz_core::{parse_formula, LcTerm, PoleConfig, Process, Stack};

fn small_formulas() -> Vec<Formula> {
    ["_|_", "0 != 1", "0 != 1 -> _|_", "(0 != 1 -> _|_) -> _|_", "forall z. z != 0", "forall z. z != 1 -> z != 0", "1 != 1 -> 0 != 1"]
        .iter()
        .map(|s| parse_formula(s).unwrap())
        .collect()
}

fn entry(r: &mut CorpusRng, fs: &[Formula]) -> LcTerm {
    if r.gen_bool(0.5) {
        LcTerm::gamma(fs.choose(r).unwrap().clone())
    } else {
        corpus::random_term(r, 5, true)
    }
}

/// Processes mixing instructions with small terms.
fn instructed(seed: u64) -> Process {
    let mut r = corpus::rng(seed);
    let fs = small_formulas();
    let head = entry(&mut r, &fs);
    let items: Vec<LcTerm> = (0..r.gen_range(0..3)).map(|_| entry(&mut r, &fs)).collect();
    Process::new(head, Stack::from_terms(items).unwrap()).unwrap()
}

fn config() -> PoleConfig {
    PoleConfig::default().with_k_max(8)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn levels_are_cumulative(seed in any::<u64>()) {
        let p = instructed(seed);
        let cfg = config();
        let mut before = false;
        for k in 0..8 {
            let now = in_pole(&p, k, &cfg).unwrap();
            prop_assert!(!before || now, "{} left the pole at {}", p, k);
            before = now;
        }
    }

    #[test]
    fn the_pole_is_closed_under_anti_reduction(seed in any::<u64>()) {
        let p = instructed(seed);
        let cfg = config();
        if let Some((q, _)) = step(&p) {
            for k in 0..7 {
                if in_pole(&q, k, &cfg).unwrap() {
                    prop_assert!(in_pole(&p, k + 1, &cfg).unwrap(), "{} at {} but not {}", q, k, p);
                }
            }
        }
    }

    #[test]
    fn substituting_tags_commutes_with_membership(seed in any::<u64>(), one in any::<bool>()) {
        let z = Ident::new("z");
        let mut r = corpus::rng(seed);
        let shapes = [
            parse_formula("z != 0").unwrap(),
            parse_formula("z != 1 -> _|_").unwrap(),
            parse_formula(r"z /\ 1 != z -> 0 != 1").unwrap(),
            parse_formula("(z != 0 -> _|_) -> _|_").unwrap(),
        ];
        let head = shapes.choose(&mut r).unwrap().clone();
        let arg = shapes.choose(&mut r).unwrap().clone();
        let b = if one { BTerm::One } else { BTerm::Zero };
        let build = |h: Formula, a: Formula| Process { term: LcTerm::gamma(h), stack: Stack::from_terms([LcTerm::gamma(a)]).unwrap() };
        let open = build(head.clone(), arg.clone());
        let direct = open.fo_subst(std::slice::from_ref(&z), std::slice::from_ref(&b)).unwrap();
        let inst = |f: &Formula| subst_formula(f, std::slice::from_ref(&z), std::slice::from_ref(&b)).unwrap();
        let rebuilt = build(inst(&head), inst(&arg));
        prop_assert_eq!(&direct, &rebuilt);
        prop_assert_eq!(in_pole_limit(&direct, &config()).unwrap(), in_pole_limit(&rebuilt, &config()).unwrap());
    }
}
