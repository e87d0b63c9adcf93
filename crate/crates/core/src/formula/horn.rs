use super::{BTerm, Formula};

/// Horn shapes: `∀z̄ (a₁ = a'₁ → … → aₙ = a'ₙ → b = b')` is definite,
/// the same chain ending in `b ≠ b'` is a goal clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HornKind {
    Definite,
    Goal,
    NotHorn,
}

fn is_bot(a: &Formula) -> bool {
    matches!(a, Formula::Neq(BTerm::Zero, BTerm::Zero))
}

/// `(a ≠ b) → ⊥`, the unfolded equation.
fn as_equation(a: &Formula) -> Option<(&BTerm, &BTerm)> {
    match a {
        Formula::Impl(p, q) if is_bot(q) => match &**p {
            Formula::Neq(l, r) => Some((l, r)),
            _ => None,
        },
        _ => None,
    }
}

pub fn classify_horn(a: &Formula) -> HornKind {
    let mut cur = a;
    while let Formula::Forall(_, body) = cur {
        cur = body;
    }
    let mut premises = Vec::new();
    while let Formula::Impl(p, q) = cur {
        premises.push(&**p);
        cur = q;
    }
    if !matches!(cur, Formula::Neq(..)) {
        return HornKind::NotHorn;
    }
    if premises.iter().all(|p| as_equation(p).is_some()) {
        return HornKind::Goal;
    }
    // A definite clause unfolds to `… → (b ≠ b') → ⊥`: the last premise is a
    // bare inequation and the final head is `0 ≠ 0`.
    if let Some((last, init)) = premises.split_last() {
        if is_bot(cur) && matches!(last, Formula::Neq(..)) && init.iter().all(|p| as_equation(p).is_some()) {
            return HornKind::Definite;
        }
    }
    HornKind::NotHorn
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{eq, exists, verum, Ident};

    #[test]
    fn classification_examples() {
        let z = || BTerm::var("z");
        let idem = Formula::forall("z", eq(BTerm::and(z(), z()), z()));
        assert_eq!(classify_horn(&idem), HornKind::Definite);
        assert_eq!(classify_horn(&verum()), HornKind::Goal);
        assert_eq!(classify_horn(&exists("z", Formula::neq(z(), BTerm::Zero))), HornKind::NotHorn);
    }

    #[test]
    fn chains() {
        let z = || BTerm::var("z");
        let w = || BTerm::var("w");
        let goal = Formula::forall_all(
            &[Ident::new("z"), Ident::new("w")],
            Formula::imp(eq(z(), w()), Formula::neq(z(), BTerm::not(w()))),
        );
        assert_eq!(classify_horn(&goal), HornKind::Goal);
        let def = Formula::forall_all(
            &[Ident::new("z"), Ident::new("w")],
            Formula::imp(eq(z(), w()), eq(BTerm::and(z(), w()), z())),
        );
        assert_eq!(classify_horn(&def), HornKind::Definite);
        // a bare inequation as a non-final premise is not Horn
        let bad = Formula::imp(
            Formula::neq(BTerm::Zero, BTerm::One),
            Formula::imp(Formula::neq(z(), w()), Formula::neq(BTerm::Zero, BTerm::Zero)),
        );
        assert_eq!(classify_horn(&bad), HornKind::NotHorn);
        // quantifier inside the chain
        let nested = Formula::imp(eq(z(), w()), Formula::forall("q", Formula::neq(z(), BTerm::var("q"))));
        assert_eq!(classify_horn(&nested), HornKind::NotHorn);
    }
}
