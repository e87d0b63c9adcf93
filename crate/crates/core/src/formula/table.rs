use super::{BTerm, Ident};

/// A term over `us` whose value on every `{0,1}` assignment is `f` of that
/// assignment. Built as the disjunction of the minterms where `f` holds; the
/// empty disjunction is `0` and the empty minterm is `1`.
///
/// `f` receives the assignment with `bits[i]` the value of `us[i]`.
pub fn table_term(f: impl Fn(&[bool]) -> bool, us: &[Ident]) -> BTerm {
    let r = us.len();
    let mut acc: Option<BTerm> = None;
    let mut bits = vec![false; r];
    for row in 0..(1u64 << r) {
        for (i, b) in bits.iter_mut().enumerate() {
            *b = (row >> i) & 1 == 1;
        }
        if !f(&bits) {
            continue;
        }
        let minterm = us
            .iter()
            .zip(&bits)
            .map(|(u, &b)| {
                let v = BTerm::Var(u.clone());
                if b {
                    v
                } else {
                    BTerm::not(v)
                }
            })
            .reduce(BTerm::and)
            .unwrap_or(BTerm::One);
        acc = Some(match acc {
            None => minterm,
            Some(prev) => BTerm::or(prev, minterm),
        });
    }
    acc.unwrap_or(BTerm::Zero)
}
