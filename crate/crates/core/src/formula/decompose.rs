//! Two-level normal form of a formula:
//!
//! ```text
//! ∀ȳ₁ (B₁ → … → ∀ȳ_m (B_m → ∀ȳ_{m+1} b ≠ b') …)
//! ```
//!
//! where every premise `Bᵢ` is itself split once more into
//! `∀z̄ᵢ,₁ (Cᵢ,₁ → … → ∀z̄ᵢ,ₙᵢ₊₁ cᵢ ≠ c'ᵢ)`. The bound lists are renamed into
//! a reserved `_y…` / `_z…` namespace, pairwise distinct and disjoint from
//! every name already present in the input.

use std::collections::BTreeSet;

use super::{BTerm, Formula, Ident};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub outer_blocks: Vec<OuterBlock>,
    pub tail_vars: Vec<Ident>,
    pub head_lhs: BTerm,
    pub head_rhs: BTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OuterBlock {
    pub vars: Vec<Ident>,
    pub premise: InnerDecomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InnerDecomposition {
    pub blocks: Vec<InnerBlock>,
    pub tail_vars: Vec<Ident>,
    pub head_lhs: BTerm,
    pub head_rhs: BTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InnerBlock {
    pub vars: Vec<Ident>,
    pub formula: Formula,
}

impl Decomposition {
    /// Number of premises `m`.
    pub fn arity(&self) -> usize {
        self.outer_blocks.len()
    }

    /// The concatenated list ȳ₁ … ȳ_{m+1}.
    pub fn all_y(&self) -> Vec<Ident> {
        self.outer_blocks
            .iter()
            .flat_map(|b| b.vars.iter().cloned())
            .chain(self.tail_vars.iter().cloned())
            .collect()
    }

    /// The premise `Bᵢ` as a formula (free in ȳ₁ … ȳᵢ).
    pub fn premise(&self, i: usize) -> Formula {
        self.outer_blocks[i].premise.recompose()
    }
}

impl InnerDecomposition {
    /// The concatenated list z̄ᵢ,₁ … z̄ᵢ,ₙᵢ₊₁.
    pub fn all_z(&self) -> Vec<Ident> {
        self.blocks
            .iter()
            .flat_map(|b| b.vars.iter().cloned())
            .chain(self.tail_vars.iter().cloned())
            .collect()
    }

    pub fn recompose(&self) -> Formula {
        let head = Formula::forall_all(
            &self.tail_vars,
            Formula::Neq(self.head_lhs.clone(), self.head_rhs.clone()),
        );
        self.blocks.iter().rev().fold(head, |acc, block| {
            Formula::forall_all(&block.vars, Formula::imp(block.formula.clone(), acc))
        })
    }
}

struct Fresh {
    taken: BTreeSet<Ident>,
}

impl Fresh {
    fn next(&mut self, prefix: &str) -> Ident {
        let mut n = 1usize;
        loop {
            let id = Ident::new(format!("{prefix}{n}"));
            if !self.taken.contains(&id) {
                self.taken.insert(id.clone());
                return id;
            }
            n += 1;
        }
    }
}

struct Spine {
    blocks: Vec<(Vec<Ident>, Formula)>,
    tail: Vec<Ident>,
    lhs: BTerm,
    rhs: BTerm,
}

/// Peel `∀`s and `→`s off the right spine, renaming binders as they are met.
fn spine(a: &Formula, fresh: &mut Fresh, prefix: &str) -> Spine {
    let mut cur = a.clone();
    let mut pending = Vec::new();
    let mut blocks = Vec::new();
    loop {
        match cur {
            Formula::Forall(y, body) => {
                let y2 = fresh.next(prefix);
                cur = body.subst_map(&[(y, BTerm::Var(y2.clone()))]);
                pending.push(y2);
            }
            Formula::Impl(b, rest) => {
                blocks.push((std::mem::take(&mut pending), *b));
                cur = *rest;
            }
            Formula::Neq(lhs, rhs) => {
                return Spine { blocks, tail: pending, lhs, rhs };
            }
        }
    }
}

pub fn decompose(a: &Formula) -> Decomposition {
    let mut fresh = Fresh { taken: a.all_vars() };
    let outer = spine(a, &mut fresh, "_y");
    let outer_blocks = outer
        .blocks
        .into_iter()
        .enumerate()
        .map(|(i, (vars, b))| {
            let inner = spine(&b, &mut fresh, &format!("_z{}_", i + 1));
            OuterBlock {
                vars,
                premise: InnerDecomposition {
                    blocks: inner
                        .blocks
                        .into_iter()
                        .map(|(vars, formula)| InnerBlock { vars, formula })
                        .collect(),
                    tail_vars: inner.tail,
                    head_lhs: inner.lhs,
                    head_rhs: inner.rhs,
                },
            }
        })
        .collect();
    Decomposition {
        outer_blocks,
        tail_vars: outer.tail,
        head_lhs: outer.lhs,
        head_rhs: outer.rhs,
    }
}

pub fn recompose(d: &Decomposition) -> Formula {
    let head = Formula::forall_all(&d.tail_vars, Formula::Neq(d.head_lhs.clone(), d.head_rhs.clone()));
    d.outer_blocks.iter().rev().fold(head, |acc, block| {
        Formula::forall_all(&block.vars, Formula::imp(block.premise.recompose(), acc))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{alpha_eq, bot, tbool_axioms};

    #[test]
    fn bare_inequation() {
        let d = decompose(&bot());
        assert_eq!(d.arity(), 0);
        assert!(d.all_y().is_empty());
        assert_eq!((d.head_lhs.clone(), d.head_rhs.clone()), (BTerm::Zero, BTerm::Zero));
    }

    #[test]
    fn single_premise() {
        let d = decompose(&Formula::imp(bot(), bot()));
        assert_eq!(d.arity(), 1);
        let inner = &d.outer_blocks[0].premise;
        assert!(inner.blocks.is_empty());
        assert_eq!(inner.recompose(), bot());
        assert_eq!(d.head_lhs, BTerm::Zero);
    }

    #[test]
    fn quantified_premise() {
        let a = Formula::forall(
            "y",
            Formula::imp(Formula::neq(BTerm::var("y"), BTerm::Zero), Formula::neq(BTerm::var("y"), BTerm::One)),
        );
        let d = decompose(&a);
        assert_eq!(d.arity(), 1);
        let y = d.outer_blocks[0].vars.clone();
        assert_eq!(y.len(), 1);
        assert!(d.tail_vars.is_empty());
        assert_eq!(d.premise(0), Formula::neq(BTerm::Var(y[0].clone()), BTerm::Zero));
        assert_eq!(d.head_lhs, BTerm::Var(y[0].clone()));
        assert_eq!(d.head_rhs, BTerm::One);
        assert!(alpha_eq(&recompose(&d), &a));
    }

    #[test]
    fn fresh_names_avoid_free_variables() {
        let a = Formula::forall("y", Formula::neq(BTerm::var("y"), BTerm::var("_y1")));
        let d = decompose(&a);
        assert_eq!(d.tail_vars.len(), 1);
        assert_ne!(d.tail_vars[0], Ident::new("_y1"));
        assert!(alpha_eq(&recompose(&d), &a));
    }

    #[test]
    fn recompose_tail_only() {
        let d = Decomposition {
            outer_blocks: vec![],
            tail_vars: vec![Ident::new("z")],
            head_lhs: BTerm::var("z"),
            head_rhs: BTerm::Zero,
        };
        assert_eq!(recompose(&d), Formula::forall("z", Formula::neq(BTerm::var("z"), BTerm::Zero)));
    }

    #[test]
    fn roundtrip_axioms() {
        for a in tbool_axioms() {
            let d = decompose(&a);
            let back = recompose(&d);
            assert!(alpha_eq(&back, &a), "{a} vs {back}");
            assert_eq!(decompose(&back).arity(), d.arity());
        }
    }
}
