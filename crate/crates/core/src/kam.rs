//! Krivine abstract machine: weak head evaluation of processes.

use std::fmt;

use crate::lambda::{subst1, LcTerm, Process, SharedEq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Push,
    Grab,
    Save,
    Restore,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Push => "Push",
            Rule::Grab => "Grab",
            Rule::Save => "Save",
            Rule::Restore => "Restore",
        })
    }
}

/// One machine transition, or `None` when no rule applies.
pub fn step(p: &Process) -> Option<(Process, Rule)> {
    match &p.term {
        LcTerm::App(t, u) => Some((
            Process::new_unchecked((**t).clone(), p.stack.push_unchecked((**u).clone())),
            Rule::Push,
        )),
        LcTerm::Lam(x, body) => {
            let (t, pi) = p.stack.pop()?;
            Some((Process::new_unchecked(subst1(body, x, t), pi.clone()), Rule::Grab))
        }
        LcTerm::Cc => {
            let (t, pi) = p.stack.pop()?;
            let k = LcTerm::Kont(pi.clone());
            Some((Process::new_unchecked(t.clone(), pi.push_unchecked(k)), Rule::Save))
        }
        LcTerm::Kont(saved) => {
            let (t, _) = p.stack.pop()?;
            Some((Process::new_unchecked(t.clone(), saved.clone()), Rule::Restore))
        }
        LcTerm::Var(_) | LcTerm::Gamma(_) | LcTerm::Zeta(_) | LcTerm::Eta(_) => None,
    }
}

/// The run of a process: `steps[i]` is the `i`-th process visited together
/// with the rule that fired on it; `last` is where the run stopped.
#[derive(Clone, Debug)]
pub struct Trace {
    pub steps: Vec<(Process, Rule)>,
    pub last: Process,
    pub stuck: bool,
}

impl PartialEq for Trace {
    fn eq(&self, other: &Trace) -> bool {
        let mut eq = SharedEq::new();
        self.stuck == other.stuck
            && self.steps.len() == other.steps.len()
            && self.steps.iter().zip(&other.steps).all(|((p, r), (q, s))| r == s && eq.processes(p, q))
            && eq.processes(&self.last, &other.last)
    }
}

impl Eq for Trace {}

impl Trace {
    /// Each fired rule paired with the process it produced.
    pub fn transitions(&self) -> impl Iterator<Item = (Rule, &Process)> {
        self.steps
            .iter()
            .enumerate()
            .map(move |(i, (_, r))| (*r, self.steps.get(i + 1).map_or(&self.last, |(q, _)| q)))
    }
}

pub fn evaluate(p: &Process, fuel: usize) -> Trace {
    let mut steps = Vec::new();
    let mut cur = p.clone();
    while steps.len() < fuel {
        match step(&cur) {
            Some((next, rule)) => {
                steps.push((cur, rule));
                cur = next;
            }
            None => return Trace { steps, last: cur, stuck: true },
        }
    }
    let stuck = step(&cur).is_none();
    Trace { steps, last: cur, stuck }
}

/// Does `p` reach `q` within `fuel` steps (reflexively)?
pub fn reduces_to(p: &Process, q: &Process, fuel: usize) -> bool {
    let mut cur = p.clone();
    for _ in 0..fuel {
        if &cur == q {
            return true;
        }
        match step(&cur) {
            Some((next, _)) => cur = next,
            None => return false,
        }
    }
    &cur == q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::bot;
    use crate::lambda::Stack;

    fn proc(t: LcTerm, items: Vec<LcTerm>) -> Process {
        Process::new(t, Stack::from_terms(items).unwrap()).unwrap()
    }

    #[test]
    fn four_rules() {
        let i = LcTerm::identity();
        let p = proc(LcTerm::app(i.clone(), LcTerm::Cc), vec![]);
        assert_eq!(step(&p), Some((proc(i.clone(), vec![LcTerm::Cc]), Rule::Push)));

        let p = proc(i.clone(), vec![LcTerm::Cc, LcTerm::Zeta(1)]);
        assert_eq!(step(&p), Some((proc(LcTerm::Cc, vec![LcTerm::Zeta(1)]), Rule::Grab)));

        let p = proc(LcTerm::Cc, vec![i.clone(), LcTerm::Zeta(1)]);
        let k = LcTerm::Kont(Stack::from_terms([LcTerm::Zeta(1)]).unwrap());
        assert_eq!(step(&p), Some((proc(i.clone(), vec![k, LcTerm::Zeta(1)]), Rule::Save)));

        let saved = Stack::from_terms([LcTerm::Zeta(2)]).unwrap();
        let p = proc(LcTerm::Kont(saved.clone()), vec![i.clone(), LcTerm::Zeta(1)]);
        assert_eq!(step(&p), Some((Process::new(i, saved).unwrap(), Rule::Restore)));

        assert_eq!(step(&proc(LcTerm::gamma(bot()), vec![LcTerm::Cc])), None);
        assert_eq!(step(&proc(LcTerm::Cc, vec![])), None);
    }

    #[test]
    fn evaluation_traces() {
        let p = proc(LcTerm::app(LcTerm::identity(), LcTerm::Cc), vec![]);
        let t = evaluate(&p, 10);
        assert!(t.stuck);
        assert_eq!(t.steps.iter().map(|s| s.1).collect::<Vec<_>>(), vec![Rule::Push, Rule::Grab]);
        assert_eq!(t.last, proc(LcTerm::Cc, vec![]));

        let omega = proc(LcTerm::omega(), vec![]);
        let t = evaluate(&omega, 100);
        assert!(!t.stuck);
        assert_eq!(t.steps.len(), 100);
        assert_eq!(t.steps[0].0, t.steps[2].0);
    }

    #[test]
    fn reachability() {
        let p = proc(LcTerm::Cc, vec![]);
        assert!(reduces_to(&p, &p, 0));
        assert!(!reduces_to(&p, &proc(LcTerm::Zeta(0), vec![]), 10));
        let q = proc(LcTerm::app(LcTerm::Zeta(0), LcTerm::Zeta(1)), vec![]);
        assert!(reduces_to(&q, &proc(LcTerm::Zeta(0), vec![LcTerm::Zeta(1)]), 1));
    }
}
