//! Elements of `D_∞` as lazily computed coherent families of components.

use std::cell::Cell;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::lattice::{level, normalize, transport, MAX_RANK};
use super::DomainError;

/// A finite element `x ∈ D_rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fin {
    pub rank: usize,
    pub idx: u32,
}

impl Fin {
    pub fn new(rank: usize, idx: u32) -> Result<Fin, DomainError> {
        let l = level(rank)?;
        if idx as usize >= l.size() {
            return Err(DomainError::NoSuchElement { rank, idx });
        }
        Ok(Fin { rank, idx })
    }

    /// The same element at its least rank.
    pub fn normalized(self) -> Fin {
        let (rank, idx) = normalize(self.rank, self.idx);
        Fin { rank, idx }
    }

    pub fn at(self, n: usize) -> Result<u32, DomainError> {
        transport(self.idx, self.rank, n)
    }
}

impl fmt::Display for Fin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}[{}]", self.rank, self.idx)
    }
}

pub type Body = dyn Fn(&DElem) -> Result<DElem, DomainError> + Send + Sync;

enum Kind {
    Finite(Fin),
    Join(DElem, DElem),
    /// Step function `x → y` with compact `x`.
    Step(Fin, DElem),
    App(DElem, DElem),
    Lam(Arc<Body>),
}

struct Node {
    kind: Kind,
    comps: Mutex<[Option<u32>; MAX_RANK + 1]>,
    truncation: Option<usize>,
}

/// An element of `D_∞`; component `n` lives in `D_n` and is computed on
/// demand, for `n ≤ 3`.
#[derive(Clone)]
pub struct DElem(Arc<Node>);

const UNFOLD_LIMIT: usize = 12;

thread_local! {
    static UNFOLDING: Cell<usize> = const { Cell::new(0) };
}

/// Runs `f` one level deeper in the unfolding budget, so that closures
/// evaluated while computing components also fall back to lazy application.
fn deeper<T>(f: impl FnOnce() -> T) -> T {
    let depth = UNFOLDING.with(|d| d.get());
    UNFOLDING.with(|d| d.set(depth + 1));
    let r = f();
    UNFOLDING.with(|d| d.set(depth));
    r
}

fn max_tag(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    }
}

impl DElem {
    fn mk(kind: Kind, truncation: Option<usize>) -> DElem {
        DElem(Arc::new(Node { kind, comps: Mutex::new([None; MAX_RANK + 1]), truncation }))
    }

    pub fn finite(x: Fin) -> DElem {
        DElem::mk(Kind::Finite(x.normalized()), None)
    }

    pub fn bottom() -> DElem {
        DElem::finite(Fin { rank: 0, idx: 0 })
    }

    pub fn top() -> DElem {
        DElem::finite(Fin { rank: 0, idx: 1 })
    }

    /// `Ψ(f)`: the element whose application is `f`.
    pub fn lam(f: impl Fn(&DElem) -> Result<DElem, DomainError> + Send + Sync + 'static) -> DElem {
        DElem::mk(Kind::Lam(Arc::new(f)), None)
    }

    pub fn with_truncation(self, n: Option<usize>) -> DElem {
        if n.is_none() || self.0.truncation == n {
            return self;
        }
        let kind = match &self.0.kind {
            Kind::Finite(x) => Kind::Finite(*x),
            Kind::Join(a, b) => Kind::Join(a.clone(), b.clone()),
            Kind::Step(x, y) => Kind::Step(*x, y.clone()),
            Kind::App(g, a) => Kind::App(g.clone(), a.clone()),
            Kind::Lam(f) => Kind::Lam(f.clone()),
        };
        let out = DElem::mk(kind, max_tag(self.0.truncation, n));
        *out.0.comps.lock().unwrap() = *self.0.comps.lock().unwrap();
        out
    }

    /// `Some(N')` when the element was built from a cc approximation joining
    /// over `D_{N'}` only; comparisons with it hold at the rank compared.
    pub fn truncation(&self) -> Option<usize> {
        self.0.truncation
    }

    pub fn as_finite(&self) -> Option<Fin> {
        match self.0.kind {
            Kind::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// Component `n ∈ D_n`.
    pub fn comp(&self, n: usize) -> Result<u32, DomainError> {
        if n > MAX_RANK {
            return Err(DomainError::RankCap { rank: n, cap: MAX_RANK });
        }
        if let Some(v) = self.0.comps.lock().unwrap()[n] {
            return Ok(v);
        }
        let v = self.compute(n)?;
        self.0.comps.lock().unwrap()[n] = Some(v);
        Ok(v)
    }

    fn compute(&self, n: usize) -> Result<u32, DomainError> {
        match &self.0.kind {
            Kind::Finite(x) => x.at(n),
            Kind::Join(a, b) => Ok(level(n)?.join(a.comp(n)?, b.comp(n)?)),
            Kind::Step(x, y) => {
                if n == 0 {
                    return Ok(if x.idx == 0 && x.rank == 0 { y.comp(0)? } else { 0 });
                }
                let k = n - 1;
                let t = level(k)?
                    .elements()
                    .map(|v| Ok(step_apply(x, y, v, k)? as u8))
                    .collect::<Result<Vec<u8>, DomainError>>()?;
                Ok(level(n)?.index_of(&t).expect("step functions are monotone"))
            }
            Kind::App(g, a) => g.apply_at(n + 1, a.comp(n)?),
            Kind::Lam(f) => {
                if n == 0 {
                    return deeper(|| f(&DElem::bottom())?.comp(0));
                }
                let k = n - 1;
                let lo = level(k)?;
                let t = lo
                    .elements()
                    .map(|v| Ok(deeper(|| f(&DElem::finite(Fin { rank: k, idx: v }))?.comp(k))? as u8))
                    .collect::<Result<Vec<u8>, DomainError>>()?;
                level(n)?.index_of(&t).ok_or(DomainError::NotMonotone { rank: n })
            }
        }
    }

    /// Component `m` of `self`, applied to `v ∈ D_{m-1}`; works for `m = 4`
    /// without building the rank-4 table.
    fn apply_at(&self, m: usize, v: u32) -> Result<u32, DomainError> {
        let k = m - 1;
        match &self.0.kind {
            Kind::Finite(x) => {
                if m <= MAX_RANK {
                    return Ok(level(m)?.apply(x.at(m)?, v));
                }
                // φ_3(x_3)(v) = φ_2(x_3(ψ_2 v))
                let x3 = x.at(MAX_RANK)?;
                let inner = level(MAX_RANK)?.apply(x3, transport(v, MAX_RANK, MAX_RANK - 1)?);
                transport(inner, MAX_RANK - 1, MAX_RANK)
            }
            Kind::Join(a, b) => Ok(level(k)?.join(a.apply_at(m, v)?, b.apply_at(m, v)?)),
            Kind::Step(x, y) => step_apply(x, y, v, k),
            Kind::Lam(f) => deeper(|| f(&DElem::finite(Fin { rank: k, idx: v }))?.comp(k)),
            Kind::App(..) => {
                if m <= MAX_RANK {
                    Ok(level(m)?.apply(self.comp(m)?, v))
                } else {
                    Err(DomainError::RankCap { rank: m, cap: MAX_RANK })
                }
            }
        }
    }

    pub fn leq(&self, other: &DElem, rank: usize) -> Result<bool, DomainError> {
        Ok(level(rank)?.leq(self.comp(rank)?, other.comp(rank)?))
    }

    pub fn eq_at(&self, other: &DElem, rank: usize) -> Result<bool, DomainError> {
        Ok(self.comp(rank)? == other.comp(rank)?)
    }

    /// Does `ψ_n(component(n+1)) = component(n)` hold for all `n < upto`?
    pub fn coherent(&self, upto: usize) -> Result<bool, DomainError> {
        for n in 0..upto {
            if transport(self.comp(n + 1)?, n + 1, n)? != self.comp(n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(x → y)` at rank `k + 1`, applied to `v ∈ D_k`.
fn step_apply(x: &Fin, y: &DElem, v: u32, k: usize) -> Result<u32, DomainError> {
    let m = k.max(x.rank);
    if level(m)?.leq(x.at(m)?, transport(v, k, m)?) {
        y.comp(k)
    } else {
        Ok(0)
    }
}

pub fn embed(x: Fin) -> DElem {
    DElem::finite(x)
}

pub fn project(x: &DElem, n: usize) -> Result<Fin, DomainError> {
    Ok(Fin { rank: n, idx: x.comp(n)? })
}

pub fn join(a: &DElem, b: &DElem) -> DElem {
    let tag = max_tag(a.truncation(), b.truncation());
    if let (Some(x), Some(y)) = (a.as_finite(), b.as_finite()) {
        let r = x.rank.max(y.rank);
        let l = level(r).expect("finite ranks are in range");
        let v = l.join(x.at(r).expect("in range"), y.at(r).expect("in range"));
        return DElem::finite(Fin { rank: r, idx: v }).with_truncation(tag);
    }
    if a.as_finite() == Some(Fin { rank: 0, idx: 0 }) {
        return b.clone();
    }
    if b.as_finite() == Some(Fin { rank: 0, idx: 0 }) {
        return a.clone();
    }
    DElem::mk(Kind::Join(a.clone(), b.clone()), tag)
}

pub fn join_all(items: impl IntoIterator<Item = DElem>) -> DElem {
    items.into_iter().fold(DElem::bottom(), |acc, x| join(&acc, &x))
}

/// The step function `x → y`: least element sending everything above `x`
/// to at least `y`. `x` must be compact.
pub fn arrow(x: &DElem, y: &DElem) -> Result<DElem, DomainError> {
    let tag = max_tag(x.truncation(), y.truncation());
    let xf = x.as_finite().ok_or(DomainError::NotCompact)?;
    if let Some(yf) = y.as_finite() {
        let m = xf.rank.max(yf.rank);
        if m < MAX_RANK {
            let lo = level(m)?;
            let (xm, ym) = (xf.at(m)?, yf.at(m)?);
            let t: Vec<u8> = lo.elements().map(|v| if lo.leq(xm, v) { ym as u8 } else { 0 }).collect();
            let idx = level(m + 1)?.index_of(&t).expect("step functions are monotone");
            return Ok(DElem::finite(Fin { rank: m + 1, idx }).with_truncation(tag));
        }
    }
    Ok(DElem::mk(Kind::Step(xf, y.clone()), tag))
}

/// `Φ(f)(a)`.
pub fn app(f: &DElem, a: &DElem) -> Result<DElem, DomainError> {
    let tag = max_tag(f.truncation(), a.truncation());
    let out = match &f.0.kind {
        Kind::Finite(g) => {
            let r = g.rank.max(1);
            let v = level(r)?.apply(g.at(r)?, a.comp(r - 1)?);
            DElem::finite(Fin { rank: r - 1, idx: v })
        }
        Kind::Join(g, h) => join(&app(g, a)?, &app(h, a)?),
        Kind::Step(x, y) => {
            if level(x.rank)?.leq(x.idx, a.comp(x.rank)?) {
                y.clone()
            } else {
                DElem::bottom()
            }
        }
        Kind::Lam(body) => {
            let depth = UNFOLDING.with(|d| d.get());
            if depth >= UNFOLD_LIMIT {
                DElem::mk(Kind::App(f.clone(), a.clone()), None)
            } else {
                deeper(|| body(a))?
            }
        }
        Kind::App(..) => DElem::mk(Kind::App(f.clone(), a.clone()), None),
    };
    Ok(out.with_truncation(tag))
}

impl fmt::Debug for DElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Finite(x) => write!(f, "{x}"),
            Kind::Join(a, b) => write!(f, "({a:?} ∨ {b:?})"),
            Kind::Step(x, y) => write!(f, "({x} → {y:?})"),
            Kind::App(g, a) => write!(f, "({g:?} {a:?})"),
            Kind::Lam(_) => f.write_str("λ…"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(rank: usize, idx: u32) -> DElem {
        DElem::finite(Fin::new(rank, idx).unwrap())
    }

    #[test]
    fn arrow_basics() {
        let (b, t) = (DElem::bottom(), DElem::top());
        assert_eq!(arrow(&b, &b).unwrap().as_finite(), Some(Fin { rank: 0, idx: 0 }));
        assert_eq!(arrow(&t, &t).unwrap().as_finite(), Some(Fin { rank: 1, idx: 1 }));
        assert_eq!(arrow(&b, &t).unwrap().as_finite(), Some(Fin { rank: 0, idx: 1 }));
        for x in 0..3 {
            for y in 0..3 {
                let (x, y) = (fin(1, x), fin(1, y));
                let s = arrow(&x, &y).unwrap();
                assert!(y.leq(&app(&s, &x).unwrap(), 2).unwrap());
            }
        }
    }

    #[test]
    fn lam_app_roundtrip() {
        let id = DElem::lam(|a| Ok(a.clone()));
        for x in level(2).unwrap().elements() {
            let x = fin(2, x);
            let y = app(&id, &x).unwrap();
            for n in 0..=3 {
                assert!(y.eq_at(&x, n).unwrap());
            }
        }
        let const_bot = DElem::lam(|_| Ok(DElem::bottom()));
        for n in 0..=2 {
            assert_eq!(const_bot.comp(n).unwrap(), 0);
        }
        assert!(id.coherent(3).unwrap());
    }

    #[test]
    fn rank_four_steps() {
        let x = fin(3, 17);
        let s = arrow(&x, &DElem::top()).unwrap();
        assert!(s.as_finite().is_none());
        assert!(s.coherent(3).unwrap());
        assert_eq!(app(&s, &x).unwrap().as_finite(), Some(Fin { rank: 0, idx: 1 }));
        assert_eq!(app(&s, &DElem::bottom()).unwrap().as_finite(), Some(Fin { rank: 0, idx: 0 }));
    }

    #[test]
    fn joins() {
        let x = fin(2, 4);
        assert!(join(&x, &DElem::bottom()).eq_at(&x, 3).unwrap());
        let y = fin(2, 7);
        assert!(join(&x, &y).eq_at(&join(&y, &x), 3).unwrap());
    }
}
