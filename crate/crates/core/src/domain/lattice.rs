//! The finite lattices `D_0 = {⊥, ⊤}` and `D_{n+1} = [D_n → D_n]`, with
//! the projection pairs `φ_n : D_n → D_{n+1}`, `ψ_n : D_{n+1} → D_n`.
//!
//! Elements of `D_{n+1}` are monotone tables indexed by `D_n`, listed in
//! lexicographic order. That order extends the pointwise one, so index 0 is
//! the bottom and the last index the top.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::DomainError;

/// Ranks that are ever enumerated.
pub const MAX_RANK: usize = 3;

pub struct Level {
    rank: usize,
    size: usize,
    /// Row `i` is the table of element `i`; empty for rank 0.
    tables: Vec<u8>,
    stride: usize,
    index: HashMap<u64, u32>,
    /// `size × size` order matrix, kept for ranks ≤ 2.
    leq: Vec<bool>,
}

fn key(table: &[u8]) -> u64 {
    table.iter().fold(0u64, |acc, &v| (acc << 4) | v as u64)
}

impl Level {
    fn base() -> Level {
        Level { rank: 0, size: 2, tables: Vec::new(), stride: 0, index: HashMap::new(), leq: vec![true, true, false, true] }
    }

    /// All monotone self-maps of `prev`.
    fn above(prev: &Level) -> Level {
        let n = prev.size;
        let mut tables = Vec::new();
        let mut cur = vec![0u8; n];
        fn fill(i: usize, cur: &mut Vec<u8>, prev: &Level, out: &mut Vec<u8>) {
            if i == cur.len() {
                out.extend_from_slice(cur);
                return;
            }
            let lo = (0..i).filter(|&j| prev.leq(j as u32, i as u32)).map(|j| cur[j]).collect::<Vec<_>>();
            for c in 0..cur.len() as u8 {
                if lo.iter().all(|&l| prev.leq(l as u32, c as u32)) {
                    cur[i] = c;
                    fill(i + 1, cur, prev, out);
                }
            }
        }
        fill(0, &mut cur, prev, &mut tables);
        let size = tables.len() / n;
        let index = (0..size).map(|i| (key(&tables[i * n..(i + 1) * n]), i as u32)).collect();
        let mut level = Level { rank: prev.rank + 1, size, tables, stride: n, index, leq: Vec::new() };
        if level.rank < MAX_RANK {
            let mut m = vec![false; size * size];
            for a in 0..size {
                for b in 0..size {
                    m[a * size + b] = (0..n).all(|v| prev.leq(level.table(a as u32)[v] as u32, level.table(b as u32)[v] as u32));
                }
            }
            level.leq = m;
        }
        level
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> u32 {
        0
    }

    pub fn top(&self) -> u32 {
        self.size as u32 - 1
    }

    /// The table of a rank ≥ 1 element.
    pub fn table(&self, f: u32) -> &[u8] {
        let s = self.stride;
        &self.tables[f as usize * s..(f as usize + 1) * s]
    }

    pub fn apply(&self, f: u32, v: u32) -> u32 {
        self.table(f)[v as usize] as u32
    }

    pub fn index_of(&self, table: &[u8]) -> Option<u32> {
        if table.len() != self.stride {
            return None;
        }
        self.index.get(&key(table)).copied()
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        if !self.leq.is_empty() {
            return self.leq[a as usize * self.size + b as usize];
        }
        let prev = level_unchecked(self.rank - 1);
        self.table(a).iter().zip(self.table(b)).all(|(&x, &y)| prev.leq(x as u32, y as u32))
    }

    fn pointwise(&self, a: u32, b: u32, op: impl Fn(&Level, u32, u32) -> u32) -> u32 {
        if self.rank == 0 {
            return op(self, a, b);
        }
        let prev = level_unchecked(self.rank - 1);
        let t: Vec<u8> = self.table(a).iter().zip(self.table(b)).map(|(&x, &y)| op(prev, x as u32, y as u32) as u8).collect();
        self.index_of(&t).expect("pointwise combination of monotone maps is monotone")
    }

    pub fn join(&self, a: u32, b: u32) -> u32 {
        if self.leq(a, b) {
            b
        } else if self.leq(b, a) {
            a
        } else {
            self.pointwise(a, b, Level::join)
        }
    }

    pub fn meet(&self, a: u32, b: u32) -> u32 {
        if self.leq(a, b) {
            a
        } else if self.leq(b, a) {
            b
        } else {
            self.pointwise(a, b, Level::meet)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size as u32
    }
}

struct Tower {
    levels: Vec<OnceLock<Level>>,
    phi: Vec<OnceLock<Vec<u32>>>,
    psi: Vec<OnceLock<Vec<u32>>>,
}

fn tower() -> &'static Tower {
    static TOWER: OnceLock<Tower> = OnceLock::new();
    TOWER.get_or_init(|| Tower {
        levels: (0..=MAX_RANK).map(|_| OnceLock::new()).collect(),
        phi: (0..MAX_RANK).map(|_| OnceLock::new()).collect(),
        psi: (0..MAX_RANK).map(|_| OnceLock::new()).collect(),
    })
}

fn level_unchecked(n: usize) -> &'static Level {
    tower().levels[n].get_or_init(|| if n == 0 { Level::base() } else { Level::above(level_unchecked(n - 1)) })
}

fn cap_check(n: usize) -> Result<(), DomainError> {
    if n > MAX_RANK {
        Err(DomainError::RankCap { rank: n, cap: MAX_RANK })
    } else {
        Ok(())
    }
}

pub fn level(n: usize) -> Result<&'static Level, DomainError> {
    cap_check(n)?;
    Ok(level_unchecked(n))
}

fn phi_table(n: usize) -> &'static [u32] {
    tower().phi[n].get_or_init(|| {
        let lo = level_unchecked(n);
        let hi = level_unchecked(n + 1);
        lo.elements()
            .map(|a| {
                let t: Vec<u8> = if n == 0 {
                    vec![a as u8; 2]
                } else {
                    hi.tables_domain().map(|v| phi_table(n - 1)[lo.apply(a, psi_table(n - 1)[v as usize]) as usize] as u8).collect()
                };
                hi.index_of(&t).expect("embedding is monotone")
            })
            .collect()
    })
}

fn psi_table(n: usize) -> &'static [u32] {
    tower().psi[n].get_or_init(|| {
        let lo = level_unchecked(n);
        let hi = level_unchecked(n + 1);
        hi.elements()
            .map(|f| {
                if n == 0 {
                    hi.apply(f, 0)
                } else {
                    let t: Vec<u8> = lo
                        .tables_domain()
                        .map(|v| psi_table(n - 1)[hi.apply(f, phi_table(n - 1)[v as usize]) as usize] as u8)
                        .collect();
                    lo.index_of(&t).expect("projection is monotone")
                }
            })
            .collect()
    })
}

impl Level {
    /// Elements of the level below, i.e. the domain of this level's tables.
    fn tables_domain(&self) -> impl Iterator<Item = u32> {
        0..self.stride as u32
    }
}

/// `φ_n : D_n → D_{n+1}`.
pub fn phi(n: usize, x: u32) -> Result<u32, DomainError> {
    cap_check(n + 1)?;
    Ok(phi_table(n)[x as usize])
}

/// `ψ_n : D_{n+1} → D_n`.
pub fn psi(n: usize, f: u32) -> Result<u32, DomainError> {
    cap_check(n + 1)?;
    Ok(psi_table(n)[f as usize])
}

/// Moves `x ∈ D_from` to `D_to` along `φ` or `ψ`.
pub fn transport(x: u32, from: usize, to: usize) -> Result<u32, DomainError> {
    cap_check(from.max(to))?;
    let mut x = x;
    for n in from..to {
        x = phi_table(n)[x as usize];
    }
    for n in (to..from).rev() {
        x = psi_table(n)[x as usize];
    }
    Ok(x)
}

/// Least rank at which `x ∈ D_rank` already lives, with its index there.
pub fn normalize(rank: usize, x: u32) -> (usize, u32) {
    let (mut r, mut x) = (rank, x);
    while r > 0 {
        let down = psi_table(r - 1)[x as usize];
        if phi_table(r - 1)[down as usize] != x {
            break;
        }
        r -= 1;
        x = down;
    }
    (r, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let sizes: Vec<usize> = (0..=2).map(|n| level(n).unwrap().size()).collect();
        assert_eq!(sizes, vec![2, 3, 10]);
        assert!(level(4).is_err());
    }

    #[test]
    fn rank_three_size_by_independent_count() {
        let chain: Vec<[u8; 3]> = (0..27u8)
            .map(|c| [c / 9, c / 3 % 3, c % 3])
            .filter(|t| t[0] <= t[1] && t[1] <= t[2])
            .collect();
        assert_eq!(chain.len(), 10);
        let le = |a: usize, b: usize| (0..3).all(|i| chain[a][i] <= chain[b][i]);
        fn count(i: usize, img: &mut Vec<usize>, le: &dyn Fn(usize, usize) -> bool) -> usize {
            if i == 10 {
                return 1;
            }
            let mut n = 0;
            for y in 0..10 {
                if (0..i).all(|j| (!le(j, i) || le(img[j], y)) && (!le(i, j) || le(y, img[j]))) {
                    img.push(y);
                    n += count(i + 1, img, le);
                    img.pop();
                }
            }
            n
        }
        let expected = count(0, &mut Vec::new(), &le);
        assert_eq!(expected, 120549);
        assert_eq!(level(3).unwrap().size(), expected);
    }

    #[test]
    fn rank_one_is_a_chain() {
        let l = level(1).unwrap();
        let tables: Vec<&[u8]> = l.elements().map(|f| l.table(f)).collect();
        assert_eq!(tables, vec![&[0u8, 0][..], &[0, 1], &[1, 1]]);
        assert!(l.leq(0, 1) && l.leq(1, 2));
    }

    #[test]
    fn projection_pairs() {
        assert_eq!(phi(0, 1).unwrap(), 2);
        assert_eq!(psi(0, 1).unwrap(), 0);
        for n in 0..=1 {
            let lo = level(n).unwrap();
            let hi = level(n + 1).unwrap();
            for x in lo.elements() {
                assert_eq!(psi(n, phi(n, x).unwrap()).unwrap(), x);
            }
            for f in hi.elements() {
                assert!(hi.leq(phi(n, psi(n, f).unwrap()).unwrap(), f));
            }
        }
    }

    #[test]
    fn normal_forms() {
        assert_eq!(normalize(2, phi(1, 1).unwrap()), (1, 1));
        assert_eq!(normalize(2, level(2).unwrap().top()), (0, 1));
        assert_eq!(normalize(1, 0), (0, 0));
    }
}
