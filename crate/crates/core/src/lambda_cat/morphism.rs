//! Morphisms of Λ encoded by integer lifts.
//!
//! A map `[n'] -> [n]` is a nondecreasing `G: Z -> Z` with
//! `G(x + n') = G(x) + n`, stored through its values on `0..n'` and
//! normalized so that `0 <= G(0) < n`. Marked point `x` goes to `G(x) mod n`.

use std::fmt;

use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycMor {
    source: usize,
    target: usize,
    lift: Vec<i64>,
}

impl fmt::Debug for CycMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}]{:?}", self.source, self.target, self.lift)
    }
}

/// A generator of Λ, as used by [`CycMor::decompose`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `δ_i : [n+1] -> [n]`; for `i < n` merges points `i` and `i+1`,
    /// `δ_n` merges point `n` into point `0` (product `a_n a_0`).
    Face { n: usize, i: usize },
    /// `s_i : [n] -> [n+1]`, `i < n`, missing point `i+1`.
    Degeneracy { n: usize, i: usize },
    /// `t : [n] -> [n]`, `x ↦ x+1`.
    Rotation { n: usize },
}

impl Generator {
    pub fn to_mor(self) -> CycMor {
        match self {
            Generator::Face { n, i } => CycMor::face(n, i),
            Generator::Degeneracy { n, i } => CycMor::degeneracy(n, i),
            Generator::Rotation { n } => CycMor::rotation(n),
        }
    }
}

impl CycMor {
    pub fn new(source: usize, target: usize, lift: Vec<i64>) -> Result<Self, Error> {
        if source == 0 || target == 0 {
            return Err(Error::Invalid("objects of Λ are [n] with n ≥ 1".into()));
        }
        if lift.len() != source {
            return Err(Error::Invalid(format!(
                "lift of length {} for source [{source}]",
                lift.len()
            )));
        }
        let n = target as i64;
        if !(0..n).contains(&lift[0]) {
            return Err(Error::Invalid(format!("G(0) = {} outside [0, {n})", lift[0])));
        }
        if lift.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid(format!("lift {lift:?} is not monotone")));
        }
        if lift[source - 1] > lift[0] + n {
            return Err(Error::Invalid(format!("lift {lift:?} has degree above one")));
        }
        Ok(CycMor {
            source,
            target,
            lift,
        })
    }

    /// Builds from any lift, shifting it so that `G(0) ∈ [0, n)`.
    fn normalized(source: usize, target: usize, mut lift: Vec<i64>) -> Self {
        let shift = lift[0].div_euclid(target as i64) * target as i64;
        for g in &mut lift {
            *g -= shift;
        }
        debug_assert!(Self::new(source, target, lift.clone()).is_ok());
        CycMor {
            source,
            target,
            lift,
        }
    }

    pub fn identity(n: usize) -> Self {
        CycMor::normalized(n, n, (0..n as i64).collect())
    }

    pub fn rotation(n: usize) -> Self {
        CycMor::normalized(n, n, (1..=n as i64).collect())
    }

    pub fn face(n: usize, i: usize) -> Self {
        assert!(i <= n, "face index {i} out of range for [{}]", n + 1);
        let lift = (0..=n as i64)
            .map(|x| if i < n && x > i as i64 { x - 1 } else { x })
            .collect();
        CycMor::normalized(n + 1, n, lift)
    }

    pub fn degeneracy(n: usize, i: usize) -> Self {
        assert!(i < n, "degeneracy index {i} out of range for [{n}]");
        let lift = (0..n as i64).map(|x| if x > i as i64 { x + 1 } else { x }).collect();
        CycMor::normalized(n, n + 1, lift)
    }

    /// The extra degeneracy `t ∘ s_{n-1} : [n] -> [n+1]`, inserting in front.
    pub fn extra_degeneracy(n: usize) -> Self {
        CycMor::rotation(n + 1).after(&CycMor::degeneracy(n, n - 1))
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn lift(&self) -> &[i64] {
        &self.lift
    }

    /// The lift extended to all integers.
    pub fn eval(&self, x: i64) -> i64 {
        let q = x.div_euclid(self.source as i64);
        let r = x.rem_euclid(self.source as i64) as usize;
        self.lift[r] + q * self.target as i64
    }

    /// Image of a marked point.
    pub fn apply(&self, x: usize) -> usize {
        self.eval(x as i64).rem_euclid(self.target as i64) as usize
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.lift.iter().enumerate().all(|(i, &g)| g == i as i64)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &CycMor) -> Result<CycMor, Error> {
        if f.target != self.source {
            return Err(Error::Invalid(format!(
                "cannot compose {self:?} after {f:?}"
            )));
        }
        Ok(self.after(f))
    }

    /// `self ∘ f`, panicking on mismatched objects.
    pub fn after(&self, f: &CycMor) -> CycMor {
        assert_eq!(f.target, self.source, "cannot compose {self:?} after {f:?}");
        let lift = f.lift.iter().map(|&y| self.eval(y)).collect();
        CycMor::normalized(f.source, self.target, lift)
    }

    /// The fiber over `v` in its natural linear order.
    pub fn fiber(&self, v: usize) -> Vec<usize> {
        assert!(v < self.target);
        let n = self.target as i64;
        let np = self.source as i64;
        let g0 = self.lift[0];
        // the representative of v in [G(0), G(0)+n)
        let vl = g0 + (v as i64 - g0).rem_euclid(n);
        (-np..np)
            .filter(|&x| self.eval(x) == vl)
            .map(|x| x.rem_euclid(np) as usize)
            .collect()
    }

    /// All fibers, indexed by target point.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        (0..self.target).map(|v| self.fiber(v)).collect()
    }

    /// Writes `self` as a word in generators, listed in order of application.
    pub fn decompose(&self) -> Vec<Generator> {
        let k = self.lift[0];
        let mut word = Vec::new();
        let phi: Vec<i64> = self.lift.iter().map(|g| g - k).collect();
        decompose_based(phi, self.target, &mut word);
        for _ in 0..k {
            word.push(Generator::Rotation { n: self.target });
        }
        word
    }

    /// Checks that [`decompose`](Self::decompose) multiplies back to `self`.
    pub fn recompose(word: &[Generator], n: usize) -> CycMor {
        word.iter()
            .fold(CycMor::identity(n), |acc, g| g.to_mor().after(&acc))
    }
}

/// Decomposes a lift with `G(0) = 0`, pushing generators in application order.
fn decompose_based(g: Vec<i64>, n: usize, word: &mut Vec<Generator>) {
    let np = g.len();
    debug_assert_eq!(g[0], 0);
    if let Some(i) = (0..np - 1).find(|&i| g[i] == g[i + 1]) {
        word.push(Generator::Face { n: np - 1, i });
        let mut rest = g;
        rest.remove(i + 1);
        return decompose_based(rest, n, word);
    }
    if np > 1 && g[np - 1] == n as i64 {
        word.push(Generator::Face { n: np - 1, i: np - 1 });
        let mut rest = g;
        rest.pop();
        return decompose_based(rest, n, word);
    }
    // injective from here on
    if np == n {
        debug_assert!(g.iter().enumerate().all(|(i, &x)| x == i as i64));
        return;
    }
    let m = (1..n as i64)
        .find(|y| !g.contains(y))
        .expect("an injective non-surjective map misses a nonzero point");
    let rest: Vec<i64> = g.iter().map(|&y| if y > m { y - 1 } else { y }).collect();
    decompose_based(rest, n - 1, word);
    word.push(Generator::Degeneracy {
        n: n - 1,
        i: m as usize - 1,
    });
}

/// All morphisms `[source] -> [target]`, without duplicates.
pub fn hom_set(source: usize, target: usize) -> Vec<CycMor> {
    assert!(source >= 1 && target >= 1);
    let n = target as i64;
    let mut out = Vec::new();
    let mut lift = vec![0i64; source];
    for g0 in 0..n {
        lift[0] = g0;
        fill(&mut lift, 1, g0, g0 + n, source, target, &mut out);
    }
    out
}

fn fill(lift: &mut Vec<i64>, pos: usize, lo: i64, hi: i64, s: usize, t: usize, out: &mut Vec<CycMor>) {
    if pos == s {
        out.push(CycMor {
            source: s,
            target: t,
            lift: lift.clone(),
        });
        return;
    }
    for v in lo..=hi {
        lift[pos] = v;
        fill(lift, pos + 1, v, hi, s, t, out);
    }
}

/// An object `⟨[n], v⟩` of the category of marked circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedObj {
    pub base: usize,
    pub point: usize,
}

/// Fiber data of `f` over `v`: the preimage points as marked objects of the
/// source, in their natural linear order.
pub fn marked_lift(f: &CycMor, v: usize) -> Vec<MarkedObj> {
    f.fiber(v)
        .into_iter()
        .map(|point| MarkedObj {
            base: f.source(),
            point,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn hom_set_sizes() {
        for s in 1..=4u64 {
            for t in 1..=4u64 {
                let homs = hom_set(s as usize, t as usize);
                assert_eq!(homs.len() as u64, s * binom(s + t - 1, s), "[{s}]->[{t}]");
                let mut dedup = homs.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), homs.len());
            }
        }
    }

    #[test]
    fn rotation_has_order_n() {
        for n in 1..=5 {
            let t = CycMor::rotation(n);
            let mut acc = CycMor::identity(n);
            for k in 1..=n {
                acc = t.after(&acc);
                assert_eq!(acc.is_identity(), k == n);
            }
        }
    }

    #[test]
    fn wrap_face_multiplies_last_into_first() {
        let f = CycMor::face(2, 2);
        assert_eq!(f.fiber(0), vec![2, 0]);
        assert_eq!(f.fiber(1), vec![1]);
        let f = CycMor::face(2, 0);
        assert_eq!(f.fiber(0), vec![0, 1]);
    }

    #[test]
    fn extra_degeneracy_inserts_in_front() {
        let s = CycMor::extra_degeneracy(2);
        assert_eq!(s.fiber(0), Vec::<usize>::new());
        assert_eq!(s.fiber(1), vec![0]);
        assert_eq!(s.fiber(2), vec![1]);
    }

    #[test]
    fn decomposition_recovers_every_morphism() {
        for s in 1..=4 {
            for t in 1..=4 {
                for f in hom_set(s, t) {
                    let w = f.decompose();
                    assert_eq!(CycMor::recompose(&w, s), f, "{w:?}");
                }
            }
        }
    }

    #[test]
    fn fibers_partition_the_source() {
        for s in 1..=4 {
            for t in 1..=4 {
                for f in hom_set(s, t) {
                    let mut all: Vec<usize> = f.fibers().concat();
                    all.sort();
                    assert_eq!(all, (0..s).collect::<Vec<_>>());
                    for (v, fib) in f.fibers().iter().enumerate() {
                        assert!(fib.iter().all(|&x| f.apply(x) == v));
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_lifts_rejected() {
        assert!(CycMor::new(2, 2, vec![0, 3]).is_err());
        assert!(CycMor::new(2, 2, vec![1, 0]).is_err());
        assert!(CycMor::new(2, 2, vec![2, 2]).is_err());
        assert!(CycMor::new(0, 2, vec![]).is_err());
        assert!(CycMor::new(2, 2, vec![1, 3]).is_ok());
    }
}
