//! Integer partitions and partition pairs with the index operations used by
//! the summation identities: squaring, half extraction, rectangle shifts,
//! complements, stretching, conjugation, and sub-pair enumeration.
//!
//! A partition pair indexes every sum in the engine; its joint part `i` is an
//! integer pair `(p_part[i], q_part[i])` and the exponent map sends part `i`
//! to `p^{p_part[i]} q^{q_part[i]}`.

use std::fmt;

/// A weakly decreasing finite list of nonnegative integers; trailing zeros
/// are normalized away. Parts are machine integers: every instance handled
/// here has parts well below `2^31`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition, normalizing trailing zeros.
    ///
    /// # Panics
    /// Panics if the list is not weakly decreasing.
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        let mut parts = parts.into();
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must be weakly decreasing");
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// 1-based part access; zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            panic!("parts are 1-indexed");
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Containment: `self_i <= other_i` for all `i`.
    pub fn contained_in(&self, other: &Partition) -> bool {
        (1..=self.len()).all(|i| self.part(i) <= other.part(i))
    }

    /// Transpose of the diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(1) as usize;
        let parts = (1..=cols)
            .map(|j| self.parts.iter().filter(|&&p| p as usize >= j).count() as u32)
            .collect::<Vec<_>>();
        Partition::new(parts)
    }

    /// All partitions `mu` with `mu_i <= self_i`, enumerated exactly once.
    pub fn sub_partitions(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = Vec::new();
        fn rec(bound: &Partition, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition::new(cur.clone()));
            let i = cur.len() + 1;
            if i > bound.len() {
                return;
            }
            let cap = bound.part(i).min(cur.last().copied().unwrap_or(u32::MAX));
            for v in (1..=cap).rev() {
                cur.push(v);
                rec(bound, cur, out);
                cur.pop();
            }
        }
        rec(self, &mut cur, &mut out);
        out
    }
}

/// A pair of partitions indexed jointly; joint part `i` is
/// `(p_part[i], q_part[i])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PartitionPair {
    pub p_part: Partition,
    pub q_part: Partition,
}

/// A joint rectangle part `(l, m)`: `l` is the `p`-exponent, `m` the
/// `q`-exponent of a single box row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub l: u32,
    pub m: u32,
}

impl PartitionPair {
    pub fn new(p_part: Partition, q_part: Partition) -> Self {
        PartitionPair { p_part, q_part }
    }

    pub fn empty() -> Self {
        PartitionPair::default()
    }

    pub fn from_parts(p: impl Into<Vec<u32>>, q: impl Into<Vec<u32>>) -> Self {
        PartitionPair::new(Partition::new(p), Partition::new(q))
    }

    /// Joint length: `max(len(p_part), len(q_part))`.
    pub fn len(&self) -> usize {
        self.p_part.len().max(self.q_part.len())
    }

    pub fn is_empty(&self) -> bool {
        self.p_part.is_empty() && self.q_part.is_empty()
    }

    /// Total weight `|p_part| + |q_part|` (the size used by desk-scale caps).
    pub fn weight(&self) -> u32 {
        self.p_part.weight() + self.q_part.weight()
    }

    /// 1-based joint part.
    pub fn part(&self, i: usize) -> (u32, u32) {
        (self.p_part.part(i), self.q_part.part(i))
    }

    /// Componentwise containment in both coordinates.
    pub fn contained_in(&self, other: &PartitionPair) -> bool {
        self.p_part.contained_in(&other.p_part) && self.q_part.contained_in(&other.q_part)
    }

    /// The squared pair: part `i` of the result is part `ceil(i/2)` of the
    /// input, so every part acquires even multiplicity.
    pub fn square(&self) -> PartitionPair {
        let double = |p: &Partition| {
            let mut v = Vec::with_capacity(2 * p.len());
            for &x in p.parts() {
                v.push(x);
                v.push(x);
            }
            Partition::new(v)
        };
        PartitionPair::new(double(&self.p_part), double(&self.q_part))
    }

    /// Odd-indexed half: part `i` of the result is part `2i - 1` of the input.
    pub fn plus_half(&self) -> PartitionPair {
        let sel = |p: &Partition| {
            Partition::new((1..).map(|i| p.part(2 * i - 1)).take_while(|&x| x > 0).collect::<Vec<_>>())
        };
        PartitionPair::new(sel(&self.p_part), sel(&self.q_part))
    }

    /// Even-indexed half: part `i` of the result is part `2i` of the input.
    ///
    /// The source display indexes this family as part `2i - 2`, which has no
    /// finite value at `i = 1`; the convention used here is the one under
    /// which exactly one term survives in the two-term halving identity (see
    /// the `litt_t` registry case, which verifies uniqueness by brute force).
    pub fn minus_half(&self) -> PartitionPair {
        let sel = |p: &Partition| {
            Partition::new((1..).map(|i| p.part(2 * i)).take_while(|&x| x > 0).collect::<Vec<_>>())
        };
        PartitionPair::new(sel(&self.p_part), sel(&self.q_part))
    }

    /// Multiplies `p`-parts by `cp` and `q`-parts by `cq` (`cp, cq >= 1`).
    pub fn stretch(&self, cp: u32, cq: u32) -> PartitionPair {
        assert!(cp >= 1 && cq >= 1, "stretch factors must be positive");
        let mul = |p: &Partition, c: u32| Partition::new(p.parts().iter().map(|&x| x * c).collect::<Vec<_>>());
        PartitionPair::new(mul(&self.p_part, cp), mul(&self.q_part, cq))
    }

    /// All pairs `mu` contained in `self`, enumerated exactly once
    /// (the product of the coordinate-wise sub-partition sets).
    pub fn sub_pairs(&self) -> Vec<PartitionPair> {
        let ps = self.p_part.sub_partitions();
        let qs = self.q_part.sub_partitions();
        let mut out = Vec::with_capacity(ps.len() * qs.len());
        for p in &ps {
            for q in &qs {
                out.push(PartitionPair::new(p.clone(), q.clone()));
            }
        }
        out
    }

    /// Canonical text form, e.g. `p:3,1|q:2` (empty coordinate lists print
    /// as nothing after the colon).
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the canonical text form produced by [`Self::to_text`].
    pub fn parse_text(s: &str) -> Result<PartitionPair, String> {
        let (ps, qs) = s
            .split_once('|')
            .ok_or_else(|| format!("missing '|' separator in partition pair {s:?}"))?;
        let parse_side = |side: &str, tag: &str| -> Result<Partition, String> {
            let body = side
                .strip_prefix(tag)
                .ok_or_else(|| format!("expected {tag:?} prefix in {side:?}"))?;
            let mut parts = Vec::new();
            for tok in body.split(',').filter(|t| !t.is_empty()) {
                parts.push(
                    tok.parse::<u32>()
                        .map_err(|e| format!("bad part {tok:?} in {side:?}: {e}"))?,
                );
            }
            if !parts.windows(2).all(|w| w[0] >= w[1]) {
                return Err(format!("parts not weakly decreasing in {side:?}"));
            }
            Ok(Partition::new(parts))
        };
        Ok(PartitionPair::new(parse_side(ps, "p:")?, parse_side(qs, "q:")?))
    }
}

impl fmt::Display for PartitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |p: &Partition| {
            p.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "p:{}|q:{}", join(&self.p_part), join(&self.q_part))
    }
}

/// `n` copies of the rectangle part `(l, m)`.
pub fn rect(b: Rect, n: usize) -> PartitionPair {
    PartitionPair::from_parts(vec![b.l; n], vec![b.m; n])
}

/// Adds `(l, m)` to the first `n` joint parts. Requires `len(lam) <= n`.
pub fn add_rect(b: Rect, n: usize, lam: &PartitionPair) -> PartitionPair {
    assert!(lam.len() <= n, "add_rect requires len(lam) <= n");
    let bump = |p: &Partition, c: u32| {
        Partition::new((1..=n).map(|i| p.part(i) + c).collect::<Vec<_>>())
    };
    PartitionPair::new(bump(&lam.p_part, b.l), bump(&lam.q_part, b.m))
}

/// Prepends `n` copies of `(l, m)`. Requires `lam_1 <= (l, m)` componentwise.
pub fn concat_rect(b: Rect, n: usize, lam: &PartitionPair) -> PartitionPair {
    let (p1, q1) = lam.part(1);
    assert!(p1 <= b.l && q1 <= b.m, "concat_rect requires lam_1 <= (l,m)");
    let pre = |p: &Partition, c: u32| {
        let mut v = vec![c; n];
        v.extend_from_slice(p.parts());
        Partition::new(v)
    };
    PartitionPair::new(pre(&lam.p_part, b.l), pre(&lam.q_part, b.m))
}

/// Complement inside the rectangle `(l, m)^n`: part `i` of the result is
/// `(l, m) - lam_{n+1-i}`. Requires `lam` contained in the rectangle.
pub fn complement(b: Rect, n: usize, lam: &PartitionPair) -> PartitionPair {
    assert!(lam.contained_in(&rect(b, n)), "complement requires lam inside the rectangle");
    let comp = |p: &Partition, c: u32| {
        Partition::new((1..=n).map(|i| c - p.part(n + 1 - i)).collect::<Vec<_>>())
    };
    PartitionPair::new(comp(&lam.p_part, b.l), comp(&lam.q_part, b.m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: &[u32], q: &[u32]) -> PartitionPair {
        PartitionPair::from_parts(p.to_vec(), q.to_vec())
    }

    #[test]
    fn square_examples() {
        assert_eq!(pp(&[3, 1], &[2, 0]).square(), pp(&[3, 3, 1, 1], &[2, 2]));
        assert_eq!(PartitionPair::empty().square(), PartitionPair::empty());
        assert_eq!(pp(&[1], &[1]).square(), pp(&[1, 1], &[1, 1]));
    }

    #[test]
    fn plus_half_examples() {
        assert_eq!(pp(&[3, 2, 2, 1], &[]).plus_half(), pp(&[3, 2], &[]));
        // Odd entries of a squared pair recover the pair.
        for mu in [pp(&[2, 1], &[3]), pp(&[], &[1, 1]), PartitionPair::empty()] {
            assert_eq!(mu.square().plus_half(), mu);
        }
    }

    #[test]
    fn minus_half_even_entries() {
        assert_eq!(pp(&[3, 2, 2, 1], &[]).minus_half(), pp(&[2, 1], &[]));
        assert_eq!(pp(&[5], &[]).minus_half(), PartitionPair::empty());
    }

    #[test]
    fn rect_shift_examples() {
        assert_eq!(rect(Rect { l: 1, m: 2 }, 3), pp(&[1, 1, 1], &[2, 2, 2]));
        assert_eq!(
            complement(Rect { l: 2, m: 2 }, 2, &pp(&[1, 0], &[2, 1])),
            pp(&[2, 1], &[1, 0])
        );
        assert_eq!(
            concat_rect(Rect { l: 3, m: 3 }, 1, &pp(&[2, 1], &[3, 0])),
            pp(&[3, 2, 1], &[3, 3])
        );
        assert_eq!(
            add_rect(Rect { l: 1, m: 1 }, 2, &pp(&[2], &[1])),
            pp(&[3, 1], &[2, 1])
        );
    }

    #[test]
    fn complement_is_an_involution() {
        let b = Rect { l: 3, m: 2 };
        for lam in rect(b, 3).sub_pairs() {
            assert_eq!(complement(b, 3, &complement(b, 3, &lam)), lam);
        }
    }

    #[test]
    fn stretch_examples() {
        assert_eq!(pp(&[1], &[1]).stretch(1, 2), pp(&[1], &[2]));
        let mu = pp(&[2, 1], &[1]);
        assert_eq!(mu.stretch(1, 1), mu);
        assert_eq!(pp(&[2, 1], &[]).stretch(2, 1), pp(&[4, 2], &[]));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(Partition::new(vec![3, 1]).conjugate(), Partition::new(vec![2, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(Partition::new(vec![2, 2]).conjugate(), Partition::new(vec![2, 2]));
        // Involution on a sweep.
        for lam in Partition::new(vec![4, 3, 1]).sub_partitions() {
            assert_eq!(lam.conjugate().conjugate(), lam);
        }
    }

    #[test]
    fn sub_pair_counts() {
        assert_eq!(rect(Rect { l: 1, m: 1 }, 1).sub_pairs().len(), 4);
        assert_eq!(rect(Rect { l: 1, m: 0 }, 2).sub_pairs().len(), 3);
        assert_eq!(pp(&[2], &[1]).sub_pairs().len(), 6);
        // Count for a rectangle factors into box-partition counts: the number
        // of partitions in a 2x2 box is 6.
        assert_eq!(rect(Rect { l: 2, m: 2 }, 2).sub_pairs().len(), 36);
    }

    #[test]
    fn sub_pairs_match_containment() {
        let bound = pp(&[2, 1], &[1, 1]);
        let subs = bound.sub_pairs();
        for mu in &subs {
            assert!(mu.contained_in(&bound));
        }
        // Uniqueness.
        let mut sorted = subs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), subs.len());
    }

    #[test]
    fn text_round_trip() {
        for lam in [pp(&[3, 1], &[2]), PartitionPair::empty(), pp(&[], &[5, 5])] {
            let s = lam.to_text();
            assert_eq!(PartitionPair::parse_text(&s).unwrap(), lam);
        }
        assert_eq!(pp(&[3, 1], &[2]).to_text(), "p:3,1|q:2");
        assert!(PartitionPair::parse_text("p:1,2|q:").is_err());
        assert!(PartitionPair::parse_text("nonsense").is_err());
    }
}
