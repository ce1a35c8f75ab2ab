//! Integer partitions and their hook combinatorics.
//!
//! A partition `λ = (λ_1 ≥ λ_2 ≥ ... ≥ λ_r > 0)` is drawn as a Young diagram
//! with `λ_i` boxes in row `i`.  The quantities computed here are the ones
//! that enter the character-degree formulas:
//!
//! * the conjugate `λ'` (transpose diagram),
//! * hook lengths `h(i,j) = λ_i + λ'_j - i - j + 1` (rows and columns 1-based),
//! * `n(λ) = Σ_i (i-1) λ_i`,
//! * `⟨λ,λ⟩ = Σ_j (λ'_j)^2`, related by `2 n(λ) = ⟨λ,λ⟩ - |λ|`,
//! * the hook product `Π_{box} (q^{d·h(box)} - 1)` as an exact polynomial.

use crate::exactmath::IntLaurentPoly;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// An integer partition: weakly decreasing positive parts.  The empty
/// partition is allowed and denotes the unique partition of 0.
///
/// Ordering sorts by size descending, then by the part lists
/// lexicographically; this gives every list of partitions in the crate (type
/// supports, JSON output) one deterministic order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Build from parts, which must be weakly decreasing and positive.
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be weakly decreasing: {parts:?}"
        );
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        Self { parts }
    }

    /// The empty partition of 0.
    pub fn empty() -> Self {
        Self { parts: vec![] }
    }

    /// The one-row partition `(n)`; empty when `n = 0`.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self { parts: vec![n] }
        }
    }

    /// The parts, weakly decreasing.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|λ|`, the number being partitioned.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of (positive) parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// `true` for the empty partition.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_i` with 1-based `i`, zero beyond the last part.
    pub fn part(&self, i: usize) -> u32 {
        assert!(i >= 1, "parts are 1-based");
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// The conjugate partition `λ'`, with `λ'_i = #{j : λ_j ≥ i}`.
    pub fn conjugate(&self) -> Self {
        let cols = self.part(1) as usize;
        let parts = (1..=cols)
            .map(|i| self.parts.iter().filter(|&&p| p as usize >= i).count() as u32)
            .collect();
        Self { parts }
    }

    /// Is `(i, j)` (1-based row, column) a box of the diagram?
    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && self.part(i) as usize >= j
    }

    /// Hook length of the box `(i, j)`: the box itself plus its arm to the
    /// right and leg below, `λ_i + λ'_j - i - j + 1`.  Panics off-diagram.
    pub fn hook_length(&self, i: usize, j: usize) -> u32 {
        assert!(self.contains(i, j), "box ({i},{j}) outside diagram of {self}");
        let conj = self.conjugate();
        self.part(i) + conj.part(j) - i as u32 - j as u32 + 1
    }

    /// All boxes `(i, j)` of the diagram, row-major, 1-based.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p as usize).map(move |j| (i + 1, j)))
    }

    /// `n(λ) = Σ_i (i-1) λ_i`.
    pub fn n_stat(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// `⟨λ,λ⟩ = Σ_j (λ'_j)^2`.
    pub fn inner_self(&self) -> u64 {
        self.conjugate()
            .parts
            .iter()
            .map(|&p| p as u64 * p as u64)
            .sum()
    }

    /// The hook product at step `d`: `Π_{box} (q^{d·h(box)} - 1)`.
    pub fn hook_poly(&self, d: u32) -> IntLaurentPoly {
        assert!(d >= 1, "hook_poly needs d >= 1");
        let conj = self.conjugate();
        let mut acc = IntLaurentPoly::one();
        for (i, j) in self.boxes() {
            let h = self.part(i) + conj.part(j) - i as u32 - j as u32 + 1;
            acc = &acc * &IntLaurentPoly::q_pow_minus_one((d * h) as i64);
        }
        acc
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .size()
            .cmp(&self.size())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All partitions of `n` in the canonical order (parts lexicographically
/// increasing, so `(n)` is not first; the order is the derived `Ord`).
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(current.clone()));
            return;
        }
        let top = max_part.min(remaining);
        for p in (1..=top).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(n, n.max(1), &mut current, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::int;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn conjugate_example() {
        assert_eq!(p(&[7, 5, 5, 3, 1]).conjugate(), p(&[5, 4, 4, 3, 3, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[4]).conjugate(), p(&[1, 1, 1, 1]));
    }

    #[test]
    fn hook_length_example() {
        let lam = p(&[7, 5, 5, 3, 1]);
        assert_eq!(lam.hook_length(3, 2), 5);
        assert_eq!(lam.hook_length(1, 1), 11); // 7 + 5 - 1
        assert_eq!(lam.hook_length(5, 1), 1);
    }

    #[test]
    #[should_panic(expected = "outside diagram")]
    fn hook_length_off_diagram() {
        p(&[2, 1]).hook_length(2, 2);
    }

    #[test]
    fn statistics() {
        let lam = p(&[3, 2]);
        assert_eq!(lam.n_stat(), 2);
        assert_eq!(lam.inner_self(), 2 * 2 + 2 * 2 + 1); // conj (2,2,1)
        assert_eq!(Partition::empty().n_stat(), 0);
    }

    #[test]
    fn hook_poly_small() {
        // Hooks of (1,1) are {2, 1}.
        let expect = &IntLaurentPoly::q_pow_minus_one(2) * &IntLaurentPoly::q_pow_minus_one(1);
        assert_eq!(p(&[1, 1]).hook_poly(1), expect);
        // Step d scales every exponent.
        let expect2 = &IntLaurentPoly::q_pow_minus_one(4) * &IntLaurentPoly::q_pow_minus_one(2);
        assert_eq!(p(&[1, 1]).hook_poly(2), expect2);
        assert_eq!(Partition::empty().hook_poly(3), IntLaurentPoly::one());
    }

    #[test]
    fn hook_poly_single_box() {
        assert_eq!(p(&[1]).hook_poly(2), IntLaurentPoly::q_pow_minus_one(2));
    }

    #[test]
    fn partition_counts() {
        let counts = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &c) in counts.iter().enumerate() {
            assert_eq!(partitions_of(n as u32).len(), c, "p({n})");
        }
    }

    #[test]
    fn partitions_are_sorted_and_distinct() {
        let mut seen = partitions_of(6);
        let copy = seen.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen, copy);
    }

    #[test]
    fn hook_multiset_matches_frame_quotient() {
        // Π h(box) = |λ|! / f^λ is hard to get independently here, but the
        // degree of the hook product is Σ h(box) which must equal
        // n(λ) + n(λ') + |λ|.
        for lam in partitions_of(6) {
            let deg = lam.hook_poly(1).degree().unwrap() as u64;
            assert_eq!(
                deg,
                lam.n_stat() + lam.conjugate().n_stat() + lam.size() as u64
            );
        }
    }

    proptest! {
        #[test]
        fn conjugate_is_involutive(mut parts in proptest::collection::vec(1u32..9, 0..8)) {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts);
            prop_assert_eq!(lam.conjugate().conjugate(), lam);
        }

        #[test]
        fn two_nstat_identity(mut parts in proptest::collection::vec(1u32..9, 0..8)) {
            // 2 n(λ) = ⟨λ,λ⟩ - |λ|.
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts);
            prop_assert_eq!(2 * lam.n_stat(), lam.inner_self() - lam.size() as u64);
        }

        #[test]
        fn conjugate_swaps_hooks(mut parts in proptest::collection::vec(1u32..7, 1..6)) {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts);
            let conj = lam.conjugate();
            for (i, j) in lam.boxes() {
                prop_assert_eq!(lam.hook_length(i, j), conj.hook_length(j, i));
            }
        }

        #[test]
        fn eval_hook_poly_positive_above_one(mut parts in proptest::collection::vec(1u32..5, 1..4)) {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts);
            let v = lam.hook_poly(1).eval_int(&int(2));
            prop_assert!(v > int(0));
        }
    }
}
