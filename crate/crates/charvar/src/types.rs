//! Pure types of irreducible `GL_n(F_q)` characters and their degree
//! quotients.
//!
//! An irreducible character of `GL_n(F_q)` is parametrised by a finite
//! multiset of pairs (Frobenius orbit of size `d`, partition `λ`), with
//! `Σ d·|λ| = n`.  Its *type* forgets which orbits were used and keeps only
//! the multiplicities `m_{d,λ}`.  A type is *pure* when a single orbit size
//! `d` occurs; a pure type is a pair `τ = (d, (m_λ)_λ)` with
//! `d · Σ_λ m_λ |λ| = n`.  Only pure types carry nonzero coefficients in the
//! counting formula, so they are the only ones modelled as a first-class value
//! here (mixed types appear briefly in the brute-force character sums of
//! [`crate::gamma`], where they are shown to contribute 0).
//!
//! The quantity attached to a pure type is the *degree quotient*
//!
//! ```text
//! Q_τ(q) = |GL_n(F_q)| / χ_τ(1) = q^(C(n,2) - n(Λ')) · Π_λ hook_poly(λ, d)^{m_λ}
//! ```
//!
//! with `n(Λ') = Σ_λ d · m_λ · n(λ')`.  It is always an honest polynomial in
//! `q`, which [`PureType::degree_quotient`] asserts.

use crate::exactmath::{divisors, IntLaurentPoly, Int};
use crate::partitions::{partitions_of, Partition};
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// A pure type `(d, (m_λ))`.  The multiplicity map is non-empty and every
/// multiplicity positive; the size `n = d · Σ m_λ |λ|` is derived.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureType {
    d: u32,
    mults: BTreeMap<Partition, u32>,
}

impl PureType {
    /// Build from an orbit size and multiplicity map.  Multiplicities must be
    /// positive, partitions non-empty, and the map non-empty.
    pub fn new(d: u32, mults: BTreeMap<Partition, u32>) -> Self {
        assert!(d >= 1, "orbit size must be positive");
        assert!(!mults.is_empty(), "a type has at least one partition");
        assert!(
            mults.iter().all(|(lam, &m)| m > 0 && !lam.is_empty()),
            "multiplicities must be positive on non-empty partitions"
        );
        Self { d, mults }
    }

    /// Shorthand for a single-partition type `(d, {λ: m})`.
    pub fn single(d: u32, lam: Partition, m: u32) -> Self {
        Self::new(d, BTreeMap::from([(lam, m)]))
    }

    /// The common Frobenius-orbit size `d`.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// The multiplicity map `λ -> m_λ`.
    pub fn mults(&self) -> &BTreeMap<Partition, u32> {
        &self.mults
    }

    /// `n = d · Σ_λ m_λ |λ|`, the rank this type belongs to.
    pub fn size(&self) -> u32 {
        self.d * self.mults.iter().map(|(lam, &m)| m * lam.size()).sum::<u32>()
    }

    /// `m = Σ_λ m_λ`, the number of orbit slots.
    pub fn m_total(&self) -> u32 {
        self.mults.values().sum()
    }

    /// `n(Λ') = Σ_λ d · m_λ · n(λ')`, the exponent correction in the degree
    /// quotient.
    pub fn n_stat_conjugate(&self) -> u64 {
        self.mults
            .iter()
            .map(|(lam, &m)| self.d as u64 * m as u64 * lam.conjugate().n_stat())
            .sum()
    }

    /// The hook product `Π_λ hook_poly(λ, d)^{m_λ}`.
    pub fn hook_product(&self) -> IntLaurentPoly {
        let mut acc = IntLaurentPoly::one();
        for (lam, &m) in &self.mults {
            acc = &acc * &lam.hook_poly(self.d).pow(m);
        }
        acc
    }

    /// The degree quotient `|GL_n(F_q)| / χ_τ(1)` as an exact polynomial,
    /// `q^(C(n,2) - n(Λ')) · Π_λ hook_poly(λ, d)^{m_λ}`.
    pub fn degree_quotient(&self) -> IntLaurentPoly {
        let n = self.size() as u64;
        let exp = (n * (n - 1) / 2) as i64 - self.n_stat_conjugate() as i64;
        let out = self.hook_product().scale(&Int::one(), exp);
        assert!(
            out.valuation().map_or(true, |v| v >= 0),
            "degree quotient of {self} is not a polynomial"
        );
        out
    }

    /// The character degree `χ_τ(1)`, computed by the *other* route — exact
    /// division of the full group order by the degree quotient — so tests can
    /// play the two against each other.
    pub fn chi_degree(&self) -> IntLaurentPoly {
        gl_order(self.size())
            .div_exact(&self.degree_quotient())
            .expect("group order must be divisible by the degree quotient")
    }

    /// The quotient type `τ / (t_d, t_m)`: divide the orbit size by `t_d` and
    /// every multiplicity by `t_m`.  Exists iff `t_d | d` and `t_m | m_λ` for
    /// all `λ`; the result has size `n / (t_d t_m)`.
    pub fn quotient(&self, t_d: u32, t_m: u32) -> Option<PureType> {
        assert!(t_d >= 1 && t_m >= 1);
        if self.d % t_d != 0 || self.mults.values().any(|&m| m % t_m != 0) {
            return None;
        }
        Some(PureType {
            d: self.d / t_d,
            mults: self
                .mults
                .iter()
                .map(|(lam, &m)| (lam.clone(), m / t_m))
                .collect(),
        })
    }

    /// The conjugate type (every partition replaced by its conjugate).
    pub fn conjugate(&self) -> PureType {
        PureType {
            d: self.d,
            mults: self
                .mults
                .iter()
                .map(|(lam, &m)| (lam.conjugate(), m))
                .collect(),
        }
    }
}

impl fmt::Display for PureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{d={}", self.d)?;
        for (lam, m) in &self.mults {
            write!(f, ", {lam}^{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for PureType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // {"d": d, "mults": [[[parts...], m], ...]} with the map in its
        // canonical order.
        let mut s = serializer.serialize_struct("PureType", 2)?;
        s.serialize_field("d", &self.d)?;
        let mults: Vec<(&Partition, u32)> = self.mults.iter().map(|(l, &m)| (l, m)).collect();
        s.serialize_field("mults", &mults)?;
        s.end()
    }
}

/// All pure types of size `n`: for each `d | n`, every multiset of non-empty
/// partitions with total size `n / d`, encoded as multiplicities.  Sorted by
/// `(d, mults)` so the output order is deterministic.
pub fn enumerate_pure_types(n: u32) -> Vec<PureType> {
    assert!(n >= 1);
    let mut out = Vec::new();
    for d in divisors(n as u64) {
        let rest = n / d as u32;
        // Choose a multiset of partitions with sizes summing to `rest`.
        // Recurse over the canonical partition order to avoid duplicates.
        let pool: Vec<Partition> = (1..=rest).flat_map(partitions_of).collect();
        fn rec(
            pool: &[Partition],
            from: usize,
            remaining: u32,
            current: &mut BTreeMap<Partition, u32>,
            d: u32,
            out: &mut Vec<PureType>,
        ) {
            if remaining == 0 {
                out.push(PureType::new(d, current.clone()));
                return;
            }
            for i in from..pool.len() {
                let lam = &pool[i];
                if lam.size() <= remaining {
                    *current.entry(lam.clone()).or_insert(0) += 1;
                    rec(pool, i, remaining - lam.size(), current, d, out);
                    let m = current.get_mut(lam).unwrap();
                    *m -= 1;
                    if *m == 0 {
                        current.remove(lam);
                    }
                }
            }
        }
        rec(&pool, 0, rest, &mut BTreeMap::new(), d as u32, &mut out);
    }
    out.sort_by(|a, b| (a.d, &a.mults).cmp(&(b.d, &b.mults)));
    out.dedup();
    out
}

/// `|GL_n(F_q)| = q^(C(n,2)) · Π_{i=1}^n (q^i - 1)` as an exact polynomial.
pub fn gl_order(n: u32) -> IntLaurentPoly {
    let mut acc = IntLaurentPoly::monomial((n as i64) * (n as i64 - 1) / 2, Int::one());
    for i in 1..=n {
        acc = &acc * &IntLaurentPoly::q_pow_minus_one(i as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::int;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn sizes_and_counts() {
        // Size 2: three types at d = 1 and one at d = 2.
        let t2 = enumerate_pure_types(2);
        assert_eq!(t2.len(), 4);
        assert!(t2.iter().all(|t| t.size() == 2));
        // Size 1 has the single type {d=1, (1)^1}.
        assert_eq!(enumerate_pure_types(1), vec![PureType::single(1, p(&[1]), 1)]);
        // No duplicates at larger sizes; every size correct.
        for n in 1..=8 {
            let ts = enumerate_pure_types(n);
            let mut dedup = ts.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), ts.len());
            assert!(ts.iter().all(|t| t.size() == n));
        }
    }

    #[test]
    fn pure_type_count_matches_independent_recount() {
        // Independent count: Σ_{d | n} #(multisets of partitions totalling
        // n/d), the latter by the Euler-product recurrence over the pool of
        // partitions of size ≤ k.
        for n in 1..=9u32 {
            let mut total = 0usize;
            for d in divisors(n as u64) {
                let k = n / d as u32;
                // multisets of partitions with total size k: coefficients of
                // Π_λ (1 - x^{|λ|})^{-1}.
                let mut coeffs = vec![0usize; k as usize + 1];
                coeffs[0] = 1;
                for lam in (1..=k).flat_map(partitions_of) {
                    let s = lam.size() as usize;
                    for i in s..=k as usize {
                        coeffs[i] += coeffs[i - s];
                    }
                }
                total += coeffs[k as usize];
            }
            assert_eq!(enumerate_pure_types(n).len(), total, "n = {n}");
        }
    }

    #[test]
    fn degree_quotients_size_two() {
        let q = IntLaurentPoly::var;
        let qm1 = IntLaurentPoly::q_pow_minus_one(1);
        let q2m1 = IntLaurentPoly::q_pow_minus_one(2);
        // {d=1, (1,1)^1}: the trivial-character type, quotient |GL_2|.
        assert_eq!(
            PureType::single(1, p(&[1, 1]), 1).degree_quotient(),
            &(&q() * &q2m1) * &qm1
        );
        // {d=1, (2)^1}: the Steinberg type, χ(1) = q.
        assert_eq!(
            PureType::single(1, p(&[2]), 1).degree_quotient(),
            &q2m1 * &qm1
        );
        // {d=1, (1)^2}: χ(1) = q + 1.
        assert_eq!(
            PureType::single(1, p(&[1]), 2).degree_quotient(),
            &(&q() * &qm1) * &qm1
        );
        // {d=2, (1)^1}: χ(1) = q - 1.
        assert_eq!(
            PureType::single(2, p(&[1]), 1).degree_quotient(),
            &q() * &q2m1
        );
    }

    #[test]
    fn chi_degree_cross_check() {
        // χ_τ(1) by exact division agrees with hand values for n = 2 ...
        let q = IntLaurentPoly::var();
        let one = IntLaurentPoly::one();
        let qp1 = &q + &one;
        let qm1 = &q - &one;
        assert_eq!(PureType::single(1, p(&[1, 1]), 1).chi_degree(), one);
        assert_eq!(PureType::single(1, p(&[2]), 1).chi_degree(), q);
        assert_eq!(PureType::single(1, p(&[1]), 2).chi_degree(), qp1);
        assert_eq!(PureType::single(2, p(&[1]), 1).chi_degree(), qm1);
        // ... and the division is exact for everything up to size 6 (this is
        // the real content: the hook product divides the group order).
        for n in 1..=6 {
            for t in enumerate_pure_types(n) {
                let chi = t.chi_degree();
                assert_eq!(&chi * &t.degree_quotient(), gl_order(n));
            }
        }
    }

    #[test]
    fn chi_degree_positive_at_prime_powers() {
        for n in 1..=5 {
            for t in enumerate_pure_types(n) {
                for q in [2i64, 3, 5, 9] {
                    assert!(t.chi_degree().eval_int(&int(q)) > int(0));
                }
            }
        }
    }

    #[test]
    fn quotient_types() {
        let tau = PureType::single(2, p(&[1]), 2); // size 4
        assert_eq!(tau.quotient(2, 1), Some(PureType::single(1, p(&[1]), 2)));
        assert_eq!(tau.quotient(1, 2), Some(PureType::single(2, p(&[1]), 1)));
        assert_eq!(tau.quotient(2, 2), Some(PureType::single(1, p(&[1]), 1)));
        assert_eq!(tau.quotient(4, 1), None);
        // Mixed multiplicities: t_m must divide them all.
        let mixed = PureType::new(1, BTreeMap::from([(p(&[2]), 2), (p(&[1]), 1)]));
        assert_eq!(mixed.quotient(1, 2), None);
        // Size transforms as n / (t_d t_m).
        assert_eq!(tau.quotient(2, 2).unwrap().size(), 1);
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(1), IntLaurentPoly::q_pow_minus_one(1));
        // |GL_2(q)| = q(q-1)(q^2-1).
        assert_eq!(gl_order(2).eval_int(&int(2)), int(6));
        assert_eq!(gl_order(2).eval_int(&int(3)), int(48));
        assert_eq!(gl_order(3).eval_int(&int(2)), int(168));
    }

    #[test]
    fn json_shape() {
        let tau = PureType::new(1, BTreeMap::from([(p(&[2]), 1), (p(&[1]), 2)]));
        let v = serde_json::to_value(&tau).unwrap();
        assert_eq!(v["d"], 1);
        // Canonical partition order: larger size first.
        assert_eq!(v["mults"][0][0], serde_json::json!([2]));
        assert_eq!(v["mults"][0][1], 1);
        assert_eq!(v["mults"][1][0], serde_json::json!([1]));
        assert_eq!(v["mults"][1][1], 2);
    }
}
