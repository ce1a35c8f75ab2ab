//! Assembly of the counting polynomial `N^g_n(q)` and its sanity structure.
//!
//! The main formula sums over pure types `τ` of size `n` and divisors
//! `t | n`:
//!
//! ```text
//! N^g_n(q) = Σ_τ Σ_{t|n}  (Q_τ(q) / (q-1))^(2(g-1)) · t^(2g-1) · C^t_τ
//! ```
//!
//! where `Q_τ` is the degree quotient `|GL_n(F_q)|/χ_τ(1)`.  The division by
//! `(q-1)` is exact polynomial division (every hook factor contributes a
//! `q-1`), and the final rational-coefficient accumulation must collapse to
//! integers — both are asserted, so any bug in the coefficient layer
//! explodes loudly instead of rounding quietly.
//!
//! [`n_poly_alt`] computes the same polynomial along a differently-grouped
//! sum (over quotient-type pairs, with the divisor sum folded into the
//! torsion counts `O^(2g)(t)`), sharing almost no code path with
//! [`n_poly`]; agreement of the two is one of the cross-checks.
//!
//! For `n = 2` there is a closed quasi-polynomial in `q` valid for every odd
//! prime power (not just `q ≡ 1 mod 4`); [`n2_closed_form`] evaluates it, and
//! the polynomial branch is available symbolically for the structure tests.
//!
//! The assembled polynomial is monic of degree `2(g-1)(n²-1)`, palindromic,
//! and its value at `q = 1` (the E-polynomial's Euler characteristic) is `1`
//! for `g = 1` and `μ(n) · n^(4g-3)` for `g ≥ 2`.

use crate::coefficients::{c0, c_t};
use crate::exactmath::{divisors, gcd, int, mobius, torsion_count, Int, IntLaurentPoly, Rat};
use crate::types::enumerate_pure_types;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

/// A computed counting polynomial together with its derived structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPolyResult {
    /// Rank `n` of `SL_n`.
    pub n: u32,
    /// Genus `g ≥ 1`.
    pub g: u32,
    /// The polynomial `N^g_n(q)`.
    pub poly: IntLaurentPoly,
    /// Its value at `q = 1`.
    pub euler: Int,
    /// Its degree (`0` for the constant genus-1 answer).
    pub degree: i64,
    /// Whether the coefficients read the same from both ends.
    pub palindromic: bool,
    /// Whether the leading coefficient is 1.
    pub monic: bool,
}

impl EPolyResult {
    fn from_poly(n: u32, g: u32, poly: IntLaurentPoly) -> Self {
        let euler = poly.eval_int(&Int::one());
        let degree = poly.degree().unwrap_or(0);
        let palindromic = poly.is_palindromic();
        let monic = poly.is_monic_polynomial();
        Self { n, g, poly, euler, degree, palindromic, monic }
    }
}

impl Serialize for EPolyResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EPolyResult", 8)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("g", &self.g)?;
        s.serialize_field("variable", "q")?;
        s.serialize_field("coeffs", &self.poly.to_json_pairs())?;
        s.serialize_field("euler", &self.euler.to_string())?;
        s.serialize_field("degree", &self.degree)?;
        s.serialize_field("palindromic", &self.palindromic)?;
        s.serialize_field("monic", &self.monic)?;
        s.end()
    }
}

/// Sparse polynomial with rational coefficients — the accumulator both
/// assembly routes use before asserting integrality.
#[derive(Default)]
struct RatAccum {
    coeffs: BTreeMap<i64, Rat>,
}

impl RatAccum {
    /// `self += c · p` for an integer polynomial `p` and rational `c`.
    fn add_scaled(&mut self, p: &IntLaurentPoly, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (e, k) in p.pairs() {
            let entry = self.coeffs.entry(e).or_insert_with(Rat::zero);
            *entry += c * Rat::from_integer(k.clone());
            if entry.is_zero() {
                self.coeffs.remove(&e);
            }
        }
    }

    /// Collapse to an integer polynomial, panicking if any denominator
    /// survived the cancellation.
    fn into_int_poly(self) -> IntLaurentPoly {
        IntLaurentPoly::from_pairs(self.coeffs.into_iter().map(|(e, c)| {
            assert!(c.is_integer(), "non-integer coefficient {c} at q^{e}");
            (e, c.to_integer())
        }))
    }
}

/// The counting polynomial `N^g_n(q)` by the main type/divisor sum.
pub fn n_poly(n: u32, g: u32) -> EPolyResult {
    assert!(n >= 1 && g >= 1);
    let qm1 = IntLaurentPoly::q_pow_minus_one(1);
    let mut acc = RatAccum::default();
    for tau in enumerate_pure_types(n) {
        // Q_τ / (q-1) is a polynomial: exact division, asserted.
        let reduced = tau
            .degree_quotient()
            .div_exact(&qm1)
            .expect("degree quotient must be divisible by q - 1");
        let power = reduced.pow(2 * (g - 1));
        for t in divisors(n as u64) {
            let c = c_t(&tau, t as u32);
            if c.is_zero() {
                continue;
            }
            let weight = c * Rat::from_integer(Int::from(t).pow(2 * g - 1));
            acc.add_scaled(&power, &weight);
        }
    }
    EPolyResult::from_poly(n, g, acc.into_int_poly())
}

/// The same polynomial along the alternative grouping: sum over pure types
/// `τ` and quotient directions `(t_d, t_m)` with `gcd(d/t_d, t_d t_m) = 1`,
/// weighted by `μ(t_d) · O^(2g)(t_d t_m)/(t_d t_m) · C⁰(τ/(t_d,t_m))` and
/// `Q_τ^(2g-2)`, then divided once by `(q-1)^(2g-2)` at the end (exact,
/// asserted).
pub fn n_poly_alt(n: u32, g: u32) -> EPolyResult {
    assert!(n >= 1 && g >= 1);
    let mut acc = RatAccum::default();
    for tau in enumerate_pure_types(n) {
        let power = tau.degree_quotient().pow(2 * g - 2);
        for t_d in divisors(tau.d() as u64) {
            for t_m in 1..=tau.m_total() as u64 {
                let Some(quot) = tau.quotient(t_d as u32, t_m as u32) else {
                    continue;
                };
                if gcd(quot.d() as u64, t_d * t_m) != 1 {
                    continue;
                }
                let base = c0(&quot);
                if base.is_zero() {
                    continue;
                }
                let weight = Rat::from_integer(Int::from(mobius(t_d)) * torsion_count(t_d * t_m, 2 * g))
                    / Rat::from_integer(Int::from(t_d * t_m));
                acc.add_scaled(&power, &(weight * base));
            }
        }
    }
    let numerator = acc.into_int_poly();
    let poly = numerator
        .div_exact(&IntLaurentPoly::q_pow_minus_one(1).pow(2 * g - 2))
        .expect("alternative assembly must be divisible by (q-1)^(2g-2)");
    EPolyResult::from_poly(n, g, poly)
}

/// The symbolic `n = 2` closed form valid on the branch `q ≡ 1 (mod 4)`
/// (and equal to `n_poly(2, g)` as a polynomial):
///
/// ```text
/// (2^(2g-1) - 1)·(|H|/(q+1))^(2g-2) - 2^(2g-1)·(|H|/(q-1))^(2g-2)
///   + |H|^(2g-2) + (|H|/q)^(2g-2),      |H| = q(q²-1).
/// ```
pub fn n2_polynomial_branch(g: u32) -> IntLaurentPoly {
    assert!(g >= 1);
    let e = 2 * g - 2;
    let h = &IntLaurentPoly::monomial(1, Int::one()) * &IntLaurentPoly::q_pow_minus_one(2);
    let h_div_qp1 = &IntLaurentPoly::monomial(1, Int::one()) * &IntLaurentPoly::q_pow_minus_one(1);
    let h_div_qm1 = h
        .div_exact(&IntLaurentPoly::q_pow_minus_one(1))
        .unwrap();
    let h_div_q = IntLaurentPoly::q_pow_minus_one(2);
    let two_pow = Int::from(2).pow(2 * g - 1);
    let mut acc = h_div_qp1.pow(e).scale(&(&two_pow - Int::one()), 0);
    acc = &acc - &h_div_qm1.pow(e).scale(&two_pow, 0);
    acc = &acc + &h.pow(e);
    &acc + &h_div_q.pow(e)
}

/// The `n = 2` quasi-polynomial count at an odd prime power `q`, all four
/// congruence branches:
///
/// ```text
/// N^g_2(q) = a₊·(|H|/(q+1))^(2g-2) + a₋·(|H|/(q-1))^(2g-2)
///            + |H|^(2g-2) + (|H|/q)^(2g-2)
/// a₊ = (-1)^((q-1)/2)·2^(2g-1) - (1 + (-1)^((q-1)/2))/2
/// a₋ = (-1)^((q+1)/2)·2^(2g-1) - (1 + (-1)^((q+1)/2))/2
/// ```
///
/// For `q ≡ 1 (mod 4)` this agrees with the polynomial branch; for
/// `q ≡ 3 (mod 4)` it does not, which is exactly the quasi-polynomiality.
pub fn n2_closed_form(q: u64, g: u32) -> Int {
    assert!(q >= 3 && q % 2 == 1, "odd prime power required");
    assert!(g >= 1);
    let e = 2 * g - 2;
    let qq = int(q as i64);
    let h: Int = &qq * (&qq * &qq - Int::one());
    let sign_minus = if (q - 1) / 2 % 2 == 0 { 1 } else { -1 }; // (-1)^((q-1)/2)
    let sign_plus = -sign_minus; // (-1)^((q+1)/2)
    let two_pow = Int::from(2).pow(2 * g - 1);
    let a_plus = int(sign_minus) * &two_pow - int((1 + sign_minus) / 2);
    let a_minus = int(sign_plus) * &two_pow - int((1 + sign_plus) / 2);
    let h_qp1: Int = &h / (&qq + Int::one());
    let h_qm1: Int = &h / (&qq - Int::one());
    let h_q: Int = &h / &qq;
    a_plus * h_qp1.pow(e) + a_minus * h_qm1.pow(e) + h.pow(e) + h_q.pow(e)
}

/// Euler characteristic of the twisted character variety: the value of
/// `N^g_n` at `q = 1`, which is `1` for `g = 1` and `μ(n)·n^(4g-3)` for
/// `g ≥ 2` — computed here from the assembled polynomial, so comparing
/// against the closed form is a real test.
pub fn euler_char(n: u32, g: u32) -> Int {
    n_poly(n, g).euler
}

/// The closed-form Euler characteristic, for cross-checking.
pub fn euler_char_closed_form(n: u32, g: u32) -> Int {
    if g == 1 {
        Int::one()
    } else {
        Int::from(mobius(n as u64)) * Int::from(n).pow(4 * g - 3)
    }
}

/// Report of the three structural invariants of a result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    /// Degree equals `2(g-1)(n²-1)`.
    pub degree_ok: bool,
    /// Leading coefficient 1 (and no negative exponents).
    pub monic: bool,
    /// Coefficients palindromic.
    pub palindromic: bool,
}

impl StructuralReport {
    /// All three invariants hold.
    pub fn all_ok(&self) -> bool {
        self.degree_ok && self.monic && self.palindromic
    }
}

/// Check degree, monicity, and palindromicity of a computed result.
pub fn structural_check(r: &EPolyResult) -> StructuralReport {
    let expected_degree = 2 * (r.g as i64 - 1) * ((r.n as i64) * (r.n as i64) - 1);
    StructuralReport {
        degree_ok: r.poly.degree().unwrap_or(0) == expected_degree,
        monic: r.monic,
        palindromic: r.palindromic,
    }
}
