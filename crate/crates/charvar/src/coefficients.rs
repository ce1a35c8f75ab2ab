//! The rational coefficients `C^t_τ` attached to a pure type `τ` of size `n`
//! and a divisor `t | n`.
//!
//! The base quantity is, for a pure type `τ̂` with orbit size `d̂` and
//! `m = Σ m̂_λ` slots,
//!
//! ```text
//! C⁰(τ̂) = (-1)^(m-1) · (μ(d̂)/d̂) · (m-1)! / Π_λ m̂_λ!
//! ```
//!
//! and the full coefficient unfolds over quotient types:
//!
//! ```text
//! C^t_τ = Σ (μ(k)/k) · μ(t_d) · C⁰(τ / (t_d, t_m))
//! ```
//!
//! the sum running over triples `(t_d, t_m, k)` with `t_d·t_m = t·k`,
//! `k | n/t`, the quotient type existing, and `gcd(d/t_d, t_d·t_m) = 1`.
//!
//! Two facts about the table are worth knowing (and are tested):
//! the genus-one assembly collapses to `Σ_{τ,t} t · C^t_τ = 1` for every `n`,
//! and all denominators divide `n²`.

use crate::exactmath::{divisors, factorial, gcd, mobius, Int, Rat};
use crate::types::{enumerate_pure_types, PureType};
use num_traits::Zero;

/// `C⁰(τ̂)`: the single-type coefficient of a pure type.
pub fn c0(tau: &PureType) -> Rat {
    let m = tau.m_total() as u64;
    let mut denom = Int::from(tau.d());
    for &mult in tau.mults().values() {
        denom *= factorial(mult as u64);
    }
    let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
    let numer = Int::from(sign * mobius(tau.d() as u64)) * factorial(m - 1);
    Rat::new(numer, denom)
}

/// `C^t_τ` for a pure type `τ` of size `n` and a divisor `t | n`.
pub fn c_t(tau: &PureType, t: u32) -> Rat {
    let n = tau.size();
    assert!(t >= 1 && n % t == 0, "t must divide the size of the type");
    let mut acc = Rat::zero();
    for k in divisors((n / t) as u64) {
        let tk = t as u64 * k;
        // Factor t·k as t_d·t_m in every way.
        for t_d in divisors(tk) {
            let t_m = tk / t_d;
            let Some(quot) = tau.quotient(t_d as u32, t_m as u32) else {
                continue;
            };
            if gcd(quot.d() as u64, tk) != 1 {
                continue;
            }
            let weight = Rat::new(Int::from(mobius(k) * mobius(t_d)), Int::from(k));
            acc += weight * c0(&quot);
        }
    }
    acc
}

/// The full coefficient table for rank `n`: every pure type of size `n` with
/// its row of `(t, C^t_τ)` over the divisors `t | n`, in the canonical type
/// order.
pub fn c_t_all(n: u32) -> Vec<(PureType, Vec<(u32, Rat)>)> {
    enumerate_pure_types(n)
        .into_iter()
        .map(|tau| {
            let row = divisors(n as u64)
                .into_iter()
                .map(|t| (t as u32, c_t(&tau, t as u32)))
                .collect();
            (tau, row)
        })
        .collect()
}
