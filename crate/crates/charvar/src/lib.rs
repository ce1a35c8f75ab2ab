//! Exact computation of E-polynomials of twisted `SL_n` character varieties.
//!
//! For a genus-`g` surface group and a primitive `n`-th root of unity twist,
//! the number of twisted `SL_n(F_q)`-representation classes is a polynomial
//! `N^g_n(q)` in `q` (under a congruence condition on `q`), and that polynomial
//! is the E-polynomial of the corresponding character variety.  This crate
//! computes `N^g_n(q)` exactly — arbitrary-precision integers and rationals
//! throughout, no floating point — via a character-sum formula over types of
//! irreducible `GL_n(F_q)`-characters, and then re-derives the same numbers by
//! several independent brute-force routes so that every layer of the formula
//! can be cross-validated:
//!
//! * direct enumeration of solutions of `[A,B_1]\cdots` commutator equations in
//!   small `SL_n(F_q)` ([`ffgroups`]),
//! * convolution in the class algebra and the Frobenius character-sum formula
//!   ([`ffgroups`]),
//! * brute-force character-lattice sums over the dual groups
//!   `\Gamma_D = Hom(F_{q^D}^\times, C^\times)` ([`gamma`]),
//! * Möbius-function computations on set-partition lattices by exact matrix
//!   inversion ([`posets`]).
//!
//! The crate is organised bottom-up:
//!
//! * [`exactmath`] — integer Laurent polynomials, big rationals, arithmetic
//!   Möbius function, divisor sums;
//! * [`partitions`] — integer partitions, hooks, hook-product polynomials;
//! * [`types`] — pure types `(d, (m_\lambda))` and their degree quotients
//!   `|GL_n(F_q)|/\chi(1)`;
//! * [`posets`] — finite posets, set-partition lattices, Möbius matrices;
//! * [`coefficients`] — the rational coefficients `C^t_\tau` attached to a
//!   type and a divisor `t | n`;
//! * [`epoly`] — assembly of `N^g_n(q)`, the genus-`g` alternative form, the
//!   `n = 2` quasi-polynomial, Euler characteristics, structure checks;
//! * [`gamma`] — finite dual groups, cyclotomic integers, brute-force
//!   character sums;
//! * [`ffgroups`] — finite fields, `SL_n(F_q)` enumeration, commutator fibers;
//! * [`cli`] — the command-line front end.

#![forbid(unsafe_code)]

pub mod cli;
pub mod coefficients;
pub mod epoly;
pub mod exactmath;
pub mod ffgroups;
pub mod gamma;
pub mod partitions;
pub mod posets;
pub mod types;

pub use exactmath::{Int, IntLaurentPoly, Rat};
pub use partitions::Partition;
pub use types::PureType;
