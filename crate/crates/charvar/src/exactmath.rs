//! Exact arithmetic: Laurent polynomials over `Z`, big rationals, and the
//! small number-theoretic helpers (Möbius, divisors, torsion counts) that the
//! counting formulas are built from.
//!
//! Everything here is exact; there is no floating point anywhere in the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational, always kept reduced with positive denominator
/// by `num-rational`.
pub type Rat = num_rational::BigRational;

/// Convenience: `Int` from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Convenience: `Rat` from a machine integer.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(int(v))
}

/// A Laurent polynomial in one variable `q` with `Int` coefficients, stored
/// sparsely as `exponent -> coefficient` with no zero coefficients.  The zero
/// polynomial is the empty map, so equality of maps is equality of
/// polynomials.
///
/// Exponents may be negative; most of the crate produces honest polynomials,
/// and the places that divide (by `q - 1`, or by hook products) assert that
/// the division is exact.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct IntLaurentPoly {
    coeffs: BTreeMap<i64, Int>,
}

impl IntLaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::constant(Int::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Int) -> Self {
        Self::monomial(0, c)
    }

    /// The variable `q` itself.
    pub fn var() -> Self {
        Self::monomial(1, Int::one())
    }

    /// `c * q^exp`.
    pub fn monomial(exp: i64, c: Int) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `q^exp - 1`; the building block of hook products and group orders.
    pub fn q_pow_minus_one(exp: i64) -> Self {
        assert!(exp != 0, "q^0 - 1 would be zero");
        let mut p = Self::monomial(exp, Int::one());
        p.add_term(0, -Int::one());
        p
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are
    /// summed.
    pub fn from_pairs<I: IntoIterator<Item = (i64, Int)>>(pairs: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: Int) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    /// Is this the zero polynomial?
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent with nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest exponent with nonzero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Coefficient of `q^exp` (zero if absent).
    pub fn coeff(&self, exp: i64) -> Int {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Int::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading_coeff(&self) -> Int {
        match self.degree() {
            Some(d) => self.coeff(d),
            None => Int::zero(),
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn pairs(&self) -> impl Iterator<Item = (i64, &Int)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// `true` iff an honest polynomial (no negative exponents) with leading
    /// coefficient `1`.
    pub fn is_monic_polynomial(&self) -> bool {
        self.valuation().map_or(false, |v| v >= 0) && self.leading_coeff().is_one()
    }

    /// Multiply by `c * q^exp` in place.
    pub fn scale(&self, c: &Int, exp: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, k)| (e + exp, k * c))
                .collect(),
        }
    }

    /// Exponentiation by squaring.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        result
    }

    /// Evaluate at an integer `x`.  Requires `x != 0` when negative exponents
    /// are present (in which case the result must still be an integer, which
    /// is asserted).
    pub fn eval_int(&self, x: &Int) -> Int {
        let v = self.valuation().unwrap_or(0);
        if v >= 0 {
            // Horner from the top.
            let mut acc = Int::zero();
            let mut prev = self.degree().unwrap_or(0);
            for (e, c) in self.coeffs.iter().rev() {
                acc *= x.pow((prev - e) as u32);
                acc += c;
                prev = *e;
            }
            acc * x.pow(prev as u32)
        } else {
            assert!(!x.is_zero(), "negative exponents need x != 0");
            let shifted = self.scale(&Int::one(), -v);
            let num = shifted.eval_int(x);
            let den = x.pow((-v) as u32);
            let (quo, rem) = num.div_rem(&den);
            assert!(rem.is_zero(), "Laurent evaluation not integral at {x}");
            quo
        }
    }

    /// Evaluate at a rational point.
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.coeffs {
            let term = if *e >= 0 {
                Rat::from_integer(c.clone()) * pow_rat(x, *e as u32)
            } else {
                Rat::from_integer(c.clone()) / pow_rat(x, (-e) as u32)
            };
            acc += term;
        }
        acc
    }

    /// The reversal `q^d * p(1/q)`.  Panics if some exponent of `p` exceeds
    /// `d` (the result would not be a polynomial in the intended sense).
    pub fn reverse(&self, d: i64) -> Self {
        assert!(
            self.degree().map_or(true, |deg| deg <= d),
            "reversal degree {d} below polynomial degree"
        );
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (d - e, c.clone())).collect(),
        }
    }

    /// `true` iff the coefficient sequence reads the same from both ends,
    /// i.e. `q^(deg + val) * p(1/q) = p`.
    pub fn is_palindromic(&self) -> bool {
        match (self.degree(), self.valuation()) {
            (Some(d), Some(v)) => self.reverse(d + v) == *self,
            _ => true,
        }
    }

    /// Exact division: returns `Some(self / rhs)` when the remainder is zero,
    /// `None` otherwise.  Panics when `rhs` is zero.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Shift both to ordinary polynomials with nonzero constant term, long
        // divide, shift back.
        let va = self.valuation().unwrap();
        let vb = rhs.valuation().unwrap();
        let a = self.scale(&Int::one(), -va);
        let b = rhs.scale(&Int::one(), -vb);
        let lead_b = b.leading_coeff();
        let deg_b = b.degree().unwrap();
        let mut rem = a;
        let mut quo = Self::zero();
        while let Some(deg_r) = rem.degree() {
            if deg_r < deg_b {
                return None;
            }
            let lead_r = rem.leading_coeff();
            let (c, r) = lead_r.div_rem(&lead_b);
            if !r.is_zero() {
                return None;
            }
            let term = Self::monomial(deg_r - deg_b, c);
            rem = &rem - &(&term * &b);
            quo = &quo + &term;
        }
        Some(quo.scale(&Int::one(), va - vb))
    }

    /// Serialize as `[exponent, "coefficient"]` pairs in increasing exponent
    /// order (decimal strings so arbitrary precision survives JSON).
    pub fn to_json_pairs(&self) -> Vec<(i64, String)> {
        self.coeffs.iter().map(|(e, c)| (*e, c.to_string())).collect()
    }
}

fn pow_rat(x: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

impl Add for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn add(self, rhs: Self) -> IntLaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn sub(self, rhs: Self) -> IntLaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn neg(self) -> IntLaurentPoly {
        IntLaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn mul(self, rhs: Self) -> IntLaurentPoly {
        let mut out = IntLaurentPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for IntLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Arithmetic Möbius function `mu(m)`.
pub fn mobius(m: u64) -> i64 {
    assert!(m >= 1, "mobius needs m >= 1");
    let mut m = m;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if m > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors needs n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// `k!` as a big integer.
pub fn factorial(k: u64) -> Int {
    let mut acc = Int::one();
    for i in 2..=k {
        acc *= Int::from(i);
    }
    acc
}

/// The number of elements of order exactly `t` times ... more precisely the
/// divisor sum `O^N(t) = sum_{d | t} mu(t/d) d^N`: the number of elements of a
/// rank-`N` free abelian group modulo `t`-th powers ... equivalently the count
/// of `(Z/t)^N` elements of full order `t`.
pub fn torsion_count(t: u64, big_n: u32) -> Int {
    let mut acc = Int::zero();
    for d in divisors(t) {
        acc += Int::from(mobius(t / d)) * Int::from(d).pow(big_n);
    }
    acc
}

/// Greatest common divisor on machine integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Least common multiple on machine integers.
pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}
