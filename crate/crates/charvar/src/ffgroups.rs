//! Finite fields, `SL_n(F_q)` enumeration, and commutator counting.
//!
//! This is the ground-truth side of the crate: no character theory, no
//! generating functions — just finite matrix groups.  The counting polynomial
//! evaluated at a prime power `q` claims that
//!
//! ```text
//! #{(A_1, B_1, ..., A_g, B_g) ∈ SL_n(F_q)^(2g) : Π [A_i, B_i] = ζ_n·I }
//!   = N^g_n(q) · |PGL_n(F_q)|
//! ```
//!
//! and everything here exists to check that by force:
//!
//! * [`FqField`] — small finite fields `F_{p^k}`, `p^k ≤ 512`, as lookup
//!   tables over a found irreducible polynomial;
//! * [`enumerate_sln`] — the full element list of `SL_n(F_q)` (optionally
//!   with conjugacy classes for the class-algebra route);
//! * [`commutator_fiber_count`] — the genus-1 fiber `#{(A,B): [A,B] = z}`,
//!   computed per `A` by solving the linear system `AB = zBA` and counting
//!   determinant-one kernel vectors.  A Sylvester-equation spectrum filter
//!   (`gcd(char_A, char_{zA}) = 1` forces `B = 0`) skips the vast majority
//!   of `A` without elimination, which is what makes `SL_3(F_7)` feasible;
//! * [`commutator_distribution`] / [`genus_count`] — the commutator class
//!   function and its `g`-fold convolution, the genus-`g` count;
//! * [`frobenius_from_table`] — the character-sum route
//!   `Σ_χ χ(z)·(|G|/χ(1))^(2g-1)`, fed by [`sl2_central_table`].

use crate::exactmath::{Int, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use thiserror::Error;

/// Errors from field construction and group enumeration.
#[derive(Debug, Error)]
pub enum FfError {
    /// Bad field parameters.
    #[error("invalid field: {0}")]
    InvalidField(String),
    /// A computation would exceed its work budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// The requested data was not built (e.g. classes on a bare table).
    #[error("missing data: {0}")]
    Missing(String),
}

// ---------------------------------------------------------------------------
// Finite fields
// ---------------------------------------------------------------------------

/// A small finite field `F_{p^k}` (`p^k ≤ 512`, `k ≤ 3`) with full lookup
/// tables.  Elements are indices `0..p^k`; the index encodes the coefficient
/// vector of the residue polynomial in base `p`, so `0` and `1` are the field
/// constants.
#[derive(Clone)]
pub struct FqField {
    /// Characteristic.
    pub p: u16,
    /// Extension degree.
    pub k: u32,
    /// `q = p^k`.
    pub q: u16,
    /// Coefficients (ascending, length `k`) of the non-leading part of the
    /// monic irreducible modulus; empty for prime fields.
    pub modulus: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>, // inv[0] unused
    /// A fixed generator of the multiplicative group.
    pub generator: u16,
}

impl std::fmt::Debug for FqField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FqField(q = {}^{})", self.p, self.k)
    }
}

fn is_prime(p: u16) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u16;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Build `F_{p^k}`.  For `k ∈ {2, 3}` an irreducible monic modulus is found
/// by exhaustive search (degree ≤ 3 over a prime field: irreducible iff it
/// has no root).
pub fn build_field(p: u16, k: u32) -> Result<FqField, FfError> {
    if !is_prime(p) {
        return Err(FfError::InvalidField(format!("{p} is not prime")));
    }
    if k == 0 || k > 3 {
        return Err(FfError::InvalidField(format!("extension degree {k} unsupported")));
    }
    let q = (p as u64).pow(k);
    if q > 512 {
        return Err(FfError::InvalidField(format!("p^k = {q} > 512")));
    }
    let q = q as usize;

    // Find the modulus (empty for k = 1): coefficients of x^k ≡ -modulus.
    let modulus: Vec<u16> = if k == 1 {
        vec![]
    } else {
        let mut found = None;
        'search: for code in 0..q {
            let coeffs: Vec<u16> = decode(code, p, k as usize);
            // Monic poly x^k + Σ c_i x^i; irreducible (deg ≤ 3) iff rootless.
            for x in 0..p {
                let mut v: u64 = 1; // x^k term accumulated by Horner below
                // Evaluate x^k + c_{k-1}x^{k-1} + ... + c_0 mod p.
                for &c in coeffs.iter().rev() {
                    v = (v * x as u64 + c as u64) % p as u64;
                }
                if v == 0 {
                    continue 'search;
                }
            }
            found = Some(coeffs);
            break;
        }
        found.ok_or_else(|| FfError::InvalidField("no irreducible modulus found".into()))?
    };

    // Addition / negation tables: coefficient-wise mod p.
    let mut add = vec![0u16; q * q];
    let mut neg = vec![0u16; q];
    for a in 0..q {
        let ca = decode(a, p, k as usize);
        neg[a] = encode(&ca.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p);
        for b in 0..=a {
            let cb = decode(b, p, k as usize);
            let cs: Vec<u16> = ca.iter().zip(&cb).map(|(&x, &y)| (x + y) % p).collect();
            let s = encode(&cs, p);
            add[a * q + b] = s;
            add[b * q + a] = s;
        }
    }

    // Multiplication: polynomial product reduced with x^k = -modulus.
    let mut mul = vec![0u16; q * q];
    for a in 0..q {
        let ca = decode(a, p, k as usize);
        for b in 0..=a {
            let cb = decode(b, p, k as usize);
            let mut prod = vec![0u64; 2 * k as usize - 1];
            for (i, &x) in ca.iter().enumerate() {
                for (j, &y) in cb.iter().enumerate() {
                    prod[i + j] += x as u64 * y as u64;
                }
            }
            // Reduce degrees ≥ k.
            for d in (k as usize..prod.len()).rev() {
                let c = prod[d] % p as u64;
                prod[d] = 0;
                for (i, &m) in modulus.iter().enumerate() {
                    // x^d = x^(d-k) · x^k = -Σ m_i x^(d-k+i)
                    prod[d - k as usize + i] += (p as u64 - m as u64) % p as u64 * c;
                }
            }
            let cs: Vec<u16> = prod[..k as usize].iter().map(|&v| (v % p as u64) as u16).collect();
            let m = encode(&cs, p);
            mul[a * q + b] = m;
            mul[b * q + a] = m;
        }
    }

    // Inverses and a generator.
    let mut inv = vec![0u16; q];
    for a in 1..q {
        for b in 1..q {
            if mul[a * q + b] == 1 {
                inv[a] = b as u16;
                break;
            }
        }
        if inv[a] == 0 {
            return Err(FfError::InvalidField("non-invertible nonzero element".into()));
        }
    }
    let mut generator = 0u16;
    'gen: for g in 2..q {
        let mut x = g;
        for _ in 1..q - 1 {
            if x == 1 {
                continue 'gen;
            }
            x = mul[x * q + g] as usize;
        }
        if x == 1 {
            generator = g as u16;
            break;
        }
    }
    if generator == 0 && q > 2 {
        return Err(FfError::InvalidField("no multiplicative generator found".into()));
    }
    if q == 2 {
        generator = 1;
    }

    Ok(FqField { p, k, q: q as u16, modulus, add, mul, neg, inv, generator })
}

fn decode(code: usize, p: u16, k: usize) -> Vec<u16> {
    let mut c = code;
    (0..k)
        .map(|_| {
            let r = (c % p as usize) as u16;
            c /= p as usize;
            r
        })
        .collect()
}

fn encode(coeffs: &[u16], p: u16) -> u16 {
    coeffs.iter().rev().fold(0u16, |acc, &c| acc * p + c)
}

impl FqField {
    /// `a + b`.
    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    /// `a · b`.
    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    /// `-a`.
    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    /// `a - b`.
    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    /// `a^(-1)`; panics on zero.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    /// An element of exact multiplicative order `n` (requires `n | q - 1`).
    pub fn root_of_unity(&self, n: u32) -> u16 {
        assert!(n >= 1 && (self.q as u32 - 1) % n == 0, "need n | q - 1");
        self.pow(self.generator, (self.q as u32 - 1) / n)
    }

    /// `a^e`.
    pub fn pow(&self, a: u16, e: u32) -> u16 {
        let mut acc = 1u16;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Maximum matrix dimension supported by the fixed-size representation.
pub const MAX_N: usize = 3;

/// A square matrix over an [`FqField`], `n ≤ 3`, row-major in a fixed array.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MatFq {
    /// Dimension.
    pub n: u8,
    /// Entries, row-major; unused slots zero.
    pub a: [u16; MAX_N * MAX_N],
}

impl MatFq {
    /// Zero matrix.
    pub fn zero(n: u8) -> Self {
        assert!(1 <= n && n as usize <= MAX_N);
        Self { n, a: [0; MAX_N * MAX_N] }
    }

    /// Identity.
    pub fn identity(n: u8) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n as usize {
            m.a[i * MAX_N + i] = 1;
        }
        m
    }

    /// Scalar matrix `c·I`.
    pub fn scalar(n: u8, c: u16) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n as usize {
            m.a[i * MAX_N + i] = c;
        }
        m
    }

    /// Entry access (0-based).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.a[i * MAX_N + j]
    }

    /// Entry write.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u16) {
        self.a[i * MAX_N + j] = v;
    }

    /// Matrix product over `f`.
    pub fn mul(&self, rhs: &MatFq, f: &FqField) -> MatFq {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n as usize;
        let mut out = MatFq::zero(self.n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u16;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.get(i, k), rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Determinant (Laplace, `n ≤ 3`).
    pub fn det(&self, f: &FqField) -> u16 {
        match self.n {
            1 => self.get(0, 0),
            2 => f.sub(
                f.mul(self.get(0, 0), self.get(1, 1)),
                f.mul(self.get(0, 1), self.get(1, 0)),
            ),
            3 => {
                let m = |i: usize, j: usize| self.get(i, j);
                let c0 = f.sub(f.mul(m(1, 1), m(2, 2)), f.mul(m(1, 2), m(2, 1)));
                let c1 = f.sub(f.mul(m(1, 0), m(2, 2)), f.mul(m(1, 2), m(2, 0)));
                let c2 = f.sub(f.mul(m(1, 0), m(2, 1)), f.mul(m(1, 1), m(2, 0)));
                f.add(
                    f.sub(f.mul(m(0, 0), c0), f.mul(m(0, 1), c1)),
                    f.mul(m(0, 2), c2),
                )
            }
            _ => unreachable!(),
        }
    }

    /// Inverse via adjugate (`n ≤ 3`); panics when singular.
    pub fn inverse(&self, f: &FqField) -> MatFq {
        let det = self.det(f);
        assert!(det != 0, "singular matrix");
        let dinv = f.inv(det);
        let n = self.n as usize;
        let mut out = MatFq::zero(self.n);
        match n {
            1 => out.set(0, 0, dinv),
            2 => {
                out.set(0, 0, f.mul(dinv, self.get(1, 1)));
                out.set(0, 1, f.mul(dinv, f.neg(self.get(0, 1))));
                out.set(1, 0, f.mul(dinv, f.neg(self.get(1, 0))));
                out.set(1, 1, f.mul(dinv, self.get(0, 0)));
            }
            3 => {
                for i in 0..3 {
                    for j in 0..3 {
                        // Cofactor C_{ji} (transposed) with sign.
                        let (r0, r1) = match j {
                            0 => (1, 2),
                            1 => (0, 2),
                            _ => (0, 1),
                        };
                        let (c0, c1) = match i {
                            0 => (1, 2),
                            1 => (0, 2),
                            _ => (0, 1),
                        };
                        let minor = f.sub(
                            f.mul(self.get(r0, c0), self.get(r1, c1)),
                            f.mul(self.get(r0, c1), self.get(r1, c0)),
                        );
                        let signed = if (i + j) % 2 == 0 { minor } else { f.neg(minor) };
                        out.set(i, j, f.mul(dinv, signed));
                    }
                }
            }
            _ => unreachable!(),
        }
        debug_assert_eq!(self.mul(&out, f), MatFq::identity(self.n));
        out
    }

    /// Characteristic polynomial coefficients, ascending, length `n + 1`,
    /// monic.
    pub fn char_poly(&self, f: &FqField) -> Vec<u16> {
        match self.n {
            1 => vec![f.neg(self.get(0, 0)), 1],
            2 => {
                let tr = f.add(self.get(0, 0), self.get(1, 1));
                vec![self.det(f), f.neg(tr), 1]
            }
            3 => {
                let tr = f.add(f.add(self.get(0, 0), self.get(1, 1)), self.get(2, 2));
                // Sum of principal 2x2 minors.
                let mut c = 0u16;
                for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
                    let minor = f.sub(
                        f.mul(self.get(i, i), self.get(j, j)),
                        f.mul(self.get(i, j), self.get(j, i)),
                    );
                    c = f.add(c, minor);
                }
                vec![f.neg(self.det(f)), c, f.neg(tr), 1]
            }
            _ => unreachable!(),
        }
    }
}

/// gcd of two polynomials over `f` (dense ascending coefficients); the
/// result is only tested for being constant, so it is not normalised.
fn poly_gcd_fq(a: &[u16], b: &[u16], f: &FqField) -> Vec<u16> {
    let trim = |v: &mut Vec<u16>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        while a.len() >= b.len() {
            let lead = *a.last().unwrap();
            if lead != 0 {
                let scale = f.mul(lead, f.inv(*b.last().unwrap()));
                let shift = a.len() - b.len();
                for (i, &c) in b.iter().enumerate() {
                    let t = f.mul(scale, c);
                    a[shift + i] = f.sub(a[shift + i], t);
                }
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
            if *a.last().unwrap() == 0 {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
        trim(&mut b);
    }
    a
}

// ---------------------------------------------------------------------------
// Group tables
// ---------------------------------------------------------------------------

/// Conjugacy-class data of an enumerated group.
pub struct ClassData {
    /// Element → index.
    pub index: HashMap<[u16; MAX_N * MAX_N], u32>,
    /// Index of the inverse of each element.
    pub inverse: Vec<u32>,
    /// Class id of each element.
    pub class_of: Vec<u32>,
    /// One representative element index per class.
    pub reps: Vec<u32>,
    /// Class sizes.
    pub sizes: Vec<u64>,
}

/// An enumerated `SL_n(F_q)` with optional conjugacy classes.
pub struct GroupTable {
    /// The base field.
    pub field: FqField,
    /// Matrix dimension.
    pub n: u8,
    /// Every element, in enumeration order.
    pub elements: Vec<MatFq>,
    /// Class data when built with `with_classes`.
    pub classes: Option<ClassData>,
}

/// `|SL_n(F_q)| = q^(n(n-1)/2) · Π_{i=2}^n (q^i - 1)`.
pub fn sln_order(n: u32, q: u64) -> Int {
    let mut acc = Int::from(q).pow(n * (n - 1) / 2);
    for i in 2..=n {
        acc *= Int::from(q).pow(i) - Int::one();
    }
    acc
}

/// `|PGL_n(F_q)| = |GL_n(F_q)| / (q - 1)`, numerically equal to
/// [`sln_order`].
pub fn pgl_order(n: u32, q: u64) -> Int {
    let mut acc = Int::from(q).pow(n * (n - 1) / 2);
    for i in 1..=n {
        acc *= Int::from(q).pow(i) - Int::one();
    }
    acc / (Int::from(q) - Int::one())
}

/// Enumerate `SL_n(F_q)` by scanning all `q^(n²)` matrices and keeping
/// `det = 1`.  `budget` caps the group order (default
/// [`DEFAULT_ENUM_BUDGET`]); conjugacy classes (needed for convolution) are
/// built only when `with_classes`, with a tighter implied budget.
pub fn enumerate_sln(
    field: &FqField,
    n: u8,
    with_classes: bool,
    budget: Option<u64>,
) -> Result<GroupTable, FfError> {
    assert!(1 <= n && n as usize <= MAX_N);
    let q = field.q as u64;
    let order = sln_order(n as u32, q);
    let budget = budget.unwrap_or(DEFAULT_ENUM_BUDGET);
    if order > Int::from(budget) {
        return Err(FfError::Budget(format!("|SL_{n}({q})| = {order} exceeds {budget}")));
    }
    if with_classes && order > Int::from(CLASS_BUDGET) {
        return Err(FfError::Budget(format!(
            "|SL_{n}({q})| = {order} too large for class computation"
        )));
    }
    let nn = (n as u32) * (n as u32);
    let total = q.pow(nn);
    let mut elements = Vec::new();
    for code in 0..total {
        let mut m = MatFq::zero(n);
        let mut c = code;
        for i in 0..n as usize {
            for j in 0..n as usize {
                m.set(i, j, (c % q) as u16);
                c /= q;
            }
        }
        if m.det(field) == 1 {
            elements.push(m);
        }
    }
    debug_assert_eq!(Int::from(elements.len() as u64), order);

    let classes = if with_classes {
        Some(build_classes(field, n, &elements))
    } else {
        None
    };
    Ok(GroupTable { field: field.clone(), n, elements, classes })
}

/// Default cap on `|SL_n(F_q)|` for full enumeration.
pub const DEFAULT_ENUM_BUDGET: u64 = 12_000_000;
/// Cap when conjugacy classes are requested.
pub const CLASS_BUDGET: u64 = 300_000;

fn build_classes(field: &FqField, n: u8, elements: &[MatFq]) -> ClassData {
    let mut index = HashMap::with_capacity(elements.len());
    for (i, m) in elements.iter().enumerate() {
        index.insert(m.a, i as u32);
    }
    let inverse: Vec<u32> = elements
        .iter()
        .map(|m| index[&m.inverse(field).a])
        .collect();
    // Transvection generators I + c·E_ij, c ≠ 0, with their inverses.
    let mut gens = Vec::new();
    for i in 0..n as usize {
        for j in 0..n as usize {
            if i == j {
                continue;
            }
            for c in 1..field.q {
                let mut g = MatFq::identity(n);
                g.set(i, j, c);
                let ginv = g.inverse(field);
                gens.push((g, ginv));
            }
        }
    }
    let mut class_of = vec![u32::MAX; elements.len()];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for seed in 0..elements.len() {
        if class_of[seed] != u32::MAX {
            continue;
        }
        let cid = reps.len() as u32;
        reps.push(seed as u32);
        let mut size = 0u64;
        let mut stack = vec![seed as u32];
        class_of[seed] = cid;
        while let Some(x) = stack.pop() {
            size += 1;
            let xm = elements[x as usize];
            for (g, ginv) in &gens {
                let conj = ginv.mul(&xm.mul(g, field), field);
                let ci = index[&conj.a];
                if class_of[ci as usize] == u32::MAX {
                    class_of[ci as usize] = cid;
                    stack.push(ci);
                }
            }
        }
        sizes.push(size);
    }
    ClassData { index, inverse, class_of, reps, sizes }
}

// ---------------------------------------------------------------------------
// Commutator counting
// ---------------------------------------------------------------------------

/// Number of `B ∈ SL_n(F_q)` with `A·B = W·B·A`, by Gaussian elimination of
/// the linear system over the `n²` unknown entries of `B` and enumeration of
/// the kernel.  `kernel_budget` caps the `q^nullity` enumeration.
fn twisted_centraliser_count(
    field: &FqField,
    a: &MatFq,
    w: &MatFq,
    kernel_budget: u64,
) -> Result<u64, FfError> {
    let n = a.n as usize;
    let dim = n * n;
    // Row (i,j): Σ_k A[i][k]·B[k][j] - Σ_k (W·B·A)... with W arbitrary:
    // (A·B)[i][j] = Σ_k A[i][k] B[k][j]
    // (W·B·A)[i][j] = Σ_{u,v} W[i][u] B[u][v] A[v][j]
    let mut rows = vec![vec![0u16; dim]; dim];
    for i in 0..n {
        for j in 0..n {
            let r = &mut rows[i * n + j];
            for k in 0..n {
                let col = k * n + j;
                r[col] = field.add(r[col], a.get(i, k));
            }
            for u in 0..n {
                for v in 0..n {
                    let col = u * n + v;
                    let t = field.mul(w.get(i, u), a.get(v, j));
                    r[col] = field.sub(r[col], t);
                }
            }
        }
    }
    // Row-reduce.
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..dim {
        let Some(pr) = (rank..dim).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = field.inv(rows[rank][col]);
        for c in col..dim {
            rows[rank][c] = field.mul(rows[rank][c], inv);
        }
        for r in 0..dim {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in col..dim {
                    let t = field.mul(factor, rows[rank][c]);
                    rows[r][c] = field.sub(rows[r][c], t);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == dim {
            break;
        }
    }
    let nullity = dim - rank;
    if nullity == 0 {
        return Ok(0);
    }
    let combos = (field.q as u64).pow(nullity as u32);
    if combos > kernel_budget {
        return Err(FfError::Budget(format!("kernel of size {combos}")));
    }
    // Kernel basis: one vector per free column.
    let free_cols: Vec<usize> = (0..dim).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(nullity);
    for &fc in &free_cols {
        let mut v = vec![0u16; dim];
        v[fc] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = field.neg(rows[r][fc]);
        }
        basis.push(v);
    }
    // Enumerate all linear combinations, count det = 1.
    let q = field.q as u64;
    let mut count = 0u64;
    let mut coeffs = vec![0u16; nullity];
    'outer: loop {
        // Build B.
        let mut b = MatFq::zero(a.n);
        let mut nonzero = false;
        for (ci, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            nonzero = true;
            for (pos, &bv) in basis[ci].iter().enumerate() {
                if bv != 0 {
                    let cur = b.a[pos / n * MAX_N + pos % n];
                    b.a[pos / n * MAX_N + pos % n] = field.add(cur, field.mul(c, bv));
                }
            }
        }
        if nonzero && b.det(field) == 1 {
            count += 1;
        }
        // Increment coefficient vector.
        for slot in 0..nullity {
            coeffs[slot] += 1;
            if (coeffs[slot] as u64) < q {
                continue 'outer;
            }
            coeffs[slot] = 0;
        }
        break;
    }
    Ok(count)
}

/// `#{(A, B) ∈ SL_n(F_q)² : [A, B] = z}` for central `z`, i.e. the genus-1
/// twisted commutator fiber.  Uses the spectrum filter: `[A,B] = z` rewrites
/// to the Sylvester-type equation `A·B = B·(zA)`, which has a nonzero
/// solution only when `char_A` and `char_{zA}` share a factor.
pub fn commutator_fiber_count(gt: &GroupTable, z: &MatFq) -> Result<Int, FfError> {
    let f = &gt.field;
    // z must be central in SL_n: a scalar matrix with det 1.
    let c = z.get(0, 0);
    assert_eq!(*z, MatFq::scalar(gt.n, c), "z must be scalar");
    assert_eq!(z.det(f), 1, "z must lie in SL_n");
    let mut total = Int::zero();
    for a in &gt.elements {
        let za = scalar_mul(f, c, a);
        let pa = a.char_poly(f);
        let pza = za.char_poly(f);
        let g = poly_gcd_fq(&pa, &pza, f);
        if g.len() <= 1 {
            continue; // no common spectrum: only B = 0 solves AB = zBA
        }
        total += twisted_centraliser_count(f, a, z, DEFAULT_KERNEL_BUDGET)?;
    }
    Ok(total)
}

/// Cap on kernel enumeration per matrix.
pub const DEFAULT_KERNEL_BUDGET: u64 = 2_000_000;

fn scalar_mul(f: &FqField, c: u16, a: &MatFq) -> MatFq {
    let mut out = *a;
    for i in 0..a.n as usize {
        for j in 0..a.n as usize {
            out.set(i, j, f.mul(c, a.get(i, j)));
        }
    }
    out
}

/// A class function on an enumerated group: one exact integer per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    /// Values indexed by class id.
    pub values: Vec<Int>,
}

/// The commutator distribution `f(w) = #{(A,B) : [A,B] = w}` as a class
/// function (it is one: conjugating `w` conjugates the solution set).
/// Computed per class representative with the same per-`A` linear solve as
/// the fiber count.
pub fn commutator_distribution(gt: &GroupTable) -> Result<ClassFunction, FfError> {
    let classes = gt
        .classes
        .as_ref()
        .ok_or_else(|| FfError::Missing("classes not built".into()))?;
    let f = &gt.field;
    let mut values = Vec::with_capacity(classes.reps.len());
    for &rep in &classes.reps {
        let w = gt.elements[rep as usize];
        let mut total = Int::zero();
        for a in &gt.elements {
            total += twisted_centraliser_count(f, a, &w, DEFAULT_KERNEL_BUDGET)?;
        }
        values.push(total);
    }
    Ok(ClassFunction { values })
}

/// The genus-`g` count `#{(A_1,B_1,...,A_g,B_g) : Π [A_i,B_i] = z}`: the
/// `g`-fold convolution of the commutator distribution, evaluated at `z`.
pub fn genus_count(gt: &GroupTable, g: u32, z: &MatFq) -> Result<Int, FfError> {
    assert!(g >= 1);
    let classes = gt
        .classes
        .as_ref()
        .ok_or_else(|| FfError::Missing("classes not built".into()))?;
    let f = commutator_distribution(gt)?;
    let mut acc = f.clone();
    for _ in 1..g {
        acc = convolve(gt, classes, &f, &acc);
    }
    let zi = *classes
        .index
        .get(&z.a)
        .ok_or_else(|| FfError::Missing("z not in the group".into()))?;
    Ok(acc.values[classes.class_of[zi as usize] as usize].clone())
}

/// `(f * h)(z) = Σ_{w ∈ G} f(w) · h(w⁻¹ z)`, computed per class of `z`.
fn convolve(gt: &GroupTable, classes: &ClassData, f: &ClassFunction, h: &ClassFunction) -> ClassFunction {
    let field = &gt.field;
    let mut values = Vec::with_capacity(classes.reps.len());
    for &rep in &classes.reps {
        let zc = gt.elements[rep as usize];
        let mut acc = Int::zero();
        for (wi, _) in gt.elements.iter().enumerate() {
            let winv = classes.inverse[wi];
            let prod = gt.elements[winv as usize].mul(&zc, field);
            let pc = classes.class_of[classes.index[&prod.a] as usize];
            acc += &f.values[classes.class_of[wi] as usize] * &h.values[pc as usize];
        }
        values.push(acc);
    }
    ClassFunction { values }
}

// ---------------------------------------------------------------------------
// Character tables
// ---------------------------------------------------------------------------

/// The Frobenius-formula count from a character table restricted to a central
/// element: `Σ_χ χ(z) · (|G|/χ(1))^(2g-1)`.  Entries are
/// `(χ(1), χ(z))`; the result must be a non-negative integer (asserted).
pub fn frobenius_from_table(entries: &[(Int, Rat)], order: &Int, g: u32) -> Int {
    assert!(g >= 1);
    let mut acc = Rat::zero();
    for (deg, val) in entries {
        let ratio = Rat::new(order.clone(), deg.clone());
        let mut pow = Rat::one();
        for _ in 0..2 * g - 1 {
            pow *= &ratio;
        }
        acc += val * pow;
    }
    assert!(acc.is_integer(), "Frobenius sum must be an integer, got {acc}");
    let out = acc.to_integer();
    assert!(!out.is_negative(), "Frobenius count must be non-negative");
    out
}

/// Degrees and central values `χ(-I)` for the full character table of
/// `SL_2(F_q)`, `q` odd:
///
/// * `(q-3)/2` characters of degree `q+1` with values `(q+1)·(-1)^i`,
/// * two of degree `(q+1)/2` with value `((q+1)/2)·(-1)^((q-1)/2)`,
/// * `(q-1)/2` of degree `q-1` with values `(q-1)·(-1)^i`,
/// * two of degree `(q-1)/2` with value `((q-1)/2)·(-1)^((q+1)/2)`,
/// * the trivial character `(1, 1)` and the Steinberg `(q, q)`.
pub fn sl2_central_table(q: u64) -> Vec<(Int, Rat)> {
    assert!(q >= 3 && q % 2 == 1, "q must be an odd prime power");
    let qi = q as i64;
    let mut t: Vec<(i64, i64)> = Vec::new();
    for i in 1..=(qi - 3) / 2 {
        t.push((qi + 1, (qi + 1) * pm1(i)));
    }
    for _ in 0..2 {
        t.push(((qi + 1) / 2, (qi + 1) / 2 * pm1((qi - 1) / 2)));
    }
    for i in 1..=(qi - 1) / 2 {
        t.push((qi - 1, (qi - 1) * pm1(i)));
    }
    for _ in 0..2 {
        t.push(((qi - 1) / 2, (qi - 1) / 2 * pm1((qi + 1) / 2)));
    }
    t.push((1, 1));
    t.push((qi, qi));
    t.into_iter()
        .map(|(d, v)| (Int::from(d), Rat::from_integer(Int::from(v))))
        .collect()
}

/// The same table restricted to the identity instead: `χ(I) = χ(1)`.
pub fn sl2_identity_table(q: u64) -> Vec<(Int, Rat)> {
    sl2_central_table(q)
        .into_iter()
        .map(|(d, _)| (d.clone(), Rat::from_integer(d)))
        .collect()
}

fn pm1(i: i64) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epoly::n2_closed_form;
    use crate::exactmath::int;

    #[test]
    fn field_construction() {
        for (p, k) in [(5u16, 1u32), (3, 2), (2, 2), (7, 1), (13, 1), (2, 3), (3, 3)] {
            let f = build_field(p, k).unwrap();
            let q = f.q;
            // Field axioms on the tables: associativity and distributivity
            // spot checks plus exact inverse/negation everywhere.
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, 0), a);
            }
            // The generator has full order.
            let mut x = f.generator;
            for _ in 1..q as u32 - 1 {
                assert_ne!(x, 1);
                x = f.mul(x, f.generator);
            }
            assert_eq!(x, 1);
        }
        assert!(build_field(6, 1).is_err());
        assert!(build_field(23, 3).is_err()); // 23^3 > 512
    }

    #[test]
    fn field_distributivity_exhaustive_gf9() {
        let f = build_field(3, 2).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
    }

    #[test]
    fn roots_of_unity() {
        let f = build_field(13, 1).unwrap();
        let z = f.root_of_unity(4);
        assert_eq!(f.pow(z, 4), 1);
        assert_ne!(f.pow(z, 2), 1);
        let m1 = f.root_of_unity(2);
        assert_eq!(f.add(m1, 1), 0); // the order-2 root is -1
    }

    #[test]
    fn group_orders() {
        let f3 = build_field(3, 1).unwrap();
        let gt = enumerate_sln(&f3, 2, true, None).unwrap();
        assert_eq!(gt.elements.len(), 24);
        assert_eq!(gt.classes.as_ref().unwrap().reps.len(), 7);

        let f5 = build_field(5, 1).unwrap();
        let gt5 = enumerate_sln(&f5, 2, true, None).unwrap();
        assert_eq!(gt5.elements.len(), 120);
        assert_eq!(gt5.classes.as_ref().unwrap().reps.len(), 9);

        let f4 = build_field(2, 2).unwrap();
        let gt34 = enumerate_sln(&f4, 3, false, None).unwrap();
        assert_eq!(gt34.elements.len(), 60480);

        assert_eq!(sln_order(3, 7), int(5_630_688));
        assert_eq!(pgl_order(3, 7), int(5_630_688));
        assert_eq!(pgl_order(2, 9), int(720));
        assert_eq!(pgl_order(2, 13), int(2184));
    }

    #[test]
    fn class_sizes_partition_group() {
        let f = build_field(5, 1).unwrap();
        let gt = enumerate_sln(&f, 2, true, None).unwrap();
        let cd = gt.classes.as_ref().unwrap();
        assert_eq!(cd.sizes.iter().sum::<u64>(), 120);
        // Central classes are singletons.
        let m1 = MatFq::scalar(2, f.neg(1));
        let zi = cd.index[&m1.a];
        assert_eq!(cd.sizes[cd.class_of[zi as usize] as usize], 1);
    }

    #[test]
    fn commuting_pair_count() {
        // #{(A,B): [A,B] = I} = |G| · #classes.
        let f = build_field(3, 1).unwrap();
        let gt = enumerate_sln(&f, 2, true, None).unwrap();
        let count = commutator_fiber_count(&gt, &MatFq::identity(2)).unwrap();
        assert_eq!(count, int(24 * 7));
    }

    #[test]
    fn twisted_centraliser_matches_naive() {
        // Cross-check the linear-algebra count against the obvious loop.
        let f = build_field(3, 1).unwrap();
        let gt = enumerate_sln(&f, 2, false, None).unwrap();
        let w = gt.elements[17];
        for a in gt.elements.iter().take(40) {
            let fast = twisted_centraliser_count(&f, a, &w, 1 << 20).unwrap();
            let slow = gt
                .elements
                .iter()
                .filter(|b| a.mul(b, &f) == w.mul(&b.mul(a, &f), &f))
                .count() as u64;
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn genus1_twisted_fiber_sl2_5() {
        let f = build_field(5, 1).unwrap();
        let gt = enumerate_sln(&f, 2, false, None).unwrap();
        let z = MatFq::scalar(2, f.neg(1));
        let count = commutator_fiber_count(&gt, &z).unwrap();
        assert_eq!(count, pgl_order(2, 5)); // = 120: N¹ = 1
    }

    #[test]
    fn distribution_sums_to_group_squared() {
        let f = build_field(3, 1).unwrap();
        let gt = enumerate_sln(&f, 2, true, None).unwrap();
        let cd = gt.classes.as_ref().unwrap();
        let dist = commutator_distribution(&gt).unwrap();
        let total: Int = dist
            .values
            .iter()
            .zip(&cd.sizes)
            .map(|(v, &s)| v * Int::from(s))
            .sum();
        assert_eq!(total, int(24 * 24));
    }

    #[test]
    fn genus2_sl2_3_by_convolution() {
        // Genus 2 at q=3: the quasi-polynomial branch gives 1360, so the
        // total count is 1360 · |PGL_2(3)| = 32640.
        let f = build_field(3, 1).unwrap();
        let gt = enumerate_sln(&f, 2, true, None).unwrap();
        let z = MatFq::scalar(2, f.neg(1));
        let count = genus_count(&gt, 2, &z).unwrap();
        assert_eq!(count, int(1360 * 24));
        assert_eq!(n2_closed_form(3, 2) * pgl_order(2, 3), count);
    }

    #[test]
    fn genus1_convolution_equals_fiber() {
        let f = build_field(5, 1).unwrap();
        let gt = enumerate_sln(&f, 2, true, None).unwrap();
        let z = MatFq::scalar(2, f.neg(1));
        assert_eq!(
            genus_count(&gt, 1, &z).unwrap(),
            commutator_fiber_count(&gt, &z).unwrap()
        );
    }

    #[test]
    fn sl2_table_consistency() {
        for q in [3u64, 5, 7, 9, 13] {
            let table = sl2_central_table(q);
            // q + 4 characters; degrees square-sum to |SL_2(q)|.
            assert_eq!(table.len() as u64, q + 4);
            let sum: Int = table.iter().map(|(d, _)| d * d).sum();
            assert_eq!(sum, sln_order(2, q));
            // Central values have |χ(-I)| = χ(1).
            for (d, v) in &table {
                assert_eq!(v.to_integer().abs(), *d);
            }
        }
    }

    #[test]
    fn frobenius_route_matches_brute() {
        // Genus 1 and 2 at q = 5 via the character sum.
        let order = sln_order(2, 5);
        let g1 = frobenius_from_table(&sl2_central_table(5), &order, 1);
        assert_eq!(g1, int(120));
        let g2 = frobenius_from_table(&sl2_central_table(5), &order, 2);
        assert_eq!(g2, int(10576 * 120));
        // And the identity column counts commuting tuples.
        let f = build_field(3, 1).unwrap();
        let gt = enumerate_sln(&f, 2, true, None).unwrap();
        let id_count = frobenius_from_table(&sl2_identity_table(3), &sln_order(2, 3), 1);
        assert_eq!(
            id_count,
            commutator_fiber_count(&gt, &MatFq::identity(2)).unwrap()
        );
    }

    #[test]
    fn budget_refusal() {
        let f = build_field(13, 1).unwrap();
        assert!(matches!(
            enumerate_sln(&f, 3, false, Some(1000)),
            Err(FfError::Budget(_))
        ));
        assert!(matches!(
            enumerate_sln(&f, 3, true, None),
            Err(FfError::Budget(_))
        ));
    }
}
