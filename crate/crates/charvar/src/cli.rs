//! Command-line interface.
//!
//! Subcommands:
//!
//! * `epoly`  — the counting polynomial `N^g_n(q)` (plain, JSON, or LaTeX);
//! * `euler`  — its value at `q = 1`;
//! * `types`  — the pure character types of a given rank;
//! * `coeff`  — the rational coefficient table `C^t_τ`;
//! * `verify` — the cross-validation suites (brute force, dual-group sums,
//!   partition-lattice Möbius values, formula-vs-formula, `SL_2` character
//!   table).
//!
//! Exit codes: `0` success, `1` a verification failed, `2` usage error.
//! A check that would exceed its work budget reports `skipped` and does not
//! fail.  With `--cache-dir`, `epoly` results are cached content-addressed
//! by the SHA-256 of the canonical request.

use crate::coefficients::c_t_all;
use crate::epoly::{euler_char, n2_closed_form, n_poly, n_poly_alt, structural_check, EPolyResult};
use crate::exactmath::IntLaurentPoly;
use crate::ffgroups::{
    build_field, commutator_fiber_count, enumerate_sln, frobenius_from_table, genus_count,
    pgl_order, sl2_central_table, sln_order, FfError, MatFq,
};
use crate::gamma::{ctaut_from_gamma, GammaError};
use crate::posets::{disjoint_cycles_perm, fixed_subposet, hanlon_mu};
use crate::types::enumerate_pure_types;
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::One;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Exact E-polynomials of twisted `SL_n` character varieties, with
/// brute-force cross-checks over finite fields.
#[derive(Parser, Debug)]
#[command(name = "charvar", version, about)]
pub struct Cli {
    /// Cache directory for computed polynomials (content-addressed).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Output rendering for `epoly`.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// Human-readable polynomial.
    Plain,
    /// Structured JSON with exact coefficients as decimal strings.
    Json,
    /// LaTeX source for the polynomial.
    Latex,
}

/// Top-level subcommands.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the counting polynomial N^g_n(q).
    Epoly {
        /// Rank n of SL_n.
        #[arg(long)]
        n: u32,
        /// Genus g ≥ 1.
        #[arg(long)]
        g: u32,
        /// Use the alternative assembly (sum over quotient data) instead of
        /// the type/divisor sum.
        #[arg(long)]
        alt: bool,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Euler characteristic: the polynomial evaluated at q = 1.
    Euler {
        /// Rank n of SL_n.
        #[arg(long)]
        n: u32,
        /// Genus g ≥ 1.
        #[arg(long)]
        g: u32,
    },
    /// List the pure character types of rank n (one JSON object per line).
    Types {
        /// Rank n.
        #[arg(long)]
        n: u32,
    },
    /// Print the coefficient table C^t_τ for rank n.
    Coeff {
        /// Rank n.
        #[arg(long)]
        n: u32,
    },
    /// Cross-validation suites.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
}

/// The independent checks.
#[derive(Subcommand, Debug)]
pub enum VerifySuite {
    /// Count solutions of Π[A_i,B_i] = ζ_n·I in SL_n(F_q) by brute force
    /// and compare with N^g_n(q) · |PGL_n(F_q)|.
    Brute {
        /// Rank n (needs n | q - 1).
        #[arg(long)]
        n: u32,
        /// Field size q (a prime power ≤ 512).
        #[arg(long)]
        q: u64,
        /// Genus (genus ≥ 2 needs conjugacy classes, so small q only).
        #[arg(long, default_value_t = 1)]
        g: u32,
    },
    /// Recover every coefficient C^t_τ of rank n from character sums over
    /// the dual torus at a compatible prime power q.
    Gamma {
        /// Rank n.
        #[arg(long)]
        n: u32,
        /// Odd prime power q with n | q - 1 (and 2n | q - 1 for even n).
        #[arg(long)]
        q: u64,
    },
    /// Möbius numbers of fixed-point sub-lattices of the partition lattice
    /// against the closed form μ(d)·(-d)^(m-1)·(m-1)!.
    Hanlon {
        /// Check all d·m up to this bound.
        #[arg(long, default_value_t = 8)]
        max: u8,
    },
    /// Both polynomial assembly routes agree for every genus up to a bound.
    Crossformula {
        /// Rank n.
        #[arg(long)]
        n: u32,
        /// Largest genus to check.
        #[arg(long, default_value_t = 2)]
        max_g: u32,
    },
    /// SL_2 quasi-polynomial value at a concrete odd q via the character
    /// table, compared with the brute-force count when feasible.
    Sl2 {
        /// Odd prime power q.
        #[arg(long)]
        q: u64,
        /// Genus g ≥ 1.
        #[arg(long, default_value_t = 2)]
        g: u32,
    },
}

/// Parse the process arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    execute(&cli, &mut out)
}

/// Run a parsed command, writing all output to `out`; returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> i32 {
    match run_inner(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            1
        }
    }
}

fn run_inner(cli: &Cli, out: &mut dyn Write) -> std::io::Result<i32> {
    match &cli.command {
        Command::Epoly { n, g, alt, format } => {
            if *n < 1 || *g < 1 {
                writeln!(out, "error: n and g must be at least 1")?;
                return Ok(2);
            }
            let key = serde_json::json!({
                "cmd": "epoly", "n": n, "g": g, "alt": alt,
                "format": format!("{format:?}").to_lowercase(),
            });
            if let Some(hit) = cache_read(cli.cache_dir.as_deref(), &key) {
                out.write_all(hit.as_bytes())?;
                return Ok(0);
            }
            let r = if *alt { n_poly_alt(*n, *g) } else { n_poly(*n, *g) };
            let rendered = render_epoly(&r, *format);
            out.write_all(rendered.as_bytes())?;
            cache_write(cli.cache_dir.as_deref(), &key, &rendered);
            Ok(0)
        }
        Command::Euler { n, g } => {
            if *n < 1 || *g < 1 {
                writeln!(out, "error: n and g must be at least 1")?;
                return Ok(2);
            }
            writeln!(out, "{}", euler_char(*n, *g))?;
            Ok(0)
        }
        Command::Types { n } => {
            let types = enumerate_pure_types(*n);
            for tau in &types {
                writeln!(out, "{}", serde_json::to_string(tau).expect("serialize type"))?;
            }
            writeln!(out, "# {} pure types of size {}", types.len(), n)?;
            Ok(0)
        }
        Command::Coeff { n } => {
            for (tau, row) in c_t_all(*n) {
                let tau_json = serde_json::to_string(&tau).expect("serialize type");
                let cells: Vec<String> =
                    row.iter().map(|(t, c)| format!("C^{t} = {c}")).collect();
                writeln!(out, "{tau_json}  {}", cells.join(", "))?;
            }
            Ok(0)
        }
        Command::Verify { suite } => run_verify(suite, out),
    }
}

// ---------------------------------------------------------------------------
// Rendering and caching
// ---------------------------------------------------------------------------

fn render_epoly(r: &EPolyResult, format: Format) -> String {
    match format {
        Format::Plain => {
            let s = structural_check(r);
            format!(
                "N^{}_{}(q) = {}\ndegree {}, euler {}, monic {}, palindromic {}\n",
                r.g, r.n, r.poly, r.degree, r.euler, s.monic, s.palindromic
            )
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("serialize result");
            s.push('\n');
            s
        }
        Format::Latex => format!("{}\n", latex_poly(&r.poly)),
    }
}

/// LaTeX source for a Laurent polynomial in `q`.
pub fn latex_poly(p: &IntLaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(i64, crate::exactmath::Int)> =
        p.pairs().map(|(e, c)| (e, c.clone())).collect();
    terms.reverse(); // highest exponent first
    let mut s = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c < &crate::exactmath::int(0);
        let abs = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let show_coeff = !abs.is_one() || *e == 0;
        if show_coeff {
            s.push_str(&abs.to_string());
        }
        match e {
            0 => {}
            1 => s.push('q'),
            _ => s.push_str(&format!("q^{{{e}}}")),
        }
    }
    s
}

fn cache_path(dir: &Path, key: &serde_json::Value) -> PathBuf {
    let canonical = serde_json::to_string(key).expect("canonical key");
    let digest = Sha256::digest(canonical.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{hex}.txt"))
}

fn cache_read(dir: Option<&Path>, key: &serde_json::Value) -> Option<String> {
    let dir = dir?;
    std::fs::read_to_string(cache_path(dir, key)).ok()
}

fn cache_write(dir: Option<&Path>, key: &serde_json::Value, value: &str) {
    let Some(dir) = dir else { return };
    if std::fs::create_dir_all(dir).is_err() {
        return;
    }
    let _ = std::fs::write(cache_path(dir, key), value);
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

struct Report<'a> {
    out: &'a mut dyn Write,
    failed: bool,
}

impl<'a> Report<'a> {
    fn ok(&mut self, msg: &str) {
        let _ = writeln!(self.out, "ok: {msg}");
    }
    fn fail(&mut self, msg: &str) {
        let _ = writeln!(self.out, "FAIL: {msg}");
        self.failed = true;
    }
    fn skip(&mut self, msg: &str) {
        let _ = writeln!(self.out, "skipped: {msg}");
    }
}

/// Factor a prime power `q = p^k`; `None` if `q` is not one.
fn prime_power(q: u64) -> Option<(u16, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut k = 0u32;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p as u16, k)) } else { None };
        }
        p += 1;
    }
    Some((q as u16, 1))
}

fn run_verify(suite: &VerifySuite, out: &mut dyn Write) -> std::io::Result<i32> {
    let mut rep = Report { out, failed: false };
    match suite {
        VerifySuite::Brute { n, q, g } => verify_brute(&mut rep, *n, *q, *g),
        VerifySuite::Gamma { n, q } => verify_gamma(&mut rep, *n, *q),
        VerifySuite::Hanlon { max } => verify_hanlon(&mut rep, *max),
        VerifySuite::Crossformula { n, max_g } => verify_crossformula(&mut rep, *n, *max_g),
        VerifySuite::Sl2 { q, g } => verify_sl2(&mut rep, *q, *g),
    }
    Ok(if rep.failed { 1 } else { 0 })
}

fn verify_brute(rep: &mut Report, n: u32, q: u64, g: u32) {
    if n < 2 || n > 3 || g < 1 {
        rep.fail(&format!("unsupported parameters n = {n}, g = {g} (need n ∈ {{2,3}}, g ≥ 1)"));
        return;
    }
    let Some((p, k)) = prime_power(q) else {
        rep.fail(&format!("q = {q} is not a prime power"));
        return;
    };
    if (q - 1) % n as u64 != 0 {
        rep.fail(&format!("need n | q - 1 for a central n-th root of unity (n = {n}, q = {q})"));
        return;
    }
    let field = match build_field(p, k) {
        Ok(f) => f,
        Err(e) => {
            rep.fail(&format!("field construction: {e}"));
            return;
        }
    };
    let z = MatFq::scalar(n as u8, field.root_of_unity(n));
    let expected = if n == 2 {
        n2_closed_form(q, g) * pgl_order(2, q)
    } else {
        n_poly(n, g).poly.eval_int(&q.into()) * pgl_order(n, q)
    };
    let count = if g == 1 {
        let gt = match enumerate_sln(&field, n as u8, false, None) {
            Ok(gt) => gt,
            Err(FfError::Budget(m)) => {
                rep.skip(&format!("SL_{n}(F_{q}) enumeration: {m}"));
                return;
            }
            Err(e) => {
                rep.fail(&format!("enumeration: {e}"));
                return;
            }
        };
        commutator_fiber_count(&gt, &z)
    } else {
        let gt = match enumerate_sln(&field, n as u8, true, None) {
            Ok(gt) => gt,
            Err(FfError::Budget(m)) => {
                rep.skip(&format!("SL_{n}(F_{q}) class computation: {m}"));
                return;
            }
            Err(e) => {
                rep.fail(&format!("enumeration: {e}"));
                return;
            }
        };
        genus_count(&gt, g, &z)
    };
    match count {
        Ok(c) if c == expected => rep.ok(&format!(
            "brute count over SL_{n}(F_{q}), genus {g}: {c} = N·|PGL_{n}(F_{q})|"
        )),
        Ok(c) => rep.fail(&format!(
            "brute count over SL_{n}(F_{q}), genus {g}: got {c}, formula gives {expected}"
        )),
        Err(FfError::Budget(m)) => rep.skip(&format!("brute count: {m}")),
        Err(e) => rep.fail(&format!("brute count: {e}")),
    }
}

fn verify_gamma(rep: &mut Report, n: u32, q: u64) {
    let table = c_t_all(n);
    for (tau, row) in &table {
        for (t, expected) in row {
            match ctaut_from_gamma(q, n, tau, *t) {
                Ok(got) if got == *expected => {
                    rep.ok(&format!("C^{t}_{tau} = {got} recovered from character sums at q = {q}"))
                }
                Ok(got) => rep.fail(&format!(
                    "C^{t}_{tau}: character sums at q = {q} give {got}, table says {expected}"
                )),
                Err(GammaError::Budget(m)) => rep.skip(&format!("C^{t}_{tau}: {m}")),
                Err(GammaError::Invalid(m)) => {
                    rep.fail(&format!("C^{t}_{tau} at q = {q}: {m}"));
                    return;
                }
            }
        }
    }
}

fn verify_hanlon(rep: &mut Report, max: u8) {
    for d in 1..=max {
        for m in 1..=max / d {
            let dm = d * m;
            if dm < 1 {
                continue;
            }
            let perm = disjoint_cycles_perm(d, m);
            let (poset, parts) = fixed_subposet(dm, &perm);
            // Bottom is the all-singletons partition, top the single block.
            let bottom = parts
                .iter()
                .position(|p| p.num_blocks() == dm as usize)
                .expect("singleton partition is fixed");
            let top = parts
                .iter()
                .position(|p| p.num_blocks() == 1)
                .expect("one-block partition is fixed");
            let row = poset.mobius_row(bottom);
            let got = row[top];
            let want = hanlon_mu(d, m);
            if got == want {
                rep.ok(&format!("fixed-lattice Möbius for {m} cycles of length {d}: {got}"));
            } else {
                rep.fail(&format!(
                    "fixed-lattice Möbius for {m} cycles of length {d}: got {got}, closed form {want}"
                ));
            }
        }
    }
}

fn verify_crossformula(rep: &mut Report, n: u32, max_g: u32) {
    for g in 1..=max_g {
        let a = n_poly(n, g);
        let b = n_poly_alt(n, g);
        if a.poly == b.poly {
            rep.ok(&format!("both assemblies agree for n = {n}, g = {g}: {}", a.poly));
        } else {
            rep.fail(&format!(
                "assemblies disagree for n = {n}, g = {g}: {} vs {}",
                a.poly, b.poly
            ));
        }
    }
}

fn verify_sl2(rep: &mut Report, q: u64, g: u32) {
    if q < 3 || q % 2 == 0 || prime_power(q).is_none() {
        rep.fail(&format!("q = {q} must be an odd prime power ≥ 3"));
        return;
    }
    let order = sln_order(2, q);
    let via_chars = frobenius_from_table(&sl2_central_table(q), &order, g);
    let expected = n2_closed_form(q, g) * pgl_order(2, q);
    if via_chars == expected {
        rep.ok(&format!(
            "SL_2(F_{q}) genus-{g} character sum matches the quasi-polynomial: {via_chars}"
        ));
    } else {
        rep.fail(&format!(
            "SL_2(F_{q}) genus-{g}: character sum {via_chars}, quasi-polynomial {expected}"
        ));
    }
    // Brute-force confirmation when the group is small enough.
    let (p, k) = prime_power(q).expect("checked above");
    if let Ok(field) = build_field(p, k) {
        let z = MatFq::scalar(2, field.neg(1));
        let attempt = if g == 1 {
            enumerate_sln(&field, 2, false, None).and_then(|gt| commutator_fiber_count(&gt, &z))
        } else {
            enumerate_sln(&field, 2, true, None).and_then(|gt| genus_count(&gt, g, &z))
        };
        match attempt {
            Ok(c) if c == expected => rep.ok(&format!("brute force agrees: {c}")),
            Ok(c) => rep.fail(&format!("brute force gives {c}, expected {expected}")),
            Err(FfError::Budget(m)) => rep.skip(&format!("brute force: {m}")),
            Err(e) => rep.fail(&format!("brute force: {e}")),
        }
    }
}
