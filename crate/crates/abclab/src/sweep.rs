//! Exhaustive sweeps over coprime triples, exact and allocation-free.
//!
//! The verification sweep re-derives every check of [`crate::gamma`] at the
//! prime-exponent level so millions of triples per minute stay in reach on
//! one core: decomposition reconstruction, the graph equations, the
//! per-prime counting inequality, the constant-free corollary and
//! multidegree bounds, all decided in integer arithmetic. The structured
//! [`crate::gamma`] route is the reference implementation; the two are
//! cross-checked in tests.
//!
//! Sweeps partition by the sum `a + b`, so ranges can run on worker pools
//! and merge deterministically.

use rayon::prelude::*;

use crate::arith::SpfTable;

/// Deliberate corruption for harness self-tests: prove that the sweep
/// reports violations when the data is wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    None,
    /// Flip the sign of `x_1` in the decomposition of `a`.
    FlipSign,
}

pub const MAX_DEPTH: u32 = 64;

/// One row of the verification sweep, matching the report schema.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub n: u32,
    pub lemma35_ok: bool,
    pub lemma35_slack: f64,
    pub cor36_ok: bool,
    pub lemma311_ok: bool,
    pub eq34_ok: bool,
    pub equations_ok: bool,
}

impl VerifyRow {
    pub fn all_ok(&self) -> bool {
        self.lemma35_ok && self.cor36_ok && self.lemma311_ok && self.eq34_ok && self.equations_ok
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub triples: u64,
    pub rows: u64,
    pub violations: u64,
    pub lemma35_violations: u64,
    pub cor36_violations: u64,
    pub lemma311_violations: u64,
    pub eq34_violations: u64,
    pub equation_violations: u64,
    pub min_lemma35_slack: f64,
    pub min_cor36_slack: f64,
    pub min_lemma311_slack: f64,
}

impl VerifySummary {
    fn new() -> Self {
        VerifySummary {
            triples: 0,
            rows: 0,
            violations: 0,
            lemma35_violations: 0,
            cor36_violations: 0,
            lemma311_violations: 0,
            eq34_violations: 0,
            equation_violations: 0,
            min_lemma35_slack: f64::INFINITY,
            min_cor36_slack: f64::INFINITY,
            min_lemma311_slack: f64::INFINITY,
        }
    }

    pub fn merge(&mut self, other: &VerifySummary) {
        self.triples += other.triples;
        self.rows += other.rows;
        self.violations += other.violations;
        self.lemma35_violations += other.lemma35_violations;
        self.cor36_violations += other.cor36_violations;
        self.lemma311_violations += other.lemma311_violations;
        self.eq34_violations += other.eq34_violations;
        self.equation_violations += other.equation_violations;
        self.min_lemma35_slack = self.min_lemma35_slack.min(other.min_lemma35_slack);
        self.min_cor36_slack = self.min_cor36_slack.min(other.min_cor36_slack);
        self.min_lemma311_slack = self.min_lemma311_slack.min(other.min_lemma311_slack);
    }
}

/// Fixed-capacity factor list; numbers below 2^32 have at most 9 distinct
/// prime factors.
#[derive(Clone, Copy)]
struct FactorBuf {
    len: usize,
    p: [u32; 12],
    e: [u32; 12],
}

impl FactorBuf {
    fn empty() -> Self {
        FactorBuf {
            len: 0,
            p: [0; 12],
            e: [0; 12],
        }
    }

    fn fill(&mut self, mut m: u32, table: &SpfTable) {
        self.len = 0;
        while m > 1 {
            let p = table.spf(m as usize);
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            self.p[self.len] = p;
            self.e[self.len] = e;
            self.len += 1;
        }
    }
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Fill `parts[0..n]` with the decomposition of the number behind `f`.
fn decompose_into(f: &FactorBuf, negative: bool, n: u32, parts: &mut [i64]) {
    for slot in parts[..n as usize].iter_mut() {
        *slot = 1;
    }
    for k in 0..f.len {
        let (p, e) = (f.p[k] as i64, f.e[k]);
        let q = e / n;
        let r = e % n;
        for _ in 0..q {
            parts[n as usize - 1] *= p;
        }
        if r > 0 {
            parts[r as usize - 1] *= p;
        }
    }
    if negative {
        parts[0] = -parts[0];
    }
}

/// `x_1 x_2^2 ... x_n^n` in `i128`.
#[allow(clippy::needless_range_loop)]
fn weighted_product(parts: &[i64], n: u32) -> i128 {
    let mut acc: i128 = 1;
    for i in 0..n as usize {
        let x = parts[i] as i128;
        for _ in 0..=i {
            acc *= x;
        }
    }
    acc
}

struct TripleCtx {
    a: u32,
    b: u32,
    s: u32,
    // merged primes of a, b and c = -(a+b); disjoint by pairwise coprimality
    plen: usize,
    primes: [(u32, u32, f64); 36],
    ln_s: f64,
    n_abc_ln: f64,
    n_e_ln: f64,
}

impl TripleCtx {
    fn build(a: u32, b: u32, s: u32, fa: &FactorBuf, fb: &FactorBuf, fs: &FactorBuf) -> Self {
        let mut primes = [(0u32, 0u32, 0f64); 36];
        let mut plen = 0usize;
        let mut n_abc_ln = 0.0f64;
        let mut n_e_ln = 0.0f64;
        for f in [fa, fb, fs] {
            for k in 0..f.len {
                let lnp = (f.p[k] as f64).ln();
                primes[plen] = (f.p[k], f.e[k], lnp);
                plen += 1;
                n_abc_ln += lnp;
                n_e_ln += f.e[k] as f64 * lnp;
            }
        }
        TripleCtx {
            a,
            b,
            s,
            plen,
            primes,
            ln_s: (s as f64).ln(),
            n_abc_ln,
            n_e_ln,
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn check(
        &self,
        fa: &FactorBuf,
        fb: &FactorBuf,
        fs: &FactorBuf,
        n: u32,
        fault: Fault,
        parts: &mut [[i64; MAX_DEPTH as usize]; 3],
    ) -> (VerifyRow, f64, f64) {
        let (a, b, s) = (self.a as i128, self.b as i128, self.s as i128);
        decompose_into(fa, false, n, &mut parts[0]);
        decompose_into(fb, false, n, &mut parts[1]);
        decompose_into(fs, true, n, &mut parts[2]);
        if fault == Fault::FlipSign {
            parts[0][0] = -parts[0][0];
        }

        // Reconstruction and the graph equations, in exact integers.
        let px = weighted_product(&parts[0], n);
        let py = weighted_product(&parts[1], n);
        let pz = weighted_product(&parts[2], n);
        let reconstruction_ok = px == a && py == b && pz == -s;
        let equations_ok =
            reconstruction_ok && px + py + pz == 0 && a + b - s == 0 && a * py == b * px;

        // Height of block 0 equals the direct height of [a:b:c]: both are
        // the maximum absolute coordinate, computed from each side.
        let block0_max = px.unsigned_abs().max(py.unsigned_abs()).max(pz.unsigned_abs());
        let direct_max = (self.a as u128).max(self.b as u128).max(self.s as u128);
        let eq34_ok = block0_max.max(direct_max) == self.s as u128 && direct_max == self.s as u128;

        // Per-prime counting inequality and the two constant-free bounds.
        let mut lemma35_ok = true;
        let mut cor36_lhs: u128 = 1;
        let mut n_d_ln = 0.0f64;
        for &(p, e, lnp) in &self.primes[..self.plen] {
            let t_p = e / n + u32::from(e % n != 0);
            if (n as u64) * (t_p as u64) > (n + e) as u64 {
                lemma35_ok = false;
            }
            for _ in 0..n * (t_p - 1) {
                cor36_lhs = cor36_lhs.saturating_mul(p as u128);
            }
            n_d_ln += t_p as f64 * lnp;
        }
        let max3 = (self.s as u128).pow(3);
        let cor36_ok = cor36_lhs <= max3;

        let mut block_prod: u128 = 1;
        let mut h_blocks = 0.0f64;
        for i in 0..n as usize {
            let m = parts[0][i]
                .unsigned_abs()
                .max(parts[1][i].unsigned_abs())
                .max(parts[2][i].unsigned_abs());
            block_prod = block_prod.saturating_mul(m as u128);
            h_blocks += (m as f64).ln();
        }
        let lemma311_ok = (self.s as u128).saturating_mul(block_prod) <= (self.s as u128).pow(4);

        let row = VerifyRow {
            a: self.a as i64,
            b: self.b as i64,
            c: -(self.s as i64),
            n,
            lemma35_ok,
            lemma35_slack: self.n_abc_ln + self.n_e_ln / n as f64 - n_d_ln,
            cor36_ok,
            lemma311_ok,
            eq34_ok,
            equations_ok,
        };
        let cor36_slack = self.n_abc_ln + 3.0 / n as f64 * self.ln_s - n_d_ln;
        let lemma311_slack = 3.0 * self.ln_s - h_blocks;
        (row, cor36_slack, lemma311_slack)
    }
}

/// Run the verification sweep over all coprime triples with
/// `lo <= a + b <= hi`, for each depth in `ns`, calling `sink` once per
/// `(triple, n)` row in deterministic order (by sum, then `a`, then `n`).
pub fn verify_range(
    lo: u32,
    hi: u32,
    ns: &[u32],
    table: &SpfTable,
    fault: Fault,
    sink: &mut dyn FnMut(&VerifyRow),
) -> VerifySummary {
    assert!(
        ns.iter().all(|&n| (1..=MAX_DEPTH).contains(&n)),
        "depths must lie in 1..={MAX_DEPTH}"
    );
    assert!(hi as usize <= table.bound(), "sieve bound too small for sweep");
    let mut summary = VerifySummary::new();
    let mut fa = FactorBuf::empty();
    let mut fb = FactorBuf::empty();
    let mut fs = FactorBuf::empty();
    let mut parts = [[0i64; MAX_DEPTH as usize]; 3];
    for s in lo.max(2)..=hi {
        fs.fill(s, table);
        for a in 1..=s / 2 {
            // gcd(a, b) == gcd(a, a + b)
            if gcd_u32(a, s) != 1 {
                continue;
            }
            let b = s - a;
            fa.fill(a, table);
            fb.fill(b, table);
            summary.triples += 1;
            let ctx = TripleCtx::build(a, b, s, &fa, &fb, &fs);
            for &n in ns {
                let (row, cor36_slack, lemma311_slack) =
                    ctx.check(&fa, &fb, &fs, n, fault, &mut parts);
                summary.rows += 1;
                if !row.lemma35_ok {
                    summary.lemma35_violations += 1;
                }
                if !row.cor36_ok {
                    summary.cor36_violations += 1;
                }
                if !row.lemma311_ok {
                    summary.lemma311_violations += 1;
                }
                if !row.eq34_ok {
                    summary.eq34_violations += 1;
                }
                if !row.equations_ok {
                    summary.equation_violations += 1;
                }
                if !row.all_ok() {
                    summary.violations += 1;
                }
                summary.min_lemma35_slack = summary.min_lemma35_slack.min(row.lemma35_slack);
                summary.min_cor36_slack = summary.min_cor36_slack.min(cor36_slack);
                summary.min_lemma311_slack = summary.min_lemma311_slack.min(lemma311_slack);
                sink(&row);
            }
        }
    }
    summary
}

/// Parallel summary-only verification sweep over `2 <= a + b <= bound`.
pub fn verify_sweep(bound: u32, ns: &[u32], table: &SpfTable, fault: Fault) -> VerifySummary {
    let chunks = sum_chunks(2, bound, 512);
    chunks
        .par_iter()
        .map(|&(lo, hi)| verify_range(lo, hi, ns, table, fault, &mut |_| {}))
        .reduce_with(|mut x, y| {
            x.merge(&y);
            x
        })
        .unwrap_or_else(VerifySummary::new)
}

/// Split `[lo, hi]` into consecutive chunks for ordered parallel merges.
pub fn sum_chunks(lo: u32, hi: u32, chunk: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut s = lo;
    while s <= hi {
        let e = s.saturating_add(chunk - 1).min(hi);
        out.push((s, e));
        s = e + 1;
    }
    out
}

/// One row of the power-decomposition sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub m: u32,
    pub h_abc: f64,
    pub h_uvw: f64,
    pub h_xyz: f64,
    pub n_abc: f64,
    pub chain1_ok: bool,
    pub chain2_ok: bool,
    pub eps_emp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSummary {
    pub triples: u64,
    pub rows: u64,
    pub violations: u64,
    pub chain1_violations: u64,
    pub chain2_violations: u64,
    pub eps_emp_min: f64,
    pub eps_emp_max: f64,
    pub eps_emp_sum: f64,
    pub eps_emp_nonpositive: u64,
}

impl PowerSummary {
    fn new() -> Self {
        PowerSummary {
            triples: 0,
            rows: 0,
            violations: 0,
            chain1_violations: 0,
            chain2_violations: 0,
            eps_emp_min: f64::INFINITY,
            eps_emp_max: f64::NEG_INFINITY,
            eps_emp_sum: 0.0,
            eps_emp_nonpositive: 0,
        }
    }

    pub fn merge(&mut self, other: &PowerSummary) {
        self.triples += other.triples;
        self.rows += other.rows;
        self.violations += other.violations;
        self.chain1_violations += other.chain1_violations;
        self.chain2_violations += other.chain2_violations;
        self.eps_emp_min = self.eps_emp_min.min(other.eps_emp_min);
        self.eps_emp_max = self.eps_emp_max.max(other.eps_emp_max);
        self.eps_emp_sum += other.eps_emp_sum;
        self.eps_emp_nonpositive += other.eps_emp_nonpositive;
    }

    pub fn eps_emp_mean(&self) -> f64 {
        if self.rows == 0 {
            0.0
        } else {
            self.eps_emp_sum / self.rows as f64
        }
    }
}

fn power_check(ctx: &TripleCtx, fa: &FactorBuf, fb: &FactorBuf, fs: &FactorBuf, m: u32) -> PowerRow {
    // Exponent-level split of each entry into (power-free part) * (m-th power).
    let mut max_uvw: u64 = 1;
    let mut max_xyz: u64 = 1;
    let mut rad: u128 = 1;
    for f in [fa, fb, fs] {
        let mut part_u: u64 = 1;
        let mut part_x: u64 = 1;
        for k in 0..f.len {
            let (p, e) = (f.p[k] as u64, f.e[k]);
            rad = rad.saturating_mul(p as u128);
            for _ in 0..e % m {
                part_u *= p;
            }
            for _ in 0..e / m {
                part_x *= p;
            }
        }
        max_uvw = max_uvw.max(part_u);
        max_xyz = max_xyz.max(part_x);
    }
    // max(|u|,|v|,|w|) <= rad(abc)^(m-1): lhs fits in u64, so a saturated
    // right-hand side always dominates and the comparison stays exact.
    let chain1_ok = (max_uvw as u128) <= rad.saturating_pow(m - 1);
    // max(|a|,|b|,|c|) <= max(|u|,|v|,|w|) * max(x,y,z)^m.
    let chain2_ok = (ctx.s as u128)
        <= (max_uvw as u128).saturating_mul((max_xyz as u128).saturating_pow(m));
    let h_uvw = (max_uvw as f64).ln();
    let h_xyz = (max_xyz as f64).ln();
    PowerRow {
        a: ctx.a as i64,
        b: ctx.b as i64,
        c: -(ctx.s as i64),
        m,
        h_abc: ctx.ln_s,
        h_uvw,
        h_xyz,
        n_abc: ctx.n_abc_ln,
        chain1_ok,
        chain2_ok,
        eps_emp: (h_xyz - h_uvw) / ctx.ln_s,
    }
}

/// Power-decomposition sweep over `lo <= a + b <= hi` for each exponent in
/// `ms`, with exact verification of both chain bounds.
pub fn power_range(
    lo: u32,
    hi: u32,
    ms: &[u32],
    table: &SpfTable,
    sink: &mut dyn FnMut(&PowerRow),
) -> PowerSummary {
    assert!(ms.iter().all(|&m| m >= 2), "power exponents must be >= 2");
    assert!(hi as usize <= table.bound(), "sieve bound too small for sweep");
    let mut summary = PowerSummary::new();
    let mut fa = FactorBuf::empty();
    let mut fb = FactorBuf::empty();
    let mut fs = FactorBuf::empty();
    for s in lo.max(2)..=hi {
        fs.fill(s, table);
        for a in 1..=s / 2 {
            if gcd_u32(a, s) != 1 {
                continue;
            }
            let b = s - a;
            fa.fill(a, table);
            fb.fill(b, table);
            summary.triples += 1;
            let ctx = TripleCtx::build(a, b, s, &fa, &fb, &fs);
            for &m in ms {
                let row = power_check(&ctx, &fa, &fb, &fs, m);
                summary.rows += 1;
                if !row.chain1_ok {
                    summary.chain1_violations += 1;
                }
                if !row.chain2_ok {
                    summary.chain2_violations += 1;
                }
                if !(row.chain1_ok && row.chain2_ok) {
                    summary.violations += 1;
                }
                summary.eps_emp_min = summary.eps_emp_min.min(row.eps_emp);
                summary.eps_emp_max = summary.eps_emp_max.max(row.eps_emp);
                summary.eps_emp_sum += row.eps_emp;
                if row.eps_emp <= 0.0 {
                    summary.eps_emp_nonpositive += 1;
                }
                sink(&row);
            }
        }
    }
    summary
}

/// Parallel summary-only power sweep over `2 <= a + b <= bound`.
pub fn power_sweep(bound: u32, ms: &[u32], table: &SpfTable) -> PowerSummary {
    let chunks = sum_chunks(2, bound, 512);
    chunks
        .par_iter()
        .map(|&(lo, hi)| power_range(lo, hi, ms, table, &mut |_| {}))
        .reduce_with(|mut x, y| {
            x.merge(&y);
            x
        })
        .unwrap_or_else(PowerSummary::new)
}
