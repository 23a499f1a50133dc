//! abc triples and their lifts to the graph varieties: the power
//! decomposition `a = x_1 x_2^2 ... x_n^n`, points with blocks
//! `[a:b:c], [x_i:y_i:z_i]` satisfying the graph equations, the torus
//! action on those points, and exact verification of the unconditional
//! height/counting inequalities along the chain.
//!
//! Every inequality is decided in exact integer (or per-prime exponent)
//! form first; the real-valued slacks are advisory output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{factorize, ArithError, Factorization, SpfTable};
use crate::heights::{
    self, counting_n, CoordinateDivisor, MultiProjPoint, ProjPoint,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TripleError {
    #[error("a + b + c must be zero (got {0} + {1} + {2})")]
    NotZeroSum(i64, i64, i64),
    #[error("abc must be nonzero")]
    ZeroEntry,
    #[error("gcd(a, b, c) must be 1")]
    NotCoprime,
    #[error("decomposition depth must be at least 1")]
    ZeroDepth,
    #[error("action scalars must be nonzero")]
    ZeroScalar,
    #[error("action needs {expected} scalars per row, got {got}")]
    ScalarCount { expected: usize, got: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A coprime integer triple with `a + b + c = 0`, stored in the canonical
/// order `0 < a <= b`, `c = -(a+b)`, with the original order kept as
/// metadata and the three factorizations cached.
#[derive(Debug, Clone)]
pub struct AbcTriple {
    a: i64,
    b: i64,
    c: i64,
    original: [i64; 3],
    fa: Factorization,
    fb: Factorization,
    fc: Factorization,
}

impl AbcTriple {
    pub fn new(a: i64, b: i64, c: i64) -> Result<AbcTriple, TripleError> {
        Self::build(a, b, c, None)
    }

    pub fn with_table(a: i64, b: i64, c: i64, table: &SpfTable) -> Result<AbcTriple, TripleError> {
        Self::build(a, b, c, Some(table))
    }

    fn build(a: i64, b: i64, c: i64, table: Option<&SpfTable>) -> Result<AbcTriple, TripleError> {
        if a.checked_add(b).and_then(|s| s.checked_add(c)) != Some(0) {
            return Err(TripleError::NotZeroSum(a, b, c));
        }
        if a == 0 || b == 0 || c == 0 {
            return Err(TripleError::ZeroEntry);
        }
        if gcd3(a, b, c) != 1 {
            return Err(TripleError::NotCoprime);
        }
        // The permutation-and-sign orbit of the triple contains exactly one
        // member with 0 < a <= b and c = -(a+b): the two smaller absolute
        // values taken positive, the largest negative.
        let mut abs = [a.unsigned_abs(), b.unsigned_abs(), c.unsigned_abs()];
        abs.sort_unstable();
        let (ca, cb, cc) = (abs[0] as i64, abs[1] as i64, -(abs[2] as i64));
        debug_assert_eq!(ca + cb + cc, 0);
        Ok(AbcTriple {
            a: ca,
            b: cb,
            c: cc,
            original: [a, b, c],
            fa: factorize(ca, table)?,
            fb: factorize(cb, table)?,
            fc: factorize(cc, table)?,
        })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// The triple as passed to the constructor, before canonicalization.
    pub fn original(&self) -> [i64; 3] {
        self.original
    }

    pub fn fa(&self) -> &Factorization {
        &self.fa
    }

    pub fn fb(&self) -> &Factorization {
        &self.fb
    }

    pub fn fc(&self) -> &Factorization {
        &self.fc
    }

    pub fn max_abs(&self) -> i64 {
        -self.c
    }

    /// `h([a:b:c]) = ln max(|a|, |b|, |c|)`.
    pub fn height(&self) -> f64 {
        (self.max_abs() as f64).ln()
    }

    /// `ln rad(abc)`: the sum of `ln p` over the primes of `abc`. The
    /// entries are pairwise coprime, so their prime sets are disjoint.
    pub fn log_radical_abc(&self) -> f64 {
        self.fa.log_radical() + self.fb.log_radical() + self.fc.log_radical()
    }

    pub fn radical_abc(&self) -> u128 {
        self.fa.radical() as u128 * self.fb.radical() as u128 * self.fc.radical() as u128
    }

    /// `ln |abc|`.
    pub fn log_abs_abc(&self) -> f64 {
        self.fa.abs_ln() + self.fb.abs_ln() + self.fc.abs_ln()
    }
}

fn gcd2(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    gcd2(gcd2(a, b), c)
}

/// Iterator over canonical triples with `a + b <= bound`, ordered by
/// `a + b` then by `a`, each exactly once.
pub struct TripleIter<'t> {
    bound: i64,
    table: &'t SpfTable,
    sum: i64,
    a: i64,
}

impl<'t> Iterator for TripleIter<'t> {
    type Item = AbcTriple;

    fn next(&mut self) -> Option<AbcTriple> {
        loop {
            if self.sum > self.bound {
                return None;
            }
            let (s, a) = (self.sum, self.a);
            if a > s / 2 {
                self.sum += 1;
                self.a = 1;
                continue;
            }
            self.a += 1;
            // gcd(a, s - a) == gcd(a, s)
            if gcd2(a, s) == 1 {
                return Some(
                    AbcTriple::with_table(a, s - a, -s, self.table)
                        .expect("enumerated triples are valid"),
                );
            }
        }
    }
}

pub fn enumerate_triples(bound: i64, table: &SpfTable) -> TripleIter<'_> {
    TripleIter {
        bound,
        table,
        sum: 2,
        a: 1,
    }
}

/// The parts `(x_1, ..., x_n)` of the power decomposition
/// `x_1 x_2^2 ... x_n^n = a`, with the per-prime exponent pattern
/// `ord_p(x_n) = floor(e/n)` and a single exponent 1 at index `e mod n`
/// (when nonzero), where `e = ord_p(a)`. The sign of `a` rides on `x_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerDecomposition {
    n: u32,
    parts: Vec<i64>,
}

impl PowerDecomposition {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    /// `x_1 x_2^2 ... x_n^n`, exactly.
    pub fn reconstruct(&self) -> i128 {
        let mut acc: i128 = 1;
        for (i, &x) in self.parts.iter().enumerate() {
            let mut pow: i128 = 1;
            for _ in 0..=i {
                pow *= x as i128;
            }
            acc *= pow;
        }
        acc
    }
}

pub fn decompose(a: i64, n: u32) -> Result<PowerDecomposition, TripleError> {
    if a == 0 {
        return Err(TripleError::ZeroEntry);
    }
    if n == 0 {
        return Err(TripleError::ZeroDepth);
    }
    let f = factorize(a, None)?;
    let parts = decompose_from_factorization(&f, n);
    Ok(PowerDecomposition { n, parts })
}

pub(crate) fn decompose_from_factorization(f: &Factorization, n: u32) -> Vec<i64> {
    let mut parts = vec![1i64; n as usize];
    for &(p, e) in f.factors() {
        let q = e / n;
        let r = e % n;
        for _ in 0..q {
            parts[n as usize - 1] *= p as i64;
        }
        if r > 0 {
            parts[r as usize - 1] *= p as i64;
        }
    }
    parts[0] *= f.sign();
    parts
}

/// A point with blocks `[a:b:c], [x_1:y_1:z_1], ..., [x_n:y_n:z_n]` on the
/// graph variety: block 0 is the image of the product map, the remaining
/// blocks hold the power decompositions of `a`, `b`, `c`.
#[derive(Debug, Clone)]
pub struct GammaPoint {
    a: i64,
    b: i64,
    c: i64,
    n: u32,
    blocks: MultiProjPoint,
}

impl GammaPoint {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn blocks(&self) -> &MultiProjPoint {
        &self.blocks
    }

    /// Construct directly from blocks (used by tests to build off-variety
    /// points); no equation check is performed.
    pub fn from_blocks(a: i64, b: i64, c: i64, n: u32, blocks: MultiProjPoint) -> GammaPoint {
        GammaPoint { a, b, c, n, blocks }
    }

    /// The divisor cut out by the product of all decomposition coordinates.
    pub fn divisor_d(&self) -> CoordinateDivisor {
        let mut d = CoordinateDivisor::new();
        for block in 1..=self.n as usize {
            for coord in 0..3 {
                d.add_term(block, coord, 1);
            }
        }
        d
    }
}

/// The divisor of `abc` on the line `a + b + c = 0`, as the coordinate
/// divisor of multiplicity 1 on each of the three coordinates.
pub fn divisor_e() -> CoordinateDivisor {
    CoordinateDivisor::on_coords(&[0, 1, 2])
}

/// Lift a triple to the graph variety at depth `n`, decomposing each of
/// `a`, `b`, `c` (in their original order).
pub fn build_gamma_point(t: &AbcTriple, n: u32) -> Result<GammaPoint, TripleError> {
    if n == 0 {
        return Err(TripleError::ZeroDepth);
    }
    let [a, b, c] = t.original();
    let xs = decompose(a, n)?;
    let ys = decompose(b, n)?;
    let zs = decompose(c, n)?;
    let mut blocks = Vec::with_capacity(n as usize + 1);
    blocks.push(ProjPoint::from_i64(&[a, b, c]).expect("abc nonzero"));
    for i in 0..n as usize {
        blocks.push(
            ProjPoint::from_i64(&[xs.parts()[i], ys.parts()[i], zs.parts()[i]])
                .expect("decomposition parts are nonzero"),
        );
    }
    Ok(GammaPoint {
        a,
        b,
        c,
        n,
        blocks: MultiProjPoint::new(blocks),
    })
}

/// Exact check of the three graph equations:
/// the products of the `x`, `y`, `z` columns sum to zero, the first block
/// sums to zero, and `a * prod(y_i^i) == b * prod(x_i^i)`.
pub fn check_gamma_equations(p: &GammaPoint) -> bool {
    let b0 = p.blocks.block(0);
    let (a, b, c) = (&b0.coords()[0], &b0.coords()[1], &b0.coords()[2]);
    let mut px = BigInt::one();
    let mut py = BigInt::one();
    let mut pz = BigInt::one();
    for i in 1..=p.n as usize {
        let blk = p.blocks.block(i);
        for _ in 0..i {
            px *= &blk.coords()[0];
            py *= &blk.coords()[1];
            pz *= &blk.coords()[2];
        }
    }
    (&px + &py + &pz).is_zero() && (a + b + c).is_zero() && a * &py == b * &px
}

/// Torus action: block 1 is scaled by `(prod u_i^-i, prod v_i^-i, 1)`,
/// block `i >= 2` by `(u_i, v_i, 1)`, block 0 is fixed. The result is
/// re-normalized blockwise to primitive coordinates; the graph equations
/// and the coordinate zero-pattern are preserved exactly.
pub fn apply_action(
    p: &GammaPoint,
    u: &[BigRational],
    v: &[BigRational],
) -> Result<GammaPoint, TripleError> {
    let expected = p.n.saturating_sub(1) as usize;
    if u.len() != expected || v.len() != expected {
        return Err(TripleError::ScalarCount {
            expected,
            got: u.len().max(v.len()),
        });
    }
    if u.iter().chain(v).any(|s| s.is_zero()) {
        return Err(TripleError::ZeroScalar);
    }
    let mut blocks = Vec::with_capacity(p.n as usize + 1);
    blocks.push(p.blocks.block(0).clone());

    // Scale factors for block 1: the inverse powers that cancel the
    // scaling of the later blocks inside the weighted products.
    let mut ux_inv = BigRational::one();
    let mut vy_inv = BigRational::one();
    for (idx, (ui, vi)) in u.iter().zip(v).enumerate() {
        let i = (idx + 2) as i32;
        ux_inv *= pow_rational(ui, -i);
        vy_inv *= pow_rational(vi, -i);
    }
    let b1 = p.blocks.block(1);
    let scaled1 = [
        BigRational::from(b1.coords()[0].clone()) * ux_inv,
        BigRational::from(b1.coords()[1].clone()) * vy_inv,
        BigRational::from(b1.coords()[2].clone()),
    ];
    blocks.push(heights::normalize_point(&scaled1).expect("block stays nonzero"));

    for i in 2..=p.n as usize {
        let blk = p.blocks.block(i);
        let scaled = [
            BigRational::from(blk.coords()[0].clone()) * &u[i - 2],
            BigRational::from(blk.coords()[1].clone()) * &v[i - 2],
            BigRational::from(blk.coords()[2].clone()),
        ];
        blocks.push(heights::normalize_point(&scaled).expect("block stays nonzero"));
    }
    Ok(GammaPoint {
        a: p.a,
        b: p.b,
        c: p.c,
        n: p.n,
        blocks: MultiProjPoint::new(blocks),
    })
}

fn pow_rational(x: &BigRational, e: i32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// `N(D, P)`: counting function of the coordinate divisor on the
/// decomposition blocks; equals `ln |prod x_i y_i z_i|`.
pub fn counting_n_d(p: &GammaPoint) -> f64 {
    counting_n(&p.blocks, &p.divisor_d()).expect("constructed points avoid the support")
}

/// `N(E, [a:b:c])`: counting function of the three-coordinate divisor on
/// the line; equals `ln |abc|`.
pub fn counting_n_e(t: &AbcTriple) -> f64 {
    let block = ProjPoint::from_i64(&[t.a(), t.b(), t.c()]).expect("abc nonzero");
    counting_n(&MultiProjPoint::single(block), &divisor_e())
        .expect("abc is nonzero, so the point avoids the support")
}

/// Per-prime exact form of the counting-function bound
/// `N(D, P) <= n(abc) + N(E)/n`: for every prime `p | abc` with
/// `e = ord_p(abc)` the integer inequality
/// `n * ord_p(prod x_i y_i z_i) <= n + e` must hold.
/// Returns the boolean together with the real slack
/// `n(abc) + N(E)/n - N(D) >= 0`.
pub fn verify_lemma35(t: &AbcTriple, n: u32) -> (bool, f64) {
    assert!(n >= 1);
    let mut ok = true;
    let mut n_d = 0.0f64;
    for f in [t.fa(), t.fb(), t.fc()] {
        for &(p, e) in f.factors() {
            let parts_ord = (e / n) + u32::from(e % n != 0);
            if n as u64 * parts_ord as u64 > (n + e) as u64 {
                ok = false;
            }
            n_d += parts_ord as f64 * (p as f64).ln();
        }
    }
    let slack = t.log_radical_abc() + t.log_abs_abc() / n as f64 - n_d;
    (ok, slack)
}

/// Constant-free form of the corollary bound
/// `N(D, P) <= n(abc) + (3/n) h([a:b:c])`, decided exactly:
/// the integer `prod_p p^(n (t_p - 1))` (with `t_p = ord_p` of the
/// coordinate product) must not exceed `max(|a|,|b|,|c|)^3`.
pub fn verify_cor36(t: &AbcTriple, n: u32) -> (bool, f64) {
    assert!(n >= 1);
    // prod p^(n*(t_p - 1)) <= prod p^(e_p) = |abc| <= 2^127, so u128 holds it.
    let mut lhs: u128 = 1;
    let mut n_d = 0.0f64;
    for f in [t.fa(), t.fb(), t.fc()] {
        for &(p, e) in f.factors() {
            let t_p = (e / n) + u32::from(e % n != 0);
            debug_assert!(t_p >= 1);
            for _ in 0..(n * (t_p - 1)) {
                lhs = lhs.saturating_mul(p as u128);
            }
            n_d += t_p as f64 * (p as f64).ln();
        }
    }
    let max = t.max_abs() as u128;
    let ok = lhs <= max * max * max;
    let slack = t.log_radical_abc() + 3.0 / n as f64 * t.height() - n_d;
    (ok, slack)
}

/// Constant-free form of the multidegree height bound
/// `h_(1,...,1)(P) <= 4 h([a:b:c])`, decided exactly as
/// `max(|a|,|b|,|c|) * prod_i max(|x_i|,|y_i|,|z_i|) <= max(|a|,|b|,|c|)^4`.
pub fn verify_lemma311(p: &GammaPoint) -> (bool, f64) {
    let b0_max = p.blocks.block(0).max_abs();
    let mut prod = b0_max.clone();
    let mut h_blocks = 0.0f64;
    for i in 1..=p.n as usize {
        let m = p.blocks.block(i).max_abs();
        h_blocks += bigint_ln(&m);
        prod *= &m;
    }
    let rhs = b0_max.pow(4u32);
    let ok = prod <= rhs;
    let h = bigint_ln(&b0_max);
    (ok, 4.0 * h - (h + h_blocks))
}

fn bigint_ln(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.abs().to_f64().unwrap().ln()
}

/// Exact equality of the height of block 0 with the height of `[a:b:c]`
/// computed directly: the projection to the line is the identity on the
/// first block, so the two integer maxima must coincide.
pub fn verify_eq34(p: &GammaPoint) -> bool {
    let (a, b, c) = p.triple();
    let direct = ProjPoint::from_i64(&[a, b, c]).expect("abc nonzero");
    p.blocks.block(0).max_abs() == direct.max_abs()
}

/// `h([a:b:c]) / n(abc)`: the standard quality reparametrization of the
/// abc inequality. Always defined: `|abc| >= 2` for a valid triple.
pub fn quality(t: &AbcTriple) -> f64 {
    t.height() / t.log_radical_abc()
}

/// `n(abc) - (1 - eps) h([a:b:c])`: the margin in the radical form of the
/// abc inequality.
pub fn abc_margin(t: &AbcTriple, eps: f64) -> f64 {
    t.log_radical_abc() - (1.0 - eps) * t.height()
}

/// The measurable lines of the conditional chain at depth `n`: the height,
/// the counting function `N(D, P)`, the unconditional bound
/// `n(abc) + (3/n) h`, and the residual whose sign the conjectural step
/// would control. No truth claim is attached to the residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm312Report {
    pub h: f64,
    pub n_d: f64,
    pub unconditional_bound: f64,
    pub conjectural_gap: f64,
}

pub fn thm312_report(t: &AbcTriple, n: u32, eps: f64) -> Thm312Report {
    assert!(n >= 1);
    assert!(eps > 0.0);
    let h = t.height();
    let p = build_gamma_point(t, n).expect("valid triple");
    let n_d = counting_n_d(&p);
    let unconditional_bound = t.log_radical_abc() + 3.0 / n as f64 * h;
    let conjectural_gap = h - unconditional_bound - eps * h;
    Thm312Report {
        h,
        n_d,
        unconditional_bound,
        conjectural_gap,
    }
}

/// All checks for one `(triple, n)` pair, with slacks.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub n: u32,
    pub lemma35_ok: bool,
    pub lemma35_slack: f64,
    pub cor36_ok: bool,
    pub cor36_slack: f64,
    pub lemma311_ok: bool,
    pub lemma311_slack: f64,
    pub eq34_ok: bool,
    pub equations_ok: bool,
    pub quality: f64,
    pub margin: f64,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.lemma35_ok && self.cor36_ok && self.lemma311_ok && self.eq34_ok && self.equations_ok
    }
}

/// Build the lift and run every exact check for one `(triple, n)` pair.
pub fn verify_triple(t: &AbcTriple, n: u32, eps: f64) -> VerificationReport {
    let p = build_gamma_point(t, n).expect("valid triple");
    let (lemma35_ok, lemma35_slack) = verify_lemma35(t, n);
    let (cor36_ok, cor36_slack) = verify_cor36(t, n);
    let (lemma311_ok, lemma311_slack) = verify_lemma311(&p);
    let eq34_ok = verify_eq34(&p);
    let equations_ok = check_gamma_equations(&p) && reconstruction_ok(&p);
    VerificationReport {
        a: t.a(),
        b: t.b(),
        c: t.c(),
        n,
        lemma35_ok,
        lemma35_slack,
        cor36_ok,
        cor36_slack,
        lemma311_ok,
        lemma311_slack,
        eq34_ok,
        equations_ok,
        quality: quality(t),
        margin: abc_margin(t, eps),
    }
}

fn reconstruction_ok(p: &GammaPoint) -> bool {
    let (a, b, c) = p.triple();
    let mut px = BigInt::one();
    let mut py = BigInt::one();
    let mut pz = BigInt::one();
    for i in 1..=p.n as usize {
        let blk = p.blocks.block(i);
        for _ in 0..i {
            px *= &blk.coords()[0];
            py *= &blk.coords()[1];
            pz *= &blk.coords()[2];
        }
    }
    // Blockwise sign normalization can flip a common sign; the weighted
    // products then recover the triple up to one shared unit.
    let direct = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    (px == direct.0 && py == direct.1 && pz == direct.2)
        || (px == -&direct.0 && py == -&direct.1 && pz == -&direct.2)
}
