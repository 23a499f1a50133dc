//! The height machine over the rationals: places, normalized absolute
//! values, heights of points in products of projective spaces, Weil
//! functions for coordinate divisors, and the proximity/counting split of
//! the height with `S = {infinity}`.
//!
//! Heights are returned as natural logarithms (`f64`), but every identity
//! that must hold exactly is also available over [`LogLedger`]s: formal
//! integer combinations of `ln p` that add and compare without rounding.

use std::collections::BTreeMap;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{factorize_u64, is_prime_u64};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeightError {
    #[error("projective coordinates must not all be zero")]
    AllZero,
    #[error("rational input must be nonzero")]
    ZeroRational,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("point lies on the support of the divisor (block {block}, coordinate {coord})")]
    OnSupport { block: usize, coord: usize },
    #[error("divisor term (block {block}, coordinate {coord}) is out of range for the point")]
    BadIndex { block: usize, coord: usize },
    #[error("coordinate {0} exceeds the exact-ledger factorization range")]
    LedgerRange(String),
}

/// A place of the rationals: the archimedean place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Infinity,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Place, HeightError> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(HeightError::NotPrime(p))
        }
    }
}

/// Primitive integer coordinates of a projective point, sign-normalized so
/// the first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    /// Normalize integer coordinates: divide by the gcd and fix the sign.
    pub fn new(coords: Vec<BigInt>) -> Result<ProjPoint, HeightError> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(HeightError::AllZero);
        }
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(c);
        }
        let first = coords.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            g = -g;
        }
        Ok(ProjPoint {
            coords: coords.iter().map(|c| c / &g).collect(),
        })
    }

    pub fn from_i64(coords: &[i64]) -> Result<ProjPoint, HeightError> {
        ProjPoint::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Largest coordinate in absolute value (positive since the point is
    /// primitive).
    pub fn max_abs(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap()
    }
}

/// Clear denominators and normalize a rational coordinate vector.
pub fn normalize_point(coords: &[BigRational]) -> Result<ProjPoint, HeightError> {
    if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
        return Err(HeightError::AllZero);
    }
    let mut lcm = BigInt::from(1);
    for c in coords {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coords.iter().map(|c| (c * &lcm).to_integer()).collect();
    ProjPoint::new(ints)
}

/// A point of a product of projective spaces: one primitive block per factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiProjPoint {
    blocks: Vec<ProjPoint>,
}

impl MultiProjPoint {
    pub fn new(blocks: Vec<ProjPoint>) -> MultiProjPoint {
        assert!(!blocks.is_empty(), "a multiprojective point needs at least one block");
        MultiProjPoint { blocks }
    }

    pub fn single(block: ProjPoint) -> MultiProjPoint {
        MultiProjPoint { blocks: vec![block] }
    }

    pub fn blocks(&self) -> &[ProjPoint] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &ProjPoint {
        &self.blocks[i]
    }
}

/// An effective divisor cut out by coordinate functions: each term selects
/// one coordinate of one block, with a positive multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoordinateDivisor {
    terms: BTreeMap<(usize, usize), u32>,
}

impl CoordinateDivisor {
    pub fn new() -> CoordinateDivisor {
        CoordinateDivisor::default()
    }

    /// Coordinate divisor on a single-block point.
    pub fn on_coords(coords: &[usize]) -> CoordinateDivisor {
        let mut d = CoordinateDivisor::new();
        for &c in coords {
            d.add_term(0, c, 1);
        }
        d
    }

    pub fn add_term(&mut self, block: usize, coord: usize, mult: u32) {
        if mult == 0 {
            return;
        }
        *self.terms.entry((block, coord)).or_insert(0) += mult;
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.terms.iter().map(|(&k, &m)| (k, m))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn checked_coord<'a>(
        &self,
        p: &'a MultiProjPoint,
        block: usize,
        coord: usize,
    ) -> Result<&'a BigInt, HeightError> {
        let b = p
            .blocks
            .get(block)
            .ok_or(HeightError::BadIndex { block, coord })?;
        let c = b
            .coords
            .get(coord)
            .ok_or(HeightError::BadIndex { block, coord })?;
        if c.is_zero() {
            return Err(HeightError::OnSupport { block, coord });
        }
        Ok(c)
    }
}

impl Add for &CoordinateDivisor {
    type Output = CoordinateDivisor;

    fn add(self, rhs: &CoordinateDivisor) -> CoordinateDivisor {
        let mut out = self.clone();
        for ((b, c), m) in rhs.terms() {
            out.add_term(b, c, m);
        }
        out
    }
}

/// `||x||_v`: the absolute value at the archimedean place, `p^(-ord_p x)`
/// at a finite place. With this normalization the product over all places
/// is 1.
pub fn abs_value(x: &BigRational, v: &Place) -> Result<f64, HeightError> {
    if x.is_zero() {
        return Err(HeightError::ZeroRational);
    }
    match *v {
        Place::Infinity => Ok(x.abs().to_f64().unwrap()),
        Place::Finite(p) => {
            if !is_prime_u64(p) {
                return Err(HeightError::NotPrime(p));
            }
            let ord = ord_bigint(x.numer(), p) as i32 - ord_bigint(x.denom(), p) as i32;
            Ok((p as f64).powi(-ord))
        }
    }
}

fn ord_bigint(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut e = 0u32;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// A formal integer combination of logarithms of primes. Sums of heights,
/// proximity and counting functions of primitive points all live here, so
/// identities between them can be checked exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogLedger {
    terms: BTreeMap<u64, i64>,
}

impl LogLedger {
    pub fn zero() -> LogLedger {
        LogLedger::default()
    }

    /// Ledger of `ln |n|` via factorization. Requires `|n| < 2^64`.
    pub fn of_integer(n: &BigInt) -> Result<LogLedger, HeightError> {
        if n.is_zero() {
            return Err(HeightError::ZeroRational);
        }
        let m = n
            .abs()
            .to_u64()
            .ok_or_else(|| HeightError::LedgerRange(n.to_string()))?;
        let f = factorize_u64(m, None).expect("nonzero by construction");
        let mut terms = BTreeMap::new();
        for &(p, e) in f.factors() {
            terms.insert(p, e as i64);
        }
        Ok(LogLedger { terms })
    }

    pub fn add_assign(&mut self, other: &LogLedger) {
        for (&p, &e) in &other.terms {
            let v = self.terms.entry(p).or_insert(0);
            *v += e;
            if *v == 0 {
                self.terms.remove(&p);
            }
        }
    }

    pub fn sub_assign(&mut self, other: &LogLedger) {
        for (&p, &e) in &other.terms {
            let v = self.terms.entry(p).or_insert(0);
            *v -= e;
            if *v == 0 {
                self.terms.remove(&p);
            }
        }
    }

    pub fn scale(&mut self, k: i64) {
        if k == 0 {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= k;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&p, &e)| e as f64 * (p as f64).ln())
            .sum()
    }
}

/// Sum over all places of `ln ||x||_v`, which the product formula makes
/// zero. Computed by exponent bookkeeping: the archimedean ledger of
/// `ln |x|` cancels the finite-place ledger term by term, so the result is
/// an exact `0.0`, never a rounded float sum.
pub fn product_formula_residual(x: &BigRational) -> Result<f64, HeightError> {
    if x.is_zero() {
        return Err(HeightError::ZeroRational);
    }
    // Archimedean part: ln|x| as a prime-exponent ledger.
    let mut residual = LogLedger::of_integer(x.numer())?;
    residual.sub_assign(&LogLedger::of_integer(x.denom())?);
    // Finite part: each prime p dividing numerator or denominator
    // contributes ln ||x||_p = -ord_p(x) ln p, with ord_p recomputed by
    // repeated division rather than reusing the factorization above.
    let mut primes: Vec<u64> = residual.terms.keys().copied().collect();
    primes.sort_unstable();
    for p in primes {
        let ord = ord_bigint(x.numer(), p) as i64 - ord_bigint(x.denom(), p) as i64;
        let v = residual.terms.entry(p).or_insert(0);
        *v -= ord;
        if *v == 0 {
            residual.terms.remove(&p);
        }
    }
    if residual.is_zero() {
        Ok(0.0)
    } else {
        Ok(residual.to_f64())
    }
}

fn block_height(b: &ProjPoint) -> f64 {
    big_ln(&b.max_abs())
}

fn big_ln(n: &BigInt) -> f64 {
    // Exact for the desk-scale magnitudes used here; falls back to a
    // digit-split for values beyond f64 range.
    match n.abs().to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let s = n.abs().to_string();
            let head: f64 = s[..15.min(s.len())].parse().unwrap();
            head.ln() + (s.len().saturating_sub(15)) as f64 * 10f64.ln()
        }
    }
}

/// Height of a multiprojective point: the sum over blocks of
/// `ln max |coordinate|` (primitive blocks make the finite places vanish).
pub fn height(p: &MultiProjPoint) -> f64 {
    p.blocks.iter().map(block_height).sum()
}

pub fn height_ledger(p: &MultiProjPoint) -> Result<LogLedger, HeightError> {
    let mut acc = LogLedger::zero();
    for b in &p.blocks {
        acc.add_assign(&LogLedger::of_integer(&b.max_abs())?);
    }
    Ok(acc)
}

/// Local Weil function of a coordinate divisor at a place, in the
/// max-normalized form that is nonnegative at every place:
/// each term contributes `mult * (ln max_j ||x_j||_v - ln ||x_term||_v)`.
pub fn weil_lambda(
    p: &MultiProjPoint,
    d: &CoordinateDivisor,
    v: &Place,
) -> Result<f64, HeightError> {
    let mut acc = 0.0f64;
    for ((block, coord), mult) in d.terms() {
        let c = d.checked_coord(p, block, coord)?;
        match *v {
            Place::Infinity => {
                let max = p.block(block).max_abs();
                acc += mult as f64 * (big_ln(&max) - big_ln(&c.abs()));
            }
            Place::Finite(prime) => {
                if !is_prime_u64(prime) {
                    return Err(HeightError::NotPrime(prime));
                }
                // Primitive block: min_j ord_p = 0, so the max norm is 1
                // and the term reduces to mult * ord_p(coord) * ln p.
                let min_ord = p
                    .block(block)
                    .coords()
                    .iter()
                    .filter(|x| !x.is_zero())
                    .map(|x| ord_bigint(x, prime))
                    .min()
                    .unwrap();
                let ord = ord_bigint(c, prime);
                acc += mult as f64 * (ord - min_ord) as f64 * (prime as f64).ln();
            }
        }
    }
    Ok(acc)
}

/// Proximity function with `S = {infinity}`: the archimedean Weil function.
pub fn proximity_m(p: &MultiProjPoint, d: &CoordinateDivisor) -> Result<f64, HeightError> {
    weil_lambda(p, d, &Place::Infinity)
}

/// Counting function with `S = {infinity}`: the sum of the finite-place
/// Weil functions, which for primitive blocks collapses to
/// `sum of mult * ln |coordinate|`.
pub fn counting_n(p: &MultiProjPoint, d: &CoordinateDivisor) -> Result<f64, HeightError> {
    let mut acc = 0.0f64;
    for ((block, coord), mult) in d.terms() {
        let c = d.checked_coord(p, block, coord)?;
        acc += mult as f64 * big_ln(&c.abs());
    }
    Ok(acc)
}

/// Height of the point against the line sheaf of the divisor:
/// `sum of mult * (height of the referenced block)`.
pub fn divisor_height(p: &MultiProjPoint, d: &CoordinateDivisor) -> Result<f64, HeightError> {
    let mut acc = 0.0f64;
    for ((block, coord), mult) in d.terms() {
        d.checked_coord(p, block, coord)?;
        acc += mult as f64 * block_height(p.block(block));
    }
    Ok(acc)
}

/// Exact ledgers for the decomposition `m + N = h_{O(D)}`: returns
/// `(m, N, h)` as formal combinations of `ln p`. The three are computed by
/// separate routes; `m + N == h` holds as ledger equality, not merely to
/// float tolerance.
pub fn decomposition_ledgers(
    p: &MultiProjPoint,
    d: &CoordinateDivisor,
) -> Result<(LogLedger, LogLedger, LogLedger), HeightError> {
    let mut m = LogLedger::zero();
    let mut n = LogLedger::zero();
    let mut h = LogLedger::zero();
    for ((block, coord), mult) in d.terms() {
        let c = d.checked_coord(p, block, coord)?;
        let mut max_l = LogLedger::of_integer(&p.block(block).max_abs())?;
        let mut coord_l = LogLedger::of_integer(c)?;
        let mut h_term = max_l.clone();
        h_term.scale(mult as i64);
        h.add_assign(&h_term);

        max_l.sub_assign(&coord_l);
        max_l.scale(mult as i64);
        m.add_assign(&max_l);

        coord_l.scale(mult as i64);
        n.add_assign(&coord_l);
    }
    Ok((m, n, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalize_point_examples() {
        let p = normalize_point(&[rat(1, 2), rat(1, 3), rat(1, 1)]).unwrap();
        assert_eq!(p.coords(), &[BigInt::from(3), BigInt::from(2), BigInt::from(6)]);

        let p = normalize_point(&[rat(-2, 1), rat(-4, 1)]).unwrap();
        assert_eq!(p.coords(), &[BigInt::from(1), BigInt::from(2)]);

        let p = normalize_point(&[rat(0, 1), rat(-5, 1), rat(10, 1)]).unwrap();
        assert_eq!(p.coords(), &[BigInt::from(0), BigInt::from(1), BigInt::from(-2)]);

        assert_eq!(
            normalize_point(&[rat(0, 1), rat(0, 1)]),
            Err(HeightError::AllZero)
        );
    }

    #[test]
    fn abs_value_examples() {
        let six = rat(6, 1);
        assert_eq!(abs_value(&six, &Place::Infinity).unwrap(), 6.0);
        assert_eq!(abs_value(&six, &Place::finite(2).unwrap()).unwrap(), 0.5);
        // ord_2(3/4) = -2, so the 2-adic value is 4.
        assert_eq!(abs_value(&rat(3, 4), &Place::finite(2).unwrap()).unwrap(), 4.0);
        assert!(Place::finite(6).is_err());
        assert_eq!(
            abs_value(&rat(0, 1), &Place::Infinity),
            Err(HeightError::ZeroRational)
        );
    }

    #[test]
    fn product_formula_examples() {
        assert_eq!(product_formula_residual(&rat(6, 1)).unwrap(), 0.0);
        assert_eq!(product_formula_residual(&rat(-1, 1)).unwrap(), 0.0);
        assert_eq!(product_formula_residual(&rat(84, 5)).unwrap(), 0.0);
    }

    #[test]
    fn height_examples() {
        let p = MultiProjPoint::single(ProjPoint::from_i64(&[3, 4, -7]).unwrap());
        assert!((height(&p) - 7f64.ln()).abs() < 1e-14);

        let p = MultiProjPoint::single(ProjPoint::from_i64(&[1, 0]).unwrap());
        assert_eq!(height(&p), 0.0);

        let p = MultiProjPoint::new(vec![
            ProjPoint::from_i64(&[1, 8, -9]).unwrap(),
            ProjPoint::from_i64(&[1, 2, -1]).unwrap(),
            ProjPoint::from_i64(&[1, 2, 3]).unwrap(),
        ]);
        assert!((height(&p) - 54f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn weil_lambda_examples() {
        let p = MultiProjPoint::single(ProjPoint::from_i64(&[4, 9, 6]).unwrap());
        let d = CoordinateDivisor::on_coords(&[2]);
        let at_inf = weil_lambda(&p, &d, &Place::Infinity).unwrap();
        assert!((at_inf - (9f64 / 6.0).ln()).abs() < 1e-14);
        let at_2 = weil_lambda(&p, &d, &Place::finite(2).unwrap()).unwrap();
        assert!((at_2 - 2f64.ln()).abs() < 1e-14);
        let at_7 = weil_lambda(&p, &d, &Place::finite(7).unwrap()).unwrap();
        assert_eq!(at_7, 0.0);
    }

    #[test]
    fn weil_lambda_support_error() {
        let p = MultiProjPoint::single(ProjPoint::from_i64(&[0, 1]).unwrap());
        let d = CoordinateDivisor::on_coords(&[0]);
        assert_eq!(
            weil_lambda(&p, &d, &Place::Infinity),
            Err(HeightError::OnSupport { block: 0, coord: 0 })
        );
    }

    #[test]
    fn proximity_counting_examples() {
        let p = MultiProjPoint::single(ProjPoint::from_i64(&[4, 9, 6]).unwrap());
        let d = CoordinateDivisor::on_coords(&[2]);
        let n = counting_n(&p, &d).unwrap();
        let m = proximity_m(&p, &d).unwrap();
        assert!((n - 6f64.ln()).abs() < 1e-14);
        assert!((m - 1.5f64.ln()).abs() < 1e-14);
        assert!((m + n - 9f64.ln()).abs() < 1e-12);

        let p = MultiProjPoint::single(ProjPoint::from_i64(&[1, 1]).unwrap());
        let d = CoordinateDivisor::on_coords(&[0]);
        assert_eq!(counting_n(&p, &d).unwrap(), 0.0);
        assert_eq!(proximity_m(&p, &d).unwrap(), 0.0);

        let p = MultiProjPoint::single(ProjPoint::from_i64(&[1, 8, -9]).unwrap());
        let d = CoordinateDivisor::on_coords(&[0, 1, 2]);
        assert!((counting_n(&p, &d).unwrap() - 72f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn decomposition_is_exact_on_ledgers() {
        let p = MultiProjPoint::new(vec![
            ProjPoint::from_i64(&[4, 9, 6]).unwrap(),
            ProjPoint::from_i64(&[10, 3, -8]).unwrap(),
        ]);
        let mut d = CoordinateDivisor::new();
        d.add_term(0, 2, 1);
        d.add_term(1, 0, 2);
        d.add_term(1, 2, 1);
        let (m, n, h) = decomposition_ledgers(&p, &d).unwrap();
        let mut sum = m.clone();
        sum.add_assign(&n);
        assert_eq!(sum, h);
        assert!((m.to_f64() - proximity_m(&p, &d).unwrap()).abs() < 1e-12);
        assert!((n.to_f64() - counting_n(&p, &d).unwrap()).abs() < 1e-12);
        assert!((h.to_f64() - divisor_height(&p, &d).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn lambda_additive_in_divisor() {
        let p = MultiProjPoint::single(ProjPoint::from_i64(&[4, 9, 6]).unwrap());
        let d1 = CoordinateDivisor::on_coords(&[0]);
        let d2 = CoordinateDivisor::on_coords(&[2, 2]);
        let sum = &d1 + &d2;
        for v in [Place::Infinity, Place::finite(2).unwrap(), Place::finite(3).unwrap()] {
            let lhs = weil_lambda(&p, &sum, &v).unwrap();
            let rhs = weil_lambda(&p, &d1, &v).unwrap() + weil_lambda(&p, &d2, &v).unwrap();
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn lambda_nonnegative_and_finitely_supported() {
        let p = MultiProjPoint::single(ProjPoint::from_i64(&[12, 35, 66]).unwrap());
        let d = CoordinateDivisor::on_coords(&[0, 1, 2]);
        for p_test in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
            let v = Place::finite(p_test).unwrap();
            let l = weil_lambda(&p, &d, &v).unwrap();
            assert!(l >= 0.0);
            if ![2, 3, 5, 7, 11].contains(&p_test) {
                assert_eq!(l, 0.0, "lambda must vanish off the coordinate primes");
            }
        }
        assert!(weil_lambda(&p, &d, &Place::Infinity).unwrap() >= 0.0);
    }
}
