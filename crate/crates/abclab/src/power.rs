//! Power-decomposition points: write each entry of a triple as an m-th
//! power times an m-th-power-free cofactor, `u x^m + v y^m + w z^m = 0`,
//! and verify the two unconditional height bounds along that chain in
//! exact integer arithmetic.

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::ArithError;
use crate::gamma::AbcTriple;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PowerError {
    #[error("power exponent must be at least 2 (got {0})")]
    ExponentTooSmall(u32),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The maximal-power split of a triple: `u x^m = a`, `v y^m = b`,
/// `w z^m = c` with `x, y, z` maximal, so `u, v, w` are m-th-power-free
/// and carry the signs.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPoint {
    a: i64,
    b: i64,
    c: i64,
    m: u32,
    pub u: i64,
    pub v: i64,
    pub w: i64,
    pub x: u64,
    pub y: u64,
    pub z: u64,
    rad_abc: u128,
    n_abc: f64,
}

impl PowerPoint {
    pub fn triple(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

pub fn build_power_point(t: &AbcTriple, m: u32) -> Result<PowerPoint, PowerError> {
    if m < 2 {
        return Err(PowerError::ExponentTooSmall(m));
    }
    let [a, b, c] = t.original();
    // The cached factorizations are of the canonical order; match each
    // original entry to its canonical counterpart by absolute value.
    let split = |value: i64| -> (i64, u64) {
        let f = [t.fa(), t.fb(), t.fc()]
            .into_iter()
            .find(|f| f.reconstruct().unsigned_abs() == value.unsigned_abs() as u128)
            .expect("each entry matches a cached factorization");
        let (ufree, x) = f.nth_power_split(m);
        let mag = i64::try_from(ufree.reconstruct().abs()).expect("divides the input");
        (value.signum() * mag, x)
    };
    let (u, x) = split(a);
    let (v, y) = split(b);
    let (w, z) = split(c);
    debug_assert_eq!(u as i128 * (x as i128).pow(m), a as i128);
    debug_assert_eq!(v as i128 * (y as i128).pow(m), b as i128);
    debug_assert_eq!(w as i128 * (z as i128).pow(m), c as i128);
    Ok(PowerPoint {
        a,
        b,
        c,
        m,
        u,
        v,
        w,
        x,
        y,
        z,
        rad_abc: t.radical_abc(),
        n_abc: t.log_radical_abc(),
    })
}

/// The measurable lines of the power-point chain, with both unconditional
/// steps decided in exact integers:
/// `max(|u|,|v|,|w|) <= rad(abc)^(m-1)` and
/// `max(|a|,|b|,|c|) <= max(|u|,|v|,|w|) * max(x,y,z)^m`.
/// `eps_emp` is the conditional quantity `(h_xyz - h_uvw) / h_abc`,
/// reported raw with no truth claim; `implied_exponent` is `h / n(abc)`
/// against the weak-abc target (24 for m = 5, 27 for m = 4).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerChainReport {
    pub h_abc: f64,
    pub h_uvw: f64,
    pub h_xyz: f64,
    pub n_abc: f64,
    pub chain1_ok: bool,
    pub chain2_ok: bool,
    pub eps_emp: f64,
    pub implied_exponent: f64,
    pub target_exponent: Option<u32>,
}

pub fn power_chain_report(pp: &PowerPoint) -> PowerChainReport {
    let max_abc = pp.a.unsigned_abs().max(pp.b.unsigned_abs()).max(pp.c.unsigned_abs());
    let max_uvw = pp.u.unsigned_abs().max(pp.v.unsigned_abs()).max(pp.w.unsigned_abs());
    let max_xyz = pp.x.max(pp.y).max(pp.z);

    let chain1_ok = BigInt::from(max_uvw) <= BigInt::from(pp.rad_abc).pow(pp.m - 1);
    let chain2_ok =
        BigInt::from(max_abc) <= BigInt::from(max_uvw) * BigInt::from(max_xyz).pow(pp.m);

    let h_abc = (max_abc as f64).ln();
    let h_uvw = (max_uvw as f64).ln();
    let h_xyz = (max_xyz as f64).ln();
    PowerChainReport {
        h_abc,
        h_uvw,
        h_xyz,
        n_abc: pp.n_abc,
        chain1_ok,
        chain2_ok,
        eps_emp: (h_xyz - h_uvw) / h_abc,
        implied_exponent: h_abc / pp.n_abc,
        target_exponent: match pp.m {
            5 => Some(24),
            4 => Some(27),
            _ => None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_point_examples() {
        let t = AbcTriple::new(32, -5, -27).unwrap();
        let pp = build_power_point(&t, 5).unwrap();
        assert_eq!((pp.u, pp.v, pp.w), (1, -5, -27));
        assert_eq!((pp.x, pp.y, pp.z), (2, 1, 1));

        let t = AbcTriple::new(1, 8, -9).unwrap();
        let pp = build_power_point(&t, 5).unwrap();
        assert_eq!((pp.u, pp.v, pp.w), (1, 8, -9));
        assert_eq!((pp.x, pp.y, pp.z), (1, 1, 1));

        let pp = build_power_point(&t, 2).unwrap();
        assert_eq!((pp.u, pp.v, pp.w), (1, 2, -1));
        assert_eq!((pp.x, pp.y, pp.z), (1, 2, 3));

        assert_eq!(
            build_power_point(&t, 1).unwrap_err(),
            PowerError::ExponentTooSmall(1)
        );
    }

    #[test]
    fn chain_report_example() {
        let t = AbcTriple::new(32, -5, -27).unwrap();
        let pp = build_power_point(&t, 5).unwrap();
        let r = power_chain_report(&pp);
        // 27 <= 30^4 and 32 <= 27 * 2^5.
        assert!(r.chain1_ok);
        assert!(r.chain2_ok);
        assert!(r.eps_emp < 0.0);
        assert_eq!(r.target_exponent, Some(24));
        assert!((r.eps_emp - (2f64.ln() - 27f64.ln()) / 32f64.ln()).abs() < 1e-12);

        let t = AbcTriple::new(1, 1, -2).unwrap();
        let pp = build_power_point(&t, 5).unwrap();
        let r = power_chain_report(&pp);
        assert!(r.chain1_ok && r.chain2_ok);
        assert_eq!((pp.x, pp.y, pp.z), (1, 1, 1));
    }

    #[test]
    fn power_free_parts_on_a_range() {
        for s in 2..=120i64 {
            for a in 1..=s / 2 {
                if num_integer::gcd(a, s) != 1 {
                    continue;
                }
                let t = AbcTriple::new(a, s - a, -s).unwrap();
                for m in [2u32, 4, 5] {
                    let pp = build_power_point(&t, m).unwrap();
                    for (val, u, x) in [(t.a(), pp.u, pp.x), (t.b(), pp.v, pp.y), (t.c(), pp.w, pp.z)] {
                        assert_eq!(u as i128 * (x as i128).pow(m), val as i128);
                        let fu = crate::arith::factorize(u, None).unwrap();
                        assert!(fu.factors().iter().all(|&(_, e)| e < m));
                    }
                    let r = power_chain_report(&pp);
                    assert!(r.chain1_ok && r.chain2_ok);
                }
            }
        }
    }
}
