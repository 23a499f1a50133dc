//! Exact integer arithmetic: factorization, radicals, p-adic valuations,
//! and maximal power divisors.
//!
//! Everything here is deterministic and exact. Numbers at or below the
//! sieve bound are factored by smallest-prime-factor lookup; larger values
//! fall back to trial division, a deterministic Miller-Rabin test, and
//! Brent-cycle Pollard rho for the remaining composite cofactors. The
//! supported input range is `i64` / `u64`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("sieve bound must be at least 2 (got {0})")]
    BoundTooSmall(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("power exponent must be at least 2 (got {0})")]
    ExponentTooSmall(u32),
    #[error("value {0} exceeds the supported factorization range")]
    OutOfRange(String),
}

/// Signed prime-exponent form of a nonzero integer.
///
/// The sign is stored once, never distributed into the exponents, so
/// exponent queries are sign-blind. `reconstruct` returns the original
/// integer exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    sign: i8,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    fn new(sign: i8, mut factors: Vec<(u64, u32)>) -> Self {
        factors.sort_unstable_by_key(|&(p, _)| p);
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(p, e)| p >= 2 && e >= 1));
        Factorization { sign, factors }
    }

    pub fn sign(&self) -> i64 {
        self.sign as i64
    }

    /// Prime-exponent pairs in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// The integer this factorization encodes, exactly.
    pub fn reconstruct(&self) -> i128 {
        let mut acc: i128 = self.sign as i128;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                acc *= p as i128;
            }
        }
        acc
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    /// Natural log of the radical: the sum of `ln p` over distinct primes.
    pub fn log_radical(&self) -> f64 {
        self.factors.iter().map(|&(p, _)| (p as f64).ln()).sum()
    }

    /// Natural log of the absolute value: the sum of `e * ln p`.
    pub fn abs_ln(&self) -> f64 {
        self.factors
            .iter()
            .map(|&(p, e)| e as f64 * (p as f64).ln())
            .sum()
    }

    /// Split off the largest `e`-th power: returns the e-th-power-free part
    /// `u` (carrying the sign) and `x` with `u * x^e == reconstruct()`.
    pub fn nth_power_split(&self, e: u32) -> (Factorization, u64) {
        debug_assert!(e >= 2);
        let mut x: u64 = 1;
        let mut rest = Vec::new();
        for &(p, k) in &self.factors {
            let q = k / e;
            let r = k % e;
            for _ in 0..q {
                x *= p;
            }
            if r > 0 {
                rest.push((p, r));
            }
        }
        (Factorization::new(self.sign, rest), x)
    }
}

/// Smallest-prime-factor table for every integer `2 ..= bound`.
///
/// Memory use is `4 * (bound + 1)` bytes, so bounds much past `10^8` are
/// impractical; sweeps in this crate use bounds of at most a few million.
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn bound(&self) -> usize {
        self.spf.len() - 1
    }

    /// Smallest prime factor of `m`, for `2 <= m <= bound`.
    pub fn spf(&self, m: usize) -> u32 {
        self.spf[m]
    }

    pub fn is_prime(&self, m: usize) -> bool {
        m >= 2 && self.spf[m] as usize == m
    }

    /// Iterator over the primes up to the bound.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.bound()).filter(|&m| self.is_prime(m)).map(|m| m as u64)
    }
}

pub fn build_spf_sieve(bound: usize) -> Result<SpfTable, ArithError> {
    if bound < 2 {
        return Err(ArithError::BoundTooSmall(bound));
    }
    if bound > u32::MAX as usize - 1 {
        return Err(ArithError::OutOfRange(bound.to_string()));
    }
    let mut spf = vec![0u32; bound + 1];
    for m in (2..=bound).step_by(2) {
        spf[m] = 2;
    }
    let mut p = 3usize;
    while p * p <= bound {
        if spf[p] == 0 {
            for m in (p * p..=bound).step_by(2 * p) {
                if spf[m] == 0 {
                    spf[m] = p as u32;
                }
            }
        }
        p += 2;
    }
    for m in (3..=bound).step_by(2) {
        if spf[m] == 0 {
            spf[m] = m as u32;
        }
    }
    Ok(SpfTable { spf })
}

/// Deterministic Miller-Rabin for `u64`.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} decides
/// primality correctly for all 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Brent-cycle Pollard rho; returns a nontrivial factor of an odd composite.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 3 && !is_prime_u64(n) && n % 2 == 1);
    let mut c: u64 = 1;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x: u64 = 2;
        let mut y: u64 = 2;
        let mut d: u64 = 1;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 26 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn factor_u64_into(mut n: u64, table: Option<&SpfTable>, out: &mut Vec<(u64, u32)>) {
    debug_assert!(n >= 1);
    if let Some(t) = table {
        if n <= t.bound() as u64 {
            let mut m = n as usize;
            while m > 1 {
                let p = t.spf(m) as u64;
                let mut e = 0u32;
                while (m as u64).is_multiple_of(p) {
                    m /= p as usize;
                    e += 1;
                }
                out.push((p, e));
            }
            return;
        }
    }
    // Trial division up to 10^6 covers every composite below 10^12.
    let mut strip = |p: u64, n: &mut u64| {
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                *n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    };
    strip(2, &mut n);
    strip(3, &mut n);
    let mut p: u64 = 5;
    while p <= 1_000_000 && p * p <= n {
        strip(p, &mut n);
        strip(p + 2, &mut n);
        p += 6;
    }
    if n == 1 {
        return;
    }
    if n < 1_000_000_000_000 || is_prime_u64(n) {
        // After trial division past sqrt(n) the cofactor is prime.
        out.push((n, 1));
        return;
    }
    // Composite cofactor with no factor below 10^6: split recursively.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if is_prime_u64(m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
}

/// Factor a nonzero integer into its signed prime-exponent form.
pub fn factorize(m: i64, table: Option<&SpfTable>) -> Result<Factorization, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroInput);
    }
    let sign = if m < 0 { -1i8 } else { 1i8 };
    let mut factors = Vec::new();
    factor_u64_into(m.unsigned_abs(), table, &mut factors);
    Ok(Factorization::new(sign, factors))
}

/// Factor a positive integer given as `u64`.
pub fn factorize_u64(m: u64, table: Option<&SpfTable>) -> Result<Factorization, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroInput);
    }
    let mut factors = Vec::new();
    factor_u64_into(m, table, &mut factors);
    Ok(Factorization::new(1, factors))
}

/// Largest `e` with `p^e | m`.
pub fn ord_p(m: i64, p: u64) -> Result<u32, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroInput);
    }
    if !is_prime_u64(p) {
        return Err(ArithError::NotPrime(p));
    }
    let mut n = m.unsigned_abs();
    let mut e = 0u32;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// Product of the distinct primes dividing `m`; `radical(±1) == 1`.
pub fn radical(m: i64) -> Result<u64, ArithError> {
    Ok(factorize(m, None)?.radical())
}

/// `ln` of the radical; zero for units.
pub fn log_radical(m: i64) -> Result<f64, ArithError> {
    Ok(factorize(m, None)?.log_radical())
}

/// Write `m = u * x^e` with `x` maximal; `u` is e-th-power-free and carries
/// the sign of `m`.
pub fn largest_nth_power_divisor(m: i64, e: u32) -> Result<(i64, u64), ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroInput);
    }
    if e < 2 {
        return Err(ArithError::ExponentTooSmall(e));
    }
    let f = factorize(m, None)?;
    let (u, x) = f.nth_power_split(e);
    let u = i64::try_from(u.reconstruct()).map_err(|_| ArithError::OutOfRange(m.to_string()))?;
    Ok((u, x))
}

/// Largest `s` with `s^2 | m`.
pub fn largest_square_factor(m: i64) -> Result<u64, ArithError> {
    largest_nth_power_divisor(m, 2).map(|(_, x)| x)
}

/// Largest `s` with `s^2 | m`, for `u64` inputs (used on Pell solutions).
pub fn largest_square_factor_u64(m: u64) -> Result<u64, ArithError> {
    let f = factorize_u64(m, None)?;
    let (_, x) = f.nth_power_split(2);
    Ok(x)
}
