//! Dense univariate polynomials over the rationals, exact.
//!
//! Coefficients are stored constant term first; the zero polynomial is the
//! empty vector and nonzero polynomials have a nonzero leading coefficient.
//! Gcds run through a primitive pseudo-remainder sequence over the
//! integers to keep coefficient growth in check, and the squarefree
//! decomposition is Yun's algorithm (characteristic zero).
//!
//! The text format, used by `Display` and [`Poly::parse`], is a
//! comma-separated list of rationals, constant term first: `-1,0,1` is
//! `t^2 - 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("cannot parse coefficient {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::new(vec![c])
    }

    /// The variable `t`.
    pub fn variable() -> Poly {
        Poly::from_i64(&[0, 1])
    }

    pub fn from_i64(coeffs: &[i64]) -> Poly {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip();
                Poly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        if r.len() < dd + 1 {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        let lead_inv = d.leading().unwrap().recip();
        for i in (dd..r.len()).rev() {
            let coef = &r[i] * &lead_inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = &r[idx] - &(dc * &coef);
            }
            q[i - dd] = coef;
        }
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Exact division; panics if the divisor does not divide.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divmod(d).expect("nonzero divisor");
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Monic gcd, through a primitive pseudo-remainder sequence over the
    /// integers.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = primitive_int(self);
        let mut b = primitive_int(other);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = make_primitive(r);
        }
        let rat = Poly::new(a.into_iter().map(BigRational::from).collect());
        rat.monic()
    }

    /// Yun's squarefree decomposition: pairwise-coprime monic squarefree
    /// `g_i` with `f = lead * prod g_i^i`. Constants decompose to nothing.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, u32)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        if self.is_constant() {
            return Ok(out);
        }
        let f = self.monic();
        let df = f.derivative();
        let g = f.gcd(&df);
        let mut b = f.div_exact(&g);
        let mut d = df.div_exact(&g) - b.derivative();
        let mut i = 1u32;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a);
            let c = d.div_exact(&a);
            d = c - b.derivative();
            i += 1;
        }
        Ok(out)
    }

    /// Parse the comma-separated coefficient format, constant term first.
    pub fn parse(s: &str) -> Result<Poly, PolyError> {
        let mut coeffs = Vec::new();
        for tok in s.split(',') {
            coeffs.push(parse_rational(tok)?);
        }
        Ok(Poly::new(coeffs))
    }
}

pub fn parse_rational(tok: &str) -> Result<BigRational, PolyError> {
    let clean: String = tok
        .trim()
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect();
    let err = || PolyError::Parse(tok.to_string());
    if let Some((n, d)) = clean.split_once('/') {
        let num = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(BigRational::new(num, den))
    } else {
        let num = BigInt::from_str(&clean).map_err(|_| err())?;
        Ok(BigRational::from(num))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

// Integer-polynomial helpers for the gcd.

fn primitive_int(f: &Poly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from(lcm.clone())).to_integer())
        .collect();
    make_primitive(ints)
}

fn make_primitive(mut f: Vec<BigInt>) -> Vec<BigInt> {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    if f.is_empty() {
        return f;
    }
    let mut content = BigInt::zero();
    for c in &f {
        content = content.gcd(c);
    }
    if f.last().unwrap().is_negative() {
        content = -content;
    }
    for c in f.iter_mut() {
        *c = &*c / &content;
    }
    f
}

/// Pseudo-remainder of integer polynomials: `lc(g)^(deg f - deg g + 1) * f mod g`.
fn pseudo_rem(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(!g.is_empty() && f.len() >= g.len());
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let lc = g.last().unwrap().clone();
    while r.len() > dg {
        let coef = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * &lc;
        }
        let shift = r.len() - 1 - dg;
        for (j, gc) in g.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(gc * &coef);
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c;
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}
