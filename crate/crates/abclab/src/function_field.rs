//! Polynomial-side checks on the projective line over the rationals:
//! divisors with support given by squarefree polynomials plus the place at
//! infinity, degree counts restricted to a place set, pullbacks of
//! divisors under rational maps, the polynomial abc inequality
//! (Mason-Stothers), and the toric instance of the degree bound
//! `deg f* K_X + deg_S f* D <= max(0, -2 + #S)`.
//!
//! Closed points are represented by monic squarefree rational polynomials
//! weighted by their degree. The stored components need not be
//! irreducible: every count used here goes through gcd degrees, which
//! match the geometric point counts for any pairwise-coprime squarefree
//! refinement.

use num_traits::One;
use thiserror::Error;

use crate::poly::{Poly, PolyError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FfError {
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("inputs must sum to zero")]
    SumNotZero,
    #[error("inputs must be pairwise coprime (offending pair: {0})")]
    NotCoprime(&'static str),
    #[error("inputs must not all be constant")]
    AllConstant,
    #[error("map must be non-constant")]
    ConstantMap,
    #[error("image of the map lies in the divisor support")]
    ImageInSupport,
    #[error("divisor component must be monic, squarefree, non-constant")]
    BadComponent,
    #[error("divisor components must be pairwise coprime")]
    OverlappingComponents,
    #[error("multiplicities must be nonzero")]
    ZeroMultiplicity,
    #[error("place-set polynomial must be squarefree")]
    NotSquarefree,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A divisor on the projective line: monic squarefree pairwise-coprime
/// finite components with integer multiplicities, plus a multiplicity at
/// infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorOnP1 {
    components: Vec<(Poly, i64)>,
    at_infinity: i64,
}

impl DivisorOnP1 {
    pub fn new(components: Vec<(Poly, i64)>, at_infinity: i64) -> Result<DivisorOnP1, FfError> {
        for (q, m) in &components {
            if *m == 0 {
                return Err(FfError::ZeroMultiplicity);
            }
            let deg = q.degree().ok_or(FfError::BadComponent)?;
            if deg == 0 || !q.leading().unwrap().is_one() {
                return Err(FfError::BadComponent);
            }
            if q.gcd(&q.derivative()).degree() != Some(0) {
                return Err(FfError::BadComponent);
            }
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                if components[i].0.gcd(&components[j].0).degree() != Some(0) {
                    return Err(FfError::OverlappingComponents);
                }
            }
        }
        Ok(DivisorOnP1 {
            components,
            at_infinity,
        })
    }

    /// The divisor `[0] + [infinity]`.
    pub fn zero_infinity() -> DivisorOnP1 {
        DivisorOnP1 {
            components: vec![(Poly::variable(), 1)],
            at_infinity: 1,
        }
    }

    pub fn components(&self) -> &[(Poly, i64)] {
        &self.components
    }

    pub fn at_infinity(&self) -> i64 {
        self.at_infinity
    }

    pub fn degree(&self) -> i64 {
        self.components
            .iter()
            .map(|(q, m)| m * q.degree().unwrap() as i64)
            .sum::<i64>()
            + self.at_infinity
    }

    /// Product of the finite components: the reduced finite support.
    pub fn reduced_finite(&self) -> Poly {
        let mut acc = Poly::one();
        for (q, _) in &self.components {
            acc = &acc * q;
        }
        acc
    }
}

/// A finite set of places of the line: the roots of a squarefree monic
/// polynomial, optionally together with infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceSetS {
    finite: Poly,
    include_infinity: bool,
}

impl PlaceSetS {
    pub fn new(finite: Poly, include_infinity: bool) -> Result<PlaceSetS, FfError> {
        if finite.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        if finite.gcd(&finite.derivative()).degree() != Some(0) {
            return Err(FfError::NotSquarefree);
        }
        Ok(PlaceSetS {
            finite: finite.monic(),
            include_infinity,
        })
    }

    pub fn empty() -> PlaceSetS {
        PlaceSetS {
            finite: Poly::one(),
            include_infinity: false,
        }
    }

    pub fn finite(&self) -> &Poly {
        &self.finite
    }

    pub fn include_infinity(&self) -> bool {
        self.include_infinity
    }

    /// Number of places in the set, counting a degree-d polynomial as d
    /// geometric points.
    pub fn count(&self) -> i64 {
        self.finite.degree().unwrap() as i64 + i64::from(self.include_infinity)
    }
}

/// A rational self-map of the line, in lowest terms with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMap {
    num: Poly,
    den: Poly,
}

impl RatMap {
    pub fn new(num: Poly, den: Poly) -> Result<RatMap, FfError> {
        if den.is_zero() || num.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let lead = den.leading().unwrap().recip();
        Ok(RatMap {
            num: num.scale(&lead),
            den: den.monic(),
        })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap().max(self.den.degree().unwrap())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }
}

/// Squarefree part: `f / gcd(f, f')`, made monic.
pub fn poly_radical(f: &Poly) -> Result<Poly, FfError> {
    if f.is_zero() {
        return Err(FfError::ZeroPolynomial);
    }
    let g = f.gcd(&f.derivative());
    Ok(f.div_exact(&g).monic())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MasonStothers {
    pub ok: bool,
    pub max_deg: usize,
    pub rad_deg: usize,
}

/// The polynomial abc inequality: for coprime `a + b + c = 0`, not all
/// constant, `max deg <= deg rad(abc) - 1`.
pub fn mason_stothers_check(a: &Poly, b: &Poly, c: &Poly) -> Result<MasonStothers, FfError> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(FfError::ZeroPolynomial);
    }
    if !(&(a + b) + c).is_zero() {
        return Err(FfError::SumNotZero);
    }
    if a.is_constant() && b.is_constant() && c.is_constant() {
        return Err(FfError::AllConstant);
    }
    if a.gcd(b).degree() != Some(0) {
        return Err(FfError::NotCoprime("(a, b)"));
    }
    if a.gcd(c).degree() != Some(0) {
        return Err(FfError::NotCoprime("(a, c)"));
    }
    if b.gcd(c).degree() != Some(0) {
        return Err(FfError::NotCoprime("(b, c)"));
    }
    let max_deg = a
        .degree()
        .unwrap()
        .max(b.degree().unwrap())
        .max(c.degree().unwrap());
    let abc = &(a * b) * c;
    let rad_deg = poly_radical(&abc)?.degree().unwrap();
    Ok(MasonStothers {
        ok: max_deg < rad_deg,
        max_deg,
        rad_deg,
    })
}

/// Degree of the part of `d` supported in `s`: gcd degrees against the
/// finite part, plus the infinity multiplicity when the set contains it.
pub fn deg_s(d: &DivisorOnP1, s: &PlaceSetS) -> i64 {
    let mut acc = 0i64;
    for (q, m) in d.components() {
        acc += m * q.gcd(s.finite()).degree().unwrap() as i64;
    }
    if s.include_infinity() {
        acc += d.at_infinity();
    }
    acc
}

/// Pullback `f^* D`: for each finite component `q` the squarefree
/// decomposition of `den^(deg q) q(num/den)` with ramification-weighted
/// multiplicities, the degree deficit landing on the source infinity; the
/// infinity component pulls back to the denominator's roots plus the
/// degree excess of the numerator.
pub fn pullback_divisor(f: &RatMap, d: &DivisorOnP1) -> Result<DivisorOnP1, FfError> {
    if f.is_constant() {
        return Err(FfError::ConstantMap);
    }
    let deg_f = f.degree() as i64;
    let mut components: Vec<(Poly, i64)> = Vec::new();
    let mut at_infinity = 0i64;
    for (q, mult) in d.components() {
        let dq = q.degree().unwrap();
        // Horner form of den^(deg q) * q(num/den).
        let mut acc = Poly::constant(q.coeffs()[dq].clone());
        for i in (0..dq).rev() {
            acc = &(&acc * f.num()) + &f.den().pow((dq - i) as u32).scale(&q.coeffs()[i]);
        }
        if acc.is_zero() {
            return Err(FfError::ImageInSupport);
        }
        let deg_acc = acc.degree().unwrap() as i64;
        for (g, m) in acc.squarefree_decomposition()? {
            components.push((g, mult * m as i64));
        }
        at_infinity += mult * (dq as i64 * deg_f - deg_acc);
    }
    if d.at_infinity() != 0 {
        let m_inf = d.at_infinity();
        if !f.den().is_constant() {
            for (g, m) in f.den().squarefree_decomposition()? {
                components.push((g, m_inf * m as i64));
            }
        }
        let excess = f.num().degree().unwrap() as i64 - f.den().degree().unwrap() as i64;
        if excess > 0 {
            at_infinity += m_inf * excess;
        }
    }
    let out = DivisorOnP1::new(components, at_infinity)?;
    debug_assert_eq!(out.degree(), deg_f * d.degree(), "degree functoriality");
    Ok(out)
}

/// Number of distinct points of `Supp f^* D` away from `s`, counting a
/// degree-d component as d points.
pub fn truncated_degree_outside_s(
    f: &RatMap,
    d: &DivisorOnP1,
    s: &PlaceSetS,
) -> Result<i64, FfError> {
    let pb = pullback_divisor(f, d)?;
    let red = pb.reduced_finite();
    let mut count = red.degree().unwrap() as i64 - red.gcd(s.finite()).degree().unwrap() as i64;
    if pb.at_infinity() != 0 && !s.include_infinity() {
        count += 1;
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Toric442 {
    /// `-2 deg f + deg_S f^*D <= max(0, -2 + #S)`.
    pub ok: bool,
    pub lhs: i64,
    pub rhs: i64,
    /// Companion bound on the truncated count: `>= -rhs`.
    pub truncated_ok: bool,
    pub truncated: i64,
}

/// The toric instance of the degree inequality, with `D = [0] + [infinity]`
/// fixed; the log canonical sheaf of that pair is trivial, so the
/// truncated bound reads `deg_(C \ S)(f^*D)_red >= -max(0, -2 + #S)`.
pub fn verify_442_toric(f: &RatMap, s: &PlaceSetS) -> Result<Toric442, FfError> {
    if f.is_constant() {
        return Err(FfError::ConstantMap);
    }
    let d = DivisorOnP1::zero_infinity();
    let pb = pullback_divisor(f, &d)?;
    let rhs = 0.max(-2 + s.count());
    let lhs = -2 * f.degree() as i64 + deg_s(&pb, s);
    let truncated = truncated_degree_outside_s(f, &d, s)?;
    Ok(Toric442 {
        ok: lhs <= rhs,
        lhs,
        rhs,
        truncated_ok: truncated >= -rhs,
        truncated,
    })
}
