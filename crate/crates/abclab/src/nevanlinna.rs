//! Value-distribution functionals for rational functions on the complex
//! plane: counting functions (plain and truncated), proximity by circle
//! quadrature, the characteristic `T = m + N`, logarithmic-derivative
//! proximity, ramification counting through the zeros of `f'/f`, and a
//! radius-indexed table with residual verdicts.
//!
//! Only rational maps are handled, so all zeros and poles are finite data
//! and every counting function is exact up to root-finder tolerance.
//! Counting uses the standard normalization
//! `N(r) = sum_(0 < |z_k| <= r) mult * ln(r / |z_k|) + mult_0 * ln r`,
//! where `mult_0` is the multiplicity of a zero at the origin.
//! Quadrature is the trapezoid rule on equally spaced nodes, spectrally
//! accurate for these periodic integrands once the circle stays clear of
//! zeros and poles; radii are nudged by a relative `1e-3` step when a root
//! lies within `1e-6 * r` of the circle.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NevError {
    #[error("denominator must not be identically zero")]
    ZeroDenominator,
    #[error("function must not be identically equal to the target")]
    IdenticalTarget,
    #[error("function must be non-constant")]
    ConstantFunction,
    #[error("radius must be positive (got {0})")]
    BadRadius(f64),
    #[error("need at least degree 1 to find roots")]
    DegreeZero,
    #[error("root finding did not converge (best residual {residual:e})")]
    NonConvergence { residual: f64 },
    #[error("circle radius {0} sits on a zero or pole even after perturbation")]
    SingularCircle(f64),
}

// ---------------------------------------------------------------------------
// Complex polynomial helpers (dense, ascending coefficients).

pub(crate) fn cp_trim(mut p: Vec<Complex64>) -> Vec<Complex64> {
    while p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    p
}

fn cp_deg(p: &[Complex64]) -> usize {
    p.len().saturating_sub(1)
}

fn cp_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn cp_derivative(p: &[Complex64]) -> Vec<Complex64> {
    if p.len() <= 1 {
        return vec![];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect()
}

fn cp_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn cp_add_scaled(acc: &mut Vec<Complex64>, p: &[Complex64], k: Complex64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Complex64::new(0.0, 0.0));
    }
    for (i, c) in p.iter().enumerate() {
        acc[i] += c * k;
    }
}

// ---------------------------------------------------------------------------
// Root finding.

/// Roots with multiplicities, provided by simultaneous iteration plus
/// cluster merging, together with the scaled residual of the worst root.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<(Complex64, u32)>,
    pub residual: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> u32 {
        self.roots.iter().map(|&(_, m)| m).sum()
    }
}

/// Durand-Kerner simultaneous iteration with multiplicity clustering.
///
/// Multiple roots converge linearly and land in a cluster of radius about
/// `eps^(1/m)`; merging uses a radius that dominates this for the moderate
/// degrees handled here (battery degree <= 10).
pub fn roots(p: &[Complex64], tol: f64) -> Result<RootSet, NevError> {
    let p = cp_trim(p.to_vec());
    let deg = cp_deg(&p);
    if p.is_empty() || deg == 0 {
        return Err(NevError::DegreeZero);
    }
    // Exact origin multiplicity from exactly-zero trailing coefficients.
    let origin_mult = p.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced: Vec<Complex64> = p[origin_mult..].to_vec();
    let lead = *reduced.last().unwrap();
    let monic: Vec<Complex64> = reduced.iter().map(|c| c / lead).collect();
    let d = cp_deg(&monic);

    let mut zs: Vec<Complex64> = Vec::with_capacity(d);
    if d > 0 {
        let radius = 1.0
            + monic
                .iter()
                .take(d)
                .map(|c| c.norm())
                .fold(0.0f64, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let mut w = Complex64::new(1.0, 0.0);
        for _ in 0..d {
            w *= seed;
            zs.push(w * radius / seed.norm());
        }
        let max_iter = 600;
        for _ in 0..max_iter {
            let mut moved = 0.0f64;
            for k in 0..d {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..d {
                    if j != k {
                        denom *= zs[k] - zs[j];
                    }
                }
                let step = cp_eval(&monic, zs[k]) / denom;
                zs[k] -= step;
                moved = moved.max(step.norm());
            }
            if moved < tol * 1e-3 {
                break;
            }
        }
    }

    // Cluster nearby approximations into multiple roots.
    let scale = 1.0 + zs.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let merge_radius = (tol.max(1e-14)).powf(1.0 / 3.0).max(1e-7) * scale;
    let mut clusters: Vec<(Complex64, u32)> = Vec::new();
    for &z in &zs {
        match clusters
            .iter_mut()
            .find(|(c, m)| (z - *c / (*m as f64)).norm() < merge_radius * (*m as f64 + 1.0))
        {
            Some((c, m)) => {
                *c += z;
                *m += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    let mut out: Vec<(Complex64, u32)> = clusters
        .into_iter()
        .map(|(sum, m)| (polish_root(&monic, sum / m as f64, m), m))
        .collect();
    if origin_mult > 0 {
        out.push((Complex64::new(0.0, 0.0), origin_mult as u32));
    }
    out.sort_by(|a, b| {
        (a.0.norm(), a.0.re, a.0.im)
            .partial_cmp(&(b.0.norm(), b.0.re, b.0.im))
            .unwrap()
    });

    // Residual: polynomial reconstructed from the clustered roots must
    // match, which certifies locations and multiplicities together.
    let mut recon = vec![Complex64::new(1.0, 0.0)];
    for &(z, m) in &out {
        for _ in 0..m {
            recon = cp_mul(&recon, &[-z, Complex64::new(1.0, 0.0)]);
        }
    }
    let coeff_scale = p.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let residual = recon
        .iter()
        .zip(p.iter().map(|c| c / lead))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max)
        * lead.norm()
        / coeff_scale;
    if residual > tol {
        return Err(NevError::NonConvergence { residual });
    }
    Ok(RootSet {
        roots: out,
        residual,
    })
}

/// Newton-polish a root of multiplicity `mult`, iterating on the
/// `(mult-1)`-th derivative where the root is simple; a cluster mean near
/// a multiple root only carries cube-root-of-epsilon accuracy, while the
/// polished value is limited by conditioning alone. A wrongly guessed
/// multiplicity drifts elsewhere and is caught by the reconstruction
/// residual.
fn polish_root(p: &[Complex64], z0: Complex64, mult: u32) -> Complex64 {
    let mut d = p.to_vec();
    for _ in 1..mult {
        d = cp_derivative(&d);
    }
    let dd = cp_derivative(&d);
    let mut z = z0;
    for _ in 0..40 {
        let dv = cp_eval(&dd, z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = cp_eval(&d, z) / dv;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

// ---------------------------------------------------------------------------
// Rational functions.

/// A rational function with complex floating coefficients, numerator and
/// denominator coprime by input contract.
#[derive(Debug, Clone, PartialEq)]
pub struct RatFuncC {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

/// A target value on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Finite(Complex64),
    Infinity,
}

impl Target {
    pub fn zero() -> Target {
        Target::Finite(Complex64::new(0.0, 0.0))
    }
}

pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

impl RatFuncC {
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<RatFuncC, NevError> {
        let num = cp_trim(num);
        let den = cp_trim(den);
        if den.is_empty() {
            return Err(NevError::ZeroDenominator);
        }
        Ok(RatFuncC { num, den })
    }

    pub fn from_real(num: &[f64], den: &[f64]) -> Result<RatFuncC, NevError> {
        RatFuncC::new(
            num.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            den.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn degree(&self) -> usize {
        cp_deg(&self.num).max(cp_deg(&self.den))
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0 || self.num.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        cp_eval(&self.num, z) / cp_eval(&self.den, z)
    }

    /// Numerator of `f - target` (for finite targets) or the denominator
    /// (for infinity): the polynomial whose roots are counted.
    fn target_poly(&self, target: Target) -> Result<Vec<Complex64>, NevError> {
        match target {
            Target::Infinity => Ok(self.den.clone()),
            Target::Finite(a) => {
                let mut p = self.num.clone();
                cp_add_scaled(&mut p, &self.den, -a);
                let p = cp_trim(p);
                if p.is_empty() {
                    return Err(NevError::IdenticalTarget);
                }
                Ok(p)
            }
        }
    }

    /// Roots of `f = target` in the plane, with multiplicities.
    pub fn preimages(&self, target: Target, tol: f64) -> Result<RootSet, NevError> {
        let p = self.target_poly(target)?;
        if cp_deg(&p) == 0 {
            return Ok(RootSet {
                roots: vec![],
                residual: 0.0,
            });
        }
        roots(&p, tol)
    }

    /// `f'/f` as an unreduced pair (numerator, denominator).
    fn log_derivative(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let dn = cp_derivative(&self.num);
        let dd = cp_derivative(&self.den);
        let mut g = cp_mul(&dn, &self.den);
        let nd = cp_mul(&self.num, &dd);
        cp_add_scaled(&mut g, &nd, Complex64::new(-1.0, 0.0));
        (cp_trim(g), cp_mul(&self.num, &self.den))
    }

    /// All zeros and poles, as (location, multiplicity, is_pole) triples
    /// with distinct locations.
    fn divisor_data(&self, tol: f64) -> Result<Vec<(Complex64, u32, bool)>, NevError> {
        let mut out = Vec::new();
        if cp_deg(&self.num) > 0 {
            for &(z, m) in &roots(&self.num, tol)?.roots {
                out.push((z, m, false));
            }
        }
        if cp_deg(&self.den) > 0 {
            for &(z, m) in &roots(&self.den, tol)?.roots {
                out.push((z, m, true));
            }
        }
        Ok(out)
    }
}

/// Counting function `N(r, target)`; multiplicities are capped at 1 when
/// `truncate` is set.
pub fn counting_n(
    f: &RatFuncC,
    target: Target,
    r: f64,
    truncate: bool,
) -> Result<f64, NevError> {
    if r <= 0.0 {
        return Err(NevError::BadRadius(r));
    }
    let pre = f.preimages(target, DEFAULT_ROOT_TOL)?;
    let mut acc = 0.0f64;
    for &(z, m) in &pre.roots {
        let mult = if truncate { 1 } else { m } as f64;
        let d = z.norm();
        if d == 0.0 {
            acc += mult * r.ln();
        } else if d <= r {
            acc += mult * (r / d).ln();
        }
    }
    Ok(acc)
}

/// Trapezoid average over the circle `|z| = r` of `log+ |1/(f - a)|`
/// (finite target) or `log+ |f|` (infinity). The radius is nudged upward
/// once if a zero or pole sits within `1e-6 * r` of the circle.
pub fn proximity_m(f: &RatFuncC, target: Target, r: f64, nodes: usize) -> Result<f64, NevError> {
    if r <= 0.0 {
        return Err(NevError::BadRadius(r));
    }
    let p = f.target_poly(target)?;
    let mut radius = r;
    let guard = |radius: f64| -> bool {
        let near = |q: &[Complex64]| {
            cp_deg(q) > 0
                && roots(q, DEFAULT_ROOT_TOL)
                    .map(|rs| {
                        rs.roots
                            .iter()
                            .any(|(z, _)| (z.norm() - radius).abs() < 1e-6 * radius)
                    })
                    .unwrap_or(false)
        };
        near(&p) || near(&f.den) || near(&f.num)
    };
    if guard(radius) {
        radius *= 1.0 + 1e-3;
        if guard(radius) {
            return Err(NevError::SingularCircle(r));
        }
    }
    let integrand = |z: Complex64| -> f64 {
        let v = match target {
            Target::Infinity => f.eval(z).norm(),
            Target::Finite(a) => 1.0 / (f.eval(z) - a).norm(),
        };
        v.ln().max(0.0)
    };
    Ok(circle_average(integrand, radius, nodes))
}

fn circle_average(mut g: impl FnMut(Complex64) -> f64, r: f64, nodes: usize) -> f64 {
    let n = nodes.max(8);
    let mut acc = 0.0f64;
    for k in 0..n {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        acc += g(Complex64::from_polar(r, theta));
    }
    acc / n as f64
}

/// Nevanlinna characteristic `T(r) = m(r, infinity) + N(r, infinity)`.
pub fn characteristic_t(f: &RatFuncC, r: f64, nodes: usize) -> Result<f64, NevError> {
    Ok(proximity_m(f, Target::Infinity, r, nodes)? + counting_n(f, Target::Infinity, r, false)?)
}

/// `T(r, a) = m(r, a) + N(r, a)`: the target-shifted characteristic whose
/// spread over targets the first main theorem bounds.
pub fn characteristic_t_at(
    f: &RatFuncC,
    target: Target,
    r: f64,
    nodes: usize,
) -> Result<f64, NevError> {
    Ok(proximity_m(f, target, r, nodes)? + counting_n(f, target, r, false)?)
}

/// Circle average of `log+ |f'/f|`: the logarithmic-derivative proximity,
/// which for rational `f` tends to zero as the radius grows.
pub fn log_derivative_proximity(f: &RatFuncC, r: f64, nodes: usize) -> Result<f64, NevError> {
    if f.is_constant() {
        return Err(NevError::ConstantFunction);
    }
    if r <= 0.0 {
        return Err(NevError::BadRadius(r));
    }
    let (g_num, g_den) = f.log_derivative();
    let integrand = |z: Complex64| -> f64 {
        let v = cp_eval(&g_num, z).norm() / cp_eval(&g_den, z).norm();
        v.ln().max(0.0)
    };
    Ok(circle_average(integrand, r, nodes))
}

/// Counting function of the zeros of `f'/f` (the ramification datum for
/// the divisor `[0] + [infinity]`): the logarithmic derivative is
/// rebuilt from the distinct zeros and poles so spurious common factors
/// never enter.
pub fn ramification_counting(f: &RatFuncC, r: f64) -> Result<f64, NevError> {
    if f.is_constant() {
        return Err(NevError::ConstantFunction);
    }
    if r <= 0.0 {
        return Err(NevError::BadRadius(r));
    }
    let data = f.divisor_data(DEFAULT_ROOT_TOL)?;
    if data.is_empty() {
        return Ok(0.0);
    }
    // f'/f = sum_k w_k / (z - rho_k); its zeros are the roots of
    // G = sum_k w_k prod_(j != k) (z - rho_j), coprime to the poles.
    let mut g: Vec<Complex64> = vec![];
    for k in 0..data.len() {
        let mut term = vec![Complex64::new(1.0, 0.0)];
        for (j, &(z, _, _)) in data.iter().enumerate() {
            if j != k {
                term = cp_mul(&term, &[-z, Complex64::new(1.0, 0.0)]);
            }
        }
        let w = data[k].1 as f64 * if data[k].2 { -1.0 } else { 1.0 };
        cp_add_scaled(&mut g, &term, Complex64::new(w, 0.0));
    }
    let g = cp_trim(g);
    if cp_deg(&g) == 0 || g.is_empty() {
        return Ok(0.0);
    }
    let zeros = roots(&g, 1e-7)?;
    let mut acc = 0.0f64;
    let origin_tol = 1e-9 * (1.0 + zeros.roots.iter().map(|(z, _)| z.norm()).fold(0.0, f64::max));
    for &(z, m) in &zeros.roots {
        let d = z.norm();
        if d <= origin_tol {
            acc += m as f64 * r.ln();
        } else if d <= r {
            acc += m as f64 * (r / d).ln();
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Tables and residual verdicts.

/// One row of the radius-indexed functional table.
#[derive(Debug, Clone, PartialEq)]
pub struct NevRow {
    pub r: f64,
    pub t: f64,
    pub m_inf: f64,
    pub n_inf: f64,
    pub n_zero: f64,
    pub n1_d: f64,
    pub n_ram: f64,
    pub m_logderiv: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NevTable {
    pub rows: Vec<NevRow>,
}

/// Thresholds for the residual verdicts. Radii below `asymptotic_radius`
/// are tabulated but not judged.
#[derive(Debug, Clone)]
pub struct ResidualConfig {
    pub nodes: usize,
    pub targets: Vec<Target>,
    pub fmt_bound: Option<f64>,
    pub trunc_ram_floor: f64,
    pub logderiv_max: f64,
    pub asymptotic_radius: f64,
    pub allowed_failure_fraction: f64,
}

impl Default for ResidualConfig {
    fn default() -> Self {
        ResidualConfig {
            nodes: 512,
            targets: vec![
                Target::zero(),
                Target::Finite(Complex64::new(1.0, 0.0)),
                Target::Finite(Complex64::new(-1.0, 0.0)),
                Target::Infinity,
            ],
            fmt_bound: None,
            trunc_ram_floor: -0.1,
            logderiv_max: 0.05,
            asymptotic_radius: 100.0,
            allowed_failure_fraction: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdicts {
    pub fmt_spread: f64,
    pub fmt_bound: f64,
    pub fmt_ok: bool,
    pub trunc_minus_ram_min: f64,
    pub trunc_ram_ok: bool,
    pub logderiv_max_seen: f64,
    pub logderiv_ok: bool,
}

impl Verdicts {
    pub fn all_ok(&self) -> bool {
        self.fmt_ok && self.trunc_ram_ok && self.logderiv_ok
    }
}

/// Build the functional table over the radii and judge the residuals:
/// bounded spread of `T(r, a)` across targets, the truncated-versus-
/// ramification floor, and smallness of the logarithmic-derivative
/// proximity. Rational maps have no exceptional set, so by default no
/// grid failures are tolerated.
pub fn check_residuals(
    f: &RatFuncC,
    radii: &[f64],
    cfg: &ResidualConfig,
) -> Result<(NevTable, Verdicts), NevError> {
    if f.is_constant() {
        return Err(NevError::ConstantFunction);
    }
    let mut rows = Vec::with_capacity(radii.len());
    let mut fmt_spread = 0.0f64;
    let mut trunc_minus_ram_min = f64::INFINITY;
    let mut logderiv_max_seen = 0.0f64;
    let mut judged = 0usize;
    let mut fmt_fail = 0usize;

    let coeff_scale = f
        .num
        .iter()
        .chain(f.den.iter())
        .map(|c| c.norm())
        .fold(0.0f64, f64::max);
    let fmt_bound = cfg.fmt_bound.unwrap_or(2.0 * (1.0 + coeff_scale).ln());

    for &r in radii {
        let m_inf = proximity_m(f, Target::Infinity, r, cfg.nodes)?;
        let n_inf = counting_n(f, Target::Infinity, r, false)?;
        let n_zero = counting_n(f, Target::zero(), r, false)?;
        let n1_d = counting_n(f, Target::zero(), r, true)?
            + counting_n(f, Target::Infinity, r, true)?;
        let n_ram = ramification_counting(f, r)?;
        let m_logderiv = log_derivative_proximity(f, r, cfg.nodes)?;
        rows.push(NevRow {
            r,
            t: m_inf + n_inf,
            m_inf,
            n_inf,
            n_zero,
            n1_d,
            n_ram,
            m_logderiv,
        });
        if r >= cfg.asymptotic_radius {
            judged += 1;
            let mut t_values = Vec::with_capacity(cfg.targets.len());
            for &a in &cfg.targets {
                match characteristic_t_at(f, a, r, cfg.nodes) {
                    Ok(t) => t_values.push(t),
                    Err(NevError::IdenticalTarget) => continue,
                    Err(e) => return Err(e),
                }
            }
            let spread = t_values
                .iter()
                .fold(f64::NEG_INFINITY, |m, &t| m.max(t))
                - t_values.iter().fold(f64::INFINITY, |m, &t| m.min(t));
            if spread > fmt_bound {
                fmt_fail += 1;
            }
            fmt_spread = fmt_spread.max(spread);
            trunc_minus_ram_min = trunc_minus_ram_min.min(n1_d - n_ram);
            logderiv_max_seen = logderiv_max_seen.max(m_logderiv);
        }
    }
    let allowed = (cfg.allowed_failure_fraction * judged as f64).floor() as usize;
    let verdicts = Verdicts {
        fmt_spread,
        fmt_bound,
        fmt_ok: fmt_fail <= allowed,
        trunc_minus_ram_min,
        trunc_ram_ok: trunc_minus_ram_min >= cfg.trunc_ram_floor,
        logderiv_max_seen,
        logderiv_ok: logderiv_max_seen <= cfg.logderiv_max,
    };
    Ok((NevTable { rows }, verdicts))
}

/// Geometric radius grid from `rmin` to `rmax` inclusive.
pub fn geometric_radii(rmin: f64, rmax: f64, points: usize) -> Vec<f64> {
    assert!(rmin > 0.0 && rmax >= rmin && points >= 1);
    if points == 1 {
        return vec![rmin];
    }
    let ratio = (rmax / rmin).powf(1.0 / (points - 1) as f64);
    (0..points).map(|k| rmin * ratio.powi(k as i32)).collect()
}

/// Least-squares slope of `T(r)` against `ln r`: the degree gauge.
pub fn t_slope(f: &RatFuncC, radii: &[f64], nodes: usize) -> Result<f64, NevError> {
    let mut xs = Vec::with_capacity(radii.len());
    let mut ys = Vec::with_capacity(radii.len());
    for &r in radii {
        xs.push(r.ln());
        ys.push(characteristic_t(f, r, nodes)?);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn f_z() -> RatFuncC {
        RatFuncC::from_real(&[0.0, 1.0], &[1.0]).unwrap()
    }

    fn f_z2_m1_over_z() -> RatFuncC {
        RatFuncC::from_real(&[-1.0, 0.0, 1.0], &[0.0, 1.0]).unwrap()
    }

    #[test]
    fn roots_simple() {
        let rs = roots(&[c(-1.0), c(0.0), c(1.0)], 1e-9).unwrap();
        assert_eq!(rs.total_multiplicity(), 2);
        let mut vals: Vec<f64> = rs.roots.iter().map(|(z, _)| z.re).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 1.0).abs() < 1e-9 && (vals[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn roots_double_at_origin() {
        let rs = roots(&[c(0.0), c(0.0), c(1.0)], 1e-9).unwrap();
        assert_eq!(rs.roots, vec![(Complex64::new(0.0, 0.0), 2)]);
    }

    #[test]
    fn roots_cubic_known_values() {
        // z^3 - 2z + 1 = (z - 1)(z^2 + z - 1); roots 1, (-1 +- sqrt 5)/2.
        let rs = roots(&[c(1.0), c(-2.0), c(0.0), c(1.0)], 1e-9).unwrap();
        let mut got: Vec<f64> = rs.roots.iter().map(|(z, _)| z.re).collect();
        got.sort_by(f64::total_cmp);
        let s5 = 5f64.sqrt();
        let expect = [(-1.0 - s5) / 2.0, (s5 - 1.0) / 2.0, 1.0];
        for (g, e) in got.iter().zip(expect) {
            assert!((g - e).abs() < 1e-10, "{g} vs {e}");
        }
        assert!(rs.roots.iter().all(|(z, _)| z.im.abs() < 1e-10));
    }

    #[test]
    fn roots_multiple_cluster() {
        // (z - 2)^3 (z + 1) = z^4 - 5 z^3 + 6 z^2 + 4 z - 8
        let p = [c(-8.0), c(4.0), c(6.0), c(-5.0), c(1.0)];
        let rs = roots(&p, 1e-6).unwrap();
        let mut mults: Vec<u32> = rs.roots.iter().map(|&(_, m)| m).collect();
        mults.sort_unstable();
        assert_eq!(mults, vec![1, 3]);
    }

    #[test]
    fn counting_examples() {
        let f = f_z();
        let e = std::f64::consts::E;
        assert!((counting_n(&f, Target::zero(), e, false).unwrap() - 1.0).abs() < 1e-12);

        let f = RatFuncC::from_real(&[-1.0, 0.0, 1.0], &[1.0]).unwrap();
        let n = counting_n(&f, Target::zero(), 2.0, false).unwrap();
        assert!((n - 2.0 * 2f64.ln()).abs() < 1e-9);
        let n1 = counting_n(&f, Target::zero(), 2.0, true).unwrap();
        assert!((n1 - n).abs() < 1e-9, "simple zeros: truncation is no-op");

        let f = RatFuncC::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        assert!((counting_n(&f, Target::zero(), e, true).unwrap() - 1.0).abs() < 1e-12);
        assert!((counting_n(&f, Target::zero(), e, false).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn proximity_examples() {
        let f = f_z();
        let m = proximity_m(&f, Target::Infinity, 10.0, 512).unwrap();
        assert!((m - 10f64.ln()).abs() < 1e-9);
        let m0 = proximity_m(&f, Target::zero(), 10.0, 512).unwrap();
        assert_eq!(m0, 0.0);
    }

    #[test]
    fn characteristic_examples() {
        let f = f_z();
        let e2 = std::f64::consts::E.powi(2);
        assert!((characteristic_t(&f, e2, 512).unwrap() - 2.0).abs() < 1e-9);

        // Cross-check m(infinity) against T - N for a degree-2 map.
        let f = f_z2_m1_over_z();
        let r = 100.0;
        let t = characteristic_t(&f, r, 1024).unwrap();
        let n = counting_n(&f, Target::Infinity, r, false).unwrap();
        let m = proximity_m(&f, Target::Infinity, r, 1024).unwrap();
        assert!((t - (m + n)).abs() < 1e-12);
        assert!((m - r.ln()).abs() < 0.01, "m grows like ln r for this map");
    }

    #[test]
    fn slope_matches_degree() {
        let radii = geometric_radii(1e2, 1e4, 9);
        for (f, deg) in [
            (f_z(), 1.0),
            (RatFuncC::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap(), 2.0),
            (f_z2_m1_over_z(), 2.0),
        ] {
            let slope = t_slope(&f, &radii, 256).unwrap();
            assert!((slope - deg).abs() / deg < 0.02, "slope {slope} vs {deg}");
        }
    }

    #[test]
    fn log_derivative_examples() {
        let f = f_z();
        assert_eq!(log_derivative_proximity(&f, 10.0, 256).unwrap(), 0.0);
        let f = RatFuncC::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        assert_eq!(log_derivative_proximity(&f, 10.0, 256).unwrap(), 0.0);
        let f = f_z2_m1_over_z();
        assert!(log_derivative_proximity(&f, 100.0, 512).unwrap() <= 0.05);
    }

    #[test]
    fn ramification_examples() {
        let f = f_z();
        assert_eq!(ramification_counting(&f, 10.0).unwrap(), 0.0);

        // f = z^2 + 1: f'/f = 2z/(z^2+1), one zero at the origin.
        let f = RatFuncC::from_real(&[1.0, 0.0, 1.0], &[1.0]).unwrap();
        let r = 50.0;
        assert!((ramification_counting(&f, r).unwrap() - r.ln()).abs() < 1e-9);

        // f = (z^2-1)/z: zeros of f'/f at +-i.
        let f = f_z2_m1_over_z();
        assert!((ramification_counting(&f, r).unwrap() - 2.0 * r.ln()).abs() < 1e-9);

        // f = z^2: f'/f = 2/z has no zeros.
        let f = RatFuncC::from_real(&[0.0, 0.0, 1.0], &[1.0]).unwrap();
        assert_eq!(ramification_counting(&f, r).unwrap(), 0.0);
    }

    #[test]
    fn jensen_identity_against_closed_form() {
        // Average of ln|f| over the circle vs ln|lead| + sum over zeros of
        // ln max(r, |root|) minus the same sum over poles.
        let f = f_z2_m1_over_z();
        for r in [2.0, 10.0, 100.0] {
            let quad = circle_average(|z| f.eval(z).norm().ln(), r, 4096);
            // zeros at +-1, pole at 0: 2 ln max(r, 1) - ln r.
            let closed = 2.0 * r.max(1.0).ln() - r.ln();
            assert!((quad - closed).abs() < 1e-6, "r={r}: {quad} vs {closed}");
        }
    }

    #[test]
    fn residual_table_smoke() {
        let f = f_z2_m1_over_z();
        let radii = geometric_radii(1e2, 1e4, 7);
        let (table, verdicts) = check_residuals(&f, &radii, &ResidualConfig::default()).unwrap();
        assert_eq!(table.rows.len(), 7);
        for w in table.rows.windows(2) {
            assert!(w[1].n_inf >= w[0].n_inf);
            assert!(w[1].n1_d >= w[0].n1_d);
            assert!(w[1].n_ram >= w[0].n_ram);
        }
        for row in &table.rows {
            let n_full = row.n_zero + row.n_inf;
            assert!(row.n1_d <= n_full + 1e-9);
        }
        assert!(verdicts.all_ok(), "{verdicts:?}");
    }

    #[test]
    fn errors_are_reported() {
        assert_eq!(
            RatFuncC::from_real(&[1.0], &[0.0]).unwrap_err(),
            NevError::ZeroDenominator
        );
        let f = f_z();
        assert!(matches!(
            counting_n(&f, Target::zero(), -1.0, false).unwrap_err(),
            NevError::BadRadius(_)
        ));
        let konst = RatFuncC::from_real(&[3.0], &[1.0]).unwrap();
        assert_eq!(
            ramification_counting(&konst, 10.0).unwrap_err(),
            NevError::ConstantFunction
        );
        assert_eq!(
            counting_n(&konst, Target::Finite(c(3.0)), 10.0, false).unwrap_err(),
            NevError::IdenticalTarget
        );
    }
}
