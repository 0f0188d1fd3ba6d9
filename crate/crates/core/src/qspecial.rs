//! Scalar toolbox: q-Pochhammer symbols, the q-gamma function, basic
//! hypergeometric series and the Jackson integral over `[0, 1]`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub type Complex = num_complex::Complex64;

/// Default tail tolerance for infinite products and series.
pub const DEFAULT_TOL: f64 = 1e-17;

const MAX_PRODUCT_FACTORS: usize = 1_000_000;
const POLE_EPS: f64 = 1e-13;

/// Scalar precision selector. Only IEEE double precision is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Precision {
    #[default]
    Double,
}

/// Deformation parameter together with the truncation regime shared by all
/// conversions: `radial_levels` lattice points `y = q^{2n}` and angular
/// indices `|m| <= angular_cutoff`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QContext {
    pub q: f64,
    pub radial_levels: usize,
    pub angular_cutoff: usize,
    pub series_tol: f64,
    pub precision: Precision,
}

impl QContext {
    pub fn new(q: f64, radial_levels: usize, angular_cutoff: usize) -> Result<Self> {
        Self::with_tol(q, radial_levels, angular_cutoff, DEFAULT_TOL)
    }

    pub fn with_tol(
        q: f64,
        radial_levels: usize,
        angular_cutoff: usize,
        series_tol: f64,
    ) -> Result<Self> {
        let ctx = QContext {
            q,
            radial_levels,
            angular_cutoff,
            series_tol,
            precision: Precision::Double,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::InvalidContext(format!("q = {} is not in (0, 1)", self.q)));
        }
        if self.radial_levels < 2 {
            return Err(Error::InvalidContext(format!(
                "radial_levels = {} is below 2",
                self.radial_levels
            )));
        }
        if !(self.series_tol > 0.0) {
            return Err(Error::InvalidContext(format!(
                "series_tol = {} is not positive",
                self.series_tol
            )));
        }
        Ok(())
    }

    pub fn q2(&self) -> f64 {
        self.q * self.q
    }

    /// Lattice point `q^{2n}`.
    pub fn level(&self, n: usize) -> f64 {
        self.q2().powi(n as i32)
    }

    /// All lattice points `q^{2n}`, `n = 0..N`.
    pub fn levels(&self) -> Vec<f64> {
        (0..self.radial_levels).map(|n| self.level(n)).collect()
    }
}

/// `(t; q)_m`, the finite product of `1 - t q^j` over `j < m`.
pub fn qpoch_finite(t: Complex, q: f64, m: usize) -> Complex {
    let mut acc = Complex::new(1.0, 0.0);
    let mut qj = 1.0;
    for _ in 0..m {
        acc *= 1.0 - t * qj;
        qj *= q;
    }
    acc
}

/// Real version of [`qpoch_finite`]; the base may exceed one.
pub fn qpoch_real(t: f64, q: f64, m: usize) -> f64 {
    let mut acc = 1.0;
    let mut qj = 1.0;
    for _ in 0..m {
        acc *= 1.0 - t * qj;
        qj *= q;
    }
    acc
}

// Product of (1 - t q^j), j >= 0, with the smallest factor modulus seen.
fn infinite_product(t: Complex, q: f64, tol: f64) -> (Complex, f64) {
    let mut acc = Complex::new(1.0, 0.0);
    let mut min_factor = f64::INFINITY;
    let mut tq = t;
    for _ in 0..MAX_PRODUCT_FACTORS {
        if tq.norm() < tol {
            // first-order tail: prod_{i>=j} (1 - t q^i) = 1 - t q^j / (1 - q) + O(t^2)
            acc *= 1.0 - tq / (1.0 - q);
            return (acc, min_factor);
        }
        let f = 1.0 - tq;
        min_factor = min_factor.min(f.norm());
        acc *= f;
        tq *= q;
    }
    (acc, min_factor)
}

/// `(t; q)_∞`, truncated once `|t q^j| < tol` with a first-order tail
/// correction.
pub fn qpoch_infinite(t: Complex, q: f64, tol: f64) -> Complex {
    infinite_product(t, q, tol).0
}

/// Principal power `base^gamma` for positive real `base`.
pub fn real_pow(base: f64, gamma: Complex) -> Complex {
    (gamma * base.ln()).exp()
}

/// `(a; q2)_γ = (a; q2)_∞ / (a q2^γ; q2)_∞` for complex `γ`.
pub fn qpoch_complex_exp(a: Complex, q2: f64, gamma: Complex, tol: f64) -> Result<Complex> {
    let shifted = a * real_pow(q2, gamma);
    let (den, min_factor) = infinite_product(shifted, q2, tol);
    if min_factor < POLE_EPS {
        return Err(Error::Pole(format!(
            "(a q^(2γ); q^2)_∞ vanishes for a = {a}, γ = {gamma}"
        )));
    }
    let num = qpoch_infinite(a, q2, tol);
    Ok(num / den)
}

/// The q-gamma function `Γ_q(x) = (q;q)_∞ / (q^x;q)_∞ (1-q)^{1-x}`.
pub fn qgamma(x: Complex, q: f64, tol: f64) -> Result<Complex> {
    let qx = real_pow(q, x);
    let (den, min_factor) = infinite_product(qx, q, tol);
    if min_factor < POLE_EPS {
        return Err(Error::Pole(format!("Γ_q has a pole at x = {x}")));
    }
    let num = qpoch_infinite(Complex::new(q, 0.0), q, tol);
    Ok(num / den * real_pow(1.0 - q, 1.0 - x))
}

/// `[k]_Q = 1 + Q + ... + Q^{k-1}`.
pub fn q_number(k: usize, base: f64) -> f64 {
    let mut acc = 0.0;
    let mut p = 1.0;
    for _ in 0..k {
        acc += p;
        p *= base;
    }
    acc
}

/// Gaussian binomial `[n choose k]_Q`.
pub fn gaussian_binomial(n: usize, k: usize, base: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (1.0 - base.powi((n - i) as i32)) / (1.0 - base.powi((i + 1) as i32));
    }
    acc
}

// If a = q^{-k} for an integer k >= 0, return k.
fn terminating_index(a: Complex, q: f64) -> Option<usize> {
    if a.im.abs() > 1e-12 * a.norm().max(1.0) || a.re <= 0.0 {
        return None;
    }
    let k = -(a.re.ln() / q.ln());
    let kr = k.round();
    if kr >= 0.0 && (k - kr).abs() < 1e-9 {
        Some(kr as usize)
    } else {
        None
    }
}

/// The basic hypergeometric series
/// `rΦs[a; b; q; z] = Σ (a_1..a_r; q)_n / (b_1..b_s, q; q)_n ((-1)^n q^{n(n-1)/2})^{1+s-r} z^n`.
///
/// Terminating series (an upper parameter equal to `q^{-k}`) are summed
/// exactly through term `k`. Otherwise summation stops when a term drops below
/// `tol` relative to the partial sum. Once `q^n < 1e-2` the term ratio has
/// settled near its limit; three consecutive growing terms after that point
/// raise [`Error::Divergence`].
pub fn basic_hyper(
    upper: &[Complex],
    lower: &[Complex],
    q: f64,
    z: Complex,
    max_terms: usize,
    tol: f64,
) -> Result<Complex> {
    let stop_at = upper
        .iter()
        .filter_map(|&a| terminating_index(a, q))
        .min();
    let exponent = 1 + lower.len() as i64 - upper.len() as i64;
    let burn_in = (1e-2f64.ln() / q.ln()).ceil() as usize;
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    let mut qn = 1.0;
    let mut growth = 0usize;
    for n in 0..max_terms {
        if stop_at == Some(n) {
            return Ok(sum);
        }
        let mut ratio = z / (1.0 - qn * q);
        for &a in upper {
            ratio *= 1.0 - a * qn;
        }
        for &b in lower {
            let f = 1.0 - b * qn;
            if f.norm() < POLE_EPS {
                return Err(Error::ParameterPole { term: n + 1 });
            }
            ratio /= f;
        }
        if exponent != 0 {
            ratio *= (-qn).powi(exponent as i32);
        }
        let next = term * ratio;
        if stop_at.is_none() && n >= burn_in && next.norm() > term.norm() {
            growth += 1;
            if growth >= 3 {
                return Err(Error::Divergence(format!(
                    "terms grow for 3 consecutive steps at n = {}",
                    n + 1
                )));
            }
        } else {
            growth = 0;
        }
        sum += next;
        term = next;
        qn *= q;
        if stop_at.is_none() && n >= burn_in && term.norm() <= tol * sum.norm() {
            return Ok(sum);
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::Divergence(format!("partial sum overflowed at n = {}", n + 1)));
        }
    }
    match stop_at {
        Some(_) => Ok(sum),
        None => Err(Error::Divergence(format!(
            "no convergence within {max_terms} terms"
        ))),
    }
}

/// Jackson integral `∫_0^1 f(t) d_{q2}t = (1-q2) Σ_m f(q2^m) q2^m`.
pub fn jackson_integral_01<F>(f: F, q2: f64, tol: f64) -> Complex
where
    F: Fn(f64) -> Complex,
{
    let mut sum = Complex::new(0.0, 0.0);
    let mut t = 1.0;
    for _ in 0..MAX_PRODUCT_FACTORS {
        let term = f(t) * t;
        sum += term;
        if t < tol && term.norm() <= tol * sum.norm().max(tol) {
            break;
        }
        t *= q2;
    }
    sum * (1.0 - q2)
}
