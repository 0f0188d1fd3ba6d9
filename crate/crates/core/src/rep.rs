//! The representation `T` of `Pol(C)_q` on `H = span {z^m v_0}`, the Fock
//! inner product, the spaces `H^2_{q,α}` and the quantization `f -> f̂`.

use crate::error::{Error, Result};
use crate::ncpoly::{NormalPoly, PolarFunction};
use crate::qspecial::{qpoch_real, Complex, QContext};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Truncated matrix `(l_{mn}(f))` of `T(f)`; column `n` is the image of
/// `z^n v_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    q: f64,
    m: DMatrix<Complex>,
}

// (q^{2n}; q^{-2})_k
fn down(q2: f64, n: usize, k: usize) -> f64 {
    (0..k)
        .map(|t| 1.0 - q2.powi(n as i32 - t as i32))
        .product()
}

impl RepMatrix {
    pub fn from_matrix(q: f64, m: DMatrix<Complex>) -> Self {
        RepMatrix { q, m }
    }

    /// `T(f)` from the action `z*^k z^n v_0 = (q^{2n}; q^{-2})_k z^{n-k} v_0`.
    pub fn from_normal(f: &NormalPoly, dim: usize) -> Self {
        let q2 = f.q() * f.q();
        let mut m = DMatrix::zeros(dim, dim);
        for ((j, k), c) in f.terms() {
            for n in k..dim {
                let r = n - k + j;
                if r < dim {
                    m[(r, n)] += c * down(q2, n, k);
                }
            }
        }
        RepMatrix { q: f.q(), m }
    }

    /// `T(f)` from polar samples: `T(z^p ψ)` has `(c + p, c)` entry
    /// `ψ(q^{2c})` and `T(ψ z*^p)` has `(r, r + p)` entry
    /// `ψ(q^{2r}) (q^{2(r+p)}; q^{-2})_p`.
    pub fn from_polar(f: &PolarFunction, dim: usize) -> Self {
        let q2 = f.ctx().q2();
        let m = DMatrix::from_fn(dim, dim, |r, c| {
            if r >= c {
                f.value_at((r - c) as i64, c as i64)
            } else {
                let p = c - r;
                f.value_at(-(p as i64), r as i64) * down(q2, c, p)
            }
        });
        RepMatrix { q: f.ctx().q, m }
    }

    /// Polar samples read back from the matrix entries.
    pub fn to_polar(&self, ctx: &QContext) -> Result<PolarFunction> {
        let q2 = ctx.q2();
        let dim = self.m.nrows();
        let nlev = ctx.radial_levels;
        let mut f = PolarFunction::zero(ctx);
        let top = ctx.angular_cutoff.min(dim.saturating_sub(1));
        for p in -(top as i64)..=(top as i64) {
            let samples: Vec<Complex> = (0..nlev)
                .map(|n| {
                    if p >= 0 {
                        let r = n + p as usize;
                        if r < dim && n < dim {
                            self.m[(r, n)]
                        } else {
                            Complex::default()
                        }
                    } else {
                        let k = (-p) as usize;
                        let c = n + k;
                        if c < dim {
                            self.m[(n, c)] / down(q2, c, k)
                        } else {
                            Complex::default()
                        }
                    }
                })
                .collect();
            if samples.iter().any(|s| *s != Complex::default()) {
                f.set_samples(p, samples)?;
            }
        }
        Ok(f)
    }

    /// Recovers the normal-ordered coefficients of a polynomial of total
    /// degree at most `degree` from the first columns of its matrix, by
    /// solving the triangular system `l_{n+p, n} = Σ_k a_{k+p, k} (q^{2n}; q^{-2})_k`.
    pub fn to_normal(&self, degree: usize) -> Result<NormalPoly> {
        let q2 = self.q * self.q;
        let dim = self.m.nrows();
        if dim <= degree {
            return Err(Error::Mismatch(format!(
                "dimension {dim} too small for degree {degree}"
            )));
        }
        let mut out = NormalPoly::zero(self.q);
        for p in -(degree as i64)..=(degree as i64) {
            let kmax = (degree as i64 - p.abs()) / 2;
            let mut a: Vec<Complex> = Vec::new();
            for n in 0..=kmax as usize {
                // column index c, row r with r - c = p
                let (r, c) = if p >= 0 {
                    (n + p as usize, n)
                } else {
                    (n, n + (-p) as usize)
                };
                let star = |k: usize| if p >= 0 { k } else { k + (-p) as usize };
                let mut rhs = self.m[(r, c)];
                for (k, ak) in a.iter().enumerate() {
                    rhs -= ak * down(q2, c, star(k));
                }
                let diag = down(q2, c, star(n));
                a.push(rhs / diag);
            }
            for (k, ak) in a.into_iter().enumerate() {
                let (j, kk) = if p >= 0 {
                    (k + p as usize, k)
                } else {
                    (k, k + (-p) as usize)
                };
                out.add_term(j, kk, ak);
            }
        }
        Ok(out)
    }

    pub fn matrix(&self) -> &DMatrix<Complex> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn mul(&self, other: &Self) -> Self {
        RepMatrix {
            q: self.q,
            m: &self.m * &other.m,
        }
    }

    /// Leading `k × k` block.
    pub fn principal(&self, k: usize) -> DMatrix<Complex> {
        self.m.view((0, 0), (k, k)).into_owned()
    }

    pub fn to_json(&self) -> serde_json::Value {
        matrix_json(&self.m)
    }

    pub fn to_csv(&self) -> String {
        matrix_csv(&self.m)
    }
}

/// Row-major JSON export with interleaved real and imaginary parts.
pub fn matrix_json(m: &DMatrix<Complex>) -> serde_json::Value {
    let mut data = Vec::with_capacity(2 * m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            data.push(m[(r, c)].re);
            data.push(m[(r, c)].im);
        }
    }
    serde_json::json!({ "rows": m.nrows(), "cols": m.ncols(), "data": data })
}

/// One CSV line per row, `re,im` pairs interleaved.
pub fn matrix_csv(m: &DMatrix<Complex>) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .flat_map(|c| [m[(r, c)].re.to_string(), m[(r, c)].im.to_string()])
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `(z^j v_0, z^m v_0) = δ_{jm} (q^2; q^2)_m`.
pub fn fock_inner(j: usize, m: usize, q: f64) -> f64 {
    if j != m {
        return 0.0;
    }
    qpoch_real(q * q, q * q, m)
}

/// `(u, w)` in `H` for coordinate vectors on the monomial basis.
pub fn fock_product(u: &[Complex], w: &[Complex], q: f64) -> Complex {
    u.iter()
        .zip(w)
        .enumerate()
        .map(|(n, (a, b))| a * b.conj() * fock_inner(n, n, q))
        .sum()
}

/// Smallest eigenvalue of `I - T(z) T(z*)` in an orthonormal basis of `H`.
pub fn contraction_defect(q: f64, dim: usize) -> f64 {
    let z = RepMatrix::from_normal(&NormalPoly::z(q), dim);
    let zs = RepMatrix::from_normal(&NormalPoly::z_star(q), dim);
    let prod = z.mul(&zs);
    let norms: Vec<f64> = (0..dim).map(|n| fock_inner(n, n, q).sqrt()).collect();
    let h = DMatrix::from_fn(dim, dim, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        (Complex::new(id, 0.0) - prod.m[(r, c)]) * norms[r] / norms[c]
    });
    let herm = (&h + h.adjoint()) * Complex::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `‖z^m‖_α = ((q^2; q^2)_m / (q^{4α+2}; q^2)_m)^{1/2}`.
pub fn bargmann_norm(alpha: f64, m: usize, q: f64) -> f64 {
    let q2 = q * q;
    (qpoch_real(q2, q2, m) / qpoch_real(q2.powf(2.0 * alpha + 1.0), q2, m)).sqrt()
}

/// Matrices of `ẑ`, `ẑ*` on the monomial basis of `H^2_{q,α}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BargmannOps {
    pub alpha: f64,
    pub q: f64,
    pub zhat: DMatrix<f64>,
    pub zhat_star: DMatrix<f64>,
}

impl BargmannOps {
    pub fn new(alpha: f64, q: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Mismatch(format!("α = {alpha} must be positive")));
        }
        let q2 = q * q;
        let q4a = q2.powf(2.0 * alpha);
        let mut zhat = DMatrix::zeros(dim, dim);
        let mut zhat_star = DMatrix::zeros(dim, dim);
        for m in 0..dim {
            if m + 1 < dim {
                zhat[(m + 1, m)] = 1.0;
            }
            if m >= 1 {
                let q2m = q2.powi(m as i32);
                zhat_star[(m - 1, m)] = (1.0 - q2m) / (1.0 - q4a * q2m);
            }
        }
        Ok(BargmannOps {
            alpha,
            q,
            zhat,
            zhat_star,
        })
    }

    pub fn dim(&self) -> usize {
        self.zhat.nrows()
    }

    /// Largest entry of
    /// `ẑ*ẑ - q^2 ẑẑ* - (1-q^2) - q^{4α}(1-q^2)/(1-q^{4α}) (1-ẑẑ*)(1-ẑ*ẑ)`
    /// on the leading `(dim - 1)` block.
    pub fn relation_residual(&self) -> f64 {
        let n = self.dim();
        let q2 = self.q * self.q;
        let q4a = q2.powf(2.0 * self.alpha);
        let id = DMatrix::<f64>::identity(n, n);
        let a = &self.zhat_star * &self.zhat;
        let b = &self.zhat * &self.zhat_star;
        let rhs = &b * q2 + &id * (1.0 - q2)
            + (&id - &b) * (&id - &a) * (q4a * (1.0 - q2) / (1.0 - q4a));
        let d = a - rhs;
        d.view((0, 0), (n - 1, n - 1))
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// `f̂ = Σ a_{ij} ẑ^i ẑ*^j`.
    pub fn quantize(&self, f: &NormalPoly) -> DMatrix<Complex> {
        let n = self.dim();
        let zc = self.zhat.map(|x| Complex::new(x, 0.0));
        let zsc = self.zhat_star.map(|x| Complex::new(x, 0.0));
        let mut out = DMatrix::zeros(n, n);
        for ((i, j), c) in f.terms() {
            let mut m = DMatrix::identity(n, n);
            for _ in 0..i {
                m = &zc * m;
            }
            let mut s = DMatrix::identity(n, n);
            for _ in 0..j {
                s = &zsc * s;
            }
            out += (m * s) * c;
        }
        out
    }

    /// Operator norm of the leading `k × k` block in the orthonormal basis
    /// `z^m / ‖z^m‖_α`.
    pub fn operator_norm(&self, m: &DMatrix<Complex>, k: usize) -> f64 {
        let norms: Vec<f64> = (0..k).map(|i| bargmann_norm(self.alpha, i, self.q)).collect();
        let o = DMatrix::from_fn(k, k, |r, c| m[(r, c)] * norms[r] / norms[c]);
        o.singular_values().iter().copied().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: f64 = 0.5;

    fn parse(s: &str) -> NormalPoly {
        NormalPoly::parse(s, &QContext::new(Q, 8, 8).unwrap()).unwrap()
    }

    #[test]
    fn generator_matrices() {
        let id = RepMatrix::from_normal(&parse("1"), 6);
        assert_eq!(id.matrix(), &DMatrix::identity(6, 6));
        let zs = RepMatrix::from_normal(&parse("z*"), 6);
        for m in 1..6 {
            assert!((zs.matrix()[(m - 1, m)].re - (1.0 - Q.powi(2 * m as i32))).abs() < 1e-15);
        }
        let zsz = RepMatrix::from_normal(&parse("z* z"), 6);
        let z = RepMatrix::from_normal(&parse("z"), 7);
        let zs7 = RepMatrix::from_normal(&parse("z*"), 7);
        let prod = zs7.mul(&z);
        for m in 0..6 {
            let expect = 1.0 - Q.powi(2 * m as i32 + 2);
            assert!((zsz.matrix()[(m, m)].re - expect).abs() < 1e-15);
            assert!((prod.matrix()[(m, m)].re - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn polar_and_normal_routes_agree() {
        let ctx = QContext::new(Q, 12, 6).unwrap();
        for s in ["z^2 z* + y", "z*^3 y^2 - 2 z", "(z + z*)^3"] {
            let p = parse(s);
            let a = RepMatrix::from_normal(&p, 10);
            let b = RepMatrix::from_polar(&PolarFunction::from_normal(&p, &ctx).unwrap(), 10);
            assert!((a.matrix() - b.matrix()).iter().all(|x| x.norm() < 1e-13), "{s}");
            assert!(a.to_normal(3.max(p.degree())).unwrap().max_abs_diff(&p) < 1e-10);
        }
    }

    #[test]
    fn fock_structure() {
        assert_eq!(fock_inner(0, 0, Q), 1.0);
        assert!((fock_inner(1, 1, Q) - 0.75).abs() < 1e-16);
        assert_eq!(fock_inner(1, 2, Q), 0.0);
        assert!(contraction_defect(Q, 20) > -1e-12);
    }

    #[test]
    fn bargmann_values() {
        assert_eq!(bargmann_norm(0.5, 0, Q), 1.0);
        assert!((bargmann_norm(0.5, 1, Q) - (0.75f64 / 0.9375).sqrt()).abs() < 1e-15);
        let ops = BargmannOps::new(1.5, Q, 12).unwrap();
        assert!(ops.relation_residual() < 1e-12);
        let big = BargmannOps::new(50.0, Q, 6).unwrap();
        for m in 1..6 {
            assert!((big.zhat_star[(m - 1, m)] - (1.0 - Q.powi(2 * m as i32))).abs() < 1e-15);
        }
        assert_eq!(ops.quantize(&parse("1")), DMatrix::identity(12, 12));
    }

    #[test]
    fn export_formats() {
        let m = RepMatrix::from_normal(&parse("z"), 2);
        let j = m.to_json();
        assert_eq!(j["data"].as_array().unwrap().len(), 8);
        assert_eq!(m.to_csv(), "0,0,0,0\n1,0,0,0\n");
    }
}
