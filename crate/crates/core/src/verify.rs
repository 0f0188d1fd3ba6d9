//! Verification suites: every check computes a residual, compares it with a
//! pinned bound and records the outcome in a [`Report`].

use crate::berezin::{self, exact, quantization_oracle};
use crate::error::{Error, Result};
use crate::forms::{dbar_polar, dz_left_derivative, dz_star_right_derivative, DiffForm};
use crate::fourier::{inversion_error, parseval_defect};
use crate::harmonic::sector::{interior_levels, SectorOperator};
use crate::harmonic::{
    box_apply, boundary_recover, c_function, dbar_solve, eigenvalue, poisson_extend, poisson_solve,
    poisson_solve_direct, reproduce_check, spherical_phi, weighted_residual,
};
use crate::ncpoly::{Measure, NormalPoly, PolarFunction};
use crate::qspecial::{basic_hyper, jackson_integral_01, qgamma, qpoch_finite, qpoch_infinite, real_pow, Complex, QContext};
use crate::quad::{boundary_integral_10, form_integral_11, stokes_check};
use crate::rep::BargmannOps;
use crate::BoundaryPoly;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Qspecial,
    Algebra,
    Stokes,
    Spectral,
    Green,
    Eigen,
    Fourier,
    Berezin,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Qspecial,
        Suite::Algebra,
        Suite::Stokes,
        Suite::Spectral,
        Suite::Green,
        Suite::Eigen,
        Suite::Fourier,
        Suite::Berezin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qspecial => "qspecial",
            Suite::Algebra => "algebra",
            Suite::Stokes => "stokes",
            Suite::Spectral => "spectral",
            Suite::Green => "green",
            Suite::Eigen => "eigen",
            Suite::Fourier => "fourier",
            Suite::Berezin => "berezin",
            Suite::All => "all",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::EACH.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::InvalidContext(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub q: f64,
    pub radial_levels: usize,
    pub angular_cutoff: usize,
    /// Truncation order of the star product.
    pub order: usize,
    /// Gauss-Legendre nodes on `[0, π/h]`.
    pub nodes: usize,
    /// Replaces every residual bound when set.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            q: 0.5,
            radial_levels: 64,
            angular_cutoff: 16,
            order: 4,
            nodes: 128,
            tol: None,
            seed: 0,
        }
    }
}

impl VerifyConfig {
    pub fn ctx(&self) -> Result<QContext> {
        QContext::new(self.q, self.radial_levels, self.angular_cutoff)
    }

    fn bound(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// What identity the check exercises.
    pub paper_ref: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    pub fn at_most(id: &str, what: &str, value: f64, bound: f64) -> Self {
        Check {
            id: id.into(),
            paper_ref: what.into(),
            value,
            bound,
            relation: Relation::AtMost,
            pass: value <= bound,
            note: None,
        }
    }

    pub fn at_least(id: &str, what: &str, value: f64, bound: f64) -> Self {
        Check {
            relation: Relation::AtLeast,
            pass: value >= bound,
            ..Self::at_most(id, what, value, bound)
        }
    }

    fn from_result(id: &str, what: &str, value: Result<f64>, bound: f64) -> Self {
        match value {
            Ok(v) => Self::at_most(id, what, v, bound),
            Err(e) => Self::failed(id, what, bound, e),
        }
    }

    fn failed(id: &str, what: &str, bound: f64, e: Error) -> Self {
        Check {
            pass: false,
            value: f64::NAN,
            note: Some(e.to_string()),
            ..Self::at_most(id, what, 0.0, bound)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub tests: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.tests.iter().all(|t| t.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: VerifyConfig,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn checks(&self) -> impl Iterator<Item = (&str, &Check)> {
        self.suites.iter().flat_map(|s| s.tests.iter().map(move |t| (s.name.as_str(), t)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// One row per check: `suite,id,paper_ref,value,relation,bound,pass`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidContext(e.to_string());
        w.write_record(["suite", "id", "paper_ref", "value", "relation", "bound", "pass"]).map_err(io)?;
        for (suite, c) in self.checks() {
            let rel = match c.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            };
            w.write_record([
                suite,
                &c.id,
                &c.paper_ref,
                &format!("{:e}", c.value),
                rel,
                &format!("{:e}", c.bound),
                if c.pass { "true" } else { "false" },
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidContext(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidContext(e.to_string()))
    }
}

/// Runs `suite` (all eight for [`Suite::All`], one thread each).
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    let ctx = cfg.ctx()?;
    let run_one = |s: Suite| {
        let tests = match s {
            Suite::Qspecial => qspecial_checks(cfg),
            Suite::Algebra => algebra_checks(cfg, &ctx),
            Suite::Stokes => stokes_checks(cfg, &ctx),
            Suite::Spectral => spectral_checks(cfg, &ctx),
            Suite::Green => green_checks(cfg, &ctx),
            Suite::Eigen => eigen_checks(cfg, &ctx),
            Suite::Fourier => fourier_checks(cfg, &ctx),
            Suite::Berezin => berezin_checks(cfg),
            Suite::All => unreachable!("expanded above"),
        };
        SuiteReport {
            name: s.name().into(),
            tests,
        }
    };
    let suites = std::thread::scope(|scope| {
        let handles: Vec<_> = suite.expand().into_iter().map(|s| scope.spawn(move || run_one(s))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    Ok(Report {
        config: cfg.clone(),
        suites,
    })
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

// Largest value of fallible samples; the first error wins.
fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut m: f64 = 0.0;
    for v in it {
        let v = v?;
        if v.is_nan() {
            return Ok(f64::NAN);
        }
        m = m.max(v);
    }
    Ok(m)
}

pub const QSPECIAL_TOL: f64 = 1e-10;

fn qspecial_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let b = cfg.bound(QSPECIAL_TOL);
    let q = cfg.q * cfg.q;
    let tol = 1e-17;
    let params = [c(0.3, 0.0), c(-0.7, 0.0), c(0.5, 0.4), c(2.0, 0.0)];
    let args = [c(0.2, 0.0), c(-0.5, 0.0), c(0.0, 0.6), c(0.35, -0.3)];

    let binomial = worst(params.iter().flat_map(|&a| {
        args.iter().map(move |&x| {
            let lhs = basic_hyper(&[a], &[], q, x, 2000, tol)?;
            Ok(rel(lhs, qpoch_infinite(a * x, q, tol) / qpoch_infinite(x, q, tol)))
        })
    }));
    let terminating = worst((0..8).flat_map(|n| {
        args.iter().map(move |&x| {
            let a = c(q.powi(-n), 0.0);
            let lhs = basic_hyper(&[a], &[], q, x, 100, tol)?;
            Ok(rel(lhs, qpoch_finite(a * x, q, n as usize)))
        })
    }));
    let beta = worst((1..=5usize).flat_map(|al| {
        [c(0.5, 0.0), c(1.0, 0.0), c(2.5, 0.0), c(1.0, 0.5)].into_iter().map(move |be| {
            let lhs = jackson_integral_01(|t| real_pow(t, be - 1.0) * qpoch_finite(c(t * q, 0.0), q, al - 1), q, tol);
            let a = c(al as f64, 0.0);
            let rhs = qgamma(be, q, tol)? * qgamma(a, q, tol)? / qgamma(a + be, q, tol)?;
            Ok(rel(lhs, rhs))
        })
    }));
    let grid = [(c(0.7, 0.2), c(0.45, 0.1), c(1.3, -0.4)), (c(0.3, 0.0), c(0.8, 0.0), c(0.6, 0.0)), (c(1.5, 0.5), c(0.2, -0.3), c(-0.9, 0.2))];
    let three_phi_one = worst((0..7).flat_map(|n| {
        grid.iter().map(move |&(bb, cc, z)| {
            let qn = c(q.powi(-n), 0.0);
            let low = bb * q.powi(1 - n) / cc;
            let lhs = bb.powi(n) * basic_hyper(&[qn, bb, q / z], &[low], q, z / cc, 100, tol)?;
            let rhs = basic_hyper(&[qn, bb, bb * z * q.powi(-n) / cc], &[low, c(0.0, 0.0)], q, c(q, 0.0), 100, tol)?;
            Ok(rel(lhs, rhs))
        })
    }));
    let two_phi_one = worst((0..7).flat_map(|n| {
        grid.iter().map(move |&(bb, cc, z)| {
            let qn = c(q.powi(-n), 0.0);
            let low = bb * q.powi(1 - n) / cc;
            let lhs = basic_hyper(&[qn, bb], &[cc], q, z, 100, tol)?;
            let pre = qpoch_finite(cc / bb, q, n as usize) / qpoch_finite(cc, q, n as usize);
            let rhs = pre * basic_hyper(&[qn, bb, bb * z * q.powi(-n) / cc], &[low, c(0.0, 0.0)], q, c(q, 0.0), 100, tol)?;
            Ok(rel(lhs, rhs))
        })
    }));
    vec![
        Check::from_result("q_binomial", "q-binomial theorem 1Φ0[a; x] = (ax)_∞/(x)_∞", binomial, b),
        Check::from_result("q_binomial_terminating", "terminating q-binomial 1Φ0[q^-n; x] = (x q^-n)_n", terminating, b),
        Check::from_result("q_beta", "Jackson integral of t^(β-1)(tq)_(α-1) equals the q-beta function", beta, b),
        Check::from_result("transform_3phi1", "terminating 3Φ1 to 3Φ2 transformation", three_phi_one, b),
        Check::from_result("transform_2phi1", "terminating 2Φ1 to 3Φ2 transformation", two_phi_one, b),
    ]
}

pub const ALGEBRA_TOL: f64 = 1e-12;
pub const ALGEBRA_CASES: usize = 100;

/// Random polynomial of total degree at most `deg` with up to five terms.
pub fn random_poly<R: Rng>(rng: &mut R, q: f64, deg: usize) -> NormalPoly {
    let mut f = NormalPoly::zero(q);
    for _ in 0..rng.gen_range(1..=5) {
        let j = rng.gen_range(0..=deg);
        let k = rng.gen_range(0..=deg - j);
        f.add_term(j, k, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    f
}

fn algebra_checks(cfg: &VerifyConfig, ctx: &QContext) -> Vec<Check> {
    let b = cfg.bound(ALGEBRA_TOL);
    let q = cfg.q;
    let mut rng = cfg.rng(1);
    let (mut assoc, mut inv, mut invol, mut round, mut prod): (f64, f64, f64, f64, Result<f64>) = (0.0, 0.0, 0.0, 0.0, Ok(0.0));
    for _ in 0..ALGEBRA_CASES {
        let (f, g, h) = (random_poly(&mut rng, q, 4), random_poly(&mut rng, q, 4), random_poly(&mut rng, q, 4));
        let fg = f.multiply(&g);
        let lhs = fg.multiply(&h);
        let scale = lhs.max_abs().max(1.0);
        assoc = assoc.max(lhs.max_abs_diff(&f.multiply(&g.multiply(&h))) / scale);
        inv = inv.max(fg.involution().max_abs_diff(&g.involution().multiply(&f.involution())) / fg.max_abs().max(1.0));
        invol = invol.max(f.involution().involution().max_abs_diff(&f));
        let r = PolarFunction::from_normal(&f, ctx).and_then(|p| p.to_normal());
        round = round.max(r.map(|p| p.max_abs_diff(&f)).unwrap_or(f64::NAN));
        prod = prod.and_then(|m| {
            let pf = PolarFunction::from_normal(&f, ctx)?;
            let pg = PolarFunction::from_normal(&g, ctx)?;
            let d = pf.product(&pg)?.to_normal()?.max_abs_diff(&fg) / fg.max_abs().max(1.0);
            Ok(m.max(d))
        });
    }
    let zsz = NormalPoly::z_star(q).multiply(&NormalPoly::z(q));
    let mut want = NormalPoly::monomial(q, 1, 1, c(q * q, 0.0));
    want.add_term(0, 0, c(1.0 - q * q, 0.0));
    vec![
        Check::at_most("relation", "z*z = q^2 zz* + 1 - q^2", zsz.max_abs_diff(&want), b),
        Check::at_most("associativity", "(fg)h = f(gh) on random degree-4 polynomials", assoc, b),
        Check::at_most("involution_antihomomorphism", "(fg)* = g* f*", inv, b),
        Check::at_most("involution_involutive", "f** = f", invol, b),
        Check::at_most("polar_round_trip", "normal form -> polar form -> normal form", round, b),
        Check::from_result("polar_product", "product in polar coordinates matches normal ordering", prod, b),
    ]
}

pub const STOKES_TOL: f64 = 1e-12;
pub const STOKES_DEGREE: usize = 6;

fn stokes_checks(cfg: &VerifyConfig, ctx: &QContext) -> Vec<Check> {
    let b = cfg.bound(STOKES_TOL);
    let q = cfg.q;
    let monos: Vec<NormalPoly> = (0..=STOKES_DEGREE)
        .flat_map(|j| (0..=STOKES_DEGREE - j).map(move |k| NormalPoly::monomial(q, j, k, c(1.0, 0.0))))
        .collect();
    let all = worst(monos.iter().map(|f| stokes_check(&DiffForm::dz_left(f), ctx)));
    let mut rng = cfg.rng(2);
    let mixed = worst((0..20).map(|_| stokes_check(&DiffForm::dz_left(&random_poly(&mut rng, q, STOKES_DEGREE)), ctx)));
    let psi = DiffForm::dz_left(&NormalPoly::z_star(q));
    let two_pi_i = c(0.0, 2.0 * PI);
    let sides = boundary_integral_10(&psi).and_then(|bd| {
        let inner = form_integral_11(&psi.differentials().1, ctx)?;
        Ok((bd - two_pi_i).norm().max((inner - two_pi_i).norm()))
    });
    let d2 = monos
        .iter()
        .map(|f| DiffForm::function(f).d().d().max_abs())
        .fold(0.0, f64::max);
    let leibniz = monos
        .iter()
        .map(|f| {
            let w = DiffForm::function(f);
            let (a, bb) = w.differentials();
            let (x, y) = w.leibniz_differentials();
            a.add(&x.scale(c(-1.0, 0.0))).max_abs().max(bb.add(&y.scale(c(-1.0, 0.0))).max_abs())
        })
        .fold(0.0, f64::max);
    vec![
        Check::from_result("stokes_monomials", "∫ ∂̄(dz f) = ∫_∂U dz f for all monomials of degree <= 6", all, b),
        Check::from_result("stokes_random", "Stokes formula on random degree-6 polynomials", mixed, b),
        Check::from_result("stokes_dz_zstar", "ψ = dz·z*: both sides equal 2πi", sides, b),
        Check::at_most("d_squared", "d² = 0 on functions", d2, b),
        Check::at_most("leibniz_engine", "letter-by-letter differentials match closed forms", leibniz, b),
    ]
}

pub const SPECTRAL_SLACK: f64 = 1e-10;
pub const RAYLEIGH_SAMPLES: usize = 50;

fn spectral_checks(cfg: &VerifyConfig, ctx: &QContext) -> Vec<Check> {
    let q = cfg.q;
    let (lo, hi) = (1.0 / (1.0 + q).powi(2), 1.0 / (1.0 - q).powi(2));
    let slack = cfg.bound(SPECTRAL_SLACK);
    let mut rng = cfg.rng(3);
    let m = ctx.angular_cutoff as i64;
    let mut extreme: Result<f64> = Ok(0.0);
    let mut sampled: f64 = 0.0;
    for p in -m..=m {
        extreme = extreme.and_then(|v| {
            let op = SectorOperator::new(p, ctx)?;
            let (a, b) = op.spectral_bounds();
            for _ in 0..RAYLEIGH_SAMPLES {
                let x = DVector::from_fn(op.dim(), |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                let r = op.rayleigh(&x);
                sampled = sampled.max(lo - r).max(r - hi);
            }
            Ok(v.max(lo - a).max(b - hi))
        });
    }
    let one = PolarFunction::from_fn(ctx, 0, |_| c(1.0, 0.0)).and_then(|f| box_apply(&f)).map(|b| {
        b.samples(0)[..interior_levels(ctx)].iter().map(|v| v.norm()).fold(0.0, f64::max)
    });
    vec![
        Check::from_result(
            "sector_bounds",
            "extreme eigenvalues of ∂̄*∂̄ lie in [1/(1+q)², 1/(1-q)²] for every sector |m| <= M",
            extreme,
            slack,
        ),
        Check::at_most("rayleigh_random", "Rayleigh quotients of random vectors lie in the same interval", sampled.max(0.0), slack),
        Check::from_result("box_constants", "□1 = 0 on interior levels", one, 1e-10),
    ]
}

pub const GREEN_TOL: f64 = 1e-6;
pub const GREEN_CASES: usize = 10;

/// Random right-hand side supported on the first few levels of one sector.
pub fn random_finite<R: Rng>(rng: &mut R, ctx: &QContext) -> Result<PolarFunction> {
    let m = rng.gen_range(-3i64..=3);
    let support = rng.gen_range(1..=6usize);
    let vals: Vec<Complex> = (0..ctx.radial_levels)
        .map(|n| if n < support { c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) } else { c(0.0, 0.0) })
        .collect();
    PolarFunction::from_samples(ctx, m, vals)
}

fn green_checks(cfg: &VerifyConfig, ctx: &QContext) -> Vec<Check> {
    let b = cfg.bound(GREEN_TOL);
    let mut rng = cfg.rng(4);
    let cases: Result<Vec<PolarFunction>> = (0..GREEN_CASES).map(|_| random_finite(&mut rng, ctx)).collect();
    let interior = interior_levels(ctx);
    let (agree, inverse) = match &cases {
        Ok(cs) => {
            let agree = worst(cs.iter().map(|f| {
                let uk = poisson_solve(f)?;
                let ul = poisson_solve_direct(f)?;
                Ok(weighted_residual(&uk, &ul, Measure::Nu, interior))
            }));
            let inverse = worst(cs.iter().map(|f| {
                let back = box_apply(&poisson_solve(f)?)?;
                let scale = f.max_abs();
                let mut e: f64 = 0.0;
                for m in f.mode_indices() {
                    let (x, y) = (f.samples(m), back.samples(m));
                    for n in 0..interior {
                        e = e.max((x[n] - y[n]).norm());
                    }
                }
                Ok(e / scale)
            }));
            (agree, inverse)
        }
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    let mut out = vec![
        Check::from_result("kernel_vs_linear_solve", "Green kernel integral agrees with the sector linear solve", agree, b),
        Check::from_result("box_of_inverse", "□(□⁻¹f) = f on interior levels", inverse, b),
    ];
    for s in ["z y^2", "y^3", "z^2 y^2"] {
        let run = || -> Result<(f64, f64)> {
            let f = PolarFunction::from_normal(&NormalPoly::parse(s, ctx)?, ctx)?;
            let rhs = dbar_polar(&f)?;
            let u = dbar_solve(&rhs)?;
            let dres = weighted_residual(&dbar_polar(&u)?, &rhs, Measure::Mu, interior.saturating_sub(2));
            Ok((dres, reproduce_check(&f)?.residual))
        };
        let (d, r) = match run() {
            Ok((d, r)) => (Ok(d), Ok(r)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        out.push(Check::from_result(&format!("dbar_solve[{s}]"), "∂̄u = ∂̄f for the ∂̄-solution", d, b));
        out.push(Check::from_result(&format!("cauchy_green[{s}]"), "f = Bergman projection + ∂̄-solution of ∂̄f", r, b));
    }
    out
}

pub const EIGEN_TOL: f64 = 1e-8;
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const ASYMPTOTIC_TOL: f64 = 1e-4;
pub const ASYMPTOTIC_LEVEL: usize = 40;
pub const RECOVERY_TOL: f64 = 1e-3;

/// `max |□u - λu| / max |u|` over interior levels.
pub fn eigen_residual(u: &PolarFunction, lambda: Complex) -> Result<f64> {
    let b = box_apply(u)?;
    let k = interior_levels(u.ctx());
    let (mut err, mut scale): (f64, f64) = (0.0, 0.0);
    for m in u.mode_indices() {
        let (x, y) = (u.samples(m), b.samples(m));
        for n in 0..k {
            err = err.max((y[n] - lambda * x[n]).norm());
            scale = scale.max(x[n].norm());
        }
    }
    Ok(err / scale)
}

fn eigen_checks(cfg: &VerifyConfig, ctx: &QContext) -> Vec<Check> {
    let q = cfg.q;
    let ls = [c(0.3, 0.0), c(0.7, 0.0), c(1.0, 0.0), c(-0.5, 0.5)];
    let eig = worst(ls.iter().flat_map(|&l| {
        let lam = eigenvalue(l, q);
        let phi = std::iter::once(spherical_phi(l, ctx).and_then(|p| eigen_residual(&p, lam)));
        let modes = [1i64, -1, 2].into_iter().map(move |j| {
            let u = poisson_extend(&BoundaryPoly::mode(j, c(1.0, 0.0)), l, ctx)?;
            eigen_residual(&u, lam)
        });
        phi.chain(modes)
    }));
    let sym = worst(ls.iter().map(|&l| {
        let a = spherical_phi(l, ctx)?.samples(0);
        let b = spherical_phi(-1.0 - l, ctx)?.samples(0);
        Ok(a.iter().zip(&b).map(|(x, y)| (x - y).norm() / x.norm().max(1.0)).fold(0.0, f64::max))
    }));
    let mut deep = *ctx;
    deep.radial_levels = deep.radial_levels.max(ASYMPTOTIC_LEVEL + 1);
    let l = c(0.3, 0.0);
    let asym = (|| {
        let phi = spherical_phi(l, &deep)?.samples(0);
        let est = phi[ASYMPTOTIC_LEVEL] * real_pow(q * q, l * ASYMPTOTIC_LEVEL as f64);
        Ok(rel(est, c_function(l, q, deep.series_tol)?))
    })();
    let recover = worst([BoundaryPoly::one(), BoundaryPoly::mode(1, c(1.0, 0.0))].into_iter().map(|f| {
        let u = poisson_extend(&f, l, &deep)?;
        Ok(boundary_recover(&u, l, 1e-6)?.max_abs_diff(&f))
    }));
    vec![
        Check::from_result("eigenfunctions", "□u = λ(l)u for spherical functions and Poisson extensions", eig, cfg.bound(EIGEN_TOL)),
        Check::from_result("parameter_symmetry", "φ_l = φ_(-1-l)", sym, cfg.bound(SYMMETRY_TOL)),
        Check::from_result("asymptotics", "φ_l(q^(2n)) q^(2nl) -> c(l) at n = 40", asym, cfg.bound(ASYMPTOTIC_TOL)),
        Check::from_result("boundary_recovery", "boundary values of f = 1 and f = e^(iθ) recovered from P_l f", recover, cfg.bound(RECOVERY_TOL)),
    ]
}

pub const FOURIER_TOL: f64 = 1e-4;
/// Errors at or below this level count as converged in the doubling check.
pub const FOURIER_FLOOR: f64 = 1e-13;
pub const FOURIER_FAMILY: [&str; 6] = ["z y^2", "y z*", "y^2", "z^2 y^3", "y^3 z*^2", "z^3 y^2"];

fn fourier_checks(cfg: &VerifyConfig, ctx: &QContext) -> Vec<Check> {
    let b = cfg.bound(FOURIER_TOL);
    let family: Result<Vec<PolarFunction>> = FOURIER_FAMILY
        .iter()
        .map(|s| PolarFunction::from_normal(&NormalPoly::parse(s, ctx)?, ctx))
        .collect();
    let family = match family {
        Ok(f) => f,
        Err(e) => return vec![Check::failed("family", "test functions", b, e)],
    };
    let parseval = worst(family.iter().flat_map(|u| family.iter().map(move |v| (u, v))).filter_map(|(u, v)| {
        let same_mode = u.mode_indices() == v.mode_indices();
        same_mode.then(|| parseval_defect(u, v, cfg.nodes))
    }));
    let inversion = worst(family.iter().map(|u| inversion_error(u, cfg.nodes)));
    let doubling = (|| {
        let mut ratio = f64::INFINITY;
        for u in &family {
            let errs = [8, 16, 32, 64, 128]
                .iter()
                .map(|&n| inversion_error(u, n))
                .collect::<Result<Vec<_>>>()?;
            for w in errs.windows(2) {
                if w[1] > FOURIER_FLOOR {
                    ratio = ratio.min(w[0] / w[1]);
                }
            }
        }
        Ok(ratio)
    })();
    let doubling = match doubling {
        Ok(r) => Check::at_least("doubling", "inversion error drops at least 4x per doubling of nodes", r, 4.0),
        Err(e) => Check::failed("doubling", "inversion error drops at least 4x per doubling of nodes", 4.0, e),
    };
    vec![
        Check::from_result("parseval", "⟨Fu, Fv⟩ = ⟨u, v⟩_ν on the boundary-decaying family", parseval, b),
        Check::from_result("inversion", "F⁻¹F u = u on the boundary-decaying family", inversion, b),
        doubling,
    ]
}

pub const BEREZIN_TOL: f64 = 1e-12;
pub const SCALING_FACTOR: f64 = 3.0;
pub const LEADING_TOL: f64 = 0.1;
pub const ASSOCIATIVITY_ORDER: usize = 3;
pub const QUANT_DIM: usize = 24;

fn berezin_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let q = cfg.q;
    let b = cfg.bound(BEREZIN_TOL);
    let one = NormalPoly::one(q);
    let mono = |j, k| NormalPoly::monomial(q, j, k, c(1.0, 0.0));
    let monos: Vec<NormalPoly> = (0..=3).flat_map(|j| (0..=3 - j).map(move |k| mono(j, k))).collect();
    let r = 1.0 / (q * q) - 1.0;
    let y2 = {
        let w = &one - &NormalPoly::z_star(q).multiply(&NormalPoly::z(q));
        w.multiply(&w)
    };
    let first = worst(monos.iter().flat_map(|f1| monos.iter().map(move |f2| (f1, f2))).map(|(f1, f2)| {
        let got = berezin::c_k_extract(f1, f2, 1)?;
        let want = dz_star_right_derivative(f1).multiply(&y2).multiply(&dz_left_derivative(f2)).scale(c(r, 0.0));
        Ok(got.max_abs_diff(&want))
    }));
    let mut rng = cfg.rng(5);
    let order = cfg.order;
    let units = worst((0..10).map(|_| random_poly(&mut rng, q, 3)).flat_map(|f| {
        let one = one.clone();
        (1..=order).map(move |k| {
            let a = berezin::c_k_extract(&one, &f, k)?.max_abs();
            let b = berezin::c_k_extract(&f, &one, k)?.max_abs();
            Ok(a.max(b))
        })
    }));
    let shape = worst(monos.iter().take(6).flat_map(|f1| monos.iter().map(move |f2| (f1, f2))).map(|(f1, f2)| {
        berezin::c_k_extract(f1, f2, order).map(|_| 0.0)
    }));
    let assoc_order = order.min(ASSOCIATIVITY_ORDER);
    let assoc = (|| {
        let mut alg = exact::ExactAlgebra::new(q)?;
        let em: Vec<exact::ExactPoly> = monos.iter().map(exact::ExactPoly::from_normal).collect::<Result<_>>()?;
        let mut m: f64 = 0.0;
        for a in &em {
            for bb in &em {
                for cc in &em {
                    for p in alg.associator(a, bb, cc, assoc_order) {
                        m = m.max(num_traits::ToPrimitive::to_f64(&p.max_abs()).unwrap_or(f64::INFINITY));
                    }
                }
            }
        }
        Ok(m)
    })();
    let relation = worst([0.5, 1.0, 2.0, 3.0, 4.0].into_iter().map(|al| Ok(BargmannOps::new(al, q, QUANT_DIM)?.relation_residual())));
    let unit_q = quantization_oracle(&one, &one, 2.0, 1, QUANT_DIM).map(|r| r.residual);
    let scaling = worst([(NormalPoly::z_star(q), NormalPoly::z(q)), (mono(1, 2), &mono(2, 0) + &mono(0, 1))].iter().flat_map(|(f1, f2)| {
        (0..=1usize).map(move |k| {
            let rs = [2.0, 3.0, 4.0]
                .iter()
                .map(|&al| quantization_oracle(f1, f2, al, k, QUANT_DIM).map(|r| r.residual))
                .collect::<Result<Vec<_>>>()?;
            let expect = q.powi(4 * (k as i32 + 1));
            Ok(rs.windows(2).map(|w| {
                let x = w[1] / w[0] / expect;
                x.max(1.0 / x)
            }).fold(1.0, f64::max))
        })
    }));
    let leading = quantization_oracle(&NormalPoly::z_star(q), &NormalPoly::z(q), 3.0, 0, QUANT_DIM)
        .map(|r| (r.residual / r.leading - 1.0).abs());
    vec![
        Check::from_result("c1_first_order", "C_1(f1, f2) = (q^-2 - 1) ∂f1/∂z* (1 - z*z)² ∂f2/∂z on degree-3 monomials", first, b),
        Check::from_result("units", "C_k(1, f) = C_k(f, 1) = 0", units, b),
        Check::from_result("bidifferential_shape", "C_K equals its q-bidifferential template", shape, 0.0),
        Check::from_result("associativity", "Σ C_i(f1, C_k(f2, f3)) = Σ C_i(C_k(f1, f2), f3) through t³ on degree-3 monomials", assoc, 0.0),
        Check::from_result("deformed_relation", "ẑ*ẑ = q²ẑẑ* + 1 - q² + q^(4α)(1-q²)/(1-q^(4α))(1-ẑẑ*)(1-ẑ*ẑ)", relation, b),
        Check::from_result("quantize_unit", "1̂·1̂ = 1̂", unit_q, b),
        Check::from_result("quantization_scaling", "residual of the K-th partial sum scales like q^(4α(K+1)) across α = 2, 3, 4", scaling, SCALING_FACTOR),
        Check::from_result("leading_remainder", "K = 0 remainder matches q^(4α)‖Ĉ_1‖ at α = 3", leading, LEADING_TOL),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let cfg = VerifyConfig {
            radial_levels: 32,
            angular_cutoff: 8,
            ..Default::default()
        };
        for s in [Suite::Qspecial, Suite::Algebra, Suite::Stokes, Suite::Spectral] {
            let r = run(s, &cfg).unwrap();
            for (_, t) in r.checks() {
                assert!(t.pass, "{s}: {t:?}");
            }
        }
    }

    #[test]
    fn report_formats() {
        let r = run(Suite::Qspecial, &VerifyConfig::default()).unwrap();
        let j = r.to_json();
        assert_eq!(j["suites"][0]["name"], "qspecial");
        assert!(j["suites"][0]["tests"][0]["paper_ref"].is_string());
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1 + r.suites[0].tests.len());
    }
}
