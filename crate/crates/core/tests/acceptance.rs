//! Acceptance criteria at desk scale: q = 0.5, N = 64, M = 16, K = 4,
//! 128 quadrature nodes. Prints one line per criterion and fails if any
//! criterion does.

use qdisc::verify::{run, Check, Report, Suite, VerifyConfig};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const ALGEBRA: f64 = 1e-12;
const QSPECIAL: f64 = 1e-10;
const SPECTRAL_SLACK: f64 = 1e-10;
const SPECTRAL_RUNTIME: Duration = Duration::from_secs(10);
const GREEN: f64 = 1e-6;
const CAUCHY_GREEN: f64 = 1e-6;
const EIGEN: f64 = 1e-8;
const SYMMETRY: f64 = 1e-12;
const ASYMPTOTIC: f64 = 1e-4;
const RECOVERY: f64 = 1e-3;
const FOURIER: f64 = 1e-4;
const DOUBLING_RATIO: f64 = 4.0;
const STOKES: f64 = 1e-12;
const C1: f64 = 1e-12;
const ASSOCIATIVITY: f64 = 0.0;
const RELATION: f64 = 1e-12;
const SCALING_FACTOR: f64 = 3.0;
const TOTAL_RUNTIME: Duration = Duration::from_secs(120);

enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

struct Criterion {
    number: usize,
    title: &'static str,
    suite: Suite,
    checks: &'static [(&'static str, Bound)],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "algebra engine on 100 random degree-4 cases",
        suite: Suite::Algebra,
        checks: &[
            ("associativity", Bound::AtMost(ALGEBRA)),
            ("involution_antihomomorphism", Bound::AtMost(ALGEBRA)),
            ("polar_round_trip", Bound::AtMost(ALGEBRA)),
        ],
    },
    Criterion {
        number: 2,
        title: "q-binomial, q-beta and the two transformations",
        suite: Suite::Qspecial,
        checks: &[
            ("q_binomial", Bound::AtMost(QSPECIAL)),
            ("q_binomial_terminating", Bound::AtMost(QSPECIAL)),
            ("q_beta", Bound::AtMost(QSPECIAL)),
            ("transform_3phi1", Bound::AtMost(QSPECIAL)),
            ("transform_2phi1", Bound::AtMost(QSPECIAL)),
        ],
    },
    Criterion {
        number: 3,
        title: "Rayleigh quotients within [1/(1+q)², 1/(1-q)²] for |m| <= 16",
        suite: Suite::Spectral,
        checks: &[
            ("sector_bounds", Bound::AtMost(SPECTRAL_SLACK)),
            ("rayleigh_random", Bound::AtMost(SPECTRAL_SLACK)),
        ],
    },
    Criterion {
        number: 4,
        title: "Green kernel vs linear solve and □(□⁻¹f) = f",
        suite: Suite::Green,
        checks: &[
            ("kernel_vs_linear_solve", Bound::AtMost(GREEN)),
            ("box_of_inverse", Bound::AtMost(GREEN)),
        ],
    },
    Criterion {
        number: 5,
        title: "Cauchy-Green on z y², y³, z²y²",
        suite: Suite::Green,
        checks: &[
            ("dbar_solve[z y^2]", Bound::AtMost(CAUCHY_GREEN)),
            ("cauchy_green[z y^2]", Bound::AtMost(CAUCHY_GREEN)),
            ("dbar_solve[y^3]", Bound::AtMost(CAUCHY_GREEN)),
            ("cauchy_green[y^3]", Bound::AtMost(CAUCHY_GREEN)),
            ("dbar_solve[z^2 y^2]", Bound::AtMost(CAUCHY_GREEN)),
            ("cauchy_green[z^2 y^2]", Bound::AtMost(CAUCHY_GREEN)),
        ],
    },
    Criterion {
        number: 6,
        title: "eigenfunctions and φ_l = φ_(-1-l)",
        suite: Suite::Eigen,
        checks: &[("eigenfunctions", Bound::AtMost(EIGEN)), ("parameter_symmetry", Bound::AtMost(SYMMETRY))],
    },
    Criterion {
        number: 7,
        title: "asymptotics at n = 40 and boundary recovery",
        suite: Suite::Eigen,
        checks: &[("asymptotics", Bound::AtMost(ASYMPTOTIC)), ("boundary_recovery", Bound::AtMost(RECOVERY))],
    },
    Criterion {
        number: 8,
        title: "Fourier inversion, Parseval and node doubling",
        suite: Suite::Fourier,
        checks: &[
            ("parseval", Bound::AtMost(FOURIER)),
            ("inversion", Bound::AtMost(FOURIER)),
            ("doubling", Bound::AtLeast(DOUBLING_RATIO)),
        ],
    },
    Criterion {
        number: 9,
        title: "Stokes formula on degree-6 forms and ψ = dz·z*",
        suite: Suite::Stokes,
        checks: &[("stokes_monomials", Bound::AtMost(STOKES)), ("stokes_dz_zstar", Bound::AtMost(STOKES))],
    },
    Criterion {
        number: 10,
        title: "C_1, exact associativity, deformed relation, quantization scaling",
        suite: Suite::Berezin,
        checks: &[
            ("c1_first_order", Bound::AtMost(C1)),
            ("associativity", Bound::AtMost(ASSOCIATIVITY)),
            ("deformed_relation", Bound::AtMost(RELATION)),
            ("quantization_scaling", Bound::AtMost(SCALING_FACTOR)),
        ],
    },
];

fn find<'a>(report: &'a Report, id: &str) -> Option<&'a Check> {
    report.checks().map(|(_, c)| c).find(|c| c.id == id)
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    assert_eq!((cfg.q, cfg.radial_levels, cfg.angular_cutoff, cfg.order, cfg.nodes), (0.5, 64, 16, 4, 128));
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut timings = Vec::new();
    for s in Suite::EACH {
        let t = Instant::now();
        reports.push((s, run(s, &cfg).expect("suite runs")));
        timings.push((s, t.elapsed()));
    }
    let total = start.elapsed();

    let mut failed = 0;
    for c in CRITERIA {
        let report = &reports.iter().find(|(s, _)| *s == c.suite).unwrap().1;
        let mut detail = Vec::new();
        let mut ok = true;
        for (id, bound) in c.checks {
            let (value, pass) = match find(report, id) {
                Some(ch) => {
                    let pass = match bound {
                        Bound::AtMost(b) => ch.value <= *b,
                        Bound::AtLeast(b) => ch.value >= *b,
                    };
                    (ch.value, pass)
                }
                None => (f64::NAN, false),
            };
            ok &= pass;
            detail.push(format!("{id}={value:.2e}"));
        }
        if c.suite == Suite::Spectral {
            let t = timings.iter().find(|(s, _)| *s == Suite::Spectral).unwrap().1;
            ok &= t <= SPECTRAL_RUNTIME;
            detail.push(format!("runtime={:.2}s", t.as_secs_f64()));
        }
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} [{}]",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            detail.join(", ")
        );
    }
    println!("total runtime {:.1}s (target {}s)", total.as_secs_f64(), TOTAL_RUNTIME.as_secs());
    if total > TOTAL_RUNTIME {
        println!("runtime target exceeded");
        failed += 1;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
