use clap::{Args, Parser, Subcommand, ValueEnum};
use qdisc::forms::dbar_polar;
use qdisc::harmonic::sector::interior_levels;
use qdisc::harmonic::{box_apply, dbar_solve, holomorphic_overlap, poisson_solve, weighted_residual};
use qdisc::ncpoly::Measure;
use qdisc::verify::{self, Suite, VerifyConfig};
use qdisc::{NormalPoly, PolarFunction, QContext, RepMatrix};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

/// Function theory on the quantum disc.
#[derive(Parser)]
#[command(name = "qdisc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Lattice {
    /// Deformation parameter, 0 < q < 1.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Radial levels.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Angular cutoff.
    #[arg(long, default_value_t = 16)]
    m: usize,
}

impl Lattice {
    fn ctx(&self) -> qdisc::Result<QContext> {
        QContext::new(self.q, self.n, self.m)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normal-order an expression.
    Eval {
        expr: String,
        /// Print the radial samples of every angular mode.
        #[arg(long, conflicts_with = "matrix")]
        polar: bool,
        /// Print the Fock-space matrix as CSV.
        #[arg(long)]
        matrix: bool,
        /// Matrix dimension for --matrix.
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[command(flatten)]
        lattice: Lattice,
    },
    /// Invert □ or ∂̄ and print the solution as JSON.
    Solve {
        kind: SolveKind,
        #[arg(long)]
        rhs: String,
        #[command(flatten)]
        lattice: Lattice,
    },
    /// Run verification suites; exits 0 iff every check passes.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        lattice: Lattice,
        /// Truncation order of the star product.
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Quadrature nodes for the spectral variable.
        #[arg(long, default_value_t = 128)]
        nodes: usize,
        /// Replace every residual bound.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write one CSV row per check here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveKind {
    Poisson,
    Dbar,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: qdisc::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<bool, Box<dyn std::error::Error>> {
    match cmd {
        Command::Eval { expr, polar, matrix, dim, lattice } => {
            let ctx = lattice.ctx()?;
            let f = NormalPoly::parse(&expr, &ctx)?;
            if polar {
                print!("{}", polar_table(&PolarFunction::from_normal(&f, &ctx)?));
            } else if matrix {
                print!("{}", RepMatrix::from_normal(&f, dim).to_csv());
            } else {
                println!("{f}");
            }
            Ok(true)
        }
        Command::Solve { kind, rhs, lattice } => {
            let ctx = lattice.ctx()?;
            let f = PolarFunction::from_normal(&NormalPoly::parse(&rhs, &ctx)?, &ctx)?;
            let interior = interior_levels(&ctx);
            let out = match kind {
                SolveKind::Poisson => {
                    let u = poisson_solve(&f)?;
                    let back = box_apply(&u)?;
                    json!({
                        "kind": "poisson",
                        "rhs": rhs,
                        "residual": interior_defect(&back, &f, interior),
                        "solution": u,
                    })
                }
                SolveKind::Dbar => {
                    let u = dbar_solve(&f)?;
                    let back = dbar_polar(&u)?;
                    json!({
                        "kind": "dbar",
                        "rhs": rhs,
                        "residual": weighted_residual(&back, &f, Measure::Mu, interior.saturating_sub(2)),
                        "orthogonality_defect": holomorphic_overlap(&u),
                        "solution": u,
                    })
                }
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Command::Verify { suite, lattice, order, nodes, tol, seed, json, csv } => {
            let cfg = VerifyConfig {
                q: lattice.q,
                radial_levels: lattice.n,
                angular_cutoff: lattice.m,
                order,
                nodes,
                tol,
                seed,
            };
            let report = verify::run(suite, &cfg)?;
            for (name, c) in report.checks() {
                let rel = match c.relation {
                    verify::Relation::AtMost => "<=",
                    verify::Relation::AtLeast => ">=",
                };
                println!(
                    "{} {name}/{}: {:.3e} {rel} {:.1e}{}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.value,
                    c.bound,
                    c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
                );
            }
            if let Some(p) = json {
                std::fs::write(p, serde_json::to_string_pretty(&report.to_json())?)?;
            }
            if let Some(p) = csv {
                std::fs::write(p, report.to_csv()?)?;
            }
            let ok = report.passed();
            println!("{}", if ok { "all checks passed" } else { "some checks failed" });
            Ok(ok)
        }
    }
}

// Largest |a - b| on interior levels relative to max |b|; absolute when b = 0.
fn interior_defect(a: &PolarFunction, b: &PolarFunction, levels: usize) -> f64 {
    let mut err: f64 = 0.0;
    let mut modes = a.mode_indices();
    modes.extend(b.mode_indices());
    for m in modes {
        let (x, y) = (a.samples(m), b.samples(m));
        for n in 0..levels {
            err = err.max((x[n] - y[n]).norm());
        }
    }
    err / b.max_abs().max(1.0)
}

fn polar_table(f: &PolarFunction) -> String {
    let q2 = f.ctx().q2();
    let mut out = String::from("mode\tn\ty\tre\tim\n");
    for m in f.mode_indices() {
        for (n, v) in f.samples(m).iter().enumerate() {
            out += &format!("{m}\t{n}\t{:.6e}\t{:.12e}\t{:.12e}\n", q2.powi(n as i32), v.re, v.im);
        }
    }
    out
}
