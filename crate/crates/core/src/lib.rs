//! Function theory on the quantum disc.
//!
//! The crate models the algebra `Pol(C)_q` generated by `z`, `z*` with
//! `z* z = q^2 z z* + 1 - q^2`, its differential calculus, the integrals
//! `μ`, `ν`, `ν_α`, the q-Laplacian with its Green function, the
//! Poisson/Fourier analysis built on spherical functions, and the Berezin
//! star product. Every infinite object is truncated through a [`QContext`].
//!
//! ```
//! use qdisc::{NormalPoly, QContext};
//!
//! let ctx = QContext::new(0.5, 16, 4).unwrap();
//! let f = NormalPoly::parse("z* z", &ctx).unwrap();
//! assert!((f.coeff(1, 1).re - 0.25).abs() < 1e-15);
//! assert!((f.coeff(0, 0).re - 0.75).abs() < 1e-15);
//! ```

pub mod berezin;
pub mod error;
pub mod forms;
pub mod fourier;
pub mod harmonic;
pub mod ncpoly;
pub mod qspecial;
pub mod quad;
pub mod rep;
pub mod verify;

pub use error::{Error, Result};
pub use forms::DiffForm;
pub use ncpoly::{BiKernel, BoundaryPoly, NormalPoly, PolarFunction, TensorPoly};
pub use qspecial::{Complex, Precision, QContext};
pub use rep::RepMatrix;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/intro.md")]
    pub struct Intro;
    #[doc = include_str!("../../../book/src/algebra.md")]
    pub struct Algebra;
    #[doc = include_str!("../../../book/src/forms.md")]
    pub struct Forms;
    #[doc = include_str!("../../../book/src/integration.md")]
    pub struct Integration;
    #[doc = include_str!("../../../book/src/laplacian.md")]
    pub struct Laplacian;
    #[doc = include_str!("../../../book/src/eigenfunctions.md")]
    pub struct Eigenfunctions;
    #[doc = include_str!("../../../book/src/fourier.md")]
    pub struct Fourier;
    #[doc = include_str!("../../../book/src/berezin.md")]
    pub struct Berezin;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
