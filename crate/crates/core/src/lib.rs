//! Radial harmonic analysis on finitely generated free groups.
//!
//! The library works with the free group on `l` generators through exact
//! reduced-word arithmetic and builds up, layer by layer, the commutative
//! algebra of radial functions and its analysis:
//!
//! - [`words`]: reduced words, spheres and balls of the Cayley tree, exact
//!   cardinalities, capped enumeration.
//! - [`group_algebra`]: finitely supported rational-valued functions under
//!   convolution, involution and trace; sphere averages `h_n`; the signed
//!   endpoint action of the group on itself.
//! - [`radial`]: the polynomials `p_n` with `h_n = p_n(h_1)`, generating
//!   function cross-check, spherical functions, parameter classification,
//!   and Gram positivity certificates.
//! - [`spectra`]: the spectral measures of the length power functionals
//!   (Kesten at the center, a density plus possibly one atom elsewhere),
//!   singularity-aware quadrature, moment identities, and the tridiagonal
//!   truncation of the `h_1` action with its eigenvalue distribution.
//! - [`primtop`]: an exact model of the primitive ideal space of the radial
//!   C*-completion: quotient map, closure operator, specialization, and the
//!   continuity checker that certifies a trivial center.
//! - [`selftest`]: the embedded acceptance suite tying all of it together.
//!
//! Exact data (anything a theorem pins with an identity) is kept in
//! arbitrary-precision rationals; floating point enters only where measures
//! and eigenvalues are genuinely numerical, always through deterministic
//! algorithms with fixed summation orders.

pub mod error;
pub mod group_algebra;
pub mod linalg;
pub mod primtop;
pub mod quad;
pub mod radial;
pub mod selftest;
pub mod spectra;
pub mod words;

pub use error::{Error, Result};
pub use group_algebra::{AlgebraElement, Sign, SignedWord};
pub use primtop::{PrimPoint, PrimSet};
pub use radial::{GramReport, ParameterClass, RadialElement, RationalPoly, Series};
pub use spectra::{JacobiMatrix, SpectralMeasure};
pub use words::{Rank, Word};
