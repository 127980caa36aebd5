//! Number systems in quotient rings `Z[X]/(p)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] and [`modulus`]: exact integer polynomials, residues, squarefree
//!   decomposition, roots, companion matrix, norm and trace.
//! * [`numsys`]: the backward division map, digit expansions and the
//!   number-system verifier.
//! * [`spectra`]: derivative values at the roots, the length predictor and
//!   the regions `R(T)`.
//! * [`embed`]: the coefficient embedding, the fundamental domain and its
//!   boundary, Urysohn functions and integer/fractional parts.
//! * [`stats`]: additive functions, pattern counts, Weyl sums, discrepancy
//!   bounds and the Gaussian-limit harness.

pub mod embed;
pub mod error;
pub mod format;
pub mod modulus;
pub mod numsys;
pub mod parse;
pub mod poly;
pub mod roots;
pub mod spectra;
pub mod stats;

pub use error::{Error, Result};
pub use modulus::{ModulusContext, Residue};
pub use numsys::{Expansion, NumberSystem, Verdict, VerifyReport};
pub use poly::IntPoly;
