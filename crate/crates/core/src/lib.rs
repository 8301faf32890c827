//! Three-valued quantum computational logic on the qutrit space ℂ³.
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`]: a small dense complex matrix kernel (Kronecker product,
//!   direct sum, adjoint, closed-form Hermitian 3×3 eigenvalues).
//! - [`states`]: quregisters, density operators, truth-value projectors and
//!   the Born-rule truth probabilities, linear entropy and the
//!   mixed/uncertain classification.
//! - [`gates`]: the qubit and qutrit gate catalog (negations, Hadamard-like
//!   gates, square roots of identity and negation).
//! - [`gellmann`]: the Gell-Mann basis and 8-dimensional Bloch vectors.
//! - [`tomography`]: effects, effect probabilities and the reconstruction of
//!   a qutrit density operator from eight effect probabilities.
//! - [`lang`]: a small expression language over states, gates and queries.
//! - [`conformance`]: the self-verification identity suite.

pub mod conformance;
pub mod error;
pub mod gates;
pub mod gellmann;
pub mod lang;
pub mod linalg;
pub mod random;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, C64, DEFAULT_TOL};
