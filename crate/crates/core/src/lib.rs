//! Arithmetic statistics of twist families over 𝔽_q(t) at desk scale.
//!
//! The crate covers polynomial factor statistics over finite fields, classification of
//! places by the p-torsion of an elliptic curve, character-sum equidistribution, the
//! rank Markov chain with its Poonen–Rains stationary law, the α(p) rate constant, and
//! seeded Monte Carlo walks that tie these together.

pub mod alpha;
pub mod arithstat;
pub mod error;
pub mod exact;
pub mod ffpoly;
pub mod galois;
pub mod markov;
pub mod montecarlo;
pub mod nt;
pub mod seeded;

pub use error::{Error, Result};
pub use ffpoly::{Factorization, FieldSpec, Fq, Poly};
