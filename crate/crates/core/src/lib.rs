//! Exact-arithmetic formality certificates.
//!
//! The crate decides formality of finitely presented commutative differential
//! graded algebras and of arity/degree-truncated dg operads by lifting a grading
//! automorphism of cohomology to a minimal model and splitting the model into
//! weight eigenspaces. Non-formality is certified with triple Massey products.
//! All arithmetic is over the rationals.

pub mod error;
pub mod exactlin;
pub mod formality;
pub mod gca;
pub mod grading;
pub mod minimal_model;
pub mod operad;
pub mod rational;
pub mod transfer;
pub mod unipotent;

pub use error::{Error, Result};
pub use rational::Rational;
