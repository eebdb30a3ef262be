//! Virtual Betti numbers of real algebraic varieties from combinatorial models.
//!
//! The crate works with finite simplicial models over GF(2): mod-2 Betti
//! numbers of compact pieces, compactly supported cohomology of pairs, the
//! scissor calculus evaluated through the virtual Poincaré polynomial, the
//! stratified recursion that computes it, Mayer–Vietoris spectral sequences
//! of closed covers, and the integer system linking weight profiles to
//! Betti and virtual Betti numbers.

pub mod fixtures;
pub mod gf2;
pub mod mvss;
pub mod polynomial;
pub mod scene;
pub mod scissor;
pub mod simplicial;
pub mod strata;
pub mod weights;

pub use gf2::{BitVec, Gf2Matrix, Gf2Subspace};
pub use polynomial::{Degree, IntPolynomial};
pub use simplicial::{BettiVector, PairSpace, SimplicialComplex, Subcomplex};
