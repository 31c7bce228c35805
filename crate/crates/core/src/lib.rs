//! Numerical geometry of coherent and squeezed states.
//!
//! The crate builds coherent and squeezed states for the Weyl-Heisenberg,
//! SU(2) and SU(1,1) groups on truncated bases, pulls the Fubini-Study
//! Hermitian form back along the state families, and checks the results
//! against closed forms and finite-difference oracles. It also contains the
//! coadjoint-orbit geometry and prequantization of the special upper
//! triangular group SUT(2,R), and a Berezin quantization of the upper half
//! plane through the unit disc.
//!
//! Modules:
//!
//! - [`statespace`]: state vectors, inner products, rays, projections.
//! - [`orbits`]: ladder and spin matrices, displacement operators, state constructors.
//! - [`pullback`]: pullback of the Fubini-Study form along a state family.
//! - [`uncertainty`]: Robertson-Schrodinger moments and saturation.
//! - [`sut`]: the SUT(2,R) coadjoint orbit, KKS form, moment maps, charts.
//! - [`prequant`]: prequantum operators, flows and the Dirac-condition checker.
//! - [`berezin`]: Cayley map, weighted disc quadrature, kernel, symbols, star product.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod berezin;
pub mod error;
pub mod orbits;
pub mod prequant;
pub mod pullback;
pub mod special;
pub mod statespace;
pub mod sut;
pub mod uncertainty;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use statespace::{BasisTag, OperatorMatrix, PullbackReport, StateVector};

/// Imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Shorthand for building a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
