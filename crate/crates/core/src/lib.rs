//! Zeta-regularized determinant of the two-dimensional Euclidean Dirac operator
//! on a disk with local bag-like boundary conditions.
//!
//! The crate is organised bottom-up:
//!
//! * [`quadrature`]: adaptive Gauss–Kronrod, closed-contour trapezoid rules,
//!   Bessel `J` and digamma.
//! * [`clifford`]: dense complex matrices and gamma-matrix representations.
//! * [`calderon`]: principal symbols of the Calderón projector, ellipticity
//!   and Agmon-cone checks, the 4D chiral obstruction.
//! * [`seeley`]: resolvent symbol coefficients `c₋₁`, `c₋₂`, `d₋₁`, `d̃₋₁`
//!   and the constants `K_ν`.
//! * [`greens`]: free and bag-condition Green functions on the disk.
//! * [`determinant`]: the three non-vanishing contributions to
//!   `∂_α ln Det` and the final ln-det ratio.
//! * [`cli`]: configuration parsing and the `diracdet` command.

pub mod calderon;
pub mod cli;
pub mod clifford;
pub mod determinant;
pub mod error;
pub mod greens;
pub mod quadrature;
pub mod seeley;

pub use clifford::{ComplexMatrix, GammaRep, PolarFrame};
pub use determinant::{ContourSpec, DeterminantResult};
pub use error::{Error, Result};
pub use greens::{DiskProblem, PlanePoint};
pub use num_complex::Complex64;
pub use seeley::{GaugeField, GaugeProfile};
