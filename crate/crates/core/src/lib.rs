//! Entanglement degradation of a qubit pair when one qubit follows a
//! dissipative Landau-Zener evolution.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: small dense complex matrices, Kronecker products, partial
//!   transposes and a Jacobi Hermitian eigensolver.
//! * [`lz_model`]: the Landau-Zener Hamiltonian, its gap and the rotation into
//!   the instantaneous eigenbasis.
//! * [`bath`]: Ohmic spectral density, thermal occupation, Kossakowski rates and
//!   the principal-value Lamb-shift coefficients.
//! * [`generator`]: the rotated-frame Lindblad generator, its Bloch-vector form
//!   and the secular-approximation timescale checks.
//! * [`ode`]: Dormand-Prince 5(4) with dense output and a fixed-step RK4.
//! * [`dynamics`]: propagation of the two-qubit state in Pauli coordinates, the
//!   full 4x4 master-equation route, and the slow-driving closed form.
//! * [`entanglement`]: negativity, the X-state spectrum, the zero-temperature
//!   decay law and the entanglement survival time.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod generator;
pub mod linalg;
pub mod lz_model;
pub mod ode;
pub mod quadrature;

pub use bath::{BathParams, ZeroFrequencyRate};
pub use dynamics::{PauliState, SolverConfig, SolverMethod, Trajectory};
pub use entanglement::{NegativityMethod, NegativityResult};
pub use error::{Error, Result};
pub use generator::{Generator, GeneratorCoefficients, TimescaleReport};
pub use linalg::ComplexMatrix;
pub use lz_model::LzParams;
