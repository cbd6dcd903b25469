//! Van der Waals energies and forces between spinning nanospheres.
//!
//! A sphere spinning at `Ω` sees its dipole response split into rotational
//! Doppler sidebands at `ω ± Ω`, and its lab-frame fluctuations no longer
//! satisfy the equilibrium fluctuation–dissipation theorem. This crate
//! evaluates the resulting dipole–dipole interaction in the non-retarded
//! regime for Lorentz-oscillator spheres.
//!
//! - [`response`]: permittivity, polarizability and Hadamard function at rest
//! - [`rotation`]: lab-frame response tensors of a spinning sphere
//! - [`spectral`]: the spectral interaction integrals
//! - [`configurations`]: canonical arrangements, forces and rotation-induced shifts
//! - [`oracle`]: dissipationless zero-temperature closed forms
//! - [`baseline`]: static Matsubara/Hamaker references and the naive-FDT energy
//! - [`cli`]: configuration, sweeps and output for the `spinvdw` binary

pub mod baseline;
pub mod cli;
pub mod configurations;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod response;
pub mod rotation;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
pub use response::{MaterialModel, Oscillator, SpinningSphere};
pub use configurations::{Arrangement, ArrangementKind, InteractionModel};
pub use oracle::LorentzPair;
pub use rotation::{ResponseKind, ResponseTensor};
pub use spectral::{PairContext, SpectralSolver, Tolerances};
pub use units::UnitSystem;
