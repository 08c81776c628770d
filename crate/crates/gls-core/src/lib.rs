//! Single-photon scattering at a giant Λ-type atom coupled to a 1D waveguide
//! at two points, with and without Sagnac interferometers at the coupling
//! points.
//!
//! The crate provides three independent routes to the same physics:
//!
//! * [`model`] — closed-form scattering amplitudes, probabilities and the
//!   effective detuning/linewidth they imply;
//! * [`bc`] — the raw boundary-condition linear systems (9 unknowns for the
//!   bare giant atom, 5 for the Sagnac variant), solved by partial-pivot
//!   elimination as an exactness oracle for the closed forms;
//! * [`lattice`] — time-domain wavepacket scattering on a tight-binding
//!   chain hosting both photon channels, as a physics-level cross-check.
//!
//! On top of those, [`conditions`] classifies the analytic parameter
//! manifolds (total reflection, frequency-independent perfect transmission,
//! optimal conversion) and extracts extremum trajectories, [`sweep`] runs
//! deterministic grids over (Δ, Δφ) and (Δ, η), and [`verify`] bundles the
//! randomized cross-check suites used by the CLI and the acceptance tests.
//!
//! All rates (Γ₁, Γ₂, γ, Δ) share one unit; the library is unit-agnostic.

pub mod bc;
pub mod conditions;
pub mod lattice;
pub mod model;
pub mod sweep;
pub mod verify;

pub use num_complex::Complex64;

pub use model::{
    effective_params, giant_lambda_amplitudes, sagnac_amplitudes, small_atom_amplitudes,
    two_level_amplitudes, EffectiveParams, ModelError, ModelParams, SagnacAmplitudes,
    ScatteringAmplitudes,
};
