//! Transmission through a rectangular barrier with Caldeira-Leggett damping:
//! amplitudes, traversal-time distributions and the cumulative amplitude.
//!
//! Units: `hbar = 2m = lambda0 = 1`. Energies are given as `eps = E / V0`,
//! barrier widths as `d / lambda0`, and times and rates are measured in
//! `tau* = d / v0`.

pub mod barrier;
pub mod dissipative;
pub mod error;
pub mod kernel;
pub mod numerics;
pub mod sweep;
pub mod traversal;
pub mod units;

pub use barrier::{amplitude_w, transmission_prob, ComplexAmplitude};
pub use dissipative::{amplitude_w_d, transmission_prob_d, DissipativeAmplitude, SpectralSolver};
pub use error::{Error, Result};
pub use kernel::DampingKernel;
pub use sweep::{resonance_table, run as run_sweep, Grid, Quantity, SweepRequest, SweepResult};
pub use traversal::{
    cumulative_c_d, distribution_f, distribution_f_d, mean_tau_closed, mean_tau_derivative, CumulativeAmplitude,
    MeanTraversal, SpectralConfig, TraversalDistribution,
};
pub use units::{BarrierSpec, DissipationSpec, EnergyPoint};
