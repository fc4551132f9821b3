//! Scattering, wavefunction and decay observables.

mod decay;
mod scattering;
mod trapping;
mod wavefunction;

pub use decay::{decay_rate, expansion_weights, DecaySeries};
pub use scattering::{
    derivative, det, phase_lapse_scan, scattering_series, time_delay, transmission_peaks, unitarity_defect,
    wrap_angle, PhaseLapse, ScatteringModel, ScatteringSeries, TimeDelay, MAX_PHASE_STEP,
};
pub use trapping::{
    average_rate_vs_alpha, linear_fit, order_parameter, AverageRate, LinearFit, OrderParameterOptions,
    OrderParameterSeries,
};
pub use wavefunction::{internal_wavefunction, resolvent_solve, rho_phase_rigidity, rigidity_rotation};

#[cfg(test)]
mod tests;
