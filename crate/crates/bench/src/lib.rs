//! Shared fixtures for the benchmarks.

use std::f64::consts::FRAC_PI_4;

use lzd_core::dynamics::{schmidt_initial, PauliState};
use lzd_core::{BathParams, LzParams};

pub fn bell() -> PauliState {
    schmidt_initial(FRAC_PI_4).expect("valid Schmidt angle")
}

/// `Δ = 10`, `ω_c = Δ/3`, `λ = 0.1` with the given sweep rate, temperature
/// and coupling angle.
pub fn model(v: f64, temperature: f64, angle: f64) -> (LzParams, BathParams) {
    let lz = LzParams::new(10.0, v).expect("valid LZ parameters");
    let bath = BathParams::ohmic(temperature, 10.0 / 3.0, 0.1, angle).expect("valid bath");
    (lz, bath)
}
