//! Landau-Zener Hamiltonian `H(t) = Δ σx + v t σz` (ħ = 1) and its
//! instantaneous eigenframe.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sigma_x, sigma_z, ComplexMatrix};

/// Minimum gap `delta` and sweep rate `v` of the avoided crossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LzParams {
    pub delta: f64,
    pub v: f64,
}

impl LzParams {
    pub fn new(delta: f64, v: f64) -> Result<Self> {
        let p = LzParams { delta, v };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: self.delta,
                reason: "must be positive and finite",
            });
        }
        if !(self.v > 0.0 && self.v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "v",
                value: self.v,
                reason: "must be positive and finite",
            });
        }
        Ok(())
    }

    /// Adiabaticity ratio `Δ² / v`.
    pub fn adiabaticity(&self) -> f64 {
        self.delta * self.delta / self.v
    }
}

/// Half-gap `Ω(t) = sqrt(v²t² + Δ²)`; the levels are `±Ω(t)`.
pub fn gap(t: f64, p: &LzParams) -> f64 {
    (p.v * t).hypot(p.delta)
}

/// Mixing angle `φ(t) = atan2(Δ, v t) / 2`.
///
/// Continuous through the crossing and strictly decreasing from `π/2`
/// (t → -∞) to `0` (t → +∞), with `φ(0) = π/4`.
pub fn mixing_angle(t: f64, p: &LzParams) -> f64 {
    0.5 * p.delta.atan2(p.v * t)
}

/// `dφ/dt = -Δ v / (2 Ω²)`.
pub fn mixing_angle_rate(t: f64, p: &LzParams) -> f64 {
    let omega = gap(t, p);
    -p.delta * p.v / (2.0 * omega * omega)
}

pub fn hamiltonian_lab(t: f64, p: &LzParams) -> ComplexMatrix {
    p.delta * sigma_x() + (p.v * t) * sigma_z()
}

/// `R(t) = exp(i φ(t) σy)`, real orthogonal, with `R H R† = Ω σz`.
pub fn rotation(t: f64, p: &LzParams) -> ComplexMatrix {
    rotation_by(mixing_angle(t, p))
}

pub(crate) fn rotation_by(phi: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    ComplexMatrix::from_rows(
        2,
        &[
            Complex64::new(c, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(c, 0.0),
        ],
    )
}

/// `∫₀ᵗ 2Ω(t') dt' = tΩ(t) + (Δ²/v) asinh(vt/Δ)`, the phase accumulated by
/// the bare splitting.
pub fn accumulated_phase(t: f64, p: &LzParams) -> f64 {
    t * gap(t, p) + p.delta * p.delta / p.v * (p.v * t / p.delta).asinh()
}

/// Bohr frequencies `(ω₁, ω₂, ω₃) = (2Ω, -2Ω, 0)` of the jump channels.
pub fn transition_frequencies(t: f64, p: &LzParams) -> (f64, f64, f64) {
    let w = 2.0 * gap(t, p);
    (w, -w, 0.0)
}
