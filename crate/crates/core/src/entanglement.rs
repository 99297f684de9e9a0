//! Negativity, X-state shortcuts and the finite-temperature survival time.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::{mean_occupation, BathParams};
use crate::dynamics::{is_slow_regime, PauliState};
use crate::error::{Error, Result};
use crate::generator::slow_limit_coefficients;
use crate::linalg::{
    check_density_matrix, hermitian_eigenvalues, kron, partial_transpose_second, pauli,
    ComplexMatrix,
};
use crate::lz_model::LzParams;

/// Largest excluded Pauli coordinate tolerated by the X-state formulas.
pub const XSTATE_TOL: f64 = 1e-10;

/// Angle tolerance for the `θ = 0` precondition of [`survival_time`].
pub const ANGLE_TOL: f64 = 1e-12;

/// `ρ = ¼(id⊗id + s·σ⊗id + id⊗r·σ + Σ χ_ij σ_i⊗σ_j)`.
pub fn assemble_density(st: &PauliState) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let mut rho = ComplexMatrix::identity(4);
    for i in 0..3 {
        let si = pauli(i + 1);
        rho = rho + kron(&si, &id).scale_real(st.s[i]) + kron(&id, &si).scale_real(st.r[i]);
        for j in 0..3 {
            if st.chi[i][j] != 0.0 {
                rho += kron(&si, &pauli(j + 1)).scale_real(st.chi[i][j]);
            }
        }
    }
    rho.scale_real(0.25)
}

/// Inverse of [`assemble_density`]: `s_i = Tr(ρ σ_i⊗id)` etc. Imaginary
/// parts, which vanish for Hermitian input, are discarded.
pub fn pauli_project(rho: &ComplexMatrix) -> Result<PauliState> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let id = ComplexMatrix::identity(2);
    let tr = |op: &ComplexMatrix| rho.trace_product(op).re;
    let norm = rho.trace().re;
    let mut st = PauliState::MAXIMALLY_MIXED;
    for i in 0..3 {
        let si = pauli(i + 1);
        st.s[i] = tr(&kron(&si, &id)) / norm;
        st.r[i] = tr(&kron(&id, &si)) / norm;
        for j in 0..3 {
            st.chi[i][j] = tr(&kron(&si, &pauli(j + 1))) / norm;
        }
    }
    Ok(st)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativityMethod {
    /// Eigenvalues of the full partial transpose.
    #[default]
    General,
    /// Closed-form eigenvalues for X states.
    XState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityResult {
    /// `Σ |μ_i|` over negative eigenvalues of `ρ^{T_B}`.
    pub value: f64,
    /// Partial-transpose eigenvalues in ascending order.
    pub pt_eigenvalues: [f64; 4],
    pub method: NegativityMethod,
}

fn from_eigenvalues(mut mu: [f64; 4], method: NegativityMethod) -> NegativityResult {
    mu.sort_by(f64::total_cmp);
    NegativityResult {
        value: mu.iter().filter(|&&m| m < 0.0).map(|m| -m).sum(),
        pt_eigenvalues: mu,
        method,
    }
}

/// Negativity of a two-qubit density matrix.
pub fn negativity(rho: &ComplexMatrix) -> Result<NegativityResult> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    check_density_matrix(rho)?;
    let ev = hermitian_eigenvalues(&partial_transpose_second(rho)?)?;
    Ok(from_eigenvalues(
        [ev[0], ev[1], ev[2], ev[3]],
        NegativityMethod::General,
    ))
}

/// Negativity of a state in Pauli coordinates without the density-matrix
/// check; used for propagated states whose physicality is tracked separately.
pub(crate) fn negativity_of_state_unchecked(st: &PauliState) -> Result<f64> {
    let ev = hermitian_eigenvalues(&partial_transpose_second(&assemble_density(st))?)?;
    Ok(ev.iter().filter(|&&m| m < 0.0).map(|m| -m).sum())
}

/// Largest Pauli coordinate that must vanish for an X state with
/// `χ_21 = χ_12`, `χ_22 = -χ_11`.
pub fn xstate_deviation(st: &PauliState) -> f64 {
    let c = &st.chi;
    [
        st.s[0],
        st.s[1],
        st.r[0],
        st.r[1],
        c[0][2],
        c[1][2],
        c[2][0],
        c[2][1],
        c[1][0] - c[0][1],
        c[1][1] + c[0][0],
    ]
    .iter()
    .fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Partial-transpose eigenvalues of an X state, in the order
/// `μ₁,₂ = ¼(1 - χ₃₃ ± √(4(χ₁₁² + χ₁₂²) + (s₃ - r₃)²))`,
/// `μ₃,₄ = ¼(1 + χ₃₃ ± |s₃ + r₃|)`.
pub fn xstate_pt_eigenvalues(st: &PauliState) -> Result<[f64; 4]> {
    let deviation = xstate_deviation(st);
    if deviation > XSTATE_TOL {
        return Err(Error::NotXState { deviation });
    }
    let c = &st.chi;
    let coherence =
        (4.0 * (c[0][0] * c[0][0] + c[0][1] * c[0][1]) + (st.s[2] - st.r[2]).powi(2)).sqrt();
    let population = (st.s[2] + st.r[2]).abs();
    Ok([
        0.25 * (1.0 - c[2][2] + coherence),
        0.25 * (1.0 - c[2][2] - coherence),
        0.25 * (1.0 + c[2][2] + population),
        0.25 * (1.0 + c[2][2] - population),
    ])
}

/// Negativity from the X-state closed form.
pub fn negativity_xstate(st: &PauliState) -> Result<NegativityResult> {
    Ok(from_eigenvalues(
        xstate_pt_eigenvalues(st)?,
        NegativityMethod::XState,
    ))
}

/// Negativity of a state given in Pauli coordinates using the chosen method.
pub fn negativity_with(st: &PauliState, method: NegativityMethod) -> Result<NegativityResult> {
    match method {
        NegativityMethod::General => negativity(&assemble_density(st)),
        NegativityMethod::XState => negativity_xstate(st),
    }
}

/// Zero-temperature Bell-state negativity in the slow regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlowDecay {
    /// `½ exp(-λ²πJ(2Δ)cos²θ · τ)`, the literal closed form.
    pub literal: f64,
    /// `½ exp(-2a₊τ)`, consistent with the generator.
    pub consistent: f64,
    /// Exponent rate of `literal`.
    pub literal_rate: f64,
    /// Exponent rate of `consistent`, equal to `λ²πJ(2Δ)cos²θ / 2`.
    pub consistent_rate: f64,
    pub within_slow_regime: bool,
}

impl SlowDecay {
    pub fn rate_ratio(&self) -> f64 {
        self.literal_rate / self.consistent_rate
    }
}

/// Evaluates both closed forms for the negativity of a Bell input at `T = 0`
/// in the slow regime.
pub fn negativity_slow_t0(
    t: f64,
    t_int: f64,
    lz: &LzParams,
    bath: &BathParams,
) -> Result<SlowDecay> {
    if bath.temperature != 0.0 {
        return Err(Error::Precondition(format!(
            "zero-temperature formula called with T = {}",
            bath.temperature
        )));
    }
    lz.validate()?;
    bath.validate()?;
    let tau = t - t_int;
    let c = slow_limit_coefficients(lz, bath)?;
    let consistent_rate = 2.0 * c.a_plus;
    let j = crate::bath::spectral_density(2.0 * lz.delta, bath)?;
    let literal_rate =
        bath.coupling * bath.coupling * std::f64::consts::PI * j * bath.angle.cos().powi(2);
    Ok(SlowDecay {
        literal: 0.5 * (-literal_rate * tau).exp(),
        consistent: 0.5 * (-consistent_rate * tau).exp(),
        literal_rate,
        consistent_rate,
        within_slow_regime: is_slow_regime(t_int, t, lz),
    })
}

/// `ξ = (1 - ℓ²)/(1 + √(2 - ℓ²))²` with `ℓ = 1/(2n̄(2Δ) + 1)`, evaluated
/// without cancellation for small `n̄`.
pub fn survival_xi(occupation: f64) -> f64 {
    let n = occupation;
    let u = 4.0 * n * (n + 1.0) / (2.0 * n + 1.0).powi(2);
    u / (1.0 + (u + 1.0).sqrt()).powi(2)
}

/// Time for a Bell input to lose all entanglement in the slow regime at
/// `θ = 0`: `τ_ent = -ln ξ / (2b)`. Infinite at zero temperature.
pub fn survival_time(bath: &BathParams, lz: &LzParams) -> Result<f64> {
    lz.validate()?;
    bath.validate()?;
    if bath.angle.abs() > ANGLE_TOL {
        return Err(Error::Precondition(format!(
            "survival time requires coupling angle 0, got {}",
            bath.angle
        )));
    }
    if bath.temperature == 0.0 {
        return Ok(f64::INFINITY);
    }
    let xi = survival_xi(mean_occupation(2.0 * lz.delta, bath.temperature)?);
    let b = slow_limit_coefficients(lz, bath)?.b;
    Ok(-xi.ln() / (2.0 * b))
}

/// Random-access helper used by tests and tools: the 4x4 Bell projector
/// `|Φ⁺⟩⟨Φ⁺|`.
pub fn bell_phi_plus() -> ComplexMatrix {
    let h = Complex64::new(0.5, 0.0);
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_rows(4, &[h, z, z, h, z, z, z, z, z, z, z, z, h, z, z, h])
}
