//! Time-dependent Lindblad generator in the adiabatic (rotated) frame.
//!
//! In the frame `R(t) = exp(iφσy)` the qubit generator reads
//!
//! ```text
//! L[ρ] = -i[k σz - φ' σy, ρ] + f D[σ-]ρ + g D[σ+]ρ + l (σz ρ σz - ρ)
//! ```
//!
//! with `D[A]ρ = AρA† - {A†A, ρ}/2`. The rates absorb the `λ²` prefactor and
//! the projections `sin²(θ - 2φ)`, `cos²(θ - 2φ)` of the coupling operator on
//! the jump channels.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::bath::{kossakowski_rate, lamb_shift_coefficient, BathParams};
use crate::error::{Error, Result};
use crate::linalg::{
    kron, sigma_minus, sigma_plus, sigma_y, sigma_z, ComplexMatrix, HERMITIAN_TOL,
};
use crate::lz_model::{gap, mixing_angle, mixing_angle_rate, LzParams};

/// Default factor by which `τ_S` must undercut `τ_R` and `τ_A`.
pub const DEFAULT_SECULAR_THRESHOLD: f64 = 10.0;

/// Coefficients of the rotated-frame generator at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCoefficients {
    /// Coherent splitting, `Ω` plus the Lamb-shift correction.
    pub k: f64,
    /// Decay rate (emission at `+2Ω`).
    pub f: f64,
    /// Excitation rate (absorption at `-2Ω`).
    pub g: f64,
    /// Pure-dephasing rate.
    pub l: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub b: f64,
    /// Inertial term `dφ/dt` from the moving frame.
    pub phi_dot: f64,
}

impl GeneratorCoefficients {
    /// Assembles the coefficients for a frame with half-gap `omega`, mixing
    /// angle `phi` and frame velocity `phi_dot`. `lamb_difference` is
    /// `S(2Ω) - S(-2Ω)` (zero with the Lamb shift off).
    pub fn from_frame(
        omega: f64,
        phi: f64,
        phi_dot: f64,
        bath: &BathParams,
        lamb_difference: f64,
    ) -> Self {
        let lambda2 = bath.coupling * bath.coupling;
        let (sin, cos) = (bath.angle - 2.0 * phi).sin_cos();
        let (sin2, cos2) = (sin * sin, cos * cos);
        let w = 2.0 * omega;
        let f = 0.25 * lambda2 * sin2 * kossakowski_rate(w, bath);
        let g = 0.25 * lambda2 * sin2 * kossakowski_rate(-w, bath);
        let l = 0.25 * lambda2 * cos2 * kossakowski_rate(0.0, bath);
        let a_plus = 0.5 * (f + g);
        let a_minus = 0.5 * (f - g);
        GeneratorCoefficients {
            k: omega + 0.5 * lambda2 * sin2 * lamb_difference,
            f,
            g,
            l,
            a_plus,
            a_minus,
            b: a_plus + 2.0 * l,
            phi_dot,
        }
    }

    /// Bloch-vector form `ds/dt = Q s + q`.
    pub fn bloch_matrix(&self) -> ([[f64; 3]; 3], [f64; 3]) {
        let (k, b, pd, ap) = (self.k, self.b, self.phi_dot, self.a_plus);
        (
            [
                [-b, -2.0 * k, -2.0 * pd],
                [2.0 * k, -b, 0.0],
                [2.0 * pd, 0.0, -2.0 * ap],
            ],
            [0.0, 0.0, -2.0 * self.a_minus],
        )
    }

    /// Applies the generator to a qubit operator, or to the first factor of
    /// a two-qubit operator (`L ⊗ id`). Linear, so any matrix is accepted.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let lift = |m: ComplexMatrix| match rho.dim() {
            2 => m,
            4 => kron(&m, &ComplexMatrix::identity(2)),
            d => panic!("generator acts on 2x2 or 4x4 operators, got {d}x{d}"),
        };
        let h = lift(self.k * sigma_z() - self.phi_dot * sigma_y());
        let sm = lift(sigma_minus());
        let sp = lift(sigma_plus());
        let sz = lift(sigma_z());
        let (pm, mp) = (sp * sm, sm * sp);
        let mi = num_complex::Complex64::new(0.0, -1.0);

        let mut out = mi * h.commutator(rho);
        if self.f != 0.0 {
            out += self.f * (sm * *rho * sp - 0.5 * pm.anticommutator(rho));
        }
        if self.g != 0.0 {
            out += self.g * (sp * *rho * sm - 0.5 * mp.anticommutator(rho));
        }
        if self.l != 0.0 {
            out += self.l * (sz * *rho * sz - *rho);
        }
        out
    }
}

/// Coefficients at time `t`, evaluating the Lamb shift by quadrature when
/// enabled. Use [`Generator`] for repeated evaluation.
pub fn coefficients(t: f64, p: &LzParams, b: &BathParams) -> Result<GeneratorCoefficients> {
    let omega = gap(t, p);
    let lamb = lamb_difference(omega, b)?;
    Ok(GeneratorCoefficients::from_frame(
        omega,
        mixing_angle(t, p),
        mixing_angle_rate(t, p),
        b,
        lamb,
    ))
}

/// Coefficients frozen at the slow-driving limit `φ = π/4`, `Ω = Δ`,
/// `dφ/dt = 0`.
pub fn slow_limit_coefficients(p: &LzParams, b: &BathParams) -> Result<GeneratorCoefficients> {
    let lamb = lamb_difference(p.delta, b)?;
    Ok(GeneratorCoefficients::from_frame(
        p.delta, FRAC_PI_4, 0.0, b, lamb,
    ))
}

fn lamb_difference(omega: f64, b: &BathParams) -> Result<f64> {
    if !b.lamb_shift_enabled {
        return Ok(0.0);
    }
    Ok(lamb_shift_coefficient(2.0 * omega, b)? - lamb_shift_coefficient(-2.0 * omega, b)?)
}

pub fn bloch_matrix(t: f64, p: &LzParams, b: &BathParams) -> Result<([[f64; 3]; 3], [f64; 3])> {
    Ok(coefficients(t, p, b)?.bloch_matrix())
}

/// `L_t[ρ]` for a Hermitian qubit operator.
pub fn apply_generator(
    rho: &ComplexMatrix,
    t: f64,
    p: &LzParams,
    b: &BathParams,
) -> Result<ComplexMatrix> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let deviation = rho.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    Ok(coefficients(t, p, b)?.apply(rho))
}

/// Secular-approximation timescales at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimescaleReport {
    /// Intrinsic beat time `1/(2Ω)`.
    pub tau_s: f64,
    /// Relaxation time `1/γ(2Ω)`, without the `λ²` factor.
    pub tau_r: f64,
    /// `tau_r / λ²`, the relaxation time the dynamics actually sees.
    pub tau_r_effective: f64,
    /// Timescale of change of the Hamiltonian.
    pub tau_a: f64,
    /// `min(τ_R/τ_S, τ_A/τ_S)`.
    pub margin: f64,
    pub secular_ok: bool,
}

/// Evaluates the secular-validity timescales with the given threshold.
///
/// `τ_A` is `2Ω²/(vΔ)` up to `t = Δ/v` and `Ω²/(v²t)` after; the two
/// branches differ by a factor 2 at the seam, so within 1% of it the smaller
/// value is used.
pub fn timescales(t: f64, p: &LzParams, b: &BathParams, threshold: f64) -> TimescaleReport {
    let omega = gap(t, p);
    let tau_s = 1.0 / (2.0 * omega);
    let rate = kossakowski_rate(2.0 * omega, b);
    let tau_r = if rate > 0.0 {
        1.0 / rate
    } else {
        f64::INFINITY
    };
    let seam = p.delta / p.v;
    let early = 2.0 * omega * omega / (p.v * p.delta);
    let late = omega * omega / (p.v * p.v * t);
    let tau_a = if (t - seam).abs() <= 0.01 * seam {
        early.min(late)
    } else if t <= seam {
        early
    } else {
        late
    };
    let margin = (tau_r / tau_s).min(tau_a / tau_s);
    TimescaleReport {
        tau_s,
        tau_r,
        tau_r_effective: tau_r / (b.coupling * b.coupling),
        tau_a,
        margin,
        secular_ok: margin >= threshold,
    }
}

/// `S(2Ω) - S(-2Ω)` interpolated in `ln Ω` on Chebyshev nodes.
#[derive(Debug, Clone)]
struct LambShiftTable {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
}

const LAMB_TABLE_NODES: usize = 64;

impl LambShiftTable {
    fn build(omega_min: f64, omega_max: f64, b: &BathParams) -> Result<Self> {
        let (lo, hi) = (omega_min.ln(), omega_max.ln());
        if hi - lo < 1e-12 {
            return Ok(LambShiftTable {
                lo,
                hi: lo,
                values: vec![lamb_difference(omega_min, b)?],
            });
        }
        let n = LAMB_TABLE_NODES;
        let values = (0..=n)
            .map(|j| {
                let x = (PI * j as f64 / n as f64).cos();
                let omega = (0.5 * (lo + hi) + 0.5 * (hi - lo) * x).exp();
                lamb_difference(omega, b)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LambShiftTable { lo, hi, values })
    }

    fn eval(&self, omega: f64) -> f64 {
        if self.values.len() == 1 {
            return self.values[0];
        }
        let n = self.values.len() - 1;
        let x = ((2.0 * omega.ln() - self.lo - self.hi) / (self.hi - self.lo)).clamp(-1.0, 1.0);
        // Barycentric formula for Chebyshev points of the second kind.
        let (mut num, mut den) = (0.0, 0.0);
        for (j, &fj) in self.values.iter().enumerate() {
            let xj = (PI * j as f64 / n as f64).cos();
            let d = x - xj;
            if d == 0.0 {
                return fj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            num += w * fj / d;
            den += w / d;
        }
        num / den
    }
}

/// Generator for a fixed model over a time window, with the Lamb shift
/// tabulated up front so that each evaluation is cheap.
#[derive(Debug, Clone)]
pub struct Generator {
    lz: LzParams,
    bath: BathParams,
    lamb: Option<LambShiftTable>,
}

impl Generator {
    /// Prepares a generator valid for `t ∈ [t_start, t_end]`.
    pub fn new(lz: LzParams, bath: BathParams, t_start: f64, t_end: f64) -> Result<Self> {
        lz.validate()?;
        bath.validate()?;
        let lamb = if bath.lamb_shift_enabled {
            let t_far = t_start.abs().max(t_end.abs());
            let (lo, hi) = if t_start <= 0.0 && t_end >= 0.0 {
                (lz.delta, gap(t_far, &lz))
            } else {
                let t_near = t_start.abs().min(t_end.abs());
                (gap(t_near, &lz), gap(t_far, &lz))
            };
            Some(LambShiftTable::build(lo, hi, &bath)?)
        } else {
            None
        };
        Ok(Generator { lz, bath, lamb })
    }

    pub fn lz(&self) -> &LzParams {
        &self.lz
    }

    pub fn bath(&self) -> &BathParams {
        &self.bath
    }

    pub fn coefficients(&self, t: f64) -> GeneratorCoefficients {
        let omega = gap(t, &self.lz);
        let lamb = self.lamb.as_ref().map_or(0.0, |table| table.eval(omega));
        GeneratorCoefficients::from_frame(
            omega,
            mixing_angle(t, &self.lz),
            mixing_angle_rate(t, &self.lz),
            &self.bath,
            lamb,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn figure_bath(temperature: f64, angle: f64) -> BathParams {
        BathParams::ohmic(temperature, 10.0 / 3.0, 0.1, angle).unwrap()
    }

    fn lz(delta: f64, v: f64) -> LzParams {
        LzParams::new(delta, v).unwrap()
    }

    fn pauli_components(m: &ComplexMatrix) -> [f64; 4] {
        let mut c = [0.0; 4];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = 0.5 * pauli(i).trace_product(m).re;
        }
        c
    }

    #[test]
    fn crossing_coefficients_at_zero_temperature() {
        // Δ = 10, v = 1, t = 0, θ = 0, T = 0, λ = 0.1, ω_c = 10/3, no Lamb shift.
        // Frozen from a hand substitution: sin²(θ - π/2) = 1,
        // f = λ²/4 · 2π · 20 e^{-6}, g = l = 0, k = Ω = 10, φ' = -Δv/(2Δ²).
        let c = coefficients(0.0, &lz(10.0, 1.0), &figure_bath(0.0, 0.0)).unwrap();
        let f = 0.000_778_722_962_828_474_1;
        assert_eq!(c.k, 10.0);
        assert!((c.f - f).abs() < 1e-17, "{}", c.f);
        assert_eq!(c.g, 0.0);
        assert_eq!(c.l, 0.0);
        assert!((c.a_plus - f / 2.0).abs() < 1e-17);
        assert!((c.a_minus - f / 2.0).abs() < 1e-17);
        assert!((c.b - f / 2.0).abs() < 1e-17);
        assert_eq!(c.phi_dot, -0.05);
    }

    #[test]
    fn transversal_zero_temperature_is_coherent() {
        let b = figure_bath(0.0, FRAC_PI_2);
        let c = GeneratorCoefficients::from_frame(10.0, FRAC_PI_4, 0.0, &b, 0.0);
        assert!(c.f < 1e-35 && c.g == 0.0 && c.l == 0.0);
        let (q, drive) = c.bloch_matrix();
        assert!(q[0][0].abs() < 1e-35 && q[2][2].abs() < 1e-35 && drive[2].abs() < 1e-35);
        assert_eq!(q[1][0], 20.0);
        assert_eq!(q[0][1], -20.0);
    }

    #[test]
    fn slow_limit_matches_closed_form_rates() {
        let p = lz(10.0, 1e-9);
        for (temperature, angle) in [(0.0, 0.0), (2.0, 0.4), (5.0, 1.2)] {
            let b = figure_bath(temperature, angle);
            let lambda2 = 0.01;
            let c2 = angle.cos().powi(2);
            let s2 = angle.sin().powi(2);
            let f = lambda2 / 4.0 * c2 * kossakowski_rate(20.0, &b);
            let g = lambda2 / 4.0 * c2 * kossakowski_rate(-20.0, &b);
            let l = lambda2 / 4.0 * s2 * kossakowski_rate(0.0, &b);
            let frozen = slow_limit_coefficients(&p, &b).unwrap();
            let rel = |a: f64, e: f64| (a - e).abs() <= 1e-12 * e.abs().max(1e-300);
            assert!(rel(frozen.f, f) && rel(frozen.g, g) && rel(frozen.l, l));
            // |v t| ≤ 1e-7 Δ: rates move by O(v t / Δ).
            for t in [-1e3, 0.0, 5e2] {
                let c = coefficients(t, &p, &b).unwrap();
                let close = |a: f64, e: f64| (a - e).abs() <= 1e-6 * e.abs().max(1e-12);
                assert!(close(c.f, f) && close(c.g, g) && close(c.l, l), "t = {t}");
                assert!(c.phi_dot.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn slow_limit_is_block_diagonal() {
        let c = slow_limit_coefficients(&lz(10.0, 1e-3), &figure_bath(1.0, 0.3)).unwrap();
        let (q, _) = c.bloch_matrix();
        assert_eq!((q[0][2], q[2][0], q[1][2], q[2][1]), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn identity_maps_to_drive() {
        let p = lz(10.0, 1.0);
        let b = figure_bath(0.0, 0.0);
        let c = coefficients(0.3, &p, &b).unwrap();
        let out = apply_generator(&ComplexMatrix::identity(2), 0.3, &p, &b).unwrap();
        let expected = (-2.0 * c.a_minus) * sigma_z();
        assert!(out.max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn pauli_images() {
        let p = lz(4.0, 2.0);
        let b = figure_bath(3.0, 0.7);
        let c = coefficients(-0.4, &p, &b).unwrap();
        let x = c.apply(&pauli(1));
        let y = c.apply(&pauli(2));
        let z = c.apply(&pauli(3));
        let ex = 2.0 * c.k * pauli(2) - c.b * pauli(1) + 2.0 * c.phi_dot * pauli(3);
        let ey = -2.0 * c.k * pauli(1) - c.b * pauli(2);
        let ez = -2.0 * c.phi_dot * pauli(1) - 2.0 * c.a_plus * pauli(3);
        assert!(x.max_abs_diff(&ex) < 1e-13);
        assert!(y.max_abs_diff(&ey) < 1e-13);
        assert!(z.max_abs_diff(&ez) < 1e-13);
    }

    #[test]
    fn ground_state_is_fixed_at_zero_temperature() {
        let p = lz(10.0, 1e-6);
        let b = figure_bath(0.0, 0.0);
        let ground = ComplexMatrix::diagonal(&[0.0, 1.0]);
        let c = slow_limit_coefficients(&p, &b).unwrap();
        assert!(c.apply(&ground).frobenius_norm() < 1e-18);
    }

    #[test]
    fn apply_generator_rejects_bad_input() {
        let p = lz(1.0, 1.0);
        let b = figure_bath(0.0, 0.0);
        assert!(matches!(
            apply_generator(&ComplexMatrix::identity(4), 0.0, &p, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        let m = ComplexMatrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            apply_generator(&m, 0.0, &p, &b),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn lifted_generator_acts_on_first_factor() {
        let c = coefficients(0.2, &lz(2.0, 1.0), &figure_bath(1.0, 0.5)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let lifted = c.apply(&kron(&pauli(i), &pauli(j)));
                let expected = kron(&c.apply(&pauli(i)), &pauli(j));
                assert!(lifted.max_abs_diff(&expected) < 1e-13);
            }
        }
    }

    #[test]
    fn timescale_examples() {
        let p = lz(10.0, 1.0);
        let b = figure_bath(0.0, 0.0);
        let r = timescales(0.0, &p, &b, DEFAULT_SECULAR_THRESHOLD);
        assert_eq!(r.tau_s, 1.0 / 20.0);
        assert!((r.tau_a - 20.0).abs() < 1e-12);
        assert!((r.tau_r - 1.0 / (40.0 * PI * (-6f64).exp())).abs() < 1e-12);
        assert!((r.tau_r_effective - r.tau_r / 0.01).abs() < 1e-9);
    }

    #[test]
    fn timescale_seam_takes_minimum() {
        let p = lz(10.0, 1.0);
        let b = figure_bath(0.0, 0.0);
        let seam = 10.0;
        // Both branches at the seam: 2Ω²/(vΔ) = 4Δ/v, Ω²/(v² t) = 2Δ/v.
        let at = timescales(seam, &p, &b, 10.0);
        assert!((at.tau_a - 20.0).abs() < 1e-12);
        let before = timescales(seam * 0.995, &p, &b, 10.0);
        let omega2 = 100.0 + (seam * 0.995f64).powi(2);
        assert!((before.tau_a - omega2 / (seam * 0.995)).abs() < 1e-12);
        let far_before = timescales(5.0, &p, &b, 10.0);
        assert!((far_before.tau_a - 2.0 * 125.0 / 10.0).abs() < 1e-12);
        let after = timescales(20.0, &p, &b, 10.0);
        assert!((after.tau_a - 500.0 / 20.0).abs() < 1e-12);
    }

    #[test]
    fn figure_regime_is_secular() {
        let p = lz(10.0, 1e-3);
        for temperature in [0.0, 1.0, 5.0, 10.0] {
            let b = figure_bath(temperature, 0.0);
            for t in [-100.0, 0.0, 100.0] {
                let r = timescales(t, &p, &b, DEFAULT_SECULAR_THRESHOLD);
                assert!(r.secular_ok, "T = {temperature}, t = {t}: {r:?}");
            }
        }
        // Fast driving through a tiny gap is not.
        let fast = timescales(0.0, &lz(0.1, 1.0), &figure_bath(0.0, 0.0), 10.0);
        assert!(!fast.secular_ok);
    }

    #[test]
    fn lamb_shift_only_moves_k() {
        let p = lz(10.0, 1.0);
        let b = figure_bath(0.0, 0.3);
        let off = coefficients(1.0, &p, &b).unwrap();
        let on = coefficients(1.0, &p, &b.with_lamb_shift(true)).unwrap();
        assert_eq!(
            (off.f, off.g, off.l, off.phi_dot),
            (on.f, on.g, on.l, on.phi_dot)
        );
        assert!(on.k != off.k);
        assert_eq!(off.k, gap(1.0, &p));
    }

    #[test]
    fn lamb_table_matches_direct_quadrature() {
        let p = lz(10.0, 2.0);
        let b = figure_bath(1.0, 0.3).with_lamb_shift(true);
        let g = Generator::new(p, b, -40.0, 40.0).unwrap();
        for t in [-40.0, -13.7, -0.2, 0.0, 3.3, 29.0, 40.0] {
            let direct = coefficients(t, &p, &b).unwrap();
            let tabled = g.coefficients(t);
            assert!(
                (direct.k - tabled.k).abs() < 1e-9,
                "t = {t}: {} vs {}",
                direct.k,
                tabled.k
            );
        }
    }

    #[test]
    fn generator_without_lamb_shift_matches_free_function() {
        let p = lz(3.0, 0.7);
        let b = figure_bath(2.0, 1.0);
        let g = Generator::new(p, b, -10.0, 10.0).unwrap();
        for t in [-10.0, 0.0, 4.0] {
            assert_eq!(g.coefficients(t), coefficients(t, &p, &b).unwrap());
        }
    }

    fn random_density(x: f64, y: f64, z: f64) -> ComplexMatrix {
        let n = (x * x + y * y + z * z).sqrt().max(1.0);
        let (x, y, z) = (x / n, y / n, z / n);
        let half = Complex64::new(0.5, 0.0);
        half * (pauli(0) + x * pauli(1) + y * pauli(2) + z * pauli(3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn matrix_and_bloch_forms_agree(
            x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0,
            t in -50.0f64..50.0,
            delta in 0.1f64..20.0, v in 0.01f64..5.0,
            temperature in 0.0f64..5.0, angle in 0.0f64..TAU,
        ) {
            let p = lz(delta, v);
            let b = BathParams::ohmic(temperature, delta / 3.0, 0.1, angle).unwrap();
            let rho = random_density(x, y, z);
            let out = apply_generator(&rho, t, &p, &b).unwrap();
            prop_assert!(out.trace().norm() < 1e-12);
            prop_assert!(out.hermitian_deviation() < 1e-12);

            let c = coefficients(t, &p, &b).unwrap();
            let (q, drive) = c.bloch_matrix();
            let s = [2.0 * pauli_components(&rho)[1], 2.0 * pauli_components(&rho)[2], 2.0 * pauli_components(&rho)[3]];
            let comps = pauli_components(&out);
            for i in 0..3 {
                let expected = (0..3).map(|j| q[i][j] * s[j]).sum::<f64>() + drive[i];
                let scale = 1.0 + c.k.abs();
                prop_assert!((2.0 * comps[i + 1] - expected).abs() < 1e-12 * scale);
            }
            prop_assert!(c.b >= c.a_plus && c.a_plus >= c.a_minus.abs());
            prop_assert!(c.f >= 0.0 && c.g >= 0.0 && c.l >= 0.0);
            let trace_q = q[0][0] + q[1][1] + q[2][2];
            prop_assert!((trace_q - (-2.0 * c.b - 2.0 * c.a_plus)).abs() < 1e-15);
        }
    }
}
