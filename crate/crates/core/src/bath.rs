//! Ohmic thermal bath: spectral density, occupation numbers, Kossakowski
//! rates `γ(ω)` and Lamb-shift coefficients `S(ω)`. Units: ħ = k_B = 1.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson_pieces_with, DEFAULT_MAX_DEPTH};

/// Default principal-value window, in units of the cutoff.
pub const DEFAULT_PV_WINDOW: f64 = 50.0;

/// Multiples of `ω_c + T` around `ν = 0` used as quadrature breakpoints.
const PEAK_SPLITS: [f64; 5] = [0.25, 1.0, 4.0, 16.0, 64.0];

/// How the dephasing rate `γ(0)` is assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroFrequencyRate {
    /// `γ(0) = lim_{ω→0} 2π J(ω) n̄(ω) = 2π T`.
    #[default]
    OhmicLimit,
    /// `γ(0) = 0`: the pure-dephasing channel is switched off.
    Vanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    pub temperature: f64,
    /// Ohmic cutoff `ω_c`.
    pub cutoff: f64,
    /// System-bath coupling strength `λ`.
    pub coupling: f64,
    /// Spin-coupling direction `θ` in radians: 0 is longitudinal (σz),
    /// π/2 transversal (σx).
    pub angle: f64,
    pub lamb_shift_enabled: bool,
    /// Half-width of the frequency window used for `S(ω)`.
    pub pv_upper_limit: f64,
    #[serde(default)]
    pub zero_frequency_rate: ZeroFrequencyRate,
}

impl BathParams {
    /// Ohmic bath with the Lamb shift disabled and the default PV window.
    pub fn ohmic(temperature: f64, cutoff: f64, coupling: f64, angle: f64) -> Result<Self> {
        let b = BathParams {
            temperature,
            cutoff,
            coupling,
            angle,
            lamb_shift_enabled: false,
            pv_upper_limit: DEFAULT_PV_WINDOW * cutoff,
            zero_frequency_rate: ZeroFrequencyRate::OhmicLimit,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn with_lamb_shift(mut self, enabled: bool) -> Self {
        self.lamb_shift_enabled = enabled;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, name, value, reason| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value,
                    reason,
                })
            }
        };
        check(
            self.temperature >= 0.0 && self.temperature.is_finite(),
            "temperature",
            self.temperature,
            "must be finite and non-negative",
        )?;
        check(
            self.cutoff > 0.0 && self.cutoff.is_finite(),
            "cutoff",
            self.cutoff,
            "must be positive",
        )?;
        check(
            self.coupling > 0.0 && self.coupling.is_finite(),
            "coupling",
            self.coupling,
            "must be positive",
        )?;
        check(
            (0.0..2.0 * PI).contains(&self.angle),
            "angle",
            self.angle,
            "must lie in [0, 2π)",
        )?;
        check(
            self.pv_upper_limit > 0.0 && self.pv_upper_limit.is_finite(),
            "pv_upper_limit",
            self.pv_upper_limit,
            "must be positive",
        )
    }
}

/// Ohmic spectral density `J(ω) = ω exp(-ω/ω_c)` for `ω ≥ 0`.
pub fn spectral_density(omega: f64, b: &BathParams) -> Result<f64> {
    if omega < 0.0 || omega.is_nan() {
        return Err(Error::InvalidParameter {
            name: "omega",
            value: omega,
            reason: "spectral density takes a non-negative frequency",
        });
    }
    Ok(ohmic(omega, b.cutoff))
}

#[inline]
fn ohmic(omega: f64, cutoff: f64) -> f64 {
    omega * (-omega / cutoff).exp()
}

/// Bose-Einstein occupation `1/(exp(ω/T) - 1)`; exactly zero at `T = 0`.
pub fn mean_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega",
            value: omega,
            reason: "occupation needs a positive frequency",
        });
    }
    if temperature < 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            value: temperature,
            reason: "must be non-negative",
        });
    }
    Ok(occupation(omega, temperature))
}

#[inline]
fn occupation(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        0.0
    } else {
        1.0 / (omega / temperature).exp_m1()
    }
}

/// Kossakowski rate: `2πJ(ω)(n̄+1)` for emission (`ω > 0`), `2πJ(|ω|)n̄` for
/// absorption, and the dephasing value at `ω = 0`.
pub fn kossakowski_rate(omega: f64, b: &BathParams) -> f64 {
    if omega == 0.0 {
        return match b.zero_frequency_rate {
            ZeroFrequencyRate::OhmicLimit => 2.0 * PI * b.temperature,
            ZeroFrequencyRate::Vanishing => 0.0,
        };
    }
    let w = omega.abs();
    let n = occupation(w, b.temperature);
    let j = ohmic(w, b.cutoff);
    if omega > 0.0 {
        2.0 * PI * j * (n + 1.0)
    } else {
        2.0 * PI * j * n
    }
}

/// Settings for the principal-value integral behind `S(ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvQuadrature {
    /// Absolute tolerance in units of `ω_c + T`.
    pub rel_tol: f64,
    /// Offset, in units of `ω_c`, at which the paired integrand is sampled in
    /// place of its removable singularity at the pole.
    pub pole_offset: f64,
    pub max_depth: u32,
    /// Narrowest panel, in units of `ω_c + T`.
    pub min_width: f64,
}

impl Default for PvQuadrature {
    fn default() -> Self {
        PvQuadrature {
            rel_tol: 1e-11,
            pole_offset: 1e-4,
            max_depth: DEFAULT_MAX_DEPTH,
            min_width: 1e-9,
        }
    }
}

/// Lamb-shift coefficient `S(ω) = (1/2π) PV ∫ γ(ν)/(ω - ν) dν` over
/// `ν ∈ (-L, L)`, `L = pv_upper_limit`. Returns zero when the Lamb shift is
/// disabled.
pub fn lamb_shift_coefficient(omega: f64, b: &BathParams) -> Result<f64> {
    if !b.lamb_shift_enabled {
        return Ok(0.0);
    }
    lamb_shift_with(omega, b, &PvQuadrature::default())
}

/// [`lamb_shift_coefficient`] with explicit quadrature settings, evaluated
/// regardless of the enable flag.
///
/// With `ν = ω - u` the integrand pairs as `[γ(ω-u) - γ(ω+u)] / u` on the
/// symmetric part of the window. That integrand is even in `u` and regular at
/// the pole, so its value at `u = 0` is taken at a small offset. The leftover
/// one-sided tail is integrated directly. Both pieces are split at the kink of
/// `γ` at `ν = 0`.
pub fn lamb_shift_with(omega: f64, b: &BathParams, q: &PvQuadrature) -> Result<f64> {
    let limit = b.pv_upper_limit;
    if !(omega.abs() < limit) {
        return Err(Error::InvalidParameter {
            name: "omega",
            value: omega,
            reason: "frequency lies outside the principal-value window; raise pv_upper_limit",
        });
    }
    let offset = q.pole_offset * b.cutoff;
    let tol = q.rel_tol * (b.cutoff + b.temperature);
    let kink = omega.abs();

    let sym_end = limit - kink;
    let paired = |u: f64| {
        let u = u.max(offset);
        (kossakowski_rate(omega - u, b) - kossakowski_rate(omega + u, b)) / u
    };
    // The rate is concentrated within a few `ω_c + T` of `ν = 0`; panels are
    // split there so the first samples cannot step over the peak.
    let scale = b.cutoff + b.temperature;
    let features: Vec<f64> = std::iter::once(0.0)
        .chain(PEAK_SPLITS.iter().flat_map(|&m| [m * scale, -m * scale]))
        .collect();
    let breakpoints = |lo: f64, hi: f64, to_x: &dyn Fn(f64) -> [f64; 2]| {
        let mut pts = vec![lo, hi];
        pts.extend(
            features
                .iter()
                .flat_map(|&p| to_x(p))
                .filter(|&x| x > lo && x < hi),
        );
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    };
    let pts = breakpoints(0.0, sym_end, &|p| [omega - p, p - omega]);
    let min_width = q.min_width * scale;
    let sym = adaptive_simpson_pieces_with(&paired, &pts, 0.5 * tol, q.max_depth, min_width);

    let sign = if omega >= 0.0 { 1.0 } else { -1.0 };
    let tail_end = limit + kink;
    let tail_fn = |w: f64| sign * kossakowski_rate(omega - sign * w, b) / w;
    let tail_pts = breakpoints(sym_end, tail_end, &|p| [sign * (omega - p), f64::NAN]);
    let tail = adaptive_simpson_pieces_with(&tail_fn, &tail_pts, 0.5 * tol, q.max_depth, min_width);

    let value = (sym.value + tail.value) / (2.0 * PI);
    let error = (sym.error + tail.error) / (2.0 * PI);
    // Panels may stop at the depth limit on rounding noise; the summed
    // estimate still has to meet the tolerance.
    // A vanishing rate (e.g. a transverse-only coupling) leaves a value at
    // rounding level, so the relative check is floored at `tol`.
    let depth_limited = !(sym.converged && tail.converged);
    if (depth_limited && error > tol) || error > tol.max(1e-6 * value.abs()) {
        return Err(Error::QuadratureNotConverged {
            omega,
            estimate: value,
            error,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn figure_bath(temperature: f64) -> BathParams {
        BathParams::ohmic(temperature, 10.0 / 3.0, 0.1, 0.0).unwrap()
    }

    /// Exponential integral Ei(x) from its power series.
    fn ei(x: f64) -> f64 {
        const EULER: f64 = 0.577_215_664_901_532_9;
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..200 {
            term *= x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        EULER + x.abs().ln() + sum
    }

    #[test]
    fn spectral_density_values() {
        let b = figure_bath(0.0);
        assert_eq!(spectral_density(0.0, &b).unwrap(), 0.0);
        let wc = b.cutoff;
        assert!((spectral_density(wc, &b).unwrap() - wc * (-1f64).exp()).abs() < 1e-15);
        assert!(spectral_density(-1.0, &b).is_err());
    }

    #[test]
    fn spectral_density_peaks_at_cutoff() {
        let b = figure_bath(0.0);
        let h = 1e-5;
        let slope = |w: f64| {
            (spectral_density(w + h, &b).unwrap() - spectral_density(w - h, &b).unwrap())
                / (2.0 * h)
        };
        assert!(slope(0.99 * b.cutoff) > 0.0);
        assert!(slope(1.01 * b.cutoff) < 0.0);
    }

    #[test]
    fn occupation_values() {
        assert_eq!(mean_occupation(3.0, 0.0).unwrap(), 0.0);
        let t = 1.7;
        assert!((mean_occupation(t * 2f64.ln(), t).unwrap() - 1.0).abs() < 1e-14);
        for ratio in [100.0, 1e3, 1e4] {
            let n = mean_occupation(1.0, ratio).unwrap();
            assert!((n - ratio).abs() / ratio < 0.01);
        }
        assert!(mean_occupation(0.0, 1.0).is_err());
        assert!(mean_occupation(1.0, -1.0).is_err());
    }

    #[test]
    fn kossakowski_examples() {
        let b = figure_bath(0.0);
        let expected = 40.0 * PI * (-6f64).exp();
        assert!((kossakowski_rate(20.0, &b) - expected).abs() < 1e-14);
        assert_eq!(kossakowski_rate(-20.0, &b), 0.0);
        assert_eq!(kossakowski_rate(0.0, &b), 0.0);
        let warm = figure_bath(2.0);
        assert!((kossakowski_rate(0.0, &warm) - 4.0 * PI).abs() < 1e-14);
        // The Ohmic limit is continuous at zero.
        assert!((kossakowski_rate(1e-8, &warm) - 4.0 * PI).abs() < 1e-6);
        assert!((kossakowski_rate(-1e-8, &warm) - 4.0 * PI).abs() < 1e-6);
        let off = BathParams {
            zero_frequency_rate: ZeroFrequencyRate::Vanishing,
            ..warm
        };
        assert_eq!(kossakowski_rate(0.0, &off), 0.0);
    }

    #[test]
    fn rates_vanish_far_out() {
        let b = figure_bath(5.0);
        assert!(kossakowski_rate(2000.0, &b) < 1e-200);
        assert!(kossakowski_rate(-2000.0, &b) < 1e-200);
    }

    #[test]
    fn validation() {
        assert!(BathParams::ohmic(-1.0, 1.0, 0.1, 0.0).is_err());
        assert!(BathParams::ohmic(0.0, 0.0, 0.1, 0.0).is_err());
        assert!(BathParams::ohmic(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(BathParams::ohmic(0.0, 1.0, 0.1, 2.0 * PI).is_err());
        assert!(BathParams::ohmic(0.0, 1.0, 0.1, 1.5).is_ok());
    }

    #[test]
    fn lamb_shift_disabled_is_zero() {
        assert_eq!(
            lamb_shift_coefficient(20.0, &figure_bath(0.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn lamb_shift_matches_exponential_integral_at_zero_temperature() {
        // T = 0: S(ω) = PV ∫_0^∞ ν e^{-ν/ω_c}/(ω-ν) dν = ω_c (-1 + y e^{-y} Ei(y)),
        // y = ω/ω_c; the window truncation is below e^{-50}.
        let b = figure_bath(0.0).with_lamb_shift(true);
        for omega in [20.0, -20.0, 3.0, -0.5, 45.0] {
            let y = omega / b.cutoff;
            let expected = b.cutoff * (-1.0 + y * (-y).exp() * ei(y));
            let got = lamb_shift_coefficient(omega, &b).unwrap();
            assert!(
                (got - expected).abs() < 1e-8 * expected.abs().max(1.0),
                "omega {omega}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn lamb_shift_difference_is_refinement_stable() {
        let b = figure_bath(0.0).with_lamb_shift(true);
        let coarse = PvQuadrature {
            rel_tol: 1e-9,
            ..PvQuadrature::default()
        };
        let fine = PvQuadrature {
            rel_tol: 1e-12,
            ..PvQuadrature::default()
        };
        let diff = |q: &PvQuadrature| {
            lamb_shift_with(20.0, &b, q).unwrap() - lamb_shift_with(-20.0, &b, q).unwrap()
        };
        let (a, c) = (diff(&coarse), diff(&fine));
        assert!(a.is_finite() && c.is_finite());
        assert!((a - c).abs() < 1e-8, "{a} vs {c}");
    }

    #[test]
    fn lamb_shift_scales_with_narrow_bath() {
        // `S(kω; kω_c, kT) = k S(ω; ω_c, T)` for an Ohmic bath. The narrow
        // case puts the spectral peak far inside a wide window.
        for (omega, temperature) in [(20.0, 0.0), (80.0, 0.0), (-80.0, 0.0), (0.2, 5.0)] {
            let bath = |k: f64| {
                let mut b = BathParams::ohmic(k * temperature, k * 10.0 / 3.0, 0.1, 0.0)
                    .unwrap()
                    .with_lamb_shift(true);
                b.pv_upper_limit = k * (DEFAULT_PV_WINDOW * 10.0 / 3.0 + 161.0);
                b
            };
            let wide = lamb_shift_coefficient(omega, &bath(1.0)).unwrap();
            let narrow = lamb_shift_coefficient(0.01 * omega, &bath(0.01)).unwrap();
            assert!(
                (100.0 * narrow - wide).abs() < 1e-8 * wide.abs().max(1.0),
                "omega {omega}: {narrow} vs {wide}"
            );
        }
    }

    #[test]
    fn lamb_shift_outside_window_is_rejected() {
        let b = figure_bath(0.0).with_lamb_shift(true);
        assert!(matches!(
            lamb_shift_coefficient(b.pv_upper_limit, &b),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn double_kramers_kronig_recovers_rate() {
        // With S = Hγ/2 for the Hilbert transform H, H(2S) = -γ. The inner
        // window is much wider than the outer so only the outer 1/ν tail of S
        // is truncated, which bounds the residual at about 1% of max γ.
        let wc = 1.0;
        let inner = BathParams {
            pv_upper_limit: 2000.0 * wc,
            ..BathParams::ohmic(0.5, wc, 0.1, 0.0).unwrap()
        };
        let outer_limit = 400.0 * wc;
        let q = PvQuadrature {
            rel_tol: 1e-9,
            ..PvQuadrature::default()
        };
        let s = |nu: f64| lamb_shift_with(nu, &inner, &q).unwrap();
        let gamma_max = (0..200)
            .map(|i| kossakowski_rate(-5.0 + 0.05 * i as f64, &inner))
            .fold(0.0, f64::max);
        for omega in [-2.0, -0.7, 0.3, 1.0, 2.5] {
            let paired = |u: f64| {
                let u = u.max(1e-4);
                (s(omega - u) - s(omega + u)) / u
            };
            let sym_end = outer_limit - omega.abs();
            let sym = crate::quadrature::adaptive_simpson_pieces(
                &paired,
                &[0.0, 1.0, 10.0, sym_end],
                1e-6,
                30,
            );
            let sign = omega.signum();
            let tail = crate::quadrature::adaptive_simpson_pieces(
                &|w: f64| sign * s(omega - sign * w) / w,
                &[sym_end, outer_limit + omega.abs()],
                1e-6,
                30,
            );
            let back = 2.0 * (sym.value + tail.value) / PI;
            let target = -kossakowski_rate(omega, &inner);
            assert!(
                (back - target).abs() < 0.01 * gamma_max,
                "omega {omega}: {back} vs {target}"
            );
        }
    }

    proptest! {
        #[test]
        fn detailed_balance(omega in 0.01f64..50.0, temperature in 0.05f64..20.0) {
            let b = BathParams::ohmic(temperature, 10.0 / 3.0, 0.1, 0.0).unwrap();
            let ratio = kossakowski_rate(omega, &b) / kossakowski_rate(-omega, &b);
            let expected = (omega / temperature).exp();
            prop_assert!((ratio - expected).abs() <= 1e-10 * expected);
        }

        #[test]
        fn rates_nonnegative(omega in -100.0f64..100.0, temperature in 0.0f64..20.0) {
            let b = BathParams::ohmic(temperature, 2.0, 0.1, 0.0).unwrap();
            prop_assert!(kossakowski_rate(omega, &b) >= 0.0);
        }
    }
}
