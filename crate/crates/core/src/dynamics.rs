//! Time evolution of the system-reference pair in the rotated frame.
//!
//! Only the system qubit evolves, so the reference Bloch vector `r` is a
//! constant of motion. Three propagators are provided:
//!
//! * [`evolve_numeric`] integrates the 12 real equations for `s` and the
//!   columns of the correlation matrix `χ`, `dχ_j/dt = Q χ_j + q r_j`; the
//!   drive term vanishes for inputs with `r = 0` such as Bell states;
//! * [`evolve_full_master`] integrates the 4x4 density matrix under
//!   `L_t ⊗ id` and projects back onto Pauli coordinates, serving as an
//!   independent oracle for the first;
//! * [`evolve_slow_analytic`] evaluates the closed-form solution valid for
//!   `v → 0`, `|v t| ≪ Δ`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::BathParams;
use crate::entanglement::{assemble_density, negativity_of_state_unchecked, pauli_project};
use crate::error::{Error, Result};
use crate::generator::{
    slow_limit_coefficients, timescales, Generator, GeneratorCoefficients,
    DEFAULT_SECULAR_THRESHOLD,
};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::lz_model::{accumulated_phase, gap, LzParams};
use crate::ode::{dopri5, rk4_fixed, Dopri5Options, OdeSystem, SolverStats};

/// Slack allowed on `|s| ≤ 1`, `|χ_ij| ≤ 1` and positivity before a run is
/// aborted.
pub const STATE_ABORT_TOL: f64 = 1e-6;

/// Tolerance of [`PauliState::validate`].
pub const STATE_TOL: f64 = 1e-8;

/// Two-qubit state in Pauli coordinates:
/// `ρ = ¼(id⊗id + s·σ⊗id + id⊗r·σ + Σ χ_ij σ_i⊗σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliState {
    pub s: [f64; 3],
    pub r: [f64; 3],
    /// `chi[i][j]` multiplies `σ_i ⊗ σ_j`.
    pub chi: [[f64; 3]; 3],
}

impl PauliState {
    pub const MAXIMALLY_MIXED: PauliState = PauliState {
        s: [0.0; 3],
        r: [0.0; 3],
        chi: [[0.0; 3]; 3],
    };

    /// Checks the Bloch-ball and positivity constraints within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        bounds_check(f64::NAN, &self.s, &self.r, &self.chi, tol)?;
        let min_eigenvalue = hermitian_eigenvalues(&assemble_density(self))?[0];
        if min_eigenvalue < -tol {
            return Err(Error::NotDensityMatrix {
                trace_error: 0.0,
                min_eigenvalue,
            });
        }
        Ok(())
    }

    /// Largest absolute difference over all 15 coordinates.
    pub fn max_abs_diff(&self, other: &PauliState) -> f64 {
        self.coordinates()
            .iter()
            .zip(other.coordinates())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `(s, r, χ row-major)` as a flat array.
    pub fn coordinates(&self) -> [f64; 15] {
        let mut out = [0.0; 15];
        out[..3].copy_from_slice(&self.s);
        out[3..6].copy_from_slice(&self.r);
        for i in 0..3 {
            out[6 + 3 * i..9 + 3 * i].copy_from_slice(&self.chi[i]);
        }
        out
    }

    /// Names matching [`coordinates`](Self::coordinates).
    pub const COORDINATE_NAMES: [&'static str; 15] = [
        "s1", "s2", "s3", "r1", "r2", "r3", "chi11", "chi12", "chi13", "chi21", "chi22", "chi23",
        "chi31", "chi32", "chi33",
    ];

    /// Layout `(s, χ_·1, χ_·2, χ_·3, lamb phase)` used by the integrator.
    fn to_ode(self) -> [f64; PAULI_DIM] {
        let mut y = [0.0; PAULI_DIM];
        y[..3].copy_from_slice(&self.s);
        for j in 0..3 {
            for i in 0..3 {
                y[3 + 3 * j + i] = self.chi[i][j];
            }
        }
        y
    }

    fn from_ode(y: &[f64; PAULI_DIM], r: [f64; 3]) -> Self {
        let mut chi = [[0.0; 3]; 3];
        for (j, col) in y[3..12].chunks_exact(3).enumerate() {
            for i in 0..3 {
                chi[i][j] = col[i];
            }
        }
        PauliState {
            s: [y[0], y[1], y[2]],
            r,
            chi,
        }
    }

    /// Rotates the system index about `z` by `angle`.
    fn rotate_system(mut self, angle: f64) -> Self {
        let (sn, cs) = angle.sin_cos();
        let rot = |x: f64, y: f64| (cs * x - sn * y, sn * x + cs * y);
        (self.s[0], self.s[1]) = rot(self.s[0], self.s[1]);
        for j in 0..3 {
            (self.chi[0][j], self.chi[1][j]) = rot(self.chi[0][j], self.chi[1][j]);
        }
        self
    }
}

fn bounds_check(t: f64, s: &[f64; 3], r: &[f64; 3], chi: &[[f64; 3]; 3], tol: f64) -> Result<()> {
    let norm = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm(s) > 1.0 + tol {
        return Err(Error::InvariantViolation {
            t,
            what: "|s|",
            value: norm(s),
        });
    }
    if norm(r) > 1.0 + tol {
        return Err(Error::InvariantViolation {
            t,
            what: "|r|",
            value: norm(r),
        });
    }
    let worst = chi.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    if worst > 1.0 + tol {
        return Err(Error::InvariantViolation {
            t,
            what: "max |chi_ij|",
            value: worst,
        });
    }
    Ok(())
}

/// Pure state `cos η |00⟩ + sin η |11⟩`.
pub fn schmidt_initial(eta: f64) -> Result<PauliState> {
    if !(0.0..=FRAC_PI_2).contains(&eta) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "must lie in [0, π/2]",
        });
    }
    let (s2, c2) = (2.0 * eta).sin_cos();
    Ok(PauliState {
        s: [0.0, 0.0, c2],
        r: [0.0, 0.0, c2],
        chi: [[s2, 0.0, 0.0], [0.0, -s2, 0.0], [0.0, 0.0, 1.0]],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    /// Adaptive Dormand-Prince 5(4).
    #[default]
    Dopri5,
    /// Classical RK4 with step `min(τ_S(t)/20, window/10⁵)`.
    FixedRk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: SolverMethod,
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Factor required by the secular-validity check.
    pub secular_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: SolverMethod::Dopri5,
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 200_000_000,
            secular_threshold: DEFAULT_SECULAR_THRESHOLD,
        }
    }
}

impl SolverConfig {
    pub fn with_tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    fn dopri5_options(&self) -> Dopri5Options {
        Dopri5Options {
            rtol: self.rtol,
            atol: self.atol,
            max_steps: self.max_steps,
            ..Dopri5Options::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rtol/atol",
                value: self.rtol.min(self.atol),
                reason: "tolerances must be positive",
            });
        }
        Ok(())
    }
}

/// Sampled evolution with per-sample diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PauliState>,
    pub negativity: Vec<f64>,
    /// Secular-approximation validity at each sample.
    pub secular_ok: Vec<bool>,
    pub secular_margin: Vec<f64>,
    /// `|Tr ρ - 1|` of the propagated state (zero by construction in Pauli
    /// coordinates).
    pub trace_error: Vec<f64>,
    /// Smallest eigenvalue of the assembled density matrix.
    pub min_eigenvalue: Vec<f64>,
    pub solver_stats: SolverStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &PauliState {
        self.states.last().expect("empty trajectory")
    }

    pub fn final_negativity(&self) -> f64 {
        *self.negativity.last().expect("empty trajectory")
    }

    /// Largest coordinate-wise difference against another trajectory on the
    /// same grid.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        assert_eq!(self.times, other.times, "trajectories on different grids");
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// `max_t |r(t) - r(t_0)|`.
    pub fn reference_drift(&self) -> f64 {
        let r0 = self.states[0].r;
        self.states
            .iter()
            .flat_map(|st| st.r.iter().zip(&r0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    /// Largest increase of negativity between consecutive samples (≤ 0 for
    /// a monotone trajectory).
    pub fn max_negativity_increase(&self) -> f64 {
        self.negativity
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// First time the negativity reaches `threshold` or less, linearly
    /// interpolated between samples. A threshold of zero finds the exact
    /// sudden death of entanglement.
    pub fn first_time_below(&self, threshold: f64) -> Option<f64> {
        let n = &self.negativity;
        if n.first().is_some_and(|&x| x <= threshold) {
            return Some(self.times[0]);
        }
        n.windows(2).enumerate().find_map(|(i, w)| {
            if w[1] <= threshold {
                let frac = (w[0] - threshold) / (w[0] - w[1]);
                Some(self.times[i] + frac * (self.times[i + 1] - self.times[i]))
            } else {
                None
            }
        })
    }

    pub fn all_secular(&self) -> bool {
        self.secular_ok.iter().all(|&ok| ok)
    }

    pub fn min_secular_margin(&self) -> f64 {
        self.secular_margin
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `n` equally spaced times from `t_start` to `t_end` inclusive.
pub fn uniform_grid(t_start: f64, t_end: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid needs at least two points");
    let h = (t_end - t_start) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                t_end
            } else {
                t_start + h * i as f64
            }
        })
        .collect()
}

fn check_window(init: &PauliState, t_int: f64, t_end: f64, grid: &[f64]) -> Result<()> {
    if !(t_int < t_end) {
        return Err(Error::Precondition(format!(
            "initial time {t_int} must precede final time {t_end}"
        )));
    }
    if grid.is_empty() || grid[0] < t_int || *grid.last().unwrap() > t_end {
        return Err(Error::Precondition(format!(
            "output grid must lie within [{t_int}, {t_end}]"
        )));
    }
    init.validate(STATE_TOL)
}

const PAULI_DIM: usize = 13;
const MASTER_DIM: usize = 33;

/// Both propagators integrate in the frame co-rotating with the coherent
/// splitting, where the fast `2k` precession is removed exactly. The frame
/// angle is `Θ(t) = ∫_{t_int}^t 2k`, split into the closed-form bare part and
/// a Lamb-shift part carried as the last integration variable.
struct Frame<'a> {
    generator: &'a Generator,
    origin: f64,
}

impl<'a> Frame<'a> {
    fn new(generator: &'a Generator, t_int: f64) -> Self {
        Frame {
            generator,
            origin: accumulated_phase(t_int, generator.lz()),
        }
    }

    #[inline]
    fn angle(&self, t: f64, lamb_phase: f64) -> f64 {
        accumulated_phase(t, self.generator.lz()) - self.origin + lamb_phase
    }

    /// Coefficients at `t` and `dΘ_lamb/dt`.
    #[inline]
    fn coefficients(&self, t: f64) -> (GeneratorCoefficients, f64) {
        let c = self.generator.coefficients(t);
        let bare = gap(t, self.generator.lz());
        (c, 2.0 * (c.k - bare))
    }
}

struct PauliSystem<'a> {
    frame: Frame<'a>,
    /// Reference vector; `L(id) = q·σ` feeds `q r_j` into column `j`.
    r: [f64; 3],
}

impl PauliSystem<'_> {
    fn lab_state(&self, t: f64, y: &[f64; PAULI_DIM], r: [f64; 3]) -> PauliState {
        PauliState::from_ode(y, r).rotate_system(self.frame.angle(t, y[PAULI_DIM - 1]))
    }
}

impl OdeSystem<PAULI_DIM> for PauliSystem<'_> {
    #[inline]
    fn rhs(&self, t: f64, y: &[f64; PAULI_DIM], dy: &mut [f64; PAULI_DIM]) {
        let (c, lamb_rate) = self.frame.coefficients(t);
        let (sn, cs) = self.frame.angle(t, y[PAULI_DIM - 1]).sin_cos();
        let pd2 = 2.0 * c.phi_dot;
        for block in 0..4 {
            let o = 3 * block;
            let (x1, x2, x3) = (y[o], y[o + 1], y[o + 2]);
            dy[o] = -c.b * x1 - pd2 * cs * x3;
            dy[o + 1] = -c.b * x2 + pd2 * sn * x3;
            dy[o + 2] = pd2 * (cs * x1 - sn * x2) - 2.0 * c.a_plus * x3;
        }
        let drive = -2.0 * c.a_minus;
        dy[2] += drive;
        for j in 0..3 {
            dy[5 + 3 * j] += drive * self.r[j];
        }
        dy[PAULI_DIM - 1] = lamb_rate;
    }
}

struct MasterSystem<'a> {
    frame: Frame<'a>,
}

impl MasterSystem<'_> {
    fn unpack(y: &[f64; MASTER_DIM]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                let k = 2 * (4 * i + j);
                m[(i, j)] = Complex64::new(y[k], y[k + 1]);
            }
        }
        m
    }

    fn pack(m: &ComplexMatrix, lamb_phase: f64) -> [f64; MASTER_DIM] {
        let mut y = [0.0; MASTER_DIM];
        for i in 0..4 {
            for j in 0..4 {
                let k = 2 * (4 * i + j);
                y[k] = m[(i, j)].re;
                y[k + 1] = m[(i, j)].im;
            }
        }
        y[MASTER_DIM - 1] = lamb_phase;
        y
    }

    /// `exp(-iΘσz/2) ⊗ id`, the coherent propagator of the splitting.
    fn frame_unitary(angle: f64) -> ComplexMatrix {
        let u = Complex64::from_polar(1.0, -0.5 * angle);
        let d = [u, u, u.conj(), u.conj()];
        let mut m = ComplexMatrix::zeros(4);
        for (i, x) in d.into_iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    fn lab_density(&self, t: f64, y: &[f64; MASTER_DIM]) -> ComplexMatrix {
        let u = Self::frame_unitary(self.frame.angle(t, y[MASTER_DIM - 1]));
        u * Self::unpack(y) * u.adjoint()
    }
}

impl OdeSystem<MASTER_DIM> for MasterSystem<'_> {
    fn rhs(&self, t: f64, y: &[f64; MASTER_DIM], dy: &mut [f64; MASTER_DIM]) {
        let (c, lamb_rate) = self.frame.coefficients(t);
        // The splitting is absorbed by the frame; everything else is applied
        // in the lab frame and rotated back.
        let rest = GeneratorCoefficients { k: 0.0, ..c };
        let u = Self::frame_unitary(self.frame.angle(t, y[MASTER_DIM - 1]));
        let ud = u.adjoint();
        let lab = u * Self::unpack(y) * ud;
        *dy = Self::pack(&(ud * rest.apply(&lab) * u), lamb_rate);
    }
}

fn rk4_step_rule(lz: LzParams, window: f64) -> impl Fn(f64) -> f64 {
    move |t| (1.0 / (2.0 * gap(t, &lz)) / 20.0).min(window / 1e5)
}

/// Integrates `ds/dt = Q s + q`, `dχ_j/dt = Q χ_j + q r_j` from `t_int` and
/// samples the state on `grid`. The reference vector is carried unchanged.
pub fn evolve_numeric(
    init: &PauliState,
    t_int: f64,
    t_end: f64,
    lz: &LzParams,
    bath: &BathParams,
    grid: &[f64],
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    check_window(init, t_int, t_end, grid)?;
    cfg.validate()?;
    let generator = Generator::new(*lz, *bath, t_int, t_end)?;
    let sys = PauliSystem {
        frame: Frame::new(&generator, t_int),
        r: init.r,
    };
    let r = init.r;
    let check = |t: f64, y: &[f64; PAULI_DIM]| {
        let st = sys.lab_state(t, y, r);
        bounds_check(t, &st.s, &st.r, &st.chi, STATE_ABORT_TOL)
    };
    let y0 = init.to_ode();
    let (ys, stats) = match cfg.method {
        SolverMethod::Dopri5 => dopri5(&sys, t_int, y0, grid, &cfg.dopri5_options(), check)?,
        SolverMethod::FixedRk4 => rk4_fixed(
            &sys,
            t_int,
            y0,
            grid,
            rk4_step_rule(*lz, t_end - t_int),
            check,
        )?,
    };
    let states: Vec<PauliState> = grid
        .iter()
        .zip(&ys)
        .map(|(&t, y)| sys.lab_state(t, y, r))
        .collect();
    let traces = vec![0.0; states.len()];
    finish(grid, states, traces, lz, bath, cfg, stats)
}

/// Integrates `dρ/dt = (L_t ⊗ id) ρ` for the assembled 4x4 density matrix
/// and projects each sample back onto Pauli coordinates.
pub fn evolve_full_master(
    init: &PauliState,
    t_int: f64,
    t_end: f64,
    lz: &LzParams,
    bath: &BathParams,
    grid: &[f64],
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    check_window(init, t_int, t_end, grid)?;
    cfg.validate()?;
    let generator = Generator::new(*lz, *bath, t_int, t_end)?;
    let sys = MasterSystem {
        frame: Frame::new(&generator, t_int),
    };
    let y0 = MasterSystem::pack(&assemble_density(init), 0.0);
    let check = |t: f64, y: &[f64; MASTER_DIM]| {
        let st = pauli_project(&sys.lab_density(t, y))?;
        bounds_check(t, &st.s, &st.r, &st.chi, STATE_ABORT_TOL)
    };
    let (ys, stats) = match cfg.method {
        SolverMethod::Dopri5 => dopri5(&sys, t_int, y0, grid, &cfg.dopri5_options(), check)?,
        SolverMethod::FixedRk4 => rk4_fixed(
            &sys,
            t_int,
            y0,
            grid,
            rk4_step_rule(*lz, t_end - t_int),
            check,
        )?,
    };
    let mut states = Vec::with_capacity(ys.len());
    let mut traces = Vec::with_capacity(ys.len());
    for (&t, y) in grid.iter().zip(&ys) {
        let rho = sys.lab_density(t, y);
        traces.push((rho.trace() - Complex64::new(1.0, 0.0)).norm());
        states.push(pauli_project(&rho)?);
    }
    finish(grid, states, traces, lz, bath, cfg, stats)
}

fn finish(
    grid: &[f64],
    states: Vec<PauliState>,
    trace_error: Vec<f64>,
    lz: &LzParams,
    bath: &BathParams,
    cfg: &SolverConfig,
    solver_stats: SolverStats,
) -> Result<Trajectory> {
    let mut negativity = Vec::with_capacity(states.len());
    let mut min_eigenvalue = Vec::with_capacity(states.len());
    let mut secular_ok = Vec::with_capacity(states.len());
    let mut secular_margin = Vec::with_capacity(states.len());
    for (&t, st) in grid.iter().zip(&states) {
        let rho = assemble_density(st);
        let lowest = hermitian_eigenvalues(&rho)?[0];
        if lowest < -STATE_ABORT_TOL {
            return Err(Error::InvariantViolation {
                t,
                what: "min eigenvalue",
                value: lowest,
            });
        }
        min_eigenvalue.push(lowest);
        negativity.push(negativity_of_state_unchecked(st)?);
        let report = timescales(t, lz, bath, cfg.secular_threshold);
        secular_ok.push(report.secular_ok);
        secular_margin.push(report.margin);
    }
    Ok(Trajectory {
        times: grid.to_vec(),
        states,
        negativity,
        secular_ok,
        secular_margin,
        trace_error,
        min_eigenvalue,
        solver_stats,
    })
}

/// Outcome of [`negativity_crossing`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    /// First time the negativity is at or below the threshold, if reached
    /// before `t_max`.
    pub time: Option<f64>,
    /// Last time integrated.
    pub t_reached: f64,
    pub all_secular: bool,
    pub min_secular_margin: f64,
    pub solver_stats: SolverStats,
}

/// Integrates forward in chunks of `chunk` time units, sampled every
/// `spacing`, until the negativity first drops to `threshold` or `t_max` is
/// reached.
#[allow(clippy::too_many_arguments)]
pub fn negativity_crossing(
    init: &PauliState,
    t_int: f64,
    t_max: f64,
    lz: &LzParams,
    bath: &BathParams,
    threshold: f64,
    spacing: f64,
    chunk: f64,
    cfg: &SolverConfig,
) -> Result<Crossing> {
    if !(spacing > 0.0 && chunk >= spacing) {
        return Err(Error::Precondition(format!(
            "sample spacing {spacing} and chunk length {chunk} must satisfy 0 < spacing <= chunk"
        )));
    }
    let mut out = Crossing {
        time: None,
        t_reached: t_int,
        all_secular: true,
        min_secular_margin: f64::INFINITY,
        solver_stats: SolverStats::default(),
    };
    let mut state = *init;
    let mut start = t_int;
    while start < t_max {
        let end = (start + chunk).min(t_max);
        let n = (((end - start) / spacing).ceil() as usize).max(1) + 1;
        let grid = uniform_grid(start, end, n);
        let traj = evolve_numeric(&state, start, end, lz, bath, &grid, cfg)?;
        out.solver_stats.merge(&traj.solver_stats);
        out.all_secular &= traj.all_secular();
        out.min_secular_margin = out.min_secular_margin.min(traj.min_secular_margin());
        out.t_reached = end;
        if let Some(t) = traj.first_time_below(threshold) {
            out.time = Some(t);
            return Ok(out);
        }
        state = *traj.last_state();
        start = end;
    }
    Ok(out)
}

/// Closed-form state in the slow-driving regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlowSolution {
    pub state: PauliState,
    /// False when `v · max(|t_int|, |t|) > 0.1 Δ`, i.e. outside the regime
    /// where the frozen coefficients apply.
    pub within_slow_regime: bool,
}

/// Slow-regime guard `v · max(|t_int|, |t|) ≤ 0.1 Δ`.
pub fn is_slow_regime(t_int: f64, t: f64, lz: &LzParams) -> bool {
    lz.v * t_int.abs().max(t.abs()) <= 0.1 * lz.delta
}

/// Evaluates the constant-coefficient solution with `k, a±, b` frozen at
/// `φ = π/4`, `Ω = Δ`.
///
/// With `τ = t - t_int`, the transverse components rotate by `2kτ` while
/// decaying as `e^{-bτ}`, and the longitudinal ones relax as `e^{-2a₊τ}`
/// towards `-a₋/a₊` (for `s₃`) or `-(a₋/a₊) r_j` (for `χ_3j`). When `a₊ = 0`
/// the rates all vanish and the longitudinal components stay put.
pub fn evolve_slow_analytic(
    init: &PauliState,
    t_int: f64,
    t: f64,
    lz: &LzParams,
    bath: &BathParams,
) -> Result<SlowSolution> {
    lz.validate()?;
    bath.validate()?;
    let c = slow_limit_coefficients(lz, bath)?;
    let tau = t - t_int;
    let within_slow_regime = is_slow_regime(t_int, t, lz);
    if tau == 0.0 {
        return Ok(SlowSolution {
            state: *init,
            within_slow_regime,
        });
    }
    let transverse = (-c.b * tau).exp();
    let (sin, cos) = (2.0 * c.k * tau).sin_cos();
    let relax = |x0: f64, target: f64| {
        if c.a_plus == 0.0 {
            x0
        } else {
            let settled = -(-2.0 * c.a_plus * tau).exp_m1();
            x0 + (target - x0) * settled
        }
    };
    let ratio = if c.a_plus == 0.0 {
        0.0
    } else {
        c.a_minus / c.a_plus
    };

    let rotate = |x: f64, y: f64| {
        (
            transverse * (x * cos - y * sin),
            transverse * (x * sin + y * cos),
        )
    };

    let mut st = *init;
    (st.s[0], st.s[1]) = rotate(init.s[0], init.s[1]);
    st.s[2] = relax(init.s[2], -ratio);
    for j in 0..3 {
        (st.chi[0][j], st.chi[1][j]) = rotate(init.chi[0][j], init.chi[1][j]);
        st.chi[2][j] = relax(init.chi[2][j], -ratio * init.r[j]);
    }
    Ok(SlowSolution {
        state: st,
        within_slow_regime,
    })
}
