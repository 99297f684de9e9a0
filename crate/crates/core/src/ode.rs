//! Explicit Runge-Kutta integrators for small fixed-size systems.
//!
//! [`dopri5`] is the Dormand-Prince 5(4) pair with Hairer's 4th-order
//! continuous extension; output times are served from the dense output so
//! they never constrain the step size. [`rk4_fixed`] is a classical RK4 with
//! caller-chosen steps, kept for audit runs.

use serde::Serialize;

use crate::error::{Error, Result};

pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N], dy: &mut [f64; N]);
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SolverStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    /// Largest scaled error norm among accepted steps (1 = at tolerance).
    pub max_error_norm: f64,
    pub min_step: f64,
    pub max_step: f64,
}

impl SolverStats {
    fn record_step(&mut self, h: f64, err: f64) {
        if self.accepted_steps == 0 {
            self.min_step = h;
            self.max_step = h;
        } else {
            self.min_step = self.min_step.min(h);
            self.max_step = self.max_step.max(h);
        }
        self.accepted_steps += 1;
        self.max_error_norm = self.max_error_norm.max(err);
    }

    /// Combines the statistics of consecutive runs.
    pub fn merge(&mut self, other: &SolverStats) {
        if other.accepted_steps > 0 {
            if self.accepted_steps == 0 {
                self.min_step = other.min_step;
                self.max_step = other.max_step;
            } else {
                self.min_step = self.min_step.min(other.min_step);
                self.max_step = self.max_step.max(other.max_step);
            }
        }
        self.accepted_steps += other.accepted_steps;
        self.rejected_steps += other.rejected_steps;
        self.rhs_evaluations += other.rhs_evaluations;
        self.max_error_norm = self.max_error_norm.max(other.max_error_norm);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Upper bound on the step; infinite by default.
    pub h_max: f64,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Dopri5Options {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 200_000_000,
            h_max: f64::INFINITY,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

fn check_grid(t0: f64, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Precondition("output grid is empty".into()));
    }
    if grid[0] < t0 {
        return Err(Error::Precondition(format!(
            "output grid starts at {} before the initial time {t0}",
            grid[0]
        )));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition(
            "output grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

#[inline]
fn error_weight(a: f64, b: f64, opts: &Dopri5Options) -> f64 {
    opts.atol + opts.rtol * a.abs().max(b.abs())
}

/// Integrates `sys` from `(t0, y0)` and returns the solution at each `grid`
/// time. `check` runs after every accepted step and may abort the run.
pub fn dopri5<const N: usize, S, C>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    grid: &[f64],
    opts: &Dopri5Options,
    mut check: C,
) -> Result<(Vec<[f64; N]>, SolverStats)>
where
    S: OdeSystem<N>,
    C: FnMut(f64, &[f64; N]) -> Result<()>,
{
    check_grid(t0, grid)?;
    let t_end = *grid.last().unwrap();
    let mut stats = SolverStats::default();
    let mut out = Vec::with_capacity(grid.len());
    let mut next = 0;
    while next < grid.len() && grid[next] == t0 {
        out.push(y0);
        next += 1;
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = [0.0; N];
    sys.rhs(t, &y, &mut k1);
    stats.rhs_evaluations += 1;
    if t_end == t0 {
        return Ok((out, stats));
    }

    let mut h = initial_step(sys, t, &y, &k1, t_end - t0, opts, &mut stats).min(opts.h_max);
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        ([0.0; N], [0.0; N], [0.0; N], [0.0; N], [0.0; N], [0.0; N]);
    let mut ytmp = [0.0; N];
    let mut ynew = [0.0; N];
    let mut last_rejected = false;

    while t < t_end {
        if stats.accepted_steps + stats.rejected_steps >= opts.max_steps {
            return Err(Error::TooManySteps {
                t,
                max_steps: opts.max_steps,
            });
        }
        if h < 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        for i in 0..N {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        sys.rhs(t + C2 * h, &ytmp, &mut k2);
        for i in 0..N {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.rhs(t + C3 * h, &ytmp, &mut k3);
        for i in 0..N {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.rhs(t + C4 * h, &ytmp, &mut k4);
        for i in 0..N {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.rhs(t + C5 * h, &ytmp, &mut k5);
        for i in 0..N {
            ytmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t_end } else { t + h };
        sys.rhs(t_new, &ytmp, &mut k6);
        for i in 0..N {
            ynew[i] =
                y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        sys.rhs(t_new, &ynew, &mut k7);
        stats.rhs_evaluations += 6;

        let mut err = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = error_weight(y[i], ynew[i], opts);
            err += (e / sc) * (e / sc);
        }
        let err = (err / N as f64).sqrt();

        if err <= 1.0 {
            check(t_new, &ynew)?;
            // Dense output on (t, t_new].
            if next < grid.len() && grid[next] <= t_new {
                let mut cont = [[0.0; N]; 5];
                for i in 0..N {
                    let ydiff = ynew[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    cont[0][i] = y[i];
                    cont[1][i] = ydiff;
                    cont[2][i] = bspl;
                    cont[3][i] = ydiff - h * k7[i] - bspl;
                    cont[4][i] = h
                        * (D1 * k1[i]
                            + D3 * k3[i]
                            + D4 * k4[i]
                            + D5 * k5[i]
                            + D6 * k6[i]
                            + D7 * k7[i]);
                }
                while next < grid.len() && grid[next] <= t_new {
                    if grid[next] == t_new {
                        out.push(ynew);
                    } else {
                        let s = (grid[next] - t) / h;
                        let s1 = 1.0 - s;
                        let mut yi = [0.0; N];
                        for i in 0..N {
                            yi[i] = cont[0][i]
                                + s * (cont[1][i]
                                    + s1 * (cont[2][i] + s * (cont[3][i] + s1 * cont[4][i])));
                        }
                        out.push(yi);
                    }
                    next += 1;
                }
            }
            stats.record_step(h, err);
            t = t_new;
            y = ynew;
            k1 = k7;
            let mut fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
            };
            if last_rejected {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(opts.h_max);
            last_rejected = false;
        } else {
            stats.rejected_steps += 1;
            h *= (SAFETY * err.powf(-0.2)).max(FAC_MIN);
            last_rejected = true;
        }
    }
    debug_assert_eq!(out.len(), grid.len());
    Ok((out, stats))
}

fn initial_step<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    span: f64,
    opts: &Dopri5Options,
    stats: &mut SolverStats,
) -> f64 {
    let norm = |v: &[f64; N]| {
        let s: f64 = (0..N)
            .map(|i| {
                let x = v[i] / error_weight(y[i], y[i], opts);
                x * x
            })
            .sum();
        (s / N as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
    .min(span);
    let mut y1 = [0.0; N];
    for i in 0..N {
        y1[i] = y[i] + h0 * f0[i];
    }
    let mut f1 = [0.0; N];
    sys.rhs(t + h0, &y1, &mut f1);
    stats.rhs_evaluations += 1;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Classical RK4 with the step size chosen by `step(t)`, shortened to land on
/// every grid time.
pub fn rk4_fixed<const N: usize, S, H, C>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    grid: &[f64],
    step: H,
    mut check: C,
) -> Result<(Vec<[f64; N]>, SolverStats)>
where
    S: OdeSystem<N>,
    H: Fn(f64) -> f64,
    C: FnMut(f64, &[f64; N]) -> Result<()>,
{
    check_grid(t0, grid)?;
    let mut stats = SolverStats::default();
    let mut out = Vec::with_capacity(grid.len());
    let mut t = t0;
    let mut y = y0;
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        ([0.0; N], [0.0; N], [0.0; N], [0.0; N], [0.0; N]);
    for &target in grid {
        while t < target {
            let mut h = step(t);
            if !(h > 0.0) || h < 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t, h });
            }
            let last = t + h >= target;
            if last {
                h = target - t;
            }
            sys.rhs(t, &y, &mut k1);
            for i in 0..N {
                tmp[i] = y[i] + 0.5 * h * k1[i];
            }
            sys.rhs(t + 0.5 * h, &tmp, &mut k2);
            for i in 0..N {
                tmp[i] = y[i] + 0.5 * h * k2[i];
            }
            sys.rhs(t + 0.5 * h, &tmp, &mut k3);
            for i in 0..N {
                tmp[i] = y[i] + h * k3[i];
            }
            let t_new = if last { target } else { t + h };
            sys.rhs(t_new, &tmp, &mut k4);
            for i in 0..N {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            stats.rhs_evaluations += 4;
            stats.record_step(h, 0.0);
            t = t_new;
            check(t, &y)?;
        }
        out.push(y);
    }
    Ok((out, stats))
}
