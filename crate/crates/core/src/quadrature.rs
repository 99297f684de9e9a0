//! Adaptive Simpson quadrature.

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the per-panel Richardson error estimates.
    pub error: f64,
    pub evaluations: usize,
    /// False when some panel hit the depth limit before meeting its tolerance.
    pub converged: bool,
}

impl Integral {
    fn zero() -> Self {
        Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    fn absorb(&mut self, other: Integral) {
        self.value += other.value;
        self.error += other.error;
        self.evaluations += other.evaluations;
        self.converged &= other.converged;
    }
}

pub const DEFAULT_MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Integral {
    adaptive_simpson_with(f, a, b, tol, max_depth, 0.0)
}

/// [`adaptive_simpson`] that also stops splitting panels narrower than
/// `min_width`. Below that width roundoff in `f` can dominate the local
/// error estimate.
pub fn adaptive_simpson_with<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
    min_width: f64,
) -> Integral {
    if a == b {
        return Integral::zero();
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut out = Integral {
        evaluations: 3,
        ..Integral::zero()
    };
    let limits = Limits {
        depth: max_depth,
        min_width,
    };
    recurse(f, a, b, fa, fm, fb, whole, tol, limits, &mut out);
    out
}

/// Integrates piecewise over consecutive `breakpoints`, sharing the tolerance
/// in proportion to segment length.
pub fn adaptive_simpson_pieces<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    tol: f64,
    max_depth: u32,
) -> Integral {
    adaptive_simpson_pieces_with(f, breakpoints, tol, max_depth, 0.0)
}

/// [`adaptive_simpson_pieces`] with a minimum panel width.
pub fn adaptive_simpson_pieces_with<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    tol: f64,
    max_depth: u32,
    min_width: f64,
) -> Integral {
    let span: f64 = breakpoints.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let mut total = Integral::zero();
    if span == 0.0 {
        return total;
    }
    for w in breakpoints.windows(2) {
        let share = tol * (w[1] - w[0]).abs() / span;
        total.absorb(adaptive_simpson_with(
            f, w[0], w[1], share, max_depth, min_width,
        ));
    }
    total
}

#[derive(Clone, Copy)]
struct Limits {
    depth: u32,
    min_width: f64,
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    limits: Limits,
    out: &mut Integral,
) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    out.evaluations += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let floor = limits.depth == 0 || (b - a).abs() <= limits.min_width;
    if delta.abs() <= 15.0 * tol || floor || m <= a || m >= b {
        out.value += left + right + delta / 15.0;
        out.error += delta.abs() / 15.0;
        if delta.abs() > 15.0 * tol {
            out.converged = false;
        }
        return;
    }
    let next = Limits {
        depth: limits.depth - 1,
        ..limits
    };
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, next, out);
    recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, next, out);
}
