//! Experiment configuration: hard-coded presets, TOML files and flag
//! overrides, applied in that order.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use lzd_core::bath::DEFAULT_PV_WINDOW;
use lzd_core::{BathParams, LzParams, SolverConfig, SolverMethod, ZeroFrequencyRate};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Custom,
    ];

    pub fn config(self) -> ExperimentConfig {
        let base = ExperimentConfig {
            experiment: Experiment::CustomTrajectory,
            delta: 10.0,
            v: 1.0,
            theta_deg: 0.0,
            temperature: 0.0,
            lambda: 0.1,
            omega_c: None,
            eta: FRAC_PI_4,
            t_int: -40.0,
            t_end: 40.0,
            lamb_shift: false,
            zero_frequency_rate: ZeroFrequencyRate::OhmicLimit,
            sweep: Sweep::time(-40.0, 40.0, 401),
            compare: Vec::new(),
            threshold: 1e-6,
            solver: SolverSettings::default(),
            oracle: false,
        };
        match self {
            Preset::Fig2 => ExperimentConfig {
                experiment: Experiment::TauEntVsT,
                v: 1e-6,
                t_int: 0.0,
                t_end: 1e5,
                sweep: Sweep {
                    variable: SweepVariable::Temperature,
                    min: 0.0,
                    max: 10.0,
                    points: 11,
                    scale: Scale::Linear,
                },
                ..base
            },
            Preset::Fig3 => ExperimentConfig {
                experiment: Experiment::NegVsTheta,
                v: 1e-4,
                t_int: -100.0,
                t_end: 100.0,
                sweep: Sweep {
                    variable: SweepVariable::Theta,
                    min: 0.0,
                    max: 90.0,
                    points: 91,
                    scale: Scale::Linear,
                },
                ..base
            },
            Preset::Fig4 => ExperimentConfig {
                experiment: Experiment::NegVsTime,
                sweep: Sweep::time(-40.0, 40.0, 801),
                compare: vec![0.1, 100.0],
                ..base
            },
            Preset::Fig5 => ExperimentConfig {
                experiment: Experiment::NegVsRatio,
                sweep: Sweep {
                    variable: SweepVariable::Ratio,
                    min: 0.01,
                    max: 1000.0,
                    points: 41,
                    scale: Scale::Log,
                },
                compare: vec![0.0, 90.0],
                ..base
            },
            Preset::Custom => base,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    #[serde(rename = "tau-ent-vs-T")]
    TauEntVsT,
    NegVsTheta,
    NegVsTime,
    NegVsRatio,
    CustomTrajectory,
}

impl Experiment {
    /// Sweep variable the experiment is defined over, if fixed.
    fn required_variable(self) -> Option<SweepVariable> {
        match self {
            Experiment::TauEntVsT => Some(SweepVariable::Temperature),
            Experiment::NegVsTheta => Some(SweepVariable::Theta),
            Experiment::NegVsTime => Some(SweepVariable::Time),
            Experiment::NegVsRatio => Some(SweepVariable::Ratio),
            Experiment::CustomTrajectory => None,
        }
    }

    /// Parameter varied across the output columns.
    pub fn compare_variable(self) -> Option<SweepVariable> {
        match self {
            Experiment::NegVsTime => Some(SweepVariable::Delta),
            Experiment::NegVsRatio => Some(SweepVariable::Theta),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "T")]
    Temperature,
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "t")]
    Time,
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "ratio")]
    Ratio,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Temperature => "T",
            SweepVariable::Theta => "theta",
            SweepVariable::Time => "t",
            SweepVariable::Delta => "delta",
            SweepVariable::V => "v",
            SweepVariable::Ratio => "ratio",
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::Theta => "theta_degrees",
            SweepVariable::Ratio => "delta_sq_over_v",
            other => other.name(),
        }
    }

    /// Label used in comparison column headers.
    pub fn label(self) -> &'static str {
        match self {
            SweepVariable::Theta => "theta_deg",
            other => other.name(),
        }
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [
            SweepVariable::Temperature,
            SweepVariable::Theta,
            SweepVariable::Time,
            SweepVariable::Delta,
            SweepVariable::V,
            SweepVariable::Ratio,
        ]
        .into_iter()
        .find(|v| v.name() == s)
        .ok_or_else(|| {
            format!("unknown sweep variable `{s}` (expected T, theta, t, delta, v or ratio)")
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Sweep {
    fn time(t_int: f64, t_end: f64, points: usize) -> Self {
        Sweep {
            variable: SweepVariable::Time,
            min: t_int,
            max: t_end,
            points,
            scale: Scale::Linear,
        }
    }

    /// Grid points, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == n - 1 {
                    return self.max;
                }
                let f = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * f,
                    Scale::Log => {
                        let (a, b) = (self.min.log10(), self.max.log10());
                        10f64.powf(a + (b - a) * f)
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub method: SolverMethod,
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub secular_threshold: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let d = SolverConfig::default();
        SolverSettings {
            method: d.method,
            rtol: d.rtol,
            atol: d.atol,
            max_steps: d.max_steps,
            secular_threshold: d.secular_threshold,
        }
    }
}

impl SolverSettings {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            method: self.method,
            max_steps: self.max_steps,
            secular_threshold: self.secular_threshold,
            ..SolverConfig::default()
        }
        .with_tolerances(self.rtol, self.atol)
    }
}

/// Fully resolved experiment. Angles `theta_deg` are in degrees, `eta` in
/// radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub delta: f64,
    pub v: f64,
    pub theta_deg: f64,
    pub temperature: f64,
    pub lambda: f64,
    /// Ohmic cutoff; `None` means `Δ/3`, following Δ when it is swept.
    pub omega_c: Option<f64>,
    /// Schmidt angle of the initial state.
    pub eta: f64,
    pub t_int: f64,
    pub t_end: f64,
    pub lamb_shift: bool,
    pub zero_frequency_rate: ZeroFrequencyRate,
    pub sweep: Sweep,
    /// Values of the comparison parameter, one output column each.
    pub compare: Vec<f64>,
    /// Negativity level defining the numerical survival time.
    pub threshold: f64,
    pub solver: SolverSettings,
    /// Also run the 4x4 master-equation propagator.
    pub oracle: bool,
}

impl ExperimentConfig {
    /// Copy with one parameter replaced. A ratio value sets `Δ = √(ratio·v)`
    /// and a time value moves `t_end`.
    pub fn with_value(&self, var: SweepVariable, x: f64) -> ExperimentConfig {
        let mut c = self.clone();
        match var {
            SweepVariable::Temperature => c.temperature = x,
            SweepVariable::Theta => c.theta_deg = x,
            SweepVariable::Time => c.t_end = x,
            SweepVariable::Delta => c.delta = x,
            SweepVariable::V => c.v = x,
            SweepVariable::Ratio => c.delta = (x * c.v).sqrt(),
        }
        c
    }

    pub fn cutoff(&self) -> f64 {
        self.omega_c.unwrap_or(self.delta / 3.0)
    }

    pub fn lz(&self) -> lzd_core::Result<LzParams> {
        LzParams::new(self.delta, self.v)
    }

    pub fn bath(&self) -> lzd_core::Result<BathParams> {
        let mut b = BathParams::ohmic(
            self.temperature,
            self.cutoff(),
            self.lambda,
            self.theta_deg.to_radians(),
        )?
        .with_lamb_shift(self.lamb_shift);
        b.zero_frequency_rate = self.zero_frequency_rate;
        // The principal-value window has to contain every transition
        // frequency 2Ω reached in the run.
        let t_max = self.t_int.abs().max(self.t_end.abs());
        let omega_max = self.delta.hypot(self.v * t_max);
        b.pv_upper_limit = DEFAULT_PV_WINDOW * b.cutoff + 2.0 * omega_max;
        b.validate()?;
        Ok(b)
    }

    pub fn compare_values(&self) -> Vec<Option<f64>> {
        if self.compare.is_empty() {
            vec![None]
        } else {
            self.compare.iter().copied().map(Some).collect()
        }
    }

    pub fn load_overrides(path: &Path) -> Result<Overrides, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(x) = o.$field.clone() {
                    self.$field = x;
                }
            )*};
        }
        set!(delta, v, theta_deg, temperature, lambda, eta, t_int, t_end);
        set!(lamb_shift, zero_frequency_rate, compare, threshold, oracle);
        if let Some(x) = o.omega_c {
            self.omega_c = Some(x);
        }
        if let Some(m) = o.method {
            self.solver.method = m;
        }
        if let Some(x) = o.rtol {
            self.solver.rtol = x;
        }
        if let Some(x) = o.atol {
            self.solver.atol = x;
        }
        if let Some(n) = o.max_steps {
            self.solver.max_steps = n;
        }
        if let Some(x) = o.secular_threshold {
            self.solver.secular_threshold = x;
        }
        if let Some(s) = &o.sweep {
            self.apply_sweep(s)?;
        }
        if self.sweep.variable == SweepVariable::Time {
            self.sweep.min = self.t_int;
            self.sweep.max = self.t_end;
        }
        Ok(())
    }

    fn apply_sweep(&mut self, s: &SweepOverrides) -> Result<(), ConfigError> {
        let variable = s.variable.unwrap_or(self.sweep.variable);
        if variable == SweepVariable::Time {
            if s.min.is_some() || s.max.is_some() {
                return bad("a time sweep spans [t_int, t_end]; set --t-int/--t-end instead of sweep bounds");
            }
        } else if variable != self.sweep.variable && (s.min.is_none() || s.max.is_none()) {
            return bad(format!(
                "sweeping `{}` needs both sweep bounds",
                variable.name()
            ));
        }
        if variable != self.sweep.variable && s.scale.is_none() {
            self.sweep.scale = Scale::Linear;
        }
        self.sweep.variable = variable;
        if let Some(x) = s.min {
            self.sweep.min = x;
        }
        if let Some(x) = s.max {
            self.sweep.max = x;
        }
        if let Some(n) = s.points {
            self.sweep.points = n;
        }
        if let Some(sc) = s.scale {
            self.sweep.scale = sc;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = [
            ("delta", self.delta),
            ("v", self.v),
            ("theta-deg", self.theta_deg),
            ("temperature", self.temperature),
            ("lambda", self.lambda),
            ("eta", self.eta),
            ("t-int", self.t_int),
            ("t-end", self.t_end),
            ("sweep min", self.sweep.min),
            ("sweep max", self.sweep.max),
            ("threshold", self.threshold),
        ];
        for (name, x) in finite {
            if !x.is_finite() {
                return bad(format!("{name} must be finite, got {x}"));
            }
        }
        if self.t_end <= self.t_int {
            return bad(format!(
                "t-end ({}) must exceed t-int ({})",
                self.t_end, self.t_int
            ));
        }
        if !(self.solver.rtol > 0.0 && self.solver.atol > 0.0) {
            return bad("rtol and atol must be positive");
        }
        if self.solver.max_steps == 0 {
            return bad("max-steps must be at least 1");
        }
        if !(self.solver.secular_threshold > 0.0) {
            return bad("secular threshold must be positive");
        }
        if let Some(w) = self.omega_c {
            if !(w > 0.0 && w.is_finite()) {
                return bad(format!("omega-c must be positive, got {w}"));
            }
        }

        let s = &self.sweep;
        if s.points < 2 {
            return bad(format!("a sweep needs at least 2 points, got {}", s.points));
        }
        if s.min >= s.max {
            return bad(format!(
                "sweep min ({}) must be below max ({})",
                s.min, s.max
            ));
        }
        if s.scale == Scale::Log && (s.min <= 0.0 || s.variable == SweepVariable::Time) {
            return bad("log sweeps need a positive range and cannot be used for time");
        }
        let positive = matches!(
            s.variable,
            SweepVariable::Delta | SweepVariable::V | SweepVariable::Ratio
        );
        if positive && s.min <= 0.0 {
            return bad(format!(
                "sweep over `{}` must stay positive",
                s.variable.name()
            ));
        }
        if s.variable == SweepVariable::Temperature && s.min < 0.0 {
            return bad("temperature sweep must be non-negative");
        }

        if let Some(v) = self.experiment.required_variable() {
            if s.variable != v {
                return bad(format!(
                    "this experiment sweeps `{}`, not `{}`",
                    v.name(),
                    s.variable.name()
                ));
            }
        }
        match self.experiment.compare_variable() {
            Some(SweepVariable::Delta) => {
                if self.compare.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
                    return bad("compared delta values must be positive");
                }
            }
            Some(_) => {
                if self.compare.iter().any(|x| !x.is_finite()) {
                    return bad("compared values must be finite");
                }
            }
            None => {
                if !self.compare.is_empty() {
                    return bad("this experiment takes no comparison values");
                }
            }
        }
        if self.experiment == Experiment::TauEntVsT {
            if self.theta_deg != 0.0 {
                return bad("the survival-time experiment requires theta-deg = 0");
            }
            if !(self.threshold > 0.0 && self.threshold < 0.5) {
                return bad("threshold must lie in (0, 1/2)");
            }
        }
        if self.oracle
            && !(self.experiment == Experiment::CustomTrajectory
                && s.variable == SweepVariable::Time)
        {
            return bad("--oracle applies to custom time trajectories only");
        }
        Ok(())
    }
}

/// Partial configuration: the layout of a TOML config file, also filled from
/// command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub delta: Option<f64>,
    pub v: Option<f64>,
    pub theta_deg: Option<f64>,
    pub temperature: Option<f64>,
    pub lambda: Option<f64>,
    pub omega_c: Option<f64>,
    pub eta: Option<f64>,
    pub t_int: Option<f64>,
    pub t_end: Option<f64>,
    pub lamb_shift: Option<bool>,
    pub zero_frequency_rate: Option<ZeroFrequencyRate>,
    pub sweep: Option<SweepOverrides>,
    pub compare: Option<Vec<f64>>,
    pub threshold: Option<f64>,
    pub method: Option<SolverMethod>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub max_steps: Option<usize>,
    pub secular_threshold: Option<f64>,
    pub oracle: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOverrides {
    pub variable: Option<SweepVariable>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
    pub scale: Option<Scale>,
}

impl SweepOverrides {
    pub fn is_empty(&self) -> bool {
        *self == SweepOverrides::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for p in Preset::ALL {
            p.config().validate().unwrap();
        }
    }

    #[test]
    fn log_sweep_hits_decades() {
        let v = Preset::Fig5.config().sweep.values();
        assert_eq!(v.len(), 41);
        assert_eq!(v[0], 0.01);
        assert_eq!(v[40], 1000.0);
        assert!((v[8] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn time_sweep_follows_window() {
        let mut c = Preset::Fig4.config();
        c.apply(&Overrides {
            t_int: Some(-10.0),
            t_end: Some(30.0),
            ..Overrides::default()
        })
        .unwrap();
        assert_eq!((c.sweep.min, c.sweep.max), (-10.0, 30.0));
        let err = c.apply(&Overrides {
            sweep: Some(SweepOverrides {
                min: Some(0.0),
                ..SweepOverrides::default()
            }),
            ..Overrides::default()
        });
        assert!(err.is_err());
    }

    #[test]
    fn rejects_wrong_sweep_variable() {
        let mut c = Preset::Fig3.config();
        c.apply(&Overrides {
            sweep: Some(SweepOverrides {
                variable: Some(SweepVariable::Delta),
                min: Some(1.0),
                max: Some(2.0),
                ..SweepOverrides::default()
            }),
            ..Overrides::default()
        })
        .unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn rejects_single_point_sweep() {
        let mut c = Preset::Custom.config();
        c.sweep.points = 1;
        assert!(c.validate().is_err());
    }

    #[test]
    fn toml_layer_parses_and_rejects_unknown_keys() {
        let o: Overrides = toml::from_str(
            "delta = 2.5\nmethod = \"fixed-rk4\"\n[sweep]\nvariable = \"T\"\nmin = 0.5\nmax = 3\n",
        )
        .unwrap();
        assert_eq!(o.delta, Some(2.5));
        assert_eq!(o.method, Some(SolverMethod::FixedRk4));
        assert_eq!(o.sweep.unwrap().variable, Some(SweepVariable::Temperature));
        assert!(toml::from_str::<Overrides>("gamma = 1").is_err());
    }

    #[test]
    fn pv_window_covers_transition_frequencies() {
        let mut c = Preset::Custom.config();
        c.delta = 2.0;
        let b = c.bath().unwrap();
        assert!(b.pv_upper_limit > 2.0 * 2f64.hypot(40.0));
    }

    #[test]
    fn ratio_sets_delta() {
        let c = Preset::Fig5.config().with_value(SweepVariable::Ratio, 4.0);
        assert_eq!(c.delta, 2.0);
        assert!((c.cutoff() - 2.0 / 3.0).abs() < 1e-15);
    }
}
