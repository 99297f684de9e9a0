use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;
use lzd_core::SolverMethod;

use crate::config::{
    ConfigError, ExperimentConfig, Overrides, Preset, Scale, SweepOverrides, SweepVariable,
};
use crate::experiments;
use crate::output::{self, Format};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_SECULAR: u8 = 3;

fn parse_method(s: &str) -> Result<SolverMethod, String> {
    match s {
        "dopri5" => Ok(SolverMethod::Dopri5),
        "fixed-rk4" => Ok(SolverMethod::FixedRk4),
        _ => Err(format!(
            "unknown method `{s}` (expected dopri5 or fixed-rk4)"
        )),
    }
}

/// Entanglement decay of a qubit pair when one qubit is driven through a
/// dissipative Landau-Zener crossing.
///
/// Presets fig2..fig5 reproduce the survival-time, coupling-angle, time and
/// adiabaticity studies; `custom` writes a full trajectory. Settings are
/// layered: preset, then `--config` file, then flags.
#[derive(Debug, Parser)]
#[command(name = "lz-dissipate", version)]
pub struct Cli {
    /// Preset to start from.
    #[arg(value_enum)]
    pub preset: Preset,

    /// Output file.
    #[arg(long)]
    pub out: PathBuf,

    /// TOML file with overrides (same keys as the flags, sweep as a table).
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,

    /// Exit with status 3 if any sample violates the secular-validity check.
    #[arg(long)]
    pub strict_secular: bool,

    /// Minimum gap parameter Δ.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Sweep rate v.
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Coupling angle θ in degrees.
    #[arg(long, allow_negative_numbers = true)]
    pub theta_deg: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub temperature: Option<f64>,
    /// Coupling strength λ.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Ohmic cutoff (default Δ/3).
    #[arg(long, allow_negative_numbers = true)]
    pub omega_c: Option<f64>,
    /// Schmidt angle of the initial state, radians.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_int: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
    /// Include the Lamb-shift correction to the splitting.
    #[arg(long)]
    pub lamb_shift: bool,

    /// Sweep variable: T, theta, t, delta, v or ratio.
    #[arg(long, value_parser = |s: &str| s.parse::<SweepVariable>())]
    pub sweep: Option<SweepVariable>,
    #[arg(long, allow_negative_numbers = true)]
    pub sweep_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sweep_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
    /// Comparison values, one column each (Δ for fig4, θ in degrees for fig5).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub compare: Option<Vec<f64>>,

    /// Negativity level defining the numerical survival time.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Integrator: dopri5 or fixed-rk4.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<SolverMethod>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    /// Step budget per integration.
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Factor by which the beat time must undercut the other timescales.
    #[arg(long)]
    pub secular_threshold: Option<f64>,
    /// Also run the 4x4 master-equation propagator (custom time trajectories).
    #[arg(long)]
    pub oracle: bool,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        let sweep = SweepOverrides {
            variable: self.sweep,
            min: self.sweep_min,
            max: self.sweep_max,
            points: self.points,
            scale: self.scale,
        };
        Overrides {
            delta: self.delta,
            v: self.v,
            theta_deg: self.theta_deg,
            temperature: self.temperature,
            lambda: self.lambda,
            omega_c: self.omega_c,
            eta: self.eta,
            t_int: self.t_int,
            t_end: self.t_end,
            lamb_shift: self.lamb_shift.then_some(true),
            zero_frequency_rate: None,
            sweep: (!sweep.is_empty()).then_some(sweep),
            compare: self.compare.clone(),
            threshold: self.threshold,
            method: self.method,
            rtol: self.rtol,
            atol: self.atol,
            max_steps: self.max_steps,
            secular_threshold: self.secular_threshold,
            oracle: self.oracle.then_some(true),
        }
    }

    /// Preset, then config file, then flags.
    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut cfg = self.preset.config();
        if let Some(path) = &self.config {
            cfg.apply(&ExperimentConfig::load_overrides(path)?)?;
        }
        cfg.apply(&self.overrides())?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs the command and returns the process exit status.
pub fn execute(cli: &Cli) -> u8 {
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return EXIT_CONFIG;
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_CONFIG;
        }
    };
    let result = pool.install(|| experiments::run(&cfg));

    let file = match File::create(&cli.out) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", cli.out.display());
            return EXIT_CONFIG;
        }
    };
    let mut out = BufWriter::new(file);
    let (written, code) = match &result {
        Ok(table) => {
            let meta = output::metadata(cli.preset, &cfg, Some(table));
            let w = output::write_table(&mut out, cli.format, &meta, table);
            let s = table.secular;
            let code = if s.violations > 0 {
                eprintln!(
                    "warning: {} of {} samples fail the secular-validity check",
                    s.violations, s.samples
                );
                if cli.strict_secular {
                    EXIT_SECULAR
                } else {
                    EXIT_OK
                }
            } else {
                EXIT_OK
            };
            (w, code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let meta = output::metadata(cli.preset, &cfg, None);
            let w = output::write_failure(&mut out, cli.format, &meta, &e.to_string());
            (
                w,
                if e.is_solver_failure() {
                    EXIT_SOLVER
                } else {
                    EXIT_CONFIG
                },
            )
        }
    };
    if let Err(e) = written.and_then(|_| out.flush()) {
        eprintln!("error: writing {}: {e}", cli.out.display());
        return EXIT_CONFIG;
    }
    code
}
