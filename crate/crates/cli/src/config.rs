use std::f64::consts::PI;

use hpot::expansion::FitOptions;

use crate::CliError;

/// Largest order accepted; the solver cost grows steeply past it.
pub const MAX_ORDER: u32 = 24;
pub const MIN_PRECISION: u32 = 53;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Sum,
    Fourier,
    Conv,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Sum => "sum",
            Method::Fourier => "fourier",
            Method::Conv => "conv",
        }
    }
}

/// Every knob the commands read, with the defaults used to reproduce the
/// published tables.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Bundled walk name or path to a walk file.
    pub walk: String,
    pub order: u32,
    pub precision: u32,
    pub format: Format,
    /// Order solved to before fitting; the report is truncated to `order`.
    pub fit_order: u32,
    pub fit: FitOptions,
    /// Rays per verification sweep; 0 means the diagonal alone.
    pub rays: usize,
    pub verify_radii: (f64, f64, usize),
    /// Allowed excess of the fitted slope over `-order`.
    pub slope_tolerance: f64,
    /// Largest fit residual treated as a pass.
    pub fit_tolerance: f64,
    pub r_max: f64,
    pub conv_radius: usize,
    pub conv_iterations: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            walk: "z2-simple".into(),
            order: 9,
            precision: 256,
            format: Format::Table,
            fit_order: 22,
            fit: FitOptions {
                radii: vec![60.0, 85.0, 120.0, 170.0, 240.0],
                rays: (0..16).map(|j| 2.0 * PI * j as f64 / 16.0).collect(),
                max_denominator: 10_000,
                prec: 192,
            },
            rays: 0,
            verify_radii: (20.0, 200.0, 8),
            slope_tolerance: 0.3,
            fit_tolerance: 1e-10,
            r_max: 400.0,
            conv_radius: 200,
            conv_iterations: 8,
        }
    }
}

impl RunConfig {
    pub fn with_walk(walk: &str) -> Self {
        RunConfig { walk: walk.into(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.order > MAX_ORDER {
            return Err(CliError::Budget(format!("order {} exceeds the limit {MAX_ORDER}", self.order)));
        }
        if self.order < 2 {
            return Err(CliError::Usage(format!("order must be at least 2, got {}", self.order)));
        }
        if self.precision < MIN_PRECISION {
            return Err(CliError::Budget(format!("precision {} is below {MIN_PRECISION} bits", self.precision)));
        }
        let (lo, hi, n) = self.verify_radii;
        if !(lo > 0.0 && hi > lo && n >= 2) {
            return Err(CliError::Usage(format!("bad radius range {lo}..{hi} with {n} points")));
        }
        Ok(())
    }
}
