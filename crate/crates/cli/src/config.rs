use serde::{Deserialize, Serialize};

use mobius_core::function_space::{DEFAULT_HALF_WIDTH, DEFAULT_SAMPLES};
use mobius_core::ktheory::DEFAULT_HOMOTOPY_STEPS;
use mobius_core::Grid;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

/// Run configuration shared by every claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub half_width: f64,
    /// Must be odd so the grid is symmetric and contains 0.
    pub samples: usize,
    /// Pass threshold for the homotopy samples and the group-algebra identities.
    pub tolerance: f64,
    pub homotopy_steps: usize,
    pub output: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            half_width: DEFAULT_HALF_WIDTH,
            samples: DEFAULT_SAMPLES,
            tolerance: 1e-8,
            homotopy_steps: DEFAULT_HOMOTOPY_STEPS,
            output: OutputFormat::Text,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(CliError::Config(format!(
                "half-width must be positive, got {}",
                self.half_width
            )));
        }
        if self.samples < 3 || self.samples.is_multiple_of(2) {
            return Err(CliError::Config(format!(
                "samples must be odd and at least 3 so the grid contains 0, got {}",
                self.samples
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1e-2) {
            return Err(CliError::Config(format!(
                "tolerance must lie in (0, 1e-2), got {}",
                self.tolerance
            )));
        }
        if self.homotopy_steps == 0 {
            return Err(CliError::Config("homotopy steps must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        self.validate()?;
        Grid::uniform(self.half_width, self.samples).map_err(|e| CliError::Config(e.to_string()))
    }
}
