use serde::Serialize;

use super::ProtocolError;
use crate::fuzzy::Grid;

/// Parameters shared by every bundled protocol model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolConfig {
    pub leak_enabled: bool,
    pub alpha_threshold: f64,
    pub coarse_sigma: f64,
    pub fine_sigma: f64,
    pub forge_sigma_bound: f64,
    /// Key-domain value the side channel is centred on.
    pub leak_mean: f64,
    pub delta: f64,
    /// Decimal places kept for σ.
    pub precision: u32,
    pub store_size: usize,
    pub term_depth: usize,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            leak_enabled: false,
            alpha_threshold: 0.5,
            coarse_sigma: 37.95,
            fine_sigma: 5.0,
            forge_sigma_bound: 5.0,
            leak_mean: 50.0,
            delta: Grid::DEFAULT_DELTA,
            precision: 2,
            store_size: 2,
            term_depth: 3,
        }
    }
}

impl ProtocolConfig {
    pub fn leaky() -> Self {
        ProtocolConfig {
            leak_enabled: true,
            ..Self::default()
        }
    }

    pub fn with_leak(mut self, on: bool) -> Self {
        self.leak_enabled = on;
        self
    }

    pub fn grid(&self) -> Result<Grid, ProtocolError> {
        Ok(Grid::new(self.delta)?)
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        let bad = |m: &str| Err(ProtocolError::InvalidConfig(m.to_string()));
        let grid = self.grid()?;
        for (name, s) in [
            ("coarse_sigma", self.coarse_sigma),
            ("fine_sigma", self.fine_sigma),
            ("forge_sigma_bound", self.forge_sigma_bound),
        ] {
            if !(s.is_finite() && s > 0.0) {
                return bad(&format!("{name} must be positive"));
            }
        }
        if !(self.alpha_threshold > 0.0 && self.alpha_threshold <= 1.0) {
            return bad("alpha_threshold must lie in (0, 1]");
        }
        if grid.quantize(self.alpha_threshold).value() != self.alpha_threshold {
            return bad("alpha_threshold must be a grid point");
        }
        if !(0.0..=255.0).contains(&self.leak_mean) {
            return bad("leak_mean must lie in the key domain");
        }
        if self.precision > 4 {
            return bad("precision above 4 decimal places is not supported");
        }
        if self.store_size < 1 || self.store_size > 3 {
            return bad("store_size must be between 1 and 3");
        }
        if self.term_depth < 1 {
            return bad("term_depth must be at least 1");
        }
        Ok(())
    }

    pub(crate) fn sigma_scale(&self) -> f64 {
        10f64.powi(self.precision as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ProtocolConfig::default().validate().unwrap();
        ProtocolConfig::leaky().validate().unwrap();
    }

    #[test]
    fn rejects_inconsistent_bounds() {
        let c = ProtocolConfig {
            store_size: 0,
            ..ProtocolConfig::default()
        };
        assert!(c.validate().is_err());
        let c = ProtocolConfig {
            fine_sigma: -1.0,
            ..ProtocolConfig::default()
        };
        assert!(c.validate().is_err());
        let c = ProtocolConfig {
            alpha_threshold: 0.505,
            ..ProtocolConfig::default()
        };
        assert!(c.validate().is_err());
        let c = ProtocolConfig {
            delta: 0.3,
            ..ProtocolConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
