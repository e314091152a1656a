use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

/// Pan dial in degrees: -45 is hard left, 0 center, +45 hard right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanPosition(f64);

impl PanPosition {
    pub const CENTER: PanPosition = PanPosition(0.0);
    pub const LEFT: PanPosition = PanPosition(-45.0);
    pub const RIGHT: PanPosition = PanPosition(45.0);

    pub fn new(angle_deg: f64) -> Result<Self> {
        if !(-45.0..=45.0).contains(&angle_deg) {
            return Err(Error::invalid(format!(
                "pan angle {angle_deg} outside [-45, 45]"
            )));
        }
        Ok(PanPosition(angle_deg))
    }

    pub fn angle_deg(&self) -> f64 {
        self.0
    }

    /// Constant-power `(left, right)` gains.
    pub fn gains(&self) -> (f64, f64) {
        let theta = (self.0 + 45.0) / 90.0 * FRAC_PI_2;
        (theta.cos(), theta.sin())
    }
}

pub fn pan(x: f64, position: PanPosition) -> (f64, f64) {
    let (l, r) = position.gains();
    (x * l, x * r)
}
