//! Speed units and conversions.
//!
//! All physics runs in SI units; km/h appears only at the stopping-distance
//! formula, the frame codecs, and user-facing config/output. Keeping one
//! conversion site avoids unit bugs, so everything funnels through the two
//! raw helpers below.

use crate::error::{Error, Result};

pub const KMH_PER_MPS: f64 = 3.6;

#[inline]
pub(crate) fn kmh_to_mps_raw(kmh: f64) -> f64 {
    kmh / KMH_PER_MPS
}

#[inline]
pub(crate) fn mps_to_kmh_raw(mps: f64) -> f64 {
    mps * KMH_PER_MPS
}

/// Speed in kilometers per hour, non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SpeedKmh(f64);

/// Speed in meters per second, non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SpeedMps(f64);

impl SpeedKmh {
    pub fn new(value: f64) -> Result<Self> {
        check_speed(value, "speed [km/h]")?;
        Ok(SpeedKmh(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_mps(self) -> SpeedMps {
        SpeedMps(kmh_to_mps_raw(self.0))
    }
}

impl SpeedMps {
    pub fn new(value: f64) -> Result<Self> {
        check_speed(value, "speed [m/s]")?;
        Ok(SpeedMps(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_kmh(self) -> SpeedKmh {
        SpeedKmh(mps_to_kmh_raw(self.0))
    }
}

fn check_speed(value: f64, what: &'static str) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite { what });
    }
    if value < 0.0 {
        return Err(Error::NegativeValue { what, value });
    }
    Ok(())
}

/// km/h to m/s; negative input is rejected.
pub fn kmh_to_mps(speed: f64) -> Result<f64> {
    Ok(SpeedKmh::new(speed)?.to_mps().value())
}

/// m/s to km/h; negative input is rejected.
pub fn mps_to_kmh(speed: f64) -> Result<f64> {
    Ok(SpeedMps::new(speed)?.to_kmh().value())
}
