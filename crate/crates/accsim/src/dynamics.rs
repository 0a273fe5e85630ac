//! Point-mass longitudinal vehicle model.
//!
//! The lower-level controller is assumed to apply the commanded acceleration
//! exactly and synchronously, so the plant reduces to trapezoidal integration
//! of a commanded acceleration with a speed floor at zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longitudinal state of one vehicle on the straight road.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    /// Position along the road in meters.
    pub position: f64,
    /// Speed in m/s, never negative.
    pub speed: f64,
    /// Acceleration commanded during the last step, m/s².
    pub last_accel: f64,
}

impl VehicleState {
    pub fn new(position: f64, speed: f64) -> Result<Self> {
        if !position.is_finite() || !speed.is_finite() {
            return Err(Error::NonFinite {
                what: "vehicle state",
            });
        }
        if speed < 0.0 {
            return Err(Error::NegativeValue {
                what: "vehicle speed",
                value: speed,
            });
        }
        Ok(VehicleState {
            position,
            speed,
            last_accel: 0.0,
        })
    }
}

/// Acceleration and braking capability of the plant, all m/s² and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActuationLimits {
    /// Peak throttle acceleration.
    pub a_max: f64,
    /// Peak service braking deceleration.
    pub b_max: f64,
    /// Emergency (cold) braking deceleration, at least `b_max`.
    pub b_emergency: f64,
}

impl Default for ActuationLimits {
    fn default() -> Self {
        ActuationLimits {
            a_max: 5.2,
            b_max: 6.0,
            b_emergency: 8.0,
        }
    }
}

impl ActuationLimits {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a_max", self.a_max),
            ("b_max", self.b_max),
            ("b_emergency", self.b_emergency),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "limits",
                    reason: format!("{name} must be positive and finite, got {v}"),
                });
            }
        }
        if self.b_emergency < self.b_max {
            return Err(Error::InvalidParameter {
                name: "limits",
                reason: format!(
                    "b_emergency ({}) must be >= b_max ({})",
                    self.b_emergency, self.b_max
                ),
            });
        }
        Ok(())
    }
}

/// What the upper-level controller asks of the plant each tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlCommand {
    /// Dimensionless actuation in [-1, 1]; positive scales `a_max`,
    /// negative scales `b_max`.
    Normal { u: f64 },
    /// Full cold braking at `b_emergency`.
    EmergencyBrake,
}

/// Advance one vehicle by `dt` under `cmd`.
///
/// Speed clamps at zero; when it does, position advances only over the
/// sub-interval until the vehicle stops.
pub fn step(
    state: &VehicleState,
    cmd: &ControlCommand,
    limits: &ActuationLimits,
    dt: f64,
) -> Result<VehicleState> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be positive, got {dt}"),
        });
    }
    if !state.position.is_finite() || !state.speed.is_finite() {
        return Err(Error::NonFinite {
            what: "vehicle state",
        });
    }
    let accel = match cmd {
        ControlCommand::Normal { u } => {
            if !u.is_finite() {
                return Err(Error::NonFinite { what: "command u" });
            }
            let u = u.clamp(-1.0, 1.0);
            if u >= 0.0 {
                u * limits.a_max
            } else {
                u * limits.b_max
            }
        }
        ControlCommand::EmergencyBrake => -limits.b_emergency,
    };

    let v0 = state.speed;
    let v1 = v0 + accel * dt;
    let (speed, position) = if v1 < 0.0 {
        // Decelerating through zero: advance only until the stop.
        let t_stop = if accel < 0.0 { v0 / -accel } else { 0.0 };
        (0.0, state.position + 0.5 * v0 * t_stop)
    } else {
        (v1, state.position + 0.5 * (v0 + v1) * dt)
    };

    Ok(VehicleState {
        position,
        speed,
        last_accel: accel,
    })
}

/// Bumper-to-bumper distance from ego to lead; negative after a collision.
pub fn gap(ego: &VehicleState, lead: &VehicleState, lead_offset: f64) -> f64 {
    (lead.position + lead_offset) - ego.position
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const DT: f64 = 0.05;

    fn limits() -> ActuationLimits {
        ActuationLimits {
            a_max: 3.0,
            b_max: 6.0,
            b_emergency: 8.0,
        }
    }

    #[test]
    fn coasting_keeps_speed_and_advances_linearly() {
        let s = VehicleState::new(0.0, 10.0).unwrap();
        let s = step(&s, &ControlCommand::Normal { u: 0.0 }, &limits(), DT).unwrap();
        assert_eq!(s.speed, 10.0);
        assert_eq!(s.position, 0.5);
    }

    #[test]
    fn full_throttle_trapezoidal_update() {
        let s = VehicleState::new(0.0, 10.0).unwrap();
        let s = step(&s, &ControlCommand::Normal { u: 1.0 }, &limits(), DT).unwrap();
        assert!((s.speed - 10.15).abs() < 1e-12);
        assert!((s.position - 0.503750).abs() < 1e-12);
    }

    #[test]
    fn emergency_brake_stop_time_quantizes_to_ticks() {
        // 60 km/h = 16.6667 m/s at 8 m/s² stops in ceil(16.6667 / 0.4) ticks.
        let mut s = VehicleState::new(0.0, 60.0 / 3.6).unwrap();
        let mut ticks = 0;
        while s.speed > 0.0 {
            s = step(&s, &ControlCommand::EmergencyBrake, &limits(), DT).unwrap();
            ticks += 1;
            assert!(ticks < 1000, "failed to stop");
        }
        assert_eq!(ticks, 42);
        assert_eq!(s.speed, 0.0);
    }

    #[test]
    fn gap_examples() {
        let at = |pos: f64| VehicleState::new(pos, 0.0).unwrap();
        assert_eq!(gap(&at(0.0), &at(0.0), 30.0), 30.0);
        assert_eq!(gap(&at(30.0), &at(0.0), 30.0), 0.0);
        assert_eq!(gap(&at(10.0), &at(5.0), 30.0), 25.0);
    }

    #[test]
    fn rejects_non_finite_inputs() {
        let s = VehicleState::new(0.0, 1.0).unwrap();
        assert!(step(&s, &ControlCommand::Normal { u: f64::NAN }, &limits(), DT).is_err());
        assert!(VehicleState::new(f64::INFINITY, 0.0).is_err());
        assert!(step(&s, &ControlCommand::Normal { u: 0.0 }, &limits(), 0.0).is_err());
    }

    #[test]
    fn stopped_vehicle_stays_put_under_braking() {
        let s = VehicleState::new(5.0, 0.0).unwrap();
        let s = step(&s, &ControlCommand::EmergencyBrake, &limits(), DT).unwrap();
        assert_eq!(s.speed, 0.0);
        assert_eq!(s.position, 5.0);
    }

    #[test]
    fn trapezoid_matches_closed_form_kinematics() {
        // Constant acceleration from v0 over one step must equal
        // v0*dt + a*dt²/2 to within 1e-9.
        for (v0, u) in [(10.0, 0.5), (3.0, -0.4), (20.0, 1.0)] {
            let s = VehicleState::new(0.0, v0).unwrap();
            let next = step(&s, &ControlCommand::Normal { u }, &limits(), DT).unwrap();
            let a = next.last_accel;
            let closed = v0 * DT + 0.5 * a * DT * DT;
            assert!((next.position - closed).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn speed_never_negative_under_random_commands(
            v0 in 0.0f64..60.0,
            us in proptest::collection::vec(-1.5f64..1.5, 1..200),
            emergencies in proptest::collection::vec(proptest::bool::ANY, 1..200),
        ) {
            let mut s = VehicleState::new(0.0, v0).unwrap();
            let mut prev_pos = s.position;
            for (u, em) in us.iter().zip(emergencies.iter().cycle()) {
                let cmd = if *em {
                    ControlCommand::EmergencyBrake
                } else {
                    ControlCommand::Normal { u: *u }
                };
                s = step(&s, &cmd, &limits(), DT).unwrap();
                prop_assert!(s.speed >= 0.0);
                prop_assert!(s.position >= prev_pos);
                prev_pos = s.position;
            }
        }

        #[test]
        fn emergency_stop_within_bound(v0 in 0.0f64..80.0) {
            let bound = (v0 / (8.0 * DT)).ceil() as usize;
            let mut s = VehicleState::new(0.0, v0).unwrap();
            for _ in 0..bound {
                s = step(&s, &ControlCommand::EmergencyBrake, &limits(), DT).unwrap();
            }
            prop_assert_eq!(s.speed, 0.0);
        }
    }
}
