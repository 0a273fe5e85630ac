//! Upper-level ACC controller with intrusion-flag override.
//!
//! Three pieces compose the per-tick decision: the stopping-sight-distance
//! based gap margin, a PID speed loop in km/h error units, and the override
//! rule that forces an emergency brake whenever the intrusion flag is up or
//! the perceived margin is gone.

use serde::{Deserialize, Serialize};

use crate::dynamics::ControlCommand;
use crate::error::{Error, Result};

/// Parameters of the stopping-sight-distance formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SsdParams {
    /// Perception-reaction time in seconds.
    pub t_reaction: f64,
    /// Tire-road friction coefficient.
    #[serde(rename = "f")]
    pub friction: f64,
    /// Road grade (dimensionless slope); positive uphill.
    #[serde(rename = "g")]
    pub grade: f64,
}

impl Default for SsdParams {
    fn default() -> Self {
        SsdParams {
            t_reaction: 2.5,
            friction: 0.35,
            grade: 0.0,
        }
    }
}

impl SsdParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_reaction.is_finite() && self.t_reaction >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "ssd_params.t_reaction",
                reason: format!("must be non-negative, got {}", self.t_reaction),
            });
        }
        let denom = self.friction + self.grade;
        if !(denom.is_finite() && denom > 0.0) {
            return Err(Error::InvalidParameter {
                name: "ssd_params",
                reason: format!("f + g must be positive, got {denom}"),
            });
        }
        Ok(())
    }
}

/// Stopping sight distance in meters for a speed in km/h:
/// `0.278 * t * v + v^2 / (254 * (f + g))`.
pub fn ssd(speed_kmh: f64, params: &SsdParams) -> Result<f64> {
    if !speed_kmh.is_finite() {
        return Err(Error::NonFinite { what: "speed" });
    }
    if speed_kmh < 0.0 {
        return Err(Error::NegativeValue {
            what: "speed",
            value: speed_kmh,
        });
    }
    params.validate()?;
    let reaction = 0.278 * params.t_reaction * speed_kmh;
    let braking = speed_kmh * speed_kmh / (254.0 * (params.friction + params.grade));
    Ok(reaction + braking)
}

/// Gap margin: current distance minus stopping distance, may be negative.
pub fn gap_margin(current_gap_m: f64, ssd_m: f64) -> f64 {
    current_gap_m - ssd_m
}

/// Longitudinal PID gains plus output scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Controller step in seconds.
    pub dt: f64,
    /// Raw PID output (km/h error units) that maps to full actuation;
    /// output is `clamp(raw / u_scale, -1, 1)`.
    pub u_scale: f64,
}

impl Default for PidGains {
    fn default() -> Self {
        PidGains {
            kp: 1.0,
            ki: 0.7,
            kd: 0.0,
            dt: 0.05,
            u_scale: 54.0,
        }
    }
}

impl PidGains {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "pid_gains.dt",
                reason: format!("must be positive, got {}", self.dt),
            });
        }
        if !(self.u_scale.is_finite() && self.u_scale > 0.0) {
            return Err(Error::InvalidParameter {
                name: "pid_gains.u_scale",
                reason: format!("must be positive, got {}", self.u_scale),
            });
        }
        for (name, v) in [("kp", self.kp), ("ki", self.ki), ("kd", self.kd)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "pid_gains",
                    reason: format!("{name} must be finite"),
                });
            }
        }
        Ok(())
    }
}

/// PID memory: accumulated error and the previous error sample.
///
/// `prev_error` is unset until the first step so the first derivative is
/// zero rather than a kick.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PidState {
    pub integral: f64,
    pub prev_error: Option<f64>,
}

/// One PID update toward `target` given the measured `current`, both km/h.
///
/// Returns the saturated output `u` in [-1, 1] and the next state. The
/// stored integral is back-clamped so its contribution alone never exceeds
/// full scale (anti-windup).
pub fn pid_step(
    state: &PidState,
    gains: &PidGains,
    target_kmh: f64,
    current_kmh: f64,
) -> Result<(f64, PidState)> {
    gains.validate()?;
    if !target_kmh.is_finite() || !current_kmh.is_finite() {
        return Err(Error::NonFinite { what: "pid input" });
    }
    let error = target_kmh - current_kmh;
    let mut integral = state.integral + error * gains.dt;
    let derivative = match state.prev_error {
        Some(prev) => (error - prev) / gains.dt,
        None => 0.0,
    };
    let raw = gains.kp * error + gains.ki * integral + gains.kd * derivative;
    let u = (raw / gains.u_scale).clamp(-1.0, 1.0);
    if gains.ki != 0.0 {
        let cap = (gains.u_scale / gains.ki).abs();
        integral = integral.clamp(-cap, cap);
    }
    Ok((
        u,
        PidState {
            integral,
            prev_error: Some(error),
        },
    ))
}

/// What the controller can see this tick. All values come from decoded bus
/// frames (or held-over previous decodes), so a masked speed reading flows
/// through unnoticed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerceivedInputs {
    /// Latest decoded ego speed, km/h; possibly spoofed.
    pub current_speed: f64,
    /// Driver-set target speed, km/h.
    pub target_speed: f64,
    /// Latest decoded distance to the lead, meters.
    pub current_gap: f64,
    /// Intrusion flag as visible at this tick.
    pub intrusion_active: bool,
}

/// Outcome of one control decision; carries the intermediate quantities for
/// the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub command: ControlCommand,
    pub next_pid: PidState,
    pub ssd_m: f64,
    pub margin_m: f64,
    /// PID output on the normal branch, 0.0 on emergency branches.
    pub u: f64,
}

/// The extended-ACC decision rule.
///
/// Emergency brake when the intrusion flag is up, else when the perceived
/// gap margin is non-positive, else run the PID toward the target speed.
/// Both emergency branches reset the PID memory so the resume is clean.
pub fn acc_decide(
    inputs: &PerceivedInputs,
    pid: &PidState,
    gains: &PidGains,
    ssd_params: &SsdParams,
) -> Result<Decision> {
    if !inputs.target_speed.is_finite() || inputs.target_speed < 0.0 {
        return Err(Error::InvalidParameter {
            name: "target_speed",
            reason: format!("must be a non-negative speed, got {}", inputs.target_speed),
        });
    }
    let ssd_m = ssd(inputs.current_speed, ssd_params)?;
    let margin_m = gap_margin(inputs.current_gap, ssd_m);
    if inputs.intrusion_active || margin_m <= 0.0 {
        return Ok(Decision {
            command: ControlCommand::EmergencyBrake,
            next_pid: PidState::default(),
            ssd_m,
            margin_m,
            u: 0.0,
        });
    }
    let (u, next_pid) = pid_step(pid, gains, inputs.target_speed, inputs.current_speed)?;
    Ok(Decision {
        command: ControlCommand::Normal { u },
        next_pid,
        ssd_m,
        margin_m,
        u,
    })
}
