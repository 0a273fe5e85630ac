//! Speed-spoofing message injection.
//!
//! The attacker adds forged ego-speed frames alongside the authentic ones
//! (injection, not substitution). Because the controller reads the latest
//! frame per tick and injected frames arrive after the broadcast, an
//! injection masks that tick's authentic reading.

use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::canbus::{encode_speed, BusSchedule, CanFrame, Provenance};
use crate::error::{Error, Result};
use crate::rng::{next_unit_f64, stream_rng};

/// How the per-period injection decision is made.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectionModel {
    /// Independent Bernoulli draw per sensor period.
    #[default]
    Bernoulli,
    /// Deterministic error-diffusion pattern hitting the rate exactly
    /// (e.g. 3 of every 4 periods at probability 0.75).
    FixedPattern,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttackConfig {
    pub enabled: bool,
    /// Forged speed value carried by every injected frame, km/h.
    pub spoofed_speed: f64,
    /// Probability of injecting in a given sensor period.
    pub injection_probability: f64,
    /// Target frame id; defaults to the schedule's speed frame id.
    pub target_id: Option<u16>,
    /// Attack window start, seconds; default start of run.
    pub start_time: f64,
    /// Attack window end, seconds; default end of run.
    pub end_time: Option<f64>,
    /// Private stream seed; derived from the master seed when absent.
    pub seed: Option<u64>,
    pub model: InjectionModel,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            enabled: false,
            spoofed_speed: 10.0,
            injection_probability: 0.75,
            target_id: None,
            start_time: 0.0,
            end_time: None,
            seed: None,
            model: InjectionModel::Bernoulli,
        }
    }
}

impl AttackConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.injection_probability) {
            return Err(Error::InvalidParameter {
                name: "attack.injection_probability",
                reason: format!("must be in [0, 1], got {}", self.injection_probability),
            });
        }
        if !self.spoofed_speed.is_finite() || self.spoofed_speed < 0.0 {
            return Err(Error::InvalidParameter {
                name: "attack.spoofed_speed",
                reason: format!("must be a non-negative speed, got {}", self.spoofed_speed),
            });
        }
        encode_speed(self.spoofed_speed)?;
        if let Some(end) = self.end_time {
            if self.start_time > end {
                return Err(Error::InvalidParameter {
                    name: "attack.start_time",
                    reason: format!("start_time {} exceeds end_time {end}", self.start_time),
                });
            }
        }
        if self.start_time < 0.0 || !self.start_time.is_finite() {
            return Err(Error::InvalidParameter {
                name: "attack.start_time",
                reason: format!("must be non-negative, got {}", self.start_time),
            });
        }
        Ok(())
    }
}

/// Stateful injector owning its private random stream.
///
/// Injection decisions depend only on the seed and the draw index, never on
/// simulation state: the same seed yields the identical pattern regardless of
/// how the controller behaves.
#[derive(Debug)]
pub struct Attacker {
    enabled: bool,
    payload: [u8; 2],
    spoofed_speed: f64,
    probability: f64,
    target_id: u16,
    start_time: f64,
    end_time: f64,
    model: InjectionModel,
    rng: ChaCha12Rng,
    carry: f64,
}

impl Attacker {
    /// `derived_seed` is used when the config does not pin its own seed.
    pub fn new(cfg: &AttackConfig, schedule: &BusSchedule, derived_seed: u64) -> Result<Self> {
        cfg.validate()?;
        Ok(Attacker {
            enabled: cfg.enabled,
            payload: encode_speed(cfg.spoofed_speed)?,
            spoofed_speed: cfg.spoofed_speed,
            probability: cfg.injection_probability,
            target_id: cfg.target_id.unwrap_or(schedule.speed_frame_id),
            start_time: cfg.start_time,
            end_time: cfg.end_time.unwrap_or(f64::INFINITY),
            model: cfg.model,
            rng: stream_rng(cfg.seed.unwrap_or(derived_seed)),
            carry: 0.0,
        })
    }

    pub fn spoofed_speed(&self) -> f64 {
        self.spoofed_speed
    }

    /// Decide once for this sensor period; call at each period inside the run.
    ///
    /// Returns the forged frame when the draw fires and `now` falls inside
    /// the attack window.
    pub fn maybe_inject(&mut self, now: f64) -> Option<CanFrame> {
        if !self.enabled || now < self.start_time || now > self.end_time {
            return None;
        }
        let fire = match self.model {
            InjectionModel::Bernoulli => next_unit_f64(&mut self.rng) < self.probability,
            InjectionModel::FixedPattern => {
                self.carry += self.probability;
                if self.carry >= 1.0 - 1e-9 {
                    self.carry -= 1.0;
                    true
                } else {
                    false
                }
            }
        };
        if !fire {
            return None;
        }
        Some(
            CanFrame::new(
                now,
                self.target_id,
                self.payload.to_vec(),
                Provenance::Spoofed,
            )
            .expect("validated at construction"),
        )
    }
}
