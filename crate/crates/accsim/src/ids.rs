//! Statistical model of a real-time CAN intrusion detection system.
//!
//! Stands in for an ML detector: each observed frame is classified with a
//! fixed detection rate (for spoofed frames) or false-positive rate (for
//! authentic ones), and a positive verdict becomes visible to the controller
//! only after the detector's response time. Visible flags stay raised for a
//! hold window and are refreshed by every new visible detection, so a
//! sustained attack keeps the flag up.

use std::collections::VecDeque;

use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::canbus::{CanFrame, Provenance};
use crate::error::{Error, Result};
use crate::rng::{next_unit_f64, stream_rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdsConfig {
    /// Probability a spoofed frame is flagged.
    pub detection_rate: f64,
    /// Seconds from a frame to its flag becoming actionable.
    pub response_time: f64,
    /// Seconds from a frame to its internal detection; recorded for
    /// reporting only, control reacts at `response_time`.
    pub detection_latency: f64,
    /// Probability an authentic frame is flagged.
    pub false_positive_rate: f64,
    /// Seconds a visible flag stays raised past each detection.
    pub flag_hold: f64,
    /// Private stream seed; derived from the master seed when absent.
    pub seed: Option<u64>,
}

impl Default for IdsConfig {
    fn default() -> Self {
        IdsConfig {
            detection_rate: 0.97,
            response_time: 1.026,
            detection_latency: 0.152,
            false_positive_rate: 0.0,
            flag_hold: 1.0,
            seed: None,
        }
    }
}

impl IdsConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("ids.detection_rate", self.detection_rate),
            ("ids.false_positive_rate", self.false_positive_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be a probability in [0, 1], got {p}"),
                });
            }
        }
        if !(self.detection_latency >= 0.0 && self.response_time >= self.detection_latency) {
            return Err(Error::InvalidParameter {
                name: "ids.response_time",
                reason: format!(
                    "need response_time >= detection_latency >= 0, got {} and {}",
                    self.response_time, self.detection_latency
                ),
            });
        }
        if !(self.flag_hold > 0.0 && self.flag_hold.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "ids.flag_hold",
                reason: format!("must be positive, got {}", self.flag_hold),
            });
        }
        Ok(())
    }
}

/// Per-frame classification outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdsVerdict {
    pub frame_timestamp: f64,
    pub flagged: bool,
    /// When the flag becomes actionable; present only when flagged.
    pub visible_at: Option<f64>,
}

/// The detector instance owned by one scenario run.
#[derive(Debug)]
pub struct IdsSim {
    cfg: IdsConfig,
    rng: ChaCha12Rng,
    /// Visible-at times of flagged verdicts not yet folded into the flag
    /// window; non-decreasing because frames arrive in timestamp order.
    pending: VecDeque<f64>,
    active_until: f64,
}

impl IdsSim {
    /// `derived_seed` is used when the config does not pin its own seed.
    pub fn new(cfg: IdsConfig, derived_seed: u64) -> Result<Self> {
        cfg.validate()?;
        let seed = cfg.seed.unwrap_or(derived_seed);
        Ok(IdsSim {
            cfg,
            rng: stream_rng(seed),
            pending: VecDeque::new(),
            active_until: f64::NEG_INFINITY,
        })
    }

    pub fn config(&self) -> &IdsConfig {
        &self.cfg
    }

    /// Classify one observed frame, consuming exactly one draw from the
    /// detector's private stream.
    ///
    /// This is the only place provenance is read; it is the ground truth the
    /// statistical model is conditioned on.
    pub fn classify(&mut self, frame: &CanFrame) -> IdsVerdict {
        let threshold = match frame.provenance {
            Provenance::Spoofed => self.cfg.detection_rate,
            Provenance::Authentic => self.cfg.false_positive_rate,
        };
        let flagged = next_unit_f64(&mut self.rng) < threshold;
        let visible_at = flagged.then(|| frame.timestamp + self.cfg.response_time);
        if let Some(t) = visible_at {
            self.pending.push_back(t);
        }
        IdsVerdict {
            frame_timestamp: frame.timestamp,
            flagged,
            visible_at,
        }
    }

    /// Whether an intrusion flag is visible to the controller at `now`.
    ///
    /// True iff some flagged verdict has `visible_at <= now <
    /// visible_at + flag_hold`; overlapping detections merge into one
    /// continuous window.
    pub fn poll(&mut self, now: f64) -> bool {
        while let Some(&front) = self.pending.front() {
            if front <= now {
                self.active_until = self.active_until.max(front + self.cfg.flag_hold);
                self.pending.pop_front();
            } else {
                break;
            }
        }
        now < self.active_until
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canbus::{CanFrame, Provenance};

    fn frame(t: f64, provenance: Provenance) -> CanFrame {
        CanFrame::new(t, 0x0C0, vec![0xE8, 0x03], provenance).unwrap()
    }

    fn ids(cfg: IdsConfig) -> IdsSim {
        IdsSim::new(cfg, 77).unwrap()
    }

    #[test]
    fn authentic_frames_never_flagged_at_zero_fpr() {
        let mut sim = ids(IdsConfig::default());
        for i in 0..5000 {
            let v = sim.classify(&frame(i as f64 * 0.05, Provenance::Authentic));
            assert!(!v.flagged);
        }
        assert!(!sim.poll(1e6));
    }

    #[test]
    fn flag_visible_exactly_response_time_later() {
        let cfg = IdsConfig {
            detection_rate: 1.0,
            ..IdsConfig::default()
        };
        let mut sim = ids(cfg);
        let v = sim.classify(&frame(2.000, Provenance::Spoofed));
        assert!(v.flagged);
        assert_eq!(v.visible_at, Some(3.026));
        assert!(!sim.poll(3.0));
        assert!(sim.poll(3.026));
    }

    #[test]
    fn detection_rate_within_five_sigma() {
        // 10_000 spoofed frames at 0.97: sigma = sqrt(10000*.97*.03) ~ 17.1.
        let mut sim = ids(IdsConfig::default());
        let flagged = (0..10_000)
            .filter(|i| {
                sim.classify(&frame(*i as f64 * 0.05, Provenance::Spoofed))
                    .flagged
            })
            .count();
        assert!(
            (9615..=9785).contains(&flagged),
            "flagged {flagged} outside 5-sigma band"
        );
    }

    #[test]
    fn single_detection_window_with_hold() {
        let cfg = IdsConfig {
            detection_rate: 1.0,
            ..IdsConfig::default()
        };
        let mut sim = ids(cfg);
        sim.classify(&frame(2.000, Provenance::Spoofed));
        // Visible at 3.026, hold 1.0: active on [3.026, 4.026).
        assert!(!sim.poll(3.00));
        assert!(sim.poll(3.05));
        assert!(sim.poll(4.00));
        assert!(!sim.poll(4.05));
    }

    #[test]
    fn overlapping_detections_merge() {
        let cfg = IdsConfig {
            detection_rate: 1.0,
            response_time: 1.0,
            ..IdsConfig::default()
        };
        let mut sim = ids(cfg);
        sim.classify(&frame(2.0, Provenance::Spoofed)); // visible 3.0
        sim.classify(&frame(2.5, Provenance::Spoofed)); // visible 3.5
        let mut t = 3.0;
        while t < 4.5 - 1e-9 {
            assert!(sim.poll(t), "inactive at {t}");
            t += 0.05;
        }
        assert!(!sim.poll(4.5));
    }

    #[test]
    fn identical_seeds_give_identical_verdicts() {
        let cfg = IdsConfig {
            detection_rate: 0.5,
            ..IdsConfig::default()
        };
        let mut a = IdsSim::new(cfg.clone(), 5).unwrap();
        let mut b = IdsSim::new(cfg, 5).unwrap();
        for i in 0..2000 {
            let f = frame(i as f64 * 0.05, Provenance::Spoofed);
            assert_eq!(a.classify(&f), b.classify(&f));
        }
    }

    #[test]
    fn config_seed_overrides_derived_seed() {
        let cfg = IdsConfig {
            detection_rate: 0.5,
            seed: Some(123),
            ..IdsConfig::default()
        };
        let mut a = IdsSim::new(cfg.clone(), 1).unwrap();
        let mut b = IdsSim::new(cfg, 2).unwrap();
        for i in 0..500 {
            let f = frame(i as f64 * 0.05, Provenance::Spoofed);
            assert_eq!(a.classify(&f), b.classify(&f));
        }
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let mut cfg = IdsConfig::default();
        cfg.detection_rate = 1.2;
        assert!(cfg.validate().is_err());
        cfg = IdsConfig::default();
        cfg.response_time = 0.05; // below detection_latency
        assert!(cfg.validate().is_err());
        cfg = IdsConfig::default();
        cfg.flag_hold = 0.0;
        assert!(cfg.validate().is_err());
    }
}
