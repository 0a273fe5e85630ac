//! Closed-loop simulation of a PID-based adaptive cruise controller whose
//! sensor readings travel as frames on a virtual CAN bus.
//!
//! An attacker injects spoofed ego-speed frames, a modeled real-time
//! intrusion detector flags them after a configurable response time, and the
//! controller applies an emergency brake when the detector raises its flag or
//! the perceived gap drops below the stopping sight distance. Scenario runs
//! are fully deterministic for a given configuration and master seed.

pub mod attack;
pub mod canbus;
pub mod clock;
pub mod config;
pub mod controller;
pub mod dynamics;
pub mod error;
pub mod ids;
pub mod rng;
pub mod scenario;
pub mod telemetry;
pub mod units;

pub use error::{Error, Result};
