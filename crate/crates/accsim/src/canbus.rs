//! Virtual CAN bus: frames, codecs, periodic broadcast, and candump logs.
//!
//! Payload layout is this repo's published wire format: 16-bit little-endian
//! centi-units (speed in 0.01 km/h, distance in 0.01 m) in `data[0..2]`.
//! Frame provenance is ground-truth metadata for the detector model and the
//! evaluation harness only; decoding never looks at it.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clock::SimClock;
use crate::error::{Error, Result};

pub const DEFAULT_SPEED_FRAME_ID: u16 = 0x0C0;
pub const DEFAULT_DISTANCE_FRAME_ID: u16 = 0x0D0;

/// Largest value either 16-bit centi-unit codec can carry.
pub const CODEC_MAX: f64 = 655.35;

const MAX_STANDARD_ID: u16 = 0x7FF;
const MAX_DLC: usize = 8;

/// Ground truth about who put a frame on the bus.
///
/// Readable only by the detector model and telemetry; the controller decodes
/// payloads without ever seeing this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Authentic,
    Spoofed,
}

/// One timestamped frame with an 11-bit identifier and up to 8 data bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct CanFrame {
    pub timestamp: f64,
    pub can_id: u16,
    pub data: Vec<u8>,
    pub provenance: Provenance,
}

impl CanFrame {
    pub fn new(timestamp: f64, can_id: u16, data: Vec<u8>, provenance: Provenance) -> Result<Self> {
        if can_id > MAX_STANDARD_ID {
            return Err(Error::MalformedFrame(format!(
                "id {can_id:#X} exceeds 11 bits"
            )));
        }
        if data.len() > MAX_DLC {
            return Err(Error::MalformedFrame(format!(
                "dlc {} exceeds 8",
                data.len()
            )));
        }
        Ok(CanFrame {
            timestamp,
            can_id,
            data,
            provenance,
        })
    }

    pub fn dlc(&self) -> usize {
        self.data.len()
    }
}

/// Periodic broadcast schedule for the authentic sensor frames.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BusSchedule {
    pub speed_frame_id: u16,
    /// Seconds between authentic speed frames; an integer multiple of dt.
    pub speed_period: f64,
    pub distance_frame_id: u16,
    /// Seconds between authentic distance frames; an integer multiple of dt.
    pub distance_period: f64,
}

impl Default for BusSchedule {
    fn default() -> Self {
        BusSchedule {
            speed_frame_id: DEFAULT_SPEED_FRAME_ID,
            speed_period: 0.05,
            distance_frame_id: DEFAULT_DISTANCE_FRAME_ID,
            distance_period: 0.05,
        }
    }
}

fn period_ticks(period: f64, dt: f64, name: &'static str) -> Result<u64> {
    let ratio = period / dt;
    let ticks = ratio.round();
    if !(period.is_finite() && period > 0.0) || ticks < 1.0 || (ratio - ticks).abs() > 1e-9 {
        return Err(Error::InvalidParameter {
            name: "schedule",
            reason: format!("{name} ({period}) must be a positive integer multiple of dt ({dt})"),
        });
    }
    Ok(ticks as u64)
}

impl BusSchedule {
    pub fn validate(&self, dt: f64) -> Result<()> {
        self.speed_period_ticks(dt)?;
        self.distance_period_ticks(dt)?;
        if self.speed_frame_id > MAX_STANDARD_ID || self.distance_frame_id > MAX_STANDARD_ID {
            return Err(Error::InvalidParameter {
                name: "schedule",
                reason: "frame ids must fit in 11 bits".into(),
            });
        }
        Ok(())
    }

    pub fn speed_period_ticks(&self, dt: f64) -> Result<u64> {
        period_ticks(self.speed_period, dt, "speed_period")
    }

    pub fn distance_period_ticks(&self, dt: f64) -> Result<u64> {
        period_ticks(self.distance_period, dt, "distance_period")
    }
}

/// Frames delivered during one tick, in stable delivery order.
///
/// Frames are pushed in arrival order (authentic broadcast first, injected
/// frames after) and never reordered, so two runs with identical inputs see
/// byte-identical logs.
#[derive(Debug, Default, Clone)]
pub struct BusTickLog {
    frames: Vec<CanFrame>,
}

impl BusTickLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, frame: CanFrame) {
        self.frames.push(frame);
    }

    pub fn frames(&self) -> &[CanFrame] {
        &self.frames
    }

    /// Most recently delivered frame with the given id, if any.
    pub fn latest(&self, can_id: u16) -> Option<&CanFrame> {
        self.frames.iter().rev().find(|f| f.can_id == can_id)
    }
}

fn encode_centi(value: f64, what: &'static str) -> Result<[u8; 2]> {
    if !value.is_finite() || !(0.0..=CODEC_MAX).contains(&value) {
        return Err(Error::CodecRange {
            what,
            value,
            max: CODEC_MAX,
        });
    }
    let raw = (value * 100.0).round() as u16;
    Ok(raw.to_le_bytes())
}

fn decode_centi(frame: &CanFrame, expected_id: u16, what: &'static str) -> Result<f64> {
    if frame.can_id != expected_id {
        return Err(Error::MalformedFrame(format!(
            "{what}: id {:#05X} does not match expected {expected_id:#05X}",
            frame.can_id
        )));
    }
    if frame.dlc() < 2 {
        return Err(Error::MalformedFrame(format!(
            "{what}: dlc {} is shorter than 2",
            frame.dlc()
        )));
    }
    let raw = u16::from_le_bytes([frame.data[0], frame.data[1]]);
    Ok(raw as f64 / 100.0)
}

/// Speed in km/h as little-endian centi-km/h; 0..=655.35.
pub fn encode_speed(speed_kmh: f64) -> Result<[u8; 2]> {
    encode_centi(speed_kmh, "speed")
}

/// Inverse of [`encode_speed`]; quantization error at most 0.005 km/h.
pub fn decode_speed(frame: &CanFrame, expected_id: u16) -> Result<f64> {
    decode_centi(frame, expected_id, "speed")
}

/// Distance in meters as little-endian centimeters; 0..=655.35.
pub fn encode_distance(distance_m: f64) -> Result<[u8; 2]> {
    encode_centi(distance_m, "distance")
}

/// Inverse of [`encode_distance`]; quantization error at most 0.005 m.
pub fn decode_distance(frame: &CanFrame, expected_id: u16) -> Result<f64> {
    decode_centi(frame, expected_id, "distance")
}

/// Authentic sensor frames due at this tick, timestamped `clock.now()`.
///
/// Readings beyond the codec range saturate at [`CODEC_MAX`], like a sensor
/// at the end of its scale.
pub fn broadcast(
    clock: &SimClock,
    true_speed_kmh: f64,
    true_gap_m: f64,
    schedule: &BusSchedule,
) -> Result<Vec<CanFrame>> {
    let mut out = Vec::with_capacity(2);
    let now = clock.now();
    if clock.tick() % schedule.speed_period_ticks(clock.dt())? == 0 {
        let payload = encode_speed(true_speed_kmh.clamp(0.0, CODEC_MAX))?;
        out.push(CanFrame::new(
            now,
            schedule.speed_frame_id,
            payload.to_vec(),
            Provenance::Authentic,
        )?);
    }
    if clock.tick() % schedule.distance_period_ticks(clock.dt())? == 0 {
        let payload = encode_distance(true_gap_m.clamp(0.0, CODEC_MAX))?;
        out.push(CanFrame::new(
            now,
            schedule.distance_frame_id,
            payload.to_vec(),
            Provenance::Authentic,
        )?);
    }
    Ok(out)
}

/// Parse one `(<seconds>) <ifname> <HEXID>#<HEXBYTES>` candump line.
///
/// `line_no` is 1-based and only used for error reporting. Parsed frames are
/// authentic: a log replays as ordinary sensor traffic.
pub fn parse_candump_line(line: &str, line_no: usize) -> Result<CanFrame> {
    let fail = |reason: String| Error::CandumpParse {
        line: line_no,
        reason,
    };
    let mut parts = line.split_whitespace();
    let ts_tok = parts.next().ok_or_else(|| fail("empty line".into()))?;
    let _ifname = parts
        .next()
        .ok_or_else(|| fail("missing interface name".into()))?;
    let frame_tok = parts
        .next()
        .ok_or_else(|| fail("missing ID#DATA field".into()))?;
    if parts.next().is_some() {
        return Err(fail("trailing fields".into()));
    }

    let ts_inner = ts_tok
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| fail(format!("timestamp `{ts_tok}` not parenthesized")))?;
    let timestamp: f64 = ts_inner
        .parse()
        .map_err(|_| fail(format!("bad timestamp `{ts_inner}`")))?;
    if !timestamp.is_finite() || timestamp < 0.0 {
        return Err(fail(format!("bad timestamp `{ts_inner}`")));
    }

    let (id_hex, data_hex) = frame_tok
        .split_once('#')
        .ok_or_else(|| fail(format!("`{frame_tok}` has no `#` separator")))?;
    if id_hex.is_empty() || id_hex.len() > 3 {
        return Err(fail(format!(
            "id `{id_hex}` is not a standard 3-digit hex id"
        )));
    }
    let can_id = u16::from_str_radix(id_hex, 16).map_err(|_| fail(format!("bad id `{id_hex}`")))?;

    if data_hex.len() % 2 != 0 {
        return Err(fail(format!("odd-length payload `{data_hex}`")));
    }
    if data_hex.len() / 2 > MAX_DLC {
        return Err(fail(format!("payload `{data_hex}` longer than 8 bytes")));
    }
    let mut data = Vec::with_capacity(data_hex.len() / 2);
    for i in (0..data_hex.len()).step_by(2) {
        let byte = u8::from_str_radix(&data_hex[i..i + 2], 16)
            .map_err(|_| fail(format!("bad payload byte in `{data_hex}`")))?;
        data.push(byte);
    }

    CanFrame::new(timestamp, can_id, data, Provenance::Authentic)
        .map_err(|e| fail(e.to_string()))
}

/// Serialize a frame back to the candump format this crate reads and writes:
/// uppercase 3-digit hex id, uppercase payload, microsecond timestamps.
pub fn format_candump_line(frame: &CanFrame, ifname: &str) -> String {
    let mut payload = String::with_capacity(frame.data.len() * 2);
    for b in &frame.data {
        let _ = write!(payload, "{b:02X}");
    }
    format!(
        "({:.6}) {} {:03X}#{}",
        frame.timestamp, ifname, frame.can_id, payload
    )
}

/// Read a whole candump log, one frame per non-empty line.
pub fn read_candump(path: &Path) -> Result<Vec<CanFrame>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut frames = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        frames.push(parse_candump_line(line, idx + 1)?);
    }
    Ok(frames)
}
