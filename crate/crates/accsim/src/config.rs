//! Scenario config files: JSON documents mirroring [`ScenarioConfig`] field
//! names exactly. Unknown keys are errors so a typo cannot silently change
//! an experiment.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;

/// Load and validate a scenario config from a JSON file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Parse and validate a scenario config from JSON text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| {
        Error::Config(format!(
            "line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Render a config back to pretty JSON (the same shape `load_config` reads).
pub fn config_to_json(cfg: &ScenarioConfig) -> String {
    let mut s = serde_json::to_string_pretty(cfg).expect("config serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::preset;

    #[test]
    fn presets_round_trip_through_json() {
        for name in crate::scenario::PRESET_NAMES {
            let cfg = preset(name).unwrap();
            let json = config_to_json(&cfg);
            let back = parse_config(&json).unwrap();
            assert_eq!(back, cfg, "{name}");
        }
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config(
            r#"{
                "ego_target_speed": 60.0,
                "lead_profile": { "constant": { "speed": 60.0 } },
                "duration": 10.0
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.initial_gap, 30.0);
        assert_eq!(cfg.dt, 0.05);
        assert_eq!(cfg.master_seed, 42);
        assert!(!cfg.attack.enabled);
        assert!(cfg.ids.is_none());
        assert!(cfg.resume_after_flag);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let err = parse_config(
            r#"{
                "ego_target_speed": 60.0,
                "lead_profile": { "constant": { "speed": 60.0 } },
                "duration": 10.0,
                "ego_targt_speed": 61.0
            }"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
        assert!(msg.contains("ego_targt_speed"), "{msg}");
    }

    #[test]
    fn invalid_values_are_rejected_after_parse() {
        let err = parse_config(
            r#"{
                "ego_target_speed": 60.0,
                "lead_profile": { "constant": { "speed": 60.0 } },
                "duration": -5.0
            }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("duration"));
    }
}
