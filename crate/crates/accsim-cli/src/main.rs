//! Command-line runner: single scenarios, parameter sweeps, preset listing.
//!
//! Exit codes are a stable contract: 0 = run finished without a crash,
//! 2 = run finished with a crash, 1 = any error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use accsim::config::load_config;
use accsim::scenario::{matrix_config, preset, run, ScenarioConfig, PRESET_NAMES};
use accsim::telemetry::{write_summary, write_trace};

const OUT_DIR_ENV: &str = "ACCSIM_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "accsim",
    version,
    about = "Closed-loop ACC simulator with CAN speed spoofing and an IDS brake override"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write trace.csv + summary.json.
    Run {
        /// Named preset to run (see `accsim presets`).
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        /// JSON scenario config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: $ACCSIM_OUT_DIR or the current dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// End the run at the first collision.
        #[arg(long)]
        stop_on_crash: bool,
    },
    /// Run every (ego speed, spoofed speed) combination and print a CSV
    /// matrix of outcomes.
    Sweep {
        /// Ego/lead speeds in km/h, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        ego_speeds: Vec<f64>,
        /// Spoofed speed values in km/h, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        spoof_speeds: Vec<f64>,
        /// Whether the runs use the intrusion detector.
        #[arg(long, value_enum, default_value_t = IdsSwitch::Off)]
        ids: IdsSwitch,
        /// Master seeds, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [42u64])]
        seeds: Vec<u64>,
        /// Also write the matrix to <out>/sweep.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in presets and their key parameters.
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdsSwitch {
    On,
    Off,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::Run {
            preset: preset_name,
            config,
            seed,
            out,
            stop_on_crash,
        } => {
            let mut cfg: ScenarioConfig = match (&preset_name, &config) {
                (Some(name), None) => preset(name)?,
                (None, Some(path)) => load_config(path)?,
                _ => unreachable!("clap enforces exactly one source"),
            };
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if stop_on_crash {
                cfg.stop_on_crash = true;
            }
            let out_dir = resolve_out_dir(out);
            fs::create_dir_all(&out_dir)?;

            let (trace, summary) = run(&cfg)?;
            let trace_path = out_dir.join("trace.csv");
            let summary_path = out_dir.join("summary.json");
            write_trace(&trace, &trace_path)?;
            write_summary(&summary, &summary_path)?;

            println!(
                "{}: crashed={} crash_count={} min_gap={:.3} m mean_ego_speed={:.2} km/h ({} ticks) -> {}",
                preset_name.as_deref().unwrap_or("config"),
                summary.crashed,
                summary.crash_count,
                summary.min_gap_m,
                summary.mean_ego_speed_kmh,
                summary.ticks,
                out_dir.display(),
            );
            Ok(ExitCode::from(if summary.crashed { 2 } else { 0 }))
        }
        Command::Sweep {
            ego_speeds,
            spoof_speeds,
            ids,
            seeds,
            out,
        } => {
            let mut csv = String::from("ego_speed,spoof_speed,ids,seed,crashed,min_gap\n");
            for &ego in &ego_speeds {
                for &spoof in &spoof_speeds {
                    for &seed in &seeds {
                        let mut cfg = matrix_config(ego, spoof, ids == IdsSwitch::On);
                        cfg.master_seed = seed;
                        let (_, summary) = run(&cfg)?;
                        let _ = writeln!(
                            csv,
                            "{},{},{},{},{},{:.6}",
                            ego,
                            spoof,
                            if ids == IdsSwitch::On { "on" } else { "off" },
                            seed,
                            summary.crashed as u8,
                            summary.min_gap_m,
                        );
                    }
                }
            }
            print!("{csv}");
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join("sweep.csv"), &csv)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Presets => {
            for name in PRESET_NAMES {
                let cfg = preset(name)?;
                let lead = match &cfg.lead_profile {
                    accsim::scenario::LeadProfile::Constant { speed } => {
                        format!("lead constant {speed} km/h")
                    }
                    accsim::scenario::LeadProfile::Trapezoid {
                        v_peak,
                        ramp_up,
                        hold,
                        ramp_down,
                    } => format!("lead 0->{v_peak}->0 km/h over {ramp_up}+{hold}+{ramp_down} s"),
                    accsim::scenario::LeadProfile::Replay { path, .. } => {
                        format!("lead replay {}", path.display())
                    }
                };
                let attack = if cfg.attack.enabled {
                    format!(
                        "spoof {} km/h p={} from t={} s",
                        cfg.attack.spoofed_speed,
                        cfg.attack.injection_probability,
                        cfg.attack.start_time
                    )
                } else {
                    "no attack".to_string()
                };
                let ids = match &cfg.ids {
                    Some(i) => format!(
                        "ids detection {} response {} s",
                        i.detection_rate, i.response_time
                    ),
                    None => "no ids".to_string(),
                };
                println!(
                    "{name:<13} ego {:>2} km/h, {lead}, {attack}, {ids}, {} s",
                    cfg.ego_target_speed, cfg.duration
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| Path::new(".").to_path_buf())
}
