//! `cane-sim`: command-line front-end for the cane simulator.
//!
//! Subcommands: `simulate` runs a scenario file to a CSV trace, `calibrate`
//! prints the sensor's bench calibration table, `timer` evaluates the
//! vibration-drive astable math, and `classify` maps one ADC count to the
//! alert outputs.
//!
//! Exit codes: 0 on success, 1 for runtime errors (unreadable input,
//! failed simulation), 2 for usage and parse errors.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cane_core::{
    classify_range, outputs_for_class, run_simulation, trace_to_csv, voice_for_class,
    CalibrationTable, ControllerConfig, MotorPattern, Profile, TimerConfig, TraceEvent,
};

#[derive(Parser)]
#[command(
    name = "cane-sim",
    version,
    about = "Deterministic simulator for an ultrasonic obstacle-alert cane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and emit its CSV trace.
    Simulate {
        /// Path to the scenario file.
        scenario: PathBuf,
        /// Threshold profile, overriding any PROFILE directive in the file.
        #[arg(long)]
        profile: Option<Profile>,
        /// Run the transcribed firmware logic verbatim, quirks included.
        #[arg(long)]
        literal: bool,
        /// Write the CSV trace to this file instead of standard output.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Print the sensor calibration table (range, calculated and measured
    /// millivolts, error percent).
    Calibrate,
    /// Evaluate the vibration-drive timer: period, frequency, duty cycle.
    Timer {
        /// First resistor, ohms.
        #[arg(long)]
        r1: f64,
        /// Second resistor, ohms.
        #[arg(long)]
        r2: f64,
        /// Third resistor, ohms.
        #[arg(long)]
        r3: f64,
        /// Timing capacitor, farads.
        #[arg(long)]
        c1: f64,
    },
    /// Classify a single ADC count and show the resulting outputs.
    Classify {
        /// ADC count to classify.
        count: u32,
        /// Threshold profile (defaults to fig2_raw: a raw count implies the
        /// raw-count thresholds).
        #[arg(long)]
        profile: Option<Profile>,
        /// Use the transcribed firmware conditionals verbatim.
        #[arg(long)]
        literal: bool,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Simulate {
            scenario,
            profile,
            literal,
            csv,
        } => cmd_simulate(&scenario, profile, literal, csv.as_deref()),
        Command::Calibrate => cmd_calibrate(),
        Command::Timer { r1, r2, r3, c1 } => cmd_timer(r1, r2, r3, c1),
        Command::Classify {
            count,
            profile,
            literal,
        } => cmd_classify(count, profile, literal),
    }
}

/// Format a real value with up to four decimals (at least one).
fn fmt_real(x: f64) -> String {
    let mut s = format!("{x:.4}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.push('0');
    }
    s
}

/// Format a table value: integers bare, anything else like [`fmt_real`].
fn fmt_cell(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        fmt_real(x)
    }
}

fn cmd_simulate(
    path: &std::path::Path,
    profile: Option<Profile>,
    literal: bool,
    csv_out: Option<&std::path::Path>,
) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", path.display());
            return ExitCode::from(1);
        }
    };
    let mut scenario = match cane_core::parse_scenario(&text) {
        Ok(scenario) => scenario,
        Err(err) => {
            eprintln!("error: {}: {err}", path.display());
            return ExitCode::from(2);
        }
    };
    if let Some(p) = profile {
        scenario.overrides.profile = Some(p);
    }
    if literal {
        scenario.overrides.literal = Some(true);
    }
    let events = match run_simulation(&scenario) {
        Ok(events) => events,
        Err(err) => {
            eprintln!("error: simulation failed: {err}");
            return ExitCode::from(1);
        }
    };
    let csv = trace_to_csv(&events);
    if let Some(out_path) = csv_out {
        if let Err(err) = fs::write(out_path, &csv) {
            eprintln!("error: cannot write {}: {err}", out_path.display());
            return ExitCode::from(1);
        }
    } else {
        let mut stdout = std::io::stdout().lock();
        if stdout.write_all(csv.as_bytes()).is_err() {
            return ExitCode::from(1);
        }
    }
    // The summary goes to stderr so a piped trace stays pure CSV.
    let announcements = events.iter().filter(|e| e.voice_id.is_some()).count();
    let buzzer_on = events.iter().filter(|e| e.buzzer).count();
    summarize(&events, announcements, buzzer_on);
    ExitCode::SUCCESS
}

fn summarize(events: &[TraceEvent], announcements: usize, buzzer_on: usize) {
    eprintln!(
        "ticks={} announcements={announcements} buzzer_on_ticks={buzzer_on}",
        events.len()
    );
}

fn cmd_calibrate() -> ExitCode {
    let table = CalibrationTable::embedded_default();
    let mut out = String::from("range_in,calc_mv,measured_mv,error_pct\n");
    for row in table.rows() {
        out.push_str(&format!(
            "{},{},{},{:.1}\n",
            fmt_cell(row.range_in),
            fmt_cell(row.calc_mv),
            fmt_cell(row.measured_mv),
            cane_core::round_percent_1dp(row.error_pct),
        ));
    }
    print!("{out}");
    ExitCode::SUCCESS
}

fn cmd_timer(r1: f64, r2: f64, r3: f64, c1: f64) -> ExitCode {
    let cfg = match TimerConfig::new(r1, r2, r3, c1) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let period = cfg.astable_period();
    let frequency = match cane_core::frequency_from_period(period) {
        Ok(frequency) => frequency,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    println!("period_s: {}", fmt_real(period));
    println!("frequency_hz: {}", fmt_real(frequency));
    println!("duty_cycle: {:.4}", cfg.duty_cycle());
    ExitCode::SUCCESS
}

fn cmd_classify(count: u32, profile: Option<Profile>, literal: bool) -> ExitCode {
    let mut cfg = ControllerConfig::for_profile(profile.unwrap_or(Profile::Fig2Raw));
    cfg.literal_mode = literal;
    let full_scale = (1u32 << cfg.adc_bits) - 1;
    if count > full_scale {
        eprintln!("error: count {count} exceeds the {}-bit ADC range 0..={full_scale}", cfg.adc_bits);
        return ExitCode::from(2);
    }
    let class = classify_range(count, &cfg);
    // One-shot view: no controller history, so the motor line starts off.
    let out = outputs_for_class(class, &cfg, MotorPattern::Off);
    let voice = match voice_for_class(class) {
        Some(msg) => format!("msg {}", msg.id),
        None => "no msg".to_string(),
    };
    println!(
        "{class}: {}, motor {}, {voice}",
        out.led_label(),
        out.motor.label()
    );
    ExitCode::SUCCESS
}
