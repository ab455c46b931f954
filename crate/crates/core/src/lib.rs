//! Deterministic simulator and analysis toolkit for an ultrasonic
//! obstacle-alert cane.
//!
//! The library models the device's sensing-to-alert pipeline end to end:
//!
//! * [`signal_chain`] — pure math of the chain: the distance→voltage
//!   transfer, the bench-measured calibration curve and its error table,
//!   ADC quantization, echo-time physics, and the astable timer formulas
//!   behind the vibration drive.
//! * [`sensor_models`] — a 1-D corridor world (walker, obstacles, water)
//!   and the ultrasonic/water sensor front-ends that sample it.
//! * [`alert_controller`] — the firmware state machine: range
//!   classification, LED/motor/voice outputs, voice debouncing, and the
//!   water-buzzer latch.
//! * [`scenario_sim`] — a line-oriented scenario language, the
//!   deterministic tick loop, and byte-stable CSV traces.
//!
//! Everything is a pure function of its inputs: no clocks, no randomness,
//! no I/O beyond the scenario text handed in. Two runs of the same scenario
//! render byte-identical traces, which is what makes golden-file testing of
//! the firmware behavior practical.

pub mod alert_controller;
pub mod scenario_sim;
pub mod sensor_models;
pub mod signal_chain;

pub use alert_controller::{
    classify_range, controller_step, controller_step_for_class, debounce_update, literal_hold_ms,
    outputs_for_class, voice_for_class, water_buzzer_update, AlertState, ControllerConfig,
    ControllerError, ControllerState, MotorPattern, Profile, RangeClass, Thresholds, VoiceMessage,
};
pub use scenario_sim::{
    parse_scenario, run_simulation, trace_to_csv, ConfigOverrides, LedStatus, MotorStatus,
    Scenario, ScenarioError, TraceEvent, TRACE_CSV_HEADER,
};
pub use sensor_models::{
    advance_walker, nearest_obstacle_distance, sense_ultrasonic, water_depth_at, Obstacle,
    SensingMode, WalkerState, WaterPatch, World, WorldError,
};
pub use signal_chain::{
    adc_convert, analog_from_range, build_calibration_table, echo_time, error_percent,
    frequency_from_period, measured_mv, parse_calibration_text, range_from_echo,
    round_percent_1dp, CalibrationRow, CalibrationTable, SensorSpec, SignalChainError, SquareWave,
    TimerConfig, INCHES_PER_METER, METERS_PER_INCH, SOUND_SPEED_M_S,
};
