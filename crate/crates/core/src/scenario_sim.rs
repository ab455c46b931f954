//! Scripted walking scenarios: a line-oriented text format, a deterministic
//! tick loop driving the sensor models and the controller, and a byte-stable
//! CSV trace renderer for golden-file comparison.

use std::fmt::Write as _;

use thiserror::Error;

use crate::alert_controller::{
    classify_range, controller_step_for_class, literal_hold_ms, AlertState, ControllerConfig,
    ControllerError, ControllerState, MotorPattern, Profile, RangeClass,
};
use crate::sensor_models::{
    advance_walker, sense_ultrasonic, water_depth_at, Obstacle, SensingMode, WalkerState,
    WaterPatch, World,
};
use crate::signal_chain::{adc_convert, CalibrationTable, SensorSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    Semantic { line: usize, reason: String },
    #[error(transparent)]
    Controller(#[from] ControllerError),
}

/// Controller settings a scenario (or the command line) may pin; anything
/// left `None` falls back to the profile defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfigOverrides {
    pub profile: Option<Profile>,
    pub literal: Option<bool>,
    pub buzzer_timer_ms: Option<u64>,
}

/// A parsed scenario: world, walker, time base, and config overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub tick_ms: u64,
    pub end_tick: u64,
    pub walker: WalkerState,
    pub world: World,
    pub overrides: ConfigOverrides,
}

impl Scenario {
    /// Simulations default to the `table1_feet` profile so that every range
    /// class is reachable from real echoes.
    pub fn profile(&self) -> Profile {
        self.overrides.profile.unwrap_or(Profile::Table1Feet)
    }

    pub fn controller_config(&self) -> ControllerConfig {
        let mut cfg = ControllerConfig::for_profile(self.profile());
        if let Some(literal) = self.overrides.literal {
            cfg.literal_mode = literal;
        }
        if let Some(timer) = self.overrides.buzzer_timer_ms {
            cfg.buzzer_timer_ms = Some(timer);
        }
        cfg
    }

    pub fn sensor_spec(&self) -> SensorSpec {
        SensorSpec {
            max_range_in: self.profile().default_max_range_in(),
            ..SensorSpec::default()
        }
    }
}

/// One row of the simulation trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub tick: u64,
    pub time_ms: u64,
    pub walker_pos_in: f64,
    pub distance_in: Option<f64>,
    pub voltage_mv: f64,
    pub adc_count: u32,
    pub range_class: RangeClass,
    pub led: LedStatus,
    pub motor: MotorStatus,
    pub voice_id: Option<u8>,
    pub buzzer: bool,
    pub water_depth_cm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LedStatus {
    Red,
    Yellow,
    Green,
    Off,
}

impl std::fmt::Display for LedStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LedStatus::Red => "red",
            LedStatus::Yellow => "yellow",
            LedStatus::Green => "green",
            LedStatus::Off => "off",
        })
    }
}

/// Per-tick motor line status after rendering the active [`MotorPattern`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotorStatus {
    Off,
    On,
    PulseOn,
    PulseOff,
}

impl std::fmt::Display for MotorStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MotorStatus::Off => "off",
            MotorStatus::On => "on",
            MotorStatus::PulseOn => "pulse_on",
            MotorStatus::PulseOff => "pulse_off",
        })
    }
}

fn parse_err(line: usize, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Parse {
        line,
        reason: reason.into(),
    }
}

fn semantic_err(line: usize, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Semantic {
        line,
        reason: reason.into(),
    }
}

fn parse_f64(directive: &str, key: &str, raw: &str, line: usize) -> Result<f64, ScenarioError> {
    let value: f64 = raw
        .parse()
        .map_err(|_| parse_err(line, format!("{directive}: invalid number `{raw}` for {key}")))?;
    if !value.is_finite() {
        return Err(parse_err(
            line,
            format!("{directive}: {key} must be finite, got `{raw}`"),
        ));
    }
    Ok(value)
}

fn parse_u64(directive: &str, key: &str, raw: &str, line: usize) -> Result<u64, ScenarioError> {
    raw.parse().map_err(|_| {
        parse_err(
            line,
            format!("{directive}: invalid integer `{raw}` for {key}"),
        )
    })
}

/// Split `key=value` arguments, rejecting anything without an `=`.
fn key_values<'a>(
    directive: &str,
    args: &[&'a str],
    line: usize,
) -> Result<Vec<(&'a str, &'a str)>, ScenarioError> {
    args.iter()
        .map(|arg| {
            arg.split_once('=').ok_or_else(|| {
                parse_err(line, format!("{directive}: expected key=value, got `{arg}`"))
            })
        })
        .collect()
}

fn single_arg<'a>(directive: &str, args: &[&'a str], line: usize) -> Result<&'a str, ScenarioError> {
    match args {
        [one] => Ok(one),
        _ => Err(parse_err(
            line,
            format!("{directive}: expected exactly one argument"),
        )),
    }
}

/// Parse the scenario text format.
///
/// Directives (case-insensitive, one per line, `#` starts a comment):
/// `TICK <ms>` · `END <tick>` · `WALKER start=<in> speed=<in_per_tick>` ·
/// `OBSTACLE pos=<in> [appear=<tick>] [vanish=<tick>]` ·
/// `WATER from=<in> to=<in> depth=<cm>` · `PROFILE fig2_raw|table1_feet` ·
/// `LITERAL on|off` · `BUZZER_TIMER <ms>`
///
/// Defaults: 100 ms ticks, end tick 0, a stationary walker at 0, and no
/// profile override. Repeated scalar directives keep the last value;
/// `OBSTACLE` and `WATER` accumulate.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut tick_ms = 100u64;
    let mut end_tick = 0u64;
    let mut walker = WalkerState {
        pos_in: 0.0,
        speed_in_per_tick: 0.0,
    };
    let mut obstacles = Vec::new();
    let mut water = Vec::new();
    let mut overrides = ConfigOverrides::default();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let word = tokens.next().expect("non-empty line has a first token");
        let directive = word.to_ascii_uppercase();
        let args: Vec<&str> = tokens.collect();

        match directive.as_str() {
            "TICK" => {
                let ms = parse_u64(&directive, "ms", single_arg(&directive, &args, line)?, line)?;
                if ms == 0 {
                    return Err(semantic_err(line, "TICK: tick length must be positive"));
                }
                tick_ms = ms;
            }
            "END" => {
                end_tick =
                    parse_u64(&directive, "tick", single_arg(&directive, &args, line)?, line)?;
            }
            "WALKER" => {
                for (key, value) in key_values(&directive, &args, line)? {
                    match key {
                        "start" => {
                            let start = parse_f64(&directive, key, value, line)?;
                            if start < 0.0 {
                                return Err(semantic_err(
                                    line,
                                    "WALKER: start must be non-negative",
                                ));
                            }
                            walker.pos_in = start;
                        }
                        "speed" => walker.speed_in_per_tick = parse_f64(&directive, key, value, line)?,
                        other => {
                            return Err(parse_err(
                                line,
                                format!("WALKER: unknown key `{other}`"),
                            ))
                        }
                    }
                }
            }
            "OBSTACLE" => {
                let mut pos = None;
                let mut appear = 0u64;
                let mut vanish = None;
                for (key, value) in key_values(&directive, &args, line)? {
                    match key {
                        "pos" => pos = Some(parse_f64(&directive, key, value, line)?),
                        "appear" => appear = parse_u64(&directive, key, value, line)?,
                        "vanish" => vanish = Some(parse_u64(&directive, key, value, line)?),
                        other => {
                            return Err(parse_err(
                                line,
                                format!("OBSTACLE: unknown key `{other}`"),
                            ))
                        }
                    }
                }
                let pos = pos
                    .ok_or_else(|| parse_err(line, "OBSTACLE: missing required key `pos`"))?;
                if pos < 0.0 {
                    return Err(semantic_err(line, "OBSTACLE: pos must be non-negative"));
                }
                if let Some(v) = vanish {
                    if appear > v {
                        return Err(semantic_err(
                            line,
                            format!("OBSTACLE: appear={appear} is after vanish={v}"),
                        ));
                    }
                }
                obstacles.push(Obstacle {
                    pos_in: pos,
                    appear_tick: appear,
                    vanish_tick: vanish,
                });
            }
            "WATER" => {
                let mut from = None;
                let mut to = None;
                let mut depth = None;
                for (key, value) in key_values(&directive, &args, line)? {
                    match key {
                        "from" => from = Some(parse_f64(&directive, key, value, line)?),
                        "to" => to = Some(parse_f64(&directive, key, value, line)?),
                        "depth" => depth = Some(parse_f64(&directive, key, value, line)?),
                        other => {
                            return Err(parse_err(line, format!("WATER: unknown key `{other}`")))
                        }
                    }
                }
                let (from, to, depth) = match (from, to, depth) {
                    (Some(f), Some(t), Some(d)) => (f, t, d),
                    _ => {
                        return Err(parse_err(
                            line,
                            "WATER: requires from=, to=, and depth=",
                        ))
                    }
                };
                if from < 0.0 || from >= to {
                    return Err(semantic_err(
                        line,
                        format!("WATER: need 0 <= from < to, got from={from} to={to}"),
                    ));
                }
                if depth < 0.0 {
                    return Err(semantic_err(line, "WATER: depth must be non-negative"));
                }
                water.push(WaterPatch {
                    from_in: from,
                    to_in: to,
                    depth_cm: depth,
                });
            }
            "PROFILE" => {
                let name = single_arg(&directive, &args, line)?;
                let profile = name
                    .parse::<Profile>()
                    .map_err(|e| parse_err(line, format!("PROFILE: {e}")))?;
                overrides.profile = Some(profile);
            }
            "LITERAL" => {
                let value = single_arg(&directive, &args, line)?;
                overrides.literal = Some(match value.to_ascii_lowercase().as_str() {
                    "on" => true,
                    "off" => false,
                    other => {
                        return Err(parse_err(
                            line,
                            format!("LITERAL: expected on|off, got `{other}`"),
                        ))
                    }
                });
            }
            "BUZZER_TIMER" => {
                let ms =
                    parse_u64(&directive, "ms", single_arg(&directive, &args, line)?, line)?;
                overrides.buzzer_timer_ms = Some(ms);
            }
            _ => {
                return Err(parse_err(line, format!("unknown directive `{word}`")));
            }
        }
    }

    // Size the corridor to hold every feature and the walker's whole path,
    // so the world's own bounds never interfere with a scripted run.
    let mut corridor = walker.pos_in + walker.speed_in_per_tick * end_tick as f64;
    corridor = corridor.max(walker.pos_in).max(0.0);
    for o in &obstacles {
        corridor = corridor.max(o.pos_in);
    }
    for w in &water {
        corridor = corridor.max(w.to_in);
    }
    let world = World::new(obstacles, water, corridor)
        .expect("per-line validation keeps every feature inside the corridor");

    Ok(Scenario {
        tick_ms,
        end_tick,
        walker,
        world,
        overrides,
    })
}

fn led_status(out: &AlertState) -> LedStatus {
    if out.led_red {
        LedStatus::Red
    } else if out.led_yellow {
        LedStatus::Yellow
    } else if out.led_green {
        LedStatus::Green
    } else {
        LedStatus::Off
    }
}

/// Render the active pattern to the motor line's status at `now_ms`.
/// A pulse pattern replays for as long as it stays the active pattern,
/// mirroring a firmware loop that re-enters the same branch.
fn render_motor(pattern: MotorPattern, since_ms: u64, now_ms: u64) -> MotorStatus {
    match pattern {
        MotorPattern::Off => MotorStatus::Off,
        MotorPattern::Continuous => MotorStatus::On,
        MotorPattern::Pulsed { on_ms, off_ms, .. } => {
            let cycle = on_ms + off_ms;
            let phase = (now_ms - since_ms) % cycle;
            if phase < on_ms {
                MotorStatus::PulseOn
            } else {
                MotorStatus::PulseOff
            }
        }
    }
}

/// Run the deterministic tick loop and collect one [`TraceEvent`] per tick
/// (ticks 0 through `end_tick` inclusive).
///
/// Each tick senses the world at the walker's current position and steps the
/// controller. A missing echo is handed to the controller as OutOfRange
/// directly and recorded as 0 mV / count 0. In literal mode, the medium and
/// out-of-range branches hold the loop (12 s and 2 s respectively); held
/// ticks replay the last sensed inputs and outputs — only the walker keeps
/// moving and the motor pattern keeps playing — and announce nothing.
pub fn run_simulation(scenario: &Scenario) -> Result<Vec<TraceEvent>, ScenarioError> {
    let cfg = scenario.controller_config();
    let spec = scenario.sensor_spec();
    let table = CalibrationTable::embedded_default();
    let corridor = scenario.world.corridor_len_in();

    let mut state = ControllerState::new();
    let mut events = Vec::with_capacity(scenario.end_tick as usize + 1);
    let mut pattern = MotorPattern::Off;
    let mut pattern_since_ms = 0u64;
    let mut busy_until_ms = 0u64;

    for tick in 0..=scenario.end_tick {
        let now_ms = tick * scenario.tick_ms;
        let walker = advance_walker(&scenario.walker, tick, corridor);

        if now_ms < busy_until_ms {
            let prev = *events.last().expect("a hold is always preceded by a step");
            events.push(TraceEvent {
                tick,
                time_ms: now_ms,
                walker_pos_in: walker.pos_in,
                motor: render_motor(pattern, pattern_since_ms, now_ms),
                voice_id: None,
                ..prev
            });
            continue;
        }

        let depth = water_depth_at(&scenario.world, &walker);
        let (distance, voltage) = sense_ultrasonic(
            &scenario.world,
            &walker,
            tick,
            &spec,
            &table,
            SensingMode::Realistic,
        );
        let (count, class) = match distance {
            None => (0, RangeClass::OutOfRange),
            Some(_) => {
                let count = adc_convert(voltage, cfg.adc_bits, cfg.vref_mv)
                    .map_err(ControllerError::from)?;
                (count, classify_range(count, &cfg))
            }
        };
        let (out, next_state) = controller_step_for_class(&state, class, depth, now_ms, &cfg)?;
        state = next_state;

        if out.motor != pattern {
            pattern = out.motor;
            pattern_since_ms = now_ms;
        }
        busy_until_ms = now_ms + literal_hold_ms(class, &cfg);

        events.push(TraceEvent {
            tick,
            time_ms: now_ms,
            walker_pos_in: walker.pos_in,
            distance_in: distance,
            voltage_mv: voltage,
            adc_count: count,
            range_class: class,
            led: led_status(&out),
            motor: render_motor(pattern, pattern_since_ms, now_ms),
            voice_id: out.voice.map(|m| m.id),
            buzzer: out.buzzer,
            water_depth_cm: depth,
        });
    }
    Ok(events)
}

pub const TRACE_CSV_HEADER: &str = "tick,time_ms,walker_pos_in,distance_in,voltage_mv,adc_count,range_class,led,motor,voice_id,buzzer,water_depth_cm";

/// Format a real value with up to four decimals (at least one), no locale.
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

/// Render a trace as CSV, bit-exact across runs and platforms: absent
/// distance/voice fields are left empty.
pub fn trace_to_csv(events: &[TraceEvent]) -> String {
    let mut out = String::with_capacity(events.len() * 64 + TRACE_CSV_HEADER.len() + 1);
    out.push_str(TRACE_CSV_HEADER);
    out.push('\n');
    for e in events {
        let distance = e.distance_in.map(fmt_real).unwrap_or_default();
        let voice = e.voice_id.map(|id| id.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            e.tick,
            e.time_ms,
            fmt_real(e.walker_pos_in),
            distance,
            fmt_real(e.voltage_mv),
            e.adc_count,
            e.range_class,
            e.led,
            e.motor,
            voice,
            e.buzzer,
            fmt_real(e.water_depth_cm),
        )
        .expect("writing to a String cannot fail");
    }
    out
}
