//! Pure math of the sensing chain: the distance-to-voltage transfer, the
//! bench-measured voltage model with its error percentages, ADC quantization,
//! echo-time physics, and the astable square-wave formulas that drive the
//! vibration motor.

use thiserror::Error;

/// Meters per inch, exact by definition.
pub const METERS_PER_INCH: f64 = 0.0254;

/// Inches in one meter.
pub const INCHES_PER_METER: f64 = 1.0 / METERS_PER_INCH;

/// Speed of sound in dry air at 20 °C, m/s.
pub const SOUND_SPEED_M_S: f64 = 343.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalChainError {
    #[error("range must be non-negative, got {0} in")]
    NegativeRange(f64),
    #[error("range {range_in} in is outside the calibration table [0, {max_in}] in")]
    OutsideTable { range_in: f64, max_in: f64 },
    #[error("error percent is undefined for a zero calculated voltage")]
    ZeroCalcMv,
    #[error("voltage must be non-negative, got {0} mV")]
    NegativeVoltage(f64),
    #[error("ADC resolution must be 8..=16 bits, got {0}")]
    AdcBitsOutOfRange(u32),
    #[error("ADC reference voltage must be positive, got {0} mV")]
    NonPositiveVref(f64),
    #[error("period must be positive, got {0} s")]
    NonPositivePeriod(f64),
    #[error("invalid sensor spec: {0}")]
    InvalidSensorSpec(&'static str),
    #[error("invalid timer config: {0}")]
    InvalidTimerConfig(&'static str),
    #[error("invalid square wave: {0}")]
    InvalidSquareWave(&'static str),
    #[error("calibration data line {line}: {reason}")]
    CalibrationFormat { line: usize, reason: String },
}

/// Physical constants of the ultrasonic ranger.
///
/// The defaults describe the 40 kHz transducer used on the cane: a nominal
/// 10 mV per inch analog transfer and a one-meter detection range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSpec {
    pub frequency_khz: f64,
    pub mv_per_inch: f64,
    pub max_range_in: f64,
    pub beam_width_deg: f64,
    pub sound_speed_m_s: f64,
}

impl Default for SensorSpec {
    fn default() -> Self {
        Self {
            frequency_khz: 40.0,
            mv_per_inch: 10.0,
            max_range_in: INCHES_PER_METER,
            // Recorded transducer beam narrowness; unused by the 1-D model.
            beam_width_deg: 2.4644,
            sound_speed_m_s: SOUND_SPEED_M_S,
        }
    }
}

impl SensorSpec {
    pub fn new(
        frequency_khz: f64,
        mv_per_inch: f64,
        max_range_in: f64,
        beam_width_deg: f64,
        sound_speed_m_s: f64,
    ) -> Result<Self, SignalChainError> {
        let spec = Self {
            frequency_khz,
            mv_per_inch,
            max_range_in,
            beam_width_deg,
            sound_speed_m_s,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), SignalChainError> {
        let fields = [
            (self.frequency_khz, "frequency_khz must be positive"),
            (self.mv_per_inch, "mv_per_inch must be positive"),
            (self.max_range_in, "max_range_in must be positive"),
            (self.beam_width_deg, "beam_width_deg must be positive"),
            (self.sound_speed_m_s, "sound_speed_m_s must be positive"),
        ];
        for (value, reason) in fields {
            if value <= 0.0 || !value.is_finite() {
                return Err(SignalChainError::InvalidSensorSpec(reason));
            }
        }
        Ok(())
    }
}

/// One measured point of the ranger's transfer: commanded range, ideal
/// voltage, bench voltage, and the deviation between them in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationRow {
    pub range_in: f64,
    pub calc_mv: f64,
    pub measured_mv: f64,
    /// Full-precision error percent; round with [`round_percent_1dp`] for display.
    pub error_pct: f64,
}

/// Bench calibration of the ranger: rows strictly increasing in range,
/// starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationTable {
    rows: Vec<CalibrationRow>,
}

impl CalibrationTable {
    pub fn rows(&self) -> &[CalibrationRow] {
        &self.rows
    }

    /// Largest range covered by the table, in inches.
    pub fn max_range_in(&self) -> f64 {
        self.rows.last().map(|r| r.range_in).unwrap_or(0.0)
    }

    /// The calibration dataset shipped with the crate, from the bench test of
    /// the 10 mV/in ranger.
    pub fn embedded_default() -> Self {
        let pairs = parse_calibration_text(include_str!("../data/default_calibration.txt"))
            .expect("embedded calibration data parses");
        build_calibration_table(&SensorSpec::default(), &pairs)
            .expect("embedded calibration data is well formed")
    }
}

/// Ideal analog output for a range: `range_in * mv_per_inch`.
pub fn analog_from_range(range_in: f64, spec: &SensorSpec) -> Result<f64, SignalChainError> {
    if range_in < 0.0 || range_in.is_nan() {
        return Err(SignalChainError::NegativeRange(range_in));
    }
    Ok(range_in * spec.mv_per_inch)
}

/// Bench-voltage model: piecewise-linear interpolation through the table's
/// anchors. Queries at an anchor return the measured value bit-for-bit.
pub fn measured_mv(range_in: f64, table: &CalibrationTable) -> Result<f64, SignalChainError> {
    let rows = table.rows();
    let max_in = table.max_range_in();
    if range_in < 0.0 || range_in.is_nan() || range_in > max_in {
        return Err(SignalChainError::OutsideTable { range_in, max_in });
    }
    // Find the segment whose left anchor is the last one at or below the query.
    let idx = rows.partition_point(|r| r.range_in <= range_in);
    let left = &rows[idx - 1];
    if left.range_in == range_in {
        return Ok(left.measured_mv);
    }
    let right = &rows[idx];
    let t = (range_in - left.range_in) / (right.range_in - left.range_in);
    Ok(left.measured_mv + t * (right.measured_mv - left.measured_mv))
}

/// Deviation of the measured voltage from the calculated one, in percent:
/// `(calc - mea) / calc * 100`.
pub fn error_percent(calc_mv: f64, measured_mv: f64) -> Result<f64, SignalChainError> {
    if calc_mv == 0.0 {
        return Err(SignalChainError::ZeroCalcMv);
    }
    Ok((calc_mv - measured_mv) / calc_mv * 100.0)
}

/// Presentation rounding for error percentages: one decimal place.
pub fn round_percent_1dp(pct: f64) -> f64 {
    (pct * 10.0).round() / 10.0
}

/// Parse the two-column calibration text format: one
/// `<range_inches> <measured_mv>` pair per line, `#` comments allowed.
pub fn parse_calibration_text(text: &str) -> Result<Vec<(f64, f64)>, SignalChainError> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let range = parse_field(fields.next(), "range_inches", line)?;
        let mv = parse_field(fields.next(), "measured_mv", line)?;
        if let Some(extra) = fields.next() {
            return Err(SignalChainError::CalibrationFormat {
                line,
                reason: format!("unexpected trailing token `{extra}`"),
            });
        }
        pairs.push((range, mv));
    }
    Ok(pairs)
}

fn parse_field(field: Option<&str>, name: &str, line: usize) -> Result<f64, SignalChainError> {
    let token = field.ok_or_else(|| SignalChainError::CalibrationFormat {
        line,
        reason: format!("missing {name}"),
    })?;
    let value: f64 = token
        .parse()
        .map_err(|_| SignalChainError::CalibrationFormat {
            line,
            reason: format!("invalid {name} `{token}`"),
        })?;
    if !value.is_finite() {
        return Err(SignalChainError::CalibrationFormat {
            line,
            reason: format!("non-finite {name} `{token}`"),
        });
    }
    Ok(value)
}

/// Build a calibration table from measured `(range_in, measured_mv)` pairs,
/// computing the calculated column and error percent per row. The zero-range
/// row's error is 0 by convention since its calculated voltage is zero.
pub fn build_calibration_table(
    spec: &SensorSpec,
    measured: &[(f64, f64)],
) -> Result<CalibrationTable, SignalChainError> {
    if measured.is_empty() {
        return Err(SignalChainError::CalibrationFormat {
            line: 0,
            reason: "calibration table is empty".into(),
        });
    }
    if measured[0].0 != 0.0 {
        return Err(SignalChainError::CalibrationFormat {
            line: 1,
            reason: format!("first range must be 0, got {}", measured[0].0),
        });
    }
    let mut rows = Vec::with_capacity(measured.len());
    let mut prev = f64::NEG_INFINITY;
    for (idx, &(range_in, mv)) in measured.iter().enumerate() {
        if range_in <= prev {
            return Err(SignalChainError::CalibrationFormat {
                line: idx + 1,
                reason: format!("ranges must be strictly increasing, got {range_in} after {prev}"),
            });
        }
        prev = range_in;
        let calc_mv = analog_from_range(range_in, spec)?;
        let error_pct = if calc_mv == 0.0 {
            0.0
        } else {
            error_percent(calc_mv, mv)?
        };
        rows.push(CalibrationRow {
            range_in,
            calc_mv,
            measured_mv: mv,
            error_pct,
        });
    }
    Ok(CalibrationTable { rows })
}

/// Quantize a voltage: `floor(voltage * 2^bits / vref)`, clamped to the
/// converter's count range.
pub fn adc_convert(voltage_mv: f64, bits: u32, vref_mv: f64) -> Result<u32, SignalChainError> {
    if voltage_mv < 0.0 || voltage_mv.is_nan() {
        return Err(SignalChainError::NegativeVoltage(voltage_mv));
    }
    if !(8..=16).contains(&bits) {
        return Err(SignalChainError::AdcBitsOutOfRange(bits));
    }
    if vref_mv <= 0.0 || !vref_mv.is_finite() {
        return Err(SignalChainError::NonPositiveVref(vref_mv));
    }
    let full_scale = (1u32 << bits) as f64;
    let count = (voltage_mv * full_scale / vref_mv).floor();
    let max_count = (1u32 << bits) - 1;
    Ok(count.min(max_count as f64) as u32)
}

/// Round-trip time of the ping: `2 * range / c`.
///
/// `range_in` must be non-negative.
pub fn echo_time(range_in: f64, spec: &SensorSpec) -> f64 {
    debug_assert!(range_in >= 0.0, "range must be non-negative");
    2.0 * range_in * METERS_PER_INCH / spec.sound_speed_m_s
}

/// Exact inverse of [`echo_time`]: distance from a round-trip time.
///
/// `t_s` must be non-negative.
pub fn range_from_echo(t_s: f64, spec: &SensorSpec) -> f64 {
    debug_assert!(t_s >= 0.0, "echo time must be non-negative");
    t_s * spec.sound_speed_m_s / 2.0 / METERS_PER_INCH
}

/// One on/off cycle of the motor-drive square wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWave {
    pub t_on: f64,
    pub t_off: f64,
}

impl SquareWave {
    pub fn new(t_on: f64, t_off: f64) -> Result<Self, SignalChainError> {
        if t_on < 0.0 || t_off < 0.0 || t_on.is_nan() || t_off.is_nan() {
            return Err(SignalChainError::InvalidSquareWave(
                "intervals must be non-negative",
            ));
        }
        if t_on == 0.0 && t_off == 0.0 {
            return Err(SignalChainError::InvalidSquareWave(
                "intervals must not both be zero",
            ));
        }
        Ok(Self { t_on, t_off })
    }

    /// Period of the wave: the on interval plus the off interval.
    pub fn period(&self) -> f64 {
        self.t_on + self.t_off
    }
}

/// Frequency of a periodic wave, `1 / T`.
pub fn frequency_from_period(t_s: f64) -> Result<f64, SignalChainError> {
    if t_s <= 0.0 || t_s.is_nan() {
        return Err(SignalChainError::NonPositivePeriod(t_s));
    }
    Ok(1.0 / t_s)
}

/// Component values of the astable oscillator driving the vibration motor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimerConfig {
    pub r1_ohm: f64,
    pub r2_ohm: f64,
    pub r3_ohm: f64,
    pub c1_farad: f64,
}

impl TimerConfig {
    pub fn new(
        r1_ohm: f64,
        r2_ohm: f64,
        r3_ohm: f64,
        c1_farad: f64,
    ) -> Result<Self, SignalChainError> {
        let cfg = Self {
            r1_ohm,
            r2_ohm,
            r3_ohm,
            c1_farad,
        };
        for (value, reason) in [
            (cfg.r1_ohm, "r1 must be positive"),
            (cfg.r2_ohm, "r2 must be positive"),
            (cfg.r3_ohm, "r3 must be positive"),
            (cfg.c1_farad, "c1 must be positive"),
        ] {
            if value <= 0.0 || !value.is_finite() {
                return Err(SignalChainError::InvalidTimerConfig(reason));
            }
        }
        Ok(cfg)
    }

    /// Oscillation period of the astable circuit:
    /// `0.69 * C1 * (2*R1 + R2 + R3)`.
    pub fn astable_period(&self) -> f64 {
        0.69 * self.c1_farad * (2.0 * self.r1_ohm + self.r2_ohm + self.r3_ohm)
    }

    /// High fraction of the output wave:
    /// `(R1 + R2 + R3) / (2*R1 + R2 + R3)`.
    ///
    /// Always in the open interval (0.5, 1) for positive resistances.
    pub fn duty_cycle(&self) -> f64 {
        (self.r1_ohm + self.r2_ohm + self.r3_ohm)
            / (2.0 * self.r1_ohm + self.r2_ohm + self.r3_ohm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn default_table() -> CalibrationTable {
        CalibrationTable::embedded_default()
    }

    #[test]
    fn analog_transfer_matches_bench_rows() {
        let spec = SensorSpec::default();
        assert_eq!(analog_from_range(0.0, &spec).unwrap(), 0.0);
        assert_eq!(analog_from_range(5.0, &spec).unwrap(), 50.0);
        assert_eq!(analog_from_range(40.0, &spec).unwrap(), 400.0);
    }

    #[test]
    fn analog_transfer_rejects_negative_range() {
        let spec = SensorSpec::default();
        assert_eq!(
            analog_from_range(-1.0, &spec),
            Err(SignalChainError::NegativeRange(-1.0))
        );
    }

    #[test]
    fn measured_model_hits_anchors_exactly() {
        let table = default_table();
        assert_eq!(measured_mv(5.0, &table).unwrap(), 42.0);
        assert_eq!(measured_mv(20.0, &table).unwrap(), 193.0);
        assert_eq!(measured_mv(40.0, &table).unwrap(), 396.0);
        assert_eq!(measured_mv(0.0, &table).unwrap(), 0.0);
    }

    #[test]
    fn measured_model_interpolates_between_anchors() {
        // Midpoint of (5, 42) and (10, 94): 42 + 0.5 * 52 = 68.
        let table = default_table();
        assert_eq!(measured_mv(7.5, &table).unwrap(), 68.0);
    }

    #[test]
    fn measured_model_rejects_out_of_table_queries() {
        let table = default_table();
        assert!(matches!(
            measured_mv(40.5, &table),
            Err(SignalChainError::OutsideTable { .. })
        ));
        assert!(matches!(
            measured_mv(-0.1, &table),
            Err(SignalChainError::OutsideTable { .. })
        ));
    }

    #[test]
    fn error_percent_matches_bench_rows() {
        assert_eq!(error_percent(50.0, 42.0).unwrap(), 16.0);
        let raw = error_percent(300.0, 296.0).unwrap();
        assert!((raw - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(round_percent_1dp(raw), 1.3);
        assert_eq!(error_percent(123.0, 123.0).unwrap(), 0.0);
    }

    #[test]
    fn error_percent_rejects_zero_calc() {
        assert_eq!(error_percent(0.0, 5.0), Err(SignalChainError::ZeroCalcMv));
    }

    #[test]
    fn build_table_computes_rows() {
        let table = default_table();
        let row5 = table.rows()[1];
        assert_eq!(
            (row5.range_in, row5.calc_mv, row5.measured_mv),
            (5.0, 50.0, 42.0)
        );
        assert_eq!(round_percent_1dp(row5.error_pct), 16.0);

        let row0 = table.rows()[0];
        assert_eq!(
            (row0.range_in, row0.calc_mv, row0.measured_mv, row0.error_pct),
            (0.0, 0.0, 0.0, 0.0)
        );

        // 15 in: raw error 5.333... presents as 5.3 at one decimal.
        let row15 = table.rows()[3];
        assert_eq!(round_percent_1dp(row15.error_pct), 5.3);
    }

    #[test]
    fn build_table_rejects_bad_orderings() {
        let spec = SensorSpec::default();
        assert!(build_calibration_table(&spec, &[]).is_err());
        assert!(build_calibration_table(&spec, &[(5.0, 42.0)]).is_err());
        assert!(build_calibration_table(&spec, &[(0.0, 0.0), (5.0, 42.0), (5.0, 43.0)]).is_err());
        assert!(build_calibration_table(&spec, &[(0.0, 0.0), (10.0, 94.0), (5.0, 42.0)]).is_err());
    }

    #[test]
    fn calibration_text_parses_with_comments() {
        let pairs = parse_calibration_text("# header\n0 0\n5 42 # inline\n\n10 94\n").unwrap();
        assert_eq!(pairs, vec![(0.0, 0.0), (5.0, 42.0), (10.0, 94.0)]);
    }

    #[test]
    fn calibration_text_reports_line_numbers() {
        let err = parse_calibration_text("0 0\n5 forty-two\n").unwrap_err();
        match err {
            SignalChainError::CalibrationFormat { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn adc_quantizes_and_clamps() {
        assert_eq!(adc_convert(0.0, 10, 5000.0).unwrap(), 0);
        assert_eq!(adc_convert(5000.0, 10, 5000.0).unwrap(), 1023);
        // floor(684 * 1024 / 5000) = floor(140.08)
        assert_eq!(adc_convert(684.0, 10, 5000.0).unwrap(), 140);
    }

    #[test]
    fn adc_rejects_bad_inputs() {
        assert!(adc_convert(-1.0, 10, 5000.0).is_err());
        assert!(adc_convert(100.0, 7, 5000.0).is_err());
        assert!(adc_convert(100.0, 17, 5000.0).is_err());
        assert!(adc_convert(100.0, 10, 0.0).is_err());
    }

    #[test]
    fn echo_time_matches_one_meter_roundtrip() {
        let spec = SensorSpec::default();
        assert_eq!(echo_time(0.0, &spec), 0.0);
        // One meter out and back at 343 m/s.
        let t = echo_time(39.3701, &spec);
        assert!((t - 5.8309e-3).abs() < 1e-7);
        assert!(echo_time(10.0, &spec) < echo_time(20.0, &spec));
    }

    #[test]
    fn range_from_echo_inverts_echo_time() {
        let spec = SensorSpec::default();
        assert_eq!(range_from_echo(0.0, &spec), 0.0);
        let d = range_from_echo(5.8309e-3, &spec);
        assert!((d - 39.3701).abs() < 1e-3);
    }

    #[test]
    fn square_wave_period_sums_intervals() {
        assert_eq!(SquareWave::new(2.0, 3.0).unwrap().period(), 5.0);
        assert_eq!(SquareWave::new(1.0, 1.0).unwrap().period(), 2.0);
        assert_eq!(SquareWave::new(0.69, 0.69).unwrap().period(), 1.38);
    }

    #[test]
    fn square_wave_rejects_degenerate_intervals() {
        assert!(SquareWave::new(0.0, 0.0).is_err());
        assert!(SquareWave::new(-1.0, 1.0).is_err());
        assert!(SquareWave::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn frequency_inverts_period() {
        assert_eq!(frequency_from_period(0.02).unwrap(), 50.0);
        assert_eq!(frequency_from_period(1.0).unwrap(), 1.0);
        assert!(frequency_from_period(0.0).is_err());
        assert!(frequency_from_period(-1.0).is_err());
    }

    #[test]
    fn astable_period_matches_hand_substitution() {
        let cfg = TimerConfig::new(10_000.0, 5_000.0, 5_000.0, 1e-6).unwrap();
        assert!((cfg.astable_period() - 0.0207).abs() < 1e-12);

        let unit = TimerConfig::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(unit.astable_period(), 2.76);

        let doubled = TimerConfig { c1_farad: 2e-6, ..cfg };
        assert!((doubled.astable_period() - 2.0 * cfg.astable_period()).abs() < 1e-15);
    }

    #[test]
    fn duty_cycle_matches_hand_substitution() {
        let cfg = TimerConfig::new(1_000.0, 1_000.0, 1_000.0, 1e-6).unwrap();
        assert_eq!(cfg.duty_cycle(), 0.75);
        let scaled = TimerConfig::new(10_000.0, 10_000.0, 10_000.0, 1e-6).unwrap();
        assert_eq!(scaled.duty_cycle(), cfg.duty_cycle());
        // Vanishing r2 + r3 pushes the cycle toward the symmetric limit.
        let near_limit = TimerConfig::new(1_000.0, 1e-9, 1e-9, 1e-6).unwrap();
        assert!(near_limit.duty_cycle() > 0.5);
        assert!(near_limit.duty_cycle() < 0.500001);
    }

    #[test]
    fn timer_config_rejects_non_positive_components() {
        assert!(TimerConfig::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(TimerConfig::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(TimerConfig::new(1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sensor_spec_defaults_and_validation() {
        let spec = SensorSpec::default();
        assert_eq!(spec.frequency_khz, 40.0);
        assert_eq!(spec.mv_per_inch, 10.0);
        assert!(SensorSpec::new(40.0, 0.0, 40.0, 2.4644, 343.0).is_err());
    }

    proptest! {
        #[test]
        fn analog_transfer_is_linear(a in 0.0f64..1e6, b in 0.0f64..1e6) {
            let spec = SensorSpec::default();
            let lhs = analog_from_range(a, &spec).unwrap() + analog_from_range(b, &spec).unwrap();
            let rhs = analog_from_range(a + b, &spec).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0));
        }

        #[test]
        fn adc_is_monotone_and_saturates(v1 in 0.0f64..10_000.0, v2 in 0.0f64..10_000.0) {
            let (lo, hi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
            let c_lo = adc_convert(lo, 10, 5000.0).unwrap();
            let c_hi = adc_convert(hi, 10, 5000.0).unwrap();
            prop_assert!(c_lo <= c_hi);
            prop_assert!(c_hi <= 1023);
        }

        #[test]
        fn echo_roundtrip_is_identity(d in 0.0f64..40.0) {
            let spec = SensorSpec::default();
            let back = range_from_echo(echo_time(d, &spec), &spec);
            prop_assert!((back - d).abs() <= 1e-9);
        }

        #[test]
        fn duty_cycle_bounded_and_scale_invariant(
            r1 in 1e-3f64..1e6,
            r2 in 1e-3f64..1e6,
            r3 in 1e-3f64..1e6,
            k in 1e-3f64..1e3,
        ) {
            let cfg = TimerConfig::new(r1, r2, r3, 1e-6).unwrap();
            let duty = cfg.duty_cycle();
            prop_assert!(duty > 0.5 && duty < 1.0);
            let scaled = TimerConfig::new(k * r1, k * r2, k * r3, 1e-6).unwrap();
            prop_assert!((scaled.duty_cycle() - duty).abs() <= 1e-12 * duty);
        }

        #[test]
        fn astable_period_increases_in_each_component(
            r1 in 1.0f64..1e5,
            r2 in 1.0f64..1e5,
            r3 in 1.0f64..1e5,
            c1 in 1e-9f64..1e-3,
            bump in 1.0f64..1e4,
        ) {
            let base = TimerConfig::new(r1, r2, r3, c1).unwrap();
            let t = base.astable_period();
            prop_assert!(TimerConfig::new(r1 + bump, r2, r3, c1).unwrap().astable_period() > t);
            prop_assert!(TimerConfig::new(r1, r2 + bump, r3, c1).unwrap().astable_period() > t);
            prop_assert!(TimerConfig::new(r1, r2, r3 + bump, c1).unwrap().astable_period() > t);
            prop_assert!(TimerConfig::new(r1, r2, r3, c1 * 2.0).unwrap().astable_period() > t);
        }

        #[test]
        fn measured_model_stays_within_anchor_hull(d in 0.0f64..40.0) {
            let table = CalibrationTable::embedded_default();
            let v = measured_mv(d, &table).unwrap();
            prop_assert!((0.0..=396.0).contains(&v));
        }
    }
}
