//! A 1-D corridor world (walker, obstacles, water patches) and the two
//! sensor front-ends that sample it: ultrasonic ranging ahead of the walker
//! and water-depth probing at the walker's feet.
//!
//! The world is one-dimensional on purpose: the device's bench tests are
//! straight-line distance tests, so beam geometry collapses to "straight
//! ahead".

use thiserror::Error;

use crate::signal_chain::{analog_from_range, measured_mv, CalibrationTable, SensorSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error("obstacle at {pos_in} in lies outside the corridor [0, {corridor_len_in}] in")]
    ObstacleOutsideCorridor { pos_in: f64, corridor_len_in: f64 },
    #[error("obstacle appear tick {appear_tick} is after vanish tick {vanish_tick}")]
    InvalidObstacleWindow { appear_tick: u64, vanish_tick: u64 },
    #[error("water patch [{from_in}, {to_in}] is not a forward span inside [0, {corridor_len_in}] in")]
    InvalidWaterSpan {
        from_in: f64,
        to_in: f64,
        corridor_len_in: f64,
    },
    #[error("water depth must be non-negative, got {0} cm")]
    NegativeDepth(f64),
    #[error("corridor length must be non-negative, got {0} in")]
    NegativeCorridor(f64),
}

/// A static obstruction in the corridor, present for a window of ticks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    pub pos_in: f64,
    pub appear_tick: u64,
    /// Tick at which the obstacle is gone; `None` means it never vanishes.
    pub vanish_tick: Option<u64>,
}

impl Obstacle {
    pub fn at(pos_in: f64) -> Self {
        Self {
            pos_in,
            appear_tick: 0,
            vanish_tick: None,
        }
    }

    /// Present during `[appear_tick, vanish_tick)`.
    pub fn active_at(&self, tick: u64) -> bool {
        tick >= self.appear_tick && self.vanish_tick.map_or(true, |v| tick < v)
    }
}

/// A stretch of standing water on the corridor floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaterPatch {
    pub from_in: f64,
    pub to_in: f64,
    pub depth_cm: f64,
}

impl WaterPatch {
    pub fn covers(&self, pos_in: f64) -> bool {
        pos_in >= self.from_in && pos_in <= self.to_in
    }
}

/// Everything the sensors can observe: obstacles ahead and water underfoot.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    obstacles: Vec<Obstacle>,
    water: Vec<WaterPatch>,
    corridor_len_in: f64,
}

impl World {
    pub fn new(
        obstacles: Vec<Obstacle>,
        water: Vec<WaterPatch>,
        corridor_len_in: f64,
    ) -> Result<Self, WorldError> {
        if corridor_len_in < 0.0 || corridor_len_in.is_nan() {
            return Err(WorldError::NegativeCorridor(corridor_len_in));
        }
        for o in &obstacles {
            if o.pos_in < 0.0 || o.pos_in.is_nan() || o.pos_in > corridor_len_in {
                return Err(WorldError::ObstacleOutsideCorridor {
                    pos_in: o.pos_in,
                    corridor_len_in,
                });
            }
            if let Some(v) = o.vanish_tick {
                if o.appear_tick > v {
                    return Err(WorldError::InvalidObstacleWindow {
                        appear_tick: o.appear_tick,
                        vanish_tick: v,
                    });
                }
            }
        }
        for w in &water {
            if w.from_in < 0.0 || w.from_in.is_nan() || w.from_in >= w.to_in || w.to_in > corridor_len_in {
                return Err(WorldError::InvalidWaterSpan {
                    from_in: w.from_in,
                    to_in: w.to_in,
                    corridor_len_in,
                });
            }
            if w.depth_cm < 0.0 || w.depth_cm.is_nan() {
                return Err(WorldError::NegativeDepth(w.depth_cm));
            }
        }
        Ok(Self {
            obstacles,
            water,
            corridor_len_in,
        })
    }

    pub fn empty(corridor_len_in: f64) -> Self {
        Self::new(Vec::new(), Vec::new(), corridor_len_in).expect("empty world is valid")
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn water(&self) -> &[WaterPatch] {
        &self.water
    }

    pub fn corridor_len_in(&self) -> f64 {
        self.corridor_len_in
    }
}

/// The cane user walking the corridor at a fixed pace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkerState {
    pub pos_in: f64,
    pub speed_in_per_tick: f64,
}

/// Which voltage model the ultrasonic front-end reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SensingMode {
    /// Exact nominal transfer (mv_per_inch).
    Ideal,
    /// Interpolated bench measurements, carrying the sensor's real error.
    #[default]
    Realistic,
}

/// Distance to the nearest active obstacle strictly ahead of the walker, or
/// `None` when nothing is in range.
pub fn nearest_obstacle_distance(
    world: &World,
    walker: &WalkerState,
    tick: u64,
    max_range_in: f64,
) -> Option<f64> {
    world
        .obstacles()
        .iter()
        .filter(|o| o.active_at(tick) && o.pos_in > walker.pos_in)
        .map(|o| o.pos_in - walker.pos_in)
        .filter(|d| *d <= max_range_in)
        .min_by(|a, b| a.partial_cmp(b).expect("distances are finite"))
}

/// Sample the ultrasonic front-end: the detected distance (if any) and the
/// analog voltage it produces. No echo reads as 0 mV.
///
/// In realistic mode, distances beyond the last calibration anchor saturate
/// at that anchor's measured voltage.
pub fn sense_ultrasonic(
    world: &World,
    walker: &WalkerState,
    tick: u64,
    spec: &SensorSpec,
    table: &CalibrationTable,
    mode: SensingMode,
) -> (Option<f64>, f64) {
    let distance = nearest_obstacle_distance(world, walker, tick, spec.max_range_in);
    let voltage = match distance {
        None => 0.0,
        Some(d) => match mode {
            SensingMode::Ideal => {
                analog_from_range(d, spec).expect("distance is non-negative")
            }
            SensingMode::Realistic => {
                let query = d.min(table.max_range_in());
                measured_mv(query, table).expect("query clamped into table")
            }
        },
    };
    (distance, voltage)
}

/// Water depth under the walker: deepest patch covering the position, 0 if dry.
pub fn water_depth_at(world: &World, walker: &WalkerState) -> f64 {
    world
        .water()
        .iter()
        .filter(|w| w.covers(walker.pos_in))
        .map(|w| w.depth_cm)
        .fold(0.0, f64::max)
}

/// Move the walker forward by `ticks` steps, clamped to the corridor.
pub fn advance_walker(walker: &WalkerState, ticks: u64, corridor_len_in: f64) -> WalkerState {
    let pos = walker.pos_in + walker.speed_in_per_tick * ticks as f64;
    WalkerState {
        pos_in: pos.clamp(0.0, corridor_len_in),
        speed_in_per_tick: walker.speed_in_per_tick,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn walker_at(pos: f64) -> WalkerState {
        WalkerState {
            pos_in: pos,
            speed_in_per_tick: 0.0,
        }
    }

    #[test]
    fn nearest_picks_minimum_ahead() {
        let world = World::new(
            vec![Obstacle::at(120.0), Obstacle::at(200.0)],
            vec![],
            400.0,
        )
        .unwrap();
        let d = nearest_obstacle_distance(&world, &walker_at(0.0), 0, 400.0);
        assert_eq!(d, Some(120.0));
    }

    #[test]
    fn nearest_ignores_obstacles_behind() {
        let world = World::new(vec![Obstacle::at(10.0)], vec![], 100.0).unwrap();
        assert_eq!(
            nearest_obstacle_distance(&world, &walker_at(50.0), 0, 400.0),
            None
        );
        // An obstacle exactly at the walker is not "ahead".
        assert_eq!(
            nearest_obstacle_distance(&world, &walker_at(10.0), 0, 400.0),
            None
        );
    }

    #[test]
    fn nearest_drops_echoes_beyond_max_range() {
        let world = World::new(vec![Obstacle::at(500.0)], vec![], 600.0).unwrap();
        assert_eq!(
            nearest_obstacle_distance(&world, &walker_at(0.0), 0, 48.0),
            None
        );
        // Exactly at max range still echoes.
        let near = World::new(vec![Obstacle::at(48.0)], vec![], 100.0).unwrap();
        assert_eq!(
            nearest_obstacle_distance(&near, &walker_at(0.0), 0, 48.0),
            Some(48.0)
        );
    }

    #[test]
    fn nearest_honors_appear_vanish_window() {
        let obstacle = Obstacle {
            pos_in: 30.0,
            appear_tick: 5,
            vanish_tick: Some(10),
        };
        let world = World::new(vec![obstacle], vec![], 100.0).unwrap();
        let w = walker_at(0.0);
        assert_eq!(nearest_obstacle_distance(&world, &w, 4, 48.0), None);
        assert_eq!(nearest_obstacle_distance(&world, &w, 5, 48.0), Some(30.0));
        assert_eq!(nearest_obstacle_distance(&world, &w, 9, 48.0), Some(30.0));
        assert_eq!(nearest_obstacle_distance(&world, &w, 10, 48.0), None);
    }

    #[test]
    fn ultrasonic_reports_bench_voltage() {
        let table = CalibrationTable::embedded_default();
        let spec = SensorSpec::default();
        let world = World::new(vec![Obstacle::at(20.0)], vec![], 100.0).unwrap();
        let (d, v) = sense_ultrasonic(
            &world,
            &walker_at(0.0),
            0,
            &spec,
            &table,
            SensingMode::Realistic,
        );
        assert_eq!(d, Some(20.0));
        assert_eq!(v, 193.0);
    }

    #[test]
    fn ultrasonic_reports_zero_when_silent() {
        let table = CalibrationTable::embedded_default();
        let spec = SensorSpec::default();
        let world = World::empty(100.0);
        let (d, v) = sense_ultrasonic(
            &world,
            &walker_at(0.0),
            0,
            &spec,
            &table,
            SensingMode::Realistic,
        );
        assert_eq!(d, None);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn ultrasonic_ideal_mode_uses_nominal_transfer() {
        let table = CalibrationTable::embedded_default();
        let spec = SensorSpec::default();
        let world = World::new(vec![Obstacle::at(5.0)], vec![], 100.0).unwrap();
        let (d, v) = sense_ultrasonic(
            &world,
            &walker_at(0.0),
            0,
            &spec,
            &table,
            SensingMode::Ideal,
        );
        assert_eq!(d, Some(5.0));
        assert_eq!(v, 50.0);
    }

    #[test]
    fn ultrasonic_realistic_saturates_beyond_table() {
        let table = CalibrationTable::embedded_default();
        let spec = SensorSpec {
            max_range_in: 48.0,
            ..SensorSpec::default()
        };
        let world = World::new(vec![Obstacle::at(45.0)], vec![], 100.0).unwrap();
        let (d, v) = sense_ultrasonic(
            &world,
            &walker_at(0.0),
            0,
            &spec,
            &table,
            SensingMode::Realistic,
        );
        assert_eq!(d, Some(45.0));
        assert_eq!(v, 396.0);
    }

    #[test]
    fn water_depth_reads_patch_and_maximum_overlap() {
        let world = World::new(
            vec![],
            vec![
                WaterPatch {
                    from_in: 50.0,
                    to_in: 60.0,
                    depth_cm: 0.8,
                },
                WaterPatch {
                    from_in: 52.0,
                    to_in: 58.0,
                    depth_cm: 0.3,
                },
            ],
            100.0,
        )
        .unwrap();
        assert_eq!(water_depth_at(&world, &walker_at(55.0)), 0.8);
        assert_eq!(water_depth_at(&world, &walker_at(10.0)), 0.0);

        let overlapping = World::new(
            vec![],
            vec![
                WaterPatch {
                    from_in: 50.0,
                    to_in: 60.0,
                    depth_cm: 0.3,
                },
                WaterPatch {
                    from_in: 50.0,
                    to_in: 60.0,
                    depth_cm: 0.9,
                },
            ],
            100.0,
        )
        .unwrap();
        assert_eq!(water_depth_at(&overlapping, &walker_at(55.0)), 0.9);
    }

    #[test]
    fn walker_advances_and_clamps() {
        let w = WalkerState {
            pos_in: 0.0,
            speed_in_per_tick: 2.0,
        };
        assert_eq!(advance_walker(&w, 5, 100.0).pos_in, 10.0);

        let still = WalkerState {
            pos_in: 0.0,
            speed_in_per_tick: 0.0,
        };
        assert_eq!(advance_walker(&still, 100, 100.0).pos_in, 0.0);

        let fast = WalkerState {
            pos_in: 90.0,
            speed_in_per_tick: 5.0,
        };
        assert_eq!(advance_walker(&fast, 4, 100.0).pos_in, 100.0);

        let backwards = WalkerState {
            pos_in: 5.0,
            speed_in_per_tick: -2.0,
        };
        assert_eq!(advance_walker(&backwards, 10, 100.0).pos_in, 0.0);
    }

    #[test]
    fn world_rejects_out_of_corridor_features() {
        assert!(World::new(vec![Obstacle::at(200.0)], vec![], 100.0).is_err());
        let bad_window = Obstacle {
            pos_in: 10.0,
            appear_tick: 9,
            vanish_tick: Some(3),
        };
        assert!(World::new(vec![bad_window], vec![], 100.0).is_err());
        let bad_span = WaterPatch {
            from_in: 60.0,
            to_in: 50.0,
            depth_cm: 0.5,
        };
        assert!(World::new(vec![], vec![bad_span], 100.0).is_err());
        let bad_depth = WaterPatch {
            from_in: 10.0,
            to_in: 20.0,
            depth_cm: -0.1,
        };
        assert!(World::new(vec![], vec![bad_depth], 100.0).is_err());
    }

    proptest! {
        #[test]
        fn nearest_is_bounded(
            pos in 0.0f64..100.0,
            obstacle in 0.0f64..100.0,
            max_range in 1.0f64..100.0,
        ) {
            let world = World::new(vec![Obstacle::at(obstacle)], vec![], 100.0).unwrap();
            if let Some(d) = nearest_obstacle_distance(&world, &walker_at(pos), 0, max_range) {
                prop_assert!(d > 0.0);
                prop_assert!(d <= max_range);
            }
        }

        #[test]
        fn ideal_sense_recovers_distance(d in 0.01f64..48.0) {
            let table = CalibrationTable::embedded_default();
            let spec = SensorSpec { max_range_in: 48.0, ..SensorSpec::default() };
            let world = World::new(vec![Obstacle::at(d)], vec![], 50.0).unwrap();
            let (_, v) = sense_ultrasonic(&world, &walker_at(0.0), 0, &spec, &table, SensingMode::Ideal);
            let recovered = v / spec.mv_per_inch;
            prop_assert!((recovered - d).abs() <= 1e-12 * d.max(1.0));
        }

        #[test]
        fn water_depth_is_non_negative(pos in 0.0f64..100.0) {
            let world = World::new(
                vec![],
                vec![WaterPatch { from_in: 20.0, to_in: 40.0, depth_cm: 1.5 }],
                100.0,
            ).unwrap();
            let depth = water_depth_at(&world, &walker_at(pos));
            prop_assert!(depth >= 0.0);
            if !(20.0..=40.0).contains(&pos) {
                prop_assert_eq!(depth, 0.0);
            }
        }

        #[test]
        fn advance_is_monotone_in_ticks(speed in 0.0f64..5.0, t1 in 0u64..100, t2 in 0u64..100) {
            let w = WalkerState { pos_in: 0.0, speed_in_per_tick: speed };
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(advance_walker(&w, lo, 1e9).pos_in <= advance_walker(&w, hi, 1e9).pos_in);
        }
    }
}
