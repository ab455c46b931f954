//! Shared scenario fixtures for the benchmark targets.

/// A busy thousand-tick walk: an approach past the full class ladder plus a
/// water crossing, sized so per-tick costs dominate setup.
pub const LONG_WALK: &str = "\
TICK 100
WALKER start=0 speed=0.1
OBSTACLE pos=120
OBSTACLE pos=60 appear=200 vanish=700
WATER from=30 to=45 depth=0.8
WATER from=70 to=75 depth=0.4
END 999
";

/// The same walk under the transcribed firmware quirks.
pub const LONG_WALK_LITERAL: &str = "\
TICK 100
PROFILE fig2_raw
LITERAL on
WALKER start=0 speed=0.1
OBSTACLE pos=120
WATER from=30 to=45 depth=0.8
END 999
";
