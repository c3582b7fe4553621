//! The drone walk-through protocols and the `basic` example, used as
//! fixtures and as a tutorial corpus.

/// One state, one transition into `end`.
pub const BASIC: &str = include_str!("../fixtures/basic.protocol");
/// First drone protocol: `hasArrived` loops until arrival.
pub const DRONE_1: &str = include_str!("../fixtures/drone1.protocol");
/// Drone protocol that can change course or stop mid-flight.
pub const DRONE_2: &str = include_str!("../fixtures/drone2.protocol");
/// `DRONE_1` extended with `shutDown` into `end`.
pub const DRONE_SHUTDOWN: &str = include_str!("../fixtures/drone_shutdown.protocol");
/// `DRONE_2` extended with `shutDown` into `end`.
pub const DRONE_COURSE: &str = include_str!("../fixtures/drone_course.protocol");
pub const EMPTY: &str = include_str!("../fixtures/empty.protocol");

pub const ALL: [(&str, &str); 6] = [
    ("basic", BASIC),
    ("drone1", DRONE_1),
    ("drone2", DRONE_2),
    ("drone_shutdown", DRONE_SHUTDOWN),
    ("drone_course", DRONE_COURSE),
    ("empty", EMPTY),
];
