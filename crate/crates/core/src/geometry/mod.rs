//! Exact angles, directions and lines determined by planar point sets.

pub mod angle;
pub mod direction;
pub mod interval;
pub mod lines;
pub mod point;

pub use angle::{
    angle_key, apex_angle_count, distinct_angle_count, signed_apex_values, AngleKey, ApexMode,
};
pub use direction::{beck_apex, direction_set, Direction};
pub use interval::{angle_enclosures, count_components, IntervalPoint};
pub use lines::{k_connected_stats, rich_line_profile, Line, RichLineProfile};
pub use point::{Point, PointSet};
