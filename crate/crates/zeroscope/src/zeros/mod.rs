//! Argument-principle zero counting and localization in disks.

mod localize;
mod winding;

pub use localize::{localize_zeros, LocalizeError, LocatedZero, ZeroReport};
pub use winding::{
    count_zeros_in_disk, refine_eval, winding_number, zero_count_growth, ContourOutcome, Disk,
    DiskCount, SeriesFunction, ZeroCountError,
};
