//! Unit conversions for the CLI and output tables. Frequencies labelled
//! "MHz" are angular frequencies in units of 10⁶ rad/s.

/// rad/s per "MHz".
pub const MHZ: f64 = 1.0e6;
/// s per μs.
pub const MICROSECOND: f64 = 1.0e-6;
/// s per ms.
pub const MILLISECOND: f64 = 1.0e-3;
/// K per μK.
pub const MICROKELVIN: f64 = 1.0e-6;
