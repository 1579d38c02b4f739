//! Pinned acceptance tolerances and run-time limits.

pub const NORMALIZATION_TOL: f64 = 1e-8;
pub const NORMALIZATION_SECONDS: f64 = 10.0;

pub const FISHER_TOL_NO_DIPOLE: f64 = 1e-8;
pub const FISHER_TOL_DIPOLE: f64 = 1e-6;
pub const FISHER_SECONDS: f64 = 10.0;

pub const MOMENT_TOL: f64 = 1e-6;
pub const MOMENT_SECONDS: f64 = 30.0;

pub const MATHIEU_TOL_SMALL_B: f64 = 1e-4;
pub const MATHIEU_SMALL_B: f64 = 1.0;
pub const MATHIEU_TOL_LARGE_B: f64 = 1e-2;
pub const MATHIEU_LARGE_B: f64 = 20.0;
pub const MATHIEU_SECONDS: f64 = 5.0;

pub const SPECTRUM_TOL: f64 = 1e-4;
pub const SPECTRUM_SECONDS: f64 = 30.0;

pub const TREND_POINTS: usize = 50;

pub const TABLE_REPRODUCTION: f64 = 0.10;

pub const RENYI_Q: f64 = 1.01;
pub const RENYI_TOL: f64 = 0.02;

pub const VALIDATE_SECONDS: f64 = 120.0;

/// Relative difference with NaN mapped to +inf.
pub fn rel(a: f64, b: f64) -> f64 {
    let d = ((a - b) / b).abs();
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}
