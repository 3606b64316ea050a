//! SI to km/day conversion.

pub const SECONDS_PER_DAY: f64 = 86_400.0;
pub const METERS_PER_KM: f64 = 1_000.0;

pub fn meters_to_km(m: f64) -> f64 {
    m / METERS_PER_KM
}

pub fn seconds_to_days(s: f64) -> f64 {
    s / SECONDS_PER_DAY
}

/// m/s to km/day.
pub fn speed_to_km_per_day(v: f64) -> f64 {
    v * SECONDS_PER_DAY / METERS_PER_KM
}

/// m/s² to km/day².
pub fn accel_to_km_per_day2(a: f64) -> f64 {
    a * SECONDS_PER_DAY * SECONDS_PER_DAY / METERS_PER_KM
}

/// 1/s to 1/day.
pub fn rate_to_per_day(f: f64) -> f64 {
    f * SECONDS_PER_DAY
}

/// Physical inputs as given in SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiInputs {
    /// m/s²
    pub g: f64,
    /// 1/s
    pub f: f64,
    /// m
    pub h0: f64,
    /// s
    pub dt: f64,
}

/// The same quantities in km and days.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InternalUnits {
    pub g: f64,
    pub f: f64,
    pub h0: f64,
    pub dt: f64,
}

pub fn convert_units(si: SiInputs) -> InternalUnits {
    InternalUnits {
        g: accel_to_km_per_day2(si.g),
        f: rate_to_per_day(si.f),
        h0: meters_to_km(si.h0),
        dt: seconds_to_days(si.dt),
    }
}
