//! Decibel and power unit conversions used throughout the simulator.
//!
//! Link-budget arithmetic happens in dB, SINR sums in linear watts; these
//! helpers are the only place the two worlds meet.

/// Converts a power ratio from dB to linear scale.
#[inline]
pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB. Zero maps to negative infinity.
#[inline]
pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// Converts a transmit power from dBm to watts.
#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts a transmit power from watts to dBm. Zero maps to negative infinity.
#[inline]
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}
