//! Unit conventions and physical constants.
//!
//! Internally every frequency, linewidth and rate is angular (rad/s).
//! Data files and user-facing interfaces quote ordinary frequencies in Hz;
//! the conversion happens exactly once, at the boundary.

use core::f64::consts::TAU;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Convert an ordinary frequency in Hz to an angular frequency in rad/s.
#[inline]
pub fn angular_from_hz(f_hz: f64) -> f64 {
    TAU * f_hz
}

/// Convert an angular frequency in rad/s to an ordinary frequency in Hz.
#[inline]
pub fn hz_from_angular(omega: f64) -> f64 {
    omega / TAU
}

/// Angular frequency of a laser with vacuum wavelength `lambda` (m).
#[inline]
pub fn laser_angular_frequency(lambda: f64) -> f64 {
    TAU * SPEED_OF_LIGHT / lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hz_round_trip_is_exact() {
        let f = 2.4e6;
        assert_eq!(hz_from_angular(angular_from_hz(f)), f);
    }

    #[test]
    fn telecom_laser_frequency() {
        // 1550 nm sits near 193.4 THz
        let omega = laser_angular_frequency(1550e-9);
        let f = hz_from_angular(omega);
        assert!((f - 1.934e14).abs() < 1e11);
    }
}
