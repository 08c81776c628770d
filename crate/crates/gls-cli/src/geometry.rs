//! Physical-geometry helper: accumulated phases from device parameters.
//!
//! The propagation phases are evaluated at the respective resonances
//! (narrow-band regime): φ₁ = (ω_e/v_g)·d and Δφ = (ω_f/v_g)·d. The helper
//! also flags configurations drifting out of the Markov window, where the
//! round-trip delay stops being negligible against the atomic lifetime.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("geometry input {name} must be {requirement}, got {value}")]
    InvalidInput {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
}

/// Device-level inputs in SI units.
///
/// `gamma_total` is Γ₁ + Γ₂ in 1/s and feeds only the Markov-validity
/// warning; zero disables that check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    pub d: f64,
    pub v_g: f64,
    pub omega_e: f64,
    pub omega_f: f64,
    pub gamma_total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryPhases {
    pub phi1: f64,
    pub dphi: f64,
    pub markov_warning: bool,
}

const MARKOV_WARNING_THRESHOLD: f64 = 0.01;

pub fn phases_from_geometry(geom: &GeometryParams) -> Result<GeometryPhases, GeometryError> {
    for (name, value, strictly_positive) in [
        ("d", geom.d, true),
        ("v_g", geom.v_g, true),
        ("omega_e", geom.omega_e, true),
        ("omega_f", geom.omega_f, false),
        ("gamma_total", geom.gamma_total, false),
    ] {
        let ok = value.is_finite() && if strictly_positive { value > 0.0 } else { value >= 0.0 };
        if !ok {
            return Err(GeometryError::InvalidInput {
                name,
                requirement: if strictly_positive {
                    "finite and > 0"
                } else {
                    "finite and >= 0"
                },
                value,
            });
        }
    }
    let delay = geom.d / geom.v_g;
    Ok(GeometryPhases {
        phi1: geom.omega_e * delay,
        dphi: geom.omega_f * delay,
        markov_warning: delay * geom.gamma_total > MARKOV_WARNING_THRESHOLD,
    })
}

/// GaAs quantum-dot numbers: ω_e/2π = 3.7e14 Hz, ω_f/2π = 6 GHz, with d
/// chosen so that Δφ = π at v_g = 2e8 m/s, and a 10⁷/s total decay rate.
pub fn gaas_preset() -> GeometryParams {
    let omega_f = 2.0 * std::f64::consts::PI * 6.0e9;
    let v_g = 2.0e8;
    GeometryParams {
        d: std::f64::consts::PI * v_g / omega_f,
        v_g,
        omega_e: 2.0 * std::f64::consts::PI * 3.7e14,
        omega_f,
        gamma_total: 1.0e7,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaas_preset_lands_on_dphi_pi() {
        let phases = phases_from_geometry(&gaas_preset()).unwrap();
        assert!((phases.dphi - PI).abs() <= 1e-12);
        // phi1 = (omega_e / omega_f) * pi ~ 1.9e5 rad
        let expected = 3.7e14 / 6.0e9 * PI;
        assert!((phases.phi1 - expected).abs() <= 1e-6 * expected);
        assert!(phases.phi1 > 1.0e5 && phases.phi1 < 1.0e6);
        assert!(!phases.markov_warning);
    }

    #[test]
    fn zero_omega_f_gives_zero_dphi() {
        let mut geom = gaas_preset();
        geom.omega_f = 0.0;
        assert_eq!(phases_from_geometry(&geom).unwrap().dphi, 0.0);
    }

    #[test]
    fn doubling_d_doubles_both_phases() {
        let geom = gaas_preset();
        let base = phases_from_geometry(&geom).unwrap();
        let mut doubled = geom;
        doubled.d *= 2.0;
        let twice = phases_from_geometry(&doubled).unwrap();
        assert_eq!(twice.phi1, 2.0 * base.phi1);
        assert_eq!(twice.dphi, 2.0 * base.dphi);
    }

    #[test]
    fn markov_warning_trips_on_slow_decay_budget() {
        let mut geom = gaas_preset();
        geom.gamma_total = 1.0e9;
        assert!(phases_from_geometry(&geom).unwrap().markov_warning);
    }

    #[test]
    fn non_positive_inputs_are_rejected() {
        let mut geom = gaas_preset();
        geom.d = 0.0;
        assert!(phases_from_geometry(&geom).is_err());
        let mut geom = gaas_preset();
        geom.v_g = -1.0;
        assert!(phases_from_geometry(&geom).is_err());
        let mut geom = gaas_preset();
        geom.omega_e = f64::NAN;
        assert!(phases_from_geometry(&geom).is_err());
    }
}
