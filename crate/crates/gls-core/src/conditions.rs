//! Analytic condition detection and extremum-trajectory extraction.
//!
//! The scattering phenomena live on measure-zero phase manifolds (odd
//! multiples of π), so detection is tolerance-based: an input phase counts
//! as "on manifold" when it sits within `tol` radians of it. Conditions:
//!
//! * FIPT — φ₁ = (2m+1)π: the incident channel decouples, T₁ ≡ 1.
//! * Total reflection — φ₂ = (2m+1)π: the converted channel decouples and
//!   the photon reflects completely at Δ* = 2Γ₁ sin φ₁.
//! * Optimal conversion — η* = (1+cos φ₁)/(1+cos φ₂) balances the effective
//!   decay rates, with the peak at the shifted resonance
//!   Δ* = 2Γ₁(sin φ₁ + η* sin φ₂); impossible when the converted channel is
//!   suppressed (1 + cos φ₂ ≈ 0).
//!
//! Trajectory extraction locates the per-column extremum of a sweep on the
//! Δ grid and refines it by golden-section search, reproducing the dotted
//! extremum curves of the scan figures.

use std::f64::consts::PI;
use thiserror::Error;

use crate::model::{giant_lambda_amplitudes, sagnac_amplitudes};
use crate::sweep::{SweepError, SweepSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConditionError {
    #[error("tolerance {0} outside (0, 0.1] radians")]
    InvalidTolerance(f64),
    #[error("invalid input {name}: {value}")]
    InvalidInput { name: &'static str, value: f64 },
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

/// φ₁ sits within tolerance of (2m+1)π.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiptCondition {
    pub m: i64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalReflectionCondition {
    pub delta_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConversionCondition {
    At { eta_star: f64, delta_star: f64 },
    /// The |f⟩↔|e⟩ transition is interference-suppressed; no decay ratio
    /// reaches the conversion bound.
    Impossible,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub fipt: Option<FiptCondition>,
    pub total_reflection: Option<TotalReflectionCondition>,
    /// `None` while FIPT is active: with the incident channel decoupled the
    /// conversion-optimum condition degenerates (η* → 0).
    pub optimal_conversion: Option<ConversionCondition>,
    pub tolerance_used: f64,
}

/// Distance from `phi` to the nearest odd multiple of π, plus the multiple.
fn distance_to_odd_pi(phi: f64) -> (f64, i64) {
    let m = ((phi / PI - 1.0) / 2.0).round();
    let dist = (phi - (2.0 * m + 1.0) * PI).abs();
    (dist, m as i64)
}

/// Classify the configuration (φ₁, Δφ, Γ₁, η) against the analytic
/// condition table with phase tolerance `tol`.
pub fn analyze(
    phi1: f64,
    dphi: f64,
    gamma1: f64,
    eta: f64,
    tol: f64,
) -> Result<ConditionReport, ConditionError> {
    if !(tol.is_finite() && tol > 0.0 && tol <= 0.1) {
        return Err(ConditionError::InvalidTolerance(tol));
    }
    for (name, value, ok) in [
        ("phi1", phi1, phi1.is_finite()),
        ("dphi", dphi, dphi.is_finite()),
        ("gamma1", gamma1, gamma1.is_finite() && gamma1 > 0.0),
        ("eta", eta, eta.is_finite() && eta >= 0.0),
    ] {
        if !ok {
            return Err(ConditionError::InvalidInput { name, value });
        }
    }

    let phi2 = phi1 - dphi;
    let (dist1, m1) = distance_to_odd_pi(phi1);
    let fipt = (dist1 <= tol).then_some(FiptCondition { m: m1 });

    let (dist2, _) = distance_to_odd_pi(phi2);
    let total_reflection = (dist2 <= tol && fipt.is_none()).then(|| TotalReflectionCondition {
        delta_star: 2.0 * gamma1 * phi1.sin(),
    });

    let optimal_conversion = if fipt.is_some() {
        None
    } else if 1.0 + phi2.cos() > tol * tol {
        let eta_star = (1.0 + phi1.cos()) / (1.0 + phi2.cos());
        Some(ConversionCondition::At {
            eta_star,
            delta_star: 2.0 * gamma1 * (phi1.sin() + eta_star * phi2.sin()),
        })
    } else {
        Some(ConversionCondition::Impossible)
    };

    Ok(ConditionReport {
        fipt,
        total_reflection,
        optimal_conversion,
        tolerance_used: tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrajectoryTarget {
    MinTransmission,
    MaxReflection,
    MaxConversion,
    MaxSagnacConversion,
}

impl TrajectoryTarget {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrajectoryTarget::MinTransmission => "min_T1",
            TrajectoryTarget::MaxReflection => "max_R1",
            TrajectoryTarget::MaxConversion => "max_Tc",
            TrajectoryTarget::MaxSagnacConversion => "max_Tc_sagnac",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub scan_value: f64,
    pub delta: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryEntry {
    Point(TrajectoryPoint),
    /// The quantity does not vary over the column (range < 1e-13), e.g. a
    /// FIPT column.
    Flat { scan_value: f64 },
}

const FLAT_RANGE: f64 = 1e-13;
const REFINE_XTOL: f64 = 1e-9;

/// Golden-section minimizer on [a, b]; NaN evaluations count as +inf.
fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    const INVPHI2: f64 = 0.381_966_011_250_105_1;
    let eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut h = b - a;
    if h <= xtol {
        return 0.5 * (a + b);
    }
    let mut c = a + INVPHI2 * h;
    let mut d = a + INVPHI * h;
    let mut fc = eval(c);
    let mut fd = eval(d);
    while h > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + INVPHI2 * h;
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + INVPHI * h;
            fd = eval(d);
        }
    }
    if fc < fd {
        0.5 * (a + d)
    } else {
        0.5 * (c + b)
    }
}

/// Per-column extremum of the target quantity over Δ: grid argextremum on
/// the spec's Δ axis followed by golden-section refinement between the
/// bracketing grid neighbors. Ties break toward the smallest Δ.
pub fn extremum_trajectory(
    spec: &SweepSpec,
    target: TrajectoryTarget,
) -> Result<Vec<TrajectoryEntry>, ConditionError> {
    spec.validate()?;
    if spec.delta_axis.count < 3 {
        return Err(ConditionError::Sweep(SweepError::InvalidSpec(
            "trajectory extraction needs at least 3 delta points per column".into(),
        )));
    }
    let deltas = spec.delta_axis.values();
    let scans = spec.scan_axis.values();
    let minimize = matches!(target, TrajectoryTarget::MinTransmission);

    let mut entries = Vec::with_capacity(scans.len());
    for &scan in &scans {
        let params = match spec.params_at(scan) {
            Ok(p) => p,
            Err(_) => {
                entries.push(TrajectoryEntry::Flat { scan_value: scan });
                continue;
            }
        };
        let quantity = |delta: f64| -> f64 {
            match target {
                TrajectoryTarget::MinTransmission => giant_lambda_amplitudes(&params, delta)
                    .map(|a| a.transmission)
                    .unwrap_or(f64::NAN),
                TrajectoryTarget::MaxReflection => giant_lambda_amplitudes(&params, delta)
                    .map(|a| a.reflection)
                    .unwrap_or(f64::NAN),
                TrajectoryTarget::MaxConversion => giant_lambda_amplitudes(&params, delta)
                    .map(|a| a.conversion)
                    .unwrap_or(f64::NAN),
                TrajectoryTarget::MaxSagnacConversion => sagnac_amplitudes(&params, delta)
                    .map(|a| a.conversion)
                    .unwrap_or(f64::NAN),
            }
        };

        let column: Vec<f64> = deltas.iter().map(|&d| quantity(d)).collect();
        let mut best: Option<(usize, f64)> = None;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, &v) in column.iter().enumerate() {
            if v.is_nan() {
                continue;
            }
            lo = lo.min(v);
            hi = hi.max(v);
            let better = match best {
                None => true,
                Some((_, bv)) => {
                    if minimize {
                        v < bv
                    } else {
                        v > bv
                    }
                }
            };
            if better {
                best = Some((i, v));
            }
        }
        let Some((arg, _)) = best else {
            entries.push(TrajectoryEntry::Flat { scan_value: scan });
            continue;
        };
        if hi - lo < FLAT_RANGE {
            entries.push(TrajectoryEntry::Flat { scan_value: scan });
            continue;
        }
        let a = deltas[arg.saturating_sub(1)];
        let b = deltas[(arg + 1).min(deltas.len() - 1)];
        let objective = |d: f64| {
            if minimize {
                quantity(d)
            } else {
                -quantity(d)
            }
        };
        let refined = golden_min(objective, a, b, REFINE_XTOL);
        entries.push(TrajectoryEntry::Point(TrajectoryPoint {
            scan_value: scan,
            delta: refined,
            value: quantity(refined),
        }));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{effective_params, ModelParams};
    use crate::sweep::{AxisSpec, SweepMode};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    #[test]
    fn total_reflection_at_zero_phase() {
        let report = analyze(0.0, PI, 1.0, 1.0, TOL).unwrap();
        assert!(report.fipt.is_none());
        let tr = report.total_reflection.unwrap();
        assert_eq!(tr.delta_star, 0.0);
        assert_eq!(report.optimal_conversion, Some(ConversionCondition::Impossible));
    }

    #[test]
    fn total_reflection_shifted_by_quarter_phase() {
        let report = analyze(PI / 2.0, 3.0 * PI / 2.0, 1.0, 1.0, TOL).unwrap();
        let tr = report.total_reflection.unwrap();
        assert!((tr.delta_star - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn general_conversion_condition() {
        let report = analyze(0.0, PI / 2.0, 1.0, 1.0, TOL).unwrap();
        match report.optimal_conversion.unwrap() {
            ConversionCondition::At {
                eta_star,
                delta_star,
            } => {
                assert!((eta_star - 2.0).abs() <= 1e-12);
                assert!((delta_star + 4.0).abs() <= 1e-12);
            }
            ConversionCondition::Impossible => panic!("conversion should be possible"),
        }
    }

    #[test]
    fn fipt_for_any_dphi() {
        for dphi in [0.0, 0.3, PI, 5.5] {
            let report = analyze(PI, dphi, 1.0, 2.0, TOL).unwrap();
            let fipt = report.fipt.unwrap();
            assert_eq!(fipt.m, 0);
            assert!(report.total_reflection.is_none());
            assert!(report.optimal_conversion.is_none());
        }
        let report = analyze(-3.0 * PI, 0.1, 1.0, 1.0, TOL).unwrap();
        assert_eq!(report.fipt.unwrap().m, -2);
    }

    #[test]
    fn analyze_is_2pi_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..500 {
            let phi1 = rng.gen_range(-4.0 * PI..4.0 * PI);
            let dphi = rng.gen_range(-4.0 * PI..4.0 * PI);
            let a = analyze(phi1, dphi, 1.0, 1.0, 1e-6).unwrap();
            let b = analyze(phi1 + 2.0 * PI, dphi, 1.0, 1.0, 1e-6).unwrap();
            assert_eq!(a.fipt.is_some(), b.fipt.is_some());
            assert_eq!(a.total_reflection.is_some(), b.total_reflection.is_some());
        }
    }

    #[test]
    fn report_invariants_hold_for_random_configs() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for draw in 0..1000 {
            // half the draws land near the special manifolds
            let (phi1, dphi) = if draw % 2 == 0 {
                (
                    rng.gen_range(-4.0 * PI..4.0 * PI),
                    rng.gen_range(-4.0 * PI..4.0 * PI),
                )
            } else {
                let nudge = rng.gen_range(-1e-10..1e-10);
                let base = (2.0 * rng.gen_range(-2i64..2) as f64 + 1.0) * PI;
                if rng.gen::<bool>() {
                    (base + nudge, rng.gen_range(-4.0 * PI..4.0 * PI))
                } else {
                    let phi1 = rng.gen_range(-4.0 * PI..4.0 * PI);
                    (phi1, phi1 - base + nudge)
                }
            };
            let gamma1 = 10.0 * (1.0 - rng.gen::<f64>());
            let report = analyze(phi1, dphi, gamma1, 1.0, TOL).unwrap();

            if report.fipt.is_some() {
                let p = ModelParams::from_dphi(gamma1, 1.0, phi1, dphi, 0.0).unwrap();
                for k in 0..100 {
                    let delta = -50.0 + k as f64;
                    let a = giant_lambda_amplitudes(&p, delta).unwrap();
                    assert!((a.transmission - 1.0).abs() <= 1e-12);
                }
            }
            if let Some(tr) = report.total_reflection {
                let p = ModelParams::from_dphi(gamma1, 1.0, phi1, dphi, 0.0).unwrap();
                let a = giant_lambda_amplitudes(&p, tr.delta_star).unwrap();
                assert!(a.reflection >= 1.0 - 1e-10, "R1 = {}", a.reflection);
            }
            if let Some(ConversionCondition::At {
                eta_star,
                delta_star,
            }) = report.optimal_conversion
            {
                let p = ModelParams::from_dphi(gamma1, eta_star, phi1, dphi, 0.0).unwrap();
                let a = giant_lambda_amplitudes(&p, delta_star).unwrap();
                assert!((a.conversion - 0.5).abs() <= 1e-10, "Tc = {}", a.conversion);
                let s = sagnac_amplitudes(&p, delta_star).unwrap();
                assert!((s.conversion - 1.0).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(analyze(0.0, 0.0, 1.0, 1.0, 0.0).is_err());
        assert!(analyze(0.0, 0.0, 1.0, 1.0, 0.2).is_err());
        assert!(analyze(0.0, 0.0, 0.0, 1.0, TOL).is_err());
        assert!(analyze(f64::NAN, 0.0, 1.0, 1.0, TOL).is_err());
        assert!(analyze(0.0, 0.0, 1.0, -1.0, TOL).is_err());
    }

    fn base_spec() -> SweepSpec {
        SweepSpec {
            mode: SweepMode::DeltaDphi { eta: 1.0 },
            phi1: 0.0,
            gamma1: 1.0,
            gamma_loss: 0.0,
            sagnac: false,
            delta_axis: AxisSpec::new(-8.0, 8.0, 321),
            scan_axis: AxisSpec::new(0.0, 4.0 * PI, 321),
        }
    }

    #[test]
    fn conversion_peak_found_at_two_pi_column() {
        let entries = extremum_trajectory(&base_spec(), TrajectoryTarget::MaxConversion).unwrap();
        match entries[160] {
            TrajectoryEntry::Point(p) => {
                assert_eq!(p.scan_value, 2.0 * PI);
                assert!(p.delta.abs() <= 1e-6, "delta = {}", p.delta);
                assert!((p.value - 0.5).abs() <= 1e-10);
            }
            TrajectoryEntry::Flat { .. } => panic!("column should peak"),
        }
    }

    #[test]
    fn reflection_peak_at_total_reflection_column() {
        let entries = extremum_trajectory(&base_spec(), TrajectoryTarget::MaxReflection).unwrap();
        match entries[80] {
            TrajectoryEntry::Point(p) => {
                assert_eq!(p.scan_value, PI);
                assert!(p.delta.abs() <= 1e-6);
                assert!((p.value - 1.0).abs() <= 1e-10);
            }
            TrajectoryEntry::Flat { .. } => panic!("column should peak"),
        }
    }

    #[test]
    fn fipt_columns_are_flat() {
        let mut spec = base_spec();
        spec.phi1 = PI;
        spec.scan_axis = AxisSpec::new(0.0, 4.0 * PI, 21);
        let entries = extremum_trajectory(&spec, TrajectoryTarget::MaxConversion).unwrap();
        for e in entries {
            assert!(matches!(e, TrajectoryEntry::Flat { .. }));
        }
    }

    #[test]
    fn refined_conversion_peak_tracks_delta_shift() {
        let mut spec = base_spec();
        spec.scan_axis = AxisSpec::new(0.1, 2.0, 9);
        let entries = extremum_trajectory(&spec, TrajectoryTarget::MaxConversion).unwrap();
        for (i, entry) in entries.iter().enumerate() {
            let scan = spec.scan_axis.value(i);
            let params = spec.params_at(scan).unwrap();
            let eff = effective_params(&params);
            if eff.gamma1_eff <= 1e-3 || eff.gamma2_eff <= 1e-3 {
                continue;
            }
            match entry {
                TrajectoryEntry::Point(p) => {
                    assert!(
                        (p.delta - eff.delta_shift).abs() <= 1e-6,
                        "peak {} vs shift {}",
                        p.delta,
                        eff.delta_shift
                    );
                }
                TrajectoryEntry::Flat { .. } => panic!("column {i} should not be flat"),
            }
        }
    }

    #[test]
    fn sagnac_trajectory_reports_unit_conversion() {
        let mut spec = base_spec();
        spec.sagnac = true;
        spec.scan_axis = AxisSpec::new(0.0, 4.0 * PI, 41);
        let entries =
            extremum_trajectory(&spec, TrajectoryTarget::MaxSagnacConversion).unwrap();
        match entries[0] {
            TrajectoryEntry::Point(p) => {
                assert!(p.delta.abs() <= 1e-6);
                assert!((p.value - 1.0).abs() <= 1e-10);
            }
            TrajectoryEntry::Flat { .. } => panic!("dphi = 0 column should peak at 1"),
        }
    }

    #[test]
    fn trajectory_needs_three_delta_points() {
        let mut spec = base_spec();
        spec.delta_axis = AxisSpec::new(-8.0, 8.0, 2);
        assert!(extremum_trajectory(&spec, TrajectoryTarget::MaxConversion).is_err());
    }
}
