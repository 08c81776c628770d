//! Closed-form scattering amplitudes of the giant Λ-type atom.
//!
//! A photon incident from the left either keeps its frequency (amplitudes
//! `t1`, `r1`, atom back in the ground state) or is down-converted
//! (amplitudes `t2`, `r2`, atom left in the metastable state). Every
//! amplitude shares the denominator
//!
//! ```text
//! D = (Δ + iγ) + 2iΓ₁(1 + e^{iφ₁}) + 2iΓ₂(1 + e^{iφ₂})
//! ```
//!
//! whose real and imaginary parts define the effective detuning and
//! linewidth returned by [`effective_params`]. Intrinsic dissipation γ
//! enters every formula through the substitution Δ → Δ + iγ and nowhere
//! else.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParams {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("scattering amplitudes are singular at this point (zero effective linewidth and zero effective detuning)")]
    SingularPoint,
}

/// The five knobs defining one scattering configuration.
///
/// `gamma1`/`gamma2` are the radiative decay rates per coupling point of the
/// two transitions, `phi1`/`phi2` the propagation phases accumulated between
/// the coupling points at the incident and converted wave vectors, and
/// `gamma_loss` the intrinsic dissipation of the excited state. All rates
/// share one unit; phases are radians and enter 2π-periodically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub gamma_loss: f64,
}

impl ModelParams {
    pub fn new(
        gamma1: f64,
        gamma2: f64,
        phi1: f64,
        phi2: f64,
        gamma_loss: f64,
    ) -> Result<Self, ModelError> {
        let params = Self {
            gamma1,
            gamma2,
            phi1,
            phi2,
            gamma_loss,
        };
        params.validate()?;
        Ok(params)
    }

    /// Build from the figure-axis parameterization: decay ratio η = Γ₂/Γ₁
    /// and phase difference Δφ = φ₁ − φ₂.
    pub fn from_dphi(
        gamma1: f64,
        eta: f64,
        phi1: f64,
        dphi: f64,
        gamma_loss: f64,
    ) -> Result<Self, ModelError> {
        if !eta.is_finite() || eta < 0.0 {
            return Err(ModelError::InvalidParams {
                name: "eta",
                value: eta,
                reason: "must be finite and >= 0",
            });
        }
        Self::new(gamma1, eta * gamma1, phi1, phi1 - dphi, gamma_loss)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let checks: [(&'static str, f64, bool, &'static str); 5] = [
            ("gamma1", self.gamma1, self.gamma1 > 0.0, "must be > 0"),
            ("gamma2", self.gamma2, self.gamma2 >= 0.0, "must be >= 0"),
            ("phi1", self.phi1, true, ""),
            ("phi2", self.phi2, true, ""),
            (
                "gamma_loss",
                self.gamma_loss,
                self.gamma_loss >= 0.0,
                "must be >= 0",
            ),
        ];
        for (name, value, ok, reason) in checks {
            if !value.is_finite() {
                return Err(ModelError::InvalidParams {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
            if !ok {
                return Err(ModelError::InvalidParams {
                    name,
                    value,
                    reason,
                });
            }
        }
        Ok(())
    }

    /// Phase difference Δφ = φ₁ − φ₂.
    pub fn dphi(&self) -> f64 {
        self.phi1 - self.phi2
    }

    /// Decay ratio η = Γ₂/Γ₁.
    pub fn eta(&self) -> f64 {
        self.gamma2 / self.gamma1
    }
}

/// Elastic and frequency-converting amplitudes with the derived probabilities.
///
/// `transmission` = |t₁|², `reflection` = |r₁|², `conversion` = |t₂|² + |r₂|²,
/// and `loss` = 1 − (sum); loss vanishes identically for γ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub t1: Complex64,
    pub r1: Complex64,
    pub t2: Complex64,
    pub r2: Complex64,
    pub transmission: f64,
    pub reflection: f64,
    pub conversion: f64,
    pub loss: f64,
}

impl ScatteringAmplitudes {
    fn from_amplitudes(t1: Complex64, r1: Complex64, t2: Complex64, r2: Complex64) -> Self {
        let transmission = t1.norm_sqr();
        let reflection = r1.norm_sqr();
        let conversion = t2.norm_sqr() + r2.norm_sqr();
        Self {
            t1,
            r1,
            t2,
            r2,
            transmission,
            reflection,
            conversion,
            loss: 1.0 - transmission - reflection - conversion,
        }
    }
}

/// Transmission and conversion for the Sagnac-coupled atom, where the photon
/// interacts only through the even mode and backscattering folds into `t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SagnacAmplitudes {
    pub t1: Complex64,
    pub t2: Complex64,
    pub transmission: f64,
    pub conversion: f64,
    pub loss: f64,
}

/// Effective detuning shift and decay rates induced by the two-point coupling.
///
/// The scattering spectra are Lorentzian in Δ_eff = Δ − `delta_shift` with
/// half-linewidth `gamma_eff`; `eta_eff` is `None` when the |g⟩↔|e⟩ channel
/// is fully suppressed (Γ₁,eff = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    pub delta_shift: f64,
    pub gamma1_eff: f64,
    pub gamma2_eff: f64,
    pub gamma_eff: f64,
    pub eta_eff: Option<f64>,
}

fn phase_factor(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

/// Common denominator D = Δ' + 2iΓ₁(1+e^{iφ₁}) + 2iΓ₂(1+e^{iφ₂}) with
/// Δ' = Δ + iγ.
fn denominator(params: &ModelParams, delta: f64) -> Complex64 {
    let dc = Complex64::new(delta, params.gamma_loss);
    let one = Complex64::new(1.0, 0.0);
    dc + Complex64::i()
        * (2.0 * params.gamma1 * (one + phase_factor(params.phi1))
            + 2.0 * params.gamma2 * (one + phase_factor(params.phi2)))
}

fn check_delta(delta: f64) -> Result<(), ModelError> {
    if !delta.is_finite() {
        return Err(ModelError::InvalidParams {
            name: "delta",
            value: delta,
            reason: "must be finite",
        });
    }
    Ok(())
}

/// Full giant-atom amplitudes at detuning `delta`.
///
/// Errors with [`ModelError::SingularPoint`] at the isolated point where the
/// denominator vanishes exactly (possible only for γ = 0 with both effective
/// decays zero and Δ on the shifted resonance).
pub fn giant_lambda_amplitudes(
    params: &ModelParams,
    delta: f64,
) -> Result<ScatteringAmplitudes, ModelError> {
    params.validate()?;
    check_delta(delta)?;
    let one = Complex64::new(1.0, 0.0);
    let e1 = phase_factor(params.phi1);
    let e2 = phase_factor(params.phi2);
    let d = denominator(params, delta);
    if d.norm() == 0.0 {
        return Err(ModelError::SingularPoint);
    }
    let dc = Complex64::new(delta, params.gamma_loss);
    let root = (params.gamma1 * params.gamma2).sqrt();
    let t1 = (dc - 2.0 * params.gamma1 * params.phi1.sin()
        + 2.0 * Complex64::i() * params.gamma2 * (one + e2))
        / d;
    let r1 = -Complex64::i() * params.gamma1 * (one + e1) * (one + e1) / d;
    let t2 = -Complex64::i() * root * (one + e1) * (one + phase_factor(-params.phi2)) / d;
    let r2 = -Complex64::i() * root * (one + e1) * (one + e2) / d;
    Ok(ScatteringAmplitudes::from_amplitudes(t1, r1, t2, r2))
}

/// Point-coupled (d = 0) limit: both coupling points merge, quadrupling the
/// decay rates.
pub fn small_atom_amplitudes(
    gamma1: f64,
    gamma2: f64,
    gamma_loss: f64,
    delta: f64,
) -> Result<ScatteringAmplitudes, ModelError> {
    ModelParams::new(gamma1, gamma2, 0.0, 0.0, gamma_loss)?;
    check_delta(delta)?;
    let dc = Complex64::new(delta, gamma_loss);
    let d = dc + Complex64::i() * (4.0 * gamma1 + 4.0 * gamma2);
    if d.norm() == 0.0 {
        return Err(ModelError::SingularPoint);
    }
    let t1 = (dc + Complex64::i() * 4.0 * gamma2) / d;
    let r1 = -Complex64::i() * 4.0 * gamma1 / d;
    let conv = -Complex64::i() * 4.0 * (gamma1 * gamma2).sqrt() / d;
    Ok(ScatteringAmplitudes::from_amplitudes(t1, r1, conv, conv))
}

/// Γ₂ = 0 limit: a giant two-level atom; the conversion channel is absent.
pub fn two_level_amplitudes(
    gamma1: f64,
    phi1: f64,
    gamma_loss: f64,
    delta: f64,
) -> Result<ScatteringAmplitudes, ModelError> {
    ModelParams::new(gamma1, 0.0, phi1, 0.0, gamma_loss)?;
    check_delta(delta)?;
    let one = Complex64::new(1.0, 0.0);
    let e1 = phase_factor(phi1);
    let dc = Complex64::new(delta, gamma_loss);
    let d = dc + 2.0 * Complex64::i() * gamma1 * (one + e1);
    if d.norm() == 0.0 {
        return Err(ModelError::SingularPoint);
    }
    let t1 = (dc - 2.0 * gamma1 * phi1.sin()) / d;
    let r1 = -Complex64::i() * gamma1 * (one + e1) * (one + e1) / d;
    let zero = Complex64::new(0.0, 0.0);
    Ok(ScatteringAmplitudes::from_amplitudes(t1, r1, zero, zero))
}

/// Sagnac-coupled amplitudes. Each coupling point is reached through a
/// 50:50 coupler, doubling the effective decay rates (Γ̃ⱼ = 2Γⱼ); only the
/// even waveguide mode couples.
pub fn sagnac_amplitudes(params: &ModelParams, delta: f64) -> Result<SagnacAmplitudes, ModelError> {
    params.validate()?;
    check_delta(delta)?;
    let one = Complex64::new(1.0, 0.0);
    let g1t = 2.0 * params.gamma1;
    let g2t = 2.0 * params.gamma2;
    let e1 = phase_factor(params.phi1);
    let e2 = phase_factor(params.phi2);
    let dc = Complex64::new(delta, params.gamma_loss);
    let d = dc + Complex64::i() * (g1t * (one + e1) + g2t * (one + e2));
    if d.norm() == 0.0 {
        return Err(ModelError::SingularPoint);
    }
    let t1 = (dc - Complex64::i() * g1t * (one + phase_factor(-params.phi1))
        + Complex64::i() * g2t * (one + e2))
        / d;
    let t2 = -4.0 * Complex64::i() * (g1t * g2t).sqrt()
        * (params.phi1 / 2.0).cos()
        * (params.phi2 / 2.0).cos()
        / d;
    let transmission = t1.norm_sqr();
    let conversion = t2.norm_sqr();
    Ok(SagnacAmplitudes {
        t1,
        t2,
        transmission,
        conversion,
        loss: 1.0 - transmission - conversion,
    })
}

/// Effective detuning shift and decay rates (real and imaginary parts of the
/// common denominator).
pub fn effective_params(params: &ModelParams) -> EffectiveParams {
    let delta_shift = 2.0 * (params.gamma1 * params.phi1.sin() + params.gamma2 * params.phi2.sin());
    let gamma1_eff = 2.0 * params.gamma1 * (1.0 + params.phi1.cos());
    let gamma2_eff = 2.0 * params.gamma2 * (1.0 + params.phi2.cos());
    EffectiveParams {
        delta_shift,
        gamma1_eff,
        gamma2_eff,
        gamma_eff: gamma1_eff + gamma2_eff,
        eta_eff: if gamma1_eff == 0.0 {
            None
        } else {
            Some(gamma2_eff / gamma1_eff)
        },
    }
}
