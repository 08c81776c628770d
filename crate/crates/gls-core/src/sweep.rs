//! Deterministic rectangular sweeps over (Δ, Δφ) and (Δ, η).
//!
//! Grid evaluation is embarrassingly parallel; every cell value is written
//! to its own slot, so results are byte-identical for any thread count.
//! Cells where the amplitudes are singular are stored as NaN and serialized
//! downstream as empty fields.

use rayon::prelude::*;
use thiserror::Error;

use crate::conditions::{TrajectoryEntry, TrajectoryTarget};
use crate::model::{giant_lambda_amplitudes, sagnac_amplitudes, ModelError, ModelParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("unknown figure preset: {0}")]
    UnknownPreset(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One linearly spaced axis. Endpoints are included; `count >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn validate(&self, name: &str) -> Result<(), SweepError> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(SweepError::InvalidSpec(format!("{name}: bounds must be finite")));
        }
        if self.min >= self.max {
            return Err(SweepError::InvalidSpec(format!(
                "{name}: min {} must be below max {}",
                self.min, self.max
            )));
        }
        if self.count < 2 {
            return Err(SweepError::InvalidSpec(format!(
                "{name}: need at least 2 points, got {}",
                self.count
            )));
        }
        Ok(())
    }

    pub fn value(&self, index: usize) -> f64 {
        self.min + (self.max - self.min) * index as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// Which quantity the scan axis varies; the other one is held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMode {
    /// Scan the phase difference Δφ at fixed decay ratio η.
    DeltaDphi { eta: f64 },
    /// Scan the decay ratio η at fixed phase difference Δφ.
    DeltaEta { dphi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub phi1: f64,
    pub gamma1: f64,
    pub gamma_loss: f64,
    pub sagnac: bool,
    pub delta_axis: AxisSpec,
    pub scan_axis: AxisSpec,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        self.delta_axis.validate("delta axis")?;
        self.scan_axis.validate("scan axis")?;
        if !(self.gamma1.is_finite() && self.gamma1 > 0.0) {
            return Err(SweepError::InvalidSpec(format!(
                "gamma1 must be finite and > 0, got {}",
                self.gamma1
            )));
        }
        if !self.phi1.is_finite() {
            return Err(SweepError::InvalidSpec("phi1 must be finite".into()));
        }
        if !(self.gamma_loss.is_finite() && self.gamma_loss >= 0.0) {
            return Err(SweepError::InvalidSpec(format!(
                "gamma_loss must be finite and >= 0, got {}",
                self.gamma_loss
            )));
        }
        match self.mode {
            SweepMode::DeltaDphi { eta } => {
                if !(eta.is_finite() && eta >= 0.0) {
                    return Err(SweepError::InvalidSpec(format!(
                        "fixed eta must be finite and >= 0, got {eta}"
                    )));
                }
            }
            SweepMode::DeltaEta { dphi } => {
                if !dphi.is_finite() {
                    return Err(SweepError::InvalidSpec("fixed dphi must be finite".into()));
                }
                if self.scan_axis.min < 0.0 {
                    return Err(SweepError::InvalidSpec(
                        "eta scan axis must not go below 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Model parameters for one scan-axis value.
    pub fn params_at(&self, scan_value: f64) -> Result<ModelParams, ModelError> {
        let (eta, dphi) = match self.mode {
            SweepMode::DeltaDphi { eta } => (eta, scan_value),
            SweepMode::DeltaEta { dphi } => (scan_value, dphi),
        };
        ModelParams::from_dphi(self.gamma1, eta, self.phi1, dphi, self.gamma_loss)
    }
}

/// Row-major grids of probabilities, indexed `[delta_index * scan_count +
/// scan_index]`; NaN marks a singular (undefined) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub delta_values: Vec<f64>,
    pub scan_values: Vec<f64>,
    pub transmission: Vec<f64>,
    pub reflection: Vec<f64>,
    pub conversion: Vec<f64>,
    pub loss: Vec<f64>,
    pub sagnac_transmission: Option<Vec<f64>>,
    pub sagnac_conversion: Option<Vec<f64>>,
    pub trajectories: Option<Vec<(TrajectoryTarget, Vec<TrajectoryEntry>)>>,
}

impl SweepResult {
    pub fn index(&self, delta_index: usize, scan_index: usize) -> usize {
        delta_index * self.scan_values.len() + scan_index
    }
}

#[derive(Clone, Copy)]
struct Cell {
    transmission: f64,
    reflection: f64,
    conversion: f64,
    loss: f64,
    sagnac_transmission: f64,
    sagnac_conversion: f64,
}

const UNDEFINED_CELL: Cell = Cell {
    transmission: f64::NAN,
    reflection: f64::NAN,
    conversion: f64::NAN,
    loss: f64::NAN,
    sagnac_transmission: f64::NAN,
    sagnac_conversion: f64::NAN,
};

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    spec.validate()?;
    let delta_values = spec.delta_axis.values();
    let scan_values = spec.scan_axis.values();
    let sc = scan_values.len();

    let cells: Vec<Cell> = (0..delta_values.len() * sc)
        .into_par_iter()
        .map(|idx| {
            let delta = delta_values[idx / sc];
            let scan = scan_values[idx % sc];
            let params = match spec.params_at(scan) {
                Ok(p) => p,
                Err(_) => return UNDEFINED_CELL,
            };
            let base = match giant_lambda_amplitudes(&params, delta) {
                Ok(a) => a,
                Err(_) => return UNDEFINED_CELL,
            };
            let mut cell = Cell {
                transmission: base.transmission,
                reflection: base.reflection,
                conversion: base.conversion,
                loss: base.loss,
                sagnac_transmission: f64::NAN,
                sagnac_conversion: f64::NAN,
            };
            if spec.sagnac {
                match sagnac_amplitudes(&params, delta) {
                    Ok(s) => {
                        cell.sagnac_transmission = s.transmission;
                        cell.sagnac_conversion = s.conversion;
                    }
                    Err(_) => return UNDEFINED_CELL,
                }
            }
            cell
        })
        .collect();

    let grab = |f: fn(&Cell) -> f64| cells.iter().map(f).collect::<Vec<f64>>();
    Ok(SweepResult {
        spec: *spec,
        delta_values,
        scan_values,
        transmission: grab(|c| c.transmission),
        reflection: grab(|c| c.reflection),
        conversion: grab(|c| c.conversion),
        loss: grab(|c| c.loss),
        sagnac_transmission: spec.sagnac.then(|| grab(|c| c.sagnac_transmission)),
        sagnac_conversion: spec.sagnac.then(|| grab(|c| c.sagnac_conversion)),
        trajectories: None,
    })
}

/// Scan layouts of the paper's pseudo-color maps. Letters within one figure
/// share a layout and differ only in which probability is plotted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2A, Fig2B, Fig2C, Fig2D, Fig2E, Fig2F,
    Fig3A, Fig3B, Fig3C, Fig3D, Fig3E, Fig3F, Fig3G, Fig3H, Fig3I,
    Fig4A, Fig4B,
    Fig5A, Fig5B, Fig5C,
}

impl FigureId {
    pub const ALL: [FigureId; 20] = [
        FigureId::Fig2A, FigureId::Fig2B, FigureId::Fig2C, FigureId::Fig2D,
        FigureId::Fig2E, FigureId::Fig2F,
        FigureId::Fig3A, FigureId::Fig3B, FigureId::Fig3C, FigureId::Fig3D,
        FigureId::Fig3E, FigureId::Fig3F, FigureId::Fig3G, FigureId::Fig3H,
        FigureId::Fig3I,
        FigureId::Fig4A, FigureId::Fig4B,
        FigureId::Fig5A, FigureId::Fig5B, FigureId::Fig5C,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig2A => "fig2a", FigureId::Fig2B => "fig2b",
            FigureId::Fig2C => "fig2c", FigureId::Fig2D => "fig2d",
            FigureId::Fig2E => "fig2e", FigureId::Fig2F => "fig2f",
            FigureId::Fig3A => "fig3a", FigureId::Fig3B => "fig3b",
            FigureId::Fig3C => "fig3c", FigureId::Fig3D => "fig3d",
            FigureId::Fig3E => "fig3e", FigureId::Fig3F => "fig3f",
            FigureId::Fig3G => "fig3g", FigureId::Fig3H => "fig3h",
            FigureId::Fig3I => "fig3i",
            FigureId::Fig4A => "fig4a", FigureId::Fig4B => "fig4b",
            FigureId::Fig5A => "fig5a", FigureId::Fig5B => "fig5b",
            FigureId::Fig5C => "fig5c",
        }
    }
}

impl std::str::FromStr for FigureId {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .iter()
            .find(|id| id.as_str() == s.to_ascii_lowercase())
            .copied()
            .ok_or_else(|| SweepError::UnknownPreset(s.to_string()))
    }
}

impl std::fmt::Display for FigureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Default axes: Δ ∈ [−8, 8]·Γ₁, Δφ ∈ [0, 4π], η ∈ [0, 4], 321 points each
/// so that Δ = 0 and the symmetric midpoints land on grid nodes.
pub fn figure_preset(id: FigureId) -> SweepSpec {
    use std::f64::consts::PI;
    let delta_axis = AxisSpec::new(-8.0, 8.0, 321);
    let dphi_axis = AxisSpec::new(0.0, 4.0 * PI, 321);
    let eta_axis = AxisSpec::new(0.0, 4.0, 321);
    let spec = |mode: SweepMode, phi1: f64, sagnac: bool, scan: AxisSpec| SweepSpec {
        mode,
        phi1,
        gamma1: 1.0,
        gamma_loss: 0.0,
        sagnac,
        delta_axis,
        scan_axis: scan,
    };
    match id {
        FigureId::Fig2A | FigureId::Fig2B | FigureId::Fig2C => {
            spec(SweepMode::DeltaDphi { eta: 1.0 }, 0.0, false, dphi_axis)
        }
        FigureId::Fig2D | FigureId::Fig2E | FigureId::Fig2F => {
            spec(SweepMode::DeltaDphi { eta: 1.0 }, PI / 2.0, false, dphi_axis)
        }
        FigureId::Fig3A | FigureId::Fig3B | FigureId::Fig3C => {
            spec(SweepMode::DeltaEta { dphi: 2.0 * PI }, 0.0, false, eta_axis)
        }
        FigureId::Fig3D | FigureId::Fig3E | FigureId::Fig3F => {
            spec(SweepMode::DeltaEta { dphi: PI }, 0.0, false, eta_axis)
        }
        FigureId::Fig3G | FigureId::Fig3H | FigureId::Fig3I => {
            spec(SweepMode::DeltaEta { dphi: PI / 2.0 }, 0.0, false, eta_axis)
        }
        FigureId::Fig4A => spec(SweepMode::DeltaDphi { eta: 1.0 }, 0.0, true, dphi_axis),
        FigureId::Fig4B => spec(SweepMode::DeltaDphi { eta: 1.0 }, PI / 2.0, true, dphi_axis),
        FigureId::Fig5A => spec(SweepMode::DeltaEta { dphi: 2.0 * PI }, 0.0, true, eta_axis),
        FigureId::Fig5B => spec(SweepMode::DeltaEta { dphi: PI }, 0.0, true, eta_axis),
        FigureId::Fig5C => spec(SweepMode::DeltaEta { dphi: PI / 2.0 }, 0.0, true, eta_axis),
    }
}
