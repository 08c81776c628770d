//! JSON emission with a pinned number format: every f64 is written with 15
//! significant digits, and key order follows the struct definitions, so
//! output bytes are stable across runs.

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};
use std::io;

struct FixedPrecision;

impl Formatter for FixedPrecision {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.14e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        CompactFormatter.write_f32(writer, value)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut serializer = Serializer::with_formatter(&mut out, FixedPrecision);
    value
        .serialize(&mut serializer)
        .expect("serialization of CLI output types cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[derive(Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<gls_core::Complex64> for ComplexOut {
    fn from(z: gls_core::Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
pub struct ParamsOut {
    pub gamma1: f64,
    pub gamma2: f64,
    pub eta: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub dphi: f64,
    pub gamma_loss: f64,
}

#[derive(Serialize)]
pub struct EffectiveOut {
    pub delta_shift: f64,
    pub gamma1_eff: f64,
    pub gamma2_eff: f64,
    pub gamma_eff: f64,
    pub eta_eff: Option<f64>,
}

#[derive(Serialize)]
pub struct SagnacOut {
    pub t1_tilde: ComplexOut,
    pub t2_tilde: ComplexOut,
    #[serde(rename = "T1_tilde")]
    pub transmission: f64,
    #[serde(rename = "Tc_tilde")]
    pub conversion: f64,
    pub loss: f64,
}

#[derive(Serialize)]
pub struct AmplitudesOut {
    pub params: ParamsOut,
    pub delta: f64,
    pub t1: ComplexOut,
    pub r1: ComplexOut,
    pub t2: ComplexOut,
    pub r2: ComplexOut,
    #[serde(rename = "T1")]
    pub transmission: f64,
    #[serde(rename = "R1")]
    pub reflection: f64,
    #[serde(rename = "Tc")]
    pub conversion: f64,
    pub loss: f64,
    pub effective: EffectiveOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sagnac: Option<SagnacOut>,
}

#[derive(Serialize)]
pub struct FiptOut {
    pub active: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
}

#[derive(Serialize)]
pub struct TotalReflectionOut {
    pub delta_star: f64,
}

#[derive(Serialize)]
pub struct OptimalConversionOut {
    pub possible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_star: Option<f64>,
}

#[derive(Serialize)]
pub struct ConditionsOut {
    pub phi1: f64,
    pub dphi: f64,
    pub gamma1: f64,
    pub eta: f64,
    pub fipt: FiptOut,
    pub total_reflection: Option<TotalReflectionOut>,
    pub optimal_conversion: Option<OptimalConversionOut>,
    pub tolerance_used: f64,
}

#[derive(Serialize)]
pub struct GeometryOut {
    pub d: f64,
    pub v_g: f64,
    pub omega_e: f64,
    pub omega_f: f64,
    pub gamma_total: f64,
    pub phi1: f64,
    pub dphi: f64,
    pub phi1_mod_2pi: f64,
    pub dphi_mod_2pi: f64,
    pub markov_warning: bool,
}
