//! SVG heatmaps built from plain `<rect>` cells.
//!
//! The color map is componentwise-linear between two endpoints; undefined
//! cells render white. The mapping, axis orientation and cell geometry are
//! documented in the file's leading comment so the image is self-describing.

use gls_core::sweep::SweepResult;

use crate::csvio::scan_column_name;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapQuantity {
    Transmission,
    Reflection,
    Conversion,
    Loss,
    SagnacTransmission,
    SagnacConversion,
}

impl HeatmapQuantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            HeatmapQuantity::Transmission => "T1",
            HeatmapQuantity::Reflection => "R1",
            HeatmapQuantity::Conversion => "Tc",
            HeatmapQuantity::Loss => "loss",
            HeatmapQuantity::SagnacTransmission => "T1_tilde",
            HeatmapQuantity::SagnacConversion => "Tc_tilde",
        }
    }

    pub fn grid<'a>(&self, result: &'a SweepResult) -> Option<&'a [f64]> {
        match self {
            HeatmapQuantity::Transmission => Some(&result.transmission),
            HeatmapQuantity::Reflection => Some(&result.reflection),
            HeatmapQuantity::Conversion => Some(&result.conversion),
            HeatmapQuantity::Loss => Some(&result.loss),
            HeatmapQuantity::SagnacTransmission => {
                result.sagnac_transmission.as_deref()
            }
            HeatmapQuantity::SagnacConversion => result.sagnac_conversion.as_deref(),
        }
    }
}

impl std::str::FromStr for HeatmapQuantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(HeatmapQuantity::Transmission),
            "r1" => Ok(HeatmapQuantity::Reflection),
            "tc" => Ok(HeatmapQuantity::Conversion),
            "loss" => Ok(HeatmapQuantity::Loss),
            "t1_tilde" => Ok(HeatmapQuantity::SagnacTransmission),
            "tc_tilde" => Ok(HeatmapQuantity::SagnacConversion),
            other => Err(format!(
                "unknown quantity {other:?} (expected T1, R1, Tc, loss, T1_tilde, Tc_tilde)"
            )),
        }
    }
}

const LOW_RGB: (f64, f64, f64) = (13.0, 8.0, 135.0);
const HIGH_RGB: (f64, f64, f64) = (240.0, 249.0, 33.0);
const CELL_PX: usize = 2;

fn color(value: f64) -> String {
    if value.is_nan() {
        return "#ffffff".to_string();
    }
    let v = value.clamp(0.0, 1.0);
    let channel = |lo: f64, hi: f64| (lo + (hi - lo) * v).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        channel(LOW_RGB.0, HIGH_RGB.0),
        channel(LOW_RGB.1, HIGH_RGB.1),
        channel(LOW_RGB.2, HIGH_RGB.2)
    )
}

/// Render one grid of the sweep as a heatmap: Δ along x (left to right),
/// scan axis along y (bottom to top).
pub fn heatmap_svg(result: &SweepResult, quantity: HeatmapQuantity) -> Option<String> {
    let grid = quantity.grid(result)?;
    let cols = result.delta_values.len();
    let rows = result.scan_values.len();
    let width = cols * CELL_PX;
    let height = rows * CELL_PX;
    let mut out = String::with_capacity(rows * cols * 60);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<!-- {} heatmap of {}: x = delta in [{:.6}, {:.6}], y = {} in [{:.6}, {:.6}] \
         (bottom to top); {}x{} px cells; linear color map value 0 -> rgb(13,8,135), \
         1 -> rgb(240,249,33), componentwise; undefined cells white -->\n",
        crate::csvio::FORMAT_HEADER.trim_start_matches("# "),
        quantity.as_str(),
        result.delta_values[0],
        result.delta_values[cols - 1],
        scan_column_name(&result.spec.mode),
        result.scan_values[0],
        result.scan_values[rows - 1],
        CELL_PX,
        CELL_PX,
    ));
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    for si in 0..rows {
        let y = (rows - 1 - si) * CELL_PX;
        for di in 0..cols {
            let value = grid[di * rows + si];
            out.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                di * CELL_PX,
                y,
                CELL_PX,
                CELL_PX,
                color(value)
            ));
        }
    }
    out.push_str("</svg>\n");
    Some(out)
}
