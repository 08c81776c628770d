//! CSV emission for sweep grids and trajectories.
//!
//! Format contract: a `# giant-lambda-scatter v<semver>` header line, one
//! column-header row, then row-major data (Δ outer, scan axis inner) with 12
//! significant digits and '.' as the decimal separator. Undefined (singular)
//! cells serialize as empty fields.

use gls_core::conditions::TrajectoryEntry;
use gls_core::sweep::{SweepMode, SweepResult};
use std::fmt::Write as _;

pub const FORMAT_HEADER: &str = concat!("# giant-lambda-scatter v", env!("CARGO_PKG_VERSION"));

fn push_number(out: &mut String, value: f64) {
    if value.is_nan() {
        return; // undefined cell: empty field
    }
    write!(out, "{value:.11e}").expect("writing to String cannot fail");
}

pub fn scan_column_name(mode: &SweepMode) -> &'static str {
    match mode {
        SweepMode::DeltaDphi { .. } => "dphi",
        SweepMode::DeltaEta { .. } => "eta",
    }
}

pub fn sweep_to_csv(result: &SweepResult) -> String {
    let scan_name = scan_column_name(&result.spec.mode);
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str("delta,");
    out.push_str(scan_name);
    out.push_str(",T1,R1,Tc,loss");
    if result.spec.sagnac {
        out.push_str(",T1_tilde,Tc_tilde");
    }
    out.push('\n');

    let sc = result.scan_values.len();
    for (di, &delta) in result.delta_values.iter().enumerate() {
        for (si, &scan) in result.scan_values.iter().enumerate() {
            let idx = di * sc + si;
            push_number(&mut out, delta);
            out.push(',');
            push_number(&mut out, scan);
            for grid in [
                &result.transmission,
                &result.reflection,
                &result.conversion,
                &result.loss,
            ] {
                out.push(',');
                push_number(&mut out, grid[idx]);
            }
            if let (Some(t1t), Some(tct)) =
                (&result.sagnac_transmission, &result.sagnac_conversion)
            {
                out.push(',');
                push_number(&mut out, t1t[idx]);
                out.push(',');
                push_number(&mut out, tct[idx]);
            }
            out.push('\n');
        }
    }
    out
}

/// One row per scan column: `<scan>,<delta at extremum>,<value>`; flat
/// columns leave the last two fields empty.
pub fn trajectories_to_csv(
    mode: &SweepMode,
    trajectories: &[(&'static str, Vec<TrajectoryEntry>)],
) -> String {
    let scan_name = scan_column_name(mode);
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str("target,");
    out.push_str(scan_name);
    out.push_str(",delta,value\n");
    for (target, entries) in trajectories {
        for entry in entries {
            out.push_str(target);
            out.push(',');
            match entry {
                TrajectoryEntry::Point(p) => {
                    push_number(&mut out, p.scan_value);
                    out.push(',');
                    push_number(&mut out, p.delta);
                    out.push(',');
                    push_number(&mut out, p.value);
                }
                TrajectoryEntry::Flat { scan_value } => {
                    push_number(&mut out, *scan_value);
                    out.push_str(",,");
                }
            }
            out.push('\n');
        }
    }
    out
}
