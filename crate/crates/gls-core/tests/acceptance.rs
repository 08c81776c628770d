//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the observed margin (visible with `cargo test -- --nocapture`).

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gls_core::conditions::{extremum_trajectory, TrajectoryEntry, TrajectoryTarget};
use gls_core::lattice::LatticePreset;
use gls_core::model::{
    giant_lambda_amplitudes, sagnac_amplitudes, small_atom_amplitudes, ModelParams,
};
use gls_core::sweep::{figure_preset, run_sweep, AxisSpec, FigureId, SweepMode, SweepSpec};
use gls_core::verify;

const SEED: u64 = 20240810;
const DRAWS: usize = 10_000;

fn pass(criterion: &str, detail: String) {
    println!("[{criterion}] PASS — {detail}");
}

/// Point of a 321-node Δ grid so that refinement brackets are grid cells.
fn delta_grid() -> AxisSpec {
    AxisSpec::new(-8.0, 8.0, 321)
}

/// Refine the Δ extremum of the η = 1 column at fixed (φ₁, Δφ) through the
/// trajectory machinery (a degenerate two-column scan, first entry taken).
fn refine_delta(dphi: f64, phi1: f64, target: TrajectoryTarget, gamma_loss: f64) -> (f64, f64) {
    let spec = SweepSpec {
        mode: SweepMode::DeltaEta { dphi },
        phi1,
        gamma1: 1.0,
        gamma_loss,
        sagnac: false,
        delta_axis: delta_grid(),
        scan_axis: AxisSpec::new(1.0, 1.0 + 1e-9, 2),
    };
    match extremum_trajectory(&spec, target).unwrap()[0] {
        TrajectoryEntry::Point(p) => (p.delta, p.value),
        TrajectoryEntry::Flat { .. } => panic!("column unexpectedly flat"),
    }
}

#[test]
fn criterion_01_oracle_equivalence() {
    let (giant, sagnac) = verify::oracle_deviation(SEED, DRAWS);
    assert!(giant <= 1e-10, "giant-system deviation {giant:e}");
    assert!(sagnac <= 1e-10, "Sagnac-system deviation {sagnac:e}");
    pass(
        "1 oracle equivalence",
        format!("max deviation giant {giant:.3e}, Sagnac {sagnac:.3e} over {DRAWS} draws (tol 1e-10)"),
    );
}

#[test]
fn criterion_02_unitarity_and_symmetry() {
    let defects = verify::unitarity_defects(SEED, DRAWS);
    assert!(defects.closed <= 1e-12, "T1+R1+Tc defect {:e}", defects.closed);
    assert!(defects.sagnac <= 1e-12, "Sagnac sum defect {:e}", defects.sagnac);
    assert!(
        defects.t2_r2_symmetry <= 1e-14,
        "|t2| vs |r2| defect {:e}",
        defects.t2_r2_symmetry
    );
    pass(
        "2 unitarity",
        format!(
            "sum defects {:.3e} / {:.3e} (tol 1e-12), |t2|=|r2| defect {:.3e} (tol 1e-14)",
            defects.closed, defects.sagnac, defects.t2_r2_symmetry
        ),
    );
}

#[test]
fn criterion_03_small_atom_optimum() {
    let params = ModelParams::from_dphi(1.0, 1.0, 0.0, 2.0 * PI, 0.0).unwrap();
    let a = giant_lambda_amplitudes(&params, 0.0).unwrap();
    assert!((a.conversion - 0.5).abs() <= 1e-10, "Tc = {}", a.conversion);
    let small = small_atom_amplitudes(1.0, 1.0, 0.0, 0.0).unwrap();
    assert!((small.conversion - 0.5).abs() <= 1e-10);
    pass(
        "3 small-atom optimum",
        format!("Tc = {:.12} at (phi1=0, dphi=2pi, eta=1, delta=0), tol 1e-10", a.conversion),
    );
}

#[test]
fn criterion_04_total_reflection() {
    // phi1 = 0, dphi = pi: R1 = 1 at delta = 0, Tc = 0 on the whole grid
    let params = ModelParams::from_dphi(1.0, 1.0, 0.0, PI, 0.0).unwrap();
    let at_resonance = giant_lambda_amplitudes(&params, 0.0).unwrap();
    assert!((at_resonance.reflection - 1.0).abs() <= 1e-10);
    let grid = delta_grid();
    let mut max_tc: f64 = 0.0;
    for i in 0..grid.count {
        let a = giant_lambda_amplitudes(&params, grid.value(i)).unwrap();
        max_tc = max_tc.max(a.conversion);
    }
    assert!(max_tc <= 1e-12, "max Tc on grid {max_tc:e}");

    // phi1 = pi/2, dphi = 3pi/2: reflection peak at delta = 2*Gamma1
    let (peak_delta, peak_value) = refine_delta(
        3.0 * PI / 2.0,
        PI / 2.0,
        TrajectoryTarget::MaxReflection,
        0.0,
    );
    assert!((peak_delta - 2.0).abs() <= 1e-6, "peak at {peak_delta}");
    assert!((peak_value - 1.0).abs() <= 1e-10);
    pass(
        "4 total reflection",
        format!(
            "R1(0) = {:.12}, grid max Tc = {max_tc:.2e}, shifted peak at delta = {peak_delta:.9} (tol 1e-6)",
            at_resonance.reflection
        ),
    );
}

#[test]
fn criterion_05_fipt() {
    let grid = delta_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x5157);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let eta = rng.gen_range(0.0..=10.0);
        let dphi = rng.gen_range(-4.0 * PI..4.0 * PI);
        let params = ModelParams::from_dphi(1.0, eta, PI, dphi, 0.0).unwrap();
        for i in 0..grid.count {
            let a = giant_lambda_amplitudes(&params, grid.value(i)).unwrap();
            worst = worst.max((a.transmission - 1.0).abs());
        }
    }
    assert!(worst <= 1e-12, "worst |T1 - 1| = {worst:e}");
    pass(
        "5 FIPT",
        format!("|T1 - 1| <= {worst:.3e} over 1000 random (eta, dphi) x 321 grid deltas (tol 1e-12)"),
    );
}

#[test]
fn criterion_06_general_optimum() {
    let sweep = run_sweep(&figure_preset(FigureId::Fig3G)).unwrap();
    let sc = sweep.scan_values.len();
    let (mut best_idx, mut best) = (0usize, f64::NEG_INFINITY);
    for (idx, &tc) in sweep.conversion.iter().enumerate() {
        if tc > best {
            best = tc;
            best_idx = idx;
        }
    }
    let eta_at_max = sweep.scan_values[best_idx % sc];
    assert!((eta_at_max - 2.0).abs() <= 1e-3, "grid argmax eta {eta_at_max}");

    let spec = SweepSpec {
        scan_axis: AxisSpec::new(2.0, 2.0 + 1e-9, 2),
        ..figure_preset(FigureId::Fig3G)
    };
    let entries = extremum_trajectory(&spec, TrajectoryTarget::MaxConversion).unwrap();
    let TrajectoryEntry::Point(p) = entries[0] else {
        panic!("eta = 2 column is not flat");
    };
    assert!((p.delta + 4.0).abs() <= 1e-3, "refined delta {}", p.delta);
    assert!((p.value - 0.5).abs() <= 1e-6, "refined Tc {}", p.value);

    let params = ModelParams::from_dphi(1.0, 2.0, 0.0, PI / 2.0, 0.0).unwrap();
    let s = sagnac_amplitudes(&params, -4.0).unwrap();
    assert!((s.conversion - 1.0).abs() <= 1e-6, "Sagnac Tc {}", s.conversion);
    pass(
        "6 general optimum",
        format!(
            "fig3g argmax at (eta {eta_at_max}, delta {:.6}), Tc = {:.9}; Sagnac Tc = {:.9}",
            p.delta, p.value, s.conversion
        ),
    );
}

#[test]
fn criterion_07_conversion_bound() {
    let max = verify::max_conversion_efficiency(SEED ^ 0xB0DD, 100_000);
    assert!(max <= 0.5 + 1e-12, "max Tc {max}");
    pass(
        "7 conversion bound",
        format!("max Tc over 100000 draws = {max:.12} <= 0.5 + 1e-12"),
    );
}

#[test]
fn criterion_08_sagnac_optimum() {
    let params = ModelParams::from_dphi(1.0, 1.0, 0.0, 2.0 * PI, 0.0).unwrap();
    let s = sagnac_amplitudes(&params, 0.0).unwrap();
    assert!((s.conversion - 1.0).abs() <= 1e-10, "Tc_tilde {}", s.conversion);
    pass(
        "8 Sagnac optimum",
        format!("Tc_tilde = {:.12} at (phi1=0, dphi=2pi, eta=1, delta=0), tol 1e-10", s.conversion),
    );
}

#[test]
fn criterion_09_dissipation_qualitative() {
    let gamma_loss = 0.5;
    let lossy = ModelParams::from_dphi(1.0, 1.0, 0.0, 2.0 * PI, gamma_loss).unwrap();
    let a = giant_lambda_amplitudes(&lossy, 0.0).unwrap();
    let total = a.transmission + a.reflection + a.conversion;
    assert!(total < 1.0, "total probability {total}");
    assert!(a.loss > 0.0);

    let (lossless_peak, _) = refine_delta(2.0 * PI, 0.0, TrajectoryTarget::MaxConversion, 0.0);
    let (lossy_peak, _) =
        refine_delta(2.0 * PI, 0.0, TrajectoryTarget::MaxConversion, gamma_loss);
    assert!(
        (lossy_peak - lossless_peak).abs() <= 1e-6,
        "peak moved from {lossless_peak} to {lossy_peak}"
    );
    pass(
        "9 dissipation",
        format!(
            "total probability {total:.6} < 1; Tc peak moved {:.2e} (tol 1e-6)",
            (lossy_peak - lossless_peak).abs()
        ),
    );
}

#[test]
fn criterion_10_lattice_cross_check() {
    let presets = [
        LatticePreset::Optimum,
        LatticePreset::TotalReflection,
        LatticePreset::Fipt,
    ];
    let mut summary = Vec::new();
    for preset in presets {
        let runs = verify::lattice_convergence(preset).unwrap();
        let devs: Vec<f64> = runs.iter().map(|(_, c)| c.max_abs_dev).collect();
        for (sigma, cmp) in &runs {
            assert!(
                cmp.lattice.norm_error <= 1e-8,
                "{preset:?} sigma {sigma}: norm drift {:e}",
                cmp.lattice.norm_error
            );
            assert!(
                cmp.lattice.residual_atom_population <= 1e-3,
                "{preset:?} sigma {sigma}: residual {:e}",
                cmp.lattice.residual_atom_population
            );
        }
        let dev40 = runs[1].1.max_abs_dev;
        assert!(dev40 <= 0.03, "{preset:?}: deviation {dev40} at sigma 40");
        assert!(
            devs[0] > devs[1] && devs[1] > devs[2],
            "{preset:?}: deviations not monotone {devs:?}"
        );
        summary.push(format!(
            "{preset:?} {:.4}/{:.4}/{:.4}",
            devs[0], devs[1], devs[2]
        ));
    }
    pass(
        "10 lattice cross-check",
        format!(
            "max |dev| at sigma 20/40/80: {} (tol 0.03 at sigma 40, monotone)",
            summary.join(", ")
        ),
    );
}
