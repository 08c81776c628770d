//! Raw boundary-condition linear systems for the two coupling points.
//!
//! The scattering ansatz turns the stationary Schrödinger equation into a
//! small complex linear system: nine unknowns `(A, B, M, N, t1, r1, t2, r2,
//! u_e)` for the bare giant atom and five `(A~, B~, t1~, t2~, u_e)` for the
//! Sagnac variant. The rows are transcribed one-to-one from the matching
//! conditions with the convention `v_g = 1`, `g_j = sqrt(Γ_j)`, so the
//! assembled matrices can be audited term by term. Solving them with
//! partial-pivot elimination gives an exactness oracle for the closed forms
//! in [`crate::model`] that shares no algebra with them.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{ModelError, ModelParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("matrix is numerically singular (pivot {pivot:e} below threshold at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("matrix/right-hand-side shape mismatch: {rows}x{cols} vs {rhs_len}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        rhs_len: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Dense row-major complex matrix, sized for the fixed small systems here.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.n + col] = value;
    }

    /// Matrix-vector product, used for residual checks.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j) * x[j])
                    .sum::<Complex64>()
            })
            .collect()
    }
}

/// Max-norm residual ‖Ax − b‖∞.
pub fn residual_inf(matrix: &CMatrix, x: &[Complex64], rhs: &[Complex64]) -> f64 {
    matrix
        .mul_vec(x)
        .iter()
        .zip(rhs)
        .map(|(ax, b)| (ax - b).norm())
        .fold(0.0, f64::max)
}

/// Gaussian elimination with partial pivoting.
///
/// A pivot smaller than 1e-14 times the largest initial entry is treated as
/// singular.
pub fn solve_dense(matrix: &CMatrix, rhs: &[Complex64]) -> Result<Vec<Complex64>, SolveError> {
    let n = matrix.n;
    if rhs.len() != n {
        return Err(SolveError::ShapeMismatch {
            rows: n,
            cols: n,
            rhs_len: rhs.len(),
        });
    }
    let mut a = matrix.clone();
    let mut b = rhs.to_vec();
    let scale = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = 1e-14 * scale;

    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, a.get(r, col).norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty column range");
        if pivot_mag < threshold || pivot_mag == 0.0 {
            return Err(SolveError::SingularMatrix {
                column: col,
                pivot: pivot_mag,
            });
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = a.get(col, j);
                a.set(col, j, a.get(pivot_row, j));
                a.set(pivot_row, j, tmp);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a.get(col, col);
        for row in (col + 1)..n {
            let factor = a.get(row, col) / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a.get(row, j) - factor * a.get(col, j);
                a.set(row, j, v);
            }
            let pivot_rhs = b[col];
            b[row] -= factor * pivot_rhs;
        }
    }

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for (j, xj) in x.iter().enumerate().skip(row + 1) {
            acc -= a.get(row, j) * xj;
        }
        x[row] = acc / a.get(row, row);
    }
    Ok(x)
}

/// All nine unknowns of the bare-giant-atom system, in assembly order.
///
/// `A`/`B` (`M`/`N`) are the right-/left-moving photon amplitudes between
/// the coupling points with the atom ending in the ground (metastable)
/// state; `u_e` is the excited-state amplitude under the `v_g = 1`,
/// `g_j = sqrt(Γ_j)` convention.
///
/// The plane-wave ansatz references every outgoing amplitude at x = 0,
/// whereas the closed forms quote them at the first coupling point. The
/// extracted `r1`, `t2`, `r2` therefore carry the reference-plane factors
/// e^{iφ₁}, e^{i(φ₁−φ₂)/2}, e^{i(φ₁+φ₂)/2}; probabilities are unaffected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSolution {
    pub a: Complex64,
    pub b: Complex64,
    pub m: Complex64,
    pub n: Complex64,
    pub t1: Complex64,
    pub r1: Complex64,
    pub t2: Complex64,
    pub r2: Complex64,
    pub u_e: Complex64,
}

/// The five unknowns of the Sagnac (even-mode) system, in assembly order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SagnacSolution {
    pub a: Complex64,
    pub b: Complex64,
    pub t1: Complex64,
    pub t2: Complex64,
    pub u_e: Complex64,
}

fn half_phase(phi: f64, sign: f64) -> Complex64 {
    Complex64::from_polar(1.0, sign * phi / 2.0)
}

/// Assemble the nine-equation system. Unknown ordering is fixed to
/// `(A, B, M, N, t1, r1, t2, r2, u_e)`; the incident-wave inhomogeneity sits
/// in the first row's right-hand side. Dissipation enters only the atom row
/// through Δ → Δ + iγ.
pub fn assemble_giant_system(
    params: &ModelParams,
    delta: f64,
) -> Result<(CMatrix, Vec<Complex64>), SolveError> {
    params.validate()?;
    let g1 = params.gamma1.sqrt();
    let g2 = params.gamma2.sqrt();
    let i = Complex64::i();
    let em1 = half_phase(params.phi1, -1.0); // e^{-i phi1/2}
    let ep1 = half_phase(params.phi1, 1.0); // e^{+i phi1/2}
    let em2 = half_phase(params.phi2, -1.0);
    let ep2 = half_phase(params.phi2, 1.0);

    const A: usize = 0;
    const B: usize = 1;
    const M: usize = 2;
    const N: usize = 3;
    const T1: usize = 4;
    const R1: usize = 5;
    const T2: usize = 6;
    const R2: usize = 7;
    const UE: usize = 8;

    let mut mat = CMatrix::zeros(9);
    let mut rhs = vec![Complex64::new(0.0, 0.0); 9];

    // 0 = -i(A - 1) e^{-i phi1/2} + g1 u_e
    mat.set(0, A, -i * em1);
    mat.set(0, UE, g1.into());
    rhs[0] = -i * em1;

    // 0 = -i(t1 - A) e^{+i phi1/2} + g1 u_e
    mat.set(1, A, i * ep1);
    mat.set(1, T1, -i * ep1);
    mat.set(1, UE, g1.into());

    // 0 = -i(r1 - B) e^{+i phi1/2} + g1 u_e
    mat.set(2, B, i * ep1);
    mat.set(2, R1, -i * ep1);
    mat.set(2, UE, g1.into());

    // 0 = -i B e^{-i phi1/2} + g1 u_e
    mat.set(3, B, -i * em1);
    mat.set(3, UE, g1.into());

    // 0 = -i M e^{-i phi2/2} + g2 u_e
    mat.set(4, M, -i * em2);
    mat.set(4, UE, g2.into());

    // 0 = -i(t2 - M) e^{+i phi2/2} + g2 u_e
    mat.set(5, M, i * ep2);
    mat.set(5, T2, -i * ep2);
    mat.set(5, UE, g2.into());

    // 0 = -i(r2 - N) e^{+i phi2/2} + g2 u_e
    mat.set(6, N, i * ep2);
    mat.set(6, R2, -i * ep2);
    mat.set(6, UE, g2.into());

    // 0 = -i N e^{-i phi2/2} + g2 u_e
    mat.set(7, N, -i * em2);
    mat.set(7, UE, g2.into());

    // 0 = (g1/2)[(A + B + 1) e^{-i phi1/2} + (A + B + t1 + r1) e^{+i phi1/2}]
    //   + (g2/2)[(M + N) e^{-i phi2/2} + (M + N + t2 + r2) e^{+i phi2/2}]
    //   - (Δ + iγ) u_e
    let h1 = 0.5 * g1;
    let h2 = 0.5 * g2;
    mat.set(8, A, h1 * (em1 + ep1));
    mat.set(8, B, h1 * (em1 + ep1));
    mat.set(8, T1, h1 * ep1);
    mat.set(8, R1, h1 * ep1);
    mat.set(8, M, h2 * (em2 + ep2));
    mat.set(8, N, h2 * (em2 + ep2));
    mat.set(8, T2, h2 * ep2);
    mat.set(8, R2, h2 * ep2);
    mat.set(8, UE, -Complex64::new(delta, params.gamma_loss));
    rhs[8] = -h1 * em1;

    Ok((mat, rhs))
}

pub fn solve_giant(params: &ModelParams, delta: f64) -> Result<FullSolution, SolveError> {
    let (mat, rhs) = assemble_giant_system(params, delta)?;
    let x = solve_dense(&mat, &rhs)?;
    let f_r1 = Complex64::from_polar(1.0, params.phi1);
    let f_t2 = Complex64::from_polar(1.0, 0.5 * (params.phi1 - params.phi2));
    let f_r2 = Complex64::from_polar(1.0, 0.5 * (params.phi1 + params.phi2));
    Ok(FullSolution {
        a: x[0],
        b: x[1],
        m: x[2],
        n: x[3],
        t1: x[4],
        r1: x[5] * f_r1,
        t2: x[6] * f_t2,
        r2: x[7] * f_r2,
        u_e: x[8],
    })
}

/// Assemble the five-equation even-mode system, with couplings doubled in
/// rate by the Sagnac couplers (`g~_j = sqrt(2) g_j`). Unknown ordering
/// `(A~, B~, t1~, t2~, u_e)`.
pub fn assemble_sagnac_system(
    params: &ModelParams,
    delta: f64,
) -> Result<(CMatrix, Vec<Complex64>), SolveError> {
    params.validate()?;
    let g1 = (2.0 * params.gamma1).sqrt();
    let g2 = (2.0 * params.gamma2).sqrt();
    let i = Complex64::i();
    let em1 = half_phase(params.phi1, -1.0);
    let ep1 = half_phase(params.phi1, 1.0);
    let em2 = half_phase(params.phi2, -1.0);
    let ep2 = half_phase(params.phi2, 1.0);

    const A: usize = 0;
    const B: usize = 1;
    const T1: usize = 2;
    const T2: usize = 3;
    const UE: usize = 4;

    let mut mat = CMatrix::zeros(5);
    let mut rhs = vec![Complex64::new(0.0, 0.0); 5];

    // 0 = -i(A~ - 1) e^{-i phi1/2} + g~1 u_e
    mat.set(0, A, -i * em1);
    mat.set(0, UE, g1.into());
    rhs[0] = -i * em1;

    // 0 = -i(t1~ - A~) e^{+i phi1/2} + g~1 u_e
    mat.set(1, A, i * ep1);
    mat.set(1, T1, -i * ep1);
    mat.set(1, UE, g1.into());

    // 0 = -i B~ e^{-i phi2/2} + g~2 u_e
    mat.set(2, B, -i * em2);
    mat.set(2, UE, g2.into());

    // 0 = -i(t2~ - B~) e^{+i phi2/2} + g~2 u_e
    mat.set(3, B, i * ep2);
    mat.set(3, T2, -i * ep2);
    mat.set(3, UE, g2.into());

    // 0 = (g~1/2)[(A~ + 1) e^{-i phi1/2} + (A~ + t1~) e^{+i phi1/2}]
    //   + (g~2/2)[B~ e^{-i phi2/2} + (B~ + t2~) e^{+i phi2/2}] - (Δ + iγ) u_e
    let h1 = 0.5 * g1;
    let h2 = 0.5 * g2;
    mat.set(4, A, h1 * (em1 + ep1));
    mat.set(4, T1, h1 * ep1);
    mat.set(4, B, h2 * (em2 + ep2));
    mat.set(4, T2, h2 * ep2);
    mat.set(4, UE, -Complex64::new(delta, params.gamma_loss));
    rhs[4] = -h1 * em1;

    Ok((mat, rhs))
}

pub fn solve_sagnac(params: &ModelParams, delta: f64) -> Result<SagnacSolution, SolveError> {
    let (mat, rhs) = assemble_sagnac_system(params, delta)?;
    let x = solve_dense(&mat, &rhs)?;
    Ok(SagnacSolution {
        a: x[0],
        b: x[1],
        t1: x[2],
        t2: x[3],
        u_e: x[4],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{giant_lambda_amplitudes, sagnac_amplitudes};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_system() {
        let mut m = CMatrix::zeros(3);
        for i in 0..3 {
            m.set(i, i, c(1.0, 0.0));
        }
        let rhs = vec![c(1.0, -2.0), c(0.5, 0.0), c(0.0, 3.0)];
        let x = solve_dense(&m, &rhs).unwrap();
        assert_eq!(x, rhs);
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 1, c(1.0, 0.0));
        m.set(1, 0, c(1.0, 0.0));
        let rhs = vec![c(2.0, 1.0), c(-3.0, 0.5)];
        let x = solve_dense(&m, &rhs).unwrap();
        assert_eq!(x[0], rhs[1]);
        assert_eq!(x[1], rhs[0]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(0, 1, c(2.0, 0.0));
        m.set(1, 0, c(2.0, 0.0));
        m.set(1, 1, c(4.0, 0.0));
        let rhs = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(
            solve_dense(&m, &rhs),
            Err(SolveError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn random_systems_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let mut m = CMatrix::zeros(9);
            let mut x = Vec::with_capacity(9);
            for i in 0..9 {
                x.push(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                for j in 0..9 {
                    m.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                }
            }
            let rhs = m.mul_vec(&x);
            let solved = solve_dense(&m, &rhs).unwrap();
            for (a, b) in solved.iter().zip(&x) {
                assert!((a - b).norm() <= 1e-11, "roundtrip deviation {}", (a - b).norm());
            }
            let rhs_scale = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(residual_inf(&m, &solved, &rhs) <= 1e-12 * rhs_scale.max(1.0));
        }
    }

    #[test]
    fn hand_solved_zero_phase_point() {
        let params = ModelParams::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let sol = solve_giant(&params, 0.0).unwrap();
        assert!((sol.a - c(0.75, 0.0)).norm() <= 1e-14);
        assert!((sol.b - c(-0.25, 0.0)).norm() <= 1e-14);
        assert!((sol.m - c(-0.25, 0.0)).norm() <= 1e-14);
        assert!((sol.n - c(-0.25, 0.0)).norm() <= 1e-14);
        assert!((sol.t1 - c(0.5, 0.0)).norm() <= 1e-14);
        assert!((sol.r1 - c(-0.5, 0.0)).norm() <= 1e-14);
        assert!((sol.t2 - c(-0.5, 0.0)).norm() <= 1e-14);
        assert!((sol.r2 - c(-0.5, 0.0)).norm() <= 1e-14);
        assert!((sol.u_e - c(0.0, -0.25)).norm() <= 1e-14);

        let (mat, rhs) = assemble_giant_system(&params, 0.0).unwrap();
        let x = [
            sol.a, sol.b, sol.m, sol.n, sol.t1, sol.r1, sol.t2, sol.r2, sol.u_e,
        ];
        assert!(residual_inf(&mat, &x, &rhs) <= 1e-14);
    }

    #[test]
    fn gamma2_zero_decouples_conversion_rows() {
        let params = ModelParams::new(1.3, 0.0, 0.8, -2.1, 0.0).unwrap();
        let sol = solve_giant(&params, 0.4).unwrap();
        assert!(sol.m.norm() <= 1e-14);
        assert!(sol.n.norm() <= 1e-14);
        assert!(sol.t2.norm() <= 1e-14);
        assert!(sol.r2.norm() <= 1e-14);
    }

    #[test]
    fn solver_matches_closed_form_examples() {
        let params = ModelParams::new(1.0, 2.0, 0.7, -1.1, 0.0).unwrap();
        let sol = solve_giant(&params, 0.3).unwrap();
        let a = giant_lambda_amplitudes(&params, 0.3).unwrap();
        assert!((sol.t1 - a.t1).norm() <= 1e-10);
        assert!((sol.r1 - a.r1).norm() <= 1e-10);
        assert!((sol.t2 - a.t2).norm() <= 1e-10);
        assert!((sol.r2 - a.r2).norm() <= 1e-10);
    }

    #[test]
    fn sagnac_solver_examples() {
        let params = ModelParams::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let sol = solve_sagnac(&params, 0.0).unwrap();
        assert!((sol.t2 - c(-1.0, 0.0)).norm() <= 1e-12);
        assert!(sol.t1.norm() <= 1e-12);

        let params = ModelParams::new(1.0, 0.7, PI, -0.4, 0.0).unwrap();
        let sol = solve_sagnac(&params, 0.9).unwrap();
        assert!(sol.t2.norm() <= 1e-12);

        let params = ModelParams::new(1.0, 0.5, 0.3, -0.9, 0.0).unwrap();
        let sol = solve_sagnac(&params, 1.2).unwrap();
        let a = sagnac_amplitudes(&params, 1.2).unwrap();
        assert!((sol.t1 - a.t1).norm() <= 1e-10);
        assert!((sol.t2 - a.t2).norm() <= 1e-10);

        let (mat, rhs) = assemble_sagnac_system(&params, 1.2).unwrap();
        let x = solve_dense(&mat, &rhs).unwrap();
        assert!(residual_inf(&mat, &x, &rhs) <= 1e-12);
    }

    #[test]
    fn oracle_agreement_and_residuals_over_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..500 {
            let params = ModelParams::new(
                10.0 * (1.0 - rng.gen::<f64>()),
                rng.gen_range(0.0..=10.0),
                rng.gen_range(-4.0 * PI..4.0 * PI),
                rng.gen_range(-4.0 * PI..4.0 * PI),
                if rng.gen::<bool>() {
                    rng.gen_range(0.0..2.0)
                } else {
                    0.0
                },
            )
            .unwrap();
            let delta = rng.gen_range(-50.0..50.0);

            let sol = solve_giant(&params, delta).unwrap();
            let a = giant_lambda_amplitudes(&params, delta).unwrap();
            for (lhs, rhs) in [
                (sol.t1, a.t1),
                (sol.r1, a.r1),
                (sol.t2, a.t2),
                (sol.r2, a.r2),
            ] {
                let denom = lhs.norm().max(rhs.norm()).max(1.0);
                assert!((lhs - rhs).norm() / denom <= 1e-10);
            }
            if params.gamma_loss == 0.0 {
                let total = sol.t1.norm_sqr()
                    + sol.r1.norm_sqr()
                    + sol.t2.norm_sqr()
                    + sol.r2.norm_sqr();
                assert!((total - 1.0).abs() <= 1e-10);
            }

            let (mat, rhs_vec) = assemble_giant_system(&params, delta).unwrap();
            let raw = solve_dense(&mat, &rhs_vec).unwrap();
            let scale = rhs_vec.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
            assert!(residual_inf(&mat, &raw, &rhs_vec) <= 1e-12 * scale);

            let ssol = solve_sagnac(&params, delta).unwrap();
            let sa = sagnac_amplitudes(&params, delta).unwrap();
            assert!((ssol.t1 - sa.t1).norm() <= 1e-10 * ssol.t1.norm().max(1.0));
            assert!((ssol.t2 - sa.t2).norm() <= 1e-10 * ssol.t2.norm().max(1.0));
        }
    }
}
