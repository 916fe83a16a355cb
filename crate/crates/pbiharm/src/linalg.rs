//! Banded Cholesky factorization and triangular solves for the SPD
//! stiffness systems.

use crate::assembly::{apply, BandedSymMatrix, DenseVector};
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor in band storage. Keeps a copy of the
/// original matrix so every solve can report its residual.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    lower: BandedSymMatrix,
    original: BandedSymMatrix,
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn half_bandwidth(&self) -> usize {
        self.lower.half_bandwidth()
    }

    pub fn lower(&self) -> &BandedSymMatrix {
        &self.lower
    }
}

/// Factors an SPD banded matrix as `L L^T` without pivoting.
pub fn factor(matrix: &BandedSymMatrix) -> Result<CholeskyFactor> {
    let n = matrix.dim();
    let bw = matrix.half_bandwidth();
    let mut lower = matrix.clone();
    let stride = bw + 1;
    for j in 0..n {
        // pivot
        let mut diag = lower.band()[j * stride];
        for k in j.saturating_sub(bw)..j {
            let l_jk = lower.band()[j * stride + (j - k)];
            diag -= l_jk * l_jk;
        }
        if diag <= 0.0 || !diag.is_finite() {
            return Err(Error::NotPositiveDefinite {
                row: j,
                pivot: diag,
            });
        }
        let l_jj = diag.sqrt();
        lower.band_mut()[j * stride] = l_jj;
        // column below the pivot
        for i in j + 1..(j + bw + 1).min(n) {
            let mut v = lower.band()[i * stride + (i - j)];
            for k in i.saturating_sub(bw)..j {
                v -= lower.band()[i * stride + (i - k)] * lower.band()[j * stride + (j - k)];
            }
            lower.band_mut()[i * stride + (i - j)] = v / l_jj;
        }
    }
    Ok(CholeskyFactor {
        lower,
        original: matrix.clone(),
    })
}

/// Solution together with its infinity-norm residual `||K x - rhs||_inf`.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub x: DenseVector,
    pub residual: f64,
}

/// Solves `K x = rhs` with a previously computed factor.
pub fn solve(factor: &CholeskyFactor, rhs: &[f64]) -> Result<SolveResult> {
    let n = factor.dim();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let bw = factor.half_bandwidth();
    let stride = bw + 1;
    let band = factor.lower.band();

    // forward: L y = rhs
    let mut x = rhs.to_vec();
    for i in 0..n {
        let mut v = x[i];
        for k in i.saturating_sub(bw)..i {
            v -= band[i * stride + (i - k)] * x[k];
        }
        x[i] = v / band[i * stride];
    }
    // backward: L^T x = y
    for i in (0..n).rev() {
        let mut v = x[i];
        for k in i + 1..(i + bw + 1).min(n) {
            v -= band[k * stride + (k - i)] * x[k];
        }
        x[i] = v / band[i * stride];
    }

    let kx = apply(&factor.original, &x)?;
    let residual = kx
        .iter()
        .zip(rhs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SolveResult { x, residual })
}
