//! Assembly of the stiffness matrix, load vector, nonlinear right-hand
//! side, and the weighted mass matrix `M(v)` by element loops and
//! quadrature.

use crate::elements::{eval_basis, eval_basis_deriv, QuadratureRule};
use crate::error::{Error, Result};
use crate::space::{FemFunction, FemSpace};

/// Symmetric banded matrix; only the lower band is stored.
///
/// Entry `(i, j)` with `i >= j` and `i - j <= half_bandwidth` lives at
/// `data[i * (half_bandwidth + 1) + (i - j)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymMatrix {
    dim: usize,
    half_bandwidth: usize,
    data: Vec<f64>,
}

impl BandedSymMatrix {
    pub fn zeros(dim: usize, half_bandwidth: usize) -> Self {
        BandedSymMatrix {
            dim,
            half_bandwidth,
            data: vec![0.0; dim * (half_bandwidth + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        if r - c > self.half_bandwidth {
            0.0
        } else {
            self.data[r * (self.half_bandwidth + 1) + (r - c)]
        }
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i >= j && i - j <= self.half_bandwidth);
        self.data[i * (self.half_bandwidth + 1) + (i - j)] += value;
    }

    pub(crate) fn band(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn band_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Infinity norm (max absolute row sum), reconstructed from the band.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let lo = i.saturating_sub(self.half_bandwidth);
                let hi = (i + self.half_bandwidth).min(self.dim.saturating_sub(1));
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Dense vector over the free dofs of a space.
pub type DenseVector = Vec<f64>;

/// Matrix-vector product within the band.
pub fn apply(matrix: &BandedSymMatrix, x: &[f64]) -> Result<DenseVector> {
    if x.len() != matrix.dim() {
        return Err(Error::DimensionMismatch {
            expected: matrix.dim(),
            got: x.len(),
        });
    }
    let n = matrix.dim();
    let bw = matrix.half_bandwidth();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let lo = i.saturating_sub(bw);
        let hi = (i + bw).min(n.saturating_sub(1));
        for j in lo..=hi {
            y[i] += matrix.get(i, j) * x[j];
        }
    }
    Ok(y)
}

/// Stiffness matrix `K_ij = (phi_i', phi_j')` over the free dofs.
///
/// The quadrature rule must be exact for the derivative products, i.e. for
/// polynomials of degree `2(degree - 1)`.
pub fn assemble_stiffness(space: &FemSpace, quad: &QuadratureRule) -> Result<BandedSymMatrix> {
    let degree = space.degree();
    let needed = 2 * (degree - 1);
    if quad.exact_degree() < needed {
        return Err(Error::QuadratureTooWeak {
            exact: quad.exact_degree(),
            needed,
        });
    }
    let mut k_mat = BandedSymMatrix::zeros(space.n_dofs_free(), degree);
    let nloc = degree + 1;
    // reference gradients at quadrature points, reused across elements
    let derivs_at_qp: Vec<Vec<f64>> = quad
        .points()
        .iter()
        .map(|&t| eval_basis_deriv(space.basis(), t))
        .collect();
    for k in 0..space.mesh().n_elements() {
        let (lo, hi) = space.mesh().element_interval(k)?;
        let h = hi - lo;
        for (qp, &w) in quad.weights().iter().enumerate() {
            let d = &derivs_at_qp[qp];
            // d(phi)/dx = d(phi)/dt / h; dx = h dt => factor w / h
            let scale = w / h;
            for a in 0..nloc {
                let ga = space.global_dof(k, a);
                let Some(ia) = space.free_index(ga) else {
                    continue;
                };
                for b in 0..=a {
                    let gb = space.global_dof(k, b);
                    let Some(ib) = space.free_index(gb) else {
                        continue;
                    };
                    let (r, c) = if ia >= ib { (ia, ib) } else { (ib, ia) };
                    k_mat.add(r, c, scale * d[a] * d[b]);
                }
            }
        }
    }
    Ok(k_mat)
}

/// Load vector with the sign convention of the mixed system:
/// entry `j` is `-(f, phi_j)`.
pub fn assemble_load<F: Fn(f64) -> f64>(
    space: &FemSpace,
    f: F,
    quad: &QuadratureRule,
) -> Result<DenseVector> {
    assemble_functional(space, quad, |x| -f(x))
}

/// Nonlinear right-hand side of the second solve:
/// entry `j` is `-(sign(v_h) |v_h|^{q-1}, phi_j)`.
///
/// This is algebraically `-(|v_h|^{q-2} v_h, phi_j)` but stays finite at
/// zeros of `v_h` when `q < 2`.
pub fn assemble_nonlinear_rhs(
    space: &FemSpace,
    v_h: &FemFunction,
    q: f64,
    quad: &QuadratureRule,
) -> Result<DenseVector> {
    if q <= 1.0 {
        return Err(Error::InvalidExponent(format!(
            "conjugate exponent q must exceed 1, got {q}"
        )));
    }
    assemble_functional(space, quad, |x| {
        let v = v_h.eval(x).expect("quadrature point inside domain");
        -(v.signum() * v.abs().powf(q - 1.0))
    })
}

/// Weighted mass matrix `M_ij = int |v_h|^{q-2} phi_i phi_j dx`.
///
/// For `q < 2` the weight is singular at zeros of `v_h`; values of `|v_h|`
/// below `clamp` are replaced by `clamp` before the power is taken.
pub fn assemble_m(
    space: &FemSpace,
    v_h: &FemFunction,
    q: f64,
    quad: &QuadratureRule,
    clamp: f64,
) -> Result<BandedSymMatrix> {
    if q <= 1.0 {
        return Err(Error::InvalidExponent(format!(
            "conjugate exponent q must exceed 1, got {q}"
        )));
    }
    if clamp <= 0.0 {
        return Err(Error::InvalidConfig("clamp must be positive".into()));
    }
    let degree = space.degree();
    let mut m_mat = BandedSymMatrix::zeros(space.n_dofs_free(), degree);
    let nloc = degree + 1;
    let vals_at_qp: Vec<Vec<f64>> = quad
        .points()
        .iter()
        .map(|&t| eval_basis(space.basis(), t))
        .collect();
    for k in 0..space.mesh().n_elements() {
        let (lo, hi) = space.mesh().element_interval(k)?;
        let h = hi - lo;
        for (qp, (&t, &w)) in quad.points().iter().zip(quad.weights()).enumerate() {
            let x = lo + t * h;
            let v = v_h.eval(x)?;
            let mag = if q < 2.0 { v.abs().max(clamp) } else { v.abs() };
            let weight = mag.powf(q - 2.0);
            let phi = &vals_at_qp[qp];
            let scale = w * h * weight;
            for a in 0..nloc {
                let Some(ia) = space.free_index(space.global_dof(k, a)) else {
                    continue;
                };
                for b in 0..=a {
                    let Some(ib) = space.free_index(space.global_dof(k, b)) else {
                        continue;
                    };
                    let (r, c) = if ia >= ib { (ia, ib) } else { (ib, ia) };
                    m_mat.add(r, c, scale * phi[a] * phi[b]);
                }
            }
        }
    }
    Ok(m_mat)
}

/// Entry `j` of the result is `int g(x) phi_j(x) dx` over the free dofs.
fn assemble_functional<G: Fn(f64) -> f64>(
    space: &FemSpace,
    quad: &QuadratureRule,
    g: G,
) -> Result<DenseVector> {
    let degree = space.degree();
    let nloc = degree + 1;
    let mut out = vec![0.0; space.n_dofs_free()];
    let vals_at_qp: Vec<Vec<f64>> = quad
        .points()
        .iter()
        .map(|&t| eval_basis(space.basis(), t))
        .collect();
    for k in 0..space.mesh().n_elements() {
        let (lo, hi) = space.mesh().element_interval(k)?;
        let h = hi - lo;
        for (qp, (&t, &w)) in quad.points().iter().zip(quad.weights()).enumerate() {
            let x = lo + t * h;
            let gval = g(x);
            let phi = &vals_at_qp[qp];
            for a in 0..nloc {
                if let Some(ia) = space.free_index(space.global_dof(k, a)) {
                    out[ia] += w * h * gval * phi[a];
                }
            }
        }
    }
    Ok(out)
}
