//! Global finite-element space with homogeneous Dirichlet conditions.
//!
//! Degrees of freedom are numbered consecutively left to right; the two
//! boundary dofs are eliminated, so vectors and matrices live on the
//! interior dofs only and boundary values are implicitly zero.

use std::sync::Arc;

use crate::elements::{self, ReferenceBasis};
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;

#[derive(Debug, Clone)]
pub struct FemSpace {
    mesh: Mesh1D,
    basis: ReferenceBasis,
    dof_coords: Vec<f64>,
}

impl FemSpace {
    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn basis(&self) -> &ReferenceBasis {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    /// All Lagrange nodes including the endpoints.
    pub fn n_dofs_total(&self) -> usize {
        self.dof_coords.len()
    }

    /// Interior dofs remaining after Dirichlet elimination.
    pub fn n_dofs_free(&self) -> usize {
        self.n_dofs_total() - 2
    }

    pub fn dof_coords(&self) -> &[f64] {
        &self.dof_coords
    }

    /// Global dof index of local node `j` on element `k`.
    pub fn global_dof(&self, k: usize, j: usize) -> usize {
        k * self.degree() + j
    }

    /// Free-dof index of a global dof, or `None` for the two boundary dofs.
    pub fn free_index(&self, global: usize) -> Option<usize> {
        if global == 0 || global == self.n_dofs_total() - 1 {
            None
        } else {
            Some(global - 1)
        }
    }
}

/// Builds the Lagrange space of the given degree over `mesh`.
pub fn build_space(mesh: Mesh1D, degree: usize) -> Result<FemSpace> {
    let basis = elements::make_basis(degree)?;
    let mut dof_coords = Vec::with_capacity(mesh.n_elements() * degree + 1);
    for k in 0..mesh.n_elements() {
        let (lo, hi) = mesh.element_interval(k)?;
        for j in 0..degree {
            dof_coords.push(lo + (hi - lo) * j as f64 / degree as f64);
        }
    }
    dof_coords.push(mesh.b());
    Ok(FemSpace {
        mesh,
        basis,
        dof_coords,
    })
}

/// Piecewise-polynomial function given by coefficients over the free dofs.
#[derive(Debug, Clone)]
pub struct FemFunction {
    space: Arc<FemSpace>,
    coeffs: Vec<f64>,
}

impl FemFunction {
    pub fn new(space: Arc<FemSpace>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.n_dofs_free() {
            return Err(Error::DimensionMismatch {
                expected: space.n_dofs_free(),
                got: coeffs.len(),
            });
        }
        Ok(FemFunction { space, coeffs })
    }

    pub fn zero(space: Arc<FemSpace>) -> Self {
        let n = space.n_dofs_free();
        FemFunction {
            space,
            coeffs: vec![0.0; n],
        }
    }

    pub fn space(&self) -> &FemSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of a global dof; boundary dofs are zero.
    pub fn global_coeff(&self, global: usize) -> f64 {
        match self.space.free_index(global) {
            Some(i) => self.coeffs[i],
            None => 0.0,
        }
    }

    /// Point evaluation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (k, t) = self.locate(x)?;
        let vals = elements::eval_basis(self.space.basis(), t);
        Ok(vals
            .iter()
            .enumerate()
            .map(|(j, &phi)| self.global_coeff(self.space.global_dof(k, j)) * phi)
            .sum())
    }

    /// Derivative at `x` (one-sided limit at element boundaries).
    pub fn eval_deriv(&self, x: f64) -> Result<f64> {
        let (k, t) = self.locate(x)?;
        let (lo, hi) = self.space.mesh().element_interval(k)?;
        let derivs = elements::eval_basis_deriv(self.space.basis(), t);
        let sum: f64 = derivs
            .iter()
            .enumerate()
            .map(|(j, &dphi)| self.global_coeff(self.space.global_dof(k, j)) * dphi)
            .sum();
        Ok(sum / (hi - lo))
    }

    fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let k = self.space.mesh().find_element(x)?;
        let (lo, hi) = self.space.mesh().element_interval(k)?;
        Ok((k, (x - lo) / (hi - lo)))
    }
}

/// Nodal interpolant of `g`. Boundary values of `g` are dropped; callers
/// must pass `g` with `g(a) = g(b) = 0`.
pub fn interpolate<F: Fn(f64) -> f64>(space: Arc<FemSpace>, g: F) -> FemFunction {
    let coeffs = space.dof_coords()[1..space.n_dofs_total() - 1]
        .iter()
        .map(|&x| g(x))
        .collect();
    FemFunction { space, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(n: usize, degree: usize) -> Arc<FemSpace> {
        Arc::new(build_space(Mesh1D::build_uniform(0.0, 1.0, n).unwrap(), degree).unwrap())
    }

    #[test]
    fn dof_counts() {
        let s = space(10, 1);
        assert_eq!(s.n_dofs_total(), 11);
        assert_eq!(s.n_dofs_free(), 9);
        let s = space(10, 3);
        assert_eq!(s.n_dofs_total(), 31);
        assert_eq!(s.n_dofs_free(), 29);
        let s = space(1, 1);
        assert_eq!(s.n_dofs_free(), 0);
    }

    #[test]
    fn element_dof_window() {
        let s = space(5, 3);
        for k in 0..5 {
            for j in 0..=3 {
                assert_eq!(s.global_dof(k, j), k * 3 + j);
            }
        }
    }

    #[test]
    fn zero_function_evaluates_to_zero() {
        let f = FemFunction::zero(space(7, 2));
        for &x in &[0.0, 0.3, 0.77, 1.0] {
            assert_eq!(f.eval(x).unwrap(), 0.0);
        }
    }

    #[test]
    fn linear_reproduction() {
        // g(x) = x has nonzero boundary value at 1, so use x(1-x)-free test:
        // a degree-1 space reproduces any piecewise-linear interior data;
        // check the interpolant of g(x) = x at dof coords only... instead
        // use g with zero boundary: the tent g(x) = min(x, 1-x).
        let s = space(10, 1);
        let g = |x: f64| x.min(1.0 - x);
        let f = interpolate(s, g);
        assert!((f.eval(0.55).unwrap() - 0.45).abs() < 1e-14);
        assert!((f.eval(0.2).unwrap() - 0.2).abs() < 1e-14);
    }

    #[test]
    fn quadratic_reproduction() {
        let s = space(10, 2);
        let g = |x: f64| x * (1.0 - x);
        let f = interpolate(s, g);
        assert!((f.eval(0.37).unwrap() - g(0.37)).abs() < 1e-14);
        // derivative of a reproduced quadratic
        assert!((f.eval_deriv(0.37).unwrap() - (1.0 - 2.0 * 0.37)).abs() < 1e-12);
    }

    #[test]
    fn interpolant_matches_at_dof_coords() {
        let s = space(6, 2);
        let g = |x: f64| (std::f64::consts::PI * x).sin();
        let f = interpolate(s.clone(), g);
        for &x in s.dof_coords() {
            assert!((f.eval(x).unwrap() - g(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn example1_v_is_in_quadratic_space() {
        let s = space(10, 2);
        let g = |x: f64| x * (x - 1.0) / 2.0;
        let f = interpolate(s, g);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((f.eval(x).unwrap() - g(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn boundary_values_vanish() {
        let s = space(4, 3);
        let f = interpolate(s, |x| x * (1.0 - x) * (2.0 + x));
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
        assert_eq!(f.eval(1.0).unwrap(), 0.0);
    }

    #[test]
    fn eval_outside_domain_fails() {
        let f = FemFunction::zero(space(3, 1));
        assert!(f.eval(1.5).is_err());
    }

    proptest! {
        #[test]
        fn polynomial_reproduction(degree in 2usize..=3, n in 2usize..30, x in 0.0f64..=1.0) {
            // x(1-x)*x^(degree-2) has degree <= space degree and zero boundary
            let d = degree as i32 - 2;
            let g = move |x: f64| x * (1.0 - x) * x.powi(d);
            let f = interpolate(space(n, degree), g);
            prop_assert!((f.eval(x).unwrap() - g(x)).abs() < 1e-13);
        }

        #[test]
        fn interpolation_error_shrinks(degree in 1usize..=3) {
            // crude order check: error at a fixed point drops by ~2^(d+1)
            // when the mesh is refined 2x
            let g = |x: f64| (std::f64::consts::PI * x).sin();
            let mut prev = f64::INFINITY;
            for &n in &[8usize, 16, 32] {
                let f = interpolate(space(n, degree), g);
                let mut err: f64 = 0.0;
                for i in 1..200 {
                    let x = i as f64 / 200.0;
                    err = err.max((f.eval(x).unwrap() - g(x)).abs());
                }
                prop_assert!(err < prev);
                prev = err;
            }
        }
    }
}
