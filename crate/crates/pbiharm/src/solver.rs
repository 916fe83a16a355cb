//! The mixed-method pipeline: two sequential linear solves sharing one
//! Cholesky factorization of the stiffness matrix.

use std::sync::Arc;
use std::time::Duration;

use crate::assembly::{assemble_load, assemble_nonlinear_rhs, assemble_stiffness};
use crate::elements::gauss_rule;
use crate::error::{Error, Result};
use crate::linalg::{factor, solve};
use crate::mesh::Mesh1D;
use crate::space::{build_space, FemFunction};

/// Conjugate exponent `q = p / (p - 1)`, so that `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidExponent(format!("p must exceed 1, got {p}")));
    }
    Ok(p / (p - 1.0))
}

/// One problem instance: exponent, source term, and discretization knobs.
pub struct ProblemConfig {
    pub p: f64,
    pub source: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub domain: (f64, f64),
    pub n_elements: usize,
    pub degree: usize,
    /// Gauss points per element for the nonlinear integrals; defaults to
    /// `max(degree + 1, 8)`.
    pub quad_points: Option<usize>,
}

impl ProblemConfig {
    pub fn q(&self) -> Result<f64> {
        conjugate_exponent(self.p)
    }

    pub fn effective_quad_points(&self) -> usize {
        self.quad_points.unwrap_or((self.degree + 1).max(8))
    }

    fn validate(&self) -> Result<()> {
        if !(self.p > 1.0) {
            return Err(Error::InvalidExponent(format!(
                "p must exceed 1, got {}",
                self.p
            )));
        }
        if self.degree == 0 {
            return Err(Error::InvalidDegree("degree must be at least 1".into()));
        }
        if self.n_elements == 0 {
            return Err(Error::InvalidConfig("n_elements must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of one mixed solve.
pub struct MixedSolution {
    pub u_h: FemFunction,
    pub v_h: FemFunction,
    /// `||K v - f||_inf` of the first solve.
    pub residual_v: f64,
    /// `||K u - b||_inf` of the second solve.
    pub residual_u: f64,
    pub wall_time: Duration,
}

/// Solves `K v = f`, then `K u = b(v)` with the nonlinear right-hand side,
/// reusing the single stiffness factorization for both.
///
/// The first solve never reads `p`; the second never reads the source. No
/// nonlinear iteration is needed anywhere: the change of variable makes the
/// discrete system lower-triangular in `(v, u)`.
pub fn solve_mixed(cfg: &ProblemConfig) -> Result<MixedSolution> {
    cfg.validate()?;
    solve_mixed_with(
        cfg.p,
        &cfg.source,
        cfg.domain,
        cfg.n_elements,
        cfg.degree,
        cfg.effective_quad_points(),
    )
}

/// Same pipeline with a borrowed source, for callers that hold the source
/// term inside a longer-lived structure.
pub fn solve_mixed_with(
    p: f64,
    source: &dyn Fn(f64) -> f64,
    domain: (f64, f64),
    n_elements: usize,
    degree: usize,
    quad_points: usize,
) -> Result<MixedSolution> {
    let start = std::time::Instant::now();
    let q = conjugate_exponent(p)?;
    if degree == 0 {
        return Err(Error::InvalidDegree("degree must be at least 1".into()));
    }
    if n_elements == 0 {
        return Err(Error::InvalidConfig("n_elements must be at least 1".into()));
    }

    let mesh = Mesh1D::build_uniform(domain.0, domain.1, n_elements)?;
    let space = Arc::new(build_space(mesh, degree)?);
    let stiff_quad = gauss_rule(degree.max(1))?;
    let full_quad = gauss_rule(quad_points)?;

    let k_mat = assemble_stiffness(&space, &stiff_quad)?;
    let k_factor = factor(&k_mat)?;

    let f_vec = assemble_load(&space, source, &full_quad)?;
    let v_solve = solve(&k_factor, &f_vec)?;
    let v_h = FemFunction::new(space.clone(), v_solve.x)?;

    let b_vec = assemble_nonlinear_rhs(&space, &v_h, q, &full_quad)?;
    let u_solve = solve(&k_factor, &b_vec)?;
    let u_h = FemFunction::new(space, u_solve.x)?;

    Ok(MixedSolution {
        u_h,
        v_h,
        residual_v: v_solve.residual,
        residual_u: u_solve.residual,
        wall_time: start.elapsed(),
    })
}

/// Quadrature-evaluated norms behind the discrete stability bounds.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub v_h1: f64,
    pub u_h1: f64,
    pub f_l2: f64,
    /// `||v_h||_H1 / ||f||_L2`
    pub ratio_v: f64,
    /// `||u_h||_H1 / ||f||_L2^(q-1)`
    pub ratio_u: f64,
}

/// Measures `||v_h||_H1`, `||u_h||_H1`, `||f||_L2` and the stability
/// ratios; all norms via Gauss quadrature per element.
pub fn stability_check(sol: &MixedSolution, cfg: &ProblemConfig) -> Result<StabilityReport> {
    let q = cfg.q()?;
    let quad = gauss_rule(cfg.effective_quad_points().min(20))?;
    let v_h1 = h1_norm(&sol.v_h, &quad)?;
    let u_h1 = h1_norm(&sol.u_h, &quad)?;
    let space = sol.v_h.space();
    let mut f_sq = 0.0;
    for k in 0..space.mesh().n_elements() {
        let (lo, hi) = space.mesh().element_interval(k)?;
        f_sq += quad.integrate(lo, hi, |x| {
            let f = (cfg.source)(x);
            f * f
        });
    }
    let f_l2 = f_sq.sqrt();
    let ratio_v = if f_l2 > 0.0 { v_h1 / f_l2 } else { 0.0 };
    let ratio_u = if f_l2 > 0.0 {
        u_h1 / f_l2.powf(q - 1.0)
    } else {
        0.0
    };
    Ok(StabilityReport {
        v_h1,
        u_h1,
        f_l2,
        ratio_v,
        ratio_u,
    })
}

fn h1_norm(fun: &FemFunction, quad: &crate::elements::QuadratureRule) -> Result<f64> {
    let space = fun.space();
    let mut sq = 0.0;
    for k in 0..space.mesh().n_elements() {
        let (lo, hi) = space.mesh().element_interval(k)?;
        sq += quad.integrate(lo, hi, |x| {
            let v = fun.eval(x).unwrap();
            let d = fun.eval_deriv(x).unwrap();
            v * v + d * d
        });
    }
    Ok(sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1_cfg(p: f64, n: usize, degree: usize) -> ProblemConfig {
        ProblemConfig {
            p,
            source: Box::new(|_| 1.0),
            domain: (0.0, 1.0),
            n_elements: n,
            degree,
            quad_points: None,
        }
    }

    #[test]
    fn conjugate_exponents() {
        assert!((conjugate_exponent(1.5).unwrap() - 3.0).abs() < 1e-15);
        assert!((conjugate_exponent(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((conjugate_exponent(3.0).unwrap() - 1.5).abs() < 1e-15);
        assert!(conjugate_exponent(1.0).is_err());
        assert!(conjugate_exponent(0.5).is_err());
    }

    #[test]
    fn example1_nodal_value_of_v() {
        let sol = solve_mixed(&example1_cfg(1.5, 10, 1)).unwrap();
        assert!((sol.v_h.eval(0.5).unwrap() + 0.125).abs() < 1e-13);
        assert!(sol.residual_v <= 1e-12);
        assert!(sol.residual_u <= 1e-12);
    }

    #[test]
    fn example1_u_at_half() {
        let sol = solve_mixed(&example1_cfg(1.5, 10, 1)).unwrap();
        let exact = 0.34375 / 240.0;
        let got = sol.u_h.eval(0.5).unwrap();
        // O(h^2) accuracy at h = 0.1
        assert!((got - exact).abs() < 5e-4, "{got} vs {exact}");
    }

    #[test]
    fn zero_source_gives_zero_solution() {
        let cfg = ProblemConfig {
            p: 2.7,
            source: Box::new(|_| 0.0),
            domain: (0.0, 1.0),
            n_elements: 13,
            degree: 2,
            quad_points: None,
        };
        let sol = solve_mixed(&cfg).unwrap();
        assert!(sol.v_h.coeffs().iter().all(|&c| c == 0.0));
        assert!(sol.u_h.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn rejects_invalid_config() {
        assert!(solve_mixed(&example1_cfg(1.0, 10, 1)).is_err());
        assert!(solve_mixed(&example1_cfg(1.5, 0, 1)).is_err());
        assert!(solve_mixed(&example1_cfg(1.5, 10, 0)).is_err());
    }

    #[test]
    fn scaling_law() {
        let base = solve_mixed(&example1_cfg(1.5, 20, 1)).unwrap();
        let alpha = 2.0f64;
        let q = 3.0;
        let cfg = ProblemConfig {
            p: 1.5,
            source: Box::new(move |_| alpha),
            domain: (0.0, 1.0),
            n_elements: 20,
            degree: 1,
            quad_points: None,
        };
        let scaled = solve_mixed(&cfg).unwrap();
        for (a, b) in base.v_h.coeffs().iter().zip(scaled.v_h.coeffs()) {
            assert!((alpha * a - b).abs() <= 1e-13 * b.abs().max(1e-300));
        }
        let fu = alpha.powf(q - 1.0);
        for (a, b) in base.u_h.coeffs().iter().zip(scaled.u_h.coeffs()) {
            assert!((fu * a - b).abs() <= 1e-10 * b.abs().max(1e-300));
        }
    }

    #[test]
    fn decoupling_first_solve_ignores_p() {
        let s1 = solve_mixed(&example1_cfg(1.5, 15, 2)).unwrap();
        let s2 = solve_mixed(&example1_cfg(7.3, 15, 2)).unwrap();
        assert_eq!(s1.v_h.coeffs(), s2.v_h.coeffs());
    }

    #[test]
    fn deterministic_repeat_is_bit_identical() {
        let a = solve_mixed(&example1_cfg(1.5, 50, 2)).unwrap();
        let b = solve_mixed(&example1_cfg(1.5, 50, 2)).unwrap();
        assert_eq!(a.u_h.coeffs(), b.u_h.coeffs());
        assert_eq!(a.v_h.coeffs(), b.v_h.coeffs());
    }

    #[test]
    fn stability_bounded_under_refinement() {
        // limit ratio is ||v||_H1 of x(x-1)/2, = sqrt(1/120 + 1/12)
        let limit = (1.0 / 120.0 + 1.0 / 12.0f64).sqrt();
        for n in [10usize, 100, 1000] {
            let cfg = example1_cfg(1.5, n, 1);
            let sol = solve_mixed(&cfg).unwrap();
            let rep = stability_check(&sol, &cfg).unwrap();
            assert!(
                (rep.ratio_v - limit).abs() < 0.05 * limit,
                "n = {n}: {} vs {limit}",
                rep.ratio_v
            );
        }
    }

    #[test]
    fn stability_zero_source() {
        let cfg = ProblemConfig {
            p: 1.5,
            source: Box::new(|_| 0.0),
            domain: (0.0, 1.0),
            n_elements: 10,
            degree: 1,
            quad_points: None,
        };
        let sol = solve_mixed(&cfg).unwrap();
        let rep = stability_check(&sol, &cfg).unwrap();
        assert_eq!(rep.v_h1, 0.0);
        assert_eq!(rep.u_h1, 0.0);
        assert_eq!(rep.f_l2, 0.0);
    }

    #[test]
    fn doubling_f_doubles_v_norm() {
        let cfg1 = example1_cfg(1.5, 30, 1);
        let cfg2 = ProblemConfig {
            p: 1.5,
            source: Box::new(|_| 2.0),
            domain: (0.0, 1.0),
            n_elements: 30,
            degree: 1,
            quad_points: None,
        };
        let r1 = stability_check(&solve_mixed(&cfg1).unwrap(), &cfg1).unwrap();
        let r2 = stability_check(&solve_mixed(&cfg2).unwrap(), &cfg2).unwrap();
        assert!((2.0 * r1.v_h1 - r2.v_h1).abs() < 1e-12 * r2.v_h1);
    }
}
