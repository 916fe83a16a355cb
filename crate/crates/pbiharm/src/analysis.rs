//! Error norms, experimental orders of convergence, and the
//! convergence-study harness.

use crate::elements::gauss_rule;
use crate::error::{Error, Result};
use crate::manufactured::ExactPair;
use crate::solver::solve_mixed_with;
use crate::space::FemFunction;

/// Errors measured on one mesh.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub n_elements: usize,
    pub h: f64,
    pub err_u_l2: f64,
    pub err_v_l2: f64,
    pub err_u_h1: f64,
    pub err_v_h1: f64,
}

/// One row of a convergence table: errors plus the pairwise orders
/// against the previous row. `None` marks the first row and exact
/// reproductions (error at the solver precision floor).
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub report: ErrorReport,
    pub eoc_u_l2: Option<f64>,
    pub eoc_v_l2: Option<f64>,
    pub eoc_u_h1: Option<f64>,
    pub eoc_v_h1: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

/// `L^2` norm of `exact - fn_h`, by Gauss quadrature per element.
pub fn l2_error<F: Fn(f64) -> f64>(
    fn_h: &FemFunction,
    exact: F,
    quad_points: usize,
) -> Result<f64> {
    integrate_sq(fn_h, quad_points, |fun, x| exact(x) - fun.eval(x).unwrap())
}

/// `L^2` norm of `exact' - fn_h'` (the `H^1` seminorm of the error).
pub fn h1_semi_error<F: Fn(f64) -> f64>(
    fn_h: &FemFunction,
    exact_prime: F,
    quad_points: usize,
) -> Result<f64> {
    integrate_sq(fn_h, quad_points, |fun, x| {
        exact_prime(x) - fun.eval_deriv(x).unwrap()
    })
}

fn integrate_sq<G: Fn(&FemFunction, f64) -> f64>(
    fn_h: &FemFunction,
    quad_points: usize,
    diff: G,
) -> Result<f64> {
    let space = fn_h.space();
    if quad_points < space.degree() + 3 {
        return Err(Error::InvalidConfig(format!(
            "error quadrature needs at least degree+3 = {} points, got {quad_points}",
            space.degree() + 3
        )));
    }
    let quad = gauss_rule(quad_points)?;
    let mut sq = 0.0;
    for k in 0..space.mesh().n_elements() {
        let (lo, hi) = space.mesh().element_interval(k)?;
        sq += quad.integrate(lo, hi, |x| {
            let d = diff(fn_h, x);
            d * d
        });
    }
    Ok(sq.sqrt())
}

/// Pairwise experimental order of convergence.
///
/// Returns `None` when either error is non-positive (exact reproduction).
pub fn eoc(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> Option<f64> {
    if e_coarse <= 0.0 || e_fine <= 0.0 || !(h_fine < h_coarse) {
        return None;
    }
    Some((e_coarse / e_fine).ln() / (h_coarse / h_fine).ln())
}

/// Runs one mixed solve per mesh in `n_list` against the exact pair and
/// tabulates errors and pairwise orders.
///
/// Error quadrature uses twice the solver's per-element Gauss points so
/// measurement noise sits well below discretization error.
pub fn run_convergence(
    pair: &ExactPair,
    degree: usize,
    n_list: &[usize],
    quad_points: Option<usize>,
) -> Result<ConvergenceTable> {
    if n_list.len() < 2 {
        return Err(Error::InvalidConfig(
            "convergence study needs at least 2 mesh sizes".into(),
        ));
    }
    if !n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidConfig("n_list must be increasing".into()));
    }
    let solver_qp = quad_points.unwrap_or((degree + 1).max(8));
    // 2x the solver's rule so measurement noise stays below the
    // discretization error being measured
    let error_qp = (2 * solver_qp).min(20).max(degree + 3);

    let mut table = ConvergenceTable::default();
    for &n in n_list {
        let sol = solve_mixed_with(pair.p, &pair.f, (0.0, 1.0), n, degree, solver_qp)?;
        let report = ErrorReport {
            n_elements: n,
            h: 1.0 / n as f64,
            err_u_l2: l2_error(&sol.u_h, &pair.u, error_qp)?,
            err_v_l2: l2_error(&sol.v_h, &pair.v, error_qp)?,
            err_u_h1: h1_semi_error(&sol.u_h, &pair.u_prime, error_qp)?,
            err_v_h1: h1_semi_error(&sol.v_h, &pair.v_prime, error_qp)?,
        };
        let row = match table.rows.last() {
            None => ConvergenceRow {
                report,
                eoc_u_l2: None,
                eoc_v_l2: None,
                eoc_u_h1: None,
                eoc_v_h1: None,
            },
            Some(prev) => {
                let pr = &prev.report;
                ConvergenceRow {
                    eoc_u_l2: eoc(pr.err_u_l2, report.err_u_l2, pr.h, report.h),
                    eoc_v_l2: eoc(pr.err_v_l2, report.err_v_l2, pr.h, report.h),
                    eoc_u_h1: eoc(pr.err_u_h1, report.err_u_h1, pr.h, report.h),
                    eoc_v_h1: eoc(pr.err_v_h1, report.err_v_h1, pr.h, report.h),
                    report,
                }
            }
        };
        table.rows.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manufactured::{example1, example2};
    use crate::mesh::Mesh1D;
    use crate::space::{build_space, interpolate, FemFunction};
    use std::sync::Arc;

    fn space(n: usize, degree: usize) -> Arc<crate::space::FemSpace> {
        Arc::new(build_space(Mesh1D::build_uniform(0.0, 1.0, n).unwrap(), degree).unwrap())
    }

    #[test]
    fn l2_error_of_reproduced_function_is_zero() {
        let s = space(10, 2);
        let g = |x: f64| x * (1.0 - x);
        let f = interpolate(s, g);
        assert!(l2_error(&f, g, 8).unwrap() < 1e-14);
        assert!(h1_semi_error(&f, |x| 1.0 - 2.0 * x, 8).unwrap() < 1e-13);
    }

    #[test]
    fn l2_norm_of_example1_v() {
        // ||x(x-1)/2||_L2 = sqrt(1/120)
        let f = FemFunction::zero(space(10, 1));
        let err = l2_error(&f, |x| x * (x - 1.0) / 2.0, 10).unwrap();
        assert!((err - (1.0 / 120.0f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn h1_norm_of_example1_v() {
        // ||(2x-1)/2||_L2 = sqrt(1/12)
        let f = FemFunction::zero(space(10, 1));
        let err = h1_semi_error(&f, |x| (2.0 * x - 1.0) / 2.0, 10).unwrap();
        assert!((err - (1.0 / 12.0f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quadrature_saturation() {
        let f = FemFunction::zero(space(10, 1));
        let e1 = l2_error(&f, |x| (2.0 * x).sin(), 10).unwrap();
        let e2 = l2_error(&f, |x| (2.0 * x).sin(), 20).unwrap();
        assert!((e1 - e2).abs() < 1e-12);
    }

    #[test]
    fn error_quadrature_minimum_enforced() {
        let f = FemFunction::zero(space(4, 3));
        assert!(l2_error(&f, |_| 0.0, 5).is_err());
        assert!(l2_error(&f, |_| 0.0, 6).is_ok());
    }

    #[test]
    fn eoc_arithmetic() {
        assert!((eoc(0.01, 0.0001, 0.1, 0.01).unwrap() - 2.0).abs() < 1e-12);
        assert!((eoc(0.008, 0.001, 0.2, 0.1).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(eoc(0.01, 0.0, 0.1, 0.01), None);
        assert_eq!(eoc(0.0, 0.01, 0.1, 0.01), None);
        assert_eq!(eoc(0.01, 0.001, 0.01, 0.1), None);
    }

    #[test]
    fn example1_degree1_orders() {
        let pair = example1(1.5).unwrap();
        let table = run_convergence(&pair, 1, &[10, 100, 1000], None).unwrap();
        let last = table.rows.last().unwrap();
        let eoc_u = last.eoc_u_l2.unwrap();
        let eoc_v = last.eoc_v_l2.unwrap();
        assert!((1.8..=2.2).contains(&eoc_u), "eoc_u = {eoc_u}");
        assert!((1.8..=2.2).contains(&eoc_v), "eoc_v = {eoc_v}");
    }

    #[test]
    fn example1_degree2_v_exactly_reproduced() {
        let pair = example1(1.5).unwrap();
        let table = run_convergence(&pair, 2, &[10, 100], None).unwrap();
        for row in &table.rows {
            assert!(
                row.report.err_v_l2 <= 1e-10,
                "err_v = {}",
                row.report.err_v_l2
            );
        }
    }

    #[test]
    fn example2_degree1_orders() {
        let pair = example2(3.0).unwrap();
        let table = run_convergence(&pair, 1, &[10, 100, 1000], None).unwrap();
        let last = table.rows.last().unwrap();
        assert!((1.8..=2.2).contains(&last.eoc_u_l2.unwrap()));
        assert!((1.8..=2.2).contains(&last.eoc_v_l2.unwrap()));
    }

    #[test]
    fn rejects_short_or_unsorted_n_list() {
        let pair = example1(1.5).unwrap();
        assert!(run_convergence(&pair, 1, &[10], None).is_err());
        assert!(run_convergence(&pair, 1, &[100, 10], None).is_err());
    }
}
