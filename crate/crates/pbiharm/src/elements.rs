//! Reference-element Lagrange bases on `[0, 1]` and Gauss-Legendre
//! quadrature rules mapped to the unit interval.

use crate::error::{Error, Result};

/// Lagrange basis of the given polynomial degree with equispaced nodes
/// `0, 1/degree, ..., 1` on the reference interval `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceBasis {
    degree: usize,
    node_positions: Vec<f64>,
}

impl ReferenceBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis functions, `degree + 1`.
    pub fn count(&self) -> usize {
        self.degree + 1
    }

    pub fn node_positions(&self) -> &[f64] {
        &self.node_positions
    }
}

/// Builds the equispaced Lagrange basis of the given degree.
///
/// Degrees above 3 are accepted (equispaced nodes stay well conditioned far
/// beyond that), but a warning is printed since they are outside the tested
/// range.
pub fn make_basis(degree: usize) -> Result<ReferenceBasis> {
    if degree == 0 {
        return Err(Error::InvalidDegree("degree must be at least 1".into()));
    }
    if degree > 3 {
        eprintln!("warning: basis degree {degree} is outside the exercised range 1..=3");
    }
    let node_positions = (0..=degree).map(|i| i as f64 / degree as f64).collect();
    Ok(ReferenceBasis {
        degree,
        node_positions,
    })
}

/// Values of all basis functions at reference coordinate `t`.
pub fn eval_basis(basis: &ReferenceBasis, t: f64) -> Vec<f64> {
    let nodes = &basis.node_positions;
    (0..basis.count())
        .map(|i| {
            let mut prod = 1.0;
            for j in 0..basis.count() {
                if j != i {
                    prod *= (t - nodes[j]) / (nodes[i] - nodes[j]);
                }
            }
            prod
        })
        .collect()
}

/// Derivatives of all basis functions with respect to `t`.
pub fn eval_basis_deriv(basis: &ReferenceBasis, t: f64) -> Vec<f64> {
    let nodes = &basis.node_positions;
    let n = basis.count();
    (0..n)
        .map(|i| {
            let mut sum = 0.0;
            for k in 0..n {
                if k == i {
                    continue;
                }
                let mut prod = 1.0 / (nodes[i] - nodes[k]);
                for j in 0..n {
                    if j != i && j != k {
                        prod *= (t - nodes[j]) / (nodes[i] - nodes[j]);
                    }
                }
                sum += prod;
            }
            sum
        })
        .collect()
}

/// Gauss-Legendre rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Highest polynomial degree integrated exactly: `2m - 1`.
    pub fn exact_degree(&self) -> usize {
        2 * self.len() - 1
    }

    /// Integrates `f` over `[lo, hi]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let len = hi - lo;
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(lo + t * len))
            .sum::<f64>()
            * len
    }
}

// Nodes and weights on [-1, 1] for the small rules.
const GAUSS_TABLE: [(&[f64], &[f64]); 5] = [
    (&[0.0], &[2.0]),
    (&[-0.5773502691896257, 0.5773502691896257], &[1.0, 1.0]),
    (
        &[-0.7745966692414834, 0.0, 0.7745966692414834],
        &[0.5555555555555556, 0.8888888888888888, 0.5555555555555556],
    ),
    (
        &[
            -0.8611363115940526,
            -0.3399810435848563,
            0.3399810435848563,
            0.8611363115940526,
        ],
        &[
            0.3478548451374538,
            0.6521451548625461,
            0.6521451548625461,
            0.3478548451374538,
        ],
    ),
    (
        &[
            -0.9061798459386640,
            -0.5384693101056831,
            0.0,
            0.5384693101056831,
            0.9061798459386640,
        ],
        &[
            0.2369268850561891,
            0.4786286704993665,
            0.5688888888888889,
            0.4786286704993665,
            0.2369268850561891,
        ],
    ),
];

/// Legendre polynomial `P_m` and its derivative at `x`.
fn legendre_with_deriv(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let deriv = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, deriv)
}

/// `m`-point Gauss-Legendre rule on `[0, 1]`, exact for degree `2m - 1`.
///
/// Rules up to 5 points come from hardcoded tables; larger ones are found by
/// Newton iteration on the Legendre roots with residual below 1e-15.
pub fn gauss_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > 20 {
        return Err(Error::UnsupportedQuadrature(format!(
            "point count must be in 1..=20, got {m}"
        )));
    }
    let (nodes, weights): (Vec<f64>, Vec<f64>) = if m <= 5 {
        let (n, w) = GAUSS_TABLE[m - 1];
        (n.to_vec(), w.to_vec())
    } else {
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_deriv(m, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_deriv(m, x);
            nodes.push(-x); // cos ordering is descending; flip to ascending
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        nodes.reverse();
        weights.reverse();
        (nodes, weights)
    };
    // map [-1, 1] -> [0, 1]
    Ok(QuadratureRule {
        points: nodes.iter().map(|&x| 0.5 * (x + 1.0)).collect(),
        weights: weights.iter().map(|&w| 0.5 * w).collect(),
    })
}
