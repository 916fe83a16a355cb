use crate::error::{Error, Result};

/// Partition of an interval `[a, b]` into elements.
///
/// Node coordinates are stored explicitly so graded meshes work through the
/// same type, even though the solver is normally driven with uniform ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    a: f64,
    b: f64,
    node_coords: Vec<f64>,
}

impl Mesh1D {
    /// Builds a uniform mesh of `n` equal elements on `[a, b]`.
    pub fn build_uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidMesh(format!(
                "endpoints must satisfy a < b, got a = {a}, b = {b}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidMesh("n_elements must be at least 1".into()));
        }
        let h = (b - a) / n as f64;
        let mut node_coords: Vec<f64> = (0..=n).map(|k| a + k as f64 * h).collect();
        // pin the endpoints so invariants hold bit-exactly
        node_coords[0] = a;
        node_coords[n] = b;
        Ok(Mesh1D { a, b, node_coords })
    }

    /// Builds a mesh from explicit node coordinates.
    pub fn from_nodes(node_coords: Vec<f64>) -> Result<Self> {
        if node_coords.len() < 2 {
            return Err(Error::InvalidMesh("need at least 2 nodes".into()));
        }
        if !node_coords.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidMesh(
                "node coordinates must be strictly increasing".into(),
            ));
        }
        let a = node_coords[0];
        let b = *node_coords.last().unwrap();
        Ok(Mesh1D { a, b, node_coords })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn node_coords(&self) -> &[f64] {
        &self.node_coords
    }

    pub fn n_elements(&self) -> usize {
        self.node_coords.len() - 1
    }

    /// Largest element length.
    pub fn h_max(&self) -> f64 {
        self.node_coords
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Endpoints of element `k`.
    pub fn element_interval(&self, k: usize) -> Result<(f64, f64)> {
        if k >= self.n_elements() {
            return Err(Error::ElementOutOfRange {
                index: k,
                n_elements: self.n_elements(),
            });
        }
        Ok((self.node_coords[k], self.node_coords[k + 1]))
    }

    /// Index of the element containing `x`, by binary search.
    pub fn find_element(&self, x: f64) -> Result<usize> {
        if x < self.a || x > self.b {
            return Err(Error::OutsideDomain {
                x,
                a: self.a,
                b: self.b,
            });
        }
        // partition_point returns the first node > x; the element to its left
        let idx = self.node_coords.partition_point(|&c| c <= x);
        Ok(idx.saturating_sub(1).min(self.n_elements() - 1))
    }
}
