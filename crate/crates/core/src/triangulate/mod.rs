//! Lattice triangulations: edgewise subdivisions, joins, cones, and the
//! regular unimodular triangulation of the reduced Laplacian polytope.

mod boundary;
mod census;
mod esd;
mod regular;
mod shelling;
mod verify;

use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::polytope::LatticePolytope;

pub use boundary::{facet_join_partition, interior_boundary_pieces, interior_triangulation, laplacian_triangulation, BoundaryPieces};
pub use census::{f_vector_of, h_vector_of};
pub use esd::edgewise_subdivision;
pub use regular::{is_regular, is_regular_lp, LP_CELL_LIMIT, nonregular_fixture, Regularity, RegularityMethod};
pub use shelling::verify_shelling;
pub use verify::{verify_triangulation, Disjointness, VerifyReport, EXHAUSTIVE_PAIR_LIMIT};

/// Maximal simplices over a shared pool of lattice points.
///
/// Cells are stored flat, each as increasing indices into the pool. An
/// optional lifting assigns a height to every pool point; when present it
/// is a candidate regularity witness.
#[derive(Clone, Debug)]
pub struct Triangulation {
    vertices: Vec<Vec<i64>>,
    cells: Vec<u32>,
    width: usize,
    lifting: Option<Vec<i128>>,
    carrier: Option<Vec<Vec<i64>>>,
}

impl Triangulation {
    pub fn new(vertices: Vec<Vec<i64>>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let width = cells.first().ok_or_else(|| invalid("triangulation without cells"))?.len();
        if width == 0 {
            return Err(invalid("empty cell"));
        }
        let ambient = vertices.first().map_or(0, Vec::len);
        if vertices.iter().any(|v| v.len() != ambient) {
            return Err(invalid("pool points of differing dimension"));
        }
        if vertices.len() > u32::MAX as usize {
            return Err(invalid("vertex pool too large"));
        }
        let mut flat = Vec::with_capacity(cells.len() * width);
        for c in &cells {
            if c.len() != width {
                return Err(invalid("cells of differing size"));
            }
            let mut c = c.clone();
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) || c.iter().any(|&i| i >= vertices.len()) {
                return Err(invalid(format!("bad cell {c:?}")));
            }
            flat.extend(c.iter().map(|&i| i as u32));
        }
        Ok(Self::from_flat(vertices, flat, width))
    }

    pub(crate) fn from_flat(vertices: Vec<Vec<i64>>, cells: Vec<u32>, width: usize) -> Self {
        Triangulation {
            vertices,
            cells,
            width,
            lifting: None,
            carrier: None,
        }
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len() / self.width
    }

    pub fn cell(&self, i: usize) -> &[u32] {
        &self.cells[i * self.width..(i + 1) * self.width]
    }

    pub fn cells(&self) -> impl Iterator<Item = &[u32]> {
        self.cells.chunks_exact(self.width)
    }

    /// Dimension of the cells.
    pub fn dim(&self) -> usize {
        self.width - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    pub fn lifting(&self) -> Option<&[i128]> {
        self.lifting.as_deref()
    }

    pub fn with_lifting(mut self, heights: Vec<i128>) -> Self {
        assert_eq!(heights.len(), self.vertices.len(), "one height per pool point");
        self.lifting = Some(heights);
        self
    }

    pub fn without_lifting(mut self) -> Self {
        self.lifting = None;
        self
    }

    /// Declares the polytope being triangulated; defaults to the hull of the pool.
    pub fn with_carrier(mut self, generators: Vec<Vec<i64>>) -> Self {
        self.carrier = Some(generators);
        self
    }

    pub fn carrier(&self) -> Result<LatticePolytope> {
        LatticePolytope::new(self.carrier.clone().unwrap_or_else(|| self.vertices.clone()))
    }

    pub fn translate(&self, by: &[i64]) -> Self {
        let shift = |p: &Vec<i64>| p.iter().zip(by).map(|(a, b)| a + b).collect::<Vec<i64>>();
        Triangulation {
            vertices: self.vertices.iter().map(shift).collect(),
            cells: self.cells.clone(),
            width: self.width,
            lifting: self.lifting.clone(),
            carrier: self.carrier.as_ref().map(|c| c.iter().map(shift).collect()),
        }
    }

    /// Export as `{"vertices": [...], "cells": [...], "checks": ...}`.
    pub fn to_json(&self, checks: Value) -> Value {
        let cells: Vec<&[u32]> = self.cells().collect();
        json!({
            "vertices": self.vertices,
            "cells": cells,
            "checks": checks,
        })
    }
}

/// Join `T1 * T2` on `P x {0} x {0}` and `{0} x P' x {1}`.
///
/// Cells are all unions of a cell of each factor; liftings are concatenated.
pub fn join(t1: &Triangulation, t2: &Triangulation) -> Triangulation {
    let (n1, n2) = (t1.ambient_dim(), t2.ambient_dim());
    let left = |p: &Vec<i64>| -> Vec<i64> {
        let mut v = p.clone();
        v.resize(n1 + n2 + 1, 0);
        v
    };
    let right = |p: &Vec<i64>| -> Vec<i64> {
        let mut v = vec![0; n1];
        v.extend(p);
        v.push(1);
        v
    };
    let mut vertices: Vec<Vec<i64>> = t1.vertices.iter().map(left).collect();
    vertices.extend(t2.vertices.iter().map(right));
    let off = t1.vertices.len() as u32;
    let width = t1.width + t2.width;
    let mut cells = Vec::with_capacity(t1.num_cells() * t2.num_cells() * width);
    for a in t1.cells() {
        for b in t2.cells() {
            cells.extend_from_slice(a);
            cells.extend(b.iter().map(|&i| i + off));
        }
    }
    let mut t = Triangulation::from_flat(vertices, cells, width);
    if let (Some(h1), Some(h2)) = (&t1.lifting, &t2.lifting) {
        t.lifting = Some(h1.iter().chain(h2).copied().collect());
    }
    let c1 = t1.carrier.clone().unwrap_or_else(|| t1.vertices.clone());
    let c2 = t2.carrier.clone().unwrap_or_else(|| t2.vertices.clone());
    t.carrier = Some(c1.iter().map(left).chain(c2.iter().map(right)).collect());
    t
}
