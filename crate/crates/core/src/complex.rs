//! Simplicial complexes on an explicitly ordered vertex set.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::arith::{binomial, ExactMatrix};
use crate::error::{invalid, Error, Result};

/// A face as strictly increasing vertex positions.
pub type Face = Vec<usize>;

/// `(f_{-1}, f_0, ..., f_{d-1})` for a complex of dimension `d - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<i64>);

/// `(h_0, ..., h_d)` for a complex of dimension `d - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVector(pub Vec<i64>);

impl FVector {
    pub fn to_h(&self) -> HVector {
        HVector(h_from_f(&self.0))
    }
}

impl HVector {
    pub fn to_f(&self) -> FVector {
        FVector(f_from_h(&self.0))
    }
}

fn narrow(v: num_bigint::BigInt) -> i64 {
    i64::try_from(v).expect("f/h entry exceeds i64")
}

/// `h_k = sum_{i<=k} (-1)^(k-i) C(d-i, k-i) f_{i-1}` where `d = f.len() - 1`.
pub fn h_from_f(f: &[i64]) -> Vec<i64> {
    let d = f.len() as i64 - 1;
    (0..=d)
        .map(|k| {
            let s = (0..=k).fold(num_bigint::BigInt::from(0), |acc, i| {
                let term = binomial(d - i, k - i) * f[i as usize];
                if (k - i) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            });
            narrow(s)
        })
        .collect()
}

/// Inverse of [`h_from_f`]: `f_{k-1} = sum_{i<=k} C(d-i, k-i) h_i`.
pub fn f_from_h(h: &[i64]) -> Vec<i64> {
    let d = h.len() as i64 - 1;
    (0..=d)
        .map(|k| {
            narrow((0..=k).fold(num_bigint::BigInt::from(0), |acc, i| {
                acc + binomial(d - i, k - i) * h[i as usize]
            }))
        })
        .collect()
}

/// A finite simplicial complex whose vertex order is part of its identity.
///
/// Faces of each dimension are stored sorted lexicographically by vertex
/// position, which fixes the row and column order of every matrix built
/// from the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<i64>,
    faces: Vec<Vec<Face>>,
}

impl SimplicialComplex {
    /// Inclusion closure of `facets`, with vertex positions taken from `ordering`.
    ///
    /// The vertex set is the set of labels that occur in some facet, listed
    /// in the order they appear in `ordering`.
    pub fn from_facets(facets: &[Vec<i64>], ordering: &[i64]) -> Result<Self> {
        if facets.is_empty() {
            return Err(invalid("a complex needs at least one facet"));
        }
        let mut rank: HashMap<i64, usize> = HashMap::new();
        for (p, &l) in ordering.iter().enumerate() {
            if rank.insert(l, p).is_some() {
                return Err(invalid(format!("duplicate label {l} in ordering")));
            }
        }
        let used: BTreeSet<usize> = facets
            .iter()
            .flatten()
            .map(|l| rank.get(l).copied().ok_or_else(|| invalid(format!("label {l} not in ordering"))))
            .collect::<Result<_>>()?;
        let vertices: Vec<i64> = used.iter().map(|&p| ordering[p]).collect();
        let pos: HashMap<i64, usize> = vertices.iter().enumerate().map(|(i, &l)| (l, i)).collect();

        let mut by_dim: Vec<BTreeSet<Face>> = Vec::new();
        for facet in facets {
            let mut f: Face = facet.iter().map(|l| pos[l]).collect();
            f.sort_unstable();
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("facet {facet:?} repeats a label")));
            }
            if f.is_empty() {
                return Err(invalid("empty facet"));
            }
            if f.len() > 24 {
                return Err(invalid(format!("facet with {} vertices is too large to close", f.len())));
            }
            if by_dim.len() < f.len() {
                by_dim.resize_with(f.len(), BTreeSet::new);
            }
            for mask in 1u32..(1 << f.len()) {
                let sub: Face = (0..f.len()).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect();
                by_dim[sub.len() - 1].insert(sub);
            }
        }
        Ok(SimplicialComplex {
            vertices,
            faces: by_dim.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// `∂(σ_{n})`: all proper nonempty subsets of `[n + 1]`, with labels `1..=n+1`.
    pub fn boundary_of_simplex(n: usize) -> Self {
        assert!(n >= 1, "boundary_of_simplex needs a simplex of dimension >= 1");
        let labels: Vec<i64> = (1..=n as i64 + 1).collect();
        let facets: Vec<Vec<i64>> = (0..labels.len())
            .map(|skip| labels.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &l)| l).collect())
            .collect();
        Self::from_facets(&facets, &labels).expect("boundary of a simplex is well formed")
    }

    /// The full simplex on labels `1..=m+1`.
    pub fn simplex(m: usize) -> Self {
        let labels: Vec<i64> = (1..=m as i64 + 1).collect();
        Self::from_facets(std::slice::from_ref(&labels), &labels).expect("a simplex is well formed")
    }

    pub fn vertices(&self) -> &[i64] {
        &self.vertices
    }

    /// Largest `i` with an `i`-face.
    pub fn dim(&self) -> usize {
        self.faces.len() - 1
    }

    /// The `i`-faces in lexicographic order; empty outside `0..=dim`.
    pub fn faces(&self, i: usize) -> &[Face] {
        self.faces.get(i).map_or(&[], Vec::as_slice)
    }

    /// Index of `face` among the faces of its dimension.
    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        let i = face.len().checked_sub(1)?;
        self.faces(i).binary_search_by(|f| f.as_slice().cmp(face)).ok()
    }

    pub fn labels_of(&self, face: &[usize]) -> Vec<i64> {
        face.iter().map(|&p| self.vertices[p]).collect()
    }

    /// Maximal faces, ordered by dimension then lexicographically.
    pub fn facets(&self) -> Vec<Face> {
        let mut out = Vec::new();
        for i in 0..self.faces.len() {
            let above: BTreeSet<&Face> = self.faces(i + 1).iter().collect();
            for f in self.faces(i) {
                let covered = above.iter().any(|g| f.iter().all(|v| g.contains(v)));
                if !covered {
                    out.push(f.clone());
                }
            }
        }
        out
    }

    pub fn is_pure(&self) -> bool {
        self.facets().iter().all(|f| f.len() == self.dim() + 1)
    }

    pub fn f_vector(&self) -> FVector {
        let mut f = vec![1i64];
        f.extend(self.faces.iter().map(|s| s.len() as i64));
        FVector(f)
    }

    pub fn f_and_h_vectors(&self) -> (FVector, HVector) {
        let f = self.f_vector();
        let h = f.to_h();
        (f, h)
    }

    /// `∂_i` as a dense integer matrix, rows `F_{i-1}`, columns `F_i`.
    ///
    /// `i = 0` gives the `0 x f_0` map to the zero chain group and
    /// `i = dim + 1` the `f_dim x 0` map from it.
    pub fn boundary_rows(&self, i: usize) -> Result<Vec<Vec<i64>>> {
        let hi = self.dim() + 1;
        if i > hi {
            return Err(Error::OutOfRange {
                what: "boundary index",
                value: i as i64,
                lo: 0,
                hi: hi as i64,
            });
        }
        if i == 0 {
            return Ok(Vec::new());
        }
        let rows = self.faces(i - 1);
        let cols = self.faces(i);
        let mut m = vec![vec![0i64; cols.len()]; rows.len()];
        for (c, sigma) in cols.iter().enumerate() {
            for k in 0..sigma.len() {
                let mut tau = sigma.clone();
                tau.remove(k);
                let r = self.face_index(&tau).expect("complex is closed under inclusion");
                m[r][c] = if k % 2 == 0 { 1 } else { -1 };
            }
        }
        Ok(m)
    }

    pub fn boundary_matrix(&self, i: usize) -> Result<ExactMatrix> {
        let rows = self.boundary_rows(i)?;
        let ncols = self.faces(i).len();
        Ok(ExactMatrix::from_i64_rows(&rows, ncols))
    }

    /// `dim_Q H_i = dim ker ∂_i - rank ∂_{i+1}`.
    pub fn homology_dimension(&self, i: usize) -> Result<usize> {
        if i > self.dim() {
            return Err(Error::OutOfRange {
                what: "homology degree",
                value: i as i64,
                lo: 0,
                hi: self.dim() as i64,
            });
        }
        let kernel = self.faces(i).len() - self.boundary_matrix(i)?.rank();
        Ok(kernel - self.boundary_matrix(i + 1)?.rank())
    }

    /// Parses the complex file format: `#` comments, an `order:` line, then one facet per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (n, first) = lines.next().ok_or_else(|| invalid("empty complex file"))?;
        let order = first
            .strip_prefix("order:")
            .ok_or_else(|| invalid(format!("line {n}: expected `order:` line")))?;
        let ordering = parse_labels(n, order)?;
        let facets: Vec<Vec<i64>> = lines.map(|(n, l)| parse_labels(n, l)).collect::<Result<_>>()?;
        Self::from_facets(&facets, &ordering)
    }
}

fn parse_labels(line: usize, s: &str) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| invalid(format!("line {line}: bad label {t:?}"))))
        .collect()
}
