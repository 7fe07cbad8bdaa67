//! Combinatorial Laplacians and Laplacian polytopes.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{det, hermite_rows, ExactMatrix};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;

/// `L_i = ∂_{i+1} ∂_{i+1}^T + ∂_i^T ∂_i`, rows and columns indexed by the `i`-faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianMatrix {
    pub degree: usize,
    entries: Vec<Vec<i64>>,
}

impl LaplacianMatrix {
    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.entries.iter().map(|r| r[j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.size()).map(|j| self.column(j)).collect()
    }

    pub fn to_exact(&self) -> ExactMatrix {
        ExactMatrix::from_i64_rows(&self.entries, self.size())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

fn add_gram(out: &mut [Vec<i64>], b: &[Vec<i64>], transpose: bool) {
    // out += B B^T (transpose = false) or B^T B (transpose = true), skipping zeros.
    let lines: Vec<Vec<(usize, i64)>> = if transpose {
        b.iter()
            .map(|row| row.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j, x)).collect())
            .collect()
    } else {
        let cols = b.first().map_or(0, Vec::len);
        (0..cols)
            .map(|c| b.iter().enumerate().filter(|(_, r)| r[c] != 0).map(|(i, r)| (i, r[c])).collect())
            .collect()
    };
    for line in &lines {
        for &(p, x) in line {
            for &(q, y) in line {
                out[p][q] += x * y;
            }
        }
    }
}

/// Sign of `tau = sigma \ {sigma_k}` in `∂ sigma`.
fn incidence(sigma: &[usize], tau: &[usize]) -> i64 {
    let k = (0..sigma.len()).find(|&k| k == tau.len() || sigma[k] != tau[k]).unwrap();
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The entry predicted by the upper-degree / common-lower-simplex rule.
fn combinatorial_entry(c: &SimplicialComplex, i: usize, f: &Face, g: &Face, upper_degree: i64) -> i64 {
    if f == g {
        return if i > 0 { upper_degree + i as i64 + 1 } else { upper_degree };
    }
    let mut union: Face = f.iter().chain(g).copied().collect();
    union.sort_unstable();
    union.dedup();
    if i == 0 {
        return if c.face_index(&union).is_some() { -1 } else { 0 };
    }
    let common: Face = f.iter().filter(|v| g.contains(v)).copied().collect();
    if common.len() != i || c.face_index(&union).is_some() {
        return 0;
    }
    incidence(f, &common) * incidence(g, &common)
}

/// `L_i(c)`, checked entry by entry against the combinatorial description.
pub fn laplacian_matrix(c: &SimplicialComplex, i: usize) -> Result<LaplacianMatrix> {
    if i > c.dim() {
        return Err(Error::OutOfRange {
            what: "Laplacian degree",
            value: i as i64,
            lo: 0,
            hi: c.dim() as i64,
        });
    }
    let n = c.faces(i).len();
    let mut entries = vec![vec![0i64; n]; n];
    add_gram(&mut entries, &c.boundary_rows(i + 1)?, false);
    add_gram(&mut entries, &c.boundary_rows(i)?, true);

    let mut upper = vec![0i64; n];
    for tau in c.faces(i + 1) {
        for k in 0..tau.len() {
            let mut f = tau.clone();
            f.remove(k);
            upper[c.face_index(&f).expect("closed under inclusion")] += 1;
        }
    }
    let faces = c.faces(i);
    for (p, f) in faces.iter().enumerate() {
        for (q, g) in faces.iter().enumerate() {
            let want = combinatorial_entry(c, i, f, g, upper[p]);
            if entries[p][q] != want {
                return Err(Error::Verification(format!(
                    "L_{i} entry ({:?}, {:?}) is {} but the face rule gives {want}",
                    c.labels_of(f),
                    c.labels_of(g),
                    entries[p][q]
                )));
            }
        }
    }
    Ok(LaplacianMatrix { degree: i, entries })
}

/// Closed form of `L_d(∂(σ_{d+1}))`: zero for `d = 0`, otherwise `d + 1` on the
/// diagonal and `(-1)^(i+j-1)` off it.
///
/// Rows follow `F_i = [d+2] \ {d+3-i}`, which is also the lexicographic face order.
pub fn laplacian_boundary_simplex(d: usize) -> LaplacianMatrix {
    let n = d + 2;
    let entries = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| match (d, i == j) {
                    (0, _) => 0,
                    (_, true) => d as i64 + 1,
                    _ if (i + j) % 2 == 0 => -1,
                    _ => 1,
                })
                .collect()
        })
        .collect();
    LaplacianMatrix { degree: d, entries }
}

/// `conv` of the columns of `L_k`, with column `l` remembered as face `F_l`.
#[derive(Clone, Debug)]
pub struct LaplacianPolytope {
    pub polytope: LatticePolytope,
    /// Labels of the `k`-face behind each generator.
    pub faces: Vec<Vec<i64>>,
}

pub fn laplacian_polytope(c: &SimplicialComplex, k: usize) -> Result<LaplacianPolytope> {
    let l = laplacian_matrix(c, k)?;
    Ok(LaplacianPolytope {
        polytope: LatticePolytope::new(l.columns())?,
        faces: c.faces(k).iter().map(|f| c.labels_of(f)).collect(),
    })
}

/// Unimodular change of coordinates `matrix * (x - translation) = fixed ++ y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
    /// Coordinates that are constant on the whole polytope.
    pub fixed: Vec<i64>,
}

impl Certificate {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).zip(&self.translation).map(|((a, x), t)| a * (x - t)).sum())
            .collect()
    }

    /// Checks unimodularity and that `original[i]` maps to `fixed ++ reduced[i]`.
    pub fn verify(&self, original: &[Vec<i64>], reduced: &[Vec<i64>]) -> Result<()> {
        if det(&self.matrix).abs() != BigInt::from(1) {
            return Err(Error::Verification("reduction matrix is not unimodular".into()));
        }
        for (x, y) in original.iter().zip(reduced) {
            let img = self.apply(x);
            let k = self.fixed.len();
            if img[..k] != self.fixed[..] || img[k..] != y[..] {
                return Err(Error::Verification(format!("{x:?} maps to {img:?}, expected {:?} ++ {y:?}", self.fixed)));
            }
        }
        Ok(())
    }
}

/// A full-dimensional lattice-equivalent copy of a polytope.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub polytope: LatticePolytope,
    pub certificate: Option<Certificate>,
}

/// `P̃`: delete row 1 (odd `d`) or rows 1 and 2 (even `d`) of `L_d(∂(σ_{d+1}))`.
///
/// For `d = 0` the polytope is the single point `L_0 = 0` and no certificate is produced.
pub fn reduce_full_dim(d: usize) -> Result<Reduction> {
    let cols = laplacian_boundary_simplex(d).columns();
    if d == 0 {
        return Ok(Reduction {
            polytope: LatticePolytope::new(cols)?,
            certificate: None,
        });
    }
    let n = d + 2;
    let drop = if d % 2 == 1 { 1 } else { 2 };
    let reduced: Vec<Vec<i64>> = cols.iter().map(|c| c[drop..].to_vec()).collect();
    let odd: Vec<i64> = (1..=n).map(|k| i64::from(k % 2 == 1)).collect();
    let even: Vec<i64> = (1..=n).map(|k| i64::from(k % 2 == 0)).collect();
    let unit = |k: usize| -> Vec<i64> { (0..n).map(|j| i64::from(j == k)).collect() };
    let (mut matrix, fixed) = if d % 2 == 1 {
        (vec![odd.iter().zip(&even).map(|(a, b)| a - b).collect()], vec![0])
    } else {
        let h = (d as i64 + 2) / 2;
        (vec![odd, even], vec![h, h])
    };
    matrix.extend((drop..n).map(unit));
    let cert = Certificate {
        matrix,
        translation: vec![0; n],
        fixed,
    };
    cert.verify(&cols, &reduced)?;
    Ok(Reduction {
        polytope: LatticePolytope::new(reduced)?,
        certificate: Some(cert),
    })
}

/// Full-dimensional copy of an arbitrary lattice point configuration.
///
/// Row operations bring the difference vectors `p - p_0` to echelon form;
/// the transform's trailing rows cut out the affine hull and its leading
/// rows give lattice coordinates on it.
pub fn reduce_general(points: &[Vec<i64>]) -> Result<Reduction> {
    let base = points.first().ok_or_else(|| crate::error::invalid("no points"))?.clone();
    let n = base.len();
    let diffs: Vec<Vec<BigInt>> = (0..n)
        .map(|r| points.iter().map(|p| BigInt::from(p[r] - base[r])).collect())
        .collect();
    let e = hermite_rows(&diffs, points.len());
    let to_i64 = |row: &Vec<BigInt>| -> Result<Vec<i64>> {
        row.iter().map(|x| x.to_i64().ok_or(Error::Overflow("lattice basis"))).collect()
    };
    let mut matrix: Vec<Vec<i64>> = e.u[e.rank..].iter().map(to_i64).collect::<Result<_>>()?;
    let head: Vec<Vec<i64>> = e.u[..e.rank].iter().map(to_i64).collect::<Result<_>>()?;
    matrix.extend(head);
    let cert = Certificate {
        matrix,
        translation: base,
        fixed: vec![0; n - e.rank],
    };
    let reduced: Vec<Vec<i64>> = points.iter().map(|p| cert.apply(p)[n - e.rank..].to_vec()).collect();
    cert.verify(points, &reduced)?;
    Ok(Reduction {
        polytope: LatticePolytope::new(reduced)?,
        certificate: Some(cert),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4(order: &[i64]) -> SimplicialComplex {
        SimplicialComplex::from_facets(&[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]], order).unwrap()
    }

    #[test]
    fn four_cycle_edge_laplacian() {
        let l = laplacian_matrix(&cycle4(&[1, 2, 3, 4]), 1).unwrap();
        // edges in lexicographic order: 12, 14, 23, 34
        let want = vec![vec![2, 1, -1, 0], vec![1, 2, 0, 1], vec![-1, 0, 2, -1], vec![0, 1, -1, 2]];
        assert_eq!(l.entries(), want.as_slice());
        assert!(l.is_symmetric());
    }

    #[test]
    fn graph_laplacian_at_degree_zero() {
        let l = laplacian_matrix(&cycle4(&[1, 2, 3, 4]), 0).unwrap();
        let want = vec![vec![2, -1, 0, -1], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![-1, 0, -1, 2]];
        assert_eq!(l.entries(), want.as_slice());
    }

    #[test]
    fn closed_form_matches_definition() {
        for d in 0..7 {
            let c = SimplicialComplex::boundary_of_simplex(d + 1);
            assert_eq!(laplacian_matrix(&c, d).unwrap(), laplacian_boundary_simplex(d), "d={d}");
        }
        let l1 = laplacian_boundary_simplex(1);
        assert_eq!(l1.entries(), &[vec![2, 1, -1], vec![1, 2, 1], vec![-1, 1, 2]]);
    }

    #[test]
    fn example_square() {
        let r = reduce_full_dim(2).unwrap();
        let mut pts = r.polytope.points().to_vec();
        pts.sort();
        assert_eq!(pts, vec![vec![-1, 1], vec![1, -1], vec![1, 3], vec![3, 1]]);
        let t = reduce_full_dim(1).unwrap();
        assert_eq!(t.polytope.normalized_volume().unwrap(), BigInt::from(3));
        assert!(reduce_full_dim(0).unwrap().certificate.is_none());
    }

    #[test]
    fn general_reduction_of_the_boundary_polytope() {
        for d in 1..6 {
            let cols = laplacian_boundary_simplex(d).columns();
            let r = reduce_general(&cols).unwrap();
            let want = if d % 2 == 1 { d + 1 } else { d };
            assert_eq!(r.polytope.ambient_dim(), want);
            assert!(r.polytope.is_full_dimensional());
            let direct = reduce_full_dim(d).unwrap().polytope;
            assert_eq!(r.polytope.normalized_volume().unwrap(), direct.normalized_volume().unwrap());
        }
    }

    #[test]
    fn out_of_range_degree() {
        assert!(matches!(laplacian_matrix(&cycle4(&[1, 2, 3, 4]), 2), Err(Error::OutOfRange { .. })));
    }
}
