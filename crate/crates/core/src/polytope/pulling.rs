use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{affine_hull_of, LatticePolytope};
use crate::arith::det;
use crate::error::Result;

fn pull(face: &[usize], k: usize, facets: &[&[usize]], verts: &[Vec<i64>], out: &mut Vec<Vec<usize>>, apex: &mut Vec<usize>) {
    if face.len() == k + 1 {
        let mut cell: Vec<usize> = face.iter().chain(apex.iter()).copied().collect();
        cell.sort_unstable();
        out.push(cell);
        return;
    }
    let v = face[0];
    let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in facets {
        let h: Vec<usize> = face.iter().filter(|x| f.binary_search(x).is_ok()).copied().collect();
        if h.len() < k || h.contains(&v) {
            continue;
        }
        let pts: Vec<Vec<i64>> = h.iter().map(|&i| verts[i].clone()).collect();
        if affine_hull_of(&pts).dim + 1 == k {
            subfaces.insert(h);
        }
    }
    apex.push(v);
    for h in subfaces {
        pull(&h, k - 1, facets, verts, out, apex);
    }
    apex.pop();
}

/// Pulling triangulation using no new vertices, cells as indices into `p.vertices()`.
///
/// Each face is coned from its smallest vertex over the faces not containing it.
pub fn pulling_triangulation(p: &LatticePolytope) -> Result<Vec<Vec<usize>>> {
    let facets = p.facets()?;
    let sets: Vec<&[usize]> = facets.iter().map(|f| f.vertices.as_slice()).collect();
    let all: Vec<usize> = (0..p.vertices().len()).collect();
    let mut out = Vec::new();
    pull(&all, p.dim(), &sets, p.vertices(), &mut out, &mut Vec::new());
    out.sort();
    Ok(out)
}

pub(crate) fn simplex_volume(verts: &[Vec<i64>], cell: &[usize]) -> BigInt {
    let base = &verts[cell[0]];
    let rows: Vec<Vec<i64>> = cell[1..]
        .iter()
        .map(|&i| verts[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    det(&rows).abs()
}

impl LatticePolytope {
    /// `dim! * volume` for a full-dimensional polytope.
    pub fn normalized_volume(&self) -> Result<BigInt> {
        let cells = pulling_triangulation(self)?;
        Ok(cells.iter().fold(BigInt::zero(), |acc, c| acc + simplex_volume(self.vertices(), c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cube_volume() {
        let mut pts = Vec::new();
        for m in 0..8i64 {
            pts.push(vec![m & 1, m >> 1 & 1, m >> 2 & 1]);
        }
        let p = LatticePolytope::new(pts).unwrap();
        assert_eq!(pulling_triangulation(&p).unwrap().len(), 6);
        assert_eq!(p.normalized_volume().unwrap(), BigInt::from(6));
    }

    #[test]
    fn square_and_simplex() {
        let sq = LatticePolytope::new(vec![vec![1, -1], vec![-1, 1], vec![3, 1], vec![1, 3]]).unwrap();
        assert_eq!(sq.normalized_volume().unwrap(), BigInt::from(16));
        let t = LatticePolytope::new(vec![vec![0, 0], vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(pulling_triangulation(&t).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(t.normalized_volume().unwrap(), BigInt::from(6));
    }
}
