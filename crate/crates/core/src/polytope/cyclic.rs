use itertools::Itertools;

use super::LatticePolytope;
use crate::error::{invalid, Error, Result};

/// Facets of `C(d, n)` by Gale's evenness condition, as sorted 0-based index sets.
pub fn gale_facets(d: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .combinations(d)
        .filter(|s| {
            let outside: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
            outside
                .windows(2)
                .all(|w| s.iter().filter(|&&k| w[0] < k && k < w[1]).count() % 2 == 0)
        })
        .collect()
}

/// Convex hull of `(t, t^2, ..., t^d)` for `t = 1..=n`.
///
/// The computed facets are checked against Gale's evenness condition.
pub fn cyclic_polytope(d: usize, n: usize) -> Result<LatticePolytope> {
    if d < 1 || n < d + 1 {
        return Err(invalid(format!("cyclic polytope needs n >= d + 1 >= 2, got d={d}, n={n}")));
    }
    let points = (1..=n as i64)
        .map(|t| {
            (1..=d as u32)
                .map(|e| t.checked_pow(e).ok_or(Error::Overflow("moment curve")))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let p = LatticePolytope::new(points)?;
    let mut got: Vec<Vec<usize>> = p.facets()?.iter().map(|f| f.vertices.clone()).collect();
    got.sort();
    if got != gale_facets(d, n) {
        return Err(Error::Verification(format!("C({d},{n}) facets violate Gale evenness")));
    }
    Ok(p)
}

fn masks(p: &LatticePolytope) -> Result<Vec<u64>> {
    if p.vertices().len() > 64 {
        return Err(invalid("combinatorial equivalence supports at most 64 vertices"));
    }
    Ok(p.facets()?.iter().map(|f| f.vertices.iter().fold(0u64, |m, &v| m | 1 << v)).collect())
}

fn signature(facets: &[u64], v: usize) -> (usize, Vec<u32>) {
    let mut sizes: Vec<u32> = facets.iter().filter(|&&f| f >> v & 1 == 1).map(|f| f.count_ones()).collect();
    sizes.sort_unstable();
    (sizes.len(), sizes)
}

struct Search<'a> {
    fp: &'a [u64],
    fq: &'a [u64],
    order: Vec<usize>,
    sig_p: Vec<(usize, Vec<u32>)>,
    sig_q: Vec<(usize, Vec<u32>)>,
    map: Vec<Option<usize>>,
    used: u64,
}

impl Search<'_> {
    fn consistent(&self) -> bool {
        let assigned: u64 = (0..self.map.len()).filter(|&v| self.map[v].is_some()).fold(0, |m, v| m | 1 << v);
        self.fp.iter().all(|&f| {
            let image = (0..64)
                .filter(|&v| (f & assigned) >> v & 1 == 1)
                .fold(0u64, |m, v| m | 1 << self.map[v].unwrap());
            self.fq.iter().any(|&g| {
                g.count_ones() == f.count_ones() && g & image == image && g & self.used == image
            })
        })
    }

    fn go(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let v = self.order[k];
        for w in 0..self.sig_q.len() {
            if self.used >> w & 1 == 1 || self.sig_q[w] != self.sig_p[v] {
                continue;
            }
            self.map[v] = Some(w);
            self.used |= 1 << w;
            if self.consistent() && self.go(k + 1) {
                return true;
            }
            self.map[v] = None;
            self.used &= !(1 << w);
        }
        false
    }
}

/// A vertex bijection carrying the facets of `p` onto those of `q`, if one exists.
///
/// `witness[i]` is the index in `q.vertices()` of the image of `p.vertices()[i]`.
pub fn combinatorially_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> Result<Option<Vec<usize>>> {
    let (fp, fq) = (masks(p)?, masks(q)?);
    let nv = p.vertices().len();
    if nv != q.vertices().len() || fp.len() != fq.len() || p.dim() != q.dim() {
        return Ok(None);
    }
    let sig_p: Vec<_> = (0..nv).map(|v| signature(&fp, v)).collect();
    let sig_q: Vec<_> = (0..nv).map(|v| signature(&fq, v)).collect();
    let (mut a, mut b) = (sig_p.clone(), sig_q.clone());
    a.sort();
    b.sort();
    if a != b {
        return Ok(None);
    }
    // Most constrained vertices first.
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(sig_p[v].0));
    let mut s = Search {
        fp: &fp,
        fq: &fq,
        order,
        sig_p,
        sig_q,
        map: vec![None; nv],
        used: 0,
    };
    Ok(s.go(0).then(|| s.map.iter().map(|m| m.unwrap()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclic_polytopes() {
        assert_eq!(cyclic_polytope(2, 4).unwrap().facets().unwrap().len(), 4);
        assert_eq!(cyclic_polytope(4, 6).unwrap().facets().unwrap().len(), 9);
        assert_eq!(gale_facets(4, 6).len(), 9);
        assert!(cyclic_polytope(3, 3).is_err());
    }

    #[test]
    fn triangle_is_not_a_square() {
        let tri = LatticePolytope::new(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let sq = LatticePolytope::new(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(combinatorially_equivalent(&tri, &sq).unwrap(), None);
        let w = combinatorially_equivalent(&sq, &cyclic_polytope(2, 4).unwrap()).unwrap().unwrap();
        let mut sorted = w.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_different_types() {
        // Two simplicial 3-polytopes with 5 vertices: bipyramid vs. C(3,5) are equivalent,
        // but the bipyramid is not equivalent to the square pyramid (non-simplicial).
        let bip = LatticePolytope::new(vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![-1, -1, 0],
            vec![0, 0, 1],
            vec![0, 0, -1],
        ])
        .unwrap();
        let pyr = LatticePolytope::new(vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]])
            .unwrap();
        assert!(combinatorially_equivalent(&bip, &cyclic_polytope(3, 5).unwrap()).unwrap().is_some());
        assert!(combinatorially_equivalent(&bip, &pyr).unwrap().is_none());
    }
}
