//! Closed-form data for the Laplacian polytope of the boundary of a simplex.
//!
//! Coordinates are those of the reduced polytope `P̃`: row `k` of `P̃` is row
//! `k + 2` (even `d`) or `k + 1` (odd `d`) of the Laplacian. Vertices are
//! labelled `1..=d+2` by the Laplacian column they come from.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::polytope::Halfspace;

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn require_even(d: usize) -> Result<()> {
    if d == 0 || d % 2 == 1 {
        return Err(invalid(format!("d = {d} must be even and positive")));
    }
    Ok(())
}

/// Vertices `b^(l)` of `P̃` for even `d`: `d + 1` at `k = l - 2`, else `(-1)^(k+l-1)`.
pub fn reduced_vertices(d: usize) -> Result<Vec<Vec<i64>>> {
    require_even(d)?;
    Ok((1..=d + 2)
        .map(|l| {
            (1..=d)
                .map(|k| if k + 2 == l { d as i64 + 1 } else { sign(k + l - 1) })
                .collect()
        })
        .collect())
}

/// Vertices `c^(l)` of the interior polytope `Q` for even `d`.
pub fn interior_vertices(d: usize) -> Result<Vec<Vec<i64>>> {
    require_even(d)?;
    Ok((1..=d + 2)
        .map(|l| {
            (1..=d)
                .map(|k| if k + 2 == l { (d as i64 + 2) / 2 } else { sign(k + l - 1).max(0) })
                .collect()
        })
        .collect())
}

/// The four facet families of `P̃` (and of `Q`) for even `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FacetFamily {
    /// `F`: `1 . x <= d + 2`.
    Sum,
    /// `E_i`, `i` even: `1_odd . x - x_i <= (d + 2) / 2`.
    Even(usize),
    /// `O_j`, `j` odd: `1_even . x - x_j <= (d + 2) / 2`.
    Odd(usize),
    /// `F_{k,m}`, `k < m`, `k + m` odd: `x_k + x_m >= 0`.
    Pair(usize, usize),
}

impl FacetFamily {
    /// The two vertex labels missing from the facet; the first is odd, the second even.
    pub fn excluded(&self) -> (usize, usize) {
        let (a, b) = match *self {
            FacetFamily::Sum => (1, 2),
            FacetFamily::Even(i) => (1, i + 2),
            FacetFamily::Odd(j) => (j + 2, 2),
            FacetFamily::Pair(k, m) => (k + 2, m + 2),
        };
        if a % 2 == 1 {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Inverse of [`FacetFamily::excluded`], taking the pair in either order.
    pub fn from_excluded(a: usize, b: usize) -> Result<Self> {
        let (odd, even) = if a % 2 == 1 { (a, b) } else { (b, a) };
        if odd % 2 == 0 || even % 2 == 1 || odd == 0 || even == 0 {
            return Err(invalid(format!("excluded pair ({a}, {b}) needs one odd and one even label")));
        }
        Ok(match (odd, even) {
            (1, 2) => FacetFamily::Sum,
            (1, e) => FacetFamily::Even(e - 2),
            (o, 2) => FacetFamily::Odd(o - 2),
            (o, e) => FacetFamily::Pair(o.min(e) - 2, o.max(e) - 2),
        })
    }

    /// Vertex labels of the facet, increasing.
    pub fn vertex_labels(&self, d: usize) -> Vec<usize> {
        let (a, b) = self.excluded();
        (1..=d + 2).filter(|&l| l != a && l != b).collect()
    }

    fn normal(&self, d: usize) -> Vec<i64> {
        (1..=d)
            .map(|k| match *self {
                FacetFamily::Sum => 1,
                FacetFamily::Even(i) => i64::from(k % 2 == 1) - i64::from(k == i),
                FacetFamily::Odd(j) => i64::from(k % 2 == 0) - i64::from(k == j),
                FacetFamily::Pair(a, b) => -i64::from(k == a || k == b),
            })
            .collect()
    }

    /// The facet inequality of `P̃`.
    pub fn reduced_halfspace(&self, d: usize) -> Halfspace {
        let h = d as i64 + 2;
        let offset = match self {
            FacetFamily::Sum => h,
            FacetFamily::Even(_) | FacetFamily::Odd(_) => h / 2,
            FacetFamily::Pair(..) => 0,
        };
        Halfspace::new(self.normal(d), offset)
    }

    /// The facet inequality of `Q`.
    pub fn interior_halfspace(&self, d: usize) -> Halfspace {
        let offset = match self {
            FacetFamily::Sum => d as i64 + 1,
            FacetFamily::Even(_) | FacetFamily::Odd(_) => d as i64 / 2,
            FacetFamily::Pair(..) => -1,
        };
        Halfspace::new(self.normal(d), offset)
    }
}

/// All facets for even `d`, in the shelling order
/// `F, E_2, ..., E_d, O_1, ..., O_{d-1}, F_{k,m}` (pairs lexicographic).
pub fn facet_families(d: usize) -> Result<Vec<FacetFamily>> {
    require_even(d)?;
    let mut out = vec![FacetFamily::Sum];
    out.extend((2..=d).step_by(2).map(FacetFamily::Even));
    out.extend((1..d).step_by(2).map(FacetFamily::Odd));
    for k in 1..=d {
        for m in k + 1..=d {
            if (k + m) % 2 == 1 {
                out.push(FacetFamily::Pair(k, m));
            }
        }
    }
    Ok(out)
}

/// Facets of the simplex `P̃` for odd `d`: `1 . x <= d + 2`,
/// `2 * 1_odd . x - x_i <= d + 2` for even `i`, `2 * 1_odd . x + x_j >= d + 2` for odd `j`.
pub fn odd_reduced_halfspaces(d: usize) -> Result<Vec<Halfspace>> {
    if d.is_multiple_of(2) {
        return Err(invalid(format!("d = {d} must be odd")));
    }
    let n = d + 1;
    let h = d as i64 + 2;
    let odd2 = |k: usize| 2 * i64::from(k % 2 == 1);
    let mut out = vec![Halfspace::new(vec![1; n], h)];
    for i in (2..=n).step_by(2) {
        out.push(Halfspace::new((1..=n).map(|k| odd2(k) - i64::from(k == i)).collect(), h));
    }
    for j in (1..=d).step_by(2) {
        out.push(Halfspace::at_least((1..=n).map(|k| odd2(k) + i64::from(k == j)).collect(), h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_data() {
        assert_eq!(reduced_vertices(2).unwrap(), vec![vec![-1, 1], vec![1, -1], vec![3, 1], vec![1, 3]]);
        assert_eq!(interior_vertices(2).unwrap(), vec![vec![0, 1], vec![1, 0], vec![2, 1], vec![1, 2]]);
        assert!(reduced_vertices(3).is_err());
    }

    #[test]
    fn family_counts_and_pairs() {
        for d in (2..=10).step_by(2) {
            let fs = facet_families(d).unwrap();
            assert_eq!(fs.len(), (d + 2) * (d + 2) / 4);
            for f in &fs {
                let (a, b) = f.excluded();
                assert_eq!((a % 2, b % 2), (1, 0));
                assert_eq!(FacetFamily::from_excluded(b, a).unwrap(), *f);
                assert_eq!(f.vertex_labels(d).len(), d);
            }
        }
    }

    #[test]
    fn doubling_relates_offsets() {
        // P̃ = 2Q - 1, so offset_P = 2 offset_Q - normal . 1
        for d in (2..=8).step_by(2) {
            for f in facet_families(d).unwrap() {
                let (p, q) = (f.reduced_halfspace(d), f.interior_halfspace(d));
                assert_eq!(p.normal, q.normal);
                let s: i64 = q.normal.iter().sum();
                assert_eq!(p.offset, 2 * q.offset - s);
            }
        }
    }
}
