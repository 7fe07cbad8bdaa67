use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Triangulation;
use crate::arith::det_wide;
use crate::error::{Error, Result};
use crate::lp::{maximize, Constraint, LpOutcome, Relation};
use crate::Exec;

/// Above this many cells, disjointness is checked on sampled pairs.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 10_000;
const SAMPLED_PAIRS: usize = 200_000;
const SAMPLE_SEED: u64 = 0x5eed_ce11;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Disjointness {
    Exhaustive { pairs: u64 },
    Sampled { pairs: u64 },
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub cells: usize,
    pub affinely_independent: bool,
    pub unimodular: bool,
    pub volume_sum: BigInt,
    pub carrier_volume: BigInt,
    /// Interior ridges separate their two cells; boundary ridges lie on carrier facets.
    pub ridges_ok: bool,
    pub disjointness: Disjointness,
    pub violation: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.affinely_independent && self.ridges_ok && self.volume_sum == self.carrier_volume
    }
}

pub(crate) fn bits_for(n: usize) -> u32 {
    usize::BITS - n.leading_zeros()
}

/// Packs increasing indices as `(index + 1)` fields of `bits` bits.
pub(crate) fn pack(face: impl Iterator<Item = u32>, bits: u32) -> u128 {
    face.fold(0u128, |acc, i| (acc << bits) | (i as u128 + 1))
}

fn affine_row(p: &[i64]) -> Vec<i128> {
    p.iter().map(|&x| x as i128).chain(std::iter::once(1)).collect()
}

fn cell_rows(t: &Triangulation, c: &[u32]) -> Vec<Vec<i128>> {
    c.iter().map(|&i| affine_row(&t.vertices[i as usize])).collect()
}

/// Signed `dim! * volume` of a cell in its vertex order.
pub(crate) fn orientation(t: &Triangulation, c: &[u32]) -> BigInt {
    det_wide(&cell_rows(t, c))
}

/// Two cells sharing a ridge; `a` and `b` are the positions of the
/// vertices off the ridge.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Wall {
    pub cell: u32,
    pub a: u8,
    pub other: u32,
    pub b: u8,
}

pub(crate) struct Ridges {
    pub walls: Vec<Wall>,
    /// Ridges in exactly one cell, as (cell, position of the vertex off the ridge).
    pub boundary: Vec<(u32, u8)>,
}

/// Groups codimension-one faces of the cells; a ridge in three or more
/// cells is reported as `Err`.
pub(crate) fn ridges(t: &Triangulation, exec: Exec) -> Result<std::result::Result<Ridges, String>> {
    let bits = bits_for(t.vertices.len());
    if bits as usize * t.dim() > 128 {
        return Err(Error::Overflow("packed ridge key"));
    }
    let w = t.width;
    let per_cell = exec.map_range(t.num_cells(), |ci| {
        let c = t.cell(ci);
        (0..w)
            .map(|k| {
                let key = pack(c.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v), bits);
                (key, ci as u32, k as u8)
            })
            .collect::<Vec<_>>()
    });
    let mut all: Vec<(u128, u32, u8)> = per_cell.into_iter().flatten().collect();
    exec.sort_unstable(&mut all);
    let mut walls = Vec::new();
    let mut boundary = Vec::new();
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        match j - i {
            1 => boundary.push((all[i].1, all[i].2)),
            2 => walls.push(Wall {
                cell: all[i].1,
                a: all[i].2,
                other: all[i + 1].1,
                b: all[i + 1].2,
            }),
            n => {
                let c = t.cell(all[i].1 as usize);
                let r: Vec<u32> = c.iter().enumerate().filter(|&(k, _)| k != all[i].2 as usize).map(|(_, &v)| v).collect();
                return Ok(Err(format!("ridge {r:?} lies in {n} cells")));
            }
        }
        i = j;
    }
    Ok(Ok(Ridges { walls, boundary }))
}

/// `sign(V) * det[[u, 1, h(u)] for u in cell; [b, 1, h(b)]]`, positive iff
/// the lifted `b` lies strictly above the lifted hyperplane of `cell`.
pub(crate) fn fold(t: &Triangulation, wall: &Wall, heights: &[i128], orient_sign: i32) -> BigInt {
    let c = t.cell(wall.cell as usize);
    let b = t.cell(wall.other as usize)[wall.b as usize];
    let rows: Vec<Vec<i128>> = c
        .iter()
        .chain(std::iter::once(&b))
        .map(|&i| {
            let mut r = affine_row(&t.vertices[i as usize]);
            r.push(heights[i as usize]);
            r
        })
        .collect();
    let d = det_wide(&rows);
    if orient_sign < 0 {
        -d
    } else {
        d
    }
}

pub(crate) fn orientation_signs(t: &Triangulation, exec: Exec) -> Vec<i32> {
    exec.map_range(t.num_cells(), |i| {
        let o = orientation(t, t.cell(i));
        if o.is_positive() {
            1
        } else if o.is_negative() {
            -1
        } else {
            0
        }
    })
}

/// Smallest `k >= 1` making `k * base + extra` fold strictly upward on every wall.
pub(crate) fn minimal_scale(t: &Triangulation, base: &[i128], extra: &[i128], exec: Exec) -> Result<i128> {
    let r = ridges(t, exec)?.map_err(Error::Verification)?;
    let signs = orientation_signs(t, exec);
    let bounds = exec.map_slice(&r.walls, |w| {
        let s = signs[w.cell as usize];
        let db = fold(t, w, base, s);
        let de = fold(t, w, extra, s);
        if db.is_positive() {
            let q = num_integer::Integer::div_floor(&(-de), &db);
            Ok(q + 1)
        } else if db.is_zero() && de.is_positive() {
            Ok(BigInt::one())
        } else {
            Err(Error::Verification("lifting cannot be made strictly convex by scaling".into()))
        }
    });
    let mut k = BigInt::one();
    for b in bounds {
        k = k.max(b?);
    }
    i128::try_from(k).map_err(|_| Error::Overflow("lifting scale"))
}

fn bbox(t: &Triangulation, c: &[u32]) -> (Vec<i64>, Vec<i64>) {
    let n = t.ambient_dim();
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for &i in c {
        for (k, &x) in t.vertices[i as usize].iter().enumerate() {
            lo[k] = lo[k].min(x);
            hi[k] = hi[k].max(x);
        }
    }
    (lo, hi)
}

/// Whether some facet hyperplane of `a` has all of `b` weakly outside.
fn facet_separates(t: &Triangulation, a: &[u32], orient: &BigInt, b: &[u32]) -> bool {
    let base = cell_rows(t, a);
    (0..a.len()).any(|k| {
        b.iter().all(|&y| {
            let mut rows = base.clone();
            rows[k] = affine_row(&t.vertices[y as usize]);
            !(det_wide(&rows) * orient).is_positive()
        })
    })
}

/// Maximizes the smallest barycentric coordinate of a common point; the
/// relative interiors meet iff the optimum is positive.
fn interiors_meet_lp(t: &Triangulation, a: &[u32], b: &[u32]) -> bool {
    let w = a.len();
    let nv = 2 * w + 1;
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut cs = Vec::new();
    let unit = |range: std::ops::Range<usize>| {
        let mut c = vec![r(0); nv];
        for i in range {
            c[i] = r(1);
        }
        Constraint::new(c, Relation::Eq, r(1))
    };
    cs.push(unit(0..w));
    cs.push(unit(w..2 * w));
    for k in 0..t.ambient_dim() {
        let mut c = vec![r(0); nv];
        for (i, &v) in a.iter().enumerate() {
            c[i] = r(t.vertices[v as usize][k]);
        }
        for (i, &v) in b.iter().enumerate() {
            c[w + i] = r(-t.vertices[v as usize][k]);
        }
        cs.push(Constraint::new(c, Relation::Eq, r(0)));
    }
    for i in 0..2 * w {
        let mut c = vec![r(0); nv];
        c[i] = r(1);
        c[2 * w] = r(-1);
        cs.push(Constraint::new(c, Relation::Ge, r(0)));
    }
    let mut obj = vec![r(0); nv];
    obj[2 * w] = r(1);
    match maximize(&obj, &cs) {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Infeasible => false,
        LpOutcome::Unbounded => true,
    }
}

fn overlaps(t: &Triangulation, i: usize, j: usize, boxes: &[(Vec<i64>, Vec<i64>)], orients: &[BigInt]) -> bool {
    let (ref lo1, ref hi1) = boxes[i];
    let (ref lo2, ref hi2) = boxes[j];
    if (0..lo1.len()).any(|k| hi1[k] <= lo2[k] || hi2[k] <= lo1[k]) {
        return false;
    }
    let (a, b) = (t.cell(i), t.cell(j));
    if facet_separates(t, a, &orients[i], b) || facet_separates(t, b, &orients[j], a) {
        return false;
    }
    interiors_meet_lp(t, a, b)
}

/// Checks every cell for degeneracy and unimodularity, every ridge for
/// local consistency, pairwise disjointness of cell interiors, and that
/// the cell volumes add up to the normalized volume of the carrier.
pub fn verify_triangulation(t: &Triangulation, exec: Exec) -> Result<VerifyReport> {
    if t.dim() != t.ambient_dim() {
        return Err(Error::NotFullDimensional {
            dim: t.dim(),
            ambient: t.ambient_dim(),
        });
    }
    let n = t.num_cells();
    let orients = exec.map_range(n, |i| orientation(t, t.cell(i)));
    let mut violation = None;
    let degenerate = orients.iter().position(Zero::is_zero);
    if let Some(i) = degenerate {
        violation = Some(format!("cell {i} {:?} is not affinely independent", t.cell(i)));
    }
    let unimodular = orients.iter().all(|o| o.abs().is_one());
    let volume_sum = orients.iter().fold(BigInt::zero(), |acc, o| acc + o.abs());
    let carrier = t.carrier()?;
    let carrier_volume = carrier.normalized_volume()?;
    let halfspaces = carrier.halfspaces()?;

    let mut ridges_ok = true;
    match ridges(t, exec)? {
        Err(msg) => {
            ridges_ok = false;
            violation.get_or_insert(msg);
        }
        Ok(r) if degenerate.is_none() => {
            let bad_wall = exec.find_first(r.walls.len(), |wi| {
                let w = &r.walls[wi];
                let c = t.cell(w.cell as usize);
                let mut rows = cell_rows(t, c);
                let b = t.cell(w.other as usize)[w.b as usize];
                rows[w.a as usize] = affine_row(&t.vertices[b as usize]);
                let s = det_wide(&rows) * &orients[w.cell as usize];
                (!s.is_negative()).then_some(())
            });
            if let Some((wi, ())) = bad_wall {
                let w = &r.walls[wi];
                ridges_ok = false;
                violation.get_or_insert(format!("cells {} and {} lie on the same side of their common ridge", w.cell, w.other));
            }
            let bad_boundary = exec.find_first(r.boundary.len(), |bi| {
                let (ci, k) = r.boundary[bi];
                let c = t.cell(ci as usize);
                let on_facet = halfspaces.iter().any(|h| {
                    c.iter().enumerate().filter(|&(j, _)| j != k as usize).all(|(_, &v)| h.slack(&t.vertices[v as usize]) == 0)
                });
                (!on_facet).then_some(())
            });
            if let Some((bi, ())) = bad_boundary {
                ridges_ok = false;
                violation.get_or_insert(format!("cell {} has a free ridge inside the carrier", r.boundary[bi].0));
            }
        }
        Ok(_) => {}
    }

    let boxes = exec.map_range(n, |i| bbox(t, t.cell(i)));
    let disjointness = if degenerate.is_some() {
        Disjointness::Exhaustive { pairs: 0 }
    } else if n <= EXHAUSTIVE_PAIR_LIMIT {
        let hit = exec.find_first(n, |i| (i + 1..n).find(|&j| overlaps(t, i, j, &boxes, &orients)));
        if let Some((i, j)) = hit {
            violation.get_or_insert(format!("cells {i} and {j} have overlapping interiors"));
        }
        Disjointness::Exhaustive {
            pairs: (n as u64) * (n as u64).saturating_sub(1) / 2,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let pairs: Vec<(usize, usize)> = (0..SAMPLED_PAIRS)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                (i.min(j), i.max(j))
            })
            .collect();
        let hit = exec.find_first(pairs.len(), |p| {
            let (i, j) = pairs[p];
            overlaps(t, i, j, &boxes, &orients).then_some((i, j))
        });
        if let Some((_, (i, j))) = hit {
            violation.get_or_insert(format!("cells {i} and {j} have overlapping interiors"));
        }
        Disjointness::Sampled {
            pairs: SAMPLED_PAIRS as u64,
        }
    };
    if violation.is_none() && volume_sum != carrier_volume {
        violation = Some(format!("cell volumes sum to {volume_sum}, carrier has {carrier_volume}"));
    }
    Ok(VerifyReport {
        cells: n,
        affinely_independent: degenerate.is_none(),
        unimodular,
        volume_sum,
        carrier_volume,
        ridges_ok,
        disjointness,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_pair(apex: Vec<i64>) -> Triangulation {
        Triangulation::new(vec![vec![0, 0], vec![2, 0], vec![0, 2], apex], vec![vec![0, 1, 2], vec![0, 1, 3]])
            .unwrap()
            .with_carrier(vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]])
    }

    #[test]
    fn overlapping_cells_are_reported() {
        let t = square_pair(vec![2, 2]);
        for exec in [Exec::Sequential, Exec::Parallel] {
            let r = verify_triangulation(&t, exec).unwrap();
            assert!(!r.passed());
            assert_eq!(r.volume_sum, r.carrier_volume);
            assert!(r.violation.is_some());
        }
    }

    #[test]
    fn lp_detects_overlap_without_shared_ridge() {
        let t = Triangulation::new(
            vec![vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1], vec![5, 1], vec![1, 5]],
            vec![vec![0, 1, 2], vec![3, 4, 5]],
        )
        .unwrap();
        assert!(interiors_meet_lp(&t, t.cell(0), t.cell(1)));
        let r = verify_triangulation(&t, Exec::Sequential).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn degenerate_cell_is_reported() {
        let t = Triangulation::new(vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![0, 2]], vec![vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
        let r = verify_triangulation(&t, Exec::Sequential).unwrap();
        assert!(!r.affinely_independent && !r.passed());
    }

    #[test]
    fn valid_square_split() {
        let t = Triangulation::new(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let r = verify_triangulation(&t, Exec::Parallel).unwrap();
        assert!(r.passed() && r.unimodular, "{r:?}");
        assert_eq!(r.disjointness, Disjointness::Exhaustive { pairs: 1 });
    }

    #[test]
    fn packing_distinguishes_lengths() {
        assert_ne!(pack([1u32].into_iter(), 4), pack([0u32, 1].into_iter(), 4));
    }
}
