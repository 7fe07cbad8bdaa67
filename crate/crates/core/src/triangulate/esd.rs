use std::collections::HashMap;

use num_traits::One;

use super::Triangulation;
use crate::arith::smith;
use crate::error::{invalid, Result};

/// Local data of `esd_r(Δ_m)`: the compositions `Ω_r` of `r` into `m + 1`
/// parts and the cells as index sets into them.
pub(crate) struct EsdTemplate {
    pub comps: Vec<Vec<u32>>,
    pub cells: Vec<Vec<u32>>,
}

fn monotone(m: usize, lo: u32, r: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == m {
        out.push(cur.clone());
        return;
    }
    for v in lo..=r {
        cur.push(v);
        monotone(m, v, r, cur, out);
        cur.pop();
    }
}

fn composition(phi: &[u32], r: u32) -> Vec<u32> {
    let mut a = Vec::with_capacity(phi.len() + 1);
    let mut prev = 0;
    for &p in phi {
        a.push(p - prev);
        prev = p;
    }
    a.push(r - prev);
    a
}

fn chains(r: u32, cur: &mut Vec<u32>, used: &mut Vec<bool>, chain: &mut Vec<u32>, index: &HashMap<Vec<u32>, u32>, out: &mut Vec<Vec<u32>>) {
    let m = cur.len();
    if chain.len() == m + 1 {
        let mut c = chain.clone();
        c.sort_unstable();
        out.push(c);
        return;
    }
    for k in 0..m {
        if used[k] {
            continue;
        }
        let bound = if k + 1 < m { cur[k + 1] } else { r };
        if cur[k] + 1 > bound {
            continue;
        }
        cur[k] += 1;
        used[k] = true;
        chain.push(index[&*cur]);
        chains(r, cur, used, chain, index, out);
        chain.pop();
        used[k] = false;
        cur[k] -= 1;
    }
}

/// Cells are Kuhn chains `y, y + e_{π1}, ..., y + 1` in the partial-sum
/// coordinates `φ_k = a_0 + ... + a_{k-1}`, kept when every vertex stays
/// monotone in `[0, r]`; there are `r^m` of them.
pub(crate) fn esd_template(m: usize, r: u32) -> EsdTemplate {
    let mut phis = Vec::new();
    monotone(m, 0, r, &mut Vec::new(), &mut phis);
    let index: HashMap<Vec<u32>, u32> = phis.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
    let mut cells = Vec::new();
    if m == 0 {
        cells.push(vec![0]);
    } else {
        for y in phis.iter().filter(|p| p.iter().all(|&v| v < r)) {
            let mut cur = y.clone();
            let mut chain = vec![index[y]];
            chains(r, &mut cur, &mut vec![false; m], &mut chain, &index, &mut cells);
        }
    }
    EsdTemplate {
        comps: phis.iter().map(|p| composition(p, r)).collect(),
        cells,
    }
}

/// `sum_{0<=i<j<=N} (φ_j - φ_i)^2` over the prefix sums `φ_0 = 0, ..., φ_N` of `a`.
///
/// Interpolated linearly on any edgewise subdivision that orders its
/// vertices compatibly with the positions of `a`, this is convex and bends
/// along every wall.
pub(crate) fn esd_height(a: &[u32]) -> i128 {
    let n = a.len() as i128;
    let (mut phi, mut s1, mut s2) = (0i128, 0i128, 0i128);
    for &x in a {
        phi += x as i128;
        s1 += phi;
        s2 += phi * phi;
    }
    (n + 1) * s2 - s1 * s1
}

pub(crate) fn combine(verts: &[&Vec<i64>], a: &[u32]) -> Vec<i64> {
    let n = verts[0].len();
    (0..n).map(|k| verts.iter().zip(a).map(|(v, &c)| v[k] * c as i64).sum()).collect()
}

/// Points `(1/r) sum a_i v_i` for `a in Ω_r`, with heights taken over the
/// global positions `labels` in a composition of length `n_global`.
pub(crate) fn dilated_piece(
    all: &[Vec<i64>],
    labels: &[usize],
    n_global: usize,
    r: u32,
) -> Result<(Vec<Vec<i64>>, Vec<i128>, Vec<Vec<u32>>)> {
    let t = esd_template(labels.len() - 1, r);
    let verts: Vec<&Vec<i64>> = labels.iter().map(|&l| &all[l]).collect();
    let mut pts = Vec::with_capacity(t.comps.len());
    let mut hs = Vec::with_capacity(t.comps.len());
    for a in &t.comps {
        let s = combine(&verts, a);
        if s.iter().any(|x| x % r as i64 != 0) {
            return Err(invalid(format!("dilated simplex point {s:?}/{r} is not integral")));
        }
        pts.push(s.iter().map(|x| x / r as i64).collect());
        let mut g = vec![0u32; n_global];
        for (&l, &c) in labels.iter().zip(a) {
            g[l] = c;
        }
        hs.push(esd_height(&g));
    }
    Ok((pts, hs, t.cells))
}

/// The `r`-th edgewise subdivision of the unimodular simplex `gamma`,
/// triangulating `r * gamma` with its regular lifting attached.
pub fn edgewise_subdivision(gamma: &[Vec<i64>], r: u32) -> Result<Triangulation> {
    if r == 0 || gamma.is_empty() {
        return Err(invalid("edgewise subdivision needs r >= 1 and a nonempty simplex"));
    }
    let m = gamma.len() - 1;
    let diffs: Vec<Vec<i64>> = gamma[1..].iter().map(|v| v.iter().zip(&gamma[0]).map(|(a, b)| a - b).collect()).collect();
    let n = gamma[0].len();
    if m > 0 {
        let s = smith(&diffs, n);
        if s.diag.len() < m || s.diag.iter().any(|x| !x.is_one()) {
            return Err(invalid("simplex is not unimodular in its affine lattice"));
        }
    }
    let t = esd_template(m, r);
    let verts: Vec<&Vec<i64>> = gamma.iter().collect();
    let pts: Vec<Vec<i64>> = t.comps.iter().map(|a| combine(&verts, a)).collect();
    let hs: Vec<i128> = t.comps.iter().map(|a| esd_height(a)).collect();
    let flat: Vec<u32> = t.cells.iter().flatten().copied().collect();
    let carrier = gamma.iter().map(|v| v.iter().map(|x| x * r as i64).collect()).collect();
    Ok(Triangulation::from_flat(pts, flat, m + 1).with_lifting(hs).with_carrier(carrier))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulate::{is_regular, verify_triangulation, Regularity};
    use crate::Exec;

    fn standard(m: usize) -> Vec<Vec<i64>> {
        let mut g = vec![vec![0; m]];
        for k in 0..m {
            let mut e = vec![0; m];
            e[k] = 1;
            g.push(e);
        }
        g
    }

    #[test]
    fn cell_counts() {
        for m in 0..=4 {
            for r in 1..=9u32 {
                assert_eq!(esd_template(m, r).cells.len(), (r as usize).pow(m as u32), "m={m} r={r}");
            }
        }
    }

    #[test]
    fn figure_two_triangulation() {
        let t = edgewise_subdivision(&standard(2), 3).unwrap();
        assert_eq!(t.num_cells(), 9);
        assert_eq!(t.vertices().len(), 10);
        let rep = verify_triangulation(&t, Exec::Sequential).unwrap();
        assert!(rep.passed() && rep.unimodular, "{rep:?}");
        assert_eq!(rep.volume_sum, 9u32.into());
        assert!(matches!(is_regular(&t, Exec::Sequential).unwrap(), Regularity::Regular { .. }));
    }

    #[test]
    fn segment_doubling() {
        let t = edgewise_subdivision(&[vec![0], vec![1]], 2).unwrap();
        let mut cells: Vec<Vec<u32>> = t.cells().map(|c| c.to_vec()).collect();
        cells.sort();
        assert_eq!(t.num_cells(), 2);
        let mut pts = t.vertices().to_vec();
        pts.sort();
        assert_eq!(pts, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn rejects_fat_simplex() {
        assert!(edgewise_subdivision(&[vec![0, 0], vec![2, 0], vec![0, 1]], 2).is_err());
    }
}
