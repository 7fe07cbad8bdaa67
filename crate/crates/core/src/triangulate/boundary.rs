use std::collections::HashMap;

use super::esd::{dilated_piece, esd_template};
use super::verify::minimal_scale;
use super::Triangulation;
use crate::error::{invalid, Error, Result};
use crate::family::{facet_families, interior_vertices, reduced_vertices, FacetFamily};
use crate::laplacian::reduce_full_dim;
use crate::{Budget, Exec};

/// The two factors of a facet of `Q` (even `d`) as vertex labels: the odd
/// labels and the even labels of the facet. Each factor spans a dilated
/// unimodular simplex.
pub fn facet_join_partition(d: usize, facet: FacetFamily) -> Result<(Vec<usize>, Vec<usize>)> {
    if !facet_families(d)?.contains(&facet) {
        return Err(invalid(format!("{facet:?} is not a facet for d = {d}")));
    }
    let labels = facet.vertex_labels(d);
    Ok(labels.iter().partition(|&&l| l % 2 == 1))
}

/// The boundary of `Q` triangulated facet by facet over one shared pool.
#[derive(Clone, Debug)]
pub struct BoundaryPieces {
    pub vertices: Vec<Vec<i64>>,
    pub heights: Vec<i128>,
    /// Cells of each facet's join triangulation, as increasing pool indices.
    pub facets: Vec<(FacetFamily, Vec<Vec<u32>>)>,
}

struct Pool {
    vertices: Vec<Vec<i64>>,
    heights: Vec<i128>,
    index: HashMap<Vec<i64>, u32>,
}

impl Pool {
    fn insert(&mut self, p: Vec<i64>, h: i128) -> Result<u32> {
        if let Some(&i) = self.index.get(&p) {
            if self.heights[i as usize] != h {
                return Err(Error::Verification(format!("point {p:?} lifted inconsistently")));
            }
            return Ok(i);
        }
        let i = self.vertices.len() as u32;
        self.index.insert(p.clone(), i);
        self.vertices.push(p);
        self.heights.push(h);
        Ok(i)
    }
}

/// Cells `c1 ∪ c2` of the join of two pieces, mapped through the pool.
fn join_cells(
    pool: &mut Pool,
    (p1, h1, c1): (Vec<Vec<i64>>, Vec<i128>, Vec<Vec<u32>>),
    (p2, h2, c2): (Vec<Vec<i64>>, Vec<i128>, Vec<Vec<u32>>),
) -> Result<Vec<Vec<u32>>> {
    let m1 = p1.into_iter().zip(h1).map(|(p, h)| pool.insert(p, h)).collect::<Result<Vec<u32>>>()?;
    let m2 = p2.into_iter().zip(h2).map(|(p, h)| pool.insert(p, h)).collect::<Result<Vec<u32>>>()?;
    let mut out = Vec::with_capacity(c1.len() * c2.len());
    for a in &c1 {
        for b in &c2 {
            let mut cell: Vec<u32> = a.iter().map(|&i| m1[i as usize]).chain(b.iter().map(|&i| m2[i as usize])).collect();
            cell.sort_unstable();
            out.push(cell);
        }
    }
    Ok(out)
}

/// Each facet of `Q` triangulated as the join of `esd_r` on its odd-label
/// simplex and `esd_r` on its even-label simplex, `r = (d + 2) / 2`.
pub fn interior_boundary_pieces(d: usize) -> Result<BoundaryPieces> {
    let c = interior_vertices(d)?;
    let r = (d as u32 + 2) / 2;
    let mut pool = Pool {
        vertices: Vec::new(),
        heights: Vec::new(),
        index: HashMap::new(),
    };
    let mut facets = Vec::new();
    for fam in facet_families(d)? {
        let (v1, v2) = facet_join_partition(d, fam)?;
        let idx = |v: &[usize]| v.iter().map(|l| l - 1).collect::<Vec<usize>>();
        let a = dilated_piece(&c, &idx(&v1), d + 2, r)?;
        let b = dilated_piece(&c, &idx(&v2), d + 2, r)?;
        facets.push((fam, join_cells(&mut pool, a, b)?));
    }
    Ok(BoundaryPieces {
        vertices: pool.vertices,
        heights: pool.heights,
        facets,
    })
}

/// The `2`-dilation of `t`: every cell replaced by its second edgewise
/// subdivision, vertices in increasing pool order. The lifting, if any,
/// is the scaled coarse lifting plus a fixed quadratic correction.
fn dilate2(t: &Triangulation, exec: Exec) -> Result<Triangulation> {
    let w = t.width;
    let tpl = esd_template(w - 1, 2);
    let n = t.vertices.len() as i128;
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    let mut vertices = Vec::new();
    let mut coarse = Vec::new();
    let mut quad = Vec::new();
    let mut cells = Vec::with_capacity(t.num_cells() * tpl.cells.len() * w);
    for c in t.cells() {
        let local: Vec<u32> = tpl
            .comps
            .iter()
            .map(|a| {
                let pos: Vec<usize> = a.iter().enumerate().flat_map(|(k, &m)| std::iter::repeat_n(k, m as usize)).collect();
                let (g, h) = (c[pos[0]], c[pos[1]]);
                *index.entry((g, h)).or_insert_with(|| {
                    let (u, v) = (&t.vertices[g as usize], &t.vertices[h as usize]);
                    vertices.push(u.iter().zip(v).map(|(x, y)| x + y).collect::<Vec<i64>>());
                    coarse.push((g, h));
                    let (c1, c2) = (h as i128 - g as i128, n - h as i128);
                    quad.push((n + 1) * (c1 + 4 * c2) - (c1 + 2 * c2) * (c1 + 2 * c2));
                    vertices.len() as u32 - 1
                })
            })
            .collect();
        for cell in &tpl.cells {
            let mut fine: Vec<u32> = cell.iter().map(|&i| local[i as usize]).collect();
            fine.sort_unstable();
            cells.extend(fine);
        }
    }
    let mut out = Triangulation::from_flat(vertices, cells, w);
    out.carrier = t.carrier.as_ref().map(|c| c.iter().map(|p| p.iter().map(|x| 2 * x).collect()).collect());
    if let Some(h) = &t.lifting {
        let base: Vec<i128> = coarse.iter().map(|&(g, k)| h[g as usize] + h[k as usize]).collect();
        let m = minimal_scale(&out, &base, &quad, exec)?;
        let lifted = base.iter().zip(&quad).map(|(b, q)| m * b + q).collect();
        out.lifting = Some(lifted);
    }
    Ok(out)
}

fn odd_triangulation(d: usize) -> Result<Triangulation> {
    let red = reduce_full_dim(d)?;
    let b = red.polytope.points().to_vec();
    let r = d as u32 + 2;
    let odd: Vec<usize> = (0..d + 2).step_by(2).collect();
    let even: Vec<usize> = (1..d + 2).step_by(2).collect();
    let mut pool = Pool {
        vertices: Vec::new(),
        heights: Vec::new(),
        index: HashMap::new(),
    };
    let cells = join_cells(&mut pool, dilated_piece(&b, &odd, d + 2, r)?, dilated_piece(&b, &even, d + 2, r)?)?;
    let flat = cells.into_iter().flatten().collect();
    Ok(Triangulation::from_flat(pool.vertices, flat, d + 2).with_lifting(pool.heights).with_carrier(b))
}

/// Regular unimodular triangulation of `Q` (even `d`): its boundary
/// pieces coned from the interior point `1`.
pub fn interior_triangulation(d: usize, exec: Exec) -> Result<Triangulation> {
    let pieces = interior_boundary_pieces(d)?;
    let apex = pieces.vertices.len() as u32;
    let mut vertices = pieces.vertices;
    vertices.push(vec![1; d]);
    let mut cells = Vec::new();
    for (_, fc) in &pieces.facets {
        for c in fc {
            cells.extend_from_slice(c);
            cells.push(apex);
        }
    }
    let mut base = vec![1i128; vertices.len()];
    base[apex as usize] = 0;
    let mut extra = pieces.heights;
    extra.push(0);
    let mut cone = Triangulation::from_flat(vertices, cells, d + 1).with_carrier(interior_vertices(d)?);
    let k = minimal_scale(&cone, &base, &extra, exec)?;
    cone.lifting = Some(base.iter().zip(&extra).map(|(b, e)| k * b + e).collect());
    Ok(cone)
}

fn even_triangulation(d: usize, exec: Exec) -> Result<Triangulation> {
    let doubled = dilate2(&interior_triangulation(d, exec)?, exec)?;
    Ok(doubled.translate(&vec![-1; d]).with_carrier(reduced_vertices(d)?))
}

/// Regular unimodular triangulation of the reduced Laplacian polytope of
/// the boundary of the `(d + 1)`-simplex, with a lifting witness attached.
///
/// Odd `d`: the join of edgewise subdivisions of the two complementary
/// faces spanned by the odd-labelled and even-labelled vertices. Even
/// `d`: the boundary of the interior polytope `Q` triangulated facet by
/// facet, coned from its interior point `1`, doubled, and shifted by `-1`.
/// Both have `(d + 2)^d` cells.
pub fn laplacian_triangulation(d: usize, budget: &Budget, exec: Exec) -> Result<Triangulation> {
    if d == 0 {
        return Err(Error::OutOfRange {
            what: "d",
            value: 0,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let cells = (d as u128 + 2).checked_pow(d as u32).ok_or(Error::Overflow("cell count"))?;
    budget.check_cells(cells)?;
    let t = if d % 2 == 1 {
        odd_triangulation(d)?
    } else {
        even_triangulation(d, exec)?
    };
    debug_assert_eq!(t.num_cells() as u128, cells);
    Ok(t)
}
