use super::verify::{bits_for, pack};
use super::Triangulation;
use crate::complex::{FVector, HVector};
use crate::error::{Error, Result};
use crate::{Budget, Exec};

const KEYS_PER_PASS: u128 = 1 << 22;

/// Face numbers of the complex generated by the cells, every face counted once.
///
/// Faces are packed into sorted `u128` keys and deduplicated. Large
/// censuses run in passes, each owning the faces whose smallest vertex
/// falls into one slice of the pool, so peak memory stays bounded.
pub fn f_vector_of(t: &Triangulation, budget: &Budget, exec: Exec) -> Result<FVector> {
    census(t, budget, exec, KEYS_PER_PASS)
}

fn census(t: &Triangulation, budget: &Budget, exec: Exec, keys_per_pass: u128) -> Result<FVector> {
    let w = t.width;
    let bits = bits_for(t.vertices.len());
    if bits as usize * w > 128 {
        return Err(Error::Overflow("packed face key"));
    }
    let work = t.num_cells() as u128 * (1u128 << w);
    budget.check_points(work)?;
    let passes = work.div_ceil(keys_per_pass).max(1) as usize;
    let nv = t.vertices.len();
    let slice = nv.div_ceil(passes).max(1);
    let mut f = vec![0i64; w + 1];
    f[0] = 1;
    for lo in (0..nv).step_by(slice) {
        let hi = (lo + slice).min(nv) as u32;
        let lo = lo as u32;
        let per_cell = exec.map_range(t.num_cells(), |ci| {
            let c = t.cell(ci);
            let mut keys = Vec::new();
            for (first, &v) in c.iter().enumerate() {
                if v < lo || v >= hi {
                    continue;
                }
                let rest = &c[first + 1..];
                for mask in 0u32..(1 << rest.len()) {
                    let face = std::iter::once(v).chain(rest.iter().enumerate().filter(|&(j, _)| mask >> j & 1 == 1).map(|(_, &x)| x));
                    keys.push((mask.count_ones() as u8, pack(face, bits)));
                }
            }
            keys
        });
        let mut keys: Vec<(u8, u128)> = per_cell.into_iter().flatten().collect();
        exec.sort_unstable(&mut keys);
        keys.dedup();
        for (extra, _) in keys {
            f[extra as usize + 1] += 1;
        }
    }
    Ok(FVector(f))
}

/// The h-vector `(h_0, ..., h_dim)` of the triangulation; for a unimodular
/// triangulation of a lattice polytope this is its h*-vector.
pub fn h_vector_of(t: &Triangulation, budget: &Budget, exec: Exec) -> Result<HVector> {
    let mut h = f_vector_of(t, budget, exec)?.to_h().0;
    if h.pop() != Some(0) {
        return Err(Error::Verification("top h-entry of a triangulated ball must vanish".into()));
    }
    Ok(HVector(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulate::edgewise_subdivision;

    #[test]
    fn esd_triangle_counts() {
        let t = edgewise_subdivision(&[vec![0, 0], vec![1, 0], vec![0, 1]], 3).unwrap();
        let f = f_vector_of(&t, &Budget::default(), Exec::Sequential).unwrap();
        assert_eq!(f.0, vec![1, 10, 18, 9]);
        let h = h_vector_of(&t, &Budget::default(), Exec::Parallel).unwrap();
        assert_eq!(h.0, vec![1, 7, 1]);
    }

    #[test]
    fn passes_do_not_change_the_count() {
        let t = edgewise_subdivision(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 4).unwrap();
        let one = f_vector_of(&t, &Budget::default(), Exec::Sequential).unwrap();
        assert_eq!(one.0[4], 64);
        assert_eq!(one.0[1], 35);
        for per_pass in [1, 7, 100] {
            assert_eq!(census(&t, &Budget::default(), Exec::Parallel, per_pass).unwrap(), one);
        }
    }

    #[test]
    fn census_respects_budget() {
        let t = edgewise_subdivision(&[vec![0, 0], vec![1, 0], vec![0, 1]], 3).unwrap();
        let tight = Budget { points: 10, cells: 10 };
        assert!(matches!(f_vector_of(&t, &tight, Exec::Sequential), Err(Error::Budget { .. })));
    }
}
