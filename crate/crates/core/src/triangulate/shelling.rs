use crate::error::{invalid, Result};
use crate::polytope::LatticePolytope;

/// Whether listing the facets of the simplicial polytope `p` in `order`
/// (indices into `p.facets()`) is a shelling of its boundary.
///
/// Each facet after the first must meet the union of its predecessors in
/// a nonempty union of its own ridges.
pub fn verify_shelling(p: &LatticePolytope, order: &[usize]) -> Result<bool> {
    let facets = p.facets()?;
    let mut seen = vec![false; facets.len()];
    for &i in order {
        if i >= facets.len() || std::mem::replace(&mut seen[i], true) {
            return Err(invalid("shelling order is not a permutation of the facets"));
        }
    }
    if order.len() != facets.len() {
        return Err(invalid("shelling order is not a permutation of the facets"));
    }
    if !p.is_simplicial()? {
        return Err(invalid("shelling check needs a simplicial polytope"));
    }
    for (j, &fj) in order.iter().enumerate().skip(1) {
        let f = &facets[fj].vertices;
        let meets: Vec<Vec<usize>> = order[..j]
            .iter()
            .map(|&g| f.iter().filter(|v| facets[g].vertices.contains(v)).copied().collect())
            .collect();
        let maximal = meets
            .iter()
            .filter(|m| !m.is_empty())
            .filter(|m| !meets.iter().any(|o| o.len() > m.len() && m.iter().all(|v| o.contains(v))));
        let mut any = false;
        for m in maximal {
            any = true;
            if m.len() + 1 != f.len() {
                return Ok(false);
            }
        }
        if !any {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_any_order() {
        let p = LatticePolytope::new(vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        for order in [[0, 1, 2, 3], [3, 1, 0, 2], [2, 3, 1, 0]] {
            assert!(verify_shelling(&p, &order).unwrap());
        }
        assert!(verify_shelling(&p, &[0, 1, 2]).is_err());
        assert!(verify_shelling(&p, &[0, 1, 1, 2]).is_err());
    }

    #[test]
    fn octahedron_antipodal_start_fails() {
        let p = LatticePolytope::new(vec![
            vec![1, 0, 0],
            vec![-1, 0, 0],
            vec![0, 1, 0],
            vec![0, -1, 0],
            vec![0, 0, 1],
            vec![0, 0, -1],
        ])
        .unwrap();
        let facets = p.facets().unwrap();
        let first = &facets[0].vertices;
        let opposite = (0..facets.len()).find(|&i| facets[i].vertices.iter().all(|v| !first.contains(v))).unwrap();
        let mut order = vec![0, opposite];
        order.extend((1..facets.len()).filter(|&i| i != opposite));
        assert!(!verify_shelling(&p, &order).unwrap());
    }
}
