use std::collections::BTreeSet;

use lappoly_core::complex::HVector;
use lappoly_core::family::{facet_families, interior_vertices, FacetFamily};
use lappoly_core::laplacian::reduce_full_dim;
use lappoly_core::triangulate::{
    edgewise_subdivision, f_vector_of, h_vector_of, interior_boundary_pieces, interior_triangulation, is_regular,
    is_regular_lp, join, laplacian_triangulation, nonregular_fixture, verify_shelling, verify_triangulation, Regularity,
    RegularityMethod, Triangulation,
};
use lappoly_core::{Budget, Exec};
use proptest::prelude::*;

fn standard(m: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; m]];
    for k in 0..m {
        let mut e = vec![0; m];
        e[k] = 1;
        g.push(e);
    }
    g
}

fn h(t: &Triangulation) -> Vec<i64> {
    h_vector_of(t, &Budget::default(), Exec::Parallel).unwrap().0
}

#[test]
fn joins_of_small_pieces() {
    let seg3 = edgewise_subdivision(&standard(1), 3).unwrap();
    let point = edgewise_subdivision(&[vec![]], 3).unwrap();
    let tri = join(&seg3, &point);
    assert_eq!(tri.num_cells(), 3);
    let r = verify_triangulation(&tri, Exec::Sequential).unwrap();
    assert!(r.passed() && r.unimodular, "{r:?}");
    assert_eq!(r.carrier_volume, 3u32.into());

    let d1 = laplacian_triangulation(1, &Budget::default(), Exec::Sequential).unwrap();
    assert_eq!(h(&d1), h(&tri));
}

#[test]
fn face_census_of_small_laplacian_triangulations() {
    for (d, want) in [(1, vec![1, 2, 0]), (2, vec![1, 10, 5]), (3, vec![1, 22, 78, 24, 0])] {
        let t = laplacian_triangulation(d, &Budget::default(), Exec::Parallel).unwrap();
        assert_eq!(h(&t), want, "d={d}");
    }
}

#[test]
fn interior_triangulation_at_two() {
    let t = interior_triangulation(2, Exec::Sequential).unwrap();
    assert_eq!(t.num_cells(), 4);
    assert_eq!(h(&t), vec![1, 2, 1]);
    let r = verify_triangulation(&t, Exec::Sequential).unwrap();
    assert!(r.passed() && r.unimodular, "{r:?}");
}

#[test]
fn regularity_by_linear_programming() {
    let t = laplacian_triangulation(2, &Budget::default(), Exec::Sequential).unwrap().without_lifting();
    assert!(matches!(
        is_regular(&t, Exec::Sequential).unwrap(),
        Regularity::Regular { method: RegularityMethod::LinearProgram, .. }
    ));
    let esd = edgewise_subdivision(&standard(2), 3).unwrap().without_lifting();
    assert!(is_regular_lp(&esd, Exec::Sequential).unwrap().is_regular());
    assert_eq!(is_regular_lp(&nonregular_fixture(), Exec::Sequential).unwrap(), Regularity::NotRegular);
}

#[test]
fn sequential_and_parallel_agree() {
    let t = laplacian_triangulation(4, &Budget::default(), Exec::Parallel).unwrap();
    let a = f_vector_of(&t, &Budget::default(), Exec::Sequential).unwrap();
    let b = f_vector_of(&t, &Budget::default(), Exec::Parallel).unwrap();
    assert_eq!(a, b);
    let s = laplacian_triangulation(4, &Budget::default(), Exec::Sequential).unwrap();
    assert_eq!(s.lifting(), t.lifting());
    assert_eq!(s.cells().collect::<Vec<_>>(), t.cells().collect::<Vec<_>>());
}

/// Faces of the cells of one facet that lie in another facet, kept at the
/// dimension of the common face.
fn restriction(pieces: &[Vec<u32>], verts: &[Vec<i64>], on: &FacetFamily, d: usize, size: usize) -> BTreeSet<Vec<u32>> {
    let hs = on.interior_halfspace(d);
    pieces
        .iter()
        .map(|c| c.iter().copied().filter(|&v| hs.slack(&verts[v as usize]) == 0).collect::<Vec<u32>>())
        .filter(|f| f.len() == size)
        .collect()
}

#[test]
fn facet_triangulations_glue() {
    for d in [2, 4, 6] {
        let pieces = interior_boundary_pieces(d).unwrap();
        for (i, (f, tf)) in pieces.facets.iter().enumerate() {
            for (g, tg) in &pieces.facets[i + 1..] {
                let lf = f.vertex_labels(d);
                let common = g.vertex_labels(d).iter().filter(|l| lf.contains(l)).count();
                let a = restriction(tf, &pieces.vertices, g, d, common);
                let b = restriction(tg, &pieces.vertices, f, d, common);
                assert_eq!(a, b, "d={d} {f:?} {g:?}");
                assert!(!a.is_empty());
            }
        }
    }
}

#[test]
fn boundary_points_of_q_are_on_its_facets() {
    let d = 4;
    let pieces = interior_boundary_pieces(d).unwrap();
    let c = interior_vertices(d).unwrap();
    for (fam, cells) in &pieces.facets {
        let hs = fam.interior_halfspace(d);
        for cell in cells {
            for &v in cell {
                assert_eq!(hs.slack(&pieces.vertices[v as usize]), 0);
            }
        }
        for l in fam.vertex_labels(d) {
            assert_eq!(hs.slack(&c[l - 1]), 0);
        }
    }
}

fn family_order(d: usize) -> Vec<usize> {
    let p = reduce_full_dim(d).unwrap().polytope;
    let facets = p.facets().unwrap();
    facet_families(d)
        .unwrap()
        .iter()
        .map(|f| {
            let h = f.reduced_halfspace(d);
            facets.iter().position(|x| x.halfspace == h).unwrap()
        })
        .collect()
}

#[test]
fn family_order_is_a_shelling() {
    for d in [2, 4, 6, 8] {
        let p = reduce_full_dim(d).unwrap().polytope;
        assert!(verify_shelling(&p, &family_order(d)).unwrap(), "d={d}");
    }
}

#[test]
fn shelling_rejects_bad_start() {
    let d = 4;
    let p = reduce_full_dim(d).unwrap().polytope;
    let facets = p.facets().unwrap();
    let idx = |f: FacetFamily| facets.iter().position(|x| x.halfspace == f.reduced_halfspace(d)).unwrap();
    let first = idx(FacetFamily::Sum);
    let second = idx(FacetFamily::Pair(3, 4));
    let common = facets[first].vertices.iter().filter(|v| facets[second].vertices.contains(v)).count();
    assert_eq!(common, 2);
    let mut order = vec![first, second];
    order.extend((0..facets.len()).filter(|i| *i != first && *i != second));
    assert!(!verify_shelling(&p, &order).unwrap());
}

fn padded_product(a: &[i64], b: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn join_h_polynomial_is_multiplicative(m1 in 0usize..3, r1 in 1u32..4, m2 in 0usize..3, r2 in 1u32..4) {
        let a = edgewise_subdivision(&standard(m1), r1).unwrap();
        let b = edgewise_subdivision(&standard(m2), r2).unwrap();
        let j = join(&a, &b);
        prop_assert_eq!(j.num_cells(), a.num_cells() * b.num_cells());
        let want = padded_product(&h(&a), &h(&b), m1 + m2 + 2);
        prop_assert_eq!(HVector(h(&j)), HVector(want));
        let r = verify_triangulation(&j, Exec::Sequential).unwrap();
        prop_assert!(r.passed() && r.unimodular);
        prop_assert!(is_regular(&j, Exec::Sequential).unwrap().is_regular());
    }

    #[test]
    fn esd_cell_count_and_volume(m in 0usize..4, r in 1u32..6) {
        let t = edgewise_subdivision(&standard(m), r).unwrap();
        prop_assert_eq!(t.num_cells(), (r as usize).pow(m as u32));
        let f = f_vector_of(&t, &Budget::default(), Exec::Sequential).unwrap();
        let pts = (0..m as u64).fold(1u64, |acc, k| acc * (r as u64 + 1 + k) / (k + 1));
        prop_assert_eq!(f.0[1] as u64, pts);
    }
}
