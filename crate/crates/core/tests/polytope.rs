use std::collections::BTreeSet;

use lappoly_core::complex::SimplicialComplex;
use lappoly_core::family::{odd_reduced_halfspaces, reduced_vertices};
use lappoly_core::laplacian::{laplacian_polytope, reduce_full_dim, reduce_general};
use lappoly_core::polytope::{cyclic_polytope, gale_facets, Halfspace};
use lappoly_core::{Budget, Exec};

#[test]
fn odd_polytope_is_a_simplex_with_known_facets() {
    for d in [1, 3, 5] {
        let p = reduce_full_dim(d).unwrap().polytope;
        assert_eq!(p.vertices().len(), d + 2);
        assert!(p.is_simplicial().unwrap());
        let got: BTreeSet<Halfspace> = p.halfspaces().unwrap().into_iter().collect();
        let want: BTreeSet<Halfspace> = odd_reduced_halfspaces(d).unwrap().into_iter().collect();
        assert_eq!(got, want, "d={d}");
    }
}

#[test]
fn even_vertices_match_closed_form() {
    for d in [2, 4, 6] {
        let p = reduce_full_dim(d).unwrap().polytope;
        let got: BTreeSet<Vec<i64>> = p.vertices().iter().cloned().collect();
        let want: BTreeSet<Vec<i64>> = reduced_vertices(d).unwrap().into_iter().collect();
        assert_eq!(got, want);
    }
}

#[test]
fn reduction_agrees_with_general_reduction() {
    for d in 1..=5 {
        let p = laplacian_polytope(&SimplicialComplex::boundary_of_simplex(d + 1), d).unwrap().polytope;
        let general = reduce_general(p.points()).unwrap().polytope;
        let special = reduce_full_dim(d).unwrap().polytope;
        assert_eq!(general.dim(), d + d % 2);
        assert_eq!(general.dim(), special.dim());
        assert_eq!(general.facets().unwrap().len(), special.facets().unwrap().len());
    }
}

#[test]
fn square_interior_point_is_unique() {
    let p = reduce_full_dim(2).unwrap().polytope;
    let inner = p.lattice_points_list(1, true, &Budget::default(), Exec::default()).unwrap();
    assert_eq!(inner.len(), 5);
    let q = p.interior_polytope(&Budget::default(), Exec::default()).unwrap().unwrap();
    let strict = q.lattice_points_list(1, true, &Budget::default(), Exec::default()).unwrap();
    assert_eq!(strict, vec![vec![1, 1]]);
}

#[test]
fn cyclic_polytopes_follow_gale_evenness() {
    for (d, n) in [(2, 5), (3, 6), (4, 6), (4, 7)] {
        let c = cyclic_polytope(d, n).unwrap();
        let got: BTreeSet<Vec<usize>> = c.facets().unwrap().iter().map(|f| f.vertices.clone()).collect();
        let want: BTreeSet<Vec<usize>> = gale_facets(d, n).into_iter().collect();
        assert_eq!(got, want, "C({d}, {n})");
    }
}
