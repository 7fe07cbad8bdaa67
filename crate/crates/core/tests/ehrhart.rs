use num_bigint::BigInt;
use proptest::prelude::*;

use lappoly_core::ehrhart::{
    dilation_coefficient, dilation_coefficients, ehrhart_profile, hstar_double, hstar_interior_structural,
    hstar_simplex_fundamental, hstar_structural, is_palindromic, is_real_rooted, is_unimodal, laplacian_hstar, peak,
    HstarMethod, IntPolynomial,
};
use lappoly_core::family::interior_vertices;
use lappoly_core::polytope::LatticePolytope;
use lappoly_core::{Budget, Exec};

fn b() -> Budget {
    Budget::default()
}

#[test]
fn box_scan_counts_of_the_square_and_the_d2_polytope() {
    let sq = LatticePolytope::new(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
    let prof = ehrhart_profile(&sq, &b(), Exec::Sequential).unwrap();
    assert_eq!(prof.counts, vec![BigInt::from(1), 4.into(), 9.into()]);
    assert_eq!(prof.hstar, IntPolynomial::from_i64(&[1, 1, 0]));

    let p = lappoly_core::laplacian::reduce_full_dim(2).unwrap().polytope;
    let prof = ehrhart_profile(&p, &b(), Exec::Parallel).unwrap();
    assert_eq!(prof.counts, vec![BigInt::from(1), 13.into(), 41.into()]);
    assert_eq!(prof.hstar, IntPolynomial::from_i64(&[1, 10, 5]));
}

#[test]
fn unit_cube_volume() {
    let cube: Vec<Vec<i64>> = (0..8).map(|m| (0..3).map(|k| (m >> k) & 1).collect()).collect();
    let p = LatticePolytope::new(cube).unwrap();
    assert_eq!(p.normalized_volume().unwrap(), BigInt::from(6));
    let h = ehrhart_profile(&p, &b(), Exec::Parallel).unwrap().hstar;
    assert_eq!(h, IntPolynomial::from_i64(&[1, 4, 1, 0]));
}

#[test]
fn parallelepiped_agrees_with_box_scan_on_random_looking_simplices() {
    let simplices = [
        vec![vec![0, 0, 0], vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]],
        vec![vec![1, -1], vec![3, 2], vec![-2, 1]],
        vec![vec![0, 0, 0, 0], vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![1, 0, 0, 3]],
    ];
    for s in simplices {
        let p = LatticePolytope::new(s.clone()).unwrap();
        let scan = ehrhart_profile(&p, &b(), Exec::Parallel).unwrap().hstar;
        let fund = hstar_simplex_fundamental(&s, &b(), Exec::Parallel).unwrap();
        assert_eq!(scan, fund, "{s:?}");
        assert_eq!(fund.sum(), p.normalized_volume().unwrap());
    }
}

#[test]
fn methods_agree_for_small_d() {
    for d in 1..=4 {
        let s = laplacian_hstar(d, HstarMethod::Structural, &b(), Exec::Parallel).unwrap();
        assert_eq!(laplacian_hstar(d, HstarMethod::Census, &b(), Exec::Parallel).unwrap(), s, "census d={d}");
        assert_eq!(laplacian_hstar(d, HstarMethod::Ehrhart, &b(), Exec::Parallel).unwrap(), s, "ehrhart d={d}");
    }
    assert!(laplacian_hstar(2, HstarMethod::Fundamental, &b(), Exec::Parallel).is_err());
}

#[test]
fn interior_polytope_hstar_is_symmetric_and_unimodal() {
    for d in (2..=8).step_by(2) {
        let h = hstar_interior_structural(d, &b(), Exec::Parallel).unwrap();
        assert!(is_palindromic(&h, d), "d={d} {h}");
        assert!(is_unimodal(&h), "d={d} {h}");
        assert_eq!(h.sum(), BigInt::from((d + 2) / 2).pow(d as u32));
        assert_eq!(hstar_double(&h, d), hstar_structural(d, &b(), Exec::Parallel).unwrap());
    }
}

#[test]
fn interior_polytope_volume_by_pulling() {
    for d in [2, 4] {
        let q = LatticePolytope::new(interior_vertices(d).unwrap()).unwrap();
        assert_eq!(q.normalized_volume().unwrap(), BigInt::from((d + 2) / 2).pow(d as u32));
        let scan = ehrhart_profile(&q, &b(), Exec::Parallel).unwrap().hstar;
        assert_eq!(scan, hstar_interior_structural(d, &b(), Exec::Parallel).unwrap());
    }
}

#[test]
fn peak_and_tail() {
    for d in 1..=8 {
        let h = hstar_structural(d, &b(), Exec::Parallel).unwrap();
        let dim = h.len() - 1;
        assert_eq!(peak(&h), dim.div_ceil(2), "d={d} {h}");
        let c = h.coeffs();
        assert!(c[peak(&h)..].windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn even_real_rootedness_status() {
    // Reported, not asserted: no proof is known for even d.
    for d in [2, 4, 6, 8, 10] {
        let h = hstar_structural(d, &b(), Exec::Parallel).unwrap();
        let rr = is_real_rooted(&h).unwrap();
        println!("d={d}: real-rooted={rr} {h}");
    }
}

#[test]
fn dilation_coefficient_sign_pattern() {
    for d in 0..=12usize {
        for i in 0..(d + 1).div_ceil(2) {
            let r = dilation_coefficients(d, i);
            for (j, rj) in r.iter().enumerate() {
                let threshold = 2 * (2 * i as i64 + 2) - (d as i64 + 3);
                assert_eq!(*rj >= BigInt::from(0), 2 * j as i64 >= threshold, "d={d} i={i} j={j}");
            }
        }
    }
    assert_eq!(dilation_coefficient(2, 0, 5), BigInt::from(0));
    assert_eq!(dilation_coefficient(2, 0, -1), BigInt::from(-2));
}

fn symmetric_unimodal() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1usize..=12).prop_flat_map(|d| {
        let half = d / 2 + 1;
        prop::collection::vec(0i64..50, half).prop_map(move |steps| {
            let mut first = Vec::with_capacity(half);
            let mut acc = 0;
            for s in steps {
                acc += s;
                first.push(acc);
            }
            let h: Vec<i64> = (0..=d).map(|i| first[i.min(d - i)]).collect();
            (d, h)
        })
    })
}

proptest! {
    #[test]
    fn doubling_keeps_first_half_monotone((d, h) in symmetric_unimodal()) {
        let c = hstar_double(&IntPolynomial::from_i64(&h), d);
        let k = d.div_ceil(2);
        prop_assert!(c.coeffs()[..=k].windows(2).all(|w| w[0] <= w[1]), "{:?} -> {}", h, c);
    }

    #[test]
    fn counts_and_hstar_round_trip(h in prop::collection::vec(0i64..20, 1..6)) {
        let mut h = h;
        h[0] = 1;
        let dim = h.len() - 1;
        // E(n) = sum_i h_i C(n + dim - i, dim)
        let counts: Vec<BigInt> = (0..=dim as i64)
            .map(|n| h.iter().enumerate().map(|(i, &x)| lappoly_core::arith::binomial(n + dim as i64 - i as i64, dim as i64) * x).sum())
            .collect();
        let back = lappoly_core::ehrhart::hstar_from_counts(&counts, dim).unwrap();
        prop_assert_eq!(back, IntPolynomial::from_i64(&h));
    }
}
