//! The two-point example, each value checked against arithmetic done by hand
//! in the test rather than through the library.

use stokeslab_core::costokes::{
    build_arc_subsheaf, circle_cohomology, extract_stokes_data, filtration_stalk, good_interval_splitting,
    realize_default,
};
use stokeslab_core::decomp::{compare_decompositions, trivial_stokes_check, Comparison, TrivialCheck};
use stokeslab_core::exactplane::{Direction, GaussianRational, HalfPlane};
use stokeslab_core::linalg::{block_lu, peel_factors, MatQ, Subspace};
use stokeslab_core::presentation::Constr0Presentation;
use stokeslab_core::transport::{halfplane_sections, segment_crossings, transport_matrix, Polyline};
use stokeslab_core::{q, qf, Q};

fn e2() -> Constr0Presentation {
    Constr0Presentation::two_point_example()
}

fn d(x: i64, y: i64) -> Direction {
    Direction::new(x, y).unwrap()
}

fn z(a: i64, b: i64) -> GaussianRational {
    GaussianRational::from_ints(a, b)
}

/// Plain 2×2 product on nested arrays.
fn mul2(a: [[Q; 2]; 2], b: [[Q; 2]; 2]) -> [[Q; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn to_mat(a: [[Q; 2]; 2]) -> MatQ {
    MatQ::from_rows(a.iter().map(|r| r.to_vec()).collect())
}

fn arr(rows: [[i64; 2]; 2]) -> [[Q; 2]; 2] {
    rows.map(|r| r.map(q))
}

#[test]
fn elementary_matrices_place_the_columns() {
    let p = e2();
    // Column 1 holds (T_11, T_21), column 2 holds (T_12, T_22).
    assert_eq!(p.elementary_matrix(0), to_mat(arr([[2, 0], [5, 1]])));
    assert_eq!(p.elementary_matrix(1), to_mat(arr([[1, 1], [0, 3]])));
}

#[test]
fn total_monodromy_is_the_product() {
    let expected = mul2(arr([[1, 1], [0, 3]]), arr([[2, 0], [5, 1]]));
    assert_eq!(to_mat(expected.clone()), to_mat(arr([[7, 1], [15, 3]])));
    assert_eq!(e2().total_monodromy(), to_mat(expected));
}

#[test]
fn block_lu_matches_hand_elimination() {
    let t = to_mat(arr([[7, 1], [15, 3]]));
    let (s, qm) = block_lu(&t, &e2().blocks()).unwrap();
    // Eliminating the last pivot 3: S_12 = 1/3, Q_11 = 7 - (1/3)·15 = 2.
    let s_hand = [[q(1), qf(1, 3)], [q(0), q(1)]];
    let q_hand = [[q(7) - qf(1, 3) * q(15), q(0)], [q(15), q(3)]];
    assert_eq!(to_mat(mul2(s_hand.clone(), q_hand.clone())), t);
    assert_eq!(s, to_mat(s_hand));
    assert_eq!(qm, to_mat(q_hand));
    assert_eq!(qm, to_mat(arr([[2, 0], [15, 3]])));
}

#[test]
fn peeling_recovers_the_factors() {
    let t = to_mat(arr([[7, 1], [15, 3]]));
    let f = peel_factors(&t, &e2().blocks()).unwrap();
    assert_eq!(f[1], to_mat(arr([[1, 1], [0, 3]])));
    assert_eq!(f[0], to_mat(arr([[2, 0], [5, 1]])));
}

#[test]
fn stokes_data_at_the_diagonal() {
    let sd = extract_stokes_data(&e2(), &d(1, 1)).unwrap();
    assert_eq!(sd.s, to_mat([[q(1), qf(1, 3)], [q(0), q(1)]]));
    assert_eq!(sd.q, to_mat(arr([[2, 0], [15, 3]])));
    assert_eq!(sd.exponents, vec![z(0, 0), z(1, 0)]);
    // Realizing at the same direction gives back the original maps, with
    // cuts pointing along -θ.
    let back = realize_default(&sd).unwrap();
    assert_eq!(back.maps, e2().maps);
    assert_eq!(back.cut_direction, d(-1, -1));
    assert_eq!(back.base_direction, d(1, 1));
}

#[test]
fn crossing_words() {
    let below = Polyline::from_ints(&[(-1, -1), (2, -1)]).unwrap();
    assert_eq!(segment_crossings(&e2(), &below).unwrap(), vec![(0, 1), (1, 1)]);
    assert_eq!(transport_matrix(&e2(), &below).unwrap(), to_mat(arr([[7, 1], [15, 3]])));
    let above = Polyline::from_ints(&[(-1, 1), (2, 1)]).unwrap();
    assert!(segment_crossings(&e2(), &above).unwrap().is_empty());
}

#[test]
fn stalks_drop_the_local_coordinates() {
    let p = e2();
    assert_eq!(p.stalk(&z(5, 0)), Subspace::full(2));
    assert_eq!(p.stalk(&z(0, 0)), Subspace::coordinate(2, [1]));
    assert_eq!(p.stalk(&z(1, 0)), Subspace::coordinate(2, [0]));
}

#[test]
fn halfplane_dimensions_count_missing_exponents() {
    let p = e2();
    assert!(halfplane_sections(&p, &HalfPlane::closed(z(-5, 0), d(1, 0))).unwrap().is_zero());
    assert_eq!(halfplane_sections(&p, &HalfPlane::closed(z(5, 0), d(1, 0))).unwrap().dim(), 2);
    let left = HalfPlane::closed(GaussianRational::new(qf(1, 2), q(0)), d(-1, 0));
    assert_eq!(halfplane_sections(&p, &left).unwrap().dim(), 1);
}

#[test]
fn filtration_examples() {
    let p = e2();
    assert_eq!(filtration_stalk(&p, &z(10, 10), &d(1, 1), true).unwrap().dim(), 2);
    assert!(filtration_stalk(&p, &z(0, 0), &d(1, 1), true).unwrap().is_zero());
    assert_eq!(filtration_stalk(&p, &z(0, 0), &d(-1, -1), true).unwrap().dim(), 1);
}

#[test]
fn cohomology_at_the_origin() {
    let a = build_arc_subsheaf(&e2(), &z(0, 0)).unwrap();
    let h = circle_cohomology(&a).unwrap();
    assert_eq!(h.h0_dim(), 0);
    assert_eq!(h.h1_dim(), 1);
}

#[test]
fn splitting_and_decompositions() {
    let v = good_interval_splitting(&e2(), &d(1, 1)).unwrap();
    assert_eq!(v.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![1, 1]);
    assert_eq!(v[0].sum(&v[1]).unwrap(), Subspace::full(2));
    assert_eq!(compare_decompositions(&e2(), &d(1, 1)).unwrap(), Comparison::Agree);
    assert_eq!(trivial_stokes_check(&e2()), TrivialCheck::NotApplicable);
}
