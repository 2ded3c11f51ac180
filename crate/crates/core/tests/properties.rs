//! Invariants on randomly generated presentations and matrices.

use proptest::collection::vec;
use proptest::prelude::*;
use stokeslab_core::costokes::{
    build_arc_subsheaf_with, circle_cohomology, extract_stokes_data_with, filtration_stalk_with,
    realize_default,
};
use stokeslab_core::exactplane::{is_anti_stokes, is_stokes, Direction, GaussianRational};
use stokeslab_core::linalg::{block_lu, peel_factors, BlockStructure, MatQ, Subspace};
use stokeslab_core::presentation::Constr0Presentation;
use stokeslab_core::transport::Transport;
use stokeslab_core::{q, qf, Q};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn build(
    exps: &[(i64, i64)],
    dims: &[usize],
    pool: &[i64],
    base: (i64, i64),
) -> Option<Constr0Presentation> {
    let base = Direction::new(base.0, base.1)?;
    let exponents: Vec<GaussianRational> = exps.iter().map(|&(a, b)| GaussianRational::from_ints(a, b)).collect();
    let mut it = pool.iter().cycle();
    let maps = dims
        .iter()
        .map(|&di| {
            dims.iter()
                .map(|&dj| {
                    MatQ::from_rows((0..di).map(|_| (0..dj).map(|_| q(*it.next().unwrap())).collect()).collect())
                })
                .collect()
        })
        .collect();
    let p = Constr0Presentation::new(exponents, dims.to_vec(), maps, base.neg(), base).ok()?;
    let cfg = p.cfg();
    if is_stokes(&cfg, &p.base_direction) || is_anti_stokes(&cfg, &p.base_direction) {
        return None;
    }
    Some(p)
}

fn presentations() -> impl Strategy<Value = Constr0Presentation> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                vec((-3i64..=3, -3i64..=3), n),
                vec(1usize..=2, n),
                vec(-2i64..=2, 40),
                (-3i64..=3, -3i64..=3),
            )
        })
        .prop_filter_map("invalid presentation", |(e, d, pool, b)| build(&e, &d, &pool, b))
}

/// Points with quarter-integer coordinates, never equal to an exponent.
fn points() -> impl Strategy<Value = GaussianRational> {
    (-20i64..=20, -20i64..=20).prop_map(|(a, b)| {
        GaussianRational::new(q(a) / q(2) + qf(1, 4), q(b) / q(2) + qf(1, 4))
    })
}

fn directions() -> impl Strategy<Value = Direction> {
    (-5i64..=5, -5i64..=5).prop_filter_map("zero vector", |(x, y)| Direction::new(x, y))
}

fn square_matrix(n: usize) -> impl Strategy<Value = MatQ> {
    vec(-3i64..=3, n * n).prop_map(move |v| {
        MatQ::from_rows((0..n).map(|i| v[i * n..(i + 1) * n].iter().map(|&x| q(x)).collect()).collect())
    })
}

fn block_dims() -> impl Strategy<Value = Vec<usize>> {
    vec(1usize..=3, 1..=4)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn transport_is_multiplicative(p in presentations(), a in points(), b in points(), c in points()) {
        let t = Transport::new(&p);
        let ab = t.matrix(&[a.clone(), b.clone()], &[]);
        let bc = t.matrix(&[b.clone(), c.clone()], &[]);
        let abc = t.matrix(&[a, b, c], &[]);
        prop_assume!(ab.is_ok() && bc.is_ok());
        prop_assert_eq!(abc.unwrap(), bc.unwrap().mul(&ab.unwrap()));
    }

    #[test]
    fn reversed_path_inverts(p in presentations(), a in points(), b in points(), c in points()) {
        let t = Transport::new(&p);
        let fwd = t.matrix(&[a.clone(), b.clone(), c.clone()], &[]);
        prop_assume!(fwd.is_ok());
        let back = t.matrix(&[c, b, a], &[]).unwrap();
        prop_assert!(back.mul(&fwd.unwrap()).is_identity());
    }

    #[test]
    fn monodromy_determinant(p in presentations()) {
        let prod = (0..p.n()).fold(q(1), |acc: Q, i| acc * p.maps[i][i].det());
        prop_assert_eq!(p.total_monodromy().det(), prod);
    }

    #[test]
    fn elementary_fixes_the_singular_stalk(p in presentations()) {
        for k in 0..p.n() {
            let e = p.elementary_matrix(k);
            let s = p.singular_stalk(k);
            prop_assert_eq!(&e.mul(s.basis()), s.basis());
            prop_assert_eq!(s.dim(), p.total_dim() - p.dims[k]);
        }
    }

    #[test]
    fn block_lu_factors(dims in block_dims(), seed in vec(-3i64..=3, 144)) {
        let b = BlockStructure::new(dims).unwrap();
        let n = b.total();
        let t = MatQ::from_rows((0..n).map(|i| (0..n).map(|j| q(seed[i * 12 + j])).collect()).collect());
        if let Ok((s, qm)) = block_lu(&t, &b) {
            prop_assert_eq!(s.mul(&qm), t.clone());
            for i in 0..b.len() {
                for j in 0..b.len() {
                    let sb = b.get(&s, i, j);
                    let qb = b.get(&qm, i, j);
                    if i == j {
                        prop_assert!(sb.is_identity());
                    }
                    if i > j {
                        prop_assert!(sb.is_zero());
                    }
                    if i < j {
                        prop_assert!(qb.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn peeling_multiplies_back(dims in block_dims(), seed in vec(-3i64..=3, 144)) {
        let b = BlockStructure::new(dims).unwrap();
        let n = b.total();
        let t = MatQ::from_rows((0..n).map(|i| (0..n).map(|j| q(seed[i * 12 + j])).collect()).collect());
        if let Ok(f) = peel_factors(&t, &b) {
            let prod = f.iter().fold(MatQ::identity(n), |acc, x| x.mul(&acc));
            prop_assert_eq!(prod, t);
            for (k, x) in f.iter().enumerate() {
                for j in (0..b.len()).filter(|&j| j != k) {
                    let r = b.range(j);
                    prop_assert!(x.block(0, n, r.start, r.end) == MatQ::identity(n).block(0, n, r.start, r.end));
                }
            }
        }
    }

    #[test]
    fn subspace_dimension_formula(a in square_matrix(4), b in square_matrix(4), m in square_matrix(4)) {
        let sa = Subspace::span(&a.block(0, 4, 0, 2));
        let sb = Subspace::span(&b.block(0, 4, 0, 3));
        let sum = sa.sum(&sb).unwrap();
        let cap = sa.intersect(&sb).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), sa.dim() + sb.dim());
        prop_assert!(cap.is_subspace_of(&sa) && cap.is_subspace_of(&sb));
        prop_assert!(sa.is_subspace_of(&sum) && sb.is_subspace_of(&sum));
        prop_assert_eq!(Subspace::cut_out(&sa.equations()), sa.clone());
        prop_assert!(sa.image(&m).dim() <= sa.dim());
        prop_assert!(sa.preimage(&m).image(&m).is_subspace_of(&sa));
    }

    #[test]
    fn filtration_is_monotone(p in presentations(), xi in points(), theta in directions(), step in 1i64..=6) {
        let t = Transport::new(&p);
        let further = xi.add(&theta.as_point().scale(&qf(step, 2)));
        let lo = filtration_stalk_with(&t, &xi, &theta, true).unwrap();
        let lo_ns = filtration_stalk_with(&t, &xi, &theta, false).unwrap();
        let hi = filtration_stalk_with(&t, &further, &theta, true).unwrap();
        prop_assert!(lo.is_subspace_of(&lo_ns));
        prop_assert!(lo.is_subspace_of(&hi));
    }

    #[test]
    fn circle_cohomology_counts_the_stalk(p in presentations(), xi in points()) {
        let t = Transport::new(&p);
        let h = circle_cohomology(&build_arc_subsheaf_with(&t, &xi).unwrap()).unwrap();
        prop_assert_eq!(h.h0_dim(), 0);
        prop_assert_eq!(h.h1_dim(), p.stalk(&xi).dim());
    }

    #[test]
    fn stokes_data_round_trip(p in presentations(), theta in directions()) {
        let cfg = p.cfg();
        prop_assume!(!is_stokes(&cfg, &theta) && !is_anti_stokes(&cfg, &theta));
        let d = extract_stokes_data_with(&Transport::new(&p), &theta).unwrap();
        let back = realize_default(&d).unwrap();
        prop_assert_eq!(extract_stokes_data_with(&Transport::new(&back), &theta).unwrap(), d);
    }
}
