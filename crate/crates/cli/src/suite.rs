//! The invariant suite behind `selftest` and the acceptance tests: seeded
//! instances checked against every property the theory predicts, tallied per
//! criterion.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stokeslab_core::canonical::{char_poly, invariant_factors};
use stokeslab_core::costokes::{
    build_arc_subsheaf_with, circle_cohomology, extract_stokes_data, extract_stokes_data_with,
    filtration_stalk_with, realize_presentation, StokesData,
};
use stokeslab_core::decomp::{
    compare_decompositions_with, embedded_stalks_with, far_point, rebase_presentation_with,
    transport_stability_with, trivial_stokes_check, vanishing_cycle_decomposition_with, Comparison,
    Stability, TrivialCheck,
};
use stokeslab_core::exactplane::{
    crossing_directions, is_anti_stokes, is_stokes, stokes_directions, Direction, GaussianRational,
};
use stokeslab_core::linalg::{block_lu, peel_factors, BlockStructure, MatQ};
use stokeslab_core::presentation::Constr0Presentation;
use stokeslab_core::transport::Transport;
use stokeslab_core::{q, qf};

use crate::generate::{gen_random, random_direction, GeneratorSpec};

pub const CRITERIA: [&str; 10] = [
    "round trip realize/extract",
    "vanishing H0 of the circle sheaf",
    "dim H1 equals stalk dimension",
    "two half-plane dimension identity",
    "graded pieces similar to diagonal blocks",
    "Stokes and vanishing cycle decompositions agree",
    "trivial monodromy gives trivial data",
    "far-point transport stability",
    "Euler identity",
    "two-point worked example",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub instances: usize,
    pub seed: u64,
    /// Sampled directions per instance.
    pub directions: usize,
    /// Sampled nonsingular points per instance.
    pub grid_points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { instances: 500, seed: 0, directions: 8, grid_points: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.checks > 0 && self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<48} {} ({} checks, {} failures)",
            self.id,
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.failures.len()
        )
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    checks: [usize; 10],
    failures: [Vec<String>; 10],
}

impl Tally {
    fn check(&mut self, crit: usize, ok: bool, what: impl FnOnce() -> String) {
        self.checks[crit - 1] += 1;
        if !ok {
            self.failures[crit - 1].push(what());
        }
    }

    fn fail(&mut self, crit: usize, what: String) {
        self.checks[crit - 1] += 1;
        self.failures[crit - 1].push(what);
    }

    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..10 {
            self.checks[i] += other.checks[i];
            self.failures[i].extend(other.failures[i].iter().cloned());
        }
        self
    }
}

/// The generator spec of instance `k`: sizes cycle through `n ≤ 5` and block
/// dimensions `≤ 4`.
pub fn instance_spec(cfg: &SuiteConfig, k: usize) -> GeneratorSpec {
    GeneratorSpec::new(cfg.seed.wrapping_add(k as u64), 1 + k % 5, 1 + (k / 5) % 4)
}

/// Distinct directions that are neither Stokes nor anti-Stokes.
pub fn sample_directions(p: &Constr0Presentation, rng: &mut ChaCha8Rng, count: usize) -> Vec<Direction> {
    let cfg = p.cfg();
    let mut out: Vec<Direction> = Vec::with_capacity(count);
    for _ in 0..10_000 {
        if out.len() == count {
            break;
        }
        let d = random_direction(rng, 7);
        if !is_stokes(&cfg, &d) && !is_anti_stokes(&cfg, &d) && !out.contains(&d) {
            out.push(d);
        }
    }
    out
}

/// Distinct nonsingular points on a half-integer grid.
pub fn sample_points(p: &Constr0Presentation, rng: &mut ChaCha8Rng, count: usize) -> Vec<GaussianRational> {
    let mut out: Vec<GaussianRational> = Vec::with_capacity(count);
    for _ in 0..10_000 {
        if out.len() == count {
            break;
        }
        let z = GaussianRational::new(qf(rng.gen_range(-9..=9), 2), qf(rng.gen_range(-9..=9), 2));
        if !p.exponents.contains(&z) && !out.contains(&z) {
            out.push(z);
        }
    }
    out
}

fn similar_blocks(a: &MatQ, b: &MatQ) -> bool {
    char_poly(a) == char_poly(b) && invariant_factors(a) == invariant_factors(b)
}

fn check_instance(cfg: &SuiteConfig, k: usize) -> Tally {
    let mut t = Tally::default();
    let spec = instance_spec(cfg, k);
    let p = match gen_random(&spec) {
        Ok(p) => p,
        Err(e) => {
            t.fail(9, format!("instance {k}: generator failed: {e}"));
            return t;
        }
    };
    let tag = |what: &str| format!("instance {k} (seed {}): {what}", spec.seed);
    let tr = Transport::new(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9e37_79b9_7f4a_7c15);
    let dirs = sample_directions(&p, &mut rng, cfg.directions);
    if dirs.len() < cfg.directions {
        t.fail(1, tag("too few valid directions"));
    }
    let n_tot = p.total_dim();

    // Euler identity.
    let euler: usize = (0..p.n()).map(|i| n_tot - p.stalk(&p.exponents[i]).dim()).sum();
    t.check(9, p.validate().is_ok() && euler == n_tot, || tag("Euler identity"));

    for theta in &dirs {
        // Round trips and graded pieces.
        match roundtrip_at(&tr, theta) {
            Ok((d, ok_realize, ok_extract)) => {
                t.check(1, ok_realize, || tag(&format!("realize ∘ extract at {theta}")));
                t.check(1, ok_extract, || tag(&format!("extract ∘ realize at {theta}")));
                let b = d.blocks();
                for (i, c) in d.exponents.iter().enumerate() {
                    let orig = p.exponents.iter().position(|x| x == c).expect("same exponents");
                    let qi = b.get(&d.q, i, i);
                    t.check(5, similar_blocks(&qi, &p.maps[orig][orig]), || {
                        tag(&format!("Q_{} at {theta}", i + 1))
                    });
                }
            }
            Err(e) => t.fail(1, tag(&format!("round trip at {theta}: {e}"))),
        }
    }

    // Decomposition agreement, including Stokes directions that are not
    // anti-Stokes.
    let cfgx = p.cfg();
    let mut dec_dirs = dirs.clone();
    dec_dirs.extend(stokes_directions(&cfgx).into_iter().filter(|d| !is_anti_stokes(&cfgx, d)).take(2));
    for theta in &dec_dirs {
        match compare_decompositions_with(&tr, theta) {
            Ok(c) => t.check(6, c == Comparison::Agree, || tag(&format!("decompositions at {theta}: {c:?}"))),
            Err(e) => t.fail(6, tag(&format!("decompositions at {theta}: {e}"))),
        }
        match (vanishing_cycle_decomposition_with(&tr, theta), embedded_stalks_with(&tr, theta)) {
            (Ok(v), Ok(st)) => {
                for i in 0..p.n() {
                    t.check(6, st[i] == v.complement_sum(i), || {
                        tag(&format!("embedded stalk {} at {theta}", i + 1))
                    });
                }
            }
            (Err(e), _) | (_, Err(e)) => t.fail(6, tag(&format!("vanishing cycles at {theta}: {e}"))),
        }
    }

    // Circle cohomology at exponents and at nonsingular points.
    let mut xis = p.exponents.clone();
    xis.extend(sample_points(&p, &mut rng, cfg.grid_points));
    for xi in &xis {
        let stalk_dim = p.stalk(xi).dim();
        let h = build_arc_subsheaf_with(&tr, xi).and_then(|a| circle_cohomology(&a));
        let h = match h {
            Ok(h) => h,
            Err(e) => {
                t.fail(2, tag(&format!("cohomology at {xi}: {e}")));
                continue;
            }
        };
        t.check(2, h.h0_dim() == 0, || tag(&format!("H0 at {xi} has dimension {}", h.h0_dim())));
        t.check(3, h.h1_dim() == stalk_dim, || {
            tag(&format!("dim H1 at {xi} is {}, stalk {}", h.h1_dim(), stalk_dim))
        });
        let crossing = crossing_directions(xi, &cfgx);
        for theta in dirs.iter().filter(|d| !crossing.contains(d)).take(4) {
            let a = filtration_stalk_with(&tr, xi, theta, true);
            let b = filtration_stalk_with(&tr, xi, &theta.neg(), true);
            match (a, b) {
                (Ok(a), Ok(b)) => t.check(4, a.dim() + b.dim() == h.h1_dim(), || {
                    tag(&format!("half-planes at {xi}, {theta}: {} + {} vs {}", a.dim(), b.dim(), h.h1_dim()))
                }),
                (Err(e), _) | (_, Err(e)) => t.fail(4, tag(&format!("filtration at {xi}: {e}"))),
            }
        }
    }

    // Trivial Stokes: the instance itself when its monodromy is trivial, and
    // the trivial data on the same exponents.
    if tr.monodromy().is_identity() {
        t.check(7, trivial_stokes_check(&p) == TrivialCheck::Pass, || tag("trivial monodromy"));
    }
    match Constr0Presentation::trivial(p.exponents.clone(), p.dims.clone(), p.cut_direction.clone(), p.base_direction.clone()) {
        Ok(triv) => {
            t.check(7, trivial_stokes_check(&triv) == TrivialCheck::Pass, || tag("trivial data"));
            if let Some(theta) = dirs.first() {
                let ok = extract_stokes_data(&triv, theta)
                    .map(|d| d.s.is_identity() && d.q.is_identity())
                    .unwrap_or(false);
                t.check(7, ok, || tag("trivial data has trivial Stokes data"));
            }
        }
        Err(e) => t.fail(7, tag(&format!("trivial data: {e}"))),
    }

    // Transport stability between far points.
    for theta in dirs.iter().take(2) {
        let a = far_point(&tr, theta);
        let mut partners = vec![a.clone()];
        for _ in 0..50 {
            if partners.len() == 4 {
                break;
            }
            let b = a.add(&GaussianRational::from_ints(rng.gen_range(-6..=6), rng.gen_range(-6..=6)));
            if tr.beyond_all(&b, theta) && !partners.contains(&b) {
                partners.push(b);
            }
        }
        for b in &partners {
            match transport_stability_with(&tr, theta, &a, b) {
                Ok(r) => t.check(8, r.verdict == Stability::Preserved, || {
                    tag(&format!("stability {a} -> {b} at {theta}: {:?}", r.failing))
                }),
                Err(e) => t.fail(8, tag(&format!("stability {a} -> {b} at {theta}: {e}"))),
            }
        }
    }
    t
}

/// `(D, realize ∘ extract agrees with the rebased presentation,
/// extract ∘ realize returns D)`.
fn roundtrip_at(tr: &Transport, theta: &Direction) -> Result<(StokesData, bool, bool), String> {
    let d = extract_stokes_data_with(tr, theta).map_err(|e| e.to_string())?;
    let back = realize_presentation(&d, &theta.neg(), theta).map_err(|e| e.to_string())?;
    let rebased = rebase_presentation_with(tr, theta).map_err(|e| e.to_string())?;
    let again = extract_stokes_data(&back, theta).map_err(|e| e.to_string())?;
    Ok((d.clone(), back == rebased, again == d))
}

/// All compositions of `total` into positive parts.
fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn check_identity_peeling(t: &mut Tally) {
    for total in 1..=12 {
        for dims in compositions(total) {
            let b = BlockStructure::new(dims.clone()).expect("positive");
            let ok = peel_factors(&MatQ::identity(total), &b)
                .map(|f| f.iter().all(|m| m.is_identity()))
                .unwrap_or(false);
            t.check(7, ok, || format!("peeling the identity with blocks {dims:?}"));
        }
    }
}

/// The two-point example, each value checked against an independent
/// computation.
pub fn worked_example_checks() -> Vec<(String, bool)> {
    let p = Constr0Presentation::two_point_example();
    let m = |r: &[&[i64]]| MatQ::from_i64(r);
    let mut out = Vec::new();
    let t_inf = p.total_monodromy();
    out.push(("T_inf = [[7,1],[15,3]]".to_string(), t_inf == m(&[&[7, 1], &[15, 3]])));
    let b = p.blocks();
    let ok = match block_lu(&t_inf, &b) {
        Ok((s, qm)) => {
            s == MatQ::from_rows(vec![vec![q(1), qf(1, 3)], vec![q(0), q(1)]]) && qm == m(&[&[2, 0], &[15, 3]])
        }
        Err(_) => false,
    };
    out.push(("S = [[1,1/3],[0,1]], Q = [[2,0],[15,3]]".to_string(), ok));
    let ok = match extract_stokes_data(&p, &Direction::new(1, 1).expect("nonzero")) {
        Ok(d) => d.s == MatQ::from_rows(vec![vec![q(1), qf(1, 3)], vec![q(0), q(1)]]) && d.q == m(&[&[2, 0], &[15, 3]]),
        Err(_) => false,
    };
    out.push(("Stokes data at (1,1) is (S, Q)".to_string(), ok));
    let ok = match peel_factors(&t_inf, &b) {
        Ok(f) => f[1] == m(&[&[1, 1], &[0, 3]]) && f[0] == m(&[&[2, 0], &[5, 1]]),
        Err(_) => false,
    };
    out.push(("peeled T_2 = [[1,1],[0,3]], T_1 = [[2,0],[5,1]]".to_string(), ok));
    let ok = build_arc_subsheaf_with(&Transport::new(&p), &GaussianRational::from_ints(0, 0))
        .and_then(|a| circle_cohomology(&a))
        .map(|h| h.h1_dim() == 1 && h.h0_dim() == 0)
        .unwrap_or(false);
    out.push(("dim H1 at 0 is 1".to_string(), ok));
    out
}

pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    let per_instance: Vec<Tally> = (0..cfg.instances).into_par_iter().map(|k| check_instance(cfg, k)).collect();
    let mut t = per_instance.into_iter().fold(Tally::default(), Tally::merge);
    check_identity_peeling(&mut t);
    for (what, ok) in worked_example_checks() {
        t.check(10, ok, || what.clone());
    }
    (0..10)
        .map(|i| CriterionResult {
            id: i + 1,
            name: CRITERIA[i],
            checks: t.checks[i],
            failures: std::mem::take(&mut t.failures[i]),
        })
        .collect()
}
