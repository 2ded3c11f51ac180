//! The ten acceptance criteria on the default suite of 500 seeded instances.
//! Prints one PASS/FAIL line per criterion.

use std::time::Instant;

use stokeslab::suite::{run_suite, worked_example_checks, SuiteConfig, CRITERIA};
use stokeslab_core::linalg::MatQ;
use stokeslab_core::presentation::Constr0Presentation;
use stokeslab_core::{q, qf, Q};

/// The two-point example's products and factorization redone with scalar
/// arithmetic only.
fn example_oracle() -> bool {
    let p = Constr0Presentation::two_point_example();
    let t = |i: usize, j: usize| p.maps[i][j][(0, 0)].clone();
    // E_1 = [[T11, 0], [T21, 1]], E_2 = [[1, T12], [0, T22]], T = E_2·E_1.
    let e1 = [[t(0, 0), q(0)], [t(1, 0), q(1)]];
    let e2 = [[q(1), t(0, 1)], [q(0), t(1, 1)]];
    let m = |i: usize, j: usize| &e2[i][0] * &e1[0][j] + &e2[i][1] * &e1[1][j];
    let total: [[Q; 2]; 2] = [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]];
    let s12 = &total[0][1] / &total[1][1];
    let q11 = &total[0][0] - &s12 * &total[1][0];
    let rows = |a: [[Q; 2]; 2]| MatQ::from_rows(a.iter().map(|r| r.to_vec()).collect());
    total == [[q(7), q(1)], [q(15), q(3)]]
        && s12 == qf(1, 3)
        && q11 == q(2)
        && p.total_monodromy() == rows(total.clone())
        && p.elementary_matrix(0) == rows(e1)
        && p.elementary_matrix(1) == rows(e2)
}

fn main() {
    let cfg = SuiteConfig::default();
    assert!(cfg.instances >= 500 && cfg.directions >= 8 && cfg.grid_points >= 8);
    let start = Instant::now();
    let results = run_suite(&cfg);
    let elapsed = start.elapsed();
    let oracle = example_oracle();
    let suite_example = worked_example_checks().iter().all(|(_, ok)| *ok);
    assert_eq!(results.len(), CRITERIA.len());
    let mut all = true;
    for r in &results {
        let ok = if r.id == 10 { r.passed() && oracle && suite_example } else { r.passed() };
        all &= ok;
        println!("{}", r.line());
        for f in r.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    println!("example oracle {}", if oracle { "PASS" } else { "FAIL" });
    println!("{} instances in {:.1?}", cfg.instances, elapsed);
    if !all {
        eprintln!("some acceptance criteria failed");
        std::process::exit(1);
    }
}
