//! The headline experiment: square orbits `T^(i^2)(x, y)` of the rigid skew
//! product spread over the two-torus, and the Fourier discrepancy falls as
//! the orbit grows.
//!
//! Run: `cargo run --release --example skew_square_orbit`

use std::sync::Arc;

use sparse_orbits::cli::CounterRng;
use sparse_orbits::diophantine::convergents_from_quotients;
use sparse_orbits::dynamics::{
    build_cocycle, CocycleSchedule, IndexSelection, RotationSystem, SkewProductSystem, System,
};
use sparse_orbits::equi::{equidistribution_trend, initial_point};

fn main() {
    // a large second quotient puts the active cocycle frequency right in
    // the window that square orbits of length 1e3..1e5 explore
    let cf = Arc::new(
        convergents_from_quotients(vec![0u64, 2, 20_000_000, 3, 2, 6, 1, 4]).unwrap(),
    );
    let cocycle = build_cocycle(
        &cf,
        &CocycleSchedule {
            lower_set: IndexSelection::none(),
        },
    )
    .unwrap();
    let rot = RotationSystem::new(cf.clone());
    let sys = System::Skew(SkewProductSystem::new(rot, cocycle));

    let rng = CounterRng::new(0xC0FFEE);
    for s in 0..3u64 {
        let start = initial_point(&sys, rng.unit(2 * s), rng.unit(2 * s + 1)).unwrap();
        let report = equidistribution_trend(
            &sys,
            &start,
            2,
            &[1_000, 10_000, 100_000],
            5,
            &format!("start-{s}"),
        )
        .unwrap();
        println!(
            "start {s} at (x, y) = ({:.4}, {:.4}):",
            report.start_x,
            report.start_y.unwrap()
        );
        for cp in &report.checkpoints {
            println!("  N = {:6}: discrepancy (K = 5) = {:.4}", cp.n, cp.discrepancy);
        }
        let first = report.checkpoints.first().unwrap().discrepancy;
        let last = report.checkpoints.last().unwrap().discrepancy;
        println!(
            "  ratio disc(1e5)/disc(1e3) = {:.3} (decreasing: {})",
            last / first,
            report.trend_decreasing
        );
    }
}
