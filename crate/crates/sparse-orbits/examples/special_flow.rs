//! The special flow under a positive roof over an irrational rotation: the
//! time-C map moves points up at unit speed, identifying `(x, roof(x))`
//! with `(x + alpha, 0)`. This example exercises the flow map, the roof
//! bound, the semigroup property, and the square-orbit report against the
//! flow dictionary (Fourier modes times triangular bumps, with quadrature
//! reference integrals).
//!
//! Run: `cargo run --release --example special_flow`

use std::sync::Arc;

use num_rational::BigRational;
use sparse_orbits::diophantine::convergents_from_quotients;
use sparse_orbits::dynamics::{
    build_cocycle, CocycleSchedule, IndexSelection, RotationSystem, SpecialFlowSystem, System,
};
use sparse_orbits::equi::{equidistribution_trend, initial_point};

fn main() {
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
    let flow = SpecialFlowSystem::new(rot, cocycle, None, None).unwrap();
    println!(
        "roof = {} + g(x), min roof = {}, time step = {}",
        flow.roof_offset,
        flow.min_roof(),
        flow.time_step
    );

    // one crossing lands exactly on the next fiber's base
    let x = BigRational::new(1.into(), 3.into());
    let p = flow.point(x.clone(), 0.25).unwrap();
    let t = flow.roof(&p.x) - p.y;
    let q = flow.flow_map(&p, t).unwrap();
    println!("crossing from (1/3, 0.25) after t = {t:.6}: y' = {:.2e}", q.y);

    // semigroup: flowing t1 then t2 equals flowing t1 + t2
    let a = flow
        .flow_map(&flow.flow_map(&p, 1.7).unwrap(), 2.4)
        .unwrap();
    let b = flow.flow_map(&p, 4.1).unwrap();
    println!("semigroup deviation: {:.2e}", flow.dist(&a, &b));

    // square-orbit report against the flow dictionary
    let sys = System::Flow(flow);
    let start = initial_point(&sys, 0.37, 0.2).unwrap();
    let report =
        equidistribution_trend(&sys, &start, 2, &[500, 5_000, 50_000], 3, "flow").unwrap();
    println!("\nsquare-orbit dictionary deviations:");
    for cp in &report.checkpoints {
        println!("  N = {:5}: max |orbit avg - integral| = {:.4}", cp.n, cp.discrepancy);
    }
    println!("decreasing: {}", report.trend_decreasing);
}
