//! Builds the rigid cosine cocycle over a fast-growing rotation number and
//! measures its rigidity: the grid sup of `|S_{q_n}(g)|` times
//! `q_{n+1}^{4/5}` stays below 1 and decreases, and the rigidity profile
//! `max_{t <= q_{n+1}^{4/5}} sup_x d(x, T^{t q_n} x)` decreases in `n`.
//!
//! Run: `cargo run --release --example rigid_cocycle`

use std::sync::Arc;

use sparse_orbits::cli::pow_floor;
use sparse_orbits::diophantine::power_rule_cf;
use sparse_orbits::dynamics::{
    build_cocycle, cocycle_rigidity_series, rigidity_profile, CocycleSchedule, IndexSelection,
    RotationSystem, SkewProductSystem, System,
};

fn main() {
    let cf = Arc::new(power_rule_cf(6, 8, 3).unwrap());
    let schedule = CocycleSchedule {
        lower_set: IndexSelection::all(),
    };
    let cocycle = build_cocycle(&cf, &schedule).unwrap();
    println!(
        "cocycle over q_(n+1) ~ q_n^6: {} terms, boundary amplitudes at {:?}",
        cocycle.terms.len(),
        cocycle.boundary_indices
    );

    println!("\ngrid sup of |S_(q_n)(g)| * q_(n+1)^(4/5) (10^4-point grid):");
    let series = cocycle_rigidity_series(&cf, &cocycle, 10_000).unwrap();
    for e in &series {
        println!(
            "  n = {}: product = {:.6e} (log2 = {:.2})",
            e.index,
            e.log2_product.exp2(),
            e.log2_product
        );
    }

    let rot = RotationSystem::new(cf.clone());
    let sys = System::Skew(SkewProductSystem::new(rot, cocycle));
    println!("\nrigidity profile at t_max = floor(q_(n+1)^(4/5)):");
    for n in 1..=5usize {
        let q = cf.denominator(n).clone();
        let t_max = pow_floor(cf.denominator(n + 1), 0.8);
        let v = rigidity_profile(&sys, &q, &t_max, 1024).unwrap();
        println!(
            "  n = {n}: value = {:.6e} (log2 = {:.2}, {:?})",
            v.value, v.log2, v.mode
        );
    }
}
