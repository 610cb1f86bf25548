//! Power-residue-weighted ergodic averages along rigid denominators: the
//! average `(1/n) sum_i Pow_n(i) f(T^i x)` shrinks along the convergent
//! denominators of a fast-growing rotation number, and the direct weighting
//! agrees with the scaled-character route to 1e-8.
//!
//! Run: `cargo run --release --example weighted_averages`

use std::sync::Arc;

use sparse_orbits::diophantine::power_rule_cf;
use sparse_orbits::dynamics::{RotationSystem, System};
use sparse_orbits::equi::{
    initial_point, weighted_pow_average, weighted_pow_average_via_combo, TestFunction,
};

fn main() {
    // q: 1, 2, 5, 27, 734, 538783
    let cf = Arc::new(power_rule_cf(2, 12, 2).unwrap());
    let denominators: Vec<u64> = (1..=5)
        .map(|n| cf.denominator(n).try_into().unwrap())
        .collect();
    let sys = System::Rotation(RotationSystem::new(cf));
    let start = initial_point(&sys, 0.41, 0.0).unwrap();
    let f = TestFunction::CircleMode { k: 1 };

    println!("|weighted average| along the denominator sequence {denominators:?}:");
    for &q in &denominators {
        let direct = weighted_pow_average(&sys, &start, &f, 2, q).unwrap();
        println!("  n = q = {q:6}: |avg| = {:.6}", direct.norm());
    }

    println!("\ndual-route agreement (direct weights vs scaled-character combination):");
    for &q in &denominators[..4] {
        let direct = weighted_pow_average(&sys, &start, &f, 2, q).unwrap();
        let combo = weighted_pow_average_via_combo(&sys, &start, &f, 2, q).unwrap();
        println!("  n = {q:4}: |direct - combo| = {:.2e}", (direct - combo).norm());
    }
}
