//! Counts polynomial values in arithmetic progressions: the number of pairs
//! `(m, n)` with `m = a mod r` in a window of length `M` and `P(n) = m mod q`
//! for `n` in a window of length `N` approaches `MN/(qr)`, and the relative
//! deviation shrinks as `q` grows with `M = N = ceil(q^0.9)`.
//!
//! Run: `cargo run --example residue_progressions`

use sparse_orbits::cli::CounterRng;
use sparse_orbits::expsums::{residue_count_ratio, IntPolynomial};

fn main() {
    let poly = IntPolynomial::monomial(2);
    let rng = CounterRng::new(7);
    println!("P(n) = n^2, r = 1, M = N = ceil(q^0.9), 20 seeded windows each:");
    for q in [101u64, 1009, 10007, 100003] {
        let m_len = ((q as f64).powf(0.9)).ceil() as u64;
        let mut mean_dev = 0.0f64;
        let trials = 20;
        for trial in 0..trials {
            let base = q.wrapping_mul(1_000_003).wrapping_add(trial);
            let x = rng.below(base, 4 * q) as i64 - 2 * q as i64;
            let t = rng.below(base + 1, 4 * q) as i64 - 2 * q as i64;
            let (_, _, ratio) = residue_count_ratio(&poly, q, 1, 0, x, m_len, m_len, t).unwrap();
            mean_dev += (ratio - 1.0).abs();
        }
        mean_dev /= trials as f64;
        println!("  q = {q:6}: M = N = {m_len:5}, mean |ratio - 1| = {mean_dev:.5}");
    }

    println!("\nexact counts over complete residue systems (ratio exactly 1):");
    for (q, len) in [(5u64, 5u64), (7, 7), (11, 11)] {
        let (lhs, main, ratio) = residue_count_ratio(&poly, q, 1, 0, 0, len, len, 0).unwrap();
        println!("  q = {q}: lhs = {lhs}, main = {main}, ratio = {ratio}");
    }
}
