//! Complete exponential sums with polynomial phases: quadratic Gauss-sum
//! magnitudes, the differencing inequality relating a Weyl sum to its
//! difference averages, and the periodic van der Corput check.
//!
//! Run: `cargo run --example weyl_differencing`

use num_complex::Complex64;
use sparse_orbits::expsums::{
    vdc_check, weyl_difference_avg, weyl_difference_avg_top, weyl_sum, IntPolynomial,
};

fn main() {
    // |sum e(x^2/q)| is sqrt(q) for odd q and sqrt(2q) for q = 0 mod 4
    println!("quadratic Gauss-sum magnitudes:");
    for q in [5u64, 13, 101, 8, 16, 64] {
        let s = weyl_sum(&IntPolynomial::monomial(2), q).unwrap();
        let reference = if q % 2 == 1 {
            (q as f64).sqrt()
        } else {
            (2.0 * q as f64).sqrt()
        };
        println!("  q = {q:3}: |S| = {:.10} (reference {reference:.10})", s.norm());
    }

    // the differencing inequality |W/q| <= 2 A_n^(1/2^n)
    let poly = IntPolynomial::new(vec![1, -2, 3, 0, 1]); // degree 4
    println!("\ndifferencing chain for {:?}, q = 23:", poly.coeffs());
    let q = 23;
    let w = weyl_sum(&poly, q).unwrap().norm() / q as f64;
    println!("  |W|/q = {w:.6}");
    for n in 1..=3u32 {
        let a = weyl_difference_avg(&poly, q, n).unwrap();
        let bound = 2.0 * a.powf(1.0 / 2f64.powi(n as i32));
        println!("  n = {n}: A_n = {a:.6}, bound 2 A_n^(1/2^n) = {bound:.6}");
    }
    // the top difference average has an exact divisor-counting form
    let top = weyl_difference_avg_top(&poly, q).unwrap();
    println!("  A_3 by divisibility count: {top:.6}");

    // periodic van der Corput: lhs <= rhs for unit sequences
    let n = 32usize;
    let seq: Vec<Complex64> = (0..n)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * (i * i) as f64 / n as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect();
    println!("\nvan der Corput on e(i^2/32):");
    for window in [2u64, 8, 32] {
        let (lhs, rhs) = vdc_check(&seq, window).unwrap();
        println!("  H = {window:2}: lhs = {lhs:.6} <= rhs = {rhs:.6}");
    }
}
