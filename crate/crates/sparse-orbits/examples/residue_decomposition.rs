//! Decomposes the power-residue counting function into scaled characters.
//!
//! `Pow_N(x)` counts solutions of `t^C = x mod N`. Summed over the gcd
//! classes dividing `d`, it becomes an exact finite combination of
//! characters precomposed with division (scaled characters), with unit
//! coefficients and a bounded number of terms. This example builds the
//! combination for a few moduli and verifies it pointwise.
//!
//! Run: `cargo run --example residue_decomposition`

use num_complex::Complex64;
use sparse_orbits::powres::{approximate_pow, pow_gcd_sum_profile, PowProfile};

fn main() {
    for (modulus, exponent, scale) in [(15u64, 2u32, 1u64), (360, 2, 2), (1000, 3, 2)] {
        let (combo, l1_bound) = approximate_pow(modulus, exponent, scale).unwrap();
        let target = pow_gcd_sum_profile(modulus, exponent, scale).unwrap();
        let values = combo.value_profile();
        let worst = (0..modulus as usize)
            .map(|x| (values[x] - Complex64::new(target[x] as f64, 0.0)).norm())
            .fold(0.0f64, f64::max);
        let pow = PowProfile::fast(modulus, exponent).unwrap();
        let l1_measured: f64 = (0..modulus as usize)
            .map(|x| (pow.counts[x] as f64 - values[x].re).abs())
            .sum::<f64>()
            / modulus as f64;
        println!(
            "N = {modulus}, C = {exponent}, d = {scale}: {} terms (weighted {}, budget {}), \
             pointwise error {worst:.2e}",
            combo.terms.len(),
            combo.weighted_term_count(),
            combo.term_budget(),
        );
        println!("  L1 distance to Pow_N: measured {l1_measured:.6}, bound {l1_bound:.6}");
        for term in combo.terms.iter().take(4) {
            let (n, d) = term.scaled.class();
            println!(
                "  term: {}x  A({n}, {d})  chi exponents {:?}",
                term.multiplier,
                term.scaled.chi.exponents()
            );
        }
        if combo.terms.len() > 4 {
            println!("  ... {} more terms", combo.terms.len() - 4);
        }
    }
}
