//! Continued fractions with exact convergents: growth rules, the
//! three-term congruence, constrained denominator sequences, and
//! high-precision rotation orbit points.
//!
//! Run: `cargo run --example continued_fractions`

use num_bigint::BigInt;
use sparse_orbits::diophantine::{
    construct_denominators, convergents_from_quotients, power_rule_cf, DenominatorConstraints,
};

fn main() {
    let golden = convergents_from_quotients(vec![1u64; 40]).unwrap();
    println!("golden ratio: q_n = Fibonacci, ||q_n alpha|| <= 1/q_(n+1):");
    for n in [5usize, 10, 20] {
        let qn = BigInt::from(golden.convergents[n].1.clone());
        let point = golden.rotation_point(&qn, 1e-12).unwrap();
        let dist = point.min(1.0 - point);
        println!(
            "  n = {n:2}: q_n = {}, ||q_n alpha|| = {dist:.3e}, 1/q_(n+1) = {:.3e}",
            golden.convergents[n].1,
            1.0 / golden
                .convergents[n + 1]
                .1
                .to_string()
                .parse::<f64>()
                .unwrap()
        );
    }
    println!(
        "  badly-approximable proxy (min q_n/q_(n+1)): {:.4}",
        golden.badly_approximable_proxy()
    );

    let fast = power_rule_cf(6, 8, 3).unwrap();
    println!("\npower rule q_(n+1) ~ q_n^6 from q_1 = 3:");
    for (n, (_, q)) in fast.convergents.iter().enumerate().take(5) {
        println!("  q_{n} = {q}");
    }
    println!("  q_7 has {} decimal digits", fast.denominator(7).to_string().len());
    println!("  proxy: {:.3e}", fast.badly_approximable_proxy());

    // denominator sequences under constraints, via q_(n+2) = q_n + k q_(n+1)
    let primes = construct_denominators(
        2,
        &DenominatorConstraints {
            prime: true,
            ..Default::default()
        },
        10,
        100_000,
    )
    .unwrap();
    println!("\nall-prime denominator sequence from (1, 2):");
    println!(
        "  {:?}",
        primes.iter().map(|q| q.to_string()).collect::<Vec<_>>()
    );
    // the three-term congruence holds by construction
    for w in primes.windows(3) {
        assert_eq!(&w[2] % &w[1], &w[0] % &w[1]);
    }
    println!("  q_(n+2) = q_n mod q_(n+1) verified on every window");
}
