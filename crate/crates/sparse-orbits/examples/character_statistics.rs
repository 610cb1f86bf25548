//! Character-sum statistics at desk scale: orthogonality, windowed second
//! moments, and pair counts of prescribed character values.
//!
//! Run: `cargo run --example character_statistics`

use sparse_orbits::characters::{
    char_order, char_pair_count, char_window_second_moment, enumerate_characters,
    indicator_via_orthogonality, Phase,
};

fn main() {
    // Orthogonality turns the character average into a progression indicator.
    println!("orthogonality indicators mod 12:");
    for x in 0..12 {
        let hit = indicator_via_orthogonality(12, 5, x).unwrap();
        print!("{hit} ");
    }
    println!("  (1 exactly at x = 5 mod 12)");

    // Second moment of windowed sums: strictly below m*h for nonprincipal
    // characters.
    println!("\nwindowed second moments (worst ratio to m*h):");
    for m in [5u64, 12, 101, 243] {
        let mut worst: f64 = 0.0;
        for chi in enumerate_characters(m).unwrap() {
            if chi.is_principal() {
                continue;
            }
            for h in 1..=12 {
                let stat = char_window_second_moment(&chi, h).unwrap();
                worst = worst.max(stat / (m * h) as f64);
            }
        }
        println!("  m = {m}: worst ratio {worst:.4} (< 1)");
    }

    // Pair counts N = #{x: chi(x) = eps1, chi(x + shift) = eps2} sit within
    // sqrt(p) + 1 of p / k^2.
    println!("\npair counts for the cubic character mod 13:");
    let cubic = enumerate_characters(13)
        .unwrap()
        .into_iter()
        .find(|c| char_order(c) == 3)
        .unwrap();
    for e1 in 0..3u64 {
        for e2 in 0..3u64 {
            let n = char_pair_count(
                &cubic,
                Phase::root_of_unity(e1, 3),
                Phase::root_of_unity(e2, 3),
                1,
            )
            .unwrap();
            let dev = (n as f64 - 13.0 / 9.0).abs();
            println!(
                "  eps = (e({e1}/3), e({e2}/3)): N = {n}, |N - p/k^2| = {dev:.3} < {:.3}",
                13f64.sqrt() + 1.0
            );
        }
    }
}
