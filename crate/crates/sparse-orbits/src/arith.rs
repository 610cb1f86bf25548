//! Exact integer arithmetic: factorization, multiplicative functions, CRT,
//! and modular exponentiation. All residue arithmetic goes through 128-bit
//! intermediates so products of two 63-bit moduli cannot overflow.

use crate::error::{Error, Result};

/// Prime-exponent factorization of a positive 63-bit integer.
///
/// Primes are strictly increasing and certified by a deterministic
/// Miller-Rabin witness set valid for the full 64-bit range; `value == 1`
/// has an empty factor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Recomputes the product of `prime^exponent`; equals `value` by construction.
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }

    /// Euler's totient from the exponents.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(_, e)| acc * (e as u64 + 1))
    }

    /// All divisors, sorted ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let prev = divs.clone();
            let mut pe = 1u64;
            for _ in 0..e {
                pe *= p;
                divs.extend(prev.iter().map(|d| d * pe));
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Exponent of `p` in `value`, zero when `p` does not divide it.
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` mod `m` for coprime inputs.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for the full 64-bit range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // This witness set is known to be exact below 3.3 * 10^24.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_BOUND: u64 = 1_000_000;

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle variant; n is odd, composite, and has no factor below
    // the trial bound, so random restarts terminate quickly.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

/// Factors `n` into its prime-exponent map. Trial division up to 10^6,
/// Pollard rho beyond; rejects 0 and values above 2^63 - 1.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NotPositive(0));
    }
    if n > (1u64 << 63) - 1 {
        return Err(Error::OutOfRange(n));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;
    let push = |p: u64, e: u32, factors: &mut Vec<(u64, u32)>| {
        debug_assert!(is_prime(p), "pushed non-prime {p}");
        factors.push((p, e));
    };
    let mut d = 2u64;
    while d <= TRIAL_BOUND && d * d <= rest {
        if rest % d == 0 {
            let mut e = 0u32;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            push(d, e, &mut factors);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // Whatever remains has no prime factor below the trial bound.
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            large.push(m);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    large.sort_unstable();
    for p in large {
        if let Some(last) = factors.last_mut() {
            if last.0 == p {
                last.1 += 1;
                continue;
            }
        }
        push(p, 1, &mut factors);
    }
    factors.sort_unstable();
    Ok(Factorization { value: n, factors })
}

/// `(phi, omega, tau)` of the factored integer.
pub fn multiplicative_stats(f: &Factorization) -> (u64, u32, u64) {
    (f.phi(), f.omega(), f.tau())
}

/// Largest `e` with `p^e | n`. Rejects non-prime `p`.
pub fn nu(p: u64, n: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::NotPositive(0));
    }
    let mut e = 0u32;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// Solves a simultaneous congruence system with pairwise coprime moduli.
///
/// Returns `(residue, modulus)` with `modulus` the product of the inputs;
/// the empty system yields `(0, 1)`. Non-coprime moduli are rejected naming
/// the offending pair.
pub fn crt(residues: &[(u64, u64)]) -> Result<(u128, u128)> {
    let mut r: u128 = 0;
    let mut m: u128 = 1;
    for &(ri, mi) in residues {
        if mi == 0 {
            return Err(Error::NotPositive(0));
        }
        let mi = mi as u128;
        let ri = ri as u128 % mi;
        let g = gcd_u128(m, mi);
        if g != 1 {
            return Err(Error::NonCoprimeModuli(m, mi, g));
        }
        let prod = m.checked_mul(mi).ok_or(Error::ModulusOverflow)?;
        // r' = r + m * ((ri - r) * m^-1 mod mi)
        let m_inv = inv_mod_u128(m % mi, mi).expect("coprime by the gcd check");
        let diff = (ri + mi - r % mi) % mi;
        let k = (diff * m_inv) % mi;
        r += m * k;
        m = prod;
        r %= m;
    }
    Ok((r, m))
}

fn inv_mod_u128(a: u128, m: u128) -> Option<u128> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u128)
}

/// Smallest primitive root mod an odd prime power `p^e` (also valid mod `2 p^e`).
pub fn primitive_root(p: u64, e: u32) -> u64 {
    debug_assert!(p > 2 && is_prime(p));
    let phi_p = p - 1;
    let fac = factorize(phi_p).expect("p - 1 fits");
    let mut g = 2u64;
    loop {
        if fac
            .factors
            .iter()
            .all(|&(q, _)| pow_mod(g, phi_p / q, p) != 1)
        {
            break;
        }
        g += 1;
    }
    if e == 1 {
        return g;
    }
    // Lift: g generates mod p^e unless g^(p-1) = 1 mod p^2, in which case g + p works.
    let p2 = p * p;
    if pow_mod(g, p - 1, p2) == 1 {
        g + p
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-division oracle, independent of the Pollard path.
    fn factorize_oracle(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                let mut e = 0;
                while n % d == 0 {
                    n /= d;
                    e += 1;
                }
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    fn phi_oracle(n: u64) -> u64 {
        (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
    }

    fn tau_oracle(n: u64) -> u64 {
        (1..=n).filter(|&d| n % d == 0).count() as u64
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1).unwrap().factors, vec![]);
        assert_eq!(factorize(101).unwrap().factors, vec![(101, 1)]);
        assert_eq!(factorize(12).unwrap().factors, factorize_oracle(12));
        assert_eq!(factorize(101).unwrap().factors, factorize_oracle(101));
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_roundtrip_random() {
        // Counter-based pseudorandom 63-bit inputs.
        let mut state = 0x9E3779B97F4A7C15u64;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let n = (state >> 1).max(1);
            let f = factorize(n).unwrap();
            assert_eq!(f.product(), n);
            for w in f.factors.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
            for &(p, _) in &f.factors {
                assert!(is_prime(p));
            }
        }
    }

    #[test]
    fn stats_examples() {
        let f12 = factorize(12).unwrap();
        assert_eq!(multiplicative_stats(&f12), (4, 2, 6));
        let f1 = factorize(1).unwrap();
        assert_eq!(multiplicative_stats(&f1), (1, 0, 1));
        let f1024 = factorize(1024).unwrap();
        assert_eq!(multiplicative_stats(&f1024), (512, 1, 11));
        assert_eq!(phi_oracle(12), 4);
        assert_eq!(tau_oracle(12), 6);
        assert_eq!(phi_oracle(1024), 512);
        assert_eq!(tau_oracle(1024), 11);
    }

    #[test]
    fn stats_match_bruteforce_small() {
        for n in 1..=2000u64 {
            let f = factorize(n).unwrap();
            let (phi, omega, tau) = multiplicative_stats(&f);
            assert_eq!(phi, phi_oracle(n), "phi({n})");
            assert_eq!(tau, tau_oracle(n), "tau({n})");
            let omega_oracle = factorize_oracle(n).len() as u32;
            assert_eq!(omega, omega_oracle, "omega({n})");
        }
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(2, 12).unwrap(), 2);
        assert_eq!(nu(5, 12).unwrap(), 0);
        assert_eq!(nu(3, 81).unwrap(), 4);
        assert!(nu(4, 12).is_err());
        let e = nu(2, 48).unwrap();
        assert_eq!(48 % 2u64.pow(e), 0);
        assert_ne!(48 % 2u64.pow(e + 1), 0);
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt(&[(1, 3), (2, 5)]).unwrap(), (7, 15));
        assert_eq!(crt(&[]).unwrap(), (0, 1));
        assert_eq!(crt(&[(0, 4), (0, 9)]).unwrap(), (0, 36));
        // Exhaustive oracle mod 15.
        let target = (0..15u128).find(|&x| x % 3 == 1 && x % 5 == 2).unwrap();
        assert_eq!(crt(&[(1, 3), (2, 5)]).unwrap().0, target);
        match crt(&[(1, 6), (2, 4)]) {
            Err(Error::NonCoprimeModuli(6, 4, 2)) => {}
            other => panic!("expected non-coprime error, got {other:?}"),
        }
    }

    #[test]
    fn crt_reconstructs_inputs() {
        let systems: &[&[(u64, u64)]] = &[
            &[(3, 7), (4, 11), (5, 13)],
            &[(0, 2), (2, 3), (3, 5), (6, 7)],
            &[(1_000_000_006, 1_000_000_007), (4, 998_244_353)],
        ];
        for sys in systems {
            let (r, m) = crt(sys).unwrap();
            let expected: u128 = sys.iter().map(|&(_, mi)| mi as u128).product();
            assert_eq!(m, expected);
            for &(ri, mi) in *sys {
                assert_eq!(r % mi as u128, ri as u128 % mi as u128);
            }
        }
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..5000u64 {
            let by_trial = n > 1 && factorize_oracle(n).len() == 1 && factorize_oracle(n)[0].1 == 1;
            assert_eq!(is_prime(n), by_trial, "n = {n}");
        }
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn primitive_roots_generate() {
        for &(p, e) in &[(3u64, 1u32), (5, 1), (7, 1), (11, 1), (3, 2), (5, 2), (7, 2), (3, 4)] {
            let pe = p.pow(e);
            let g = primitive_root(p, e);
            let phi = pe / p * (p - 1);
            let mut seen = std::collections::HashSet::new();
            let mut x = 1u64;
            for _ in 0..phi {
                x = mul_mod(x, g, pe);
                seen.insert(x);
            }
            assert_eq!(seen.len() as u64, phi, "g = {g} mod {pe}");
        }
    }
}
