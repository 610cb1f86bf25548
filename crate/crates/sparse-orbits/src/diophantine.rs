//! Continued fractions with exact convergents, constrained denominator
//! sequences, and high-precision rotation orbit points.
//!
//! An irrational rotation number is always specified here by its partial
//! quotients, never by a float: the systems built on top need denominator
//! growth like `q_{n+1} ~ q_n^6`, far beyond `f64`. Orbit points `{i a}`
//! are computed through a convergent surrogate `p_M / q_M` chosen per call
//! from an explicit precision budget.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::scaled::{log2_biguint, unit_rational_to_f64};

/// Partial quotients plus exact convergents `(p_n, q_n)`.
///
/// The recurrence is `p_{n+1} = a_{n+1} p_n + p_{n-1}` (same for `q`), the
/// convergents are coprime, `q_n` is strictly increasing from `n >= 1`, and
/// `q_{n+2} = q_n mod q_{n+1}`.
#[derive(Debug, Clone)]
pub struct ContinuedFraction {
    pub quotients: Vec<BigUint>,
    pub convergents: Vec<(BigUint, BigUint)>,
}

/// Builds the convergents from partial quotients (`a_0` may be zero, later
/// quotients must be positive).
pub fn convergents_from_quotients<I, T>(quotients: I) -> Result<ContinuedFraction>
where
    I: IntoIterator<Item = T>,
    T: Into<BigUint>,
{
    let quotients: Vec<BigUint> = quotients.into_iter().map(Into::into).collect();
    if quotients.is_empty() {
        return Err(Error::Config("need at least one partial quotient".into()));
    }
    for (i, a) in quotients.iter().enumerate().skip(1) {
        if a.is_zero() {
            return Err(Error::Config(format!("partial quotient a_{i} must be positive")));
        }
    }
    let mut convergents: Vec<(BigUint, BigUint)> = Vec::with_capacity(quotients.len());
    // (p_{-1}, q_{-1}) = (1, 0), (p_0, q_0) = (a_0, 1)
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero());
    let (mut p, mut q) = (quotients[0].clone(), BigUint::one());
    convergents.push((p.clone(), q.clone()));
    for a in &quotients[1..] {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        convergents.push((p.clone(), q.clone()));
    }
    Ok(ContinuedFraction {
        quotients,
        convergents,
    })
}

impl ContinuedFraction {
    pub fn len(&self) -> usize {
        self.convergents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.convergents.is_empty()
    }

    pub fn denominator(&self, n: usize) -> &BigUint {
        &self.convergents[n].1
    }

    /// The last convergent as an exact rational in lowest terms; serves as
    /// the working surrogate for the irrational value.
    pub fn surrogate(&self) -> BigRational {
        let (p, q) = self.convergents.last().expect("nonempty by construction");
        BigRational::new(
            BigInt::from(p.clone()),
            BigInt::from(q.clone()),
        )
    }

    /// Convergent `p_n / q_n` as an exact rational.
    pub fn convergent_rational(&self, n: usize) -> BigRational {
        let (p, q) = &self.convergents[n];
        BigRational::new(BigInt::from(p.clone()), BigInt::from(q.clone()))
    }

    /// `min_n q_n / q_{n+1}` over the available convergents, a desk-scale
    /// proxy for how well approximable the rotation number is (values near
    /// zero mean huge partial quotients somewhere in range).
    pub fn badly_approximable_proxy(&self) -> f64 {
        let mut min = f64::INFINITY;
        for w in self.convergents.windows(2) {
            let log2 = log2_biguint(&w[0].1) - log2_biguint(&w[1].1);
            min = min.min(log2.exp2());
        }
        min
    }

    /// `{i * alpha}` within `eps`, via the least convergent `p_M / q_M`
    /// with `|i| / (q_M q_{M+1}) < eps / 2`.
    pub fn rotation_point(&self, i: &BigInt, eps: f64) -> Result<f64> {
        if eps <= 0.0 {
            return Err(Error::NotPositive(0));
        }
        if i.is_zero() {
            return Ok(0.0);
        }
        let log2_i = log2_biguint(i.magnitude());
        let budget = eps.log2() - 1.0;
        let mut chosen = None;
        for m in 0..self.len().saturating_sub(1) {
            let log2_err = log2_i
                - log2_biguint(&self.convergents[m].1)
                - log2_biguint(&self.convergents[m + 1].1);
            if log2_err < budget {
                chosen = Some(m);
                break;
            }
        }
        let m = chosen.ok_or(Error::InsufficientConvergents {
            required: self.len(),
            available: self.len().saturating_sub(1),
        })?;
        let (p, q) = &self.convergents[m];
        let q_int = BigInt::from(q.clone());
        let r = num_integer::Integer::mod_floor(&(i * BigInt::from(p.clone())), &q_int);
        Ok(unit_rational_to_f64(&BigRational::new(r, q_int)))
    }
}

/// Distance to the nearest integer, in `[0, 1/2]`.
pub fn nearest_int_dist(x: f64) -> f64 {
    let f = x.rem_euclid(1.0);
    f.min(1.0 - f)
}

/// Exact nearest-integer distance for rationals.
pub fn nearest_int_dist_rational(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    let complement = BigRational::one() - &f;
    if f <= complement {
        f
    } else {
        complement
    }
}

/// Miller-Rabin with the fixed small-prime witness set: deterministic below
/// 2^64, a strong probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return arith::is_prime(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if !n.bit(0) {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n odd so n-1 > 0");
    let d = &n_minus_1 >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Per-index predicates for denominator construction.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DenominatorConstraints {
    /// Every constructed term must be (probable) prime.
    #[serde(default)]
    pub prime: bool,
    /// Every constructed term must satisfy `q = residue mod modulus`.
    #[serde(default)]
    pub congruence: Option<(u64, u64)>,
    /// Every constructed term must be coprime to all earlier ones.
    #[serde(default)]
    pub coprime_to_previous: bool,
}

impl DenominatorConstraints {
    fn check(&self, q: &BigUint, previous: &[BigUint]) -> bool {
        if let Some((m, r)) = self.congruence {
            if (q % BigUint::from(m)).to_u64() != Some(r % m) {
                return false;
            }
        }
        if self.prime && !is_probable_prime(q) {
            return false;
        }
        if self.coprime_to_previous {
            for prev in previous {
                if !num_integer::Integer::gcd(q, prev).is_one() {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds a valid denominator sequence `q_0 = 1, q_1, q_2, ...` with
/// `q_{n+2} = q_n + k q_{n+1}` choosing the smallest `k >= 1` meeting the
/// constraints (so the congruence `q_{n+2} = q_n mod q_{n+1}` holds by
/// construction). Search steps per index are capped by `step_budget`.
pub fn construct_denominators(
    q1: u64,
    constraints: &DenominatorConstraints,
    length: usize,
    step_budget: u64,
) -> Result<Vec<BigUint>> {
    if q1 == 0 {
        return Err(Error::NotPositive(0));
    }
    let mut seq: Vec<BigUint> = vec![BigUint::one()];
    if length <= 1 {
        return Ok(seq);
    }
    let q1 = BigUint::from(q1);
    if !constraints.check(&q1, &seq) {
        return Err(Error::SearchExhausted {
            index: 1,
            budget: 0,
        });
    }
    seq.push(q1);
    while seq.len() < length {
        let n = seq.len();
        let lo = &seq[n - 2];
        let step = &seq[n - 1];
        let mut k = 1u64;
        let candidate = loop {
            if k > step_budget {
                return Err(Error::SearchExhausted {
                    index: n,
                    budget: step_budget,
                });
            }
            let c = lo + step * BigUint::from(k);
            if constraints.check(&c, &seq) {
                break c;
            }
            k += 1;
        };
        seq.push(candidate);
    }
    Ok(seq)
}

/// Declarative continued-fraction spec, the JSON input format: either an
/// explicit quotient list or a power growth rule where `a_{n+1}` is chosen
/// so that `q_{n+1} ~ q_n^exponent`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CfSpec {
    Quotients {
        quotients: Vec<u64>,
    },
    Power {
        rule: String,
        exponent: u32,
        terms: usize,
        #[serde(default)]
        first: Option<u64>,
    },
}

impl CfSpec {
    pub fn build(&self) -> Result<ContinuedFraction> {
        match self {
            CfSpec::Quotients { quotients } => convergents_from_quotients(quotients.iter().copied().map(BigUint::from)),
            CfSpec::Power {
                rule,
                exponent,
                terms,
                first,
            } => {
                if rule != "power" {
                    return Err(Error::Config(format!("unknown growth rule '{rule}'")));
                }
                if *exponent < 2 {
                    return Err(Error::Config("power rule needs exponent >= 2".into()));
                }
                power_rule_cf(*exponent, *terms, first.unwrap_or(2))
            }
        }
    }
}

/// `a_0 = 0`, `a_1 = first`, then `a_{n+1} = q_n^(exponent-1)` so that
/// `q_{n+1} = q_n^exponent + q_{n-1}`.
pub fn power_rule_cf(exponent: u32, terms: usize, first: u64) -> Result<ContinuedFraction> {
    if first == 0 {
        return Err(Error::NotPositive(0));
    }
    if terms < 2 {
        return Err(Error::Config("power rule needs at least two terms".into()));
    }
    let mut quotients: Vec<BigUint> = vec![BigUint::zero(), BigUint::from(first)];
    let mut q_prev = BigUint::one();
    let mut q = BigUint::from(first);
    for _ in 2..terms {
        let a = q.pow(exponent - 1);
        let q_next = &a * &q + &q_prev;
        quotients.push(a);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    convergents_from_quotients(quotients)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(quots: &[u64]) -> ContinuedFraction {
        convergents_from_quotients(quots.iter().copied().map(BigUint::from)).unwrap()
    }

    fn qs(cf: &ContinuedFraction) -> Vec<u64> {
        cf.convergents.iter().map(|(_, q)| q.to_u64().unwrap()).collect()
    }

    #[test]
    fn convergent_examples() {
        assert_eq!(qs(&cf(&[1, 1, 1, 1, 1, 1])), vec![1, 1, 2, 3, 5, 8]);
        assert_eq!(qs(&cf(&[1, 2, 2, 2, 2])), vec![1, 2, 5, 12, 29]);
        let c = cf(&[0, 5]);
        assert_eq!(c.convergents[1].0.to_u64().unwrap(), 1);
        assert_eq!(c.convergents[1].1.to_u64().unwrap(), 5);
        assert!(convergents_from_quotients([0u64, 0]).is_err());
    }

    #[test]
    fn convergent_invariants() {
        for quots in [&[1u64, 1, 1, 1, 1, 1, 1, 1][..], &[0, 2, 1, 3, 1, 4, 7], &[3, 7, 15, 1, 292]] {
            let c = cf(quots);
            for w in c.convergents.windows(2).skip(1) {
                assert!(w[0].1 < w[1].1);
            }
            for w in c.convergents.windows(3) {
                // q_{n+2} = q_n mod q_{n+1}
                assert_eq!(&w[2].1 % &w[1].1, &w[0].1 % &w[1].1);
            }
            for (p, q) in &c.convergents {
                assert!(num_integer::Integer::gcd(p, q).is_one() || p.is_zero());
            }
        }
    }

    #[test]
    fn rotation_point_examples() {
        let golden = cf(&[1; 80]);
        assert_eq!(golden.rotation_point(&BigInt::zero(), 1e-9).unwrap(), 0.0);
        // ||q_n alpha|| <= 1/q_{n+1}
        for n in 1..25 {
            let qn = BigInt::from(golden.convergents[n].1.clone());
            let point = golden.rotation_point(&qn, 1e-13).unwrap();
            let dist = nearest_int_dist(point);
            let q_next = golden.convergents[n + 1].1.to_f64().unwrap();
            assert!(dist <= 1.0 / q_next + 1e-12, "n={n}: {dist}");
        }
        // {5 sqrt 2} = 0.07106...
        let sqrt2 = cf(&[1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2]);
        let p = sqrt2.rotation_point(&BigInt::from(5), 1e-10).unwrap();
        assert!((p - 0.07106781186547524).abs() < 1e-9);
        // insufficient convergents for a huge index at tight eps
        let short = cf(&[1, 2, 2]);
        let huge = BigInt::from(10u64).pow(9);
        assert!(matches!(
            short.rotation_point(&huge, 1e-12),
            Err(Error::InsufficientConvergents { .. })
        ));
    }

    #[test]
    fn rotation_point_additivity() {
        let sqrt2 = cf(&[1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2]);
        let eps = 1e-11;
        let mut state = 99u64;
        for _ in 0..30 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let i = BigInt::from(state % 100_000);
            let j = BigInt::from((state >> 20) % 100_000);
            let a = sqrt2.rotation_point(&i, eps).unwrap();
            let b = sqrt2.rotation_point(&j, eps).unwrap();
            let c = sqrt2.rotation_point(&(&i + &j), eps).unwrap();
            let diff = nearest_int_dist(a + b - c);
            assert!(diff < 2.0 * eps, "i={i} j={j}: {diff}");
        }
    }

    #[test]
    fn nearest_int_examples() {
        assert_eq!(nearest_int_dist(0.5), 0.5);
        assert!((nearest_int_dist(1.2) - 0.2).abs() < 1e-12);
        assert!((nearest_int_dist(-0.3) - 0.3).abs() < 1e-12);
        let r = nearest_int_dist_rational(&BigRational::new(7.into(), 5.into()));
        assert_eq!(r, BigRational::new(2.into(), 5.into()));
        let r = nearest_int_dist_rational(&BigRational::new((-3).into(), 10.into()));
        assert_eq!(r, BigRational::new(3.into(), 10.into()));
    }

    #[test]
    fn badly_approximable_proxy_examples() {
        let fib = cf(&[1, 1, 1, 1, 1, 1, 1, 1]);
        let proxy = fib.badly_approximable_proxy();
        assert!(proxy >= 0.5 - 1e-12 && proxy <= 1.0);
        let power = power_rule_cf(5, 6, 2).unwrap();
        assert!(power.badly_approximable_proxy() < 1e-3);
        let pair = cf(&[0, 1, 9]); // q: 1, 1, 10
        assert!((pair.badly_approximable_proxy() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn power_rule_growth() {
        let c = power_rule_cf(6, 7, 3).unwrap();
        // q_{n+1} = q_n^6 + q_{n-1}
        for n in 1..c.len() - 1 {
            let expected = c.convergents[n].1.pow(6) + &c.convergents[n - 1].1;
            assert_eq!(c.convergents[n + 1].1, expected);
        }
        assert_eq!(c.denominator(1).to_u64().unwrap(), 3);
        assert_eq!(c.denominator(2).to_u64().unwrap(), 730);
    }

    #[test]
    fn construct_denominators_examples() {
        // no constraints: smallest k = 1 gives Fibonacci
        let fib = construct_denominators(1, &DenominatorConstraints::default(), 8, 100).unwrap();
        let vals: Vec<u64> = fib.iter().map(|q| q.to_u64().unwrap()).collect();
        assert_eq!(vals, vec![1, 1, 2, 3, 5, 8, 13, 21]);

        // primes from q0 = 1, q1 = 2
        let primes = construct_denominators(
            2,
            &DenominatorConstraints {
                prime: true,
                ..Default::default()
            },
            8,
            10_000,
        )
        .unwrap();
        for q in &primes[1..] {
            assert!(is_probable_prime(q), "{q}");
        }
        let vals: Vec<u64> = primes.iter().map(|q| q.to_u64().unwrap()).collect();
        assert_eq!(&vals[..5], &[1, 2, 3, 5, 13]);

        // congruence + coprimality, verified post-hoc
        let odd = construct_denominators(
            3,
            &DenominatorConstraints {
                congruence: Some((2, 1)),
                coprime_to_previous: true,
                ..Default::default()
            },
            7,
            10_000,
        )
        .unwrap();
        for (i, q) in odd.iter().enumerate().skip(1) {
            assert_eq!((q % BigUint::from(2u32)).to_u64().unwrap(), 1);
            for prev in &odd[..i] {
                assert!(num_integer::Integer::gcd(q, prev).is_one());
            }
        }
        // the section congruence holds on every constructed sequence
        for w in odd.windows(3) {
            assert_eq!(&w[2] % &w[1], &w[0] % &w[1]);
        }

        // impossible constraint exhausts the budget with the failing index
        let err = construct_denominators(
            2,
            &DenominatorConstraints {
                congruence: Some((2, 0)),
                prime: true,
                ..Default::default()
            },
            4,
            50,
        );
        assert!(matches!(err, Err(Error::SearchExhausted { index: 2, budget: 50 })));
    }

    #[test]
    fn cf_spec_json() {
        let spec: CfSpec = serde_json::from_str(r#"{"quotients": [1, 1, 1, 1, 1, 1]}"#).unwrap();
        assert_eq!(qs(&spec.build().unwrap()), vec![1, 1, 2, 3, 5, 8]);
        let spec: CfSpec =
            serde_json::from_str(r#"{"rule": "power", "exponent": 5, "terms": 4, "first": 2}"#)
                .unwrap();
        let c = spec.build().unwrap();
        assert_eq!(c.denominator(1).to_u64().unwrap(), 2);
        assert_eq!(c.denominator(2).to_u64().unwrap(), 33); // 2^5 + 1
        let bad: CfSpec = serde_json::from_str(r#"{"rule": "cubic", "exponent": 3, "terms": 4}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn probable_prime_large() {
        // 2^89 - 1 is a Mersenne prime; 2^89 + 1 is composite
        let m89 = (BigUint::one() << 89u32) - BigUint::one();
        assert!(is_probable_prime(&m89));
        let c = (BigUint::one() << 89u32) + BigUint::one();
        assert!(!is_probable_prime(&c));
    }
}
