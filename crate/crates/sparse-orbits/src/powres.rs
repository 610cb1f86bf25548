//! Power-residue counting and its decomposition into scaled characters.
//!
//! `pow_count(N, C, x)` counts `t in [1, N]` with `t^C = x mod N`, and
//! `pow_count_gcd` refines by `gcd(t, N)`. Counts are multiplicative over
//! the prime powers of `N`, and on each prime power the coprime part is a
//! sum of at most `2C` characters (the characters trivial on `C`-th powers),
//! which is what `approximate_pow` assembles: the function
//! `h = sum_{d'|d} Pow_N(., d')` as an explicit combination of scaled
//! characters with unit coefficients, together with an L1 error bound
//! against `Pow_N` itself.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{self, factorize, gcd, pow_mod};
use crate::characters::{
    combine_coprime, CharacterGroup, DirichletCharacter, Phase,
};
use crate::error::{Error, Result};

/// All residue counts `Pow_N(x)` for `x` in `[0, N)`; the counts sum to `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowProfile {
    pub modulus: u64,
    pub exponent: u32,
    pub counts: Vec<u64>,
}

impl PowProfile {
    /// Direct enumeration over `t in [1, N]`.
    pub fn brute(modulus: u64, exponent: u32) -> Result<PowProfile> {
        if modulus == 0 {
            return Err(Error::NotPositive(0));
        }
        let mut counts = vec![0u64; modulus as usize];
        for t in 1..=modulus {
            counts[pow_mod(t, exponent as u64, modulus) as usize] += 1;
        }
        Ok(PowProfile {
            modulus,
            exponent,
            counts,
        })
    }

    /// Factorization + CRT assembly from per-prime-power profiles.
    pub fn fast(modulus: u64, exponent: u32) -> Result<PowProfile> {
        let f = factorize(modulus)?;
        let blocks: Vec<(u64, Vec<u64>)> = f
            .factors
            .iter()
            .map(|&(p, e)| {
                let pe = p.pow(e);
                let prof = PowProfile::brute(pe, exponent).expect("positive");
                (pe, prof.counts)
            })
            .collect();
        let counts = (0..modulus)
            .map(|x| {
                blocks
                    .iter()
                    .map(|(pe, c)| c[(x % pe) as usize])
                    .product()
            })
            .collect();
        Ok(PowProfile {
            modulus,
            exponent,
            counts,
        })
    }

    pub fn count(&self, x: i64) -> u64 {
        self.counts[x.rem_euclid(self.modulus as i64) as usize]
    }
}

/// Number of units `y` mod `p^f` with `y^C = u`, for `u` coprime to `p`.
fn unit_count(p: u64, f: u32, c: u64, u: u64) -> u64 {
    debug_assert!(f >= 1);
    let pf = p.pow(f);
    let u = u % pf;
    debug_assert_eq!(gcd(u, p), 1);
    if p > 2 {
        let n = pf / p * (p - 1);
        let d = gcd(n, c);
        return if pow_mod(u, n / d, pf) == 1 { d } else { 0 };
    }
    match f {
        1 => 1,
        2 => {
            if c % 2 == 1 {
                1
            } else if u % 4 == 1 {
                2
            } else {
                0
            }
        }
        _ => {
            let (s, u1) = if u % 4 == 3 { (1u64, pf - u) } else { (0, u) };
            let j = dlog5(u1, f);
            let n2 = pf / 4;
            let d1 = gcd(c, 2);
            let d2 = gcd(c, n2);
            if s % d1 == 0 && j % d2 == 0 {
                d1 * d2
            } else {
                0
            }
        }
    }
}

/// Discrete log of `u = 1 mod 4` to base 5 mod `2^f`, by bit lifting.
fn dlog5(u: u64, f: u32) -> u64 {
    debug_assert!(f >= 3 && u % 4 == 1);
    let mut j = 0u64;
    for k in 3..=f {
        let m = 1u64 << k;
        if pow_mod(5, j, m) != u % m {
            j += 1 << (k - 3);
        }
    }
    debug_assert_eq!(pow_mod(5, j, 1 << f), u % (1 << f));
    j
}

/// `Pow_{p^e}(x)` by cycle-structure counting, exact for any size.
fn prime_power_pow_count(p: u64, e: u32, c: u64, x: u64) -> u64 {
    let pe = p.pow(e);
    let xm = x % pe;
    if xm == 0 {
        // t^C = 0 mod p^e exactly when nu_p(t) >= ceil(e / C)
        let k = (e as u64).div_ceil(c) as u32;
        return p.pow(e - k);
    }
    let mut v = 0u32;
    let mut u = xm;
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    if v == 0 {
        return unit_count(p, e, c, xm);
    }
    if v as u64 % c != 0 {
        return 0;
    }
    let j = v as u64 / c;
    p.pow(v - j as u32) * unit_count(p, e - v, c, u)
}

/// `Pow_N(x) = |{t in [1, N]: t^C = x mod N}|`, via factorization and
/// per-prime-power counts. `pow_count_brute` is the enumeration route.
pub fn pow_count(modulus: u64, exponent: u32, x: i64) -> Result<u64> {
    let f = factorize(modulus)?;
    let xm = x.rem_euclid(modulus as i64) as u64;
    Ok(f.factors
        .iter()
        .map(|&(p, e)| prime_power_pow_count(p, e, exponent as u64, xm % p.pow(e)))
        .product())
}

/// Direct enumeration over `t in [1, N]`.
pub fn pow_count_brute(modulus: u64, exponent: u32, x: i64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::NotPositive(0));
    }
    let xm = x.rem_euclid(modulus as i64) as u64;
    Ok((1..=modulus)
        .filter(|&t| pow_mod(t, exponent as u64, modulus) == xm)
        .count() as u64)
}

/// `Pow_{p^e}(x, p^f)`: count with the gcd pinned to `p^f`.
fn prime_power_pow_count_gcd(p: u64, e: u32, f: u32, c: u64, x: u64) -> u64 {
    debug_assert!(f <= e);
    let pe = p.pow(e);
    let xm = x % pe;
    if c * f as u64 >= e as u64 {
        // t = p^f u has t^C = 0 mod p^e, so only x = 0 mod p^e is hit
        if xm != 0 {
            return 0;
        }
        return if f < e { p.pow(e - f) - p.pow(e - f - 1) } else { 1 };
    }
    // need nu_p(x) exactly C*f
    if xm == 0 {
        return 0;
    }
    let mut v = 0u32;
    let mut u = xm;
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    if v as u64 != c * f as u64 {
        return 0;
    }
    // t = p^f w: each unit solution w mod p^(e-v) lifts p^(v-f) ways
    p.pow(v - f) * unit_count(p, e - v, c, u)
}

/// `Pow_N(x, d) = |{t in [1, N]: gcd(t, N) = d, t^C = x mod N}|` for `d | N`.
pub fn pow_count_gcd(modulus: u64, exponent: u32, x: i64, d: u64) -> Result<u64> {
    if d == 0 || modulus == 0 {
        return Err(Error::NotPositive(0));
    }
    if modulus % d != 0 {
        return Err(Error::NotDivisible {
            divisor: d,
            dividend: modulus,
        });
    }
    let f = factorize(modulus)?;
    let xm = x.rem_euclid(modulus as i64) as u64;
    Ok(f.factors
        .iter()
        .map(|&(p, e)| {
            let fp = arith::nu(p, d).expect("p prime");
            prime_power_pow_count_gcd(p, e, fp, exponent as u64, xm % p.pow(e))
        })
        .product())
}

/// Enumeration route for `pow_count_gcd`.
pub fn pow_count_gcd_brute(modulus: u64, exponent: u32, x: i64, d: u64) -> Result<u64> {
    if d == 0 || modulus == 0 {
        return Err(Error::NotPositive(0));
    }
    if modulus % d != 0 {
        return Err(Error::NotDivisible {
            divisor: d,
            dividend: modulus,
        });
    }
    let xm = x.rem_euclid(modulus as i64) as u64;
    Ok((1..=modulus)
        .filter(|&t| gcd(t, modulus) == d && pow_mod(t, exponent as u64, modulus) == xm)
        .count() as u64)
}

/// `|{i in [lo, hi): i^2 = m mod q}|` over a half-open integer interval,
/// counted through the complete residue classes of `q`.
pub fn sq_count(q: u64, lo: i64, hi: i64, m: i64) -> Result<u64> {
    if q == 0 {
        return Err(Error::NotPositive(0));
    }
    if hi <= lo {
        return Ok(0);
    }
    let mm = m.rem_euclid(q as i64) as u64;
    let mut total = 0u64;
    for rho in 0..q {
        if arith::mul_mod(rho, rho, q) == mm {
            // integers in [lo, hi) congruent to rho mod q
            let r = rho as i64;
            let count = (hi - 1 - r).div_euclid(q as i64) - (lo - 1 - r).div_euclid(q as i64);
            total += count as u64;
        }
    }
    Ok(total)
}

/// A character mod `n` precomposed with division by `d`: the value at `x` is
/// `chi(x/d)` when `d | x` and 0 otherwise (the class `A(n, d)`).
#[derive(Debug, Clone)]
pub struct ScaledCharacter {
    pub scale: u64,
    pub chi: DirichletCharacter,
}

impl ScaledCharacter {
    pub fn new(scale: u64, chi: DirichletCharacter) -> ScaledCharacter {
        assert!(scale >= 1);
        ScaledCharacter { scale, chi }
    }

    /// The class parameters `(n, d)`.
    pub fn class(&self) -> (u64, u64) {
        (self.chi.modulus(), self.scale)
    }

    pub fn phase(&self, x: i64) -> Option<Phase> {
        if x.rem_euclid(self.scale as i64) != 0 {
            return None;
        }
        self.chi.phase(x.div_euclid(self.scale as i64))
    }

    pub fn eval(&self, x: i64) -> Complex64 {
        match self.phase(x) {
            None => Complex64::new(0.0, 0.0),
            Some(p) => p.to_complex(),
        }
    }
}

/// Scaled evaluation as a free function, mirroring the operation name.
pub fn scaled_eval(f: &ScaledCharacter, x: i64) -> Complex64 {
    f.eval(x)
}

/// Combines scaled characters with pairwise coprime `n_i * d_i` into a
/// single one: `a * (returned)` equals the pointwise product of the inputs,
/// with `a` an exact root of unity.
pub fn scaled_product(fs: &[ScaledCharacter]) -> Result<(Phase, ScaledCharacter)> {
    for (i, fi) in fs.iter().enumerate() {
        for fj in &fs[i + 1..] {
            let (ni, di) = fi.class();
            let (nj, dj) = fj.class();
            if gcd(ni * di, nj * dj) != 1 {
                return Err(Error::SharedPrime(ni * di, nj * dj));
            }
        }
    }
    let mut acc_chi = DirichletCharacter::principal(CharacterGroup::new(1)?);
    let mut acc_scale = 1u64;
    let mut coeff = Phase::ZERO;
    for f in fs {
        // product(d_acc * d * x) = chi_acc(d) chi(d_acc) * (chi_acc chi)(x)
        let a1 = acc_chi.phase(f.scale as i64).expect("coprime scales");
        let a2 = f.chi.phase(acc_scale as i64).expect("coprime scales");
        coeff = coeff.add(a1).add(a2);
        acc_chi = combine_coprime(&acc_chi, &f.chi)?;
        acc_scale *= f.scale;
    }
    Ok((coeff, ScaledCharacter::new(acc_scale, acc_chi)))
}

/// The characters mod `p^e` that are trivial on `C`-th powers; their
/// pointwise sum is `Pow_{p^e}(., 1)`, and there are at most `2C` of them.
pub fn decompose_coprime_prime_power(p: u64, e: u32, c: u64) -> Result<Vec<DirichletCharacter>> {
    if e == 0 || c == 0 {
        return Err(Error::NotPositive(0));
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let group = CharacterGroup::new(p.pow(e))?;
    let orders: Vec<u64> = group_component_orders(&group);
    // component exponent k contributes iff C*k = 0 mod ord, i.e. k is a
    // multiple of ord / gcd(ord, C)
    let choices: Vec<Vec<u64>> = orders
        .iter()
        .map(|&ord| {
            let g = gcd(ord, c);
            (0..g).map(|t| t * (ord / g)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let exps: Vec<u64> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
        out.push(DirichletCharacter::new(group.clone(), exps));
        let mut i = choices.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            return Ok(out);
        }
    }
}

fn group_component_orders(group: &std::sync::Arc<CharacterGroup>) -> Vec<u64> {
    // phi(m) split into cyclic component orders; recovered through the
    // principal character's exponent layout.
    let principal = DirichletCharacter::principal(group.clone());
    let n = principal.exponents().len();
    let mut orders = Vec::with_capacity(n);
    // group_order = product of component orders; probe each component by
    // constructing the character with 1 in that slot and reading its order
    for i in 0..n {
        let mut exps = vec![0u64; n];
        exps[i] = 1;
        let chi = DirichletCharacter::new(group.clone(), exps);
        orders.push(crate::characters::char_order(&chi));
    }
    orders
}

/// One summand of a scaled-character combination: a unit coefficient, a
/// positive integer multiplier (folding repeated identical functions), and
/// the scaled character itself.
#[derive(Debug, Clone)]
pub struct ComboTerm {
    pub coeff: Phase,
    pub multiplier: u64,
    pub scaled: ScaledCharacter,
}

impl ComboTerm {
    pub fn eval(&self, x: i64) -> Complex64 {
        self.coeff.to_complex() * self.multiplier as f64 * self.scaled.eval(x)
    }
}

/// A finite combination of scaled characters approximating `Pow_N`.
#[derive(Debug, Clone)]
pub struct ScaledCharCombo {
    pub modulus: u64,
    pub exponent: u32,
    pub scale_bound: u64,
    pub terms: Vec<ComboTerm>,
}

impl ScaledCharCombo {
    pub fn eval(&self, x: i64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Term count with multiplicity (each multiplier counts that many
    /// unit-coefficient functions, matching the combinatorial bound).
    pub fn weighted_term_count(&self) -> u64 {
        self.terms.iter().map(|t| t.multiplier).sum()
    }

    /// The bound `(2C)^omega(N) * d^(C+1)` on the weighted term count.
    pub fn term_budget(&self) -> f64 {
        let omega = factorize(self.modulus).map(|f| f.omega()).unwrap_or(0);
        (2.0 * self.exponent as f64).powi(omega as i32)
            * (self.scale_bound as f64).powi(self.exponent as i32 + 1)
    }

    /// Values over one period `[0, N)`, assembled per term in `O(N)`.
    pub fn value_profile(&self) -> Vec<Complex64> {
        let n = self.modulus as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for term in &self.terms {
            let d = term.scaled.scale as usize;
            let table = term.scaled.chi.value_table();
            let nmod = table.len().max(1);
            let c = term.coeff.to_complex() * term.multiplier as f64;
            let mut x = 0usize;
            while x < n {
                out[x] += c * table[(x / d) % nmod];
                x += d;
            }
        }
        out
    }
}

/// Decomposes `Pow_{p^e}(., p^f)` into at most `2C * p^(Cf)` weighted
/// scaled-character terms, each in `A(p^i, p^(e-i))` for some `i`.
pub fn decompose_prime_power(p: u64, e: u32, f: u32, c: u64) -> Result<Vec<ComboTerm>> {
    if f > e {
        return Err(Error::NotDivisible {
            divisor: p.pow(f),
            dividend: p.pow(e),
        });
    }
    if c * f as u64 >= e as u64 {
        // supported on multiples of p^e with constant value there
        let multiplier = if f < e {
            p.pow(e - f) - p.pow(e - f - 1)
        } else {
            1
        };
        let chi1 = DirichletCharacter::principal(CharacterGroup::new(1)?);
        return Ok(vec![ComboTerm {
            coeff: Phase::ZERO,
            multiplier,
            scaled: ScaledCharacter::new(p.pow(e), chi1),
        }]);
    }
    // Pow_{p^e}(x, p^f) = p^(f(C-1)) * Pow_{p^(e-Cf)}(x / p^(Cf), 1) on
    // nu_p(x) = Cf: each unit solution mod p^(e-Cf) lifts p^(Cf-f) ways
    let cf = (c * f as u64) as u32;
    let chars = decompose_coprime_prime_power(p, e - cf, c)?;
    Ok(chars
        .into_iter()
        .map(|chi| ComboTerm {
            coeff: Phase::ZERO,
            multiplier: p.pow(cf - f),
            scaled: ScaledCharacter::new(p.pow(cf), chi),
        })
        .collect())
}

/// Builds `h = sum_{d'|d} Pow_N(., d')` as a scaled-character combination,
/// assembled per prime power and multiplied out with exact unit
/// coefficients. Returns the combination and the L1 error bound
/// `sum_{p | N, nu_p(N) > nu_p(d)} p^(-nu_p(d))` on
/// `(1/N) sum_x |Pow_N(x) - h(x)|`.
pub fn approximate_pow(modulus: u64, exponent: u32, d: u64) -> Result<(ScaledCharCombo, f64)> {
    if d == 0 {
        return Err(Error::NotPositive(0));
    }
    let f = factorize(modulus)?;
    let c = exponent as u64;
    let d_eff = gcd(d, modulus);
    let d_divisors = factorize(d_eff)?.divisors();
    let mut terms: Vec<ComboTerm> = Vec::new();
    for &dp in &d_divisors {
        // per-prime decompositions of Pow_{p^e}(., p^{nu_p(d')})
        let blocks: Vec<Vec<ComboTerm>> = f
            .factors
            .iter()
            .map(|&(p, e)| {
                let fp = arith::nu(p, dp).expect("p prime");
                decompose_prime_power(p, e, fp, c)
            })
            .collect::<Result<_>>()?;
        // cartesian product across prime powers
        let mut partial: Vec<ComboTerm> = vec![ComboTerm {
            coeff: Phase::ZERO,
            multiplier: 1,
            scaled: ScaledCharacter::new(1, DirichletCharacter::principal(CharacterGroup::new(1)?)),
        }];
        for block in &blocks {
            let mut next = Vec::with_capacity(partial.len() * block.len());
            for acc in &partial {
                for t in block {
                    let (a, combined) =
                        scaled_product(&[acc.scaled.clone(), t.scaled.clone()])?;
                    next.push(ComboTerm {
                        coeff: acc.coeff.add(t.coeff).add(a),
                        multiplier: acc.multiplier * t.multiplier,
                        scaled: combined,
                    });
                }
            }
            partial = next;
        }
        terms.extend(partial);
    }
    let l1_bound: f64 = f
        .factors
        .iter()
        .filter(|&&(p, e)| e as u64 > arith::nu(p, d).expect("p prime") as u64)
        .map(|&(p, _)| (p as f64).powi(-(arith::nu(p, d).expect("p prime") as i32)))
        .sum();
    Ok((
        ScaledCharCombo {
            modulus,
            exponent,
            scale_bound: d,
            terms,
        },
        l1_bound,
    ))
}

/// The directly-summed target `h(x) = sum_{d'|d} Pow_N(x, d')` over a full
/// period, for cross-checking the combination.
pub fn pow_gcd_sum_profile(modulus: u64, exponent: u32, d: u64) -> Result<Vec<u64>> {
    if modulus == 0 || d == 0 {
        return Err(Error::NotPositive(0));
    }
    let d_eff = gcd(d, modulus);
    let mut counts = vec![0u64; modulus as usize];
    for t in 1..=modulus {
        if d_eff % gcd(t, modulus) == 0 {
            counts[pow_mod(t, exponent as u64, modulus) as usize] += 1;
        }
    }
    Ok(counts)
}

/// Result of the residue sparsification: the `C`-th power residues `A`, the
/// subset `A'` collecting close pairs, and the cardinality bound for `A'`.
#[derive(Debug, Clone)]
pub struct Sparsified {
    pub residues: Vec<u64>,
    pub close_subset: Vec<u64>,
    pub close_subset_bound: f64,
}

/// For squarefree `n` with all prime factors `= 1 mod C`: `A` is the set of
/// residues of `C`-th powers coprime to `n`, and `A'` collects every element
/// within `omega(n)` of another element, so that `A \ A'` has gaps of at
/// least `omega(n)`.
pub fn sparsify_residues(n: u64, c: u64) -> Result<Sparsified> {
    if n == 0 || c == 0 {
        return Err(Error::NotPositive(0));
    }
    let f = factorize(n)?;
    if f.factors.iter().any(|&(_, e)| e > 1) {
        return Err(Error::NotSquarefree(n));
    }
    for &(p, _) in &f.factors {
        if p % c != 1 % c {
            return Err(Error::BadPrimeFactor { p, n, c });
        }
    }
    let omega = f.omega() as u64;
    let mut set = vec![false; n as usize];
    for t in 1..=n {
        if gcd(t, n) == 1 {
            set[pow_mod(t, c, n) as usize] = true;
        }
    }
    let residues: Vec<u64> = (0..n).filter(|&x| set[x as usize]).collect();
    let mut close = vec![false; n as usize];
    for &a in &residues {
        for i in 1..=omega {
            if a + i < n && set[(a + i) as usize] {
                close[a as usize] = true;
                close[(a + i) as usize] = true;
            }
        }
    }
    let close_subset: Vec<u64> = residues
        .iter()
        .copied()
        .filter(|&a| close[a as usize])
        .collect();
    let bound = residues.len() as f64
        * omega as f64
        * (7.0f64 / 8.0).powf(omega as f64 / 3.0 - 4.0 * (c as f64).powi(4));
    Ok(Sparsified {
        residues,
        close_subset,
        close_subset_bound: bound,
    })
}

/// JSON form of a combination term; coefficients appear both as complex
/// parts and as an exact rational phase.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComboTermJson {
    pub coeff_re: f64,
    pub coeff_im: f64,
    pub coeff_phase_num: u64,
    pub coeff_phase_den: u64,
    pub multiplier: u64,
    pub scale: u64,
    pub char_modulus: u64,
    pub char_exponents: Vec<u64>,
}

/// JSON form of a scaled-character combination.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComboJson {
    pub modulus: u64,
    pub exponent: u32,
    pub scale_bound: u64,
    pub terms: Vec<ComboTermJson>,
}

impl ScaledCharCombo {
    pub fn to_json(&self) -> ComboJson {
        ComboJson {
            modulus: self.modulus,
            exponent: self.exponent,
            scale_bound: self.scale_bound,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let c = t.coeff.to_complex();
                    ComboTermJson {
                        coeff_re: c.re,
                        coeff_im: c.im,
                        coeff_phase_num: t.coeff.numerator(),
                        coeff_phase_den: t.coeff.order(),
                        multiplier: t.multiplier,
                        scale: t.scaled.scale,
                        char_modulus: t.scaled.chi.modulus(),
                        char_exponents: t.scaled.chi.exponents().to_vec(),
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ComboJson) -> Result<ScaledCharCombo> {
        let mut groups: HashMap<u64, std::sync::Arc<CharacterGroup>> = HashMap::new();
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            let group = match groups.get(&t.char_modulus) {
                Some(g) => g.clone(),
                None => {
                    let g = CharacterGroup::new(t.char_modulus)?;
                    groups.insert(t.char_modulus, g.clone());
                    g
                }
            };
            let chi = DirichletCharacter::new(group, t.char_exponents.clone());
            terms.push(ComboTerm {
                coeff: Phase::root_of_unity(t.coeff_phase_num, t.coeff_phase_den),
                multiplier: t.multiplier,
                scaled: ScaledCharacter::new(t.scale, chi),
            });
        }
        Ok(ScaledCharCombo {
            modulus: json.modulus,
            exponent: json.exponent,
            scale_bound: json.scale_bound,
            terms,
        })
    }
}
