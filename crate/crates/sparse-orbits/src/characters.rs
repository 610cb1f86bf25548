//! Dirichlet characters with exact values.
//!
//! The unit group mod `m` is decomposed into cyclic components via CRT over
//! the prime powers of `m`; odd prime powers are cyclic, `2^e` with `e >= 3`
//! splits as the sign component times the component generated by 5. A
//! character stores one exponent per cyclic component, and its value at a
//! coprime residue is a root of unity represented exactly as a rational
//! phase; complex numbers appear only at evaluation. Full-period cancellation
//! and order computations are therefore exact.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{self, factorize, gcd, lcm};
use crate::error::{Error, Result};

/// A root of unity `e(num/den)`, kept reduced with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// `e(j/k)` reduced.
    pub fn root_of_unity(j: u64, k: u64) -> Phase {
        debug_assert!(k > 0);
        let j = j % k;
        let g = gcd(j, k);
        if j == 0 {
            Phase::ZERO
        } else {
            Phase {
                num: j / g,
                den: k / g,
            }
        }
    }

    pub fn add(self, other: Phase) -> Phase {
        let den = lcm(self.den, other.den);
        let num =
            ((self.num as u128 * (den / self.den) as u128 + other.num as u128 * (den / other.den) as u128)
                % den as u128) as u64;
        Phase::root_of_unity(num, den)
    }

    /// Phase of the `t`-th power.
    pub fn scale(self, t: u64) -> Phase {
        let num = ((self.num as u128 * t as u128) % self.den as u128) as u64;
        Phase::root_of_unity(num, self.den)
    }

    pub fn conj(self) -> Phase {
        Phase::root_of_unity(self.den - self.num, self.den)
    }

    /// Multiplicative order: smallest `d > 0` with `d * phase` integral.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn to_complex(self) -> Complex64 {
        if self.num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let theta = 2.0 * std::f64::consts::PI * (self.num as f64) / (self.den as f64);
        Complex64::new(theta.cos(), theta.sin())
    }
}

/// One cyclic component of the unit group of a prime power.
#[derive(Debug, Clone)]
struct CyclicComponent {
    order: u64,
}

/// The unit group mod one prime power, with its discrete-log table.
#[derive(Debug, Clone)]
struct PrimePowerBlock {
    prime_power: u64,
    components: Vec<CyclicComponent>,
    /// `dlog[a]` holds the component exponents of residue `a`, or
    /// `[u32::MAX, _]` when `a` is not coprime to the prime power.
    dlog: Vec<[u32; 2]>,
}

const NOT_COPRIME: u32 = u32::MAX;

impl PrimePowerBlock {
    fn new(p: u64, e: u32) -> PrimePowerBlock {
        let pe = p.pow(e);
        let mut dlog = vec![[NOT_COPRIME, 0]; pe as usize];
        let mut components = Vec::new();
        if p == 2 {
            match e {
                1 => {
                    dlog[1 % pe as usize] = [0, 0];
                }
                2 => {
                    components.push(CyclicComponent { order: 2 });
                    dlog[1] = [0, 0];
                    dlog[3] = [1, 0];
                }
                _ => {
                    // sign component generated by -1, then the component of 5
                    components.push(CyclicComponent { order: 2 });
                    components.push(CyclicComponent { order: pe / 4 });
                    let mut x = 1u64;
                    for j in 0..pe / 4 {
                        dlog[x as usize] = [0, j as u32];
                        dlog[(pe - x) as usize] = [1, j as u32];
                        x = arith::mul_mod(x, 5, pe);
                    }
                }
            }
        } else {
            let order = pe / p * (p - 1);
            components.push(CyclicComponent { order });
            let g = arith::primitive_root(p, e);
            let mut x = 1u64;
            for j in 0..order {
                dlog[x as usize] = [j as u32, 0];
                x = arith::mul_mod(x, g, pe);
            }
        }
        PrimePowerBlock {
            prime_power: pe,
            components,
            dlog,
        }
    }
}

/// The character group structure for one modulus. Construction builds the
/// discrete-log tables once; characters share it through an `Arc`.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: u64,
    blocks: Vec<PrimePowerBlock>,
    /// Orders of all cyclic components, flattened in block order.
    component_orders: Vec<u64>,
}

impl CharacterGroup {
    /// Builds (or fetches) the group structure for `modulus`. Discrete-log
    /// tables are built once per modulus and shared process-wide: sweeps
    /// and the per-prime decomposition assembly hit the same moduli
    /// repeatedly.
    pub fn new(modulus: u64) -> Result<Arc<CharacterGroup>> {
        use std::sync::{Mutex, OnceLock};
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CharacterGroup>>>> = OnceLock::new();
        if modulus == 0 {
            return Err(Error::NotPositive(0));
        }
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(hit) = cache.lock().expect("cache lock").get(&modulus) {
            return Ok(hit.clone());
        }
        let f = factorize(modulus)?;
        let blocks: Vec<PrimePowerBlock> = f
            .factors
            .iter()
            .map(|&(p, e)| PrimePowerBlock::new(p, e))
            .collect();
        let component_orders = blocks
            .iter()
            .flat_map(|b| b.components.iter().map(|c| c.order))
            .collect();
        let group = Arc::new(CharacterGroup {
            modulus,
            blocks,
            component_orders,
        });
        cache
            .lock()
            .expect("cache lock")
            .insert(modulus, group.clone());
        Ok(group)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// phi(modulus), the number of characters.
    pub fn group_order(&self) -> u64 {
        self.component_orders.iter().product()
    }

    /// Component exponents of `a`, or `None` when `gcd(a, modulus) > 1`.
    fn decompose(&self, a: u64) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(self.component_orders.len());
        for block in &self.blocks {
            let r = (a % self.prime_power_checked(block)) as usize;
            let d = block.dlog[r];
            if d[0] == NOT_COPRIME {
                return None;
            }
            match block.components.len() {
                0 => {}
                1 => out.push(d[0] as u64),
                _ => {
                    out.push(d[0] as u64);
                    out.push(d[1] as u64);
                }
            }
        }
        Some(out)
    }

    fn prime_power_checked(&self, block: &PrimePowerBlock) -> u64 {
        block.prime_power
    }
}

/// A Dirichlet character mod `m`: zero off the coprime residues, a root of
/// unity on them, completely multiplicative and `m`-periodic.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    /// One exponent per cyclic component, `0 <= k < order`.
    exponents: Vec<u64>,
}

impl DirichletCharacter {
    pub fn new(group: Arc<CharacterGroup>, exponents: Vec<u64>) -> DirichletCharacter {
        assert_eq!(exponents.len(), group.component_orders.len());
        let exponents = exponents
            .iter()
            .zip(&group.component_orders)
            .map(|(&k, &ord)| k % ord)
            .collect();
        DirichletCharacter { group, exponents }
    }

    pub fn principal(group: Arc<CharacterGroup>) -> DirichletCharacter {
        let n = group.component_orders.len();
        DirichletCharacter {
            group,
            exponents: vec![0; n],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// Exact phase of the value at `a`; `None` encodes the value 0.
    pub fn phase(&self, a: i64) -> Option<Phase> {
        let m = self.group.modulus;
        let a = a.rem_euclid(m as i64) as u64;
        let decomp = self.group.decompose(a)?;
        let mut phase = Phase::ZERO;
        for ((&d, &k), &ord) in decomp
            .iter()
            .zip(&self.exponents)
            .zip(&self.group.component_orders)
        {
            let num = ((d as u128 * k as u128) % ord as u128) as u64;
            phase = phase.add(Phase::root_of_unity(num, ord));
        }
        Some(phase)
    }

    /// Complex value at `a`.
    pub fn eval(&self, a: i64) -> Complex64 {
        match self.phase(a) {
            None => Complex64::new(0.0, 0.0),
            Some(p) => p.to_complex(),
        }
    }

    /// Values over one full period, for hot loops.
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.group.modulus).map(|a| self.eval(a as i64)).collect()
    }

    /// Phases over one full period (`None` off the coprime residues).
    pub fn phase_table(&self) -> Vec<Option<Phase>> {
        (0..self.group.modulus).map(|a| self.phase(a as i64)).collect()
    }

    /// Pointwise product with a character of the same modulus.
    pub fn mul(&self, other: &DirichletCharacter) -> DirichletCharacter {
        assert_eq!(self.group.modulus, other.group.modulus);
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(&self.group.component_orders)
            .map(|((&a, &b), &ord)| (a + b) % ord)
            .collect();
        DirichletCharacter {
            group: self.group.clone(),
            exponents,
        }
    }

    /// Whether the character repeats with period `m` as a function on the
    /// integers, zero pattern included (always true for multiples of the
    /// modulus; may hold for proper divisors too).
    pub fn is_periodic_with_period(&self, m: u64) -> bool {
        if m == 0 {
            return false;
        }
        let n = self.group.modulus;
        (0..n).all(|x| {
            let a = x as i64;
            self.phase(a) == self.phase(a + m as i64)
        })
    }

    /// Whether the character repeats with period `m` on its support:
    /// `chi(x + m) = chi(x)` whenever both points are coprime to the
    /// modulus. Equivalent to being induced by a character of modulus
    /// `gcd(m, n)` on the coprime classes, which is the hypothesis under
    /// which windowed progression sums stop cancelling (the principal
    /// character mod 2 is support-periodic with period 1 but not
    /// functionally so).
    pub fn is_periodic_on_support(&self, m: u64) -> bool {
        if m == 0 {
            return false;
        }
        let n = self.group.modulus;
        (0..n).all(|x| {
            let a = x as i64;
            match (self.phase(a), self.phase(a + m as i64)) {
                (Some(u), Some(v)) => u == v,
                _ => true,
            }
        })
    }
}

/// All phi(m) characters mod `m`, principal first, in a deterministic
/// odometer order over component exponents.
pub fn enumerate_characters(m: u64) -> Result<Vec<DirichletCharacter>> {
    let group = CharacterGroup::new(m)?;
    let orders = group.component_orders.clone();
    let total: u64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter::new(group.clone(), exps.clone()));
        // increment odometer, last component fastest
        let mut i = orders.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
        if exps.iter().all(|&k| k == 0) {
            return Ok(out);
        }
    }
}

/// Smallest `d >= 1` with the `d`-th power principal: the lcm of the
/// component orders divided by their gcd with the exponents.
pub fn char_order(chi: &DirichletCharacter) -> u64 {
    chi.exponents()
        .iter()
        .zip(&chi.group().component_orders)
        .fold(1u64, |acc, (&k, &ord)| lcm(acc, ord / gcd(ord, k)))
}

/// Character average `1/phi(m) * sum_chi chi(x) conj(chi(t))`, rounded to an
/// integer; equals 1 exactly when `x = t mod m`, else 0. Requires
/// `gcd(t, m) = 1`.
pub fn indicator_via_orthogonality(m: u64, t: u64, x: i64) -> Result<u8> {
    if m == 0 {
        return Err(Error::NotPositive(0));
    }
    if gcd(t % m.max(1), m) != 1 && m > 1 {
        return Err(Error::NonCoprimeModuli(t as u128, m as u128, gcd(t % m, m) as u128));
    }
    let chars = enumerate_characters(m)?;
    let phi = chars.len() as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for chi in &chars {
        sum += chi.eval(x) * chi.eval(t as i64).conj();
    }
    let avg = sum / phi;
    let rounded = avg.re.round();
    if (avg.re - rounded).abs() > 1e-9 || avg.im.abs() > 1e-9 {
        return Err(Error::PrecisionLoss(format!(
            "orthogonality average {avg} did not round cleanly"
        )));
    }
    Ok(rounded as u8)
}

/// `sum_{i<L} chi(x + i*step)`, the character sum along an arithmetic
/// progression.
pub fn progression_sum(chi: &DirichletCharacter, x: i64, step: i64, len: u64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..len as i64 {
        sum += chi.eval(x + i * step);
    }
    sum
}

/// `sum_{x<m} |sum_{i<h} chi(x+i)|^2` for a nonprincipal character; the
/// classical second-moment bound says this is strictly below `m * h`.
pub fn char_window_second_moment(chi: &DirichletCharacter, h: u64) -> Result<f64> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter("char_window_second_moment"));
    }
    if h == 0 {
        return Err(Error::NotPositive(0));
    }
    let m = chi.modulus();
    let values = chi.value_table();
    // prefix sums over [0, m + h)
    let mut prefix = Vec::with_capacity((m + h + 1) as usize);
    prefix.push(Complex64::new(0.0, 0.0));
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..(m + h) {
        acc += values[(x % m) as usize];
        prefix.push(acc);
    }
    let mut total = 0.0f64;
    for x in 0..m as usize {
        let window = prefix[x + h as usize] - prefix[x];
        total += window.norm_sqr();
    }
    Ok(total)
}

/// Number of `x` in the prime field with `chi(x) = eps1` and
/// `chi(x + shift) = eps2`, for a nontrivial character of order `k` and
/// `k`-th roots of unity `eps1`, `eps2`. The count stays within
/// `sqrt(p) + 1` of `p / k^2`.
pub fn char_pair_count(
    chi: &DirichletCharacter,
    eps1: Phase,
    eps2: Phase,
    shift: u64,
) -> Result<u64> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter("char_pair_count"));
    }
    let p = chi.modulus();
    if shift % p == 0 {
        return Err(Error::ZeroShift);
    }
    let k = char_order(chi);
    for eps in [eps1, eps2] {
        if k % eps.order() != 0 {
            return Err(Error::BadRootOfUnity(
                format!("e({}/{})", eps.numerator(), eps.order()),
                k,
            ));
        }
    }
    let phases = chi.phase_table();
    let mut count = 0u64;
    for x in 0..p {
        if phases[x as usize] == Some(eps1) && phases[((x + shift) % p) as usize] == Some(eps2) {
            count += 1;
        }
    }
    Ok(count)
}

/// Character mod `n1 * n2` whose value is the pointwise product of two
/// characters with coprime moduli.
pub fn combine_coprime(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
) -> Result<DirichletCharacter> {
    let (n1, n2) = (chi1.modulus(), chi2.modulus());
    let g = gcd(n1, n2);
    if g != 1 {
        return Err(Error::NonCoprimeModuli(n1 as u128, n2 as u128, g as u128));
    }
    let group = CharacterGroup::new(n1 * n2)?;
    // Blocks of the combined group are exactly the blocks of the two inputs;
    // generators are chosen deterministically, so exponents carry over.
    let mut by_pp: HashMap<u64, &[u64]> = HashMap::new();
    let mut idx = 0usize;
    for b in &chi1.group().blocks {
        let n = b.components.len();
        by_pp.insert(b.prime_power, &chi1.exponents()[idx..idx + n]);
        idx += n;
    }
    idx = 0;
    for b in &chi2.group().blocks {
        let n = b.components.len();
        by_pp.insert(b.prime_power, &chi2.exponents()[idx..idx + n]);
        idx += n;
    }
    let mut exponents = Vec::new();
    for b in &group.blocks {
        let exps = by_pp
            .get(&b.prime_power)
            .expect("combined modulus has exactly the input prime powers");
        exponents.extend_from_slice(exps);
    }
    Ok(DirichletCharacter::new(group, exponents))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::pow_mod;

    /// Independent quadratic-character oracle via Euler's criterion.
    fn legendre_oracle(a: u64, p: u64) -> f64 {
        if a % p == 0 {
            return 0.0;
        }
        if pow_mod(a, (p - 1) / 2, p) == 1 {
            1.0
        } else {
            -1.0
        }
    }

    fn quadratic_character(p: u64) -> DirichletCharacter {
        enumerate_characters(p)
            .unwrap()
            .into_iter()
            .find(|chi| !chi.is_principal() && char_order(chi) == 2)
            .expect("odd prime has a quadratic character")
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_characters(5).unwrap().len(), 4);
        assert_eq!(enumerate_characters(8).unwrap().len(), 4);
        assert_eq!(enumerate_characters(1).unwrap().len(), 1);
        assert_eq!(enumerate_characters(12).unwrap().len(), 4);
        // mod 8 the group is C2 x C2: every nonprincipal character has order 2
        for chi in enumerate_characters(8).unwrap() {
            assert!(char_order(&chi) <= 2);
        }
        // principal character first
        assert!(enumerate_characters(60).unwrap()[0].is_principal());
    }

    #[test]
    fn trivial_modulus_character() {
        let chars = enumerate_characters(1).unwrap();
        for a in -5..5 {
            assert_eq!(chars[0].eval(a), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn quadratic_matches_euler_criterion() {
        for &p in &[3u64, 5, 7, 11, 13, 101] {
            let chi = quadratic_character(p);
            for a in 0..p {
                let v = chi.eval(a as i64);
                assert!((v.re - legendre_oracle(a, p)).abs() < 1e-12, "p={p} a={a}");
                assert!(v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn multiplicativity_and_periodicity() {
        for &m in &[5u64, 8, 12, 45, 56] {
            for chi in enumerate_characters(m).unwrap() {
                let mut state = 12345u64;
                for _ in 0..40 {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(7);
                    let a = (state % (4 * m)) as i64;
                    let b = ((state >> 17) % (4 * m)) as i64;
                    let lhs = chi.eval(a * b);
                    let rhs = chi.eval(a) * chi.eval(b);
                    assert!((lhs - rhs).norm() < 1e-12, "m={m} a={a} b={b}");
                    assert!((chi.eval(a) - chi.eval(a + m as i64)).norm() < 1e-12);
                }
                assert!(chi.is_periodic_with_period(m));
            }
        }
    }

    #[test]
    fn unit_modulus_on_coprimes() {
        for &m in &[7u64, 16, 36] {
            for chi in enumerate_characters(m).unwrap() {
                for a in 0..m {
                    let v = chi.eval(a as i64);
                    if gcd(a, m) == 1 {
                        assert!((v.norm() - 1.0).abs() < 1e-12);
                    } else {
                        assert_eq!(v, Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        let principal7 = DirichletCharacter::principal(CharacterGroup::new(7).unwrap());
        assert_eq!(char_order(&principal7), 1);
        let legendre5 = quadratic_character(5);
        assert_eq!(char_order(&legendre5), 2);
        // a generator of the character group mod 7 has order 6
        let max_order = enumerate_characters(7)
            .unwrap()
            .iter()
            .map(char_order)
            .max()
            .unwrap();
        assert_eq!(max_order, 6);
        // direct power computation: chi^d principal exactly at d = order
        for chi in enumerate_characters(7).unwrap() {
            let d = char_order(&chi);
            let mut pow = DirichletCharacter::principal(chi.group().clone());
            for i in 1..=d {
                pow = pow.mul(&chi);
                if i < d {
                    assert!(!pow.is_principal(), "order not minimal");
                }
            }
            assert!(pow.is_principal());
        }
    }

    #[test]
    fn orthogonality_examples() {
        assert_eq!(indicator_via_orthogonality(5, 2, 7).unwrap(), 1);
        assert_eq!(indicator_via_orthogonality(5, 2, 8).unwrap(), 0);
        assert_eq!(indicator_via_orthogonality(12, 5, 17).unwrap(), 1);
        assert!(indicator_via_orthogonality(12, 4, 1).is_err());
    }

    #[test]
    fn orthogonality_small_grid() {
        for m in 1..=30u64 {
            for t in 1..=m {
                if gcd(t % m, m) != 1 && m > 1 {
                    continue;
                }
                for x in 0..m {
                    let expected = u8::from(x % m == t % m);
                    assert_eq!(
                        indicator_via_orthogonality(m, t, x as i64).unwrap(),
                        expected,
                        "m={m} t={t} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn progression_sum_examples() {
        let principal3 = DirichletCharacter::principal(CharacterGroup::new(3).unwrap());
        let s = progression_sum(&principal3, 1, 3, 4);
        assert!((s - Complex64::new(4.0, 0.0)).norm() < 1e-12);

        let legendre5 = quadratic_character(5);
        let full = progression_sum(&legendre5, 0, 1, 5);
        assert!(full.norm() < 1e-12);
        let two = progression_sum(&legendre5, 1, 1, 2);
        assert!(two.norm() < 1e-12); // chi(1) + chi(2) = 1 - 1
    }

    #[test]
    fn second_moment_examples() {
        let legendre5 = quadratic_character(5);
        let s = char_window_second_moment(&legendre5, 2).unwrap();
        assert!((s - 6.0).abs() < 1e-9);
        assert!(s < 10.0);
        let s1 = char_window_second_moment(&legendre5, 1).unwrap();
        assert!((s1 - 4.0).abs() < 1e-9);
        assert!(s1 < 5.0);
        let cubic13 = enumerate_characters(13)
            .unwrap()
            .into_iter()
            .find(|chi| char_order(chi) == 3)
            .unwrap();
        let s3 = char_window_second_moment(&cubic13, 3).unwrap();
        assert!(s3 < 39.0);
        let principal = DirichletCharacter::principal(CharacterGroup::new(5).unwrap());
        assert!(char_window_second_moment(&principal, 2).is_err());
    }

    #[test]
    fn second_moment_strict_bound_small() {
        for m in 2..=60u64 {
            for chi in enumerate_characters(m).unwrap() {
                if chi.is_principal() {
                    continue;
                }
                for h in 1..=8u64 {
                    let s = char_window_second_moment(&chi, h).unwrap();
                    assert!(s < (m * h) as f64, "m={m} h={h} s={s}");
                }
            }
        }
    }

    #[test]
    fn pair_count_examples() {
        // p=13, k=3: no x with both x and x+1 nonzero cubes
        let cubic13 = enumerate_characters(13)
            .unwrap()
            .into_iter()
            .find(|chi| char_order(chi) == 3)
            .unwrap();
        let one = Phase::root_of_unity(0, 3);
        let n = char_pair_count(&cubic13, one, one, 1).unwrap();
        assert_eq!(n, 0);
        assert!((n as f64 - 13.0 / 9.0).abs() < 13f64.sqrt() + 1.0);

        // p=5, k=2: chi(0) = 0 is never a root of unity, so x=4 does not count
        let legendre5 = quadratic_character(5);
        let one2 = Phase::root_of_unity(0, 2);
        let n5 = char_pair_count(&legendre5, one2, one2, 1).unwrap();
        assert_eq!(n5, 0);
        assert!((n5 as f64 - 5.0 / 4.0).abs() < 5f64.sqrt() + 1.0);

        // p=7, k=2, eps2 = -1
        let legendre7 = quadratic_character(7);
        let minus = Phase::root_of_unity(1, 2);
        let n7 = char_pair_count(&legendre7, one2, minus, 1).unwrap();
        // oracle: QRs mod 7 are {1,2,4}; x QR with x+1 non-residue: x=2 (3), x=4 (5)
        assert_eq!(n7, 2);
        assert!((n7 as f64 - 7.0 / 4.0).abs() < 7f64.sqrt() + 1.0);

        assert!(char_pair_count(&legendre5, one2, one2, 0).is_err());
        let principal = DirichletCharacter::principal(CharacterGroup::new(5).unwrap());
        assert!(char_pair_count(&principal, one2, one2, 1).is_err());
    }

    #[test]
    fn combine_coprime_is_pointwise_product() {
        let chi3 = enumerate_characters(3)
            .unwrap()
            .into_iter()
            .find(|c| !c.is_principal())
            .unwrap();
        let chi5 = quadratic_character(5);
        let chi15 = combine_coprime(&chi3, &chi5).unwrap();
        assert_eq!(chi15.modulus(), 15);
        for a in 0..15i64 {
            let lhs = chi15.eval(a);
            let rhs = chi3.eval(a) * chi5.eval(a);
            assert!((lhs - rhs).norm() < 1e-12, "a={a}");
        }
        assert!(combine_coprime(&chi3, &chi3).is_err());
    }

    #[test]
    fn phase_arithmetic() {
        let a = Phase::root_of_unity(1, 3);
        let b = Phase::root_of_unity(1, 6);
        assert_eq!(a.add(b), Phase::root_of_unity(1, 2));
        assert_eq!(a.add(a.conj()), Phase::ZERO);
        assert_eq!(a.scale(3), Phase::ZERO);
        assert_eq!(Phase::root_of_unity(2, 6), Phase::root_of_unity(1, 3));
        assert_eq!(Phase::root_of_unity(2, 6).order(), 3);
    }
}
