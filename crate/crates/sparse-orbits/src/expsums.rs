//! Complete exponential sums with polynomial phases.
//!
//! Phases are reduced mod `q` in exact integer arithmetic before any
//! `e(residue/q)` is formed, and sums use compensated summation in a fixed
//! iteration order, so results are deterministic and accurate to ~1e-12
//! regardless of coefficient size. Brute-force counts carry explicit budget
//! guards and fail loudly instead of hanging.

use num_complex::Complex64;

use crate::arith::{gcd, inv_mod};
use crate::error::{Error, Result};

/// Kahan compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    sum: Complex64,
    comp: Complex64,
}

impl KahanComplex {
    pub fn add(&mut self, value: Complex64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

/// Kahan compensated accumulator for real values.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanF64 {
    sum: f64,
    comp: f64,
}

impl KahanF64 {
    pub fn add(&mut self, value: f64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Integer polynomial, constant term first, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> IntPolynomial {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        IntPolynomial { coeffs }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> IntPolynomial {
        let mut coeffs = vec![0i64; k + 1];
        coeffs[k] = 1;
        IntPolynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    /// `P(x) mod q` as a residue in `[0, q)`.
    pub fn eval_mod(&self, x: i64, q: u64) -> u64 {
        let qi = q as i128;
        let xm = (x.rem_euclid(q as i64)) as i128;
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * xm + c as i128).rem_euclid(qi);
        }
        acc as u64
    }

    /// `P(x + h)` by binomial expansion.
    pub fn shift(&self, h: i64) -> IntPolynomial {
        let n = self.coeffs.len();
        let mut out = vec![0i128; n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            // c * (x + h)^k
            let mut binom: i128 = 1;
            let mut hpow: i128 = 1;
            for j in (0..=k).rev() {
                // binom = C(k, j), matched with h^(k - j)
                out[j] += c as i128 * binom * hpow;
                if j > 0 {
                    binom = binom * j as i128 / (k - j + 1) as i128;
                    hpow *= h as i128;
                }
            }
        }
        IntPolynomial::new(
            out.into_iter()
                .map(|c| i64::try_from(c).expect("shifted coefficients fit in i64"))
                .collect(),
        )
    }

    /// Discrete derivative `P(x + h) - P(x)`.
    pub fn difference(&self, h: i64) -> IntPolynomial {
        let shifted = self.shift(h);
        let n = shifted.coeffs.len().max(self.coeffs.len());
        let mut out = vec![0i64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = shifted.coeffs.get(i).copied().unwrap_or(0);
            let b = self.coeffs.get(i).copied().unwrap_or(0);
            *slot = a - b;
        }
        IntPolynomial::new(out)
    }
}

/// Roots-of-unity table `e(j/q)` for `j` in `[0, q)`.
pub fn root_table(q: u64) -> Vec<Complex64> {
    (0..q)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / q as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect()
}

/// Coefficients reduced into `[0, q)` for the hot evaluation loops.
fn reduce_coeffs(poly: &IntPolynomial, q: u64) -> Vec<u64> {
    poly.coeffs()
        .iter()
        .map(|&c| c.rem_euclid(q as i64) as u64)
        .collect()
}

#[inline]
fn eval_reduced(red: &[u64], x: u64, q: u64) -> u64 {
    let mut acc = 0u64;
    for &c in red.iter().rev() {
        acc = ((acc as u128 * x as u128 + c as u128) % q as u128) as u64;
    }
    acc
}

/// Complete sum `sum_{x<q} e(P(x)/q)`.
pub fn weyl_sum(poly: &IntPolynomial, q: u64) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::NotPositive(0));
    }
    let roots = root_table(q);
    let red = reduce_coeffs(poly, q);
    let mut acc = KahanComplex::default();
    for x in 0..q {
        acc.add(roots[eval_reduced(&red, x, q) as usize]);
    }
    Ok(acc.value())
}

const DIFFERENCE_BUDGET: u128 = 100_000_000;

/// Average `A_n` over all difference tuples: the mean of
/// `|1/q sum_x e(D_{h_1}..D_{h_n}(P)(x)/q)|` with each `h_i` in `[0, q)`,
/// by full enumeration. Requires `1 <= n <= deg(P) - 1` and enforces the
/// `q^(n+1) <= 10^8` budget.
pub fn weyl_difference_avg(poly: &IntPolynomial, q: u64, n: u32) -> Result<f64> {
    if q == 0 {
        return Err(Error::NotPositive(0));
    }
    if n == 0 || n as usize > poly.degree().saturating_sub(1) {
        return Err(Error::Config(format!(
            "difference order n = {n} must satisfy 1 <= n <= deg - 1 = {}",
            poly.degree().saturating_sub(1)
        )));
    }
    let needed = (q as u128).pow(n + 1);
    if needed > DIFFERENCE_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "weyl_difference_avg enumeration",
            needed,
            cap: DIFFERENCE_BUDGET,
        });
    }
    let roots = root_table(q);
    let mut outer = KahanF64::default();
    // Depth-first over difference tuples in fixed order. Replacing h by
    // q - h conjugates the inner sum (substitute x -> x - h), so each
    // coordinate only walks [0, q/2] with weight 2 on the strict interior.
    fn recurse(
        poly: &IntPolynomial,
        q: u64,
        depth: u32,
        weight: f64,
        roots: &[Complex64],
        outer: &mut KahanF64,
    ) {
        if depth == 0 {
            let red = reduce_coeffs(poly, q);
            let mut inner = KahanComplex::default();
            for x in 0..q {
                inner.add(roots[eval_reduced(&red, x, q) as usize]);
            }
            outer.add(weight * inner.value().norm() / q as f64);
            return;
        }
        recurse(&poly.difference(0), q, depth - 1, weight, roots, outer);
        for h in 1..=q / 2 {
            let w = if 2 * h == q { weight } else { 2.0 * weight };
            recurse(&poly.difference(h as i64), q, depth - 1, w, roots, outer);
        }
    }
    recurse(poly, q, n, 1.0, &roots, &mut outer);
    Ok(outer.value() / (q as f64).powi(n as i32))
}

/// Exact `A_(deg-1)` through the linear-phase count: the maximal iterated
/// difference of `P` is `lc * deg! * (prod h_i) * x + const`, so the inner
/// sum is `q` exactly when `q` divides `lc * deg! * prod h_i` and vanishes
/// otherwise. Counting tuples is multiplicative over the primes of `q`.
pub fn weyl_difference_avg_top(poly: &IntPolynomial, q: u64) -> Result<f64> {
    if q == 0 {
        return Err(Error::NotPositive(0));
    }
    let k = poly.degree();
    if k < 2 {
        return Err(Error::Config(
            "top difference average needs degree at least 2".into(),
        ));
    }
    let mut kfact: i128 = 1;
    for j in 2..=k as i128 {
        kfact *= j;
    }
    let m = (poly.leading().unsigned_abs() as u128 * kfact.unsigned_abs()) % q as u128;
    let qp = q / gcd(q, m as u64);
    // count tuples (h_1..h_(k-1)) in [0,q)^(k-1) with qp | prod h_i
    let tuples = (q as u128).pow(k as u32 - 1);
    let count = divisible_tuple_count(q, qp, (k - 1) as u32);
    Ok(count as f64 / tuples as f64)
}

/// Number of `(h_1..h_t)` in `[0, q)^t` with `qp | h_1 * .. * h_t`,
/// multiplicative over the primes of `qp` (h = 0 counts as infinitely
/// divisible).
fn divisible_tuple_count(q: u64, qp: u64, t: u32) -> u128 {
    let mut count: u128 = (q as u128).pow(t);
    let mut rest = qp;
    let mut p = 2u64;
    while p * p <= rest || (rest > 1 && p <= rest) {
        if rest % p == 0 {
            let mut a = 0u32;
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            let e = { // nu_p(q)
                let mut e = 0u32;
                let mut m = q;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                e
            };
            // distribution of min(nu_p(h), a) for h in [0, q): depends on
            // h mod p^e only; classes are equidistributed
            let pe = p.pow(e) as u128;
            let mut weight = vec![0u128; a as usize + 1];
            for j in 0..a.min(e) {
                weight[j as usize] = (pe / (p as u128).pow(j)) - (pe / (p as u128).pow(j + 1));
            }
            weight[a as usize] += pe / (p as u128).pow(a.min(e));
            // DP over capped exponent sums
            let mut dp = vec![0u128; a as usize + 1];
            dp[0] = 1;
            for _ in 0..t {
                let mut next = vec![0u128; a as usize + 1];
                for (s, &ways) in dp.iter().enumerate() {
                    if ways == 0 {
                        continue;
                    }
                    for (j, &w) in weight.iter().enumerate() {
                        let ns = (s + j).min(a as usize);
                        next[ns] += ways * w;
                    }
                }
                dp = next;
            }
            let good = dp[a as usize];
            let total = pe.pow(t);
            // rescale from residues mod p^e to [0, q): factor (q/p^e)^t
            count = count / total * good; // exact: good | structure of total
            debug_assert_eq!((q as u128).pow(t) % total, 0);
        }
        p += if p == 2 { 1 } else { 2 };
        if rest == 1 {
            break;
        }
    }
    count
}

/// Periodic van der Corput check: returns `(lhs, rhs)` with
/// `lhs = |avg of a_n|` and `rhs` the differencing bound
/// `sqrt( (2/H) sum_{h<H} |avg of a_n conj(a_{n+h})| )`; `lhs <= rhs` always
/// holds for period-`N` sequences of magnitude at most 1.
pub fn vdc_check(seq: &[Complex64], window: u64) -> Result<(f64, f64)> {
    if seq.is_empty() || window == 0 {
        return Err(Error::NotPositive(0));
    }
    for (i, a) in seq.iter().enumerate() {
        if a.norm() > 1.0 + 1e-9 {
            return Err(Error::MagnitudeExceedsOne(a.norm(), i));
        }
    }
    let n = seq.len();
    let mut avg = KahanComplex::default();
    for a in seq {
        avg.add(*a);
    }
    let lhs = avg.value().norm() / n as f64;
    let mut corr_sum = KahanF64::default();
    for h in 0..window as usize {
        let mut corr = KahanComplex::default();
        for (i, a) in seq.iter().enumerate() {
            corr.add(a * seq[(i + h) % n].conj());
        }
        corr_sum.add(corr.value().norm() / n as f64);
    }
    let rhs = (2.0 / window as f64 * corr_sum.value()).sqrt();
    Ok((lhs, rhs))
}

/// `G(l, v, t; q) = sum_{x<q} e((l * P(x+t) + v * x) / q)`.
pub fn gauss_g(poly: &IntPolynomial, l: i64, v: i64, t: i64, q: u64) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::NotPositive(0));
    }
    let roots = root_table(q);
    let red = reduce_coeffs(poly, q);
    let lm = l.rem_euclid(q as i64) as u64;
    let vm = v.rem_euclid(q as i64) as u64;
    let tm = t.rem_euclid(q as i64) as u64;
    let mut acc = KahanComplex::default();
    for x in 0..q {
        let p_val = eval_reduced(&red, (x + tm) % q, q);
        let phase = (lm as u128 * p_val as u128 + vm as u128 * x as u128) % q as u128;
        acc.add(roots[phase as usize]);
    }
    Ok(acc.value())
}

const RESIDUE_COUNT_BUDGET: u128 = 1_000_000_000;

/// Exact count of pairs `(m, n)` with `m = a mod r`, `m` in `[x, x+M)`,
/// `n` in `[t, t+N)`, and `P(n) = m mod q`, for coprime `q, r`.
///
/// Internally both ranges collapse to residue classes mod `q` (and mod `qr`
/// through CRT), so the count is exact and cheap; the stated `M * N` budget
/// is still enforced as a precondition.
pub fn residue_count_lhs(
    poly: &IntPolynomial,
    q: u64,
    r: u64,
    a: i64,
    x: i64,
    m_len: u64,
    n_len: u64,
    t: i64,
) -> Result<u64> {
    if q == 0 || r == 0 {
        return Err(Error::NotPositive(0));
    }
    let g = gcd(q, r);
    if g != 1 {
        return Err(Error::NonCoprimeModuli(q as u128, r as u128, g as u128));
    }
    let needed = m_len as u128 * n_len as u128;
    if needed > RESIDUE_COUNT_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "residue_count_lhs ranges",
            needed,
            cap: RESIDUE_COUNT_BUDGET,
        });
    }
    let qr = q as i128 * r as i128;
    let r_inv = inv_mod(r % q, q).expect("coprime by the gcd check") as i128;
    // count of integers in [lo, lo + len) congruent to c mod modulus
    let class_count = |lo: i128, len: u64, c: i128, modulus: i128| -> u64 {
        let hi = lo + len as i128;
        let cc = c.rem_euclid(modulus);
        (((hi - 1 - cc).div_euclid(modulus)) - ((lo - 1 - cc).div_euclid(modulus))) as u64
    };
    let mut total = 0u64;
    for sigma in 0..q {
        let n_count = class_count(t as i128, n_len, sigma as i128, q as i128);
        if n_count == 0 {
            continue;
        }
        let rho = poly.eval_mod(sigma as i64, q) as i128;
        // m = a mod r and m = rho mod q
        let k = ((rho - a as i128).rem_euclid(q as i128) * r_inv).rem_euclid(q as i128);
        let m0 = a as i128 + r as i128 * k;
        let m_count = class_count(x as i128, m_len, m0, qr);
        total += n_count * m_count;
    }
    Ok(total)
}

/// `(lhs, main_term, ratio)` for the residue count against `M*N/(q*r)`.
pub fn residue_count_ratio(
    poly: &IntPolynomial,
    q: u64,
    r: u64,
    a: i64,
    x: i64,
    m_len: u64,
    n_len: u64,
    t: i64,
) -> Result<(u64, f64, f64)> {
    let lhs = residue_count_lhs(poly, q, r, a, x, m_len, n_len, t)?;
    let main = m_len as f64 * n_len as f64 / (q as f64 * r as f64);
    Ok((lhs, main, lhs as f64 / main))
}
