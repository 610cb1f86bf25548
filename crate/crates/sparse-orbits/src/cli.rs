//! Deterministic experiment runner.
//!
//! Every subcommand reads its parameters from flags, from a JSON config
//! file, or both (flags win), draws all randomness from a single seed
//! through a counter-based generator, and writes CSV (`# schema=1` header)
//! or JSON with rows sorted by cell key — two runs with the same config are
//! byte-identical, independent of the thread count. `SPARSE_ORBIT_THREADS`
//! caps the rayon pool used for sweep cells.
//!
//! Exit codes: 0 success, 2 configuration/schema violation, 3 budget
//! exhaustion, 1 any other failure.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Deserialize;

use crate::characters::{char_order, char_pair_count, char_window_second_moment, enumerate_characters, progression_sum, Phase};
use crate::diophantine::{CfSpec, DenominatorConstraints};
use crate::dynamics::{rigidity_profile, System, SystemSpec};
use crate::equi::{equidistribution_trend, initial_point, iterate};
use crate::error::Error;
use crate::expsums::{residue_count_ratio, vdc_check, weyl_difference_avg, weyl_sum, IntPolynomial};
use crate::powres::{approximate_pow, pow_count, pow_count_gcd, sq_count, PowProfile};

/// Counter-based generator: the SplitMix64 stream of `seed`, addressable by
/// counter, so any cell of any sweep can draw its own reproducible values.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    seed: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> CounterRng {
        CounterRng { seed }
    }

    pub fn u64(&self, counter: u64) -> u64 {
        let mut z = self
            .seed
            .wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9E3779B97F4A7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&self, counter: u64) -> f64 {
        (self.u64(counter) >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&self, counter: u64, bound: u64) -> u64 {
        ((self.u64(counter) as u128 * bound as u128) >> 64) as u64
    }
}

pub const SCHEMA_LINE: &str = "# schema=1";

#[derive(Parser, Debug)]
#[command(name = "sparse-orbits", version, about = "Reproducible number-theory and rigidity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct Common {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    #[serde(skip)]
    config: Option<String>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
    /// Seed for all sampled quantities.
    #[arg(long)]
    seed: Option<u64>,
    /// Budget cap for enumeration-heavy cells.
    #[arg(long)]
    budget: Option<u64>,
}

macro_rules! merge_opt {
    ($cli:expr, $file:expr, $($field:ident),+ $(,)?) => {
        $( if $cli.$field.is_none() { $cli.$field = $file.$field.clone(); } )+
    };
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct DecomposeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Modulus N of the residue-count profile.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    modulus: Option<u64>,
    /// Power exponent C.
    #[arg(long = "C")]
    #[serde(rename = "C")]
    exponent: Option<u32>,
    /// Scale bound d.
    #[arg(long = "d")]
    #[serde(rename = "d")]
    scale: Option<u64>,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct ResiduesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    modulus: Option<u64>,
    #[arg(long = "C")]
    #[serde(rename = "C")]
    exponent: Option<u32>,
    /// Also tabulate counts restricted to gcd(t, N) = d.
    #[arg(long = "d")]
    #[serde(rename = "d")]
    scale: Option<u64>,
    /// Square-count mode: modulus q with the half-open interval [lo, hi).
    #[arg(long)]
    sq_modulus: Option<u64>,
    #[arg(long)]
    lo: Option<i64>,
    #[arg(long)]
    hi: Option<i64>,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct LemmaCountArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Polynomial coefficients, constant first (default n^2).
    #[arg(long, value_delimiter = ',')]
    coeffs: Option<Vec<i64>>,
    /// Monomial shorthand: "n^2", "n^3", ...
    #[arg(long = "P")]
    #[serde(rename = "P")]
    monomial: Option<String>,
    /// Moduli to sweep.
    #[arg(long = "q", value_delimiter = ',')]
    #[serde(rename = "q")]
    moduli: Option<Vec<u64>>,
    /// Progression modulus r.
    #[arg(long = "r")]
    #[serde(rename = "r")]
    progression: Option<u64>,
    /// Interval lengths M = N = ceil(q^exponent); explicit --M/--N override.
    #[arg(long)]
    length_exponent: Option<f64>,
    #[arg(long = "M")]
    #[serde(rename = "M")]
    m_len: Option<u64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    n_len: Option<u64>,
    /// Seeded (a, x, t) trials per modulus.
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct CharSumsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// One of: second-moment, pair-count, progression.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    modulus_max: Option<u64>,
    /// Window length h (second moment) or L (progression).
    #[arg(long)]
    window_max: Option<u64>,
    /// Character orders for pair counts.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<u64>>,
    #[arg(long)]
    shift_max: Option<u64>,
    /// Progression step m.
    #[arg(long)]
    step_max: Option<u64>,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct CfArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',')]
    quotients: Option<Vec<u64>>,
    /// Growth rule (only "power").
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    exponent: Option<u32>,
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    first: Option<u64>,
    /// Constrained denominator construction instead of convergents.
    #[arg(long)]
    construct: Option<bool>,
    #[arg(long)]
    q1: Option<u64>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    prime: Option<bool>,
    /// Congruence "modulus,residue".
    #[arg(long, value_delimiter = ',')]
    congruence: Option<Vec<u64>>,
    #[arg(long)]
    coprime: Option<bool>,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct RigidityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Path to a system spec JSON file.
    #[arg(long)]
    system: Option<String>,
    /// Inline system spec JSON.
    #[arg(long)]
    system_json: Option<String>,
    /// Denominator indices n to profile (q = q_n).
    #[arg(long, value_delimiter = ',')]
    q_indices: Option<Vec<usize>>,
    /// t_max = floor(q_(n+1)^t_exponent); --t-max overrides.
    #[arg(long)]
    t_exponent: Option<f64>,
    #[arg(long)]
    t_max: Option<u64>,
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct OrbitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    system_json: Option<String>,
    #[arg(long = "C")]
    #[serde(rename = "C")]
    exponent: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<u64>>,
    #[arg(long)]
    starts: Option<u64>,
    #[arg(long)]
    k_max: Option<i64>,
    /// Also dump the first orbit as CSV rows (i, x_i, y_i) to this path.
    #[arg(long)]
    dump: Option<String>,
    /// Write the full JSON report here (in addition to the CSV).
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct VdcArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// One of: random, constant, character.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    length: Option<u64>,
    #[arg(long)]
    window: Option<u64>,
    #[arg(long)]
    count: Option<u64>,
}

#[derive(Debug, Clone, Args, Deserialize, Default)]
struct WeylArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',')]
    coeffs: Option<Vec<i64>>,
    #[arg(long)]
    q_max: Option<u64>,
    /// Also tabulate the difference average of this order.
    #[arg(long)]
    difference: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scaled-character decomposition of the power-residue profile (JSON).
    Decompose(DecomposeArgs),
    /// Power-residue and square-count tables.
    Residues(ResiduesArgs),
    /// Residue-count ratio sweeps over moduli for polynomial values.
    LemmaCount(LemmaCountArgs),
    /// Character-sum statistics sweeps.
    CharSums(CharSumsArgs),
    /// Continued-fraction convergents and constrained denominators.
    Cf(CfArgs),
    /// Rigidity profiles over grids.
    Rigidity(RigidityArgs),
    /// Sparse-orbit equidistribution trend reports.
    Orbit(OrbitArgs),
    /// Periodic van der Corput inequality batches.
    Vdc(VdcArgs),
    /// Weyl sums and difference averages.
    Weyl(WeylArgs),
}

fn load_config<T: for<'de> Deserialize<'de>>(path: &Option<String>) -> Result<Option<T>, Error> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read config {p}: {e}")))?;
            let parsed = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("config {p}: {e}")))?;
            Ok(Some(parsed))
        }
    }
}

fn write_output(common: &Common, text: &str) -> Result<(), Error> {
    match &common.out {
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::Config(format!("stdout: {e}")))?;
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {path}: {e}"))),
    }
}

fn require<T: Clone>(value: &Option<T>, name: &str) -> Result<T, Error> {
    value
        .clone()
        .ok_or_else(|| Error::Config(format!("missing required parameter '{name}'")))
}

/// Fails fast when the declared work estimate exceeds `--budget`.
fn check_budget(budget: Option<u64>, needed: u128, what: &'static str) -> Result<(), Error> {
    if let Some(cap) = budget {
        if needed > cap as u128 {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                cap: cap as u128,
            });
        }
    }
    Ok(())
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("SPARSE_ORBIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(rayon::current_num_threads);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn run_decompose(mut args: DecomposeArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<DecomposeArgs>(&args.common.config)? {
        merge_opt!(args, file, modulus, exponent, scale);
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let n = require(&args.modulus, "N")?;
    let c = args.exponent.unwrap_or(2);
    let d = args.scale.unwrap_or(1);
    check_budget(args.common.budget, n as u128, "decompose modulus")?;
    let (combo, l1_bound) = approximate_pow(n, c, d)?;
    let profile = PowProfile::fast(n, c)?;
    let values = combo.value_profile();
    let measured: f64 = (0..n as usize)
        .map(|x| (profile.counts[x] as f64 - values[x].re).abs())
        .sum::<f64>()
        / n as f64;
    let report = serde_json::json!({
        "combo": combo.to_json(),
        "l1_error_bound": l1_bound,
        "l1_error_measured": measured,
        "weighted_term_count": combo.weighted_term_count(),
        "term_budget": combo.term_budget(),
    });
    write_output(
        &args.common,
        &format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")),
    )
}

fn run_residues(mut args: ResiduesArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<ResiduesArgs>(&args.common.config)? {
        merge_opt!(args, file, modulus, exponent, scale, sq_modulus, lo, hi);
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let mut out = format!("{SCHEMA_LINE}\n");
    if let Some(q) = args.sq_modulus {
        check_budget(args.common.budget, q as u128 * q as u128, "square-count table")?;
        let lo = args.lo.unwrap_or(0);
        let hi = args.hi.unwrap_or(q as i64);
        out.push_str("m,sq_count\n");
        for m in 0..q {
            out.push_str(&format!("{m},{}\n", sq_count(q, lo, hi, m as i64)?));
        }
        return write_output(&args.common, &out);
    }
    let n = require(&args.modulus, "N")?;
    let c = args.exponent.unwrap_or(2);
    check_budget(args.common.budget, n as u128, "residue table")?;
    match args.scale {
        None => {
            out.push_str("x,pow_count\n");
            for x in 0..n {
                out.push_str(&format!("{x},{}\n", pow_count(n, c, x as i64)?));
            }
        }
        Some(d) => {
            out.push_str("x,pow_count,pow_count_gcd\n");
            for x in 0..n {
                out.push_str(&format!(
                    "{x},{},{}\n",
                    pow_count(n, c, x as i64)?,
                    pow_count_gcd(n, c, x as i64, d)?
                ));
            }
        }
    }
    write_output(&args.common, &out)
}

fn run_lemma_count(mut args: LemmaCountArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<LemmaCountArgs>(&args.common.config)? {
        merge_opt!(
            args, file, coeffs, monomial, moduli, progression, length_exponent, m_len, n_len,
            trials
        );
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let coeffs = match (&args.coeffs, &args.monomial) {
        (Some(c), _) => c.clone(),
        (None, Some(m)) => {
            let exp: usize = m
                .strip_prefix("n^")
                .and_then(|e| e.parse().ok())
                .ok_or_else(|| Error::Config(format!("cannot parse monomial '{m}' (use n^2, n^3, ...)")))?;
            let mut v = vec![0i64; exp + 1];
            v[exp] = 1;
            v
        }
        (None, None) => vec![0, 0, 1],
    };
    let poly = IntPolynomial::new(coeffs);
    let moduli = require(&args.moduli, "q")?;
    let r = args.progression.unwrap_or(1);
    let trials = args.trials.unwrap_or(1);
    let exp = args.length_exponent.unwrap_or(0.9);
    let rng = CounterRng::new(args.common.seed.unwrap_or(0));
    for &q in &moduli {
        let m_len = args.m_len.unwrap_or(((q as f64).powf(exp)).ceil() as u64) as u128;
        let n_len = args.n_len.unwrap_or(m_len as u64) as u128;
        check_budget(args.common.budget, m_len * n_len, "residue-count window product")?;
    }
    let pool = thread_pool();
    let cells: Vec<(u64, u64)> = moduli
        .iter()
        .flat_map(|&q| (0..trials).map(move |t| (q, t)))
        .collect();
    let rows: Vec<String> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(q, trial)| {
                let m_len = args.m_len.unwrap_or(((q as f64).powf(exp)).ceil() as u64);
                let n_len = args.n_len.unwrap_or(m_len);
                let base = q.wrapping_mul(1_000_003).wrapping_add(trial);
                let a = rng.below(base, r.max(1)) as i64;
                let x = rng.below(base.wrapping_add(1), 4 * q) as i64 - 2 * q as i64;
                let t = rng.below(base.wrapping_add(2), 4 * q) as i64 - 2 * q as i64;
                match residue_count_ratio(&poly, q, r, a, x, m_len, n_len, t) {
                    Ok((lhs, main, ratio)) => {
                        format!("{q},{r},{m_len},{n_len},{a},{x},{t},{lhs},{main},{ratio}")
                    }
                    Err(e) => format!("{q},{r},{m_len},{n_len},{a},{x},{t},error,{e},"),
                }
            })
            .collect()
    });
    let mut out = format!("{SCHEMA_LINE}\nq,r,M,N,a,x,t,lhs,main_term,ratio\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    write_output(&args.common, &out)
}

fn run_char_sums(mut args: CharSumsArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<CharSumsArgs>(&args.common.config)? {
        merge_opt!(args, file, mode, modulus_max, window_max, orders, shift_max, step_max);
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let mode = args.mode.clone().unwrap_or_else(|| "second-moment".into());
    let m_max = args.modulus_max.unwrap_or(50);
    let window = args.window_max.unwrap_or(10).max(args.step_max.unwrap_or(10));
    check_budget(
        args.common.budget,
        m_max as u128 * m_max as u128 * window as u128,
        "character sweep size",
    )?;
    let pool = thread_pool();
    let mut out = format!("{SCHEMA_LINE}\n");
    match mode.as_str() {
        "second-moment" => {
            let h_max = args.window_max.unwrap_or(10);
            out.push_str("m,char_index,h,stat,bound,ok\n");
            let rows: Vec<Vec<String>> = pool.install(|| {
                (2..=m_max)
                    .into_par_iter()
                    .map(|m| {
                        let mut rows = Vec::new();
                        for (ci, chi) in enumerate_characters(m).expect("positive").iter().enumerate() {
                            if chi.is_principal() {
                                continue;
                            }
                            for h in 1..=h_max {
                                let stat = char_window_second_moment(chi, h).expect("nonprincipal");
                                let bound = (m * h) as f64;
                                rows.push(format!("{m},{ci},{h},{stat},{bound},{}", stat < bound));
                            }
                        }
                        rows
                    })
                    .collect()
            });
            for group in rows {
                for row in group {
                    out.push_str(&row);
                    out.push('\n');
                }
            }
        }
        "pair-count" => {
            let orders = args.orders.clone().unwrap_or_else(|| vec![2, 3, 5]);
            let shift_max = args.shift_max.unwrap_or(3);
            out.push_str("p,k,shift,eps1,eps2,count,expected,bound,ok\n");
            let primes: Vec<u64> = (3..=m_max).filter(|&p| crate::arith::is_prime(p)).collect();
            let rows: Vec<Vec<String>> = pool.install(|| {
                primes
                    .par_iter()
                    .map(|&p| {
                        let mut rows = Vec::new();
                        for &k in &orders {
                            if (p - 1) % k != 0 {
                                continue;
                            }
                            let chi = enumerate_characters(p)
                                .expect("positive")
                                .into_iter()
                                .find(|c| char_order(c) == k)
                                .expect("order divides p - 1");
                            for shift in 1..=shift_max.min(p - 1) {
                                for e1 in 0..k {
                                    for e2 in 0..k {
                                        let eps1 = Phase::root_of_unity(e1, k);
                                        let eps2 = Phase::root_of_unity(e2, k);
                                        let count =
                                            char_pair_count(&chi, eps1, eps2, shift).expect("valid");
                                        let expected = p as f64 / (k * k) as f64;
                                        let bound = (p as f64).sqrt() + 1.0;
                                        let ok = (count as f64 - expected).abs() < bound;
                                        rows.push(format!(
                                            "{p},{k},{shift},{e1}/{k},{e2}/{k},{count},{expected},{bound},{ok}"
                                        ));
                                    }
                                }
                            }
                        }
                        rows
                    })
                    .collect()
            });
            for group in rows {
                for row in group {
                    out.push_str(&row);
                    out.push('\n');
                }
            }
        }
        "progression" => {
            let step_max = args.step_max.unwrap_or(10);
            let window = args.window_max.unwrap_or(8);
            out.push_str("n,char_index,step,window,total,bound,ok\n");
            let rows: Vec<Vec<String>> = pool.install(|| {
                (2..=m_max)
                    .into_par_iter()
                    .map(|n| {
                        let mut rows = Vec::new();
                        for (ci, chi) in enumerate_characters(n).expect("positive").iter().enumerate() {
                            for step in 1..=step_max {
                                if chi.is_periodic_on_support(step) {
                                    continue;
                                }
                                let total: f64 = (0..n)
                                    .map(|x| progression_sum(chi, x as i64, step as i64, window).norm())
                                    .sum();
                                let bound = n as f64 * ((step * window) as f64).sqrt();
                                rows.push(format!(
                                    "{n},{ci},{step},{window},{total},{bound},{}",
                                    total <= bound
                                ));
                            }
                        }
                        rows
                    })
                    .collect()
            });
            for group in rows {
                for row in group {
                    out.push_str(&row);
                    out.push('\n');
                }
            }
        }
        other => return Err(Error::Config(format!("unknown char-sums mode '{other}'"))),
    }
    write_output(&args.common, &out)
}

fn run_cf(mut args: CfArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<CfArgs>(&args.common.config)? {
        merge_opt!(
            args, file, quotients, rule, exponent, terms, first, construct, q1, length, prime,
            congruence, coprime
        );
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let mut out = format!("{SCHEMA_LINE}\n");
    if args.construct.unwrap_or(false) {
        let constraints = DenominatorConstraints {
            prime: args.prime.unwrap_or(false),
            congruence: args
                .congruence
                .as_ref()
                .map(|v| {
                    if v.len() == 2 {
                        Ok((v[0], v[1]))
                    } else {
                        Err(Error::Config("congruence needs 'modulus,residue'".into()))
                    }
                })
                .transpose()?,
            coprime_to_previous: args.coprime.unwrap_or(false),
        };
        let budget = args.common.budget.unwrap_or(1_000_000);
        let seq = crate::diophantine::construct_denominators(
            require(&args.q1, "q1")?,
            &constraints,
            args.length.unwrap_or(8),
            budget,
        )?;
        out.push_str("n,q\n");
        for (n, q) in seq.iter().enumerate() {
            out.push_str(&format!("{n},{q}\n"));
        }
        return write_output(&args.common, &out);
    }
    let spec = if let Some(quotients) = args.quotients.clone() {
        CfSpec::Quotients { quotients }
    } else {
        CfSpec::Power {
            rule: args.rule.clone().unwrap_or_else(|| "power".into()),
            exponent: require(&args.exponent, "exponent")?,
            terms: args.terms.unwrap_or(8),
            first: args.first,
        }
    };
    let cf = spec.build()?;
    out.push_str("n,quotient,p,q\n");
    for (n, ((p, q), a)) in cf.convergents.iter().zip(&cf.quotients).enumerate() {
        out.push_str(&format!("{n},{a},{p},{q}\n"));
    }
    write_output(&args.common, &out)
}

fn load_system(path: &Option<String>, inline: &Option<String>) -> Result<System, Error> {
    let text = match (path, inline) {
        (_, Some(json)) => json.clone(),
        (Some(p), None) => std::fs::read_to_string(p)
            .map_err(|e| Error::Config(format!("cannot read system spec {p}: {e}")))?,
        (None, None) => return Err(Error::Config("need --system or --system-json".into())),
    };
    let spec: SystemSpec =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("system spec: {e}")))?;
    spec.build()
}

fn run_rigidity(mut args: RigidityArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<RigidityArgs>(&args.common.config)? {
        merge_opt!(args, file, system, system_json, q_indices, t_exponent, t_max, grid);
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let sys = load_system(&args.system, &args.system_json)?;
    let cf = match &sys {
        System::Rotation(r) => r.cf.clone(),
        System::Skew(s) => s.rotation.cf.clone(),
        System::Flow(f) => f.rotation.cf.clone(),
    };
    let indices = require(&args.q_indices, "q-indices")?;
    let grid = args.grid.unwrap_or(1024);
    check_budget(
        args.common.budget,
        indices.len() as u128 * grid as u128 * 4096,
        "rigidity grid sweep",
    )?;
    let t_exp = args.t_exponent.unwrap_or(0.8);
    let mut out = format!("{SCHEMA_LINE}\nq_index,q,t_max,grid,mode,value,log2_value\n");
    for &n in &indices {
        if n + 1 >= cf.len() {
            return Err(Error::InsufficientConvergents {
                required: n + 2,
                available: cf.len(),
            });
        }
        let q = cf.denominator(n).clone();
        let t_max = match args.t_max {
            Some(t) => BigUint::from(t),
            None => pow_floor(cf.denominator(n + 1), t_exp),
        };
        let v = rigidity_profile(&sys, &q, &t_max, grid)?;
        out.push_str(&format!(
            "{n},{q},{t_max},{grid},{:?},{},{}\n",
            v.mode, v.value, v.log2
        ));
    }
    write_output(&args.common, &out)
}

/// `floor(q^e)` for a big `q` and fractional `e`, via integer roots: uses
/// `e = a/b` with `b = 10` digits of precision.
pub fn pow_floor(q: &BigUint, e: f64) -> BigUint {
    let denom = 100u32;
    let numer = (e * denom as f64).round() as u32;
    q.pow(numer).nth_root(denom)
}

fn run_orbit(mut args: OrbitArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<OrbitArgs>(&args.common.config)? {
        merge_opt!(args, file, system, system_json, exponent, checkpoints, starts, k_max, dump, json_out);
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let sys = load_system(&args.system, &args.system_json)?;
    let exponent = args.exponent.unwrap_or(2);
    let checkpoints = args
        .checkpoints
        .clone()
        .unwrap_or_else(|| vec![1_000, 10_000, 100_000]);
    let starts = args.starts.unwrap_or(3);
    let k_max = args.k_max.unwrap_or(5);
    check_budget(
        args.common.budget,
        starts as u128 * *checkpoints.last().unwrap() as u128,
        "orbit points",
    )?;
    let rng = CounterRng::new(args.common.seed.unwrap_or(0));
    let pool = thread_pool();
    let reports: Vec<crate::equi::AverageReport> = pool.install(|| {
        (0..starts)
            .into_par_iter()
            .map(|s| {
                let x0 = rng.unit(2 * s);
                let y0 = rng.unit(2 * s + 1);
                let start = initial_point(&sys, x0, y0).expect("valid start");
                equidistribution_trend(&sys, &start, exponent, &checkpoints, k_max, &format!("start-{s}"))
                    .expect("orbit within budget")
            })
            .collect()
    });
    let mut out = format!("{SCHEMA_LINE}\nstart,checkpoint,test_function,value\n");
    for (s, report) in reports.iter().enumerate() {
        for cp in &report.checkpoints {
            for (id, v) in &cp.values {
                out.push_str(&format!("{s},{},{},{}\n", cp.n, id, v));
            }
            out.push_str(&format!("{s},{},discrepancy,{}\n", cp.n, cp.discrepancy));
        }
    }
    if let Some(dump) = &args.dump {
        let mut orbit_csv = format!("{SCHEMA_LINE}\ni,x,y\n");
        let start = initial_point(&sys, rng.unit(0), rng.unit(1)).expect("valid start");
        let n_dump = checkpoints.first().copied().unwrap_or(1000);
        for i in 0..n_dump {
            let p = iterate(&sys, &start, &BigInt::from(i).pow(exponent))?;
            orbit_csv.push_str(&format!("{i},{},{}\n", p.x_f64(), p.y_f64().unwrap_or(0.0)));
        }
        std::fs::write(dump, orbit_csv)
            .map_err(|e| Error::Config(format!("cannot write {dump}: {e}")))?;
    }
    if let Some(json_path) = &args.json_out {
        let text = serde_json::to_string_pretty(&reports).expect("serializable");
        std::fs::write(json_path, text)
            .map_err(|e| Error::Config(format!("cannot write {json_path}: {e}")))?;
    }
    write_output(&args.common, &out)
}

fn run_vdc(mut args: VdcArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<VdcArgs>(&args.common.config)? {
        merge_opt!(args, file, kind, length, window, count);
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let kind = args.kind.clone().unwrap_or_else(|| "random".into());
    let n = args.length.unwrap_or(64);
    let window = args.window.unwrap_or(16).min(n);
    let count = args.count.unwrap_or(10);
    check_budget(
        args.common.budget,
        count as u128 * n as u128 * window as u128,
        "van der Corput batch",
    )?;
    let rng = CounterRng::new(args.common.seed.unwrap_or(0));
    let mut out = format!("{SCHEMA_LINE}\nindex,lhs,rhs,ok\n");
    for trial in 0..count {
        let seq: Vec<num_complex::Complex64> = (0..n)
            .map(|i| match kind.as_str() {
                "constant" => num_complex::Complex64::new(1.0, 0.0),
                "character" => {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    num_complex::Complex64::new(theta.cos(), theta.sin())
                }
                _ => {
                    if rng.u64(trial * n + i) >> 63 == 0 {
                        num_complex::Complex64::new(1.0, 0.0)
                    } else {
                        num_complex::Complex64::new(-1.0, 0.0)
                    }
                }
            })
            .collect();
        let (lhs, rhs) = vdc_check(&seq, window)?;
        out.push_str(&format!("{trial},{lhs},{rhs},{}\n", lhs <= rhs + 1e-12));
    }
    write_output(&args.common, &out)
}

fn run_weyl(mut args: WeylArgs) -> Result<(), Error> {
    if let Some(file) = load_config::<WeylArgs>(&args.common.config)? {
        merge_opt!(args, file, coeffs, q_max, difference);
        merge_opt!(args.common, file.common, out, seed, budget);
    }
    let poly = IntPolynomial::new(args.coeffs.clone().unwrap_or_else(|| vec![0, 0, 1]));
    let q_max = args.q_max.unwrap_or(50);
    let work = match args.difference {
        None => q_max as u128 * q_max as u128,
        Some(order) => (q_max as u128).pow(order + 2),
    };
    check_budget(args.common.budget, work, "Weyl sweep size")?;
    let mut out = format!("{SCHEMA_LINE}\n");
    match args.difference {
        None => {
            out.push_str("q,re,im,magnitude\n");
            for q in 1..=q_max {
                let s = weyl_sum(&poly, q)?;
                out.push_str(&format!("{q},{},{},{}\n", s.re, s.im, s.norm()));
            }
        }
        Some(order) => {
            out.push_str("q,magnitude_over_q,difference_avg,bound,ok\n");
            for q in 1..=q_max {
                let w = weyl_sum(&poly, q)?.norm() / q as f64;
                let a = weyl_difference_avg(&poly, q, order)?;
                let bound = 2.0 * a.powf(1.0 / 2f64.powi(order as i32));
                out.push_str(&format!("{q},{w},{a},{bound},{}\n", w <= bound + 1e-9));
            }
        }
    }
    write_output(&args.common, &out)
}

/// Entry point for the `sparse-orbits` binary; returns the process exit
/// code (0 ok, 2 configuration error, 3 budget exhaustion, 1 otherwise).
pub fn main() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(args) => run_decompose(args),
        Command::Residues(args) => run_residues(args),
        Command::LemmaCount(args) => run_lemma_count(args),
        Command::CharSums(args) => run_char_sums(args),
        Command::Cf(args) => run_cf(args),
        Command::Rigidity(args) => run_rigidity(args),
        Command::Orbit(args) => run_orbit(args),
        Command::Vdc(args) => run_vdc(args),
        Command::Weyl(args) => run_weyl(args),
    };
    match result {
        Ok(()) => 0,
        Err(e @ Error::Config(_)) | Err(e @ Error::InsufficientConvergents { .. }) => {
            eprintln!("configuration error: {e}");
            2
        }
        Err(e @ Error::BudgetExceeded { .. }) | Err(e @ Error::SearchExhausted { .. }) => {
            eprintln!("budget exhausted: {e}");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn counter_rng_is_pure() {
        let rng = CounterRng::new(42);
        let a: Vec<u64> = (0..10).map(|i| rng.u64(i)).collect();
        let b: Vec<u64> = (0..10).map(|i| rng.u64(i)).collect();
        assert_eq!(a, b);
        let other = CounterRng::new(43);
        assert_ne!(a[0], other.u64(0));
        for i in 0..100 {
            let u = rng.unit(i);
            assert!((0.0..1.0).contains(&u));
            assert!(rng.below(i, 7) < 7);
        }
    }

    #[test]
    fn pow_floor_matches_f64() {
        for (q, e) in [(730u64, 0.8), (5000, 0.9), (97, 0.5)] {
            let exact = pow_floor(&BigUint::from(q), e);
            let approx = (q as f64).powf(e).floor() as u64;
            let got = exact.to_u64().unwrap();
            assert!(got.abs_diff(approx) <= 1, "q={q} e={e}: {got} vs {approx}");
        }
    }
}
