//! Rigid dynamical systems over irrational rotations: the rotation itself,
//! skew products `(x, y) -> (x + a, y + g(x))`, and special flows under a
//! positive roof, all driven by lacunary Fourier cocycles
//! `g(x) = sum_k a_k cos(2 pi q_k x)` whose frequencies are convergent
//! denominators of the rotation number.
//!
//! Birkhoff sums `S_n(g)(x) = sum_{i<n} g(x + i a)` have a closed form per
//! frequency (the Dirichlet kernel), evaluated here from exact rational
//! reductions mod 1 of multiples of the convergent surrogate, so orbit
//! times up to `10^10` and quantities far outside `f64` range (amplitudes
//! like `1/(q_n q_{n+1}^{4/5})` for doubly-exponential `q_n`) stay accurate
//! through [`Scaled`] arithmetic.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::diophantine::{CfSpec, ContinuedFraction};
use crate::error::{Error, Result};
use crate::scaled::{frac, log2_biguint, unit_rational_to_f64, Scaled, UnitFrac};

/// Circle rotation by an irrational specified through its continued
/// fraction; all arithmetic uses the final convergent as an exact rational
/// surrogate.
#[derive(Debug, Clone)]
pub struct RotationSystem {
    pub cf: Arc<ContinuedFraction>,
    alpha: BigRational,
    alpha_unit: UnitFrac,
}

impl RotationSystem {
    pub fn new(cf: Arc<ContinuedFraction>) -> RotationSystem {
        let alpha = frac(&cf.surrogate());
        let (p, q) = cf.convergents.last().expect("nonempty");
        let alpha_unit = UnitFrac::from_biguint(p % q, q.clone());
        RotationSystem {
            cf,
            alpha,
            alpha_unit,
        }
    }

    /// The rotation step as an unreduced unit fraction.
    pub fn step_unit(&self) -> &UnitFrac {
        &self.alpha_unit
    }

    /// The rotation step as an exact rational in `[0, 1)`.
    pub fn step(&self) -> &BigRational {
        &self.alpha
    }

    /// `{x0 + n * alpha}` exactly.
    pub fn point(&self, x0: &BigRational, n: &BigInt) -> BigRational {
        frac(&(x0 + &self.alpha * BigRational::from_integer(n.clone())))
    }
}

/// One cocycle frequency: `a_k cos(2 pi q_k x)` with everything the closed
/// form needs precomputed against the rotation surrogate.
#[derive(Debug, Clone)]
pub struct CocycleTerm {
    /// Index of the frequency among the convergent denominators.
    pub index: usize,
    pub freq: BigUint,
    pub amplitude: Scaled,
    /// `{q_k * alpha}` in `[0, 1)`, unreduced over the surrogate denominator.
    beta: UnitFrac,
    sin_pi_beta: Scaled,
}

/// Which indices take the boundary amplitude `1/(q_n^{4/5} q_{n+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexSelection {
    Named(String),
    List(Vec<usize>),
}

impl IndexSelection {
    pub fn all() -> IndexSelection {
        IndexSelection::Named("all".into())
    }

    pub fn none() -> IndexSelection {
        IndexSelection::Named("none".into())
    }

    fn contains(&self, n: usize) -> Result<bool> {
        match self {
            IndexSelection::Named(s) if s == "all" => Ok(true),
            IndexSelection::Named(s) if s == "none" => Ok(false),
            IndexSelection::Named(s) => Err(Error::Config(format!("unknown index set '{s}'"))),
            IndexSelection::List(v) => Ok(v.contains(&n)),
        }
    }
}

/// Amplitude schedule for [`build_cocycle`]: indices in `lower_set` sit on
/// the boundary `1/(q_n^{4/5} q_{n+1})`, the rest decay as
/// `1/(n q_n q_{n+1}^{4/5})`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleSchedule {
    pub lower_set: IndexSelection,
}

/// A finite lacunary cosine cocycle.
#[derive(Debug, Clone)]
pub struct FourierCocycle {
    pub terms: Vec<CocycleTerm>,
    /// Declared boundary-amplitude index set of the schedule (empty for
    /// free-form cocycles).
    pub lower_set: Vec<usize>,
    /// Indices where the boundary inequality `|a_n| >= 1/(q_n^{4/5} q_{n+1})`
    /// was measured to hold (may exceed `lower_set`).
    pub boundary_indices: Vec<usize>,
}

impl FourierCocycle {
    /// `sum |a_k|` (saturating to f64).
    pub fn amplitude_sum(&self) -> f64 {
        let mut acc = Scaled::ZERO;
        for t in &self.terms {
            acc = acc.add(t.amplitude.abs());
        }
        acc.to_f64()
    }

    /// `g(x)` at an exact rational point.
    pub fn eval_rational(&self, x: &BigRational) -> f64 {
        let mut acc = 0.0f64;
        for t in &self.terms {
            let a = t.amplitude.to_f64();
            if a == 0.0 {
                continue;
            }
            let qx = UnitFrac::new(&(x.numer() * BigInt::from(t.freq.clone())), x.denom().magnitude());
            acc += a * (2.0 * std::f64::consts::PI * qx.to_f64()).cos();
        }
        acc
    }

    /// `g(x)` at an `f64` point: terms whose frequency exceeds `f64` phase
    /// resolution are dropped into the truncation bound, which must stay
    /// below `eps`.
    pub fn eval_f64(&self, x: f64, eps: f64) -> Result<(f64, f64)> {
        let mut acc = 0.0f64;
        let mut dropped = Scaled::ZERO;
        for t in &self.terms {
            if t.freq.bits() <= 40 {
                let q = t.freq.to_f64().expect("below 2^40");
                acc += t.amplitude.to_f64() * (2.0 * std::f64::consts::PI * (q * x).fract()).cos();
            } else {
                dropped = dropped.add(t.amplitude.abs());
            }
        }
        let truncation = dropped.to_f64();
        if truncation >= eps {
            return Err(Error::PrecisionLoss(format!(
                "cocycle truncation {truncation} exceeds eps {eps}"
            )));
        }
        Ok((acc, truncation))
    }

    /// Closed-form Birkhoff sum `S_n(g)(x)` as a [`Scaled`] value: per
    /// frequency the geometric sum collapses to
    /// `a sin(pi n b)/sin(pi b) cos(2 pi (q x) + pi (n-1) b)` with
    /// `b = {q alpha}`, all phases reduced mod 1 exactly.
    pub fn birkhoff_closed(&self, x: &BigRational, n: &BigInt) -> Scaled {
        debug_assert!(!n.is_negative());
        let mut acc = Scaled::ZERO;
        let n_mag = n.magnitude();
        for t in &self.terms {
            acc = acc.add(self.birkhoff_term(t, x, n_mag));
        }
        acc
    }

    fn birkhoff_term(&self, t: &CocycleTerm, x: &BigRational, n: &BigUint) -> Scaled {
        if n.is_zero() || t.amplitude.is_zero() {
            return Scaled::ZERO;
        }
        let kernel = term_kernel(t, n);
        if kernel.is_zero() {
            return Scaled::ZERO;
        }
        // cos(2 pi (q x + (n-1) beta / 2)); the phase only needs f64
        let q_x = UnitFrac::new(&(x.numer() * BigInt::from(t.freq.clone())), x.denom().magnitude());
        let phase = (q_x.to_f64() + term_half_shift(t, n)).fract();
        t.amplitude
            .mul(kernel)
            .mul_f64((2.0 * std::f64::consts::PI * phase).cos())
    }
}

/// Dirichlet-kernel factor `sin(pi n beta) / sin(pi beta)` (equal to `n`
/// when `beta` is integral).
fn term_kernel(t: &CocycleTerm, n: &BigUint) -> Scaled {
    if t.sin_pi_beta.is_zero() {
        return Scaled::from_log2(1.0, log2_biguint(n));
    }
    let (odd, n_beta) = t.beta.mul_uint_split(n);
    let s = n_beta.sin_pi();
    let s = if odd { s.neg() } else { s };
    s.div(t.sin_pi_beta)
}

/// `frac((n-1) beta / 2)` as f64.
fn term_half_shift(t: &CocycleTerm, n: &BigUint) -> f64 {
    let double_den = t.beta.den() * 2u32;
    let num = ((n - 1u32) * t.beta.num()) % &double_den;
    UnitFrac::from_biguint(num, double_den).to_f64()
}

/// Builds the scheduled cocycle over `cf`: frequencies `q_1 .. q_(L-2)`
/// (the last two convergents are reserved for the surrogate's accuracy),
/// amplitudes `1/(q_n^{4/5} q_{n+1})` on the declared lower set and
/// `1/(n q_n q_{n+1}^{4/5})` elsewhere. Indices in the lower set require
/// `(q_n/q_{n+1})^{1/5} <= 1/(n+1)`; too-slow denominator growth is
/// rejected.
pub fn build_cocycle(
    cf: &Arc<ContinuedFraction>,
    schedule: &CocycleSchedule,
) -> Result<FourierCocycle> {
    let n_max = cf.len().saturating_sub(3);
    if n_max < 1 {
        return Err(Error::InsufficientConvergents {
            required: 4,
            available: cf.len(),
        });
    }
    let rotation = RotationSystem::new(cf.clone());
    let mut terms = Vec::with_capacity(n_max);
    let mut lower_set = Vec::new();
    let mut boundary_indices = Vec::new();
    for n in 1..=n_max {
        let log2_qn = log2_biguint(cf.denominator(n));
        let log2_qn1 = log2_biguint(cf.denominator(n + 1));
        let in_lower = schedule.lower_set.contains(n)?;
        let log2_amp = if in_lower {
            let ratio = ((log2_qn - log2_qn1) / 5.0).exp2();
            let cap = 1.0 / (n as f64 + 1.0);
            if ratio > cap {
                return Err(Error::ScheduleIncompatible {
                    index: n,
                    ratio,
                    cap,
                });
            }
            lower_set.push(n);
            -0.8 * log2_qn - log2_qn1
        } else {
            -(n as f64).log2() - log2_qn - 0.8 * log2_qn1
        };
        // measured boundary inequality |a_n| >= 1/(q_n^{4/5} q_{n+1})
        if log2_amp >= -0.8 * log2_qn - log2_qn1 - 1e-9 {
            boundary_indices.push(n);
        }
        let freq = cf.denominator(n).clone();
        let beta = rotation.step_unit().mul_uint(&freq);
        terms.push(CocycleTerm {
            index: n,
            freq,
            amplitude: Scaled::from_log2(1.0, log2_amp),
            sin_pi_beta: beta.sin_pi(),
            beta,
        });
    }
    Ok(FourierCocycle {
        terms,
        lower_set,
        boundary_indices,
    })
}

/// Free-form cocycle from `(denominator index, amplitude)` pairs; the
/// continuity surrogate `sum q_k |a_k| <= budget` is enforced.
pub fn cocycle_from_terms(
    cf: &Arc<ContinuedFraction>,
    term_spec: &[(usize, f64)],
    continuity_budget: f64,
) -> Result<FourierCocycle> {
    let rotation = RotationSystem::new(cf.clone());
    let mut terms = Vec::with_capacity(term_spec.len());
    let mut weighted = 0.0f64;
    for &(index, amplitude) in term_spec {
        if index == 0 || index + 2 > cf.len() {
            return Err(Error::InsufficientConvergents {
                required: index + 2,
                available: cf.len(),
            });
        }
        let freq = cf.denominator(index).clone();
        weighted += freq.to_f64().unwrap_or(f64::INFINITY) * amplitude.abs();
        if weighted > continuity_budget {
            return Err(Error::BudgetExceeded {
                what: "cocycle continuity surrogate sum q_k |a_k|",
                needed: weighted as u128,
                cap: continuity_budget as u128,
            });
        }
        let beta = rotation.step_unit().mul_uint(&freq);
        terms.push(CocycleTerm {
            index,
            freq,
            amplitude: Scaled::new(amplitude),
            sin_pi_beta: beta.sin_pi(),
            beta,
        });
    }
    Ok(FourierCocycle {
        terms,
        lower_set: Vec::new(),
        boundary_indices: Vec::new(),
    })
}

/// Birkhoff sum evaluation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BirkhoffMode {
    Direct,
    ClosedForm,
}

const DIRECT_BIRKHOFF_BUDGET: u128 = 1_000_000_000;

/// `S_n(g)(x)` by direct orbit summation or by the closed form.
pub fn birkhoff_sum(
    rotation: &RotationSystem,
    g: &FourierCocycle,
    x: &BigRational,
    n: u64,
    mode: BirkhoffMode,
) -> Result<f64> {
    match mode {
        BirkhoffMode::ClosedForm => Ok(g.birkhoff_closed(x, &BigInt::from(n)).to_f64()),
        BirkhoffMode::Direct => {
            let needed = n as u128 * g.terms.len().max(1) as u128;
            if needed > DIRECT_BIRKHOFF_BUDGET {
                return Err(Error::BudgetExceeded {
                    what: "direct Birkhoff summation",
                    needed,
                    cap: DIRECT_BIRKHOFF_BUDGET,
                });
            }
            let mut acc = 0.0f64;
            let mut xi = x.clone();
            for _ in 0..n {
                acc += g.eval_rational(&xi);
                xi = frac(&(xi + rotation.step()));
            }
            Ok(acc)
        }
    }
}

/// A point of the two-torus; `x` is exact, `y` accumulates through closed
/// forms recomputed from the start (no drift).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    pub x: BigRational,
    pub y: f64,
}

impl TorusPoint {
    pub fn new(x: BigRational, y: f64) -> TorusPoint {
        TorusPoint {
            x: frac(&x),
            y: y.rem_euclid(1.0),
        }
    }

    pub fn x_f64(&self) -> f64 {
        unit_rational_to_f64(&self.x)
    }
}

/// The skew product `(x, y) -> (x + alpha, y + g(x))` on the two-torus.
#[derive(Debug, Clone)]
pub struct SkewProductSystem {
    pub rotation: RotationSystem,
    pub cocycle: FourierCocycle,
}

impl SkewProductSystem {
    pub fn new(rotation: RotationSystem, cocycle: FourierCocycle) -> SkewProductSystem {
        SkewProductSystem { rotation, cocycle }
    }

    /// `T^n(x, y) = (x + n alpha, y + S_n(g)(x))` through closed-form
    /// Birkhoff sums, `O(terms log n)`.
    pub fn iterate(&self, p: &TorusPoint, n: &BigInt) -> TorusPoint {
        let x = self.rotation.point(&p.x, n);
        let s = self.cocycle.birkhoff_closed(&p.x, n).to_f64();
        TorusPoint {
            x,
            y: (p.y + s).rem_euclid(1.0),
        }
    }

    pub fn dist(&self, p1: &TorusPoint, p2: &TorusPoint) -> f64 {
        let dx = circle_dist(p1.x_f64(), p2.x_f64());
        let dy = circle_dist(p1.y, p2.y);
        dx.max(dy)
    }
}

/// Distance on the circle `R/Z`.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Max-of-coordinates distance on the two-torus.
pub fn torus_dist(p1: (f64, f64), p2: (f64, f64)) -> f64 {
    circle_dist(p1.0, p2.0).max(circle_dist(p1.1, p2.1))
}

/// A point under the roof: `0 <= y < roof(x)`.
#[derive(Debug, Clone)]
pub struct FlowPoint {
    pub x: BigRational,
    pub y: f64,
}

/// The special flow under `roof(x) = offset + g(x)`, together with the
/// time-`time_step` map used for orbits.
#[derive(Debug, Clone)]
pub struct SpecialFlowSystem {
    pub rotation: RotationSystem,
    pub cocycle: FourierCocycle,
    pub roof_offset: f64,
    pub time_step: f64,
}

const FLOW_CROSSING_CAP: u64 = 100_000;

impl SpecialFlowSystem {
    /// Default offset `1 + sum |a_k|` keeps the roof at least 1.
    pub fn new(
        rotation: RotationSystem,
        cocycle: FourierCocycle,
        roof_offset: Option<f64>,
        time_step: Option<f64>,
    ) -> Result<SpecialFlowSystem> {
        let amp = cocycle.amplitude_sum();
        let offset = roof_offset.unwrap_or(1.0 + amp);
        if offset - amp <= 0.0 {
            return Err(Error::Config(format!(
                "roof offset {offset} does not dominate the cocycle amplitude sum {amp}"
            )));
        }
        let time_step = time_step.unwrap_or(offset);
        if time_step <= 0.0 {
            return Err(Error::NotPositive(0));
        }
        Ok(SpecialFlowSystem {
            rotation,
            cocycle,
            roof_offset: offset,
            time_step,
        })
    }

    pub fn roof(&self, x: &BigRational) -> f64 {
        self.roof_offset + self.cocycle.eval_rational(x)
    }

    pub fn min_roof(&self) -> f64 {
        self.roof_offset - self.cocycle.amplitude_sum()
    }

    pub fn max_roof(&self) -> f64 {
        self.roof_offset + self.cocycle.amplitude_sum()
    }

    pub fn point(&self, x: BigRational, y: f64) -> Result<FlowPoint> {
        let x = frac(&x);
        if y < 0.0 || y >= self.roof(&x) {
            return Err(Error::Config(format!(
                "flow point y = {y} outside [0, roof = {})",
                self.roof(&x)
            )));
        }
        Ok(FlowPoint { x, y })
    }

    /// Flow forward by `t >= 0`: returns the canonical representative with
    /// `0 <= y < roof(x)`, or reports when precision cannot separate `y`
    /// from the roof boundary.
    pub fn flow_map(&self, p: &FlowPoint, t: f64) -> Result<FlowPoint> {
        if t < 0.0 {
            return Err(Error::Config("flow time must be nonnegative".into()));
        }
        let mut x = p.x.clone();
        let mut y = p.y + t;
        let mut crossings = 0u64;
        loop {
            let roof = self.roof(&x);
            if y < roof - BOUNDARY_TOL {
                break;
            }
            if y < roof + BOUNDARY_TOL && crossings == 0 && (y - roof).abs() <= BOUNDARY_TOL {
                // exact crossing: land on the base of the next fiber
                y = 0.0;
                x = frac(&(x + self.rotation.step()));
                return Ok(FlowPoint { x, y });
            }
            y -= roof;
            x = frac(&(x + self.rotation.step()));
            crossings += 1;
            if crossings > FLOW_CROSSING_CAP {
                return Err(Error::BudgetExceeded {
                    what: "flow crossings",
                    needed: crossings as u128,
                    cap: FLOW_CROSSING_CAP as u128,
                });
            }
        }
        if y < 0.0 {
            if y > -BOUNDARY_TOL {
                y = 0.0;
            } else {
                return Err(Error::PrecisionLoss(format!("flow landed at y = {y} < 0")));
            }
        }
        let roof = self.roof(&x);
        if roof - y < BOUNDARY_TOL {
            return Err(Error::PrecisionLoss(format!(
                "flow point y = {y} within tolerance of the roof {roof}"
            )));
        }
        Ok(FlowPoint { x, y })
    }

    /// `n` applications of the time-`time_step` map via closed-form sums;
    /// requires `time_step == roof_offset` so the vertical progress
    /// `n * time_step` cancels exactly against the roof constants (the
    /// crossing count stays within `O(sup |S(g)|)` of `n`).
    pub fn iterate_steps(&self, p: &FlowPoint, n: &BigInt) -> Result<FlowPoint> {
        if (self.time_step - self.roof_offset).abs() > 1e-12 {
            return Err(Error::Config(
                "sparse-time iteration needs time_step equal to the roof offset".into(),
            ));
        }
        // after a = n + delta crossings: y' = y - delta*offset - S_{n+delta}(g)(x)
        let mut delta: i64 = 0;
        let mut guard = 0u64;
        loop {
            let a = n + BigInt::from(delta);
            if a.is_negative() {
                return Err(Error::PrecisionLoss("negative crossing count".into()));
            }
            let s = self.cocycle.birkhoff_closed(&p.x, &a).to_f64();
            let y = p.y - delta as f64 * self.roof_offset - s;
            let x = self.rotation.point(&p.x, &a);
            let roof = self.roof(&x);
            if y >= -BOUNDARY_TOL && y < roof - BOUNDARY_TOL {
                return Ok(FlowPoint { x, y: y.max(0.0) });
            }
            if y >= roof - BOUNDARY_TOL && y < roof + BOUNDARY_TOL {
                return Err(Error::PrecisionLoss(format!(
                    "flow point y = {y} within tolerance of the roof {roof}"
                )));
            }
            delta += if y >= roof { 1 } else { -1 };
            guard += 1;
            if guard > FLOW_CROSSING_CAP {
                return Err(Error::BudgetExceeded {
                    what: "flow crossing search",
                    needed: guard as u128,
                    cap: FLOW_CROSSING_CAP as u128,
                });
            }
        }
    }

    /// Distance after testing the three nearest relation shifts of the
    /// second point.
    pub fn dist(&self, p1: &FlowPoint, p2: &FlowPoint) -> f64 {
        let x1 = unit_rational_to_f64(&p1.x);
        let mut best = f64::INFINITY;
        // shift 0
        best = best.min(circle_dist(x1, unit_rational_to_f64(&p2.x)).max((p1.y - p2.y).abs()));
        // shift +1: (x, y) ~ (x + alpha, y - roof(x))
        let xp = frac(&(&p2.x + self.rotation.step()));
        let yp = p2.y - self.roof(&p2.x);
        best = best.min(circle_dist(x1, unit_rational_to_f64(&xp)).max((p1.y - yp).abs()));
        // shift -1
        let xm = frac(&(&p2.x - self.rotation.step()));
        let ym = p2.y + self.roof(&xm);
        best = best.min(circle_dist(x1, unit_rational_to_f64(&xm)).max((p1.y - ym).abs()));
        best
    }
}

const BOUNDARY_TOL: f64 = 1e-9;

/// One of the three system kinds, as read from a JSON spec.
#[derive(Debug, Clone)]
pub enum System {
    Rotation(RotationSystem),
    Skew(SkewProductSystem),
    Flow(SpecialFlowSystem),
}

/// JSON system description: continued fraction, schedule, and (for flows)
/// roof offset and time step.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemSpec {
    pub kind: String,
    pub cf: CfSpec,
    #[serde(default)]
    pub schedule: Option<CocycleSchedule>,
    #[serde(default)]
    pub roof_offset: Option<f64>,
    #[serde(default)]
    pub time_step: Option<f64>,
}

impl SystemSpec {
    pub fn build(&self) -> Result<System> {
        let cf = Arc::new(self.cf.build()?);
        let rotation = RotationSystem::new(cf.clone());
        match self.kind.as_str() {
            "rotation" => Ok(System::Rotation(rotation)),
            "skew" => {
                let schedule = self.schedule.clone().unwrap_or(CocycleSchedule {
                    lower_set: IndexSelection::none(),
                });
                let cocycle = build_cocycle(&cf, &schedule)?;
                Ok(System::Skew(SkewProductSystem::new(rotation, cocycle)))
            }
            "flow" => {
                let schedule = self.schedule.clone().unwrap_or(CocycleSchedule {
                    lower_set: IndexSelection::none(),
                });
                let cocycle = build_cocycle(&cf, &schedule)?;
                Ok(System::Flow(SpecialFlowSystem::new(
                    rotation,
                    cocycle,
                    self.roof_offset,
                    self.time_step,
                )?))
            }
            other => Err(Error::Config(format!("unknown system kind '{other}'"))),
        }
    }
}

/// How a rigidity figure was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RigidityMode {
    /// Every `t` in `[1, t_max]` was evaluated on the grid.
    Exhaustive,
    /// Certified upper bound via per-term maximization over `t`.
    UpperBound,
}

/// A rigidity figure with its scale kept in log2 (values can undershoot
/// `f64` range long before the trend is over).
#[derive(Debug, Clone, Copy)]
pub struct RigidityValue {
    pub value: f64,
    pub log2: f64,
    pub mode: RigidityMode,
}

fn scaled_to_rigidity(v: Scaled, mode: RigidityMode) -> RigidityValue {
    RigidityValue {
        value: v.to_f64(),
        log2: if v.is_zero() {
            f64::NEG_INFINITY
        } else {
            v.log2_abs()
        },
        mode,
    }
}

const RIGIDITY_T_BUDGET: u64 = 4096;

/// `max over t in [1, t_max]` of the grid sup of `d(p, T^(t q) p)`.
///
/// When `t_max` fits the budget every `t` is evaluated (grid-exact); for
/// the astronomically large `t_max` of the rigidity hypotheses the value is
/// a certified upper bound from per-term maximization: the rotation part is
/// `min(1/2, t_max ||q alpha||)` and each cocycle frequency contributes at
/// most `|a_k| min(1, pi t_max ||q q_k alpha||) / sin(pi ||q_k alpha||)`.
pub fn rigidity_profile(
    sys: &System,
    q: &BigUint,
    t_max: &BigUint,
    grid: usize,
) -> Result<RigidityValue> {
    if grid == 0 || t_max.is_zero() {
        return Err(Error::NotPositive(0));
    }
    match sys {
        System::Rotation(rot) => rigidity_rotation(rot, q, t_max),
        System::Skew(skew) => rigidity_skew(skew, q, t_max, grid),
        System::Flow(flow) => {
            if (flow.time_step - flow.roof_offset).abs() > 1e-12 {
                return Err(Error::Config(
                    "rigidity profiling of a flow needs time_step equal to the roof offset".into(),
                ));
            }
            // the time-(t q C) map sits within max(||t q alpha||, |S_{tq}(g)|)
            // of the identity after one relation shift, so the skew bound
            // applies verbatim
            let skew = SkewProductSystem::new(flow.rotation.clone(), flow.cocycle.clone());
            rigidity_skew(&skew, q, t_max, grid)
        }
    }
}

fn rigidity_rotation(rot: &RotationSystem, q: &BigUint, t_max: &BigUint) -> Result<RigidityValue> {
    let beta = rot.step_unit().mul_uint(q);
    if let Some(t_cap) = t_max.to_u64().filter(|&t| t <= RIGIDITY_T_BUDGET) {
        let mut best = Scaled::ZERO;
        for t in 1..=t_cap {
            let shift = beta.mul_uint(&BigUint::from(t)).fold_half();
            let ds = shift.to_scaled();
            if ds.cmp_abs(best) == std::cmp::Ordering::Greater {
                best = ds;
            }
        }
        return Ok(scaled_to_rigidity(best, RigidityMode::Exhaustive));
    }
    let delta = beta.fold_half().to_scaled();
    let bound = Scaled::from_log2(1.0, log2_biguint(t_max)).mul(delta);
    let half = Scaled::new(0.5);
    let capped = if bound.cmp_abs(half) == std::cmp::Ordering::Greater {
        half
    } else {
        bound
    };
    Ok(scaled_to_rigidity(capped, RigidityMode::UpperBound))
}

fn rigidity_skew(
    skew: &SkewProductSystem,
    q: &BigUint,
    t_max: &BigUint,
    grid: usize,
) -> Result<RigidityValue> {
    let rot = &skew.rotation;
    let beta_q = rot.step_unit().mul_uint(q);
    if let Some(t_cap) = t_max.to_u64().filter(|&t| t <= RIGIDITY_T_BUDGET) {
        let mut best = Scaled::ZERO;
        for t in 1..=t_cap {
            let steps = q * BigUint::from(t);
            let dx = beta_q.mul_uint(&BigUint::from(t)).fold_half().to_scaled();
            if dx.cmp_abs(best) == std::cmp::Ordering::Greater {
                best = dx;
            }
            let dy = grid_sup_birkhoff(&skew.cocycle, &steps, grid);
            if dy.cmp_abs(best) == std::cmp::Ordering::Greater {
                best = dy;
            }
        }
        return Ok(scaled_to_rigidity(best, RigidityMode::Exhaustive));
    }
    // certified upper bound
    let t_scaled = Scaled::from_log2(1.0, log2_biguint(t_max));
    let dx = {
        let raw = t_scaled.mul(beta_q.fold_half().to_scaled());
        let half = Scaled::new(0.5);
        if raw.cmp_abs(half) == std::cmp::Ordering::Greater {
            half
        } else {
            raw
        }
    };
    let mut dy = Scaled::ZERO;
    let one = Scaled::new(1.0);
    for term in &skew.cocycle.terms {
        if term.sin_pi_beta.is_zero() {
            // degenerate frequency: |S| <= |a| t q
            let cap = term
                .amplitude
                .abs()
                .mul(t_scaled)
                .mul(Scaled::from_log2(1.0, log2_biguint(q)));
            dy = dy.add(cap);
            continue;
        }
        let gamma_dist = term.beta.mul_uint(q).fold_half().to_scaled();
        let sin_cap = t_scaled.mul(gamma_dist).mul_f64(std::f64::consts::PI);
        let num = if sin_cap.cmp_abs(one) == std::cmp::Ordering::Greater {
            one
        } else {
            sin_cap
        };
        dy = dy.add(term.amplitude.abs().mul(num).div(term.sin_pi_beta));
    }
    let best = if dx.cmp_abs(dy) == std::cmp::Ordering::Greater {
        dx
    } else {
        dy
    };
    Ok(scaled_to_rigidity(best, RigidityMode::UpperBound))
}

/// Grid sup of `|S_n(g)(x)|` (or of the circle distance of the sum when
/// `as_circle` is false the raw magnitude is returned) over `x = j/G`.
/// Phases use `(q_k j mod G)/G` exactly; term scales combine through a
/// common max exponent so nothing underflows.
fn grid_sup_birkhoff(g: &FourierCocycle, n: &BigUint, grid: usize) -> Scaled {
    if n.is_zero() || g.terms.is_empty() {
        return Scaled::ZERO;
    }
    // per-term kernel and phase offset
    struct TermGeom {
        coeff: Scaled,
        freq_mod_grid: u64,
        phase_offset: f64,
    }
    let mut geoms = Vec::with_capacity(g.terms.len());
    let mut max_log2 = f64::NEG_INFINITY;
    for t in &g.terms {
        let kernel = term_kernel(t, n);
        let coeff = t.amplitude.mul(kernel);
        if !coeff.is_zero() {
            max_log2 = max_log2.max(coeff.log2_abs());
        }
        geoms.push(TermGeom {
            coeff,
            freq_mod_grid: (&t.freq % BigUint::from(grid as u64))
                .to_u64()
                .expect("mod grid fits"),
            phase_offset: term_half_shift(t, n),
        });
    }
    if max_log2 == f64::NEG_INFINITY {
        return Scaled::ZERO;
    }
    // common-scale mantissas
    let mantissas: Vec<f64> = geoms
        .iter()
        .map(|g| {
            if g.coeff.is_zero() {
                0.0
            } else {
                let rel = g.coeff.log2_abs() - max_log2;
                if rel < -100.0 {
                    0.0
                } else {
                    g.coeff.to_f64().signum() * rel.exp2()
                }
            }
        })
        .collect();
    let mut sup = 0.0f64;
    for j in 0..grid {
        let mut acc = 0.0f64;
        for (geom, &m) in geoms.iter().zip(&mantissas) {
            if m == 0.0 {
                continue;
            }
            let u = (geom.freq_mod_grid as f64 * j as f64 / grid as f64 + geom.phase_offset)
                .fract();
            acc += m * (2.0 * std::f64::consts::PI * u).cos();
        }
        sup = sup.max(acc.abs());
    }
    Scaled::from_log2(1.0, max_log2).mul_f64(sup)
}

/// One row of the cocycle rigidity series: the grid sup of `|S_{q_n}(g)|`
/// and its product with `q_{n+1}^{4/5}`, kept in log2.
#[derive(Debug, Clone, Copy)]
pub struct CocycleRigidityEntry {
    pub index: usize,
    pub log2_sup: f64,
    pub log2_product: f64,
    pub product: f64,
}

/// For each built frequency `q_n`: grid sup of `|S_{q_n}(g)|` times
/// `q_{n+1}^{4/5}`; the construction keeps every product below 1 and
/// decreasing.
pub fn cocycle_rigidity_series(
    cf: &ContinuedFraction,
    g: &FourierCocycle,
    grid: usize,
) -> Result<Vec<CocycleRigidityEntry>> {
    if grid == 0 {
        return Err(Error::NotPositive(0));
    }
    let mut out = Vec::new();
    for term in &g.terms {
        let n = term.index;
        let q_n = cf.denominator(n);
        let sup = grid_sup_birkhoff(g, q_n, grid);
        let log2_qnext = log2_biguint(cf.denominator(n + 1));
        let product = sup.mul(Scaled::from_log2(1.0, 0.8 * log2_qnext));
        out.push(CocycleRigidityEntry {
            index: n,
            log2_sup: if sup.is_zero() {
                f64::NEG_INFINITY
            } else {
                sup.log2_abs()
            },
            log2_product: if product.is_zero() {
                f64::NEG_INFINITY
            } else {
                product.log2_abs()
            },
            product: product.to_f64(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::diophantine::{convergents_from_quotients, power_rule_cf};

    fn golden(len: usize) -> Arc<ContinuedFraction> {
        Arc::new(convergents_from_quotients(vec![1u64; len]).unwrap())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn schedule_validation() {
        let power = Arc::new(power_rule_cf(6, 8, 3).unwrap());
        let all = CocycleSchedule {
            lower_set: IndexSelection::all(),
        };
        let built = build_cocycle(&power, &all).unwrap();
        assert_eq!(built.terms.len(), 5);
        assert_eq!(built.lower_set, vec![1, 2, 3, 4, 5]);

        // badly approximable rotation numbers cannot host the boundary set
        let fib = golden(10);
        assert!(matches!(
            build_cocycle(&fib, &all),
            Err(Error::ScheduleIncompatible { .. })
        ));
        let none = CocycleSchedule {
            lower_set: IndexSelection::none(),
        };
        let free = build_cocycle(&fib, &none).unwrap();
        assert_eq!(free.lower_set, Vec::<usize>::new());
        // 1/n amplitudes exceed the boundary level once growth is fast
        let power_none = build_cocycle(&power, &none).unwrap();
        assert_eq!(power_none.boundary_indices, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn eval_cocycle_examples() {
        let cf = golden(12);
        // single term a_1 = 1 at q_1 = 1
        let g = cocycle_from_terms(&cf, &[(1, 1.0)], 10.0).unwrap();
        assert!((g.eval_rational(&rat(1, 2)) + 1.0).abs() < 1e-12);
        // x = 0 gives the amplitude sum
        let g2 = cocycle_from_terms(&cf, &[(1, 0.25), (3, 0.5)], 10.0).unwrap();
        assert!((g2.eval_rational(&rat(0, 1)) - 0.75).abs() < 1e-12);
        // multi-term at x = 1/3 against the direct cosine evaluation
        let expected: f64 = [(1usize, 0.25f64), (3, 0.5)]
            .iter()
            .map(|&(k, a)| {
                let q = cf.denominator(k).to_u64().unwrap() as f64;
                a * (2.0 * std::f64::consts::PI * (q / 3.0).fract()).cos()
            })
            .sum();
        assert!((g2.eval_rational(&rat(1, 3)) - expected).abs() < 1e-12);
        // f64 evaluation agrees at moderate frequencies
        let (v, tr) = g2.eval_f64(1.0 / 3.0, 1e-6).unwrap();
        assert!(tr < 1e-12);
        assert!((v - expected).abs() < 1e-9);
    }

    #[test]
    fn birkhoff_modes_agree() {
        let cf = golden(25);
        let rot = RotationSystem::new(cf.clone());
        let g = cocycle_from_terms(&cf, &[(1, 0.8), (4, 0.3)], 50.0).unwrap();
        for &(num, den, n) in &[(1i64, 7i64, 10u64), (2, 5, 137), (0, 1, 1), (3, 11, 0)] {
            let x = rat(num, den);
            let direct = birkhoff_sum(&rot, &g, &x, n, BirkhoffMode::Direct).unwrap();
            let closed = birkhoff_sum(&rot, &g, &x, n, BirkhoffMode::ClosedForm).unwrap();
            assert!(
                (direct - closed).abs() < 1e-9 * (1.0 + n as f64),
                "x={num}/{den} n={n}: {direct} vs {closed}"
            );
        }
        // S_0 = 0 and S_1 = g(x)
        let x = rat(2, 9);
        assert_eq!(birkhoff_sum(&rot, &g, &x, 0, BirkhoffMode::ClosedForm).unwrap(), 0.0);
        let s1 = birkhoff_sum(&rot, &g, &x, 1, BirkhoffMode::ClosedForm).unwrap();
        assert!((s1 - g.eval_rational(&x)).abs() < 1e-12);
    }

    #[test]
    fn birkhoff_cocycle_equation() {
        let cf = golden(30);
        let rot = RotationSystem::new(cf.clone());
        let g = cocycle_from_terms(&cf, &[(2, 0.5), (5, 0.2)], 50.0).unwrap();
        let mut state = 7u64;
        for _ in 0..20 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(11);
            let m = state % 1000;
            let n = (state >> 17) % 1000;
            let x = rat((state % 97) as i64, 97);
            let lhs = g.birkhoff_closed(&x, &BigInt::from(m + n)).to_f64();
            let shifted = rot.point(&x, &BigInt::from(m));
            let rhs = g.birkhoff_closed(&x, &BigInt::from(m)).to_f64()
                + g.birkhoff_closed(&shifted, &BigInt::from(n)).to_f64();
            assert!((lhs - rhs).abs() < 1e-8, "m={m} n={n}");
        }
    }

    #[test]
    fn skew_iterate_examples() {
        let cf = golden(25);
        let rot = RotationSystem::new(cf.clone());
        let g = cocycle_from_terms(&cf, &[(1, 0.4)], 10.0).unwrap();
        let sys = SkewProductSystem::new(rot, g);
        let p = TorusPoint::new(rat(1, 3), 0.25);
        // n = 0 is the identity
        let p0 = sys.iterate(&p, &BigInt::zero());
        assert_eq!(p0.x, p.x);
        assert!((p0.y - p.y).abs() < 1e-15);
        // n = 1 is the definition
        let p1 = sys.iterate(&p, &BigInt::one());
        assert_eq!(p1.x, frac(&(&p.x + sys.rotation.step())));
        let expected_y = (p.y + sys.cocycle.eval_rational(&p.x)).rem_euclid(1.0);
        assert!((p1.y - expected_y).abs() < 1e-12);
        // composition: iterate(m + n) = iterate(n) after iterate(m)
        let a = sys.iterate(&p, &BigInt::from(74));
        let b = sys.iterate(&sys.iterate(&p, &BigInt::from(37)), &BigInt::from(37));
        assert!(sys.dist(&a, &b) < 1e-10);
    }

    #[test]
    fn metric_examples() {
        assert!((circle_dist(0.1, 0.9) - 0.2).abs() < 1e-12);
        assert!((torus_dist((0.0, 0.0), (0.5, 0.0)) - 0.5).abs() < 1e-12);
        let cf = golden(20);
        let rot = RotationSystem::new(cf.clone());
        let g = cocycle_from_terms(&cf, &[(1, 0.1)], 10.0).unwrap();
        let sys = SpecialFlowSystem::new(rot, g, None, None).unwrap();
        // a point near the roof is close to its successor at the base
        let x = rat(1, 7);
        let roof = sys.roof(&x);
        let p1 = sys.point(x.clone(), roof - 1e-6).unwrap();
        let p2 = sys
            .point(frac(&(&x + sys.rotation.step())), 0.0)
            .unwrap();
        assert!(sys.dist(&p1, &p2) < 1e-5);
    }

    #[test]
    fn flow_map_examples() {
        let cf = golden(20);
        let rot = RotationSystem::new(cf.clone());
        let g = cocycle_from_terms(&cf, &[(1, 0.2), (3, 0.1)], 10.0).unwrap();
        let sys = SpecialFlowSystem::new(rot, g, None, None).unwrap();
        let x = rat(2, 11);
        let p = sys.point(x.clone(), 0.3).unwrap();
        // t = 0 identity
        let p0 = sys.flow_map(&p, 0.0).unwrap();
        assert_eq!(p0.x, p.x);
        assert_eq!(p0.y, p.y);
        // one full crossing lands on the base of the next fiber
        let t = sys.roof(&x) - p.y;
        let p1 = sys.flow_map(&p, t).unwrap();
        assert_eq!(p1.x, frac(&(&x + sys.rotation.step())));
        assert!(p1.y.abs() < 1e-9);
        // semigroup within tolerance
        let mut state = 5u64;
        for _ in 0..10 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(3);
            let t1 = (state % 1000) as f64 / 300.0;
            let t2 = ((state >> 13) % 1000) as f64 / 300.0;
            let a = sys.flow_map(&sys.flow_map(&p, t1).unwrap(), t2).unwrap();
            let b = sys.flow_map(&p, t1 + t2).unwrap();
            assert!(sys.dist(&a, &b) < 1e-7, "t1={t1} t2={t2}");
            // roof bound holds exactly as stated
            assert!(a.y >= 0.0 && a.y < sys.roof(&a.x));
        }
    }

    #[test]
    fn flow_steps_match_flow_map() {
        let cf = golden(22);
        let rot = RotationSystem::new(cf.clone());
        let g = cocycle_from_terms(&cf, &[(2, 0.15)], 10.0).unwrap();
        let sys = SpecialFlowSystem::new(rot, g, None, None).unwrap();
        let p = sys.point(rat(3, 13), 0.4).unwrap();
        for n in [1u64, 2, 7, 23] {
            let by_steps = sys.iterate_steps(&p, &BigInt::from(n)).unwrap();
            let by_time = sys.flow_map(&p, n as f64 * sys.time_step).unwrap();
            assert!(sys.dist(&by_steps, &by_time) < 1e-8, "n={n}");
        }
    }

    #[test]
    fn rigidity_examples() {
        // identity map: rotation with integral surrogate
        let identity = RotationSystem::new(Arc::new(
            convergents_from_quotients(vec![1u64]).unwrap(),
        ));
        let sys = System::Rotation(identity);
        let v = rigidity_profile(&sys, &BigUint::from(5u32), &BigUint::from(10u32), 4).unwrap();
        assert_eq!(v.value, 0.0);

        // rotation at q = q_n, t_max = 1: exactly ||q_n alpha||
        let cf = golden(30);
        let rot = RotationSystem::new(cf.clone());
        let q3 = cf.denominator(3).clone(); // q_3 = 3
        let v = rigidity_profile(&System::Rotation(rot.clone()), &q3, &BigUint::one(), 1).unwrap();
        let expected = crate::diophantine::nearest_int_dist_rational(&frac(
            &(BigRational::from_integer(BigInt::from(q3.clone())) * rot.step()),
        ));
        assert!((v.value - unit_rational_to_f64(&expected)).abs() < 1e-12);
        let q4 = cf.denominator(4).to_f64().unwrap();
        assert!(v.value <= 1.0 / q4 + 1e-12);

        // upper-bound mode dominates the exhaustive value
        let g = cocycle_from_terms(&cf, &[(2, 1e-3)], 10.0).unwrap();
        let skew = System::Skew(SkewProductSystem::new(rot, g));
        let q = cf.denominator(4).clone();
        let exhaustive =
            rigidity_profile(&skew, &q, &BigUint::from(50u32), 64).unwrap();
        assert_eq!(exhaustive.mode, RigidityMode::Exhaustive);
        let ub = rigidity_profile(&skew, &q, &BigUint::from(10u32).pow(9), 64).unwrap();
        assert_eq!(ub.mode, RigidityMode::UpperBound);
        assert!(ub.value + 1e-15 >= exhaustive.value);
    }

    #[test]
    fn rigidity_series_power_rule() {
        let cf = Arc::new(power_rule_cf(6, 8, 3).unwrap());
        let g = build_cocycle(
            &cf,
            &CocycleSchedule {
                lower_set: IndexSelection::none(),
            },
        )
        .unwrap();
        let series = cocycle_rigidity_series(&cf, &g, 512).unwrap();
        assert_eq!(series.len(), 5);
        for w in series.windows(2) {
            assert!(
                w[1].log2_product < w[0].log2_product,
                "products must decrease: {:?}",
                series.iter().map(|e| e.log2_product).collect::<Vec<_>>()
            );
        }
        for e in &series {
            assert!(e.log2_product < 0.0, "sup * q_(n+1)^(4/5) below 1 at n={}", e.index);
        }
    }

    #[test]
    fn system_spec_json() {
        let spec: SystemSpec = serde_json::from_str(
            r#"{"kind": "skew",
                "cf": {"rule": "power", "exponent": 6, "terms": 8, "first": 3},
                "schedule": {"lower_set": "none"}}"#,
        )
        .unwrap();
        match spec.build().unwrap() {
            System::Skew(s) => assert_eq!(s.cocycle.terms.len(), 5),
            _ => panic!("expected a skew product"),
        }
        let spec: SystemSpec = serde_json::from_str(
            r#"{"kind": "flow",
                "cf": {"quotients": [1,1,1,1,1,1,1,1,1,1]},
                "schedule": {"lower_set": []},
                "roof_offset": 2.5}"#,
        )
        .unwrap();
        match spec.build().unwrap() {
            System::Flow(f) => {
                assert_eq!(f.roof_offset, 2.5);
                assert_eq!(f.time_step, 2.5);
            }
            _ => panic!("expected a flow"),
        }
        let bad: SystemSpec = serde_json::from_str(
            r#"{"kind": "orbitron", "cf": {"quotients": [1,1]}}"#,
        )
        .unwrap();
        assert!(bad.build().is_err());
    }
}
