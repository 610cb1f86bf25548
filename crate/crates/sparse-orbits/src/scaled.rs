//! Wide-exponent scalars and exact-rational trigonometry.
//!
//! Convergent denominators in this crate grow doubly exponentially (a few
//! steps of `q_{n+1} ~ q_n^6` leaves `f64` range), but rigidity figures are
//! built from products like `|a_n| * q_n * q_{n+1}^{4/5}` whose *ratios* are
//! perfectly ordinary. [`Scaled`] keeps an `f64` mantissa with an `i64`
//! binary exponent so those products stay exact-enough at any magnitude,
//! and the helpers here evaluate `sin(pi x)` / `cos(2 pi x)` from exact
//! rational reductions mod 1, so huge arguments lose no phase precision.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A scalar `mantissa * 2^exp2` with the mantissa normalized into
/// `[1, 2)` (sign carried by the mantissa); zero is `(0.0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mantissa: f64,
    exp2: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        exp2: 0,
    };

    pub fn new(value: f64) -> Scaled {
        Scaled::normalize(value, 0)
    }

    fn normalize(m: f64, e: i64) -> Scaled {
        if m == 0.0 {
            return Scaled::ZERO;
        }
        debug_assert!(m.is_finite());
        let (frac, exp) = frexp(m);
        // frexp gives |frac| in [0.5, 1); shift to [1, 2)
        Scaled {
            mantissa: frac * 2.0,
            exp2: e + exp as i64 - 1,
        }
    }

    /// `sign * 2^log2` for a finite `log2`.
    pub fn from_log2(sign: f64, log2: f64) -> Scaled {
        if sign == 0.0 {
            return Scaled::ZERO;
        }
        let e = log2.floor();
        Scaled::normalize(sign.signum() * (log2 - e).exp2(), e as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn abs(self) -> Scaled {
        Scaled {
            mantissa: self.mantissa.abs(),
            exp2: self.exp2,
        }
    }

    pub fn neg(self) -> Scaled {
        Scaled {
            mantissa: -self.mantissa,
            exp2: self.exp2,
        }
    }

    pub fn mul(self, other: Scaled) -> Scaled {
        Scaled::normalize(self.mantissa * other.mantissa, self.exp2 + other.exp2)
    }

    pub fn mul_f64(self, other: f64) -> Scaled {
        Scaled::normalize(self.mantissa * other, self.exp2)
    }

    pub fn div(self, other: Scaled) -> Scaled {
        debug_assert!(!other.is_zero());
        Scaled::normalize(self.mantissa / other.mantissa, self.exp2 - other.exp2)
    }

    pub fn add(self, other: Scaled) -> Scaled {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp2 >= other.exp2 {
            (self, other)
        } else {
            (other, self)
        };
        let shift = hi.exp2 - lo.exp2;
        if shift > 120 {
            return hi;
        }
        Scaled::normalize(
            hi.mantissa + lo.mantissa * (-(shift as f64)).exp2(),
            hi.exp2,
        )
    }

    /// `|self|^p` for positive values.
    pub fn powf(self, p: f64) -> Scaled {
        debug_assert!(self.mantissa > 0.0);
        Scaled::from_log2(1.0, self.log2_abs() * p)
    }

    pub fn log2_abs(self) -> f64 {
        debug_assert!(!self.is_zero());
        self.exp2 as f64 + self.mantissa.abs().log2()
    }

    /// Conversion with saturation: magnitudes outside `f64` range become
    /// `0` or `+/-inf`.
    pub fn to_f64(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.exp2 > 1030 {
            return f64::INFINITY * self.mantissa.signum();
        }
        if self.exp2 < -1070 {
            return 0.0;
        }
        self.mantissa * (self.exp2 as f64).exp2()
    }

    pub fn cmp_abs(self, other: Scaled) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => match self.exp2.cmp(&other.exp2) {
                Ordering::Equal => self
                    .mantissa
                    .abs()
                    .partial_cmp(&other.mantissa.abs())
                    .unwrap(),
                ord => ord,
            },
        }
    }
}

fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i32;
    if exp_field == 0 {
        // subnormal: rescale first
        let scaled = x * 2f64.powi(64);
        let (f, e) = frexp(scaled);
        return (f, e - 64);
    }
    let e = exp_field - 1022;
    let mantissa = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (mantissa, e)
}

/// `log2` of a positive big integer, accurate to ~1e-15 relative.
pub fn log2_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 53 {
        let v: u64 = x.try_into().expect("fits by bit count");
        return (v as f64).log2();
    }
    let shift = bits - 53;
    let top: BigUint = x >> shift;
    let v: u64 = (&top).try_into().expect("53 bits");
    shift as f64 + (v as f64).log2()
}

/// `log2` of a positive rational.
pub fn log2_rational(x: &BigRational) -> f64 {
    debug_assert!(x.is_positive());
    log2_biguint(x.numer().magnitude()) - log2_biguint(x.denom().magnitude())
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// `(parity of floor(x), frac(x))`, used for the sign of `sin(pi x)`.
pub fn split_parity_frac(x: &BigRational) -> (bool, BigRational) {
    let fl = x.floor();
    let odd = fl.numer().magnitude().bit(0);
    (odd, x - fl)
}

/// A rational in `[0, 1)` as `f64`, accurate to one part in `2^60`.
pub fn unit_rational_to_f64(x: &BigRational) -> f64 {
    debug_assert!(!x.is_negative() && x < &BigRational::from_integer(1.into()));
    if x.is_zero() {
        return 0.0;
    }
    let scaled: BigInt = (x.numer() << 62u32) / x.denom();
    let v: u64 = scaled.magnitude().try_into().expect("below 2^62");
    v as f64 / (1u64 << 62) as f64
}

/// `sin(pi x)` for rational `x` in `[0, 1)`, exact in scale: tiny values
/// come out as `pi x` with a wide exponent instead of underflowing.
pub fn sin_pi_unit(x: &BigRational) -> Scaled {
    debug_assert!(!x.is_negative() && x < &BigRational::from_integer(1.into()));
    if x.is_zero() {
        return Scaled::ZERO;
    }
    // fold to [0, 1/2]
    let half = BigRational::new(1.into(), 2.into());
    let t = if x > &half {
        BigRational::from_integer(1.into()) - x
    } else {
        x.clone()
    };
    if t.is_zero() {
        return Scaled::ZERO;
    }
    let log2t = log2_rational(&t);
    if log2t < -40.0 {
        // sin(pi t) = pi t (1 + O(t^2)), relative error below 2^-80
        Scaled::from_log2(1.0, log2t + std::f64::consts::PI.log2())
    } else {
        Scaled::new((std::f64::consts::PI * unit_rational_to_f64(&t)).sin())
    }
}

/// `sin(pi x)` for any rational `x`, sign included.
pub fn sin_pi(x: &BigRational) -> Scaled {
    let (odd, fr) = split_parity_frac(x);
    let s = sin_pi_unit(&fr);
    if odd {
        s.neg()
    } else {
        s
    }
}

/// `cos(2 pi x)` for any rational `x` (plain `f64`; cosine is never
/// scale-critical here).
pub fn cos_2pi(x: &BigRational) -> f64 {
    let fr = frac(x);
    (2.0 * std::f64::consts::PI * unit_rational_to_f64(&fr)).cos()
}

/// `sin(2 pi x)` companion.
pub fn sin_2pi(x: &BigRational) -> f64 {
    let fr = frac(x);
    (2.0 * std::f64::consts::PI * unit_rational_to_f64(&fr)).sin()
}

/// An *unreduced* fraction in `[0, 1)`: the numerator is kept mod the
/// denominator but no gcd is ever taken. Orbit phases live over a handful
/// of fixed denominators (powers of the surrogate's), and reducing them
/// through `BigRational` costs a large-integer gcd per operation; this type
/// trades canonical form for `O(mul)` arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitFrac {
    num: BigUint,
    den: BigUint,
}

impl UnitFrac {
    pub fn new(num: &BigInt, den: &BigUint) -> UnitFrac {
        debug_assert!(!den.is_zero());
        let d = BigInt::from(den.clone());
        let m = num_integer::Integer::mod_floor(num, &d);
        UnitFrac {
            num: m.magnitude().clone(),
            den: den.clone(),
        }
    }

    pub fn from_biguint(num: BigUint, den: BigUint) -> UnitFrac {
        debug_assert!(!den.is_zero());
        UnitFrac {
            num: &num % &den,
            den,
        }
    }

    pub fn zero() -> UnitFrac {
        UnitFrac {
            num: BigUint::zero(),
            den: BigUint::from(1u32),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    /// `(parity of floor(k * self), frac(k * self))` in one division.
    pub fn mul_uint_split(&self, k: &BigUint) -> (bool, UnitFrac) {
        let prod = k * &self.num;
        let (q, r) = num_integer::Integer::div_rem(&prod, &self.den);
        (
            q.bit(0),
            UnitFrac {
                num: r,
                den: self.den.clone(),
            },
        )
    }

    /// `frac(k * self)`.
    pub fn mul_uint(&self, k: &BigUint) -> UnitFrac {
        UnitFrac {
            num: (k * &self.num) % &self.den,
            den: self.den.clone(),
        }
    }

    /// Distance to the nearest integer, in `[0, 1/2]`.
    pub fn fold_half(&self) -> UnitFrac {
        if &self.num * 2u32 > self.den {
            UnitFrac {
                num: &self.den - &self.num,
                den: self.den.clone(),
            }
        } else {
            self.clone()
        }
    }

    /// Accurate to one part in `2^62`.
    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let scaled: BigUint = (&self.num << 62u32) / &self.den;
        let v: u64 = (&scaled).try_into().expect("below 2^62");
        v as f64 / (1u64 << 62) as f64
    }

    /// `log2` of the value (must be nonzero).
    pub fn log2(&self) -> f64 {
        log2_biguint(&self.num) - log2_biguint(&self.den)
    }

    pub fn to_scaled(&self) -> Scaled {
        if self.is_zero() {
            Scaled::ZERO
        } else {
            Scaled::from_log2(1.0, self.log2())
        }
    }

    /// `sin(pi * self)`, scale-exact for tiny values.
    pub fn sin_pi(&self) -> Scaled {
        if self.is_zero() {
            return Scaled::ZERO;
        }
        let t = self.fold_half();
        if t.is_zero() {
            return Scaled::ZERO;
        }
        let log2t = t.log2();
        if log2t < -40.0 {
            Scaled::from_log2(1.0, log2t + std::f64::consts::PI.log2())
        } else {
            Scaled::new((std::f64::consts::PI * t.to_f64()).sin())
        }
    }
}
