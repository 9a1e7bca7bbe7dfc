//! Extended-range complex scalars and polar-form powers.
//!
//! The constructions in this crate routinely produce factors such as
//! `λ^{-n}` or `m!/(m + r n)!` with `n` in the thousands. Those leave the
//! `f64` exponent range long before they lose relative precision, so every
//! element coefficient is stored as a double-precision complex mantissa
//! together with an unbounded binary exponent.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// `mant * 2^exp`, with `max(|mant.re|, |mant.im|)` in `[0.5, 1)` unless zero.
#[derive(Clone, Copy, PartialEq)]
pub struct XComplex {
    mant: Complex64,
    exp: i64,
}

impl fmt::Debug for XComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp.abs() < 1000 {
            write!(f, "{:?}", self.to_complex())
        } else {
            write!(f, "({:?})*2^{}", self.mant, self.exp)
        }
    }
}

impl Default for XComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl XComplex {
    pub const ZERO: XComplex = XComplex {
        mant: Complex64::new(0.0, 0.0),
        exp: 0,
    };
    pub const ONE: XComplex = XComplex {
        mant: Complex64::new(0.5, 0.0),
        exp: 1,
    };

    fn normalized(mant: Complex64, exp: i64) -> Self {
        let m = mant.re.abs().max(mant.im.abs());
        if m == 0.0 {
            return Self::ZERO;
        }
        if !m.is_finite() {
            return Self { mant, exp };
        }
        let (_, e) = libm::frexp(m);
        Self {
            mant: Complex64::new(libm::ldexp(mant.re, -e), libm::ldexp(mant.im, -e)),
            exp: exp + i64::from(e),
        }
    }

    pub fn new(re: f64, im: f64) -> Self {
        Self::normalized(Complex64::new(re, im), 0)
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self::normalized(c, 0)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::normalized(Complex64::new(x, 0.0), 0)
    }

    /// `2^log2_mod * exp(2πi * turns)`.
    pub fn from_polar_log2(log2_mod: f64, turns: f64) -> Self {
        if log2_mod == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let k = log2_mod.floor();
        let frac = log2_mod - k;
        Self::normalized(unit_from_turns(turns) * 2f64.powf(frac), k as i64)
    }

    /// Natural-log modulus and argument in radians.
    pub fn from_polar_ln(ln_mod: f64, arg: f64) -> Self {
        Self::from_polar_log2(ln_mod / std::f64::consts::LN_2, (arg / TAU).rem_euclid(1.0))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mant.re.is_finite() && self.mant.im.is_finite()
    }

    /// Nearest `Complex64`; saturates to infinity or flushes to zero.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        Complex64::new(libm::ldexp(self.mant.re, e), libm::ldexp(self.mant.im, e))
    }

    pub fn re(&self) -> f64 {
        self.to_complex().re
    }

    pub fn im(&self) -> f64 {
        self.to_complex().im
    }

    /// `log2 |z|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mant.norm().log2() + self.exp as f64
    }

    pub fn ln_abs(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LN_2
    }

    /// Argument in radians, in `(-π, π]`.
    pub fn arg(&self) -> f64 {
        self.mant.arg()
    }

    /// `|z|` as an extended real.
    pub fn abs_x(&self) -> XComplex {
        Self::normalized(Complex64::new(self.mant.norm(), 0.0), self.exp)
    }

    /// `|z|` as `f64`, saturating.
    pub fn abs(&self) -> f64 {
        self.abs_x().to_complex().re
    }

    pub fn conj(&self) -> Self {
        Self {
            mant: self.mant.conj(),
            exp: self.exp,
        }
    }

    /// Multiply by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self {
            mant: self.mant,
            exp: self.exp + k,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::normalized(self.mant * s, self.exp)
    }

    pub fn mul_c(&self, c: Complex64) -> Self {
        Self::normalized(self.mant * c, self.exp)
    }

    pub fn recip(&self) -> Self {
        Self::normalized(self.mant.inv(), -self.exp)
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, mut n: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// `z^n` in polar form, see [`pow_polar`].
    pub fn powu_polar(&self, n: u64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        let (whole, frac) = split_mul(n, self.mant.norm().log2());
        let turns = frac_mul(n, turns_of(self.mant));
        Self::normalized(unit_from_turns(turns) * 2f64.powf(frac), whole as i64 + self.exp * n as i64)
    }

    /// Compare moduli.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.log2_abs()
            .partial_cmp(&other.log2_abs())
            .unwrap_or(Ordering::Equal)
    }
}

impl From<Complex64> for XComplex {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

impl From<f64> for XComplex {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Add for XComplex {
    type Output = XComplex;
    fn add(self, o: XComplex) -> XComplex {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let d = big.exp - small.exp;
        if d > 1100 {
            return big;
        }
        let d = d as i32;
        let s = Complex64::new(libm::ldexp(small.mant.re, -d), libm::ldexp(small.mant.im, -d));
        Self::normalized(big.mant + s, big.exp)
    }
}

impl AddAssign for XComplex {
    fn add_assign(&mut self, o: XComplex) {
        *self = *self + o;
    }
}

impl Neg for XComplex {
    type Output = XComplex;
    fn neg(self) -> XComplex {
        Self {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl Sub for XComplex {
    type Output = XComplex;
    fn sub(self, o: XComplex) -> XComplex {
        self + (-o)
    }
}

impl Mul for XComplex {
    type Output = XComplex;
    fn mul(self, o: XComplex) -> XComplex {
        if self.is_zero() || o.is_zero() {
            return Self::ZERO;
        }
        Self::normalized(self.mant * o.mant, self.exp + o.exp)
    }
}

impl Div for XComplex {
    type Output = XComplex;
    fn div(self, o: XComplex) -> XComplex {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::normalized(self.mant / o.mant, self.exp - o.exp)
    }
}

/// `exp(2πi t)`, exact at the four quadrant points.
pub fn unit_from_turns(t: f64) -> Complex64 {
    let t = t.rem_euclid(1.0);
    if t == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if t == 0.25 {
        Complex64::new(0.0, 1.0)
    } else if t == 0.5 {
        Complex64::new(-1.0, 0.0)
    } else if t == 0.75 {
        Complex64::new(0.0, -1.0)
    } else {
        let (s, c) = (TAU * t).sin_cos();
        Complex64::new(c, s)
    }
}

/// Argument of `c` in turns, in `[0, 1)`.
pub fn turns_of(c: Complex64) -> f64 {
    if c.im == 0.0 {
        return if c.re < 0.0 { 0.5 } else { 0.0 };
    }
    if c.re == 0.0 {
        return if c.im > 0.0 { 0.25 } else { 0.75 };
    }
    let t = (c.im.atan2(c.re) / TAU).rem_euclid(1.0);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Integer and fractional part of the exact product `n * x`.
///
/// The product of two doubles is split with an fma so the fractional part
/// is correct to a few ulps of 1 even when `n * x` is around `10^9`.
pub fn split_mul(n: u64, x: f64) -> (f64, f64) {
    let nf = n as f64;
    let p = nf * x;
    let err = nf.mul_add(x, -p);
    let whole = p.floor();
    let mut frac = (p - whole) + err;
    let mut whole = whole;
    while frac < 0.0 {
        frac += 1.0;
        whole -= 1.0;
    }
    while frac >= 1.0 {
        frac -= 1.0;
        whole += 1.0;
    }
    (whole, frac)
}

/// `n * x mod 1` in `[0, 1)`.
pub fn frac_mul(n: u64, x: f64) -> f64 {
    split_mul(n, x).1
}

/// `c^n` computed in polar form: `2^{n log2|c|} * exp(2πi n θ)` with the
/// angle kept in turns and reduced mod 1.
pub fn pow_polar(c: Complex64, n: u64) -> XComplex {
    if n == 0 {
        return XComplex::ONE;
    }
    if c.re == 0.0 && c.im == 0.0 {
        return XComplex::ZERO;
    }
    let (whole, frac) = split_mul(n, c.norm().log2());
    let turns = frac_mul(n, turns_of(c));
    XComplex::normalized(unit_from_turns(turns) * 2f64.powf(frac), whole as i64)
}

/// `c^{-n}` in polar form.
pub fn pow_polar_neg(c: Complex64, n: u64) -> XComplex {
    pow_polar(c, n).recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_complex() {
        let a = Complex64::new(1.5, -2.0);
        let b = Complex64::new(-0.25, 3.0);
        let (xa, xb) = (XComplex::from(a), XComplex::from(b));
        assert!(((xa + xb).to_complex() - (a + b)).norm() < 1e-15);
        assert!(((xa - xb).to_complex() - (a - b)).norm() < 1e-15);
        assert!(((xa * xb).to_complex() - (a * b)).norm() < 1e-14);
        assert!(((xa / xb).to_complex() - (a / b)).norm() < 1e-15);
    }

    #[test]
    fn survives_underflow_range() {
        let tiny = pow_polar_neg(Complex64::new(4.0, 0.0), 2000);
        assert_eq!(tiny.to_complex(), Complex64::new(0.0, 0.0));
        let back = tiny * pow_polar(Complex64::new(4.0, 0.0), 2000);
        assert!((back.to_complex() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn exact_powers_of_two_and_sign() {
        let p = pow_polar(Complex64::new(-2.0, 0.0), 7);
        assert_eq!(p.to_complex(), Complex64::new(-128.0, 0.0));
        let p = pow_polar(Complex64::new(0.0, 2.0), 3);
        assert_eq!(p.to_complex(), Complex64::new(0.0, -8.0));
    }

    #[test]
    fn frac_mul_is_exact_for_dyadics() {
        assert_eq!(frac_mul(7, 0.5), 0.5);
        assert_eq!(frac_mul(8, 0.125), 0.0);
        let f = frac_mul(3, 1.0 / 3.0);
        assert!(f.min(1.0 - f) < 1e-16);
    }

    #[test]
    fn zero_handling() {
        assert!(XComplex::ZERO.is_zero());
        assert_eq!(XComplex::ZERO.log2_abs(), f64::NEG_INFINITY);
        assert!((XComplex::ONE + XComplex::ZERO).to_complex() == Complex64::new(1.0, 0.0));
        assert!((XComplex::from_f64(3.0) - XComplex::from_f64(3.0)).is_zero());
    }
}
