//! Reference computations shared by the integration tests. Nothing here calls
//! into the library's arithmetic.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::renorm(s, e + self.lo + o.lo)
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    /// Exact scaling by a power of two.
    fn scale2(self, f: f64) -> Dd {
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }
}

/// Double-double complex number times `2^exp`.
#[derive(Clone, Copy, Debug)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
    pub exp: i64,
}

fn binary_exponent(x: f64) -> i64 {
    ((x.to_bits() >> 52) & 0x7ff) as i64 - 1023
}

impl DdComplex {
    pub fn new(c: Complex64) -> Self {
        DdComplex {
            re: Dd::new(c.re),
            im: Dd::new(c.im),
            exp: 0,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        let m = self.re.hi.abs().max(self.im.hi.abs());
        if m == 0.0 {
            return self;
        }
        let e = binary_exponent(m);
        let f = f64::from_bits(((1023 - e) as u64) << 52);
        self.re = self.re.scale2(f);
        self.im = self.im.scale2(f);
        self.exp += e;
        self
    }

    pub fn mul(self, o: DdComplex) -> DdComplex {
        let re = self.re.mul(o.re).add(self.im.mul(o.im).neg());
        let im = self.re.mul(o.im).add(self.im.mul(o.re));
        DdComplex {
            re,
            im,
            exp: self.exp + o.exp,
        }
        .normalized()
    }

    pub fn powu(self, mut n: u64) -> DdComplex {
        let mut acc = DdComplex::new(Complex64::new(1.0, 0.0));
        let mut base = self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }

    /// `(ln|w|, arg w)` with `arg` in `(-π, π]`.
    pub fn log_polar(&self) -> (f64, f64) {
        let (re, im) = (self.re.hi, self.im.hi);
        (0.5 * (re * re + im * im).ln() + self.exp as f64 * std::f64::consts::LN_2, im.atan2(re))
    }
}

/// Wraps an angle difference to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let r = a.rem_euclid(t);
    if r > std::f64::consts::PI {
        r - t
    } else {
        r
    }
}

/// `2 |sin(π ‖n θ‖)|` for every angle, with `n θ mod 1` taken exactly from
/// the dyadic expansion of the double `θ`.
pub fn dyadic_residual(angles: &[f64], n: u64) -> f64 {
    angles
        .iter()
        .map(|&theta| {
            let d = dyadic_distance_to_integer(theta, n);
            2.0 * (std::f64::consts::PI * d).sin().abs()
        })
        .fold(0.0, f64::max)
}

/// Distance from `n θ` to the nearest integer, computed in integers.
pub fn dyadic_distance_to_integer(theta: f64, n: u64) -> f64 {
    assert!((0.0..1.0).contains(&theta));
    if theta == 0.0 {
        return 0.0;
    }
    // θ = m / 2^k with m odd
    let bits = theta.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut k) = if raw_exp == 0 {
        (frac as u128, 1074i64)
    } else {
        ((frac | (1u64 << 52)) as u128, 1075 - raw_exp)
    };
    while m % 2 == 0 {
        m /= 2;
        k -= 1;
    }
    let prod = m * n as u128;
    if k >= 127 {
        // the product is below 2^117, so it is its own residue
        let x = prod as f64 * 2f64.powi(-(k as i32));
        return x.min(1.0 - x);
    }
    let modulus = 1u128 << k;
    let r = prod % modulus;
    let d = r.min(modulus - r);
    d as f64 / modulus as f64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn complex_in_box(rng: &mut ChaCha8Rng, half: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

pub fn polar(modulus: f64, turns: f64) -> Complex64 {
    Complex64::from_polar(modulus, std::f64::consts::TAU * turns)
}
