//! Closed rational intervals with outward rounding, for certified bounds on
//! logarithms, exponentials and pi. Nothing here uses floating point.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision: endpoints are rounded outward to multiples of 2^-PREC.
pub const PREC: u32 = 200;

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn floor_to(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let num = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    BigRational::new(num, scale)
}

fn ceil_to(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let num = (x * BigRational::from_integer(scale.clone())).ceil().to_integer();
    BigRational::new(num, scale)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo: floor_to(&lo, PREC), hi: ceil_to(&hi, PREC) }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: &BigUint) -> Self {
        Interval::point(BigRational::from_integer(BigInt::from(n.clone())))
    }

    pub fn from_i64(n: i64) -> Self {
        Interval::point(rat(n, 1))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, k: &BigRational) -> Interval {
        self.mul(&Interval::point(k.clone()))
    }

    /// Division by an interval not containing zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo.is_positive() || o.hi.is_negative(), "division by an interval containing 0");
        let inv = Interval::new(o.hi.recip(), o.lo.recip());
        self.mul(&inv)
    }

    pub fn certainly_ge(&self, o: &Interval) -> bool {
        self.lo >= o.hi
    }

    pub fn certainly_gt(&self, o: &Interval) -> bool {
        self.lo > o.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.to_f64().unwrap_or(f64::NAN);
        let hi = self.hi.to_f64().unwrap_or(f64::NAN);
        write!(f, "[{lo:.12e}, {hi:.12e}]")
    }
}

/// 2 atanh(z) = ln((1+z)/(1-z)) for a rational 0 <= z < 1/2.
fn two_atanh(z: &BigRational) -> Interval {
    assert!(!z.is_negative() && z < &rat(1, 2));
    let z2 = z * z;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (PREC + 8));
    let mut term = z.clone();
    let mut sum = BigRational::zero();
    let mut k = 0u64;
    loop {
        let t = &term / BigRational::from_integer(BigInt::from(2 * k + 1));
        sum += &t;
        term = floor_to(&(&term * &z2), PREC + 16);
        k += 1;
        // Remaining terms are below term/(2k+1) * 1/(1-z^2) <= 2 term.
        let tail = &term * rat(2, 1);
        if tail < eps || term.is_zero() {
            let lo = &sum * rat(2, 1);
            let hi = (&sum + tail + &eps) * rat(2, 1);
            return Interval::new(lo, hi);
        }
    }
}

/// Natural logarithm of 2.
pub fn ln2() -> Interval {
    // 2 atanh(1/3) = ln 2
    two_atanh(&rat(1, 3))
}

/// Natural logarithm of a positive rational.
pub fn ln(x: &BigRational) -> Interval {
    assert!(x.is_positive(), "ln of a nonpositive number");
    if x < &BigRational::one() {
        return ln(&x.recip()).neg();
    }
    // x = 2^k * y with y in [1, 2)
    let num_bits = x.numer().bits() as i64;
    let den_bits = x.denom().bits() as i64;
    let mut k = num_bits - den_bits;
    let two_k = |k: i64| {
        if k >= 0 {
            BigRational::from_integer(BigInt::one() << k as u32)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-k) as u32)
        }
    };
    let mut y = x / two_k(k);
    while y >= rat(2, 1) {
        y /= rat(2, 1);
        k += 1;
    }
    while y < BigRational::one() {
        y *= rat(2, 1);
        k -= 1;
    }
    // y in [1, 2): z = (y-1)/(y+1) in [0, 1/3)
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let z = Interval::new(z.clone(), z);
    let lo = two_atanh(&z.lo);
    let hi = two_atanh(&z.hi);
    ln2().scale(&rat(k, 1)).add(&Interval::new(lo.lo, hi.hi))
}

pub fn ln_int(n: &BigUint) -> Interval {
    ln(&BigRational::from_integer(BigInt::from(n.clone())))
}

/// atan(1/m) for an integer m >= 2, by the alternating series.
fn atan_inv(m: u64) -> Interval {
    let m2 = BigRational::from_integer(BigInt::from(m * m));
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (PREC + 8));
    let mut power = BigRational::new(BigInt::one(), BigInt::from(m));
    let mut sum = BigRational::zero();
    let mut k = 0u64;
    loop {
        let t = &power / BigRational::from_integer(BigInt::from(2 * k + 1));
        if t < eps {
            // The alternating tail is bounded by its first term.
            return Interval::new(&sum - &t, &sum + &t);
        }
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        power /= &m2;
        k += 1;
    }
}

/// pi by Machin's formula.
pub fn pi() -> Interval {
    atan_inv(5).scale(&rat(16, 1)).sub(&atan_inv(239).scale(&rat(4, 1)))
}

/// exp(x) for a rational x.
pub fn exp(x: &BigRational) -> Interval {
    if x.is_negative() {
        let e = exp(&-x);
        return Interval::from_i64(1).div(&e);
    }
    // exp(x) = exp(x / 2^s)^(2^s) with x / 2^s <= 1/2.
    let mut s = 0u32;
    let mut y = x.clone();
    while y > rat(1, 2) {
        y /= rat(2, 1);
        s += 1;
    }
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (PREC + 8 + s));
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut k = 1u64;
    loop {
        sum += &term;
        term = floor_to(&(&term * &y / BigRational::from_integer(BigInt::from(k))), PREC + 16 + s);
        k += 1;
        // Tail is at most 2 * term because y <= 1/2.
        if term < eps {
            break;
        }
    }
    let mut r = Interval::new(sum.clone(), &sum + &term * rat(2, 1) + &eps);
    for _ in 0..s {
        r = r.mul(&r);
    }
    r
}

/// sqrt of a nonnegative rational, bracketed through integer square roots.
pub fn sqrt(x: &BigRational) -> Interval {
    assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * PREC);
    let scaled = (x * BigRational::from_integer(scale)).floor().to_integer().to_biguint().unwrap();
    let r = scaled.sqrt();
    let den = BigInt::one() << PREC;
    let lo = BigRational::new(BigInt::from(r.clone()), den.clone());
    let hi = BigRational::new(BigInt::from(r + 1u32), den);
    Interval::new(lo, hi)
}

/// Bracket of log2(n) for n >= 1 from the bit length of n^b: the lower end
/// is (bits(n^b) - 1)/b and the upper end bits(n^b)/b.
pub fn log2_bracket(n: &BigUint, b: u32) -> (BigRational, BigRational) {
    let bits = n.pow(b).bits() as i64;
    let b = b as i64;
    (rat(bits - 1, b), rat(bits, b))
}

/// ceil(x) of a rational as an integer.
pub fn ceil_int(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// floor(x) of a rational as an integer.
pub fn floor_int(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// ceil(sqrt(d)).
pub fn ceil_sqrt(d: u64) -> u64 {
    let r = num_integer::Roots::sqrt(&d);
    if r * r == d {
        r
    } else {
        r + 1
    }
}

/// floor(sqrt(d)).
pub fn floor_sqrt(d: u64) -> u64 {
    num_integer::Roots::sqrt(&d)
}

/// True when n is 2^k.
pub fn is_power_of_two(n: &BigUint) -> bool {
    !n.is_zero() && (n & (n - 1u32)).is_zero()
}

/// Helper for tests and tables: a rational from a decimal string like "1.74498".
pub fn decimal(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
}

/// Returns true if a divides b exactly.
pub fn divides(a: &BigUint, b: &BigUint) -> bool {
    b.is_multiple_of(a)
}
