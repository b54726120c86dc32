//! Jacobi symbols and modular square roots.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::RngCore;

use super::residue::Residue;
use crate::error::{Error, Result};

/// Nonresidue trials before `sqrt_mod` gives up.
pub const NONRESIDUE_BUDGET: usize = 64;

/// Jacobi symbol (a/n) for odd n.
pub fn jacobi(a: &BigUint, n: &BigUint) -> i32 {
    assert!(n.is_odd(), "jacobi symbol needs an odd modulus");
    let mut a = a % n;
    let mut n = n.clone();
    let mut sign = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = (&n % 8u32).to_u32_digits().first().copied().unwrap_or(0);
        if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        let a4 = (&a % 4u32).to_u32_digits().first().copied().unwrap_or(0);
        let n4 = (&n % 4u32).to_u32_digits().first().copied().unwrap_or(0);
        if a4 == 3 && n4 == 3 {
            sign = -sign;
        }
        a %= &n;
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// Square root by Tonelli-Shanks.
///
/// The algorithm is only guaranteed for a prime modulus; the answer is
/// checked by squaring, so a composite modulus can only lead to
/// `NoSquareRoot` or a `NonInvertible` factor, never a wrong root.
pub fn sqrt_mod<R: RngCore + ?Sized>(a: &Residue, rng: &mut R) -> Result<Residue> {
    let ring = a.ring();
    let n = ring.modulus();
    if n.is_even() {
        return Err(Error::Invalid("sqrt_mod needs an odd modulus".into()));
    }
    if a.is_zero() {
        return Ok(a.clone());
    }
    let g = a.value().gcd(n);
    if !g.is_one() {
        return Err(Error::NonInvertible(g));
    }
    if jacobi(a.value(), n) != 1 {
        return Err(Error::NoSquareRoot);
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let q = &n_minus_1 >> s;

    let root = if s == 1 {
        a.pow(&((n + 1u32) >> 2))
    } else {
        let z = find_nonresidue(a, rng)?;
        let mut m = s;
        let mut c = z.pow(&q);
        let mut t = a.pow(&q);
        let mut r = a.pow(&((&q + 1u32) >> 1));
        loop {
            if t.is_one() {
                break r;
            }
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                i += 1;
                if i >= m {
                    return Err(Error::NoSquareRoot);
                }
                t2 = t2.square();
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            t = &t * &c;
            r = &r * &b;
        }
    };
    if &root.square() == a {
        Ok(root)
    } else {
        Err(Error::NoSquareRoot)
    }
}

fn find_nonresidue<R: RngCore + ?Sized>(a: &Residue, rng: &mut R) -> Result<Residue> {
    let ring = a.ring();
    let n = ring.modulus();
    let two = BigUint::from(2u32);
    for _ in 0..NONRESIDUE_BUDGET {
        let z = rng.gen_biguint_range(&two, n);
        match jacobi(&z, n) {
            -1 => return Ok(ring.elem_owned(z)),
            0 => return Err(Error::NonInvertible(z.gcd(n))),
            _ => {}
        }
    }
    Err(Error::NoSquareRoot)
}
