//! Cornacchia's algorithm in the form 4n = t^2 + disc * v^2.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::RngCore;

use super::residue::ResidueRing;
use super::sqrt::sqrt_mod;
use crate::error::{Error, Result};

/// Solves `t^2 + disc * v^2 = 4n` with `t, v > 0`.
///
/// `disc` is |D| for a discriminant D = -disc (so disc = 0 or 3 mod 4).
/// The square root of -disc mod n is computed with `rng`.
pub fn cornacchia<R: RngCore + ?Sized>(disc: &BigUint, n: &BigUint, rng: &mut R) -> Result<(BigUint, BigUint)> {
    if n.is_one() {
        return tiny(disc, n);
    }
    let ring = ResidueRing::new(n.clone())?;
    let minus_disc = -ring.elem(disc);
    let delta = match sqrt_mod(&minus_disc, rng) {
        Ok(r) => r,
        Err(Error::NoSquareRoot) => return Err(Error::NoSolution),
        Err(e) => return Err(e),
    };
    cornacchia_with_root(disc, n, delta.value())
}

/// Cornacchia given a square root `delta` of -disc modulo n.
pub fn cornacchia_with_root(disc: &BigUint, n: &BigUint, delta: &BigUint) -> Result<(BigUint, BigUint)> {
    let rem = (disc % 4u32).to_u32_digits().first().copied().unwrap_or(0);
    if disc.is_zero() || (rem != 0 && rem != 3) {
        return Err(Error::Invalid(format!("{disc} is not minus a discriminant")));
    }
    let four_n: BigUint = n << 2u32;
    if disc > &four_n {
        return Err(Error::NoSolution);
    }
    let mut b = delta % n;
    if b.is_odd() != disc.is_odd() {
        b = n - &b;
    }
    let mut a: BigUint = n << 1u32;
    let l = four_n.sqrt();
    while b > l {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    let b2 = &b * &b;
    if b2 > four_n {
        return Err(Error::NoSolution);
    }
    let (c, r) = (&four_n - &b2).div_rem(disc);
    if !r.is_zero() {
        return Err(Error::NoSolution);
    }
    let v = c.sqrt();
    if &v * &v != c || v.is_zero() || b.is_zero() {
        return Err(Error::NoSolution);
    }
    Ok((b, v))
}

fn tiny(disc: &BigUint, n: &BigUint) -> Result<(BigUint, BigUint)> {
    let four_n: BigUint = n << 2u32;
    let mut v = BigUint::one();
    while disc * &v * &v < four_n {
        let rest = &four_n - disc * &v * &v;
        let t = rest.sqrt();
        if &t * &t == rest {
            return Ok((t, v));
        }
        v += 1u32;
    }
    Err(Error::NoSolution)
}
