//! The convolution algebra R^d = R[X]/(X^d - 1).
//!
//! `conv` is the cyclic product, `pointwise` the component-wise one and
//! `shift` the cyclic shift sigma, `shift(a)_i = a_{i-1}`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{Residue, ResidueRing};
use crate::error::{Error, Result};

/// Below this length Karatsuba falls back to schoolbook.
const KARATSUBA_CUTOFF: usize = 24;

#[derive(Clone, PartialEq, Eq)]
pub struct RingVector {
    ring: ResidueRing,
    coords: Vec<BigUint>,
}

impl RingVector {
    /// Builds a vector, reducing every coordinate. Panics on an empty list.
    pub fn new(ring: &ResidueRing, coords: Vec<BigUint>) -> Self {
        assert!(!coords.is_empty(), "ring vectors have length at least 1");
        let m = ring.modulus();
        let coords = coords.into_iter().map(|c| if &c < m { c } else { c % m }).collect();
        RingVector { ring: ring.clone(), coords }
    }

    pub fn from_i64(ring: &ResidueRing, coords: &[i64]) -> Self {
        Self::from_residues(ring, &coords.iter().map(|&c| ring.from_i64(c)).collect::<Vec<_>>())
    }

    pub fn from_residues(ring: &ResidueRing, coords: &[Residue]) -> Self {
        for c in coords {
            assert_eq!(c.ring(), ring, "residue ring mismatch");
        }
        Self::new(ring, coords.iter().map(|c| c.value().clone()).collect())
    }

    pub fn zero(ring: &ResidueRing, d: usize) -> Self {
        Self::new(ring, vec![BigUint::zero(); d])
    }

    /// The basis vector with a single 1 at index `k mod d`.
    pub fn delta(ring: &ResidueRing, d: usize, k: usize) -> Self {
        let mut v = Self::zero(ring, d);
        v.coords[k % d] = BigUint::one();
        v
    }

    pub fn constant(ring: &ResidueRing, d: usize, c: &Residue) -> Self {
        Self::new(ring, vec![c.value().clone(); d])
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    /// Coordinate `i mod d`.
    pub fn get(&self, i: i64) -> Residue {
        let d = self.len() as i64;
        self.ring.elem(&self.coords[i.rem_euclid(d) as usize])
    }

    pub fn residues(&self) -> Vec<Residue> {
        self.coords.iter().map(|c| self.ring.elem(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &RingVector) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.len() != other.len() {
            return Err(Error::Invalid(format!("lengths {} and {} differ", self.len(), other.len())));
        }
        Ok(())
    }

    fn zip_with(&self, other: &RingVector, f: impl Fn(&Residue, &Residue) -> Residue) -> Result<RingVector> {
        self.check(other)?;
        let out = self.residues().iter().zip(other.residues().iter()).map(|(a, b)| f(a, b)).collect::<Vec<_>>();
        Ok(Self::from_residues(&self.ring, &out))
    }

    pub fn try_add(&self, other: &RingVector) -> Result<RingVector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &RingVector) -> Result<RingVector> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Component-wise product.
    pub fn try_pointwise(&self, other: &RingVector) -> Result<RingVector> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &RingVector) -> RingVector {
        self.try_add(other).expect("ring vector mismatch")
    }

    pub fn sub(&self, other: &RingVector) -> RingVector {
        self.try_sub(other).expect("ring vector mismatch")
    }

    pub fn pointwise(&self, other: &RingVector) -> RingVector {
        self.try_pointwise(other).expect("ring vector mismatch")
    }

    pub fn neg(&self) -> RingVector {
        Self::from_residues(&self.ring, &self.residues().iter().map(|a| -a).collect::<Vec<_>>())
    }

    pub fn scale(&self, c: &Residue) -> RingVector {
        Self::from_residues(&self.ring, &self.residues().iter().map(|a| a * c).collect::<Vec<_>>())
    }

    /// sigma: output coordinate i is input coordinate i - 1.
    pub fn shift(&self) -> RingVector {
        self.shift_by(1)
    }

    /// sigma^k.
    pub fn shift_by(&self, k: i64) -> RingVector {
        let d = self.len();
        let k = k.rem_euclid(d as i64) as usize;
        let mut coords = vec![BigUint::zero(); d];
        for (i, c) in self.coords.iter().enumerate() {
            coords[(i + k) % d] = c.clone();
        }
        RingVector { ring: self.ring.clone(), coords }
    }

    /// Cyclic convolution, `(a * b)_j = sum_i a_i b_{j-i}`, schoolbook.
    pub fn try_conv(&self, other: &RingVector) -> Result<RingVector> {
        self.check(other)?;
        let coords = match self.ring.small_modulus() {
            Some(m) => cyclic_small(&to_u64(&self.coords), &to_u64(&other.coords), m)
                .into_iter()
                .map(BigUint::from)
                .collect(),
            None => cyclic_big(&self.coords, &other.coords, self.ring.modulus()),
        };
        Ok(RingVector { ring: self.ring.clone(), coords })
    }

    pub fn conv(&self, other: &RingVector) -> RingVector {
        self.try_conv(other).expect("ring vector mismatch")
    }

    /// Cyclic convolution through a Karatsuba product of the integer
    /// representatives. Gives exactly the same result as [`RingVector::conv`].
    pub fn try_conv_karatsuba(&self, other: &RingVector) -> Result<RingVector> {
        self.check(other)?;
        let full = karatsuba(&self.coords, &other.coords);
        let d = self.len();
        let mut acc = vec![BigUint::zero(); d];
        for (k, c) in full.into_iter().enumerate() {
            acc[k % d] += c;
        }
        Ok(Self::new(&self.ring, acc))
    }

    /// Product in R[X]/(X^d - alpha).
    pub fn try_twisted_conv(&self, other: &RingVector, alpha: &Residue) -> Result<RingVector> {
        self.check(other)?;
        let full = karatsuba(&self.coords, &other.coords);
        let d = self.len();
        let m = self.ring.modulus();
        let mut lo = vec![BigUint::zero(); d];
        let mut hi = vec![BigUint::zero(); d];
        for (k, c) in full.into_iter().enumerate() {
            if k < d {
                lo[k] += c;
            } else {
                hi[k - d] += c;
            }
        }
        let coords = lo.into_iter().zip(hi).map(|(l, h)| (l + (h % m) * alpha.value()) % m).collect();
        Ok(RingVector { ring: self.ring.clone(), coords })
    }

    /// Inverse for the convolution product, by the extended Euclidean
    /// algorithm against X^d - 1.
    ///
    /// `NotConvInvertible` when the gcd is not a unit constant;
    /// `NonInvertible(g)` when a leading coefficient is a zero divisor.
    pub fn conv_invert(&self) -> Result<RingVector> {
        let coords = match self.ring.small_modulus() {
            Some(m) if m < 1 << 63 => {
                let k = SmallMod(m);
                let a: Vec<u64> = to_u64(&self.coords);
                poly_inverse_cyclic(&k, &a)?.into_iter().map(BigUint::from).collect()
            }
            _ => {
                let k = BigMod(self.ring.modulus().clone());
                poly_inverse_cyclic(&k, &self.coords)?
            }
        };
        Ok(RingVector::new(&self.ring, coords))
    }
}

impl fmt::Debug for RingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter().map(|c| c.to_string())).finish()
    }
}

fn to_u64(v: &[BigUint]) -> Vec<u64> {
    v.iter().map(|c| c.to_u64().expect("coordinate fits the modulus")).collect()
}

/// Schoolbook cyclic convolution for a modulus below 2^64. Accumulates
/// exact sums in 192 bits and reduces once per output.
fn cyclic_small(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let d = a.len();
    let mm = (m - 1) as u128;
    if (mm * mm).checked_mul(d as u128).is_some_and(|s| s <= u64::MAX as u128) {
        return cyclic_narrow(a, b, m);
    }
    if m <= 1 << 32 {
        return cyclic_wide(a, b, m);
    }
    let mut lo = vec![0u128; d];
    let mut hi = vec![0u64; d];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let ai = ai as u128;
        for (k, &bk) in b.iter().enumerate() {
            let j = if i + k >= d { i + k - d } else { i + k };
            let (s, o) = lo[j].overflowing_add(ai * bk as u128);
            lo[j] = s;
            hi[j] += o as u64;
        }
    }
    let m128 = m as u128;
    let r128 = (u128::MAX % m128 + 1) % m128;
    lo.into_iter()
        .zip(hi)
        .map(|(l, h)| {
            let top = ((h as u128 % m128) * r128) % m128;
            ((l % m128 + top) % m128) as u64
        })
        .collect()
}

/// All d products of a column fit in a u64 together: no reduction until the
/// end, and the split loops vectorize.
fn cyclic_narrow(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let d = a.len();
    let mut acc = vec![0u64; d];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let (b_lo, b_hi) = b.split_at(d - i);
        for (x, &bk) in acc[i..].iter_mut().zip(b_lo) {
            *x += ai * bk;
        }
        for (x, &bk) in acc[..i].iter_mut().zip(b_hi) {
            *x += ai * bk;
        }
    }
    acc.into_iter().map(|c| c % m).collect()
}

/// Products fit in a u64, sums in a u128.
fn cyclic_wide(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let d = a.len();
    let mut acc = vec![0u128; d];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let (b_lo, b_hi) = b.split_at(d - i);
        for (x, &bk) in acc[i..].iter_mut().zip(b_lo) {
            *x += (ai * bk) as u128;
        }
        for (x, &bk) in acc[..i].iter_mut().zip(b_hi) {
            *x += (ai * bk) as u128;
        }
    }
    acc.into_iter().map(|c| (c % m as u128) as u64).collect()
}

fn cyclic_big(a: &[BigUint], b: &[BigUint], m: &BigUint) -> Vec<BigUint> {
    let d = a.len();
    let mut acc = vec![BigUint::zero(); d];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            let j = (i + k) % d;
            acc[j] += ai * bk;
        }
    }
    acc.into_iter().map(|c| c % m).collect()
}

fn schoolbook(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            out[i + k] += ai * bk;
        }
    }
    out
}

/// Full product of integer polynomials (length `a.len() + b.len() - 1`).
fn karatsuba(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n = a.len().max(b.len());
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        return schoolbook(a, b);
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let sum = |x: &[BigUint], y: &[BigUint]| -> Vec<BigUint> {
        (0..x.len().max(y.len()))
            .map(|i| x.get(i).cloned().unwrap_or_default() + y.get(i).cloned().unwrap_or_default())
            .collect()
    };
    let mut z1 = karatsuba(&sum(a0, a1), &sum(b0, b1));
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if !c.is_zero() {
            out[i + h] += c;
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * h] += c;
    }
    out
}

/// Arithmetic in Z/mZ on a raw representation.
trait ModKernel {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }
    fn inv(&self, a: &Self::E) -> Result<Self::E>;
}

struct SmallMod(u64);

impl ModKernel for SmallMod {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        let eg = (*a as i128).extended_gcd(&(self.0 as i128));
        if eg.gcd != 1 {
            return Err(Error::NonInvertible(BigUint::from(eg.gcd as u128)));
        }
        Ok(eg.x.rem_euclid(self.0 as i128) as u64)
    }
}

struct BigMod(BigUint);

impl ModKernel for BigMod {
    type E = BigUint;
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.0
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.0 - (b - a)
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.0
    }
    fn inv(&self, a: &BigUint) -> Result<BigUint> {
        let m = BigInt::from_biguint(Sign::Plus, self.0.clone());
        let eg = BigInt::from_biguint(Sign::Plus, a.clone()).extended_gcd(&m);
        if !eg.gcd.is_one() {
            return Err(Error::NonInvertible(eg.gcd.magnitude().clone()));
        }
        Ok(eg.x.mod_floor(&m).magnitude().clone())
    }
}

fn trim<K: ModKernel>(k: &K, p: &mut Vec<K::E>) {
    while p.last().is_some_and(|c| k.is_zero(c)) {
        p.pop();
    }
}

/// Inverse of `a` in (Z/mZ)[X]/(X^d - 1), `d = a.len()`.
fn poly_inverse_cyclic<K: ModKernel>(k: &K, a: &[K::E]) -> Result<Vec<K::E>> {
    let d = a.len();
    let mut r0: Vec<K::E> = vec![k.zero(); d + 1];
    r0[0] = k.neg(&k.one());
    r0[d] = k.one();
    trim(k, &mut r0);
    let mut r1 = a.to_vec();
    trim(k, &mut r1);
    let mut s0: Vec<K::E> = vec![];
    let mut s1: Vec<K::E> = vec![k.one()];
    loop {
        if r1.is_empty() {
            return Err(Error::NotConvInvertible);
        }
        if r1.len() == 1 {
            let c = k.inv(&r1[0])?;
            let mut out: Vec<K::E> = s1.iter().map(|x| k.mul(x, &c)).collect();
            debug_assert!(out.len() <= d);
            out.resize(d, k.zero());
            return Ok(out);
        }
        let lc_inv = k.inv(r1.last().expect("nonempty"))?;
        // r0 = q r1 + r
        let mut r = r0.clone();
        let mut q = vec![k.zero(); r0.len() - r1.len() + 1];
        while r.len() >= r1.len() {
            let shift = r.len() - r1.len();
            let coef = k.mul(r.last().expect("nonempty"), &lc_inv);
            for (i, c) in r1.iter().enumerate() {
                let t = k.mul(&coef, c);
                r[i + shift] = k.sub(&r[i + shift], &t);
            }
            q[shift] = coef;
            r.pop();
            trim(k, &mut r);
        }
        // s = s0 - q s1
        let mut s = s0.clone();
        s.resize(s.len().max(q.len() + s1.len() - 1), k.zero());
        for (i, qi) in q.iter().enumerate() {
            if k.is_zero(qi) {
                continue;
            }
            for (j, sj) in s1.iter().enumerate() {
                let t = k.mul(qi, sj);
                s[i + j] = k.sub(&s[i + j], &t);
            }
        }
        trim(k, &mut s);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u64) -> ResidueRing {
        ResidueRing::from_u64(n).unwrap()
    }

    fn naive_conv(a: &[i64], b: &[i64], n: i64) -> Vec<i64> {
        let d = a.len();
        (0..d)
            .map(|j| (0..d).map(|i| a[i] * b[(j + d - i) % d]).sum::<i64>().rem_euclid(n))
            .collect()
    }

    #[test]
    fn small_convolution_by_definition() {
        let r = ring(11);
        let a = RingVector::from_i64(&r, &[1, 2, 3]);
        let b = RingVector::from_i64(&r, &[4, 5, 6]);
        assert_eq!(a.conv(&b), RingVector::from_i64(&r, &naive_conv(&[1, 2, 3], &[4, 5, 6], 11)));
        assert_eq!(RingVector::delta(&r, 3, 0).conv(&a), a);
    }

    #[test]
    fn pointwise_and_shift() {
        let r = ring(7);
        let a = RingVector::from_i64(&r, &[1, 2, 3]);
        assert_eq!(a.pointwise(&RingVector::from_i64(&r, &[4, 5, 6])), RingVector::from_i64(&r, &[4, 3, 4]));
        assert_eq!(a.shift(), RingVector::from_i64(&r, &[3, 1, 2]));
        assert_eq!(RingVector::delta(&r, 3, 0).shift(), RingVector::delta(&r, 3, 1));
        assert_eq!(RingVector::constant(&r, 3, &r.one()).pointwise(&a), a);
        assert!(a.pointwise(&RingVector::zero(&r, 3)).is_zero());
    }

    #[test]
    fn trace_vector_inverse_from_the_z101sq_example() {
        let r = ring(10201);
        let e = RingVector::from_i64(&r, &[9428, 6046, 1946, 2596, 2596, 1946, 6046]);
        let e_inv = RingVector::from_i64(&r, &[3392, 3344, 10161, 101, 101, 10161, 3344]);
        assert_eq!(e.conv(&e_inv), RingVector::delta(&r, 7, 0));
        assert_eq!(e.conv_invert().unwrap(), e_inv);
    }

    #[test]
    fn inversion_edge_cases() {
        let r = ring(7);
        assert_eq!(RingVector::delta(&r, 5, 0).conv_invert().unwrap(), RingVector::delta(&r, 5, 0));
        let ones = RingVector::constant(&r, 3, &r.one());
        assert_eq!(ones.conv_invert(), Err(Error::NotConvInvertible));
        let r10 = ring(10);
        let v = RingVector::from_i64(&r10, &[0, 2]);
        assert_eq!(v.conv_invert(), Err(Error::NonInvertible(BigUint::from(2u32))));
    }

    #[test]
    fn big_modulus_path_agrees_with_small_path() {
        let big = ResidueRing::new((BigUint::one() << 89u32) - 1u32).unwrap();
        let a = RingVector::from_i64(&big, &[3, -1, 4, 1, -5, 9, 2]);
        let inv = a.conv_invert().unwrap();
        assert_eq!(a.conv(&inv), RingVector::delta(&big, 7, 0));
        assert_eq!(a.conv(&inv), a.try_conv_karatsuba(&inv).unwrap());
    }

    #[test]
    fn twisted_product() {
        // (x - 1)^2 = x^2 - 2x + 1 = alpha - 2x + 1 in R[x]/(x^2 - alpha)
        let r = ring(101);
        let alpha = r.from_i64(5);
        let a = RingVector::from_i64(&r, &[-1, 1]);
        assert_eq!(a.try_twisted_conv(&a, &alpha).unwrap(), RingVector::from_i64(&r, &[6, -2]));
    }

    #[test]
    fn word_kernels_agree_with_bigint_kernel() {
        use rand::Rng;
        let mut rng = crate::rng::seeded(17);
        // narrow, wide and the overflow-tracking path respectively
        for m in [1009u64, (1 << 31) - 1, (1 << 61) - 1] {
            for d in [1usize, 2, 7, 64, 301] {
                let a: Vec<u64> = (0..d).map(|_| rng.gen_range(0..m)).collect();
                let b: Vec<u64> = (0..d).map(|_| rng.gen_range(0..m)).collect();
                let big = |v: &[u64]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
                let want: Vec<u64> = cyclic_big(&big(&a), &big(&b), &BigUint::from(m)).iter().map(|x| x.to_u64().unwrap()).collect();
                assert_eq!(cyclic_small(&a, &b, m), want, "m = {m}, d = {d}");
            }
        }
    }
}
