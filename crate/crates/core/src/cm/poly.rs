//! Dense polynomials over Z/nZ, just enough to find roots of class
//! polynomials.

use num_bigint::{BigInt, BigUint, RandBigInt};
use rand::RngCore;

use crate::arith::{Residue, ResidueRing};
use crate::error::{Error, Result};

/// Random splitting attempts per factor before giving up.
pub const SPLIT_BUDGET: usize = 64;

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: ResidueRing,
    c: Vec<Residue>,
}

impl Poly {
    pub fn new(ring: &ResidueRing, mut c: Vec<Residue>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { ring: ring.clone(), c }
    }

    /// From integer coefficients given leading coefficient first.
    pub fn from_integers_high_first(ring: &ResidueRing, coeffs: &[BigInt]) -> Self {
        Poly::new(ring, coeffs.iter().rev().map(|x| ring.from_bigint(x)).collect())
    }

    pub fn x(ring: &ResidueRing) -> Self {
        Poly::new(ring, vec![ring.zero(), ring.one()])
    }

    pub fn constant(ring: &ResidueRing, v: Residue) -> Self {
        Poly::new(ring, vec![v])
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[Residue] {
        &self.c
    }

    pub fn eval(&self, x: &Residue) -> Residue {
        self.c.iter().rev().fold(self.ring.zero(), |acc, a| acc * x + a)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let len = self.c.len().max(o.c.len());
        let z = self.ring.zero();
        let c = (0..len).map(|i| self.c.get(i).unwrap_or(&z) - o.c.get(i).unwrap_or(&z)).collect();
        Poly::new(&self.ring, c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(&self.ring, vec![]);
        }
        let mut c = vec![self.ring.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + a * b;
            }
        }
        Poly::new(&self.ring, c)
    }

    /// Remainder modulo `m`; the leading coefficient of `m` must be a unit.
    pub fn rem(&self, m: &Poly) -> Result<Poly> {
        let lead_inv = m.c.last().ok_or_else(|| Error::Invalid("division by the zero polynomial".into()))?.try_invert()?;
        let mut r = self.c.clone();
        let dm = m.c.len() - 1;
        while r.len() > dm {
            let top = r.pop().unwrap() * &lead_inv;
            let shift = r.len() - dm;
            for (k, mk) in m.c[..dm].iter().enumerate() {
                r[shift + k] = &r[shift + k] - &top * mk;
            }
            while r.last().is_some_and(|x| x.is_zero()) && r.len() > dm {
                r.pop();
            }
        }
        Ok(Poly::new(&self.ring, r))
    }

    pub fn monic(&self) -> Result<Poly> {
        let inv = self.c.last().ok_or_else(|| Error::Invalid("zero polynomial".into()))?.try_invert()?;
        Ok(Poly::new(&self.ring, self.c.iter().map(|a| a * &inv).collect()))
    }

    /// Monic gcd; fails with `NonInvertible` when a leading coefficient is a
    /// zero divisor.
    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// self^e mod m.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let base = self.rem(m)?;
        let mut acc = Poly::constant(&self.ring, self.ring.one()).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m)?;
            if e.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Polynomial division by a monic divisor.
    fn div_exact(&self, m: &Poly) -> Result<Poly> {
        let lead_inv = m.c.last().unwrap().try_invert()?;
        let mut r = self.c.clone();
        let dm = m.c.len() - 1;
        if r.len() <= dm {
            return Ok(Poly::new(&self.ring, vec![]));
        }
        let mut q = vec![self.ring.zero(); r.len() - dm];
        while r.len() > dm {
            let top = r.pop().unwrap() * &lead_inv;
            let shift = r.len() - dm;
            for (k, mk) in m.c[..dm].iter().enumerate() {
                r[shift + k] = &r[shift + k] - &top * mk;
            }
            q[shift] = top;
        }
        Ok(Poly::new(&self.ring, q))
    }
}

/// All roots of `f` in Z/nZ, assuming n is an odd prime: the split part
/// gcd(X^n - X, f) is broken up by random equal-degree splitting. The result
/// is sorted and every root is verified by evaluation, so for composite n
/// the answer may be incomplete but never wrong.
pub fn roots_mod_n<R: RngCore + ?Sized>(f: &Poly, rng: &mut R) -> Result<Vec<Residue>> {
    let ring = f.ring.clone();
    let n = ring.modulus().clone();
    if f.degree() < 1 {
        return Err(Error::NoRoot);
    }
    let f = f.monic()?;
    let x = Poly::x(&ring);
    let g = x.pow_mod(&n, &f)?.sub(&x).gcd(&f)?;
    let g = if g.is_zero() { f.clone() } else { g };
    let mut stack = vec![g];
    let mut roots = Vec::new();
    let half: BigUint = (&n - 1u32) >> 1;
    while let Some(h) = stack.pop() {
        match h.degree() {
            d if d < 1 => continue,
            1 => {
                roots.push(-&h.c[0]);
                continue;
            }
            _ => {}
        }
        let mut split = false;
        for _ in 0..SPLIT_BUDGET {
            let a = ring.elem_owned(rng.gen_biguint_below(&n));
            let shifted = Poly::new(&ring, vec![a, ring.one()]);
            let t = shifted.pow_mod(&half, &h)?.sub(&Poly::constant(&ring, ring.one()));
            let g1 = t.gcd(&h)?;
            if g1.degree() > 0 && g1.degree() < h.degree() {
                let g2 = h.div_exact(&g1)?;
                stack.push(g1);
                stack.push(g2);
                split = true;
                break;
            }
        }
        if !split {
            return Err(Error::BudgetExceeded("root splitting"));
        }
    }
    roots.retain(|r| f.eval(r).is_zero());
    roots.sort_by(|a, b| a.value().cmp(b.value()));
    roots.dedup();
    if roots.is_empty() {
        Err(Error::NoRoot)
    } else {
        Ok(roots)
    }
}

/// The smallest root of H modulo n (coefficients leading first).
pub fn find_root_mod_n<R: RngCore + ?Sized>(h: &[BigInt], ring: &ResidueRing, rng: &mut R) -> Result<Residue> {
    let f = Poly::from_integers_high_first(ring, h);
    if f.degree() == 1 {
        let r = -&f.c[0] * f.c[1].try_invert()?;
        return Ok(r);
    }
    Ok(roots_mod_n(&f, rng)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::hilbert::HilbertTable;
    use crate::rng::seeded;

    #[test]
    fn root_of_h148_mod_1009() {
        let ring = ResidueRing::from_u64(1009).unwrap();
        let h = HilbertTable::embedded().get(148).unwrap();
        let f = Poly::from_integers_high_first(&ring, h);
        let roots = roots_mod_n(&f, &mut seeded(1)).unwrap();
        assert!(roots.contains(&ring.from_i64(353)));
        assert!(f.eval(&ring.from_i64(353)).is_zero());
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn linear_entry_is_negated_constant() {
        let ring = ResidueRing::from_u64(1009).unwrap();
        let h = HilbertTable::embedded().get(7).unwrap();
        assert_eq!(find_root_mod_n(h, &ring, &mut seeded(0)).unwrap(), ring.from_i64(-3375));
    }

    #[test]
    fn roots_match_exhaustive_search() {
        let ring = ResidueRing::from_u64(101).unwrap();
        let mut rng = seeded(4);
        // (x-3)(x-5)(x-50)(x^2+1): x^2+1 has roots mod 101 (101 = 1 mod 4)
        let lin = |r: i64| Poly::new(&ring, vec![ring.from_i64(-r), ring.one()]);
        let f = lin(3).mul(&lin(5)).mul(&lin(50)).mul(&Poly::new(&ring, vec![ring.one(), ring.zero(), ring.one()]));
        let got = roots_mod_n(&f, &mut rng).unwrap();
        let brute: Vec<Residue> = (0..101).map(|v| ring.from_i64(v)).filter(|v| f.eval(v).is_zero()).collect();
        assert_eq!(got, brute);
        // x^2 + 2 has no root mod 5
        let ring = ResidueRing::from_u64(5).unwrap();
        let g = Poly::new(&ring, vec![ring.from_i64(2), ring.zero(), ring.one()]);
        assert_eq!(roots_mod_n(&g, &mut rng), Err(Error::NoRoot));
    }
}
