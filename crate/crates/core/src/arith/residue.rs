//! The residue ring Z/nZ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Z/nZ for a modulus n >= 2. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    modulus: Arc<BigUint>,
}

impl ResidueRing {
    pub fn new(modulus: BigUint) -> Result<Self> {
        if modulus < BigUint::from(2u32) {
            return Err(Error::Invalid(format!("modulus {modulus} is below 2")));
        }
        Ok(ResidueRing { modulus: Arc::new(modulus) })
    }

    pub fn from_u64(modulus: u64) -> Result<Self> {
        Self::new(BigUint::from(modulus))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// The modulus as a u64 when it fits.
    pub fn small_modulus(&self) -> Option<u64> {
        let digits = self.modulus.to_u64_digits();
        (digits.len() == 1).then(|| digits[0])
    }

    pub fn elem(&self, value: &BigUint) -> Residue {
        let value = if value < &*self.modulus { value.clone() } else { value % &*self.modulus };
        Residue { value, ring: self.clone() }
    }

    pub fn elem_owned(&self, value: BigUint) -> Residue {
        let value = if value < *self.modulus { value } else { value % &*self.modulus };
        Residue { value, ring: self.clone() }
    }

    pub fn from_u64_value(&self, v: u64) -> Residue {
        self.elem_owned(BigUint::from(v))
    }

    pub fn from_i64(&self, v: i64) -> Residue {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Residue {
        let m = BigInt::from_biguint(Sign::Plus, (*self.modulus).clone());
        let r = v.mod_floor(&m);
        Residue { value: r.to_biguint().expect("mod_floor is nonnegative"), ring: self.clone() }
    }

    pub fn zero(&self) -> Residue {
        Residue { value: BigUint::zero(), ring: self.clone() }
    }

    pub fn one(&self) -> Residue {
        self.elem_owned(BigUint::one())
    }
}

impl fmt::Debug for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}Z", self.modulus)
    }
}

/// An element of Z/nZ, stored as its least nonnegative representative.
///
/// The operator impls panic when the operands live in different rings; the
/// `try_*` methods report `RingMismatch` instead.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigUint,
    ring: ResidueRing,
}

impl Residue {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    fn check(&self, other: &Residue) -> Result<()> {
        if Arc::ptr_eq(&self.ring.modulus, &other.ring.modulus) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        let mut v = &self.value + &other.value;
        if v >= *self.ring.modulus {
            v -= &*self.ring.modulus;
        }
        Ok(Residue { value: v, ring: self.ring.clone() })
    }

    pub fn try_sub(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        let v = if self.value >= other.value {
            &self.value - &other.value
        } else {
            &*self.ring.modulus - (&other.value - &self.value)
        };
        Ok(Residue { value: v, ring: self.ring.clone() })
    }

    pub fn try_mul(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(Residue { value: (&self.value * &other.value) % &*self.ring.modulus, ring: self.ring.clone() })
    }

    /// Division `self / other`, failing like [`Residue::try_invert`].
    pub fn try_div(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(self * &other.try_invert()?)
    }

    /// Multiplication by a signed machine integer.
    pub fn scale(&self, k: i64) -> Residue {
        self * &self.ring.from_i64(k)
    }

    /// Inverse modulo n. On failure the error carries `gcd(value, n)`.
    pub fn try_invert(&self) -> Result<Residue> {
        let m = BigInt::from_biguint(Sign::Plus, (*self.ring.modulus).clone());
        let a = BigInt::from_biguint(Sign::Plus, self.value.clone());
        let eg = a.extended_gcd(&m);
        if !eg.gcd.is_one() {
            return Err(Error::NonInvertible(eg.gcd.magnitude().clone()));
        }
        Ok(self.ring.from_bigint(&eg.x))
    }

    /// Binary exponentiation with `0^0 = 1`.
    pub fn pow(&self, e: &BigUint) -> Residue {
        Residue { value: self.value.modpow(e, &self.ring.modulus), ring: self.ring.clone() }
    }

    pub fn pow_u64(&self, e: u64) -> Residue {
        self.pow(&BigUint::from(e))
    }

    pub fn square(&self) -> Residue {
        self * self
    }

    /// Representative in (-n/2, n/2].
    pub fn to_signed(&self) -> BigInt {
        let half = &*self.ring.modulus >> 1u32;
        if self.value > half {
            BigInt::from_biguint(Sign::Plus, self.value.clone())
                - BigInt::from_biguint(Sign::Plus, (*self.ring.modulus).clone())
        } else {
            BigInt::from_biguint(Sign::Plus, self.value.clone())
        }
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Residue> for &Residue {
            type Output = Residue;
            fn $method(self, rhs: &Residue) -> Residue {
                self.$try(rhs).expect("residue ring mismatch")
            }
        }
        impl $tr<Residue> for &Residue {
            type Output = Residue;
            fn $method(self, rhs: Residue) -> Residue {
                self.$try(&rhs).expect("residue ring mismatch")
            }
        }
        impl $tr<&Residue> for Residue {
            type Output = Residue;
            fn $method(self, rhs: &Residue) -> Residue {
                self.$try(rhs).expect("residue ring mismatch")
            }
        }
        impl $tr<Residue> for Residue {
            type Output = Residue;
            fn $method(self, rhs: Residue) -> Residue {
                self.$try(&rhs).expect("residue ring mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        if self.value.is_zero() {
            self.clone()
        } else {
            Residue { value: &*self.ring.modulus - &self.value, ring: self.ring.clone() }
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        -&self
    }
}
