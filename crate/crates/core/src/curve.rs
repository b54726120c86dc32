//! Long Weierstrass curves y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
//! over Z/nZ, with affine points plus the point at infinity.
//!
//! Projective coordinates are avoided on purpose: every slope denominator is
//! inverted explicitly so that a zero divisor shows up as a factor of n.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::RngCore;

use crate::arith::{sqrt_mod, Residue, ResidueRing};
use crate::error::{Error, Result};

/// Attempts at drawing an x coordinate with a square right-hand side.
pub const RANDOM_POINT_BUDGET: usize = 256;

#[derive(Clone, PartialEq, Eq)]
pub struct CurveCoeffs {
    ring: ResidueRing,
    pub a1: Residue,
    pub a2: Residue,
    pub a3: Residue,
    pub a4: Residue,
    pub a6: Residue,
    pub b2: Residue,
    pub b4: Residue,
    pub b6: Residue,
    pub b8: Residue,
    pub disc: Residue,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: Residue, y: Residue },
}

impl Point {
    pub fn affine(x: Residue, y: Residue) -> Point {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&Residue> {
        match self {
            Point::Affine { x, .. } => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&Residue> {
        match self {
            Point::Affine { y, .. } => Some(y),
            Point::Infinity => None,
        }
    }

    /// Coordinates, panicking at infinity.
    pub fn xy(&self) -> (&Residue, &Residue) {
        match self {
            Point::Affine { x, y } => (x, y),
            Point::Infinity => panic!("point at infinity has no affine coordinates"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl CurveCoeffs {
    /// Builds the curve, failing with `NonInvertible(g)` unless the
    /// discriminant is a unit.
    pub fn new(ring: &ResidueRing, a1: Residue, a2: Residue, a3: Residue, a4: Residue, a6: Residue) -> Result<Self> {
        let b2 = &a1 * &a1 + a2.scale(4);
        let b4 = &a1 * &a3 + a4.scale(2);
        let b6 = &a3 * &a3 + a6.scale(4);
        let b8 = &a1 * &a1 * &a6 + (&a2 * &a6).scale(4) - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let disc = -(&b2 * &b2 * &b8) - (&b4 * &b4 * &b4).scale(8) - (&b6 * &b6).scale(27) + (&b2 * &b4 * &b6).scale(9);
        match disc.try_invert() {
            Ok(_) => {}
            Err(Error::NonInvertible(g)) if &g == ring.modulus() => return Err(Error::SingularCurve),
            Err(e) => return Err(e),
        }
        Ok(CurveCoeffs { ring: ring.clone(), a1, a2, a3, a4, a6, b2, b4, b6, b8, disc })
    }

    /// Coefficients given as `[a1, a2, a3, a4, a6]`.
    pub fn from_i64(ring: &ResidueRing, a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(|v| ring.from_i64(v));
        Self::new(ring, a1, a2, a3, a4, a6)
    }

    pub fn short(ring: &ResidueRing, a4: Residue, a6: Residue) -> Result<Self> {
        Self::new(ring, ring.zero(), ring.zero(), ring.zero(), a4, a6)
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn coefficients(&self) -> [&Residue; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn is_short(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero() && self.a3.is_zero()
    }

    /// j = c4^3 / disc with c4 = b2^2 - 24 b4.
    pub fn j_invariant(&self) -> Residue {
        let c4 = &self.b2 * &self.b2 - self.b4.scale(24);
        let inv = self.disc.try_invert().expect("discriminant checked at construction");
        &c4 * &c4 * &c4 * inv
    }

    /// Right-hand side minus left-hand side of the equation at (x, y).
    fn equation(&self, x: &Residue, y: &Residue) -> Residue {
        let lhs = y * y + &self.a1 * x * y + &self.a3 * y;
        let rhs = x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6;
        rhs - lhs
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => x.ring() == &self.ring && y.ring() == &self.ring && self.equation(x, y).is_zero(),
        }
    }

    /// The affine point (x, y), checked against the equation.
    pub fn point(&self, x: Residue, y: Residue) -> Result<Point> {
        let p = Point::affine(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn point_i64(&self, x: i64, y: i64) -> Result<Point> {
        self.point(self.ring.from_i64(x), self.ring.from_i64(y))
    }

    /// -(x, y) = (x, -y - a1 x - a3).
    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(x.clone(), -y - &self.a1 * x - &self.a3),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        let (x1, y1) = match p {
            Point::Infinity => return Ok(q.clone()),
            Point::Affine { x, y } => (x, y),
        };
        let (x2, y2) = match q {
            Point::Infinity => return Ok(p.clone()),
            Point::Affine { x, y } => (x, y),
        };
        let lambda = if x1 == x2 {
            let s = y1 + y2 + &self.a1 * x2 + &self.a3;
            if s.is_zero() {
                return Ok(Point::Infinity);
            }
            if y1 != y2 {
                // Equal x but neither equal nor opposite points: modulo each
                // prime one of the two holds, so y1 - y2 is a zero divisor.
                return Err(match (y1 - y2).try_invert() {
                    Err(e) => e,
                    Ok(_) => Error::NotOnCurve,
                });
            }
            let num = (x1 * x1).scale(3) + (&self.a2 * x1).scale(2) + &self.a4 - &self.a1 * y1;
            num * s.try_invert()?
        } else {
            (y2 - y1) * (x2 - x1).try_invert()?
        };
        let x3 = &lambda * &lambda + &self.a1 * &lambda - &self.a2 - x1 - x2;
        let y3 = &lambda * (x1 - &x3) - y1 - &self.a1 * &x3 - &self.a3;
        Ok(Point::affine(x3, y3))
    }

    /// Slope of the line through `p` and `q`: the chord when the x
    /// coordinates differ, the tangent when `p == q`.
    ///
    /// Opposite points have no finite slope and give a usage error.
    pub fn slope(&self, p: &Point, q: &Point) -> Result<Residue> {
        let (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) = (p, q) else {
            return Err(Error::Invalid("slope through the point at infinity".into()));
        };
        if x1 != x2 {
            return Ok((y2 - y1) * (x2 - x1).try_invert()?);
        }
        if y1 != y2 {
            if (y1 + y2 + &self.a1 * x2 + &self.a3).is_zero() {
                return Err(Error::Invalid("slope through opposite points".into()));
            }
            return Err(match (y1 - y2).try_invert() {
                Err(e) => e,
                Ok(_) => Error::NotOnCurve,
            });
        }
        let s = y1.scale(2) + &self.a1 * x1 + &self.a3;
        let num = (x1 * x1).scale(3) + (&self.a2 * x1).scale(2) + &self.a4 - &self.a1 * y1;
        Ok(num * s.try_invert()?)
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Result<Point> {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &Point) -> Result<Point> {
        self.add(p, p)
    }

    /// k P by double-and-add, most significant bit first.
    pub fn scalar_mul(&self, k: &BigUint, p: &Point) -> Result<Point> {
        let mut acc = Point::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.double(&acc)?;
            if k.bit(i) {
                acc = self.add(&acc, p)?;
            }
        }
        Ok(acc)
    }

    pub fn mul_i64(&self, k: i64, p: &Point) -> Result<Point> {
        let q = self.scalar_mul(&BigUint::from(k.unsigned_abs()), p)?;
        Ok(if k < 0 { self.neg(&q) } else { q })
    }

    /// OK iff kT is affine for 1 <= k < d and dT = O.
    ///
    /// Returns `Ok(false)` for a wrong order and `Err(NonInvertible(g))` when
    /// some addition hits a zero divisor.
    pub fn verify_exact_order(&self, t: &Point, d: u64) -> Result<bool> {
        if t.is_infinity() || !self.contains(t) {
            return Ok(false);
        }
        let mut q = t.clone();
        for k in 2..=d {
            q = self.add(&q, t)?;
            if q.is_infinity() != (k == d) {
                return Ok(false);
            }
        }
        Ok(d >= 2 || q.is_infinity())
    }

    /// Value of the division polynomial psi_k at the affine point `p`.
    pub fn division_poly(&self, k: u64, p: &Point) -> Result<Residue> {
        let mut memo = HashMap::new();
        self.psi(k, p, &mut memo)
    }

    fn psi(&self, k: u64, p: &Point, memo: &mut HashMap<u64, Residue>) -> Result<Residue> {
        if let Some(v) = memo.get(&k) {
            return Ok(v.clone());
        }
        let (x, y) = p.xy();
        let v = match k {
            0 => self.ring.zero(),
            1 => self.ring.one(),
            2 => y.scale(2) + &self.a1 * x + &self.a3,
            3 => self.psi3_at(x),
            4 => {
                let psi2 = self.psi(2, p, memo)?;
                let x2 = x * x;
                let x3 = &x2 * x;
                let inner = (&x3 * &x3).scale(2)
                    + &self.b2 * &x3 * &x2
                    + (&self.b4 * &x2 * &x2).scale(5)
                    + (&self.b6 * &x3).scale(10)
                    + (&self.b8 * &x2).scale(10)
                    + (&self.b2 * &self.b8 - &self.b4 * &self.b6) * x
                    + &self.b4 * &self.b8
                    - &self.b6 * &self.b6;
                psi2 * inner
            }
            _ if k % 2 == 1 => {
                let m = (k - 1) / 2;
                let a = self.psi(m + 2, p, memo)?;
                let b = self.psi(m, p, memo)?;
                let c = self.psi(m - 1, p, memo)?;
                let d = self.psi(m + 1, p, memo)?;
                a * &b * &b * &b - c * &d * &d * &d
            }
            _ => {
                let m = k / 2;
                let pm = self.psi(m, p, memo)?;
                let p2 = self.psi(2, p, memo)?;
                let a = self.psi(m + 2, p, memo)?;
                let b = self.psi(m - 1, p, memo)?;
                let c = self.psi(m - 2, p, memo)?;
                let d = self.psi(m + 1, p, memo)?;
                pm * p2.try_invert()? * (a * &b * &b - c * &d * &d)
            }
        };
        memo.insert(k, v.clone());
        Ok(v)
    }

    /// psi_3(x) = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8.
    pub fn psi3_at(&self, x: &Residue) -> Residue {
        let x2 = x * x;
        (&x2 * &x2).scale(3) + &self.b2 * &x2 * x + (&self.b4 * &x2).scale(3) + (&self.b6 * x).scale(3) + &self.b8
    }

    /// psi-hat_3(x) = 4x^3 + b2 x^2 + 2 b4 x + b6.
    pub fn psi3_hat_at(&self, x: &Residue) -> Residue {
        let x2 = x * x;
        (&x2 * x).scale(4) + &self.b2 * &x2 + (&self.b4 * x).scale(2) + &self.b6
    }

    /// A random affine point: a uniform x, then a square root after
    /// completing the square in y.
    pub fn random_point<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<Point> {
        let n = self.ring.modulus();
        let half = self.ring.from_i64(2).try_invert()?;
        for _ in 0..RANDOM_POINT_BUDGET {
            let x = self.ring.elem_owned(rng.gen_biguint_below(n));
            let h = (&self.a1 * &x + &self.a3) * &half;
            let rhs = &x * &x * &x + &self.a2 * &x * &x + &self.a4 * &x + &self.a6 + &h * &h;
            match sqrt_mod(&rhs, rng) {
                Ok(z) => {
                    let z = if rng.next_u32() & 1 == 1 { -z } else { z };
                    let p = Point::affine(x, z - h);
                    debug_assert!(self.contains(&p));
                    return Ok(p);
                }
                Err(Error::NoSquareRoot) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::BudgetExceeded("random point"))
    }

    /// y^2 = x^3 + a4 c^2 x + a6 c^3 for a short curve.
    pub fn quadratic_twist(&self, c: &Residue) -> Result<CurveCoeffs> {
        if !self.is_short() {
            return Err(Error::Invalid("quadratic twist needs a short Weierstrass curve".into()));
        }
        let c2 = c * c;
        Self::short(&self.ring, &self.a4 * &c2, &self.a6 * &c2 * c)
    }

    /// All points, by exhausting x and y. Only for tiny moduli.
    pub fn enumerate_points(&self) -> Vec<Point> {
        let n = self.ring.modulus();
        assert!(n <= &BigUint::from(10_000u32), "enumeration only for tiny moduli");
        let mut out = vec![Point::Infinity];
        let mut x = BigUint::zero();
        while &x < n {
            let mut y = BigUint::zero();
            while &y < n {
                let p = Point::affine(self.ring.elem(&x), self.ring.elem(&y));
                if self.contains(&p) {
                    out.push(p);
                }
                y += BigUint::one();
            }
            x += BigUint::one();
        }
        out
    }
}

impl fmt::Debug for CurveCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}, {}] over {:?}",
            self.a1, self.a2, self.a3, self.a4, self.a6, self.ring
        )
    }
}

impl fmt::Display for CurveCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lhs = String::from("y^2");
        if !self.a1.is_zero() {
            lhs += &format!(" + {}xy", self.a1);
        }
        if !self.a3.is_zero() {
            lhs += &format!(" + {}y", self.a3);
        }
        let mut rhs = String::from("x^3");
        if !self.a2.is_zero() {
            rhs += &format!(" + {}x^2", self.a2);
        }
        if !self.a4.is_zero() {
            rhs += &format!(" + {}x", self.a4);
        }
        if !self.a6.is_zero() {
            rhs += &format!(" + {}", self.a6);
        }
        write!(f, "{lhs} = {rhs}")
    }
}
