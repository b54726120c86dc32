//! Vélu's quotient isogeny E -> E/<T> for a point T of odd order d.

use crate::arith::Residue;
use crate::curve::{CurveCoeffs, Point};
use crate::error::{Error, Result};

/// The multiples kT for 1 <= k < d together with Vélu's sums w4 and w6.
#[derive(Clone, Debug)]
pub struct KernelTable {
    d: usize,
    multiples: Vec<Point>,
    pub w4: Residue,
    pub w6: Residue,
}

impl KernelTable {
    /// Fails with `Invalid` unless T has exact order `d` (odd, at least 3).
    pub fn new(e: &CurveCoeffs, t: &Point, d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::Invalid(format!("kernel order {d} must be odd and at least 3")));
        }
        if !e.verify_exact_order(t, d as u64)? {
            return Err(Error::Invalid(format!("{t} does not have exact order {d}")));
        }
        let mut multiples = Vec::with_capacity(d - 1);
        multiples.push(t.clone());
        for k in 1..d - 1 {
            let next = e.add(&multiples[k - 1], t)?;
            multiples.push(next);
        }
        let ring = e.ring();
        let (mut w4, mut w6) = (ring.zero(), ring.zero());
        for p in &multiples[..(d - 1) / 2] {
            let x = p.xy().0;
            let x2 = x * x;
            w4 = w4 + x2.scale(6) + &e.b2 * x + &e.b4;
            w6 = w6 + (&x2 * x).scale(10) + (&e.b2 * &x2).scale(2) + (&e.b4 * x).scale(3) + &e.b6;
        }
        Ok(KernelTable { d, multiples, w4, w6 })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// kT for any k, reduced mod d; `Infinity` for k = 0 mod d.
    pub fn multiple(&self, k: i64) -> Point {
        let k = k.rem_euclid(self.d as i64) as usize;
        if k == 0 {
            Point::Infinity
        } else {
            self.multiples[k - 1].clone()
        }
    }

    pub fn x(&self, k: i64) -> &Residue {
        let k = k.rem_euclid(self.d as i64) as usize;
        self.multiples[k - 1].xy().0
    }

    pub fn y(&self, k: i64) -> &Residue {
        let k = k.rem_euclid(self.d as i64) as usize;
        self.multiples[k - 1].xy().1
    }

    /// kT for k = 1..d-1 in order.
    pub fn multiples(&self) -> &[Point] {
        &self.multiples
    }
}

/// E' = E/<T>: a1, a2, a3 kept, a4' = a4 - 5 w4, a6' = a6 - b2 w4 - 7 w6.
pub fn velu_codomain(e: &CurveCoeffs, table: &KernelTable) -> Result<CurveCoeffs> {
    let a4 = &e.a4 - table.w4.scale(5);
    let a6 = &e.a6 - &e.b2 * &table.w4 - table.w6.scale(7);
    CurveCoeffs::new(e.ring(), e.a1.clone(), e.a2.clone(), e.a3.clone(), a4, a6)
}

/// Image of P under the isogeny, as the translate sums
/// x' = x(P) + sum_k [x(P + kT) - x(kT)] and likewise for y.
pub fn velu_eval(e: &CurveCoeffs, table: &KernelTable, p: &Point) -> Result<Point> {
    let (x0, y0) = match p {
        Point::Infinity => return Ok(Point::Infinity),
        Point::Affine { x, y } => (x, y),
    };
    let t = table.multiple(1);
    let (mut xs, mut ys) = (x0.clone(), y0.clone());
    let mut q = p.clone();
    for k in 1..table.d {
        q = e.add(&q, &t)?;
        let (xq, yq) = match &q {
            Point::Infinity => return Ok(Point::Infinity),
            Point::Affine { x, y } => (x, y),
        };
        xs = xs + xq - table.x(k as i64);
        ys = ys + yq - table.y(k as i64);
    }
    Ok(Point::affine(xs, ys))
}
