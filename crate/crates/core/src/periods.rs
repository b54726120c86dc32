//! The ring S of elliptic periods: the residue ring of the fiber over A,
//! written in the basis (theta_k) with the convolution-form tensor.

use num_bigint::BigUint;

use crate::arith::ResidueRing;
use crate::basis::{build_context, solve_iota_hat, trace_vector_e, trace_vector_iota, vectors_un_xn, TorsionContext};
use crate::convolution::RingVector;
use crate::curve::{CurveCoeffs, Point};
use crate::error::{Error, Result};

/// Everything the multiplication tensor needs, plus the points it came from.
#[derive(Clone, Debug)]
pub struct PeriodsRing {
    pub ctx: TorsionContext,
    pub a_pt: Point,
    pub m: Point,
    pub e: RingVector,
    pub e_inv: RingVector,
    pub iota: RingVector,
    pub iota_hat: RingVector,
    pub u_n: RingVector,
    pub u_n_inv: RingVector,
    pub ax_n: RingVector,
    a2_iota_hat: RingVector,
}

/// Coordinates of an element of S in the basis (theta_k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodsElement {
    pub coords: RingVector,
}

/// The intermediate vectors of one tensor evaluation.
#[derive(Clone, Debug)]
pub struct TensorTerms {
    /// u_N * alpha.
    pub u_alpha: RingVector,
    /// a^2 x_N * w with w = (alpha - sigma alpha) . (beta - sigma beta).
    pub x_term: RingVector,
    /// u_N^(-1) * ((u_N * alpha) . (u_N * beta) - a^2 x_N * w).
    pub u_term: RingVector,
    /// a^2 iota_hat * w.
    pub iota_term: RingVector,
    pub product: RingVector,
}

/// Maps a failed inversion to the given retry signal unless it exposes a
/// proper factor of n.
fn retry_unless_factor(err: Error, n: &BigUint, retry: Error) -> Error {
    match err {
        Error::NonInvertible(ref g) if err.factor_of(n).is_some() => Error::NonInvertible(g.clone()),
        Error::NonInvertible(_) | Error::NotConvInvertible | Error::Invalid(_) => retry,
        other => other,
    }
}

/// Builds S from (E, T, d) and the evaluation points A on E', M on E.
pub fn build_ring(e: &CurveCoeffs, t: &Point, d: usize, a_pt: &Point, m: &Point) -> Result<PeriodsRing> {
    let ctx = build_context(e, t, d)?;
    build_ring_with(&ctx, a_pt, m)
}

/// As [`build_ring`] but reusing a torsion context, so that retries with
/// fresh A or M do not recompute the kernel tables.
pub fn build_ring_with(ctx: &TorsionContext, a_pt: &Point, m: &Point) -> Result<PeriodsRing> {
    let n = ctx.e.ring().modulus().clone();
    if a_pt.is_infinity() {
        return Err(Error::RetryA);
    }
    let e = trace_vector_e(ctx, a_pt)?;
    let e_inv = e.conv_invert().map_err(|err| retry_unless_factor(err, &n, Error::RetryA))?;
    let iota = trace_vector_iota(ctx, a_pt)?;
    let iota_hat = solve_iota_hat(&e, &iota)?;
    if !ctx.e.contains(m) {
        return Err(Error::NotOnCurve);
    }
    let orbit = vectors_un_xn(ctx, m).map_err(|err| retry_unless_factor(err, &n, Error::RetryM))?;

    let ring = ctx.e.ring();
    let d = ctx.d;
    let delta = RingVector::delta(ring, d, 0);
    let sum = e.residues().into_iter().fold(ring.zero(), |s, v| s + v);
    if e.conv(&e_inv) != delta || orbit.u_n.conv(&orbit.u_n_inv) != delta || e.conv(&iota_hat) != iota || !sum.is_one() {
        return Err(Error::Invalid("periods ring invariants failed".into()));
    }
    let a2 = &ctx.a * &ctx.a;
    Ok(PeriodsRing {
        ctx: ctx.clone(),
        a_pt: a_pt.clone(),
        m: m.clone(),
        a2_iota_hat: iota_hat.scale(&a2),
        e,
        e_inv,
        iota,
        iota_hat,
        u_n: orbit.u_n,
        u_n_inv: orbit.u_n_inv,
        ax_n: orbit.ax_n,
    })
}

impl PeriodsRing {
    pub fn d(&self) -> usize {
        self.ctx.d
    }

    pub fn ring(&self) -> &ResidueRing {
        self.ctx.e.ring()
    }

    pub fn element(&self, coords: RingVector) -> PeriodsElement {
        assert_eq!(coords.len(), self.d(), "element length must match the ring rank");
        PeriodsElement { coords }
    }

    /// The unit: all coordinates 1, since sum_k u_k = 1.
    pub fn one(&self) -> PeriodsElement {
        self.element(RingVector::constant(self.ring(), self.d(), &self.ring().one()))
    }

    pub fn zero(&self) -> PeriodsElement {
        self.element(RingVector::zero(self.ring(), self.d()))
    }

    pub fn theta(&self, k: i64) -> PeriodsElement {
        let k = k.rem_euclid(self.d() as i64) as usize;
        self.element(RingVector::delta(self.ring(), self.d(), k))
    }

    pub fn sigma(&self, a: &PeriodsElement) -> PeriodsElement {
        self.element(a.coords.shift())
    }

    pub fn sigma_pow(&self, a: &PeriodsElement, k: i64) -> PeriodsElement {
        self.element(a.coords.shift_by(k))
    }

    /// The class of x, whose coordinates are iota_hat.
    pub fn x_element(&self) -> PeriodsElement {
        self.element(self.iota_hat.clone())
    }

    pub fn add(&self, a: &PeriodsElement, b: &PeriodsElement) -> PeriodsElement {
        self.element(a.coords.add(&b.coords))
    }

    pub fn sub(&self, a: &PeriodsElement, b: &PeriodsElement) -> PeriodsElement {
        self.element(a.coords.sub(&b.coords))
    }

    pub fn tensor_terms(&self, a: &PeriodsElement, b: &PeriodsElement) -> TensorTerms {
        let (alpha, beta) = (&a.coords, &b.coords);
        let w = alpha.sub(&alpha.shift()).pointwise(&beta.sub(&beta.shift()));
        let u_alpha = self.u_n.conv(alpha);
        let u_beta = if alpha == beta { u_alpha.clone() } else { self.u_n.conv(beta) };
        let x_term = self.ax_n.conv(&w);
        let u_term = self.u_n_inv.conv(&u_alpha.pointwise(&u_beta).sub(&x_term));
        let iota_term = self.a2_iota_hat.conv(&w);
        let product = iota_term.add(&u_term);
        TensorTerms { u_alpha, x_term, u_term, iota_term, product }
    }

    pub fn mul(&self, a: &PeriodsElement, b: &PeriodsElement) -> PeriodsElement {
        self.element(self.tensor_terms(a, b).product)
    }

    /// Left-to-right square and multiply.
    pub fn pow(&self, a: &PeriodsElement, exp: &BigUint) -> PeriodsElement {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}
