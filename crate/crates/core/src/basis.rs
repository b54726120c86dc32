//! The elliptic normal basis u_k = a u_{kT,(k+1)T} + b attached to a point T
//! of odd order d, and the trace vectors used to multiply in it.
//!
//! Naming: `xs(k)`, `ys(k)` are the coordinates of kT, `gamma_step(k)` is
//! Gamma_{k,k+1}, `c(k)` is the trace of u_{O,kT}. The pair (a, b) is the
//! normalization forcing sum_k u_k = 1.

use crate::arith::Residue;
use crate::convolution::RingVector;
use crate::curve::{CurveCoeffs, Point};
use crate::error::{Error, Result};
use crate::velu::{velu_codomain, KernelTable};

/// Gamma(A, B, C) = (y(C-A) - y(A-B)) / (x(C-A) - x(A-B)).
///
/// When C - A and A - B coincide the quotient is read as the tangent slope,
/// which is its value by continuity (the line through the two points).
pub fn gamma(e: &CurveCoeffs, a: &Point, b: &Point, c: &Point) -> Result<Residue> {
    if a == b || b == c || a == c {
        return Err(Error::Invalid("gamma needs pairwise distinct points".into()));
    }
    let p = e.sub(c, a)?;
    let q = e.sub(a, b)?;
    e.slope(&p, &q)
}

#[derive(Clone, Debug)]
pub struct TorsionContext {
    pub e: CurveCoeffs,
    pub t: Point,
    pub d: usize,
    pub kernel: KernelTable,
    pub codomain: CurveCoeffs,
    gammas: Vec<Residue>,
    gamma1: Vec<Residue>,
    c: Vec<Residue>,
    sum_x: Residue,
    sum_y: Residue,
    pub a: Residue,
    pub b: Residue,
}

/// Precomputes the kernel, E', the Gamma_{k,k+1}, the c_k and the
/// normalization (a, b).
///
/// a = 1/c1, b = 0 when c1 is a unit; a = 1, b = (1 - c1)/d when c1 = 0. A
/// nonzero c1 sharing a factor with n is reported as `NonInvertible`.
pub fn build_context(e: &CurveCoeffs, t: &Point, d: usize) -> Result<TorsionContext> {
    let kernel = KernelTable::new(e, t, d)?;
    let codomain = velu_codomain(e, &kernel)?;
    let ring = e.ring();
    let dd = d as i64;

    // Gamma(O, kT, lT) is the slope through lT and -kT.
    let gamma_kl = |k: i64, l: i64| e.slope(&kernel.multiple(l), &e.neg(&kernel.multiple(k)));
    let gammas = (1..dd - 1).map(|k| gamma_kl(k, k + 1)).collect::<Result<Vec<_>>>()?;
    let gamma1 = (2..dd).map(|k| gamma_kl(1, k)).collect::<Result<Vec<_>>>()?;

    let c1 = gammas.iter().fold(ring.zero(), |acc, g| acc + g) - &e.a1;
    let mut c = vec![c1.clone()];
    for k in 1..d - 1 {
        let next = &c[k - 1] + &c1 - gammas[k - 1].scale(dd);
        c.push(next);
    }

    let (a, b) = match c1.try_invert() {
        Ok(inv) => (inv, ring.zero()),
        Err(Error::NonInvertible(g)) if &g == ring.modulus() => {
            (ring.one(), (ring.one() - &c1) * ring.from_i64(dd).try_invert()?)
        }
        Err(err) => return Err(err),
    };

    let sum_x = kernel.multiples().iter().fold(ring.zero(), |acc, p| acc + p.xy().0);
    let sum_y = kernel.multiples().iter().fold(ring.zero(), |acc, p| acc + p.xy().1);
    Ok(TorsionContext {
        e: e.clone(),
        t: t.clone(),
        d,
        kernel,
        codomain,
        gammas,
        gamma1,
        c,
        sum_x,
        sum_y,
        a,
        b,
    })
}

impl TorsionContext {
    /// Gamma_{k,k+1} for 1 <= k <= d-2.
    pub fn gamma_step(&self, k: usize) -> &Residue {
        &self.gammas[k - 1]
    }

    /// Gamma_{1,k} for 2 <= k <= d-1.
    pub fn gamma_one(&self, k: usize) -> &Residue {
        &self.gamma1[k - 2]
    }

    pub fn gammas(&self) -> &[Residue] {
        &self.gammas
    }

    /// c_k for 1 <= k <= d-1.
    pub fn c(&self, k: usize) -> &Residue {
        &self.c[k - 1]
    }

    pub fn cs(&self) -> &[Residue] {
        &self.c
    }

    fn xs(&self, k: usize) -> &Residue {
        self.kernel.x(k as i64)
    }

    fn ys(&self, k: usize) -> &Residue {
        self.kernel.y(k as i64)
    }

    fn affine_on_codomain<'p>(&self, p: &'p Point) -> Result<(&'p Residue, &'p Residue)> {
        match p {
            Point::Affine { x, y } if self.codomain.contains(p) => Ok((x, y)),
            _ => Err(Error::NotOnCurve),
        }
    }

    /// Tr(U_0 U_k) at A, before the (a, b) rescaling.
    pub fn traces_u0u(&self, a_pt: &Point) -> Result<Vec<Residue>> {
        let (xp, _) = self.affine_on_codomain(a_pt)?;
        let (e, d) = (&self.e, self.d);
        let dd = d as i64;
        let c1 = self.c(1);
        let mut tr = Vec::with_capacity(d);
        tr.push(xp.scale(2) + (self.xs(1) + &e.a2).scale(dd) - &e.a1 * c1 + self.sum_x.scale(2));
        let g = self.gamma_one(d - 1);
        let pm1 = -xp + (g * c1).scale(2) + (&e.a1 * g - &e.a2).scale(dd) - self.xs(1).scale(2 * dd) - &self.sum_x;
        tr.push(pm1.clone());
        for k in 2..d - 1 {
            let v = self.gamma_one(k + 1) * (self.c(k + 1) - c1) - self.gamma_one(k) * (self.c(k) - c1)
                + (self.xs(k + 1) - self.xs(k)).scale(dd)
                + self.gamma_step(k) * c1;
            tr.push(v);
        }
        tr.push(pm1);
        Ok(tr)
    }

    /// Tr(x U_k) at A, before rescaling.
    pub fn traces_xu(&self, a_pt: &Point) -> Result<Vec<Residue>> {
        let (xp, yp) = self.affine_on_codomain(a_pt)?;
        let (e, d) = (&self.e, self.d);
        let dd = d as i64;
        let s = xp + &self.sum_x;
        let (x1, y1, c1) = (self.xs(1), self.ys(1), self.c(1));
        let mut tr = Vec::with_capacity(d);
        tr.push(yp + x1 * c1 + (y1 + &e.a1 * x1 + &e.a3).scale(dd) + &self.sum_y);
        for k in 1..d - 1 {
            let dx = self.xs(k + 1) - self.xs(k);
            let v = self.gamma_step(k) * &s + self.xs(k + 1) * self.c(k + 1) - self.xs(k) * self.c(k)
                + (self.ys(k + 1) - self.ys(k) + &e.a1 * dx).scale(dd);
            tr.push(v);
        }
        tr.push(-yp - &e.a1 * xp + x1 * c1 + (y1 + &e.a1 * x1).scale(dd) - &self.sum_y - &e.a1 * &self.sum_x);
        Ok(tr)
    }
}

/// e_k = Tr(u_0 u_k)(A) = a^2 Tr(U_0 U_k)(A) + b^2 d + 2 a b c1.
pub fn trace_vector_e(ctx: &TorsionContext, a_pt: &Point) -> Result<RingVector> {
    let tr = ctx.traces_u0u(a_pt)?;
    let a2 = &ctx.a * &ctx.a;
    let shift = (&ctx.b * &ctx.b).scale(ctx.d as i64) + (&ctx.a * &ctx.b * ctx.c(1)).scale(2);
    let coords: Vec<Residue> = tr.iter().map(|t| &a2 * t + &shift).collect();
    Ok(RingVector::from_residues(ctx.e.ring(), &coords))
}

/// iota_k = Tr(x u_k)(A) = a Tr(x U_k)(A) + b (x(A) + sum_l x(lT)).
pub fn trace_vector_iota(ctx: &TorsionContext, a_pt: &Point) -> Result<RingVector> {
    let tr = ctx.traces_xu(a_pt)?;
    let (xp, _) = ctx.affine_on_codomain(a_pt)?;
    let shift = &ctx.b * &(xp + &ctx.sum_x);
    let coords: Vec<Residue> = tr.iter().map(|t| &ctx.a * t + &shift).collect();
    Ok(RingVector::from_residues(ctx.e.ring(), &coords))
}

/// The coordinates of x in the basis (u_k): e^(-1) * iota.
pub fn solve_iota_hat(e: &RingVector, iota: &RingVector) -> Result<RingVector> {
    e.conv_invert()?.try_conv(iota)
}

/// u_0(P) = a (y(P) - y(-T)) / (x(P) - x(T)) + b, for P off the poles O, T.
pub fn eval_u0(ctx: &TorsionContext, p: &Point) -> Result<Residue> {
    if p.is_infinity() || p == &ctx.t {
        return Err(Error::Invalid(format!("u_0 has a pole at {p}")));
    }
    let s = ctx.e.slope(p, &ctx.e.neg(&ctx.t))?;
    Ok(&ctx.a * &s + &ctx.b)
}

/// Values along the orbit M + kT.
#[derive(Clone, Debug)]
pub struct OrbitVectors {
    pub u_n: RingVector,
    pub u_n_inv: RingVector,
    /// a^2 x_N.
    pub ax_n: RingVector,
}

/// u_N = (u_0(M + kT))_k, its convolution inverse, and a^2 (x(M + kT))_k.
///
/// `NotConvInvertible` means M is unusable and should be resampled.
pub fn vectors_un_xn(ctx: &TorsionContext, m: &Point) -> Result<OrbitVectors> {
    let t = &ctx.t;
    let a2 = &ctx.a * &ctx.a;
    let mut q = m.clone();
    let mut us = Vec::with_capacity(ctx.d);
    let mut xs = Vec::with_capacity(ctx.d);
    for k in 0..ctx.d {
        if k > 0 {
            q = ctx.e.add(&q, t)?;
        }
        if q.is_infinity() {
            return Err(Error::Invalid("M lies in <T>".into()));
        }
        us.push(eval_u0(ctx, &q)?);
        xs.push(&a2 * q.xy().0);
    }
    let ring = ctx.e.ring();
    let u_n = RingVector::from_residues(ring, &us);
    let u_n_inv = u_n.conv_invert()?;
    Ok(OrbitVectors { u_n, u_n_inv, ax_n: RingVector::from_residues(ring, &xs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ResidueRing;
    use crate::rng::seeded;

    fn f7() -> TorsionContext {
        let e = CurveCoeffs::from_i64(&ResidueRing::from_u64(7).unwrap(), [1, 3, 5, 3, 2]).unwrap();
        let t = e.point_i64(3, 1).unwrap();
        build_context(&e, &t, 5).unwrap()
    }

    fn z101() -> TorsionContext {
        let ring = ResidueRing::from_u64(10201).unwrap();
        let e = CurveCoeffs::from_i64(&ring, [0, 0, 0, 55, 91]).unwrap();
        let t = e.point_i64(659, 8304).unwrap();
        build_context(&e, &t, 7).unwrap()
    }

    fn vec(ctx: &TorsionContext, v: &[i64]) -> RingVector {
        RingVector::from_i64(ctx.e.ring(), v)
    }

    fn ints(ctx: &TorsionContext, v: &[i64]) -> Vec<Residue> {
        v.iter().map(|&x| ctx.e.ring().from_i64(x)).collect()
    }

    #[test]
    fn gamma_examples() {
        for (ctx, want) in [(f7(), 2), (z101(), 5780)] {
            let t2 = ctx.e.double(&ctx.t).unwrap();
            let g = gamma(&ctx.e, &Point::Infinity, &ctx.t, &t2).unwrap();
            assert_eq!(g, ctx.e.ring().from_i64(want));
        }
    }

    #[test]
    fn gamma_antisymmetry() {
        let ring = ResidueRing::from_u64(1009).unwrap();
        let e = CurveCoeffs::from_i64(&ring, [1, 0, 0, 364, 907]).unwrap();
        let mut rng = seeded(5);
        for _ in 0..20 {
            let [a, b, c] = [0; 3].map(|_| e.random_point(&mut rng).unwrap());
            let lhs = gamma(&e, &a, &b, &c).unwrap() + gamma(&e, &b, &a, &c).unwrap();
            assert_eq!(lhs, -&e.a1);
        }
    }

    #[test]
    fn context_fixtures() {
        let ctx = f7();
        assert_eq!(ctx.gammas(), ints(&ctx, &[2, 0, 2]).as_slice());
        assert_eq!(ctx.cs(), ints(&ctx, &[3, 3, 6, 6]).as_slice());
        let ctx = z101();
        assert_eq!(ctx.gammas(), ints(&ctx, &[5780, 4390, 3596, 4390, 5780]).as_slice());
        assert_eq!(ctx.cs(), ints(&ctx, &[3534, 7412, 618, 9583, 2789, 6667]).as_slice());
        assert_eq!(ctx.a, ctx.e.ring().from_i64(6665));
        assert!(ctx.b.is_zero());
    }

    #[test]
    fn normalization_and_recursion() {
        for ctx in [f7(), z101()] {
            let one = &ctx.a * ctx.c(1) + ctx.b.scale(ctx.d as i64);
            assert!(one.is_one());
            let c2 = ctx.c(1).scale(2) - ctx.gamma_step(1).scale(ctx.d as i64);
            assert_eq!(&c2, ctx.c(2));
        }
    }

    #[test]
    fn f7_e_vector_and_closed_forms() {
        let ctx = f7();
        let a = ctx.codomain.point_i64(4, 2).unwrap();
        let r = ctx.e.ring();
        let tr = ctx.traces_u0u(&a).unwrap();
        // 2x' + 5(3+3) - 1*3 + 2(3+4+4+3)
        assert_eq!(tr[0], r.from_i64(2 * 4 + 5 * 6 - 3 + 2 * 14));
        let trx = ctx.traces_xu(&a).unwrap();
        // y' + 3*3 + 5(1+1*3+5) + (1+0+5+5)
        assert_eq!(trx[0], r.from_i64(2 + 9 + 5 * 9 + 11));
        // a = 1/c1 = 5 mod 7 (not 3); the e vector still comes out as printed.
        assert_eq!(ctx.a, r.from_i64(5));
        let e = trace_vector_e(&ctx, &a).unwrap();
        assert_eq!(e, vec(&ctx, &[0, 4, 0, 0, 4]));
    }

    #[test]
    fn z101_trace_vectors() {
        let ctx = z101();
        let a = ctx.codomain.point_i64(1373, 1956).unwrap();
        let e = trace_vector_e(&ctx, &a).unwrap();
        assert_eq!(e, vec(&ctx, &[9428, 6046, 1946, 2596, 2596, 1946, 6046]));
        assert_eq!(e.conv_invert().unwrap(), vec(&ctx, &[3392, 3344, 10161, 101, 101, 10161, 3344]));
        let iota = trace_vector_iota(&ctx, &a).unwrap();
        assert_eq!(iota, vec(&ctx, &[10063, 4509, 6660, 4259, 6660, 4509, 138]));
        let hat = solve_iota_hat(&e, &iota).unwrap();
        assert_eq!(hat, vec(&ctx, &[7790, 6555, 2470, 2741, 4358, 2047, 636]));
        assert_eq!(e.conv(&hat), iota);
    }

    #[test]
    fn e_sums_to_one_and_is_symmetric() {
        for (ctx, a) in [(f7(), (4, 2)), (z101(), (1373, 1956))] {
            let a = ctx.codomain.point_i64(a.0, a.1).unwrap();
            let e = trace_vector_e(&ctx, &a).unwrap();
            let sum = e.residues().into_iter().fold(ctx.e.ring().zero(), |s, v| s + v);
            assert!(sum.is_one());
            for k in 0..ctx.d as i64 {
                assert_eq!(e.get(k), e.get(-k));
            }
        }
    }

    #[test]
    fn z101_orbit_vectors() {
        let ctx = z101();
        let m = ctx.e.point_i64(8903, 4033).unwrap();
        let o = vectors_un_xn(&ctx, &m).unwrap();
        assert_eq!(o.u_n, vec(&ctx, &[1029, 7201, 10176, 1807, 4875, 3261, 2255]));
        assert_eq!(o.u_n_inv, vec(&ctx, &[7790, 1761, 3889, 6998, 5866, 1090, 3210]));
        assert_eq!(o.ax_n, vec(&ctx, &[2742, 2044, 649, 2348, 7216, 9732, 7464]));
        let n = crate::velu::velu_eval(&ctx.e, &ctx.kernel, &m).unwrap();
        assert!(trace_vector_e(&ctx, &n).unwrap().conv_invert().is_ok());
    }

    #[test]
    fn u0_poles_and_f7_formula() {
        let ctx = f7();
        assert!(matches!(eval_u0(&ctx, &ctx.t), Err(Error::Invalid(_))));
        assert!(matches!(eval_u0(&ctx, &Point::Infinity), Err(Error::Invalid(_))));
        let r = ctx.e.ring();
        let mut checked = 0;
        for p in ctx.e.enumerate_points() {
            let Point::Affine { x, y } = &p else { continue };
            let den = x + r.from_i64(4);
            if den.is_zero() {
                continue;
            }
            let want = &ctx.a * &((y + r.from_i64(2)) * den.try_invert().unwrap());
            assert_eq!(eval_u0(&ctx, &p).unwrap(), want);
            checked += 1;
        }
        assert!(checked >= 5);
    }

    #[test]
    fn iota_hat_of_delta_is_iota() {
        let ctx = z101();
        let iota = vec(&ctx, &[1, 2, 3, 4, 5, 6, 7]);
        let delta = RingVector::delta(ctx.e.ring(), 7, 0);
        assert_eq!(solve_iota_hat(&delta, &iota).unwrap(), iota);
    }
}
