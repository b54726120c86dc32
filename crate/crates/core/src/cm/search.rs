//! Parameter search: discriminant, trace, divisor d, then a curve with a
//! point of exact order d.

use std::cell::RefCell;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::arith::factor::{is_probable_prime, small_divisor_search_by};
use crate::arith::{cornacchia, jacobi, ResidueRing};
use crate::curve::{CurveCoeffs, Point};
use crate::error::{Error, Result};

use super::hilbert::HilbertTable;

/// Random points tried per curve before giving up on a discriminant.
pub const TORSION_BUDGET: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmParameters {
    pub disc: u64,
    pub t: BigUint,
    pub eps: i8,
    pub d: u64,
    pub cofactor: BigUint,
}

impl CmParameters {
    /// n + 1 - eps t, the order of the curve we want.
    pub fn order(&self, n: &BigUint) -> BigUint {
        signed_order(n, &self.t, self.eps)
    }
}

fn signed_order(n: &BigUint, t: &BigUint, eps: i8) -> BigUint {
    if eps > 0 {
        n + 1u32 - t
    } else {
        n + 1u32 + t
    }
}

/// Why a discriminant or a divisor was passed over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    NotInTable { disc: u64 },
    NotNorm { disc: u64 },
    Divisor { disc: u64, eps: i8, d: u64, reason: &'static str },
    NoDivisor { disc: u64, eps: i8 },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotInTable { disc } => write!(f, "-{disc}: no class polynomial in table"),
            Rejection::NotNorm { disc } => write!(f, "-{disc}: n is not a norm"),
            Rejection::Divisor { disc, eps, d, reason } => write!(f, "-{disc} eps={eps:+}: d={d} rejected, {reason}"),
            Rejection::NoDivisor { disc, eps } => write!(f, "-{disc} eps={eps:+}: no admissible divisor"),
        }
    }
}

/// Is `-disc` a fundamental discriminant?
pub fn is_fundamental(disc: u64) -> bool {
    let squarefree = |m: u64| (2..).take_while(|p| p * p <= m).all(|p| !m.is_multiple_of(p * p));
    match disc % 4 {
        3 => squarefree(disc),
        0 => {
            let m = disc / 4;
            (m % 4 == 1 || m % 4 == 2) && squarefree(m)
        }
        _ => false,
    }
}

/// Fundamental discriminants 7, 8, 11, 15, ... up to `cap`, i.e. -disc in
/// decreasing order starting at -7.
pub fn fundamental_discriminants(cap: u64) -> impl Iterator<Item = u64> {
    (7..=cap).filter(|&d| is_fundamental(d))
}

/// Search bounds and the bound check a candidate d has to pass.
pub struct SearchRange<'a> {
    pub dmin: u64,
    pub dmax: u64,
    pub disc_cap: u64,
    pub bound: &'a dyn Fn(u64) -> bool,
}

/// The first reason `d` fails, checked in a fixed order.
fn reject_reason(n: &BigUint, order: &BigUint, d: u64, range: &SearchRange<'_>) -> Option<&'static str> {
    let db = BigUint::from(d);
    let forbidden = [n.clone(), n - 1u32, n + 1u32];
    if forbidden.iter().any(|x| !db.gcd(x).is_one()) {
        return Some("shares a factor with n(n-1)(n+1)");
    }
    if !is_probable_prime(&db) {
        return Some("not prime");
    }
    if order / &db < BigUint::from(2u32) {
        return Some("cofactor below 2");
    }
    if !(range.bound)(d) {
        return Some("bound not met");
    }
    None
}

/// Candidates in discriminant order. Each yielded value satisfies every
/// listed condition (re-checked before it is returned). `Err` only carries
/// a factor of n found along the way.
pub fn cm_candidates<'a, R: RngCore + ?Sized>(
    n: &'a BigUint,
    range: &'a SearchRange<'a>,
    table: &'a HilbertTable,
    rng: &'a mut R,
    log: &'a RefCell<Vec<Rejection>>,
) -> impl Iterator<Item = Result<CmParameters>> + 'a {
    fundamental_discriminants(range.disc_cap).flat_map(move |disc| {
        let mut out = Vec::new();
        if !table.contains(disc) {
            log.borrow_mut().push(Rejection::NotInTable { disc });
            return out;
        }
        let (t, _v) = match cornacchia(&BigUint::from(disc), n, &mut *rng) {
            Ok(tv) => tv,
            Err(e) if e.factor_of(n).is_some() => {
                out.push(Err(e));
                return out;
            }
            Err(_) => {
                log.borrow_mut().push(Rejection::NotNorm { disc });
                return out;
            }
        };
        for eps in [1i8, -1] {
            if eps < 0 && t.is_zero() {
                continue;
            }
            let order = signed_order(n, &t, eps);
            let found = small_divisor_search_by(
                &order,
                &BigUint::from(range.dmin),
                &BigUint::from(range.dmax),
                &[],
                |d| {
                    let d = d.to_u64().unwrap();
                    match reject_reason(n, &order, d, range) {
                        Some(reason) => {
                            log.borrow_mut().push(Rejection::Divisor { disc, eps, d, reason });
                            false
                        }
                        None => true,
                    }
                },
            );
            match found {
                Some(d) => {
                    let p = CmParameters { disc, t: t.clone(), eps, cofactor: &order / &d, d: d.to_u64().unwrap() };
                    debug_assert!(check_parameters(n, &p, range).is_ok());
                    out.push(Ok(p));
                }
                None => log.borrow_mut().push(Rejection::NoDivisor { disc, eps }),
            }
        }
        out
    })
}

/// Re-checks every condition on a parameter set.
pub fn check_parameters(n: &BigUint, p: &CmParameters, range: &SearchRange<'_>) -> Result<()> {
    let four_n: BigUint = n << 2u32;
    let t2 = &p.t * &p.t;
    let rest = if t2 <= four_n { &four_n - &t2 } else { return Err(Error::Invalid("t^2 exceeds 4n".into())) };
    let disc = BigUint::from(p.disc);
    let v2 = &rest / &disc;
    if !(&rest % &disc).is_zero() || v2.sqrt().pow(2) != v2 {
        return Err(Error::Invalid("t^2 + disc v^2 = 4n has no solution v".into()));
    }
    let order = p.order(n);
    let d = BigUint::from(p.d);
    if p.d.is_multiple_of(2) || !(&order % &d).is_zero() || order != &d * &p.cofactor || !d.gcd(&p.cofactor).is_one() {
        return Err(Error::Invalid("d is not an odd unitary divisor of n+1-eps t".into()));
    }
    if p.d < range.dmin || p.d > range.dmax {
        return Err(Error::Invalid("d out of range".into()));
    }
    if let Some(reason) = reject_reason(n, &order, p.d, range) {
        return Err(Error::Invalid(format!("d rejected: {reason}")));
    }
    Ok(())
}

/// The first candidate, or `None` when the cap is exhausted.
pub fn find_cm_parameters<R: RngCore + ?Sized>(
    n: &BigUint,
    range: &SearchRange<'_>,
    table: &HilbertTable,
    rng: &mut R,
) -> Result<(Option<CmParameters>, Vec<Rejection>)> {
    let log = RefCell::new(Vec::new());
    let first = cm_candidates(n, range, table, rng, &log).next().transpose()?;
    Ok((first, log.into_inner()))
}

/// y^2 = x^3 + 3k x + 2k with k = j / (1728 - j), which has invariant j.
pub fn curve_from_j(j: &crate::arith::Residue) -> Result<CurveCoeffs> {
    let ring = j.ring();
    if j.is_zero() {
        return Err(Error::Invalid("j = 0 needs a different model".into()));
    }
    let k = j * (ring.from_i64(1728) - j).try_invert().map_err(|e| match e {
        Error::NonInvertible(g) if &g == ring.modulus() => Error::Invalid("j = 1728 needs a different model".into()),
        other => other,
    })?;
    let e = CurveCoeffs::short(ring, k.scale(3), k.scale(2))?;
    if &e.j_invariant() != j {
        return Err(Error::Invalid("constructed curve has the wrong j-invariant".into()));
    }
    Ok(e)
}

/// A non-residue c (Jacobi symbol -1) for twisting.
fn non_residue(ring: &ResidueRing) -> Result<crate::arith::Residue> {
    let n = ring.modulus();
    for c in 2u64..10_000 {
        let cb = BigUint::from(c);
        if &cb >= n {
            break;
        }
        if jacobi(&cb, n) == -1 {
            return Ok(ring.from_u64_value(c));
        }
    }
    Err(Error::BudgetExceeded("non-residue"))
}

/// Finds the curve (E or its twist) of order n + 1 - eps t and a point T of
/// exact order d on it: T = cofactor * P for random P. A point killed by
/// n + 1 + eps t instead says we hold the twist.
pub fn find_torsion_point<R: RngCore + ?Sized>(e: &CurveCoeffs, n: &BigUint, p: &CmParameters, rng: &mut R) -> Result<(CurveCoeffs, Point)> {
    let want = p.order(n);
    let other = signed_order(n, &p.t, -p.eps);
    let mut curve = e.clone();
    let mut twisted = false;
    for _ in 0..TORSION_BUDGET {
        let pt = curve.random_point(rng)?;
        if curve.scalar_mul(&want, &pt)?.is_infinity() {
            let t = curve.scalar_mul(&p.cofactor, &pt)?;
            if !t.is_infinity() && curve.verify_exact_order(&t, p.d)? {
                return Ok((curve, t));
            }
        } else if !twisted && curve.scalar_mul(&other, &pt)?.is_infinity() {
            curve = curve.quadratic_twist(&non_residue(curve.ring())?)?;
            twisted = true;
        }
    }
    Err(Error::BudgetExceeded("torsion point"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::poly::find_root_mod_n;
    use crate::criteria::{check_bound_basic, compute_dmin};
    use crate::rng::seeded;

    fn range_for(n: &BigUint, cap: u64) -> (u64, u64, u64) {
        let dmin = compute_dmin(n);
        (dmin, 3 * dmin, cap)
    }

    #[test]
    fn fundamental_order() {
        let v: Vec<u64> = fundamental_discriminants(60).collect();
        assert_eq!(v, vec![7, 8, 11, 15, 19, 20, 23, 24, 31, 35, 39, 40, 43, 47, 51, 52, 55, 56, 59]);
    }

    #[test]
    fn search_1009() {
        let n = BigUint::from(1009u32);
        let (dmin, dmax, cap) = range_for(&n, 10_000);
        assert_eq!((dmin, dmax), (401, 1203));
        let bound = |d: u64| check_bound_basic(&n, d);
        let range = SearchRange { dmin, dmax, disc_cap: cap, bound: &bound };
        let (p, log) = find_cm_parameters(&n, &range, HilbertTable::embedded(), &mut seeded(0)).unwrap();
        let p = p.unwrap();
        assert_eq!((p.disc, p.t.clone(), p.eps, p.d), (148, BigUint::from(52u32), 1, 479));
        assert_eq!(p.cofactor, BigUint::from(2u32));
        check_parameters(&n, &p, &range).unwrap();
        assert!(log.iter().all(|r| !matches!(r, Rejection::NotInTable { .. })));
        assert!(log.contains(&Rejection::NoDivisor { disc: 7, eps: 1 }) || log.iter().any(|r| matches!(r, Rejection::NotNorm { disc: 7 })));

        let ring = ResidueRing::from_u64(1009).unwrap();
        let j = find_root_mod_n(HilbertTable::embedded().get(148).unwrap(), &ring, &mut seeded(0)).unwrap();
        let e = curve_from_j(&j).unwrap();
        assert_eq!(e.j_invariant(), j);
        let (curve, t) = find_torsion_point(&e, &n, &p, &mut seeded(2)).unwrap();
        assert!(curve.verify_exact_order(&t, 479).unwrap());
    }

    #[test]
    fn tiny_cap_exhausts() {
        let n = BigUint::from(1009u32);
        let bound = |d: u64| check_bound_basic(&n, d);
        let range = SearchRange { dmin: 401, dmax: 1203, disc_cap: 7, bound: &bound };
        let (p, _) = find_cm_parameters(&n, &range, HilbertTable::embedded(), &mut seeded(0)).unwrap();
        assert_eq!(p, None);
    }

    #[test]
    fn curve_from_j_rejects_special_values() {
        let ring = ResidueRing::from_u64(1009).unwrap();
        assert!(curve_from_j(&ring.from_i64(1728)).is_err());
        assert!(curve_from_j(&ring.zero()).is_err());
        let e = curve_from_j(&ring.from_i64(353)).unwrap();
        assert_eq!(e.j_invariant(), ring.from_i64(353));
    }

    #[test]
    fn twist_is_taken_when_needed() {
        // Both sign choices must lead to a curve of the requested order.
        let n = BigUint::from(1009u32);
        let ring = ResidueRing::from_u64(1009).unwrap();
        let e = curve_from_j(&ring.from_i64(353)).unwrap();
        for (eps, d, cof) in [(1i8, 479u64, 2u32), (-1, 59, 18)] {
            let p = CmParameters { disc: 148, t: BigUint::from(52u32), eps, d, cofactor: BigUint::from(cof) };
            let (curve, t) = find_torsion_point(&e, &n, &p, &mut seeded(9)).unwrap();
            assert!(curve.verify_exact_order(&t, d).unwrap());
            let probe = curve.random_point(&mut seeded(1)).unwrap();
            assert!(curve.scalar_mul(&p.order(&n), &probe).unwrap().is_infinity());
        }
    }
}
