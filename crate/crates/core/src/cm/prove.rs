//! End to end: screens, parameter search, curve, ring, criterion.

use std::cell::RefCell;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::arith::{is_perfect_power, trial_division, ResidueRing};
use crate::basis::{build_context, TorsionContext};
use crate::criteria::{
    check_bound_basic, check_bound_strong, compute_dmin, compute_dmin_strong, elliptic_aks_check, finalize,
    strong_elliptic_check, CheckOutcome, StrongContext, Verdict,
};
use crate::curve::{CurveCoeffs, Point};
use crate::error::{Error, Result};
use crate::periods::{build_ring_with, PeriodsRing};
use crate::rng::{derived, SeededRng};

use super::certificate::{Certificate, CriterionKind};
use super::hilbert::HilbertTable;
use super::poly::find_root_mod_n;
use super::search::{cm_candidates, curve_from_j, find_torsion_point, CmParameters, SearchRange};

/// Attempts at drawing a usable pair (A, M).
pub const AM_BUDGET: u32 = 16;

#[derive(Clone, Debug)]
pub struct ProveConfig {
    pub criterion: CriterionKind,
    pub seed: u64,
    pub disc_cap: u64,
    pub dmax_mult: u64,
    /// Trial division only screens for composites; it never proves anything
    /// unless n is too small for any curve to carry a large enough d.
    pub trial_bound: u64,
    /// Strong criterion below d = 2001: exercises the mechanics, never proves.
    pub force_small_d: bool,
    /// Replacement Hilbert table; the embedded one when `None`.
    pub table: Option<HilbertTable>,
}

impl Default for ProveConfig {
    fn default() -> Self {
        ProveConfig {
            criterion: CriterionKind::Basic,
            seed: 0,
            disc_cap: 10_000,
            dmax_mult: 3,
            trial_bound: 1000,
            force_small_d: false,
            table: None,
        }
    }
}

impl ProveConfig {
    pub fn table(&self) -> &HilbertTable {
        self.table.as_ref().unwrap_or_else(|| HilbertTable::embedded())
    }
}

/// What `prove_prime` found, with a human-readable trail of the stages.
#[derive(Clone, Debug)]
pub struct ProveReport {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    pub params: Option<CmParameters>,
    /// The step that decided the verdict.
    pub stage: &'static str,
    pub trail: Vec<String>,
}

impl ProveReport {
    fn done(verdict: Verdict, stage: &'static str, trail: Vec<String>) -> Self {
        ProveReport { verdict, certificate: None, params: None, stage, trail }
    }
}

/// The generator that draws (A, M) on attempt `k`. Keyed by the curve
/// rather than T: the codomain only depends on the subgroup generated by T,
/// and a re-derivation with T' = mT has to reuse the same A.
pub fn am_stream(seed: u64, e: &CurveCoeffs, d: u64, k: u32) -> SeededRng {
    let mut keys: Vec<Vec<u8>> = vec![e.ring().modulus().to_bytes_le(), d.to_le_bytes().to_vec()];
    keys.extend(e.coefficients().iter().map(|c| c.value().to_bytes_le()));
    keys.push(k.to_le_bytes().to_vec());
    let refs: Vec<&[u8]> = keys.iter().map(|k| k.as_slice()).collect();
    derived(seed, "AM", &refs)
}

/// The pair (A, M) drawn on attempt `k`: A on the codomain, then M on E.
pub fn draw_a_and_m(ctx: &TorsionContext, seed: u64, k: u32) -> Result<(Point, Point)> {
    let mut rng = am_stream(seed, &ctx.e, ctx.d as u64, k);
    let a = ctx.codomain.random_point(&mut rng)?;
    let m = ctx.e.random_point(&mut rng)?;
    Ok((a, m))
}

/// Draws (A, M) until the ring can be built. Returns the ring and the
/// attempt index that worked.
pub fn choose_a_and_m(ctx: &TorsionContext, seed: u64) -> Result<(PeriodsRing, u32)> {
    for k in 0..AM_BUDGET {
        let (a, m) = draw_a_and_m(ctx, seed, k)?;
        match build_ring_with(ctx, &a, &m) {
            Ok(s) => return Ok((s, k)),
            Err(Error::RetryA | Error::RetryM | Error::NotOnCurve) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExceeded("choice of A and M"))
}

/// Runs the configured criterion on a built ring.
pub fn run_criterion(s: &PeriodsRing, n: &BigUint, kind: CriterionKind, force: bool) -> Result<CheckOutcome> {
    Ok(match kind {
        CriterionKind::Basic => elliptic_aks_check(s, n),
        CriterionKind::Strong => strong_elliptic_check(s, &StrongContext::new(s)?, n, force),
    })
}

/// Full trial division up to sqrt(n); only used when n is too small for the
/// criterion to apply.
fn decide_by_trial_division(n: &BigUint) -> Verdict {
    let r = n.sqrt().to_u64().unwrap_or(u64::MAX);
    match trial_division(n, r) {
        Some(p) if &p < n => Verdict::composite(p, n),
        _ => Verdict::ProvenPrime,
    }
}

enum Attempt {
    Next(String),
    Stop(ProveReport),
}

pub fn prove_prime(n: &BigUint, cfg: &ProveConfig) -> ProveReport {
    let mut trail = Vec::new();
    let two = BigUint::from(2u32);
    if n < &two {
        return ProveReport::done(Verdict::Inconclusive(format!("{n} is below 2")), "input", trail);
    }
    if n == &two {
        return ProveReport::done(Verdict::ProvenPrime, "input", vec!["2 is prime".into()]);
    }
    if let Some(p) = trial_division(n, cfg.trial_bound) {
        if &p < n {
            trail.push(format!("trial division found {p}"));
            return ProveReport::done(Verdict::composite(p, n), "trial division", trail);
        }
    }
    if let Some((b, k)) = is_perfect_power(n) {
        trail.push(format!("n = {b}^{k}"));
        return ProveReport::done(Verdict::composite(b, n), "perfect power", trail);
    }
    let strong = cfg.criterion == CriterionKind::Strong;
    let dmin = if strong && !cfg.force_small_d { compute_dmin_strong(n) } else { compute_dmin(n) };
    let dmax = dmin.saturating_mul(cfg.dmax_mult.max(1));
    trail.push(format!("dmin = {dmin}, dmax = {dmax}"));

    // Every curve over Z/nZ with n prime has at most n + 1 + 2 sqrt(n) points.
    if n + 1u32 + (n.sqrt() + 1u32) * 2u32 < BigUint::from(dmin) {
        trail.push("n too small for the criterion; decided by trial division".into());
        return ProveReport::done(decide_by_trial_division(n), "small n", trail);
    }

    let bound = |d: u64| match cfg.criterion {
        CriterionKind::Basic => check_bound_basic(n, d),
        CriterionKind::Strong => cfg.force_small_d || check_bound_strong(n, d),
    };
    let range = SearchRange { dmin, dmax, disc_cap: cfg.disc_cap, bound: &bound };
    let mut rng = derived(cfg.seed, "search", &[&n.to_bytes_le()]);
    let log = RefCell::new(Vec::new());
    let mut found = None;
    for cand in cm_candidates(n, &range, cfg.table(), &mut rng, &log) {
        let p = match cand {
            Ok(p) => p,
            Err(e) => {
                trail.push(format!("search: {e}"));
                found = Some(ProveReport::done(Verdict::from_error(&e, n), "search", vec![]));
                break;
            }
        };
        trail.push(format!("candidate disc -{} t {} eps {:+} d {}", p.disc, p.t, p.eps, p.d));
        match attempt(n, cfg, &p, &mut trail) {
            Attempt::Stop(mut rep) => {
                rep.params = Some(p);
                found = Some(rep);
                break;
            }
            Attempt::Next(why) => trail.push(format!("  abandoned: {why}")),
        }
    }
    let skipped = log.into_inner();
    trail.push(format!("{} discriminants or divisors passed over", skipped.len()));
    trail.extend(skipped.iter().take(8).map(|r| format!("  skipped {r}")));
    if let Some(mut rep) = found {
        trail.append(&mut rep.trail);
        rep.trail = trail;
        return rep;
    }
    trail.push(format!("no candidate with |disc| <= {}", cfg.disc_cap));
    ProveReport::done(Verdict::Inconclusive("exhausted: no usable discriminant under the cap; enlarge --disc-cap".into()), "search", trail)
}

/// Turns an error into a composite verdict when it carries a factor.
fn factor_or_next(e: Error, n: &BigUint, stage: &'static str) -> Attempt {
    match e.factor_of(n) {
        Some(g) => Attempt::Stop(ProveReport::done(Verdict::composite(g.clone(), n), stage, vec![format!("  {stage}: factor {g}")])),
        None => Attempt::Next(format!("{stage}: {e}")),
    }
}

fn attempt(n: &BigUint, cfg: &ProveConfig, p: &CmParameters, trail: &mut Vec<String>) -> Attempt {
    let ring = match ResidueRing::new(n.clone()) {
        Ok(r) => r,
        Err(e) => return Attempt::Next(e.to_string()),
    };
    let seed = cfg.seed;
    let mut rng = derived(seed, "curve", &[&n.to_bytes_le(), &p.disc.to_le_bytes()]);
    let h = match cfg.table().get(p.disc) {
        Ok(h) => h,
        Err(e) => return Attempt::Next(e.to_string()),
    };
    let j = match find_root_mod_n(h, &ring, &mut rng) {
        Ok(j) => j,
        Err(e) => return factor_or_next(e, n, "class polynomial root"),
    };
    trail.push(format!("  j = {j}"));
    let (curve, t) = match curve_from_j(&j).and_then(|e| find_torsion_point(&e, n, p, &mut rng)) {
        Ok(x) => x,
        Err(e) => return factor_or_next(e, n, "torsion point"),
    };
    trail.push(format!("  E: {curve}, T = {t}"));
    let kind = cfg.criterion;
    let force = cfg.force_small_d && kind == CriterionKind::Strong;

    let (s, outcome) = match ring_and_check(&curve, &t, p.d, n, seed, kind, force) {
        Ok(x) => x,
        Err(e) => return factor_or_next(e, n, "ring"),
    };
    let shift = match (&outcome.verdict, outcome.shift) {
        (Verdict::ProvenPrimePower { .. }, Some(m)) => m,
        (Verdict::BoundNotMet, Some(m)) if force => {
            trail.push(format!("  forced run: congruence holds with shift {m}; not a proof"));
            return Attempt::Stop(ProveReport::done(Verdict::BoundNotMet, "criterion", vec![]));
        }
        (v, _) => {
            trail.push(format!("  criterion: {v}"));
            return Attempt::Stop(ProveReport::done(v.clone(), "criterion", vec![]));
        }
    };

    // theta_0^n = theta_m: the same ring with T' = m T gives shift 1.
    let (s, t) = if shift == 1 {
        (s, t)
    } else {
        trail.push(format!("  shift {shift}; re-deriving with T' = {shift} T"));
        let t2 = match curve.mul_i64(shift as i64, &t) {
            Ok(t2) => t2,
            Err(e) => return factor_or_next(e, n, "shifted point"),
        };
        let rebuilt = build_context(&curve, &t2, p.d as usize)
            .and_then(|ctx| build_ring_with(&ctx, &s.a_pt, &s.m))
            .and_then(|s2| Ok((run_criterion(&s2, n, kind, force)?, s2)));
        match rebuilt {
            Ok((o2, s2)) if o2.shift == Some(1) && o2.verdict.is_proof() => (s2, t2),
            Ok((o2, _)) => {
                let v = Verdict::Inconclusive(format!("re-derivation with T' = mT gave {} (shift {:?})", o2.verdict, o2.shift));
                return Attempt::Stop(ProveReport::done(v, "shift re-derivation", vec![]));
            }
            Err(e) => return factor_or_next(e, n, "shifted ring"),
        }
    };
    let verdict = finalize(Verdict::pending(n), n);
    let cert = Certificate::from_ring(&s, p.disc, kind, seed);
    debug_assert!(s.ctx.t == t);
    Attempt::Stop(ProveReport { verdict, certificate: Some(cert), params: None, stage: "criterion", trail: vec![] })
}

fn ring_and_check(
    curve: &CurveCoeffs,
    t: &Point,
    d: u64,
    n: &BigUint,
    seed: u64,
    kind: CriterionKind,
    force: bool,
) -> Result<(PeriodsRing, CheckOutcome)> {
    if !d.gcd(&2).is_one() {
        return Err(Error::Invalid("even d".into()));
    }
    let ctx = build_context(curve, t, d as usize)?;
    let (s, _) = choose_a_and_m(&ctx, seed)?;
    let outcome = run_criterion(&s, n, kind, force)?;
    Ok((s, outcome))
}
