//! Runtime self-test: the acceptance items that need nothing beyond the
//! library. The integration test target `acceptance` is the full version;
//! the random identity suite and the polynomial-model oracle live there.

use std::fmt;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;

use crate::arith::ResidueRing;
use crate::basis::build_context;
use crate::cm::{prove_prime, verify_certificate, Certificate, CriterionKind, ProveConfig};
use crate::convolution::RingVector;
use crate::criteria::{berrizbeitia_check, check_bound_strong, finalize, strong_congruence, strong_elliptic_check, StrongContext, Verdict};
use crate::curve::CurveCoeffs;
use crate::demo::{fixture_ring, run_demo};
use crate::interval::{decimal, rat, Interval};
use crate::lattice;
use crate::periods::{build_ring_with, PeriodsElement, PeriodsRing};
use crate::rng::{seeded, SeededRng};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug)]
pub struct Line {
    pub criterion: u32,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        write!(f, "criterion {:>2}: {tag}  {}", self.criterion, self.detail)
    }
}

type Check = std::result::Result<String, String>;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn is_prime_small(n: u64) -> bool {
    n >= 2 && (2..).take_while(|i| i * i <= n).all(|i| !n.is_multiple_of(i))
}

fn demo(name: &str) -> std::result::Result<(), String> {
    let rep = run_demo(name).map_err(|e| e.to_string())?;
    match rep.first_mismatch() {
        None => Ok(()),
        Some(r) => Err(format!("{}: expected {}, got {}", r.name, r.expected, r.got)),
    }
}

fn fixtures(name: &str) -> Check {
    let start = Instant::now();
    demo(name)?;
    Ok(format!("{name} fixture matches ({:.2?})", start.elapsed()))
}

fn n1009() -> Check {
    demo("n1009")?;
    let rep = prove_prime(&big(1009), &ProveConfig::default());
    match (&rep.verdict, &rep.certificate) {
        (Verdict::ProvenPrime, Some(c)) if c.d == "479" => Ok("n1009 fixture matches, prove 1009 gives d = 479".into()),
        _ => Err(format!("prove 1009: {}", rep.verdict)),
    }
}

fn soundness(quick: bool) -> Check {
    let limit = if quick { 2000 } else { 10_000 };
    let mut inputs: Vec<u64> = (9..limit).step_by(2).filter(|&n| !is_prime_small(n)).collect();
    inputs.extend([561, 1105, 1729, 10201, 1009 * 1013]);
    let screened = ProveConfig { trial_bound: 10, ..ProveConfig::default() };
    for cfg in [ProveConfig::default(), screened] {
        for &n in &inputs {
            let v = prove_prime(&big(n), &cfg).verdict;
            if v.is_proof() {
                return Err(format!("{n} certified: {v}"));
            }
        }
    }
    Ok(format!("{} composites below {limit} and the named ones, none certified", inputs.len()))
}

fn completeness(quick: bool) -> Check {
    let step = if quick { 10 } else { 1 };
    let primes: Vec<u64> = (1001..5000).filter(|&n| is_prime_small(n)).step_by(step).collect();
    let mut proven = 0;
    for &p in &primes {
        match prove_prime(&big(p), &ProveConfig::default()).verdict {
            Verdict::ProvenPrime => proven += 1,
            Verdict::Inconclusive(r) if r.starts_with("exhausted") => {}
            other => return Err(format!("{p}: {other}")),
        }
    }
    if proven * 100 < primes.len() * 95 {
        return Err(format!("{proven} of {} proven", primes.len()));
    }
    Ok(format!("{proven} of {} primes in (1000, 5000) proven", primes.len()))
}

fn trace_identities() -> Check {
    for name in ["f7", "z101sq", "n1009"] {
        let s = fixture_ring(name).map_err(|e| e.to_string())?;
        let ring = s.ring();
        let sum = s.e.residues().into_iter().fold(ring.zero(), |a, v| a + v);
        if !sum.is_one() {
            return Err(format!("{name}: sum e != 1"));
        }
        if (0..s.d() as i64).any(|k| s.e.get(k) != s.e.get(-k)) {
            return Err(format!("{name}: e is not symmetric"));
        }
        if s.e.conv(&s.iota_hat) != s.iota {
            return Err(format!("{name}: e * iota_hat != iota"));
        }
    }
    Ok("trace-vector identities on the fixture rings (random identity suite: test target `properties`)".into())
}

fn random_element(s: &PeriodsRing, rng: &mut SeededRng) -> PeriodsElement {
    let n = s.ring().modulus().clone();
    s.element(RingVector::new(s.ring(), (0..s.d()).map(|_| rng.gen_biguint_below(&n)).collect()))
}

fn ring_axioms(s: &PeriodsRing, triples: usize, rng: &mut SeededRng) -> std::result::Result<(), String> {
    let one = s.one();
    for _ in 0..triples {
        let [a, b, c] = [0; 3].map(|_| random_element(s, rng));
        if s.mul(&a, &b) != s.mul(&b, &a) || s.mul(&s.mul(&a, &b), &c) != s.mul(&a, &s.mul(&b, &c)) || s.mul(&one, &a) != a {
            return Err("ring axiom fails".into());
        }
        if s.sigma(&s.mul(&a, &b)) != s.mul(&s.sigma(&a), &s.sigma(&b)) || s.sigma_pow(&a, s.d() as i64) != a {
            return Err("sigma is not an automorphism of order d".into());
        }
    }
    let theta = s.theta(0);
    if (1..s.d() as i64).any(|k| s.sigma_pow(&theta, k) == theta) {
        return Err("sigma has order below d".into());
    }
    Ok(())
}

/// A ring over F_p with d = 5 or 7 from the first suitable y^2 = x^3 + x + b.
fn small_ring(p: u64) -> Option<PeriodsRing> {
    let ring = ResidueRing::from_u64(p).ok()?;
    for b in 1..p as i64 {
        let Ok(e) = CurveCoeffs::from_i64(&ring, [0, 0, 0, 1, b]) else { continue };
        let pts = e.enumerate_points();
        let n = pts.len() as u64;
        let Some(d) = [7u64, 5].into_iter().find(|d| n.is_multiple_of(*d) && n / d >= 2) else { continue };
        let Some(t) = pts.iter().map(|q| e.mul_i64((n / d) as i64, q).unwrap()).find(|q| !q.is_infinity()) else { continue };
        let ctx = build_context(&e, &t, d as usize).ok()?;
        for a in ctx.codomain.enumerate_points().iter().skip(1) {
            for m in pts.iter().skip(1) {
                if let Ok(s) = build_ring_with(&ctx, a, m) {
                    return Some(s);
                }
            }
        }
    }
    None
}

fn axioms() -> Check {
    let mut rng = seeded(7);
    for name in ["f7", "z101sq"] {
        ring_axioms(&fixture_ring(name).map_err(|e| e.to_string())?, 200, &mut rng).map_err(|e| format!("{name}: {e}"))?;
    }
    for p in [101u64, 103, 107, 109, 113] {
        let s = small_ring(p).ok_or(format!("no ring over F_{p}"))?;
        ring_axioms(&s, 200, &mut rng).map_err(|e| format!("F_{p}: {e}"))?;
    }
    Ok("2 fixture rings and 5 rings over small prime fields, 200 triples each".into())
}

fn berrizbeitia() -> Check {
    let n = big(727);
    let ring = ResidueRing::from_u64(727).map_err(|e| e.to_string())?;
    let alpha = (2..727).map(|a| ring.from_i64(a)).find(|a| !a.pow_u64(66).is_one()).ok_or("no alpha")?;
    let v = berrizbeitia_check(&n, 121, &alpha);
    if !matches!(v, Verdict::ProvenPrimePower { .. }) || finalize(v.clone(), &n) != Verdict::ProvenPrime {
        return Err(format!("727: {v}"));
    }
    let r15 = ResidueRing::from_u64(15).map_err(|e| e.to_string())?;
    for d in [2u64, 7, 14] {
        if (0..15).any(|a| berrizbeitia_check(&big(15), d, &r15.from_i64(a)).is_proof()) {
            return Err(format!("15 certified with d = {d}"));
        }
    }
    Ok("727 proven with d = 121, 15 never certified".into())
}

fn appendix() -> Check {
    let start = Instant::now();
    if let Some(d) = (3..=99usize).step_by(2).find(|&d| lattice::unit_lattice_det(d) != d.into()) {
        return Err(format!("determinant at d = {d}"));
    }
    for d in [3u64, 5, 7, 9] {
        if lattice::count_sd_dp(d) != big(lattice::enumerate_counts(d).0) {
            return Err(format!("count_Sd at d = {d}"));
        }
    }
    if let Some(d) = [5u64, 9, 13].into_iter().find(|&d| lattice::count_sd_beta_formula(d) != lattice::count_sd_beta_dp(d)) {
        return Err(format!("restricted count at d = {d}"));
    }
    if !lattice::log_at_least(&lattice::count_sd(2001), "1.74498", 2001) {
        return Err("ln #S_2001 < 1.74498 * 2001".into());
    }
    for d in (3..=15u64).step_by(2) {
        if lattice::count_j_exact(d).map_err(|e| e.to_string())? < lattice::count_i(d) / (d * d) {
            return Err(format!("#J < #I/d^2 at d = {d}"));
        }
    }
    if let Some(d) = (1..=30).find(|&d| !lattice::robbins_sandwich(d)) {
        return Err(format!("Robbins at d = {d}"));
    }
    let b = lattice::beta();
    let parts = [b.clone(), b.clone(), Interval::from_i64(1).sub(&b.scale(&rat(2, 1)))];
    let (lo, _) = lattice::entropy_bounds(&parts, 2001).map_err(|e| e.to_string())?;
    if lo < decimal("1.07658") {
        return Err("three-part entropy bound below 1.07658".into());
    }
    Ok(format!("determinants, counts, Robbins, entropy constant ({:.2?})", start.elapsed()))
}

fn strong(quick: bool) -> Check {
    let s = small_ring(101).ok_or("no ring over F_101")?;
    let n = big(101);
    let ctx = StrongContext::new(&s).map_err(|e| e.to_string())?;
    let out = strong_elliptic_check(&s, &ctx, &n, true);
    if !matches!(out.shift, Some(l) if l.gcd(&s.d()) == 1) || out.verdict.is_proof() {
        return Err("forced strong congruence on F_101".into());
    }
    let mut bad = s.clone();
    let mut c = bad.u_n_inv.coords().to_vec();
    c[0] += 1u32;
    bad.u_n_inv = RingVector::new(bad.ring(), c);
    let bad_ctx = StrongContext::new(&bad).map_err(|e| e.to_string())?;
    if strong_congruence(&bad, &bad_ctx, &n).is_some() {
        return Err("congruence holds for a corrupted tensor".into());
    }
    if check_bound_strong(&n, 1999) || !check_bound_strong(&(big(1) << 32), 2001) {
        return Err("strong bound boundary".into());
    }
    if quick {
        return Ok("mechanics only (full run proves a 30-bit prime)".into());
    }
    let start = Instant::now();
    let cfg = ProveConfig { criterion: CriterionKind::Strong, ..ProveConfig::default() };
    let rep = prove_prime(&big(1_000_000_007), &cfg);
    match (&rep.verdict, &rep.certificate) {
        (Verdict::ProvenPrime, Some(c)) if verify_certificate(c) => {
            Ok(format!("mechanics, and 1000000007 proven with d = {} ({:.2?})", c.d, start.elapsed()))
        }
        _ => Err(format!("1000000007: {}", rep.verdict)),
    }
}

fn certificates() -> Check {
    let cfg = ProveConfig::default();
    let cert = prove_prime(&big(1009), &cfg).certificate.ok_or("no certificate")?;
    let parsed = Certificate::from_json(&cert.to_json()).map_err(|e| e.to_string())?;
    if !verify_certificate(&parsed) {
        return Err("round trip fails".into());
    }
    let bump = |s: &str| (s.parse::<u64>().unwrap() + 1).to_string();
    let mut variants = Vec::new();
    for i in 0..2 {
        for f in 0..3 {
            let mut c = cert.clone();
            let slot = [&mut c.t, &mut c.a, &mut c.m_point].into_iter().nth(f).unwrap();
            slot[i] = bump(&slot[i]);
            variants.push(c);
        }
    }
    let mut c = cert.clone();
    c.n = bump(&c.n);
    variants.push(c);
    let mut c = cert.clone();
    c.seed = bump(&c.seed);
    variants.push(c);
    let mut c = cert.clone();
    c.curve[4] = bump(&c.curve[4]);
    variants.push(c);
    if variants.iter().any(verify_certificate) {
        return Err("a tampered certificate verifies".into());
    }
    let again = prove_prime(&big(1009), &cfg).certificate.ok_or("no certificate")?;
    if again.to_json() != cert.to_json() {
        return Err("rerun differs".into());
    }
    Ok(format!("round trip, {} tampers rejected, byte-identical rerun", variants.len()))
}

/// Runs every item in order. `quick` shrinks the two batteries and skips
/// the 30-bit strong proof.
pub fn run_selftest(quick: bool) -> Vec<Line> {
    let line = |criterion, r: Check| match r {
        Ok(detail) => Line { criterion, status: Status::Pass, detail },
        Err(detail) => Line { criterion, status: Status::Fail, detail },
    };
    vec![
        line(1, fixtures("f7")),
        line(2, fixtures("z101sq")),
        line(3, n1009()),
        line(4, soundness(quick)),
        line(5, completeness(quick)),
        line(6, trace_identities()),
        line(7, axioms()),
        Line {
            criterion: 8,
            status: Status::Skipped,
            detail: "the polynomial-model oracle is test code: cargo test -p ellper --test oracle_f7".into(),
        },
        line(9, berrizbeitia()),
        line(10, appendix()),
        line(11, strong(quick)),
        line(12, certificates()),
    ]
}
