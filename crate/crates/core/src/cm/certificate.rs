//! Certificates: the recorded values of a successful run, and a verifier
//! that rebuilds the ring from them alone.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::ResidueRing;
use crate::basis::build_context;
use crate::criteria::{check_bound_basic, check_bound_strong};
use crate::curve::{CurveCoeffs, Point};
use crate::periods::{build_ring_with, PeriodsRing};

use super::hilbert::HilbertTable;
use super::poly::Poly;
use super::prove::{draw_a_and_m, run_criterion, AM_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionKind {
    Basic,
    Strong,
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriterionKind::Basic => "basic",
            CriterionKind::Strong => "strong",
        })
    }
}

impl FromStr for CriterionKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "basic" => Ok(CriterionKind::Basic),
            "strong" => Ok(CriterionKind::Strong),
            other => Err(format!("unknown criterion {other:?}")),
        }
    }
}

/// Field order is the serialized key order (ASCII order of the keys).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    #[serde(rename = "A")]
    pub a: [String; 2],
    #[serde(rename = "M")]
    pub m_point: [String; 2],
    #[serde(rename = "T")]
    pub t: [String; 2],
    pub criterion: CriterionKind,
    /// a1, a2, a3, a4, a6.
    pub curve: [String; 5],
    pub d: String,
    pub disc: String,
    pub m: String,
    pub n: String,
    pub seed: String,
}

fn pair(p: &Point) -> [String; 2] {
    let (x, y) = p.xy();
    [x.to_string(), y.to_string()]
}

impl Certificate {
    pub fn from_ring(s: &PeriodsRing, disc: u64, criterion: CriterionKind, seed: u64) -> Self {
        let e = &s.ctx.e;
        Certificate {
            a: pair(&s.a_pt),
            m_point: pair(&s.m),
            t: pair(&s.ctx.t),
            criterion,
            curve: e.coefficients().map(|c| c.to_string()),
            d: s.d().to_string(),
            disc: disc.to_string(),
            m: "1".into(),
            n: e.ring().modulus().to_string(),
            seed: seed.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn num<T: FromStr>(s: &str, what: &str) -> Result<T, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{what}: {s:?} is not a decimal integer"));
    }
    s.parse().map_err(|_| format!("{what}: {s:?} out of range"))
}

/// Re-checks a certificate from its recorded values. `Err` names the first
/// failed check.
pub fn check_certificate(c: &Certificate, table: &HilbertTable) -> Result<(), String> {
    let n: BigUint = num(&c.n, "n")?;
    let d: u64 = num(&c.d, "d")?;
    let disc: u64 = num(&c.disc, "disc")?;
    let m: u64 = num(&c.m, "m")?;
    let seed: u64 = num(&c.seed, "seed")?;
    if n < BigUint::from(3u32) {
        return Err("n below 3".into());
    }
    if d < 3 || !BigUint::from(d).gcd(&(&n << 1u32)).is_one() {
        return Err("d is not an odd integer prime to 2n".into());
    }
    if m != 1 {
        return Err("only m = 1 certificates are accepted".into());
    }
    let bound_ok = match c.criterion {
        CriterionKind::Basic => check_bound_basic(&n, d),
        CriterionKind::Strong => check_bound_strong(&n, d),
    };
    if !bound_ok {
        return Err(format!("bound fails for d = {d}"));
    }
    let ring = ResidueRing::new(n.clone()).map_err(|e| e.to_string())?;
    let el = |s: &str, what: &str| -> Result<_, String> {
        let v: BigUint = num(s, what)?;
        if v >= n {
            return Err(format!("{what}: not reduced mod n"));
        }
        Ok(ring.elem_owned(v))
    };
    let coeffs: Vec<_> = c.curve.iter().map(|s| el(s, "curve")).collect::<Result<_, _>>()?;
    let [a1, a2, a3, a4, a6]: [_; 5] = coeffs.try_into().unwrap();
    let e = CurveCoeffs::new(&ring, a1, a2, a3, a4, a6).map_err(|e| format!("curve: {e}"))?;

    // The curve must have CM by the recorded order: j(E) is a root of H.
    let h = table.get(disc).map_err(|e| e.to_string())?;
    if !Poly::from_integers_high_first(&ring, h).eval(&e.j_invariant()).is_zero() {
        return Err("j(E) is not a root of the class polynomial".into());
    }

    let t = e.point(el(&c.t[0], "T")?, el(&c.t[1], "T")?).map_err(|e| format!("T: {e}"))?;
    if !e.verify_exact_order(&t, d).map_err(|e| format!("T: {e}"))? {
        return Err("T does not have exact order d".into());
    }
    let ctx = build_context(&e, &t, d as usize).map_err(|e| format!("context: {e}"))?;
    let a = ctx.codomain.point(el(&c.a[0], "A")?, el(&c.a[1], "A")?).map_err(|e| format!("A: {e}"))?;
    let mp = e.point(el(&c.m_point[0], "M")?, el(&c.m_point[1], "M")?).map_err(|e| format!("M: {e}"))?;

    // A and M must come from the seeded stream, which ties the seed field in.
    let linked = (0..AM_BUDGET).any(|k| draw_a_and_m(&ctx, seed, k).is_ok_and(|(a2, m2)| a2 == a && m2 == mp));
    if !linked {
        return Err("A and M do not match the seed".into());
    }
    let s = build_ring_with(&ctx, &a, &mp).map_err(|e| format!("ring: {e}"))?;
    let outcome = run_criterion(&s, &n, c.criterion, false).map_err(|e| format!("criterion: {e}"))?;
    if !outcome.verdict.is_proof() {
        return Err(format!("criterion: {}", outcome.verdict));
    }
    if outcome.shift != Some(m as usize) {
        return Err(format!("congruence gives shift {:?}, certificate says {m}", outcome.shift));
    }
    Ok(())
}

pub fn verify_certificate(c: &Certificate) -> bool {
    check_certificate(c, HilbertTable::embedded()).is_ok()
}
