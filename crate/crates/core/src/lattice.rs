//! Counting short vectors in the lattice of elliptic units: the unit-lattice
//! determinant, exact counts of sum-zero vectors by norm, and certified
//! entropy bounds for rounded multinomial coefficients.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{decimal, ln, ln_int, pi, rat, sqrt, Interval};

/// Largest d for which `count_j_exact` runs its DP.
pub const COUNT_J_MAX_D: u64 = 25;

/// The (d-1) x d matrix whose rows are the divisors of the shifted units:
/// row k has -1, 2, -1 at columns k, k+1, k+2 (mod d).
pub fn unit_lattice_matrix(d: usize) -> Vec<Vec<i64>> {
    assert!(d >= 3);
    (0..d - 1)
        .map(|k| {
            let mut row = vec![0i64; d];
            row[k] = -1;
            row[(k + 1) % d] += 2;
            row[(k + 2) % d] += -1;
            row
        })
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of the rightmost (d-1) x (d-1) minor of the unit-lattice
/// matrix. Equals d.
pub fn unit_lattice_det(d: usize) -> BigInt {
    let minor: Vec<Vec<i64>> = unit_lattice_matrix(d).into_iter().map(|r| r[1..].to_vec()).collect();
    bareiss_det(&minor)
}

/// D_1 = 2, D_2 = 3, D_n = 2 D_{n-1} - D_{n-2}.
pub fn det_recurrence(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::from(2), BigInt::from(3));
    if n == 1 {
        return a;
    }
    for _ in 2..n {
        let c = &b * 2 - &a;
        a = b;
        b = c;
    }
    b
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn multinomial(parts: &[u64]) -> BigUint {
    let mut total = 0;
    let mut c = BigUint::one();
    for &p in parts {
        total += p;
        c *= binomial(total, p);
    }
    c
}

/// Number of sum-zero vectors in Z^d whose positive coordinates add up to s
/// (so the norm is 2s): choose p positive slots, compose s into them, then
/// spread s over the other d - p slots as nonnegative magnitudes.
fn count_sum_zero_with_half_norm(d: u64, s: u64, choose_d: &[BigUint]) -> BigUint {
    if s == 0 {
        return BigUint::one();
    }
    let mut total = BigUint::zero();
    // c_comp = C(s-1, p-1), c_rest = C(d-p+s-1, s)
    let mut c_comp = BigUint::one();
    let mut c_rest = binomial(d + s - 2, s);
    for p in 1..=s.min(d) {
        total += &choose_d[p as usize] * &c_comp * &c_rest;
        if p == s.min(d) {
            break;
        }
        c_comp = c_comp * (s - p) / p;
        let n = d - p + s - 1;
        c_rest = c_rest * (n - s) / n;
    }
    total
}

fn choose_table(d: u64, upto: u64) -> Vec<BigUint> {
    let mut t = vec![BigUint::one()];
    for p in 1..=upto.min(d) {
        let next = t.last().unwrap() * (d - p + 1) / p;
        t.push(next);
    }
    t
}

/// #S_d: vectors in Z^d with coordinate sum 0 and norm d - 1, closed form.
pub fn count_sd(d: u64) -> BigUint {
    assert!(d >= 3 && d % 2 == 1);
    let h = (d - 1) / 2;
    count_sum_zero_with_half_norm(d, h, &choose_table(d, h))
}

/// #I: vectors with coordinate sum 0 and norm at most d - 1, closed form.
pub fn count_i(d: u64) -> BigUint {
    assert!(d >= 3 && d % 2 == 1);
    let h = (d - 1) / 2;
    let table = choose_table(d, h);
    (0..=h).map(|s| count_sum_zero_with_half_norm(d, s, &table)).sum()
}

/// Counts by dynamic programming over the coordinates. The state is the
/// partial sum, the partial norm and (optionally) the weighted sum
/// sum k e_k mod d.
struct Dp {
    d: usize,
    res: usize,
    // table[sum + d - 1][norm][residue]
    table: Vec<Vec<Vec<BigUint>>>,
}

impl Dp {
    fn run(d: usize, track_residue: bool) -> Dp {
        let max_norm = d - 1;
        let width = 2 * max_norm + 1;
        let res = if track_residue { d } else { 1 };
        let empty = || vec![vec![vec![BigUint::zero(); res]; max_norm + 1]; width];
        let mut table = empty();
        table[max_norm][0][0] = BigUint::one();
        for k in 0..d {
            let mut next = empty();
            for (si, by_norm) in table.iter().enumerate() {
                for (norm, by_res) in by_norm.iter().enumerate() {
                    for (r, c) in by_res.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let room = (max_norm - norm) as i64;
                        for v in -room..=room {
                            let s2 = si as i64 + v;
                            if s2 < 0 || s2 >= width as i64 {
                                continue;
                            }
                            let r2 = if track_residue { (r as i64 + k as i64 * v).rem_euclid(d as i64) as usize } else { 0 };
                            next[s2 as usize][norm + v.unsigned_abs() as usize][r2] += c;
                        }
                    }
                }
            }
            table = next;
        }
        Dp { d, res, table }
    }

    fn at(&self, sum: i64, norm: usize, r: usize) -> &BigUint {
        &self.table[(sum + self.d as i64 - 1) as usize][norm][r % self.res]
    }
}

/// #S_d by the DP.
pub fn count_sd_dp(d: u64) -> BigUint {
    let dp = Dp::run(d as usize, false);
    dp.at(0, d as usize - 1, 0).clone()
}

/// #I by the DP: sum zero, summed over all norms up to d - 1.
pub fn count_i_dp(d: u64) -> BigUint {
    let dp = Dp::run(d as usize, false);
    (0..d as usize).map(|norm| dp.at(0, norm, 0)).sum()
}

/// #J: the vectors of I with sum k e_k = 0 mod d.
pub fn count_j_exact(d: u64) -> Result<BigUint> {
    if d > COUNT_J_MAX_D {
        return Err(Error::Invalid(format!("count_J needs d <= {COUNT_J_MAX_D}, got {d}")));
    }
    let dp = Dp::run(d as usize, true);
    Ok((0..d as usize).map(|norm| dp.at(0, norm, 0)).sum())
}

/// Counts (#S_d, #I, #J) by walking every vector of norm at most d - 1.
/// The slow reference for small d.
pub fn enumerate_counts(d: u64) -> (u64, u64, u64) {
    fn walk(d: i64, k: i64, room: i64, sum: i64, wsum: i64, acc: &mut (u64, u64, u64)) {
        if k == d {
            if sum == 0 {
                acc.1 += 1;
                if room == 0 {
                    acc.0 += 1;
                }
                if wsum.rem_euclid(d) == 0 {
                    acc.2 += 1;
                }
            }
            return;
        }
        for v in -room..=room {
            walk(d, k + 1, room - v.abs(), sum + v, wsum + k * v, acc);
        }
    }
    let mut acc = (0, 0, 0);
    walk(d as i64, 0, d as i64 - 1, 0, 0, &mut acc);
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCounts {
    pub d: u64,
    pub count_sd: BigUint,
    pub count_i: BigUint,
    /// Only for d <= COUNT_J_MAX_D.
    pub count_j: Option<BigUint>,
}

pub fn lattice_counts(d: u64) -> LatticeCounts {
    LatticeCounts { d, count_sd: count_sd(d), count_i: count_i(d), count_j: count_j_exact(d).ok() }
}

/// beta = 1/(2 + sqrt 2) = 1 - 1/sqrt 2 as a certified interval.
pub fn beta() -> Interval {
    Interval::from_i64(1).sub(&Interval::from_i64(1).div(&sqrt(&rat(2, 1))))
}

/// floor(beta d) = d - ceil(d / sqrt 2), exactly: ceil(d / sqrt 2) is the
/// least x with 2 x^2 >= d^2.
pub fn floor_beta_d(d: u64) -> u64 {
    let d2 = BigUint::from(d) * d;
    let mut x = (&d2 / 2u32).sqrt();
    while BigUint::from(2u32) * &x * &x < d2 {
        x += 1u32;
    }
    d - x.to_u64().unwrap()
}

/// #S_{d,beta} by the product formula: the partition into zero, positive and
/// negative slots, then a composition of (d-1)/2 for each sign.
pub fn count_sd_beta_formula(d: u64) -> BigUint {
    let b = floor_beta_d(d);
    assert!(b >= 1);
    let h = (d - 1) / 2;
    let comp = binomial(h - 1, b - 1);
    multinomial(&[b, b, d - 2 * b]) * &comp * &comp
}

/// #S_{d,beta} by a DP restricted to exactly floor(beta d) positive and
/// floor(beta d) negative coordinates.
pub fn count_sd_beta_dp(d: u64) -> BigUint {
    let b = floor_beta_d(d) as usize;
    let h = ((d - 1) / 2) as usize;
    // state[npos][nneg][possum][negsum]
    let idx = |np: usize, nn: usize, ps: usize, ns: usize| ((np * (b + 1) + nn) * (h + 1) + ps) * (h + 1) + ns;
    let size = (b + 1) * (b + 1) * (h + 1) * (h + 1);
    let mut cur = vec![BigUint::zero(); size];
    cur[idx(0, 0, 0, 0)] = BigUint::one();
    for _ in 0..d {
        let mut next = vec![BigUint::zero(); size];
        for np in 0..=b {
            for nn in 0..=b {
                for ps in 0..=h {
                    for ns in 0..=h {
                        let c = &cur[idx(np, nn, ps, ns)];
                        if c.is_zero() {
                            continue;
                        }
                        next[idx(np, nn, ps, ns)] += c;
                        if np < b {
                            for v in 1..=h - ps {
                                next[idx(np + 1, nn, ps + v, ns)] += c;
                            }
                        }
                        if nn < b {
                            for v in 1..=h - ns {
                                next[idx(np, nn + 1, ps, ns + v)] += c;
                            }
                        }
                    }
                }
            }
        }
        cur = next;
    }
    cur[idx(b, b, h, h)].clone()
}

/// ln of an interval of positive reals.
pub fn ln_interval(x: &Interval) -> Interval {
    Interval::new(ln(&x.lo).lo, ln(&x.hi).hi)
}

/// Entropy -sum p ln p of a probability vector given by intervals.
pub fn entropy(parts: &[Interval]) -> Interval {
    parts.iter().fold(Interval::from_i64(0), |acc, p| acc.sub(&p.mul(&ln_interval(p))))
}

/// Certified floor(x d) for an interval x that does not straddle an
/// integer after scaling.
fn floor_scaled(x: &Interval, d: u64) -> Result<u64> {
    let dd = BigRational::from_integer(BigInt::from(d));
    let lo = (&x.lo * &dd).floor().to_integer();
    let hi = (&x.hi * &dd).floor().to_integer();
    if lo != hi {
        return Err(Error::Invalid("floor(beta d) is not determined at this precision".into()));
    }
    lo.to_u64().ok_or_else(|| Error::Invalid("negative part".into()))
}

/// Parts of the rounded multinomial: floor(beta_k d) for k < K, remainder last.
pub fn rounded_parts(parts: &[Interval], d: u64) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(parts.len());
    for p in &parts[..parts.len() - 1] {
        out.push(floor_scaled(p, d)?);
    }
    let used: u64 = out.iter().sum();
    if used >= d {
        return Err(Error::Invalid("parts leave nothing for the last slot".into()));
    }
    out.push(d - used);
    Ok(out)
}

/// Certified enclosure of (1/d) ln of the rounded multinomial coefficient.
///
/// The lower end is the effective entropy bound with the smoothing constant
/// mu = max(-ln(min(beta_k - 1/d)) - 1, 1); the upper end applies the
/// Robbins bounds to each factorial at the rounded parts.
pub fn entropy_bounds(parts: &[Interval], d: u64) -> Result<(BigRational, BigRational)> {
    let k = parts.len() as i64;
    if k < 2 {
        return Err(Error::Invalid("need at least two parts".into()));
    }
    let inv_d = rat(1, d as i64);
    let total = parts.iter().fold(Interval::from_i64(0), |a, p| a.add(p));
    if !total.contains(&BigRational::one()) {
        return Err(Error::Invalid("parts do not sum to 1".into()));
    }
    if parts.iter().any(|p| p.lo <= inv_d) {
        return Err(Error::Invalid("every part must exceed 1/d".into()));
    }
    let min_lo = parts.iter().map(|p| &p.lo - &inv_d).min().unwrap();
    let mu_raw = ln(&min_lo).neg().sub(&Interval::from_i64(1));
    let mu = if mu_raw.hi > BigRational::one() { mu_raw.hi } else { BigRational::one() };
    let dd = Interval::from_i64(d as i64);
    let log_2pid = ln_interval(&pi().scale(&rat(2 * d as i64, 1)));
    let stirling = log_2pid.scale(&rat(1 - k, 2 * d as i64));

    let lower = entropy(parts)
        .sub(&Interval::point(rat(2 * k, d as i64) * &mu))
        .add(&stirling)
        .add(&Interval::point((rat(1, 13) - rat(k, 12)) * &inv_d));

    let rounded = rounded_parts(parts, d)?;
    let alphas: Vec<Interval> = rounded.iter().map(|&r| Interval::point(rat(r as i64, 1)).div(&dd)).collect();
    // ln d! <= ... + 1/(12d) and ln d_k! >= ... + 1/(12 d_k + 1), per part.
    let mut tail = Interval::point(rat(1, 12 * d as i64));
    for (a, &r) in alphas.iter().zip(&rounded) {
        tail = tail.sub(&ln_interval(a).scale(&rat(1, 2))).sub(&Interval::point(rat(1, 12 * r as i64 + 1)));
    }
    let upper = entropy(&alphas).add(&stirling).add(&tail.scale(&inv_d));
    Ok((lower.lo, upper.hi))
}

/// Robbins: sqrt(2 pi d) (d/e)^d exp(1/(12d+1)) <= d! <= ... exp(1/(12d)),
/// compared in logarithms. True when both inequalities are certified.
pub fn robbins_sandwich(d: u64) -> bool {
    let fact: BigUint = (1..=d).map(BigUint::from).product();
    let ln_fact = ln_int(&fact);
    let dr = rat(d as i64, 1);
    let base = ln_interval(&pi().scale(&(rat(2, 1) * &dr)))
        .scale(&rat(1, 2))
        .add(&ln(&dr).scale(&dr))
        .sub(&Interval::point(dr.clone()));
    let lower = base.add(&Interval::point(rat(1, 12 * d as i64 + 1)));
    let upper = base.add(&Interval::point(rat(1, 12 * d as i64)));
    ln_fact.certainly_ge(&lower) && upper.certainly_ge(&ln_fact)
}

/// ln(count) >= c d, with c a decimal string, certified.
pub fn log_at_least(count: &BigUint, c: &str, d: u64) -> bool {
    ln_int(count).lo >= decimal(c) * rat(d as i64, 1)
}

/// ln(count / d^2) >= c d for the #J >= #I / d^2 route.
pub fn log_over_d2_at_least(count: &BigUint, c: &str, d: u64) -> bool {
    let l = ln_int(count).sub(&ln_int(&BigUint::from(d)).scale(&rat(2, 1)));
    l.lo >= decimal(c) * rat(d as i64, 1)
}
