//! Small factor search: trial division, Pollard rho, perfect powers.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::rng::seeded;

/// Trial division bound used by [`factor`].
pub const TRIAL_BOUND: u64 = 1_000_000;

/// Rho attempts (each with a fresh random start) before a cofactor is left
/// unsplit.
pub const RHO_RETRIES: usize = 16;

/// Smallest prime factor of `n` that is at most `bound`, if any.
pub fn trial_division(n: &BigUint, bound: u64) -> Option<BigUint> {
    if n.is_zero() {
        return None;
    }
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let small = n.to_u64();
    let mut p = 3u64;
    while p <= bound {
        if let Some(s) = small {
            if p.saturating_mul(p) > s {
                break;
            }
        }
        if (n % p).is_zero() {
            return Some(BigUint::from(p));
        }
        p += 2;
    }
    None
}

/// Miller-Rabin with the first twelve prime bases (deterministic below
/// 3.3e24). Only used to steer factoring, never as a primality proof.
pub fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &BASES {
        if n == &BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'outer: for &a in &BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// One nontrivial factor of an odd composite `n` by Brent's variant of
/// Pollard rho.
pub fn pollard_rho<R: RngCore + ?Sized>(n: &BigUint, rng: &mut R) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for _ in 0..RHO_RETRIES {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_range(&BigUint::zero(), n);
        let step = |v: &BigUint| (v * v + &c) % n;
        let m = 64usize;
        let mut g = BigUint::one();
        let mut r = 1usize;
        let mut q = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if r > 1 << 22 {
                break;
            }
        }
        if &g == n {
            loop {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}

/// Factorization of `m > 0` as prime powers, plus the product of any
/// composite parts that rho failed to split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub primes: Vec<(BigUint, u32)>,
    pub unsplit: Vec<BigUint>,
}

pub fn factor(m: &BigUint) -> Factorization {
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = m.clone();
    let push = |primes: &mut Vec<(BigUint, u32)>, p: BigUint| {
        if let Some(e) = primes.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            primes.push((p, 1));
        }
    };
    while !rest.is_zero() && rest.is_even() {
        rest >>= 1u32;
        push(&mut primes, BigUint::from(2u32));
    }
    let mut p = 3u64;
    while p <= TRIAL_BOUND {
        if BigUint::from(p) * p > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            push(&mut primes, BigUint::from(p));
        }
        p += 2;
    }
    let mut unsplit = Vec::new();
    let mut stack = vec![];
    if rest > BigUint::one() {
        stack.push(rest);
    }
    let mut rng = seeded(0x5eed_f00d);
    while let Some(c) = stack.pop() {
        if is_probable_prime(&c) {
            push(&mut primes, c);
            continue;
        }
        if let Some((b, k)) = is_perfect_power(&c) {
            for _ in 0..k {
                stack.push(b.clone());
            }
            continue;
        }
        match pollard_rho(&c, &mut rng) {
            Some(g) => {
                let other = &c / &g;
                stack.push(g);
                stack.push(other);
            }
            None => unsplit.push(c),
        }
    }
    primes.sort();
    Factorization { primes, unsplit }
}

/// Smallest odd `d` in `[lo, hi]` with `d | m`, `gcd(d, m/d) = 1`, `d`
/// coprime to every entry of `forbidden`, and `accept(d)`.
pub fn small_divisor_search_by(
    m: &BigUint,
    lo: &BigUint,
    hi: &BigUint,
    forbidden: &[BigUint],
    accept: impl Fn(&BigUint) -> bool,
) -> Option<BigUint> {
    if m.is_zero() {
        return None;
    }
    let f = factor(m);
    let mut blocks: Vec<BigUint> = f.primes.iter().map(|(p, e)| p.pow(*e)).collect();
    blocks.extend(f.unsplit.iter().cloned());
    // Unitary divisors are products of whole blocks.
    let mut divisors = vec![BigUint::one()];
    for b in &blocks {
        let more: Vec<BigUint> = divisors.iter().map(|x| x * b).filter(|x| x <= hi).collect();
        divisors.extend(more);
    }
    divisors.sort();
    divisors.dedup();
    divisors.into_iter().find(|d| {
        d.is_odd()
            && d >= lo
            && d <= hi
            && (m % d).is_zero()
            && d.gcd(&(m / d)).is_one()
            && forbidden.iter().all(|x| d.gcd(x).is_one())
            && accept(d)
    })
}

pub fn small_divisor_search(m: &BigUint, lo: &BigUint, hi: &BigUint, forbidden: &[BigUint]) -> Option<BigUint> {
    small_divisor_search_by(m, lo, hi, forbidden, |_| true)
}

/// `(b, k)` with `b^k = n`, `k >= 2` and `b` minimal, if `n` is a perfect power.
pub fn is_perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if n < &BigUint::from(4u32) {
        return None;
    }
    let max_k = (n.bits() - 1) as u32;
    (2..=max_k).rev().find_map(|k| {
        let b = n.nth_root(k);
        (b.pow(k) == *n).then_some((b, k))
    })
}
