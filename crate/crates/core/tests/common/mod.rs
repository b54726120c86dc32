//! Helpers shared by the integration tests: random instances over prime
//! fields, the identity checks, fixture rings and an independent polynomial
//! model of the F_7 ring.
#![allow(dead_code)]

use ellper::arith::factor::is_probable_prime;
use ellper::arith::{Residue, ResidueRing};
use ellper::basis::{build_context, gamma, solve_iota_hat, trace_vector_e, trace_vector_iota};
use ellper::curve::{CurveCoeffs, Point};
use ellper::periods::{build_ring, build_ring_with, PeriodsRing};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub const FIELD_PRIMES: [u64; 5] = [1009, 10007, 65537, 1_000_003, (1 << 61) - 1];

pub fn random_field(rng: &mut TestRng) -> ResidueRing {
    let p = *FIELD_PRIMES.choose(rng).unwrap();
    assert!(is_probable_prime(&BigUint::from(p)));
    ResidueRing::from_u64(p).unwrap()
}

pub fn random_residue(ring: &ResidueRing, rng: &mut TestRng) -> Residue {
    ring.elem_owned(num_bigint::RandBigInt::gen_biguint_below(rng, ring.modulus()))
}

pub fn random_curve(ring: &ResidueRing, rng: &mut TestRng) -> CurveCoeffs {
    loop {
        let [a1, a2, a3, a4, a6] = [0; 5].map(|_| random_residue(ring, rng));
        if let Ok(e) = CurveCoeffs::new(ring, a1, a2, a3, a4, a6) {
            return e;
        }
    }
}

pub fn random_affine(e: &CurveCoeffs, rng: &mut TestRng) -> Point {
    loop {
        let p = e.random_point(rng).unwrap();
        if !p.is_infinity() {
            return p;
        }
    }
}

/// x(P - A), or None when undefined.
fn x_at(e: &CurveCoeffs, a: &Point, p: &Point) -> Option<Residue> {
    e.sub(p, a).ok()?.x().cloned()
}

fn y_at(e: &CurveCoeffs, a: &Point, p: &Point) -> Option<Residue> {
    e.sub(p, a).ok()?.y().cloned()
}

fn u(e: &CurveCoeffs, a: &Point, b: &Point, p: &Point) -> Option<Residue> {
    gamma(e, a, b, p).ok()
}

/// Outcome of one identity instance: `Ok(false)` when some quantity is
/// undefined at the sampled points and the instance is skipped.
pub type Check = Result<bool, String>;

fn expect(name: &str, lhs: Residue, rhs: Residue) -> Check {
    if lhs == rhs {
        Ok(true)
    } else {
        Err(format!("{name}: {lhs} != {rhs}"))
    }
}

fn distinct(pts: &[&Point]) -> bool {
    pts.iter().enumerate().all(|(i, p)| pts[i + 1..].iter().all(|q| p != q))
}

pub fn check_u_square(rng: &mut TestRng) -> Check {
    let ring = random_field(rng);
    let e = random_curve(&ring, rng);
    let [a, b, p] = [0; 3].map(|_| random_affine(&e, rng));
    if !distinct(&[&a, &b, &p]) {
        return Ok(false);
    }
    let (Some(uab), Some(xa), Some(xb), Some(xab)) = (u(&e, &a, &b, &p), x_at(&e, &a, &p), x_at(&e, &b, &p), x_at(&e, &a, &b)) else {
        return Ok(false);
    };
    let rhs = xa + xb - &e.a1 * &uab + xab + &e.a2;
    expect("u_AB^2", &uab * &uab, rhs)
}

pub fn check_u_product(rng: &mut TestRng) -> Check {
    let ring = random_field(rng);
    let e = random_curve(&ring, rng);
    let [a, b, c, p] = [0; 4].map(|_| random_affine(&e, rng));
    if !distinct(&[&a, &b, &c, &p]) {
        return Ok(false);
    }
    let vals = (
        u(&e, &a, &b, &p),
        u(&e, &a, &c, &p),
        gamma(&e, &a, &b, &c).ok(),
        gamma(&e, &a, &c, &b).ok(),
        x_at(&e, &a, &p),
        x_at(&e, &a, &b),
        x_at(&e, &a, &c),
    );
    let (Some(uab), Some(uac), Some(gabc), Some(gacb), Some(xa), Some(xab), Some(xac)) = vals else {
        return Ok(false);
    };
    let rhs = xa + &gabc * &uac + &gacb * &uab + &e.a2 + xab + xac;
    expect("u_AB u_AC", &uab * &uac, rhs)
}

pub fn check_cocycle(rng: &mut TestRng) -> Check {
    let ring = random_field(rng);
    let e = random_curve(&ring, rng);
    let [a, b, c, p] = [0; 4].map(|_| random_affine(&e, rng));
    if !distinct(&[&a, &b, &c, &p]) {
        return Ok(false);
    }
    let (Some(uab), Some(ubc), Some(uca), Some(g)) = (u(&e, &a, &b, &p), u(&e, &b, &c, &p), u(&e, &c, &a, &p), gamma(&e, &a, &b, &c).ok()) else {
        return Ok(false);
    };
    expect("cocycle", uab + ubc + uca, g - &e.a1)
}

pub fn check_x_translate(rng: &mut TestRng) -> Check {
    let ring = random_field(rng);
    let e = random_curve(&ring, rng);
    let [a, p] = [0; 2].map(|_| random_affine(&e, rng));
    let Some(xa) = x_at(&e, &a, &p) else { return Ok(false) };
    let ((ax, ay), (x, y)) = (a.xy(), p.xy());
    let (a1, a2, a3, a4, a6) = (&e.a1, &e.a2, &e.a3, &e.a4, &e.a6);
    let two = ring.from_i64(2);
    let dx = x - ax;
    let rhs = (a3 + &two * ay + a1 * ax) * y
        + ax * x * x
        + (a4 + a1 * a1 * ax + a1 * a3 + &two * a2 * ax + a1 * ay + ax * ax) * x
        + a3 * a3
        + a1 * a3 * ax
        + a3 * ay
        + a4 * ax
        + &two * a6;
    expect("x_A (x - x(A))^2", xa * &dx * &dx, rhs)
}

/// psi_3 and psi_3'/3 from the b-invariants, written out here rather than
/// taken from the library.
pub fn psi3_pair(e: &CurveCoeffs) -> (Vec<Residue>, Vec<Residue>) {
    let r = e.ring();
    let (a1, a2, a3, a4, a6) = (&e.a1, &e.a2, &e.a3, &e.a4, &e.a6);
    let b2 = a1 * a1 + r.from_i64(4) * a2;
    let b4 = a1 * a3 + r.from_i64(2) * a4;
    let b6 = a3 * a3 + r.from_i64(4) * a6;
    let b8 = a1 * a1 * a6 + r.from_i64(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let three = r.from_i64(3);
    // high degree first
    let psi3 = vec![three.clone(), b2.clone(), &three * &b4, &three * &b6, b8];
    let hat = vec![r.from_i64(4), b2, r.from_i64(2) * b4, b6];
    (psi3, hat)
}

fn horner(c: &[Residue], x: &Residue) -> Residue {
    c.iter().fold(x.ring().zero(), |acc, ci| acc * x + ci)
}

pub fn check_x_pair(rng: &mut TestRng) -> Check {
    let ring = random_field(rng);
    let e = random_curve(&ring, rng);
    let [a, p] = [0; 2].map(|_| random_affine(&e, rng));
    let ma = e.neg(&a);
    let (Some(xa), Some(xma)) = (x_at(&e, &a, &p), x_at(&e, &ma, &p)) else { return Ok(false) };
    let ax = a.xy().0;
    let Ok(inv) = (p.xy().0 - ax).try_invert() else { return Ok(false) };
    let (psi3, hat) = psi3_pair(&e);
    let rhs = -(horner(&psi3, ax) * &inv * &inv) - horner(&hat, ax) * &inv;
    expect("(x_A - x(A))(x_-A - x(A))", (xa - ax) * (xma - ax), rhs)
}

/// Determinant over a prime field by Gaussian elimination.
pub fn det_mod_p(mut m: Vec<Vec<Residue>>) -> Residue {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    let mut det = ring.one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else { return ring.zero() };
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det = &det * &m[k][k];
        let inv = m[k][k].try_invert().unwrap();
        for i in k + 1..n {
            let f = &m[i][k] * &inv;
            for j in k..n {
                let v = &m[i][j] - &f * &m[k][j];
                m[i][j] = v;
            }
        }
    }
    det
}

/// Res(f, g) as the Sylvester determinant; coefficients high degree first.
pub fn resultant(f: &[Residue], g: &[Residue]) -> Residue {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let ring = f[0].ring();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![ring.zero(); size];
        r[i..i + m + 1].clone_from_slice(f);
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![ring.zero(); size];
        r[i..i + n + 1].clone_from_slice(g);
        rows.push(r);
    }
    det_mod_p(rows)
}

pub fn check_resultant(rng: &mut TestRng) -> Check {
    let ring = random_field(rng);
    let e = random_curve(&ring, rng);
    let (psi3, hat) = psi3_pair(&e);
    expect("Res(psi3, psi3 hat)", resultant(&psi3, &hat), -(&e.disc * &e.disc))
}

pub fn check_multiplication_by_k(rng: &mut TestRng) -> Check {
    let ring = random_field(rng);
    let e = random_curve(&ring, rng);
    let p = random_affine(&e, rng);
    let x = p.xy().0.clone();
    for k in 2..=9u64 {
        let Ok(kp) = e.mul_i64(k as i64, &p) else { return Ok(false) };
        let Some(xk) = kp.x() else { return Ok(false) };
        let (Ok(pk), Ok(pk1), Ok(pkm1)) = (e.division_poly(k, &p), e.division_poly(k + 1, &p), e.division_poly(k - 1, &p)) else {
            return Ok(false);
        };
        let Ok(inv) = (&pk * &pk).try_invert() else { return Ok(false) };
        expect("g_k", xk.clone(), &x - pk1 * pkm1 * inv)?;
    }
    Ok(true)
}

/// A random ring over a small prime field: a curve whose group order has an
/// odd prime factor d >= 5 with cofactor at least 2, T of exact order d, and
/// random A, M that the construction accepts.
pub fn random_small_ring(rng: &mut TestRng) -> PeriodsRing {
    const SMALL: [u64; 8] = [101, 103, 107, 109, 113, 127, 131, 137];
    loop {
        let ring = ResidueRing::from_u64(*SMALL.choose(rng).unwrap()).unwrap();
        let e = random_curve(&ring, rng);
        let pts = e.enumerate_points();
        let order = pts.len() as u64;
        let Some(d) = (5..order / 2 + 1).step_by(2).filter(|&d| order.is_multiple_of(d) && is_probable_prime(&BigUint::from(d))).last() else {
            continue;
        };
        let Some(t) = pts.iter().map(|p| e.mul_i64((order / d) as i64, p).unwrap()).find(|q| !q.is_infinity()) else { continue };
        let Ok(ctx) = build_context(&e, &t, d as usize) else { continue };
        let cod = ctx.codomain.enumerate_points();
        for _ in 0..20 {
            let a = cod.choose(rng).unwrap();
            let m = pts.choose(rng).unwrap();
            if a.is_infinity() || m.is_infinity() {
                continue;
            }
            if let Ok(s) = build_ring_with(&ctx, a, m) {
                return s;
            }
        }
    }
}

pub fn check_trace_vectors(rng: &mut TestRng) -> Check {
    let s = random_small_ring(rng);
    let ring = s.ring();
    let sum = s.e.residues().into_iter().fold(ring.zero(), |acc, v| acc + v);
    expect("sum e", sum, ring.one())?;
    for k in 0..s.d() as i64 {
        expect("e_k = e_-k", s.e.get(k), s.e.get(-k))?;
    }
    // Recompute from the context rather than trusting the stored vectors.
    let e = trace_vector_e(&s.ctx, &s.a_pt).map_err(|x| x.to_string())?;
    let iota = trace_vector_iota(&s.ctx, &s.a_pt).map_err(|x| x.to_string())?;
    let hat = solve_iota_hat(&e, &iota).map_err(|x| x.to_string())?;
    if e.conv(&hat) != iota {
        return Err("e * iota_hat != iota".into());
    }
    Ok(true)
}

/// Runs a check until `count` instances were actually evaluated.
pub fn run_instances(count: usize, seed: u64, f: fn(&mut TestRng) -> Check) -> Result<usize, String> {
    use rand::SeedableRng;
    let mut rng = TestRng::seed_from_u64(seed);
    let mut done = 0;
    let mut tries = 0;
    while done < count {
        tries += 1;
        if tries > 50 * count {
            return Err(format!("only {done} of {count} instances were defined"));
        }
        if f(&mut rng)? {
            done += 1;
        }
    }
    Ok(done)
}

pub const IDENTITIES: [(&str, fn(&mut TestRng) -> Check); 8] = [
    ("u_AB^2", check_u_square),
    ("u_AB u_AC", check_u_product),
    ("cocycle", check_cocycle),
    ("x_A expansion", check_x_translate),
    ("x_A x_-A", check_x_pair),
    ("Res(psi3, psi3 hat) = -disc^2", check_resultant),
    ("x(kP) = g_k for k <= 9", check_multiplication_by_k),
    ("sum e = 1, e symmetric, e * iota_hat = iota", check_trace_vectors),
];

pub fn f7_ring() -> PeriodsRing {
    let ring = ResidueRing::from_u64(7).unwrap();
    let e = CurveCoeffs::from_i64(&ring, [1, 3, 5, 3, 2]).unwrap();
    let t = e.point_i64(3, 1).unwrap();
    let ctx = build_context(&e, &t, 5).unwrap();
    let a = ctx.codomain.point_i64(4, 2).unwrap();
    let m = e
        .enumerate_points()
        .into_iter()
        .find(|p| !p.is_infinity() && !ctx.kernel.multiples().contains(p))
        .unwrap();
    build_ring_with(&ctx, &a, &m).unwrap()
}

pub fn z101_ring() -> PeriodsRing {
    let ring = ResidueRing::from_u64(10201).unwrap();
    let e = CurveCoeffs::from_i64(&ring, [0, 0, 0, 55, 91]).unwrap();
    let t = e.point_i64(659, 8304).unwrap();
    let ep = CurveCoeffs::from_i64(&ring, [0, 0, 0, 6725, 6453]).unwrap();
    let a = ep.point_i64(1373, 1956).unwrap();
    let m = e.point_i64(8903, 4033).unwrap();
    build_ring(&e, &t, 7, &a, &m).unwrap()
}

pub fn random_element(s: &PeriodsRing, rng: &mut TestRng) -> ellper::periods::PeriodsElement {
    let coords = (0..s.d()).map(|_| random_residue(s.ring(), rng)).collect::<Vec<_>>();
    s.element(ellper::convolution::RingVector::from_residues(s.ring(), &coords))
}

/// Commutativity, associativity and the unit on `triples` random triples,
/// then sigma: additive, multiplicative, order exactly d.
pub fn check_ring_axioms(s: &PeriodsRing, triples: usize, rng: &mut TestRng) -> Result<(), String> {
    let one = s.one();
    for _ in 0..triples {
        let [a, b, c] = [0; 3].map(|_| random_element(s, rng));
        if s.mul(&a, &b) != s.mul(&b, &a) {
            return Err("mul is not commutative".into());
        }
        if s.mul(&s.mul(&a, &b), &c) != s.mul(&a, &s.mul(&b, &c)) {
            return Err("mul is not associative".into());
        }
        if s.mul(&one, &a) != a {
            return Err("1 is not a unit".into());
        }
        if s.sigma(&s.mul(&a, &b)) != s.mul(&s.sigma(&a), &s.sigma(&b)) || s.sigma(&s.add(&a, &c)) != s.add(&s.sigma(&a), &s.sigma(&c)) {
            return Err("sigma is not a ring map".into());
        }
        if s.sigma_pow(&a, s.d() as i64) != a {
            return Err("sigma^d != id".into());
        }
    }
    if s.sigma(&one) != one {
        return Err("sigma(1) != 1".into());
    }
    let theta = s.theta(0);
    if (1..s.d() as i64).any(|k| s.sigma_pow(&theta, k) == theta) {
        return Err("sigma has order below d".into());
    }
    Ok(())
}

fn small(r: &ellper::arith::Residue) -> u64 {
    r.value().to_u64().unwrap()
}

fn poly(p: u64, c: &[i64]) -> Vec<u64> {
    c.iter().map(|v| v.rem_euclid(p as i64) as u64).collect()
}

/// The basis theta_k as elements of F_7[x]/(f), where f cuts out the fiber
/// of the isogeny over A and y is solved from the y-map.
pub fn theta_polys(s: &PeriodsRing) -> (quotient::Q, Vec<Vec<u64>>) {
    let p = 7;
    let (ax, ay) = s.a_pt.xy();
    let (ax, ay) = (small(ax) as i64, small(ay) as i64);
    // x' = N(x)/D(x) and y' = (Y1(x) y + Y0(x)) / Yd(x), low degree first
    let n = poly(p, &[6, 5, 2, 0, 0, 1]);
    let dn = poly(p, &[4, 0, 3, 0, 1, 0]);
    let f: Vec<u64> = n.iter().zip(&dn).map(|(a, b)| (a + p * p - (ax.rem_euclid(7) as u64) * b) % p).collect();
    let q = quotient::Q { p, f };
    let y1 = q.reduce(&poly(p, &[4, 3, 6, 3, 4, 0, 1]));
    let y0 = q.reduce(&poly(p, &[1, 4, 3, 1, 1, 3]));
    let yd = q.reduce(&poly(p, &[6, 0, 5, 0, 1, 0, 1]));
    let x = q.x();
    let y = q.mul(&q.sub(&q.scalar(&yd, ay.rem_euclid(7) as u64), &y0), &q.inv(&y1).expect("Y1 invertible on the fiber"));

    let e = &s.ctx.e;
    let [a1, a2, a3, a4, a6] = e.coefficients().map(small);
    let c = |v: u64| q.constant(v as i64);
    // (x, y) is on E
    let lhs = q.add(&q.add(&q.mul(&y, &y), &q.mul(&c(a1), &q.mul(&x, &y))), &q.mul(&c(a3), &y));
    let x2 = q.mul(&x, &x);
    let rhs = [q.mul(&x2, &x), q.mul(&c(a2), &x2), q.mul(&c(a4), &x), c(a6)].into_iter().reduce(|u, v| q.add(&u, &v)).unwrap();
    assert_eq!(lhs, rhs, "generic fiber point is not on E");

    // C - P for a constant affine P, by the chord formula.
    let minus = |(cx, cy): (&Vec<u64>, &Vec<u64>), (px, py): (u64, u64)| -> (Vec<u64>, Vec<u64>) {
        let qx = px;
        let qy = (3 * p * p - py - a1 * px % p - a3) % p;
        let lam = q.mul(&q.sub(cy, &c(qy)), &q.inv(&q.sub(cx, &c(qx))).expect("C - P defined"));
        let nu = q.sub(cy, &q.mul(&lam, cx));
        let x3 = q.sub(&q.sub(&q.sub(&q.add(&q.mul(&lam, &lam), &q.mul(&c(a1), &lam)), &c(a2)), cx), &c(qx));
        let y3 = q.sub(&q.sub(&q.sub(&c(0), &q.mul(&q.add(&lam, &c(a1)), &x3)), &nu), &c(a3));
        (x3, y3)
    };
    let t = &s.ctx.t;
    let mt = e.neg(t);
    let (mtx, mty) = (small(mt.xy().0), small(mt.xy().1));
    let (aa, bb) = (small(&s.ctx.a), small(&s.ctx.b));
    let mut thetas = Vec::new();
    for k in 0..s.d() as i64 {
        let kt = e.mul_i64(k, t).unwrap();
        let (xk, yk) = if kt.is_infinity() {
            (x.clone(), y.clone())
        } else {
            minus((&x, &y), (small(kt.xy().0), small(kt.xy().1)))
        };
        let g = q.mul(&q.sub(&yk, &c(mty)), &q.inv(&q.sub(&xk, &c(mtx))).expect("Gamma defined"));
        thetas.push(q.add(&q.scalar(&g, aa), &c(bb)));
    }
    (q, thetas)
}

/// Compares every basis product theta_i theta_j of the F_7 ring with the
/// product computed in the quotient ring. Returns the number of products.
pub fn f7_oracle_check() -> Result<usize, String> {
    let s = f7_ring();
    let (q, thetas) = theta_polys(&s);
    let sum = thetas.iter().skip(1).fold(thetas[0].clone(), |acc, t| q.add(&acc, t));
    if sum != q.constant(1) {
        return Err("theta_k do not sum to 1".into());
    }
    let mut checked = 0;
    for i in 0..5 {
        for j in 0..5 {
            let prod = q.mul(&thetas[i], &thetas[j]);
            let want = q.coordinates(&thetas, &prod).ok_or("theta_k do not span the quotient")?;
            let got: Vec<u64> = s.mul(&s.theta(i as i64), &s.theta(j as i64)).coords.coords().iter().map(|v| v.to_u64().unwrap()).collect();
            if got != want {
                return Err(format!("theta_{i} theta_{j}: tensor {got:?}, quotient ring {want:?}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// The first ring over F_p with a point of prime order d on y^2 = x^3 + x + a6.
pub fn first_ring(p: u64, d: u64) -> PeriodsRing {
    let ring = ResidueRing::from_u64(p).unwrap();
    for a6 in 1..p as i64 {
        let Ok(e) = CurveCoeffs::from_i64(&ring, [0, 0, 0, 1, a6]) else { continue };
        let pts = e.enumerate_points();
        let n = pts.len() as u64;
        if !n.is_multiple_of(d) || n / d < 2 {
            continue;
        }
        let Some(t) = pts.iter().map(|q| e.mul_i64((n / d) as i64, q).unwrap()).find(|q| !q.is_infinity()) else { continue };
        let ctx = build_context(&e, &t, d as usize).unwrap();
        for a in ctx.codomain.enumerate_points().iter().skip(1) {
            for m in pts.iter().skip(1) {
                if let Ok(s) = build_ring_with(&ctx, a, m) {
                    return s;
                }
            }
        }
    }
    panic!("no ring over F_{p} with d = {d}");
}

/// Polynomials over F_p mod a monic modulus, coefficients low degree first.
pub mod quotient {
    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct Q {
        pub p: u64,
        pub f: Vec<u64>,
    }

    fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// (quotient, remainder) of a by b, b nonzero.
    fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = pow(*b.last().unwrap(), p - 2, p);
        let mut q = vec![0; r.len().saturating_sub(b.len()) + 1];
        while r.len() >= b.len() {
            let c = r.last().unwrap() * lead_inv % p;
            let s = r.len() - b.len();
            q[s] = c;
            for (i, bi) in b.iter().enumerate() {
                r[s + i] = (r[s + i] + p - c * bi % p) % p;
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        (q, r)
    }

    impl Q {
        pub fn reduce(&self, a: &[u64]) -> Vec<u64> {
            let mut r = divmod(&a.iter().map(|v| v % self.p).collect::<Vec<_>>(), &self.f, self.p).1;
            r.resize(self.f.len() - 1, 0);
            r
        }

        pub fn constant(&self, c: i64) -> Vec<u64> {
            self.reduce(&[c.rem_euclid(self.p as i64) as u64])
        }

        pub fn x(&self) -> Vec<u64> {
            self.reduce(&[0, 1])
        }

        pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
            a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
        }

        pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
            a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
        }

        pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
            let mut out = vec![0; a.len() + b.len()];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] = (out[i + j] + x * y) % self.p;
                }
            }
            self.reduce(&out)
        }

        /// Inverse by the extended Euclidean algorithm; None for a zero divisor.
        pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
            let p = self.p;
            let (mut r0, mut r1) = (self.f.clone(), trim(a.to_vec()));
            let (mut s0, mut s1) = (vec![], vec![1u64]);
            while !r1.is_empty() {
                let (q, r) = divmod(&r0, &r1, p);
                let mut qs = vec![0; q.len() + s1.len()];
                for (i, x) in q.iter().enumerate() {
                    for (j, y) in s1.iter().enumerate() {
                        qs[i + j] = (qs[i + j] + x * y) % p;
                    }
                }
                let n = qs.len().max(s0.len());
                let s2: Vec<u64> = (0..n)
                    .map(|i| (s0.get(i).copied().unwrap_or(0) + p - qs.get(i).copied().unwrap_or(0)) % p)
                    .collect();
                (r0, r1) = (r1, r);
                (s0, s1) = (s1, trim(s2));
            }
            if r0.len() != 1 {
                return None;
            }
            let c = pow(r0[0], p - 2, p);
            Some(self.reduce(&s0.iter().map(|v| v * c % p).collect::<Vec<_>>()))
        }

        pub fn scalar(&self, a: &[u64], c: u64) -> Vec<u64> {
            a.iter().map(|x| x * (c % self.p) % self.p).collect()
        }

        /// Solves sum_k c_k basis_k = target over F_p; None when singular.
        pub fn coordinates(&self, basis: &[Vec<u64>], target: &[u64]) -> Option<Vec<u64>> {
            let p = self.p;
            let n = basis.len();
            // rows: monomial degree, columns: basis index | target
            let mut m: Vec<Vec<u64>> = (0..n).map(|deg| {
                let mut row: Vec<u64> = basis.iter().map(|b| b[deg]).collect();
                row.push(target[deg]);
                row
            }).collect();
            for k in 0..n {
                let piv = (k..n).find(|&i| m[i][k] != 0)?;
                m.swap(piv, k);
                let inv = pow(m[k][k], p - 2, p);
                for j in k..=n {
                    m[k][j] = m[k][j] * inv % p;
                }
                for i in 0..n {
                    if i != k && m[i][k] != 0 {
                        let f = m[i][k];
                        for j in k..=n {
                            m[i][j] = (m[i][j] + p * p - f * m[k][j]) % p;
                        }
                    }
                }
            }
            Some(m.iter().map(|r| r[n]).collect())
        }
    }
}
