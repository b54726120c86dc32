use ellper::interval::{decimal, ln_int, rat, Interval};
use ellper::lattice::*;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

fn beta_parts() -> Vec<Interval> {
    let b = beta();
    let rest = Interval::from_i64(1).sub(&b.scale(&rat(2, 1)));
    vec![b.clone(), b, rest]
}

#[test]
fn unit_lattice_determinant_is_d() {
    for d in (3..=99usize).step_by(2).chain([50]) {
        assert_eq!(unit_lattice_det(d), BigInt::from(d), "d = {d}");
    }
}

#[test]
fn closed_forms_match_dp() {
    for d in (3..=31u64).step_by(2) {
        assert_eq!(count_sd(d), count_sd_dp(d), "S_d, d = {d}");
    }
    for d in (3..=21u64).step_by(2) {
        assert_eq!(count_i(d), count_i_dp(d), "I, d = {d}");
    }
    {
        let d = 9u64;
        let (s, i, j) = enumerate_counts(d);
        assert_eq!(count_sd(d), BigUint::from(s));
        assert_eq!(count_i(d), BigUint::from(i));
        assert_eq!(count_j_exact(d).unwrap(), BigUint::from(j));
    }
}

#[test]
fn j_is_at_least_i_over_d_squared() {
    for d in (3..=15u64).step_by(2) {
        let j = count_j_exact(d).unwrap();
        assert!(j >= count_i(d) / (d * d), "d = {d}");
    }
}

#[test]
fn beta_restricted_count() {
    for d in [5u64, 9, 13] {
        assert_eq!(count_sd_beta_formula(d), count_sd_beta_dp(d), "d = {d}");
    }
    assert_eq!(count_sd_beta_formula(5), BigUint::from(20u32));
}

#[test]
fn robbins_up_to_30() {
    for d in 1..=30 {
        assert!(robbins_sandwich(d), "d = {d}");
    }
}

#[test]
fn entropy_bounds_bracket_the_exact_value() {
    let parts = beta_parts();
    let d = 100;
    let (lo, hi) = entropy_bounds(&parts, d).unwrap();
    let r = rounded_parts(&parts, d).unwrap();
    assert_eq!(r, vec![29, 29, 42]);
    let mut mult = BigUint::from(1u32);
    let mut total = 0u64;
    for &p in &r {
        for i in 1..=p {
            total += 1;
            mult = mult * total / i;
        }
    }
    let l = ln_int(&mult).scale(&rat(1, d as i64));
    assert!(lo <= l.lo && l.hi <= hi, "{lo} {l:?} {hi}");
}

#[test]
fn three_part_constant_at_2001() {
    let (lo, _) = entropy_bounds(&beta_parts(), 2001).unwrap();
    assert!(lo >= decimal("1.07658"));
}

#[test]
fn two_part_constant() {
    let b2 = decimal("0.29334") * rat(2, 1);
    let parts = [Interval::point(b2.clone()), Interval::point(BigRational::from_integer(1.into()) - b2)];
    assert!(entropy(&parts).lo >= decimal("0.678"));
    // The lower bound only improves with d, so d = 999 covers the range.
    let (lo, _) = entropy_bounds(&parts, 999).unwrap();
    assert!(lo >= decimal("0.6695"));
    assert!(lo * rat(1998, 4002) >= decimal("0.3342"));
    assert_eq!(decimal("1.07658") + decimal("0.3342") * rat(2, 1), decimal("1.74498"));
}

#[test]
fn entropy_limit() {
    let b = beta();
    let three = entropy(&beta_parts());
    let two = entropy(&[b.scale(&rat(2, 1)), Interval::from_i64(1).sub(&b.scale(&rat(2, 1)))]);
    assert!(three.lo >= decimal("1.08439"));
    assert!(three.add(&two).lo > decimal("1.7627"));
}

#[test]
fn exact_counts_clear_the_constant() {
    for d in [2001u64, 2003, 2501] {
        assert!(log_at_least(&count_sd(d), "1.74498", d), "d = {d}");
    }
    assert!(log_over_d2_at_least(&count_i(2001), "1.73738", 2001));
}

#[test]
fn restricted_count_at_2001() {
    let b = count_sd_beta_formula(2001);
    assert!(b <= count_sd(2001));
    assert!(log_at_least(&b, "1.74498", 2001));
}
