//! Shared oracles for the integration tests.
//!
//! Everything here is deliberately independent of the crate's numeric
//! paths: exact big-rational arithmetic for the classical (q = 1) network
//! values, and textbook Wigner 3j/6j formulas for the Racah-Wigner
//! convention. Expected values in the tests come from these, never from
//! the code under test.

#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// n! as a big integer.
pub fn factorial(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of negative {n}");
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn sign_pow(s: i64) -> BigRational {
    if s.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Classical admissibility of a twice-spin triple.
pub fn triple_ok(a: i64, b: i64, c: i64) -> bool {
    a >= 0
        && b >= 0
        && c >= 0
        && a <= b + c
        && b <= c + a
        && c <= a + b
        && (a + b + c) % 2 == 0
}

/// Exact classical bubble value (-1)^j (j+1).
pub fn bubble_exact(j: i64) -> BigRational {
    sign_pow(j) * rat(BigInt::from(j + 1))
}

/// Exact classical θ-network value.
pub fn theta_exact(a: i64, b: i64, c: i64) -> BigRational {
    if !triple_ok(a, b, c) {
        return BigRational::zero();
    }
    let s = (a + b + c) / 2;
    let num = factorial(s + 1) * factorial(s - a) * factorial(s - b) * factorial(s - c);
    let den = factorial(a) * factorial(b) * factorial(c);
    sign_pow(s) * BigRational::new(num, den)
}

/// Exact classical Tet(a,b,c,d; j,l) with the vertex pairing
/// (a,b,l), (c,d,l), (a,d,j), (c,b,j).
pub fn tet_exact(a: i64, b: i64, c: i64, d: i64, j: i64, l: i64) -> BigRational {
    let triples = [(a, b, l), (c, d, l), (a, d, j), (c, b, j)];
    if triples.iter().any(|&(x, y, z)| !triple_ok(x, y, z)) {
        return BigRational::zero();
    }
    let lower = [
        (a + d + j) / 2,
        (b + c + j) / 2,
        (a + b + l) / 2,
        (c + d + l) / 2,
    ];
    let upper = [
        (b + d + j + l) / 2,
        (a + c + j + l) / 2,
        (a + b + c + d) / 2,
    ];
    let min_s = *lower.iter().max().unwrap();
    let max_s = *upper.iter().min().unwrap();
    assert!(min_s <= max_s, "empty sum for admissible arguments");

    let mut interior = BigInt::one();
    for &bj in &upper {
        for &ai in &lower {
            interior *= factorial(bj - ai);
        }
    }
    let exterior = factorial(a) * factorial(b) * factorial(c) * factorial(d) * factorial(j) * factorial(l);

    let mut total = BigRational::zero();
    for s in min_s..=max_s {
        let mut den = BigInt::one();
        for &ai in &lower {
            den *= factorial(s - ai);
        }
        for &bj in &upper {
            den *= factorial(bj - s);
        }
        total += sign_pow(s) * BigRational::new(factorial(s + 1), den);
    }
    BigRational::new(interior, exterior) * total
}

/// Sign and natural-log magnitude of an exact rational, safe far beyond
/// the f64 range.
pub fn sl_of_rational(x: &BigRational) -> (i8, f64) {
    if x.is_zero() {
        return (0, f64::NEG_INFINITY);
    }
    let sign = if x.is_negative() { -1 } else { 1 };
    (sign, ln_big(&x.numer().abs()) - ln_big(&x.denom().abs()))
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        let (_, digits) = x.to_u64_digits();
        return (digits.first().copied().unwrap_or(0) as f64).ln();
    }
    // Keep the top 52 bits as a mantissa, track the shifted-out exponent.
    let shift = bits - 52;
    let top: BigInt = x >> shift;
    let (_, digits) = top.to_u64_digits();
    (digits[0] as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_fact_f64(n: i64) -> f64 {
    assert!(n >= 0);
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Δ(abc) triangle coefficient of the Racah formulas (twice-spin args).
fn triangle_coeff_ln(a: i64, b: i64, c: i64) -> f64 {
    ln_fact_f64((a + b - c) / 2) + ln_fact_f64((a - b + c) / 2) + ln_fact_f64((-a + b + c) / 2)
        - ln_fact_f64((a + b + c) / 2 + 1)
}

/// Wigner 3j-symbol from twice-spin arguments (j's and m's all doubled),
/// via the Racah closed form.
pub fn three_j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    if m1 + m2 + m3 != 0 || !triple_ok(j1, j2, j3) {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (j3 + m3) % 2 != 0 {
        return 0.0;
    }
    let pref_ln = 0.5
        * (triangle_coeff_ln(j1, j2, j3)
            + ln_fact_f64((j1 + m1) / 2)
            + ln_fact_f64((j1 - m1) / 2)
            + ln_fact_f64((j2 + m2) / 2)
            + ln_fact_f64((j2 - m2) / 2)
            + ln_fact_f64((j3 + m3) / 2)
            + ln_fact_f64((j3 - m3) / 2));
    let kmin = 0
        .max((j2 - j3 - m1) / 2)
        .max((j1 - j3 + m2) / 2);
    let kmax = ((j1 + j2 - j3) / 2)
        .min((j1 - m1) / 2)
        .min((j2 + m2) / 2);
    let mut sum = 0.0f64;
    for k in kmin..=kmax {
        let den_ln = ln_fact_f64(k)
            + ln_fact_f64((j1 + j2 - j3) / 2 - k)
            + ln_fact_f64((j1 - m1) / 2 - k)
            + ln_fact_f64((j2 + m2) / 2 - k)
            + ln_fact_f64((j3 - j2 + m1) / 2 + k)
            + ln_fact_f64((j3 - j1 - m2) / 2 + k);
        let term = (pref_ln - den_ln).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    let phase = (j1 - j2 - m3) / 2;
    if phase.rem_euclid(2) == 0 {
        sum
    } else {
        -sum
    }
}

/// Racah-Wigner 6j-symbol by brute-force contraction of four 3j-symbols
/// over all magnetic quantum numbers (twice-spin arguments).
pub fn sixj_contraction(j1: i64, j2: i64, j3: i64, j4: i64, j5: i64, j6: i64) -> f64 {
    let mut total = 0.0f64;
    for m1 in (-j1..=j1).step_by(2) {
        for m2 in (-j2..=j2).step_by(2) {
            for m4 in (-j4..=j4).step_by(2) {
                let m3 = -m1 - m2;
                let m5 = m1 + m2 + m4;
                let m6 = m5 - m1;
                if m3.abs() > j3 || m5.abs() > j5 || m6.abs() > j6 {
                    continue;
                }
                let prod = three_j(j1, j2, j3, -m1, -m2, -m3)
                    * three_j(j1, j5, j6, m1, -m5, m6)
                    * three_j(j4, j2, j6, m4, m2, -m6)
                    * three_j(j4, j5, j3, -m4, m5, m3);
                if prod == 0.0 {
                    continue;
                }
                let phase2 = (j1 - m1) + (j2 - m2) + (j3 - m3) + (j4 - m4) + (j5 - m5) + (j6 - m6);
                debug_assert_eq!(phase2 % 2, 0);
                total += if (phase2 / 2).rem_euclid(2) == 0 {
                    prod
                } else {
                    -prod
                };
            }
        }
    }
    total
}

/// Racah-Wigner 6j-symbol via Racah's single-sum formula (twice-spin
/// arguments); an independent second reference for the contraction.
pub fn sixj_racah(j1: i64, j2: i64, j3: i64, j4: i64, j5: i64, j6: i64) -> f64 {
    let triples = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triples.iter().any(|&(a, b, c)| !triple_ok(a, b, c)) {
        return 0.0;
    }
    let pref_ln: f64 = triples
        .iter()
        .map(|&(a, b, c)| triangle_coeff_ln(a, b, c))
        .sum::<f64>()
        * 0.5;
    let lows = [
        (j1 + j2 + j3) / 2,
        (j1 + j5 + j6) / 2,
        (j4 + j2 + j6) / 2,
        (j4 + j5 + j3) / 2,
    ];
    let highs = [
        (j1 + j2 + j4 + j5) / 2,
        (j2 + j3 + j5 + j6) / 2,
        (j3 + j1 + j6 + j4) / 2,
    ];
    let tmin = *lows.iter().max().unwrap();
    let tmax = *highs.iter().min().unwrap();
    let mut sum = 0.0f64;
    for t in tmin..=tmax {
        let mut den_ln = 0.0;
        for &lo in &lows {
            den_ln += ln_fact_f64(t - lo);
        }
        for &hi in &highs {
            den_ln += ln_fact_f64(hi - t);
        }
        let term = (pref_ln + ln_fact_f64(t + 1) - den_ln).exp();
        sum += if t % 2 == 0 { term } else { -term };
    }
    sum
}
