//! Closed forms for the average-case behaviour of the insertion and merge
//! heuristics on uniform random tournaments.
//!
//! * `b_k(k)`: expected backward edges between the k-th inserted vertex and
//!   the vertices inserted before it, `k/2 - 3/2 + 2^(1-k)` for `k >= 3`.
//! * `expected_total_backward(n)`: `(n^2 - 5n + 8)/4 - 2^(1-n)`, the sum of
//!   `b_k` over all stages.
//! * `h_prob(i, j)`: probability that the i-th head of one merge run is
//!   compared with the j-th head of the other, `C(i+j-2, i-1) / 2^(i+j-2)`.
//! * `backward_prob(i, j)`: probability that the edge between those two
//!   vertices ends up backward after the merge.
//!
//! Exact values use [`ExactRational`]; the `_f64` evaluators serve indices
//! where the powers of two no longer fit a machine integer.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type ExactRational = BigRational;

pub fn rational(numer: i64, denom: i64) -> ExactRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `2^(-e)`.
fn inv_pow2(e: u64) -> ExactRational {
    BigRational::new(BigInt::one(), BigInt::one() << e)
}

fn check_index(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidIndex(format!("{name} must be >= 1")));
    }
    Ok(())
}

pub fn b_k(k: u64) -> Result<ExactRational> {
    check_index("k", k)?;
    if k <= 2 {
        return Ok(BigRational::zero());
    }
    Ok(rational(k as i64 - 3, 2) + BigRational::from_integer(BigInt::from(2)) * inv_pow2(k))
}

pub fn expected_total_backward(n: u64) -> Result<ExactRational> {
    if n < 2 {
        return Err(Error::InvalidIndex(format!("n must be >= 2, got {n}")));
    }
    let nb = BigInt::from(n);
    let poly = &nb * &nb - BigInt::from(5) * &nb + BigInt::from(8);
    Ok(BigRational::new(poly, BigInt::from(4))
        - BigRational::from_integer(BigInt::from(2)) * inv_pow2(n))
}

/// `C(top, bottom) / 2^pow`.
fn binom_term(top: u64, bottom: u64, pow: u64) -> ExactRational {
    BigRational::new(
        binomial(BigInt::from(top), BigInt::from(bottom)),
        BigInt::one() << pow,
    )
}

pub fn h_prob(i: u64, j: u64) -> Result<ExactRational> {
    check_index("i", i)?;
    check_index("j", j)?;
    Ok(binom_term(i + j - 2, i - 1, i + j - 2))
}

pub fn backward_prob(i: u64, j: u64) -> Result<ExactRational> {
    check_index("i", i)?;
    check_index("j", j)?;
    // Every term is C(top, bottom) / 2^top; sum numerators over 2^max_top.
    let max_top = (i + j).saturating_sub(3);
    let numer = column_sum(i - 1, j - 1, max_top) + column_sum(j - 1, i - 1, max_top);
    Ok(BigRational::new(numer, BigInt::one() << (max_top + 2)))
}

/// `sum_{t=0}^{count-1} C(bottom + t, bottom) * 2^(max_top - bottom - t)`,
/// stepping the binomial down its column.
fn column_sum(bottom: u64, count: u64, max_top: u64) -> BigInt {
    let mut c = BigInt::one();
    let mut sum = BigInt::zero();
    for t in 0..count {
        let top = bottom + t;
        if t > 0 {
            c = c * BigInt::from(top) / BigInt::from(t);
        }
        sum += &c << (max_top - top);
    }
    sum
}

/// `C(m, k) / 2^m` by the multiplicative recurrence, halving as it goes so
/// the running value stays near 1.
fn binom_over_pow2(m: u64, k: u64) -> f64 {
    let k = k.min(m - k);
    let mut r = 1.0f64;
    let mut halvings = m;
    for t in 1..=k {
        r *= (m - k + t) as f64 / t as f64;
        while r > 1.0 && halvings > 0 {
            r *= 0.5;
            halvings -= 1;
        }
    }
    if halvings > 1100 {
        return 0.0;
    }
    r * 2f64.powi(-(halvings as i32))
}

pub fn b_k_f64(k: u64) -> Result<f64> {
    check_index("k", k)?;
    if k <= 2 {
        return Ok(0.0);
    }
    Ok(k as f64 / 2.0 - 1.5 + 2f64.powf(1.0 - k as f64))
}

pub fn expected_total_backward_f64(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidIndex(format!("n must be >= 2, got {n}")));
    }
    let n = n as f64;
    Ok((n * n - 5.0 * n + 8.0) / 4.0 - 2f64.powf(1.0 - n))
}

pub fn h_prob_f64(i: u64, j: u64) -> Result<f64> {
    check_index("i", i)?;
    check_index("j", j)?;
    Ok(binom_over_pow2(i + j - 2, i - 1))
}

pub fn backward_prob_f64(i: u64, j: u64) -> Result<f64> {
    check_index("i", i)?;
    check_index("j", j)?;
    let a: f64 = (1..j).map(|k| binom_over_pow2(k + i - 2, i - 1)).sum();
    let b: f64 = (1..i).map(|k| binom_over_pow2(k + j - 2, j - 1)).sum();
    Ok(0.25 * (a + b))
}
