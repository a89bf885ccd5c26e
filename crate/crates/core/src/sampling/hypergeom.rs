//! Exact hypergeometric probabilities in rational arithmetic.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn check_args(n: usize, sample_size: usize, v_len: usize) -> Result<()> {
    if sample_size > n || v_len > n {
        return Err(Error::invalid(format!(
            "need sample_size <= n and v_len <= n (n = {n}, sample_size = {sample_size}, v_len = {v_len})"
        )));
    }
    Ok(())
}

/// Probability that a uniform `sample_size`-subset of `[n]` meets a fixed
/// `v_len`-subset in exactly `s` elements. Zero outside the support.
pub fn hypergeom_pmf(n: usize, sample_size: usize, v_len: usize, s: usize) -> Result<BigRational> {
    check_args(n, sample_size, v_len)?;
    if s > v_len || s > sample_size || sample_size - s > n - v_len {
        return Ok(BigRational::zero());
    }
    let num = binomial_big(v_len, s) * binomial_big(n - v_len, sample_size - s);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(binomial_big(n, sample_size))))
}

/// `Prob[X >= threshold]` for the hypergeometric count `X`, summed exactly.
pub fn hypergeom_tail(n: usize, sample_size: usize, v_len: usize, threshold: f64) -> Result<BigRational> {
    check_args(n, sample_size, v_len)?;
    let mut acc = BigRational::zero();
    for s in 0..=v_len.min(sample_size) {
        if s as f64 >= threshold {
            acc += hypergeom_pmf(n, sample_size, v_len, s)?;
        }
    }
    Ok(acc)
}
