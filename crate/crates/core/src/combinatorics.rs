use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// `C(n, k)` in checked 128-bit arithmetic.
pub(crate) fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) is always divisible by (j + 1)
        acc = acc.checked_mul(u128::from(n - j))? / u128::from(j + 1);
    }
    Some(acc)
}

pub(crate) fn factorial(n: u64) -> Option<u128> {
    (1..=n).try_fold(1u128, |acc, j| acc.checked_mul(u128::from(j)))
}

pub(crate) fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, j| acc * j)
}

/// `n!` rounded to the nearest double.
pub(crate) fn factorial_f64(n: u64) -> f64 {
    match factorial(n) {
        Some(v) => v as f64,
        None => factorial_big(n).to_f64().unwrap_or(f64::INFINITY),
    }
}

/// `r! C(m, r) C(n, r)` exactly, or `None` on overflow.
pub(crate) fn hlito_coefficient(m: u64, n: u64, r: u64) -> Option<u128> {
    factorial(r)?
        .checked_mul(binomial(m, r)?)?
        .checked_mul(binomial(n, r)?)
}

/// The same coefficient rounded to a double. Exact integers past the
/// 128-bit range are formed in big-integer arithmetic before rounding.
pub(crate) fn hlito_coefficient_f64(m: u64, n: u64, r: u64) -> f64 {
    match hlito_coefficient(m, n, r) {
        Some(v) => v as f64,
        None => {
            let big = factorial_big(r) * binomial_big(m, r) * binomial_big(n, r);
            big.to_f64().unwrap_or(f64::INFINITY)
        }
    }
}

fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, j| acc * (n - j) / (j + 1))
}
