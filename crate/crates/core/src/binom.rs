//! Binomial coefficients with the convention `C(a, b) = 0` whenever
//! `a < b` or `b < 0`.

use num_bigint::BigUint;
use num_traits::One;

/// `C(a, b)` as a `u64`, or `None` if the value overflows.
pub fn binomial(a: i64, b: i64) -> Option<u64> {
    if b < 0 || a < b {
        return Some(0);
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((a - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

pub fn binomial_big(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::default();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Catalan numbers `C_0..=C_n` by the convolution recurrence.
pub fn catalan_numbers(n: usize) -> Vec<BigUint> {
    let mut c: Vec<BigUint> = Vec::with_capacity(n + 1);
    c.push(BigUint::one());
    for m in 1..=n {
        let next = (0..m).map(|i| &c[i] * &c[m - 1 - i]).sum();
        c.push(next);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_conventions() {
        assert_eq!(binomial(2, 3), Some(0));
        assert_eq!(binomial(5, -1), Some(0));
        assert_eq!(binomial(-1, -1), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
    }

    #[test]
    fn pascal_rows() {
        for a in 1..40i64 {
            for b in 1..=a {
                let lhs = binomial(a, b).unwrap();
                let rhs = binomial(a - 1, b).unwrap() + binomial(a - 1, b - 1).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(BigUint::from(lhs), binomial_big(a as u64, b as u64));
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(binomial(200, 100), None);
        assert_eq!(binomial(60, 30), Some(118264581564861424));
    }

    #[test]
    fn catalan_prefix() {
        let c: Vec<u64> = catalan_numbers(10)
            .iter()
            .map(|v| v.try_into().unwrap())
            .collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]);
    }
}
