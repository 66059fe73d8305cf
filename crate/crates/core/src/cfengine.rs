//! Continued fractions and functional equations evaluated as truncated
//! [`BiSeries`].
//!
//! Every level of every fraction here multiplies the level below it by a
//! monomial of `x`-degree exactly one. The value at depth `d` therefore only
//! reaches the result through `x^d`, so it is needed only through order
//! `order - d`, and anything below depth `order` is invisible. Seeding the
//! tail with its constant term (1 for the fractions, 0 for the one-132
//! series) is exact, and each level is computed at the precision it
//! actually contributes.

use crate::bigseries::{BiSeries, YDegree};
use crate::binom::binomial;
use crate::error::{Error, Result};

/// Exponents of `y` in the substituted monomials at one depth of the
/// fraction for pattern length `k`.
///
/// Under `q_1 = x`, `q_2 = ... = q_{k-1} = 1`, `q_k = y`, the weight
/// `q^{d,m} = prod_j q_j^C(d, j - m)` becomes `x * y^e1` for `m = 1` and
/// `y^e2` for `m = 2` (the `q_1` exponent `C(d, -1)` vanishes).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelExponents {
    pub k: usize,
    pub d: usize,
    /// `C(d, k - 1)`
    pub e1: YDegree,
    /// `C(d, k - 2)`
    pub e2: YDegree,
}

impl LevelExponents {
    pub fn new(k: usize, d: usize) -> Result<Self> {
        let c = |b: i64| binomial(d as i64, b).ok_or(Error::DegreeOverflow);
        Ok(LevelExponents {
            k,
            d,
            e1: c(k as i64 - 1)?,
            e2: c(k as i64 - 2)?,
        })
    }
}

/// `d_i = C(i - 1, k - 1)`, the `y`-exponent of the `i`-th numerator
/// (1-based) of the fraction for `F(x, y; k)`.
pub fn level_exponent(i: usize, k: usize) -> Result<YDegree> {
    binomial(i as i64 - 1, k as i64 - 1).ok_or(Error::DegreeOverflow)
}

/// `1 / (1 - x y^{e(0)} / (1 - x y^{e(1)} / (1 - ...)))` through order
/// `order`, where `numerator_y(d)` gives the `y`-exponent at depth `d`.
pub fn continued_fraction<F>(
    order: usize,
    y_cap: Option<YDegree>,
    mut numerator_y: F,
) -> Result<BiSeries>
where
    F: FnMut(usize) -> Result<YDegree>,
{
    let one = |o: usize| BiSeries::one(o).with_optional_y_cap(y_cap);
    let mut t = one(0);
    for d in (0..order).rev() {
        let step = t.mul_monomial(1, numerator_y(d)?)?;
        t = one(order - d).sub(&step)?.reciprocal_unit()?;
    }
    Ok(t)
}

fn require_k(k: usize, min: usize, reason: &'static str) -> Result<()> {
    if k < min {
        return Err(Error::InvalidK { k, reason });
    }
    Ok(())
}

/// `F(x, y; k)`: coefficient of `x^n y^r` is the number of 132-avoiders of
/// length `n` with exactly `r` occurrences of `12...k`.
pub fn cf_f(k: usize, order: usize) -> Result<BiSeries> {
    cf_f_capped(k, order, None)
}

pub fn cf_f_capped(k: usize, order: usize, y_cap: Option<YDegree>) -> Result<BiSeries> {
    require_k(k, 1, "pattern length must be at least 1")?;
    continued_fraction(order, y_cap, |d| level_exponent(d + 1, k))
}

/// `G(x, y; k) = y / (1 - x y^C(k,1) / (1 - x y^C(k+1,2) / ...))`.
pub fn cf_g(k: usize, order: usize) -> Result<BiSeries> {
    cf_g_capped(k, order, None)
}

pub fn cf_g_capped(k: usize, order: usize, y_cap: Option<YDegree>) -> Result<BiSeries> {
    require_k(k, 1, "pattern length must be at least 1")?;
    let tail = continued_fraction(order, y_cap, |d| {
        binomial((k + d) as i64, d as i64 + 1).ok_or(Error::DegreeOverflow)
    })?;
    tail.mul_monomial(0, 1)
}

/// `S_0 = G, S_1, ..., S_k` with `S_j = 1 / (1 - x S_{j-1})`.
pub fn s_ladder_steps(k: usize, order: usize, y_cap: Option<YDegree>) -> Result<Vec<BiSeries>> {
    let mut steps = vec![cf_g_capped(k, order, y_cap)?];
    let one = BiSeries::one(order).with_optional_y_cap(y_cap);
    for _ in 0..k {
        let prev = steps.last().expect("nonempty");
        let shifted = prev.mul_monomial(1, 0)?.truncate(order);
        steps.push(one.sub(&shifted)?.reciprocal_unit()?);
    }
    Ok(steps)
}

/// `S_k`, which must coincide with [`cf_f`].
pub fn s_ladder(k: usize, order: usize) -> Result<BiSeries> {
    s_ladder_capped(k, order, None)
}

pub fn s_ladder_capped(k: usize, order: usize, y_cap: Option<YDegree>) -> Result<BiSeries> {
    Ok(s_ladder_steps(k, order, y_cap)?.pop().expect("nonempty"))
}

/// `Phi(x, y; k)`: coefficient of `x^n y^r` counts permutations of length `n`
/// with exactly one 132 occurrence and exactly `r` occurrences of `12...k`.
///
/// Backward recursion over depth `d`, with `W` the avoider fraction:
///
/// ```text
/// W(d) = 1 / (1 - x y^e1 W(d+1))
/// Om(d) = x y^(e1 + 2 e2) (W(d) - 1)^2 + x y^e1 W(d)^2 Om(d+1)
/// ```
///
/// `k = 2` is accepted as an extension; the recursion is only backed by
/// enumeration checks for `k >= 3`.
pub fn omega_series(k: usize, order: usize) -> Result<BiSeries> {
    omega_series_capped(k, order, None)
}

pub fn omega_series_capped(k: usize, order: usize, y_cap: Option<YDegree>) -> Result<BiSeries> {
    require_k(k, 2, "the one-132 recursion needs k >= 2")?;
    let one = |o: usize| BiSeries::one(o).with_optional_y_cap(y_cap);
    let mut w = one(0);
    let mut omega = BiSeries::zero(0).with_optional_y_cap(y_cap);
    for d in (0..order).rev() {
        let o = order - d;
        let lv = LevelExponents::new(k, d)?;
        let w_here = one(o).sub(&w.mul_monomial(1, lv.e1)?)?.reciprocal_unit()?;
        let excess = lv
            .e2
            .checked_mul(2)
            .and_then(|e| e.checked_add(lv.e1))
            .ok_or(Error::DegreeOverflow)?;
        let first = w_here
            .sub(&one(o))?
            .square()?
            .truncate(o - 1)
            .mul_monomial(1, excess)?;
        let second = w_here
            .truncate(o - 1)
            .square()?
            .mul(&omega)?
            .mul_monomial(1, lv.e1)?;
        omega = first.add(&second)?;
        w = w_here;
    }
    Ok(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom::catalan_numbers;
    use crate::permcore::{brute_one132_table, brute_table};
    use num_bigint::BigInt;
    use num_traits::Zero;

    /// `(x exponent, y exponent)` of `q^{d,m}` under the substitution, read
    /// off the full product over `j = 1..=k`.
    fn substituted(d: usize, m: usize, k: usize) -> (u64, u64) {
        let c = |j: usize| binomial(d as i64, j as i64 - m as i64).unwrap();
        if k == 1 {
            // q_1 = x y
            return (c(1), c(1));
        }
        (c(1), c(k))
    }

    #[test]
    fn substituted_weights_match_level_exponents() {
        for k in 2..=7 {
            for d in 0..12 {
                let lv = LevelExponents::new(k, d).unwrap();
                assert_eq!(substituted(d, 1, k), (1, lv.e1));
                assert_eq!(substituted(d, 2, k), (0, lv.e2));
                assert_eq!(lv.e1, level_exponent(d + 1, k).unwrap());
                if d == k - 1 {
                    assert_eq!(lv.e1, 1);
                }
            }
        }
    }

    #[test]
    fn weights_multiply_like_pascal() {
        // q^{d,m} q^{d,m+1} = q^{d+1,m}, exponent by exponent
        for k in 1..=6i64 {
            for d in 0..10i64 {
                for m in 1..k {
                    for j in 1..=k {
                        let e = |dd: i64, mm: i64| binomial(dd, j - mm).unwrap();
                        assert_eq!(e(d, m) + e(d, m + 1), e(d + 1, m));
                    }
                }
            }
        }
    }

    #[test]
    fn level_exponent_examples() {
        assert_eq!(level_exponent(1, 3).unwrap(), 0);
        assert_eq!(level_exponent(3, 3).unwrap(), 1);
        assert_eq!(level_exponent(5, 3).unwrap(), 6);
        assert_eq!(level_exponent(4, 1).unwrap(), 1);
    }

    #[test]
    fn f_series_examples() {
        assert_eq!(cf_f(3, 6).unwrap().coeff(3, 1), BigInt::from(1));
        let catalan: Vec<BigInt> = catalan_numbers(6).into_iter().map(BigInt::from).collect();
        for k in 1..=7 {
            assert_eq!(cf_f(k, 6).unwrap().eval_y_one(), catalan, "k={k}");
        }
        let f1 = cf_f(1, 8).unwrap();
        assert!(f1.terms().all(|(n, r, _)| r == n as u64));
        assert!(cf_f(0, 3).is_err());
    }

    #[test]
    fn g_series_examples() {
        for k in 1..=5 {
            let g = cf_g(k, 6).unwrap();
            assert_eq!(g.coeff(0, 1), BigInt::from(1));
            assert_eq!(g.coeff(1, k as u64 + 1), BigInt::from(1));
            assert!(g.y_slice(0).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn ladder_reproduces_f() {
        for k in 1..=5 {
            assert_eq!(s_ladder(k, 12).unwrap(), cf_f(k, 12).unwrap(), "k={k}");
        }
        let one_step = s_ladder_steps(1, 5, None).unwrap();
        assert_eq!(one_step.len(), 2);
    }

    #[test]
    fn f_matches_enumeration() {
        for k in 1..=5 {
            let f = cf_f(k, 8).unwrap();
            for n in 0..=8 {
                let table = brute_table(n, k).unwrap();
                let from_cf: Vec<_> = f
                    .terms()
                    .filter(|t| t.0 == n)
                    .map(|(_, r, c)| (r, c.clone()))
                    .collect();
                let from_brute: Vec<_> = table
                    .into_iter()
                    .map(|(r, c)| (r, BigInt::from(c)))
                    .collect();
                assert_eq!(from_cf, from_brute, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn deepening_is_stable() {
        for k in [2, 3] {
            let shallow = cf_f(k, 8).unwrap();
            let deep = cf_f(k, 14).unwrap().truncate(8);
            assert_eq!(shallow, deep);
            let shallow = omega_series(k + 1, 7).unwrap();
            let deep = omega_series(k + 1, 11).unwrap().truncate(7);
            assert_eq!(shallow, deep);
        }
    }

    #[test]
    fn omega_examples() {
        let om = omega_series(3, 8).unwrap();
        assert_eq!(om.coeff(3, 0), BigInt::from(1));
        for n in 0..=2 {
            assert!(om.y_slice(0)[n].is_zero());
            assert_eq!(om.eval_y_one()[n], BigInt::zero());
        }
        let totals = omega_series(9, 4).unwrap().eval_y_one();
        let scan: BigInt = brute_one132_table(4, 9)
            .unwrap()
            .values()
            .sum::<num_bigint::BigUint>()
            .into();
        assert_eq!(totals[4], scan);
        assert!(omega_series(1, 4).is_err());
    }

    #[test]
    fn omega_matches_scan() {
        for k in 3..=5 {
            let om = omega_series(k, 7).unwrap();
            for n in 0..=7 {
                let scan = brute_one132_table(n, k).unwrap();
                let from_om: Vec<_> = om
                    .terms()
                    .filter(|t| t.0 == n)
                    .map(|(_, r, c)| (r, c.clone()))
                    .collect();
                let from_scan: Vec<_> = scan
                    .into_iter()
                    .map(|(r, c)| (r, BigInt::from(c)))
                    .collect();
                assert_eq!(from_om, from_scan, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn capped_slices_agree() {
        let full = cf_f(3, 14).unwrap();
        let capped = cf_f_capped(3, 14, Some(4)).unwrap();
        for r in 0..=4 {
            assert_eq!(full.y_slice(r), capped.y_slice(r));
        }
        assert_eq!(capped.max_y_degree(14), Some(4));
    }
}
