//! Rational closed forms built from Chebyshev polynomials of the second kind.
//!
//! `U_j` is only ever evaluated at `1/(2 sqrt x)`, and there
//! `U_j(1/(2 sqrt x)) = b_j(x) * x^(-j/2)` for the integer polynomials
//!
//! ```text
//! b_0 = 1, b_1 = 1, b_{j+1} = b_j - x b_{j-1}.
//! ```
//!
//! Substituting this into each closed form collects all half-integer powers
//! of `x` into one integer exponent, so everything below is integer
//! polynomial arithmetic. The cleared exponents are:
//!
//! - `F_0 = b_{k-1} / b_k`;
//! - `F_r = x^(k+r-1) b_{k-1}^(r-1) / b_k^(r+1)` for `1 <= r <= k`, from
//!   `(r-1)/2 - (k-1)(r-1)/2 + k(r+1)/2 = k + r - 1`;
//! - the `j`-th correction term for `r > k` carries
//!   `(b_k / b_{k-1})^(kj) x^(-j(k-1))`, since
//!   `kj * (-k/2 - (k-2)/(2k) + (k-1)/2) = -j(k-1)`;
//! - `Phi_0 = sum_{j=1}^{k-2} b_j^2 x^(k+1-j) / b_k^2`, from
//!   `1 - j + k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bigseries::{BiSeries, YDegree};
use crate::binom::binomial_big;
use crate::cfengine::cf_g_capped;
use crate::error::{Error, Result};

/// Dense polynomial in `x` with big-integer coefficients; index is degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct XPolynomial(Vec<BigInt>);

impl XPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        XPolynomial(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        XPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        XPolynomial(vec![BigInt::one()])
    }

    /// `c * x^m`
    pub fn monomial(c: impl Into<BigInt>, m: usize) -> Self {
        let mut v = vec![BigInt::zero(); m];
        v.push(c.into());
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, m: usize) -> BigInt {
        self.0.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// Multiplies by `x^m`.
    pub fn shift(&self, m: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); m];
        v.extend_from_slice(&self.0);
        XPolynomial(v)
    }

    /// Divides by `x^m`, or `None` if some coefficient below `x^m` is nonzero.
    pub fn unshift(&self, m: usize) -> Option<Self> {
        if self.0.iter().take(m).any(|c| !c.is_zero()) {
            return None;
        }
        Some(XPolynomial(self.0.iter().skip(m).cloned().collect()))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl fmt::Debug for XPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for XPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms =
            self.0
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| match m {
                    0 => format!("{c}"),
                    1 => format!("{c}*x"),
                    _ => format!("{c}*x^{m}"),
                });
        write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
    }
}

impl Add for &XPolynomial {
    type Output = XPolynomial;

    fn add(self, rhs: &XPolynomial) -> XPolynomial {
        let len = self.0.len().max(rhs.0.len());
        XPolynomial::new((0..len).map(|m| self.coeff(m) + rhs.coeff(m)).collect())
    }
}

impl Sub for &XPolynomial {
    type Output = XPolynomial;

    fn sub(self, rhs: &XPolynomial) -> XPolynomial {
        let len = self.0.len().max(rhs.0.len());
        XPolynomial::new((0..len).map(|m| self.coeff(m) - rhs.coeff(m)).collect())
    }
}

impl Neg for &XPolynomial {
    type Output = XPolynomial;

    fn neg(self) -> XPolynomial {
        XPolynomial(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &XPolynomial {
    type Output = XPolynomial;

    fn mul(self, rhs: &XPolynomial) -> XPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return XPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        XPolynomial::new(out)
    }
}

/// `num / den` with `den(0) = 1`, so the power-series expansion is integral.
/// Not reduced; compare with [`RationalGF::equals`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGF {
    num: XPolynomial,
    den: XPolynomial,
}

impl RationalGF {
    pub fn new(num: XPolynomial, den: XPolynomial) -> Result<Self> {
        if den.constant_term() != BigInt::one() {
            return Err(Error::BadDenominator(den.constant_term().to_string()));
        }
        Ok(RationalGF { num, den })
    }

    pub fn num(&self) -> &XPolynomial {
        &self.num
    }

    pub fn den(&self) -> &XPolynomial {
        &self.den
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn equals(&self, other: &RationalGF) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Coefficients of `x^0..=x^order`.
    pub fn expand(&self, order: usize) -> Vec<BigInt> {
        let den = self.den.coeffs();
        let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut c = self.num.coeff(n);
            for (m, d) in den.iter().enumerate().skip(1).take(n) {
                if !d.is_zero() {
                    c -= d * &out[n - m];
                }
            }
            out.push(c);
        }
        out
    }

    /// The expansion as a `y`-free [`BiSeries`].
    pub fn to_series(&self, order: usize, y_cap: Option<YDegree>) -> BiSeries {
        BiSeries::from_x_coeffs(&self.expand(order), order).with_optional_y_cap(y_cap)
    }
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// `b_0..=b_upto`.
pub fn b_family(upto: usize) -> Vec<XPolynomial> {
    let mut b = vec![XPolynomial::one()];
    if upto >= 1 {
        b.push(XPolynomial::one());
    }
    for j in 1..upto {
        let next = &b[j] - &b[j - 1].shift(1);
        b.push(next);
    }
    b
}

/// `b_j = x^(j/2) U_j(1/(2 sqrt x))`.
pub fn b_poly(j: usize) -> XPolynomial {
    b_family(j).pop().expect("nonempty")
}

/// `R_j = b_{j-1} / b_j`, the `j`-th approximant of the Catalan fraction.
/// `R_0 = 0`.
pub fn r_rational(j: usize) -> RationalGF {
    if j == 0 {
        return RationalGF::new(XPolynomial::zero(), XPolynomial::one()).expect("den 1");
    }
    let mut b = b_family(j);
    let bj = b.pop().expect("nonempty");
    RationalGF::new(b.pop().expect("j >= 1"), bj).expect("b_j(0) = 1")
}

fn require_k(k: usize, min: usize, reason: &'static str) -> Result<()> {
    if k < min {
        return Err(Error::InvalidK { k, reason });
    }
    Ok(())
}

/// Highest `r` covered by [`f_closed_extended`]: `k(k+3)/2`.
pub fn extended_range_max(k: usize) -> u64 {
    (k * (k + 3) / 2) as u64
}

/// `F_r(x; k)` for `0 <= r <= k`.
pub fn f_closed(r: u64, k: usize) -> Result<RationalGF> {
    require_k(k, 1, "pattern length must be at least 1")?;
    if r > k as u64 {
        return Err(Error::OutOfRange {
            r,
            k,
            lo: 0,
            hi: k as u64,
            hint: "use the extended closed form for k < r <= k(k+3)/2",
        });
    }
    let b = b_family(k);
    let (bk, bk1) = (&b[k], &b[k - 1]);
    if r == 0 {
        return RationalGF::new(bk1.clone(), bk.clone());
    }
    let r32 = r as u32;
    RationalGF::new(bk1.pow(r32 - 1).shift(k + r as usize - 1), bk.pow(r32 + 1))
}

/// `F_r(x; k)` for `1 <= r <= k(k+3)/2`, summing the correction terms
///
/// ```text
/// C(r - kj + j - 1, j) x^(k+r-1 - j(k-1)) b_{k-1}^(r-1-kj) b_k^(kj) / b_k^(r+1)
/// ```
///
/// for `j = 0..=floor((r-1)/k)`. Negative powers of `x` or `b_{k-1}` are
/// cleared over a common denominator; the `x` powers must cancel exactly.
pub fn f_closed_extended(r: u64, k: usize) -> Result<RationalGF> {
    require_k(k, 1, "pattern length must be at least 1")?;
    let hi = extended_range_max(k);
    if r < 1 || r > hi {
        return Err(Error::OutOfRange {
            r,
            k,
            lo: 1,
            hi,
            hint: "the extended closed form covers 1 <= r <= k(k+3)/2 only",
        });
    }
    let b = b_family(k);
    let (bk, bk1) = (&b[k], &b[k - 1]);
    let (ki, ri) = (k as i64, r as i64);
    let terms: Vec<(BigInt, i64, i64, u32)> = (0..=(ri - 1) / ki)
        .map(|j| {
            let coef = BigInt::from(binomial_big((ri - ki * j + j - 1) as u64, j as u64));
            (
                coef,
                ki + ri - 1 - j * (ki - 1),
                ri - 1 - ki * j,
                (ki * j) as u32,
            )
        })
        .collect();
    let x_low = terms
        .iter()
        .map(|t| t.1)
        .min()
        .expect("j = 0 present")
        .min(0);
    let a_low = terms
        .iter()
        .map(|t| t.2)
        .min()
        .expect("j = 0 present")
        .min(0);

    let mut num = XPolynomial::zero();
    for (coef, x_exp, a_exp, bk_exp) in &terms {
        let part = &bk1.pow((a_exp - a_low) as u32) * &bk.pow(*bk_exp);
        num = &num + &part.scale(coef).shift((x_exp - x_low) as usize);
    }
    let num = num.unshift((-x_low) as usize).ok_or_else(|| {
        Error::Internal(format!(
            "negative powers of x failed to cancel in F_{r}(x; {k})"
        ))
    })?;
    let den = &bk.pow(r as u32 + 1) * &bk1.pow((-a_low) as u32);
    RationalGF::new(num, den)
}

/// `Phi_0(x; k)` for `k >= 3`.
pub fn phi0_closed(k: usize) -> Result<RationalGF> {
    require_k(k, 3, "the one-132 closed form needs k >= 3")?;
    let b = b_family(k);
    let num = (1..=k - 2).fold(XPolynomial::zero(), |acc, j| {
        &acc + &(&b[j] * &b[j]).shift(k + 1 - j)
    });
    RationalGF::new(num, &b[k] * &b[k])
}

/// `b_{n-1}^2 - b_n b_{n-2} - x^(n-1)`, which vanishes identically.
///
/// # Panics
///
/// If `n < 2`.
pub fn cheb_identity_residual(n: usize) -> XPolynomial {
    assert!(n >= 2, "identity needs n >= 2");
    let b = b_family(n);
    let lhs = &(&b[n - 1] * &b[n - 1]) - &(&b[n] * &b[n - 2]);
    &lhs - &XPolynomial::monomial(1, n - 1)
}

/// `sum_{m=1..=order} t^m` for a series `t` of positive `x`-order.
fn geometric_tail(t: &BiSeries) -> Result<BiSeries> {
    let mut power = t.clone();
    let mut sum = t.clone();
    for _ in 1..t.order() {
        power = power.mul(t)?;
        if power.is_zero() {
            break;
        }
        sum = sum.add(&power)?;
    }
    Ok(sum)
}

/// `R_k + (R_k - R_{k-1}) sum_{m>=1} (x R_k G)^m`, truncated to `order`.
/// Must equal `F(x, y; k)`.
pub fn corollary_series(k: usize, order: usize, y_cap: Option<YDegree>) -> Result<BiSeries> {
    require_k(k, 1, "pattern length must be at least 1")?;
    let rk = r_rational(k).to_series(order, y_cap);
    let rk1 = r_rational(k - 1).to_series(order, y_cap);
    let g = cf_g_capped(k, order, y_cap)?;
    let ratio = rk.mul(&g)?.mul_monomial(1, 0)?.truncate(order);
    rk.add(&rk.sub(&rk1)?.mul(&geometric_tail(&ratio)?)?)
}

/// `R_j (1 - x R_{j-1} G) / (1 - x R_j G)`, truncated to `order`. Must equal
/// the `j`-th step of the ladder started from `G`.
pub fn lemma_series(j: usize, k: usize, order: usize, y_cap: Option<YDegree>) -> Result<BiSeries> {
    require_k(k, 1, "pattern length must be at least 1")?;
    let g = cf_g_capped(k, order, y_cap)?;
    let one = BiSeries::one(order).with_optional_y_cap(y_cap);
    let x_r_g = |i: usize| -> Result<BiSeries> {
        Ok(r_rational(i)
            .to_series(order, y_cap)
            .mul(&g)?
            .mul_monomial(1, 0)?
            .truncate(order))
    };
    let upper = one.sub(&x_r_g(j.saturating_sub(1))?)?;
    let lower = one.sub(&x_r_g(j)?)?.reciprocal_unit()?;
    r_rational(j)
        .to_series(order, y_cap)
        .mul(&upper)?
        .mul(&lower)
}
