//! Truncated bivariate power series in `x` and `y` with big-integer
//! coefficients.
//!
//! A [`BiSeries`] knows every coefficient of `x`-degree `0..=order`. Each
//! `x`-degree holds a sparse polynomial in `y`. An optional `y` cap drops
//! every term of higher `y`-degree after each operation; since products never
//! lower the `y`-degree, the retained coefficients stay exact.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type YDegree = u64;

/// Sparse polynomial in `y`: sorted by degree, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct YPoly(Vec<(YDegree, BigInt)>);

impl YPoly {
    fn one() -> Self {
        YPoly(vec![(0, BigInt::one())])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn coeff(&self, r: YDegree) -> BigInt {
        match self.0.binary_search_by_key(&r, |(d, _)| *d) {
            Ok(i) => self.0[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    fn capped(mut self, cap: Option<YDegree>) -> Self {
        if let Some(cap) = cap {
            let keep = self.0.partition_point(|(d, _)| *d <= cap);
            self.0.truncate(keep);
        }
        self
    }

    fn add(&self, other: &YPoly, negate_other: bool) -> YPoly {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: &BigInt| if negate_other { -c } else { c.clone() };
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, rhs(&b[j].1)));
                j += 1;
            } else {
                let c = if negate_other {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        YPoly(out)
    }

    /// `acc += a * b`, dropping degrees above `cap`.
    fn mul_acc(acc: &mut Accumulator, a: &YPoly, b: &YPoly, cap: Option<YDegree>) -> Result<()> {
        let (Some(a_max), Some(b_max)) = (a.0.last(), b.0.last()) else {
            return Ok(());
        };
        a_max.0.checked_add(b_max.0).ok_or(Error::DegreeOverflow)?;
        let cap = cap.unwrap_or(YDegree::MAX);
        for (da, ca) in &a.0 {
            for (db, cb) in &b.0 {
                let d = da + db;
                if d > cap {
                    break;
                }
                acc.add_product(d, ca, cb);
            }
        }
        Ok(())
    }

    fn shift(&self, dy: YDegree) -> Result<YPoly> {
        self.0
            .iter()
            .map(|(d, c)| Ok((d.checked_add(dy).ok_or(Error::DegreeOverflow)?, c.clone())))
            .collect::<Result<Vec<_>>>()
            .map(YPoly)
    }
}

/// Scratch space for products: dense over small degree spans, hashed
/// otherwise.
enum Accumulator {
    Dense { base: YDegree, slots: Vec<BigInt> },
    Sparse(HashMap<YDegree, BigInt>),
}

impl Accumulator {
    const DENSE_LIMIT: u64 = 1 << 22;

    fn for_range(lo: YDegree, hi: YDegree) -> Self {
        if hi >= lo && hi - lo < Self::DENSE_LIMIT {
            Accumulator::Dense {
                base: lo,
                slots: vec![BigInt::zero(); (hi - lo + 1) as usize],
            }
        } else {
            Accumulator::Sparse(HashMap::new())
        }
    }

    fn add_product(&mut self, d: YDegree, a: &BigInt, b: &BigInt) {
        match self {
            Accumulator::Dense { base, slots } => slots[(d - *base) as usize] += a * b,
            Accumulator::Sparse(map) => *map.entry(d).or_default() += a * b,
        }
    }

    fn finish(self) -> YPoly {
        match self {
            Accumulator::Dense { base, slots } => YPoly(
                slots
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (base + i as u64, c))
                    .collect(),
            ),
            Accumulator::Sparse(map) => {
                let mut v: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                v.sort_unstable_by_key(|(d, _)| *d);
                YPoly(v)
            }
        }
    }
}

/// Degree span of `sum_m a[m] * b[n - m]` over the given index pairs.
fn product_span<'a>(pairs: impl Iterator<Item = (&'a YPoly, &'a YPoly)>) -> Option<(u64, u64)> {
    let mut span: Option<(u64, u64)> = None;
    for (a, b) in pairs {
        if let (Some(af), Some(al), Some(bf), Some(bl)) =
            (a.0.first(), a.0.last(), b.0.first(), b.0.last())
        {
            let lo = af.0.saturating_add(bf.0);
            let hi = al.0.saturating_add(bl.0);
            span = Some(match span {
                None => (lo, hi),
                Some((l, h)) => (l.min(lo), h.max(hi)),
            });
        }
    }
    span
}

/// A bivariate series known through `x`-degree `order`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries {
    y_cap: Option<YDegree>,
    layers: Vec<YPoly>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries {
            y_cap: None,
            layers: vec![YPoly::default(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigInt::one(), 0, 0, order)
    }

    /// `a * x^n * y^r`; the zero series when `n > order` or `a = 0`.
    pub fn monomial(a: impl Into<BigInt>, n: usize, r: YDegree, order: usize) -> Self {
        let a = a.into();
        let mut s = Self::zero(order);
        if n <= order && !a.is_zero() {
            s.layers[n] = YPoly(vec![(r, a)]);
        }
        s
    }

    /// Builds a series from `(n, r, coefficient)` triples; repeated keys add.
    pub fn from_terms<I>(order: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, YDegree, BigInt)>,
    {
        let mut maps: Vec<HashMap<YDegree, BigInt>> = vec![HashMap::new(); order + 1];
        for (n, r, c) in terms {
            if n <= order {
                *maps[n].entry(r).or_default() += c;
            }
        }
        let layers = maps
            .into_iter()
            .map(|m| {
                let mut v: Vec<_> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                v.sort_unstable_by_key(|(d, _)| *d);
                YPoly(v)
            })
            .collect();
        BiSeries {
            y_cap: None,
            layers,
        }
    }

    /// Embeds a univariate series in `x` as the `y^0` layer.
    pub fn from_x_coeffs(coeffs: &[BigInt], order: usize) -> Self {
        Self::from_terms(
            order,
            coeffs
                .iter()
                .take(order + 1)
                .enumerate()
                .map(|(n, c)| (n, 0, c.clone())),
        )
    }

    /// Restricts to `y`-degrees `<= cap` from here on. A tighter existing cap
    /// is kept.
    pub fn with_y_cap(mut self, cap: YDegree) -> Self {
        let cap = self.y_cap.map_or(cap, |c| c.min(cap));
        self.y_cap = Some(cap);
        self.layers = self
            .layers
            .into_iter()
            .map(|l| l.capped(Some(cap)))
            .collect();
        self
    }

    /// [`with_y_cap`](Self::with_y_cap) when `cap` is set.
    pub fn with_optional_y_cap(self, cap: Option<YDegree>) -> Self {
        match cap {
            Some(c) => self.with_y_cap(c),
            None => self,
        }
    }

    pub fn order(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn y_cap(&self) -> Option<YDegree> {
        self.y_cap
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(YPoly::is_zero)
    }

    pub fn coeff(&self, n: usize, r: YDegree) -> BigInt {
        self.layers.get(n).map_or_else(BigInt::zero, |l| l.coeff(r))
    }

    /// Nonzero terms as `(n, r, coefficient)`, ordered by `(n, r)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, YDegree, &BigInt)> + '_ {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(n, l)| l.0.iter().map(move |(r, c)| (n, *r, c)))
    }

    pub fn term_count(&self) -> usize {
        self.layers.iter().map(|l| l.0.len()).sum()
    }

    /// Highest `y`-degree present at `x`-degree `n`.
    pub fn max_y_degree(&self, n: usize) -> Option<YDegree> {
        self.layers.get(n)?.0.last().map(|(d, _)| *d)
    }

    fn check_shape(&self, other: &BiSeries) -> Result<()> {
        if self.order() != other.order() || self.y_cap != other.y_cap {
            return Err(Error::ShapeMismatch {
                left_order: self.order(),
                left_cap: self.y_cap,
                right_order: other.order(),
                right_cap: other.y_cap,
            });
        }
        Ok(())
    }

    fn combine(&self, other: &BiSeries, negate_other: bool) -> Result<BiSeries> {
        self.check_shape(other)?;
        Ok(BiSeries {
            y_cap: self.y_cap,
            layers: self
                .layers
                .iter()
                .zip(&other.layers)
                .map(|(a, b)| a.add(b, negate_other))
                .collect(),
        })
    }

    pub fn add(&self, other: &BiSeries) -> Result<BiSeries> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &BiSeries) -> Result<BiSeries> {
        self.combine(other, true)
    }

    pub fn negate(&self) -> BiSeries {
        BiSeries::zero(self.order())
            .with_cap_of(self)
            .sub(self)
            .expect("same shape")
    }

    fn with_cap_of(mut self, other: &BiSeries) -> Self {
        self.y_cap = other.y_cap;
        self
    }

    /// Truncated product; `x`-degrees beyond the order are dropped.
    pub fn mul(&self, other: &BiSeries) -> Result<BiSeries> {
        self.check_shape(other)?;
        let order = self.order();
        let mut layers = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let pairs = || (0..=n).map(|m| (&self.layers[m], &other.layers[n - m]));
            let Some((lo, hi)) = product_span(pairs()) else {
                layers.push(YPoly::default());
                continue;
            };
            let hi = self.y_cap.map_or(hi, |c| c.min(hi));
            let mut acc = Accumulator::for_range(lo, hi);
            if lo <= hi {
                for (a, b) in pairs() {
                    YPoly::mul_acc(&mut acc, a, b, self.y_cap)?;
                }
            }
            layers.push(acc.finish());
        }
        Ok(BiSeries {
            y_cap: self.y_cap,
            layers,
        })
    }

    pub fn square(&self) -> Result<BiSeries> {
        self.mul(self)
    }

    /// Multiplies by `x^dx * y^dy`. The result is known through order
    /// `order + dx`: shifting in `x` gains precision.
    pub fn mul_monomial(&self, dx: usize, dy: YDegree) -> Result<BiSeries> {
        let mut layers = vec![YPoly::default(); dx];
        for l in &self.layers {
            layers.push(l.shift(dy)?.capped(self.y_cap));
        }
        Ok(BiSeries {
            y_cap: self.y_cap,
            layers,
        })
    }

    /// Forgets every `x`-degree above `order` (which must not exceed the
    /// current order).
    pub fn truncate(&self, order: usize) -> BiSeries {
        assert!(order <= self.order(), "cannot truncate upward");
        BiSeries {
            y_cap: self.y_cap,
            layers: self.layers[..=order].to_vec(),
        }
    }

    /// `1 / self` for a series `1 + u` where every term of `u` has positive
    /// `x`-degree. Back-substitution in increasing `x`-degree keeps every
    /// coefficient an integer.
    pub fn reciprocal_unit(&self) -> Result<BiSeries> {
        let head = &self.layers[0];
        if head.coeff(0) != BigInt::one() {
            return Err(Error::NotUnit(head.coeff(0).to_string()));
        }
        if let Some((d, _)) = head.0.iter().find(|(d, _)| *d > 0) {
            return Err(Error::YDegreeInConstant(*d));
        }
        let order = self.order();
        let mut inv: Vec<YPoly> = Vec::with_capacity(order + 1);
        inv.push(YPoly::one());
        for n in 1..=order {
            // inv[n] = -(sum_{m=1..n} self[m] * inv[n-m])
            let pairs = || (1..=n).map(|m| (&self.layers[m], &inv[n - m]));
            let next = match product_span(pairs()) {
                None => YPoly::default(),
                Some((lo, hi)) => {
                    let hi = self.y_cap.map_or(hi, |c| c.min(hi));
                    let mut acc = Accumulator::for_range(lo, hi);
                    if lo <= hi {
                        for (a, b) in pairs() {
                            YPoly::mul_acc(&mut acc, a, b, self.y_cap)?;
                        }
                    }
                    let mut p = acc.finish();
                    for (_, c) in p.0.iter_mut() {
                        *c = -std::mem::take(c);
                    }
                    p
                }
            };
            inv.push(next);
        }
        Ok(BiSeries {
            y_cap: self.y_cap,
            layers: inv,
        })
    }

    /// Coefficients of `x^0..=x^order` in the `y^r` layer.
    pub fn y_slice(&self, r: YDegree) -> Vec<BigInt> {
        self.layers.iter().map(|l| l.coeff(r)).collect()
    }

    /// Coefficients of `x^0..=x^order` at `y = 1`.
    pub fn eval_y_one(&self) -> Vec<BigInt> {
        self.layers
            .iter()
            .map(|l| l.0.iter().map(|(_, c)| c).sum())
            .collect()
    }

    /// True when no coefficient is negative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms().all(|(_, _, c)| !c.is_negative())
    }
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeries[order {}", self.order())?;
        if let Some(cap) = self.y_cap {
            write!(f, ", y<={cap}")?;
        }
        write!(f, "](")?;
        let mut first = true;
        for (n, r, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*x^{n}*y^{r}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn monomials() {
        let one = BiSeries::monomial(1, 0, 0, 10);
        assert_eq!(one, BiSeries::one(10));
        assert_eq!(one.terms().count(), 1);
        let xy3 = BiSeries::monomial(1, 1, 3, 10);
        assert_eq!(xy3.coeff(1, 3), big(1));
        assert_eq!(xy3.term_count(), 1);
        assert!(BiSeries::monomial(5, 11, 0, 10).is_zero());
        assert!(BiSeries::monomial(0, 1, 0, 10).is_zero());
    }

    #[test]
    fn truncated_products() {
        let one_x = BiSeries::one(1)
            .add(&BiSeries::monomial(1, 1, 0, 1))
            .unwrap();
        let sq = one_x.square().unwrap();
        assert_eq!(sq.y_slice(0), ints(&[1, 2]));
        let xy = BiSeries::monomial(1, 1, 1, 5);
        assert_eq!(xy.square().unwrap(), BiSeries::monomial(1, 2, 2, 5));
        let s = BiSeries::from_terms(4, [(0, 0, big(3)), (2, 7, big(-4)), (1, 1, big(9))]);
        assert!(s.add(&s.negate()).unwrap().is_zero());
        assert!(s.sub(&s).unwrap().is_zero());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = BiSeries::one(3);
        let b = BiSeries::one(4);
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::ShapeMismatch { .. })));
        let c = BiSeries::one(3).with_y_cap(2);
        assert!(a.mul(&c).is_err());
    }

    #[test]
    fn geometric_reciprocals() {
        let one_minus_x = BiSeries::one(4)
            .sub(&BiSeries::monomial(1, 1, 0, 4))
            .unwrap();
        assert_eq!(
            one_minus_x.reciprocal_unit().unwrap().y_slice(0),
            ints(&[1; 5])
        );

        let one_minus_xy = BiSeries::one(3)
            .sub(&BiSeries::monomial(1, 1, 1, 3))
            .unwrap();
        let inv = one_minus_xy.reciprocal_unit().unwrap();
        let expected = BiSeries::from_terms(3, (0..=3).map(|n| (n, n as u64, big(1))));
        assert_eq!(inv, expected);

        for order in 0..5 {
            let one = BiSeries::one(order);
            assert_eq!(one.reciprocal_unit().unwrap(), one);
        }
    }

    #[test]
    fn reciprocal_preconditions() {
        let two = BiSeries::monomial(2, 0, 0, 3);
        assert!(matches!(two.reciprocal_unit(), Err(Error::NotUnit(_))));
        let bad = BiSeries::one(3)
            .add(&BiSeries::monomial(1, 0, 2, 3))
            .unwrap();
        assert_eq!(bad.reciprocal_unit(), Err(Error::YDegreeInConstant(2)));
    }

    #[test]
    fn slices_and_y_one() {
        let s = BiSeries::one(3)
            .add(&BiSeries::monomial(1, 1, 1, 3))
            .unwrap();
        assert_eq!(s.y_slice(1), ints(&[0, 1, 0, 0]));
        assert_eq!(BiSeries::zero(3).y_slice(5), ints(&[0; 4]));
        let t = BiSeries::from_terms(1, [(0, 0, big(1)), (1, 1, big(1)), (1, 2, big(1))]);
        assert_eq!(t.eval_y_one(), ints(&[1, 2]));
        assert_eq!(BiSeries::zero(2).eval_y_one(), ints(&[0; 3]));
    }

    #[test]
    fn monomial_shift_gains_order() {
        let s = BiSeries::one(2).mul_monomial(1, 4).unwrap();
        assert_eq!(s.order(), 3);
        assert_eq!(s.coeff(1, 4), big(1));
        let capped = BiSeries::one(2).with_y_cap(3).mul_monomial(1, 4).unwrap();
        assert!(capped.is_zero());
    }

    #[test]
    fn sparse_accumulator_for_wide_spans() {
        let far = 1u64 << 40;
        let s = BiSeries::from_terms(2, [(0, 0, big(1)), (1, far, big(2)), (1, 1, big(1))]);
        let sq = s.square().unwrap();
        assert_eq!(sq.coeff(2, 2 * far), big(4));
        assert_eq!(sq.coeff(2, far + 1), big(4));
        assert_eq!(sq.coeff(2, 2), big(1));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = BiSeries> {
        proptest::collection::vec((0..=order, 0u64..6, -5i64..=5), 0..12).prop_map(move |ts| {
            BiSeries::from_terms(
                order,
                ts.into_iter().map(|(n, r, c)| (n, r, BigInt::from(c))),
            )
        })
    }

    /// `1 + u` with `u` of positive `x`-order.
    fn arb_unit(order: usize) -> impl Strategy<Value = BiSeries> {
        proptest::collection::vec((1..=order.max(1), 0u64..6, -5i64..=5), 0..12).prop_map(
            move |ts| {
                BiSeries::from_terms(
                    order,
                    std::iter::once((0, 0, BigInt::one()))
                        .chain(ts.into_iter().map(|(n, r, c)| (n, r, BigInt::from(c)))),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(5), b in arb_series(5), c in arb_series(5)) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        }

        #[test]
        fn reciprocal_inverts(a in arb_unit(6)) {
            let inv = a.reciprocal_unit().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), BiSeries::one(6));
        }

        #[test]
        fn truncation_commutes(a in arb_unit(7), b in arb_series(7), m in 0usize..7) {
            let (at, bt) = (a.truncate(m), b.truncate(m));
            prop_assert_eq!(a.mul(&b).unwrap().truncate(m), at.mul(&bt).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().truncate(m), at.add(&bt).unwrap());
            prop_assert_eq!(a.reciprocal_unit().unwrap().truncate(m), at.reciprocal_unit().unwrap());
            prop_assert_eq!(&b.y_slice(2)[..=m], &bt.y_slice(2)[..]);
            prop_assert_eq!(&b.eval_y_one()[..=m], &bt.eval_y_one()[..]);
        }

        #[test]
        fn y_cap_keeps_low_layers(a in arb_unit(5), b in arb_series(5), cap in 0u64..8) {
            let inv = a.reciprocal_unit().unwrap();
            let capped_inv = a.clone().with_y_cap(cap).reciprocal_unit().unwrap();
            let prod = a.mul(&b).unwrap();
            let capped_prod = a.with_y_cap(cap).mul(&b.with_y_cap(cap)).unwrap();
            for r in 0..=cap {
                prop_assert_eq!(inv.y_slice(r), capped_inv.y_slice(r));
                prop_assert_eq!(prod.y_slice(r), capped_prod.y_slice(r));
            }
            prop_assert!(capped_prod.terms().all(|(_, r, _)| r <= cap));
        }
    }
}
