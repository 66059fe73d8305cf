//! Cross-checks between enumeration, continued fractions and closed forms.
//!
//! A [`Mutation`] seeds a known fault into one route so that tests can show
//! the harness notices it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bigseries::{BiSeries, YDegree};
use crate::binom::{binomial, catalan_numbers};
use crate::cfengine::{
    continued_fraction, level_exponent, omega_series_capped, s_ladder, s_ladder_steps,
};
use crate::chebgf::{
    b_family, cheb_identity_residual, corollary_series, extended_range_max, f_closed,
    f_closed_extended, lemma_series, phi0_closed, RationalGF,
};
use crate::error::{Error, Result};
use crate::permcore::{
    brute_one132_table, brute_table, enumerate_132_avoiding, OccurrenceProfile, AVOIDER_BOUND,
    FULL_SCAN_BOUND,
};

/// A deliberate fault in one computation route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Fraction numerators use `C(i, k-1)` instead of `C(i-1, k-1)`.
    ShiftedLevelExponent,
    /// The max-decomposition recurrence omits the `eta_{j-1}(left)` term.
    DropPrefixTerm,
    /// `F_r` closed forms use `x^(k+r)` instead of `x^(k+r-1)`.
    ClosedFormExponent,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::ShiftedLevelExponent,
        Mutation::DropPrefixTerm,
        Mutation::ClosedFormExponent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::ShiftedLevelExponent => "level-exponent",
            Mutation::DropPrefixTerm => "drop-prefix-term",
            Mutation::ClosedFormExponent => "closed-exponent",
        }
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Mutation::ALL.iter().map(|m| m.name()).collect();
                format!(
                    "unknown mutation {s:?}; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub k: usize,
    /// Largest length checked against enumeration.
    pub n_max: usize,
    /// Series order for the fraction, ladder and closed-form checks.
    pub order: usize,
    pub mutation: Option<Mutation>,
}

impl VerifyConfig {
    pub fn new(k: usize, n_max: usize, order: usize) -> Self {
        VerifyConfig {
            k,
            n_max,
            order,
            mutation: None,
        }
    }

    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = Some(mutation);
        self
    }

    fn mutated(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }
}

/// First coefficient on which two routes disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub n: usize,
    pub r: YDegree,
    pub left: BigInt,
    pub right: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub left: &'static str,
    pub right: &'static str,
    /// Number of coefficients (or identities) compared.
    pub compared: usize,
    pub mismatch: Option<Mismatch>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<34} {} vs {}, {} compared",
            self.name, self.left, self.right, self.compared
        )?;
        if let Some(m) = &self.mismatch {
            write!(
                f,
                "; first mismatch at n={} r={}: {} = {}, {} = {}",
                m.n, m.r, self.left, m.left, self.right, m.right
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        write!(f, "verify k={} n_max={} order={}", c.k, c.n_max, c.order)?;
        if let Some(m) = c.mutation {
            write!(f, " mutation={}", m.name())?;
        }
        writeln!(f)?;
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

type Coeffs = BTreeMap<(usize, YDegree), BigInt>;

fn series_coeffs(s: &BiSeries) -> Coeffs {
    s.terms().map(|(n, r, c)| ((n, r), c.clone())).collect()
}

fn slice_coeffs(r: YDegree, slice: &[BigInt]) -> Coeffs {
    slice
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| ((n, r), c.clone()))
        .collect()
}

/// Compares two sparse coefficient maps over the union of their keys.
fn compare(name: String, left: &'static str, right: &'static str, a: &Coeffs, b: &Coeffs) -> Check {
    let mut keys: Vec<_> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let zero = BigInt::zero();
    let mismatch = keys.iter().find_map(|key| {
        let (x, y) = (a.get(key).unwrap_or(&zero), b.get(key).unwrap_or(&zero));
        (x != y).then(|| Mismatch {
            n: key.0,
            r: key.1,
            left: x.clone(),
            right: y.clone(),
        })
    });
    Check {
        name,
        left,
        right,
        compared: keys.len(),
        mismatch,
    }
}

fn fraction(cfg: &VerifyConfig, order: usize, y_cap: Option<YDegree>) -> Result<BiSeries> {
    let k = cfg.k;
    if cfg.mutated(Mutation::ShiftedLevelExponent) {
        continued_fraction(order, y_cap, |d| {
            binomial(d as i64 + 1, k as i64 - 1).ok_or(Error::DegreeOverflow)
        })
    } else {
        continued_fraction(order, y_cap, |d| level_exponent(d + 1, k))
    }
}

fn closed_form(cfg: &VerifyConfig, r: YDegree) -> Result<RationalGF> {
    if cfg.mutated(Mutation::ClosedFormExponent) && r >= 1 {
        let k = cfg.k;
        let b = b_family(k);
        return RationalGF::new(
            b[k - 1].pow(r as u32 - 1).shift(k + r as usize),
            b[k].pow(r as u32 + 1),
        );
    }
    f_closed(r, cfg.k)
}

fn decomposition_check(cfg: &VerifyConfig) -> Result<Check> {
    let k = cfg.k;
    let keep_prefix = !cfg.mutated(Mutation::DropPrefixTerm);
    let mut compared = 0;
    let mut mismatch = None;
    'outer: for n in 1..=cfg.n_max {
        for pi in enumerate_132_avoiding(n)? {
            let (left, right) = pi.split_at_max().expect("n >= 1");
            let whole = OccurrenceProfile::of(&pi, k);
            let lp = OccurrenceProfile::of(&left, k);
            let rp = OccurrenceProfile::of(&right, k);
            for j in 1..=k {
                let mut predicted = lp.eta(j) + rp.eta(j);
                if keep_prefix {
                    predicted += lp.eta(j - 1);
                }
                compared += 1;
                if predicted != whole.eta(j) {
                    mismatch = Some(Mismatch {
                        n,
                        r: j as YDegree,
                        left: whole.eta(j).into(),
                        right: predicted.into(),
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(Check {
        name: "max-decomposition recurrence".into(),
        left: "direct count",
        right: "recurrence",
        compared,
        mismatch,
    })
}

/// Runs every cross-check applicable to `cfg.k`.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let k = cfg.k;
    if k == 0 {
        return Err(Error::InvalidK {
            k,
            reason: "pattern length must be at least 1",
        });
    }
    if cfg.n_max > AVOIDER_BOUND {
        return Err(Error::Capacity {
            what: "132-avoider enumeration",
            n: cfg.n_max,
            bound: AVOIDER_BOUND,
        });
    }
    let order = cfg.order;
    let mut checks = Vec::new();

    let full = fraction(cfg, order, None)?;
    let catalan: Vec<BigInt> = catalan_numbers(order)
        .into_iter()
        .map(BigInt::from)
        .collect();
    checks.push(compare(
        "Catalan totals".into(),
        "fraction at y=1",
        "Catalan recurrence",
        &slice_coeffs(0, &full.eval_y_one()),
        &slice_coeffs(0, &catalan),
    ));

    let shallow = fraction(cfg, cfg.n_max, None)?;
    let mut brute = Coeffs::new();
    for n in 0..=cfg.n_max {
        for (r, c) in brute_table(n, k)? {
            brute.insert((n, r), c.into());
        }
    }
    checks.push(compare(
        "enumeration vs fraction".into(),
        "continued fraction",
        "enumeration",
        &series_coeffs(&shallow),
        &brute,
    ));

    checks.push(decomposition_check(cfg)?);

    checks.push(compare(
        "ladder identity".into(),
        "continued fraction",
        "ladder from G",
        &series_coeffs(&full),
        &series_coeffs(&s_ladder(k, order)?),
    ));

    let hi = extended_range_max(k);
    let capped = fraction(cfg, order, Some(hi))?;
    for r in 0..=k as YDegree {
        checks.push(compare(
            format!("closed form F_{r}"),
            "continued fraction",
            "closed form",
            &slice_coeffs(r, &capped.y_slice(r)),
            &slice_coeffs(r, &closed_form(cfg, r)?.expand(order)),
        ));
    }
    for r in k as YDegree + 1..=hi {
        checks.push(compare(
            format!("extended closed form F_{r}"),
            "continued fraction",
            "extended closed form",
            &slice_coeffs(r, &capped.y_slice(r)),
            &slice_coeffs(r, &f_closed_extended(r, k)?.expand(order)),
        ));
    }

    checks.push(compare(
        "corollary series".into(),
        "continued fraction",
        "R_k and G series",
        &series_coeffs(&capped),
        &series_coeffs(&corollary_series(k, order, Some(hi))?),
    ));
    let ladder = s_ladder_steps(k, order, Some(hi))?;
    for (j, step) in ladder.iter().enumerate().skip(1) {
        checks.push(compare(
            format!("ladder step S_{j}"),
            "ladder from G",
            "R_j and G series",
            &series_coeffs(step),
            &series_coeffs(&lemma_series(j, k, order, Some(hi))?),
        ));
    }

    let identity_max = order.max(k + 1).max(2);
    let mut residues = Coeffs::new();
    for n in 2..=identity_max {
        for (m, c) in cheb_identity_residual(n).coeffs().iter().enumerate() {
            if !c.is_zero() {
                residues.insert((n, m as YDegree), c.clone());
            }
        }
    }
    let mut identity = compare(
        "Chebyshev identity".into(),
        "residual",
        "zero",
        &residues,
        &Coeffs::new(),
    );
    identity.compared = identity_max - 1;
    checks.push(identity);

    if k >= 3 {
        let omega = omega_series_capped(k, order, None)?;
        checks.push(compare(
            "one-132 closed form Phi_0".into(),
            "one-132 recursion",
            "closed form",
            &slice_coeffs(0, &omega.y_slice(0)),
            &slice_coeffs(0, &phi0_closed(k)?.expand(order)),
        ));
        let scan_max = cfg.n_max.min(FULL_SCAN_BOUND).min(order);
        let mut scan = Coeffs::new();
        for n in 0..=scan_max {
            for (r, c) in brute_one132_table(n, k)? {
                scan.insert((n, r), c.into());
            }
        }
        checks.push(compare(
            "one-132 recursion vs scan".into(),
            "one-132 recursion",
            "full scan",
            &series_coeffs(&omega.truncate(scan_max)),
            &scan,
        ));
    }

    Ok(VerifyReport {
        config: cfg.clone(),
        checks,
    })
}
