//! Command-line front end: count tables, raw series, closed forms and the
//! verification harness.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit status is 0
//! on success, 1 when `verify` finds a mismatch and 2 on usage errors.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use perm132::bigseries::{BiSeries, YDegree};
use perm132::cfengine::{cf_f_capped, cf_g_capped, omega_series_capped, s_ladder_capped};
use perm132::chebgf::{extended_range_max, f_closed, f_closed_extended, phi0_closed, RationalGF};
use perm132::permcore::{brute_one132_table, brute_table};
use perm132::verify::{Mutation, VerifyConfig, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] perm132::Error),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Io(#[from] io::Error),
    #[error("serializing output: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "perm132",
    version,
    about = "Count 132-avoiding permutations by occurrences of 12...k"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rows (n, r, f_n^r(k)) for 132-avoiders.
    Table(RunConfig),
    /// Rows (n, r, phi_n^r(k)) for permutations with exactly one 132.
    Phi(RunConfig),
    /// Every nonzero coefficient of one of the bivariate series.
    Series(SeriesArgs),
    /// A closed form and its expansion.
    Closed(ClosedArgs),
    /// Cross-check enumeration, continued fractions and closed forms.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Enumerate permutations.
    Brute,
    /// Expand the continued fraction or the one-132 recursion.
    Cf,
    /// Expand the rational closed forms.
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Pattern length k of 12...k.
    #[arg(long)]
    pub k: usize,
    /// Largest permutation length.
    #[arg(long)]
    pub n: usize,
    /// Smallest permutation length reported.
    #[arg(long, default_value_t = 0)]
    pub n_min: usize,
    /// Only report this occurrence count.
    #[arg(long)]
    pub r: Option<YDegree>,
    #[arg(long, value_enum, default_value_t = Mode::Cf)]
    pub mode: Mode,
    /// Drop occurrence counts above this value.
    #[arg(long)]
    pub y_cap: Option<YDegree>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write data here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(k: usize, n: usize, mode: Mode) -> Self {
        RunConfig {
            k,
            n,
            n_min: 0,
            r: None,
            mode,
            y_cap: None,
            format: Format::Csv,
            out: None,
        }
    }

    fn effective_cap(&self) -> Option<YDegree> {
        match (self.r, self.y_cap) {
            (Some(r), Some(c)) => Some(r.min(c)),
            (a, b) => a.or(b),
        }
    }

    fn keeps(&self, n: usize, r: YDegree) -> bool {
        n >= self.n_min
            && n <= self.n
            && self.r.is_none_or(|want| want == r)
            && self.y_cap.is_none_or(|cap| r <= cap)
    }

    fn check_k(&self) -> Result<()> {
        if self.k == 0 {
            return Err(CliError::Usage("--k must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// F(x, y; k), the avoider continued fraction.
    F,
    /// G(x, y; k), the shifted fraction seeding the ladder.
    G,
    /// S_k, the ladder started from G.
    Ladder,
    /// Phi(x, y; k), permutations with exactly one 132.
    Omega,
}

#[derive(Args, Clone, Debug)]
pub struct SeriesArgs {
    #[arg(long)]
    pub k: usize,
    /// Truncation order in x.
    #[arg(long)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = SeriesKind::F)]
    pub which: SeriesKind,
    #[arg(long)]
    pub y_cap: Option<YDegree>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClosedKind {
    /// F_r(x; k), 0 <= r <= k(k+3)/2.
    F,
    /// Phi_0(x; k), k >= 3.
    Phi0,
}

#[derive(Args, Clone, Debug)]
pub struct ClosedArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub r: YDegree,
    /// Expansion order.
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = ClosedKind::F)]
    pub which: ClosedKind,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub k: usize,
    /// Largest length checked against enumeration.
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// Series order for the fraction and closed-form checks.
    #[arg(long, default_value_t = 20)]
    pub order: usize,
    /// Seed a known fault (level-exponent, drop-prefix-term, closed-exponent).
    #[arg(long, hide = true)]
    pub inject: Option<Mutation>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub n: usize,
    pub r: YDegree,
    pub count: BigInt,
}

/// Rows sorted by `(n, r)`, zero counts omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub k: usize,
    pub rows: Vec<Row>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct RowDoc {
    pub n: usize,
    pub r: YDegree,
    pub count: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct TableDoc {
    pub k: usize,
    pub rows: Vec<RowDoc>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct ClosedDoc {
    pub k: usize,
    pub r: YDegree,
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
    pub rows: Vec<RowDoc>,
}

impl Table {
    fn from_series(k: usize, s: &BiSeries, keep: impl Fn(usize, YDegree) -> bool) -> Self {
        let rows = s
            .terms()
            .filter(|(n, r, _)| keep(*n, *r))
            .map(|(n, r, c)| Row {
                n,
                r,
                count: c.clone(),
            })
            .collect();
        Table { k, rows }
    }

    fn sort(mut self) -> Self {
        self.rows.sort_by_key(|row| (row.n, row.r));
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,r,count\n");
        for row in &self.rows {
            writeln!(out, "{},{},{}", row.n, row.r, row.count).expect("string write");
        }
        out
    }

    pub fn to_doc(&self) -> TableDoc {
        TableDoc {
            k: self.k,
            rows: row_docs(&self.rows),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_doc())? + "\n")
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
        }
    }
}

fn row_docs(rows: &[Row]) -> Vec<RowDoc> {
    rows.iter()
        .map(|row| RowDoc {
            n: row.n,
            r: row.r,
            count: row.count.to_string(),
        })
        .collect()
}

fn push_table_rows(
    rows: &mut Vec<Row>,
    n: usize,
    table: impl IntoIterator<Item = (YDegree, num_bigint::BigUint)>,
) {
    rows.extend(table.into_iter().map(|(r, c)| Row {
        n,
        r,
        count: c.into(),
    }));
}

fn expansion_rows(
    r: YDegree,
    coeffs: &[BigInt],
    keep: impl Fn(usize, YDegree) -> bool,
) -> Vec<Row> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(n, c)| !c.is_zero() && keep(*n, r))
        .map(|(n, c)| Row {
            n,
            r,
            count: c.clone(),
        })
        .collect()
}

/// `F_r(x; k)` from whichever closed form covers `r`.
pub fn closed_form_for(r: YDegree, k: usize) -> Result<RationalGF> {
    let hi = extended_range_max(k);
    if r <= k as YDegree {
        Ok(f_closed(r, k)?)
    } else if r <= hi {
        Ok(f_closed_extended(r, k)?)
    } else {
        Err(CliError::Usage(format!(
            "closed mode covers 0 <= r <= k (base closed form) and k < r <= k(k+3)/2 = {hi} \
             (extended closed form) for k = {k}; r = {r} needs --mode cf or --mode brute"
        )))
    }
}

/// `f_n^r(k)` for `n_min <= n <= n` by the configured mode.
pub fn run_table(cfg: &RunConfig) -> Result<Table> {
    cfg.check_k()?;
    let k = cfg.k;
    let keep = |n, r| cfg.keeps(n, r);
    let table = match cfg.mode {
        Mode::Brute => {
            let mut rows = Vec::new();
            for n in cfg.n_min..=cfg.n {
                let t = brute_table(n, k)?;
                push_table_rows(&mut rows, n, t.into_iter().filter(|(r, _)| keep(n, *r)));
            }
            Table { k, rows }
        }
        Mode::Cf => {
            let s = cf_f_capped(k, cfg.n, cfg.effective_cap())?;
            Table::from_series(k, &s, keep)
        }
        Mode::Closed => {
            let rs: Vec<YDegree> = match cfg.r {
                Some(r) => vec![r],
                None => (0..=extended_range_max(k)).collect(),
            };
            let mut rows = Vec::new();
            for r in rs {
                rows.extend(expansion_rows(
                    r,
                    &closed_form_for(r, k)?.expand(cfg.n),
                    keep,
                ));
            }
            Table { k, rows }
        }
    };
    Ok(table.sort())
}

/// `phi_n^r(k)` for `n_min <= n <= n` by the configured mode.
pub fn run_phi(cfg: &RunConfig) -> Result<Table> {
    cfg.check_k()?;
    let k = cfg.k;
    let keep = |n, r| cfg.keeps(n, r);
    let table = match cfg.mode {
        Mode::Brute => {
            let mut rows = Vec::new();
            for n in cfg.n_min..=cfg.n {
                let t = brute_one132_table(n, k)?;
                push_table_rows(&mut rows, n, t.into_iter().filter(|(r, _)| keep(n, *r)));
            }
            Table { k, rows }
        }
        Mode::Cf => {
            let s = omega_series_capped(k, cfg.n, cfg.effective_cap())?;
            Table::from_series(k, &s, keep)
        }
        Mode::Closed => {
            if cfg.r.is_some_and(|r| r != 0) {
                return Err(CliError::Usage(
                    "closed mode for phi covers r = 0 only; use --mode cf or --mode brute".into(),
                ));
            }
            let f = phi0_closed(k)?;
            Table {
                k,
                rows: expansion_rows(0, &f.expand(cfg.n), keep),
            }
        }
    };
    Ok(table.sort())
}

pub fn run_series(args: &SeriesArgs) -> Result<Table> {
    let (k, order, cap) = (args.k, args.order, args.y_cap);
    let s = match args.which {
        SeriesKind::F => cf_f_capped(k, order, cap)?,
        SeriesKind::G => cf_g_capped(k, order, cap)?,
        SeriesKind::Ladder => s_ladder_capped(k, order, cap)?,
        SeriesKind::Omega => omega_series_capped(k, order, cap)?,
    };
    Ok(Table::from_series(k, &s, |_, _| true))
}

pub fn run_closed(args: &ClosedArgs) -> Result<(RationalGF, Table)> {
    let (f, r) = match args.which {
        ClosedKind::F => (closed_form_for(args.r, args.k)?, args.r),
        ClosedKind::Phi0 => (phi0_closed(args.k)?, 0),
    };
    let rows = expansion_rows(r, &f.expand(args.order), |_, _| true);
    Ok((f, Table { k: args.k, rows }))
}

pub fn run_verify(
    k: usize,
    n_max: usize,
    order: usize,
    inject: Option<Mutation>,
) -> Result<VerifyReport> {
    let mut cfg = VerifyConfig::new(k, n_max, order);
    cfg.mutation = inject;
    Ok(perm132::verify::run_verify(&cfg)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub enum Outcome {
    Done,
    VerificationFailed,
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Table(cfg) => emit(&cfg.out, &run_table(cfg)?.render(cfg.format)?)?,
        Command::Phi(cfg) => emit(&cfg.out, &run_phi(cfg)?.render(cfg.format)?)?,
        Command::Series(args) => emit(&args.out, &run_series(args)?.render(args.format)?)?,
        Command::Closed(args) => {
            let (f, table) = run_closed(args)?;
            eprintln!("{f}");
            let text = match args.format {
                Format::Csv => table.to_csv(),
                Format::Json => {
                    let doc = ClosedDoc {
                        k: args.k,
                        r: table.rows.first().map_or(args.r, |row| row.r),
                        numerator: f.num().coeffs().iter().map(ToString::to_string).collect(),
                        denominator: f.den().coeffs().iter().map(ToString::to_string).collect(),
                        rows: row_docs(&table.rows),
                    };
                    serde_json::to_string(&doc)? + "\n"
                }
            };
            emit(&args.out, &text)?;
        }
        Command::Verify(args) => {
            let report = run_verify(args.k, args.n_max, args.order, args.inject)?;
            emit(&args.out, &format!("{report}\n"))?;
            if !report.passed() {
                for check in report.failures() {
                    eprintln!("mismatch: {check}");
                }
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Done)
}
