//! Commands behind the `th` binary.

pub mod cache;
pub mod record;

use std::fmt;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use twisted_hurwitz::factorization::{count_twisted_with_budget, HurwitzQuery, DEFAULT_BUDGET};
use twisted_hurwitz::tropical::{
    count_tropical, enumerate_quotient_covers, enumerate_twisted_covers, CoverRecord,
};
use twisted_hurwitz::{feynman, fock, Error};

use cache::{Cache, CacheKey};
use record::{Method, RunRecord};

pub const EXIT_INCOMPATIBLE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_UNWRITABLE: u8 = 4;

/// A failure with the process exit status it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn incompatible(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INCOMPATIBLE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::InvalidDegree(_) | Error::InvalidGenus { .. } => EXIT_INCOMPATIBLE,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Step budget: explicit flag, else `TH_BUDGET`, else the library default.
pub fn resolve_budget(flag: Option<u128>) -> Result<u128, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("TH_BUDGET") {
        Ok(text) => match text.trim().parse::<u128>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(CliError::incompatible(format!(
                "TH_BUDGET must be a positive integer, got {text:?}"
            ))),
        },
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Rejects method/parameter combinations a pipeline is not defined for.
pub fn check_compatible(method: Method, d: usize, g: usize, connected: bool) -> Result<(), CliError> {
    if d == 0 {
        return Err(CliError::incompatible("the degree d must be positive"));
    }
    if g == 0 {
        return Err(CliError::incompatible("the genus g must be at least 1"));
    }
    match method {
        Method::Symgroup => Ok(()),
        Method::Tropical if g < 2 => Err(CliError::incompatible(
            "tropical pipeline needs at least one branch point, i.e. g >= 2",
        )),
        Method::Tropical if !connected => Err(CliError::incompatible(
            "tropical pipeline counts connected covers only; drop --disconnected",
        )),
        Method::Feynman if g <= 2 => Err(CliError::incompatible(
            "Feynman pipeline defined only for g > 2",
        )),
        Method::Feynman if !connected => Err(CliError::incompatible(
            "Feynman pipeline counts connected covers only; drop --disconnected",
        )),
        Method::Fock if connected => Err(CliError::incompatible(
            "Fock-space formula computes the disconnected count only; pass --disconnected",
        )),
        _ => Ok(()),
    }
}

/// The value of one method, plus the normalization reading where relevant.
pub fn evaluate(
    method: Method,
    d: usize,
    g: usize,
    connected: bool,
    budget: u128,
) -> Result<(BigRational, Option<String>), CliError> {
    check_compatible(method, d, g, connected)?;
    Ok(match method {
        Method::Symgroup => (count_twisted_with_budget(d, g, connected, budget)?.value, None),
        Method::Tropical => (count_tropical(d, g)?, None),
        Method::Feynman => {
            let reading = feynman::calibrated_reading()?;
            let value = feynman::generating_series_with(reading, d, g)?;
            (value, Some(reading.name().to_string()))
        }
        Method::Fock => (fock::elliptic_disconnected(d, g)?, None),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
}

pub fn render(record: &RunRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Plain => record.plain(),
        OutputFormat::Json => serde_json::to_string(record).expect("records serialize"),
        OutputFormat::Csv => format!("{}\n{}", RunRecord::CSV_HEADER, record.csv_row()),
    }
}

/// Computes one value, reading through `cache` when given.
pub fn compute(
    method: Method,
    d: usize,
    g: usize,
    connected: bool,
    budget: u128,
    cache: Option<&Cache>,
) -> Result<RunRecord, CliError> {
    check_compatible(method, d, g, connected)?;
    let reading = match method {
        Method::Feynman => Some(feynman::calibrated_reading()?.name().to_string()),
        _ => None,
    };
    let key = CacheKey {
        method,
        d,
        g,
        connected,
        normalization_reading: reading,
    };
    if let Some(hit) = cache.and_then(|c| c.lookup(&key)) {
        return Ok(hit);
    }
    let start = Instant::now();
    let (value, reading) = evaluate(method, d, g, connected, budget)?;
    let query = HurwitzQuery {
        d,
        g,
        twisted: true,
        connected,
    };
    let record = RunRecord::new(method, query, &value, start.elapsed().as_millis() as u64, reading);
    if let Some(cache) = cache {
        if let Err(e) = cache.append(&record) {
            eprintln!("warning: could not write cache {}: {e}", cache.path().display());
        }
    }
    Ok(record)
}

/// One cell of the validation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Value(BigRational),
    Skip(String),
    NotApplicable,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{v}"),
            Cell::Skip(_) => f.write_str("SKIP"),
            Cell::NotApplicable => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "SKIP",
        })
    }
}

/// All pairs of available values must agree; fewer than two is a skip.
pub fn verdict(cells: &[&Cell]) -> Verdict {
    let values: Vec<&BigRational> = cells
        .iter()
        .filter_map(|c| match c {
            Cell::Value(v) => Some(v),
            _ => None,
        })
        .collect();
    if values.len() < 2 {
        Verdict::Skip
    } else if values.windows(2).all(|w| w[0] == w[1]) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

#[derive(Debug, Clone)]
pub struct ValidationRow {
    pub d: usize,
    pub g: usize,
    pub symgroup: Cell,
    pub tropical: Cell,
    pub feynman: Cell,
    pub symgroup_disconnected: Cell,
    pub fock: Cell,
    pub connected: Verdict,
    pub disconnected: Verdict,
}

fn cell(method: Method, d: usize, g: usize, connected: bool, budget: u128) -> Result<Cell, CliError> {
    if check_compatible(method, d, g, connected).is_err() {
        return Ok(Cell::NotApplicable);
    }
    match evaluate(method, d, g, connected, budget) {
        Ok((v, _)) => Ok(Cell::Value(v)),
        Err(e) if e.code == EXIT_BUDGET => Ok(Cell::Skip(e.message)),
        Err(e) => Err(e),
    }
}

/// Every applicable method at every `(d, g)` with `d ≤ d_max`, `g ≤ g_max`.
pub fn validate(d_max: usize, g_max: usize, budget: u128) -> Result<Vec<ValidationRow>, CliError> {
    let mut rows = Vec::new();
    for d in 1..=d_max {
        for g in 1..=g_max {
            let symgroup = cell(Method::Symgroup, d, g, true, budget)?;
            let tropical = cell(Method::Tropical, d, g, true, budget)?;
            let feynman = cell(Method::Feynman, d, g, true, budget)?;
            let symgroup_disconnected = cell(Method::Symgroup, d, g, false, budget)?;
            let fock = cell(Method::Fock, d, g, false, budget)?;
            rows.push(ValidationRow {
                d,
                g,
                connected: verdict(&[&symgroup, &tropical, &feynman]),
                disconnected: verdict(&[&symgroup_disconnected, &fock]),
                symgroup,
                tropical,
                feynman,
                symgroup_disconnected,
                fock,
            });
        }
    }
    Ok(rows)
}

pub fn render_validation(rows: &[ValidationRow]) -> String {
    let mut out = format!(
        "{:>2} {:>2} | {:>10} {:>10} {:>10} | {:>10} {:>10} | connected disconnected\n",
        "d", "g", "symgroup", "tropical", "feynman", "symgroup•", "fock"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>2} {:>2} | {:>10} {:>10} {:>10} | {:>10} {:>10} | {:<9} {}\n",
            r.d,
            r.g,
            r.symgroup.to_string(),
            r.tropical.to_string(),
            r.feynman.to_string(),
            r.symgroup_disconnected.to_string(),
            r.fock.to_string(),
            r.connected.to_string(),
            r.disconnected
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Writes the covers of `(d, g)`: a JSON array at `out`, or one DOT file per
/// cover inside the directory `out`. Twisted covers unless `quotient`.
/// Covers of multiplicity zero (a four-valent vertex of weight one) are left
/// out. Returns the number of covers written.
pub fn export_covers(
    d: usize,
    g: usize,
    out: &Path,
    format: ExportFormat,
    quotient: bool,
) -> Result<usize, CliError> {
    check_compatible(Method::Tropical, d, g, true)?;
    let (records, dots): (Vec<CoverRecord>, Vec<String>) = if quotient {
        let mut covers = enumerate_quotient_covers(d, g)?;
        covers.retain(|c| !c.weight_product().is_zero());
        let records = covers
            .iter()
            .map(|c| CoverRecord::new(c, g))
            .collect::<Result<_, _>>()?;
        let dots = covers
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_dot(&format!("cover{}", i + 1)))
            .collect();
        (records, dots)
    } else {
        let mut covers = enumerate_twisted_covers(d, g)?;
        covers.retain(|c| !c.multiplicity().is_zero());
        let records = covers
            .iter()
            .map(CoverRecord::from_twisted)
            .collect::<Result<_, _>>()?;
        let dots = covers
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_dot(&format!("cover{}", i + 1)))
            .collect();
        (records, dots)
    };
    let unwritable = |e: std::io::Error| CliError {
        code: EXIT_UNWRITABLE,
        message: format!("cannot write {}: {e}", out.display()),
    };
    match format {
        ExportFormat::Json => {
            let text = serde_json::to_string_pretty(&records).expect("records serialize");
            fs::write(out, text + "\n").map_err(unwritable)?;
        }
        ExportFormat::Dot => {
            fs::create_dir_all(out).map_err(unwritable)?;
            for (i, dot) in dots.iter().enumerate() {
                fs::write(out.join(format!("cover_{:03}.dot", i + 1)), dot).map_err(unwritable)?;
            }
        }
    }
    Ok(records.len())
}
