use std::io::{self, Write};

use clap::ValueEnum;
use qshelf_core::hmatrix::Grid;
use qshelf_core::series::TruncatedSeries;
use qshelf_core::verify::{Report, Suite};
use qshelf_core::xq::BivariateSeries;
use serde::Serialize;
use serde_json::Value;

use crate::UsageError;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Text ready to be written out.
pub struct Rendered(String);

impl Rendered {
    pub fn lines(lines: Vec<String>) -> Self {
        let mut s = lines.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        Rendered(s)
    }

    pub fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(self.0.as_bytes())
    }
}

fn json(value: &impl Serialize) -> Rendered {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    Rendered(s)
}

fn csv_rows<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<Rendered, UsageError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| UsageError(e.to_string()))?;
    Ok(Rendered(String::from_utf8(bytes).expect("csv output is UTF-8")))
}

#[derive(Serialize)]
struct CoeffRow {
    exponent: i64,
    coefficient: String,
}

fn coeff_rows(s: &TruncatedSeries) -> Vec<CoeffRow> {
    (0..=s.order())
        .map(|e| CoeffRow {
            exponent: e,
            coefficient: s.coeff(e).to_string(),
        })
        .collect()
}

pub fn series(format: Format, label: &str, meta: Value, s: &TruncatedSeries) -> Rendered {
    match format {
        Format::Json => {
            let mut obj = meta;
            obj["series"] = serde_json::to_value(s).expect("series serializes");
            json(&obj)
        }
        Format::Csv => csv_rows(coeff_rows(s)).expect("in-memory csv"),
        Format::Table => Rendered(format!("{label} = {s}\n")),
    }
}

#[derive(Serialize)]
struct SummaryRow {
    suite: Suite,
    pass: bool,
    cells: usize,
    comparisons: usize,
    failures: usize,
}

#[derive(Serialize)]
struct EhRow {
    kind: String,
    k: u32,
    j: u32,
    i: u32,
    strength: String,
    f: i64,
    pass: bool,
}

pub fn reports(format: Format, reports: &[Report]) -> Result<Rendered, UsageError> {
    match format {
        Format::Json if reports.len() == 1 => Ok(json(&reports[0])),
        Format::Json => Ok(json(&reports)),
        Format::Csv if reports.len() == 1 && reports[0].suite == Suite::Eh => {
            csv_rows(reports[0].eh.iter().map(|r| EhRow {
                kind: r.kind.to_string(),
                k: r.index.k,
                j: r.index.j,
                i: r.index.i,
                strength: r.strength.to_string(),
                f: r.divisibility_exponent,
                pass: r.pass,
            }))
        }
        Format::Csv => csv_rows(reports.iter().map(|r| SummaryRow {
            suite: r.suite,
            pass: r.pass,
            cells: r.cells,
            comparisons: r.comparisons,
            failures: r.failures.len(),
        })),
        Format::Table => {
            let mut lines = Vec::new();
            for r in reports {
                lines.push(format!(
                    "{:<18} {}  cells={} comparisons={} failures={}",
                    r.suite.name(),
                    if r.pass { "PASS" } else { "FAIL" },
                    r.cells,
                    r.comparisons,
                    r.failures.len()
                ));
                if let Some(c) = r.first_failure() {
                    let cell: Vec<String> = c.cell.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    lines.push(format!(
                        "    {} [{}] at q^{}: expected {}, got {}",
                        c.check,
                        cell.join(" "),
                        c.exponent,
                        c.expected,
                        c.actual
                    ));
                }
            }
            Ok(Rendered::lines(lines))
        }
    }
}

#[derive(Serialize)]
struct CellRow {
    row: usize,
    col: usize,
    exponent: i64,
    coefficient: String,
}

pub fn matrix(format: Format, value: &impl Serialize, grid: &Grid) -> Result<Rendered, UsageError> {
    match format {
        Format::Json => Ok(json(value)),
        Format::Csv => csv_rows(grid.iter().enumerate().flat_map(|(r, row)| {
            row.iter().enumerate().flat_map(move |(c, s)| {
                s.terms().map(move |(e, v)| CellRow {
                    row: r + 1,
                    col: c + 1,
                    exponent: e,
                    coefficient: v.to_string(),
                })
            })
        })),
        Format::Table => Ok(Rendered::lines(
            grid.iter()
                .enumerate()
                .flat_map(|(r, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(c, s)| format!("[{},{}] {}", r + 1, c + 1, s))
                })
                .collect(),
        )),
    }
}

#[derive(Serialize)]
struct TermRow {
    a: u32,
    b: u32,
    c: String,
}

pub fn bivariate(format: Format, s: &BivariateSeries) -> Result<Rendered, UsageError> {
    match format {
        Format::Json => Ok(json(s)),
        Format::Csv => csv_rows(s.terms().map(|(a, b, c)| TermRow {
            a,
            b,
            c: c.to_string(),
        })),
        Format::Table => Ok(Rendered::lines(
            s.terms()
                .map(|(a, b, c)| format!("{c:>12} x^{a} q^{b}"))
                .collect(),
        )),
    }
}

pub fn rows<R: Serialize>(format: Format, rows: &[R]) -> Result<Rendered, UsageError> {
    match format {
        Format::Json => Ok(json(&rows)),
        Format::Csv | Format::Table => csv_rows(rows),
    }
}
