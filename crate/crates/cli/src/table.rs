//! Scan tables: CSV, JSON and OEIS b-file renderings, and the CSV reader
//! used to load them back.

use serde::{Deserialize, Serialize};
use vwx_core::vw::{RangeEntry, VwResult};

pub const CSV_HEADER: &str = "n,vw,bound,primes_scanned,num_exceptions,largest_exception";

/// Prefix on the `vw` cell of scans that stopped short of the guarantee bound.
pub const UNCERTIFIED: &str = "UNCERTIFIED";

/// `vw` cell of a row whose computation failed.
pub const ERROR_CELL: &str = "ERROR";

/// One row of a scan table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u64,
    pub vw: Option<u64>,
    pub certified: bool,
    pub bound: Option<u64>,
    pub primes_scanned: Option<u64>,
    pub num_exceptions: Option<u64>,
    pub largest_exception: Option<u64>,
    pub error: Option<String>,
}

impl ScanRow {
    pub fn from_result(r: &VwResult) -> Self {
        Self {
            n: r.n,
            vw: r.p0,
            certified: r.certified,
            bound: Some(r.guarantee_bound),
            primes_scanned: Some(r.primes_scanned),
            num_exceptions: Some(r.exceptional_primes.len() as u64),
            largest_exception: r.largest_exception(),
            error: None,
        }
    }

    pub fn from_entry(e: &RangeEntry) -> Self {
        match &e.result {
            Ok(r) => Self::from_result(r),
            Err(err) => Self {
                n: e.n,
                vw: None,
                certified: false,
                bound: None,
                primes_scanned: None,
                num_exceptions: None,
                largest_exception: None,
                error: Some(err.to_string()),
            },
        }
    }
}

fn cell(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn vw_cell(row: &ScanRow) -> String {
    if row.error.is_some() {
        return ERROR_CELL.to_string();
    }
    match (row.certified, row.vw) {
        (true, v) => cell(v),
        (false, Some(v)) => format!("{UNCERTIFIED}:{v}"),
        (false, None) => format!("{UNCERTIFIED}:none"),
    }
}

pub fn to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            vw_cell(r),
            cell(r.bound),
            cell(r.primes_scanned),
            cell(r.num_exceptions),
            cell(r.largest_exception)
        ));
    }
    out
}

pub fn to_json(rows: &[ScanRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

/// `n value` lines. Uncertified values are preceded by a comment line;
/// failed rows appear only as comments.
pub fn to_bfile(rows: &[ScanRow]) -> String {
    let mut out = String::new();
    for r in rows {
        if let Some(err) = &r.error {
            out.push_str(&format!("# n={} {ERROR_CELL}: {err}\n", r.n));
            continue;
        }
        if !r.certified {
            out.push_str(&format!("# n={} {UNCERTIFIED}\n", r.n));
        }
        match r.vw {
            Some(v) => out.push_str(&format!("{} {v}\n", r.n)),
            None => out.push_str(&format!("# n={} no transition found\n", r.n)),
        }
    }
    out
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct CsvError {
    pub line: usize,
    pub reason: String,
}

fn parse_opt(s: &str, line: usize) -> Result<Option<u64>, CsvError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| CsvError {
        line,
        reason: format!("expected an integer, got {s:?}"),
    })
}

/// Reads a table written by [`to_csv`]. Error rows come back without their
/// message, which is not part of the CSV.
pub fn parse_csv(text: &str) -> Result<Vec<ScanRow>, CsvError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(CSV_HEADER) => {}
        other => {
            return Err(CsvError {
                line: 1,
                reason: format!("unexpected header {other:?}"),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 6 {
            return Err(CsvError {
                line: line_no,
                reason: format!("expected 6 cells, got {}", cells.len()),
            });
        }
        let n = parse_opt(cells[0], line_no)?.ok_or(CsvError {
            line: line_no,
            reason: "missing n".into(),
        })?;
        let mut row = ScanRow {
            n,
            vw: None,
            certified: true,
            bound: parse_opt(cells[2], line_no)?,
            primes_scanned: parse_opt(cells[3], line_no)?,
            num_exceptions: parse_opt(cells[4], line_no)?,
            largest_exception: parse_opt(cells[5], line_no)?,
            error: None,
        };
        if cells[1] == ERROR_CELL {
            row.certified = false;
            row.error = Some(String::new());
        } else if let Some(rest) = cells[1].strip_prefix(&format!("{UNCERTIFIED}:")) {
            row.certified = false;
            row.vw = if rest == "none" {
                None
            } else {
                parse_opt(rest, line_no)?
            };
        } else {
            row.vw = parse_opt(cells[1], line_no)?;
        }
        rows.push(row);
    }
    Ok(rows)
}
