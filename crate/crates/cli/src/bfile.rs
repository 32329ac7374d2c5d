//! OEIS b-file reader: `<n> <a(n)>` per line, `#` comments and blank lines
//! ignored.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OeisRecord {
    pub n: u64,
    pub value: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: cannot parse {text:?}")]
pub struct BfileError {
    pub line: usize,
    pub text: String,
}

pub fn parse_bfile(text: &str) -> Result<Vec<OeisRecord>, BfileError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = || BfileError {
            line: i + 1,
            text: raw.to_string(),
        };
        let mut fields = line.split_whitespace();
        let (Some(n), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err());
        };
        out.push(OeisRecord {
            n: n.parse().map_err(|_| err())?,
            value: value.parse().map_err(|_| err())?,
        });
    }
    Ok(out)
}
