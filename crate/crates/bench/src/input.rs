//! Parsers for the whitespace-separated input files accepted by the CLI.

use std::str::FromStr;

use augmap_apps::Point;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| ParseError { line, message: format!("missing {what}") })?;
    tok.parse().map_err(|_| ParseError { line, message: format!("invalid {what} {tok:?}") })
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn no_more<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<(), ParseError> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(ParseError { line, message: format!("unexpected trailing field {t:?}") }),
    }
}

/// One `l r` pair per line.
pub fn parse_intervals(text: &str) -> Result<Vec<(i64, i64)>, ParseError> {
    lines(text)
        .map(|(n, l)| {
            let mut t = l.split_whitespace();
            let pair = (field(t.next(), n, "left endpoint")?, field(t.next(), n, "right endpoint")?);
            no_more(t, n)?;
            Ok(pair)
        })
        .collect()
}

/// One `x y weight` triple per line.
pub fn parse_points(text: &str) -> Result<Vec<(Point<i64>, i64)>, ParseError> {
    lines(text)
        .map(|(n, l)| {
            let mut t = l.split_whitespace();
            let p = Point::new(field(t.next(), n, "x")?, field(t.next(), n, "y")?);
            let w = field(t.next(), n, "weight")?;
            no_more(t, n)?;
            Ok((p, w))
        })
        .collect()
}

/// One `term doc weight` triple per line.
pub fn parse_postings(text: &str) -> Result<Vec<(String, u64, f64)>, ParseError> {
    lines(text)
        .map(|(n, l)| {
            let mut t = l.split_whitespace();
            let term: String = field(t.next(), n, "term")?;
            let doc = field(t.next(), n, "document id")?;
            let w = field(t.next(), n, "weight")?;
            no_more(t, n)?;
            Ok((term, doc, w))
        })
        .collect()
}

/// Whitespace-separated integers, any layout.
pub fn parse_sequence(text: &str) -> Result<Vec<i64>, ParseError> {
    lines(text)
        .flat_map(|(n, l)| l.split_whitespace().map(move |t| field(Some(t), n, "integer")))
        .collect()
}
