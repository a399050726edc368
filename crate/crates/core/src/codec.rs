//! Text and JSON formats.
//!
//! Grid: first line `n` (square) or `k n` (rectangle), then one line per
//! row of space-separated 1-based symbols. Triples: first line `n m`, then
//! `m` lines `r c s`, 1-based. JSON: `{"n":..,"k":..,"cells":[[..]]}` for
//! grids (squares omit `k`) and `{"n":..,"triples":[[r,c,s],..]}`.
//! All output uses LF line endings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::{LatinGrid, LatinRectangle, LatinSquare, Triple, TripleSet};

/// Anything the codecs can read or write.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Square(LatinSquare),
    Rectangle(LatinRectangle),
    Triples(TripleSet),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Grid,
    Triples,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Format::Grid),
            "triples" => Ok(Format::Triples),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParams(format!("unknown format {other:?}"))),
        }
    }
}

pub fn encode(doc: &Document, format: Format) -> String {
    match format {
        Format::Grid => match doc {
            Document::Square(sq) => encode_grid_square(sq),
            Document::Rectangle(rect) => encode_grid_rectangle(rect),
            Document::Triples(set) => encode_triples(set),
        },
        Format::Triples => match doc {
            Document::Square(sq) => encode_triples(&sq.triple_view()),
            Document::Rectangle(rect) => encode_triples(&rect.triple_view()),
            Document::Triples(set) => encode_triples(set),
        },
        Format::Json => encode_json(doc),
    }
}

pub fn decode(text: &str, format: Format) -> Result<Document> {
    match format {
        Format::Grid => decode_grid(text),
        Format::Triples => decode_triples(text).map(Document::Triples),
        Format::Json => decode_json(text),
    }
}

fn rows_text(g: &impl LatinGrid, out: &mut String) {
    for row in g.to_rows_1based() {
        let line: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

pub fn encode_grid_square(sq: &LatinSquare) -> String {
    let mut out = format!("{}\n", sq.n());
    rows_text(sq, &mut out);
    out
}

pub fn encode_grid_rectangle(rect: &LatinRectangle) -> String {
    let mut out = format!("{} {}\n", rect.k(), rect.n());
    rows_text(rect, &mut out);
    out
}

pub fn encode_triples(set: &TripleSet) -> String {
    let mut out = format!("{} {}\n", set.n(), set.len());
    for t in set.triples() {
        out.push_str(&format!("{} {} {}\n", t.row + 1, t.col + 1, t.sym + 1));
    }
    out
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| Error::parse(lineno, format!("not an integer: {tok:?}")))
        })
        .collect()
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn positive(v: i64, lineno: usize, what: &str) -> Result<usize> {
    usize::try_from(v)
        .ok()
        .filter(|&x| x > 0)
        .ok_or_else(|| Error::parse(lineno, format!("{what} must be positive, got {v}")))
}

pub fn decode_grid(text: &str) -> Result<Document> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let dims = parse_numbers(header, hl)?;
    let (k, n, square) = match dims.as_slice() {
        [n] => {
            let n = positive(*n, hl, "n")?;
            (n, n, true)
        }
        [k, n] => (positive(*k, hl, "k")?, positive(*n, hl, "n")?, false),
        _ => return Err(Error::parse(hl, "header must be `n` or `k n`")),
    };
    let mut rows = Vec::with_capacity(k);
    let mut row_lines = Vec::with_capacity(k);
    for (ln, line) in lines.by_ref() {
        let row = parse_numbers(line, ln)?;
        if row.len() != n {
            return Err(Error::parse(
                ln,
                format!("expected {n} symbols, found {}", row.len()),
            ));
        }
        rows.push(row);
        row_lines.push(ln);
        if rows.len() == k {
            break;
        }
    }
    if rows.len() != k {
        return Err(Error::parse(
            text.lines().count() + 1,
            format!("expected {k} rows, found {}", rows.len()),
        ));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content after the last row"));
    }
    let line_of = |e: &Error| match e {
        Error::DuplicateInRow { row, .. } | Error::SymbolOutOfRange { row, .. } => row_lines[*row],
        _ => *row_lines.last().unwrap_or(&hl),
    };
    let located = |e: Error| {
        let ln = match &e {
            // A column repeat is detected on the later of the two rows; report it there.
            Error::DuplicateInColumn { column, symbol } => rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[*column] == *symbol as i64)
                .nth(1)
                .map_or(hl, |(i, _)| row_lines[i]),
            other => line_of(other),
        };
        e.at_line(ln)
    };
    if square {
        if k != n {
            return Err(Error::parse(hl, "square header must be a single order"));
        }
        LatinSquare::from_rows_1based(&rows)
            .map(Document::Square)
            .map_err(located)
    } else {
        LatinRectangle::from_rows_1based(&rows)
            .map(Document::Rectangle)
            .map_err(located)
    }
}

pub fn decode_triples(text: &str) -> Result<TripleSet> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let (n, m) = match parse_numbers(header, hl)?.as_slice() {
        [n, m] => (positive(*n, hl, "n")?, usize::try_from(*m).map_err(|_| Error::parse(hl, "m must be non-negative"))?),
        _ => return Err(Error::parse(hl, "header must be `n m`")),
    };
    let mut triples = Vec::with_capacity(m);
    let mut last = hl;
    for (ln, line) in lines {
        if triples.len() == m {
            return Err(Error::parse(ln, "more triples than announced"));
        }
        let v = parse_numbers(line, ln)?;
        let [r, c, s] = v.as_slice() else {
            return Err(Error::parse(ln, "expected `r c s`"));
        };
        let coord = |x: i64| {
            if x < 1 || x > n as i64 {
                Err(Error::parse(ln, format!("coordinate {x} outside 1..={n}")))
            } else {
                Ok((x - 1) as usize)
            }
        };
        triples.push(Triple::new(coord(*r)?, coord(*c)?, coord(*s)?));
        last = ln;
    }
    if triples.len() != m {
        return Err(Error::parse(
            last + 1,
            format!("expected {m} triples, found {}", triples.len()),
        ));
    }
    let set = TripleSet::new(n, triples).map_err(|e| e.at_line(last))?;
    if set.len() != m {
        return Err(Error::parse(last, "duplicate triple"));
    }
    Ok(set)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridJson {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<usize>,
    cells: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriplesJson {
    n: usize,
    triples: Vec<[i64; 3]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyJson {
    Grid(GridJson),
    Triples(TriplesJson),
}

pub fn encode_json(doc: &Document) -> String {
    let to_i64 = |rows: Vec<Vec<usize>>| -> Vec<Vec<i64>> {
        rows.into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect()
    };
    match doc {
        Document::Square(sq) => serde_json::to_string(&GridJson {
            n: sq.n(),
            k: None,
            cells: to_i64(sq.to_rows_1based()),
        }),
        Document::Rectangle(rect) => serde_json::to_string(&GridJson {
            n: rect.n(),
            k: Some(rect.k()),
            cells: to_i64(rect.to_rows_1based()),
        }),
        Document::Triples(set) => serde_json::to_string(&TriplesJson {
            n: set.n(),
            triples: set
                .triples()
                .iter()
                .map(|t| [t.row as i64 + 1, t.col as i64 + 1, t.sym as i64 + 1])
                .collect(),
        }),
    }
    .expect("plain data always serializes")
}

pub fn decode_json(text: &str) -> Result<Document> {
    let parsed: AnyJson =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    match parsed {
        AnyJson::Grid(g) => {
            let check_n = |rows: usize| {
                if g.cells.first().map_or(0, Vec::len) != g.n || rows != g.cells.len() {
                    Err(Error::parse(1, "cells do not match the declared dimensions"))
                } else {
                    Ok(())
                }
            };
            match g.k {
                None => {
                    check_n(g.n)?;
                    LatinSquare::from_rows_1based(&g.cells)
                        .map(Document::Square)
                        .map_err(|e| e.at_line(1))
                }
                Some(k) => {
                    check_n(k)?;
                    LatinRectangle::from_rows_1based(&g.cells)
                        .map(Document::Rectangle)
                        .map_err(|e| e.at_line(1))
                }
            }
        }
        AnyJson::Triples(t) => {
            let n = t.n;
            let triples = t
                .triples
                .iter()
                .map(|&[r, c, s]| {
                    let ok = |x: i64| x >= 1 && x <= n as i64;
                    if ok(r) && ok(c) && ok(s) {
                        Ok(Triple::new(r as usize - 1, c as usize - 1, s as usize - 1))
                    } else {
                        Err(Error::parse(1, format!("triple [{r},{c},{s}] outside 1..={n}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let count = triples.len();
            let set = TripleSet::new(n, triples).map_err(|e| e.at_line(1))?;
            if set.len() != count {
                return Err(Error::parse(1, "duplicate triple"));
            }
            Ok(Document::Triples(set))
        }
    }
}
