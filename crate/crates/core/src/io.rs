//! Text formats: lattice and configuration files, ordered bases,
//! triangulations, cost matrices and certificate documents.
//!
//! A lattice block is a header `n=<int> field=<Fp:PRIME|Q>` followed by `n`
//! rows of `n` whitespace-separated Laurent polynomials (written without
//! inner spaces); the columns generate the lattice. A configuration file
//! starts with `group=SL|PGL` and continues with lattice blocks separated
//! by blank lines. `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::invariants::{Configuration, Group};
use crate::lattice::Lattice;
use crate::matrix::SeriesMatrix;
use crate::series::{parse_series, Series};
use crate::tropkm::{TraceRecord, WitnessCertificate};

// Nominal horizon for certificate entries.
const CERT_HORIZON: i64 = 1 << 30;

struct Line<'a> {
    number: usize,
    text: &'a str,
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            text: l.split('#').next().unwrap_or(""),
        })
        .collect()
}

// Non-empty runs of lines separated by blank lines.
fn blocks<'a>(lines: &'a [Line<'a>]) -> Vec<&'a [Line<'a>]> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, l) in lines.iter().enumerate() {
        match (l.text.trim().is_empty(), start) {
            (false, None) => start = Some(k),
            (true, Some(s)) => {
                out.push(&lines[s..k]);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(&lines[s..]);
    }
    out
}

fn parse_header(line: &Line<'_>) -> Result<(usize, FieldConfig)> {
    let mut n = None;
    let mut field = None;
    for word in line.text.split_whitespace() {
        let col = line.text.find(word).unwrap_or(0) + 1;
        match word.split_once('=') {
            Some(("n", v)) => {
                n = Some(v.parse::<usize>().map_err(|_| Error::parse(line.number, col, format!("bad dimension {v:?}")))?)
            }
            Some(("field", v)) => field = Some(v.parse::<FieldConfig>().map_err(|e| relocate(e, line.number, col))?),
            _ => return Err(Error::parse(line.number, col, format!("unexpected {word:?} in header"))),
        }
    }
    match (n, field) {
        (Some(n), Some(f)) if n > 0 => Ok((n, f)),
        (Some(0), _) => Err(Error::parse(line.number, 1, "dimension must be positive")),
        _ => Err(Error::parse(line.number, 1, "header needs n=<int> field=<Fp:PRIME|Q>")),
    }
}

fn relocate(e: Error, line: usize, offset: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::Parse {
            line,
            column: column + offset - 1,
            message,
        },
        other => Error::parse(line, offset, other.to_string()),
    }
}

fn parse_row(line: &Line<'_>, field: FieldConfig, horizon: i64) -> Result<Vec<Series>> {
    let mut out = Vec::new();
    let mut rest = line.text;
    let mut offset = 1;
    while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let word = &tail[..len];
        out.push(parse_series(word, field, horizon).map_err(|e| relocate(e, line.number, offset + start))?);
        offset += start + len;
        rest = &tail[len..];
    }
    Ok(out)
}

fn parse_block(block: &[Line<'_>], horizon: i64) -> Result<SeriesMatrix> {
    let (n, field) = parse_header(&block[0])?;
    let rows = &block[1..];
    if rows.len() != n {
        let at = rows.last().unwrap_or(&block[0]).number;
        return Err(Error::parse(at, 1, format!("expected {n} rows, found {}", rows.len())));
    }
    let mut entries = Vec::with_capacity(n * n);
    for line in rows {
        let row = parse_row(line, field, horizon)?;
        if row.len() != n {
            return Err(Error::parse(line.number, 1, format!("expected {n} entries, found {}", row.len())));
        }
        entries.extend(row);
    }
    SeriesMatrix::new(n, n, field, entries)
}

fn lattice_of(block: &[Line<'_>], horizon: i64) -> Result<Lattice> {
    let m = parse_block(block, horizon)?;
    Lattice::from_basis(&m).map_err(|e| match e {
        Error::SingularMatrix => Error::parse(block[0].number, 1, "the columns do not span a lattice"),
        other => other,
    })
}

/// Parses one lattice block; entries must have exponents below `horizon`.
pub fn parse_lattice(text: &str, horizon: i64) -> Result<Lattice> {
    let lines = content_lines(text);
    match blocks(&lines).as_slice() {
        [one] => lattice_of(one, horizon),
        [] => Err(Error::parse(1, 1, "empty lattice file")),
        [_, second, ..] => Err(Error::parse(second[0].number, 1, "more than one lattice block")),
    }
}

pub fn format_lattice(l: &Lattice) -> String {
    format_matrix(l.basis())
}

fn format_matrix(m: &SeriesMatrix) -> String {
    let mut out = format!("n={} field={}\n", m.rows(), m.field());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|e| e.to_string().replace(' ', "")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_group(line: &Line<'_>) -> Result<Group> {
    match line.text.trim() {
        "group=SL" => Ok(Group::SL),
        "group=PGL" => Ok(Group::PGL),
        other => Err(Error::parse(line.number, 1, format!("expected group=SL|PGL, found {other:?}"))),
    }
}

pub fn parse_configuration(text: &str, horizon: i64) -> Result<Configuration> {
    let lines = content_lines(text);
    let bl = blocks(&lines);
    let first = bl.first().ok_or_else(|| Error::parse(1, 1, "empty configuration file"))?;
    let group = parse_group(&first[0])?;
    let mut points = Vec::new();
    if first.len() > 1 {
        points.push(lattice_of(&first[1..], horizon)?);
    }
    for b in &bl[1..] {
        points.push(lattice_of(b, horizon)?);
    }
    if points.is_empty() {
        return Err(Error::parse(first[0].number, 1, "no lattices in configuration"));
    }
    let n = points[0].n();
    if let Some(p) = points.iter().find(|p| p.n() != n) {
        return Err(Error::DimensionMismatch(format!("points of dimensions {n} and {}", p.n())));
    }
    Configuration::new(group, points)
}

pub fn format_configuration(conf: &Configuration) -> String {
    let blocks: Vec<String> = conf.points().iter().map(format_lattice).collect();
    format!("group={}\n{}", conf.group(), blocks.join("\n"))
}

/// Ordered bases, one block per point; the columns in order are the basis.
pub fn parse_bases(text: &str, horizon: i64) -> Result<Vec<Vec<Vec<Series>>>> {
    let lines = content_lines(text);
    blocks(&lines).iter().map(|b| Ok(parse_block(b, horizon)?.columns())).collect()
}

/// One triangle per line, three 0-based point indices.
pub fn parse_triangulation(text: &str) -> Result<Vec<[usize; 3]>> {
    let mut out = Vec::new();
    for line in content_lines(text) {
        let words: Vec<&str> = line.text.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()).collect();
        if words.is_empty() {
            continue;
        }
        if words.len() != 3 {
            return Err(Error::parse(line.number, 1, "a triangle has three indices"));
        }
        let mut t = [0usize; 3];
        for (slot, w) in t.iter_mut().zip(&words) {
            let col = line.text.find(w).unwrap_or(0) + 1;
            *slot = w.parse().map_err(|_| Error::parse(line.number, col, format!("bad index {w:?}")))?;
        }
        out.push(t);
    }
    Ok(out)
}

/// Comma-separated integer rows forming a square matrix.
pub fn parse_cost_csv(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut rows = Vec::new();
    for line in content_lines(text) {
        if line.text.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for cell in line.text.split(',') {
            let v = cell.trim();
            row.push(v.parse::<i64>().map_err(|_| Error::parse(line.number, col, format!("bad integer {v:?}")))?);
            col += cell.len() + 1;
        }
        rows.push((line.number, row));
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::parse(1, 1, "empty cost matrix"));
    }
    if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(Error::parse(*line, 1, format!("expected {n} entries, found {}", row.len())));
    }
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CertificateDoc {
    field: String,
    n: usize,
    inputs: Vec<Vec<Vec<String>>>,
    lattice: Vec<Vec<String>>,
    c_values: Vec<i64>,
    tight_generators: Vec<Vec<String>>,
    optimum: i64,
    trace: Vec<TraceRecord>,
}

fn rows_of(m: &SeriesMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(Series::to_string).collect()).collect()
}

fn json_err(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.column(), e.to_string())
}

pub fn certificate_to_json(cert: &WitnessCertificate) -> String {
    let doc = CertificateDoc {
        field: cert.lattice.field().to_string(),
        n: cert.lattice.n(),
        inputs: cert.inputs.iter().map(|l| rows_of(l.basis())).collect(),
        lattice: rows_of(cert.lattice.basis()),
        c_values: cert.c_values.clone(),
        tight_generators: cert.tight_generators.iter().map(|w| w.iter().map(Series::to_string).collect()).collect(),
        optimum: cert.optimum,
        trace: cert.trace.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("certificates serialise")
}

pub fn certificate_from_json(text: &str) -> Result<WitnessCertificate> {
    let doc: CertificateDoc = serde_json::from_str(text).map_err(json_err)?;
    let field: FieldConfig = doc.field.parse()?;
    let series = |s: &str| parse_series(s, field, CERT_HORIZON);
    let matrix = |rows: &[Vec<String>]| -> Result<SeriesMatrix> {
        if rows.len() != doc.n || rows.iter().any(|r| r.len() != doc.n) {
            return Err(Error::DimensionMismatch(format!("certificate matrix is not {0}x{0}", doc.n)));
        }
        let entries = rows.iter().flatten().map(|s| series(s)).collect::<Result<Vec<_>>>()?;
        SeriesMatrix::new(doc.n, doc.n, field, entries)
    };
    let inputs = doc.inputs.iter().map(|m| Lattice::from_basis(&matrix(m)?)).collect::<Result<Vec<_>>>()?;
    let lattice = Lattice::from_basis(&matrix(&doc.lattice)?)?;
    let tight_generators = doc
        .tight_generators
        .iter()
        .map(|w| w.iter().map(|s| series(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessCertificate {
        inputs,
        lattice,
        c_values: doc.c_values,
        tight_generators,
        optimum: doc.optimum,
        trace: doc.trace,
    })
}
