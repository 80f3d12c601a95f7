//! JSON documents for frames, fuzzy sets and mass functions, plus CSV tables.
//!
//! Grades and masses are written at 12-decimal canonical precision. Documents other
//! than frames carry the `frame_id` of the frame they belong to and are decoded
//! against that frame.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{canonical_grade, Frame, FrameId, FuzzySet};
use crate::fuzzy_mass::FuzzyMassFunction;
use crate::inference::CoverageTable;
use crate::mass::{EventRow, MassFunction};
use crate::possibility::MeasureBundle;
use crate::predict::{DominanceTable, PredictiveSummary, ScatterPoint};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameDoc {
    labels: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FuzzySetDoc {
    frame_id: String,
    mu: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrispFocalDoc {
    set: Vec<usize>,
    mass: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MassDoc {
    frame_id: String,
    focal: Vec<CrispFocalDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FuzzyFocalDoc {
    mu: Vec<f64>,
    mass: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FuzzyMassDoc {
    frame_id: String,
    focal: Vec<FuzzyFocalDoc>,
}

fn parse_error(path: impl Into<String>, err: impl std::fmt::Display) -> Error {
    Error::Parse {
        path: path.into(),
        message: err.to_string(),
    }
}

fn at(path: &str, err: Error) -> Error {
    match err {
        Error::Parse { .. } => err,
        other => parse_error(path, other),
    }
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(format!("$ (line {}, column {})", e.line(), e.column()), e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("document types always serialize")
}

fn canonical_vec(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&v| canonical_grade(v)).collect()
}

fn check_frame_id(text: &str, frame: &Frame) -> Result<()> {
    let id = FrameId::parse(text).ok_or_else(|| parse_error("$.frame_id", format!("`{text}` is not a frame id")))?;
    if id != frame.id() {
        return Err(parse_error(
            "$.frame_id",
            format!("document belongs to frame {id}, expected {}", frame.id()),
        ));
    }
    Ok(())
}

pub fn encode_frame(frame: &Frame) -> String {
    to_json(&FrameDoc {
        labels: frame.labels().to_vec(),
    })
}

pub fn decode_frame(text: &str) -> Result<Frame> {
    let doc: FrameDoc = from_json(text)?;
    Frame::new(doc.labels).map_err(|e| at("$.labels", e))
}

pub fn encode_fuzzy_set(set: &FuzzySet) -> String {
    to_json(&FuzzySetDoc {
        frame_id: set.frame().id().to_string(),
        mu: set.canonical_grades(),
    })
}

pub fn decode_fuzzy_set(text: &str, frame: &Frame) -> Result<FuzzySet> {
    let doc: FuzzySetDoc = from_json(text)?;
    check_frame_id(&doc.frame_id, frame)?;
    FuzzySet::new(frame, doc.mu).map_err(|e| at("$.mu", e))
}

pub fn encode_mass(mass: &MassFunction) -> String {
    to_json(&MassDoc {
        frame_id: mass.frame().id().to_string(),
        focal: mass
            .focal_indices()
            .into_iter()
            .map(|(set, m)| CrispFocalDoc {
                set,
                mass: canonical_grade(m),
            })
            .collect(),
    })
}

pub fn decode_mass(text: &str, frame: &Frame) -> Result<MassFunction> {
    let doc: MassDoc = from_json(text)?;
    check_frame_id(&doc.frame_id, frame)?;
    for (i, f) in doc.focal.iter().enumerate() {
        if f.set.is_empty() {
            return Err(parse_error(format!("$.focal[{i}].set"), Error::EmptyFocalSet));
        }
    }
    let focal = doc.focal.into_iter().map(|f| (f.set, f.mass)).collect();
    MassFunction::from_index_sets(frame, focal).map_err(|e| at("$.focal", e))
}

pub fn encode_fuzzy_mass(mass: &FuzzyMassFunction) -> String {
    to_json(&FuzzyMassDoc {
        frame_id: mass.frame().id().to_string(),
        focal: mass
            .focal_sets()
            .iter()
            .map(|(set, m)| FuzzyFocalDoc {
                mu: set.canonical_grades(),
                mass: canonical_grade(*m),
            })
            .collect(),
    })
}

pub fn decode_fuzzy_mass(text: &str, frame: &Frame) -> Result<FuzzyMassFunction> {
    let doc: FuzzyMassDoc = from_json(text)?;
    check_frame_id(&doc.frame_id, frame)?;
    let mut focal = Vec::with_capacity(doc.focal.len());
    for (i, f) in doc.focal.into_iter().enumerate() {
        let set = FuzzySet::new(frame, f.mu).map_err(|e| at(&format!("$.focal[{i}].mu"), e))?;
        focal.push((set, f.mass));
    }
    FuzzyMassFunction::new(frame, focal).map_err(|e| at("$.focal", e))
}

pub fn encode_measure_bundle(bundle: &MeasureBundle) -> String {
    to_json(&MeasureBundle {
        possibility: canonical_grade(bundle.possibility),
        necessity: canonical_grade(bundle.necessity),
        guaranteed: canonical_grade(bundle.guaranteed),
        potential: canonical_grade(bundle.potential),
    })
}

pub fn decode_measure_bundle(text: &str) -> Result<MeasureBundle> {
    let bundle: MeasureBundle = from_json(text)?;
    for (name, v) in [
        ("possibility", bundle.possibility),
        ("necessity", bundle.necessity),
        ("guaranteed", bundle.guaranteed),
        ("potential", bundle.potential),
    ] {
        if !(0.0..=1.0).contains(&v) {
            return Err(parse_error(format!("$.{name}"), Error::InvalidGrade(v)));
        }
    }
    Ok(bundle)
}

/// Rectangular table of already formatted cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Shortest round-trip decimal form after canonical rounding. Never locale dependent.
pub fn format_number(value: f64) -> String {
    format!("{}", canonical_grade(value))
}

fn format_members(members: &[usize]) -> String {
    members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::LengthMismatch {
                expected: self.header.len(),
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line.iter().map(|c| quote_csv(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or_else(|| parse_error("line 1", "missing header row"))?;
        let mut table = Table::new(split_csv(head, 1)?);
        for (i, line) in lines {
            let row = split_csv(line, i + 1)?;
            table.push(row).map_err(|e| parse_error(format!("line {}", i + 1), e))?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let table: Table = from_json(text)?;
        for (i, row) in table.rows.iter().enumerate() {
            if row.len() != table.header.len() {
                return Err(parse_error(
                    format!("$.rows[{i}]"),
                    format!("row has {} cells, header has {}", row.len(), table.header.len()),
                ));
            }
        }
        Ok(table)
    }

    /// Numeric value of a cell.
    pub fn number(&self, row: usize, column: &str) -> Option<f64> {
        let col = self.header.iter().position(|h| h == column)?;
        self.rows.get(row)?.get(col)?.parse().ok()
    }
}

fn quote_csv(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn split_csv(line: &str, line_no: usize) -> Result<Vec<String>> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                chars.next();
                cur.push('"');
            }
            ('"', true) => quoted = false,
            ('"', false) if cur.is_empty() => quoted = true,
            (',', false) => cells.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    if quoted {
        return Err(parse_error(format!("line {line_no}"), "unterminated quoted cell"));
    }
    cells.push(cur);
    Ok(cells)
}

/// Coverage tables side by side, one column `cov_N{N}_n{n}` per table.
/// All tables must share the same significance levels.
pub fn coverage_table(tables: &[CoverageTable]) -> Result<Table> {
    let first = tables
        .first()
        .ok_or_else(|| Error::InvalidArgument("no coverage tables".into()))?;
    let mut header = vec!["1-alpha".to_string()];
    for t in tables {
        if t.alphas != first.alphas {
            return Err(Error::InvalidArgument("coverage tables use different alpha levels".into()));
        }
        header.push(format!("cov_N{}_n{}", t.grid_size, t.n));
    }
    let mut table = Table::new(header);
    for (i, &alpha) in first.alphas.iter().enumerate() {
        let mut row = vec![format_number(1.0 - alpha)];
        row.extend(tables.iter().map(|t| format_number(t.coverage[i])));
        table.push(row)?;
    }
    Ok(table)
}

pub fn dominance_table(table: &DominanceTable) -> Table {
    let mut out = Table::new(vec!["1-alpha".into(), "coverage".into()]);
    for (&a, &c) in table.alphas.iter().zip(&table.coverage) {
        out.rows.push(vec![format_number(1.0 - a), format_number(c)]);
    }
    out
}

/// Events are written as space-separated outcome values.
pub fn scatter_table(points: &[ScatterPoint]) -> Table {
    let mut out = Table::new(vec!["x".into(), "event".into(), "belief".into(), "probability".into()]);
    for p in points {
        out.rows.push(vec![
            p.x.to_string(),
            format_members(&p.event),
            format_number(p.belief),
            format_number(p.probability),
        ]);
    }
    out
}

pub fn event_table(rows: &[EventRow], frame: &Frame) -> Table {
    let mut out = Table::new(vec!["event".into(), "bel".into(), "pl".into(), "q".into()]);
    for r in rows {
        let labels: Vec<&str> = r.members.iter().filter_map(|&i| frame.label(i)).collect();
        out.rows.push(vec![
            labels.join(" "),
            format_number(r.bel),
            format_number(r.pl),
            format_number(r.q),
        ]);
    }
    out
}

pub fn predictive_table(summary: &PredictiveSummary) -> Table {
    let mut out = Table::new(
        ["y", "contour", "lower_cdf", "upper_cdf", "plugin_pmf", "plugin_cdf"]
            .map(String::from)
            .to_vec(),
    );
    for y in 0..summary.contour.len() {
        out.rows.push(vec![
            y.to_string(),
            format_number(summary.contour[y]),
            format_number(summary.lower_cdf[y]),
            format_number(summary.upper_cdf[y]),
            format_number(summary.plugin_pmf[y]),
            format_number(summary.plugin_cdf[y]),
        ]);
    }
    out
}

/// Canonical masses as a plain vector, for comparisons after decoding.
pub fn canonical_masses(mass: &MassFunction) -> Vec<f64> {
    canonical_vec(&mass.focal_indices().iter().map(|(_, m)| *m).collect::<Vec<_>>())
}
