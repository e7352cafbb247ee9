//! Serialization of samples, streams, lists, and halfspaces.
//!
//! Formats are plain and deterministic so that artifact files are
//! byte-identical across reruns:
//!
//! * labeled boolean samples — CSV with header `x0,...,x{d-1},y`, 0/1 cells;
//! * sign-vector streams — CSV with the same header, `-1`/`1` coordinate
//!   cells and a `-1`/`1` label;
//! * decision lists — JSON: an ordered `terms` array of `{feature, bit}`
//!   objects plus `default_bit`, with bits written as 0/1;
//! * halfspaces — JSON: `{weights, claimed_margin, dimension}`.

use serde::{Deserialize, Serialize};

use crate::decision_lists::{DecisionList, Feature, FeatureKind, PacExample, PacSample, SignedLiteral, Term};
use crate::error::{Error, Result};
use crate::reductions::MarginHalfspace;
use crate::winnow::OnlineExample;

fn header(dim: usize) -> String {
    let mut cols: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    cols.push("y".into());
    cols.join(",")
}

/// Splits into nonempty rows, dropping `#` comment lines (artifact files
/// carry their seed and config hash in a leading comment).
fn split_rows(text: &str) -> Vec<&str> {
    text.lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Parses a CSV header of the form `x0,...,x{d-1},y` and returns `d`.
fn parse_header(line: &str) -> Result<usize> {
    let cols: Vec<&str> = line.split(',').map(str::trim).collect();
    if cols.len() < 2 || cols[cols.len() - 1] != "y" {
        return Err(Error::Format(format!(
            "expected header \"x0,...,x{{d-1}},y\", got {line:?}"
        )));
    }
    let dim = cols.len() - 1;
    for (i, col) in cols[..dim].iter().enumerate() {
        if *col != format!("x{i}") {
            return Err(Error::Format(format!(
                "header column {} should be \"x{i}\", got {col:?}",
                i + 1
            )));
        }
    }
    Ok(dim)
}

fn parse_cells(line: &str, row: usize, dim: usize) -> Result<Vec<i64>> {
    let cells: Vec<&str> = line.split(',').map(str::trim).collect();
    if cells.len() != dim + 1 {
        return Err(Error::Format(format!(
            "row {row}: expected {} cells, got {}",
            dim + 1,
            cells.len()
        )));
    }
    cells
        .iter()
        .map(|c| {
            c.parse::<i64>()
                .map_err(|_| Error::Format(format!("row {row}: non-integer cell {c:?}")))
        })
        .collect()
}

/// Renders a labeled boolean sample as CSV (0/1 cells).
pub fn pac_sample_to_csv(sample: &PacSample) -> String {
    let mut out = header(sample.dim());
    out.push('\n');
    for ex in sample.examples() {
        for bit in &ex.x {
            out.push(if *bit { '1' } else { '0' });
            out.push(',');
        }
        out.push(if ex.label { '1' } else { '0' });
        out.push('\n');
    }
    out
}

/// Parses the CSV format written by [`pac_sample_to_csv`].
pub fn pac_sample_from_csv(text: &str) -> Result<PacSample> {
    let rows = split_rows(text);
    let Some((head, body)) = rows.split_first() else {
        return Err(Error::Format("empty sample file (missing header)".into()));
    };
    let dim = parse_header(head)?;
    let mut examples = Vec::with_capacity(body.len());
    for (i, line) in body.iter().enumerate() {
        let row = i + 2;
        let cells = parse_cells(line, row, dim)?;
        let to_bit = |v: i64| -> Result<bool> {
            match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Format(format!("row {row}: cell must be 0 or 1, got {other}"))),
            }
        };
        let x = cells[..dim].iter().map(|&v| to_bit(v)).collect::<Result<Vec<bool>>>()?;
        let label = to_bit(cells[dim])?;
        examples.push(PacExample { x, label });
    }
    PacSample::new(dim, examples)
}

/// Renders a sign-vector stream as CSV (`-1`/`1` cells).
pub fn stream_to_csv(stream: &[OnlineExample]) -> Result<String> {
    let Some(first) = stream.first() else {
        return Err(Error::Parameter(
            "stream serialization needs at least one example to fix the dimension".into(),
        ));
    };
    let dim = first.dim();
    let mut out = header(dim);
    out.push('\n');
    for ex in stream {
        if ex.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: ex.dim() });
        }
        let mut cells: Vec<String> = ex.x.iter().map(|v| v.to_string()).collect();
        cells.push(ex.y.to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Parses the CSV format written by [`stream_to_csv`].
pub fn stream_from_csv(text: &str) -> Result<Vec<OnlineExample>> {
    let rows = split_rows(text);
    let Some((head, body)) = rows.split_first() else {
        return Err(Error::Format("empty stream file (missing header)".into()));
    };
    let dim = parse_header(head)?;
    let mut stream = Vec::with_capacity(body.len());
    for (i, line) in body.iter().enumerate() {
        let row = i + 2;
        let cells = parse_cells(line, row, dim)?;
        let to_sign = |v: i64| -> Result<i8> {
            match v {
                -1 => Ok(-1),
                1 => Ok(1),
                other => Err(Error::Format(format!("row {row}: cell must be -1 or 1, got {other}"))),
            }
        };
        let x = cells[..dim].iter().map(|&v| to_sign(v)).collect::<Result<Vec<i8>>>()?;
        let y = to_sign(cells[dim])?;
        stream.push(OnlineExample::new(x, y)?);
    }
    Ok(stream)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum FeatureKindDto {
    Literal { index: usize },
    NegatedLiteral { index: usize },
    Conjunction { literals: Vec<SignedLiteral> },
    ConstantTrue,
}

#[derive(Serialize, Deserialize)]
struct FeatureDto {
    id: usize,
    #[serde(flatten)]
    kind: FeatureKindDto,
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    feature: FeatureDto,
    bit: u8,
}

#[derive(Serialize, Deserialize)]
struct DecisionListDto {
    terms: Vec<TermDto>,
    default_bit: u8,
}

fn feature_to_dto(f: &Feature) -> FeatureDto {
    let kind = match &f.kind {
        FeatureKind::Literal(i) => FeatureKindDto::Literal { index: *i },
        FeatureKind::NegatedLiteral(i) => FeatureKindDto::NegatedLiteral { index: *i },
        FeatureKind::Conjunction(lits) => {
            FeatureKindDto::Conjunction { literals: lits.clone() }
        }
        FeatureKind::ConstantTrue => FeatureKindDto::ConstantTrue,
    };
    FeatureDto { id: f.id, kind }
}

fn feature_from_dto(dto: FeatureDto) -> Feature {
    let kind = match dto.kind {
        FeatureKindDto::Literal { index } => FeatureKind::Literal(index),
        FeatureKindDto::NegatedLiteral { index } => FeatureKind::NegatedLiteral(index),
        FeatureKindDto::Conjunction { literals } => FeatureKind::Conjunction(literals),
        FeatureKindDto::ConstantTrue => FeatureKind::ConstantTrue,
    };
    Feature { id: dto.id, kind }
}

fn bit_from_u8(v: u8, what: &str) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(Error::Format(format!("{what} must be 0 or 1, got {other}"))),
    }
}

/// Renders a decision list as pretty JSON with 0/1 bits.
pub fn decision_list_to_json(list: &DecisionList) -> Result<String> {
    let dto = DecisionListDto {
        terms: list
            .terms
            .iter()
            .map(|t| TermDto { feature: feature_to_dto(&t.feature), bit: u8::from(t.bit) })
            .collect(),
        default_bit: u8::from(list.default_bit),
    };
    Ok(serde_json::to_string_pretty(&dto)?)
}

/// Parses the JSON format written by [`decision_list_to_json`], revalidating
/// the no-repeated-feature invariant.
pub fn decision_list_from_json(text: &str) -> Result<DecisionList> {
    let dto: DecisionListDto = serde_json::from_str(text)?;
    let terms = dto
        .terms
        .into_iter()
        .map(|t| {
            Ok(Term { feature: feature_from_dto(t.feature), bit: bit_from_u8(t.bit, "term bit")? })
        })
        .collect::<Result<Vec<Term>>>()?;
    DecisionList::new(terms, bit_from_u8(dto.default_bit, "default bit")?)
}

#[derive(Serialize, Deserialize)]
struct HalfspaceDto {
    weights: Vec<f64>,
    claimed_margin: f64,
    dimension: usize,
}

/// Renders a halfspace as pretty JSON: `{weights, claimed_margin, dimension}`.
pub fn halfspace_to_json(h: &MarginHalfspace) -> Result<String> {
    let dto = HalfspaceDto {
        weights: h.weights.clone(),
        claimed_margin: h.claimed_margin,
        dimension: h.dimension,
    };
    Ok(serde_json::to_string_pretty(&dto)?)
}

/// Parses the JSON format written by [`halfspace_to_json`], revalidating the
/// unit-norm and margin invariants.
pub fn halfspace_from_json(text: &str) -> Result<MarginHalfspace> {
    let dto: HalfspaceDto = serde_json::from_str(text)?;
    let h = MarginHalfspace::new(dto.weights, dto.claimed_margin)?;
    if h.dimension != dto.dimension {
        return Err(Error::Format(format!(
            "halfspace: dimension field {} does not match {} weights for ambient dimension {}",
            dto.dimension,
            h.weights.len(),
            h.dimension
        )));
    }
    Ok(h)
}
