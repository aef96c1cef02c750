//! JSON interchange: filtered complexes (with optional DGA block), CW
//! complexes, and page reports. Entries are decimal strings (`"3"`,
//! `"-2/7"`) so every ring round-trips exactly; serialization is canonical
//! given the model.

use serde::{Deserialize, Serialize};
use specseq::ahss::CWComplex;
use specseq::complexes::ChainComplex;
use specseq::exact_linalg::{parse_scalar, scalar_to_string, ExactMatrix, Ring, Scalar};
use specseq::filtered::{FilteredComplex, TailHigh};
use specseq::indexing::Convention;
use specseq::multiplicative::FilteredDGA;
use specseq::pages::{Page, PageIndex};
use std::collections::BTreeMap;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json syntax: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("model: {0}")]
    Model(#[from] specseq::Error),
    #[error("the filtration fails validation: {0:?}")]
    Invalid(Vec<specseq::filtered::Violation>),
    #[error("io: {0}")]
    File(#[from] std::io::Error),
}

pub type IoResult<T> = std::result::Result<T, IoError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFile {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFile {
    pub weight: i64,
    /// One span per degree, ascending from `degree_range[0]`.
    pub spans: Vec<MatrixFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFile {
    pub m: i64,
    pub n: i64,
    pub matrix: MatrixFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgaFile {
    pub products: Vec<ProductFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unit: Option<Vec<String>>,
    #[serde(default)]
    pub commutative: bool,
}

/// `*.fc.json`: a bounded (optionally filtered) chain complex. Files
/// without `breakpoints`/`steps` describe a bare complex and parse to the
/// constant filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredComplexFile {
    pub format_version: u32,
    pub ring: RingFile,
    /// `[n_min, n_max]`; ignored when `ranks` is empty.
    pub degree_range: [i64; 2],
    pub ranks: Vec<usize>,
    /// `differentials[i]` maps degree `n_min + 1 + i` to the degree below.
    pub differentials: Vec<MatrixFile>,
    #[serde(default)]
    pub breakpoints: Vec<i64>,
    #[serde(default)]
    pub steps: Vec<StepFile>,
    #[serde(default = "default_tail")]
    pub tail_high: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dga: Option<DgaFile>,
}

fn default_tail() -> String {
    "zero".into()
}

/// `*.cw.json`: cellular data of a finite CW complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwFile {
    pub format_version: u32,
    pub dimension: usize,
    pub cell_counts: Vec<usize>,
    pub boundaries: Vec<MatrixFile>,
}

/// `*.page.json`: one page of a spectral sequence under a convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageReportFile {
    pub format_version: u32,
    pub r: String,
    pub convention: String,
    pub terms: Vec<PageTermFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageTermFile {
    pub s: i64,
    pub t: i64,
    pub rank: usize,
    pub invariant_factors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub differential: Option<MatrixFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target: Option<[i64; 2]>,
}

// ---------------------------------------------------------------------------
// matrix and ring conversions

pub fn matrix_to_file(m: &ExactMatrix) -> MatrixFile {
    MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.entries().iter().map(scalar_to_string).collect(),
    }
}

pub fn matrix_from_file(ring: Ring, f: &MatrixFile, what: &str) -> IoResult<ExactMatrix> {
    if f.entries.len() != f.rows * f.cols {
        return Err(IoError::Schema(format!(
            "{what}: {}x{} matrix needs {} entries, got {}",
            f.rows,
            f.cols,
            f.rows * f.cols,
            f.entries.len()
        )));
    }
    let mut entries: Vec<Scalar> = Vec::with_capacity(f.entries.len());
    for (i, e) in f.entries.iter().enumerate() {
        let v = parse_scalar(e)
            .ok_or_else(|| IoError::Schema(format!("{what}: entry {i} is not a scalar: {e:?}")))?;
        entries.push(v);
    }
    Ok(ExactMatrix::from_entries(ring, f.rows, f.cols, entries)?)
}

pub fn ring_to_file(r: Ring) -> RingFile {
    match r {
        Ring::Integers => RingFile { kind: "integers".into(), p: None },
        Ring::Rationals => RingFile { kind: "rationals".into(), p: None },
        Ring::PrimeField(p) => RingFile { kind: "prime_field".into(), p: Some(p) },
    }
}

pub fn ring_from_file(f: &RingFile) -> IoResult<Ring> {
    match f.kind.as_str() {
        "integers" => Ok(Ring::Integers),
        "rationals" => Ok(Ring::Rationals),
        "prime_field" => {
            let p = f.p.ok_or_else(|| IoError::Schema("prime_field needs p".into()))?;
            if !Ring::valid_characteristic(p) {
                return Err(IoError::Schema(format!("{p} is not prime")));
            }
            Ok(Ring::PrimeField(p))
        }
        other => Err(IoError::Schema(format!("unknown ring kind {other:?}"))),
    }
}

// ---------------------------------------------------------------------------
// filtered complexes

pub fn filtered_to_file(f: &FilteredComplex, dga: Option<&FilteredDGA>) -> FilteredComplexFile {
    let c = f.complex();
    let (n_min, n_max) = c.degree_range();
    let ranks: Vec<usize> = c.degrees().map(|n| c.rank(n)).collect();
    let differentials: Vec<MatrixFile> =
        ((n_min + 1)..=n_max).map(|n| matrix_to_file(&c.differential(n))).collect();
    let breakpoints = f.breakpoints();
    let steps = breakpoints
        .iter()
        .map(|&s| StepFile {
            weight: s,
            spans: (n_min..=n_max).map(|n| matrix_to_file(&f.step_span(s, n))).collect(),
        })
        .collect();
    FilteredComplexFile {
        format_version: FORMAT_VERSION,
        ring: ring_to_file(f.ring()),
        degree_range: [n_min, n_max],
        ranks,
        differentials,
        breakpoints,
        steps,
        tail_high: match f.tail_high() {
            TailHigh::Zero => "zero".into(),
            TailHigh::Constant => "constant".into(),
        },
        dga: dga.map(dga_to_file),
    }
}

fn dga_to_file(dga: &FilteredDGA) -> DgaFile {
    DgaFile {
        products: dga
            .products()
            .iter()
            .map(|(&(m, n), mat)| ProductFile { m, n, matrix: matrix_to_file(mat) })
            .collect(),
        unit: dga.unit.as_ref().map(|u| u.iter().map(scalar_to_string).collect()),
        commutative: dga.commutative,
    }
}

pub fn complex_from_file(file: &FilteredComplexFile) -> IoResult<ChainComplex> {
    if file.format_version != FORMAT_VERSION {
        return Err(IoError::Schema(format!(
            "format_version {} unsupported (expected {FORMAT_VERSION})",
            file.format_version
        )));
    }
    let ring = ring_from_file(&file.ring)?;
    if file.ranks.is_empty() {
        return Ok(ChainComplex::zero(ring));
    }
    if file.differentials.len() + 1 != file.ranks.len() {
        return Err(IoError::Schema(format!(
            "{} ranks need {} differentials, got {}",
            file.ranks.len(),
            file.ranks.len() - 1,
            file.differentials.len()
        )));
    }
    let mut differentials = Vec::new();
    for (i, d) in file.differentials.iter().enumerate() {
        let n = file.degree_range[0] + 1 + i as i64;
        differentials.push(matrix_from_file(ring, d, &format!("differential at degree {n}"))?);
    }
    Ok(ChainComplex::new(ring, file.degree_range[0], file.ranks.clone(), differentials)?)
}

/// Parse a filtered complex (and its DGA block if present). Validation
/// failures that block the page machinery are errors; saturation warnings
/// are returned alongside.
pub fn filtered_from_file(
    file: &FilteredComplexFile,
) -> IoResult<(FilteredComplex, Option<FilteredDGA>, Vec<specseq::filtered::Violation>)> {
    let complex = complex_from_file(file)?;
    let ring = complex.ring();
    let (n_min, n_max) = complex.degree_range();
    let filtered = if file.breakpoints.is_empty() {
        FilteredComplex::constant(complex)
    } else {
        if file.steps.len() != file.breakpoints.len() {
            return Err(IoError::Schema(format!(
                "{} breakpoints need {} steps, got {}",
                file.breakpoints.len(),
                file.breakpoints.len(),
                file.steps.len()
            )));
        }
        let mut table: BTreeMap<(i64, i64), ExactMatrix> = BTreeMap::new();
        for step in &file.steps {
            if !file.breakpoints.contains(&step.weight) {
                return Err(IoError::Schema(format!(
                    "step weight {} is not a breakpoint",
                    step.weight
                )));
            }
            let expected = (n_max - n_min + 1) as usize;
            if step.spans.len() != expected {
                return Err(IoError::Schema(format!(
                    "step at weight {} needs {} spans, got {}",
                    step.weight,
                    expected,
                    step.spans.len()
                )));
            }
            for (i, span) in step.spans.iter().enumerate() {
                let n = n_min + i as i64;
                table.insert(
                    (step.weight, n),
                    matrix_from_file(ring, span, &format!("step weight {} degree {n}", step.weight))?,
                );
            }
        }
        let tail = match file.tail_high.as_str() {
            "zero" => TailHigh::Zero,
            "constant" => TailHigh::Constant,
            other => return Err(IoError::Schema(format!("unknown tail_high {other:?}"))),
        };
        FilteredComplex::new(
            complex,
            &file.breakpoints,
            |s, n| table.get(&(s, n)).cloned().expect("dense table"),
            tail,
        )?
    };
    let violations = filtered.validate();
    if violations.iter().any(|v| v.blocks_pages()) {
        return Err(IoError::Invalid(violations));
    }
    let dga = match &file.dga {
        None => None,
        Some(d) => {
            let mut products = BTreeMap::new();
            for p in &d.products {
                let mat =
                    matrix_from_file(ring, &p.matrix, &format!("product ({},{})", p.m, p.n))?;
                products.insert((p.m, p.n), mat);
            }
            let unit = match &d.unit {
                None => None,
                Some(u) => {
                    let mut out = Vec::new();
                    for (i, e) in u.iter().enumerate() {
                        out.push(parse_scalar(e).ok_or_else(|| {
                            IoError::Schema(format!("unit entry {i} is not a scalar"))
                        })?);
                    }
                    Some(out)
                }
            };
            Some(FilteredDGA::new(filtered.clone(), products, unit, d.commutative)?)
        }
    };
    Ok((filtered, dga, violations))
}

pub fn parse_filtered_json(
    json: &str,
) -> IoResult<(FilteredComplex, Option<FilteredDGA>, Vec<specseq::filtered::Violation>)> {
    let file: FilteredComplexFile = serde_json::from_str(json)?;
    filtered_from_file(&file)
}

pub fn filtered_to_json(f: &FilteredComplex, dga: Option<&FilteredDGA>) -> String {
    serde_json::to_string_pretty(&filtered_to_file(f, dga)).expect("serializable")
}

// ---------------------------------------------------------------------------
// CW complexes

pub fn cw_to_file(x: &CWComplex) -> CwFile {
    CwFile {
        format_version: FORMAT_VERSION,
        dimension: x.dimension(),
        cell_counts: x.cell_counts().to_vec(),
        boundaries: x.boundaries().iter().map(matrix_to_file).collect(),
    }
}

pub fn cw_from_file(file: &CwFile) -> IoResult<CWComplex> {
    if file.format_version != FORMAT_VERSION {
        return Err(IoError::Schema(format!(
            "format_version {} unsupported (expected {FORMAT_VERSION})",
            file.format_version
        )));
    }
    if file.cell_counts.len() != file.dimension + 1 {
        return Err(IoError::Schema(format!(
            "dimension {} needs {} cell counts, got {}",
            file.dimension,
            file.dimension + 1,
            file.cell_counts.len()
        )));
    }
    let mut boundaries = Vec::new();
    for (k, b) in file.boundaries.iter().enumerate() {
        boundaries.push(matrix_from_file(Ring::Integers, b, &format!("boundary ∂_{}", k + 1))?);
    }
    Ok(CWComplex::new(file.cell_counts.clone(), boundaries)?)
}

pub fn parse_cw_json(json: &str) -> IoResult<CWComplex> {
    let file: CwFile = serde_json::from_str(json)?;
    cw_from_file(&file)
}

pub fn cw_to_json(x: &CWComplex) -> String {
    serde_json::to_string_pretty(&cw_to_file(x)).expect("serializable")
}

// ---------------------------------------------------------------------------
// page reports

pub fn page_report(page: &Page, convention: Convention) -> PageReportFile {
    let r_label = match page.index {
        PageIndex::R(r) => r.to_string(),
        PageIndex::Infinity => "inf".into(),
    };
    let mut terms: Vec<PageTermFile> = Vec::new();
    for (&(s, t), term) in &page.terms {
        let (cs, ct) = convention.from_internal(s, t);
        let target = match page.index {
            PageIndex::R(r) => {
                let (ts, tt) = (s - r as i64, t + r as i64 - 1);
                Some(convention.from_internal(ts, tt))
            }
            PageIndex::Infinity => None,
        };
        terms.push(PageTermFile {
            s: cs,
            t: ct,
            rank: term.module().free_rank,
            invariant_factors: term
                .module()
                .invariant_factors
                .iter()
                .map(|d| d.to_string())
                .collect(),
            differential: term.differential.as_ref().map(matrix_to_file),
            target: target.map(|(a, b)| [a, b]),
        });
    }
    terms.sort_by_key(|t| (t.s, t.t));
    PageReportFile { format_version: FORMAT_VERSION, r: r_label, convention: convention.name(), terms }
}

pub fn page_report_to_json(report: &PageReportFile) -> String {
    serde_json::to_string_pretty(report).expect("serializable")
}

pub fn page_report_from_json(json: &str) -> IoResult<PageReportFile> {
    Ok(serde_json::from_str(json)?)
}
