//! JSON document formats: arrangements, completions and Pappus parameters.
//!
//! Scalars travel as strings (`"p/q"`, `"a + b*sqrt(d)"`); parsing is exact
//! and round-trips byte-for-byte through `Display`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use discrim_core::completion::{CompletionResult, Involution, PappusParams};
use discrim_core::planar::incident;
use discrim_core::{Arrangement, Field, Hyperplane, ProjectiveFlat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldDoc {
    Rational,
    Quadratic { d: u64 },
}

impl FieldDoc {
    pub fn to_field(&self) -> Result<Field, FormatError> {
        match self {
            FieldDoc::Rational => Ok(Field::Rational),
            FieldDoc::Quadratic { d } => Field::quadratic(*d).map_err(|e| FormatError {
                message: e.to_string(),
                line: None,
                column: None,
            }),
        }
    }

    pub fn of(field: Field) -> FieldDoc {
        match field {
            Field::Rational => FieldDoc::Rational,
            Field::Quadratic { d } => FieldDoc::Quadratic { d },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneDoc {
    pub label: String,
    pub normal: Vec<String>,
    pub offset: String,
}

/// The arrangement document; the order of `hyperplanes` is semantically
/// meaningful and preserved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementDoc {
    pub dimension: usize,
    pub field: FieldDoc,
    pub hyperplanes: Vec<HyperplaneDoc>,
}

#[derive(Clone, Debug)]
pub struct FormatError {
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

impl FormatError {
    fn plain(message: impl Into<String>) -> FormatError {
        FormatError {
            message: message.into(),
            line: None,
            column: None,
        }
    }
}

/// Locate the `occurrence`-th appearance of the JSON string token `"text"`
/// in the raw source and return its 1-based line/column.
fn locate_token(source: &str, text: &str, occurrence: usize) -> Option<(usize, usize)> {
    let needle = format!("\"{text}\"");
    let mut from = 0;
    let mut seen = 0;
    while let Some(pos) = source[from..].find(&needle) {
        let abs = from + pos;
        if seen == occurrence {
            let prefix = &source[..abs];
            let line = prefix.bytes().filter(|&b| b == b'\n').count() + 1;
            let column = abs - prefix.rfind('\n').map_or(0, |p| p + 1) + 1;
            return Some((line, column));
        }
        seen += 1;
        from = abs + 1;
    }
    None
}

impl ArrangementDoc {
    pub fn parse(text: &str) -> Result<ArrangementDoc, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError {
            message: e.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
        })
    }

    /// Build the exact arrangement, reporting scalar parse errors with the
    /// line/column of the offending string when the raw source is given.
    pub fn to_arrangement(
        &self,
        source: Option<&str>,
    ) -> Result<(Arrangement, Field), FormatError> {
        let field = self.field.to_field()?;
        let mut occurrences: BTreeMap<String, usize> = BTreeMap::new();
        let mut parse_scalar = |text: &str, path: String| -> Result<Scalar, FormatError> {
            let occ = {
                let e = occurrences.entry(text.to_string()).or_insert(0);
                let v = *e;
                *e += 1;
                v
            };
            Scalar::parse(text, field).map_err(|err| {
                let loc = source.and_then(|s| locate_token(s, text, occ));
                FormatError {
                    message: format!("{path}: {err}"),
                    line: loc.map(|(l, _)| l),
                    column: loc.map(|(_, c)| c),
                }
            })
        };
        let mut hyperplanes = Vec::new();
        for (i, h) in self.hyperplanes.iter().enumerate() {
            let mut normal = Vec::new();
            for (j, s) in h.normal.iter().enumerate() {
                normal.push(parse_scalar(s, format!("hyperplanes[{i}].normal[{j}]"))?);
            }
            let offset = parse_scalar(&h.offset, format!("hyperplanes[{i}].offset"))?;
            hyperplanes.push(Hyperplane {
                normal,
                offset,
                label: h.label.clone(),
            });
        }
        let arr = Arrangement::new(self.dimension, hyperplanes)
            .map_err(|e| FormatError::plain(e.to_string()))?;
        Ok((arr, field))
    }

    pub fn from_arrangement(arr: &Arrangement, field: Field) -> ArrangementDoc {
        ArrangementDoc {
            dimension: arr.dim(),
            field: FieldDoc::of(field),
            hyperplanes: arr
                .hyperplanes()
                .iter()
                .map(|h| HyperplaneDoc {
                    label: h.label.clone(),
                    normal: h.normal.iter().map(|s| s.to_string()).collect(),
                    offset: h.offset.to_string(),
                })
                .collect(),
        }
    }

    /// Canonical serialization: the parsed document re-rendered with
    /// canonical scalar strings, pretty-printed.
    pub fn canonical_json(&self, field: Field) -> Result<String, FormatError> {
        let (arr, _) = self.to_arrangement(None)?;
        let doc = ArrangementDoc::from_arrangement(&arr, field);
        Ok(to_json_pretty(&doc))
    }

    /// Hex SHA-256 of the canonical serialization; reports embed this so
    /// fixture edits are detected.
    pub fn canonical_hash(&self) -> Result<String, FormatError> {
        let field = self.field.to_field()?;
        let canon = self.canonical_json(field)?;
        let digest = Sha256::digest(canon.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// Completion document: the involution, the completion lines and the cover
/// map from double points (`"i,j"`, 1-based) to completion lines (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionDoc {
    pub sigma: Vec<[usize; 2]>,
    pub lines: Vec<Vec<String>>,
    pub orbit_map: BTreeMap<String, usize>,
    pub axes: Vec<usize>,
}

impl CompletionDoc {
    pub fn parse(text: &str) -> Result<CompletionDoc, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError {
            message: e.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
        })
    }

    pub fn of(comp: &CompletionResult) -> CompletionDoc {
        CompletionDoc {
            sigma: comp
                .sigma
                .pairs()
                .iter()
                .map(|&(a, b)| [a + 1, b + 1])
                .collect(),
            lines: comp
                .lines
                .iter()
                .map(|l| l.coeffs().iter().map(|s| s.to_string()).collect())
                .collect(),
            orbit_map: comp
                .orbit_map
                .iter()
                .map(|(&(i, j), &li)| (format!("{},{}", i + 1, j + 1), li + 1))
                .collect(),
            axes: comp.axes.iter().map(|&i| i + 1).collect(),
        }
    }

    pub fn to_completion(&self, field: Field) -> Result<CompletionResult, FormatError> {
        let sigma = Involution::new(
            self.sigma
                .iter()
                .map(|&[a, b]| {
                    if a == 0 || b == 0 {
                        Err(FormatError::plain("sigma indices are 1-based"))
                    } else {
                        Ok((a - 1, b - 1))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?,
        )
        .map_err(|e| FormatError::plain(e.to_string()))?;
        let mut lines = Vec::new();
        for (i, coeffs) in self.lines.iter().enumerate() {
            if coeffs.len() != 3 {
                return Err(FormatError::plain(format!(
                    "lines[{i}] must have 3 coefficients"
                )));
            }
            let parsed: Result<Vec<Scalar>, _> = coeffs
                .iter()
                .map(|s| {
                    Scalar::parse(s, field)
                        .map_err(|e| FormatError::plain(format!("lines[{i}]: {e}")))
                })
                .collect();
            lines.push(ProjectiveFlat::new(&parsed?));
        }
        let mut orbit_map = BTreeMap::new();
        for (key, &li) in &self.orbit_map {
            let parts: Vec<&str> = key.split(',').collect();
            if parts.len() != 2 {
                return Err(FormatError::plain(format!("bad orbit_map key {key:?}")));
            }
            let i: usize = parts[0]
                .trim()
                .parse()
                .map_err(|_| FormatError::plain(format!("bad orbit_map key {key:?}")))?;
            let j: usize = parts[1]
                .trim()
                .parse()
                .map_err(|_| FormatError::plain(format!("bad orbit_map key {key:?}")))?;
            if i == 0 || j == 0 || li == 0 || li > lines.len() {
                return Err(FormatError::plain(format!(
                    "orbit_map entry {key:?} out of range"
                )));
            }
            orbit_map.insert((i - 1, j - 1), li - 1);
        }
        let axes: Vec<usize> = self
            .axes
            .iter()
            .map(|&i| {
                if i == 0 || i > lines.len() {
                    Err(FormatError::plain("axis index out of range"))
                } else {
                    Ok(i - 1)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let comp = CompletionResult {
            sigma,
            lines,
            orbit_map,
            axes,
        };
        // cover sanity: mapped lines actually contain their points is not
        // checkable without the trace; index ranges were checked above.
        Ok(comp)
    }
}

/// Pappus family parameters: three points on each carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PappusParamsDoc {
    pub a: [String; 3],
    pub b: [String; 3],
}

fn parse_rational(text: &str) -> Result<BigRational, FormatError> {
    match Scalar::parse(text, Field::Rational)
        .map_err(|e| FormatError::plain(format!("{text:?}: {e}")))?
    {
        Scalar::Rational(r) => Ok(r),
        _ => unreachable!(),
    }
}

impl PappusParamsDoc {
    pub fn to_params(&self) -> Result<PappusParams, FormatError> {
        let conv = |v: &[String; 3]| -> Result<[BigRational; 3], FormatError> {
            Ok([
                parse_rational(&v[0])?,
                parse_rational(&v[1])?,
                parse_rational(&v[2])?,
            ])
        };
        Ok(PappusParams {
            a: conv(&self.a)?,
            b: conv(&self.b)?,
        })
    }

    pub fn of(params: &PappusParams) -> PappusParamsDoc {
        let show = |r: &BigRational| {
            if r.denom() == &BigInt::from(1) {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        };
        PappusParamsDoc {
            a: [show(&params.a[0]), show(&params.a[1]), show(&params.a[2])],
            b: [show(&params.b[0]), show(&params.b[1]), show(&params.b[2])],
        }
    }
}

/// Check that a completion document is consistent with a trace: every double
/// point lies on exactly the mapped line.
pub fn validate_completion_against(
    comp: &CompletionResult,
    lines: &[ProjectiveFlat],
) -> Result<(), FormatError> {
    for (&(i, j), &li) in &comp.orbit_map {
        if i >= lines.len() || j >= lines.len() {
            return Err(FormatError::plain("orbit_map point out of range"));
        }
        let p = discrim_core::planar::meet(&lines[i], &lines[j])
            .ok_or_else(|| FormatError::plain("coincident trace lines"))?;
        if !incident(&comp.lines[li], &p) {
            return Err(FormatError::plain(format!(
                "completion line {} does not contain P{}{}",
                li + 1,
                i + 1,
                j + 1
            )));
        }
    }
    Ok(())
}
