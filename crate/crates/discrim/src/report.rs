//! Report schemas the CLI emits. Everything serializes deterministically:
//! struct fields in a fixed order, maps as `BTreeMap`.

use std::collections::BTreeMap;

use serde::Serialize;

use discrim_core::completion::{ChartChoice, ConjectureReport, UnionCertificate};
use discrim_core::lattice::Flat;
use discrim_core::orchard::TripleSystem;
use discrim_core::planar::IncidenceStats;
use discrim_core::subset::Subset;
use discrim_core::{Arrangement, DiscriminantalArrangement, Field};

use crate::formats::ArrangementDoc;

fn subset_1based(s: Subset) -> Vec<usize> {
    s.elements().map(|e| e + 1).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportHeader {
    pub command: String,
    pub input_hash: Option<String>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub generic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantalHyperplaneDoc {
    #[serde(rename = "L")]
    pub l: Vec<usize>,
    pub alpha: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub n: usize,
    pub k: usize,
    pub hyperplanes: Vec<DiscriminantalHyperplaneDoc>,
    pub rank: usize,
}

impl BuildReport {
    pub fn of(header: ReportHeader, disc: &DiscriminantalArrangement) -> BuildReport {
        BuildReport {
            header,
            n: disc.n,
            k: disc.k,
            hyperplanes: disc
                .hyperplanes
                .iter()
                .map(|h| DiscriminantalHyperplaneDoc {
                    l: subset_1based(h.subset),
                    alpha: h.alpha.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
            rank: disc.rank(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatDoc {
    pub indices: Vec<Vec<usize>>,
    pub rank: usize,
    pub multiplicity: usize,
    pub witness: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_very_generic: Option<bool>,
    /// When the flat is a full `D_S`, the support `S` (its planar point
    /// multiplicity is `|S|`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub central_support: Option<Vec<usize>>,
}

impl FlatDoc {
    pub fn of(flat: &Flat, k: usize, flags: Option<(bool, bool)>) -> FlatDoc {
        FlatDoc {
            indices: flat.indices.iter().map(|s| subset_1based(*s)).collect(),
            rank: flat.rank,
            multiplicity: flat.multiplicity(),
            witness: flat.witness.iter().map(|s| subset_1based(*s)).collect(),
            simple: flags.map(|f| f.0),
            non_very_generic: flags.map(|f| f.1),
            central_support: flat.central_support(k).map(subset_1based),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankGroup {
    pub rank: usize,
    pub count: usize,
    pub flats: Vec<FlatDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub n: usize,
    pub k: usize,
    pub max_rank: usize,
    pub ranks: Vec<RankGroup>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VeryGenericDoc {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub max_rank: usize,
    pub very_generic_up_to_max_rank: bool,
    pub witnesses: Vec<FlatDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QsetEntry {
    pub flat: FlatDoc,
    pub translate: ArrangementDoc,
}

#[derive(Clone, Debug, Serialize)]
pub struct QsetsReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub count: usize,
    pub entries: Vec<QsetEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrchardWitness {
    pub triples: Vec<Vec<usize>>,
    pub translate: ArrangementDoc,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrchardReportDoc {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub m_max: usize,
    pub rank: usize,
    pub witnesses: Vec<OrchardWitness>,
}

pub fn triples_doc(system: &TripleSystem) -> Vec<Vec<usize>> {
    system.triples.iter().map(|t| subset_1based(*t)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PointDoc {
    pub point: Vec<String>,
    pub multiplicity: usize,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub s: usize,
    pub t: BTreeMap<usize, usize>,
    pub points: Vec<PointDoc>,
}

pub fn stats_doc(
    stats: &IncidenceStats,
    labels: &[String],
) -> (BTreeMap<usize, usize>, Vec<PointDoc>) {
    let points = stats
        .points
        .iter()
        .map(|p| PointDoc {
            point: p.point.coeffs().iter().map(|s| s.to_string()).collect(),
            multiplicity: p.lines.len(),
            lines: p.lines.iter().map(|&i| labels[i].clone()).collect(),
        })
        .collect();
    (stats.t.clone(), points)
}

#[derive(Clone, Debug, Serialize)]
pub struct CollinearityDoc {
    pub axis: Vec<String>,
    pub points: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub s: usize,
    pub t: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_triple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_ordinary: Option<bool>,
    pub completion_central: bool,
    pub purely_dependent_fixed: bool,
}

impl CertifyReport {
    pub fn of(header: ReportHeader, cert: &UnionCertificate) -> CertifyReport {
        CertifyReport {
            header,
            s: cert.stats.s,
            t: cert.stats.t.clone(),
            max_triple: cert.max_triple,
            min_ordinary: cert.min_ordinary,
            completion_central: cert.completion_central,
            purely_dependent_fixed: cert.purely_dependent_fixed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClauseDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureDoc {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub n: usize,
    pub sigma: String,
    pub independent_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_independent: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub has_max_independent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completion_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub union_t: Option<BTreeMap<usize, usize>>,
    pub clause_min_ordinary: ClauseDoc,
    pub clause_max_triple: ClauseDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
}

impl ConjectureDoc {
    pub fn of(header: ReportHeader, rep: &ConjectureReport) -> ConjectureDoc {
        let clause = |c: &discrim_core::completion::ClauseReport| ClauseDoc {
            lhs: c.lhs,
            rhs: c.rhs,
            agreement: c.agreement,
        };
        ConjectureDoc {
            header,
            n: rep.n,
            sigma: rep.sigma.to_string(),
            independent_count: rep.independent_count,
            expected_independent: rep.expected_independent,
            has_max_independent: rep.has_max_independent,
            completion_error: rep.completion_error.clone(),
            union_t: rep.union.as_ref().map(|u| u.stats.t.clone()),
            clause_min_ordinary: clause(&rep.clause_min_ordinary),
            clause_max_triple: clause(&rep.clause_max_triple),
            chart: rep.chart.as_ref().map(ChartChoice::to_string),
        }
    }
}

pub fn arrangement_labels(arr: &Arrangement) -> Vec<String> {
    arr.hyperplanes().iter().map(|h| h.label.clone()).collect()
}

pub fn doc_of(arr: &Arrangement, field: Field) -> ArrangementDoc {
    ArrangementDoc::from_arrangement(arr, field)
}
