//! The JSON report envelope. Fixed top-level keys, in order: `graph`,
//! `checks`, `verdict`, `certificates`, `bounds`, `version`. All set-like
//! data is emitted in name order so reruns produce identical bytes.

use serde::Serialize;

use kgraph::classify::{AfStatus, Certificate, StructureOutcome, Verdict};
use kgraph::cycles::GenCycle;
use kgraph::{Degree, Path, Skeleton};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct Report {
    pub graph: GraphSummary,
    pub checks: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictJson>,
    pub certificates: Vec<CertificateJson>,
    pub bounds: Bounds,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct GraphSummary {
    pub rank: usize,
    pub vertices: usize,
    pub edges: usize,
    pub squares: usize,
    pub accepted: bool,
    pub locally_convex: bool,
    pub row_finite: bool,
    pub sources: Vec<SourceJson>,
}

#[derive(Serialize)]
pub struct SourceJson {
    pub vertex: String,
    pub colour: usize,
}

#[derive(Serialize)]
pub struct Bounds {
    pub max_degree: Vec<u32>,
    pub max_states: usize,
}

#[derive(Serialize, Clone)]
pub struct PathJson {
    pub range: String,
    pub edges: Vec<String>,
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub status: String,
    pub bound: Vec<u32>,
}

#[derive(Serialize)]
#[serde(tag = "kind")]
pub enum CertificateJson {
    #[serde(rename = "conventional-cycle")]
    ConventionalCycle { cycle: PathJson },
    #[serde(rename = "generalised-cycle")]
    GeneralisedCycle {
        mu: PathJson,
        nu: PathJson,
        has_entrance: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        entrance: Option<PathJson>,
        transcript: String,
    },
    #[serde(rename = "quotient-generalised-cycle")]
    QuotientGenCycle {
        hereditary: Vec<String>,
        saturation_bound: Vec<u32>,
        mu: PathJson,
        nu: PathJson,
    },
}

pub fn summarize(sk: &Skeleton) -> GraphSummary {
    let v = sk.validate();
    GraphSummary {
        rank: sk.rank(),
        vertices: sk.vertex_count(),
        edges: sk.edge_count(),
        squares: sk.squares().len(),
        accepted: v.accepted,
        locally_convex: v.locally_convex,
        row_finite: v.row_finite,
        sources: v
            .sources
            .iter()
            .map(|&(vx, colour)| SourceJson {
                vertex: sk.vertex_name(vx).to_string(),
                colour,
            })
            .collect(),
    }
}

pub fn path_json(sk: &Skeleton, p: &Path) -> PathJson {
    PathJson {
        range: sk.vertex_name(p.range()).to_string(),
        edges: p.edge_names(sk),
    }
}

pub fn gen_cycle_json(sk: &Skeleton, g: &GenCycle) -> CertificateJson {
    CertificateJson::GeneralisedCycle {
        mu: path_json(sk, &g.mu),
        nu: path_json(sk, &g.nu),
        has_entrance: g.has_entrance,
        entrance: g.entrance.as_ref().map(|e| path_json(sk, e)),
        transcript: format!("{:016x}", g.transcript_hash),
    }
}

pub fn certificate_json(sk: &Skeleton, cert: &Certificate) -> CertificateJson {
    match cert {
        Certificate::ConventionalCycle { cycle } => CertificateJson::ConventionalCycle {
            cycle: path_json(sk, cycle),
        },
        Certificate::GeneralisedCycle { gen_cycle } => gen_cycle_json(sk, gen_cycle),
        Certificate::QuotientGenCycle {
            hereditary,
            gen_cycle,
            quotient,
        } => CertificateJson::QuotientGenCycle {
            hereditary: hereditary.names(sk),
            saturation_bound: hereditary
                .saturation_bound
                .as_ref()
                .map(|d| d.coords().to_vec())
                .unwrap_or_default(),
            mu: path_json(quotient, &gen_cycle.mu),
            nu: path_json(quotient, &gen_cycle.nu),
        },
    }
}

pub fn verdict_json(v: &Verdict) -> VerdictJson {
    VerdictJson {
        status: match v.status {
            AfStatus::Af => "AF".into(),
            AfStatus::NotAf => "NotAF".into(),
            AfStatus::Unknown => "Unknown".into(),
        },
        bound: v.bound_used.coords().to_vec(),
    }
}

pub fn structure_outcome_json(sk: &Skeleton, outcome: &StructureOutcome) -> serde_json::Value {
    match outcome {
        StructureOutcome::FiniteDimensional {
            summands,
            unique_source,
        } => serde_json::json!({
            "kind": "finite-dimensional",
            "unique_source": unique_source,
            "summands": summands.iter().map(|(v, dim)| serde_json::json!({
                "vertex": sk.vertex_name(*v),
                "dimension": dim.to_string(),
            })).collect::<Vec<_>>(),
        }),
        StructureOutcome::InfiniteProjection {
            cycle,
            entrance,
            cofinal_proxy,
            aperiodicity,
            purely_infinite,
        } => serde_json::json!({
            "kind": "infinite-projection",
            "cycle": path_json(sk, cycle),
            "entrance": path_json(sk, entrance),
            "cofinal_proxy": cofinal_proxy,
            "aperiodicity": format!("{aperiodicity:?}"),
            "purely_infinite": purely_infinite,
        }),
        StructureOutcome::ToriDecomposition { classes } => serde_json::json!({
            "kind": "tori-decomposition",
            "classes": classes.iter().map(|c| serde_json::json!({
                "cycle": path_json(sk, &c.cycle),
                "orbit": c.orbit.iter().map(|&v| sk.vertex_name(v)).collect::<Vec<_>>(),
                "torus_rank": c.torus_rank,
                "group_basis": c.group_basis.iter().map(|row| {
                    row.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
    }
}

pub fn bounds_json(sk: &Skeleton, degree: &Degree) -> Bounds {
    Bounds {
        max_degree: degree.coords().to_vec(),
        max_states: sk.limits().max_states,
    }
}
