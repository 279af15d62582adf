//! Versioned JSON documents: every artifact carries `"schema"` and `"kind"`
//! next to its own fields.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{RatVector, Rational};
use crate::lcp_game::{game_to_fixed_point, BimatrixGame};
use crate::nash::NeCertificate;

pub const SCHEMA: &str = "nashforge/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    BrouwerCircuit,
    Circuit,
    CompileMeta,
    ParamLp,
    Lcp,
    Game,
    NeReport,
    Fixtures,
    Evaluation,
    VerifyReport,
    ReduceReport,
}

impl ArtifactKind {
    pub fn name(self) -> &'static str {
        match self {
            ArtifactKind::BrouwerCircuit => "brouwer_circuit",
            ArtifactKind::Circuit => "circuit",
            ArtifactKind::CompileMeta => "compile_meta",
            ArtifactKind::ParamLp => "param_lp",
            ArtifactKind::Lcp => "lcp",
            ArtifactKind::Game => "game",
            ArtifactKind::NeReport => "ne_report",
            ArtifactKind::Fixtures => "fixtures",
            ArtifactKind::Evaluation => "evaluation",
            ArtifactKind::VerifyReport => "verify_report",
            ArtifactKind::ReduceReport => "reduce_report",
        }
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("expected a {expected} document, found {found}")]
    Kind { expected: &'static str, found: String },
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema: &'static str,
    kind: ArtifactKind,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Deserialize)]
struct Header {
    schema: Option<String>,
    kind: Option<ArtifactKind>,
}

/// Pretty-printed document with a trailing newline.
pub fn to_document<T: Serialize>(kind: ArtifactKind, body: &T) -> Result<String, FormatError> {
    let env = Envelope {
        schema: SCHEMA,
        kind,
        body,
    };
    let mut s = serde_json::to_string_pretty(&env)?;
    s.push('\n');
    Ok(s)
}

/// The declared kind of a document, if any. Documents without a schema
/// field are accepted as hand-written input.
pub fn peek_kind(text: &str) -> Result<Option<ArtifactKind>, FormatError> {
    let h: Header = serde_json::from_str(text)?;
    if let Some(s) = h.schema {
        if s != SCHEMA {
            return Err(FormatError::Schema(s));
        }
    }
    Ok(h.kind)
}

/// Parse a document of the given kind. A missing `kind` is accepted.
pub fn from_document<T: DeserializeOwned>(
    kind: ArtifactKind,
    text: &str,
) -> Result<T, FormatError> {
    match peek_kind(text)? {
        Some(found) if found != kind => Err(FormatError::Kind {
            expected: kind.name(),
            found: found.name().to_string(),
        }),
        _ => Ok(serde_json::from_str(text)?),
    }
}

/// One equilibrium in report form; `s` and `t` repeat the last coordinates
/// of `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeEntry {
    pub x: RatVector,
    pub s: Rational,
    pub y: RatVector,
    pub t: Rational,
    pub pi1: Rational,
    pub pi2: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<RatVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeReportDoc {
    pub degenerate: bool,
    pub equilibria: Vec<NeEntry>,
}

/// Report entries for equilibria of `game`; `lambda` is filled in when the
/// game carries reduction metadata and the map back succeeds.
pub fn ne_entries(game: &BimatrixGame, certs: &[NeCertificate]) -> Vec<NeEntry> {
    certs
        .iter()
        .map(|c| {
            let p = &c.profile;
            let lambda = game.meta.as_ref().and_then(|m| game_to_fixed_point(p, m).ok());
            NeEntry {
                x: p.x.clone(),
                s: p.s().clone(),
                y: p.y.clone(),
                t: p.t().clone(),
                pi1: c.pi1.clone(),
                pi2: c.pi2.clone(),
                lambda,
            }
        })
        .collect()
}
