//! JSON documents crossing the CLI boundary. Rationals are serialized
//! as exact "p/q" strings, never floats, so parse-then-serialize is the
//! identity and exactness survives the wire.

use crate::arrangement::{Arrangement, HyperplaneFamily, Window};
use crate::geometry::Vector;
use crate::scalar::{format_rat, parse_rat, Rat};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid rational `{0}`: {1}")]
    BadRational(String, crate::scalar::ParseRatError),
    #[error(transparent)]
    Arrangement(#[from] crate::arrangement::ArrangementError),
    #[error("document field {0} is empty")]
    EmptyField(&'static str),
}

/// One family of an arrangement document. `spacing` and `phase` are the
/// functional offsets: the hyperplanes are <direction, x> = phase + k*spacing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub label: String,
    pub direction: Vec<String>,
    pub spacing: String,
    pub phase: String,
    #[serde(default)]
    pub reducible: bool,
}

/// An arrangement with a window, as parsed from JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrangementDocument {
    pub dim: usize,
    pub families: Vec<FamilyDocument>,
    pub basepoint: Vec<String>,
    pub window_radius: String,
}

fn parse(s: &str) -> Result<Rat, DocumentError> {
    parse_rat(s).map_err(|e| DocumentError::BadRational(s.to_string(), e))
}

impl ArrangementDocument {
    pub fn to_arrangement(&self) -> Result<Arrangement, DocumentError> {
        if self.families.is_empty() {
            return Err(DocumentError::EmptyField("families"));
        }
        let mut fams = Vec::with_capacity(self.families.len());
        for f in &self.families {
            let coords = f
                .direction
                .iter()
                .map(|s| parse(s))
                .collect::<Result<Vec<_>, _>>()?;
            let fam = HyperplaneFamily::new(
                f.label.clone(),
                Vector::new(coords),
                parse(&f.spacing)?,
                parse(&f.phase)?,
            )?
            .reducible(f.reducible);
            fams.push(fam);
        }
        Ok(Arrangement::new(self.dim, fams)?)
    }

    pub fn basepoint(&self) -> Result<Vector, DocumentError> {
        Ok(Vector::new(
            self.basepoint
                .iter()
                .map(|s| parse(s))
                .collect::<Result<Vec<_>, _>>()?,
        ))
    }

    pub fn window(&self) -> Result<Window, DocumentError> {
        let arr = self.to_arrangement()?;
        let radius = parse(&self.window_radius)?;
        Ok(Window::new(arr, self.basepoint()?, radius)?)
    }

    /// Canonical JSON bytes for digesting.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("document serializes")
    }

    /// Document for a synthesized model: exact strings all the way.
    pub fn from_model(model: &crate::dynkin::SynthesizedModel, basepoint: &Vector) -> Self {
        let families = model
            .arrangement
            .families
            .iter()
            .map(|f| FamilyDocument {
                label: f.label.clone(),
                direction: f.direction().coords.iter().map(format_rat).collect(),
                spacing: format_rat(f.step()),
                phase: format_rat(f.phase()),
                reducible: f.reducible,
            })
            .collect();
        ArrangementDocument {
            dim: model.arrangement.dim,
            families,
            basepoint: basepoint.coords.iter().map(format_rat).collect(),
            window_radius: format_rat(&model.radius),
        }
    }
}

/// One check entry of a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// True when the check is a zero-tolerance rational equality.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

/// Deterministic report of one command run: same inputs and seed give
/// byte-identical output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Vec<CheckResult>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>, input_bytes: &[u8]) -> Self {
        ReportDocument {
            command: command.into(),
            inputs_digest: digest_hex(input_bytes),
            seed: None,
            results: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, exact: bool) {
        self.results.push(CheckResult {
            name: name.into(),
            pass,
            exact,
            detail: None,
        });
    }

    pub fn push_detail(
        &mut self,
        name: impl Into<String>,
        pass: bool,
        exact: bool,
        detail: serde_json::Value,
    ) {
        self.results.push(CheckResult {
            name: name.into(),
            pass,
            exact,
            detail: Some(detail),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

pub fn digest_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
