//! JSON document format for networks and metabolite states.
//!
//! A network document carries the vertex list, the internal edges with their
//! gain kinetics, and the intake and excretion attachments. Flux values and
//! Hill constants are decimal strings parsed exactly, so a document
//! round-trips through `parse_network` and `document_from_network` without
//! loss. State documents are flat JSON objects mapping vertex ids to decimal
//! strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{Head, Kinetics, Network, NetworkBuilder, NetworkError, Tail};
use crate::rational::{format_exact_decimal, parse_decimal, DecimalError, Rational};
use crate::stoichiometry::{FluxAssignment, MetaboliteState, StoichiometryError};

/// Document version this library reads and writes.
pub const DOCUMENT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported document version {0}, expected {DOCUMENT_VERSION}")]
    UnsupportedVersion(u64),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    State(#[from] StoichiometryError),
    #[error("invalid decimal in {place}: {source}")]
    Decimal {
        place: String,
        source: DecimalError,
    },
    #[error("{place} has no finite decimal form")]
    NonDecimalValue { place: String },
}

/// Gain kinetics as written in documents. The Hill constant stays a string
/// here so parsing and rendering are exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum KineticsSpec {
    Linear,
    Hill {
        p: u32,
        #[serde(rename = "K")]
        k: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub kinetics: KineticsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntakeSpec {
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcretionSpec {
    pub from: String,
    pub kinetics: KineticsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux: Option<String>,
}

/// On-disk network description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub life_version: u64,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub intakes: Vec<IntakeSpec>,
    #[serde(default)]
    pub excretions: Vec<ExcretionSpec>,
}

impl NetworkDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: NetworkDocument = serde_json::from_str(text)?;
        if doc.life_version != DOCUMENT_VERSION {
            return Err(DocumentError::UnsupportedVersion(doc.life_version));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }
}

/// A parsed document: the validated network plus whatever flux values the
/// document supplied, in canonical edge order.
#[derive(Clone, Debug)]
pub struct ParsedNetwork {
    pub network: Network,
    /// One entry per edge in canonical order; `None` where the document gave
    /// no flux for that edge.
    pub fluxes: Vec<Option<Rational>>,
}

impl ParsedNetwork {
    /// The document's flux assignment, if it supplied a value for every edge.
    pub fn flux_assignment(&self) -> Option<FluxAssignment> {
        let values: Option<Vec<Rational>> = self.fluxes.iter().cloned().collect();
        values.map(FluxAssignment::new)
    }

    /// Labels of edges the document left without a flux value.
    pub fn missing_flux_edges(&self) -> Vec<String> {
        self.fluxes
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_none())
            .map(|(e, _)| self.network.edge_label(e))
            .collect()
    }
}

fn kinetics_from_spec(spec: &KineticsSpec, place: &str) -> Result<Kinetics, DocumentError> {
    match spec {
        KineticsSpec::Linear => Ok(Kinetics::Linear),
        KineticsSpec::Hill { p, k } => {
            let k = parse_decimal(k).map_err(|source| DocumentError::Decimal {
                place: format!("Hill constant of {place}"),
                source,
            })?;
            Ok(Kinetics::Hill { p: *p, k })
        }
    }
}

fn kinetics_to_spec(kinetics: &Kinetics, place: &str) -> Result<KineticsSpec, DocumentError> {
    match kinetics {
        Kinetics::Linear => Ok(KineticsSpec::Linear),
        Kinetics::Hill { p, k } => {
            let k = format_exact_decimal(k).ok_or_else(|| DocumentError::NonDecimalValue {
                place: format!("Hill constant of {place}"),
            })?;
            Ok(KineticsSpec::Hill { p: *p, k })
        }
        Kinetics::ConstantIntake => unreachable!("intake kinetics are implicit in documents"),
    }
}

fn parse_flux(flux: &Option<String>, place: &str) -> Result<Option<Rational>, DocumentError> {
    match flux {
        None => Ok(None),
        Some(text) => parse_decimal(text)
            .map(Some)
            .map_err(|source| DocumentError::Decimal {
                place: format!("flux of {place}"),
                source,
            }),
    }
}

/// Builds the network described by a document and collects its flux values
/// into canonical edge order.
pub fn build_network(doc: &NetworkDocument) -> Result<ParsedNetwork, DocumentError> {
    let mut builder = NetworkBuilder::new().vertices(doc.vertices.iter().cloned());
    // Flux values keyed the way document entries name endpoints, applied to
    // canonical edge positions after the build sorts them.
    let mut fluxes: BTreeMap<(String, String), Rational> = BTreeMap::new();

    for intake in &doc.intakes {
        builder = builder.intake(&intake.to);
        let place = format!("intake to {:?}", intake.to);
        if let Some(value) = parse_flux(&intake.flux, &place)? {
            fluxes.insert((crate::network::SOURCE_ID.to_owned(), intake.to.clone()), value);
        }
    }
    for edge in &doc.edges {
        let place = format!("edge {:?} -> {:?}", edge.from, edge.to);
        builder = builder.edge(&edge.from, &edge.to, kinetics_from_spec(&edge.kinetics, &place)?);
        if let Some(value) = parse_flux(&edge.flux, &place)? {
            fluxes.insert((edge.from.clone(), edge.to.clone()), value);
        }
    }
    for excretion in &doc.excretions {
        let place = format!("excretion from {:?}", excretion.from);
        builder = builder.excretion(&excretion.from, kinetics_from_spec(&excretion.kinetics, &place)?);
        if let Some(value) = parse_flux(&excretion.flux, &place)? {
            fluxes.insert((excretion.from.clone(), crate::network::SINK_ID.to_owned()), value);
        }
    }

    let network = builder.build()?;
    let endpoint = |e: usize| -> (String, String) {
        let edge = network.edge(e);
        let tail = match edge.tail {
            Tail::Source => crate::network::SOURCE_ID.to_owned(),
            Tail::Vertex(v) => network.vertex_id(v).to_owned(),
        };
        let head = match edge.head {
            Head::Vertex(v) => network.vertex_id(v).to_owned(),
            Head::Sink => crate::network::SINK_ID.to_owned(),
        };
        (tail, head)
    };
    let fluxes = (0..network.m()).map(|e| fluxes.remove(&endpoint(e))).collect();
    Ok(ParsedNetwork { network, fluxes })
}

/// Parses a network document from JSON text.
pub fn parse_network(text: &str) -> Result<ParsedNetwork, DocumentError> {
    build_network(&NetworkDocument::from_json(text)?)
}

/// Renders a network (and optionally its fluxes) back into document form.
/// Fails only when a Hill constant or flux has no finite decimal expansion.
pub fn document_from_network(
    net: &Network,
    fluxes: Option<&FluxAssignment>,
) -> Result<NetworkDocument, DocumentError> {
    let mut doc = NetworkDocument {
        life_version: DOCUMENT_VERSION,
        vertices: net.vertex_ids().to_vec(),
        edges: Vec::new(),
        intakes: Vec::new(),
        excretions: Vec::new(),
    };
    for (e, edge) in net.edges().iter().enumerate() {
        let place = net.edge_label(e);
        let flux = match fluxes {
            None => None,
            Some(f) => Some(format_exact_decimal(&f.values()[e]).ok_or(
                DocumentError::NonDecimalValue {
                    place: format!("flux of {place}"),
                },
            )?),
        };
        match (edge.tail, edge.head) {
            (Tail::Source, Head::Vertex(v)) => doc.intakes.push(IntakeSpec {
                to: net.vertex_id(v).to_owned(),
                flux,
            }),
            (Tail::Vertex(v), Head::Sink) => doc.excretions.push(ExcretionSpec {
                from: net.vertex_id(v).to_owned(),
                kinetics: kinetics_to_spec(&edge.kinetics, &place)?,
                flux,
            }),
            (Tail::Vertex(u), Head::Vertex(v)) => doc.edges.push(EdgeSpec {
                from: net.vertex_id(u).to_owned(),
                to: net.vertex_id(v).to_owned(),
                kinetics: kinetics_to_spec(&edge.kinetics, &place)?,
                flux,
            }),
            (Tail::Source, Head::Sink) => unreachable!("builder rejects source-to-sink edges"),
        }
    }
    Ok(doc)
}

/// Parses a state document: a JSON object mapping every vertex id to a
/// decimal string.
pub fn parse_state(net: &Network, text: &str) -> Result<MetaboliteState, DocumentError> {
    let raw: BTreeMap<String, String> = serde_json::from_str(text)?;
    let mut map = BTreeMap::new();
    for (id, value) in raw {
        let parsed = parse_decimal(&value).map_err(|source| DocumentError::Decimal {
            place: format!("state of vertex {id:?}"),
            source,
        })?;
        map.insert(id, parsed);
    }
    Ok(MetaboliteState::from_map(net, &map)?)
}
