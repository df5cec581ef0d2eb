//! Analysis of metabolic networks whose dynamics are linear in the flux
//! vector: directed graphs with virtual intake and excretion vertices, where
//! each metabolite evolves as the flow balance of its edges.
//!
//! The crate provides:
//!
//! - [`network`]: the extended-graph model, validation, and structural
//!   queries (connectivity, terminal components, excretion reachability).
//! - [`stoichiometry`]: exact-rational states, fluxes, gains, and the
//!   state-dependent stoichiometric matrix with its rank laws.
//! - [`matrix`] and [`rational`]: the exact linear algebra and decimal layer
//!   everything above builds on.
//! - [`pathways`]: extreme pathways of the positive flux cone, membership
//!   certificates, and intake feasibility via max-flow.
//! - [`equilibrium`]: equilibrium solves, the structural necessary
//!   condition, and asymptotic regime classification.
//! - [`dynamics`]: fixed-step simulation, conservation accounting, and the
//!   cycle embedding that realizes a given field as flux gains.
//! - [`document`]: the JSON document format for networks and states.

pub mod document;
pub mod dynamics;
pub mod equilibrium;
mod flow;
pub mod matrix;
pub mod network;
pub mod pathways;
pub mod rational;
mod simplex;
pub mod stoichiometry;

#[cfg(test)]
pub mod test_support;

pub use document::{parse_network, parse_state, DocumentError, NetworkDocument, ParsedNetwork};
pub use dynamics::{simulate, DynamicsError, Trace};
pub use equilibrium::{
    classify_asymptotics, linear_equilibrium, special_equilibrium, Classification, EqValue,
    EquilibriumError, EquilibriumReport, NecessaryCheck, Regime,
};
pub use matrix::RationalMatrix;
pub use network::{Kinetics, Network, NetworkBuilder, NetworkError};
pub use pathways::{
    extreme_pathways, feasible_flow_exists, network_max_flow, PathwaysError, PositiveBasis,
};
pub use rational::{parse_decimal, Rational};
pub use stoichiometry::{FluxAssignment, MetaboliteState, StoichiometryError};
