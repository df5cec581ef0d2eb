//! Reference networks shared across module tests.

use crate::network::{Kinetics, Network, NetworkBuilder};
use crate::rational::rat;
use crate::stoichiometry::FluxAssignment;

/// Six metabolites, three intakes, one excretion: the running six-vertex
/// chain-and-branch example used across the crate.
pub fn rct() -> Network {
    NetworkBuilder::new()
        .vertices(["v1", "v2", "v3", "v4", "v5", "v6"])
        .intake("v1")
        .intake("v2")
        .intake("v3")
        .linear_edge("v1", "v4")
        .linear_edge("v2", "v4")
        .linear_edge("v3", "v4")
        .linear_edge("v4", "v5")
        .linear_edge("v4", "v6")
        .linear_edge("v5", "v6")
        .excretion("v6", Kinetics::Linear)
        .build()
        .unwrap()
}

/// The reference fluxes for [`rct`], in canonical edge order.
pub fn rct_fluxes() -> FluxAssignment {
    FluxAssignment::new(
        [2729, 372, 6733, 4296, 4517, 6099, 594, 3158, 7727, 6964]
            .into_iter()
            .map(|n| rat(n, 10000))
            .collect(),
    )
}

/// An intake-fed trap: mass entering at v1 ends in the 2-cycle {v3, v4},
/// which has no excretion.
pub fn fig2() -> Network {
    NetworkBuilder::new()
        .vertices(["v1", "v2", "v3", "v4"])
        .intake("v1")
        .linear_edge("v1", "v2")
        .linear_edge("v2", "v4")
        .linear_edge("v3", "v4")
        .linear_edge("v4", "v3")
        .excretion("v2", Kinetics::Linear)
        .build()
        .unwrap()
}

/// An isolated trap: v3 has no outgoing edges, but no intake reaches it, so
/// the structural necessary condition still holds.
pub fn fig3() -> Network {
    NetworkBuilder::new()
        .vertices(["v1", "v2", "v3", "v4"])
        .intake("v1")
        .linear_edge("v1", "v2")
        .linear_edge("v4", "v3")
        .linear_edge("v4", "v2")
        .excretion("v2", Kinetics::Linear)
        .build()
        .unwrap()
}
