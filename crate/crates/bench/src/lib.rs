//! Benchmark fixtures shared by the criterion targets.

use life_core::network::{Kinetics, Network, NetworkBuilder};
use life_core::rational::{rat, Rational};
use life_core::stoichiometry::FluxAssignment;

/// The six-metabolite reverse cholesterol transport network used across the
/// benchmarks: three intakes feeding a funnel into a two-path tail.
pub fn rct_network() -> Network {
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
        .expect("fixture network is valid")
}

/// Measured fluxes for [`rct_network`], in canonical edge order.
pub fn rct_fluxes() -> FluxAssignment {
    let values: Vec<Rational> = [2729, 372, 6733, 4296, 4517, 6099, 594, 3158, 7727, 6964]
        .into_iter()
        .map(|n| rat(n, 10000))
        .collect();
    FluxAssignment::new(values)
}

/// A closed ring of `n` metabolites with unit fluxes, for scaling runs.
pub fn ring_network(n: usize) -> Network {
    let ids: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
    let mut builder = NetworkBuilder::new().vertices(ids.iter().cloned());
    for i in 0..n {
        builder = builder.linear_edge(&ids[i], &ids[(i + 1) % n]);
    }
    builder.build().expect("fixture network is valid")
}
