//! Fixtures and seeded random generators shared by the integration suites.
//!
//! Every generator takes an explicit rng so each test owns its seed and the
//! suites stay reproducible run to run.

#![allow(dead_code)]

use life_core::network::{Kinetics, Network, NetworkBuilder};
use life_core::rational::{rat, Rational};
use life_core::stoichiometry::{FluxAssignment, MetaboliteState};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Six metabolites, three intakes, one excretion: the documented reference
/// network used by the fixed-value criteria.
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

/// The documented fluxes for [`rct`], in canonical edge order.
pub fn rct_fluxes() -> FluxAssignment {
    FluxAssignment::new(
        [2729, 372, 6733, 4296, 4517, 6099, 594, 3158, 7727, 6964]
            .into_iter()
            .map(|n| rat(n, 10000))
            .collect(),
    )
}

/// The documented starting state for [`rct`] simulations.
pub fn rct_initial_state() -> MetaboliteState {
    MetaboliteState::new(
        [1253, 1302, 924, 78, 4231, 6556]
            .into_iter()
            .map(|n| rat(n, 10000))
            .collect(),
    )
}

/// An intake-fed trap: mass entering at v1 ends in the 2-cycle {v3, v4},
/// which has no excretion.
pub fn fed_trap() -> Network {
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

/// A trap no intake reaches: v3 only receives from v4, which nothing feeds,
/// so the structural necessary condition still holds.
pub fn isolated_trap() -> Network {
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

fn vertex_ids(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("m{i}")).collect()
}

fn random_vertex_kinetics<R: Rng>(rng: &mut R, n: usize, linear_only: bool) -> Vec<Kinetics> {
    (0..n)
        .map(|_| {
            if linear_only || rng.gen_range(0..3) < 2 {
                Kinetics::Linear
            } else {
                Kinetics::Hill {
                    p: rng.gen_range(1..=3),
                    k: rat(rng.gen_range(1..=4), rng.gen_range(1..=2)),
                }
            }
        })
        .collect()
}

fn distinct_vertices<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(count.min(n));
    all
}

struct Blueprint {
    n: usize,
    kinetics: Vec<Kinetics>,
    internal: BTreeSet<(usize, usize)>,
    intakes: Vec<usize>,
    excretions: Vec<usize>,
}

impl Blueprint {
    fn build(&self) -> Network {
        let ids = vertex_ids(self.n);
        let mut builder = NetworkBuilder::new().vertices(ids.clone());
        for &v in &self.intakes {
            builder = builder.intake(&ids[v]);
        }
        for &(a, b) in &self.internal {
            builder = builder.edge(&ids[a], &ids[b], self.kinetics[a].clone());
        }
        for &v in &self.excretions {
            builder = builder.excretion(&ids[v], self.kinetics[v].clone());
        }
        builder.build().expect("generated blueprint is well formed")
    }
}

/// A random network with at most 8 vertices and 14 edges. Gains are uniform
/// per vertex so every analysis level applies. Open networks carry one or two
/// intakes and up to two excretions; `ensure_drained` then adds excretions
/// until every vertex has a path to one.
pub fn random_network<R: Rng>(
    rng: &mut R,
    open: bool,
    linear_only: bool,
    ensure_drained: bool,
) -> Network {
    let n = rng.gen_range(2..=8);
    let kinetics = random_vertex_kinetics(rng, n, linear_only);

    let (mut intakes, mut excretions) = (Vec::new(), Vec::new());
    if open {
        let intake_count = rng.gen_range(0..=2);
        let excretion_count = rng.gen_range(0..=2);
        intakes = distinct_vertices(rng, n, intake_count);
        excretions = distinct_vertices(rng, n, excretion_count);
        if intakes.is_empty() && excretions.is_empty() {
            intakes = distinct_vertices(rng, n, 1);
        }
    }

    let budget = 14 - intakes.len() - excretions.len();
    let target = rng.gen_range(1..=budget.min(2 * n));
    let mut internal = BTreeSet::new();
    for _ in 0..target * 8 {
        if internal.len() >= target {
            break;
        }
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            internal.insert((a, b));
        }
    }

    let mut blueprint = Blueprint { n, kinetics, internal, intakes, excretions };
    let mut net = blueprint.build();
    if ensure_drained {
        let decomposition = net.strongly_connected_components();
        let stranded: Vec<usize> = decomposition
            .excretion_free_terminal()
            .into_iter()
            .map(|c| decomposition.components[c].vertices[0])
            .collect();
        if !stranded.is_empty() {
            blueprint.excretions.extend(stranded);
            blueprint.excretions.sort_unstable();
            blueprint.excretions.dedup();
            net = blueprint.build();
        }
    }
    net
}

/// A random network whose positive flux cone is full-dimensional in the
/// nullspace: the internal graph is a vertex cycle plus chords, so a strictly
/// positive circulation exists, and boundary edges come in intake-excretion
/// pairs that a path through the cycle can carry. Rejection sampling in the
/// nullspace then finds interior points at a usable rate.
pub fn random_throughput_network<R: Rng>(rng: &mut R, open: bool, linear_only: bool) -> Network {
    let n = rng.gen_range(3..=7);
    let kinetics = random_vertex_kinetics(rng, n, linear_only);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut internal = BTreeSet::new();
    for i in 0..n {
        internal.insert((order[i], order[(i + 1) % n]));
    }
    let chords = rng.gen_range(0..=3.min(10 - n));
    for _ in 0..chords * 8 {
        if internal.len() >= n + chords {
            break;
        }
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            internal.insert((a, b));
        }
    }

    let (mut intakes, mut excretions) = (Vec::new(), Vec::new());
    if open {
        let intake_count = rng.gen_range(1..=2);
        let excretion_count = rng.gen_range(1..=2);
        intakes = distinct_vertices(rng, n, intake_count);
        excretions = distinct_vertices(rng, n, excretion_count);
    }

    Blueprint { n, kinetics, internal, intakes, excretions }.build()
}

/// A strictly positive state with small rational entries.
pub fn random_positive_state<R: Rng>(rng: &mut R, n: usize) -> MetaboliteState {
    MetaboliteState::new(
        (0..n)
            .map(|_| rat(rng.gen_range(1..=40), rng.gen_range(1..=8)))
            .collect(),
    )
}

/// Strictly positive fluxes with small rational entries.
pub fn random_positive_fluxes<R: Rng>(rng: &mut R, m: usize) -> FluxAssignment {
    FluxAssignment::new(
        (0..m)
            .map(|_| rat(rng.gen_range(1..=30), rng.gen_range(1..=6)))
            .collect(),
    )
}

/// Strictly positive rational, for masses and capacities.
pub fn random_positive_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(1..=30), rng.gen_range(1..=6))
}
