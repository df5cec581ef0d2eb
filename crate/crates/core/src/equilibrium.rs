//! Equilibrium analysis at fixed strictly positive fluxes.
//!
//! With one gain per vertex the dynamics read `dx/dt = J(f) h(x) + phi`.
//! Everything here exploits that structure: the vertices with a path to
//! excretion form an invertible reduced system solved exactly over the
//! rationals, terminal components without excretion carry conserved mass with
//! a stationary direction, and an intake feeding such a component rules out
//! equilibria altogether. The saturating case only adds a per-vertex range
//! check and inversion on top of the same linear solve.

use crate::matrix::RationalMatrix;
use crate::network::{Head, Kinetics, Network, Node, Tail};
use crate::rational::{to_f64, Rational};
use crate::stoichiometry::{flux_matrix, vertex_kinetics, FluxAssignment, StoichiometryError};
use num::{Signed, Zero};
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Stoichiometry(#[from] StoichiometryError),
    #[error("network has no vertices")]
    EmptyNetwork,
    #[error("flux on edge '{0}' must be strictly positive")]
    ZeroFlux(String),
    #[error("edge '{0}' is not linear; use the per-vertex gain analysis")]
    LinearKineticsRequired(String),
    #[error("component vertex index {0} is out of range")]
    ComponentVertexOutOfRange(usize),
    #[error("vertex set is not a strongly connected component")]
    ComponentNotStronglyConnected,
    #[error("component has an internal edge leaving it")]
    ComponentNotTerminal,
    #[error("component excretes, so it has no stationary direction")]
    ComponentExcretes,
    #[error("network has intakes or excretions")]
    NotClosed,
    #[error("total mass must be strictly positive")]
    NonPositiveMass,
}

/// Long-run behaviour of the fixed-flux dynamics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Every vertex reaches excretion; the unique equilibrium attracts all
    /// trajectories.
    UniqueGlobal,
    /// Conserved masses of terminal components parametrize a set of
    /// equilibria; the limit depends on the initial condition.
    MassDependent,
    /// No equilibrium; some masses grow without bound.
    Unbounded,
    /// The structural necessary condition fails: an intake feeds a vertex
    /// with no path to excretion.
    NoEquilibriumStructural,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::UniqueGlobal => "UNIQUE_GLOBAL",
            Regime::MassDependent => "MASS_DEPENDENT",
            Regime::Unbounded => "UNBOUNDED",
            Regime::NoEquilibriumStructural => "NO_EQUILIBRIUM_STRUCTURAL",
        }
    }
}

/// Equilibrium value of a single vertex.
#[derive(Clone, Debug, PartialEq)]
pub enum EqValue {
    Exact(Rational),
    /// Gain inversion with no closed rational form.
    Approximate(f64),
    /// Scales with the conserved mass of the indexed terminal component.
    MassDependent { component: usize },
    /// Grows without bound.
    Unbounded,
}

impl EqValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            EqValue::Exact(v) => Some(to_f64(v)),
            EqValue::Approximate(v) => Some(*v),
            _ => None,
        }
    }
}

/// A terminal strongly connected component without excretion, together with
/// its stationary direction.
#[derive(Clone, Debug, PartialEq)]
pub struct TerminalComponent {
    /// Member vertices, ascending.
    pub vertices: Vec<usize>,
    /// Strictly positive, sums to one, annihilated by the component
    /// restriction of the flux matrix. Lives in gain space; for linear
    /// kinetics that is state space.
    pub direction: Vec<Rational>,
    /// Whether some intake can reach the component.
    pub intake_fed: bool,
}

/// The balance system restricted to the vertices with a path to excretion.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    /// Vertices with a path to excretion, ascending.
    pub vertices: Vec<usize>,
    /// Restriction of the flux matrix to those vertices; invertible.
    pub matrix: RationalMatrix,
    /// Restriction of the intake vector.
    pub intake: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct EquilibriumReport {
    pub regime: Regime,
    /// One entry per vertex, in declared order.
    pub values: Vec<EqValue>,
    /// Vertices with a path to excretion, ascending.
    pub v1: Vec<usize>,
    /// Vertices without one, ascending.
    pub v2: Vec<usize>,
    /// Present when `v1` is non-empty.
    pub reduced: Option<ReducedSystem>,
    /// Excretion-free terminal components, each with its stationary
    /// direction; these parametrize the equilibrium set.
    pub terminal_components: Vec<TerminalComponent>,
}

/// Outcome of the structural necessary condition for equilibria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NecessaryCheck {
    Pass,
    Violation {
        /// First vertex in intake search order with no path to excretion.
        witness: usize,
        /// An excretion-free terminal component the witness feeds.
        component: Vec<usize>,
    },
}

/// Regime decision with the reasoning steps that led to it. `regime` is
/// `None` when the structural tests cannot settle existence.
#[derive(Clone, Debug)]
pub struct Classification {
    pub regime: Option<Regime>,
    pub justifications: Vec<String>,
}

/// The equilibria of a closed network at a given total mass.
#[derive(Clone, Debug)]
pub struct ClosedEquilibriumSet {
    pub terminal_components: Vec<TerminalComponent>,
    /// Dimension of the equilibrium set: one parameter per terminal
    /// component.
    pub parameter_dimension: usize,
    /// The unique equilibrium of the given mass, present when there is a
    /// single terminal component.
    pub equilibrium: Option<Vec<EqValue>>,
}

/// Checks the necessary condition for an equilibrium under strictly positive
/// fluxes: every vertex reachable from an intake must have a path to
/// excretion, otherwise mass accumulates in a terminal component forever.
pub fn check_equilibrium_necessary(net: &Network) -> NecessaryCheck {
    for v in net.reachable_from_intakes() {
        if net.has_path(Node::Vertex(v), Node::Sink) {
            continue;
        }
        // Everything reachable from the witness also misses excretion, so
        // any terminal component below it is excretion-free.
        let mut seen = vec![false; net.n()];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(u) = queue.pop_front() {
            for &(w, _) in net.out_internal(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let decomp = net.strongly_connected_components();
        let component = decomp
            .components
            .iter()
            .find(|c| c.terminal && seen[c.vertices[0]])
            .map(|c| c.vertices.clone())
            .expect("a reachable set always contains a terminal component");
        return NecessaryCheck::Violation { witness: v, component };
    }
    NecessaryCheck::Pass
}

/// Shared groundwork for the fixed-flux analyses: the flux matrix, the
/// excretion partition, the trap components, and the exact solve on all
/// vertices outside the traps. That block is invertible because each of its
/// vertices drains somewhere (to excretion or into a trap), and it is block
/// triangular over the excretion partition, so its solution restricted to
/// the excretion-connected vertices solves the reduced system alone.
struct FixedFluxAnalysis {
    j: RationalMatrix,
    phi: Vec<Rational>,
    v1: Vec<usize>,
    v2: Vec<usize>,
    traps: Vec<TerminalComponent>,
    /// Vertices outside every trap component, ascending.
    solvable: Vec<usize>,
    /// Exact gain-space solution of the balance equations on `solvable`.
    solution: Vec<Rational>,
}

fn analyze_fixed_flux(net: &Network, f: &FluxAssignment) -> Result<FixedFluxAnalysis, EquilibriumError> {
    if net.n() == 0 {
        return Err(EquilibriumError::EmptyNetwork);
    }
    f.check_dimension(net)?;
    require_strict(net, f)?;
    let (j, phi) = flux_matrix(net, f)?;

    let partition = net.excretion_reachable_set();
    let decomp = net.strongly_connected_components();
    let fed: BTreeSet<usize> = net.reachable_from_intakes().into_iter().collect();
    let mut traps = Vec::new();
    for ci in decomp.excretion_free_terminal() {
        let vertices = decomp.components[ci].vertices.clone();
        let direction = stationary_distribution(net, f, &vertices)?;
        let intake_fed = vertices.iter().any(|v| fed.contains(v));
        traps.push(TerminalComponent { vertices, direction, intake_fed });
    }

    let trapped: BTreeSet<usize> = traps.iter().flat_map(|t| t.vertices.iter().copied()).collect();
    let solvable: Vec<usize> = (0..net.n()).filter(|v| !trapped.contains(v)).collect();
    let solution = if solvable.is_empty() {
        Vec::new()
    } else {
        let block = j.submatrix(&solvable, &solvable);
        let rhs: Vec<Rational> = solvable.iter().map(|&v| -phi[v].clone()).collect();
        block
            .solve(&rhs)
            .expect("the balance block outside terminal components is invertible")
    };

    Ok(FixedFluxAnalysis { j, phi, v1: partition.v1, v2: partition.v2, traps, solvable, solution })
}

fn require_strict(net: &Network, f: &FluxAssignment) -> Result<(), EquilibriumError> {
    match f.values().iter().position(|v| !v.is_positive()) {
        Some(e) => Err(EquilibriumError::ZeroFlux(net.edge_label(e))),
        None => Ok(()),
    }
}

fn build_reduced(a: &FixedFluxAnalysis) -> Option<ReducedSystem> {
    if a.v1.is_empty() {
        return None;
    }
    Some(ReducedSystem {
        vertices: a.v1.clone(),
        matrix: a.j.submatrix(&a.v1, &a.v1),
        intake: a.v1.iter().map(|&v| a.phi[v].clone()).collect(),
    })
}

fn regime_from_traps(traps: &[TerminalComponent]) -> Regime {
    if traps.iter().any(|t| t.intake_fed) {
        Regime::Unbounded
    } else if traps.is_empty() {
        Regime::UniqueGlobal
    } else {
        Regime::MassDependent
    }
}

fn trap_values(values: &mut [EqValue], traps: &[TerminalComponent]) {
    for (ci, trap) in traps.iter().enumerate() {
        for &v in &trap.vertices {
            values[v] = if trap.intake_fed {
                EqValue::Unbounded
            } else {
                EqValue::MassDependent { component: ci }
            };
        }
    }
}

/// Solves the equilibrium of a network with linear kinetics exactly.
///
/// Vertices with a path to excretion get the unique solution of the reduced
/// system; vertices that merely drain into terminal components get exactly
/// zero; terminal components without excretion are mass-dependent, or
/// unbounded when an intake feeds them.
pub fn linear_equilibrium(net: &Network, f: &FluxAssignment) -> Result<EquilibriumReport, EquilibriumError> {
    for (e, edge) in net.edges().iter().enumerate() {
        if !edge.is_intake() && edge.kinetics != Kinetics::Linear {
            return Err(EquilibriumError::LinearKineticsRequired(net.edge_label(e)));
        }
    }
    let a = analyze_fixed_flux(net, f)?;
    let mut values = vec![EqValue::Unbounded; net.n()];
    for (i, &v) in a.solvable.iter().enumerate() {
        values[v] = EqValue::Exact(a.solution[i].clone());
    }
    trap_values(&mut values, &a.traps);
    let regime = regime_from_traps(&a.traps);
    let reduced = build_reduced(&a);
    Ok(EquilibriumReport {
        regime,
        values,
        v1: a.v1,
        v2: a.v2,
        reduced,
        terminal_components: a.traps,
    })
}

/// The stationary direction of a terminal strongly connected component: the
/// unique strictly positive unit-sum vector annihilated by the component
/// restriction of the flux matrix. Output order follows the component's
/// vertices sorted ascending.
pub fn stationary_distribution(
    net: &Network,
    f: &FluxAssignment,
    component: &[usize],
) -> Result<Vec<Rational>, EquilibriumError> {
    f.check_dimension(net)?;
    if component.is_empty() {
        return Err(EquilibriumError::ComponentNotStronglyConnected);
    }
    if let Some(&v) = component.iter().find(|&&v| v >= net.n()) {
        return Err(EquilibriumError::ComponentVertexOutOfRange(v));
    }
    let mut comp = component.to_vec();
    comp.sort_unstable();
    comp.dedup();

    let decomp = net.strongly_connected_components();
    let home = &decomp.components[decomp.component_of[comp[0]]];
    if home.vertices != comp {
        return Err(EquilibriumError::ComponentNotStronglyConnected);
    }
    if !home.terminal {
        return Err(EquilibriumError::ComponentNotTerminal);
    }
    if home.has_excretion {
        return Err(EquilibriumError::ComponentExcretes);
    }

    let local: std::collections::BTreeMap<usize, usize> =
        comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut restriction = RationalMatrix::zeros(comp.len(), comp.len());
    for (e, edge) in net.edges().iter().enumerate() {
        let (Tail::Vertex(u), Head::Vertex(v)) = (edge.tail, edge.head) else { continue };
        let Some(&lu) = local.get(&u) else { continue };
        // Terminal component: every internal edge out of it stays inside.
        let lv = local[&v];
        let flux = f.get(e);
        if !flux.is_positive() {
            return Err(EquilibriumError::ZeroFlux(net.edge_label(e)));
        }
        *restriction.at_mut(lv, lu) += flux;
        *restriction.at_mut(lu, lu) -= flux;
    }

    let nullspace = restriction.nullspace();
    debug_assert_eq!(nullspace.len(), 1, "strongly connected components have a simple kernel");
    let basis = &nullspace[0];
    let total = basis.iter().fold(Rational::zero(), |acc, v| acc + v);
    // Entries share one sign, so dividing by the total normalizes the sum
    // to one and fixes the sign at once.
    let direction: Vec<Rational> = basis.iter().map(|v| v / &total).collect();
    debug_assert!(direction.iter().all(|v| v.is_positive()));
    Ok(direction)
}

/// Result of inverting one vertex gain at a required steady value.
enum Inversion {
    Exact(Rational),
    Approximate(f64),
    OutOfRange,
}

fn invert_gain(kinetics: &Kinetics, h: &Rational) -> Inversion {
    debug_assert!(!h.is_negative(), "required steady gains are non-negative");
    match kinetics {
        Kinetics::Linear => Inversion::Exact(h.clone()),
        Kinetics::Hill { p, k } => {
            if h.numer() >= h.denom() {
                return Inversion::OutOfRange;
            }
            let scaled = k * h / (Rational::from_integer(1.into()) - h);
            if *p == 1 {
                Inversion::Exact(scaled)
            } else {
                Inversion::Approximate(to_f64(&scaled).powf(1.0 / f64::from(*p)))
            }
        }
        Kinetics::ConstantIntake => unreachable!("constant gains appear only on intake edges"),
    }
}

/// Solves the equilibrium when every vertex has a single gain function:
/// the required steady gains come from the same exact linear solve as the
/// linear case, then each vertex checks its gain range and inverts.
///
/// A required gain at or beyond a saturating range bound means no
/// equilibrium exists; the offending vertices are marked unbounded and the
/// regime becomes unbounded. Terminal components report their stationary
/// direction in gain space.
pub fn special_equilibrium(net: &Network, f: &FluxAssignment) -> Result<EquilibriumReport, EquilibriumError> {
    if net.n() == 0 {
        return Err(EquilibriumError::EmptyNetwork);
    }
    let kinetics = vertex_kinetics(net)?;
    let a = analyze_fixed_flux(net, f)?;
    let mut values = vec![EqValue::Unbounded; net.n()];
    let mut range_failure = false;
    for (i, &v) in a.solvable.iter().enumerate() {
        let kin = kinetics[v].as_ref().expect("vertices outside traps have outgoing edges");
        values[v] = match invert_gain(kin, &a.solution[i]) {
            Inversion::Exact(x) => EqValue::Exact(x),
            Inversion::Approximate(x) => EqValue::Approximate(x),
            Inversion::OutOfRange => {
                range_failure = true;
                EqValue::Unbounded
            }
        };
    }
    trap_values(&mut values, &a.traps);
    let regime = if range_failure { Regime::Unbounded } else { regime_from_traps(&a.traps) };
    let reduced = build_reduced(&a);
    Ok(EquilibriumReport {
        regime,
        values,
        v1: a.v1,
        v2: a.v2,
        reduced,
        terminal_components: a.traps,
    })
}

/// Vertices with a path to excretion that uses only edges with unbounded
/// gain range. Such a route lets the vertex pass any required steady
/// throughput, so it guarantees an equilibrium for arbitrary intakes.
fn unbounded_route_to_excretion(net: &Network) -> Vec<bool> {
    let mut reach = vec![false; net.n()];
    let mut queue = VecDeque::new();
    for edge in net.edges() {
        if let (Tail::Vertex(u), Head::Sink) = (edge.tail, edge.head) {
            if edge.kinetics.has_unbounded_range() && !reach[u] {
                reach[u] = true;
                queue.push_back(u);
            }
        }
    }
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); net.n()];
    for edge in net.edges() {
        if let (Tail::Vertex(u), Head::Vertex(v)) = (edge.tail, edge.head) {
            if edge.kinetics.has_unbounded_range() {
                incoming[v].push(u);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &incoming[v] {
            if !reach[u] {
                reach[u] = true;
                queue.push_back(u);
            }
        }
    }
    reach
}

/// Decides the asymptotic regime by a structural decision tree, recording
/// each reasoning step. Returns no regime when saturating gains without a
/// per-vertex gain function leave existence undecided.
pub fn classify_asymptotics(net: &Network, f: &FluxAssignment) -> Result<Classification, EquilibriumError> {
    if net.n() == 0 {
        return Err(EquilibriumError::EmptyNetwork);
    }
    f.check_dimension(net)?;
    require_strict(net, f)?;
    let mut justifications = Vec::new();

    if let NecessaryCheck::Violation { witness, component } = check_equilibrium_necessary(net) {
        let members: Vec<&str> = component.iter().map(|&v| net.vertex_id(v)).collect();
        justifications.push(format!(
            "{}: vertex '{}' receives intake mass but has no path to excretion",
            Regime::NoEquilibriumStructural.tag(),
            net.vertex_id(witness),
        ));
        justifications.push(format!(
            "the excretion-free terminal component {{{}}} accumulates that mass forever, so trajectories grow unbounded",
            members.join(", "),
        ));
        return Ok(Classification { regime: Some(Regime::Unbounded), justifications });
    }
    justifications
        .push("every vertex reachable from an intake has a path to excretion; no structural obstruction".to_owned());

    if net.is_closed() {
        let terminal = net.strongly_connected_components().excretion_free_terminal().len();
        justifications.push("closed network: the total mass is constant in time".to_owned());
        justifications.push(format!(
            "equilibria form a set parametrized by the conserved masses of the {terminal} terminal component(s)",
        ));
        return Ok(Classification { regime: Some(Regime::MassDependent), justifications });
    }

    if vertex_kinetics(net).is_ok() {
        let report = special_equilibrium(net, f)?;
        match report.regime {
            Regime::UniqueGlobal => {
                justifications.push(
                    "every vertex has a path to excretion, so the balance system is invertible and covers the whole network"
                        .to_owned(),
                );
                justifications.push(
                    "each required steady gain lies inside its range; per-vertex inversion yields the unique equilibrium and trajectories converge to it"
                        .to_owned(),
                );
            }
            Regime::MassDependent => {
                justifications.push(
                    "the required steady gains on the excretion-connected vertices are admissible, so that subsystem converges"
                        .to_owned(),
                );
                justifications.push(
                    "terminal components without excretion are unreachable from intakes; their conserved masses parametrize the equilibrium set"
                        .to_owned(),
                );
            }
            Regime::Unbounded => {
                let trapped: BTreeSet<usize> = report
                    .terminal_components
                    .iter()
                    .flat_map(|t| t.vertices.iter().copied())
                    .collect();
                let failed: Vec<&str> = report
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(v, value)| **value == EqValue::Unbounded && !trapped.contains(v))
                    .map(|(v, _)| net.vertex_id(v))
                    .collect();
                justifications.push(format!(
                    "the required steady gain at {{{}}} exceeds its saturating range, so no equilibrium exists and trajectories grow unbounded",
                    failed.join(", "),
                ));
            }
            Regime::NoEquilibriumStructural => {
                unreachable!("structural violations are handled before the solve")
            }
        }
        return Ok(Classification { regime: Some(report.regime), justifications });
    }

    let partition = net.excretion_reachable_set();
    let route = unbounded_route_to_excretion(net);
    if partition.v1.iter().all(|&v| route[v]) {
        justifications.push(
            "every excretion-connected vertex reaches excretion through edges with unbounded gain range, so an equilibrium exists there for any intakes and is unique"
                .to_owned(),
        );
        if partition.v2.is_empty() {
            return Ok(Classification { regime: Some(Regime::UniqueGlobal), justifications });
        }
        justifications.push(
            "terminal components without excretion are unreachable from intakes; their conserved masses parametrize the equilibrium set"
                .to_owned(),
        );
        return Ok(Classification { regime: Some(Regime::MassDependent), justifications });
    }
    justifications.push(
        "saturating gains without a per-vertex gain function leave equilibrium existence undecided for these intakes"
            .to_owned(),
    );
    Ok(Classification { regime: None, justifications })
}

/// Describes the equilibria of a closed network at a given total mass: the
/// terminal components with their stationary directions, and the unique
/// equilibrium when a single terminal component pins it down.
pub fn closed_equilibrium_set(
    net: &Network,
    f: &FluxAssignment,
    mass: &Rational,
) -> Result<ClosedEquilibriumSet, EquilibriumError> {
    if net.n() == 0 {
        return Err(EquilibriumError::EmptyNetwork);
    }
    if !net.is_closed() {
        return Err(EquilibriumError::NotClosed);
    }
    if !mass.is_positive() {
        return Err(EquilibriumError::NonPositiveMass);
    }
    f.check_dimension(net)?;
    require_strict(net, f)?;
    let kinetics = vertex_kinetics(net)?;

    let decomp = net.strongly_connected_components();
    let mut terminal_components = Vec::new();
    for ci in decomp.excretion_free_terminal() {
        let vertices = decomp.components[ci].vertices.clone();
        let direction = stationary_distribution(net, f, &vertices)?;
        terminal_components.push(TerminalComponent { vertices, direction, intake_fed: false });
    }
    let parameter_dimension = terminal_components.len();

    let equilibrium = if let [trap] = terminal_components.as_slice() {
        let mut values = vec![EqValue::Exact(Rational::zero()); net.n()];
        let hill = trap
            .vertices
            .iter()
            .any(|&v| matches!(kinetics[v], Some(Kinetics::Hill { .. })));
        if hill {
            let scale = mass_matching_scale(trap, &kinetics, to_f64(mass));
            for (&v, pi) in trap.vertices.iter().zip(&trap.direction) {
                let kin = kinetics[v].as_ref().expect("component vertices have outgoing edges");
                values[v] = EqValue::Approximate(invert_gain_f64(kin, scale * to_f64(pi)));
            }
        } else {
            // All gains on the component are the identity (or absent on a
            // single vertex without outgoing edges), so the equilibrium is
            // the direction scaled by the mass.
            for (&v, pi) in trap.vertices.iter().zip(&trap.direction) {
                values[v] = EqValue::Exact(mass * pi);
            }
        }
        Some(values)
    } else {
        None
    };

    Ok(ClosedEquilibriumSet { terminal_components, parameter_dimension, equilibrium })
}

fn invert_gain_f64(kinetics: &Kinetics, h: f64) -> f64 {
    match kinetics {
        Kinetics::Linear => h,
        Kinetics::Hill { p, k } => (to_f64(k) * h / (1.0 - h)).powf(1.0 / f64::from(*p)),
        Kinetics::ConstantIntake => unreachable!("constant gains appear only on intake edges"),
    }
}

/// Finds the gain-space scale at which the component's inverted masses sum
/// to the requested total. The sum is strictly increasing in the scale and
/// diverges at the first saturating bound, so bisection always lands.
fn mass_matching_scale(trap: &TerminalComponent, kinetics: &[Option<Kinetics>], mass: f64) -> f64 {
    let limit = trap
        .vertices
        .iter()
        .zip(&trap.direction)
        .filter(|(&v, _)| matches!(kinetics[v], Some(Kinetics::Hill { .. })))
        .map(|(_, pi)| 1.0 / to_f64(pi))
        .fold(f64::INFINITY, f64::min);
    debug_assert!(limit.is_finite());

    let total = |scale: f64| -> f64 {
        trap.vertices
            .iter()
            .zip(&trap.direction)
            .map(|(&v, pi)| {
                let kin = kinetics[v].as_ref().expect("component vertices have outgoing edges");
                invert_gain_f64(kin, scale * to_f64(pi))
            })
            .sum()
    };

    let mut lo = 0.0;
    let mut hi = limit * 0.5;
    while total(hi) < mass {
        lo = hi;
        hi = (hi + limit) * 0.5;
        if limit - hi < limit * 1e-15 {
            break;
        }
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if total(mid) < mass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
