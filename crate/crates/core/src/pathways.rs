//! Enumeration of the positive flux cone.
//!
//! At a fixed strictly positive state the steady-state fluxes form the
//! polyhedral cone `{ f >= 0 : S(x) f = 0 }`. This module enumerates its
//! extreme rays by a tableau method: starting from the identity over edge
//! space, metabolite balance constraints are imposed one vertex at a time,
//! keeping non-negative combinations only and pruning rows whose support
//! strictly contains another row's support. For cones in this standard form
//! support-minimality characterises extremality exactly, so the pruned
//! tableau is the complete set of extreme rays.
//!
//! Verification deliberately avoids the tableau: rows are checked against
//! the stoichiometric matrix directly, and spanning is probed by sampling
//! non-negative nullspace vectors and testing cone membership with an exact
//! LP. Intake feasibility gets the same two-route treatment, once as a
//! maximum-flow computation and once as plain reachability.

pub use crate::flow::{max_flow, Capacity, FlowEdge, FlowProblem, MaxFlowSolution};
use crate::matrix::RationalMatrix;
use crate::network::{Head, Network, Node, Tail};
use crate::rational::{int, rat, Rational};
use crate::simplex::{solve_nonneg_combination, NonNegSolve};
use crate::stoichiometry::{edge_gains, evaluate_stoichiometric, FluxAssignment, MetaboliteState, StoichiometryError};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathwaysError {
    #[error(transparent)]
    Stoichiometry(#[from] StoichiometryError),
    #[error("classification has {got} entries, matrix has {want} rows")]
    ClassificationLength { got: usize, want: usize },
    #[error("prescribed intake flux count {got} does not match intake vertex count {want}")]
    PrescriptionLength { got: usize, want: usize },
    #[error("prescribed intake flux for vertex '{0}' must be strictly positive")]
    NonPositivePrescription(String),
    #[error("capacity list has {got} entries, network has {want} edges")]
    CapacityLength { got: usize, want: usize },
    #[error("network has no intake edge")]
    NoIntake,
    #[error("network has no excretion edge")]
    NoExcretion,
    #[error("target has {got} entries, generators live in dimension {want}")]
    TargetLength { got: usize, want: usize },
    #[error("generator {index} has {got} entries, expected {want}")]
    GeneratorLength { index: usize, got: usize, want: usize },
}

/// How a metabolite row of the stoichiometric matrix touches the boundary.
/// A vertex adjacent to both an intake and an excretion edge is classified
/// as excretion-adjacent; its constraint is imposed in the excretion phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexClass {
    Internal,
    IntakeAdjacent,
    ExcretionAdjacent,
}

/// Extreme rays of the positive flux cone at a fixed state.
///
/// Rows are canonical: scaled so the first nonzero entry is 1 and sorted
/// lexicographically. `provenance` lists each row as a combination of unit
/// edge fluxes; because the tableau starts from the identity over edge
/// space, the combination coefficients coincide with the row entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveBasis {
    pub edge_labels: Vec<String>,
    pub rows: Vec<Vec<Rational>>,
    pub provenance: Vec<Vec<(usize, Rational)>>,
}

impl PositiveBasis {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

struct TableauRow {
    /// Coordinates in edge space; always non-negative and nonzero.
    v: Vec<Rational>,
    /// Remaining constraint values, one per metabolite.
    c: Vec<Rational>,
}

impl TableauRow {
    fn support(&self) -> Vec<usize> {
        self.v
            .iter()
            .enumerate()
            .filter(|(_, value)| !value.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && a.iter().all(|i| b.binary_search(i).is_ok())
}

fn normalize_row(row: &mut TableauRow) {
    let lead = row
        .v
        .iter()
        .find(|value| !value.is_zero())
        .expect("tableau rows are nonzero")
        .clone();
    for value in row.v.iter_mut().chain(row.c.iter_mut()) {
        *value /= &lead;
    }
}

/// Enumerates the extreme rays of `{ v >= 0 : S v = 0 }` for an evaluated
/// stoichiometric matrix.
///
/// `classes` assigns each matrix row (metabolite) its boundary class. The
/// constraints are imposed internal rows first, then excretion-adjacent,
/// then intake-adjacent, each group in row order. The phase order only
/// shapes intermediate tableau sizes; the resulting cone is the same.
pub fn extreme_pathways_matrix(
    s: &RationalMatrix,
    classes: &[VertexClass],
) -> Result<PositiveBasis, PathwaysError> {
    if classes.len() != s.rows() {
        return Err(PathwaysError::ClassificationLength { got: classes.len(), want: s.rows() });
    }
    let m = s.cols();
    let n = s.rows();

    let mut rows: Vec<TableauRow> = (0..m)
        .map(|e| {
            let mut v = vec![Rational::zero(); m];
            v[e] = Rational::one();
            let c = (0..n).map(|i| s.at(i, e).clone()).collect();
            TableauRow { v, c }
        })
        .collect();

    let phase = |class: VertexClass| match class {
        VertexClass::Internal => 0,
        VertexClass::ExcretionAdjacent => 1,
        VertexClass::IntakeAdjacent => 2,
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (phase(classes[i]), i));

    for &col in &order {
        let mut kept: Vec<TableauRow> = Vec::new();
        let mut pos: Vec<TableauRow> = Vec::new();
        let mut neg: Vec<TableauRow> = Vec::new();
        for row in rows {
            if row.c[col].is_zero() {
                kept.push(row);
            } else if row.c[col].is_positive() {
                pos.push(row);
            } else {
                neg.push(row);
            }
        }
        for p in &pos {
            for q in &neg {
                let a = -q.c[col].clone();
                let b = p.c[col].clone();
                let v = p
                    .v
                    .iter()
                    .zip(&q.v)
                    .map(|(vp, vq)| &a * vp + &b * vq)
                    .collect();
                let c = p
                    .c
                    .iter()
                    .zip(&q.c)
                    .map(|(cp, cq)| &a * cp + &b * cq)
                    .collect();
                kept.push(TableauRow { v, c });
            }
        }

        for row in &mut kept {
            normalize_row(row);
        }
        kept.sort_by(|a, b| a.v.cmp(&b.v));
        kept.dedup_by(|a, b| a.v == b.v);

        let supports: Vec<Vec<usize>> = kept.iter().map(TableauRow::support).collect();
        let keep_flags: Vec<bool> = (0..kept.len())
            .map(|i| {
                !supports
                    .iter()
                    .enumerate()
                    .any(|(j, sup)| j != i && is_strict_subset(sup, &supports[i]))
            })
            .collect();
        rows = kept
            .into_iter()
            .zip(keep_flags)
            .filter(|(_, keep)| *keep)
            .map(|(row, _)| row)
            .collect();
    }

    debug_assert!(
        rows.iter().all(|row| row.c.iter().all(Rational::is_zero)),
        "all metabolite constraints must be cleared"
    );

    let mut basis_rows: Vec<Vec<Rational>> = rows.into_iter().map(|row| row.v).collect();
    basis_rows.sort();
    let provenance = basis_rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, value)| !value.is_zero())
                .map(|(e, value)| (e, value.clone()))
                .collect()
        })
        .collect();

    Ok(PositiveBasis {
        edge_labels: s.col_labels.clone(),
        rows: basis_rows,
        provenance,
    })
}

/// Boundary classes of a network's vertices, as `extreme_pathways_matrix`
/// expects them.
pub fn vertex_classes(net: &Network) -> Vec<VertexClass> {
    (0..net.n())
        .map(|v| {
            if net.is_excretion_vertex(v) {
                VertexClass::ExcretionAdjacent
            } else if net.is_intake_vertex(v) {
                VertexClass::IntakeAdjacent
            } else {
                VertexClass::Internal
            }
        })
        .collect()
}

/// Enumerates the extreme rays of the positive flux cone of a network at a
/// strictly positive state.
pub fn extreme_pathways(net: &Network, x: &MetaboliteState) -> Result<PositiveBasis, PathwaysError> {
    let s = evaluate_stoichiometric(net, x)?;
    extreme_pathways_matrix(&s, &vertex_classes(net))
}

/// A basis of the full nullspace of `S`, signs unconstrained. Serves as the
/// reference route when checking a positive basis.
pub fn nullspace_basis(s: &RationalMatrix) -> Vec<Vec<Rational>> {
    s.nullspace()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeMembership {
    Member { coefficients: Vec<Rational> },
    /// A separating vector `y`: `y . g >= 0` for every generator while
    /// `y . target < 0`.
    NotMember { certificate: Vec<Rational> },
}

/// Decides whether `target` is a non-negative combination of `generators`,
/// returning either the coefficients or a separating certificate.
pub fn cone_membership(
    generators: &[Vec<Rational>],
    target: &[Rational],
) -> Result<ConeMembership, PathwaysError> {
    let want = target.len();
    for (index, g) in generators.iter().enumerate() {
        if g.len() != want {
            return Err(PathwaysError::GeneratorLength { index, got: g.len(), want });
        }
    }
    Ok(match solve_nonneg_combination(generators, target) {
        NonNegSolve::Feasible { coefficients } => ConeMembership::Member { coefficients },
        NonNegSolve::Infeasible { certificate } => ConeMembership::NotMember { certificate },
    })
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Accepted non-negative nullspace samples to test for membership.
    pub samples: usize,
    pub seed: u64,
    /// Cap on raw draws before giving up on the sample quota.
    pub max_attempts: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: 64, seed: 0x1d0f_5eed, max_attempts: 64 * 256 }
    }
}

#[derive(Clone, Debug)]
pub struct BasisReport {
    pub rows_in_nullspace: bool,
    pub rows_nonnegative: bool,
    /// No row's support strictly contains another row's support.
    pub rows_support_minimal: bool,
    /// No row is a non-negative combination of the remaining rows.
    pub rows_irredundant: bool,
    pub sampled_members: usize,
    pub sampled_failures: usize,
}

impl BasisReport {
    pub fn is_valid(&self) -> bool {
        self.rows_in_nullspace
            && self.rows_nonnegative
            && self.rows_support_minimal
            && self.rows_irredundant
            && self.sampled_failures == 0
    }
}

/// Deterministic splitmix64 steps for sampling coefficients.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// A small rational in [-2, 2] with denominator at most 4.
    fn coefficient(&mut self) -> Rational {
        let num = (self.next() % 17) as i64 - 8;
        let den = (self.next() % 4) as i64 + 1;
        rat(num, den)
    }

    /// A rational in [-1, 1] with denominator 8.
    fn unit_coefficient(&mut self) -> Rational {
        rat((self.next() % 17) as i64 - 8, 8)
    }
}

/// A strictly positive vector of the nullspace of `s`, every entry at least
/// one, when the positive cone has such an interior point. Found by the
/// exact LP `S z = -S 1, z >= 0` and shifting `z` by the all-ones vector.
fn interior_nullspace_point(s: &RationalMatrix) -> Option<Vec<Rational>> {
    let ones = vec![Rational::one(); s.cols()];
    let target: Vec<Rational> = s.mul_vec(&ones).iter().map(|v| -v).collect();
    let columns: Vec<Vec<Rational>> = (0..s.cols()).map(|j| s.column(j)).collect();
    match solve_nonneg_combination(&columns, &target) {
        NonNegSolve::Feasible { coefficients } => {
            Some(coefficients.iter().map(|z| z + Rational::one()).collect())
        }
        NonNegSolve::Infeasible { .. } => None,
    }
}

/// Checks a claimed positive basis against the stoichiometric matrix without
/// reusing the enumeration tableau.
///
/// Structural properties (nullspace membership, non-negativity, support
/// minimality, irredundancy) are decided exactly. The spanning property is
/// probed by rejection sampling: random combinations of a standard nullspace
/// basis are kept when non-negative and must then be members of the cone
/// spanned by the rows. Draws alternate between the raw coefficient box and
/// perturbations of an exactly computed interior point of the cone, so the
/// sample quota is met even when the cone is a thin slice of the nullspace.
/// Failures are carried in the report, never raised.
pub fn verify_positive_basis(
    s: &RationalMatrix,
    basis: &PositiveBasis,
    options: VerifyOptions,
) -> BasisReport {
    let m = s.cols();

    let rows_in_nullspace = basis
        .rows
        .iter()
        .all(|row| row.len() == m && s.mul_vec(row).iter().all(Rational::is_zero));
    let rows_nonnegative = basis
        .rows
        .iter()
        .all(|row| row.iter().all(|value| !value.is_negative()));

    let supports: Vec<Vec<usize>> = basis
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, value)| !value.is_zero())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let rows_support_minimal = (0..supports.len()).all(|i| {
        supports
            .iter()
            .enumerate()
            .all(|(j, sup)| j == i || !is_strict_subset(sup, &supports[i]))
    });

    let rows_irredundant = (0..basis.rows.len()).all(|i| {
        let others: Vec<Vec<Rational>> = basis
            .rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, row)| row.clone())
            .collect();
        matches!(
            solve_nonneg_combination(&others, &basis.rows[i]),
            NonNegSolve::Infeasible { .. }
        )
    });

    let nullspace = s.nullspace();
    let mut sampled_members = 0;
    let mut sampled_failures = 0;
    if !nullspace.is_empty() {
        let interior = interior_nullspace_point(s);
        // Largest coordinate swing a unit coefficient vector can induce;
        // centered draws scaled to half its reciprocal stay non-negative, so
        // one in three attempts is accepted by construction.
        let swing = (0..m)
            .map(|j| {
                nullspace
                    .iter()
                    .fold(Rational::zero(), |acc, basis_vec| acc + basis_vec[j].abs())
            })
            .max()
            .expect("a nonempty nullspace basis has columns");
        let safe_scale = if swing.is_zero() { Rational::one() } else { rat(1, 2) / &swing };

        let mut rng = SplitMix(options.seed);
        let mut attempts = 0;
        while sampled_members + sampled_failures < options.samples && attempts < options.max_attempts {
            attempts += 1;
            let scale = match (&interior, attempts % 3) {
                (Some(_), 1) => Some(safe_scale.clone()),
                (Some(_), 2) => Some(&safe_scale * int(1i64 << (rng.next() % 7))),
                _ => None,
            };
            let mut candidate = match (&interior, &scale) {
                (Some(point), Some(_)) => point.clone(),
                _ => vec![Rational::zero(); m],
            };
            for basis_vec in &nullspace {
                let c = match &scale {
                    Some(t) => rng.unit_coefficient() * t,
                    None => rng.coefficient(),
                };
                for (slot, value) in candidate.iter_mut().zip(basis_vec) {
                    *slot += &c * value;
                }
            }
            if candidate.iter().any(Rational::is_negative) || candidate.iter().all(Rational::is_zero) {
                continue;
            }
            match solve_nonneg_combination(&basis.rows, &candidate) {
                NonNegSolve::Feasible { .. } => sampled_members += 1,
                NonNegSolve::Infeasible { .. } => sampled_failures += 1,
            }
        }
    }

    BasisReport {
        rows_in_nullspace,
        rows_nonnegative,
        rows_support_minimal,
        rows_irredundant,
        sampled_members,
        sampled_failures,
    }
}

/// Solves the maximum-flow problem on a network's extended graph, with the
/// virtual source and sink as the terminals. `capacities` aligns with the
/// canonical edge order.
pub fn network_max_flow(
    net: &Network,
    capacities: &[Capacity],
) -> Result<MaxFlowSolution, PathwaysError> {
    if net.intake_vertices().is_empty() {
        return Err(PathwaysError::NoIntake);
    }
    if net.excretion_vertices().is_empty() {
        return Err(PathwaysError::NoExcretion);
    }
    if capacities.len() != net.m() {
        return Err(PathwaysError::CapacityLength { got: capacities.len(), want: net.m() });
    }
    let n = net.n();
    let edges: Vec<FlowEdge> = net
        .edges()
        .iter()
        .zip(capacities)
        .map(|(edge, capacity)| FlowEdge {
            from: match edge.tail {
                Tail::Source => n,
                Tail::Vertex(v) => v,
            },
            to: match edge.head {
                Head::Vertex(v) => v,
                Head::Sink => n + 1,
            },
            capacity: capacity.clone(),
        })
        .collect();
    Ok(max_flow(&FlowProblem { node_count: n + 2, source: n, sink: n + 1, edges }))
}

#[derive(Clone, Debug)]
pub struct IntakeFeasibility {
    pub feasible: bool,
    pub prescribed_total: Rational,
    /// Maximum total intake the network can pass through to excretion.
    pub max_transferable: Rational,
    /// A flux vector realising the prescription, present when feasible.
    pub witness: Option<FluxAssignment>,
    /// Network edge indices of a minimum cut limiting the transfer.
    pub limiting_cut: Vec<usize>,
    /// Intake vertices with no directed path to any excretion edge.
    pub blocked_intakes: Vec<usize>,
}

/// Decides whether prescribed intake fluxes can be balanced by a steady
/// non-negative flux at state `x`.
///
/// `intake_flux` aligns with `net.intake_vertices()` and must be strictly
/// positive. The decision comes from a maximum-flow computation where intake
/// edges carry the prescription as capacity and all other edges are
/// unbounded; the prescription is feasible exactly when the flow saturates
/// every intake, which happens exactly when every intake vertex has a path
/// to excretion. Reachability is reported independently as a structural
/// cross-check.
pub fn feasible_flow_exists(
    net: &Network,
    x: &MetaboliteState,
    intake_flux: &[Rational],
) -> Result<IntakeFeasibility, PathwaysError> {
    let intakes = net.intake_vertices();
    if intake_flux.len() != intakes.len() {
        return Err(PathwaysError::PrescriptionLength { got: intake_flux.len(), want: intakes.len() });
    }
    for (&v, value) in intakes.iter().zip(intake_flux) {
        if !value.is_positive() {
            return Err(PathwaysError::NonPositivePrescription(net.vertex_id(v).to_string()));
        }
    }
    let gains = edge_gains(net, x)?;

    let capacities: Vec<Capacity> = net
        .edges()
        .iter()
        .map(|edge| match (edge.tail, edge.head) {
            (Tail::Source, Head::Vertex(v)) => {
                let position = intakes.binary_search(&v).expect("intake edge head is an intake vertex");
                Capacity::Finite(intake_flux[position].clone())
            }
            _ => Capacity::Unbounded,
        })
        .collect();
    let solution = network_max_flow(net, &capacities)?;
    let prescribed_total: Rational = intake_flux.iter().fold(Rational::zero(), |acc, v| acc + v);
    let feasible = solution.value == prescribed_total;

    let witness = if feasible {
        let fluxes: Vec<Rational> = solution
            .edge_flows
            .iter()
            .zip(&gains)
            .map(|(flow, gain)| flow / gain)
            .collect();
        Some(FluxAssignment::new(fluxes))
    } else {
        None
    };

    let blocked_intakes: Vec<usize> = intakes
        .iter()
        .copied()
        .filter(|&v| !net.has_path(Node::Vertex(v), Node::Sink))
        .collect();

    Ok(IntakeFeasibility {
        feasible,
        prescribed_total,
        max_transferable: solution.value,
        witness,
        limiting_cut: solution.min_cut,
        blocked_intakes,
    })
}

/// Applies `S(x)` to a flux vector, for cross-checking witnesses; returns
/// the net production rate of each metabolite.
pub fn apply_stoichiometric(
    net: &Network,
    x: &MetaboliteState,
    flux: &FluxAssignment,
) -> Result<Vec<Rational>, PathwaysError> {
    let s = evaluate_stoichiometric(net, x)?;
    Ok(s.mul_vec(flux.values()))
}
