//! Exact stoichiometric algebra: the incidence matrix, the state-evaluated
//! stoichiometric matrix, the flux matrix of the linear vertex dynamics, the
//! grounded Laplacian, rank predictions, and deficiency.
//!
//! Conventions. Rows are metabolites in declared order, columns are edges in
//! canonical order. An internal edge (v, w) contributes the gain evaluated at
//! the tail metabolite: -H(x_v) in row v and +H(x_v) in row w, so internal
//! columns sum to zero. An intake column holds a single +1; an excretion
//! column a single -H(x_v).

use crate::matrix::RationalMatrix;
use crate::network::{Head, Kinetics, Network, Tail};
use crate::rational::{rat_pow, Rational};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StoichiometryError {
    #[error("state vector has {got} entries, network has {want} vertices")]
    StateDimension { got: usize, want: usize },
    #[error("state for vertex {0:?} missing")]
    MissingState(String),
    #[error("unknown vertex {0:?} in state")]
    UnknownStateVertex(String),
    #[error("state must be strictly positive, vertex {0:?} is not")]
    NonPositiveState(String),
    #[error("flux vector has {got} entries, network has {want} edges")]
    FluxDimension { got: usize, want: usize },
    #[error("flux for edge {0} missing")]
    MissingFlux(String),
    #[error("negative flux on edge {0}")]
    NegativeFlux(String),
    #[error("vertex {0:?} carries edges with different kinetics; one gain per vertex is required here")]
    NonUniformKinetics(String),
}

/// A metabolite state: one exact value per vertex, in declared order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaboliteState {
    values: Vec<Rational>,
}

impl MetaboliteState {
    pub fn new(values: Vec<Rational>) -> Self {
        MetaboliteState { values }
    }

    pub fn all_ones(n: usize) -> Self {
        MetaboliteState {
            values: vec![Rational::one(); n],
        }
    }

    /// Builds a state from an id-to-value map; every vertex must be present.
    pub fn from_map(
        net: &Network,
        map: &BTreeMap<String, Rational>,
    ) -> Result<Self, StoichiometryError> {
        for id in map.keys() {
            if net.vertex_index(id).is_none() {
                return Err(StoichiometryError::UnknownStateVertex(id.clone()));
            }
        }
        let values = net
            .vertex_ids()
            .iter()
            .map(|id| {
                map.get(id)
                    .cloned()
                    .ok_or_else(|| StoichiometryError::MissingState(id.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(MetaboliteState { values })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(Signed::is_positive)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(crate::rational::to_f64).collect()
    }

    fn check(&self, net: &Network) -> Result<(), StoichiometryError> {
        if self.values.len() != net.n() {
            return Err(StoichiometryError::StateDimension {
                got: self.values.len(),
                want: net.n(),
            });
        }
        for (v, value) in self.values.iter().enumerate() {
            if !value.is_positive() {
                return Err(StoichiometryError::NonPositiveState(
                    net.vertex_id(v).to_owned(),
                ));
            }
        }
        Ok(())
    }
}

/// A flux assignment: one exact value per edge, in canonical edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FluxAssignment {
    values: Vec<Rational>,
}

impl FluxAssignment {
    pub fn new(values: Vec<Rational>) -> Self {
        FluxAssignment { values }
    }

    pub fn uniform(net: &Network, value: Rational) -> Self {
        FluxAssignment {
            values: vec![value; net.m()],
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, e: usize) -> &Rational {
        &self.values[e]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when every flux is strictly positive.
    pub fn is_strict(&self) -> bool {
        self.values.iter().all(Signed::is_positive)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(crate::rational::to_f64).collect()
    }

    pub fn check_dimension(&self, net: &Network) -> Result<(), StoichiometryError> {
        if self.values.len() != net.m() {
            return Err(StoichiometryError::FluxDimension {
                got: self.values.len(),
                want: net.m(),
            });
        }
        Ok(())
    }
}

/// Evaluates one gain function at a metabolite value.
pub fn gain(kinetics: &Kinetics, x: &Rational) -> Rational {
    match kinetics {
        Kinetics::Linear => x.clone(),
        Kinetics::Hill { p, k } => {
            let xp = rat_pow(x, *p);
            xp.clone() / (k + xp)
        }
        Kinetics::ConstantIntake => Rational::one(),
    }
}

/// Gains of all edges at state `x`: the diagonal of `D(x)`. Intake edges have
/// unit gain; every other edge evaluates its kinetics at the tail value.
pub fn edge_gains(net: &Network, x: &MetaboliteState) -> Result<Vec<Rational>, StoichiometryError> {
    x.check(net)?;
    Ok(net
        .edges()
        .iter()
        .map(|e| match e.tail {
            Tail::Source => Rational::one(),
            Tail::Vertex(v) => gain(&e.kinetics, x.get(v)),
        })
        .collect())
}

/// The incidence matrix of the extended graph with the virtual rows removed:
/// +1 where an edge enters a vertex, -1 where it leaves.
pub fn incidence_matrix(net: &Network) -> RationalMatrix {
    let mut gamma = RationalMatrix::zeros(net.n(), net.m());
    for (e, edge) in net.edges().iter().enumerate() {
        if let Tail::Vertex(v) = edge.tail {
            *gamma.at_mut(v, e) = -Rational::one();
        }
        if let Head::Vertex(v) = edge.head {
            *gamma.at_mut(v, e) = Rational::one();
        }
    }
    gamma.with_labels(net.vertex_ids().to_vec(), net.edge_labels())
}

/// The stoichiometric matrix evaluated at a strictly positive state:
/// the incidence matrix with each column scaled by its edge gain.
pub fn evaluate_stoichiometric(
    net: &Network,
    x: &MetaboliteState,
) -> Result<RationalMatrix, StoichiometryError> {
    let gains = edge_gains(net, x)?;
    let mut s = incidence_matrix(net);
    for (e, g) in gains.iter().enumerate() {
        s.scale_column(e, g);
    }
    Ok(s)
}

/// Rank the structure forces on the stoichiometric matrix at any strictly
/// positive state: the vertex count minus the number of weakly connected
/// components that touch no boundary edge.
pub fn predicted_rank(net: &Network) -> usize {
    let weak = net.weakly_connected_components();
    let isolated = weak
        .components
        .iter()
        .filter(|c| !c.has_intake && !c.has_excretion)
        .count();
    net.n() - isolated
}

/// The flux matrix `J(f)` and intake vector `phi` of the vertex dynamics
/// `dx/dt = J(f) h(x) + phi`, where `h` stacks one gain value per vertex.
///
/// Off-diagonal `J[i][j]` is the flux on edge (v_j, v_i); the diagonal
/// collects the negated total out-flux (excretions included). Requires one
/// gain per vertex: all non-intake edges leaving a vertex must share kinetics.
pub fn flux_matrix(
    net: &Network,
    f: &FluxAssignment,
) -> Result<(RationalMatrix, Vec<Rational>), StoichiometryError> {
    f.check_dimension(net)?;
    vertex_kinetics(net)?;
    let n = net.n();
    let mut j = RationalMatrix::zeros(n, n).with_labels(net.vertex_ids().to_vec(), net.vertex_ids().to_vec());
    let mut phi = vec![Rational::zero(); n];
    for (e, edge) in net.edges().iter().enumerate() {
        let flux = f.get(e);
        if flux.is_negative() {
            return Err(StoichiometryError::NegativeFlux(net.edge_label(e)));
        }
        match (edge.tail, edge.head) {
            (Tail::Source, Head::Vertex(v)) => phi[v] += flux,
            (Tail::Vertex(u), Head::Vertex(v)) => {
                *j.at_mut(v, u) += flux;
                *j.at_mut(u, u) -= flux;
            }
            (Tail::Vertex(u), Head::Sink) => {
                *j.at_mut(u, u) -= flux;
            }
            (Tail::Source, Head::Sink) => unreachable!("rejected at construction"),
        }
    }
    Ok((j, phi))
}

/// The per-vertex gain kinetics, when well defined: `None` for vertices with
/// no outgoing edges (their gain never enters the dynamics). Errors when a
/// vertex carries outgoing edges with differing kinetics.
pub fn vertex_kinetics(net: &Network) -> Result<Vec<Option<Kinetics>>, StoichiometryError> {
    let mut per_vertex: Vec<Option<Kinetics>> = vec![None; net.n()];
    for edge in net.edges() {
        let Tail::Vertex(v) = edge.tail else { continue };
        match &per_vertex[v] {
            None => per_vertex[v] = Some(edge.kinetics.clone()),
            Some(existing) if *existing == edge.kinetics => {}
            Some(_) => {
                return Err(StoichiometryError::NonUniformKinetics(
                    net.vertex_id(v).to_owned(),
                ))
            }
        }
    }
    Ok(per_vertex)
}

/// The grounded Laplacian: the weighted Laplacian of the graph with the
/// source removed and the sink row and column deleted. Equals `-J(f)^T`.
pub fn grounded_laplacian(
    net: &Network,
    f: &FluxAssignment,
) -> Result<RationalMatrix, StoichiometryError> {
    let (j, _) = flux_matrix(net, f)?;
    let mut l = j.transpose();
    for i in 0..l.rows() {
        for jcol in 0..l.cols() {
            let v = -l.at(i, jcol).clone();
            *l.at_mut(i, jcol) = v;
        }
    }
    Ok(l)
}

/// Deficiency of the internal reaction graph: vertex count minus weak
/// component count minus the rank of the internal incidence matrix. Zero for
/// every network expressible here, which is the point of computing it.
pub fn deficiency(net: &Network) -> usize {
    let internal_cols: Vec<usize> = net
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_internal())
        .map(|(e, _)| e)
        .collect();
    let gamma = incidence_matrix(net);
    let all_rows: Vec<usize> = (0..net.n()).collect();
    let internal = gamma.submatrix(&all_rows, &internal_cols);
    let weak = net.weakly_connected_components();
    net.n() - weak.len() - internal.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;
    use crate::rational::{int, rat};
    use crate::test_support::rct;

    #[test]
    fn evaluated_matrix_matches_hand_computation() {
        let net = rct();
        let x = MetaboliteState::new((1..=6).map(|v| int(v)).collect());
        let s = evaluate_stoichiometric(&net, &x).unwrap();
        // Row v1: +1 on its intake, -x1 on v1->v4.
        assert_eq!(s.at(0, 0), &int(1));
        assert_eq!(s.at(0, 3), &int(-1));
        // Row v4: +x1, +x2, +x3 inflows, -x4 on both outflows.
        assert_eq!(s.at(3, 3), &int(1));
        assert_eq!(s.at(3, 4), &int(2));
        assert_eq!(s.at(3, 5), &int(3));
        assert_eq!(s.at(3, 6), &int(-4));
        assert_eq!(s.at(3, 7), &int(-4));
        // Row v6: +x4, +x5 inflows, -x6 on the excretion.
        assert_eq!(s.at(5, 7), &int(4));
        assert_eq!(s.at(5, 8), &int(5));
        assert_eq!(s.at(5, 9), &int(-6));
        // Internal columns sum to zero; intakes to +gain; excretions to -gain.
        for e in 3..=8 {
            let sum: Rational = s.column(e).into_iter().sum();
            assert!(sum.is_zero(), "column {e} does not balance");
        }
        assert_eq!(s.column(0).into_iter().sum::<Rational>(), int(1));
        assert_eq!(s.column(9).into_iter().sum::<Rational>(), int(-6));
    }

    #[test]
    fn hill_gains_are_exact() {
        let h = Kinetics::Hill { p: 2, k: rat(1, 2) };
        // x = 1/3: x^2 = 1/9, gain = (1/9)/(1/2 + 1/9) = 2/11.
        assert_eq!(gain(&h, &rat(1, 3)), rat(2, 11));
        assert_eq!(gain(&Kinetics::Linear, &rat(7, 3)), rat(7, 3));
        assert_eq!(gain(&Kinetics::ConstantIntake, &rat(7, 3)), int(1));
    }

    #[test]
    fn factorization_through_gain_diagonal() {
        let net = rct();
        let x = MetaboliteState::new(vec![
            rat(1, 2),
            rat(2, 3),
            rat(5, 7),
            rat(3, 4),
            rat(9, 5),
            rat(1, 6),
        ]);
        let s = evaluate_stoichiometric(&net, &x).unwrap();
        let gamma = incidence_matrix(&net);
        let gains = edge_gains(&net, &x).unwrap();
        let mut d = RationalMatrix::zeros(net.m(), net.m());
        for (e, g) in gains.iter().enumerate() {
            *d.at_mut(e, e) = g.clone();
        }
        let product = gamma.mul(&d);
        for i in 0..net.n() {
            for j in 0..net.m() {
                assert_eq!(s.at(i, j), product.at(i, j));
            }
        }
    }

    #[test]
    fn rank_prediction_examples() {
        let rct = rct();
        assert_eq!(predicted_rank(&rct), 6);
        let x = MetaboliteState::all_ones(6);
        assert_eq!(evaluate_stoichiometric(&rct, &x).unwrap().rank(), 6);

        let cycle = NetworkBuilder::new()
            .vertices(["a", "b", "c", "d", "e"])
            .linear_edge("a", "b")
            .linear_edge("b", "c")
            .linear_edge("c", "d")
            .linear_edge("d", "e")
            .linear_edge("e", "a")
            .build()
            .unwrap();
        assert_eq!(predicted_rank(&cycle), 4);
        let xc = MetaboliteState::all_ones(5);
        assert_eq!(evaluate_stoichiometric(&cycle, &xc).unwrap().rank(), 4);
    }

    #[test]
    fn rejects_bad_states() {
        let net = rct();
        let zero = MetaboliteState::new(vec![int(0); 6]);
        assert!(matches!(
            evaluate_stoichiometric(&net, &zero),
            Err(StoichiometryError::NonPositiveState(_))
        ));
        let short = MetaboliteState::new(vec![int(1); 3]);
        assert!(matches!(
            evaluate_stoichiometric(&net, &short),
            Err(StoichiometryError::StateDimension { .. })
        ));
    }

    #[test]
    fn flux_matrix_structure() {
        // Branching example: intake at a; a->b, a->c, b->c, c->d, c->SINK, d->a.
        let net = NetworkBuilder::new()
            .vertices(["a", "b", "c", "d"])
            .intake("a")
            .linear_edge("a", "b")
            .linear_edge("a", "c")
            .linear_edge("b", "c")
            .linear_edge("c", "d")
            .excretion("c", Kinetics::Linear)
            .linear_edge("d", "a")
            .build()
            .unwrap();
        let f = FluxAssignment::new((1..=7).map(int).collect());
        // Canonical edge order: SOURCE->a, a->b, a->c, b->c, c->d, c->SINK, d->a.
        let (j, phi) = flux_matrix(&net, &f).unwrap();
        assert_eq!(phi, vec![int(1), int(0), int(0), int(0)]);
        assert_eq!(j.at(0, 0), &int(-5)); // -(f_ab + f_ac)
        assert_eq!(j.at(0, 3), &int(7)); // f_da
        assert_eq!(j.at(1, 0), &int(2)); // f_ab
        assert_eq!(j.at(1, 1), &int(-4)); // -f_bc
        assert_eq!(j.at(2, 0), &int(3)); // f_ac
        assert_eq!(j.at(2, 1), &int(4)); // f_bc
        assert_eq!(j.at(2, 2), &int(-11)); // -(f_cd + f_c_sink)
        assert_eq!(j.at(3, 2), &int(5)); // f_cd
        assert_eq!(j.at(3, 3), &int(-7)); // -f_da

        // Grounded Laplacian is the negated transpose.
        let l = grounded_laplacian(&net, &f).unwrap();
        for i in 0..4 {
            for jj in 0..4 {
                assert_eq!(&-l.at(jj, i).clone(), j.at(i, jj));
            }
        }
    }

    #[test]
    fn closed_flux_matrix_columns_balance() {
        let net = NetworkBuilder::new()
            .vertices(["a", "b", "c"])
            .linear_edge("a", "b")
            .linear_edge("b", "c")
            .linear_edge("c", "a")
            .build()
            .unwrap();
        let f = FluxAssignment::new(vec![int(1), int(2), int(4)]);
        let (j, phi) = flux_matrix(&net, &f).unwrap();
        assert!(phi.iter().all(Rational::is_zero));
        for col in 0..3 {
            let sum: Rational = j.column(col).into_iter().sum();
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn mixed_kinetics_per_vertex_rejected() {
        let net = NetworkBuilder::new()
            .vertices(["a", "b", "c"])
            .linear_edge("a", "b")
            .edge("a", "c", Kinetics::Hill { p: 1, k: int(1) })
            .build()
            .unwrap();
        let f = FluxAssignment::uniform(&net, int(1));
        assert!(matches!(
            flux_matrix(&net, &f),
            Err(StoichiometryError::NonUniformKinetics(_))
        ));
    }

    #[test]
    fn deficiency_is_zero() {
        assert_eq!(deficiency(&rct()), 0);
        let cycle = NetworkBuilder::new()
            .vertices(["a", "b"])
            .linear_edge("a", "b")
            .linear_edge("b", "a")
            .build()
            .unwrap();
        assert_eq!(deficiency(&cycle), 0);
    }
}
