//! Exact maximum flow on directed graphs with rational capacities.
//!
//! Edmonds-Karp (shortest augmenting paths) runs in O(V * E^2) augmentations
//! regardless of capacity magnitudes, so exact rational capacities are safe.
//! Edges may be declared unbounded; they are replaced internally by a finite
//! surrogate larger than any possible flow through the bounded edges.

use crate::rational::Rational;
use num::{One, Signed, Zero};
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct FlowEdge {
    pub from: usize,
    pub to: usize,
    pub capacity: Capacity,
}

#[derive(Clone, Debug)]
pub struct FlowProblem {
    pub node_count: usize,
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<FlowEdge>,
}

#[derive(Clone, Debug)]
pub struct MaxFlowSolution {
    pub value: Rational,
    /// Flow on each problem edge, indexed as in `FlowProblem::edges`.
    pub edge_flows: Vec<Rational>,
    /// Nodes reachable from the source in the residual graph.
    pub source_side: Vec<usize>,
    /// Indices of saturated edges crossing from the source side; these form
    /// a minimum cut.
    pub min_cut: Vec<usize>,
}

struct Residual {
    to: usize,
    cap: Rational,
    /// Index of the paired reverse arc in the flat arc list.
    rev: usize,
}

/// Computes a maximum flow from `source` to `sink`.
///
/// Unbounded capacities are modelled by a surrogate exceeding the total of
/// all finite capacities, so the reported value is exact whenever the true
/// maximum flow is finite (in particular whenever every source-leaving edge
/// is bounded).
pub fn max_flow(problem: &FlowProblem) -> MaxFlowSolution {
    let n = problem.node_count;
    debug_assert!(problem.source < n && problem.sink < n);

    let mut finite_total = Rational::zero();
    for e in &problem.edges {
        if let Capacity::Finite(c) = &e.capacity {
            debug_assert!(c >= &Rational::zero(), "negative capacity");
            finite_total += c;
        }
    }
    let surrogate = finite_total + Rational::one();

    let mut arcs: Vec<Residual> = Vec::with_capacity(problem.edges.len() * 2);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut forward_arc: Vec<usize> = Vec::with_capacity(problem.edges.len());
    for e in &problem.edges {
        let cap = match &e.capacity {
            Capacity::Finite(c) => c.clone(),
            Capacity::Unbounded => surrogate.clone(),
        };
        let a = arcs.len();
        forward_arc.push(a);
        adj[e.from].push(a);
        adj[e.to].push(a + 1);
        arcs.push(Residual { to: e.to, cap, rev: a + 1 });
        arcs.push(Residual { to: e.from, cap: Rational::zero(), rev: a });
    }

    let original_cap: Vec<Rational> = forward_arc.iter().map(|&a| arcs[a].cap.clone()).collect();

    let mut value = Rational::zero();
    loop {
        // BFS for the shortest augmenting path, recording the arc used to
        // reach each node.
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[problem.source] = true;
        let mut queue = VecDeque::from([problem.source]);
        while let Some(u) = queue.pop_front() {
            if u == problem.sink {
                break;
            }
            for &a in &adj[u] {
                let arc = &arcs[a];
                if !seen[arc.to] && arc.cap.is_positive() {
                    seen[arc.to] = true;
                    pred[arc.to] = Some(a);
                    queue.push_back(arc.to);
                }
            }
        }
        if !seen[problem.sink] {
            break;
        }

        let mut bottleneck: Option<Rational> = None;
        let mut node = problem.sink;
        while node != problem.source {
            let a = pred[node].unwrap();
            let cap = &arcs[a].cap;
            bottleneck = Some(match bottleneck {
                None => cap.clone(),
                Some(b) if cap < &b => cap.clone(),
                Some(b) => b,
            });
            node = arcs[arcs[a].rev].to;
        }
        let bottleneck = bottleneck.expect("path has at least one arc");

        let mut node = problem.sink;
        while node != problem.source {
            let a = pred[node].unwrap();
            arcs[a].cap -= &bottleneck;
            let rev = arcs[a].rev;
            arcs[rev].cap += &bottleneck;
            node = arcs[rev].to;
        }
        value += bottleneck;
    }

    // Residual reachability from the source gives the minimum cut.
    let mut seen = vec![false; n];
    seen[problem.source] = true;
    let mut queue = VecDeque::from([problem.source]);
    while let Some(u) = queue.pop_front() {
        for &a in &adj[u] {
            let arc = &arcs[a];
            if !seen[arc.to] && arc.cap.is_positive() {
                seen[arc.to] = true;
                queue.push_back(arc.to);
            }
        }
    }

    let edge_flows: Vec<Rational> = forward_arc
        .iter()
        .zip(&original_cap)
        .map(|(&a, cap)| cap - &arcs[a].cap)
        .collect();
    let source_side: Vec<usize> = (0..n).filter(|&u| seen[u]).collect();
    let min_cut: Vec<usize> = problem
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| seen[e.from] && !seen[e.to])
        .map(|(i, _)| i)
        .collect();

    MaxFlowSolution { value, edge_flows, source_side, min_cut }
}
