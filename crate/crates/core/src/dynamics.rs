//! Time-domain simulation of the vertex dynamics.
//!
//! Structural analysis elsewhere in the crate is exact; trajectories are
//! not, so this module works in binary64 throughout. Integration is the
//! classic fixed-step 4th-order scheme: reproducibility of traces matters
//! more here than adaptive efficiency, and the reference networks are tiny.
//!
//! The integrator never clamps: a component dipping below zero is recorded
//! and flagged, since the dynamics keep the positive orthant invariant and
//! an undershoot signals integrator or model trouble.

use crate::network::{Head, Kinetics, Network, Tail};
use crate::rational::{format_f64_sig, to_f64};
use crate::stoichiometry::{FluxAssignment, MetaboliteState, StoichiometryError};
use num::Signed;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Stoichiometry(#[from] StoichiometryError),
    #[error("state has {got} entries, network has {want} vertices")]
    StateDimension { got: usize, want: usize },
    #[error("time horizon must be positive, got {0}")]
    InvalidHorizon(f64),
    #[error("time step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("initial state is negative at vertex '{0}'")]
    NegativeInitialState(String),
    #[error("state became non-finite at t = {time}")]
    BlowUp { time: f64, trace: Trace },
    #[error("cycle needs at least two vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("field dimension {got} does not match cycle length {want}")]
    FieldDimension { got: usize, want: usize },
}

/// The most negative state entry seen during a simulation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Undershoot {
    pub time: f64,
    pub vertex: usize,
    pub value: f64,
}

/// A recorded trajectory. Rows may be thinned, but the first and final
/// integration steps are always present, and the undershoot tracking covers
/// every step, recorded or not.
#[derive(Clone, Debug)]
pub struct Trace {
    pub vertex_ids: Vec<String>,
    /// Strictly increasing time grid in hours.
    pub times: Vec<f64>,
    /// One state row per grid point.
    pub states: Vec<Vec<f64>>,
    /// Sum of the state row, per grid point.
    pub mass: Vec<f64>,
    /// Intake rate minus excretion rate at the state, per grid point.
    pub boundary_flow: Vec<f64>,
    /// Integral of the boundary flow from the start to each grid point,
    /// accumulated inside the integrator with the same stage weights as the
    /// states. Its change over an interval matches the mass change up to
    /// rounding, so conservation is checkable at full precision.
    pub boundary_integral: Vec<f64>,
    /// Most negative entry across all integration steps, if any was negative.
    pub worst_undershoot: Option<Undershoot>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("traces hold at least the initial state")
    }

    /// Whether any component fell below the given threshold (a negative
    /// number, typically -1e-9).
    pub fn positivity_flagged(&self, threshold: f64) -> bool {
        self.worst_undershoot.is_some_and(|u| u.value < threshold)
    }

    /// Mass of a vertex subset along the trace.
    pub fn component_mass(&self, vertices: &[usize]) -> Vec<f64> {
        self.states
            .iter()
            .map(|x| vertices.iter().map(|&v| x[v]).sum())
            .collect()
    }

    /// Trapezoid integral of the recorded boundary flow; for an exact
    /// trajectory it equals the recorded mass change.
    pub fn integrated_boundary_flow(&self) -> f64 {
        let mut total = 0.0;
        for i in 1..self.times.len() {
            let dt = self.times[i] - self.times[i - 1];
            total += 0.5 * dt * (self.boundary_flow[i] + self.boundary_flow[i - 1]);
        }
        total
    }

    /// Renders `t,<vertex ids...>,mass` rows with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for id in &self.vertex_ids {
            out.push(',');
            out.push_str(id);
        }
        out.push_str(",mass\n");
        for i in 0..self.times.len() {
            out.push_str(&format_f64_sig(self.times[i], 12));
            for value in &self.states[i] {
                out.push(',');
                out.push_str(&format_f64_sig(*value, 12));
            }
            out.push(',');
            out.push_str(&format_f64_sig(self.mass[i], 12));
            out.push('\n');
        }
        out
    }
}

fn gain_f64(kinetics: &Kinetics, x: f64) -> f64 {
    match kinetics {
        Kinetics::Linear => x,
        Kinetics::Hill { p, k } => {
            let xp = x.powi(*p as i32);
            xp / (to_f64(k) + xp)
        }
        Kinetics::ConstantIntake => 1.0,
    }
}

/// Per-edge flows at a floating state, shared by the derivative and the
/// boundary-flow bookkeeping.
fn accumulate(net: &Network, fluxes: &[f64], x: &[f64], out: &mut [f64]) {
    out.fill(0.0);
    for (e, edge) in net.edges().iter().enumerate() {
        let tail_value = match edge.tail {
            Tail::Source => 0.0,
            Tail::Vertex(v) => x[v],
        };
        let flow = gain_f64(&edge.kinetics, tail_value) * fluxes[e];
        if let Tail::Vertex(v) = edge.tail {
            out[v] -= flow;
        }
        if let Head::Vertex(v) = edge.head {
            out[v] += flow;
        }
    }
}

fn boundary_rate(net: &Network, fluxes: &[f64], x: &[f64]) -> f64 {
    let mut rate = 0.0;
    for (e, edge) in net.edges().iter().enumerate() {
        match (edge.tail, edge.head) {
            (Tail::Source, _) => rate += fluxes[e],
            (Tail::Vertex(v), Head::Sink) => rate -= gain_f64(&edge.kinetics, x[v]) * fluxes[e],
            _ => {}
        }
    }
    rate
}

fn flux_f64(net: &Network, f: &FluxAssignment) -> Result<Vec<f64>, DynamicsError> {
    f.check_dimension(net)?;
    Ok(f.to_f64())
}

/// The time derivative of every metabolite at the given exact state,
/// evaluated in floating point.
pub fn derivative(net: &Network, f: &FluxAssignment, x: &MetaboliteState) -> Result<Vec<f64>, DynamicsError> {
    if x.len() != net.n() {
        return Err(DynamicsError::StateDimension { got: x.len(), want: net.n() });
    }
    Ok(derivative_f64(net, &flux_f64(net, f)?, &x.to_f64()))
}

/// The time derivative at a floating state; `fluxes` follow the canonical
/// edge order.
pub fn derivative_f64(net: &Network, fluxes: &[f64], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; net.n()];
    accumulate(net, fluxes, x, &mut out);
    out
}

/// Integrates the dynamics with the classic 4th-order fixed-step scheme.
///
/// States are recorded every `k` steps with `k` chosen to keep at most
/// roughly ten thousand rows; the initial and final states are always
/// recorded. A non-finite state aborts with the partial trace.
pub fn simulate(
    net: &Network,
    f: &FluxAssignment,
    x0: &MetaboliteState,
    t_end: f64,
    dt: f64,
) -> Result<Trace, DynamicsError> {
    if !(t_end > 0.0) {
        return Err(DynamicsError::InvalidHorizon(t_end));
    }
    if !(dt > 0.0) {
        return Err(DynamicsError::InvalidStep(dt));
    }
    if x0.len() != net.n() {
        return Err(DynamicsError::StateDimension { got: x0.len(), want: net.n() });
    }
    if let Some(v) = x0.values().iter().position(|value| value.is_negative()) {
        return Err(DynamicsError::NegativeInitialState(net.vertex_id(v).to_owned()));
    }
    let fluxes = flux_f64(net, f)?;

    // Whole steps of dt plus a final shortened step when dt does not divide
    // the horizon.
    let whole = (t_end / dt + 1e-9).floor() as usize;
    let remainder = t_end - whole as f64 * dt;
    let partial = remainder > 1e-9 * dt;
    let steps = whole + usize::from(partial);
    let stride = steps.div_ceil(10_000).max(1);

    let mut trace = Trace {
        vertex_ids: net.vertex_ids().to_vec(),
        times: Vec::new(),
        states: Vec::new(),
        mass: Vec::new(),
        boundary_flow: Vec::new(),
        boundary_integral: Vec::new(),
        worst_undershoot: None,
    };
    let mut x: Vec<f64> = x0.to_f64();
    let record = |t: f64, x: &[f64], integral: f64, trace: &mut Trace| {
        trace.times.push(t);
        trace.states.push(x.to_vec());
        trace.mass.push(x.iter().sum());
        trace.boundary_flow.push(boundary_rate(net, &fluxes, x));
        trace.boundary_integral.push(integral);
    };
    record(0.0, &x, 0.0, &mut trace);

    let n = net.n();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut stage = vec![0.0; n];
    let mut integral = 0.0;

    for step in 1..=steps {
        let h = if partial && step == steps { remainder } else { dt };
        let t = if step == steps { t_end } else { step as f64 * dt };

        accumulate(net, &fluxes, &x, &mut k1);
        for i in 0..n {
            stage[i] = x[i] + 0.5 * h * k1[i];
        }
        accumulate(net, &fluxes, &stage, &mut k2);
        for i in 0..n {
            stage[i] = x[i] + 0.5 * h * k2[i];
        }
        accumulate(net, &fluxes, &stage, &mut k3);
        for i in 0..n {
            stage[i] = x[i] + h * k3[i];
        }
        accumulate(net, &fluxes, &stage, &mut k4);
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        // The boundary rate at a stage state is the sum of that stage's
        // derivative entries, so the integral uses the k vectors directly.
        let stage_rates: [f64; 4] = [
            k1.iter().sum(),
            k2.iter().sum(),
            k3.iter().sum(),
            k4.iter().sum(),
        ];
        integral +=
            h / 6.0 * (stage_rates[0] + 2.0 * stage_rates[1] + 2.0 * stage_rates[2] + stage_rates[3]);

        if x.iter().any(|value| !value.is_finite()) {
            return Err(DynamicsError::BlowUp { time: t, trace });
        }
        for (v, &value) in x.iter().enumerate() {
            if value < 0.0 && trace.worst_undershoot.is_none_or(|u| value < u.value) {
                trace.worst_undershoot = Some(Undershoot { time: t, vertex: v, value });
            }
        }
        if step % stride == 0 || step == steps {
            record(t, &x, integral, &mut trace);
        }
    }
    Ok(trace)
}

/// A shareable state-to-derivative map, the shape general kinetics take
/// when they do not come from a network.
#[derive(Clone)]
pub struct FieldEvaluator {
    dim: usize,
    eval: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
}

impl FieldEvaluator {
    pub fn new(dim: usize, eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        FieldEvaluator { dim, eval: Arc::new(eval) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim, "state dimension mismatch");
        (self.eval)(x)
    }
}

/// Edge gains realizing a mass-conserving field on the directed n-cycle
/// with unit fluxes: gain `i` drives the edge from vertex `i` to vertex
/// `i + 1` (the last edge closes the cycle). Every gain is a sum of
/// positive and negative parts of the field components, hence non-negative.
pub fn cycle_gains(field_values: &[f64]) -> Vec<f64> {
    let n = field_values.len();
    let pos: Vec<f64> = field_values.iter().map(|v| v.max(0.0)).collect();
    let neg: Vec<f64> = field_values.iter().map(|v| (-v).max(0.0)).collect();
    let mut gains = Vec::with_capacity(n);
    for i in 0..n.saturating_sub(1) {
        let backlog: f64 = neg[..=i].iter().sum();
        let ahead: f64 = pos[i + 1..].iter().sum();
        gains.push(backlog + ahead);
    }
    if n > 0 {
        gains.push(pos.iter().sum());
    }
    gains
}

/// Realizes an arbitrary mass-conserving field as flux dynamics on the
/// n-cycle: the returned evaluator computes the cycle gains at each state
/// and differences them back into a derivative. When the input components
/// sum to zero the reconstruction reproduces the field exactly.
pub fn embed_on_cycle(field: &FieldEvaluator, n: usize) -> Result<FieldEvaluator, DynamicsError> {
    if n < 2 {
        return Err(DynamicsError::CycleTooSmall(n));
    }
    if field.dim() != n {
        return Err(DynamicsError::FieldDimension { got: field.dim(), want: n });
    }
    let inner = field.clone();
    Ok(FieldEvaluator::new(n, move |x| {
        let gains = cycle_gains(&inner.eval(x));
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let incoming = gains[(i + n - 1) % n];
            out.push(incoming - gains[i]);
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;
    use crate::rational::{int, rat, Rational};
    use crate::test_support::{fig2, rct, rct_fluxes};

    fn three_cycle() -> Network {
        NetworkBuilder::new()
            .vertices(["a", "b", "c"])
            .linear_edge("a", "b")
            .linear_edge("b", "c")
            .linear_edge("c", "a")
            .build()
            .unwrap()
    }

    fn state(values: &[Rational]) -> MetaboliteState {
        MetaboliteState::new(values.to_vec())
    }

    #[test]
    fn derivative_vanishes_at_the_exact_equilibrium() {
        let net = rct();
        let f = rct_fluxes();
        let x = state(&[
            rat(2729, 4296),
            rat(372, 4517),
            rat(6733, 6099),
            rat(4917, 1876),
            rat(1460349, 7247926),
            rat(4917, 3482),
        ]);
        let dx = derivative(&net, &f, &x).unwrap();
        for (v, rate) in dx.iter().enumerate() {
            assert!(rate.abs() < 1e-12, "vertex {v}: {rate}");
        }
    }

    #[test]
    fn derivative_near_the_published_equilibrium_is_small() {
        let net = rct();
        let f = rct_fluxes();
        let x = state(&[
            rat(6354, 10000),
            rat(824, 10000),
            rat(11040, 10000),
            rat(26211, 10000),
            rat(2015, 10000),
            rat(14122, 10000),
        ]);
        let dx = derivative(&net, &f, &x).unwrap();
        for (v, rate) in dx.iter().enumerate() {
            assert!(rate.abs() < 1e-3, "vertex {v}: {rate}");
        }
    }

    #[test]
    fn closed_derivatives_sum_to_zero() {
        let net = three_cycle();
        let f = FluxAssignment::new(vec![rat(1, 3), int(2), rat(7, 5)]);
        let x = state(&[rat(3, 7), rat(1, 2), int(4)]);
        let dx = derivative(&net, &f, &x).unwrap();
        let total: f64 = dx.iter().sum();
        let scale: f64 = dx.iter().map(|v| v.abs()).sum();
        assert!(total.abs() <= 1e-12 * scale);
    }

    #[test]
    fn intake_feeds_an_empty_state() {
        let net = NetworkBuilder::new()
            .vertices(["a", "b"])
            .intake("a")
            .linear_edge("a", "b")
            .excretion("b", Kinetics::Linear)
            .build()
            .unwrap();
        let f = FluxAssignment::uniform(&net, int(1));
        let dx = derivative(&net, &f, &state(&[int(0), int(0)])).unwrap();
        assert_eq!(dx, vec![1.0, 0.0]);
    }

    #[test]
    fn rct_simulation_reaches_the_equilibrium() {
        let net = rct();
        let f = rct_fluxes();
        let x0 = state(&[
            rat(1253, 10000),
            rat(1302, 10000),
            rat(924, 10000),
            rat(78, 10000),
            rat(4231, 10000),
            rat(6556, 10000),
        ]);
        let trace = simulate(&net, &f, &x0, 50.0, 0.01).unwrap();
        let expected = [
            2729.0 / 4296.0,
            372.0 / 4517.0,
            6733.0 / 6099.0,
            4917.0 / 1876.0,
            1460349.0 / 7247926.0,
            4917.0 / 3482.0,
        ];
        for (v, want) in expected.iter().enumerate() {
            let got = trace.final_state()[v];
            assert!((got - want).abs() < 1e-3, "vertex {v}: {got} vs {want}");
        }
        assert!(!trace.positivity_flagged(-1e-9));
        // Recorded mass is the literal sum of the recorded row.
        for (row, mass) in trace.states.iter().zip(&trace.mass) {
            assert_eq!(row.iter().sum::<f64>(), *mass);
        }
    }

    #[test]
    fn closed_mass_is_conserved() {
        let net = three_cycle();
        let f = FluxAssignment::new(vec![int(1), int(2), rat(1, 2)]);
        let x0 = state(&[int(1), int(2), int(3)]);
        let trace = simulate(&net, &f, &x0, 10.0, 0.01).unwrap();
        let m0 = trace.mass[0];
        for m in &trace.mass {
            assert!((m - m0).abs() <= 1e-9 * m0);
        }
    }

    #[test]
    fn trap_mass_grows_monotonically() {
        let net = fig2();
        let f = FluxAssignment::uniform(&net, int(1));
        let x0 = state(&[rat(1, 10), rat(1, 10), rat(1, 10), rat(1, 10)]);
        let trace = simulate(&net, &f, &x0, 20.0, 0.01).unwrap();
        let trapped = trace.component_mass(&[2, 3]);
        for pair in trapped.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }

    #[test]
    fn boundary_flow_accounts_for_the_mass_change() {
        let net = rct();
        let f = rct_fluxes();
        let x0 = state(&vec![rat(1, 10); 6]);
        let trace = simulate(&net, &f, &x0, 5.0, 0.01).unwrap();
        let change = trace.mass.last().unwrap() - trace.mass[0];
        let integral = trace.integrated_boundary_flow();
        assert!((integral - change).abs() <= 1e-6 * change.abs().max(1.0));
        // The stage-accumulated ledger tracks the mass change to rounding.
        let ledger = trace.boundary_integral.last().unwrap();
        assert!((ledger - change).abs() <= 1e-12 * change.abs().max(1.0));
    }

    #[test]
    fn oversized_steps_blow_up_loudly() {
        let net = rct();
        let f = rct_fluxes();
        let x0 = state(&vec![int(1); 6]);
        // An absurd step makes the scheme wildly unstable; the amplification
        // needs a few dozen steps to overflow f64.
        match simulate(&net, &f, &x0, 4e7, 1e6) {
            Err(DynamicsError::BlowUp { time, trace }) => {
                assert!(time > 0.0);
                assert!(!trace.is_empty());
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn long_runs_are_thinned() {
        let net = three_cycle();
        let f = FluxAssignment::uniform(&net, int(1));
        let x0 = state(&[int(1), int(0), int(0)]);
        let trace = simulate(&net, &f, &x0, 30.0, 0.001).unwrap();
        assert!(trace.len() <= 10_001);
        assert_eq!(trace.times[0], 0.0);
        assert_eq!(*trace.times.last().unwrap(), 30.0);
    }

    #[test]
    fn csv_has_the_contract_shape() {
        let net = three_cycle();
        let f = FluxAssignment::uniform(&net, int(1));
        let x0 = state(&[int(1), int(0), int(0)]);
        let trace = simulate(&net, &f, &x0, 0.02, 0.01).unwrap();
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,a,b,c,mass"));
        // Trailing zeros are trimmed, so the exact initial row is short.
        assert_eq!(lines.next(), Some("0,1,0,0,1"));
        assert_eq!(csv.lines().count(), 1 + trace.len());
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        let net = three_cycle();
        let f = FluxAssignment::uniform(&net, int(1));
        let x0 = state(&[int(1), int(0), int(0)]);
        assert!(matches!(
            simulate(&net, &f, &x0, 0.0, 0.01),
            Err(DynamicsError::InvalidHorizon(_))
        ));
        assert!(matches!(
            simulate(&net, &f, &x0, 1.0, -0.5),
            Err(DynamicsError::InvalidStep(_))
        ));
        let negative = state(&[int(-1), int(0), int(0)]);
        assert!(matches!(
            simulate(&net, &f, &negative, 1.0, 0.01),
            Err(DynamicsError::NegativeInitialState(v)) if v == "a"
        ));
    }

    #[test]
    fn cycle_gains_match_the_assignment_rule() {
        let gains = cycle_gains(&[0.1, -0.1, 0.0]);
        assert_eq!(gains, vec![0.0, 0.1, 0.1]);
    }

    #[test]
    fn zero_fields_embed_to_zero() {
        let field = FieldEvaluator::new(3, |_| vec![0.0; 3]);
        let embedded = embed_on_cycle(&field, 3).unwrap();
        assert_eq!(embedded.eval(&[0.2, 0.3, 0.5]), vec![0.0; 3]);
    }

    #[test]
    fn embedding_reproduces_the_field() {
        let field = FieldEvaluator::new(3, |x| {
            let f1 = x[0] * x[1] - 0.3 * x[2];
            let f2 = 0.5 * x[2] * x[2] - x[0];
            vec![f1, f2, -f1 - f2]
        });
        let embedded = embed_on_cycle(&field, 3).unwrap();
        let x = [0.2, 0.3, 0.5];
        let want = field.eval(&x);
        let got = embedded.eval(&x);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!(got.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn embedding_checks_its_arguments() {
        let field = FieldEvaluator::new(3, |_| vec![0.0; 3]);
        assert!(matches!(embed_on_cycle(&field, 1), Err(DynamicsError::CycleTooSmall(1))));
        assert!(matches!(
            embed_on_cycle(&field, 4),
            Err(DynamicsError::FieldDimension { got: 3, want: 4 })
        ));
    }
}
