//! Command line surface for the network analysis crate.
//!
//! Reports go to stdout. When a command's primary artifact is a CSV and no
//! `--out` file is given, the CSV takes stdout and the summary moves to
//! stderr so pipes stay clean. Exit codes: 0 success, 1 usage, 2 unreadable
//! or unparsable input, 3 domain precondition, 4 missing data, 5 blow-up.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use life_core::document::{parse_network, parse_state, DocumentError, ParsedNetwork};
use life_core::dynamics::{simulate, DynamicsError, Trace};
use life_core::equilibrium::{
    check_equilibrium_necessary, classify_asymptotics, closed_equilibrium_set,
    special_equilibrium, EqValue, EquilibriumError, NecessaryCheck,
};
use life_core::network::{Kinetics, Network};
use life_core::pathways::{extreme_pathways, feasible_flow_exists, nullspace_basis, PathwaysError};
use life_core::rational::{format_decimal, format_exact_decimal, parse_decimal, Rational};
use life_core::stoichiometry::{
    deficiency, evaluate_stoichiometric, predicted_rank, vertex_kinetics, FluxAssignment,
    MetaboliteState, StoichiometryError,
};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_MISSING: u8 = 4;
const EXIT_BLOWUP: u8 = 5;

#[derive(Parser)]
#[command(name = "life", version, about = "Structural and dynamic analysis of metabolic networks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural report: components, excretion reachability, rank, and the
    /// equilibrium necessary condition.
    Analyze { net: PathBuf },
    /// Enumerate the extreme pathways of the positive flux cone at a state.
    ExtremePathways {
        net: PathBuf,
        /// State file; defaults to the all-ones state.
        #[arg(long)]
        at: Option<PathBuf>,
        /// Write the basis CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for the equilibrium of the documented fluxes.
    Equilibrium {
        net: PathBuf,
        /// Total mass for closed networks.
        #[arg(long, default_value = "1")]
        mass: String,
    },
    /// Classify the asymptotic regime of the documented fluxes.
    Classify { net: PathBuf },
    /// Integrate the dynamics and write the trajectory CSV.
    Simulate {
        net: PathBuf,
        /// Initial state file.
        #[arg(long)]
        x0: PathBuf,
        /// Time horizon in hours.
        #[arg(long)]
        t_end: f64,
        /// Fixed integration step in hours.
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        /// Write the trace CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether the documented intake fluxes can be balanced by a
    /// steady non-negative flux.
    Feasible {
        net: PathBuf,
        /// State file; defaults to the all-ones state.
        #[arg(long)]
        at: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn main() -> ExitCode {
    // Die quietly when a pipe closes early instead of panicking mid-report.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let digits = precision()?;
    match cli.command {
        Cmd::Analyze { net } => cmd_analyze(&net),
        Cmd::ExtremePathways { net, at, out } => cmd_extreme_pathways(&net, at.as_deref(), out.as_deref()),
        Cmd::Equilibrium { net, mass } => cmd_equilibrium(&net, &mass, digits),
        Cmd::Classify { net } => cmd_classify(&net),
        Cmd::Simulate { net, x0, t_end, dt, out } => {
            cmd_simulate(&net, &x0, t_end, dt, out.as_deref(), digits)
        }
        Cmd::Feasible { net, at } => cmd_feasible(&net, at.as_deref()),
    }
}

fn precision() -> Result<u32, Failure> {
    match std::env::var("LIFE_PRECISION") {
        Err(std::env::VarError::NotPresent) => Ok(4),
        Err(_) => Err(fail(EXIT_USAGE, "LIFE_PRECISION is not valid unicode")),
        Ok(text) => text.trim().parse().map_err(|_| {
            fail(
                EXIT_USAGE,
                format!("LIFE_PRECISION must be a non-negative integer, got {text:?}"),
            )
        }),
    }
}

fn load_network(path: &Path) -> Result<ParsedNetwork, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    parse_network(&text).map_err(|e| document_failure(path, e))
}

fn document_failure(path: &Path, err: DocumentError) -> Failure {
    let code = match err {
        DocumentError::State(_) => EXIT_DOMAIN,
        _ => EXIT_PARSE,
    };
    fail(code, format!("{}: {err}", path.display()))
}

fn load_state(net: &Network, path: Option<&Path>) -> Result<MetaboliteState, Failure> {
    match path {
        None => Ok(MetaboliteState::all_ones(net.n())),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
            parse_state(net, &text).map_err(|e| document_failure(path, e))
        }
    }
}

fn require_fluxes(parsed: &ParsedNetwork) -> Result<FluxAssignment, Failure> {
    parsed.flux_assignment().ok_or_else(|| {
        fail(
            EXIT_MISSING,
            format!(
                "document gives no flux for: {}",
                parsed.missing_flux_edges().join(", ")
            ),
        )
    })
}

fn write_artifact(out: Option<&Path>, content: &str) -> Result<bool, Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| fail(EXIT_PARSE, format!("cannot write {}: {e}", path.display())))?;
            Ok(true)
        }
        None => {
            print!("{content}");
            Ok(false)
        }
    }
}

/// Exact decimal rendering with a fraction fallback for values like 1/3.
fn fmt_exact(r: &Rational) -> String {
    format_exact_decimal(r).unwrap_or_else(|| format!("{}/{}", r.numer(), r.denom()))
}

fn id_list(net: &Network, vertices: &[usize]) -> String {
    if vertices.is_empty() {
        return "(none)".to_owned();
    }
    let ids: Vec<&str> = vertices.iter().map(|&v| net.vertex_id(v)).collect();
    ids.join(", ")
}

fn id_set(net: &Network, vertices: &[usize]) -> String {
    let ids: Vec<&str> = vertices.iter().map(|&v| net.vertex_id(v)).collect();
    format!("{{{}}}", ids.join(", "))
}

fn kinetics_level(net: &Network) -> &'static str {
    let all_linear = net
        .edges()
        .iter()
        .all(|e| matches!(e.kinetics, Kinetics::Linear | Kinetics::ConstantIntake));
    if all_linear {
        "linear"
    } else if vertex_kinetics(net).is_ok() {
        "uniform-per-vertex"
    } else {
        "per-edge"
    }
}

fn cmd_analyze(path: &Path) -> Result<(), Failure> {
    let parsed = load_network(path)?;
    let net = &parsed.network;
    let intake = net.edges().iter().filter(|e| e.is_intake()).count();
    let excretion = net.edges().iter().filter(|e| e.is_excretion()).count();
    let internal = net.m() - intake - excretion;

    println!("vertices: {}", net.n());
    println!("edges: {} ({intake} intake, {internal} internal, {excretion} excretion)", net.m());
    println!("boundary: {}", if net.is_closed() { "closed" } else { "open" });
    let weak = net.weakly_connected_components();
    let strong = net.strongly_connected_components();
    println!("weakly connected components: {}", weak.len());
    println!("strongly connected components: {}", strong.len());
    let terminal: Vec<String> = strong
        .components
        .iter()
        .filter(|c| c.terminal)
        .map(|c| {
            format!(
                "{} ({})",
                id_set(net, &c.vertices),
                if c.has_excretion { "excreting" } else { "no excretion" }
            )
        })
        .collect();
    println!(
        "terminal components: {}",
        if terminal.is_empty() { "(none)".to_owned() } else { terminal.join(", ") }
    );
    let reach = net.excretion_reachable_set();
    println!("vertices reaching excretion (V1): {}", id_list(net, &reach.v1));
    println!("vertices with no excretion path (V2): {}", id_list(net, &reach.v2));
    println!("predicted rank of S(x): {}", predicted_rank(net));
    println!("deficiency: {}", deficiency(net));
    match check_equilibrium_necessary(net) {
        NecessaryCheck::Pass => println!("equilibrium necessary condition: pass"),
        NecessaryCheck::Violation { witness, component } => println!(
            "equilibrium necessary condition: VIOLATED at {} (intake mass reaches the excretion-free terminal component {})",
            net.vertex_id(witness),
            id_set(net, &component),
        ),
    }
    println!("kinetics level: {}", kinetics_level(net));
    Ok(())
}

fn pathways_failure(err: PathwaysError) -> Failure {
    let code = match err {
        PathwaysError::NoIntake | PathwaysError::NoExcretion => EXIT_MISSING,
        _ => EXIT_DOMAIN,
    };
    fail(code, err.to_string())
}

fn cmd_extreme_pathways(path: &Path, at: Option<&Path>, out: Option<&Path>) -> Result<(), Failure> {
    let parsed = load_network(path)?;
    let net = &parsed.network;
    let x = load_state(net, at)?;
    if !x.is_strictly_positive() {
        return Err(fail(EXIT_DOMAIN, "state must be strictly positive"));
    }
    let basis = extreme_pathways(net, &x).map_err(pathways_failure)?;
    let s = evaluate_stoichiometric(net, &x).map_err(|e| fail(EXIT_DOMAIN, e.to_string()))?;
    let dimension = nullspace_basis(&s).len();

    let mut csv = String::new();
    csv.push_str(&basis.edge_labels.join(","));
    csv.push('\n');
    for row in &basis.rows {
        let cells: Vec<String> = row.iter().map(fmt_exact).collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    let to_file = write_artifact(out, &csv)?;
    let summary = format!(
        "extreme pathways: {} rows\nnullspace dimension: {dimension}",
        basis.rows.len()
    );
    if to_file {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn equilibrium_failure(err: EquilibriumError) -> Failure {
    fail(EXIT_DOMAIN, err.to_string())
}

fn fmt_eq_value(value: &EqValue, digits: u32) -> String {
    match value {
        EqValue::Exact(r) => format_decimal(r, digits),
        EqValue::Approximate(v) => format!("{v:.0$} (approximate)", digits as usize),
        EqValue::MassDependent { component } => {
            format!("mass-dependent (terminal component {})", component + 1)
        }
        EqValue::Unbounded => "unbounded".to_owned(),
    }
}

fn print_values(net: &Network, values: &[EqValue], digits: u32) {
    for (v, value) in values.iter().enumerate() {
        println!("  {} = {}", net.vertex_id(v), fmt_eq_value(value, digits));
    }
}

fn cmd_equilibrium(path: &Path, mass_text: &str, digits: u32) -> Result<(), Failure> {
    let parsed = load_network(path)?;
    let net = &parsed.network;
    let f = require_fluxes(&parsed)?;

    if net.is_closed() {
        let mass = parse_decimal(mass_text)
            .map_err(|e| fail(EXIT_USAGE, format!("--mass: {e}")))?;
        let set = closed_equilibrium_set(net, &f, &mass).map_err(equilibrium_failure)?;
        println!("regime: MASS_DEPENDENT");
        println!("equilibrium set dimension: {}", set.parameter_dimension);
        for tc in &set.terminal_components {
            let direction: Vec<String> =
                tc.direction.iter().map(|r| format_decimal(r, digits)).collect();
            println!(
                "stationary direction of {}: {}",
                id_set(net, &tc.vertices),
                direction.join(", ")
            );
        }
        match &set.equilibrium {
            Some(values) => {
                println!("equilibrium at mass {}:", fmt_exact(&mass));
                print_values(net, values, digits);
            }
            None => println!(
                "equilibrium at mass {}: not unique ({} terminal components)",
                fmt_exact(&mass),
                set.terminal_components.len()
            ),
        }
        return Ok(());
    }

    match special_equilibrium(net, &f) {
        Ok(report) => {
            println!("regime: {}", report.regime.tag());
            println!("equilibrium:");
            print_values(net, &report.values, digits);
            Ok(())
        }
        Err(EquilibriumError::Stoichiometry(StoichiometryError::NonUniformKinetics(v))) => {
            let c = classify_asymptotics(net, &f).map_err(equilibrium_failure)?;
            match c.regime {
                Some(regime) => println!("regime: {}", regime.tag()),
                None => println!("regime: UNDECIDED"),
            }
            println!(
                "equilibrium values unavailable: vertex {v:?} carries edges with different kinetics"
            );
            Ok(())
        }
        Err(e) => Err(equilibrium_failure(e)),
    }
}

fn cmd_classify(path: &Path) -> Result<(), Failure> {
    let parsed = load_network(path)?;
    let f = require_fluxes(&parsed)?;
    let c = classify_asymptotics(&parsed.network, &f).map_err(equilibrium_failure)?;
    match c.regime {
        Some(regime) => println!("regime: {}", regime.tag()),
        None => println!("regime: UNDECIDED"),
    }
    println!("reasoning:");
    for step in &c.justifications {
        println!("  - {step}");
    }
    Ok(())
}

fn simulate_summary(net: &Network, trace: &Trace, digits: u32) -> String {
    let mut lines = Vec::new();
    lines.push(format!(
        "simulated to t = {} ({} rows recorded)",
        trace.times.last().copied().unwrap_or(0.0),
        trace.len()
    ));
    lines.push("final state:".to_owned());
    for (v, value) in trace.final_state().iter().enumerate() {
        lines.push(format!("  {} = {:.2$}", net.vertex_id(v), value, digits as usize));
    }
    lines.push(format!(
        "final mass: {:.1$}",
        trace.mass.last().copied().unwrap_or(0.0),
        digits as usize
    ));
    match trace.worst_undershoot {
        None => lines.push("worst undershoot: none".to_owned()),
        Some(u) => lines.push(format!(
            "worst undershoot: {:e} at {}, t = {}",
            u.value,
            net.vertex_id(u.vertex),
            u.time
        )),
    }
    lines.join("\n")
}

fn cmd_simulate(
    path: &Path,
    x0_path: &Path,
    t_end: f64,
    dt: f64,
    out: Option<&Path>,
    digits: u32,
) -> Result<(), Failure> {
    let parsed = load_network(path)?;
    let net = &parsed.network;
    let f = require_fluxes(&parsed)?;
    let x0 = load_state(net, Some(x0_path))?;

    match simulate(net, &f, &x0, t_end, dt) {
        Ok(trace) => {
            let to_file = write_artifact(out, &trace.to_csv())?;
            let summary = simulate_summary(net, &trace, digits);
            if to_file {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            Ok(())
        }
        Err(DynamicsError::InvalidHorizon(v)) => {
            Err(fail(EXIT_USAGE, format!("--t-end must be positive, got {v}")))
        }
        Err(DynamicsError::InvalidStep(v)) => {
            Err(fail(EXIT_USAGE, format!("--dt must be positive, got {v}")))
        }
        Err(DynamicsError::BlowUp { time, trace }) => {
            // Keep the partial trajectory around for post-mortems.
            if out.is_some() {
                write_artifact(out, &trace.to_csv())?;
            }
            Err(fail(
                EXIT_BLOWUP,
                format!("state became non-finite at t = {time}; partial trace retained"),
            ))
        }
        Err(e) => Err(fail(EXIT_DOMAIN, e.to_string())),
    }
}

fn cmd_feasible(path: &Path, at: Option<&Path>) -> Result<(), Failure> {
    let parsed = load_network(path)?;
    let net = &parsed.network;
    let x = load_state(net, at)?;
    if net.intake_vertices().is_empty() {
        return Err(fail(EXIT_MISSING, "network has no intake edges"));
    }

    let mut intake_flux = Vec::new();
    let mut missing = Vec::new();
    for (e, edge) in net.edges().iter().enumerate() {
        if !edge.is_intake() {
            continue;
        }
        match &parsed.fluxes[e] {
            Some(value) => intake_flux.push(value.clone()),
            None => missing.push(net.edge_label(e)),
        }
    }
    if !missing.is_empty() {
        return Err(fail(
            EXIT_MISSING,
            format!("document gives no flux for: {}", missing.join(", ")),
        ));
    }

    let report = feasible_flow_exists(net, &x, &intake_flux).map_err(pathways_failure)?;
    println!("prescribed intake total: {}", fmt_exact(&report.prescribed_total));
    println!("max transferable: {}", fmt_exact(&report.max_transferable));
    println!("feasible: {}", if report.feasible { "yes" } else { "no" });
    if !report.blocked_intakes.is_empty() {
        println!(
            "intakes with no excretion path: {}",
            id_list(net, &report.blocked_intakes)
        );
    }
    if let Some(witness) = &report.witness {
        println!("witness flux:");
        for (e, value) in witness.values().iter().enumerate() {
            println!("  {}: {}", net.edge_label(e), fmt_exact(value));
        }
    }
    let cut: Vec<String> = report.limiting_cut.iter().map(|&e| net.edge_label(e)).collect();
    println!(
        "limiting cut: {}",
        if cut.is_empty() { "(none)".to_owned() } else { cut.join(", ") }
    );
    Ok(())
}
