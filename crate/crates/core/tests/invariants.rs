//! Cross-module invariants on randomized inputs: properties the algebra
//! guarantees regardless of network shape, checked through routes that do
//! not share code with the implementation under test.

mod common;

use common::*;
use life_core::document::{document_from_network, parse_network};
use life_core::dynamics::cycle_gains;
use life_core::equilibrium::{linear_equilibrium, EqValue, Regime};
use life_core::pathways::{extreme_pathways, verify_positive_basis, VerifyOptions};
use life_core::rational::{format_exact_decimal, parse_decimal, rat};
use life_core::stoichiometry::{evaluate_stoichiometric, flux_matrix, FluxAssignment};
use num::Zero;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    /// Every finite decimal string parses to a rational whose exact decimal
    /// rendering parses back to the same value.
    #[test]
    fn decimal_values_survive_a_render_cycle(
        text in r"[+-]?[0-9]{1,7}(\.[0-9]{1,7})?([eE][+-]?[0-8])?"
    ) {
        let value = parse_decimal(&text).expect("generated strings are valid decimals");
        let rendered = format_exact_decimal(&value)
            .expect("a parsed decimal always has a finite decimal form");
        prop_assert_eq!(parse_decimal(&rendered).unwrap(), value);
    }

    /// Cycle gains are non-negative and difference back to any zero-sum
    /// field, up to floating round-off.
    #[test]
    fn cycle_gains_reconstruct_zero_sum_fields(
        mut field in proptest::collection::vec(-100.0f64..100.0, 1..8)
    ) {
        let balance: f64 = field.iter().sum();
        field.push(-balance);
        let n = field.len();

        let gains = cycle_gains(&field);
        prop_assert!(gains.iter().all(|g| *g >= 0.0));

        let scale = field.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        for i in 0..n {
            let reconstructed = gains[(i + n - 1) % n] - gains[i];
            prop_assert!(
                (reconstructed - field[i]).abs() <= 1e-9 * scale,
                "component {} off: {} vs {}", i, reconstructed, field[i]
            );
        }
    }
}

/// Solved equilibria must satisfy the balance equations on substitution:
/// an independent residual check of the linear solver.
#[test]
fn equilibria_balance_exactly_on_substitution() {
    let mut rng = rng(0x1417);
    for i in 0..20 {
        let net = random_network(&mut rng, true, true, true);
        let f = random_positive_fluxes(&mut rng, net.m());
        let report = linear_equilibrium(&net, &f).unwrap();
        assert_eq!(report.regime, Regime::UniqueGlobal, "drained network {i}");

        let xbar: Vec<_> = report
            .values
            .iter()
            .map(|v| match v {
                EqValue::Exact(r) => r.clone(),
                other => panic!("network {i}: expected exact values, got {other:?}"),
            })
            .collect();
        let (j, phi) = flux_matrix(&net, &f).unwrap();
        let residual = j.mul_vec(&xbar);
        for (v, (r, p)) in residual.iter().zip(&phi).enumerate() {
            assert!((r + p).is_zero(), "network {i}: balance residual at vertex {v}");
        }
    }
}

/// Enumerated pathway bases pass the independent verifier on mixed random
/// networks with the default sampling options.
#[test]
fn pathway_bases_verify_cleanly() {
    let mut rng = rng(0x1418);
    for i in 0..12 {
        let open = i % 3 != 0;
        let net = random_throughput_network(&mut rng, open, false);
        let x = random_positive_state(&mut rng, net.n());
        let basis = extreme_pathways(&net, &x).unwrap();
        let s = evaluate_stoichiometric(&net, &x).unwrap();
        let report = verify_positive_basis(&s, &basis, VerifyOptions::default());
        assert!(report.is_valid(), "network {i}: {report:?}");
        assert_eq!(report.sampled_members, 64, "network {i}: quota missed");
    }
}

/// Network documents round-trip through parsing byte for byte, fluxes
/// included.
#[test]
fn documents_round_trip_byte_exactly() {
    let mut rng = rng(0x1419);
    for i in 0..20 {
        let net = random_network(&mut rng, i % 2 == 0, false, false);
        let fluxes = FluxAssignment::new(
            (0..net.m())
                .map(|_| rat(rng.gen_range(1..=9999), 10i64.pow(rng.gen_range(0..=3))))
                .collect(),
        );
        let rendered = document_from_network(&net, Some(&fluxes)).unwrap().to_json();
        let parsed = parse_network(&rendered).unwrap();
        let reparsed = document_from_network(&parsed.network, parsed.flux_assignment().as_ref())
            .unwrap()
            .to_json();
        assert_eq!(rendered, reparsed, "network {i}: round-trip changed the document");
    }
}
