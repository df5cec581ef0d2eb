//! Exact phase-one simplex over rationals.
//!
//! Solves the feasibility problem "is `b` a non-negative combination of the
//! given columns" and, when it is not, produces a separating vector as the
//! certificate: `y` with `y . col >= 0` for every column and `y . b < 0`.
//! Bland's rule guarantees termination; all arithmetic is exact.

use crate::rational::Rational;
use num::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonNegSolve {
    Feasible { coefficients: Vec<Rational> },
    Infeasible { certificate: Vec<Rational> },
}

/// Finds `lambda >= 0` with `sum_i lambda_i * columns[i] = b`, or a
/// separating certificate. Every column must have the same length as `b`.
pub fn solve_nonneg_combination(columns: &[Vec<Rational>], b: &[Rational]) -> NonNegSolve {
    let m = b.len();
    let k = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == m), "ragged columns");

    // Flip rows with negative right-hand side so the artificial start is
    // feasible; remember the signs to map the certificate back.
    let signs: Vec<Rational> = b
        .iter()
        .map(|v| {
            if v.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect();

    // Tableau layout: k real columns, m artificial columns, then the rhs.
    let width = k + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for (j, col) in columns.iter().enumerate() {
                row[j] = &signs[i] * &col[i];
            }
            row[k + i] = Rational::one();
            row[width - 1] = &signs[i] * &b[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();

    // Reduced-cost row for the phase-one objective (sum of artificials):
    // r_j = c_j - sum of rows in column j; objective value in the rhs slot.
    let mut reduced = vec![Rational::zero(); width];
    for j in 0..width {
        let mut col_sum = Rational::zero();
        for row in &t {
            col_sum += &row[j];
        }
        let cost = if (k..k + m).contains(&j) {
            Rational::one()
        } else {
            Rational::zero()
        };
        reduced[j] = cost - col_sum;
    }

    loop {
        // Bland: smallest-index column with negative reduced cost enters.
        let Some(enter) = (0..k + m).find(|&j| reduced[j].is_negative()) else {
            break;
        };
        // Ratio test, ties broken by smallest basis variable.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-one objective is bounded below; a pivot row must exist");

        let pivot = t[leave][enter].clone();
        for v in &mut t[leave] {
            *v /= &pivot;
        }
        for i in 0..m {
            if i != leave && !t[i][enter].is_zero() {
                let factor = t[i][enter].clone();
                for j in 0..width {
                    let delta = &factor * &t[leave][j];
                    t[i][j] -= delta;
                }
            }
        }
        if !reduced[enter].is_zero() {
            let factor = reduced[enter].clone();
            for j in 0..width {
                let delta = &factor * &t[leave][j];
                reduced[j] -= delta;
            }
        }
        basis[leave] = enter;
    }

    // Objective value: the rhs slot of the reduced row holds its negative.
    let objective = -reduced[width - 1].clone();
    if objective.is_zero() {
        let mut coefficients = vec![Rational::zero(); k];
        for (i, &var) in basis.iter().enumerate() {
            if var < k {
                coefficients[var] = t[i][width - 1].clone();
            }
        }
        debug_assert!(verify_combination(columns, &coefficients, b));
        NonNegSolve::Feasible { coefficients }
    } else {
        // Multipliers of the flipped system: y_i = 1 - (reduced cost of the
        // i-th artificial column). Mapping back through the row flips gives
        // the separating vector.
        let certificate: Vec<Rational> = (0..m)
            .map(|i| {
                let y = Rational::one() - &reduced[k + i];
                -(&signs[i] * y)
            })
            .collect();
        debug_assert!(verify_certificate(columns, &certificate, b));
        NonNegSolve::Infeasible { certificate }
    }
}

fn verify_combination(columns: &[Vec<Rational>], lambda: &[Rational], b: &[Rational]) -> bool {
    if lambda.iter().any(Signed::is_negative) {
        return false;
    }
    (0..b.len()).all(|i| {
        let mut acc = Rational::zero();
        for (j, col) in columns.iter().enumerate() {
            acc += &lambda[j] * &col[i];
        }
        acc == b[i]
    })
}

fn verify_certificate(columns: &[Vec<Rational>], y: &[Rational], b: &[Rational]) -> bool {
    let dot = |v: &[Rational]| -> Rational {
        v.iter()
            .zip(y)
            .map(|(a, w)| a * w)
            .fold(Rational::zero(), |acc, t| acc + t)
    };
    columns.iter().all(|c| !dot(c).is_negative()) && dot(b).is_negative()
}
