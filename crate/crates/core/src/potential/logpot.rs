use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::EmpiricalMeasure;
use crate::error::{Error, Result};

/// `U^μ(z) = Σ w_i log(1/|z - t_i|)`; `+∞` when `z` is a charged atom.
pub fn log_potential(mu: &EmpiricalMeasure, z: Complex64) -> f64 {
    let mut sum = 0.0;
    for a in mu.atoms() {
        if a.weight == 0.0 {
            continue;
        }
        let d = (z - a.location).norm();
        if d == 0.0 {
            return f64::INFINITY;
        }
        sum -= a.weight * d.ln();
    }
    sum
}

/// `Σ_{i ≠ j} w_i w_j log(1/|t_i - t_j|)`; `+∞` if two distinct atoms coincide.
pub fn energy(mu: &EmpiricalMeasure) -> Result<f64> {
    let atoms = mu.atoms();
    if atoms.len() < 2 {
        return Err(Error::InsufficientAtoms { needed: 2, got: atoms.len() });
    }
    let rows: Vec<f64> = (0..atoms.len())
        .into_par_iter()
        .map(|i| {
            let mut row = 0.0;
            for (j, b) in atoms.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = (atoms[i].location - b.location).norm();
                if d == 0.0 {
                    return f64::INFINITY;
                }
                row -= b.weight * d.ln();
            }
            atoms[i].weight * row
        })
        .collect();
    Ok(rows.iter().sum())
}
