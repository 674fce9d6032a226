//! Ground-truth effective resistance for connected weighted graphs.
//!
//! The exact path grounds one vertex, deletes its row and column from the
//! Laplacian, and solves the remaining nonsingular system with fraction-free
//! (Bareiss) elimination over the integers. The float path builds the
//! Moore–Penrose pseudoinverse from a symmetric eigendecomposition and
//! evaluates `(e_i - e_j)^T L^+ (e_i - e_j)` directly.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::numeric::Rational;

/// Largest graph the dense float path accepts.
pub const FLOAT_MAX_VERTICES: usize = 2000;

/// Exact effective resistance between `i` and `j`, grounding `j`.
pub fn resistance_exact(g: &WeightedGraph, i: usize, j: usize) -> Result<Rational> {
    resistance_exact_grounded(g, i, j, j)
}

/// Exact effective resistance between `i` and `j` with an arbitrary grounded
/// vertex. The answer does not depend on `ground`.
pub fn resistance_exact_grounded(
    g: &WeightedGraph,
    i: usize,
    j: usize,
    ground: usize,
) -> Result<Rational> {
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    g.check_vertex(ground)?;
    if i == j {
        return Ok(Rational::zero());
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }

    // Unknowns are potentials at every vertex but `ground`; inject a unit
    // current at i and extract it at j.
    let n = g.n();
    let index = |v: usize| -> Option<usize> {
        match v.cmp(&ground) {
            std::cmp::Ordering::Less => Some(v - 1),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(v - 2),
        }
    };
    let lap = g.laplacian();
    let size = n - 1;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(size);
    for v in (1..=n).filter(|&v| v != ground) {
        let mut row: Vec<Rational> = (1..=n)
            .filter(|&u| u != ground)
            .map(|u| lap.get(v, u).clone())
            .collect();
        let rhs = if v == i {
            Rational::one()
        } else if v == j {
            -Rational::one()
        } else {
            Rational::zero()
        };
        row.push(rhs);
        rows.push(row);
    }

    let x = solve_bareiss(rows)?;
    let potential = |v: usize| index(v).map_or_else(Rational::zero, |k| x[k].clone());
    Ok(potential(i) - potential(j))
}

/// Solves the augmented system `[A | b]` (each row `size + 1` long).
fn solve_bareiss(rows: Vec<Vec<Rational>>) -> Result<Vec<Rational>> {
    let size = rows.len();
    // Clear denominators row by row; the solution is unchanged.
    let mut m: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            row.iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect()
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..size {
        if m[k][k].is_zero() {
            let swap = (k + 1..size)
                .find(|&r| !m[r][k].is_zero())
                .ok_or(Error::Disconnected)?;
            m.swap(k, swap);
        }
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        let pivot = &pivot_row[k];
        for row in lower.iter_mut() {
            let factor = std::mem::take(&mut row[k]);
            for c in k + 1..=size {
                if factor.is_zero() {
                    if !row[c].is_zero() {
                        row[c] = &row[c] * pivot / &prev;
                    }
                } else {
                    row[c] = (&row[c] * pivot - &factor * &pivot_row[c]) / &prev;
                }
            }
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![Rational::zero(); size];
    for r in (0..size).rev() {
        let mut acc = Rational::from_integer(m[r][size].clone());
        for c in r + 1..size {
            if !m[r][c].is_zero() {
                acc = acc - Rational::from_integer(m[r][c].clone()) * &x[c];
            }
        }
        x[r] = acc / Rational::from_integer(m[r][r].clone());
    }
    Ok(x)
}

/// Floating-point effective resistance via the Laplacian pseudoinverse.
pub fn resistance_float(g: &WeightedGraph, i: usize, j: usize) -> Result<f64> {
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    if g.n() > FLOAT_MAX_VERTICES {
        return Err(Error::TooLarge {
            n: g.n(),
            max: FLOAT_MAX_VERTICES,
        });
    }
    if i == j {
        return Ok(0.0);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(PseudoInverse::new(g).resistance(i, j))
}

/// Spectral data of a Laplacian; resistance queries are O(n) each.
pub struct PseudoInverse {
    eigen: SymmetricEigen<f64, nalgebra::Dyn>,
    keep: Vec<usize>,
}

impl PseudoInverse {
    pub fn new(g: &WeightedGraph) -> Self {
        let n = g.n();
        let mut lap = DMatrix::<f64>::zeros(n, n);
        for (i, j, w) in g.edges() {
            let (a, b, w) = (i - 1, j - 1, w.to_f64());
            lap[(a, b)] -= w;
            lap[(b, a)] -= w;
            lap[(a, a)] += w;
            lap[(b, b)] += w;
        }
        let eigen = SymmetricEigen::new(lap);
        let scale = eigen.eigenvalues.amax().max(f64::MIN_POSITIVE);
        let cutoff = scale * n as f64 * f64::EPSILON * 16.0;
        let keep = (0..n).filter(|&k| eigen.eigenvalues[k] > cutoff).collect();
        Self { eigen, keep }
    }

    /// `(e_i - e_j)^T L^+ (e_i - e_j)`, 1-based vertices.
    pub fn resistance(&self, i: usize, j: usize) -> f64 {
        let v = &self.eigen.eigenvectors;
        self.keep
            .iter()
            .map(|&k| {
                let d = v[(i - 1, k)] - v[(j - 1, k)];
                d * d / self.eigen.eigenvalues[k]
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ResistanceValue {
    Exact(Rational),
    Float(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    GroundedExact,
    PseudoinverseFloat,
}

/// An oracle answer tagged with how it was obtained and which graph it
/// describes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResistanceResult {
    pub value: ResistanceValue,
    pub method: OracleMethod,
    pub graph_fingerprint: String,
}

impl ResistanceResult {
    pub fn exact(g: &WeightedGraph, i: usize, j: usize) -> Result<Self> {
        Ok(Self {
            value: ResistanceValue::Exact(resistance_exact(g, i, j)?),
            method: OracleMethod::GroundedExact,
            graph_fingerprint: g.fingerprint(),
        })
    }

    pub fn float(g: &WeightedGraph, i: usize, j: usize) -> Result<Self> {
        Ok(Self {
            value: ResistanceValue::Float(resistance_float(g, i, j)?),
            method: OracleMethod::PseudoinverseFloat,
            graph_fingerprint: g.fingerprint(),
        })
    }

    pub fn as_f64(&self) -> f64 {
        match &self.value {
            ResistanceValue::Exact(r) => r.to_f64(),
            ResistanceValue::Float(f) => *f,
        }
    }
}
