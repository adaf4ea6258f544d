//! Adapted bases built from spanning sets of stable directions.
//!
//! Given linearly independent directions `u_1, ..., u_d`, the basis vector
//! `v_i` is orthogonal to every `u_j` with `j != i` and signed so that
//! `<v_i, u_i> < 0`. In the resulting coordinates the open half-space
//! `{x : <x, u_i> < 0}` becomes `{x : x_i > 0}`, which is what lets the
//! window geometry treat each axis independently.
//!
//! The `v_i` are kept as exact integer vectors (adjugate columns); only the
//! coordinate transform itself is rational. Positive rescaling of a basis
//! vector changes no half-space membership, so nothing is normalized.

use num::rational::Ratio;

use crate::family::{Direction, Site};
use crate::{Error, Result};

/// Exact rational scalar used for coordinates in an adapted basis.
pub type Rational = Ratio<i128>;

/// A basis change adapted to `d` stable directions.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    directions: Vec<Direction>,
    /// Columns of the basis-change matrix `V` (the `v_i`).
    columns: Vec<Vec<i128>>,
    /// Adjugate of `V`; the inverse transform is `adj(V) / det(V)`.
    inv_adj: Vec<Vec<i128>>,
    inv_det: i128,
    d: usize,
}

impl AdaptedBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// The `i`-th basis vector in lattice coordinates.
    pub fn column(&self, i: usize) -> &[i128] {
        &self.columns[i]
    }

    /// Exact coordinates of a lattice site in this basis.
    pub fn to_coords(&self, s: &Site) -> Result<Vec<Rational>> {
        if s.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: s.dim(),
            });
        }
        Ok((0..self.d)
            .map(|i| {
                let num: i128 = (0..self.d)
                    .map(|j| self.inv_adj[i][j] * s.coords()[j] as i128)
                    .sum();
                Ratio::new(num, self.inv_det)
            })
            .collect())
    }

    /// Lattice-coordinate vector of a point given in basis coordinates.
    pub fn from_coords(&self, coords: &[Rational]) -> Result<Vec<Rational>> {
        if coords.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: coords.len(),
            });
        }
        Ok((0..self.d)
            .map(|axis| {
                (0..self.d)
                    .map(|i| Ratio::from_integer(self.columns[i][axis]) * coords[i])
                    .sum()
            })
            .collect())
    }

    /// True when the transform is the identity, in which case boxes in basis
    /// coordinates are plain lattice boxes.
    pub fn is_identity(&self) -> bool {
        (0..self.d).all(|i| {
            (0..self.d).all(|j| self.columns[i][j] == if i == j { 1 } else { 0 })
        })
    }
}

/// Builds the adapted basis for linearly independent directions.
pub fn construct_basis(directions: &[Direction]) -> Result<AdaptedBasis> {
    let d = directions.len();
    if d == 0 {
        return Err(Error::NotLinearlyIndependent);
    }
    for u in directions {
        if u.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: u.dim(),
            });
        }
    }
    // Rows of M are the directions; column i of adj(M) is orthogonal to every
    // u_j with j != i and pairs with u_i to det(M).
    let m: Vec<Vec<i128>> = directions
        .iter()
        .map(|u| u.vec().iter().map(|&c| c as i128).collect())
        .collect();
    let det_m = det(&m);
    if det_m == 0 {
        return Err(Error::NotLinearlyIndependent);
    }
    let adj_m = adjugate(&m);
    let sign: i128 = if det_m > 0 { -1 } else { 1 };
    let columns: Vec<Vec<i128>> = (0..d)
        .map(|i| (0..d).map(|row| sign * adj_m[row][i]).collect())
        .collect();

    // V has the v_i as columns; its adjugate gives the inverse transform.
    let v_matrix: Vec<Vec<i128>> = (0..d)
        .map(|row| (0..d).map(|i| columns[i][row]).collect())
        .collect();
    let det_v = det(&v_matrix);
    debug_assert_ne!(det_v, 0);
    let inv_adj = adjugate(&v_matrix);

    let basis = AdaptedBasis {
        directions: directions.to_vec(),
        columns,
        inv_adj,
        inv_det: det_v,
        d,
    };
    for i in 0..d {
        for j in 0..d {
            let dot: i128 = (0..d)
                .map(|k| basis.columns[i][k] * directions[j].vec()[k] as i128)
                .sum();
            debug_assert!(if i == j { dot < 0 } else { dot == 0 });
        }
    }
    Ok(basis)
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0i128;
            for col in 0..n {
                if m[0][col] == 0 {
                    continue;
                }
                let minor = minor_matrix(m, 0, col);
                let term = m[0][col] * det(&minor);
                acc += if col % 2 == 0 { term } else { -term };
            }
            acc
        }
    }
}

fn minor_matrix(m: &[Vec<i128>], row: usize, col: usize) -> Vec<Vec<i128>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// Adjugate: `M · adj(M) = det(M) · I`.
fn adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let cof = det(&minor_matrix(m, j, i));
            adj[i][j] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}
