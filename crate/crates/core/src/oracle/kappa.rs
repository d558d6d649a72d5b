use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{state_vector, Layout};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::Budget;

/// Largest reduced-state norm over bipartitions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Kappa {
    pub kappa: f64,
    /// Side containing vertex 0 of a maximizing bipartition.
    pub subset: Vec<usize>,
    pub bipartitions: u64,
}

/// `max_A ||rho_A||` over nonempty proper subsets `A`. Only subsets holding
/// vertex 0 are scanned since both sides of a cut share the nonzero spectrum.
pub fn kappa(hg: &Hypergraph, budget: &Budget) -> Result<Kappa> {
    let n = hg.n();
    if n < 2 {
        return Err(Error::BadParams("kappa needs at least two vertices".into()));
    }
    Budget::check("kappa vertices", n as u64, budget.kappa as u64)?;
    let psi = state_vector(hg, budget)?;
    let lay = Layout::of(hg);
    let count = 1u64 << (n - 1);
    let best = (0..count - 1)
        .into_par_iter()
        .map(|rest| {
            // bit j of `rest` selects vertex j + 1; the full set is excluded.
            let subset: Vec<usize> = std::iter::once(0)
                .chain((1..n).filter(|&j| rest >> (j - 1) & 1 == 1))
                .collect();
            (reduced_norm(&lay, &psi, &subset, hg.dim() == 2), subset)
        })
        .reduce_with(|a, b| {
            let b_wins = b.0 > a.0 + 1e-12 || ((b.0 - a.0).abs() <= 1e-12 && b.1 < a.1);
            if b_wins {
                b
            } else {
                a
            }
        })
        .expect("at least one bipartition");
    Ok(Kappa {
        kappa: best.0,
        subset: best.1,
        bipartitions: count - 1,
    })
}

/// `||rho_A||` as the top eigenvalue of the Gram matrix of the smaller side.
fn reduced_norm(lay: &Layout, psi: &[Complex64], subset: &[usize], real: bool) -> f64 {
    let inside: Vec<bool> = (0..lay.n).map(|j| subset.contains(&j)).collect();
    let (rows_side, cols_side): (Vec<usize>, Vec<usize>) = {
        let a: Vec<usize> = (0..lay.n).filter(|&j| inside[j]).collect();
        let b: Vec<usize> = (0..lay.n).filter(|&j| !inside[j]).collect();
        if a.len() <= b.len() {
            (a, b)
        } else {
            (b, a)
        }
    };
    let sub_index = |idx: usize, side: &[usize]| side.iter().fold(0, |acc, &j| acc * lay.d + lay.digit(idx, j));
    let r = lay.d.pow(rows_side.len() as u32);
    let c = lay.d.pow(cols_side.len() as u32);
    let mut m = vec![Complex64::new(0.0, 0.0); r * c];
    for (idx, a) in psi.iter().enumerate() {
        m[sub_index(idx, &rows_side) * c + sub_index(idx, &cols_side)] = *a;
    }
    if real {
        let g = DMatrix::<f64>::from_fn(r, r, |i, k| (0..c).map(|t| m[i * c + t].re * m[k * c + t].re).sum());
        SymmetricEigen::new(g).eigenvalues.max()
    } else {
        let g = DMatrix::<Complex64>::from_fn(r, r, |i, k| (0..c).map(|t| m[i * c + t] * m[k * c + t].conj()).sum());
        SymmetricEigen::new(g).eigenvalues.max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::family;

    #[test]
    fn single_edges() {
        for k in 2..=6 {
            let hg = family("single-edge", &[k]).unwrap();
            let got = kappa(&hg, &Budget::default()).unwrap().kappa;
            assert!((got - (1.0 - 2f64.powi(1 - k as i32))).abs() < 1e-12, "k={k}: {got}");
        }
    }

    #[test]
    fn product_state() {
        let hg = Hypergraph::qubit(4, [vec![0, 1], vec![2, 3]]).unwrap();
        assert!((kappa(&hg, &Budget::default()).unwrap().kappa - 1.0).abs() < 1e-12);
    }
}
