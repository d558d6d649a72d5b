//! Exact fractional-coloring LP over maximal independent sets.
//!
//! Solves `min 1'g  s.t.  M g >= 1, g >= 0` where the columns of `M` are the
//! indicator vectors of the maximal independent sets. Arithmetic is exact
//! rational; the optimum is `chi_f`, and `1/chi_f` is the independence degree.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::search::{members, Mask};

pub(crate) struct LpSolution {
    /// Value of each maximal independent set column, same order as the input.
    pub values: Vec<BigRational>,
    /// Values of the singleton start columns still in the final basis.
    pub singletons: Vec<(usize, BigRational)>,
    /// Optimal dual: a fractional clique with total weight `objective`.
    pub dual: Vec<BigRational>,
    pub objective: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Column {
    Set(usize),
    Singleton(usize),
    Surplus(usize),
}

const DEGENERATE_STREAK: usize = 30;

/// Revised simplex started from the singleton basis (`g_{j} = 1`).
pub(crate) fn solve(n: usize, sets: &[Mask]) -> LpSolution {
    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut basis: Vec<Column> = (0..n).map(Column::Singleton).collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    let mut x: Vec<BigRational> = vec![one.clone(); n];
    let mut streak = 0;

    let cost = |c: Column| match c {
        Column::Set(_) | Column::Singleton(_) => BigRational::one(),
        Column::Surplus(_) => BigRational::zero(),
    };
    let column = |c: Column| -> Vec<BigRational> {
        let mut a = vec![BigRational::zero(); n];
        match c {
            Column::Set(k) => members(sets[k]).for_each(|v| a[v] = BigRational::one()),
            Column::Singleton(j) => a[j] = BigRational::one(),
            Column::Surplus(j) => a[j] = -BigRational::one(),
        }
        a
    };
    // Column ranks for Bland's rule: sets, then singletons, then surplus.
    let rank = |c: Column| match c {
        Column::Set(k) => k,
        Column::Singleton(j) => sets.len() + j,
        Column::Surplus(j) => sets.len() + n + j,
    };

    loop {
        // y = c_B' B^{-1}
        let mut y = vec![BigRational::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            let cb = cost(b);
            if cb.is_zero() {
                continue;
            }
            for (j, yj) in y.iter_mut().enumerate() {
                if !inv[i][j].is_zero() {
                    *yj += &cb * &inv[i][j];
                }
            }
        }

        let bland = streak >= DEGENERATE_STREAK;
        let mut entering: Option<(Column, BigRational)> = None;
        let mut consider = |c: Column, reduced: BigRational| {
            if !reduced.is_negative() {
                return;
            }
            let better = match &entering {
                None => true,
                Some(_) if bland => false,
                Some((_, r)) => reduced < *r,
            };
            if better {
                entering = Some((c, reduced));
            }
        };
        for (k, &s) in sets.iter().enumerate() {
            let covered: BigRational = members(s).map(|v| y[v].clone()).sum();
            consider(Column::Set(k), &one - covered);
        }
        for (j, yj) in y.iter().enumerate() {
            consider(Column::Surplus(j), yj.clone());
        }
        let Some((enter, _)) = entering else {
            let objective: BigRational = basis.iter().zip(&x).map(|(&b, v)| cost(b) * v).sum();
            let mut values = vec![BigRational::zero(); sets.len()];
            let mut singletons = Vec::new();
            for (&b, v) in basis.iter().zip(&x) {
                match b {
                    Column::Set(k) => values[k] = v.clone(),
                    Column::Singleton(j) if !v.is_zero() => singletons.push((j, v.clone())),
                    _ => {}
                }
            }
            singletons.sort_by_key(|(j, _)| *j);
            return LpSolution {
                values,
                singletons,
                dual: y,
                objective,
            };
        };

        let a = column(enter);
        let dvec: Vec<BigRational> = inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&a)
                    .filter(|(r, aj)| !r.is_zero() && !aj.is_zero())
                    .map(|(r, aj)| r * aj)
                    .sum()
            })
            .collect();
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, di) in dvec.iter().enumerate() {
            if !di.is_positive() {
                continue;
            }
            let ratio = &x[i] / di;
            let better = match &leave {
                None => true,
                Some((l, r)) => ratio < *r || (ratio == *r && rank(basis[i]) < rank(basis[*l])),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // The covering LP is bounded below by zero, so a leaving row exists.
        let (r, theta) = leave.expect("covering LP is bounded");
        if theta.is_zero() {
            streak += 1;
        } else {
            streak = 0;
        }
        for (i, xi) in x.iter_mut().enumerate() {
            if i != r && !dvec[i].is_zero() {
                *xi -= &theta * &dvec[i];
            }
        }
        x[r] = theta;
        let pivot = dvec[r].clone();
        let pivot_row: Vec<BigRational> = inv[r].iter().map(|v| v / &pivot).collect();
        for (i, row) in inv.iter_mut().enumerate() {
            if i == r || dvec[i].is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &dvec[i] * p;
                }
            }
        }
        inv[r] = pivot_row;
        basis[r] = enter;
    }
}
