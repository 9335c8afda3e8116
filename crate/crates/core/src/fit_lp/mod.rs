//! Fixed-dimension linear programming and the fixed-rotation fitting
//! problems built on it.
//!
//! Every LP here maximizes its last variable; remaining ties are broken by
//! minimizing the other variables lexicographically, so the reported witness
//! is unique and seed-independent.

mod fit;
mod seidel;

pub use fit::{beta_fixed_rotation, chebyshev_inradius, fit_check, Inradius, RotationFit};
pub(crate) use fit::{fixed_rotation_instance, rotation_fit_on};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

/// Largest supported number of LP variables.
pub const MAX_VARS: usize = 8;

/// `maximize x[dim_vars - 1]` subject to `row_i . x <= bound_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpInstance<S> {
    dim_vars: usize,
    rows: Vec<S>,
    bounds: Vec<S>,
    /// Implicit box `|x_i| <= box_bound` keeping every LP bounded.
    pub box_bound: S,
}

impl<S: Scalar> LpInstance<S> {
    pub fn new(dim_vars: usize) -> Self {
        LpInstance { dim_vars, rows: Vec::new(), bounds: Vec::new(), box_bound: S::lp_box() }
    }

    pub fn with_capacity(dim_vars: usize, constraints: usize) -> Self {
        LpInstance {
            dim_vars,
            rows: Vec::with_capacity(dim_vars * constraints),
            bounds: Vec::with_capacity(constraints),
            box_bound: S::lp_box(),
        }
    }

    pub fn push(&mut self, row: &[S], bound: S) -> Result<()> {
        if row.len() != self.dim_vars {
            return Err(Error::DimensionMismatch { expected: self.dim_vars, found: row.len() });
        }
        self.rows.extend_from_slice(row);
        self.bounds.push(bound);
        Ok(())
    }

    #[inline]
    pub fn dim_vars(&self) -> usize {
        self.dim_vars
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn constraint(&self, i: usize) -> (&[S], S) {
        let k = self.dim_vars;
        (&self.rows[i * k..(i + 1) * k], self.bounds[i])
    }

    /// `bound_i - row_i . x`.
    pub fn slack(&self, i: usize, x: &[S]) -> S {
        let (row, b) = self.constraint(i);
        b - crate::geometry::dot(row, x)
    }

    fn subset(&self, idx: &[usize]) -> Self {
        let mut out = LpInstance::with_capacity(self.dim_vars, idx.len());
        out.box_bound = self.box_bound;
        for &i in idx {
            let (row, b) = self.constraint(i);
            out.rows.extend_from_slice(row);
            out.bounds.push(b);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult<S> {
    pub status: LpStatus,
    /// Optimal objective; `+inf` when unbounded, `0` when infeasible.
    pub value: S,
    /// Lexicographic optimum (box-limited when unbounded, empty when infeasible).
    pub witness: Vec<S>,
    /// At most `dim_vars` active constraints that, with the box, alone
    /// reproduce the witness.
    pub tight_set: Vec<usize>,
}

fn objectives<S: Scalar>(k: usize) -> Vec<Vec<S>> {
    let mut objs = Vec::with_capacity(k);
    let mut main = vec![S::zero(); k];
    main[k - 1] = S::one();
    objs.push(main);
    for i in 0..k - 1 {
        let mut o = vec![S::zero(); k];
        o[i] = -S::one();
        objs.push(o);
    }
    objs
}

fn validate<S: Scalar>(inst: &LpInstance<S>) -> Result<()> {
    if inst.dim_vars == 0 || inst.dim_vars > MAX_VARS {
        return Err(Error::UnsupportedDimension { dim: inst.dim_vars, reason: "LP supports 1..=8 variables" });
    }
    Ok(())
}

/// Solves without computing the tight set.
pub(crate) fn solve_witness<S: Scalar>(inst: &LpInstance<S>, seed: u64) -> Result<LpResult<S>> {
    validate(inst)?;
    let mut order: Vec<usize> = (0..inst.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(solve_ordered(inst, &order))
}

fn solve_ordered<S: Scalar>(inst: &LpInstance<S>, order: &[usize]) -> LpResult<S> {
    let k = inst.dim_vars;
    let problem = seidel::Problem { k, rows: &inst.rows, bounds: &inst.bounds, bound: inst.box_bound };
    match seidel::solve(&problem, &objectives(k), order) {
        None => LpResult { status: LpStatus::Infeasible, value: S::zero(), witness: Vec::new(), tight_set: Vec::new() },
        Some(x) => {
            let top = x[k - 1];
            if top >= inst.box_bound * (S::one() - S::lit(1e-9)) {
                LpResult { status: LpStatus::Unbounded, value: S::infinity(), witness: x, tight_set: Vec::new() }
            } else {
                LpResult { status: LpStatus::Optimal, value: top, witness: x, tight_set: Vec::new() }
            }
        }
    }
}

pub(crate) fn same_witness<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| (*x - *y).abs() <= S::feas_tol() * S::one().max(x.abs()).max(y.abs()))
}

/// Randomized incremental LP (Seidel) in at most [`MAX_VARS`] variables.
///
/// The seed only permutes the insertion order; value and witness are the
/// same for every seed up to rounding.
pub fn seidel_lp<S: Scalar>(inst: &LpInstance<S>, seed: u64) -> Result<LpResult<S>> {
    let mut res = solve_witness(inst, seed)?;
    if res.status != LpStatus::Infeasible {
        res.tight_set = tight_basis(inst, &res.witness);
    }
    Ok(res)
}

/// Active constraints at `x`, greedily thinned to a set that still pins the
/// same lexicographic optimum.
fn tight_basis<S: Scalar>(inst: &LpInstance<S>, x: &[S]) -> Vec<usize> {
    let active: Vec<usize> = (0..inst.len())
        .filter(|&i| inst.slack(i, x) <= S::feas_tol() * S::one().max(inst.bounds[i].abs()))
        .collect();
    if active.len() <= inst.dim_vars {
        return active;
    }
    // grow by the most violated active row until the witness comes back,
    // then thin; degenerate optima can have every row active
    let reproduces = |idx: &[usize]| {
        let r = solve_ordered(&inst.subset(idx), &(0..idx.len()).collect::<Vec<_>>());
        (r.status != LpStatus::Infeasible && same_witness(&r.witness, x), r.witness)
    };
    let mut basis: Vec<usize> = Vec::new();
    loop {
        let (ok, w) = reproduces(&basis);
        if ok {
            break;
        }
        let worst = active
            .iter()
            .filter(|i| !basis.contains(i))
            .map(|&i| (inst.slack(i, &w), i))
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));
        match worst {
            Some((sl, i)) if sl < S::zero() => basis.push(i),
            _ => {
                basis = active;
                break;
            }
        }
    }
    basis.sort_unstable();
    let mut i = 0;
    while i < basis.len() {
        let trial: Vec<usize> = basis.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
        if reproduces(&trial).0 {
            basis = trial;
        } else {
            i += 1;
        }
    }
    basis
}
