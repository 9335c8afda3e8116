use std::collections::BTreeSet;

use rayon::prelude::*;

use super::Stats;
use crate::error::Result;
use crate::fit_lp::{rotation_fit_on, same_witness, LpStatus, RotationFit};
use crate::geometry::{HPolytope, Placement, VPolytope};
use crate::rotation_net::RotationNet;
use crate::{rng, Scalar};

/// Every rotation's LP over one constraint subset, plus the winner.
#[derive(Clone, Debug)]
pub(crate) struct Eval<S> {
    pub fits: Vec<RotationFit<S>>,
    pub winner: usize,
    pub status: LpStatus,
    pub beta: S,
}

impl<S: Scalar> Eval<S> {
    pub fn from_fits(fits: Vec<RotationFit<S>>) -> Self {
        let key = |f: &RotationFit<S>| match f.status {
            LpStatus::Infeasible => S::neg_infinity(),
            LpStatus::Unbounded => S::infinity(),
            LpStatus::Optimal => f.value,
        };
        let best = fits.iter().map(key).fold(S::neg_infinity(), S::max);
        if best == S::neg_infinity() {
            return Eval { fits, winner: 0, status: LpStatus::Infeasible, beta: S::zero() };
        }
        let tie = if best.is_finite() { S::pivot_tol() * S::one().max(best.abs()) } else { S::zero() };
        let winner = fits.iter().position(|f| key(f) >= best - tie).expect("best is attained");
        let status = fits[winner].status;
        Eval { beta: fits[winner].value, status, winner, fits }
    }

    pub fn placement(&self) -> &Placement<S> {
        &self.fits[self.winner].placement
    }

    /// Same winner, status and (lexicographic) placement.
    pub fn same_outcome(&self, other: &Self) -> bool {
        if self.status != other.status {
            return false;
        }
        if self.status == LpStatus::Infeasible {
            return true;
        }
        self.winner == other.winner && same_witness(&witness(self.placement()), &witness(other.placement()))
    }
}

fn witness<S: Scalar>(p: &Placement<S>) -> Vec<S> {
    let mut w = p.translation.coords().to_vec();
    w.push(p.scale);
    w
}

fn fit_rotations<S: Scalar>(
    k: &VPolytope<S>,
    net: &RotationNet<S>,
    p: &HPolytope<S>,
    which: &[usize],
    indices: &[usize],
    seed: u64,
    with_tight: bool,
) -> Result<Vec<RotationFit<S>>> {
    which
        .par_iter()
        .map(|&i| rotation_fit_on(k, &net.rotations()[i], p, indices, rng::sub_seed(seed, i as u64), with_tight))
        .collect()
}

/// Solves all `t` rotation LPs restricted to `indices`.
pub(crate) fn evaluate<S: Scalar>(
    k: &VPolytope<S>,
    net: &RotationNet<S>,
    p: &HPolytope<S>,
    indices: &[usize],
    seed: u64,
    with_tight: bool,
    stats: &mut Stats,
) -> Result<Eval<S>> {
    let all: Vec<usize> = (0..net.len()).collect();
    let fits = fit_rotations(k, net, p, &all, indices, seed, with_tight)?;
    stats.lp_calls += net.len() as u64;
    Ok(Eval::from_fits(fits))
}

/// Union of the tight half-spaces of every feasible rotation: at most
/// `t (d + 1)` indices that reproduce every rotation's witness.
pub(crate) fn tight_union<S: Scalar>(ev: &Eval<S>) -> Vec<usize> {
    let set: BTreeSet<usize> = ev
        .fits
        .iter()
        .filter(|f| f.status != LpStatus::Infeasible)
        .flat_map(|f| f.tight.iter().copied())
        .collect();
    set.into_iter().collect()
}

/// Re-solves over `indices ∪ {h}` only the rotations whose placement in
/// `ev` (computed over `indices`) is cut by half-space `h`.
pub(crate) fn extend<S: Scalar>(
    k: &VPolytope<S>,
    net: &RotationNet<S>,
    p: &HPolytope<S>,
    ev: &Eval<S>,
    indices: &[usize],
    h: usize,
    seed: u64,
    stats: &mut Stats,
) -> Result<Eval<S>> {
    let hs = &p.halfspaces()[h];
    let tol = S::feas_tol() * S::one().max(hs.offset().abs());
    let cut: Vec<usize> = (0..ev.fits.len())
        .filter(|&i| {
            let f = &ev.fits[i];
            f.status != LpStatus::Infeasible && f.placement.realize(k).iter().any(|v| hs.excess(v) > tol)
        })
        .collect();
    let mut idx = indices.to_vec();
    idx.push(h);
    let refits = fit_rotations(k, net, p, &cut, &idx, seed, true)?;
    stats.lp_calls += cut.len() as u64;
    let mut fits = ev.fits.clone();
    for (i, f) in cut.iter().zip(refits) {
        fits[*i] = f;
    }
    Ok(Eval::from_fits(fits))
}

/// Thins the union of tight half-spaces of `ev` (computed over the subset
/// `indices` of `P`) while the outcome stays the same. Removing a half-space
/// only changes the rotations whose tight set uses it, so only those are
/// re-solved.
/// Later indices are tried first, so duplicates keep their first copy.
pub(crate) fn prune<S: Scalar>(
    k: &VPolytope<S>,
    net: &RotationNet<S>,
    p: &HPolytope<S>,
    indices: &[usize],
    ev: Eval<S>,
    seed: u64,
    stats: &mut Stats,
) -> Result<(Vec<usize>, Eval<S>)> {
    if ev.status == LpStatus::Infeasible {
        let core = infeasible_core(k, net, p, indices, seed, stats)?;
        return Ok((core, ev));
    }
    let mut cand: BTreeSet<usize> = tight_union(&ev).into_iter().collect();
    let mut ev = ev;
    let order: Vec<usize> = cand.iter().rev().copied().collect();
    for c in order {
        let affected: Vec<usize> = (0..ev.fits.len()).filter(|&i| ev.fits[i].tight.contains(&c)).collect();
        if affected.is_empty() {
            cand.remove(&c);
            continue;
        }
        let trial_idx: Vec<usize> = cand.iter().copied().filter(|&x| x != c).collect();
        let refits = fit_rotations(k, net, p, &affected, &trial_idx, seed, true)?;
        stats.lp_calls += affected.len() as u64;
        let mut fits = ev.fits.clone();
        for (i, f) in affected.iter().zip(refits) {
            fits[*i] = f;
        }
        let trial = Eval::from_fits(fits);
        if trial.same_outcome(&ev) {
            cand.remove(&c);
            ev = trial;
        }
    }
    Ok((cand.into_iter().collect(), ev))
}

/// Minimal infeasible subfamily found by repeated prefix bisection: each
/// round locates the shortest infeasible prefix and keeps its last element.
fn infeasible_core<S: Scalar>(
    k: &VPolytope<S>,
    net: &RotationNet<S>,
    p: &HPolytope<S>,
    indices: &[usize],
    seed: u64,
    stats: &mut Stats,
) -> Result<Vec<usize>> {
    let rot = &net.rotations()[0];
    let mut pool: Vec<usize> = indices.to_vec();
    let mut core: Vec<usize> = Vec::new();
    let infeasible = |idx: &[usize], stats: &mut Stats| -> Result<bool> {
        stats.lp_calls += 1;
        Ok(rotation_fit_on(k, rot, p, idx, seed, false)?.status == LpStatus::Infeasible)
    };
    loop {
        if infeasible(&core, stats)? || pool.is_empty() {
            break;
        }
        let (mut lo, mut hi) = (1, pool.len());
        let mut trial = core.clone();
        while lo < hi {
            let mid = (lo + hi) / 2;
            trial.truncate(core.len());
            trial.extend_from_slice(&pool[..mid]);
            if infeasible(&trial, stats)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        core.push(pool[lo - 1]);
        pool.truncate(lo - 1);
    }
    core.sort_unstable();
    Ok(core)
}
