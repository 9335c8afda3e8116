use std::collections::HashSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::eval::{evaluate, extend, prune, tight_union, Eval};
use super::{beta_direct, check_instance, finish, FitResult, Method, Stats};
use crate::error::Result;
use crate::fit_lp::LpStatus;
use crate::geometry::{HPolytope, Point, VPolytope};
use crate::rotation_net::RotationNet;
use crate::{rng, Scalar};

struct Basis<S> {
    indices: Vec<usize>,
    eval: Eval<S>,
    /// Vertices of the winning placement, cached for violation tests.
    image: Vec<Point<S>>,
}

enum Failure {
    Depth,
    Error(crate::Error),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Error(e)
    }
}

struct Search<'a, S> {
    k: &'a VPolytope<S>,
    net: &'a RotationNet<S>,
    p: &'a HPolytope<S>,
    seed: u64,
    rng: ChaCha8Rng,
    stats: Stats,
    depth_limit: usize,
}

impl<S: Scalar> Search<'_, S> {
    fn basis(&mut self, eval: Eval<S>, indices: &[usize]) -> Result<Basis<S>> {
        self.stats.basis_updates += 1;
        let (indices, eval) = if eval.status == LpStatus::Infeasible {
            prune(self.k, self.net, self.p, indices, eval, self.seed, &mut self.stats)?
        } else {
            (tight_union(&eval), eval)
        };
        let image = eval.placement().realize(self.k);
        Ok(Basis { indices, eval, image })
    }

    /// Basis of `b ∪ {h}`; rotations whose placement `h` does not cut keep
    /// their fit.
    fn add(&mut self, b: &Basis<S>, h: usize) -> Result<Basis<S>> {
        let ev = extend(self.k, self.net, self.p, &b.eval, &b.indices, h, self.seed, &mut self.stats)?;
        let mut idx = b.indices.clone();
        idx.push(h);
        self.basis(ev, &idx)
    }

    /// Does half-space `h` cut the current witness placement?
    fn violates(&mut self, h: usize, b: &Basis<S>) -> bool {
        self.stats.violation_tests += 1;
        if b.eval.status == LpStatus::Infeasible {
            return false;
        }
        let hs = &self.p.halfspaces()[h];
        let tol = S::feas_tol() * S::one().max(hs.offset().abs());
        b.image.iter().any(|v| hs.excess(v) > tol)
    }

    /// Processes `ground` in random order starting from basis `c`; every
    /// violation restarts on the prefix seen so far from the improved basis.
    fn lptype(&mut self, ground: &[usize], c: Basis<S>, depth: usize) -> std::result::Result<Basis<S>, Failure> {
        if depth > self.depth_limit {
            return Err(Failure::Depth);
        }
        let fixed: HashSet<usize> = c.indices.iter().copied().collect();
        let mut perm: Vec<usize> = ground.iter().copied().filter(|i| !fixed.contains(i)).collect();
        perm.shuffle(&mut self.rng);
        let c_indices = c.indices.clone();
        let mut b = c;
        for j in 0..perm.len() {
            let h = perm[j];
            if self.violates(h, &b) {
                let nb = self.add(&b, h)?;
                let mut sub = c_indices.clone();
                sub.extend_from_slice(&perm[..=j]);
                b = self.lptype(&sub, nb, depth + 1)?;
            }
        }
        Ok(b)
    }
}

/// Randomized LP-type search over the half-spaces of `P` with the violation
/// test at the current witness placement. Families no larger than the
/// combinatorial dimension `t (d + 1)` go straight to [`beta_direct`].
pub fn beta_msw<S: Scalar>(k: &VPolytope<S>, net: &RotationNet<S>, p: &HPolytope<S>, seed: u64) -> Result<FitResult<S>> {
    check_instance(k, net, p)?;
    let delta = net.basis_bound();
    if p.len() <= delta {
        let mut r = beta_direct(k, net, p, seed)?;
        r.method = Method::Msw;
        return Ok(r);
    }
    let start = Instant::now();
    let mut search = Search {
        k,
        net,
        p,
        seed,
        rng: rng::stream(seed, u64::MAX),
        stats: Stats::default(),
        depth_limit: 4 * delta + 64,
    };
    let start_eval = evaluate(k, net, p, &[], seed, true, &mut search.stats)?;
    let empty = search.basis(start_eval, &[])?;
    let ground: Vec<usize> = (0..p.len()).collect();
    match search.lptype(&ground, empty, 0) {
        Ok(b) => {
            let (basis, _) = prune(k, net, p, &b.indices, b.eval.clone(), seed, &mut search.stats)?;
            Ok(finish(&b.eval, basis, Method::Msw, search.stats, start))
        }
        Err(Failure::Error(e)) => Err(e),
        Err(Failure::Depth) => {
            let mut r = beta_direct(k, net, p, seed)?;
            r.method = Method::Msw;
            r.stats.lp_calls += search.stats.lp_calls;
            r.stats.violation_tests += search.stats.violation_tests;
            r.stats.basis_updates += search.stats.basis_updates;
            r.stats.fallback = true;
            r.stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(r)
        }
    }
}
