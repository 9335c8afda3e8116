use super::{seidel_lp, solve_witness, LpInstance, LpResult, LpStatus};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{HPolytope, Placement, Point, Rotation, VPolytope};
use crate::Scalar;

/// Largest translate of `alpha * A * K` inside `P` for one fixed rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationFit<S> {
    pub status: LpStatus,
    /// `max alpha`; `+inf` when unbounded and `0` when `P` is empty.
    pub value: S,
    pub placement: Placement<S>,
    /// Indices (into `P`) of at most `d + 1` half-spaces pinning the optimum.
    pub tight: Vec<usize>,
}

/// LP in `(a, alpha)` with one row `<u_k, a> + alpha max_j <u_k, A v_j> <= b_k`
/// per half-space and a final row `alpha >= 0`, which makes the maximizing
/// vertex the only binding one. Returns the instance and each row's
/// half-space index ([`NO_OWNER`] for the sign row).
pub(crate) fn fixed_rotation_instance<S: Scalar>(
    k: &VPolytope<S>,
    rot: &Rotation<S>,
    p: &HPolytope<S>,
    indices: &[usize],
) -> (LpInstance<S>, Vec<usize>) {
    let d = k.dim();
    let images: Vec<Point<S>> = k.vertices().iter().map(|v| rot.apply(v)).collect();
    let mut lp = LpInstance::with_capacity(d + 1, indices.len() + 1);
    let mut owners = Vec::with_capacity(indices.len() + 1);
    let mut row = vec![S::zero(); d + 1];
    for &hi in indices {
        let h = &p.halfspaces()[hi];
        row[..d].copy_from_slice(h.normal().coords());
        row[d] = images.iter().map(|w| h.normal().dot(w)).fold(S::neg_infinity(), S::max);
        lp.push(&row, h.offset()).expect("row length is d + 1");
        owners.push(hi);
    }
    row.fill(S::zero());
    row[d] = -S::one();
    lp.push(&row, S::zero()).expect("row length is d + 1");
    owners.push(NO_OWNER);
    (lp, owners)
}

pub(crate) const NO_OWNER: usize = usize::MAX;

fn to_fit<S: Scalar>(d: usize, rot: &Rotation<S>, res: LpResult<S>, owners: &[usize]) -> RotationFit<S> {
    let placement = if res.witness.is_empty() {
        Placement { translation: Point::origin(d), scale: S::zero(), rotation: rot.clone() }
    } else {
        Placement {
            translation: Point(res.witness[..d].to_vec()),
            scale: res.witness[d],
            rotation: rot.clone(),
        }
    };
    let mut tight: Vec<usize> = res.tight_set.iter().map(|&r| owners[r]).filter(|&o| o != NO_OWNER).collect();
    tight.sort_unstable();
    tight.dedup();
    RotationFit { status: res.status, value: res.value, placement, tight }
}

/// Fixed-rotation fit restricted to the half-spaces in `indices`.
pub(crate) fn rotation_fit_on<S: Scalar>(
    k: &VPolytope<S>,
    rot: &Rotation<S>,
    p: &HPolytope<S>,
    indices: &[usize],
    seed: u64,
    with_tight: bool,
) -> Result<RotationFit<S>> {
    let (lp, owners) = fixed_rotation_instance(k, rot, p, indices);
    let res = if with_tight { seidel_lp(&lp, seed)? } else { solve_witness(&lp, seed)? };
    Ok(to_fit(k.dim(), rot, res, &owners))
}

/// `beta_i(K, P) = max { alpha : a + alpha A K ⊆ P for some a }`.
pub fn beta_fixed_rotation<S: Scalar>(
    k: &VPolytope<S>,
    rot: &Rotation<S>,
    p: &HPolytope<S>,
    seed: u64,
) -> Result<RotationFit<S>> {
    check_dim(k.dim(), p.dim())?;
    check_dim(k.dim(), rot.dim())?;
    let all: Vec<usize> = (0..p.len()).collect();
    rotation_fit_on(k, rot, p, &all, seed, true)
}

/// Decision version: does some translate of `scale * A * K` fit in `P`?
pub fn fit_check<S: Scalar>(
    k: &VPolytope<S>,
    rot: &Rotation<S>,
    scale: S,
    p: &HPolytope<S>,
    seed: u64,
) -> Result<bool> {
    if !(scale >= S::zero()) {
        return Err(Error::InvalidParameter("scale must be nonnegative".into()));
    }
    let fit = beta_fixed_rotation(k, rot, p, seed)?;
    Ok(match fit.status {
        LpStatus::Infeasible => false,
        LpStatus::Unbounded => true,
        LpStatus::Optimal => fit.value >= scale - S::feas_tol(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inradius<S> {
    pub status: LpStatus,
    pub radius: S,
    pub center: Point<S>,
}

/// Chebyshev ball: `max r` subject to `<u_k, c> + r <= b_k`.
pub fn chebyshev_inradius<S: Scalar>(p: &HPolytope<S>) -> Result<Inradius<S>> {
    let d = p.dim();
    let mut lp = LpInstance::with_capacity(d + 1, p.len());
    let mut row = vec![S::one(); d + 1];
    for h in p.halfspaces() {
        row[..d].copy_from_slice(h.normal().coords());
        lp.push(&row, h.offset())?;
    }
    let res = solve_witness(&lp, 0)?;
    let center = if res.witness.is_empty() { Point::origin(d) } else { Point(res.witness[..d].to_vec()) };
    Ok(match res.status {
        LpStatus::Optimal if res.value < -S::feas_tol() => {
            Inradius { status: LpStatus::Infeasible, radius: S::zero(), center }
        }
        LpStatus::Optimal => Inradius { status: LpStatus::Optimal, radius: res.value.max(S::zero()), center },
        status => Inradius { status, radius: res.value, center },
    })
}
