//! Seidel's randomized incremental LP for a small number of variables.
//!
//! Maximizes a lexicographic list of objectives over `{x : A x <= b}`
//! intersected with the box `|x_i| <= bound`. The lexicographic list makes
//! the optimum a unique point, so the answer does not depend on the order in
//! which constraints are inserted.

use crate::Scalar;

pub(crate) struct Problem<'a, S> {
    pub k: usize,
    /// Row-major, stride `k`.
    pub rows: &'a [S],
    pub bounds: &'a [S],
    pub bound: S,
}

/// Returns the lexicographic optimum or `None` when infeasible. `order`
/// lists the constraint indices in insertion order.
pub(crate) fn solve<S: Scalar>(p: &Problem<'_, S>, objectives: &[Vec<S>], order: &[usize]) -> Option<Vec<S>> {
    let k = p.k;
    let mut rows = Vec::with_capacity(order.len() * k);
    let mut bounds = Vec::with_capacity(order.len());
    for &i in order {
        rows.extend_from_slice(&p.rows[i * k..(i + 1) * k]);
        bounds.push(p.bounds[i]);
    }
    solve_level(k, &rows, &bounds, objectives, p.bound)
}

fn box_optimum<S: Scalar>(k: usize, objectives: &[Vec<S>], bound: S) -> Vec<S> {
    let tol = S::pivot_tol();
    (0..k)
        .map(|i| {
            objectives
                .iter()
                .find(|o| o[i].abs() > tol)
                .map(|o| if o[i] > S::zero() { bound } else { -bound })
                .unwrap_or(-bound)
        })
        .collect()
}

/// A violated constraint becomes an equality: its largest-coefficient
/// variable is eliminated and the prefix is re-solved one dimension down.
fn solve_level<S: Scalar>(k: usize, rows: &[S], bounds: &[S], objectives: &[Vec<S>], bound: S) -> Option<Vec<S>> {
    if k == 1 {
        return solve_1d(rows, bounds, objectives, bound);
    }
    let m = bounds.len();
    let tol = S::pivot_tol();
    let mut x = box_optimum(k, objectives, bound);
    for i in 0..m {
        let row = &rows[i * k..(i + 1) * k];
        let b = bounds[i];
        let mut lhs = S::zero();
        let mut mag = S::one().max(b.abs());
        for (a, xv) in row.iter().zip(&x) {
            let t = *a * *xv;
            lhs += t;
            mag = mag.max(t.abs());
        }
        if lhs <= b + tol * mag {
            continue;
        }
        // pivot on the largest coefficient
        let (j, aj) = row
            .iter()
            .enumerate()
            .fold((0, S::zero()), |best, (idx, v)| if v.abs() > best.1.abs() { (idx, *v) } else { best });
        if aj.abs() <= tol {
            if b < -S::feas_tol() * mag {
                return None;
            }
            continue;
        }
        let km = k - 1;
        let project = |r: &[S], c: S, out_rows: &mut Vec<S>, out_bounds: &mut Vec<S>| {
            let f = r[j] / aj;
            for (idx, v) in r.iter().enumerate() {
                if idx != j {
                    out_rows.push(*v - f * row[idx]);
                }
            }
            out_bounds.push(c - f * b);
        };
        let mut sub_rows = Vec::with_capacity((i + 2) * km);
        let mut sub_bounds = Vec::with_capacity(i + 2);
        // the eliminated variable's box becomes two ordinary constraints
        let mut e = vec![S::zero(); k];
        e[j] = S::one();
        project(&e, bound, &mut sub_rows, &mut sub_bounds);
        e[j] = -S::one();
        project(&e, bound, &mut sub_rows, &mut sub_bounds);
        for q in 0..i {
            project(&rows[q * k..(q + 1) * k], bounds[q], &mut sub_rows, &mut sub_bounds);
        }
        let sub_obj: Vec<Vec<S>> = objectives
            .iter()
            .map(|o| {
                let f = o[j] / aj;
                o.iter().enumerate().filter(|(idx, _)| *idx != j).map(|(idx, v)| *v - f * row[idx]).collect()
            })
            .collect();
        let y = solve_level(km, &sub_rows, &sub_bounds, &sub_obj, bound)?;
        let mut rest = b;
        let mut yi = y.iter();
        let mut full = vec![S::zero(); k];
        for idx in 0..k {
            if idx != j {
                let v = *yi.next().expect("sub-solution length");
                full[idx] = v;
                rest -= row[idx] * v;
            }
        }
        full[j] = rest / aj;
        x = full;
    }
    Some(x)
}

fn solve_1d<S: Scalar>(rows: &[S], bounds: &[S], objectives: &[Vec<S>], bound: S) -> Option<Vec<S>> {
    let tol = S::pivot_tol();
    let mut lo = -bound;
    let mut hi = bound;
    for (a, b) in rows.iter().zip(bounds) {
        if a.abs() <= tol {
            if *b < -S::feas_tol() * S::one().max(b.abs()) {
                return None;
            }
        } else if *a > S::zero() {
            hi = hi.min(*b / *a);
        } else {
            lo = lo.max(*b / *a);
        }
    }
    if lo > hi {
        let scale = S::one().max(lo.abs()).max(hi.abs());
        if lo - hi > S::feas_tol() * scale {
            return None;
        }
        let mid = (lo + hi) / S::lit(2.0);
        return Some(vec![mid]);
    }
    let x = match objectives.iter().find(|o| o[0].abs() > tol) {
        Some(o) if o[0] > S::zero() => hi,
        _ => lo,
    };
    Some(vec![x])
}
