//! Small dense helpers for the handful of d x d systems the crate solves.

use crate::Scalar;

/// Solves `m x = rhs` for a row-major `n x n` matrix with partial pivoting.
/// Returns `None` when a pivot falls below `tol` relative to the largest entry.
pub(crate) fn solve<S: Scalar>(n: usize, m: &[S], rhs: &[S], tol: S) -> Option<Vec<S>> {
    debug_assert_eq!(m.len(), n * n);
    debug_assert_eq!(rhs.len(), n);
    let mut a: Vec<S> = m.to_vec();
    let mut b: Vec<S> = rhs.to_vec();
    let scale = a.iter().fold(S::zero(), |acc, v| acc.max(v.abs()));
    if scale == S::zero() {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    for col in 0..n {
        let (piv, piv_abs) = (col..n)
            .map(|r| (r, a[r * n + col].abs()))
            .fold((col, -S::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs <= tol * scale {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        let p = a[col * n + col];
        for r in (col + 1)..n {
            let f = a[r * n + col] / p;
            if f == S::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= f * v;
            }
            let bv = b[col];
            b[r] -= f * bv;
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for k in (r + 1)..n {
            acc -= a[r * n + k] * x[k];
        }
        x[r] = acc / a[r * n + r];
    }
    Some(x)
}

/// Determinant by Gaussian elimination.
pub(crate) fn det<S: Scalar>(n: usize, m: &[S]) -> S {
    let mut a: Vec<S> = m.to_vec();
    let mut det = S::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| {
                a[x * n + col]
                    .abs()
                    .partial_cmp(&a[y * n + col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if a[piv * n + col] == S::zero() {
            return S::zero();
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in (col + 1)..n {
            let f = a[r * n + col] / p;
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= f * v;
            }
        }
    }
    det
}

/// Numerical rank of a set of row vectors (each of length `cols`).
pub(crate) fn rank<S: Scalar>(rows: &[Vec<S>], cols: usize, tol: S) -> usize {
    let mut a: Vec<Vec<S>> = rows.to_vec();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(S::zero(), |acc, v| acc.max(v.abs()));
    if scale == S::zero() {
        return 0;
    }
    let mut rank = 0;
    for col in 0..cols {
        let piv = (rank..a.len()).max_by(|&x, &y| {
            a[x][col]
                .abs()
                .partial_cmp(&a[y][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(piv) = piv else { break };
        if a[piv][col].abs() <= tol * scale {
            continue;
        }
        a.swap(rank, piv);
        for r in (rank + 1)..a.len() {
            let f = a[r][col] / a[rank][col];
            for k in col..cols {
                let v = a[rank][k];
                a[r][k] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let m = [2.0f64, 1.0, 1.0, 3.0];
        let x = solve(2, &m, &[3.0, 5.0], 1e-14).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14);
        assert!((x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn singular_is_none() {
        let m = [1.0f64, 2.0, 2.0, 4.0];
        assert!(solve(2, &m, &[1.0, 2.0], 1e-12).is_none());
        assert_eq!(det(2, &m), 0.0);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vec![1.0, 0.0, 1.0], vec![2.0, 0.0, 2.0], vec![0.0, 1.0, 0.0]];
        assert_eq!(rank(&rows, 3, 1e-12), 2);
    }
}
