//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use hellyfit::fit_lp::LpInstance;
use hellyfit::geometry::{HPolytope, HalfSpace, Point, Rotation, VPolytope};
use hellyfit::rotation_net::{Certificate, RotationNet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `max x_last` over `rows x <= bounds` by enumerating every vertex; the
/// rows must describe a bounded region. `None` when infeasible.
pub fn lp_by_vertices(rows: &[Vec<f64>], bounds: &[f64]) -> Option<f64> {
    let k = rows[0].len();
    let mut best: Option<f64> = None;
    for sub in combos(rows.len(), k) {
        let a: Vec<Vec<f64>> = sub.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<f64> = sub.iter().map(|&i| bounds[i]).collect();
        let Some(x) = solve_dense(a, b) else { continue };
        let ok = rows
            .iter()
            .zip(bounds)
            .all(|(r, &bd)| r.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= bd + 1e-9 * bd.abs().max(1.0));
        if ok {
            best = Some(best.map_or(x[k - 1], |v: f64| v.max(x[k - 1])));
        }
    }
    best
}

/// Random LP in `k` variables: `m` random rows around a random point (some
/// instances infeasible) plus the box `|x_i| <= 10`.
pub fn random_lp(seed: u64, k: usize, m: usize) -> (LpInstance<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let mut r = rng(seed);
    let x0: Vec<f64> = (0..k).map(|_| r.random_range(-5.0..5.0)).collect();
    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for _ in 0..m {
        let row: Vec<f64> = (0..k).map(|_| r.random_range(-1.0..1.0)).collect();
        let slack = r.random_range(-0.4..1.0);
        bounds.push(row.iter().zip(&x0).map(|(a, b)| a * b).sum::<f64>() + slack);
        rows.push(row);
    }
    for i in 0..k {
        for s in [1.0, -1.0] {
            let mut row = vec![0.0; k];
            row[i] = s;
            rows.push(row);
            bounds.push(10.0);
        }
    }
    let mut lp = LpInstance::new(k);
    for (row, b) in rows.iter().zip(&bounds) {
        lp.push(row, *b).unwrap();
    }
    (lp, rows, bounds)
}

/// Smallest ball through some subset of at most `d + 1` points that holds
/// them all.
pub fn brute_miniball(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let d = points[0].len();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for size in 1..=(d + 1).min(points.len()) {
        for sub in combos(points.len(), size) {
            let p0 = &points[sub[0]];
            let diffs: Vec<Vec<f64>> =
                sub[1..].iter().map(|&i| points[i].iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
            let g: Vec<Vec<f64>> = diffs
                .iter()
                .map(|u| diffs.iter().map(|v| 2.0 * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()).collect())
                .collect();
            let rhs: Vec<f64> = diffs.iter().map(|u| u.iter().map(|a| a * a).sum()).collect();
            let lam = if diffs.is_empty() { Vec::new() } else {
                match solve_dense(g, rhs) {
                    Some(l) => l,
                    None => continue,
                }
            };
            let mut c = p0.clone();
            for (l, u) in lam.iter().zip(&diffs) {
                for (ci, ui) in c.iter_mut().zip(u) {
                    *ci += l * ui;
                }
            }
            let dist = |p: &Vec<f64>| p.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let r = dist(p0);
            if best.as_ref().is_some_and(|(_, br)| *br <= r) {
                continue;
            }
            if points.iter().all(|p| dist(p) <= r + 1e-10) {
                best = Some((c, r));
            }
        }
    }
    best.expect("some support set works")
}

/// Fraction of `samples` uniform circle points inside the retained arc of an
/// arc body and inside the cap around `cap_angle`.
pub fn mc_cap_measure(removed_center: f64, removed_width: f64, cap_angle: f64, slack: f64, samples: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let a: f64 = r.random_range(0.0..TAU);
        let off = (a - removed_center).rem_euclid(TAU);
        let off = off.min(TAU - off);
        let retained = off >= removed_width / 2.0;
        let in_cap = (a - cap_angle).cos() > -slack;
        if retained && in_cap {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

/// Kolmogorov-Smirnov statistic of `xs` against the uniform law on `[0, 1)`.
pub fn ks_uniform(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).max((i + 1) as f64 / n - x))
        .fold(0.0, f64::max)
}

/// Largest `alpha` with a translate of `alpha R_theta Q` inside `Q` for the
/// unit square `Q`.
pub fn square_in_square(theta: f64) -> f64 {
    let f = theta.rem_euclid(PI / 2.0);
    1.0 / (f.cos() + f.sin())
}

/// Largest rotation angle at which an equilateral triangle scaled by
/// `1 - eps` still fits in itself: an inscribed copy with a vertex on each
/// side at fraction `x` has side `sqrt(1 - 3x + 3x^2)` and, by the law of
/// sines, tilt `asin(x sin(60) / side)`.
pub fn triangle_angle(eps: f64) -> f64 {
    let s = 1.0 - eps;
    let x = (3.0 - (12.0 * s * s - 3.0).sqrt()) / 6.0;
    (x * (PI / 3.0).sin() / s).asin()
}

pub fn unit_square() -> VPolytope<f64> {
    VPolytope::new(2, vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), Point::xy(1.0, 1.0), Point::xy(0.0, 1.0)]).unwrap()
}

/// Convex polygon with `m` vertices at sorted random angles on a circle.
pub fn random_polygon(m: usize, seed: u64) -> VPolytope<f64> {
    let mut r = rng(seed);
    loop {
        let mut angles: Vec<f64> = (0..m).map(|_| r.random_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps_ok = angles.windows(2).all(|w| w[1] - w[0] > 0.15) && angles[0] + TAU - angles[m - 1] > 0.15;
        let max_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(angles[0] + TAU - angles[m - 1], f64::max);
        if gaps_ok && max_gap < PI * 0.9 {
            return VPolytope::body(2, angles.iter().map(|&a| Point::polar(a)).collect()).unwrap();
        }
    }
}

/// `n` half-spaces tangent to a random circle; the first three normals are
/// spread out so the intersection is bounded.
pub fn random_container(n: usize, seed: u64) -> HPolytope<f64> {
    let mut r = rng(seed);
    let radius = r.random_range(1.0..3.0);
    let c = Point::xy(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
    let phase = r.random_range(0.0..TAU);
    let hs = (0..n)
        .map(|j| {
            let a = if j < 3 { phase + TAU * j as f64 / 3.0 } else { r.random_range(0.0..TAU) };
            let u = Point::polar(a);
            let b = u.dot(&c) + radius;
            HalfSpace::new(u, b).unwrap()
        })
        .collect();
    HPolytope::new(2, hs).unwrap()
}

/// `n` random half-spaces tangent to the unit circle.
pub fn tangent_family(n: usize, seed: u64) -> HPolytope<f64> {
    let mut r = rng(seed);
    let hs = (0..n).map(|_| HalfSpace::tangent(&Point::polar(r.random_range(0.0..TAU))).unwrap()).collect();
    HPolytope::new(2, hs).unwrap()
}

/// `t` evenly spaced planar rotations with a random offset.
pub fn angle_net(t: usize, seed: u64) -> RotationNet<f64> {
    let off = rng(seed).random_range(0.0..TAU);
    let rots = (0..t).map(|j| Rotation::planar(off + TAU * j as f64 / t as f64)).collect();
    RotationNet::new(rots, 0.5, Certificate::VerifiedSampling).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
