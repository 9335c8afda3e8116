use super::{HalfSpace, Point, VPolytope};
use crate::error::{Error, Result};
use crate::linalg;
use crate::Scalar;

/// Counter-clockwise convex hull of planar points (Andrew's monotone chain),
/// collinear points dropped.
pub fn convex_hull_2d<S: Scalar>(points: &[Point<S>]) -> Vec<Point<S>> {
    let mut pts: Vec<&Point<S>> = points.iter().collect();
    pts.sort_by(|a, b| {
        a.0[0]
            .partial_cmp(&b.0[0])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0[1].partial_cmp(&b.0[1]).unwrap_or(std::cmp::Ordering::Equal))
    });
    pts.dedup_by(|a, b| a.0 == b.0);
    if pts.len() < 3 {
        return pts.into_iter().cloned().collect();
    }
    let scale = pts.iter().fold(S::zero(), |acc, p| acc.max(p.0[0].abs()).max(p.0[1].abs()));
    let eps = S::lit(1e-14) * scale.max(S::one()) * scale.max(S::one());
    let cross = |o: &Point<S>, a: &Point<S>, b: &Point<S>| {
        (a.0[0] - o.0[0]) * (b.0[1] - o.0[1]) - (a.0[1] - o.0[1]) * (b.0[0] - o.0[0])
    };
    let mut hull: Vec<&Point<S>> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Point<S>>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull.into_iter().cloned().collect()
}

/// Facet half-spaces of `conv(vertices)`.
///
/// The plane walks the hull boundary; higher dimensions test every
/// hyperplane through `d` vertices and keep those supporting all others.
pub fn facets_from_vertices<S: Scalar>(k: &VPolytope<S>) -> Result<Vec<HalfSpace<S>>> {
    k.check_full_dimensional()?;
    let d = k.dim();
    if d == 2 {
        let hull = convex_hull_2d(k.vertices());
        let n = hull.len();
        return (0..n)
            .map(|i| {
                let a = &hull[i];
                let b = &hull[(i + 1) % n];
                let e = b.sub(a);
                let normal = Point::xy(e.0[1], -e.0[0]);
                let off = normal.dot(a);
                HalfSpace::new(normal, off)
            })
            .collect();
    }
    let vs = k.vertices();
    let scale = vs.iter().map(|v| v.norm()).fold(S::zero(), S::max).max(S::one());
    let tol = S::lit(1e-9) * scale;
    let mut out: Vec<HalfSpace<S>> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        if let Some(h) = hyperplane_through(vs, &idx) {
            let mut above = false;
            let mut below = false;
            for v in vs {
                let e = h.excess(v);
                above |= e > tol;
                below |= e < -tol;
            }
            let cand = match (above, below) {
                (false, true) => Some(h),
                (true, false) => Some(HalfSpace { normal: h.normal.scale(-S::one()), offset: -h.offset }),
                _ => None,
            };
            if let Some(c) = cand {
                let dup = out.iter().any(|o| {
                    o.normal.sub(&c.normal).norm() < S::lit(1e-9) && (o.offset - c.offset).abs() < tol
                });
                if !dup {
                    out.push(c);
                }
            }
        }
        if !next_combination(&mut idx, vs.len()) {
            break;
        }
    }
    if out.len() < d + 1 {
        return Err(Error::Degenerate("could not recover facets".into()));
    }
    Ok(out)
}

fn hyperplane_through<S: Scalar>(vs: &[Point<S>], idx: &[usize]) -> Option<HalfSpace<S>> {
    let d = vs[0].dim();
    let base = &vs[idx[0]];
    let rows: Vec<Vec<S>> = idx[1..].iter().map(|&i| vs[i].sub(base).0).collect();
    // normal spans the null space of `rows`; find it by solving with one coordinate pinned
    for pin in 0..d {
        let mut m = Vec::with_capacity(d * d);
        let mut rhs = Vec::with_capacity(d);
        for r in &rows {
            m.extend_from_slice(r);
            rhs.push(S::zero());
        }
        let mut e = vec![S::zero(); d];
        e[pin] = S::one();
        m.extend_from_slice(&e);
        rhs.push(S::one());
        if let Some(n) = linalg::solve(d, &m, &rhs, S::lit(1e-12)) {
            let normal = Point(n);
            let off = normal.dot(base);
            return HalfSpace::new(normal, off).ok();
        }
    }
    None
}

pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in (i + 1)..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
