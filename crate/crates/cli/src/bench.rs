use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use hellyfit::geometry::VPolytope;
use hellyfit::lab::TangentFamily;
use hellyfit::rotation_net::build_net_2d;
use hellyfit::solver::{solve, Method};

#[derive(Debug, Serialize)]
pub struct Row {
    pub n: usize,
    pub method: Method,
    pub mean_time_ms: f64,
    pub lp_calls: f64,
    pub violation_tests: f64,
}

/// Seed of repetition `rep`; independent of `n` so every size sees the same
/// sequence of generator streams.
fn rep_seed(seed: u64, rep: usize) -> u64 {
    seed ^ (rep as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Equilateral triangle against `n` random tangent half-spaces of the unit
/// disk, `reps` instances per size and method.
pub fn run(sizes: &[usize], reps: usize, methods: &[Method], epsilon: f64, seed: u64) -> Result<Vec<Row>> {
    let k = VPolytope::regular_polygon(3, 1.0, 0.0)?;
    let net = build_net_2d(&k, epsilon)?;
    let mut rows = Vec::new();
    for &n in sizes {
        for &method in methods {
            let (mut ms, mut lp, mut vt) = (0.0, 0.0, 0.0);
            for rep in 0..reps {
                let s = rep_seed(seed, rep);
                let p = TangentFamily::random(n, s)?.to_hpolytope()?;
                let r = solve(method, &k, &net, &p, s)?;
                ms += r.stats.wall_time_ms;
                lp += r.stats.lp_calls as f64;
                vt += r.stats.violation_tests as f64;
            }
            let m = reps.max(1) as f64;
            rows.push(Row { n, method, mean_time_ms: ms / m, lp_calls: lp / m, violation_tests: vt / m });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
