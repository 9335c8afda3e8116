//! JSON file formats.
//!
//! ```text
//! V-polytope   {"dim": d, "vertices": [[x1, ..., xd], ...]}
//! H-polytope   {"dim": d, "halfspaces": [{"normal": [u1, ..., ud], "offset": b}, ...]}
//! cap body     {"dim": 2, "arc_body": {"removed_center_angle": c, "removed_width": w}}
//! net          {"epsilon": e, "certificate": "...", "rotations": [[row-major d x d], ...]}
//! ```
//!
//! H-polytope normals are rescaled to unit length on load; zero normals are
//! rejected. Fit results and demo reports use their serde derives.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ArcBody, Body, HPolytope, HalfSpace, Point, VPolytope};
use crate::rotation_net::RotationNet;
use crate::Scalar;

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
struct RawHalfSpace<S> {
    normal: Vec<S>,
    offset: S,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
struct RawPolytope<S> {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<S>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    halfspaces: Option<Vec<RawHalfSpace<S>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arc_body: Option<ArcBody<S>>,
}

fn malformed(e: serde_json::Error) -> Error {
    Error::Malformed(e.to_string())
}

fn parse<T: DeserializeOwned>(json: &str) -> Result<T> {
    serde_json::from_str(json).map_err(malformed)
}

fn render<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(malformed)
}

fn points<S: Scalar>(rows: Vec<Vec<S>>) -> Vec<Point<S>> {
    rows.into_iter().map(Point).collect()
}

fn raw_vertices<S: Scalar>(k: &VPolytope<S>) -> RawPolytope<S> {
    RawPolytope {
        dim: k.dim(),
        vertices: Some(k.vertices().iter().map(|v| v.coords().to_vec()).collect()),
        halfspaces: None,
        arc_body: None,
    }
}

/// Parses a V-polytope; the vertex list must be nonempty and finite.
pub fn parse_vpolytope<S: Scalar>(json: &str) -> Result<VPolytope<S>> {
    let raw: RawPolytope<S> = parse(json)?;
    let vs = raw.vertices.ok_or_else(|| Error::Malformed("missing \"vertices\"".into()))?;
    VPolytope::new(raw.dim, points(vs))
}

/// Parses either a V-polytope or a cap body.
pub fn parse_body<S: Scalar>(json: &str) -> Result<Body<S>> {
    let raw: RawPolytope<S> = parse(json)?;
    match (raw.vertices, raw.arc_body) {
        (Some(vs), None) => Ok(Body::Polygon(VPolytope::new(raw.dim, points(vs))?)),
        (None, Some(a)) => {
            if raw.dim != 2 {
                return Err(Error::UnsupportedDimension { dim: raw.dim, reason: "arc bodies are planar" });
            }
            Ok(Body::Arc(ArcBody::new(a.removed_center_angle, a.removed_width)?))
        }
        (Some(_), Some(_)) => Err(Error::Malformed("give either \"vertices\" or \"arc_body\", not both".into())),
        (None, None) => Err(Error::Malformed("missing \"vertices\" or \"arc_body\"".into())),
    }
}

pub fn parse_hpolytope<S: Scalar>(json: &str) -> Result<HPolytope<S>> {
    let raw: RawPolytope<S> = parse(json)?;
    let hs = raw.halfspaces.ok_or_else(|| Error::Malformed("missing \"halfspaces\"".into()))?;
    let hs = hs
        .into_iter()
        .enumerate()
        .map(|(i, h)| {
            if h.normal.len() != raw.dim {
                return Err(Error::DimensionMismatch { expected: raw.dim, found: h.normal.len() });
            }
            HalfSpace::new(Point(h.normal), h.offset)
                .map_err(|_| Error::Malformed(format!("half-space {i} has a zero or non-finite normal")))
        })
        .collect::<Result<Vec<_>>>()?;
    HPolytope::new(raw.dim, hs)
}

pub fn vpolytope_to_json<S: Scalar>(k: &VPolytope<S>) -> Result<String> {
    render(&raw_vertices(k))
}

pub fn hpolytope_to_json<S: Scalar>(p: &HPolytope<S>) -> Result<String> {
    let hs = p
        .halfspaces()
        .iter()
        .map(|h| RawHalfSpace { normal: h.normal().coords().to_vec(), offset: h.offset() })
        .collect();
    render(&RawPolytope { dim: p.dim(), vertices: None, halfspaces: Some(hs), arc_body: None })
}

pub fn body_to_json<S: Scalar>(k: &Body<S>) -> Result<String> {
    match k {
        Body::Polygon(v) => vpolytope_to_json(v),
        Body::Arc(a) => render(&RawPolytope::<S> { dim: 2, vertices: None, halfspaces: None, arc_body: Some(*a) }),
    }
}

/// Parses a net and re-checks every rotation.
pub fn parse_net<S: Scalar>(json: &str) -> Result<RotationNet<S>> {
    let net: RotationNet<S> = parse(json)?;
    net.validate()?;
    Ok(net)
}

pub fn net_to_json<S: Scalar>(net: &RotationNet<S>) -> Result<String> {
    render(net)
}

/// Any serde type as JSON (fit results, demo reports).
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    render(value)
}

pub fn from_json<T: DeserializeOwned>(json: &str) -> Result<T> {
    parse(json)
}
