use std::fmt::Write;

use hellyfit::geometry::{convex_hull_2d, HPolytope, Point};
use hellyfit::lab::DemoReport;

type Pt = (f64, f64);

#[derive(Clone, Copy)]
struct Window {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Window {
    fn around(points: &[Pt], pad: f64) -> Window {
        let mut w = Window { x0: f64::INFINITY, y0: f64::INFINITY, x1: f64::NEG_INFINITY, y1: f64::NEG_INFINITY };
        for &(x, y) in points {
            w.x0 = w.x0.min(x);
            w.y0 = w.y0.min(y);
            w.x1 = w.x1.max(x);
            w.y1 = w.y1.max(y);
        }
        if !w.x0.is_finite() {
            w = Window { x0: -1.0, y0: -1.0, x1: 1.0, y1: 1.0 };
        }
        let span = (w.x1 - w.x0).max(w.y1 - w.y0).max(1e-9);
        let m = span * pad;
        Window { x0: w.x0 - m, y0: w.y0 - m, x1: w.x1 + m, y1: w.y1 + m }
    }

    fn corners(&self) -> Vec<Pt> {
        vec![(self.x0, self.y0), (self.x1, self.y0), (self.x1, self.y1), (self.x0, self.y1)]
    }

    fn diag(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }
}

/// Sutherland-Hodgman clip of a convex polygon by `<u, x> <= b`.
fn clip(poly: &[Pt], u: Pt, b: f64) -> Vec<Pt> {
    let f = |p: Pt| u.0 * p.0 + u.1 * p.1 - b;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0) != (fq < 0.0) && fp != fq {
            let t = fp / (fp - fq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

fn container(p: &HPolytope<f64>, w: &Window) -> Vec<Pt> {
    p.halfspaces().iter().fold(w.corners(), |poly, h| {
        let n = h.normal().coords();
        clip(&poly, (n[0], n[1]), h.offset())
    })
}

fn boundary_line(u: &[f64], b: f64, w: &Window) -> (Pt, Pt) {
    let foot = (u[0] * b, u[1] * b);
    let l = w.diag() + foot.0.hypot(foot.1);
    ((foot.0 - u[1] * l, foot.1 + u[0] * l), (foot.0 + u[1] * l, foot.1 - u[0] * l))
}

fn points_attr(poly: &[Pt]) -> String {
    poly.iter().map(|(x, y)| format!("{x:.6},{y:.6}")).collect::<Vec<_>>().join(" ")
}

fn open(w: &Window) -> String {
    let (width, height) = (w.x1 - w.x0, w.y1 - w.y0);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="{:.0}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        600.0 * height / width,
        w.x0,
        -w.y1,
        width,
        height
    )
    .unwrap();
    s.push_str(
        "<style>*{vector-effect:non-scaling-stroke;stroke-width:1.5}\
         .container{fill:#eef3fb;stroke:#5577aa}.basis{stroke:#d9480f;stroke-width:2.5}\
         .placed{fill:#2b8a3e;fill-opacity:0.35;stroke:#2b8a3e}.body{fill:none;stroke:#495057;stroke-dasharray:4 3}\
         .tangent{stroke:#adb5bd}.subset{stroke:#d9480f}.circle{fill:none;stroke:#868e96}</style>\n",
    );
    s.push_str("<g transform=\"scale(1,-1)\">\n");
    s
}

fn close(mut s: String) -> String {
    s.push_str("</g>\n</svg>\n");
    s
}

fn line(s: &mut String, class: &str, (a, b): (Pt, Pt)) {
    writeln!(s, r#"<line class="{class}" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#, a.0, a.1, b.0, b.1).unwrap();
}

fn polygon(s: &mut String, class: &str, poly: &[Pt]) {
    writeln!(s, r#"<polygon class="{class}" points="{}"/>"#, points_attr(poly)).unwrap();
}

fn hull(points: &[Point<f64>]) -> Vec<Pt> {
    convex_hull_2d(points).iter().map(|p| (p.0[0], p.0[1])).collect()
}

/// `P` clipped to a window around the placed copy, the copy itself, and the
/// boundary lines of the basis half-spaces.
pub fn fit_svg(p: &HPolytope<f64>, placed: &[Point<f64>], basis: &[usize]) -> String {
    let copy = hull(placed);
    let w = Window::around(&copy, 0.35);
    let mut s = open(&w);
    polygon(&mut s, "container", &container(p, &w));
    for &i in basis {
        let h = &p.halfspaces()[i];
        line(&mut s, "basis", boundary_line(h.normal().coords(), h.offset(), &w));
    }
    polygon(&mut s, "placed", &copy);
    close(s)
}

/// Unit circle, cap body, tangent lines (the tightest subset highlighted) and
/// that subset's inflated copy.
pub fn demo_svg(report: &DemoReport) -> String {
    let w = Window { x0: -2.2, y0: -2.2, x1: 2.2, y1: 2.2 };
    let mut s = open(&w);
    writeln!(s, r#"<circle class="circle" cx="0" cy="0" r="1"/>"#).unwrap();
    let chosen: &[usize] = report.example.as_ref().map(|(sub, _)| sub.as_slice()).unwrap_or(&[]);
    if let Some(fam) = &report.family {
        for (i, h) in fam.halfspaces().iter().enumerate() {
            let class = if chosen.contains(&i) { "subset" } else { "tangent" };
            line(&mut s, class, boundary_line(h.normal().coords(), h.offset(), &w));
        }
    }
    if let Some(body) = &report.body {
        polygon(&mut s, "body", &hull(body.polygon.vertices()));
        if let Some((_, pl)) = &report.example {
            polygon(&mut s, "placed", &hull(&pl.realize(&body.polygon)));
        }
    }
    close(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_a_square() {
        let sq = vec![(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)];
        let c = clip(&sq, (1.0, 0.0), 1.0);
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|p| p.0 <= 1.0 + 1e-12));
    }

    #[test]
    fn one_placed_polygon() {
        let p = HPolytope::aabb(&[0.0, 0.0], &[2.0, 2.0]).unwrap();
        let pts = vec![Point::xy(0.0, 0.0), Point::xy(2.0, 0.0), Point::xy(2.0, 2.0), Point::xy(0.0, 2.0)];
        let s = fit_svg(&p, &pts, &[0, 1]);
        assert_eq!(s.matches("class=\"placed\"").count(), 1);
        assert_eq!(s.matches("class=\"basis\"").count(), 2);
    }
}
