//! Static SVG drawings of orbit frameworks and derived windows.

use std::fmt::Write as _;

use crate::derived::expand_window;
use crate::error::{Error, Result};
use crate::linalg::{rat_to_f64, Rat};
use crate::torus::OrbitFramework;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SvgOptions {
    /// Draw the cells `[lo, hi]` of the derived framework instead of the orbit framework.
    pub window: Option<(Vec<i64>, Vec<i64>)>,
    /// A velocity vector (`d` entries per vertex) drawn as arrows.
    pub flex: Option<Vec<Rat>>,
    /// Permit drawing `d > 2` frameworks by their first two coordinates.
    pub project: bool,
}

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 24.0;
/// Longest arrow as a fraction of the cell size.
const ARROW_FRACTION: f64 = 0.1;

type Point = (f64, f64);

fn project(v: &[Rat]) -> Point {
    let x = v.first().map(rat_to_f64).unwrap_or(0.0);
    let y = v.get(1).map(rat_to_f64).unwrap_or(0.0);
    (x, y)
}

struct Scene {
    cell: Vec<Point>,
    bars: Vec<(Point, Point, bool)>,
    joints: Vec<Point>,
    arrows: Vec<(Point, Point)>,
}

pub fn render_svg(f: &OrbitFramework, options: &SvgOptions) -> Result<String> {
    let d = f.dim();
    if d > 2 && !options.project {
        return Err(Error::Domain(format!(
            "cannot draw a {d}-dimensional framework without projecting to the first two coordinates"
        )));
    }
    let lattice = f.torus().lattice();
    let t1 = project(lattice.row(0));
    let t2 = if d >= 2 { project(lattice.row(1)) } else { (0.0, 0.0) };
    let mut cell = vec![(0.0, 0.0), t1];
    if d >= 2 {
        cell.push((t1.0 + t2.0, t1.1 + t2.1));
        cell.push(t2);
    }
    let cell_size = [t1, t2].iter().map(|p| p.0.hypot(p.1)).fold(0.0, f64::max);

    let mut scene = Scene {
        cell,
        bars: Vec::new(),
        joints: Vec::new(),
        arrows: Vec::new(),
    };
    // Velocities per drawn joint, as orbit vertex ids.
    let mut joint_vertices = Vec::new();
    match &options.window {
        Some((lo, hi)) => {
            let w = expand_window(f, lo, hi)?;
            for v in &w.vertices {
                scene.joints.push(project(&v.position));
                joint_vertices.push(v.vertex);
            }
            for e in &w.edges {
                let gained = !f.graph().edges()[e.edge].gain.is_zero();
                scene.bars.push((scene.joints[e.from], scene.joints[e.to], gained));
            }
        }
        None => {
            for v in 0..f.graph().vertex_count() {
                scene.joints.push(project(f.position(v)));
                joint_vertices.push(v);
            }
            for e in f.graph().edges() {
                let far: Vec<Rat> = f
                    .position(e.head)
                    .iter()
                    .zip(f.torus().translate(&e.gain))
                    .map(|(p, s)| p + s)
                    .collect();
                scene.bars.push((scene.joints[e.tail], project(&far), !e.gain.is_zero()));
            }
        }
    }
    if let Some(u) = &options.flex {
        if u.len() != d * f.graph().vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: d * f.graph().vertex_count(),
                found: u.len(),
            });
        }
        let velocity = |v: usize| project(&u[v * d..(v + 1) * d]);
        let longest = (0..f.graph().vertex_count())
            .map(|v| {
                let (x, y) = velocity(v);
                x.hypot(y)
            })
            .fold(0.0, f64::max);
        let scale = if longest > 0.0 { ARROW_FRACTION * cell_size / longest } else { 0.0 };
        for (&(x, y), &v) in scene.joints.iter().zip(&joint_vertices) {
            let (vx, vy) = velocity(v);
            scene.arrows.push(((x, y), (x + scale * vx, y + scale * vy)));
        }
    }
    Ok(draw(&scene))
}

fn draw(scene: &Scene) -> String {
    let all = scene
        .cell
        .iter()
        .chain(&scene.joints)
        .chain(scene.bars.iter().flat_map(|(a, b, _)| [a, b]))
        .chain(scene.arrows.iter().flat_map(|(a, b)| [a, b]));
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let s = (CANVAS - 2.0 * MARGIN) / span;
    // SVG's y axis points down.
    let map = |(x, y): Point| (MARGIN + (x - x0) * s, MARGIN + (y1 - y) * s);
    let width = 2.0 * MARGIN + (x1 - x0) * s;
    let height = 2.0 * MARGIN + (y1 - y0) * s;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    out.push_str(concat!(
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">",
        "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>\n",
        "<style>.cell{fill:none;stroke:#3b83bd;stroke-width:2}.bar{stroke:#222;stroke-width:1.5}",
        ".gained{stroke-dasharray:6 3}.joint{fill:#f4d03f;stroke:#222}.arrow{stroke:#c0392b;stroke-width:1.5}</style>\n"
    ));
    let points = scene
        .cell
        .iter()
        .map(|&p| {
            let (x, y) = map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(out, r#"<polygon class="cell" points="{points}"/>"#);
    for &(a, b, gained) in &scene.bars {
        let ((ax, ay), (bx, by)) = (map(a), map(b));
        let class = if gained { "bar gained" } else { "bar" };
        let _ = writeln!(out, r#"<line class="{class}" x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}"/>"#);
    }
    for &(a, b) in &scene.arrows {
        let ((ax, ay), (bx, by)) = (map(a), map(b));
        let _ = writeln!(
            out,
            r#"<line class="arrow" x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" marker-end="url(#head)"/>"#
        );
    }
    for &p in &scene.joints {
        let (x, y) = map(p);
        let _ = writeln!(out, r#"<circle class="joint" cx="{x:.2}" cy="{y:.2}" r="4"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GainGraph;
    use crate::rigidity::flex_basis;
    use crate::torus::Torus;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!("class=\"{class}")).count()
    }

    #[test]
    fn empty_graph_draws_cell_only() {
        let g = GainGraph::from_triples(2, 0, &[]).unwrap();
        let f = OrbitFramework::new(g, Torus::unit(2), vec![]).unwrap();
        let svg = render_svg(&f, &SvgOptions::default()).unwrap();
        assert_eq!(count(&svg, "cell"), 1);
        assert_eq!(count(&svg, "joint") + count(&svg, "bar") + count(&svg, "arrow"), 0);
    }

    #[test]
    fn flex_overlay_counts() {
        let g = GainGraph::from_triples(
            2,
            4,
            &[(0, 1, &[0, 0]), (1, 2, &[0, 0]), (0, 3, &[0, 0]), (2, 0, &[1, 0]), (0, 3, &[0, 1])],
        )
        .unwrap();
        let p = vec![
            vec![rat(1, 7), rat(2, 9)],
            vec![rat(3, 5), rat(1, 8)],
            vec![rat(5, 6), rat(4, 7)],
            vec![rat(2, 9), rat(3, 4)],
        ];
        let f = OrbitFramework::new(g, Torus::unit(2), p).unwrap();
        let u = flex_basis(&f).unwrap().vectors.remove(0);
        let svg = render_svg(&f, &SvgOptions { flex: Some(u), ..Default::default() }).unwrap();
        assert_eq!((count(&svg, "joint"), count(&svg, "bar"), count(&svg, "arrow")), (4, 5, 4));
        assert_eq!(svg, render_svg(&f, &SvgOptions { flex: Some(flex_basis(&f).unwrap().vectors.remove(0)), ..Default::default() }).unwrap());
    }

    #[test]
    fn window_and_projection() {
        let g = GainGraph::from_triples(2, 2, &[(0, 1, &[0, 0]), (0, 1, &[1, 0])]).unwrap();
        let f = OrbitFramework::new(g, Torus::unit(2), vec![vec![rat(1, 2), rat(1, 4)], vec![rat(1, 1), rat(3, 4)]]).unwrap();
        let opts = SvgOptions {
            window: Some((vec![-1, -1], vec![1, 1])),
            ..Default::default()
        };
        let svg = render_svg(&f, &opts).unwrap();
        assert_eq!((count(&svg, "joint"), count(&svg, "bar")), (18, 15));

        let g3 = GainGraph::from_triples(3, 1, &[]).unwrap();
        let f3 = OrbitFramework::new(g3, Torus::unit(3), vec![vec![rat(0, 1); 3]]).unwrap();
        assert!(matches!(render_svg(&f3, &SvgOptions::default()), Err(Error::Domain(_))));
        assert!(render_svg(&f3, &SvgOptions { project: true, ..Default::default() }).is_ok());
    }
}
