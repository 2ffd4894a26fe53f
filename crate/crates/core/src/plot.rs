//! SVG and CSV renderings of two-dimensional regions and ray samples.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polytope::{Point, RegionDescription};
use crate::rational::{self, Rational};
use crate::reconstruct::CloudPoint;

/// One boundary curve in a plot.
#[derive(Debug, Clone)]
pub struct Layer {
    pub label: String,
    /// Outer boundary from the `r1` axis to the `r2` axis.
    pub boundary: Vec<Point>,
    pub style: Style,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    RoutingExact,
    RoutingApprox,
    SemiExact,
    SemiApprox,
}

impl Style {
    fn stroke(self) -> (&'static str, &'static str) {
        match self {
            Style::RoutingExact => ("#1f4e9c", "none"),
            Style::RoutingApprox => ("#1f4e9c", "6 3"),
            Style::SemiExact => ("#b3261e", "none"),
            Style::SemiApprox => ("#b3261e", "6 3"),
        }
    }
}

/// The region's vertices off the origin and axes-only corners, in
/// counter-clockwise order starting on the `r1` axis.
pub fn outer_boundary(region: &RegionDescription) -> Result<Vec<Point>> {
    if region.dimension != 2 {
        return Err(Error::Unsupported {
            needed: 2,
            got: region.dimension,
        });
    }
    let vs = &region.vertices;
    let start = vs
        .iter()
        .enumerate()
        .filter(|(_, v)| v.0[1].is_zero())
        .max_by(|a, b| a.1 .0[0].cmp(&b.1 .0[0]))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..vs.len() {
        let v = &vs[(start + k) % vs.len()];
        if k > 0 && v.0.iter().all(Zero::is_zero) {
            break;
        }
        out.push(v.clone());
    }
    Ok(out)
}

pub fn cloud_boundary(cloud: &[CloudPoint]) -> Vec<Point> {
    cloud.iter().map(|c| c.point.clone()).collect()
}

fn num(x: &Rational) -> String {
    let v = rational::to_f64(x);
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Polylines in rate coordinates with `r2` flipped upward. The view box is
/// the rectangle `[0, γ1] × [0, γ2]` plus a small margin.
pub fn render_svg(layers: &[Layer], gamma: &[Rational]) -> Result<String> {
    if gamma.len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: gamma.len(),
        });
    }
    if gamma.iter().any(|g| !g.is_positive()) {
        return Err(Error::Empty("plot bounds must be positive"));
    }
    let (gx, gy) = (&gamma[0], &gamma[1]);
    let margin = rational::to_f64(gx.max(gy)) * 0.05;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="480" height="480">"#,
        num(&rational::approx_f64(-margin, 1_000_000)),
        num(&rational::approx_f64(-margin, 1_000_000)),
        num(&rational::approx_f64(rational::to_f64(gx) + 2.0 * margin, 1_000_000)),
        num(&rational::approx_f64(rational::to_f64(gy) + 2.0 * margin, 1_000_000)),
    )
    .expect("string write");
    let flip = |p: &Point| format!("{},{}", num(&p.0[0]), num(&(gy - &p.0[1])));
    writeln!(
        s,
        r##"  <polyline points="0,{} 0,{} {},{}" fill="none" stroke="#888" stroke-width="1" vector-effect="non-scaling-stroke"/>"##,
        num(&Rational::zero()),
        num(gy),
        num(gx),
        num(gy)
    )
    .expect("string write");
    for l in layers {
        let (color, dash) = l.style.stroke();
        let pts: Vec<String> = l.boundary.iter().map(flip).collect();
        writeln!(
            s,
            r#"  <polyline class="{}" points="{}" fill="none" stroke="{color}" stroke-dasharray="{dash}" stroke-width="2" vector-effect="non-scaling-stroke"><title>{}</title></polyline>"#,
            l.label,
            pts.join(" "),
            l.label
        )
        .expect("string write");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Rows `qx,qy,lambda,rx,ry` with exact rationals, under a header line.
pub fn render_csv(rows: &[(String, &[CloudPoint])]) -> String {
    let labelled = rows.len() > 1;
    let mut s = String::new();
    if labelled {
        s.push_str("layer,");
    }
    s.push_str("qx,qy,lambda,rx,ry\n");
    for (label, cloud) in rows {
        for c in cloud.iter() {
            if labelled {
                s.push_str(label);
                s.push(',');
            }
            let f = |x: &Rational| rational::fmt(x);
            writeln!(
                s,
                "{},{},{},{},{}",
                f(&c.direction[0]),
                f(&c.direction[1]),
                f(&c.answer.lambda),
                f(&c.point.0[0]),
                f(&c.point.0[1])
            )
            .expect("string write");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::RayAnswer;
    use crate::polytope::down_closure;
    use crate::rational::{int, ratio};

    fn pt(x: i64, y: i64) -> Point {
        Point(vec![int(x), int(y)])
    }

    #[test]
    fn boundary_of_triangle_and_square() {
        let tri = down_closure(2, &[pt(1, 0), pt(0, 1)]).unwrap();
        assert_eq!(outer_boundary(&tri).unwrap(), vec![pt(1, 0), pt(0, 1)]);
        let sq = down_closure(2, &[pt(1, 1)]).unwrap();
        assert_eq!(outer_boundary(&sq).unwrap(), vec![pt(1, 0), pt(1, 1), pt(0, 1)]);
    }

    #[test]
    fn svg_has_one_polyline_per_layer() {
        let layers = vec![
            Layer {
                label: "routing".into(),
                boundary: vec![pt(1, 0), pt(0, 1)],
                style: Style::RoutingExact,
            },
            Layer {
                label: "semilinear".into(),
                boundary: vec![pt(1, 0), pt(1, 1), pt(0, 1)],
                style: Style::SemiExact,
            },
        ];
        let s = render_svg(&layers, &[int(2), int(2)]).unwrap();
        assert!(s.starts_with("<svg"));
        assert!(s.contains(r#"viewBox="-0.1 -0.1 2.2 2.2""#));
        assert!(s.contains(r#"points="1,2 0,1""#));
        assert_eq!(s.matches("class=").count(), 2);
        assert!(render_svg(&layers, &[int(0), int(1)]).is_err());
    }

    #[test]
    fn csv_rows_are_exact() {
        let c = CloudPoint {
            direction: vec![int(1), int(1)],
            answer: RayAnswer {
                lambda: ratio(1, 2),
                packing: vec![],
                bracket: None,
            },
            point: Point(vec![ratio(1, 2), ratio(1, 2)]),
        };
        let one = [c];
        let s = render_csv(&[("routing".into(), &one)]);
        assert_eq!(s, "qx,qy,lambda,rx,ry\n1,1,1/2,1/2,1/2\n");
        let s = render_csv(&[("routing".into(), &one), ("semilinear".into(), &one)]);
        assert!(s.starts_with("layer,qx"));
        assert_eq!(s.lines().count(), 3);
        assert_eq!(num(&ratio(1, 3)), "0.333333");
    }
}
