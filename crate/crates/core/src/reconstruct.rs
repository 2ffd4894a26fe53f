//! Two-dimensional region reconstruction from support or ray queries.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::packing::{RayAnswer, RayOracle};
use crate::polytope::{boundary_point, down_closure, Point, RegionDescription};
use crate::rational::{self, int, Rational};

/// Default guard on the number of rays issued by [`reconstruct_exact_rays_2d`].
pub const DEFAULT_MAX_RAYS: usize = 10_000;

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0[0] - &o.0[0]) * (&b.0[1] - &o.0[1]) - (&a.0[1] - &o.0[1]) * (&b.0[0] - &o.0[0])
}

fn axis_extents(
    support: &impl Fn(&[Rational]) -> Result<(Rational, Point)>,
) -> Result<(Rational, Rational)> {
    let (m1, _) = support(&[int(1), int(0)])?;
    let (m2, _) = support(&[int(0), int(1)])?;
    Ok((m1, m2))
}

/// Exact region of a down-closed 2D polytope given its support function.
///
/// Between two boundary points `P` and `Q` (counter-clockwise order) the
/// outward chord normal `n` is queried. If `h(n) = n·P` the chord is an edge;
/// otherwise the maximizer lies strictly outside the chord and both halves
/// are refined. Maximizers come from a finite set, so this terminates.
pub fn support_region_2d(
    support: impl Fn(&[Rational]) -> Result<(Rational, Point)>,
) -> Result<RegionDescription> {
    let (m1, m2) = axis_extents(&support)?;
    let origin = Point::origin(2);
    let a = Point(vec![m1, Rational::zero()]);
    let b = Point(vec![Rational::zero(), m2]);
    let mut points = vec![origin, a.clone(), b.clone()];
    let mut stack = vec![(a, b)];
    while let Some((p, q)) = stack.pop() {
        if p == q {
            continue;
        }
        let n = vec![&q.0[1] - &p.0[1], &p.0[0] - &q.0[0]];
        let (h, r) = support(&n)?;
        if h <= rational::dot(&n, &p.0) {
            continue;
        }
        points.push(r.clone());
        stack.push((p, r.clone()));
        stack.push((r, q));
    }
    RegionDescription::from_points(2, &points)
}

/// Exact region from an exact ray oracle.
///
/// Boundary points are kept in counter-clockwise order from the `r1` axis to
/// the `r2` axis. A gap between neighbours `P` and `Q` is closed once three
/// collinear boundary points span it. Otherwise the next ray goes through the
/// intersection of the lines extending the neighbouring edges when that
/// intersection lies beyond the chord, and through `P + Q` when it does not.
pub fn reconstruct_exact_rays_2d(
    oracle: &dyn RayOracle,
    max_rays: usize,
) -> Result<RegionDescription> {
    if oracle.dimension() != 2 {
        return Err(Error::Unsupported {
            needed: 2,
            got: oracle.dimension(),
        });
    }
    let mut rays = 0usize;
    let mut probe = |q: &Point| -> Result<Point> {
        rays += 1;
        if rays > max_rays {
            return Err(Error::RayBudget(max_rays));
        }
        let ans = oracle.ray(&q.0)?;
        Ok(boundary_point(&q.0, &ans.lambda))
    };
    let a = probe(&Point(vec![int(1), int(0)]))?;
    let b = probe(&Point(vec![int(0), int(1)]))?;
    if a.0[0].is_zero() || b.0[1].is_zero() {
        return RegionDescription::from_points(2, &[Point::origin(2), a, b]);
    }

    // chain[k] and chain[k + 1] are closed when closed[k] is set.
    let mut chain = vec![a, b];
    let mut closed = vec![false];
    while let Some(k) = closed.iter().position(|c| !c) {
        let p = chain[k].clone();
        let q = chain[k + 1].clone();
        let prev = k.checked_sub(1).map(|i| chain[i].clone());
        let next = chain.get(k + 2).cloned();
        if prev.as_ref().is_some_and(|o| cross(o, &p, &q).is_zero())
            || next.as_ref().is_some_and(|o| cross(&p, &q, o).is_zero())
        {
            closed[k] = true;
            continue;
        }
        let dir = match (prev, next) {
            (Some(o), Some(s)) => line_meet(&o, &p, &q, &s)
                .filter(|v| cross(&p, &q, v).is_negative() && inside_wedge(&p, &q, v)),
            _ => None,
        }
        .unwrap_or_else(|| Point(vec![&p.0[0] + &q.0[0], &p.0[1] + &q.0[1]]));
        let x = probe(&dir)?;
        let c = cross(&p, &q, &x);
        if c.is_zero() || x == p || x == q {
            closed[k] = true;
            continue;
        }
        chain.insert(k + 1, x);
        closed.insert(k + 1, false);
        closed[k] = false;
    }
    let mut pts = chain;
    pts.push(Point::origin(2));
    RegionDescription::from_points(2, &pts)
}

/// Strictly between the rays through `p` and `q`.
fn inside_wedge(p: &Point, q: &Point, v: &Point) -> bool {
    let o = Point::origin(2);
    cross(&o, p, v).is_positive() && cross(&o, v, q).is_positive()
}

/// Intersection of line(o, p) with line(q, s).
fn line_meet(o: &Point, p: &Point, q: &Point, s: &Point) -> Option<Point> {
    let d1 = [&p.0[0] - &o.0[0], &p.0[1] - &o.0[1]];
    let d2 = [&s.0[0] - &q.0[0], &s.0[1] - &q.0[1]];
    let den = &d1[0] * &d2[1] - &d1[1] * &d2[0];
    if den.is_zero() {
        return None;
    }
    let w = [&q.0[0] - &p.0[0], &q.0[1] - &p.0[1]];
    let t = (&w[0] * &d2[1] - &w[1] * &d2[0]) / den;
    Some(Point(vec![&p.0[0] + &t * &d1[0], &p.0[1] + &t * &d1[1]]))
}

#[derive(Debug, Clone)]
pub struct CloudPoint {
    pub direction: Vec<Rational>,
    pub answer: RayAnswer,
    /// `lambda · direction`.
    pub point: Point,
}

/// Boundary samples from an (approximate) ray oracle plus the down-closed
/// hull of the samples. The sketch carries no guarantee about the region.
#[derive(Debug, Clone)]
pub struct RayCloud {
    pub points: Vec<CloudPoint>,
    pub sketch: RegionDescription,
}

/// `n ≥ 2` directions at evenly spaced angles from the `r1` axis to the `r2`
/// axis, rounded to rationals with denominator `10^6`.
pub fn even_directions(n: usize) -> Vec<Vec<Rational>> {
    let n = n.max(2);
    (0..n)
        .map(|j| {
            if j == 0 {
                return vec![int(1), int(0)];
            }
            if j == n - 1 {
                return vec![int(0), int(1)];
            }
            let t = std::f64::consts::FRAC_PI_2 * j as f64 / (n - 1) as f64;
            vec![
                rational::approx_f64(t.cos(), 1_000_000),
                rational::approx_f64(t.sin(), 1_000_000),
            ]
        })
        .collect()
}

pub fn sample_rays_2d(oracle: &dyn RayOracle, rays: usize, exec: Exec) -> Result<RayCloud> {
    if oracle.dimension() != 2 {
        return Err(Error::Unsupported {
            needed: 2,
            got: oracle.dimension(),
        });
    }
    let dirs = even_directions(rays);
    let answers = exec.map(&dirs, |d| oracle.ray(d));
    let mut points = Vec::with_capacity(dirs.len());
    for (d, a) in dirs.into_iter().zip(answers) {
        let answer = a?;
        let point = boundary_point(&d, &answer.lambda);
        points.push(CloudPoint {
            direction: d,
            answer,
            point,
        });
    }
    let pts: Vec<Point> = points.iter().map(|c| c.point.clone()).collect();
    let sketch = down_closure(2, &pts)?;
    Ok(RayCloud { points, sketch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::membership;
    use crate::rational::ratio;

    /// Down-closed hull of fixed points, queried exactly.
    struct Poly(RegionDescription);

    impl Poly {
        fn of(pts: &[(i64, i64)]) -> Poly {
            let pts: Vec<Point> = pts.iter().map(|&(x, y)| Point(vec![int(x), int(y)])).collect();
            Poly(down_closure(2, &pts).unwrap())
        }

        fn support(&self, d: &[Rational]) -> Result<(Rational, Point)> {
            let best = self
                .0
                .vertices
                .iter()
                .max_by(|a, b| rational::dot(d, &a.0).cmp(&rational::dot(d, &b.0)))
                .unwrap();
            Ok((rational::dot(d, &best.0), best.clone()))
        }
    }

    impl RayOracle for Poly {
        fn dimension(&self) -> usize {
            2
        }

        fn ray(&self, q: &[Rational]) -> Result<RayAnswer> {
            // Bisection-free: the smallest facet ratio b / (a·q).
            let lambda = self
                .0
                .facets
                .as_ref()
                .unwrap()
                .iter()
                .filter_map(|h| {
                    let s = rational::dot(&h.normal, q);
                    s.is_positive().then(|| &h.offset / s)
                })
                .min()
                .unwrap();
            Ok(RayAnswer {
                lambda,
                packing: vec![],
                bracket: None,
            })
        }
    }

    fn shapes() -> Vec<Poly> {
        vec![
            Poly::of(&[(1, 0), (0, 1)]),
            Poly::of(&[(1, 1)]),
            Poly::of(&[(5, 0), (4, 3), (2, 5), (0, 6)]),
            Poly::of(&[(3, 2)]),
            Poly::of(&[(7, 1), (6, 4), (1, 7)]),
            Poly::of(&[(2, 0)]),
            Poly::of(&[(0, 0)]),
        ]
    }

    #[test]
    fn support_driver_recovers_shapes() {
        for s in shapes() {
            let r = support_region_2d(|d| s.support(d)).unwrap();
            assert!(r.same_region(&s.0), "{r}\nvs\n{}", s.0);
        }
    }

    #[test]
    fn ray_driver_recovers_shapes() {
        for s in shapes() {
            let r = reconstruct_exact_rays_2d(&s, DEFAULT_MAX_RAYS).unwrap();
            assert!(r.same_region(&s.0), "{r}\nvs\n{}", s.0);
        }
    }

    #[test]
    fn ray_budget_is_enforced() {
        let s = Poly::of(&[(5, 0), (4, 3), (2, 5), (0, 6)]);
        assert_eq!(
            reconstruct_exact_rays_2d(&s, 3).unwrap_err(),
            Error::RayBudget(3)
        );
    }

    #[test]
    fn cloud_sits_on_the_boundary() {
        let s = Poly::of(&[(1, 0), (0, 1)]);
        let cloud = sample_rays_2d(&s, 9, Exec::Sequential).unwrap();
        assert_eq!(cloud.points.len(), 9);
        for c in &cloud.points {
            assert!(membership(&s.0, &c.point.0).unwrap());
            let out = c.point.scaled(&ratio(1001, 1000));
            assert!(!membership(&s.0, &out.0).unwrap());
        }
        assert!(cloud.sketch.same_region(&s.0));
    }

    #[test]
    fn directions_are_nonnegative() {
        let d = even_directions(64);
        assert_eq!(d.len(), 64);
        assert!(d.iter().all(|v| rational::is_nonneg(v) && !v.iter().all(Zero::is_zero)));
    }
}
