//! Exact polytopes in rate space: planar hulls, H/V descriptions, membership,
//! down-closure and the reflection wrapper for ray oracles.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{solve_certified, LpInstance, LpStatus, Relation};
use crate::packing::{RayAnswer, RayOracle};
use crate::rational::{self, dot, primitive_integer_vector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn origin(dim: usize) -> Point {
        Point(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn scaled(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|x| x * s).collect())
    }
}

impl From<Vec<Rational>> for Point {
    fn from(v: Vec<Rational>) -> Self {
        Point(v)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::fmt).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `normal · x ≤ offset`, scaled so normal and offset are coprime integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Halfspace> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::Empty("halfspace normal is zero"));
        }
        let mut all = normal;
        all.push(offset);
        let ints = primitive_integer_vector(&all);
        let mut ints: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
        let offset = ints.pop().expect("offset");
        Ok(Halfspace {
            normal: ints,
            offset,
        })
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        dot(&self.normal, p) <= self.offset
    }

    pub fn is_tight(&self, p: &[Rational]) -> bool {
        dot(&self.normal, p) == self.offset
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.normal.iter().map(rational::fmt).collect();
        write!(f, "facet {} <= {}", parts.join(" "), rational::fmt(&self.offset))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionDescription {
    pub dimension: usize,
    /// Counter-clockwise from the lexicographically smallest vertex in two
    /// dimensions; ascending otherwise.
    pub vertices: Vec<Point>,
    /// Absent when the dimension exceeds two.
    pub facets: Option<Vec<Halfspace>>,
}

impl RegionDescription {
    /// Exact description of the convex hull of `points`.
    pub fn from_points(dimension: usize, points: &[Point]) -> Result<RegionDescription> {
        if points.is_empty() {
            return Err(Error::Empty("no points"));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dimension) {
            return Err(Error::Dimension {
                expected: dimension,
                got: p.dim(),
            });
        }
        match dimension {
            0 => Err(Error::Empty("zero-dimensional region")),
            1 => hull_1d(points),
            2 => convex_hull_2d(points),
            _ => extreme_points(dimension, points),
        }
    }

    pub fn sorted_vertices(&self) -> Vec<Point> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    pub fn sorted_facets(&self) -> Option<Vec<Halfspace>> {
        self.facets.as_ref().map(|f| {
            let mut f = f.clone();
            f.sort();
            f
        })
    }

    /// Same vertex set and, when both have one, the same facet set.
    pub fn same_region(&self, other: &RegionDescription) -> bool {
        self.dimension == other.dimension
            && self.sorted_vertices() == other.sorted_vertices()
            && match (self.sorted_facets(), other.sorted_facets()) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
    }

    pub fn parse(text: &str) -> Result<RegionDescription> {
        let mut vertices = Vec::new();
        let mut facets = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let syntax = |msg: &str| Error::Syntax {
                line: i + 1,
                msg: msg.to_string(),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.first() {
                None => continue,
                Some(&"vertex") => {
                    let coords = toks[1..]
                        .iter()
                        .map(|t| rational::parse(t))
                        .collect::<Result<Vec<_>>>()?;
                    vertices.push(Point(coords));
                }
                Some(&"facet") => {
                    let le = toks
                        .iter()
                        .position(|&t| t == "<=")
                        .ok_or_else(|| syntax("facet without `<=`"))?;
                    if le + 2 != toks.len() {
                        return Err(syntax("facet needs one right-hand side"));
                    }
                    let normal = toks[1..le]
                        .iter()
                        .map(|t| rational::parse(t))
                        .collect::<Result<Vec<_>>>()?;
                    facets.push(Halfspace::new(normal, rational::parse(toks[le + 1])?)?);
                }
                Some(&t) if t.starts_with('#') => continue,
                Some(_) => return Err(syntax("expected `vertex` or `facet`")),
            }
        }
        let dimension = vertices
            .first()
            .map(Point::dim)
            .ok_or(Error::Empty("region without vertices"))?;
        Ok(RegionDescription {
            dimension,
            vertices,
            facets: if facets.is_empty() { None } else { Some(facets) },
        })
    }
}

impl fmt::Display for RegionDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            let parts: Vec<String> = v.0.iter().map(rational::fmt).collect();
            writeln!(f, "vertex {}", parts.join(" "))?;
        }
        if let Some(facets) = &self.facets {
            for h in facets {
                writeln!(f, "{h}")?;
            }
        }
        Ok(())
    }
}

fn hull_1d(points: &[Point]) -> Result<RegionDescription> {
    let lo = points.iter().map(|p| p.0[0].clone()).min().expect("nonempty");
    let hi = points.iter().map(|p| p.0[0].clone()).max().expect("nonempty");
    let one = Rational::one();
    let mut vertices = vec![Point(vec![lo.clone()])];
    if hi != lo {
        vertices.push(Point(vec![hi.clone()]));
    }
    let facets = vec![
        Halfspace::new(vec![-one.clone()], -lo)?,
        Halfspace::new(vec![one], hi)?,
    ];
    Ok(RegionDescription {
        dimension: 1,
        vertices,
        facets: Some(facets),
    })
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0[0] - &o.0[0]) * (&b.0[1] - &o.0[1]) - (&a.0[1] - &o.0[1]) * (&b.0[0] - &o.0[0])
}

/// Andrew's monotone chain over exact rationals. Collinear boundary points
/// are dropped.
pub fn convex_hull_2d(points: &[Point]) -> Result<RegionDescription> {
    if points.is_empty() {
        return Err(Error::Empty("convex hull of no points"));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != 2) {
        return Err(Error::Dimension {
            expected: 2,
            got: p.dim(),
        });
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let chain = |iter: &mut dyn Iterator<Item = &Point>| {
        let mut h: Vec<Point> = Vec::new();
        for p in iter {
            while h.len() >= 2 && !cross(&h[h.len() - 2], &h[h.len() - 1], p).is_positive() {
                h.pop();
            }
            h.push(p.clone());
        }
        h
    };
    let vertices = if pts.len() < 3 {
        pts.clone()
    } else {
        let mut lower = chain(&mut pts.iter());
        let mut upper = chain(&mut pts.iter().rev());
        lower.pop();
        upper.pop();
        lower.extend(upper);
        lower
    };
    let one = Rational::one();
    let zero = Rational::zero();
    let facets = match vertices.len() {
        1 => {
            let p = &vertices[0].0;
            vec![
                Halfspace::new(vec![one.clone(), zero.clone()], p[0].clone())?,
                Halfspace::new(vec![-one.clone(), zero.clone()], -&p[0])?,
                Halfspace::new(vec![zero.clone(), one.clone()], p[1].clone())?,
                Halfspace::new(vec![zero, -one], -&p[1])?,
            ]
        }
        2 => {
            let (a, b) = (&vertices[0].0, &vertices[1].0);
            let d = vec![&b[0] - &a[0], &b[1] - &a[1]];
            let n = vec![d[1].clone(), -&d[0]];
            let neg = |v: &[Rational]| v.iter().map(|x| -x).collect::<Vec<_>>();
            vec![
                Halfspace::new(n.clone(), dot(&n, a))?,
                Halfspace::new(neg(&n), -dot(&n, a))?,
                Halfspace::new(d.clone(), dot(&d, b))?,
                Halfspace::new(neg(&d), -dot(&d, a))?,
            ]
        }
        k => (0..k)
            .map(|i| {
                let a = &vertices[i].0;
                let b = &vertices[(i + 1) % k].0;
                let n = vec![&b[1] - &a[1], &a[0] - &b[0]];
                let off = dot(&n, a);
                Halfspace::new(n, off)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(RegionDescription {
        dimension: 2,
        vertices,
        facets: Some(facets),
    })
}

/// Points that are not convex combinations of the others (one LP each).
fn extreme_points(dimension: usize, points: &[Point]) -> Result<RegionDescription> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut keep = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let others: Vec<&Point> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
        if others.is_empty() || !in_convex_hull(dimension, &others, p)? {
            keep.push(p.clone());
        }
    }
    Ok(RegionDescription {
        dimension,
        vertices: keep,
        facets: None,
    })
}

fn in_convex_hull(dimension: usize, points: &[&Point], target: &Point) -> Result<bool> {
    let n = points.len();
    let mut lp = LpInstance::maximize(vec![Rational::zero(); n]);
    for k in 0..dimension {
        lp.push_row(
            points.iter().map(|p| p.0[k].clone()).collect(),
            Relation::Eq,
            target.0[k].clone(),
        );
    }
    lp.push_row(vec![Rational::one(); n], Relation::Eq, Rational::one());
    Ok(solve_certified(&lp)?.status == LpStatus::Optimal)
}

/// Closed-region membership. Uses the facets when present; otherwise decides
/// whether `r` is dominated by a convex combination of the vertices, which is
/// membership in the down-closed hull.
pub fn membership(region: &RegionDescription, r: &[Rational]) -> Result<bool> {
    if r.len() != region.dimension {
        return Err(Error::Dimension {
            expected: region.dimension,
            got: r.len(),
        });
    }
    if let Some(facets) = &region.facets {
        return Ok(facets.iter().all(|h| h.contains(r)));
    }
    if r.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    let n = region.vertices.len();
    let mut lp = LpInstance::maximize(vec![Rational::zero(); n]);
    for (k, rk) in r.iter().enumerate().take(region.dimension) {
        lp.push_row(
            region.vertices.iter().map(|p| p.0[k].clone()).collect(),
            Relation::Ge,
            rk.clone(),
        );
    }
    lp.push_row(vec![Rational::one(); n], Relation::Eq, Rational::one());
    Ok(solve_certified(&lp)?.status == LpStatus::Optimal)
}

/// Hull of the points, their coordinate projections, and the origin.
pub fn down_closure(dimension: usize, points: &[Point]) -> Result<RegionDescription> {
    if dimension > 3 {
        return Err(Error::Unsupported {
            needed: 3,
            got: dimension,
        });
    }
    let mut all = vec![Point::origin(dimension)];
    for p in points {
        if p.dim() != dimension {
            return Err(Error::Dimension {
                expected: dimension,
                got: p.dim(),
            });
        }
        if p.0.iter().any(Signed::is_negative) {
            return Err(Error::NegativeCoordinate);
        }
        for mask in 0u32..(1 << dimension) {
            let q = (0..dimension)
                .map(|k| {
                    if mask >> k & 1 == 1 {
                        Rational::zero()
                    } else {
                        p.0[k].clone()
                    }
                })
                .collect();
            all.push(Point(q));
        }
    }
    RegionDescription::from_points(dimension, &all)
}

/// Every vertex of `inner` satisfies every facet of `outer`.
pub fn region_containment(inner: &RegionDescription, outer: &RegionDescription) -> Result<bool> {
    if inner.dimension != outer.dimension {
        return Err(Error::Dimension {
            expected: outer.dimension,
            got: inner.dimension,
        });
    }
    for v in &inner.vertices {
        if !membership(outer, &v.0)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hull idempotence: the region's vertices are exactly the hull of themselves.
pub fn is_hull_idempotent(region: &RegionDescription) -> Result<bool> {
    let again = RegionDescription::from_points(region.dimension, &region.vertices)?;
    Ok(again.same_region(region))
}

/// Answers rays in any orthant by querying the absolute-value direction and
/// mirroring the boundary point back.
pub struct Reflected<O> {
    pub inner: O,
}

impl<O: RayOracle> RayOracle for Reflected<O> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn ray(&self, direction: &[Rational]) -> Result<RayAnswer> {
        if direction.iter().all(Zero::is_zero) {
            return Err(Error::BadDirection);
        }
        let abs: Vec<Rational> = direction.iter().map(Signed::abs).collect();
        self.inner.ray(&abs)
    }
}

/// The boundary point `lambda · direction`.
pub fn boundary_point(direction: &[Rational], lambda: &Rational) -> Point {
    Point(direction.iter().map(|x| x * lambda).collect())
}

/// Orders 2D points by polar angle around the origin (x-axis first).
pub fn angular_cmp(a: &Point, b: &Point) -> Ordering {
    let c = &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0];
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}
