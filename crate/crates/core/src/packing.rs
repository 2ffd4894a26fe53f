//! Column packing polytopes shared by the routing and semi-linear engines.
//!
//! A column is an edge set used once per unit of packing (a Steiner tree or a
//! partial scalar-linear solution) together with the messages it delivers.
//! The packing polytope is `{x ≥ 0 : Σ_col uses(e) x(col) ≤ c(e)}` and the
//! rate map sends `x` to `(Σ_{col delivers i} x(col))_i`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{solve_certified, LpInstance, LpStatus, Relation};
use crate::polytope::Point;
use crate::rational::{self, Rational};

/// Default cap on feasible bases visited during vertex enumeration.
pub const DEFAULT_BASIS_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    /// Sorted edge indices.
    pub edges: Vec<usize>,
    /// Messages delivered by one unit of the column.
    pub delivers: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackingSpec {
    pub capacities: Vec<Rational>,
    pub messages: usize,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayAnswer {
    /// Scale of the boundary point along the queried direction. For
    /// approximate answers this is the certified lower end of `bracket`.
    pub lambda: Rational,
    /// Feasible packing over the columns whose rate dominates `lambda · q`.
    pub packing: Vec<Rational>,
    pub bracket: Option<(Rational, Rational)>,
}

pub trait RayOracle: Sync {
    fn dimension(&self) -> usize;
    fn ray(&self, direction: &[Rational]) -> Result<RayAnswer>;
}

impl<O: RayOracle + ?Sized> RayOracle for &O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn ray(&self, direction: &[Rational]) -> Result<RayAnswer> {
        (**self).ray(direction)
    }
}

pub(crate) fn check_direction(dim: usize, q: &[Rational]) -> Result<()> {
    if q.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: q.len(),
        });
    }
    if q.iter().any(Signed::is_negative) || q.iter().all(Zero::is_zero) {
        return Err(Error::BadDirection);
    }
    Ok(())
}

impl PackingSpec {
    pub fn edge_count(&self) -> usize {
        self.capacities.len()
    }

    /// Rate vector of a packing.
    pub fn rates(&self, x: &[Rational]) -> Point {
        let mut r = vec![Rational::zero(); self.messages];
        for (col, xv) in self.columns.iter().zip(x) {
            if xv.is_zero() {
                continue;
            }
            for (i, &d) in col.delivers.iter().enumerate() {
                if d {
                    r[i] += xv;
                }
            }
        }
        Point(r)
    }

    pub fn edge_loads(&self, x: &[Rational]) -> Vec<Rational> {
        let mut load = vec![Rational::zero(); self.edge_count()];
        for (col, xv) in self.columns.iter().zip(x) {
            if xv.is_zero() {
                continue;
            }
            for &e in &col.edges {
                load[e] += xv;
            }
        }
        load
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.columns.len()
            && x.iter().all(|v| !v.is_negative())
            && self
                .edge_loads(x)
                .iter()
                .zip(&self.capacities)
                .all(|(l, c)| l <= c)
    }

    fn edge_rows(&self, lp: &mut LpInstance, extra: usize) {
        let n = self.columns.len();
        for e in 0..self.edge_count() {
            let mut row = vec![Rational::zero(); n + extra];
            let mut any = false;
            for (j, col) in self.columns.iter().enumerate() {
                if col.edges.binary_search(&e).is_ok() {
                    row[j] = Rational::one();
                    any = true;
                }
            }
            if any {
                lp.push_row(row, Relation::Le, self.capacities[e].clone());
            }
        }
    }

    /// `max λ` subject to the edge rows and `Σ_{col delivers i} x ≥ λ q_i`
    /// for every `q_i > 0`. The last variable is `λ`.
    pub fn ray_lp(&self, q: &[Rational]) -> LpInstance {
        let n = self.columns.len();
        let mut obj = vec![Rational::zero(); n + 1];
        obj[n] = Rational::one();
        let mut lp = LpInstance::maximize(obj);
        self.edge_rows(&mut lp, 1);
        for (i, qi) in q.iter().enumerate() {
            if qi.is_zero() {
                continue;
            }
            let mut row = vec![Rational::zero(); n + 1];
            for (j, col) in self.columns.iter().enumerate() {
                if col.delivers[i] {
                    row[j] = Rational::one();
                }
            }
            row[n] = -qi;
            lp.push_row(row, Relation::Ge, Rational::zero());
        }
        lp
    }

    pub fn ray_exact(&self, q: &[Rational]) -> Result<RayAnswer> {
        check_direction(self.messages, q)?;
        let sol = solve_certified(&self.ray_lp(q))?;
        match sol.status {
            LpStatus::Optimal => {
                let mut packing = sol.primal;
                let lambda = packing.pop().expect("lambda variable");
                Ok(RayAnswer {
                    lambda,
                    packing,
                    bracket: None,
                })
            }
            LpStatus::Unbounded => Err(Error::LpStatus("unbounded")),
            LpStatus::Infeasible => Err(Error::LpStatus("infeasible")),
        }
    }

    /// Support function of the rate region in `direction`, with a maximizer.
    pub fn support(&self, direction: &[Rational]) -> Result<(Rational, Point)> {
        if direction.len() != self.messages {
            return Err(Error::Dimension {
                expected: self.messages,
                got: direction.len(),
            });
        }
        let n = self.columns.len();
        if n == 0 {
            return Ok((Rational::zero(), Point::origin(self.messages)));
        }
        let obj: Vec<Rational> = self
            .columns
            .iter()
            .map(|col| {
                col.delivers
                    .iter()
                    .zip(direction)
                    .filter(|(&d, _)| d)
                    .map(|(_, w)| w.clone())
                    .sum()
            })
            .collect();
        let mut lp = LpInstance::maximize(obj);
        self.edge_rows(&mut lp, 0);
        let sol = solve_certified(&lp)?;
        match sol.status {
            LpStatus::Optimal => {
                let point = self.rates(&sol.primal);
                Ok((sol.value, point))
            }
            LpStatus::Unbounded => Err(Error::LpStatus("unbounded")),
            LpStatus::Infeasible => Err(Error::LpStatus("infeasible")),
        }
    }

    /// All vertices of the packing polytope, found by walking the graph of
    /// feasible simplex bases from the all-slack basis. Fails once more than
    /// `basis_cap` bases have been visited.
    pub fn vertices(&self, basis_cap: usize) -> Result<Vec<Vec<Rational>>> {
        let n = self.columns.len();
        let m = self.edge_count();
        let width = n + m;
        // Tableau rows: [A | I | c].
        let mut rows = Vec::with_capacity(m);
        for e in 0..m {
            let mut row = vec![Rational::zero(); width + 1];
            for (j, col) in self.columns.iter().enumerate() {
                if col.edges.binary_search(&e).is_ok() {
                    row[j] = Rational::one();
                }
            }
            row[n + e] = Rational::one();
            row[width] = self.capacities[e].clone();
            rows.push(row);
        }
        let start_basis: Vec<usize> = (n..width).collect();

        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut verts: BTreeSet<Vec<Rational>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start_basis.clone());
        queue.push_back((rows, start_basis));
        while let Some((tab, basis)) = queue.pop_front() {
            let mut x = vec![Rational::zero(); n];
            for (r, &b) in basis.iter().enumerate() {
                if b < n {
                    x[b] = tab[r][width].clone();
                }
            }
            verts.insert(x);
            for c in 0..width {
                if basis.contains(&c) {
                    continue;
                }
                let mut best: Option<Rational> = None;
                let mut rows_at_min = Vec::new();
                for (r, row) in tab.iter().enumerate() {
                    if !row[c].is_positive() {
                        continue;
                    }
                    let ratio = &row[width] / &row[c];
                    match &best {
                        Some(b) if ratio > *b => {}
                        Some(b) if ratio == *b => rows_at_min.push(r),
                        _ => {
                            best = Some(ratio);
                            rows_at_min = vec![r];
                        }
                    }
                }
                for r in rows_at_min {
                    let mut nb = basis.clone();
                    nb[r] = c;
                    let mut key = nb.clone();
                    key.sort_unstable();
                    if !seen.insert(key) {
                        continue;
                    }
                    if seen.len() > basis_cap {
                        return Err(Error::TooLarge(format!(
                            "more than {basis_cap} feasible bases"
                        )));
                    }
                    let mut nt = tab.clone();
                    pivot(&mut nt, r, c, width);
                    queue.push_back((nt, nb));
                }
            }
        }
        Ok(verts.into_iter().collect())
    }
}

fn pivot(tab: &mut [Vec<Rational>], r: usize, c: usize, width: usize) {
    let inv = tab[r][c].recip();
    for v in tab[r].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for j in 0..=width {
            if !prow[j].is_zero() {
                row[j] -= &f * &prow[j];
            }
        }
    }
}

/// Step size for the multiplicative-weights loop: the largest `ε` with
/// `(1 - ε)^-3 ≤ 1 + ω`, shaved slightly so float rounding cannot break it.
pub fn epsilon_for(omega: &Rational) -> Result<f64> {
    if !omega.is_positive() {
        return Err(Error::Number(format!("omega must be positive, got {omega}")));
    }
    let w = rational::to_f64(omega);
    let eps = 1.0 - (1.0 + w).powf(-1.0 / 3.0);
    Ok((eps * 0.999).clamp(1e-6, 0.5))
}

/// Multiplicative-weights bookkeeping for concurrent packing (Garg–Könemann,
/// Fleischer's phase variant). Lengths start at `δ / c(e)` with
/// `δ = (m / (1 - ε))^(-1/ε)`; routing `f` units on a column multiplies each
/// of its edge lengths by `1 + ε f / c(e)`; the run stops once
/// `D = Σ_e c(e) l(e)` reaches one. The accumulated packing is then scaled
/// down by its exact maximum congestion, so the reported value is always a
/// feasible lower bound.
pub(crate) struct MwState<'a> {
    spec: &'a PackingSpec,
    eps: f64,
    caps: Vec<f64>,
    pub lengths: Vec<f64>,
    pub x: Vec<Rational>,
    /// `ln` of the factor relating stored lengths to true lengths.
    log_scale: f64,
}

impl<'a> MwState<'a> {
    pub fn new(spec: &'a PackingSpec, eps: f64) -> Self {
        let m = spec.edge_count().max(1) as f64;
        let ln_delta = -(m / (1.0 - eps)).ln() / eps;
        let caps: Vec<f64> = spec.capacities.iter().map(rational::to_f64).collect();
        // Only ratios of lengths matter to the oracles; D is tracked in log space.
        let lengths = caps.iter().map(|c| 1.0 / c).collect();
        MwState {
            spec,
            eps,
            caps,
            lengths,
            x: vec![Rational::zero(); spec.columns.len()],
            log_scale: ln_delta,
        }
    }

    pub fn done(&self) -> bool {
        let d: f64 = self.lengths.iter().zip(&self.caps).map(|(l, c)| l * c).sum();
        d.ln() + self.log_scale >= 0.0
    }

    /// Edge loads of one unit of a weighted combination of columns.
    pub fn combo_loads(&self, combo: &[(usize, Rational)]) -> Vec<Rational> {
        let mut load = vec![Rational::zero(); self.spec.edge_count()];
        for (col, w) in combo {
            for &e in &self.spec.columns[*col].edges {
                load[e] += w;
            }
        }
        load
    }

    /// Largest `t ≤ limit` with `t · load(e) ≤ c(e)` on every edge.
    pub fn bottleneck(&self, load: &[Rational], limit: &Rational) -> Rational {
        let mut t = limit.clone();
        for (l, c) in load.iter().zip(&self.spec.capacities) {
            if l.is_positive() {
                let cap = c / l;
                if cap < t {
                    t = cap;
                }
            }
        }
        t
    }

    /// Routes `t` units of the combination and updates lengths.
    pub fn route(&mut self, combo: &[(usize, Rational)], t: &Rational) {
        let load = self.combo_loads(combo);
        for (col, w) in combo {
            self.x[*col] += w * t;
        }
        let tf = rational::to_f64(t);
        let mut max_len = 0.0f64;
        for (e, l) in load.iter().enumerate() {
            if l.is_positive() {
                self.lengths[e] *= 1.0 + self.eps * tf * rational::to_f64(l) / self.caps[e];
            }
            max_len = max_len.max(self.lengths[e]);
        }
        // Rescale to keep lengths in range; D is tracked through log_scale.
        if max_len > 1e100 {
            for l in self.lengths.iter_mut() {
                *l /= max_len;
            }
            self.log_scale += max_len.ln();
        }
    }

    /// Scales the packing to feasibility and reports `min_i rate_i / q_i`.
    pub fn finish(self, q: &[Rational], factor: &Rational) -> RayAnswer {
        let loads = self.spec.edge_loads(&self.x);
        let mut congestion = Rational::zero();
        for (l, c) in loads.iter().zip(&self.spec.capacities) {
            let r = l / c;
            if r > congestion {
                congestion = r;
            }
        }
        let packing: Vec<Rational> = if congestion.is_positive() {
            self.x.iter().map(|v| v / &congestion).collect()
        } else {
            self.x
        };
        let rates = self.spec.rates(&packing);
        let lambda = q
            .iter()
            .zip(&rates.0)
            .filter(|(qi, _)| qi.is_positive())
            .map(|(qi, ri)| ri / qi)
            .min()
            .unwrap_or_else(Rational::zero);
        let upper = &lambda * factor;
        RayAnswer {
            bracket: Some((lambda.clone(), upper)),
            lambda,
            packing,
        }
    }
}
