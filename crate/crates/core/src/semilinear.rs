//! Semi-network linear coding capacity region: fractional packings of
//! minimal partial scalar-linear solutions over a fixed prime field.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf::Field;
use crate::lincode::{PartialSolution, WeightTable, WeightVector};
use crate::lp::{solve_covering_box, CoveringInstance, LpStatus};
use crate::network::Network;
use crate::packing::{check_direction, epsilon_for, Column, MwState, PackingSpec, RayAnswer, RayOracle};
use crate::polytope::{Point, RegionDescription};
use crate::rational::{self, int, Rational};
use crate::reconstruct::support_region_2d;
use crate::routing::{coarse, demand_scale, region_from_vertices, zero_answer, DEFAULT_PHASE_CAP};

pub use crate::polytope::region_containment;

/// Resolution of the covering costs handed to the exact covering LP.
const COST_RESOLUTION: f64 = (1u64 << 20) as f64;

#[derive(Debug, Clone, PartialEq)]
pub struct SemiGkConfig {
    pub omega: Rational,
    pub phase_cap: usize,
}

impl Default for SemiGkConfig {
    fn default() -> Self {
        SemiGkConfig {
            omega: rational::ratio(1, 10),
            phase_cap: DEFAULT_PHASE_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SemiPolytope {
    pub net: Network,
    pub field: Field,
    pub table: WeightTable,
    /// `(entry in table, solution in entry)` per column.
    pub columns: Vec<(usize, usize)>,
    pub spec: PackingSpec,
}

pub fn build_semi_polytope(net: &Network, field: Field, exec: Exec) -> Result<SemiPolytope> {
    net.ensure_structural()?;
    let field = Field::for_alphabet(field.order(), net.alphabet_size())?;
    let table = WeightTable::build(net, field, exec)?;
    let mut columns = Vec::new();
    let mut cols = Vec::new();
    for (wi, (w, sols)) in table.entries.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (si, s) in sols.iter().enumerate() {
            columns.push((wi, si));
            cols.push(Column {
                edges: s.active_edges.clone(),
                delivers: w.bits().to_vec(),
            });
        }
    }
    let spec = PackingSpec {
        capacities: net.capacities(),
        messages: net.message_count(),
        columns: cols,
    };
    Ok(SemiPolytope {
        net: net.clone(),
        field,
        table,
        columns,
        spec,
    })
}

impl SemiPolytope {
    pub fn dimension(&self) -> usize {
        self.spec.messages
    }

    pub fn column_solution(&self, j: usize) -> &PartialSolution {
        let (wi, si) = self.columns[j];
        &self.table.entries[wi].1[si]
    }

    pub fn column_weight(&self, j: usize) -> &WeightVector {
        &self.table.entries[self.columns[j].0].0
    }

    pub fn ray_exact(&self, q: &[Rational]) -> Result<RayAnswer> {
        self.spec.ray_exact(q)
    }

    pub fn support(&self, direction: &[Rational]) -> Result<(Rational, Point)> {
        self.spec.support(direction)
    }

    pub fn exact_region_2d(&self) -> Result<RegionDescription> {
        if self.dimension() != 2 {
            return Err(Error::Unsupported {
                needed: 2,
                got: self.dimension(),
            });
        }
        support_region_2d(|d| self.support(d))
    }

    pub fn exact_region_via_vertices(&self, basis_cap: usize) -> Result<RegionDescription> {
        region_from_vertices(&self.spec, basis_cap)
    }

    /// Multiplicative-weights packing of weight-vector mixtures. Each phase
    /// prices every associated weight by its cheapest minimal solution, asks
    /// the covering LP (boxes of one) for the cheapest mixture covering the
    /// normalised demand, and routes that mixture in bottleneck-limited steps.
    pub fn ray_gk(&self, q: &[Rational], cfg: &SemiGkConfig) -> Result<RayAnswer> {
        check_direction(self.dimension(), q)?;
        let Some(lb) = demand_scale(&self.spec, q) else {
            return Ok(zero_answer(&self.spec));
        };
        let scale = match coarse(&cfg.omega) {
            Some(omega) => {
                let pre = SemiGkConfig { omega, ..cfg.clone() };
                let l = self.gk_run(q, &pre, lb.clone())?.lambda;
                if l > lb { l } else { lb }
            }
            None => lb,
        };
        self.gk_run(q, cfg, scale)
    }

    fn gk_run(&self, q: &[Rational], cfg: &SemiGkConfig, scale: Rational) -> Result<RayAnswer> {
        let eps = epsilon_for(&cfg.omega)?;
        let factor = Rational::one() + &cfg.omega;
        let peak = q.iter().max().expect("nonempty").clone();
        let b: Vec<Rational> = q.iter().map(|x| x / &peak).collect();
        let per_phase = &peak * &scale;

        // Columns of each nonzero weight, in table order.
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (j, &(wi, _)) in self.columns.iter().enumerate() {
            match groups.last_mut() {
                Some((w, cols)) if *w == wi => cols.push(j),
                _ => groups.push((wi, vec![j])),
            }
        }
        let matrix: Vec<Vec<u64>> = (0..self.dimension())
            .map(|i| {
                groups
                    .iter()
                    .map(|(wi, _)| self.table.entries[*wi].0.get(i) as u64)
                    .collect()
            })
            .collect();

        let mut st = MwState::new(&self.spec, eps);
        let mut phases = 0usize;
        'outer: while !st.done() {
            phases += 1;
            if phases > cfg.phase_cap {
                return Err(Error::PhaseCap(cfg.phase_cap));
            }
            let mut remaining = per_phase.clone();
            {
                let cheapest: Vec<(usize, f64)> = groups
                    .iter()
                    .map(|(_, cols)| {
                        cols.iter()
                            .map(|&j| (j, self.column_solution(j).cost(&st.lengths)))
                            .fold((usize::MAX, f64::INFINITY), |a, c| if c.1 < a.1 { c } else { a })
                    })
                    .collect();
                let top = cheapest.iter().map(|c| c.1).fold(0.0f64, f64::max);
                let cost = cheapest
                    .iter()
                    .map(|c| {
                        let v = (c.1 / top * COST_RESOLUTION).ceil().max(1.0) as u64;
                        Rational::from_integer(BigInt::from(v))
                    })
                    .collect();
                let inst = CoveringInstance {
                    matrix: matrix.clone(),
                    demand: b.clone(),
                    cost,
                    upper: vec![1; groups.len()],
                };
                let sol = solve_covering_box(&inst)?;
                if sol.status != LpStatus::Optimal {
                    return Ok(zero_answer(&self.spec));
                }
                let combo: Vec<(usize, Rational)> = cheapest
                    .iter()
                    .zip(sol.primal)
                    .filter(|(_, y)| y.is_positive())
                    .map(|(c, y)| (c.0, y))
                    .collect();
                let load = st.combo_loads(&combo);
                while remaining.is_positive() {
                    let t = st.bottleneck(&load, &remaining);
                    st.route(&combo, &t);
                    remaining -= t;
                    if st.done() {
                        break 'outer;
                    }
                }
            }
        }
        Ok(st.finish(q, &factor))
    }
}

impl RayOracle for SemiPolytope {
    fn dimension(&self) -> usize {
        self.spec.messages
    }

    fn ray(&self, q: &[Rational]) -> Result<RayAnswer> {
        self.ray_exact(q)
    }
}

/// A semi polytope answering rays through the approximate packing loop.
pub struct GkSemi<'a> {
    pub poly: &'a SemiPolytope,
    pub cfg: SemiGkConfig,
}

impl RayOracle for GkSemi<'_> {
    fn dimension(&self) -> usize {
        self.poly.dimension()
    }

    fn ray(&self, q: &[Rational]) -> Result<RayAnswer> {
        self.poly.ray_gk(q, &self.cfg)
    }
}

/// `λ` along the all-ones ray.
pub fn semi_capacity_scalar(poly: &SemiPolytope) -> Result<Rational> {
    Ok(poly.ray_exact(&vec![int(1); poly.dimension()])?.lambda)
}
