//! Network routing capacity region: fractional packings of minimal Steiner
//! trees under edge capacities.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::network::Network;
use crate::packing::{
    check_direction, epsilon_for, Column, MwState, PackingSpec, RayAnswer, RayOracle,
    DEFAULT_BASIS_CAP,
};
use crate::polytope::{Point, RegionDescription};
use crate::rational::{self, int, Rational};
use crate::reconstruct::support_region_2d;
use crate::steiner::{
    enumerate_minimal_steiner_trees, min_cost_steiner_exact, min_cost_steiner_shortest_paths,
    SteinerTree,
};

/// Default cap on GK phases.
pub const DEFAULT_PHASE_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SteinerOracle {
    /// Scan of all minimal trees (approximation factor 1).
    #[default]
    Exact,
    /// Pruned union of shortest paths (factor = receivers per message).
    ShortestPaths,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GkConfig {
    pub omega: Rational,
    pub steiner_oracle: SteinerOracle,
    pub phase_cap: usize,
}

impl Default for GkConfig {
    fn default() -> Self {
        GkConfig {
            omega: rational::ratio(1, 10),
            steiner_oracle: SteinerOracle::Exact,
            phase_cap: DEFAULT_PHASE_CAP,
        }
    }
}

impl GkConfig {
    pub fn with_omega(omega: Rational) -> Self {
        GkConfig {
            omega,
            ..GkConfig::default()
        }
    }

    pub fn epsilon(&self) -> Result<f64> {
        epsilon_for(&self.omega)
    }
}

#[derive(Debug, Clone)]
pub struct RoutingPolytope {
    pub net: Network,
    /// Trees of message 0, then message 1, and so on.
    pub trees: Vec<SteinerTree>,
    pub trees_per_message: Vec<usize>,
    pub spec: PackingSpec,
}

pub fn build_routing_polytope(net: &Network, exec: Exec) -> Result<RoutingPolytope> {
    net.ensure_structural()?;
    let per = exec.map_range(net.message_count(), |i| enumerate_minimal_steiner_trees(net, i));
    let mut trees = Vec::new();
    let mut trees_per_message = Vec::new();
    for t in per {
        let t = t?;
        trees_per_message.push(t.len());
        trees.extend(t);
    }
    let k = net.message_count();
    let columns = trees
        .iter()
        .map(|t| Column {
            edges: t.edges.clone(),
            delivers: (0..k).map(|i| i == t.message).collect(),
        })
        .collect();
    let spec = PackingSpec {
        capacities: net.capacities(),
        messages: k,
        columns,
    };
    Ok(RoutingPolytope {
        net: net.clone(),
        trees,
        trees_per_message,
        spec,
    })
}

impl RoutingPolytope {
    pub fn dimension(&self) -> usize {
        self.spec.messages
    }

    pub fn ray_exact(&self, q: &[Rational]) -> Result<RayAnswer> {
        self.spec.ray_exact(q)
    }

    pub fn support(&self, direction: &[Rational]) -> Result<(Rational, Point)> {
        self.spec.support(direction)
    }

    /// λ along the all-ones ray.
    pub fn capacity_scalar(&self) -> Result<Rational> {
        Ok(self.ray_exact(&vec![int(1); self.dimension()])?.lambda)
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

    /// Images of all vertices of the tree polytope under the rate map.
    pub fn exact_region_via_vertices(&self, basis_cap: usize) -> Result<RegionDescription> {
        region_from_vertices(&self.spec, basis_cap)
    }

    /// Approximation factor of the configured tree oracle.
    pub fn oracle_factor(&self, oracle: SteinerOracle) -> u64 {
        match oracle {
            SteinerOracle::Exact => 1,
            SteinerOracle::ShortestPaths => self
                .net
                .messages()
                .iter()
                .map(|m| m.receivers.len() as u64)
                .max()
                .unwrap_or(1),
        }
    }

    /// Multiplicative-weights concurrent tree packing. Each phase routes the
    /// scaled demand of every message along successive cheapest trees, one
    /// bottleneck at a time. The result brackets the exact value within
    /// `[λ̂, (1 + ω)·A·λ̂]`.
    pub fn ray_gk(&self, q: &[Rational], cfg: &GkConfig) -> Result<RayAnswer> {
        check_direction(self.dimension(), q)?;
        let Some(lb) = demand_scale(&self.spec, q) else {
            return Ok(zero_answer(&self.spec));
        };
        let scale = match coarse(&cfg.omega) {
            Some(omega) => {
                let pre = GkConfig { omega, ..cfg.clone() };
                let l = self.gk_run(q, &pre, lb.clone())?.lambda;
                if l > lb { l } else { lb }
            }
            None => lb,
        };
        self.gk_run(q, cfg, scale)
    }

    /// One GK run with per-phase demand `scale · q`; `scale` must not exceed
    /// the exact value.
    fn gk_run(&self, q: &[Rational], cfg: &GkConfig, scale: Rational) -> Result<RayAnswer> {
        let eps = cfg.epsilon()?;
        let factor = (Rational::one() + &cfg.omega) * int(self.oracle_factor(cfg.steiner_oracle) as i64);
        let demand: Vec<Rational> = q.iter().map(|x| x * &scale).collect();

        let mut index: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); self.dimension()];
        let mut offsets = Vec::with_capacity(self.dimension());
        let mut off = 0;
        for (i, &n) in self.trees_per_message.iter().enumerate() {
            offsets.push(off);
            for j in off..off + n {
                index[i].insert(self.trees[j].edges.clone(), j);
            }
            off += n;
        }

        let mut st = MwState::new(&self.spec, eps);
        let mut phases = 0usize;
        'outer: while !st.done() {
            phases += 1;
            if phases > cfg.phase_cap {
                return Err(Error::PhaseCap(cfg.phase_cap));
            }
            for (i, d) in demand.iter().enumerate() {
                let mut remaining = d.clone();
                while remaining.is_positive() {
                    let col = match cfg.steiner_oracle {
                        SteinerOracle::Exact => {
                            let lo = offsets[i];
                            let hi = lo + self.trees_per_message[i];
                            let (j, _) = min_cost_steiner_exact(&self.trees[lo..hi], &st.lengths)
                                .ok_or(Error::InvalidNetwork("message without trees".into()))?;
                            lo + j
                        }
                        SteinerOracle::ShortestPaths => {
                            let (edges, _) =
                                min_cost_steiner_shortest_paths(&self.net, i, &st.lengths)?
                                    .ok_or(Error::InvalidNetwork("message without trees".into()))?;
                            *index[i].get(&edges).ok_or(Error::InvalidNetwork(
                                "shortest-path tree is not minimal".into(),
                            ))?
                        }
                    };
                    let combo = [(col, Rational::one())];
                    let load = st.combo_loads(&combo);
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

/// Demand multiplier making the optimum at least one: a lower bound on the
/// exact value from single columns and from time sharing between messages.
/// `None` when some demanded message has no column at all.
pub(crate) fn demand_scale(spec: &PackingSpec, q: &[Rational]) -> Option<Rational> {
    let demanded: Vec<usize> = (0..q.len()).filter(|&i| q[i].is_positive()).collect();
    let bottleneck = |col: &Column| {
        col.edges
            .iter()
            .map(|&e| spec.capacities[e].clone())
            .min()
            .unwrap_or_else(Rational::zero)
    };
    let mut best_single = vec![Rational::zero(); q.len()];
    let mut joint = Rational::zero();
    for col in &spec.columns {
        let b = bottleneck(col);
        for &i in &demanded {
            if col.delivers[i] && b > best_single[i] {
                best_single[i] = b.clone();
            }
        }
        if demanded.iter().all(|&i| col.delivers[i]) {
            let v = demanded.iter().map(|&i| &b / &q[i]).min().expect("nonempty");
            if v > joint {
                joint = v;
            }
        }
    }
    if demanded.iter().any(|&i| best_single[i].is_zero()) {
        return None;
    }
    let shared = demanded
        .iter()
        .map(|&i| &best_single[i] / &q[i])
        .min()
        .expect("nonempty")
        / int(demanded.len() as i64);
    let lb = if joint > shared { joint } else { shared };
    Some(lb)
}

/// Slack of the warm-up run that tightens the demand scale, when the
/// requested slack is finer than it.
pub(crate) fn coarse(omega: &Rational) -> Option<Rational> {
    let one = Rational::one();
    (*omega < one).then_some(one)
}

pub(crate) fn zero_answer(spec: &PackingSpec) -> RayAnswer {
    RayAnswer {
        lambda: Rational::zero(),
        packing: vec![Rational::zero(); spec.columns.len()],
        bracket: Some((Rational::zero(), Rational::zero())),
    }
}

pub(crate) fn region_from_vertices(spec: &PackingSpec, basis_cap: usize) -> Result<RegionDescription> {
    let verts = spec.vertices(basis_cap)?;
    let mut pts: Vec<Point> = verts.iter().map(|x| spec.rates(x)).collect();
    pts.sort();
    pts.dedup();
    RegionDescription::from_points(spec.messages, &pts)
}

impl RayOracle for RoutingPolytope {
    fn dimension(&self) -> usize {
        self.spec.messages
    }

    fn ray(&self, q: &[Rational]) -> Result<RayAnswer> {
        self.ray_exact(q)
    }
}

/// A routing polytope answering rays through GK.
pub struct GkRouting<'a> {
    pub poly: &'a RoutingPolytope,
    pub cfg: GkConfig,
}

impl RayOracle for GkRouting<'_> {
    fn dimension(&self) -> usize {
        self.poly.dimension()
    }

    fn ray(&self, q: &[Rational]) -> Result<RayAnswer> {
        self.poly.ray_gk(q, &self.cfg)
    }
}

pub fn default_basis_cap() -> usize {
    DEFAULT_BASIS_CAP
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::polytope::membership;
    use crate::rational::ratio;
    use crate::reconstruct::{reconstruct_exact_rays_2d, DEFAULT_MAX_RAYS};

    fn poly(net: &Network) -> RoutingPolytope {
        build_routing_polytope(net, Exec::Sequential).unwrap()
    }

    fn pt(x: i64, y: i64) -> Point {
        Point(vec![int(x), int(y)])
    }

    #[test]
    fn polytope_shapes() {
        let d = poly(&diamond());
        assert_eq!(d.trees_per_message, vec![2]);
        assert_eq!(d.spec.edge_count(), 4);
        let s = poly(&single_edge());
        assert_eq!(s.trees.len(), 1);
        assert_eq!(s.spec.capacities, vec![int(5)]);
        let b = poly(&butterfly());
        assert_eq!(b.trees_per_message, vec![2, 2]);
        assert_eq!(b.spec.edge_count(), 7);
    }

    #[test]
    fn exact_rays() {
        let b = poly(&butterfly());
        assert_eq!(b.ray_exact(&[int(1), int(1)]).unwrap().lambda, ratio(1, 2));
        assert_eq!(b.ray_exact(&[int(1), int(0)]).unwrap().lambda, int(1));
        assert_eq!(poly(&diamond()).ray_exact(&[int(1)]).unwrap().lambda, int(2));
        assert_eq!(b.ray_exact(&[int(0), int(0)]).unwrap_err(), Error::BadDirection);
    }

    #[test]
    fn cut_butterfly_routes_nothing_jointly() {
        let c = poly(&butterfly_cut());
        assert_eq!(c.trees_per_message, vec![0, 0]);
        assert_eq!(c.ray_exact(&[int(1), int(1)]).unwrap().lambda, int(0));
        assert!(build_routing_polytope(&butterfly_cut(), Exec::Sequential).is_ok());
    }

    #[test]
    fn scalars() {
        assert_eq!(poly(&butterfly()).capacity_scalar().unwrap(), ratio(1, 2));
        assert_eq!(poly(&diamond()).capacity_scalar().unwrap(), int(2));
        assert_eq!(poly(&parallel()).capacity_scalar().unwrap(), int(1));
    }

    #[test]
    fn support_values() {
        let b = poly(&butterfly());
        let (v, p) = b.support(&[int(1), int(1)]).unwrap();
        assert_eq!(v, int(1));
        assert!(p == pt(1, 0) || p == pt(0, 1));
        assert_eq!(b.support(&[int(1), int(0)]).unwrap().0, int(1));
        assert_eq!(b.support(&[int(0), int(0)]).unwrap().0, int(0));
    }

    #[test]
    fn butterfly_triangle_three_ways() {
        let b = poly(&butterfly());
        let want = "vertex 0 0\nvertex 1 0\nvertex 0 1\nfacet 0 -1 <= 0\nfacet 1 1 <= 1\nfacet -1 0 <= 0\n";
        let s = b.exact_region_2d().unwrap();
        assert_eq!(s.to_string(), want);
        let v = b.exact_region_via_vertices(DEFAULT_BASIS_CAP).unwrap();
        assert_eq!(v.to_string(), want);
        let r = reconstruct_exact_rays_2d(&b, DEFAULT_MAX_RAYS).unwrap();
        assert_eq!(r.to_string(), want);
        assert!(membership(&s, &[ratio(1, 2), ratio(1, 2)]).unwrap());
        assert!(!membership(&s, &[ratio(3, 4), ratio(1, 2)]).unwrap());
    }

    #[test]
    fn independent_regions() {
        let sq = poly(&parallel()).exact_region_2d().unwrap();
        assert_eq!(sq.sorted_vertices(), vec![pt(0, 0), pt(0, 1), pt(1, 0), pt(1, 1)]);
        let dp = poly(&diamond_pair()).exact_region_2d().unwrap();
        assert_eq!(dp.sorted_vertices(), vec![pt(0, 0), pt(0, 2), pt(2, 0), pt(2, 2)]);
    }

    #[test]
    fn one_dimensional_segments() {
        let d = poly(&diamond()).exact_region_via_vertices(DEFAULT_BASIS_CAP).unwrap();
        assert_eq!(d.sorted_vertices(), vec![Point(vec![int(0)]), Point(vec![int(2)])]);
        let s = poly(&single_edge()).exact_region_via_vertices(DEFAULT_BASIS_CAP).unwrap();
        assert_eq!(s.sorted_vertices(), vec![Point(vec![int(0)]), Point(vec![int(5)])]);
    }

    fn assert_bracket(p: &RoutingPolytope, q: &[Rational], cfg: &GkConfig) {
        let exact = p.ray_exact(q).unwrap().lambda;
        let a = p.ray_gk(q, cfg).unwrap();
        let (lo, hi) = a.bracket.clone().unwrap();
        assert!(lo <= exact && exact <= hi, "{lo} <= {exact} <= {hi}");
        assert_eq!(a.lambda, lo);
        assert!(p.spec.is_feasible(&a.packing));
        let rates = p.spec.rates(&a.packing);
        for (r, qi) in rates.0.iter().zip(q) {
            assert!(*r >= &lo * qi);
        }
    }

    #[test]
    fn gk_brackets_exact_values() {
        let cfg = GkConfig::default();
        let b = poly(&butterfly());
        assert_bracket(&b, &[int(1), int(1)], &cfg);
        assert_bracket(&b, &[int(1), int(0)], &cfg);
        assert_bracket(&poly(&diamond()), &[int(1)], &cfg);
        let sp = GkConfig {
            steiner_oracle: SteinerOracle::ShortestPaths,
            ..cfg
        };
        assert_bracket(&b, &[int(1), int(2)], &sp);
    }

    #[test]
    fn gk_phase_cap() {
        let cfg = GkConfig {
            phase_cap: 1,
            ..GkConfig::default()
        };
        let b = poly(&butterfly());
        assert_eq!(b.ray_gk(&[int(1), int(1)], &cfg).unwrap_err(), Error::PhaseCap(1));
    }

    #[test]
    fn unreachable_demand_gives_zero() {
        let spec = PackingSpec {
            capacities: vec![int(1)],
            messages: 2,
            columns: vec![Column {
                edges: vec![0],
                delivers: vec![true, false],
            }],
        };
        assert!(demand_scale(&spec, &[int(1), int(1)]).is_none());
        assert!(demand_scale(&spec, &[int(1), int(0)]).is_some());
    }
}
