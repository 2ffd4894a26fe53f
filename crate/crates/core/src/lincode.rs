//! Scalar-linear network codes over a prime field with unit edge capacities.
//!
//! Codes are searched in the global-coding-vector view: every active edge
//! carries a vector in GF(q)^k (k = number of selected messages) lying in the
//! span of its tail's inputs, and every receiver must be able to reach the
//! unit vector of each selected message it demands. Witnesses are reported in
//! local form (coefficients over each node's inputs) so they can be checked
//! independently by [`verify_partial_solution`].

use std::fmt;
use std::ops::Add;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf::{Field, Span};
use crate::network::Network;
use crate::steiner::edge_set_cost;

/// Subsets of this many candidate edges are enumerated at most.
pub const MAX_CANDIDATE_EDGES: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(Vec<bool>);

impl WeightVector {
    pub fn new(bits: Vec<bool>) -> Self {
        WeightVector(bits)
    }

    pub fn zeros(n: usize) -> Self {
        WeightVector(vec![false; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![false; n];
        v[i] = true;
        WeightVector(v)
    }

    /// Bit `i` of `code` selects message `i`.
    pub fn from_code(n: usize, code: u64) -> Self {
        WeightVector((0..n).map(|i| code >> i & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    /// Coordinatewise `self ≤ other`.
    pub fn dominated_by(&self, other: &WeightVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: Vec<&str> = self.0.iter().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "({})", bits.join(","))
    }
}

/// Something a node can combine: an incoming active edge or a message it sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Input {
    Edge(usize),
    Message(usize),
}

/// Active in-edges in index order, then selected messages sourced at the node.
pub fn node_inputs(net: &Network, active: &[bool], weight: &WeightVector, node: usize) -> Vec<Input> {
    let mut inputs: Vec<Input> = net
        .edges()
        .iter()
        .enumerate()
        .filter(|(e, edge)| active[*e] && edge.head == node)
        .map(|(e, _)| Input::Edge(e))
        .collect();
    inputs.extend(
        net.messages()
            .iter()
            .enumerate()
            .filter(|(i, m)| weight.get(*i) && m.source == node)
            .map(|(i, _)| Input::Message(i)),
    );
    inputs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoder {
    pub receiver: usize,
    pub message: usize,
    /// Over `node_inputs(receiver)`.
    pub coefficients: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSolution {
    pub weight: WeightVector,
    /// Sorted edge indices, each carrying one field symbol.
    pub active_edges: Vec<usize>,
    /// Parallel to `active_edges`; coefficients over `node_inputs(tail)`.
    pub edge_coefficients: Vec<Vec<u32>>,
    pub decoders: Vec<Decoder>,
}

impl PartialSolution {
    pub fn cost<T>(&self, lengths: &[T]) -> T
    where
        T: Clone + Zero + Add<Output = T>,
    {
        edge_set_cost(&self.active_edges, lengths)
    }
}

/// Propagates global coding vectors through the local coefficients in
/// topological order and checks that every decoder recovers its message.
pub fn verify_partial_solution(net: &Network, field: Field, sol: &PartialSolution) -> bool {
    let mu = net.message_count();
    if sol.weight.len() != mu || sol.edge_coefficients.len() != sol.active_edges.len() {
        return false;
    }
    let Ok(order) = net.topological_order() else {
        return false;
    };
    let mut active = vec![false; net.edge_count()];
    for &e in &sol.active_edges {
        if e >= net.edge_count() || active[e] {
            return false;
        }
        active[e] = true;
    }
    let unit = |i: usize| {
        let mut v = vec![0u32; mu];
        v[i] = 1;
        v
    };
    let mut global: Vec<Option<Vec<u32>>> = vec![None; net.edge_count()];
    let combine = |inputs: &[Input], coeffs: &[u32], global: &[Option<Vec<u32>>]| {
        if inputs.len() != coeffs.len() {
            return None;
        }
        let mut acc = vec![0u32; mu];
        for (inp, &c) in inputs.iter().zip(coeffs) {
            let v = match *inp {
                Input::Edge(e) => global[e].clone()?,
                Input::Message(i) => unit(i),
            };
            field.axpy(&mut acc, c % field.order(), &v);
        }
        Some(acc)
    };
    for &v in &order {
        let inputs = node_inputs(net, &active, &sol.weight, v);
        for (k, &e) in sol.active_edges.iter().enumerate() {
            if net.edges()[e].tail != v {
                continue;
            }
            match combine(&inputs, &sol.edge_coefficients[k], &global) {
                Some(g) => global[e] = Some(g),
                None => return false,
            }
        }
    }
    // Each (receiver, selected demand) pair needs exactly one decoder.
    let mut needed: Vec<(usize, usize)> = Vec::new();
    for i in sol.weight.selected() {
        for &r in &net.messages()[i].receivers {
            needed.push((r, i));
        }
    }
    needed.sort_unstable();
    let mut have: Vec<(usize, usize)> =
        sol.decoders.iter().map(|d| (d.receiver, d.message)).collect();
    have.sort_unstable();
    if have != needed {
        return false;
    }
    sol.decoders.iter().all(|d| {
        let inputs = node_inputs(net, &active, &sol.weight, d.receiver);
        combine(&inputs, &d.coefficients, &global).as_deref() == Some(&unit(d.message)[..])
    })
}

/// Backtracking search over global coding vectors on a fixed edge set.
struct CodeSearch<'a> {
    net: &'a Network,
    field: Field,
    weight: &'a WeightVector,
    /// Message index -> coordinate among selected messages.
    coord: Vec<Option<usize>>,
    dim: usize,
    edges: Vec<usize>,
    allow_zero: bool,
    /// Receiver checks to run once position `p` is assigned (`usize::MAX` = before start).
    checks: Vec<(usize, usize, Vec<usize>)>,
    global: Vec<Vec<u32>>,
}

impl<'a> CodeSearch<'a> {
    fn new(
        net: &'a Network,
        field: Field,
        weight: &'a WeightVector,
        edge_set: &[usize],
        allow_zero: bool,
        topo_pos: &[usize],
    ) -> Self {
        let mut coord = vec![None; net.message_count()];
        let mut dim = 0;
        for i in weight.selected() {
            coord[i] = Some(dim);
            dim += 1;
        }
        let mut edges = edge_set.to_vec();
        edges.sort_by_key(|&e| (topo_pos[net.edges()[e].tail], e));
        let mut demands: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in weight.selected() {
            for &r in &net.messages()[i].receivers {
                match demands.iter_mut().find(|(x, _)| *x == r) {
                    Some((_, ms)) => ms.push(i),
                    None => demands.push((r, vec![i])),
                }
            }
        }
        let checks = demands
            .into_iter()
            .map(|(r, ms)| {
                let last = edges
                    .iter()
                    .rposition(|&e| net.edges()[e].head == r)
                    .unwrap_or(usize::MAX);
                (last, r, ms)
            })
            .collect();
        CodeSearch {
            net,
            field,
            weight,
            coord,
            dim,
            edges,
            allow_zero,
            checks,
            global: vec![Vec::new(); net.edge_count()],
        }
    }

    fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.dim];
        v[self.coord[i].expect("selected message")] = 1;
        v
    }

    fn span_at(&self, node: usize) -> Span {
        let mut span = Span::new(self.field, self.dim);
        for &e in &self.edges {
            if self.net.edges()[e].head == node && !self.global[e].is_empty() {
                span.insert(&self.global[e]);
            }
        }
        for (i, m) in self.net.messages().iter().enumerate() {
            if self.weight.get(i) && m.source == node {
                span.insert(&self.unit(i));
            }
        }
        span
    }

    fn checks_pass(&self, pos: usize) -> bool {
        self.checks
            .iter()
            .filter(|(p, _, _)| *p == pos)
            .all(|(_, r, ms)| {
                let span = self.span_at(*r);
                ms.iter().all(|&i| span.contains(&self.unit(i)))
            })
    }

    fn run(&mut self) -> Option<Vec<(usize, Vec<u32>)>> {
        if !self.checks_pass(usize::MAX) {
            return None;
        }
        if self.dfs(0) {
            Some(
                self.edges
                    .iter()
                    .map(|&e| (e, self.global[e].clone()))
                    .collect(),
            )
        } else {
            None
        }
    }

    fn dfs(&mut self, pos: usize) -> bool {
        if pos == self.edges.len() {
            return true;
        }
        let e = self.edges[pos];
        let span = self.span_at(self.net.edges()[e].tail);
        let mut candidates = span.projective_points();
        if self.allow_zero {
            candidates.push(vec![0; self.dim]);
        }
        for g in candidates {
            self.global[e] = g;
            if self.checks_pass(pos) && self.dfs(pos + 1) {
                return true;
            }
        }
        self.global[e].clear();
        false
    }
}

fn topo_positions(net: &Network) -> Result<Vec<usize>> {
    let order = net.topological_order()?;
    let mut pos = vec![0; net.node_count()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    Ok(pos)
}

/// Turns a global-vector assignment into local coefficients. Zero-carrying
/// edges are dropped from the active set.
fn build_witness(
    net: &Network,
    field: Field,
    weight: &WeightVector,
    assignment: &[(usize, Vec<u32>)],
) -> PartialSolution {
    let mu = net.message_count();
    let mut global: Vec<Option<Vec<u32>>> = vec![None; net.edge_count()];
    let mut coord = vec![None; mu];
    let mut dim = 0;
    for i in weight.selected() {
        coord[i] = Some(dim);
        dim += 1;
    }
    let mut active = vec![false; net.edge_count()];
    for (e, g) in assignment {
        if g.iter().any(|&x| x != 0) {
            active[*e] = true;
            global[*e] = Some(g.clone());
        }
    }
    let value = |inp: &Input| -> Vec<u32> {
        match *inp {
            Input::Edge(e) => global[e].clone().expect("active edge"),
            Input::Message(i) => {
                let mut v = vec![0u32; dim];
                v[coord[i].expect("selected")] = 1;
                v
            }
        }
    };
    let active_edges: Vec<usize> = (0..net.edge_count()).filter(|&e| active[e]).collect();
    let edge_coefficients = active_edges
        .iter()
        .map(|&e| {
            let inputs = node_inputs(net, &active, weight, net.edges()[e].tail);
            let cols: Vec<Vec<u32>> = inputs.iter().map(value).collect();
            field
                .solve(&cols, global[e].as_ref().expect("active"))
                .expect("global vector lies in the tail span")
        })
        .collect();
    let mut decoders = Vec::new();
    for i in weight.selected() {
        for &r in &net.messages()[i].receivers {
            let inputs = node_inputs(net, &active, weight, r);
            let cols: Vec<Vec<u32>> = inputs.iter().map(value).collect();
            let mut target = vec![0u32; dim];
            target[coord[i].expect("selected")] = 1;
            let coefficients = field.solve(&cols, &target).expect("receiver decodes");
            decoders.push(Decoder {
                receiver: r,
                message: i,
                coefficients,
            });
        }
    }
    decoders.sort_by_key(|d| (d.receiver, d.message));
    PartialSolution {
        weight: weight.clone(),
        active_edges,
        edge_coefficients,
        decoders,
    }
}

/// Edges that could ever carry useful data for `weight`: the tail is reachable
/// from a selected source and the head reaches a receiver of a selected message.
fn candidate_edges(net: &Network, weight: &WeightVector) -> Vec<usize> {
    let n = net.node_count();
    let mut from_src = vec![false; n];
    let mut to_recv = vec![false; n];
    for i in weight.selected() {
        let m = &net.messages()[i];
        for (v, r) in net.reachable_from(m.source, |_| true).into_iter().enumerate() {
            from_src[v] |= r;
        }
        for &r in &m.receivers {
            to_recv[r] = true;
        }
    }
    if let Ok(order) = net.topological_order() {
        for &v in order.iter().rev() {
            if net.edges().iter().any(|e| e.tail == v && to_recv[e.head]) {
                to_recv[v] = true;
            }
        }
    }
    (0..net.edge_count())
        .filter(|&e| from_src[net.edges()[e].tail] && to_recv[net.edges()[e].head])
        .collect()
}

fn check_weight(net: &Network, weight: &WeightVector) -> Result<()> {
    if weight.len() != net.message_count() {
        return Err(Error::Dimension {
            expected: net.message_count(),
            got: weight.len(),
        });
    }
    Ok(())
}

/// A minimal witness if `weight` admits a scalar-linear solution over `field`.
pub fn is_scalar_linear_solvable(
    net: &Network,
    weight: &WeightVector,
    field: Field,
) -> Result<Option<PartialSolution>> {
    check_weight(net, weight)?;
    let topo = topo_positions(net)?;
    let solve_on = |edges: &[usize]| {
        CodeSearch::new(net, field, weight, edges, true, &topo).run()
    };
    let Some(mut assignment) = solve_on(&candidate_edges(net, weight)) else {
        return Ok(None);
    };
    // Greedy deletion reaches a minimal active set because solvability is
    // monotone in the edge set.
    let support = |a: &[(usize, Vec<u32>)]| -> Vec<usize> {
        a.iter()
            .filter(|(_, g)| g.iter().any(|&x| x != 0))
            .map(|(e, _)| *e)
            .collect()
    };
    let mut current = support(&assignment);
    current.sort_unstable();
    for e in current.clone().into_iter().rev() {
        if !current.contains(&e) {
            continue;
        }
        let trial: Vec<usize> = current.iter().copied().filter(|&x| x != e).collect();
        if let Some(a) = solve_on(&trial) {
            assignment = a;
            current = support(&assignment);
            current.sort_unstable();
        }
    }
    Ok(Some(build_witness(net, field, weight, &assignment)))
}

/// Necessary conditions for `mask` to be a minimal active set.
fn plausible(net: &Network, weight: &WeightVector, mask: &[bool]) -> bool {
    let n = net.node_count();
    let mut from_src = vec![false; n];
    for i in weight.selected() {
        let m = &net.messages()[i];
        let reach = net.reachable_from(m.source, |e| mask[e]);
        if m.receivers.iter().any(|&r| !reach[r]) {
            return false;
        }
        for (v, r) in reach.into_iter().enumerate() {
            from_src[v] |= r;
        }
    }
    // Every edge must start somewhere fed and end somewhere useful.
    let mut to_recv = vec![false; n];
    for i in weight.selected() {
        for &r in &net.messages()[i].receivers {
            to_recv[r] = true;
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for (e, edge) in net.edges().iter().enumerate() {
            if mask[e] && to_recv[edge.head] && !to_recv[edge.tail] {
                to_recv[edge.tail] = true;
                changed = true;
            }
        }
    }
    net.edges()
        .iter()
        .enumerate()
        .all(|(e, edge)| !mask[e] || (from_src[edge.tail] && to_recv[edge.head]))
}

/// Every minimal active edge set admitting a solution for `weight`, each with a
/// witness, sorted by active set. Subsets are scanned by increasing size and
/// supersets of sets already found are skipped, so every hit is minimal.
pub fn enumerate_minimal_partial_solutions(
    net: &Network,
    weight: &WeightVector,
    field: Field,
    exec: Exec,
) -> Result<Vec<PartialSolution>> {
    check_weight(net, weight)?;
    if weight.is_zero() {
        return Ok(vec![build_witness(net, field, weight, &[])]);
    }
    let topo = topo_positions(net)?;
    let cand = candidate_edges(net, weight);
    if cand.len() > MAX_CANDIDATE_EDGES {
        return Err(Error::TooLarge(format!(
            "{} candidate edges for weight {weight}",
            cand.len()
        )));
    }
    let c = cand.len();
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); c + 1];
    for mask in 0u32..(1u32 << c) {
        by_size[mask.count_ones() as usize].push(mask);
    }
    let mut found: Vec<u32> = Vec::new();
    let mut out: Vec<PartialSolution> = Vec::new();
    for level in by_size {
        let pending: Vec<u32> = level
            .into_iter()
            .filter(|&m| found.iter().all(|&f| m & f != f))
            .collect();
        let hits = exec.map(&pending, |&mask| {
            let mut full = vec![false; net.edge_count()];
            let mut edges = Vec::new();
            for (k, &e) in cand.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    full[e] = true;
                    edges.push(e);
                }
            }
            if !plausible(net, weight, &full) {
                return None;
            }
            CodeSearch::new(net, field, weight, &edges, false, &topo)
                .run()
                .map(|a| build_witness(net, field, weight, &a))
        });
        for (mask, hit) in pending.into_iter().zip(hits) {
            if let Some(sol) = hit {
                found.push(mask);
                out.push(sol);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Unsolvable(field.order()));
    }
    out.sort_by(|a, b| a.active_edges.cmp(&b.active_edges));
    Ok(out)
}

/// All weight vectors with a scalar-linear solution, in binary counting order
/// (bit `i` of the counter is message `i`).
pub fn enumerate_weight_vectors(net: &Network, field: Field, exec: Exec) -> Result<Vec<WeightVector>> {
    let mu = net.message_count();
    if mu > 16 {
        return Err(Error::TooLarge(format!("{mu} messages")));
    }
    let all: Vec<WeightVector> = (0..1u64 << mu).map(|c| WeightVector::from_code(mu, c)).collect();
    let solvable = exec.map(&all, |w| is_scalar_linear_solvable(net, w, field));
    let mut out = Vec::new();
    for (w, s) in all.into_iter().zip(solvable) {
        if s?.is_some() {
            out.push(w);
        }
    }
    Ok(out)
}

/// Cheapest solution in a precomputed minimal-solution list (first wins ties).
pub fn min_cost_scalar_linear<'s, T>(
    solutions: &'s [PartialSolution],
    lengths: &[T],
) -> Option<(&'s PartialSolution, T)>
where
    T: Clone + Zero + Add<Output = T> + PartialOrd,
{
    let mut best: Option<(&PartialSolution, T)> = None;
    for s in solutions {
        let c = s.cost(lengths);
        if best.as_ref().is_none_or(|(_, b)| c < *b) {
            best = Some((s, c));
        }
    }
    best
}

/// Associated weight vectors with their minimal partial solutions, computed
/// once per (network, field).
#[derive(Debug, Clone)]
pub struct WeightTable {
    pub field: Field,
    pub entries: Vec<(WeightVector, Vec<PartialSolution>)>,
}

impl WeightTable {
    pub fn build(net: &Network, field: Field, exec: Exec) -> Result<WeightTable> {
        let weights = enumerate_weight_vectors(net, field, exec)?;
        let mut entries = Vec::with_capacity(weights.len());
        for w in weights {
            let sols = enumerate_minimal_partial_solutions(net, &w, field, exec)?;
            entries.push((w, sols));
        }
        Ok(WeightTable { field, entries })
    }

    /// Number of associated weight vectors.
    pub fn count(&self) -> usize {
        self.entries.len()
    }

    pub fn solutions(&self, w: &WeightVector) -> Option<&[PartialSolution]> {
        self.entries
            .iter()
            .find(|(x, _)| x == w)
            .map(|(_, s)| s.as_slice())
    }

    pub fn min_cost<T>(&self, w: &WeightVector, lengths: &[T]) -> Result<(&PartialSolution, T)>
    where
        T: Clone + Zero + Add<Output = T> + PartialOrd,
    {
        self.solutions(w)
            .and_then(|s| min_cost_scalar_linear(s, lengths))
            .ok_or(Error::Unsolvable(self.field.order()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::rational::{int, Rational};
    use crate::steiner::enumerate_minimal_steiner_trees;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn edge(net: &Network, a: &str, b: &str) -> usize {
        net.edges()
            .iter()
            .position(|e| net.nodes()[e.tail] == a && net.nodes()[e.head] == b)
            .unwrap()
    }

    #[test]
    fn butterfly_codes_over_gf2() {
        let net = butterfly();
        let w = WeightVector::new(vec![true, true]);
        let sol = is_scalar_linear_solvable(&net, &w, gf(2)).unwrap().expect("solvable");
        assert!(verify_partial_solution(&net, gf(2), &sol));
        assert_eq!(sol.active_edges.len(), 7);
        // u -> v carries m1 + m2: both coefficients over u's inputs are one.
        let uv = edge(&net, "u", "v");
        let k = sol.active_edges.iter().position(|&e| e == uv).unwrap();
        assert_eq!(sol.edge_coefficients[k], vec![1, 1]);
    }

    #[test]
    fn butterfly_cut_is_unsolvable() {
        let net = butterfly_cut();
        let w = WeightVector::new(vec![true, true]);
        for q in [2, 3, 5] {
            assert!(is_scalar_linear_solvable(&net, &w, gf(q)).unwrap().is_none());
        }
    }

    #[test]
    fn zero_weight_is_trivially_solvable() {
        for net in [butterfly(), diamond()] {
            let w = WeightVector::zeros(net.message_count());
            let sol = is_scalar_linear_solvable(&net, &w, gf(2)).unwrap().unwrap();
            assert!(sol.active_edges.is_empty());
            assert!(verify_partial_solution(&net, gf(2), &sol));
            let sols = enumerate_minimal_partial_solutions(&net, &w, gf(2), Exec::Sequential).unwrap();
            let (s, c) = min_cost_scalar_linear(&sols, &vec![int(1); net.edge_count()]).unwrap();
            assert!(s.active_edges.is_empty());
            assert_eq!(c, int(0));
        }
    }

    #[test]
    fn weight_vectors() {
        let ws = enumerate_weight_vectors(&butterfly(), gf(2), Exec::default()).unwrap();
        let shown: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["(0,0)", "(1,0)", "(0,1)", "(1,1)"]);
        let ws = enumerate_weight_vectors(&diamond(), gf(2), Exec::default()).unwrap();
        assert_eq!(ws.len(), 2);
        let ws = enumerate_weight_vectors(&parallel(), gf(2), Exec::default()).unwrap();
        assert_eq!(ws.len(), 4);
        let ws = enumerate_weight_vectors(&butterfly_cut(), gf(2), Exec::default()).unwrap();
        assert_eq!(ws.len(), 1, "cut butterfly cannot even route single messages");
    }

    #[test]
    fn minimal_solutions() {
        let net = butterfly();
        let f = gf(2);
        let w10 = WeightVector::unit(2, 0);
        let sols = enumerate_minimal_partial_solutions(&net, &w10, f, Exec::default()).unwrap();
        let trees: Vec<Vec<usize>> = enumerate_minimal_steiner_trees(&net, 0)
            .unwrap()
            .into_iter()
            .map(|t| t.edges)
            .collect();
        let sets: Vec<Vec<usize>> = sols.iter().map(|s| s.active_edges.clone()).collect();
        assert_eq!(sets, trees);

        let w11 = WeightVector::new(vec![true, true]);
        let sols = enumerate_minimal_partial_solutions(&net, &w11, f, Exec::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].active_edges, (0..7).collect::<Vec<_>>());
        assert!(sols.iter().all(|s| verify_partial_solution(&net, f, s)));

        let d = diamond();
        let sols =
            enumerate_minimal_partial_solutions(&d, &WeightVector::unit(1, 0), f, Exec::default())
                .unwrap();
        assert_eq!(sols.len(), 2);

        let err = enumerate_minimal_partial_solutions(&butterfly_cut(), &w11, f, Exec::default());
        assert_eq!(err.unwrap_err(), Error::Unsolvable(2));
    }

    #[test]
    fn min_cost() {
        let net = butterfly();
        let table = WeightTable::build(&net, gf(2), Exec::default()).unwrap();
        assert_eq!(table.count(), 4);
        let (_, c) = table
            .min_cost(&WeightVector::new(vec![true, true]), &vec![int(1); 7])
            .unwrap();
        assert_eq!(c, int(7));

        let d = diamond();
        let table = WeightTable::build(&d, gf(2), Exec::default()).unwrap();
        let mut l: Vec<Rational> = vec![int(1); 4];
        l[edge(&d, "s", "a")] = int(3);
        let (s, c) = table.min_cost(&WeightVector::unit(1, 0), &l).unwrap();
        assert_eq!(c, int(2));
        assert_eq!(s.active_edges, {
            let mut v = vec![edge(&d, "s", "b"), edge(&d, "b", "t")];
            v.sort();
            v
        });
        assert!(table.min_cost(&WeightVector::new(vec![true]), &l).is_ok());
    }

    #[test]
    fn corrupted_witness_fails_verification() {
        let net = butterfly();
        let w = WeightVector::new(vec![true, true]);
        let mut sol = is_scalar_linear_solvable(&net, &w, gf(2)).unwrap().unwrap();
        let k = sol.active_edges.iter().position(|&e| e == edge(&net, "u", "v")).unwrap();
        sol.edge_coefficients[k] = vec![1, 0];
        assert!(!verify_partial_solution(&net, gf(2), &sol));
    }

    #[test]
    fn larger_fields_agree_on_butterfly() {
        let net = butterfly();
        for q in [3, 5] {
            let ws = enumerate_weight_vectors(&net, gf(q), Exec::default()).unwrap();
            assert_eq!(ws.len(), 4);
            let w = WeightVector::new(vec![true, true]);
            let sol = is_scalar_linear_solvable(&net, &w, gf(q)).unwrap().unwrap();
            assert!(verify_partial_solution(&net, gf(q), &sol));
        }
    }
}
