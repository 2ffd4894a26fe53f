//! Directed Steiner trees: exhaustive enumeration of the minimal ones and
//! min-cost queries (exact table scan or shortest-path union).

use std::ops::Add;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::network::Network;
use crate::rational::Rational;

/// A minimal edge set connecting a message's source to all its receivers.
/// In an acyclic graph this is an out-arborescence whose leaves are receivers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SteinerTree {
    pub message: usize,
    /// Sorted edge indices.
    pub edges: Vec<usize>,
}

impl SteinerTree {
    pub fn uses(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// The 0/1 indicator over all edges of the network.
    pub fn indicator(&self, edge_count: usize) -> Vec<u8> {
        let mut v = vec![0; edge_count];
        for &e in &self.edges {
            v[e] = 1;
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthFunction(Vec<Rational>);

impl LengthFunction {
    pub fn new(lengths: Vec<Rational>) -> Result<Self> {
        if lengths.iter().any(|l| !l.is_positive()) {
            return Err(Error::InvalidNetwork("edge lengths must be positive".into()));
        }
        Ok(LengthFunction(lengths))
    }

    pub fn uniform(edge_count: usize) -> Self {
        LengthFunction(vec![Rational::from_integer(1.into()); edge_count])
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

pub fn edge_set_cost<T>(edges: &[usize], lengths: &[T]) -> T
where
    T: Clone + Zero + Add<Output = T>,
{
    edges
        .iter()
        .fold(T::zero(), |acc, &e| acc + lengths[e].clone())
}

/// True if `edges` contain a directed path from the message source to every receiver.
pub fn connects(net: &Network, message: usize, edges: &[usize]) -> bool {
    let mut allowed = vec![false; net.edge_count()];
    for &e in edges {
        allowed[e] = true;
    }
    let m = &net.messages()[message];
    let reach = net.reachable_from(m.source, |e| allowed[e]);
    m.receivers.iter().all(|&r| reach[r])
}

/// Connectivity plus single-edge-deletion minimality.
pub fn is_minimal_steiner_tree(net: &Network, message: usize, edges: &[usize]) -> bool {
    if !connects(net, message, edges) {
        return false;
    }
    (0..edges.len()).all(|skip| {
        let rest: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &e)| e)
            .collect();
        !connects(net, message, &rest)
    })
}

/// Every minimal Steiner tree of `message`, sorted by edge list.
///
/// Nodes are visited in topological order; each relevant node is either left
/// out (receivers never are) or attached through one in-edge from an already
/// included node. Completed assignments with a non-receiver leaf are dropped.
pub fn enumerate_minimal_steiner_trees(net: &Network, message: usize) -> Result<Vec<SteinerTree>> {
    let order = net.topological_order()?;
    let m = &net.messages()[message];
    let n = net.node_count();
    let from_source = net.reachable_from(m.source, |_| true);

    // Nodes that can reach some receiver.
    let mut to_receiver = vec![false; n];
    for &r in &m.receivers {
        to_receiver[r] = true;
    }
    for &v in order.iter().rev() {
        if net.edges().iter().any(|e| e.tail == v && to_receiver[e.head]) {
            to_receiver[v] = true;
        }
    }
    if m.receivers.iter().any(|&r| !from_source[r]) {
        return Ok(Vec::new());
    }
    let relevant: Vec<bool> = (0..n).map(|v| from_source[v] && to_receiver[v]).collect();
    let mut is_receiver = vec![false; n];
    for &r in &m.receivers {
        is_receiver[r] = true;
    }
    let in_edges = net.in_edges();
    let sequence: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&v| v != m.source && relevant[v])
        .collect();

    struct Search<'a> {
        net: &'a Network,
        sequence: Vec<usize>,
        in_edges: Vec<Vec<usize>>,
        relevant: Vec<bool>,
        is_receiver: Vec<bool>,
        included: Vec<bool>,
        children: Vec<usize>,
        chosen: Vec<usize>,
        out: Vec<Vec<usize>>,
    }

    impl Search<'_> {
        fn run(&mut self, pos: usize) {
            if pos == self.sequence.len() {
                let ok = (0..self.included.len()).all(|v| {
                    !self.included[v] || self.is_receiver[v] || self.children[v] > 0
                });
                if ok {
                    let mut edges = self.chosen.clone();
                    edges.sort_unstable();
                    self.out.push(edges);
                }
                return;
            }
            let v = self.sequence[pos];
            if !self.is_receiver[v] {
                self.run(pos + 1);
            }
            for i in 0..self.in_edges[v].len() {
                let e = self.in_edges[v][i];
                let t = self.net.edges()[e].tail;
                if !self.relevant[t] || !self.included[t] {
                    continue;
                }
                self.included[v] = true;
                self.children[t] += 1;
                self.chosen.push(e);
                self.run(pos + 1);
                self.chosen.pop();
                self.children[t] -= 1;
                self.included[v] = false;
            }
        }
    }

    let mut search = Search {
        net,
        sequence,
        in_edges,
        relevant,
        is_receiver,
        included: vec![false; n],
        children: vec![0; n],
        chosen: Vec::new(),
        out: Vec::new(),
    };
    search.included[m.source] = true;
    search.run(0);
    let mut trees: Vec<SteinerTree> = search
        .out
        .into_iter()
        .map(|edges| SteinerTree { message, edges })
        .collect();
    trees.sort();
    trees.dedup();
    Ok(trees)
}

/// Cheapest tree in `trees`; the first in list order wins ties.
pub fn min_cost_steiner_exact<T>(trees: &[SteinerTree], lengths: &[T]) -> Option<(usize, T)>
where
    T: Clone + Zero + Add<Output = T> + PartialOrd,
{
    let mut best: Option<(usize, T)> = None;
    for (i, t) in trees.iter().enumerate() {
        let c = edge_set_cost(&t.edges, lengths);
        if best.as_ref().is_none_or(|(_, b)| c < *b) {
            best = Some((i, c));
        }
    }
    best
}

/// Union of per-receiver shortest paths, pruned to a minimal tree. Ties in the
/// path relaxation go to the smaller edge index.
pub fn min_cost_steiner_shortest_paths<T>(
    net: &Network,
    message: usize,
    lengths: &[T],
) -> Result<Option<(Vec<usize>, T)>>
where
    T: Clone + Zero + Add<Output = T> + PartialOrd,
{
    let order = net.topological_order()?;
    let m = &net.messages()[message];
    let n = net.node_count();
    let in_edges = net.in_edges();
    let mut dist: Vec<Option<T>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[m.source] = Some(T::zero());
    for &v in &order {
        if v == m.source {
            continue;
        }
        for &e in &in_edges[v] {
            let t = net.edges()[e].tail;
            let Some(dt) = dist[t].clone() else { continue };
            let cand = dt + lengths[e].clone();
            let better = match &dist[v] {
                None => true,
                Some(d) => cand < *d || (cand == *d && pred[v].is_none_or(|p| e < p)),
            };
            if better {
                dist[v] = Some(cand);
                pred[v] = Some(e);
            }
        }
    }
    let mut used = vec![false; net.edge_count()];
    for &r in &m.receivers {
        if dist[r].is_none() {
            return Ok(None);
        }
        let mut v = r;
        while v != m.source {
            let e = pred[v].expect("reachable node has a predecessor");
            used[e] = true;
            v = net.edges()[e].tail;
        }
    }
    let mut edges: Vec<usize> = (0..net.edge_count()).filter(|&e| used[e]).collect();
    for e in (0..net.edge_count()).rev() {
        if !used[e] {
            continue;
        }
        let trial: Vec<usize> = edges.iter().copied().filter(|&x| x != e).collect();
        if connects(net, message, &trial) {
            edges = trial;
        }
    }
    let cost = edge_set_cost(&edges, lengths);
    Ok(Some((edges, cost)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::rational::{int, ratio};

    fn edge_ids(net: &Network, pairs: &[(&str, &str)]) -> Vec<usize> {
        let mut ids: Vec<usize> = pairs
            .iter()
            .map(|(a, b)| {
                net.edges()
                    .iter()
                    .position(|e| net.nodes()[e.tail] == *a && net.nodes()[e.head] == *b)
                    .unwrap()
            })
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Exhaustive subset oracle, independent of the arborescence search.
    fn brute_force_trees(net: &Network, message: usize) -> Vec<Vec<usize>> {
        let m = net.edge_count();
        let mut out = Vec::new();
        for mask in 0u32..(1 << m) {
            let edges: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            if is_minimal_steiner_tree(net, message, &edges) {
                out.push(edges);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn diamond_has_two_trees() {
        let net = diamond();
        let trees = enumerate_minimal_steiner_trees(&net, 0).unwrap();
        let got: Vec<Vec<usize>> = trees.iter().map(|t| t.edges.clone()).collect();
        let mut want = vec![
            edge_ids(&net, &[("s", "a"), ("a", "t")]),
            edge_ids(&net, &[("s", "b"), ("b", "t")]),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(got, brute_force_trees(&net, 0));
    }

    #[test]
    fn butterfly_trees_all_share_the_bottleneck() {
        let net = butterfly();
        // t2 is reached only through u->v; t1 directly or through v.
        let t = enumerate_minimal_steiner_trees(&net, 0).unwrap();
        let got: Vec<Vec<usize>> = t.iter().map(|t| t.edges.clone()).collect();
        let mut want = vec![
            edge_ids(&net, &[("s1", "t1"), ("s1", "u"), ("u", "v"), ("v", "t2")]),
            edge_ids(&net, &[("s1", "u"), ("u", "v"), ("v", "t1"), ("v", "t2")]),
        ];
        want.sort();
        assert_eq!(got, want);
        for msg in 0..2 {
            let got: Vec<Vec<usize>> = enumerate_minimal_steiner_trees(&net, msg)
                .unwrap()
                .into_iter()
                .map(|t| t.edges)
                .collect();
            assert_eq!(got, brute_force_trees(&net, msg));
        }
    }

    #[test]
    fn single_edge_tree() {
        let net = single_edge();
        let t = enumerate_minimal_steiner_trees(&net, 0).unwrap();
        assert_eq!(t, vec![SteinerTree { message: 0, edges: vec![0] }]);
        assert_eq!(t[0].indicator(1), vec![1]);
    }

    #[test]
    fn parallel_edges_are_distinct_trees() {
        let net = Network::parse("node s\nnode t\nedge s t 1\nedge s t 2\nmessage m s t\n").unwrap();
        let t = enumerate_minimal_steiner_trees(&net, 0).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn relabeling_keeps_tree_count() {
        let relabeled = Network::parse(
            "node t\nnode b\nnode a\nnode s\nedge b t 1\nedge s b 1\nedge a t 1\nedge s a 1\nmessage m1 s t\n",
        )
        .unwrap();
        assert_eq!(enumerate_minimal_steiner_trees(&relabeled, 0).unwrap().len(), 2);
    }

    #[test]
    fn exact_min_cost() {
        let net = diamond();
        let trees = enumerate_minimal_steiner_trees(&net, 0).unwrap();
        let (i, c) = min_cost_steiner_exact(&trees, LengthFunction::uniform(4).as_slice()).unwrap();
        assert_eq!((i, c), (0, int(2)));

        let sa = edge_ids(&net, &[("s", "a")])[0];
        let mut l = vec![int(1); 4];
        l[sa] = int(3);
        let (i, c) = min_cost_steiner_exact(&trees, &l).unwrap();
        assert_eq!(trees[i].edges, edge_ids(&net, &[("s", "b"), ("b", "t")]));
        assert_eq!(c, int(2));

        let bf = butterfly();
        let trees = enumerate_minimal_steiner_trees(&bf, 0).unwrap();
        let l: Vec<Rational> = (1..=7).map(|k| ratio(k, 3)).collect();
        let (_, c) = min_cost_steiner_exact(&trees, &l).unwrap();
        let want: Rational = trees[0].edges.iter().map(|&e| l[e].clone()).sum();
        assert_eq!(c, want);
    }

    #[test]
    fn shortest_path_union() {
        let net = diamond();
        let (edges, c) = min_cost_steiner_shortest_paths(&net, 0, &vec![int(1); 4])
            .unwrap()
            .unwrap();
        assert_eq!(c, int(2));
        assert!(is_minimal_steiner_tree(&net, 0, &edges));

        let bf = butterfly();
        let (edges, _) = min_cost_steiner_shortest_paths(&bf, 0, &[1.0f64; 7]).unwrap().unwrap();
        assert_eq!(
            edges,
            edge_ids(&bf, &[("s1", "t1"), ("s1", "u"), ("u", "v"), ("v", "t2")])
        );

        // Star: disjoint paths to three receivers.
        let star = Network::parse(
            "node s\nnode a\nnode b\nnode c\nnode x\nnode y\nnode z\n\
             edge s a 1\nedge a x 1\nedge s b 1\nedge b y 1\nedge s c 1\nedge c z 1\n\
             message m s x,y,z\n",
        )
        .unwrap();
        let l: Vec<Rational> = (1..=6).map(int).collect();
        let (_, c) = min_cost_steiner_shortest_paths(&star, 0, &l).unwrap().unwrap();
        let trees = enumerate_minimal_steiner_trees(&star, 0).unwrap();
        assert_eq!(c, min_cost_steiner_exact(&trees, &l).unwrap().1);
    }

    #[test]
    fn rejects_nonpositive_lengths() {
        assert!(LengthFunction::new(vec![int(1), int(0)]).is_err());
    }
}
