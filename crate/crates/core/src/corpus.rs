//! Seeded random DAG networks for sweeps and tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{Edge, Message, Network};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub count: usize,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub min_edges: usize,
    pub max_edges: usize,
    pub messages: usize,
    pub max_capacity: u64,
    pub max_receivers: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            count: 25,
            min_nodes: 5,
            max_nodes: 8,
            min_edges: 7,
            max_edges: 12,
            messages: 2,
            max_capacity: 3,
            max_receivers: 2,
            seed: 2024,
        }
    }
}

/// Attempts per network before the spec is declared unsatisfiable.
const MAX_ATTEMPTS: usize = 10_000;

impl CorpusSpec {
    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Corpus(m.to_string()));
        if self.min_nodes < 2 || self.min_nodes > self.max_nodes {
            return bad("node range must satisfy 2 <= min <= max");
        }
        if self.min_edges == 0 || self.min_edges > self.max_edges {
            return bad("edge range must satisfy 1 <= min <= max");
        }
        if self.min_edges > self.max_nodes * (self.max_nodes - 1) / 2 {
            return bad("too many edges for an acyclic graph on the given nodes");
        }
        if self.messages == 0 || self.max_capacity == 0 || self.max_receivers == 0 {
            return bad("messages, capacity and receivers must be positive");
        }
        Ok(())
    }

    fn attempt(&self, rng: &mut ChaCha8Rng) -> Option<Network> {
        let n = rng.gen_range(self.min_nodes..=self.max_nodes);
        let max_m = (n * (n - 1) / 2).min(self.max_edges);
        if max_m < self.min_edges {
            return None;
        }
        let m = rng.gen_range(self.min_edges..=max_m);
        let mut pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        pairs.shuffle(rng);
        pairs.truncate(m);
        pairs.sort_unstable();
        let edges: Vec<Edge> = pairs
            .into_iter()
            .map(|(tail, head)| Edge {
                tail,
                head,
                capacity: rng.gen_range(1..=self.max_capacity),
            })
            .collect();
        let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();

        let mut reach = vec![vec![false; n]; n];
        for v in (0..n).rev() {
            reach[v][v] = true;
            for e in edges.iter().filter(|e| e.tail == v) {
                let row = reach[e.head].clone();
                for (x, r) in reach[v].iter_mut().zip(row) {
                    *x |= r;
                }
            }
        }
        let mut messages = Vec::new();
        for k in 0..self.messages {
            let sources: Vec<usize> = (0..n).filter(|&s| (0..n).any(|t| t != s && reach[s][t])).collect();
            let &source = sources.choose(rng)?;
            let mut targets: Vec<usize> = (0..n).filter(|&t| t != source && reach[source][t]).collect();
            targets.shuffle(rng);
            let r = rng.gen_range(1..=self.max_receivers.min(targets.len()));
            targets.truncate(r);
            messages.push(Message {
                name: format!("m{}", k + 1),
                source,
                receivers: targets,
            });
        }
        let net = Network::new(nodes, edges, messages, 2).ok()?;
        net.validate().is_admissible().then_some(net)
    }
}

/// Deterministic in the seed: the same spec always yields the same networks.
pub fn gen_corpus(spec: &CorpusSpec) -> Result<Vec<Network>> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let net = (0..MAX_ATTEMPTS)
            .find_map(|_| spec.attempt(&mut rng))
            .ok_or_else(|| Error::Corpus("no admissible network found".into()))?;
        out.push(net);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_within_bounds() {
        let spec = CorpusSpec::default();
        let a = gen_corpus(&spec).unwrap();
        let b = gen_corpus(&spec).unwrap();
        assert_eq!(a.len(), 25);
        assert_eq!(
            a.iter().map(Network::serialize).collect::<Vec<_>>(),
            b.iter().map(Network::serialize).collect::<Vec<_>>()
        );
        for n in &a {
            assert!(n.node_count() <= 8 && n.edge_count() <= 12);
            assert_eq!(n.message_count(), 2);
            assert!(n.edges().iter().all(|e| (1..=3).contains(&e.capacity)));
            assert!(n.validate().is_admissible());
        }
        let other = gen_corpus(&CorpusSpec {
            seed: 7,
            ..spec
        })
        .unwrap();
        assert_ne!(a[0].serialize(), other[0].serialize());
    }

    #[test]
    fn rejects_impossible_specs() {
        let spec = CorpusSpec {
            min_nodes: 3,
            max_nodes: 3,
            min_edges: 4,
            max_edges: 4,
            ..CorpusSpec::default()
        };
        assert!(matches!(gen_corpus(&spec), Err(Error::Corpus(_))));
        let spec = CorpusSpec {
            messages: 0,
            ..CorpusSpec::default()
        };
        assert!(gen_corpus(&spec).is_err());
    }
}
