//! Capacitated acyclic multigraph with multiple-multicast messages.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub name: String,
    pub source: usize,
    /// Sorted by node index, no duplicates.
    pub receivers: Vec<usize>,
}

/// Nodes, edges and messages are addressed by their position in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    messages: Vec<Message>,
    alphabet_size: u32,
    index: HashMap<String, usize>,
}

impl Network {
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<Edge>,
        messages: Vec<Message>,
        alphabet_size: u32,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateNode(n.clone()));
            }
        }
        let bound = |v: usize| -> Result<()> {
            if v < nodes.len() {
                Ok(())
            } else {
                Err(Error::UnknownNode(format!("#{v}")))
            }
        };
        for e in &edges {
            bound(e.tail)?;
            bound(e.head)?;
            if e.capacity == 0 {
                return Err(Error::InvalidNetwork("edge capacity must be positive".into()));
            }
        }
        let mut messages = messages;
        let mut seen = HashMap::new();
        for m in &mut messages {
            bound(m.source)?;
            for &r in &m.receivers {
                bound(r)?;
            }
            m.receivers.sort_unstable();
            m.receivers.dedup();
            if m.receivers.is_empty() {
                return Err(Error::InvalidNetwork(format!(
                    "message `{}` has no receivers",
                    m.name
                )));
            }
            if seen.insert(m.name.clone(), ()).is_some() {
                return Err(Error::DuplicateMessage(m.name.clone()));
            }
        }
        if alphabet_size == 0 {
            return Err(Error::InvalidNetwork("alphabet size must be positive".into()));
        }
        Ok(Network {
            nodes,
            edges,
            messages,
            alphabet_size,
            index,
        })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn message_count(&self) -> usize {
        self.messages.len()
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn capacities(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| int(e.capacity as i64)).collect()
    }

    pub fn edge_label(&self, e: usize) -> String {
        let edge = &self.edges[e];
        format!("{}->{}", self.nodes[edge.tail], self.nodes[edge.head])
    }

    /// Copy of the network without edge `e`; later edges shift down by one.
    pub fn without_edge(&self, e: usize) -> Network {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Network {
            edges,
            ..self.clone()
        }
    }

    pub fn in_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.nodes.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.head].push(i);
        }
        inc
    }

    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.tail].push(i);
        }
        out
    }

    /// Nodes reachable from `from` using only edges accepted by `allowed`.
    pub fn reachable_from(&self, from: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
        let out = self.out_edges();
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &out[v] {
                if !allowed(e) {
                    continue;
                }
                let h = self.edges[e].head;
                if !seen[h] {
                    seen[h] = true;
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    /// Kahn's algorithm, always releasing the smallest ready node index first.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut indeg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            indeg[e.head] += 1;
        }
        let out = self.out_edges();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..self.nodes.len()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &e in &out[v] {
                let h = self.edges[e].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.insert(h);
                }
            }
        }
        if order.len() != self.nodes.len() {
            return Err(Error::Cycle);
        }
        Ok(order)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let acyclic = self.topological_order().is_ok();
        if !acyclic {
            violations.push(Violation::Cycle);
        }
        for (i, m) in self.messages.iter().enumerate() {
            if m.receivers.contains(&m.source) {
                violations.push(Violation::Degenerate {
                    message: i,
                    node: m.source,
                });
            }
            let reach = self.reachable_from(m.source, |_| true);
            for &r in &m.receivers {
                if r != m.source && !reach[r] {
                    violations.push(Violation::Unreachable {
                        message: i,
                        receiver: r,
                    });
                }
            }
        }
        ValidationReport {
            violations: violations
                .into_iter()
                .map(|v| (v.clone(), v.describe(self)))
                .collect(),
        }
    }

    /// Fails with [`Error::InvalidNetwork`] unless the validation report is empty.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_admissible() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(report.to_string()))
        }
    }

    /// Like [`Network::ensure_valid`] but tolerates unreachable receivers,
    /// whose messages then simply have rate zero.
    pub fn ensure_structural(&self) -> Result<()> {
        let report = ValidationReport {
            violations: self
                .validate()
                .violations
                .into_iter()
                .filter(|(v, _)| !matches!(v, Violation::Unreachable { .. }))
                .collect(),
        };
        if report.is_admissible() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(report.to_string()))
        }
    }

    /// Per-message rate bound: total out-capacity of the message's source.
    pub fn rate_upper_bounds(&self) -> Vec<Rational> {
        let out = self.out_edges();
        self.messages
            .iter()
            .map(|m| {
                let total: u64 = out[m.source].iter().map(|&e| self.edges[e].capacity).sum();
                int(total as i64)
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Network> {
        let mut nodes: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut raw_edges = Vec::new();
        let mut raw_messages = Vec::new();
        let mut alphabet = 2u32;
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let syntax = |msg: String| Error::Syntax { line: line_no, msg };
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            match toks[0] {
                "node" => {
                    let [_, id] = toks[..] else {
                        return Err(syntax("expected `node <id>`".into()));
                    };
                    if !is_identifier(id) {
                        return Err(syntax(format!("bad node id `{id}`")));
                    }
                    if index.insert(id.to_string(), nodes.len()).is_some() {
                        return Err(Error::DuplicateNode(id.to_string()));
                    }
                    nodes.push(id.to_string());
                }
                "edge" => {
                    let [_, tail, head, cap] = toks[..] else {
                        return Err(syntax("expected `edge <tail> <head> <capacity>`".into()));
                    };
                    let capacity: u64 = cap
                        .parse()
                        .ok()
                        .filter(|&c| c > 0)
                        .ok_or_else(|| syntax(format!("bad capacity `{cap}`")))?;
                    raw_edges.push((tail.to_string(), head.to_string(), capacity));
                }
                "message" => {
                    let [_, id, source, recv] = toks[..] else {
                        return Err(syntax(
                            "expected `message <id> <source> <recv1>[,<recv2>...]`".into(),
                        ));
                    };
                    let receivers: Vec<String> =
                        recv.split(',').map(|s| s.trim().to_string()).collect();
                    if receivers.iter().any(|r| r.is_empty()) {
                        return Err(syntax("empty receiver".into()));
                    }
                    raw_messages.push((id.to_string(), source.to_string(), receivers));
                }
                "alphabet" => {
                    let [_, size] = toks[..] else {
                        return Err(syntax("expected `alphabet <size>`".into()));
                    };
                    alphabet = size
                        .parse()
                        .ok()
                        .filter(|&a| a > 0)
                        .ok_or_else(|| syntax(format!("bad alphabet size `{size}`")))?;
                }
                other => return Err(syntax(format!("unknown directive `{other}`"))),
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownNode(name.to_string()))
        };
        let edges = raw_edges
            .iter()
            .map(|(t, h, c)| {
                Ok(Edge {
                    tail: lookup(t)?,
                    head: lookup(h)?,
                    capacity: *c,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let messages = raw_messages
            .iter()
            .map(|(id, s, rs)| {
                Ok(Message {
                    name: id.clone(),
                    source: lookup(s)?,
                    receivers: rs.iter().map(|r| lookup(r)).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Network::new(nodes, edges, messages, alphabet)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            out.push_str(&format!("node {n}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                self.nodes[e.tail], self.nodes[e.head], e.capacity
            ));
        }
        for m in &self.messages {
            let recv: Vec<&str> = m.receivers.iter().map(|&r| self.nodes[r].as_str()).collect();
            out.push_str(&format!(
                "message {} {} {}\n",
                m.name,
                self.nodes[m.source],
                recv.join(",")
            ));
        }
        if self.alphabet_size != 2 {
            out.push_str(&format!("alphabet {}\n", self.alphabet_size));
        }
        out
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Cycle,
    Unreachable { message: usize, receiver: usize },
    Degenerate { message: usize, node: usize },
}

impl Violation {
    fn describe(&self, net: &Network) -> String {
        match *self {
            Violation::Cycle => "network contains a directed cycle".to_string(),
            Violation::Unreachable { message, receiver } => format!(
                "{} unreachable at {}",
                net.messages[message].name, net.nodes[receiver]
            ),
            Violation::Degenerate { message, node } => format!(
                "degenerate: {} is both generated and demanded at {}",
                net.messages[message].name, net.nodes[node]
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<(Violation, String)>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, needle: &str) -> bool {
        self.violations.iter().any(|(_, s)| s.contains(needle))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<&str> = self.violations.iter().map(|(_, s)| s.as_str()).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Networks shipped with the crate.
pub mod fixtures {
    use super::Network;

    pub const DIAMOND: &str = include_str!("../fixtures/diamond.net");
    pub const BUTTERFLY: &str = include_str!("../fixtures/butterfly.net");
    pub const SINGLE_EDGE: &str = include_str!("../fixtures/single_edge.net");
    pub const PARALLEL: &str = include_str!("../fixtures/parallel.net");
    pub const DIAMOND_PAIR: &str = include_str!("../fixtures/diamond_pair.net");

    pub fn diamond() -> Network {
        Network::parse(DIAMOND).expect("fixture")
    }

    pub fn butterfly() -> Network {
        Network::parse(BUTTERFLY).expect("fixture")
    }

    pub fn single_edge() -> Network {
        Network::parse(SINGLE_EDGE).expect("fixture")
    }

    pub fn parallel() -> Network {
        Network::parse(PARALLEL).expect("fixture")
    }

    pub fn diamond_pair() -> Network {
        Network::parse(DIAMOND_PAIR).expect("fixture")
    }

    /// Butterfly without the bottleneck edge `u -> v`.
    pub fn butterfly_cut() -> Network {
        let net = butterfly();
        let uv = net
            .edges()
            .iter()
            .position(|e| net.nodes()[e.tail] == "u" && net.nodes()[e.head] == "v")
            .expect("u->v");
        net.without_edge(uv)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::int;

    #[test]
    fn parses_fixtures() {
        let d = diamond();
        assert_eq!((d.node_count(), d.edge_count(), d.message_count()), (4, 4, 1));
        let b = butterfly();
        assert_eq!((b.edge_count(), b.message_count()), (7, 2));
        assert_eq!(b.alphabet_size(), 2);
    }

    #[test]
    fn unknown_node_is_reported() {
        let err = Network::parse("node s\nnode t\nedge x t 1\nmessage m s t\n").unwrap_err();
        assert_eq!(err, Error::UnknownNode("x".into()));
        assert!(err.to_string().contains("unknown node"));
        let err = Network::parse("node s\nmessage m s q\n").unwrap_err();
        assert_eq!(err, Error::UnknownNode("q".into()));
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = Network::parse("node s\nedge s\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = Network::parse("node s\nnode t\nedge s t 0\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
        let err = Network::parse("frobnicate\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        assert_eq!(
            Network::parse("node a\nnode a\n").unwrap_err(),
            Error::DuplicateNode("a".into())
        );
    }

    #[test]
    fn validation() {
        assert!(butterfly().validate().is_admissible());
        assert!(diamond().validate().is_admissible());

        // Remove u->v; direct edges s1->t2, s2->t1 never existed.
        let report = butterfly_cut().validate();
        assert!(report.contains("m1 unreachable at t2"), "{report}");
        assert!(report.contains("m2 unreachable at t1"), "{report}");
        assert_eq!(report.violations.len(), 2);

        let degenerate = Network::parse("node s\nmessage m1 s s\n").unwrap();
        let report = degenerate.validate();
        assert!(report.contains("degenerate"));
        assert!(degenerate.ensure_valid().is_err());
    }

    #[test]
    fn cycles_are_violations() {
        let net = Network::parse("node a\nnode b\nedge a b 1\nedge b a 1\nmessage m a b\n").unwrap();
        assert_eq!(net.topological_order(), Err(Error::Cycle));
        assert!(matches!(net.validate().violations[0].0, Violation::Cycle));
    }

    #[test]
    fn topological_orders() {
        let d = diamond();
        let names: Vec<&str> = d
            .topological_order()
            .unwrap()
            .iter()
            .map(|&v| d.nodes()[v].as_str())
            .collect();
        assert!(names == ["s", "a", "b", "t"] || names == ["s", "b", "a", "t"]);

        let b = butterfly();
        let order = b.topological_order().unwrap();
        let pos = |n: &str| order.iter().position(|&v| v == b.node_id(n).unwrap()).unwrap();
        assert!(pos("s1") < pos("u") && pos("s2") < pos("u"));
        assert!(pos("u") < pos("v"));
        assert!(pos("v") < pos("t1") && pos("v") < pos("t2"));

        let empty = Network::parse("").unwrap();
        assert!(empty.topological_order().unwrap().is_empty());
    }

    #[test]
    fn upper_bounds() {
        assert_eq!(diamond().rate_upper_bounds(), vec![int(2)]);
        assert_eq!(butterfly().rate_upper_bounds(), vec![int(2), int(2)]);
        assert_eq!(single_edge().rate_upper_bounds(), vec![int(5)]);
    }

    #[test]
    fn serialize_round_trip() {
        for net in [diamond(), butterfly(), single_edge(), parallel(), diamond_pair()] {
            let text = net.serialize();
            assert_eq!(Network::parse(&text).unwrap(), net);
        }
        let net = Network::parse("node a\nnode b\nedge a b 2\nedge a b 3\nmessage m a b\nalphabet 3\n")
            .unwrap();
        assert_eq!(Network::parse(&net.serialize()).unwrap(), net);
    }
}
