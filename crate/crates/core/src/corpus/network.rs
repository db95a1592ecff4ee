use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a node (gold mine) in the activity network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An undirected edge, always stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
}

impl Edge {
    /// Builds the canonical form of the edge between `a` and `b`.
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    /// Distinctive single-word name, e.g. "Gallen".
    pub name: String,
    /// Display label, e.g. "Mount Gallen".
    pub label: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct NetworkFile {
    nodes: Vec<Node>,
    edges: Vec<WeightedEdge>,
}

/// The network the learners build a spanning subgraph of.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    nodes: Vec<Node>,
    edges: Vec<WeightedEdge>,
    by_id: HashMap<NodeId, usize>,
    by_name: HashMap<String, NodeId>,
    costs: BTreeMap<Edge, u32>,
}

impl Network {
    pub fn new(nodes: Vec<Node>, edges: Vec<WeightedEdge>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(nodes.len());
        let mut by_name = HashMap::with_capacity(nodes.len());
        for (idx, node) in nodes.iter().enumerate() {
            if by_id.insert(node.id, idx).is_some() {
                return Err(Error::Network(format!("duplicate node id {}", node.id)));
            }
            let key = node.name.to_lowercase();
            if key.is_empty() || key.split_whitespace().count() != 1 {
                return Err(Error::Network(format!(
                    "node name {:?} must be a single token",
                    node.name
                )));
            }
            if by_name.insert(key, node.id).is_some() {
                return Err(Error::Network(format!("duplicate node name {:?}", node.name)));
            }
        }

        let mut costs = BTreeMap::new();
        let mut canonical = Vec::with_capacity(edges.len());
        for e in edges {
            for end in [e.u, e.v] {
                if !by_id.contains_key(&end) {
                    return Err(Error::Network(format!("edge endpoint {end} is not a node")));
                }
            }
            if e.u == e.v {
                return Err(Error::Network(format!("self-loop on node {}", e.u)));
            }
            if e.cost == 0 {
                return Err(Error::Network(format!("edge {}-{} has zero cost", e.u, e.v)));
            }
            let edge = Edge::new(e.u, e.v);
            if costs.insert(edge, e.cost).is_some() {
                return Err(Error::Network(format!("duplicate edge {}-{}", edge.u, edge.v)));
            }
            canonical.push(WeightedEdge {
                u: edge.u,
                v: edge.v,
                cost: e.cost,
            });
        }

        Ok(Network {
            nodes,
            edges: canonical,
            by_id,
            by_name,
            costs,
        })
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(json)?;
        Network::new(file.nodes, file.edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Network::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = NetworkFile {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.by_id.get(&id).map(|&i| &self.nodes[i])
    }

    /// Looks a node up by name, ignoring case.
    pub fn node_by_name(&self, name: &str) -> Option<&Node> {
        self.by_name
            .get(&name.to_lowercase())
            .and_then(|id| self.node(*id))
    }

    /// Resolves a node reference as written in an event log: a name
    /// (any case) or a numeric id.
    pub fn resolve(&self, reference: &str) -> Result<NodeId> {
        let reference = reference.trim();
        if let Some(node) = self.node_by_name(reference) {
            return Ok(node.id);
        }
        if let Ok(raw) = reference.parse::<u32>() {
            if self.by_id.contains_key(&NodeId(raw)) {
                return Ok(NodeId(raw));
            }
        }
        Err(Error::UnknownNode(reference.to_string()))
    }

    /// Lowercase node name used for surface matching in transcripts.
    pub fn token(&self, id: NodeId) -> Option<String> {
        self.node(id).map(|n| n.name.to_lowercase())
    }

    /// All lowercase node-name tokens.
    pub fn node_tokens(&self) -> HashSet<String> {
        self.by_name.keys().cloned().collect()
    }

    pub fn cost(&self, edge: Edge) -> Option<u32> {
        self.costs.get(&edge).copied()
    }

    pub fn contains_edge(&self, edge: Edge) -> bool {
        self.costs.contains_key(&edge)
    }

    /// `"Gallen-Davos"` style rendering using node names.
    pub fn edge_name(&self, edge: Edge) -> String {
        let name = |id: NodeId| {
            self.node(id)
                .map(|n| n.name.clone())
                .unwrap_or_else(|| id.to_string())
        };
        format!("{}-{}", name(edge.u), name(edge.v))
    }

    /// Cost of a minimum spanning tree (Kruskal with union-find).
    ///
    /// Fails when the network is disconnected, since no submission could
    /// then span every node.
    pub fn optimal_cost(&self) -> Result<u64> {
        let mut order: Vec<&WeightedEdge> = self.edges.iter().collect();
        order.sort_by_key(|e| (e.cost, e.u, e.v));

        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }

        let mut total = 0u64;
        let mut joined = 0usize;
        for e in order {
            let a = find(&mut parent, self.by_id[&e.u]);
            let b = find(&mut parent, self.by_id[&e.v]);
            if a != b {
                parent[a] = b;
                total += u64::from(e.cost);
                joined += 1;
            }
        }
        if joined + 1 != self.nodes.len() && !self.nodes.is_empty() {
            return Err(Error::Network("network is not connected".into()));
        }
        Ok(total)
    }

    /// Checks the shape of the activity network: 10 nodes and 20 edges.
    pub fn check_reference_shape(&self) -> Result<()> {
        if self.nodes.len() != 10 || self.edges.len() != 20 {
            return Err(Error::Network(format!(
                "expected 10 nodes and 20 edges, found {} and {}",
                self.nodes.len(),
                self.edges.len()
            )));
        }
        Ok(())
    }
}
