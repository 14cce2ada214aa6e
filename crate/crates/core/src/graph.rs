//! Undirected simple graphs, edge-list ingestion and hop distances.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::io::BufRead;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Marker for nodes that cannot be reached from the BFS source.
pub const UNREACHABLE: u32 = u32::MAX;

/// An undirected, unweighted simple graph on nodes `0..N`.
///
/// Every node carries a label: the token it had in the input edge list, or
/// its index for generated graphs. Adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    name: String,
    labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

/// What was discarded while simplifying an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimplifyReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl SimplifyReport {
    pub fn dropped(&self) -> usize {
        self.self_loops + self.duplicates
    }
}

/// Hop distances from one source node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRow {
    pub source: usize,
    pub distances: Vec<u32>,
}

impl DistanceRow {
    pub fn get(&self, node: usize) -> Option<u32> {
        match self.distances[node] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    /// Largest finite distance, i.e. the eccentricity within the source's component.
    pub fn max_finite(&self) -> u32 {
        self.distances
            .iter()
            .copied()
            .filter(|&d| d != UNREACHABLE)
            .max()
            .unwrap_or(0)
    }

    pub fn first_unreachable(&self) -> Option<usize> {
        self.distances.iter().position(|&d| d == UNREACHABLE)
    }
}

impl Network {
    /// Builds a simple graph from an edge list over `0..node_count`, dropping
    /// self-loops and repeated edges.
    pub fn from_edges<I>(name: impl Into<String>, node_count: usize, edges: I) -> Result<(Self, SimplifyReport)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Self::from_labeled_edges(name.into(), labels, edges)
    }

    fn from_labeled_edges<I>(name: String, labels: Vec<String>, edges: I) -> Result<(Self, SimplifyReport)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let node_count = labels.len();
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); node_count];
        let mut report = SimplifyReport::default();
        let mut accepted = 0;
        for (u, v) in edges {
            for index in [u, v] {
                if index >= node_count {
                    return Err(Error::NodeOutOfRange { index, node_count });
                }
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            accepted += 1;
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for neighbors in &mut adjacency {
            neighbors.sort_unstable();
            neighbors.dedup();
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        report.duplicates = accepted - edge_count;
        Ok((
            Network {
                name,
                labels,
                adjacency,
                edge_count,
            },
            report,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Serializes the graph in the edge-list format, using node labels.
    /// `header` lines are emitted as `#` comments.
    pub fn to_edge_list(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }

    pub fn bfs_distances(&self, source: usize) -> Result<DistanceRow> {
        if source >= self.node_count() {
            return Err(Error::NodeOutOfRange {
                index: source,
                node_count: self.node_count(),
            });
        }
        let mut distances = vec![UNREACHABLE; self.node_count()];
        let mut queue = VecDeque::new();
        distances[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = distances[u] + 1;
            for &v in &self.adjacency[u] {
                if distances[v] == UNREACHABLE {
                    distances[v] = next;
                    queue.push_back(v);
                }
            }
        }
        Ok(DistanceRow { source, distances })
    }

    /// Connected components, each sorted, ordered by their smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.node_count()];
        let mut components = Vec::new();
        for start in 0..self.node_count() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut members = vec![start];
            let mut cursor = 0;
            while cursor < members.len() {
                let u = members[cursor];
                cursor += 1;
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    /// Fails with the representatives of two components when disconnected.
    pub fn ensure_connected(&self) -> Result<()> {
        let row = self.bfs_distances(0)?;
        match row.first_unreachable() {
            None => Ok(()),
            Some(other) => Err(Error::Disconnected {
                first: self.labels[0].clone(),
                second: self.labels[other].clone(),
            }),
        }
    }

    /// The subgraph induced by the largest connected component (ties: the
    /// component holding the smaller node index). Labels are preserved.
    pub fn largest_component(&self) -> Network {
        let components = self.components();
        let largest = components
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
            .map(|(_, c)| c)
            .expect("a network has at least one node");
        let mut index = vec![usize::MAX; self.node_count()];
        for (new, &old) in largest.iter().enumerate() {
            index[old] = new;
        }
        let labels = largest.iter().map(|&old| self.labels[old].clone()).collect();
        let adjacency: Vec<Vec<usize>> = largest
            .iter()
            .map(|&old| self.adjacency[old].iter().map(|&v| index[v]).collect())
            .collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Network {
            name: self.name.clone(),
            labels,
            adjacency,
            edge_count,
        }
    }

    /// Largest finite pairwise hop distance. Requires a connected graph.
    pub fn diameter(&self) -> Result<u32> {
        self.ensure_connected()?;
        let eccentricities: Vec<u32> = (0..self.node_count())
            .into_par_iter()
            .map(|s| self.bfs_distances(s).map(|row| row.max_finite()))
            .collect::<Result<_>>()?;
        Ok(eccentricities.into_iter().max().unwrap_or(0))
    }

    /// Smallest box diameter at which a single box covers the whole graph:
    /// the graph diameter plus one.
    pub fn delta(&self) -> Result<u32> {
        Ok(self.diameter()? + 1)
    }
}

/// Result of parsing an edge list.
#[derive(Debug, Clone)]
pub struct LoadedNetwork {
    pub network: Network,
    pub report: SimplifyReport,
}

/// Parses a whitespace-separated edge list. Lines that are blank or start
/// with `#` are ignored; labels are mapped to indices in order of first
/// appearance.
pub fn load_edge_list<R: BufRead>(reader: R, name: &str) -> Result<LoadedNetwork> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected two node tokens, found {}", tokens.len()),
            });
        }
        let mut ends = [0usize; 2];
        for (slot, token) in ends.iter_mut().zip(&tokens) {
            *slot = *index.entry((*token).to_string()).or_insert_with(|| {
                labels.push((*token).to_string());
                labels.len() - 1
            });
        }
        edges.push((ends[0], ends[1]));
    }
    let (network, report) = Network::from_labeled_edges(name.to_string(), labels, edges)?;
    Ok(LoadedNetwork { network, report })
}
