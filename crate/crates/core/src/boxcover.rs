//! Greedy-coloring box covering.
//!
//! Two nodes may share a box of diameter `epsilon` only if their hop distance
//! is below `epsilon`. Equivalently, boxes are the color classes of a proper
//! coloring of the auxiliary graph that joins every pair at distance
//! `>= epsilon`. The coloring is greedy over a random node order, restarted
//! `repetitions` times; the restart with the fewest colors wins, lowest
//! restart index first on ties.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Network, UNREACHABLE};
use crate::seed;

/// Graphs up to this size keep a dense byte matrix of pairwise distances.
/// Larger graphs run a depth-limited BFS per colored node instead.
pub const DENSE_NODE_LIMIT: usize = 8192;

pub const DEFAULT_REPETITIONS: usize = 20;

/// A partition of the nodes into boxes for one box diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxCovering {
    pub epsilon: u32,
    /// Node indices per box, each sorted; boxes ordered by color id.
    pub boxes: Vec<Vec<usize>>,
    pub seed: u64,
    pub repetitions: usize,
    /// Number of boxes found by each restart, in restart order.
    pub restart_counts: Vec<usize>,
}

impl BoxCovering {
    pub fn n_boxes(&self) -> usize {
        self.boxes.len()
    }

    pub fn box_sizes(&self) -> Vec<usize> {
        self.boxes.iter().map(Vec::len).collect()
    }

    pub fn restart_mean(&self) -> f64 {
        let n = self.restart_counts.len() as f64;
        self.restart_counts.iter().map(|&c| c as f64).sum::<f64>() / n
    }

    /// Population variance of the box count across restarts.
    pub fn restart_variance(&self) -> f64 {
        let mean = self.restart_mean();
        let n = self.restart_counts.len() as f64;
        self.restart_counts
            .iter()
            .map(|&c| (c as f64 - mean).powi(2))
            .sum::<f64>()
            / n
    }

    /// JSON dump with node labels in place of indices.
    pub fn to_json(&self, network: &Network) -> Result<String> {
        #[derive(Serialize)]
        struct Dump<'a> {
            epsilon: u32,
            n_boxes: usize,
            boxes: Vec<Vec<&'a str>>,
            seed: u64,
            repetitions: usize,
        }
        let dump = Dump {
            epsilon: self.epsilon,
            n_boxes: self.n_boxes(),
            boxes: self
                .boxes
                .iter()
                .map(|b| b.iter().map(|&v| network.label(v)).collect())
                .collect(),
            seed: self.seed,
            repetitions: self.repetitions,
        };
        Ok(serde_json::to_string_pretty(&dump)?)
    }
}

/// Builds the graph joining every pair of nodes at hop distance `>= epsilon`.
pub fn auxiliary_graph(g: &Network, epsilon: u32) -> Result<Network> {
    if epsilon < 1 {
        return Err(Error::InvalidEpsilon {
            epsilon,
            reason: "box diameter must be at least 1".into(),
        });
    }
    g.ensure_connected()?;
    let mut edges = Vec::new();
    for u in 0..g.node_count() {
        let row = g.bfs_distances(u)?;
        for (v, &d) in row.distances.iter().enumerate().skip(u + 1) {
            if d != UNREACHABLE && d >= epsilon {
                edges.push((u, v));
            }
        }
    }
    let (aux, _) = Network::from_edges(format!("{}-aux{}", g.name(), epsilon), g.node_count(), edges)?;
    Ok(aux)
}

/// Greedy proper coloring of `aux`: nodes are visited in `order` and take the
/// smallest color not used by an already-colored neighbor.
///
/// Panics if `order` is not a permutation of the nodes.
pub fn greedy_color(aux: &Network, order: &[usize]) -> Vec<usize> {
    let n = aux.node_count();
    assert_eq!(order.len(), n, "order must list every node once");
    const UNCOLORED: usize = usize::MAX;
    let mut colors = vec![UNCOLORED; n];
    let mut taken = Vec::new();
    for &u in order {
        assert!(colors[u] == UNCOLORED, "node {u} appears twice in the order");
        taken.clear();
        taken.extend(aux.neighbors(u).iter().map(|&v| colors[v]).filter(|&c| c != UNCOLORED));
        taken.sort_unstable();
        taken.dedup();
        let color = taken
            .iter()
            .enumerate()
            .find(|&(i, &c)| i != c)
            .map_or(taken.len(), |(i, _)| i);
        colors[u] = color;
    }
    colors
}

/// Groups nodes by color; box `i` holds the nodes of color `i`.
pub fn colors_to_boxes(colors: &[usize]) -> Vec<Vec<usize>> {
    let count = colors.iter().copied().max().map_or(0, |c| c + 1);
    let mut boxes = vec![Vec::new(); count];
    for (node, &c) in colors.iter().enumerate() {
        boxes[c].push(node);
    }
    boxes
}

enum DistanceStore {
    Dense(Vec<u8>),
    Streaming,
}

/// Reusable box-covering state for one connected network.
pub struct BoxCoverer<'a> {
    graph: &'a Network,
    store: DistanceStore,
    diameter: u32,
}

impl<'a> BoxCoverer<'a> {
    pub fn new(graph: &'a Network) -> Result<Self> {
        graph.ensure_connected()?;
        let n = graph.node_count();
        if n <= DENSE_NODE_LIMIT {
            let mut dense = vec![0u8; n * n];
            let fits = dense
                .par_chunks_mut(n)
                .enumerate()
                .map(|(s, row)| -> Result<(bool, u32)> {
                    let bfs = graph.bfs_distances(s)?;
                    let mut ok = true;
                    for (slot, &d) in row.iter_mut().zip(&bfs.distances) {
                        if d >= u8::MAX as u32 {
                            ok = false;
                        } else {
                            *slot = d as u8;
                        }
                    }
                    Ok((ok, bfs.max_finite()))
                })
                .collect::<Result<Vec<_>>>()?;
            let diameter = fits.iter().map(|&(_, e)| e).max().unwrap_or(0);
            if fits.iter().all(|&(ok, _)| ok) {
                return Ok(BoxCoverer {
                    graph,
                    store: DistanceStore::Dense(dense),
                    diameter,
                });
            }
        }
        let diameter = graph.diameter()?;
        Ok(BoxCoverer {
            graph,
            store: DistanceStore::Streaming,
            diameter,
        })
    }

    pub fn graph(&self) -> &Network {
        self.graph
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn delta(&self) -> u32 {
        self.diameter + 1
    }

    /// Best of `repetitions` seeded greedy restarts at box diameter `epsilon`.
    pub fn cover(&self, epsilon: u32, seed: u64, repetitions: usize) -> Result<BoxCovering> {
        if epsilon < 1 || epsilon > self.delta() {
            return Err(Error::InvalidEpsilon {
                epsilon,
                reason: format!("must lie in [1, {}]", self.delta()),
            });
        }
        if repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        let runs: Vec<Vec<usize>> = (0..repetitions)
            .into_par_iter()
            .map(|r| {
                let order = self.random_order(seed::derive(seed, r as u64));
                self.color_in_order(epsilon, &order)
            })
            .collect();
        let restart_counts: Vec<usize> = runs.iter().map(|colors| color_count(colors)).collect();
        let best = restart_counts
            .iter()
            .enumerate()
            .min_by_key(|&(i, &c)| (c, i))
            .map(|(i, _)| i)
            .expect("at least one restart");
        Ok(BoxCovering {
            epsilon,
            boxes: colors_to_boxes(&runs[best]),
            seed,
            repetitions,
            restart_counts,
        })
    }

    fn random_order(&self, seed: u64) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.graph.node_count()).collect();
        order.shuffle(&mut seed::rng(seed));
        order
    }

    /// Greedy coloring of the implicit auxiliary graph. A color is available
    /// to `u` iff every node already holding it lies within distance
    /// `< epsilon` of `u`.
    pub fn color_in_order(&self, epsilon: u32, order: &[usize]) -> Vec<usize> {
        let n = self.graph.node_count();
        let mut colors = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        match &self.store {
            DistanceStore::Dense(dense) => {
                for &u in order {
                    let row = &dense[u * n..(u + 1) * n];
                    let c = first_fit(&classes, |v| (row[v] as u32) < epsilon);
                    assign(&mut classes, &mut colors, u, c);
                }
            }
            DistanceStore::Streaming => {
                let mut ball = Ball::new(n);
                for &u in order {
                    ball.fill(self.graph, u, epsilon - 1);
                    let c = first_fit(&classes, |v| ball.contains(v));
                    assign(&mut classes, &mut colors, u, c);
                }
            }
        }
        colors
    }
}

fn first_fit(classes: &[Vec<usize>], near: impl Fn(usize) -> bool) -> usize {
    classes
        .iter()
        .position(|members| members.iter().all(|&v| near(v)))
        .unwrap_or(classes.len())
}

fn assign(classes: &mut Vec<Vec<usize>>, colors: &mut [usize], node: usize, color: usize) {
    if color == classes.len() {
        classes.push(Vec::new());
    }
    classes[color].push(node);
    colors[node] = color;
}

fn color_count(colors: &[usize]) -> usize {
    colors.iter().copied().max().map_or(0, |c| c + 1)
}

/// Nodes within a hop radius of a center, marked with a generation stamp.
struct Ball {
    stamp: Vec<u32>,
    depth: Vec<u32>,
    generation: u32,
    queue: Vec<usize>,
}

impl Ball {
    fn new(n: usize) -> Self {
        Ball {
            stamp: vec![0; n],
            depth: vec![0; n],
            generation: 0,
            queue: Vec::new(),
        }
    }

    fn fill(&mut self, g: &Network, center: usize, radius: u32) {
        self.generation += 1;
        let generation = self.generation;
        self.queue.clear();
        self.queue.push(center);
        self.stamp[center] = generation;
        self.depth[center] = 0;
        let mut cursor = 0;
        while cursor < self.queue.len() {
            let u = self.queue[cursor];
            cursor += 1;
            if self.depth[u] == radius {
                continue;
            }
            for &v in g.neighbors(u) {
                if self.stamp[v] != generation {
                    self.stamp[v] = generation;
                    self.depth[v] = self.depth[u] + 1;
                    self.queue.push(v);
                }
            }
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.stamp[v] == self.generation
    }
}

/// One-shot covering of `g` at box diameter `epsilon`.
pub fn box_covering(g: &Network, epsilon: u32, seed: u64, repetitions: usize) -> Result<BoxCovering> {
    BoxCoverer::new(g)?.cover(epsilon, seed, repetitions)
}
