//! Seeded Barabási–Albert and Watts–Strogatz generators.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Network;
use crate::seed;

/// Attachment edges per new node in the scale-free model.
pub const DEFAULT_BA_M: usize = 3;
/// Ring-lattice degree in the small-world model.
pub const DEFAULT_WS_K: usize = 10;
pub const DEFAULT_WS_P: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Ba,
    Ws,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    /// Edges added with each new node (BA).
    pub m: usize,
    /// Even lattice degree (WS).
    pub k: usize,
    /// Rewiring probability (WS).
    pub p: f64,
    /// `None` defers to the run seed.
    pub seed: Option<u64>,
}

impl GenSpec {
    pub fn ba(n: usize, m: usize, seed: u64) -> Self {
        GenSpec {
            kind: GenKind::Ba,
            n,
            m,
            k: 0,
            p: 0.0,
            seed: Some(seed),
        }
    }

    pub fn ws(n: usize, k: usize, p: f64, seed: u64) -> Self {
        GenSpec {
            kind: GenKind::Ws,
            n,
            m: 0,
            k,
            p,
            seed: Some(seed),
        }
    }

    pub fn with_default_seed(mut self, seed: u64) -> Self {
        self.seed.get_or_insert(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            GenKind::Ba if self.m < 1 || self.m >= self.n => Err(Error::Parameter(format!(
                "BA needs 1 <= m < n, got m = {}, n = {}",
                self.m, self.n
            ))),
            GenKind::Ws if !self.k.is_multiple_of(2) || self.k >= self.n => Err(Error::Parameter(format!(
                "WS needs an even k < n, got k = {}, n = {}",
                self.k, self.n
            ))),
            GenKind::Ws if !(0.0..=1.0).contains(&self.p) => {
                Err(Error::Parameter(format!("WS needs 0 <= p <= 1, got p = {}", self.p)))
            }
            _ => Ok(()),
        }
    }

    /// Short network name such as `BA-500` or `SW-100`.
    pub fn name(&self) -> String {
        match self.kind {
            GenKind::Ba => format!("BA-{}", self.n),
            GenKind::Ws => format!("SW-{}", self.n),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::Ba => write!(f, "ba:n={},m={}", self.n, self.m)?,
            GenKind::Ws => write!(f, "ws:n={},k={},p={}", self.n, self.k, self.p)?,
        }
        if let Some(seed) = self.seed {
            write!(f, ",seed={seed}")?;
        }
        Ok(())
    }
}

/// Parses `ba:n=500,m=3` or `ws:n=500,k=10,p=0.1`, each with an optional
/// `seed=`. Omitted `m`, `k` and `p` take their defaults.
impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parameter(format!("{msg} in generator spec {s:?}"));
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "ba" => GenKind::Ba,
            "ws" | "sw" => GenKind::Ws,
            other => return Err(bad(format!("unknown generator {other:?}"))),
        };
        let mut spec = GenSpec {
            kind,
            n: 0,
            m: DEFAULT_BA_M,
            k: DEFAULT_WS_K,
            p: DEFAULT_WS_P,
            seed: None,
        };
        let mut have_n = false;
        for pair in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = pair.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {pair:?}")))?;
            let int = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("{key} is not an integer")));
            match key {
                "n" => {
                    spec.n = int(value)?;
                    have_n = true;
                }
                "m" => spec.m = int(value)?,
                "k" => spec.k = int(value)?,
                "p" => spec.p = value.parse().map_err(|_| bad("p is not a number".into()))?,
                "seed" => spec.seed = Some(value.parse().map_err(|_| bad("seed is not an integer".into()))?),
                other => return Err(bad(format!("unknown parameter {other:?}"))),
            }
        }
        if !have_n {
            return Err(bad("missing n".into()));
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RewireReport {
    pub rewired: usize,
    /// Edges picked for rewiring whose endpoint was already adjacent to
    /// every other node.
    pub skipped: usize,
}

/// Preferential attachment from a complete graph on `m` nodes. Each new node
/// joins `m` distinct existing nodes drawn with probability proportional to
/// degree, giving `m (m - 1) / 2 + (n - m) m` edges.
pub fn generate_ba(spec: &GenSpec) -> Result<Network> {
    spec.validate()?;
    if spec.kind != GenKind::Ba {
        return Err(Error::Parameter("not a BA spec".into()));
    }
    let (n, m) = (spec.n, spec.m);
    let mut rng = seed::rng(spec.seed.unwrap_or(0));
    let mut edges = Vec::with_capacity(m * (m - 1) / 2 + (n - m) * m);
    // every node appears here once per incident edge
    let mut endpoints = Vec::with_capacity(2 * edges.capacity());
    for u in 0..m {
        for v in u + 1..m {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for new in m..n {
        chosen.clear();
        while chosen.len() < m {
            let target = if endpoints.is_empty() {
                rng.gen_range(0..new)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !chosen.contains(&target) {
                chosen.push(target);
            }
        }
        for &t in &chosen {
            edges.push((new, t));
            endpoints.extend([new, t]);
        }
    }
    let (network, _) = Network::from_edges(spec.name(), n, edges)?;
    Ok(network)
}

/// Ring lattice where each node links to its `k / 2` nearest neighbors on
/// either side; each lattice edge `(u, v)` is then replaced, with
/// probability `p`, by `(u, w)` for a uniform `w` not yet adjacent to `u`.
pub fn generate_ws_with_report(spec: &GenSpec) -> Result<(Network, RewireReport)> {
    spec.validate()?;
    if spec.kind != GenKind::Ws {
        return Err(Error::Parameter("not a WS spec".into()));
    }
    let (n, half) = (spec.n, spec.k / 2);
    let mut rng = seed::rng(spec.seed.unwrap_or(0));
    let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=half {
            let v = (u + j) % n;
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
    }
    let mut report = RewireReport::default();
    for j in 1..=half {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.gen::<f64>() >= spec.p {
                continue;
            }
            if adjacency[u].len() >= n - 1 {
                report.skipped += 1;
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !adjacency[u].contains(&w) {
                    break w;
                }
            };
            adjacency[u].remove(&v);
            adjacency[v].remove(&u);
            adjacency[u].insert(w);
            adjacency[w].insert(u);
            report.rewired += 1;
        }
    }
    let edges = adjacency
        .iter()
        .enumerate()
        .flat_map(|(u, ns)| ns.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)));
    let (network, _) = Network::from_edges(spec.name(), n, edges)?;
    Ok((network, report))
}

pub fn generate_ws(spec: &GenSpec) -> Result<Network> {
    generate_ws_with_report(spec).map(|(g, _)| g)
}

pub fn generate(spec: &GenSpec) -> Result<Network> {
    match spec.kind {
        GenKind::Ba => generate_ba(spec),
        GenKind::Ws => generate_ws(spec),
    }
}
