//! Entropy profiles: Deng entropy as a function of the box diameter.

use rayon::prelude::*;
use serde::Serialize;

use crate::boxcover::{BoxCoverer, DEFAULT_REPETITIONS};
use crate::entropy::{deng_entropy, mass_from_covering, EntropyMode, EntropyValue};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::seed;

/// Smallest number of box diameters a profile needs to be fitted.
pub const MIN_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub epsilon: u32,
    pub n_boxes: usize,
    pub entropy: EntropyValue,
    /// Mean and population variance of the box count over all restarts.
    pub n_boxes_mean: f64,
    pub n_boxes_variance: f64,
}

/// Where a profile came from. Two fits are comparable only when their
/// provenance matches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub network: String,
    pub mode: EntropyMode,
    pub seed: u64,
    pub repetitions: usize,
    pub epsilons: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyProfile {
    pub network_name: String,
    pub node_count: usize,
    pub edge_count: usize,
    /// Diameter plus one; `None` for profiles not built from a graph.
    pub delta: Option<u32>,
    pub mode: EntropyMode,
    pub seed: u64,
    pub repetitions: usize,
    pub points: Vec<ProfilePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileOptions {
    pub seed: u64,
    pub repetitions: usize,
    pub mode: EntropyMode,
    /// Largest box diameter to evaluate instead of `delta - 1`.
    pub max_epsilon: Option<u32>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            seed: 0,
            repetitions: DEFAULT_REPETITIONS,
            mode: EntropyMode::Exact,
            max_epsilon: None,
        }
    }
}

impl EntropyProfile {
    /// A profile from raw `(epsilon, entropy)` pairs, for fitting data that
    /// did not come from a covering.
    pub fn from_points(name: impl Into<String>, points: &[(u32, f64)]) -> Result<Self> {
        let points = points
            .iter()
            .map(|&(epsilon, total)| ProfilePoint {
                epsilon,
                n_boxes: 0,
                entropy: EntropyValue {
                    total,
                    nonspecificity: f64::NAN,
                    discord: f64::NAN,
                    mode: EntropyMode::Exact,
                },
                n_boxes_mean: f64::NAN,
                n_boxes_variance: f64::NAN,
            })
            .collect();
        let profile = EntropyProfile {
            network_name: name.into(),
            node_count: 0,
            edge_count: 0,
            delta: None,
            mode: EntropyMode::Exact,
            seed: 0,
            repetitions: 0,
            points,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        for pair in self.points.windows(2) {
            if pair[1].epsilon <= pair[0].epsilon {
                return Err(Error::Fit(format!(
                    "box diameters must be strictly increasing ({} then {})",
                    pair[0].epsilon, pair[1].epsilon
                )));
            }
        }
        if let Some(first) = self.points.first() {
            if first.epsilon < 2 {
                return Err(Error::Fit(format!("box diameter {} is below 2", first.epsilon)));
            }
        }
        if let (Some(delta), Some(last)) = (self.delta, self.points.last()) {
            if last.epsilon > delta - 1 {
                return Err(Error::Fit(format!(
                    "box diameter {} exceeds delta - 1 = {}",
                    last.epsilon,
                    delta - 1
                )));
            }
        }
        if self.points.iter().any(|p| !p.entropy.total.is_finite()) {
            return Err(Error::Domain("profile contains a non-finite entropy".into()));
        }
        Ok(())
    }

    pub fn epsilons(&self) -> Vec<u32> {
        self.points.iter().map(|p| p.epsilon).collect()
    }

    pub fn entropies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.entropy.total).collect()
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            network: self.network_name.clone(),
            mode: self.mode,
            seed: self.seed,
            repetitions: self.repetitions,
            epsilons: self.epsilons(),
        }
    }
}

/// Covers `g` at every box diameter in `[2, delta - 1]` and records the Deng
/// entropy of each covering. Each diameter uses its own seed derived from
/// `options.seed`.
pub fn build_profile(g: &Network, options: &ProfileOptions) -> Result<EntropyProfile> {
    let coverer = BoxCoverer::new(g)?;
    build_profile_with(&coverer, options)
}

pub fn build_profile_with(coverer: &BoxCoverer<'_>, options: &ProfileOptions) -> Result<EntropyProfile> {
    let g = coverer.graph();
    let delta = coverer.delta();
    let top = match options.max_epsilon {
        Some(m) if m > delta - 1 => {
            return Err(Error::Config(format!(
                "maximum box diameter {m} exceeds delta - 1 = {}",
                delta - 1
            )))
        }
        Some(m) => m,
        None => delta - 1,
    };
    let usable = top.saturating_sub(1) as usize;
    if usable < MIN_POINTS {
        return Err(Error::InsufficientRange { delta, usable });
    }
    let points = (2..=top)
        .into_par_iter()
        .map(|epsilon| {
            let covering = coverer.cover(epsilon, seed::derive(options.seed, epsilon as u64), options.repetitions)?;
            let masses = mass_from_covering(&covering, g.node_count())?;
            Ok(ProfilePoint {
                epsilon,
                n_boxes: covering.n_boxes(),
                entropy: deng_entropy(&masses, options.mode)?,
                n_boxes_mean: covering.restart_mean(),
                n_boxes_variance: covering.restart_variance(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyProfile {
        network_name: g.name().to_string(),
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        delta: Some(delta),
        mode: options.mode,
        seed: options.seed,
        repetitions: options.repetitions,
        points,
    })
}
