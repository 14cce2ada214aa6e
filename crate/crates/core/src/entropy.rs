//! Mass functions built from box coverings and their Deng entropy.
//!
//! A covering with boxes `A_1..A_k` over `N` nodes gives the mass function
//! `m(A_i) = |A_i| / N`. Its Deng entropy (in bits) is
//!
//! ```text
//! I = -sum_i m_i log2(m_i / (2^|A_i| - 1))
//!   = sum_i m_i log2(2^|A_i| - 1)      (non-specificity)
//!   - sum_i m_i log2 m_i               (discord)
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boxcover::BoxCovering;
use crate::error::{Error, Result};

/// Largest box size whose `2^s - 1` still fits an unsigned 64-bit integer.
/// The truncating mode drops every box above it.
pub const LEGACY_MAX_BOX_SIZE: usize = 62;

/// How `log2(2^s - 1)` is evaluated for a box of size `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum EntropyMode {
    /// `s + log2(1 - 2^-s)`, accurate for any `s`.
    #[default]
    #[serde(rename = "exact-log-domain")]
    Exact,
    /// Replaces `2^s - 1` by `2^s`, so the term is just `s`.
    #[serde(rename = "pow2-approx")]
    Pow2,
    /// Exact 64-bit evaluation; a box larger than [`LEGACY_MAX_BOX_SIZE`]
    /// contributes nothing at all.
    #[serde(rename = "truncate-legacy")]
    Legacy,
}

impl EntropyMode {
    pub const ALL: [EntropyMode; 3] = [EntropyMode::Exact, EntropyMode::Pow2, EntropyMode::Legacy];

    pub fn as_str(self) -> &'static str {
        match self {
            EntropyMode::Exact => "exact-log-domain",
            EntropyMode::Pow2 => "pow2-approx",
            EntropyMode::Legacy => "truncate-legacy",
        }
    }
}

impl fmt::Display for EntropyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntropyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-log-domain" => Ok(EntropyMode::Exact),
            "pow2" | "pow2-approx" => Ok(EntropyMode::Pow2),
            "legacy" | "truncate-legacy" => Ok(EntropyMode::Legacy),
            other => Err(Error::Config(format!("unknown entropy mode {other:?}"))),
        }
    }
}

/// Mass function over the boxes of a covering. Masses are the exact
/// rationals `size / total_nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassAssignment {
    sizes: Vec<usize>,
    total_nodes: usize,
}

impl MassAssignment {
    /// Every size must be positive and the sizes must add up to `total_nodes`,
    /// which makes the masses sum to exactly one.
    pub fn from_sizes(sizes: Vec<usize>, total_nodes: usize) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Domain("mass assignment has no focal elements".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::Domain("focal element with zero mass".into()));
        }
        let sum: usize = sizes.iter().sum();
        if sum != total_nodes {
            return Err(Error::Domain(format!(
                "masses sum to {sum}/{total_nodes}, not 1"
            )));
        }
        Ok(MassAssignment { sizes, total_nodes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_nodes(&self) -> usize {
        self.total_nodes
    }

    /// `(numerator, denominator)` of each mass.
    pub fn rationals(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sizes.iter().map(move |&s| (s, self.total_nodes))
    }

    pub fn masses(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.total_nodes as f64;
        self.sizes.iter().map(move |&s| s as f64 / n)
    }
}

/// Builds the mass function of a covering, checking that its boxes
/// partition `0..node_count`.
pub fn mass_from_covering(covering: &BoxCovering, node_count: usize) -> Result<MassAssignment> {
    let mut seen = vec![false; node_count];
    for (i, members) in covering.boxes.iter().enumerate() {
        if members.is_empty() {
            return Err(Error::Integrity(format!("box {i} is empty")));
        }
        for &v in members {
            match seen.get_mut(v) {
                None => return Err(Error::Integrity(format!("node {v} is out of range"))),
                Some(true) => return Err(Error::Integrity(format!("node {v} lies in two boxes"))),
                Some(slot) => *slot = true,
            }
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::Integrity(format!("node {missing} is in no box")));
    }
    MassAssignment::from_sizes(covering.box_sizes(), node_count)
}

/// Deng entropy in bits, split into non-specificity and discord.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue {
    pub total: f64,
    pub nonspecificity: f64,
    pub discord: f64,
    pub mode: EntropyMode,
}

/// `log2(2^s - 1)` without forming `2^s`.
pub fn log2_pow2_minus_one(size: usize) -> f64 {
    let s = size as f64;
    s + (-(-s).exp2()).ln_1p() / std::f64::consts::LN_2
}

pub fn deng_entropy(m: &MassAssignment, mode: EntropyMode) -> Result<EntropyValue> {
    let n = m.total_nodes as f64;
    let mut nonspecificity = 0.0;
    let mut discord = 0.0;
    for &size in &m.sizes {
        let mass = size as f64 / n;
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::Domain(format!("non-positive mass {mass}")));
        }
        let spread = match mode {
            EntropyMode::Exact => log2_pow2_minus_one(size),
            EntropyMode::Pow2 => size as f64,
            EntropyMode::Legacy if size > LEGACY_MAX_BOX_SIZE => continue,
            EntropyMode::Legacy => (((1u64 << size) - 1) as f64).log2(),
        };
        nonspecificity += mass * spread;
        discord -= mass * mass.log2();
    }
    Ok(EntropyValue {
        total: nonspecificity + discord,
        nonspecificity,
        discord,
        mode,
    })
}

pub fn shannon_entropy(m: &MassAssignment) -> Result<f64> {
    let mut h = 0.0;
    for mass in m.masses() {
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::Domain(format!("non-positive mass {mass}")));
        }
        h -= mass * mass.log2();
    }
    Ok(h)
}
