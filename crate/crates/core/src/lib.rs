//! Deng information dimension and d-summable Deng information dimension of
//! complex networks.
//!
//! A network is covered with boxes of every admissible diameter, the Deng
//! entropy of each covering's mass assignment forms an entropy profile, and
//! two scaling models are fitted to that profile and compared by AIC.

pub mod boxcover;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod fit;
pub mod graph;
pub mod pipeline;
pub mod profile;
pub mod report;
pub mod seed;
pub mod synth;

pub use boxcover::{box_covering, BoxCoverer, BoxCovering};
pub use entropy::{deng_entropy, mass_from_covering, EntropyMode, EntropyValue, MassAssignment};
pub use error::{Error, Result};
pub use fit::{compare, fit_and_compare, fit_deng, fit_dsummable, FitResult, LogBase, Model, ModelComparison, Selection};
pub use graph::{load_edge_list, Network};
pub use profile::{build_profile, EntropyProfile, ProfileOptions};
pub use synth::{generate, GenSpec};
