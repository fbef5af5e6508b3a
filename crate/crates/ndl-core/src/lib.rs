//! Graph library for hunting long induced paths and cycles in pseudo-random
//! regular graphs: spectral verification, seeded site percolation, a
//! stack-based search for induced paths with a cycle-closing step, explicit
//! lexicographic-product constructions, and brute-force oracles for
//! cross-checking everything at small scale.
//!
//! Combinatorial code works on integer counts; every numeric kernel
//! (spectra, percolation predictions, certificates) is generic over a
//! [`Real`] scalar. The `F64` aliases below pin the default precision.

pub mod generators;
pub mod graph;
pub mod io;
pub mod num;
pub mod oracle;
pub mod percolation;
pub mod search;
pub mod seed;
pub mod spectral;

pub use graph::{ComponentLabeling, Graph, GraphError, VertexSet};
pub use num::Real;
pub use search::{DfsEvent, DfsState, InducedCycle, InducedPath, Region, VertexOrder};
pub use seed::{seed_derive, uniform01};

/// Default-precision aliases for the scalar-generic types.
pub type SpectralReportF64 = spectral::SpectralReport<f64>;
pub type MixingReportF64 = spectral::MixingReport<f64>;
pub type PercolationParamsF64 = percolation::PercolationParams<f64>;
pub type ComponentStatsF64 = percolation::ComponentStats<f64>;
pub type ExcessReportF64 = percolation::ExcessReport<f64>;
pub type LexSpectrumPredictionF64 = generators::LexSpectrumPrediction<f64>;
pub type ConstructionParamsF64 = generators::ConstructionParams<f64>;
pub type MuCertificateF64 = search::MuCertificate<f64>;
pub type CycleSearchOutcomeF64 = search::CycleSearchOutcome<f64>;
