//! Semi-ring algebra for time-varying graphs.
//!
//! A time-varying graph (TVG) is a square matrix whose entries live in a
//! semi-ring of "lifetimes": subsets of the time axis under union and
//! intersection, optionally enriched with propagation delay or full
//! store-and-forward contact maps. Matrix powers accumulate multi-hop
//! connectivity windows, the truncated Kleene star detects strong
//! connectivity, and zigzag persistence barcodes summarize how components
//! and cycles of the snapshots evolve. On top of that sit distances between
//! TVGs and barcodes, and a KNN harness for classifying networks by their
//! time-varying topology alone.

pub mod error;
pub mod interval;
pub mod scalar;
pub mod semiring;

pub mod barcode;
pub mod gen;
pub mod io;
pub mod knn;
pub mod matrix;
pub mod metrics;
pub mod zigzag;

#[doc(hidden)]
pub mod testutil;

pub use error::{Error, Result};
pub use interval::IntervalSet;
pub use scalar::{Rat, Scalar};
pub use semiring::{
    axioms_check, AxiomReport, BoolSemiring, ContactMap, ContactSemiring, DelaySemiring,
    DelayedLifetime, EndoSemiring, LifetimeSemiring, MonotoneEndo, PathSemiring, PathSum,
    Semiring, TropicalSemiring,
};

pub use barcode::{matching_distance, Barcode, BarcodeInterval, Distance, MatchP};
pub use matrix::{LifetimeCurve, LifetimeMatrix, MatrixSemiring, TvgMatrix};
pub use metrics::{
    disconnect_distance, interleaving_distance, interleaving_distance_unlabeled,
    symmetrized_hausdorff, tvg_hausdorff, SearchMode,
};
