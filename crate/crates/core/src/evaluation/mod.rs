//! Embedding quality measures: shortest-path distortion and community
//! structure of k-means clusters.

mod distance;
mod kmeans;
mod modularity;

pub use self::distance::{
    distortion_report, fit_gamma, total_relative_error, DistancePair, DistancePairSample,
    DistortionMetrics, DistortionReport, PairError, CDF_THRESHOLDS,
};
pub use self::kmeans::{kmeans, ClusterAssignment, KMeansResult};
pub use self::modularity::{modularity, ClusterMetrics};
