//! Exact finite Hausdorff and box-counting dimensions of finite metric spaces.

pub mod approximation;
pub mod cover;
pub mod dimension;
pub mod error;
pub mod generators;
pub mod lattice;
pub mod matching;
pub mod metric;
pub mod nn;
pub mod transforms;

pub use error::{Error, Result};
pub use metric::{FiniteMetric, MetricOptions, MetricSummary, Norm, PointCloud};
