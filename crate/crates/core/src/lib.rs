//! Node embeddings from diffusion trees.
//!
//! Around every vertex a small tree is grown by a diffusion-like process and
//! linearized into a vertex sequence by an Euler walk of its doubled edges.
//! Windowed positional co-occurrence counts over those sequences train a
//! single-hidden-layer network with a hierarchical-softmax output, using
//! lock-free parallel SGD. The hidden-layer input weights are the embedding.
//!
//! Quality is measured by how well scaled embedding distances approximate
//! shortest-path distances, and by the modularity of k-means clusters.
//!
//! ```
//! use diffusion_embed::{embed, EmbedParams, Graph};
//!
//! let g = Graph::from_edge_list("a b\nb c\nc a\nc d").unwrap();
//! let params = EmbedParams { dim: 8, diffusion_size: 4, workers: 1, ..EmbedParams::default() };
//! let out = embed(&g, &params).unwrap();
//! assert_eq!(out.embedding().len(), 4);
//! ```

pub mod cli;
pub mod embedding;
mod error;
pub mod evaluation;
pub mod features;
pub mod graph;
pub mod pipeline;
pub mod sampler;
pub mod trainer;

pub use crate::embedding::Embedding;
pub use crate::error::{Error, Result};
pub use crate::graph::{Graph, VertexId};
pub use crate::pipeline::{embed, EmbedOutput, EmbedParams};
