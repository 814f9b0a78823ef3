//! Exact verification and refutation tools for existentially complete
//! triangle-free graphs.
//!
//! * [`graph`] and [`bitset`]: bit-row graphs and the basic predicates.
//! * [`graph6`]: corpus I/O.
//! * [`extension`]: extension queries, k-ECTF checks and certificates.
//! * [`separating`]: separating bipartite systems and covering measures.
//! * [`refutation`]: the vertex-discovery procedure that turns a claimed
//!   completeness level into a verified certificate.
//! * [`search`]: enumeration, random generators and experiments.

pub mod bitset;
pub mod extension;
pub mod graph;
pub mod graph6;
mod query;
pub mod refutation;
pub mod search;
pub mod separating;

pub use bitset::VertexSet;
pub use extension::{
    ectf_level, extend_embedding, extension_vertex, find_violation, is_2ectf_by_characterization,
    is_k_ectf, is_k_existentially_complete, ExtensionQuery, Mode, PartialEmbedding,
    ViolationCertificate,
};
pub use graph::{BipartiteView, Graph, GraphError};
pub use graph6::{parse_graph6, write_graph6};
