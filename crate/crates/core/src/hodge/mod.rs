//! Response graphs, the potential/harmonic/non-strategic decomposition, and
//! the potentialness metric.

mod cache;
mod decompose;
mod graph;
mod operators;

pub use cache::{
    cache_file_name, decode_operators, encode_operators, load_or_build, operator_cache_get,
    CacheSource, CacheStats, OperatorCache, RecordHeader, Storage, CACHE_FORMAT_VERSION,
};
pub use decompose::{
    alpha_blend, decompose_flows, decompose_payoffs, flow_distance, potentialness,
    DecompositionResult, PayoffComponents, PotentialnessOutcome, NON_STRATEGIC_RTOL,
};
pub use graph::{build_response_graph, Edge, Flow, PotentialFunction, ResponseGraph};
pub use operators::{DecompositionOperators, ShapeLimits, DEFAULT_MAX_PROFILES};
