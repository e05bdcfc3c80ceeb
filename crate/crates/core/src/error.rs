use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed element encoding: {0}")]
    MalformedElement(String),
    #[error("element does not belong to this group model: {0}")]
    ModelMismatch(String),
    #[error("operation not supported for this model family: {0}")]
    UnsupportedFamily(String),
    #[error("generating set is invalid: {0}")]
    BadGenerators(String),
    #[error("memory budget exceeded: {got} vertices, cap {cap}")]
    MemoryBudget { got: usize, cap: usize },
    #[error("vertex outside ball: {0}")]
    VertexOutsideBall(String),
    #[error("interior margin violated: {0}")]
    MarginViolated(String),
    #[error("subgroup not registered on this ball: {0}")]
    SubgroupNotRegistered(String),
    #[error("unknown group DSL: {0}")]
    BadGroupDsl(String),
    #[error("unknown subgroup DSL: {0}")]
    BadSubgroupDsl(String),
    #[error("subgroup `{subgroup}` is incompatible with group `{group}`")]
    IncompatibleSubgroup { subgroup: String, group: String },
    #[error("degenerate parameter grid: {0}")]
    DegenerateGrid(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("walker trapped at step {step}: no in-ball move from vertex {vertex}")]
    WalkerTrapped { step: u64, vertex: String },
    #[error("empty walk: no steps to average over")]
    EmptyWalk,
    #[error("event is not increasing (witness: flipping edge {edge} lowers it)")]
    NotIncreasing { edge: usize },
    #[error("decision forest does not compute the target event")]
    ForestDoesNotCompute,
    #[error("quadrature tolerance not met: requested {requested}, achieved {achieved}")]
    QuadratureTolerance { requested: f64, achieved: f64 },
    #[error("kernel is not invariant under the checked automorphism")]
    KernelNotInvariant,
    #[error("kernel support exceeds displacement bound {0}")]
    KernelSupport(u32),
    #[error("invalid partition sequence: {0}")]
    BadPartitionSequence(String),
    #[error("finite system too large to enumerate: {edges} edges")]
    SystemTooLarge { edges: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
