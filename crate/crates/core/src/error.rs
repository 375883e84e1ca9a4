use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("graph {graph}: {field}: {reason}")]
    InvalidGraph { graph: usize, field: &'static str, reason: String },

    #[error("invalid subgraph: {0}")]
    InvalidSubgraph(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("possible-world budget exceeded: {worlds} worlds (limit {limit})")]
    WorldBudget { worlds: u128, limit: u128 },
}
