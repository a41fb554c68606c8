//! Experiment harness behind the `contralocal` command: seeded generators,
//! search runs for every problem, the verification suites and the
//! hard-family experiment table.

pub mod experiment;
pub mod gen;
pub mod run;
pub mod suites;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Cut(#[from] contralocal_core::graph_cut::CutError),
    #[error(transparent)]
    Reduction(#[from] contralocal_core::reductions::ReductionError),
    #[error(transparent)]
    Embedding(#[from] contralocal_core::embedding::EmbeddingError),
    #[error(transparent)]
    Tree(#[from] contralocal_core::tree::TreeError),
    #[error(transparent)]
    Instance(#[from] contralocal_core::triplets::InstanceError),
    #[error(transparent)]
    Loss(#[from] contralocal_core::triplet_loss::TripletLossError),
    #[error(transparent)]
    Hard(#[from] contralocal_core::hard_family::HardFamilyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
