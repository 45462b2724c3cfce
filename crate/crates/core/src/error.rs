use thiserror::Error;

use crate::ann::AnnError;
use crate::eval::EvalError;
use crate::features::FeatureError;
use crate::ingest::IngestError;
use crate::kmeans::KMeansError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Any failure raised by the library, tagged by the module that produced it.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Ann(#[from] AnnError),
    #[error(transparent)]
    KMeans(#[from] KMeansError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
