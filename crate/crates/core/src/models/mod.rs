//! Model families, offline training and knowledge-base persistence.

mod categorical;
mod gaussian;
mod histogram;
mod observation;
mod performance;
pub mod persist;
mod trace;
pub mod training;

pub use categorical::CategoricalModel;
pub use gaussian::{normal_cdf, GaussianModel, DEFAULT_SD_FLOOR};
pub use histogram::HistogramModel;
pub use observation::ObservationModel;
pub use performance::PerformanceModel;
pub use persist::{load_kb, save_kb, storage_size, StorageReport, SCHEMA_VERSION};
pub use trace::{TraceModel, TraceTarget};
pub use training::{
    train_offline, train_offline_subset, TrainingConfig, TrainingReport, DEFAULT_SMOOTHING_ALPHA,
};
