//! Benchmark harness: MPS ingestion, built-in scalable NLP families, batch
//! solving under wall-time caps, and SGM10 aggregation.

pub mod batch;
pub mod error;
pub mod families;
pub mod mps;
pub mod sgm;

pub use batch::{read_manifest, run_batch, summary_table, BenchmarkRecord, ManifestEntry,
                SizeClass};
pub use error::BenchError;
pub use families::{builtin_instance, Family};
pub use mps::{parse_mps, write_mps, ParsedLp};
pub use sgm::sgm10;
