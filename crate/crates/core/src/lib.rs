#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop,
    clippy::type_complexity
)]
pub mod analytic;
pub mod assembly;
pub mod asymptotics;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod mesh;
pub mod report;
pub mod variational;

pub use error::{Error, Result};
