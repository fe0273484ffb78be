//! Assortment optimization under the two-category multivariate MNL model:
//! exact oracles, the LP relaxation, approximation algorithms with
//! certified ratios, hardness-instance generators and a benchmark harness.

pub mod aro;
pub mod bench;
pub mod cli;
pub mod error;
pub mod hardness;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod rounding;
pub mod seeds;

pub use error::{Error, Result};
pub use instance::{Assortment, GeneralPriceInstance, Instance};
