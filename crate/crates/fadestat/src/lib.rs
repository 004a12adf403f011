pub mod analysis;
pub mod cli;
pub mod error;
pub mod fsmc_arq;
pub mod lcr;
pub mod model;
pub mod oracles;
pub mod outage;
pub mod scenarios;
pub(crate) mod quad;
pub mod special;
pub mod sums;

pub use error::{Error, Result};
