pub mod cox;
pub mod error;
pub mod exec;
pub mod fan;
pub mod fixtures;
pub mod gerbe;
pub mod lattice;
pub mod oracle;
pub mod random;
pub mod stacky;

pub use error::{Error, Result};
pub use exec::Execution;
