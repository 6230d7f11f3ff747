pub mod bounds;
pub mod disjwalk;
pub mod error;
pub mod exec;
pub mod infoaudit;
pub(crate) mod ir;
pub mod lineproto;
pub mod qcore;
pub mod querymodel;
pub mod twoparty;

pub use error::{Error, Result};
pub use exec::Execution;
pub use ir::format_gate;
