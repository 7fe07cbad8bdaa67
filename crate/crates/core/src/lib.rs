pub mod arith;
pub mod complex;
pub mod ehrhart;
pub mod error;
pub mod exec;
pub mod family;
pub mod laplacian;
pub mod lp;
pub mod polytope;
pub mod table;
pub mod triangulate;

pub use error::{Error, Result};
pub use exec::{Budget, Exec};
