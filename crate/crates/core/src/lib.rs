pub mod error;
pub mod factorization;
pub mod feynman;
pub mod fock;
pub mod graph;
pub mod perm;
pub mod radical;
pub mod series;
pub mod tropical;

pub use error::{Error, Result};
