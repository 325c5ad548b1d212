//! Generalized (finite-part) integrals of Sturm–Liouville eigenfunction
//! products, with closed forms for Macdonald and Gegenbauer bilinears and
//! the self-energy of point interactions.

pub mod cli;
pub mod closedforms;
pub mod error;
pub mod extrapolate;
pub mod genquad;
pub mod limits;
pub mod pointgreen;
pub mod quad;
pub mod series;
pub mod specfun;
pub mod sturm;
pub mod verify;

pub use error::{Error, Result};
