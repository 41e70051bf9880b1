pub mod abelian;
pub mod adelic;
pub mod error;
pub mod reps;
pub mod roots;
pub mod skew;
pub mod snf;
pub mod theta;
pub mod verify;

pub use error::{Result, ThetaError};
