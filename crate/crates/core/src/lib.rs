//! Bounds on the reliability function of the five-input typewriter channel.

pub mod channel;
pub mod construction;
pub mod curves;
pub mod error;
pub mod expurgated;
pub mod lp;
pub mod scalar;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
