//! Cut-and-project sets and their patch statistics in exact arithmetic.

pub mod error;
pub mod exactnum;
pub mod circle;
pub mod diophantine;
pub mod patches;
pub mod pointset;
pub mod scheme;
pub mod steinhaus;
pub mod verify;
pub mod windowpartition;

pub use error::{Error, Result};
pub use exactnum::{Real, ScalarMode, Surd};
