//! Exact scalars: quadratic surds, mixed-field input numbers and the surrogate mode.

pub mod linalg;
mod mode;
mod real;
mod surd;

pub use mode::{Guard, ScalarMode, DEFAULT_PRECISION_BITS};
pub use real::{find_relation, rational_combination, Basis, CubicGenerator, Real};
pub use surd::{rat, squarefree_split, Surd};
