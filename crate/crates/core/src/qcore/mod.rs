//! Exact complex linear algebra over named qubit registers.
//!
//! States are dense vectors; density matrices are dense and only built for
//! the subsystems an entropy actually needs.

mod bits;
pub mod checks;
mod density;
mod gate;
mod layout;
pub mod random;
mod state;

pub use bits::{Bits, ClassicalBits};
pub(crate) use density::entropy_of_hermitian;
pub use density::{DensityMatrix, CLIP_TOL, EIGEN_ZERO};
pub use gate::{unitarity_defect, CMatrix, Gate, GateKind, QubitRef};
pub use layout::{Register, RegisterLayout, DEFAULT_QUBIT_CAP};
pub use state::{PureState, NORM_TOL};
