//! Numerical laboratory for toric Gibbons-Hawking metrics: the multi-center
//! harmonic potential, monopole connection charts, the hyperkähler metric in
//! real, symplectic, and complex coordinates, the crepant-resolution atlas,
//! and the phase behavior of the complexified Eguchi-Hanson family.

pub mod atlas;
pub mod charts;
pub mod error;
pub mod field;
pub mod metric;
pub mod numerics;
pub mod phase;
pub mod sampling;
pub mod symplectic;
pub mod verify;

pub use charts::ChartId;
pub use error::{GhError, GhResult};
pub use field::{CenterConfig, RealPoint};
pub use metric::FiberPoint;
pub use symplectic::SymplecticPoint;
