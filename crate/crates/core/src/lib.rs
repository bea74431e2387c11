//! KAT factorization of SU(4): `g = K·𝒜₁·𝒜₂·T` in closed form over a
//! 15-parameter logarithmic chart, the chart domain, a numerical inverse,
//! and the induced double cover onto SO(6).

pub mod algebra;
pub mod chart;
pub mod factorizer;
pub mod io;
pub mod linalg;
pub mod spin6;
pub mod verify;

pub use algebra::{AlgebraElement, FanoBasis, StructureConstants};
pub use chart::{compose, validate_domain, ChartParams, Grouping, KATFactors, RotationForm};
pub use factorizer::{factorize, FactorizationResult, FactorizeError, SolverOptions};
pub use io::{MatrixFile, MatrixKind, OutputFormat};
pub use linalg::{ComplexMatrix, LinalgError};
pub use nalgebra::Matrix6;
pub use spin6::{cover_map, So6Element};
