//! Finite groupoid convolution algebras and their regular representations,
//! fibrewise invertibility, and limit operators and Fredholm indices of band
//! operators on `ℓ²(ℤ)`.

pub mod algebra;
pub mod band;
pub mod crossed;
pub mod error;
pub mod exact;
pub mod fredholm;
pub mod gen;
pub mod groupoid;
pub mod invertibility;
pub mod io;
pub mod linalg;
pub mod mean;
pub mod section;

pub use algebra::{convolve, i_norm, involution, reduced_norm, regular_representation, AlgebraElement, FibreMatrix};
pub use band::{
    laurent_symbol, limit_operator, BandOperatorZ, CoefficientSequence, DirectionSpec, LaurentOperator, LaurentSymbol,
    LimitConfig,
};
pub use error::{AxiomViolation, Error, Result, ViolationKind};
pub use fredholm::{fredholm_report, toeplitz_index, winding_number, FredholmConfig, FredholmReport};
pub use groupoid::{ActionSpec, ArrowId, FiniteGroupoid, GroupSpec, InvariantSubset, RawGroupoid, UnitId};
pub use invertibility::{exel_invertibility, main_theorem_check, InvertibilityReport, Mode};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use section::{BoundaryDecomposition, OperatorSection};
