//! Polar and planar commutative hypercomplex numbers in `n` dimensions.

pub mod algebra;
pub mod contour;
pub mod cosexp;
pub mod elementary;
pub mod error;
pub mod formats;
pub mod matrix_rep;
pub mod polyfactor;
pub mod series;
pub mod spectral;
pub mod tolerances;
pub mod verify;

pub use algebra::{NComplex, Variant};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spectral::{Slot, Spectrum};
pub use tolerances::Tolerances;
