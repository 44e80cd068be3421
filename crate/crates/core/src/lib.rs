//! Sigma functions, prime forms and period data for cyclic (r,s) curves y^r = f(x).

pub mod abel;
pub mod curve;
pub mod error;
pub mod fs;
pub mod identities;
pub mod path;
pub mod periods;
pub mod poly;
pub mod prime_form;
pub mod quadrature;
pub mod series;
pub mod sigma;
pub mod symmetric;
pub mod theta;
pub mod verify;
pub mod young;

pub use curve::{AffinePoint, CurveSpec};
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
