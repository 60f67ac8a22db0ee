//! Exact arithmetic substrate.

pub mod bipoly;
pub mod contact;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod series;

pub use bipoly::BiPoly;
pub use contact::{resultant_free_contact, Contact, Place, PlaceClass};
pub use matrix::{kernel_basis, Matrix};
pub use poly::{poly_derivative, Poly};
pub use scalar::{q_frac, q_int, Qi, Scalar, Q};
pub use series::{series_valuation, TruncatedLaurent, Valuation, DEFAULT_TRUNCATION, EXACT};
