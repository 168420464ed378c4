//! The based quantum torus: lattice exponents, skew forms, twisted
//! multiplication, the bar-involution, term orders and exact division.

mod element;
mod form;
mod lattice;
mod order;

pub use element::{verify_quasi_commute, TorusElement};
pub use form::SkewForm;
pub use lattice::{lat_plus_part, lat_r_of, lattice_box, LatticeVector};
pub use order::{leading_monomial, torus_divide, Side, WeightOrder, DEFAULT_DIVISION_CAP};
