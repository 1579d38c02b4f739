//! Independent numerical evaluation of every closed-form quantity.

pub mod quadrature;
pub mod numeric;
pub mod radial;
