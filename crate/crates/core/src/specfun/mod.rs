//! Special functions used by the solver and the information measures.

pub(crate) mod gamma;
mod laguerre;
mod lauricella;
mod mathieu;

pub use gamma::{
    binomial_real, digamma, double_factorial, log_gamma, pochhammer, DoubleFactorial,
    EULER_GAMMA,
};
pub use laguerre::{laguerre, laguerre_orthonormal, laguerre_with_derivative, laguerre_unchecked};
pub use lauricella::{gamma0, Gamma0};
pub use mathieu::{
    mathieu_char_matrix, mathieu_char_series, mathieu_even_solution, series_validity_limit,
    MathieuEvenSolution, SeriesValue, DEFAULT_TRUNCATION,
};
