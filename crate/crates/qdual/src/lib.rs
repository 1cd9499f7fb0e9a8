//! Exact symbolic engine for the quantum Hikita correspondence.

pub mod arrangement;
pub mod dmod;
pub mod error;
pub mod hea;
pub mod groebner;
pub mod qside;
pub mod lin;
pub mod skew;
pub mod springer;
pub mod exact;

pub use error::{Error, Result};
pub use exact::{
    binomial, bracket_power, bracket_vector, expand_fraction, one_minus_q, rat, rat_string,
    ratio, shift_poly, ConeFraction, ConeSeries, LaurentQ, Poly, Rat,
};
