//! Special functions: integer-order cylindrical Bessel functions and Wigner symbols.

mod bessel;
mod wigner;

pub use bessel::{
    bessel_derivative, bessel_j, bessel_j_seq, bessel_jy_seq, bessel_k, bessel_k_seq, bessel_y, hankel,
    BesselFamily, BesselValue, JyTable,
};
pub use wigner::{clebsch_gordan, wigner_3j, wigner_6j, HalfInteger};
