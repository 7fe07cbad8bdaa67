//! Exact arithmetic: rational matrices, integer determinants and normal forms.

mod int;
mod matrix;

pub use int::{
    binomial, det, det_i128, det_wide, gcd_i64, hermite_rows, primitive_i64, smith, RowEchelon, Smith,
};
pub use matrix::ExactMatrix;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Rat = BigRational;

pub fn rat(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}
