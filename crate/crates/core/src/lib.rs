//! Exact exterior calculus for G2, SU(3) and SU(2)-structures.
//!
//! Forms live on a fixed coframe with known `d e^i`; coefficients are exact
//! expressions in ℚ(√d), formal parameters, powers of `t` and `ln t`, or `f64`
//! on the numeric path.

pub mod ccy;
pub mod error;
pub mod exterior;
pub mod harness;
pub mod identities;
pub mod models;
pub mod parse;
pub mod scalar;
pub mod structures;

pub use error::{Error, Result};
pub use exterior::{Coeff, Coframe, CoframeSpec, Form, FormExpr, NumForm};
pub use parse::{parse_form, parse_scalar};
pub use scalar::{Limit, Monomial, ParamEnv, QuadNum, ScalarExpr, DEFAULT_D};
