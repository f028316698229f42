//! Exact coefficient ring: ℚ(√d) constants, formal parameters, Laurent powers
//! of the radial variable `t` and powers of `ln t`.

mod expr;
mod quad;

pub use expr::{Limit, Monomial, ParamEnv, ScalarExpr};
pub use quad::{QuadNum, DEFAULT_D};
