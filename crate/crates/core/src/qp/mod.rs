//! The expression language for quasi-periodic functions and the exact
//! algebra on it: multipliers under period shifts, predicted zero counts and
//! symbolic zero checks.

pub mod eval;
pub mod exponent;
pub mod expr;
pub mod linform;
pub mod parse;
pub mod shift;
pub mod symbolic;

pub use eval::{eval_expr, eval_linform, eval_terms, Bindings, BoundExpr, EvalContext};
pub use exponent::{predicted_zero_count, Coef, Exponent, Multiplier};
pub use expr::{Const, Expr, Factor, Family, Func, Term};
pub use linform::{Atom, LinForm};
pub use parse::{parse, parse_linform, parse_with, ParseOptions};
pub use shift::{expr_multiplier, shift_rule, term_multiplier};
pub use symbolic::{check_zero_symbolic, parity_normalize};
