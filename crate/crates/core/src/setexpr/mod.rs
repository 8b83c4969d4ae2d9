//! Set-expression language over `F_p`.
//!
//! | notation         | source string        |
//! |------------------|----------------------|
//! | `AA ± AA`        | `A*A + A*A`, `A*A - A*A` |
//! | `B(C − D)`       | `B*(C-D)`            |
//! | `(A−A)(A−A)`     | `(A-A)*(A-A)`        |
//! | `X ± B·B`        | `X + B*B`            |
//! | `dA`             | `d#A`                |
//! | `A^d`            | `A^d`                |
//!
//! Juxtaposition is never a product: `AA` is an identifier, not `A*A`.
//! Binding strength, tightest first: `^`, unary `-`, `#`, `*`, binary `+`/`-`.

mod ast;
mod eval;
mod parse;

pub use ast::Expr;
pub use eval::{eval_expr, eval_expr_with_stats, Env, EvalStats};
pub use parse::parse_expr;

/// Parses and evaluates in one step.
pub fn eval_str(
    src: &str,
    env: &Env,
    ctx: crate::field::FieldCtx,
) -> crate::error::Result<crate::fset::FpSet> {
    eval_expr(&parse_expr(src)?, env, ctx)
}
