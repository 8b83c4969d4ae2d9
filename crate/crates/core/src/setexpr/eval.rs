use std::collections::BTreeMap;

use super::ast::Expr;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::fset::FpSet;

pub type Env = BTreeMap<String, FpSet>;

/// Work counters for one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Sum over binary set operations of `|S| · |T|`.
    pub pair_ops: u64,
}

pub fn eval_expr(ast: &Expr, env: &Env, ctx: FieldCtx) -> Result<FpSet> {
    eval_expr_with_stats(ast, env, ctx).map(|(s, _)| s)
}

pub fn eval_expr_with_stats(ast: &Expr, env: &Env, ctx: FieldCtx) -> Result<(FpSet, EvalStats)> {
    for name in ast.vars() {
        let set = env
            .get(name)
            .ok_or_else(|| Error::UnboundVar(name.to_string()))?;
        if set.ctx() != ctx {
            return Err(Error::CtxMismatch(ctx.p(), set.ctx().p()));
        }
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    let mut stats = EvalStats::default();
    let out = Evaluator {
        env,
        stats: &mut stats,
    }
    .eval(ast)?;
    Ok((out, stats))
}

struct Evaluator<'a> {
    env: &'a Env,
    stats: &'a mut EvalStats,
}

impl Evaluator<'_> {
    fn count(&mut self, a: &FpSet, b: &FpSet) {
        let work = (a.len() as u64).saturating_mul(b.len() as u64);
        self.stats.pair_ops = self.stats.pair_ops.saturating_add(work);
    }

    fn eval(&mut self, e: &Expr) -> Result<FpSet> {
        match e {
            Expr::Var(n) => Ok(self.env[n].clone()),
            Expr::Add(l, r) => {
                let (a, b) = (self.eval(l)?, self.eval(r)?);
                self.count(&a, &b);
                a.sumset(&b)
            }
            Expr::Sub(l, r) => {
                let (a, b) = (self.eval(l)?, self.eval(r)?);
                self.count(&a, &b);
                a.difference_set(&b)
            }
            Expr::Mul(l, r) => {
                let (a, b) = (self.eval(l)?, self.eval(r)?);
                self.count(&a, &b);
                a.product_set(&b)
            }
            Expr::Neg(inner) => Ok(self.eval(inner)?.negate()),
            Expr::IterSum(k, inner) => {
                let base = self.eval(inner)?;
                self.iterate(base, *k, FpSet::sumset)
            }
            Expr::IterProd(k, inner) => {
                let base = self.eval(inner)?;
                self.iterate(base, *k, FpSet::product_set)
            }
        }
    }

    fn iterate(
        &mut self,
        base: FpSet,
        k: u32,
        op: fn(&FpSet, &FpSet) -> Result<FpSet>,
    ) -> Result<FpSet> {
        let mut acc = base.clone();
        for _ in 1..k {
            if acc.is_full() {
                break;
            }
            self.count(&acc, &base);
            acc = op(&acc, &base)?;
        }
        Ok(acc)
    }
}
