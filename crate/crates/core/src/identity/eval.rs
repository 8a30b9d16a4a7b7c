//! Evaluation of relation expressions against concrete bound relations.

use thiserror::Error;

use crate::algebra::{ClosureBudget, FiniteAlgebra};
use crate::rel::{generated_relation, BinaryRelation, RelError, Sort};

use super::ast::Expr;

/// Failures while evaluating an expression.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("relation variable `{0}` is not bound")]
    Unbound(String),
    #[error(transparent)]
    Rel(#[from] RelError),
}

/// Evaluates `expr` on `alg` with the given variable bindings.
///
/// `0` is the diagonal, `1` the full relation. `gen(e1 | .. | ek)` takes the
/// raw union of the branch values and closes it into the least reflexive
/// admissible relation containing it, which is where the budget can be spent.
pub fn eval_expr(
    alg: &FiniteAlgebra,
    expr: &Expr,
    bindings: &[(String, BinaryRelation)],
    budget: &ClosureBudget,
) -> Result<BinaryRelation, EvalError> {
    let n = alg.size();
    match expr {
        Expr::Var(name) => bindings
            .iter()
            .find(|(b, _)| b == name)
            .map(|(_, r)| r.clone())
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        Expr::Zero => Ok(BinaryRelation::diagonal(n)),
        Expr::One => Ok(BinaryRelation::full(n)),
        Expr::Converse(inner) => Ok(eval_expr(alg, inner, bindings, budget)?.converse()),
        Expr::Star(inner) => Ok(eval_expr(alg, inner, bindings, budget)?.star()),
        Expr::Meet(parts) => {
            let mut acc = eval_expr(alg, &parts[0], bindings, budget)?;
            for part in &parts[1..] {
                acc = acc.meet(&eval_expr(alg, part, bindings, budget)?)?;
            }
            Ok(acc)
        }
        Expr::Compose(parts) => {
            let mut acc = eval_expr(alg, &parts[0], bindings, budget)?;
            for part in &parts[1..] {
                acc = acc.compose(&eval_expr(alg, part, bindings, budget)?)?;
            }
            Ok(acc)
        }
        Expr::Gen(branches) => {
            let mut acc = BinaryRelation::diagonal(n);
            for branch in branches {
                acc = acc.union_raw(&eval_expr(alg, branch, bindings, budget)?)?;
            }
            let generated =
                generated_relation(alg, &acc.off_diagonal_pairs(), Sort::Admissible, budget)?;
            Ok(generated.relation)
        }
    }
}
