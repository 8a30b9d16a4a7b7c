//! Expression trees and statements of the relation-identity language,
//! with a canonical printer that round-trips through the parser.

use std::fmt;

pub use crate::rel::Sort;

/// A relation expression.
///
/// `Gen` holds the branches of a raw union to be closed into the least
/// reflexive admissible relation; raw unions occur nowhere else, so the
/// tree cannot express an unclosed union by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// A declared relation variable.
    Var(String),
    /// The diagonal (least) relation, written `0`.
    Zero,
    /// The full (greatest) relation, written `1`.
    One,
    /// Converse, written postfix `^`.
    Converse(Box<Expr>),
    /// Transitive closure, written postfix `*`.
    Star(Box<Expr>),
    /// Least reflexive admissible relation containing the union of the
    /// branches, written `gen(e | e | ..)`.
    Gen(Vec<Expr>),
    /// Intersection, written `&`; binds tighter than composition.
    Meet(Vec<Expr>),
    /// Relational composition, written `o`.
    Compose(Vec<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    /// Meet of the given expressions; a single operand stands alone.
    pub fn meet(mut exprs: Vec<Expr>) -> Expr {
        assert!(!exprs.is_empty(), "meet needs at least one operand");
        if exprs.len() == 1 {
            exprs.pop().unwrap()
        } else {
            Expr::Meet(exprs)
        }
    }

    /// Composition of the given expressions; a single operand stands alone.
    pub fn compose(mut exprs: Vec<Expr>) -> Expr {
        assert!(!exprs.is_empty(), "composition needs at least one operand");
        if exprs.len() == 1 {
            exprs.pop().unwrap()
        } else {
            Expr::Compose(exprs)
        }
    }

    pub fn star(self) -> Expr {
        Expr::Star(Box::new(self))
    }

    pub fn converse(self) -> Expr {
        Expr::Converse(Box::new(self))
    }

    pub fn gen(branches: Vec<Expr>) -> Expr {
        assert!(!branches.is_empty(), "gen needs at least one branch");
        Expr::Gen(branches)
    }

    /// Names of the variables occurring in the expression, in first-use
    /// order without repetitions.
    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Var(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            Expr::Zero | Expr::One => {}
            Expr::Converse(e) | Expr::Star(e) => e.collect_variables(out),
            Expr::Gen(es) | Expr::Meet(es) | Expr::Compose(es) => {
                for e in es {
                    e.collect_variables(out);
                }
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, level: Prec) -> fmt::Result {
        match self {
            Expr::Var(name) => f.write_str(name),
            Expr::Zero => f.write_str("0"),
            Expr::One => f.write_str("1"),
            Expr::Converse(e) => {
                e.fmt_prec(f, Prec::Atom)?;
                f.write_str("^")
            }
            Expr::Star(e) => {
                e.fmt_prec(f, Prec::Atom)?;
                f.write_str("*")
            }
            Expr::Gen(branches) => {
                f.write_str("gen(")?;
                for (i, b) in branches.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    b.fmt_prec(f, Prec::Compose)?;
                }
                f.write_str(")")
            }
            Expr::Meet(parts) => {
                let parenthesize = level > Prec::Meet;
                if parenthesize {
                    f.write_str("(")?;
                }
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("&")?;
                    }
                    p.fmt_prec(f, Prec::Atom)?;
                }
                if parenthesize {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Expr::Compose(parts) => {
                let parenthesize = level > Prec::Compose;
                if parenthesize {
                    f.write_str("(")?;
                }
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" o ")?;
                    }
                    p.fmt_prec(f, Prec::Atom)?;
                }
                if parenthesize {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Printing context, loosest to tightest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Compose,
    Meet,
    Atom,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, Prec::Compose)
    }
}

/// The relation between the two sides of a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    /// Left side included in the right side, written `<=`.
    Subset,
    /// Both inclusions, written `=`.
    Equal,
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::Subset => "<=",
            Connective::Equal => "=",
        })
    }
}

/// A complete statement: sorted variable declarations and a claimed
/// inclusion or equality between two expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    /// Declarations in source order.
    pub decls: Vec<(String, Sort)>,
    pub lhs: Expr,
    pub connective: Connective,
    pub rhs: Expr,
}

impl Statement {
    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.decls
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, sort)| sort)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.decls.len() {
            let sort = self.decls[i].1;
            let mut j = i;
            while j < self.decls.len() && self.decls[j].1 == sort {
                j += 1;
            }
            write!(f, "{} ", sort.keyword())?;
            for (k, (name, _)) in self.decls[i..j].iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                f.write_str(name)?;
            }
            f.write_str("; ")?;
            i = j;
        }
        write!(f, "{} {} {}", self.lhs, self.connective, self.rhs)
    }
}
