//! Lexer and recursive-descent parser for the relation-identity language.
//!
//! Grammar (terminals quoted, `{..}` repetition, `[..]` option):
//!
//! ```text
//! stmt   := {decl} expr ("<=" | "=") expr
//! decl   := ("cong" | "tol" | "rel") ident {"," ident} ";"
//! expr   := cterm {"o" cterm}
//! cterm  := factor {"&" factor}
//! factor := atom {"*" | "^"}
//! atom   := ident | "0" | "1" | "(" expr ")" | "gen" "(" uexpr ")"
//! uexpr  := expr {"|" expr}
//! ```
//!
//! `cong`, `tol`, `rel`, `gen` and `o` are keywords; identifiers match
//! `[A-Za-z][A-Za-z0-9_]*`; `#` starts a comment running to end of line.
//! Raw union (`|`) is only available inside `gen(..)`, so every expression
//! denotes a relation of verifiable shape.

use thiserror::Error;

use super::ast::{Connective, Expr, Sort, Statement};

/// Parse failures with byte positions into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at byte {at}")]
    UnexpectedChar { ch: char, at: usize },
    #[error("digit literal `{text}` at byte {at} is not 0 or 1")]
    BadLiteral { text: String, at: usize },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("expected {expected}, found `{found}` at byte {at}")]
    Expected {
        expected: &'static str,
        found: String,
        at: usize,
    },
    #[error("duplicate declaration of `{name}` at byte {at}")]
    DuplicateDecl { name: String, at: usize },
    #[error("undeclared relation variable `{name}` at byte {at}")]
    Undeclared { name: String, at: usize },
    #[error("statement has no declarations and no expression")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    KwCong,
    KwTol,
    KwRel,
    KwGen,
    KwO,
    Zero,
    One,
    Amp,
    Star,
    Caret,
    Pipe,
    LPar,
    RPar,
    Comma,
    Semi,
    Le,
    Eq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::KwCong => "cong".into(),
            Tok::KwTol => "tol".into(),
            Tok::KwRel => "rel".into(),
            Tok::KwGen => "gen".into(),
            Tok::KwO => "o".into(),
            Tok::Zero => "0".into(),
            Tok::One => "1".into(),
            Tok::Amp => "&".into(),
            Tok::Star => "*".into(),
            Tok::Caret => "^".into(),
            Tok::Pipe => "|".into(),
            Tok::LPar => "(".into(),
            Tok::RPar => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Semi => ";".into(),
            Tok::Le => "<=".into(),
            Tok::Eq => "=".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            '&' => {
                out.push((Tok::Amp, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '|' => {
                out.push((Tok::Pipe, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LPar, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RPar, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            ';' => {
                out.push((Tok::Semi, i));
                i += 1;
            }
            '=' => {
                out.push((Tok::Eq, i));
                i += 1;
            }
            '<' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'=' {
                    out.push((Tok::Le, i));
                    i += 2;
                } else {
                    return Err(ParseError::UnexpectedChar { ch: '<', at: i });
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                match text {
                    "0" => out.push((Tok::Zero, start)),
                    "1" => out.push((Tok::One, start)),
                    _ => {
                        return Err(ParseError::BadLiteral {
                            text: text.to_string(),
                            at: start,
                        })
                    }
                }
            }
            'A'..='Z' | 'a'..='z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &src[start..i];
                let tok = match word {
                    "cong" => Tok::KwCong,
                    "tol" => Tok::KwTol,
                    "rel" => Tok::KwRel,
                    "gen" => Tok::KwGen,
                    "o" => Tok::KwO,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((tok, start));
            }
            other => return Err(ParseError::UnexpectedChar { ch: other, at: i }),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self, expected: &'static str) -> Result<(Tok, usize), ParseError> {
        let item = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or(ParseError::UnexpectedEnd { expected })?;
        self.pos += 1;
        Ok(item)
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<usize, ParseError> {
        let (tok, at) = self.next(expected)?;
        if tok == want {
            Ok(at)
        } else {
            Err(ParseError::Expected {
                expected,
                found: tok.describe(),
                at,
            })
        }
    }

    fn parse_statement(&mut self) -> Result<Statement, ParseError> {
        let mut decls: Vec<(String, Sort)> = Vec::new();
        loop {
            let sort = match self.peek() {
                Some(Tok::KwCong) => Sort::Congruence,
                Some(Tok::KwTol) => Sort::Tolerance,
                Some(Tok::KwRel) => Sort::Admissible,
                _ => break,
            };
            self.pos += 1;
            loop {
                let (tok, at) = self.next("a relation variable name")?;
                let name = match tok {
                    Tok::Ident(name) => name,
                    other => {
                        return Err(ParseError::Expected {
                            expected: "a relation variable name",
                            found: other.describe(),
                            at,
                        })
                    }
                };
                if decls.iter().any(|(n, _)| *n == name) {
                    return Err(ParseError::DuplicateDecl { name, at });
                }
                decls.push((name, sort));
                match self.next("`,` or `;`")? {
                    (Tok::Comma, _) => continue,
                    (Tok::Semi, _) => break,
                    (other, at) => {
                        return Err(ParseError::Expected {
                            expected: "`,` or `;`",
                            found: other.describe(),
                            at,
                        })
                    }
                }
            }
        }
        if self.peek().is_none() {
            return Err(ParseError::Empty);
        }
        let lhs = self.parse_expr()?;
        let connective = match self.next("`<=` or `=`")? {
            (Tok::Le, _) => Connective::Subset,
            (Tok::Eq, _) => Connective::Equal,
            (other, at) => {
                return Err(ParseError::Expected {
                    expected: "`<=` or `=`",
                    found: other.describe(),
                    at,
                })
            }
        };
        let rhs = self.parse_expr()?;
        if let Some((tok, at)) = self.toks.get(self.pos) {
            return Err(ParseError::Expected {
                expected: "end of statement",
                found: tok.describe(),
                at: *at,
            });
        }
        let stmt = Statement {
            decls,
            lhs,
            connective,
            rhs,
        };
        // Every variable must be declared.
        for side in [&stmt.lhs, &stmt.rhs] {
            for name in side.variables() {
                if stmt.sort_of(name).is_none() {
                    return Err(ParseError::Undeclared {
                        name: name.to_string(),
                        at: 0,
                    });
                }
            }
        }
        Ok(stmt)
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut parts = vec![self.parse_cterm()?];
        while self.peek() == Some(&Tok::KwO) {
            self.pos += 1;
            parts.push(self.parse_cterm()?);
        }
        Ok(Expr::compose(parts))
    }

    fn parse_cterm(&mut self) -> Result<Expr, ParseError> {
        let mut parts = vec![self.parse_factor()?];
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            parts.push(self.parse_factor()?);
        }
        Ok(Expr::meet(parts))
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        let mut expr = self.parse_atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    expr = expr.star();
                }
                Some(Tok::Caret) => {
                    self.pos += 1;
                    expr = expr.converse();
                }
                _ => return Ok(expr),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        match self.next("a relation expression")? {
            (Tok::Ident(name), _) => Ok(Expr::Var(name)),
            (Tok::Zero, _) => Ok(Expr::Zero),
            (Tok::One, _) => Ok(Expr::One),
            (Tok::LPar, _) => {
                let e = self.parse_expr()?;
                self.expect(Tok::RPar, "`)`")?;
                Ok(e)
            }
            (Tok::KwGen, _) => {
                self.expect(Tok::LPar, "`(` after gen")?;
                let mut branches = vec![self.parse_expr()?];
                while self.peek() == Some(&Tok::Pipe) {
                    self.pos += 1;
                    branches.push(self.parse_expr()?);
                }
                self.expect(Tok::RPar, "`)` closing gen")?;
                Ok(Expr::Gen(branches))
            }
            (other, at) => Err(ParseError::Expected {
                expected: "a relation expression",
                found: other.describe(),
                at,
            }),
        }
    }
}

/// Parses a complete statement (declarations plus one `<=` or `=` claim).
/// `#` comments and arbitrary whitespace are allowed, so a statement file
/// can be passed through unchanged.
pub fn parse_statement(src: &str) -> Result<Statement, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.parse_statement()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_canonical_example() {
        let s = parse_statement("cong a,b; tol H; a&(b o H) <= (a&b) o (a&H) o (a&b)").unwrap();
        assert_eq!(s.decls.len(), 3);
        assert_eq!(s.sort_of("H"), Some(Sort::Tolerance));
        assert_eq!(s.connective, Connective::Subset);
        assert_eq!(
            s.to_string(),
            "cong a,b; tol H; a&(b o H) <= (a&b) o (a&H) o (a&b)"
        );
    }

    #[test]
    fn meet_binds_tighter_than_composition() {
        let s = parse_statement("rel R,S,T; R&S o T <= R").unwrap();
        // (R&S) o T, not R & (S o T).
        assert_eq!(
            s.lhs,
            Expr::compose(vec![
                Expr::meet(vec![Expr::var("R"), Expr::var("S")]),
                Expr::var("T"),
            ])
        );
    }

    #[test]
    fn postfix_operators_apply_to_atoms() {
        let s = parse_statement("rel R,S; R*^&(R o S)* = 0").unwrap();
        assert_eq!(
            s.lhs,
            Expr::meet(vec![
                Expr::var("R").star().converse(),
                Expr::compose(vec![Expr::var("R"), Expr::var("S")]).star(),
            ])
        );
    }

    #[test]
    fn gen_accepts_union_branches() {
        let s = parse_statement("rel R,S,T; gen(R | S o T | 0) <= 1").unwrap();
        assert_eq!(
            s.lhs,
            Expr::Gen(vec![
                Expr::var("R"),
                Expr::compose(vec![Expr::var("S"), Expr::var("T")]),
                Expr::Zero,
            ])
        );
    }

    #[test]
    fn union_outside_gen_is_rejected() {
        assert!(parse_statement("rel R,S; R | S <= 1").is_err());
    }

    #[test]
    fn undeclared_variables_are_rejected() {
        let err = parse_statement("cong a; a o b <= 1").unwrap_err();
        assert!(matches!(err, ParseError::Undeclared { .. }));
    }

    #[test]
    fn duplicate_declarations_are_rejected() {
        let err = parse_statement("cong a; rel a; a <= 1").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateDecl { .. }));
    }

    #[test]
    fn keywords_are_not_identifiers() {
        assert!(parse_statement("rel o; o <= 1").is_err());
        assert!(parse_statement("rel gen; gen <= 1").is_err());
    }

    #[test]
    fn digit_literals_other_than_bounds_are_rejected() {
        let err = parse_statement("rel R; R <= 2").unwrap_err();
        assert!(matches!(err, ParseError::BadLiteral { .. }));
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let s = parse_statement(
            "# tolerance transfer\n cong a; tol H; # declarations\n a&H* <= (a&H) o (a&H)\n",
        )
        .unwrap();
        assert_eq!(s.to_string(), "cong a; tol H; a&H* <= (a&H) o (a&H)");
    }

    #[test]
    fn trailing_tokens_are_rejected() {
        assert!(parse_statement("rel R; R <= R R").is_err());
        assert!(parse_statement("rel R; R <= R = R").is_err());
    }
}
