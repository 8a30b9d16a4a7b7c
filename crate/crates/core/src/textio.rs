//! Plain-text formats for algebras and relation literals.
//!
//! An algebra document holds one algebra and any number of named
//! relations:
//!
//! ```text
//! # comment to end of line
//! algebra impl2
//! size 2
//! op i 2
//! 0 0 1 0
//! rel R { (0,1) (1,2) }
//! ```
//!
//! Operation tables list `size^arity` entries, whitespace-separated, with
//! the last argument varying fastest. Relation literals list the
//! off-diagonal pairs; the diagonal is implicit (every relation in scope
//! is reflexive).

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{AlgebraError, El, FiniteAlgebra, Operation};
use crate::rel::{BinaryRelation, RelError};

/// A parsed algebra file: the algebra plus its named relations.
#[derive(Debug, Clone)]
pub struct AlgebraDocument {
    pub algebra: FiniteAlgebra,
    pub relations: Vec<(String, BinaryRelation)>,
}

/// Failures while reading the text formats.
#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: expected {expected}, found `{found}`")]
    Expected {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("line {line}: `{text}` is not a number")]
    Number { line: usize, text: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rel(#[from] RelError),
}

struct Tokens {
    toks: Vec<(usize, String)>,
    pos: usize,
}

impl Tokens {
    fn lex(src: &str) -> Tokens {
        let mut toks = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("");
            let mut word = String::new();
            for ch in text.chars() {
                if ch.is_whitespace() || "(){},".contains(ch) {
                    if !word.is_empty() {
                        toks.push((line, std::mem::take(&mut word)));
                    }
                    if !ch.is_whitespace() {
                        toks.push((line, ch.to_string()));
                    }
                } else {
                    word.push(ch);
                }
            }
            if !word.is_empty() {
                toks.push((line, word));
            }
        }
        Tokens { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&(usize, String)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, expected: &'static str) -> Result<(usize, String), TextError> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or(TextError::UnexpectedEnd { expected })?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, literal: &'static str) -> Result<(), TextError> {
        let (line, text) = self.next(literal)?;
        if text == literal {
            Ok(())
        } else {
            Err(TextError::Expected {
                line,
                expected: literal,
                found: text,
            })
        }
    }

    fn number(&mut self, expected: &'static str) -> Result<usize, TextError> {
        let (line, text) = self.next(expected)?;
        text.parse()
            .map_err(|_| TextError::Number { line, text })
    }
}

/// Parses an algebra document.
pub fn parse_document(src: &str) -> Result<AlgebraDocument, TextError> {
    let mut toks = Tokens::lex(src);
    toks.expect("algebra")?;
    let (_, name) = toks.next("algebra name")?;
    toks.expect("size")?;
    let size = toks.number("universe size")?;

    let mut ops = Vec::new();
    let mut relations: Vec<(String, BinaryRelation)> = Vec::new();
    while let Some((line, word)) = toks.peek().cloned() {
        match word.as_str() {
            "op" => {
                toks.next("op")?;
                let (_, symbol) = toks.next("operation symbol")?;
                let arity = toks.number("operation arity")?;
                let entries = size
                    .checked_pow(arity as u32)
                    .ok_or(TextError::Number {
                        line,
                        text: format!("{size}^{arity}"),
                    })?;
                let mut table = Vec::with_capacity(entries);
                for _ in 0..entries {
                    table.push(toks.number("table entry")?);
                }
                ops.push(Operation::new(symbol, arity, size, table)?);
            }
            "rel" => {
                toks.next("rel")?;
                let (_, rel_name) = toks.next("relation name")?;
                toks.expect("{")?;
                let mut pairs = Vec::new();
                loop {
                    let (line, word) = toks.next("`(` or `}`")?;
                    match word.as_str() {
                        "}" => break,
                        "(" => {
                            let a = toks.number("pair element")?;
                            toks.expect(",")?;
                            let b = toks.number("pair element")?;
                            toks.expect(")")?;
                            pairs.push((a, b));
                        }
                        other => {
                            return Err(TextError::Expected {
                                line,
                                expected: "`(` or `}`",
                                found: other.to_string(),
                            });
                        }
                    }
                }
                relations.push((rel_name, BinaryRelation::from_pairs(size, &pairs)?));
            }
            other => {
                return Err(TextError::Expected {
                    line,
                    expected: "`op`, `rel`, or end of input",
                    found: other.to_string(),
                });
            }
        }
    }
    let algebra = FiniteAlgebra::new(name, size, ops)?;
    Ok(AlgebraDocument { algebra, relations })
}

/// Serializes an algebra (and optional named relations) to the document
/// format; `parse_document` of the output reproduces the input bit-exactly.
pub fn serialize_document(
    algebra: &FiniteAlgebra,
    relations: &[(String, BinaryRelation)],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "algebra {}", algebra.name());
    let _ = writeln!(out, "size {}", algebra.size());
    for op in algebra.ops() {
        let _ = writeln!(out, "op {} {}", op.symbol(), op.arity());
        for chunk in op.table().chunks(algebra.size().max(1)) {
            let row = chunk
                .iter()
                .map(El::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(out, "{row}");
        }
    }
    for (name, rel) in relations {
        out.push_str(&serialize_relation(name, rel));
    }
    out
}

/// One relation literal: `rel <name> { (a,b) ... }`, off-diagonal pairs in
/// row-major order.
pub fn serialize_relation(name: &str, rel: &BinaryRelation) -> String {
    let pairs = rel
        .off_diagonal_pairs()
        .iter()
        .map(|&(a, b)| format!("({a},{b})"))
        .collect::<Vec<_>>()
        .join(" ");
    if pairs.is_empty() {
        format!("rel {name} {{ }}\n")
    } else {
        format!("rel {name} {{ {pairs} }}\n")
    }
}
