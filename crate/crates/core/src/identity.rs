//! A small language of relation identities.
//!
//! A statement declares relation variables at one of three sorts
//! (`cong`, `tol`, `rel`) and asserts an inclusion or equality between two
//! relation expressions built from meet (`&`), composition (`o`),
//! transitive closure (`*`), converse (`^`), the bounds `0` (diagonal) and
//! `1` (full), and admissible generation of raw unions (`gen(e | e | ..)`).
//!
//! Submodules: [`ast`] (expression trees and printing), [`parse`]
//! (lexer/parser), [`eval`] (relation-valued evaluation), [`check`]
//! (checking modes and counterexamples), and [`families`] (identity
//! families parameterised by level).

pub mod ast;
pub mod check;
pub mod eval;
pub mod families;
pub mod parse;
