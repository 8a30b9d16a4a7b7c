//! relkit-core: a workbench for relation identities on finite algebras.
//!
//! The crate decides whether identities between reflexive admissible
//! relations, tolerances, and congruences hold on a finite algebra or on
//! the (desk-scale) finitely generated variety it spans, and searches free
//! algebras for the term systems the identities correspond to.

pub mod algebra;
pub mod fixtures;
pub mod identity;
pub mod probe;
pub mod rel;
pub mod search;
pub mod suite;
pub mod textio;

pub use algebra::{
    equation_holds, eval_term, free_algebra, subuniverse_closure, AlgebraError, ClosureBudget,
    El, FiniteAlgebra, FreeAlgebra, Operation, Subuniverse, Term,
};
pub use fixtures::{fixture, Fixture, FIXTURE_NAMES};
pub use identity::ast::{Connective, Expr, Sort, Statement};
pub use identity::check::{BoundRelation, CheckMode, CheckOutcome, Checker, Counterexample};
pub use identity::eval::eval_expr;
pub use identity::families::{family_ids, gen_identity, parse_family_spec, FamilyError};
pub use identity::parse::parse_statement;
pub use probe::{probe_free_identity, ProbeError, ProbeOutcome};
pub use rel::{
    enumerate_relations, generated_relation, join_relations, preorder_lattice, BinaryRelation,
    PreorderLattice, RelError, SortFlags,
};
pub use search::{
    directed_equations, directed_from_jonsson, find_all_term_systems, find_term_system,
    majority_from_transfer, preset, replace_unknowns, witness_chain, ChainStep, SearchError,
    TermSystem, TermSystemSpec, WitnessChain,
};
pub use suite::{run_all, run_filtered, FactReport, SuiteReport};
pub use textio::{parse_document, serialize_document, AlgebraDocument, TextError};
