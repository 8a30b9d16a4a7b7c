//! Randomized cross-cutting laws: the printer/parser round-trip, bit-matrix
//! relation algebra, monotonicity of expression evaluation, the closure
//! properties of relation generation, and agreement of the equation checker
//! with direct pointwise evaluation.

use proptest::prelude::*;
use relkit_core::{
    equation_holds, eval_expr, eval_term, generated_relation, parse_statement, BinaryRelation,
    ClosureBudget, Connective, El, Expr, FiniteAlgebra, Operation, Sort, Statement, Term,
};

/// Variable names safe in the identity language (no keywords).
const NAMES: &[&str] = &["R", "S", "T", "H"];

fn sort_any() -> impl Strategy<Value = Sort> {
    prop_oneof![
        Just(Sort::Admissible),
        Just(Sort::Tolerance),
        Just(Sort::Congruence),
    ]
}

/// Arbitrary expressions over the given variable names. Meet and composition
/// nodes always carry at least two operands, like the parser produces.
fn expr_over(names: Vec<String>) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        4 => proptest::sample::select(names).prop_map(Expr::Var),
        1 => Just(Expr::Zero),
        1 => Just(Expr::One),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Meet),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Compose),
            prop::collection::vec(inner.clone(), 1..=2).prop_map(Expr::Gen),
            inner.clone().prop_map(|e| e.star()),
            inner.prop_map(|e| e.converse()),
        ]
    })
}

/// Arbitrary statements: distinct declared names, random sorts, random
/// expressions on both sides of a random connective.
fn statement_any() -> impl Strategy<Value = Statement> {
    let pool: Vec<String> = NAMES.iter().map(|n| n.to_string()).collect();
    proptest::sample::subsequence(pool, 1..=NAMES.len()).prop_flat_map(|names| {
        let sorts = prop::collection::vec(sort_any(), names.len());
        let lhs = expr_over(names.clone());
        let rhs = expr_over(names.clone());
        (Just(names), sorts, lhs, rhs, any::<bool>()).prop_map(
            |(names, sorts, lhs, rhs, equal)| Statement {
                decls: names.into_iter().zip(sorts).collect(),
                lhs,
                connective: if equal {
                    Connective::Equal
                } else {
                    Connective::Subset
                },
                rhs,
            },
        )
    })
}

/// Random seed-pair lists on a universe of `n` elements.
fn pairs_any(n: usize, max: usize) -> impl Strategy<Value = Vec<(El, El)>> {
    prop::collection::vec((0..n, 0..n), 0..=max)
}

/// Random algebras with a fixed signature (one binary `f`, one unary `g`)
/// on up to three elements.
fn algebra_any() -> impl Strategy<Value = FiniteAlgebra> {
    (1..=3usize).prop_flat_map(|n| {
        let f = prop::collection::vec(0..n, n * n);
        let g = prop::collection::vec(0..n, n);
        (Just(n), f, g).prop_map(|(n, f, g)| {
            FiniteAlgebra::new(
                "random",
                n,
                vec![
                    Operation::new("f", 2, n, f).expect("valid binary table"),
                    Operation::new("g", 1, n, g).expect("valid unary table"),
                ],
            )
            .expect("valid algebra")
        })
    })
}

/// Random terms over the fixed `f`/`g` signature with at most three
/// variables.
fn term_any() -> impl Strategy<Value = Term> {
    let leaf = (0..3usize).prop_map(Term::var);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("f", vec![a, b])),
            inner.prop_map(|a| Term::app("g", vec![a])),
        ]
    })
}

type MonotonicityCase = (
    FiniteAlgebra,
    Expr,
    Vec<(String, BinaryRelation)>,
    usize,
    Vec<(El, El)>,
);

/// An algebra, an expression, a full binding for [`NAMES`], the index of
/// one binding to enlarge, and the pairs to enlarge it with.
fn monotonicity_case() -> impl Strategy<Value = MonotonicityCase> {
    algebra_any().prop_flat_map(|alg| {
        let n = alg.size();
        let pair_sets = prop::collection::vec(pairs_any(n, 8), NAMES.len());
        let expr = expr_over(NAMES.iter().map(|s| s.to_string()).collect());
        let grow_extra = pairs_any(n, 4);
        (Just(alg), expr, pair_sets, 0..NAMES.len(), grow_extra).prop_map(
            |(alg, expr, pair_sets, grow_index, grow_extra)| {
                let n = alg.size();
                let bindings = NAMES
                    .iter()
                    .zip(&pair_sets)
                    .map(|(name, pairs)| {
                        (
                            name.to_string(),
                            BinaryRelation::from_pairs(n, pairs).expect("pairs in range"),
                        )
                    })
                    .collect();
                (alg, expr, bindings, grow_index, grow_extra)
            },
        )
    })
}

proptest! {
    /// Printing a statement and parsing it back reproduces the same tree.
    #[test]
    fn statement_display_parses_back(stmt in statement_any()) {
        let printed = stmt.to_string();
        let reparsed = parse_statement(&printed)
            .unwrap_or_else(|e| panic!("`{printed}` failed to reparse: {e}"));
        prop_assert_eq!(reparsed, stmt, "printed form: {}", printed);
    }

    /// Composition is associative, converse is an involution that reverses
    /// composition, and star is the least reflexive-transitive fixpoint the
    /// bit matrix can express.
    #[test]
    fn relation_algebra_laws(
        (r, s, t) in (1..=6usize).prop_flat_map(|n| {
            (pairs_any(n, 10), pairs_any(n, 10), pairs_any(n, 10)).prop_map(move |(a, b, c)| (
                BinaryRelation::from_pairs(n, &a).expect("pairs in range"),
                BinaryRelation::from_pairs(n, &b).expect("pairs in range"),
                BinaryRelation::from_pairs(n, &c).expect("pairs in range"),
            ))
        })
    ) {
        let rs = r.compose(&s).unwrap();
        let st = s.compose(&t).unwrap();
        prop_assert!(rs.compose(&t).unwrap() == r.compose(&st).unwrap());

        prop_assert!(r.converse().converse() == r);
        prop_assert!(rs.converse() == s.converse().compose(&r.converse()).unwrap());

        let star = r.star();
        prop_assert!(r.is_subset_of(&star).unwrap());
        prop_assert!(star.is_transitive());
        prop_assert!(star.star() == star);

        // Every relation here is reflexive, so composing can only grow.
        prop_assert!(r.is_subset_of(&rs).unwrap());
        prop_assert!(r.is_subset_of(&s.compose(&r).unwrap()).unwrap());
    }

    /// Enlarging any bound relation can only enlarge the value of an
    /// expression: every operator of the language is monotone.
    #[test]
    fn eval_expr_is_monotone_in_every_binding(
        (alg, expr, bindings, grow_index, grow_extra) in monotonicity_case()
    ) {
        let budget = ClosureBudget::default();
        let small = eval_expr(&alg, &expr, &bindings, &budget).unwrap();

        let mut grown = bindings.clone();
        let extra = BinaryRelation::from_pairs(alg.size(), &grow_extra).expect("pairs in range");
        grown[grow_index].1 = grown[grow_index].1.union_raw(&extra).unwrap();
        let large = eval_expr(&alg, &expr, &grown, &budget).unwrap();

        prop_assert!(
            small.is_subset_of(&large).unwrap(),
            "expression {} shrank when binding {} grew",
            expr,
            grown[grow_index].0
        );
    }

    /// Relation generation is a closure operator: its output contains the
    /// seeds, satisfies the sort, is idempotent, and is monotone in the
    /// seed set.
    #[test]
    fn generated_relation_is_a_closure(
        (alg, sort, seeds, extra) in algebra_any().prop_flat_map(|alg| {
            let n = alg.size();
            (Just(alg), sort_any(), pairs_any(n, 6), pairs_any(n, 4))
        })
    ) {
        let budget = ClosureBudget::default();
        let generated = generated_relation(&alg, &seeds, sort, &budget).unwrap().relation;

        for &(a, b) in &seeds {
            prop_assert!(generated.contains(a, b), "seed ({a}, {b}) missing");
        }
        let flags = generated.classify(&alg, &budget).unwrap();
        prop_assert!(flags.satisfies(sort), "output violates its sort");

        let regenerated = generated_relation(&alg, &generated.off_diagonal_pairs(), sort, &budget)
            .unwrap()
            .relation;
        prop_assert!(regenerated == generated, "generation is not idempotent");

        let mut bigger = seeds.clone();
        bigger.extend_from_slice(&extra);
        let larger = generated_relation(&alg, &bigger, sort, &budget).unwrap().relation;
        prop_assert!(
            generated.is_subset_of(&larger).unwrap(),
            "generation is not monotone in the seeds"
        );
    }

    /// The equation checker agrees with direct evaluation over every
    /// assignment of at most three variables.
    #[test]
    fn equation_holds_matches_pointwise_evaluation(
        (alg, lhs, rhs) in (algebra_any(), term_any(), term_any())
    ) {
        let n = alg.size();
        let mut pointwise = true;
        'outer: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let env = [a, b, c];
                    if eval_term(&alg, &lhs, &env).unwrap() != eval_term(&alg, &rhs, &env).unwrap() {
                        pointwise = false;
                        break 'outer;
                    }
                }
            }
        }
        prop_assert_eq!(equation_holds(&alg, &lhs, &rhs).unwrap(), pointwise);
    }
}
