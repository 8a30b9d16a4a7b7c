//! Bundled example algebras with their named relations, elements and
//! terms.
//!
//! - `impl2`: ⟨{0,1}, i⟩ with `i(x,y) = x·y′` — generates a variety that
//!   is 3-distributive and 3-permutable but has no majority term.
//! - `f2`: ⟨{0,1}, f⟩ with `f(x,y,z) = x·(y′+z)` — the same phenomena
//!   through a single ternary operation.
//! - `inu2`: `impl2` extended by the 4-ary near-unanimity operation
//!   `u(x1..x4) = ∏(xi ∨ xj)` over distinct pairs.
//! - `median2`: ⟨{0,1}, median⟩ — has a majority term.
//! - `unary3`: mono-unary ⟨{0,1,2}, g⟩ with an admissible reflexive
//!   relation that is neither symmetric nor transitive.
//! - `mitschke_B`: the 7-element subalgebra of the cube of `impl2`
//!   obtained by removing the top, with the three projection-kernel
//!   congruences; 3-distributivity is sharp here.
//! - `example51`: the 15-element union of three downsets of the 5-cube
//!   under componentwise difference, carrying the congruences and
//!   tolerance on which the main tolerance identity fails.

use crate::algebra::{ClosureBudget, El, FiniteAlgebra, Operation, Term};
use crate::rel::BinaryRelation;

/// A bundled algebra and its named attachments.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub algebra: FiniteAlgebra,
    /// Named relations, with verified property flags.
    pub relations: Vec<(String, BinaryRelation)>,
    /// Named elements.
    pub elements: Vec<(String, El)>,
    /// Named terms over the algebra's signature.
    pub terms: Vec<(String, Term)>,
    /// One-line description.
    pub summary: String,
}

impl Fixture {
    pub fn relation(&self, name: &str) -> Option<&BinaryRelation> {
        self.relations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r)
    }

    pub fn element(&self, name: &str) -> Option<El> {
        self.elements
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, e)| e)
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

/// The bundled fixture names, as accepted by [`fixture`].
pub const FIXTURE_NAMES: &[&str] = &[
    "impl2",
    "f2",
    "inu2",
    "median2",
    "unary3",
    "mitschke_B",
    "example51",
];

/// Looks a fixture up by name, case-insensitively.
pub fn fixture(name: &str) -> Option<Fixture> {
    match name.to_ascii_lowercase().as_str() {
        "impl2" => Some(impl2()),
        "f2" => Some(f2()),
        "inu2" => Some(inu2()),
        "median2" => Some(median2()),
        "unary3" => Some(unary3()),
        "mitschke_b" => Some(mitschke_b()),
        "example51" => Some(example51()),
        _ => None,
    }
}

fn var(i: usize) -> Term {
    Term::var(i)
}

/// `j1 = i(x, i(i(x, i(y,z)), z))`: x·(y+z) in difference form.
fn j1_difference() -> Term {
    Term::app(
        "i",
        vec![
            var(0),
            Term::app(
                "i",
                vec![
                    Term::app("i", vec![var(0), Term::app("i", vec![var(1), var(2)])]),
                    var(2),
                ],
            ),
        ],
    )
}

/// `j2 = i(z, i(y, x))`: z·(y′ + x)′′ in difference form.
fn j2_difference() -> Term {
    Term::app("i", vec![var(2), Term::app("i", vec![var(1), var(0)])])
}

/// Verifies the property flags of every named relation against the
/// algebra, so downstream code can trust them.
fn classify_all(algebra: &FiniteAlgebra, relations: &mut [(String, BinaryRelation)]) {
    let budget = ClosureBudget::default();
    for (name, rel) in relations {
        rel.flags = rel
            .classify(algebra, &budget)
            .unwrap_or_else(|e| panic!("classifying {name}: {e}"));
    }
}

/// Operation table of componentwise difference `p & !q` over the given
/// element codes (each code a bit vector). The codes must form a union of
/// downsets, which is closed under difference.
fn difference_table(codes: &[usize]) -> Vec<El> {
    let mut table = Vec::with_capacity(codes.len() * codes.len());
    for &p in codes {
        for &q in codes {
            let value = p & !q;
            let idx = codes
                .iter()
                .position(|&c| c == value)
                .expect("difference stays inside a downset union");
            table.push(idx);
        }
    }
    table
}

/// Operation table of the componentwise 4-ary near-unanimity operation
/// (each bit is the majority-of-at-least-3 of the four argument bits).
fn near_unanimity4_table(codes: &[usize], bits: usize) -> Vec<El> {
    let n = codes.len();
    let mut table = Vec::with_capacity(n * n * n * n);
    for &a in codes {
        for &b in codes {
            for &c in codes {
                for &d in codes {
                    let mut value = 0usize;
                    for bit in 0..bits {
                        let ones = (a >> bit & 1) + (b >> bit & 1) + (c >> bit & 1) + (d >> bit & 1);
                        if ones >= 3 {
                            value |= 1 << bit;
                        }
                    }
                    let idx = codes
                        .iter()
                        .position(|&e| e == value)
                        .expect("near-unanimity stays inside the universe");
                    table.push(idx);
                }
            }
        }
    }
    table
}

/// Kernel of "restrict the code to `mask`": the congruence identifying
/// elements whose codes agree on the masked bits.
fn kernel_of_mask(codes: &[usize], mask: usize) -> BinaryRelation {
    let n = codes.len();
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if codes[p] & mask == codes[q] & mask {
                pairs.push((p, q));
            }
        }
    }
    BinaryRelation::from_pairs(n, &pairs).expect("kernel pairs are in range")
}

fn impl2() -> Fixture {
    let algebra = FiniteAlgebra::new(
        "impl2",
        2,
        vec![Operation::new("i", 2, 2, vec![0, 0, 1, 0]).expect("table")],
    )
    .expect("algebra");
    Fixture {
        algebra,
        relations: Vec::new(),
        elements: Vec::new(),
        terms: vec![
            ("j1".to_string(), j1_difference()),
            ("j2".to_string(), j2_difference()),
        ],
        summary: "two-element difference algebra i(x,y) = x·y′".to_string(),
    }
}

fn f2() -> Fixture {
    // f(x,y,z) = x·(y′+z), tabulated with the last argument fastest.
    let algebra = FiniteAlgebra::new(
        "f2",
        2,
        vec![Operation::new("f", 3, 2, vec![0, 0, 0, 0, 1, 1, 0, 1]).expect("table")],
    )
    .expect("algebra");
    let j1 = Term::app(
        "f",
        vec![
            var(0),
            Term::app("f", vec![var(0), var(1), var(2)]),
            var(2),
        ],
    );
    let j2 = Term::app("f", vec![var(2), var(1), var(0)]);
    Fixture {
        algebra,
        relations: Vec::new(),
        elements: Vec::new(),
        terms: vec![("j1".to_string(), j1), ("j2".to_string(), j2)],
        summary: "two-element algebra with the single ternary operation f(x,y,z) = x·(y′+z)"
            .to_string(),
    }
}

fn inu2() -> Fixture {
    let codes: Vec<usize> = vec![0, 1];
    let algebra = FiniteAlgebra::new(
        "inu2",
        2,
        vec![
            Operation::new("i", 2, 2, vec![0, 0, 1, 0]).expect("table"),
            Operation::new("u", 4, 2, near_unanimity4_table(&codes, 1)).expect("table"),
        ],
    )
    .expect("algebra");
    Fixture {
        algebra,
        relations: Vec::new(),
        elements: Vec::new(),
        terms: vec![
            ("j1".to_string(), j1_difference()),
            ("j2".to_string(), j2_difference()),
        ],
        summary: "difference algebra extended by the 4-ary near-unanimity operation".to_string(),
    }
}

fn median2() -> Fixture {
    let algebra = FiniteAlgebra::new(
        "median2",
        2,
        vec![Operation::new("m", 3, 2, vec![0, 0, 0, 1, 0, 1, 1, 1]).expect("table")],
    )
    .expect("algebra");
    Fixture {
        algebra,
        relations: Vec::new(),
        elements: Vec::new(),
        terms: vec![(
            "majority".to_string(),
            Term::app("m", vec![var(0), var(1), var(2)]),
        )],
        summary: "two-element median (majority) algebra".to_string(),
    }
}

fn unary3() -> Fixture {
    let algebra = FiniteAlgebra::new(
        "unary3",
        3,
        vec![Operation::new("g", 1, 3, vec![1, 2, 2]).expect("table")],
    )
    .expect("algebra");
    let r = BinaryRelation::from_pairs(3, &[(0, 1), (1, 2)]).expect("pairs");
    let mut relations = vec![("R".to_string(), r)];
    classify_all(&algebra, &mut relations);
    Fixture {
        algebra,
        relations,
        elements: Vec::new(),
        terms: Vec::new(),
        summary: "three-element mono-unary algebra with a non-transitive admissible relation"
            .to_string(),
    }
}

fn mitschke_b() -> Fixture {
    // Elements are the 3-bit codes 0..=6: the cube of the two-element
    // difference algebra with the top (111) removed — removal is harmless
    // because both operations only ever clear bits of their majority-
    // or first-argument bound.
    let codes: Vec<usize> = (0..7).collect();
    let algebra = FiniteAlgebra::new(
        "mitschke_B",
        7,
        vec![
            Operation::new("i", 2, 7, difference_table(&codes)).expect("table"),
            Operation::new("u", 4, 7, near_unanimity4_table(&codes, 3)).expect("table"),
        ],
    )
    .expect("algebra");
    let mut relations = vec![
        ("alpha".to_string(), kernel_of_mask(&codes, 0b010)),
        ("beta".to_string(), kernel_of_mask(&codes, 0b100)),
        ("gamma".to_string(), kernel_of_mask(&codes, 0b001)),
    ];
    classify_all(&algebra, &mut relations);
    Fixture {
        algebra,
        relations,
        elements: vec![
            ("a".to_string(), 6),
            ("b".to_string(), 5),
            ("c".to_string(), 3),
        ],
        terms: vec![
            ("j1".to_string(), j1_difference()),
            ("j2".to_string(), j2_difference()),
        ],
        summary: "7-element cube-minus-top of the difference algebra with its projection kernels"
            .to_string(),
    }
}

/// Codes of the union of the three downsets of the 5-cube generated by
/// 11100, 10010 and 01011, in increasing order.
fn example51_codes() -> Vec<usize> {
    const GENERATORS: [usize; 3] = [0b11100, 0b10010, 0b01011];
    (0..32usize)
        .filter(|&c| GENERATORS.iter().any(|&g| c & g == c))
        .collect()
}

fn example51() -> Fixture {
    let codes = example51_codes();
    let n = codes.len();
    let algebra = FiniteAlgebra::new(
        "example51",
        n,
        vec![Operation::new("i", 2, n, difference_table(&codes)).expect("table")],
    )
    .expect("algebra");

    let alpha = kernel_of_mask(&codes, 0b01000);
    let beta = kernel_of_mask(&codes, 0b10001);
    let gamma = kernel_of_mask(&codes, 0b00110);
    // psi relates two elements when both lie under 11100, or both lie in
    // the union of the downsets of 10010 and 01011.
    let under_top = |c: usize| c & 0b11100 == c;
    let in_side = |c: usize| c & 0b10010 == c || c & 0b01011 == c;
    let mut psi_pairs = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let (cp, cq) = (codes[p], codes[q]);
            if (under_top(cp) && under_top(cq)) || (in_side(cp) && in_side(cq)) {
                psi_pairs.push((p, q));
            }
        }
    }
    let psi = BinaryRelation::from_pairs(n, &psi_pairs).expect("pairs");
    let theta = gamma.meet(&psi).expect("same universe");
    let mut relations = vec![
        ("alpha".to_string(), alpha),
        ("beta".to_string(), beta),
        ("gamma".to_string(), gamma),
        ("psi".to_string(), psi),
        ("theta".to_string(), theta),
    ];
    classify_all(&algebra, &mut relations);

    let index_of = |code: usize| codes.iter().position(|&c| c == code).expect("named code");
    Fixture {
        algebra,
        relations,
        elements: vec![
            ("x".to_string(), index_of(0b11100)),
            ("y".to_string(), index_of(0b10010)),
            ("z".to_string(), index_of(0b01011)),
            ("x1".to_string(), index_of(0b11000)),
            ("z1".to_string(), index_of(0b01001)),
        ],
        terms: vec![
            ("j1".to_string(), j1_difference()),
            ("j2".to_string(), j2_difference()),
        ],
        summary:
            "15-element downset union of the 5-cube where the tolerance identity fails"
                .to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::equation_holds;
    use crate::rel::Sort;
    use crate::search::{preset, replace_unknowns};

    #[test]
    fn every_name_resolves_and_lookup_ignores_case() {
        for name in FIXTURE_NAMES {
            let fx = fixture(name).unwrap_or_else(|| panic!("missing fixture {name}"));
            assert_eq!(&fx.algebra.name().to_ascii_lowercase(), &name.to_ascii_lowercase());
            assert!(fixture(&name.to_ascii_uppercase()).is_some());
        }
        assert!(fixture("no_such_algebra").is_none());
    }

    #[test]
    fn example51_universe_matches_the_downset_oracle() {
        let codes = example51_codes();
        assert_eq!(
            codes,
            vec![0, 1, 2, 3, 4, 8, 9, 10, 11, 12, 16, 18, 20, 24, 28]
        );
        // Inclusion-exclusion over the three downsets: 8 + 4 + 8 −
        // 2 − 2 − 2 + 1 = 15.
        assert_eq!(codes.len(), 15);
        assert_eq!(fixture("example51").unwrap().algebra.size(), 15);
    }

    #[test]
    fn named_relations_carry_their_sorts() {
        let m = fixture("mitschke_B").unwrap();
        for name in ["alpha", "beta", "gamma"] {
            assert!(
                m.relation(name).unwrap().flags.satisfies(Sort::Congruence),
                "{name} should be a congruence"
            );
        }
        let e = fixture("example51").unwrap();
        for name in ["alpha", "beta", "gamma"] {
            assert!(e.relation(name).unwrap().flags.satisfies(Sort::Congruence));
        }
        for name in ["psi", "theta"] {
            let flags = e.relation(name).unwrap().flags;
            assert!(flags.satisfies(Sort::Tolerance), "{name} is a tolerance");
            assert!(!flags.transitive, "{name} must not be transitive");
        }
        let u = fixture("unary3").unwrap();
        let flags = u.relation("R").unwrap().flags;
        assert!(flags.reflexive && flags.admissible);
        assert!(!flags.symmetric && !flags.transitive);
    }

    #[test]
    fn named_terms_satisfy_the_full_two_term_chain() {
        let spec = preset("jonsson3").unwrap();
        for name in ["impl2", "f2", "inu2", "mitschke_B", "example51"] {
            let fx = fixture(name).unwrap();
            let assignments = [
                ("j1".to_string(), fx.term("j1").unwrap().clone()),
                ("j2".to_string(), fx.term("j2").unwrap().clone()),
            ];
            for (lhs, rhs) in &spec.equations {
                let l = replace_unknowns(lhs, &assignments).unwrap();
                let r = replace_unknowns(rhs, &assignments).unwrap();
                assert!(
                    equation_holds(&fx.algebra, &l, &r).unwrap(),
                    "{lhs} = {rhs} on {name}"
                );
            }
        }
    }

    #[test]
    fn chain_triples_meet_their_preconditions() {
        let m = fixture("mitschke_B").unwrap();
        let (a, b, c) = (
            m.element("a").unwrap(),
            m.element("b").unwrap(),
            m.element("c").unwrap(),
        );
        assert!(m.relation("alpha").unwrap().contains(a, c));
        assert!(m.relation("beta").unwrap().contains(a, b));
        assert!(m.relation("gamma").unwrap().contains(b, c));

        let e = fixture("example51").unwrap();
        let (x, y, z) = (
            e.element("x").unwrap(),
            e.element("y").unwrap(),
            e.element("z").unwrap(),
        );
        assert_eq!((x, y, z), (14, 11, 8));
        assert!(e.relation("alpha").unwrap().contains(x, z));
        assert!(e.relation("beta").unwrap().contains(x, y));
        assert!(e.relation("theta").unwrap().contains(y, z));
    }

    #[test]
    fn sharpness_pair_on_the_seven_element_algebra() {
        // alpha ∩ (beta ∘ gamma) reaches (a, c) through b, but the
        // majority-shaped right side does not: distributivity at level 2
        // fails on this algebra.
        let m = fixture("mitschke_B").unwrap();
        let alpha = m.relation("alpha").unwrap();
        let beta = m.relation("beta").unwrap();
        let gamma = m.relation("gamma").unwrap();
        let lhs = alpha
            .meet(&beta.compose(gamma).unwrap())
            .unwrap();
        let rhs = alpha
            .meet(beta)
            .unwrap()
            .compose(&alpha.meet(gamma).unwrap())
            .unwrap();
        assert!(lhs.contains(6, 3));
        assert!(!rhs.contains(6, 3));
    }
}
