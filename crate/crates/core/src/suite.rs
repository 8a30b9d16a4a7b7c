//! The curated battery of checkable facts the workbench is built to
//! reproduce: term-condition searches, relation-identity checks,
//! counterexample replays and structural invariants over the bundled
//! fixtures, runnable as one deterministic pass/fail report.
//!
//! Each fact has a stable id of the form `fixture/short-description` and a
//! body returning `Ok(detail)` or `Err(reason)`. [`run_filtered`] keeps
//! only the facts whose id contains the given substring, so e.g.
//! `"example51"` selects one fixture and `"holds-nperm"` one family.

use crate::algebra::{
    equation_holds, eval_term, free_algebra, ClosureBudget, El, FiniteAlgebra, Term,
};
use crate::fixtures::{fixture, Fixture};
use crate::identity::ast::Statement;
use crate::identity::check::{BoundRelation, CheckMode, CheckOutcome, Checker};
use crate::identity::eval::eval_expr;
use crate::identity::families::gen_identity;
use crate::probe::{probe_free_identity, ProbeOutcome};
use crate::rel::{enumerate_relations, preorder_lattice, BinaryRelation, Sort};
use crate::search::{
    directed_equations, directed_from_jonsson, find_all_term_systems, find_term_system, preset,
    replace_unknowns, witness_chain, TermSystem,
};

/// Candidate-space parameter for the generated-mode identity checks.
const GENERATED_K: usize = 2;
/// Binding cap for generated-mode identity checks: large enough to clear
/// the 500-binding floor, small enough to keep the full battery fast.
const MAX_BINDINGS: u64 = 600;
/// Floor asserted on the number of bindings a generated-mode check covers.
const MIN_BINDINGS: u64 = 500;
/// Trial count and seed for the sampled-mode identity checks.
const SAMPLED_TRIALS: u64 = 256;
const SAMPLED_SEED: u64 = 7;

/// Identity families checked in generated mode on both large fixtures.
const GENERATED_FAMILIES: &[(&str, Option<usize>)] = &[
    ("dist3-3a", None),
    ("dist3-3b", None),
    ("dist3-3c", None),
    ("gumm-3ga", None),
    ("gumm-3gb", None),
    ("gumm-3gc", None),
    ("cor3-3dd", None),
    ("nperm-ne", Some(3)),
    ("nperm-nra", Some(3)),
    ("nperm-nr", Some(3)),
    ("nperm-nrr", Some(3)),
    ("nperm-nrrr", Some(3)),
    ("nperm-nrrrr", Some(3)),
    ("nperm-nrup", Some(3)),
    ("nperm-nrupp", Some(3)),
    ("cd-np-anrr", Some(3)),
    ("cd-np-anrrr", Some(3)),
    ("cd-np-anrrrrtol", Some(3)),
    ("cd-np-anrrrrcon", Some(3)),
    ("cd-np-anrupp", Some(3)),
];

/// Identity families checked in sampled mode (their binding spaces are too
/// large for a useful enumeration at small k, but random bindings still
/// exercise every connective).
const SAMPLED_FAMILIES: &[(&str, Option<usize>)] = &[
    ("amm-1", Some(1)),
    ("amm-2", Some(1)),
    ("amm-3", Some(1)),
    ("cm-np-nram", Some(3)),
    ("cm-np-nrm", Some(3)),
    ("cm-np-nrrm", Some(3)),
    ("cm-np-nrrrm", Some(3)),
    ("cm-np-nruppm", Some(3)),
];

/// Outcome of one suite fact.
#[derive(Debug, Clone)]
pub struct FactReport {
    /// Stable id, `fixture/short-description`.
    pub id: String,
    /// `Ok` carries the verified detail, `Err` the reason for failure.
    pub outcome: Result<String, String>,
}

impl FactReport {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }

    /// One human-readable report line.
    pub fn line(&self) -> String {
        match &self.outcome {
            Ok(detail) => format!("PASS {}: {detail}", self.id),
            Err(reason) => format!("FAIL {}: {reason}", self.id),
        }
    }
}

/// The full report of a suite run, in deterministic fixture order.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub facts: Vec<FactReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.facts.iter().filter(|f| f.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.facts.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    /// The whole report as text: one line per fact plus a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for fact in &self.facts {
            out.push_str(&fact.line());
            out.push('\n');
        }
        out.push_str(&format!(
            "{} passed, {} failed ({} facts)\n",
            self.passed(),
            self.failed(),
            self.facts.len()
        ));
        out
    }
}

/// Runs every fact.
pub fn run_all() -> SuiteReport {
    run_filtered("")
}

/// Runs the facts whose id contains `filter` (empty keeps everything).
pub fn run_filtered(filter: &str) -> SuiteReport {
    let mut run = SuiteRun {
        filter,
        facts: Vec::new(),
    };
    impl2_facts(&mut run);
    f2_facts(&mut run);
    inu2_facts(&mut run);
    median2_facts(&mut run);
    unary3_facts(&mut run);
    mitschke_facts(&mut run);
    example51_facts(&mut run);
    SuiteReport { facts: run.facts }
}

struct SuiteRun<'f> {
    filter: &'f str,
    facts: Vec<FactReport>,
}

impl SuiteRun<'_> {
    fn check(&mut self, id: impl Into<String>, body: impl FnOnce() -> Result<String, String>) {
        let id = id.into();
        if id.contains(self.filter) {
            let outcome = body();
            self.facts.push(FactReport { id, outcome });
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn err_string(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn must_fixture(name: &str) -> Fixture {
    fixture(name).unwrap_or_else(|| panic!("bundled fixture `{name}` missing"))
}

fn named_relation(fx: &Fixture, name: &str) -> Result<BinaryRelation, String> {
    fx.relation(name)
        .cloned()
        .ok_or_else(|| format!("fixture `{}` has no relation `{name}`", fx.algebra.name()))
}

fn named_term(fx: &Fixture, name: &str) -> Result<Term, String> {
    fx.term(name)
        .cloned()
        .ok_or_else(|| format!("fixture `{}` has no term `{name}`", fx.algebra.name()))
}

fn named_element(fx: &Fixture, name: &str) -> Result<El, String> {
    fx.element(name)
        .ok_or_else(|| format!("fixture `{}` has no element `{name}`", fx.algebra.name()))
}

fn describe_system(sys: &TermSystem) -> String {
    sys.assignments
        .iter()
        .map(|(name, term)| format!("{name} = {term}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn describe_binding(binding: &[BoundRelation]) -> String {
    binding
        .iter()
        .map(|b| match &b.seeds {
            Some(seeds) => format!("{} = {}{seeds:?}", b.name, b.sort.keyword()),
            None => format!("{} = ({} pairs)", b.name, b.relation.pair_count()),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// A family instance's display handle, e.g. `nperm-nra(3)`.
fn family_handle(family: &str, level: Option<usize>) -> String {
    match level {
        Some(l) => format!("{family}({l})"),
        None => family.to_string(),
    }
}

/// Asserts a found term system for the preset and reports it.
fn found_system(alg: &FiniteAlgebra, preset_name: &str) -> Result<String, String> {
    let spec = preset(preset_name).map_err(err_string)?;
    match find_term_system(alg, &spec, &ClosureBudget::default()).map_err(err_string)? {
        Some(sys) => Ok(format!("found {}", describe_system(&sys))),
        None => Err(format!(
            "the exhaustive search found no `{preset_name}` system"
        )),
    }
}

/// Asserts the preset has no solution (the search is exhaustive, so `None`
/// certifies non-existence in the whole variety).
fn no_system(alg: &FiniteAlgebra, preset_name: &str) -> Result<String, String> {
    let spec = preset(preset_name).map_err(err_string)?;
    match find_term_system(alg, &spec, &ClosureBudget::default()).map_err(err_string)? {
        Some(sys) => Err(format!(
            "unexpected `{preset_name}` system: {}",
            describe_system(&sys)
        )),
        None => Ok(format!(
            "the exhaustive free-algebra scan confirms no `{preset_name}` system exists"
        )),
    }
}

/// Asserts the free algebra of `rank` closes completely at `want` elements.
fn free_size_is(alg: &FiniteAlgebra, rank: usize, want: usize) -> Result<String, String> {
    let free = free_algebra(alg, rank, &ClosureBudget::default()).map_err(err_string)?;
    if !free.complete() {
        return Err(format!("the rank-{rank} closure did not finish"));
    }
    if free.len() != want {
        return Err(format!(
            "the rank-{rank} free algebra has {} elements, expected {want}",
            free.len()
        ));
    }
    Ok(format!(
        "the rank-{rank} free algebra closes at {want} elements"
    ))
}

/// Asserts the fixture's named `j1`, `j2` satisfy all five two-term chain
/// equations.
fn chain_terms_hold(fx: &Fixture) -> Result<String, String> {
    let j1 = named_term(fx, "j1")?;
    let j2 = named_term(fx, "j2")?;
    let assignments = [("j1".to_string(), j1), ("j2".to_string(), j2)];
    let spec = preset("jonsson3").map_err(err_string)?;
    for (lhs, rhs) in &spec.equations {
        let l = replace_unknowns(lhs, &assignments).map_err(err_string)?;
        let r = replace_unknowns(rhs, &assignments).map_err(err_string)?;
        if !equation_holds(&fx.algebra, &l, &r).map_err(err_string)? {
            return Err(format!("named terms break the equation {lhs} = {rhs}"));
        }
    }
    Ok("the named j1, j2 satisfy all five chain equations".to_string())
}

/// Checks `holds` plus the binding floor for a generated-mode run.
fn describe_held(
    stmt: &Statement,
    out: &CheckOutcome,
    min_bindings: u64,
) -> Result<String, String> {
    if let Some(ce) = &out.counterexample {
        return Err(format!(
            "`{stmt}` refuted at pair {:?} under [{}]",
            ce.pair,
            describe_binding(&ce.binding)
        ));
    }
    if !out.holds {
        return Err(format!("`{stmt}` did not hold"));
    }
    // Exhausting the whole binding space is complete coverage, so the
    // floor only applies to runs that stopped early.
    let exhausted = !out.truncated
        && out
            .total_bindings
            .is_some_and(|total| total == u128::from(out.bindings_tested));
    if out.bindings_tested < min_bindings && !exhausted {
        return Err(format!(
            "`{stmt}` held, but only {} bindings were tested (wanted >= {min_bindings})",
            out.bindings_tested
        ));
    }
    Ok(format!(
        "`{stmt}` held over {} bindings{}",
        out.bindings_tested,
        if out.truncated {
            " (capped)"
        } else if exhausted {
            " (the whole space)"
        } else {
            ""
        }
    ))
}

/// One generated-mode family fact.
fn holds_generated(
    checker: &Checker<'_>,
    family: &str,
    level: Option<usize>,
) -> Result<String, String> {
    let stmt = gen_identity(family, level).map_err(err_string)?;
    let out = checker
        .check(&stmt, CheckMode::Generated { k: GENERATED_K })
        .map_err(err_string)?;
    describe_held(&stmt, &out, MIN_BINDINGS)
}

/// One sampled-mode family fact.
fn holds_sampled(
    checker: &Checker<'_>,
    family: &str,
    level: Option<usize>,
) -> Result<String, String> {
    let stmt = gen_identity(family, level).map_err(err_string)?;
    let out = checker
        .check(
            &stmt,
            CheckMode::Sampled {
                trials: SAMPLED_TRIALS,
                seed: SAMPLED_SEED,
            },
        )
        .map_err(err_string)?;
    describe_held(&stmt, &out, 1)
}

/// Registers the generated- and sampled-mode family facts for one fixture.
fn family_facts(run: &mut SuiteRun, prefix: &str, checker: &Checker<'_>) {
    for &(family, level) in GENERATED_FAMILIES {
        let id = format!("{prefix}/holds-{}", family_handle(family, level));
        run.check(id, || holds_generated(checker, family, level));
    }
    for &(family, level) in SAMPLED_FAMILIES {
        let id = format!("{prefix}/holds-{}-sampled", family_handle(family, level));
        run.check(id, || holds_sampled(checker, family, level));
    }
}

/// Checks that every two-term chain solution transfers to directed terms.
fn directed_law(alg: &FiniteAlgebra) -> Result<String, String> {
    let spec = preset("jonsson3").map_err(err_string)?;
    let solutions =
        find_all_term_systems(alg, &spec, &ClosureBudget::default()).map_err(err_string)?;
    if solutions.is_empty() {
        return Err("no two-term chain solutions to transfer".to_string());
    }
    let directed = directed_equations();
    for sys in &solutions {
        let (d1, d2) = directed_from_jonsson(&sys.assignments[0].1, &sys.assignments[1].1)
            .map_err(err_string)?;
        let assignments = [("d1".to_string(), d1), ("d2".to_string(), d2)];
        for (lhs, rhs) in &directed {
            let l = replace_unknowns(lhs, &assignments).map_err(err_string)?;
            let r = replace_unknowns(rhs, &assignments).map_err(err_string)?;
            if !equation_holds(alg, &l, &r).map_err(err_string)? {
                return Err(format!(
                    "derived terms from {} break {lhs} = {rhs}",
                    describe_system(sys)
                ));
            }
        }
    }
    Ok(format!(
        "all {} chain solutions yield directed terms satisfying the five directed equations",
        solutions.len()
    ))
}

/// Verifies a term behaves as a majority operation on the whole algebra.
fn is_majority_on(alg: &FiniteAlgebra, term: &Term) -> Result<(), String> {
    let n = alg.size();
    for a in 0..n {
        for b in 0..n {
            for pattern in [[a, a, b], [a, b, a], [b, a, a]] {
                let got = eval_term(alg, term, &pattern).map_err(err_string)?;
                if got != a {
                    return Err(format!(
                        "term gives {got} on {pattern:?}, expected the repeated value {a}"
                    ));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// impl2: the two-element difference algebra
// ---------------------------------------------------------------------------

fn impl2_facts(run: &mut SuiteRun) {
    let fx = must_fixture("impl2");
    let budget = ClosureBudget::default();

    run.check("impl2/free-algebra-sizes", || {
        let mut sizes = Vec::new();
        for (rank, want) in [(1usize, 2usize), (2, 6), (3, 38), (4, 942)] {
            let free = free_algebra(&fx.algebra, rank, &budget).map_err(err_string)?;
            if !free.complete() {
                return Err(format!("the rank-{rank} closure did not finish"));
            }
            if free.len() != want {
                return Err(format!(
                    "rank {rank}: {} elements, expected {want}",
                    free.len()
                ));
            }
            sizes.push(free.len());
        }
        Ok(format!("free algebras on 1..=4 generators have sizes {sizes:?}"))
    });

    run.check("impl2/two-term-chain-found", || {
        found_system(&fx.algebra, "jonsson3")
    });
    run.check("impl2/weakened-chain-found", || {
        found_system(&fx.algebra, "gumm2")
    });
    run.check("impl2/three-permutability-chain-found", || {
        found_system(&fx.algebra, "hm3")
    });
    run.check("impl2/no-maltsev-term", || no_system(&fx.algebra, "maltsev"));
    run.check("impl2/no-majority-term", || no_system(&fx.algebra, "majority"));
    run.check("impl2/no-near-unanimity-4-term", || {
        no_system(&fx.algebra, "nu4")
    });

    run.check("impl2/probe-refutes-majority", || {
        match probe_free_identity(&fx.algebra, &budget).map_err(err_string)? {
            ProbeOutcome::NoMajorityTerm {
                free_size,
                witness_pair,
            } => {
                let free = free_algebra(&fx.algebra, 3, &budget).map_err(err_string)?;
                let expected = (free.generators()[0], free.generators()[2]);
                if witness_pair != expected {
                    return Err(format!(
                        "witness pair {witness_pair:?} is not the generator pair {expected:?}"
                    ));
                }
                Ok(format!(
                    "the free-algebra identity fails at the generator pair {witness_pair:?} \
                     ({free_size} elements), so the variety has no majority term"
                ))
            }
            ProbeOutcome::MajorityTerm { majority, .. } => {
                Err(format!("unexpected majority term {majority}"))
            }
        }
    });

    run.check("impl2/named-terms-satisfy-chain", || chain_terms_hold(&fx));
    run.check("impl2/directed-terms-from-every-chain", || {
        directed_law(&fx.algebra)
    });
}

// ---------------------------------------------------------------------------
// f2: the two-element algebra with the single ternary operation
// ---------------------------------------------------------------------------

fn f2_facts(run: &mut SuiteRun) {
    let fx = must_fixture("f2");

    run.check("f2/free-rank3-size", || free_size_is(&fx.algebra, 3, 19));
    run.check("f2/two-term-chain-found", || {
        found_system(&fx.algebra, "jonsson3")
    });
    run.check("f2/named-terms-satisfy-chain", || chain_terms_hold(&fx));
}

// ---------------------------------------------------------------------------
// inu2: the difference algebra expanded by the 4-ary near-unanimity op
// ---------------------------------------------------------------------------

fn inu2_facts(run: &mut SuiteRun) {
    let fx = must_fixture("inu2");

    run.check("inu2/near-unanimity-4-found", || {
        found_system(&fx.algebra, "nu4")
    });
    run.check("inu2/two-term-chain-found", || {
        found_system(&fx.algebra, "jonsson3")
    });
    run.check("inu2/no-majority-term", || no_system(&fx.algebra, "majority"));
    run.check("inu2/no-maltsev-term", || no_system(&fx.algebra, "maltsev"));
    run.check("inu2/free-rank3-size", || free_size_is(&fx.algebra, 3, 38));
    run.check("inu2/named-terms-satisfy-chain", || chain_terms_hold(&fx));
}

// ---------------------------------------------------------------------------
// median2: the two-element majority algebra
// ---------------------------------------------------------------------------

fn median2_facts(run: &mut SuiteRun) {
    let fx = must_fixture("median2");
    let budget = ClosureBudget::default();

    run.check("median2/probe-builds-majority", || {
        match probe_free_identity(&fx.algebra, &budget).map_err(err_string)? {
            ProbeOutcome::MajorityTerm {
                majority,
                free_size,
                ..
            } => {
                if free_size != 4 {
                    return Err(format!(
                        "rank-3 free algebra has {free_size} elements, expected 4"
                    ));
                }
                is_majority_on(&fx.algebra, &majority)?;
                Ok(format!(
                    "probe extracted the verified majority term {majority} \
                     (free algebra: {free_size} elements)"
                ))
            }
            ProbeOutcome::NoMajorityTerm { witness_pair, .. } => Err(format!(
                "probe unexpectedly failed at pair {witness_pair:?}"
            )),
        }
    });

    run.check("median2/majority-found-by-search", || {
        let spec = preset("majority").map_err(err_string)?;
        let sys = find_term_system(&fx.algebra, &spec, &budget)
            .map_err(err_string)?
            .ok_or("no majority term found")?;
        is_majority_on(&fx.algebra, &sys.assignments[0].1)?;
        Ok(format!("found {}", describe_system(&sys)))
    });
}

// ---------------------------------------------------------------------------
// unary3: the three-element mono-unary algebra
// ---------------------------------------------------------------------------

fn unary3_facts(run: &mut SuiteRun) {
    let fx = must_fixture("unary3");
    let budget = ClosureBudget::default();

    run.check("unary3/congruence-count-3", || {
        let cons =
            enumerate_relations(&fx.algebra, Sort::Congruence, &budget, 64).map_err(err_string)?;
        if cons.len() != 3 {
            return Err(format!("found {} congruences, expected 3", cons.len()));
        }
        Ok("exactly 3 congruences: the diagonal, one proper congruence, the full relation"
            .to_string())
    });

    run.check("unary3/congruences-permute", || {
        let cons =
            enumerate_relations(&fx.algebra, Sort::Congruence, &budget, 64).map_err(err_string)?;
        for (i, a) in cons.iter().enumerate() {
            for b in &cons[i + 1..] {
                let ab = a.compose(b).map_err(err_string)?;
                let ba = b.compose(a).map_err(err_string)?;
                if ab != ba {
                    return Err("a pair of congruences fails to permute".to_string());
                }
            }
        }
        Ok(format!("all {} congruence pairs permute", cons.len()))
    });

    run.check("unary3/generated-relation-not-transitive", || {
        let r = named_relation(&fx, "R")?;
        let flags = r.classify(&fx.algebra, &budget).map_err(err_string)?;
        if !flags.reflexive || !flags.admissible {
            return Err("R is not a reflexive admissible relation".to_string());
        }
        let rr = r.compose(&r).map_err(err_string)?;
        if rr == r {
            return Err("R o R = R, so R is unexpectedly transitive".to_string());
        }
        Ok("R is reflexive admissible and R o R strictly exceeds R".to_string())
    });

    run.check("unary3/composition-shrink-fails", || {
        let r = named_relation(&fx, "R")?;
        let stmt = gen_identity("nperm-nra", Some(2)).map_err(err_string)?;
        let checker = Checker::new(&fx.algebra);
        let out = checker
            .check_fixed(&stmt, &[("R".to_string(), r)])
            .map_err(err_string)?;
        let ce = out
            .counterexample
            .as_ref()
            .ok_or("`R o R <= R` unexpectedly held for the fixture's R")?;
        if ce.pair != (0, 2) {
            return Err(format!("counterexample pair {:?}, expected (0, 2)", ce.pair));
        }
        if ce.midpoint != Some(1) {
            return Err(format!("midpoint {:?}, expected Some(1)", ce.midpoint));
        }
        Ok("`R o R <= R` fails at (0, 2), composed through the midpoint 1".to_string())
    });

    run.check("unary3/star-is-one-step-closure", || {
        let r = named_relation(&fx, "R")?;
        let rr = r.compose(&r).map_err(err_string)?;
        let star = r.star();
        if star != rr {
            return Err("R* differs from R o R".to_string());
        }
        if !star.contains(0, 2) || star.pair_count() != r.pair_count() + 1 {
            return Err("R* should add exactly the pair (0, 2)".to_string());
        }
        Ok("R* = R o R = R plus the single pair (0, 2)".to_string())
    });
}

// ---------------------------------------------------------------------------
// mitschke_B: the seven-element algebra sharp for 3-distributivity
// ---------------------------------------------------------------------------

fn mitschke_facts(run: &mut SuiteRun) {
    let fx = must_fixture("mitschke_B");
    let budget = ClosureBudget::default();
    let fixed = Checker::new(&fx.algebra);
    let capped = Checker::new(&fx.algebra).with_max_bindings(MAX_BINDINGS);

    run.check("mitschke/tables-realize-bitwise-laws", || {
        let n = fx.algebra.size();
        let i_op = fx.algebra.op("i").ok_or("missing operation `i`")?;
        let u_op = fx.algebra.op("u").ok_or("missing operation `u`")?;
        for a in 0..n {
            for b in 0..n {
                let want = a & !b & 0b111;
                if want >= n {
                    return Err(format!("i({a}, {b}) leaves the seven-element universe"));
                }
                if i_op.apply(n, &[a, b]) != want {
                    return Err(format!("i({a}, {b}) disagrees with the bitwise difference"));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut want = 0usize;
                        for bit in 0..3 {
                            let ones = (a >> bit & 1) + (b >> bit & 1) + (c >> bit & 1)
                                + (d >> bit & 1);
                            if ones >= 3 {
                                want |= 1 << bit;
                            }
                        }
                        if want >= n {
                            return Err(format!(
                                "u({a}, {b}, {c}, {d}) leaves the seven-element universe"
                            ));
                        }
                        if u_op.apply(n, &[a, b, c, d]) != want {
                            return Err(format!(
                                "u({a}, {b}, {c}, {d}) disagrees with bitwise near-unanimity"
                            ));
                        }
                    }
                }
            }
        }
        Ok("i and u agree with their bitwise laws and never leave the universe".to_string())
    });

    run.check("mitschke/two-distributivity-fails-at-sharp-pair", || {
        let stmt = gen_identity("jonsson", Some(2)).map_err(err_string)?;
        let bindings = [
            ("a".to_string(), named_relation(&fx, "alpha")?),
            ("b".to_string(), named_relation(&fx, "beta")?),
            ("c".to_string(), named_relation(&fx, "gamma")?),
        ];
        let out = fixed.check_fixed(&stmt, &bindings).map_err(err_string)?;
        let ce = out
            .counterexample
            .as_ref()
            .ok_or("the 2-distributive law unexpectedly held")?;
        if ce.pair != (6, 3) {
            return Err(format!("counterexample pair {:?}, expected (6, 3)", ce.pair));
        }
        if ce.midpoint != Some(5) {
            return Err(format!("midpoint {:?}, expected Some(5)", ce.midpoint));
        }
        Ok(
            "`a&(b o c) <= (a&b) o (a&c)` fails exactly at the pair (6, 3), \
             whose only left-side midpoint is 5"
                .to_string(),
        )
    });

    run.check("mitschke/three-distributivity-exhaustive", || {
        let stmt = gen_identity("jonsson", Some(3)).map_err(err_string)?;
        let out = fixed
            .check(&stmt, CheckMode::Exhaustive)
            .map_err(err_string)?;
        describe_held(&stmt, &out, 1).map(|detail| format!("{detail} (all congruence triples)"))
    });

    run.check("mitschke/congruence-lattice-size", || {
        let cons =
            enumerate_relations(&fx.algebra, Sort::Congruence, &budget, 256).map_err(err_string)?;
        if cons.len() != 8 {
            return Err(format!("found {} congruences, expected 8", cons.len()));
        }
        Ok("the congruence lattice has 8 elements (all meets of the three kernels and their joins)"
            .to_string())
    });

    family_facts(run, "mitschke", &capped);

    run.check("mitschke/preorder-lattice-distributive", || {
        let lattice = preorder_lattice(&fx.algebra, &budget, 4096).map_err(err_string)?;
        if !lattice.distributive {
            return Err(format!(
                "distributivity fails at the triple {:?}",
                lattice.distributive_failure
            ));
        }
        Ok(format!(
            "the lattice of {} admissible preorders is distributive",
            lattice.relations.len()
        ))
    });

    run.check("mitschke/witness-chain-replay", || {
        let bindings = [
            ("alpha".to_string(), named_relation(&fx, "alpha")?),
            ("beta".to_string(), named_relation(&fx, "beta")?),
            ("gamma".to_string(), named_relation(&fx, "gamma")?),
        ];
        let triple = (
            named_element(&fx, "a")?,
            named_element(&fx, "b")?,
            named_element(&fx, "c")?,
        );
        let j1 = named_term(&fx, "j1")?;
        let j2 = named_term(&fx, "j2")?;
        let chain =
            witness_chain(&fx.algebra, &bindings, triple, &j1, &j2, &budget).map_err(err_string)?;
        if !chain.extended {
            return Err("the fifth chain equation unexpectedly failed".to_string());
        }
        Ok(format!(
            "replayed the chain at {triple:?}: {} named elements, {} verified memberships (extended)",
            chain.elements.len(),
            chain.steps.len()
        ))
    });

    run.check("mitschke/two-term-chain-found", || {
        found_system(&fx.algebra, "jonsson3")
    });
    run.check("mitschke/directed-terms-from-every-chain", || {
        directed_law(&fx.algebra)
    });
    run.check("mitschke/named-terms-satisfy-chain", || chain_terms_hold(&fx));
}

// ---------------------------------------------------------------------------
// example51: the fifteen-element algebra refuting the tolerance identity
// ---------------------------------------------------------------------------

fn example51_facts(run: &mut SuiteRun) {
    let fx = must_fixture("example51");
    let budget = ClosureBudget::default();
    let fixed = Checker::new(&fx.algebra);
    let capped = Checker::new(&fx.algebra).with_max_bindings(MAX_BINDINGS);

    run.check("example51/universe-size-15", || {
        // Inclusion-exclusion over the three generating down-sets:
        // 8 + 4 + 8 - 2 - 2 - 2 + 1.
        if fx.algebra.size() != 15 {
            return Err(format!("universe has {} elements, expected 15", fx.algebra.size()));
        }
        Ok("the union of the three down-sets has exactly 15 elements".to_string())
    });

    run.check("example51/named-relations-verified", || {
        for name in ["alpha", "beta", "gamma"] {
            if !named_relation(&fx, name)?.flags.satisfies(Sort::Congruence) {
                return Err(format!("`{name}` is not a congruence"));
            }
        }
        for name in ["psi", "theta"] {
            let rel = named_relation(&fx, name)?;
            if !rel.flags.satisfies(Sort::Tolerance) {
                return Err(format!("`{name}` is not a tolerance"));
            }
            if rel.flags.transitive {
                return Err(format!("`{name}` is unexpectedly transitive"));
            }
        }
        Ok("alpha, beta, gamma are congruences; psi, theta are non-transitive tolerances"
            .to_string())
    });

    run.check("example51/identity-with-tolerance-fails", || {
        let stmt = gen_identity("id", None).map_err(err_string)?;
        let alpha = named_relation(&fx, "alpha")?;
        let beta = named_relation(&fx, "beta")?;
        let theta = named_relation(&fx, "theta")?;
        let (x, y, z) = (
            named_element(&fx, "x")?,
            named_element(&fx, "y")?,
            named_element(&fx, "z")?,
        );
        // Direct witness: (x, z) lies on the left through the midpoint y..
        if !(alpha.contains(x, z) && beta.contains(x, y) && theta.contains(y, z)) {
            return Err("the witness memberships for (x, z) through y do not hold".to_string());
        }
        // ..and misses the right-hand side.
        let bindings = [
            ("a".to_string(), alpha),
            ("b".to_string(), beta),
            ("H".to_string(), theta),
        ];
        let rhs = eval_expr(&fx.algebra, &stmt.rhs, &bindings, &budget).map_err(err_string)?;
        if rhs.contains(x, z) {
            return Err(format!("({x}, {z}) unexpectedly lies in the right-hand side"));
        }
        let out = fixed.check_fixed(&stmt, &bindings).map_err(err_string)?;
        let ce = out
            .counterexample
            .as_ref()
            .ok_or("the identity unexpectedly held")?;
        // Every offending pair joins an element of {x, x1} to one of {z, z1}.
        let (x1, z1) = (named_element(&fx, "x1")?, named_element(&fx, "z1")?);
        let offenders = [(x1, z1), (x1, z), (x, z1), (x, z)];
        if !offenders.contains(&ce.pair) {
            return Err(format!(
                "first counterexample pair {:?} is outside the named offenders {offenders:?}",
                ce.pair
            ));
        }
        Ok(format!(
            "`{stmt}` fails: ({x}, {z}) crosses the left side via {y} but not the right; \
             first reported pair {:?}",
            ce.pair
        ))
    });

    run.check("example51/alpha-beta-classes-are-pairs", || {
        let alpha = named_relation(&fx, "alpha")?;
        let beta = named_relation(&fx, "beta")?;
        let meet = alpha.meet(&beta).map_err(err_string)?;
        let (x, x1) = (named_element(&fx, "x")?, named_element(&fx, "x1")?);
        let (z, z1) = (named_element(&fx, "z")?, named_element(&fx, "z1")?);
        let mut want_x = vec![x, x1];
        want_x.sort_unstable();
        let mut want_z = vec![z, z1];
        want_z.sort_unstable();
        if meet.row_elements(x) != want_x {
            return Err(format!(
                "the alpha-beta class of x is {:?}, expected {want_x:?}",
                meet.row_elements(x)
            ));
        }
        if meet.row_elements(z) != want_z {
            return Err(format!(
                "the alpha-beta class of z is {:?}, expected {want_z:?}",
                meet.row_elements(z)
            ));
        }
        Ok("the alpha-beta classes of x and z are exactly {x, x1} and {z, z1}".to_string())
    });

    run.check("example51/tolerance-blocks-named-elements", || {
        let psi = named_relation(&fx, "psi")?;
        let theta = named_relation(&fx, "theta")?;
        let (x, x1) = (named_element(&fx, "x")?, named_element(&fx, "x1")?);
        let (z, z1) = (named_element(&fx, "z")?, named_element(&fx, "z1")?);
        // The refutation needs no theta pair crossing from {x, x1} to {z, z1}.
        for &p in &[x, x1] {
            for &q in &[z, z1] {
                if theta.contains(p, q) || theta.contains(q, p) {
                    return Err(format!("theta unexpectedly relates {p} and {q}"));
                }
            }
        }
        // The classes pair up inside psi but the kernel factor of theta
        // separates them, so theta is diagonal on the four named elements.
        if !(psi.contains(x, x1) && psi.contains(z, z1)) {
            return Err("psi should relate x to x1 and z to z1".to_string());
        }
        if theta.contains(x, x1) || theta.contains(z, z1) {
            return Err("theta unexpectedly relates elements inside the classes".to_string());
        }
        Ok(
            "no theta pair crosses between {x, x1} and {z, z1}; psi relates each class \
             internally while theta stays diagonal on the four named elements"
                .to_string(),
        )
    });

    run.check("example51/witness-chain-replay", || {
        let bindings = [
            ("alpha".to_string(), named_relation(&fx, "alpha")?),
            ("beta".to_string(), named_relation(&fx, "beta")?),
            ("theta".to_string(), named_relation(&fx, "theta")?),
        ];
        let triple = (
            named_element(&fx, "x")?,
            named_element(&fx, "y")?,
            named_element(&fx, "z")?,
        );
        let j1 = named_term(&fx, "j1")?;
        let j2 = named_term(&fx, "j2")?;
        let chain =
            witness_chain(&fx.algebra, &bindings, triple, &j1, &j2, &budget).map_err(err_string)?;
        if !chain.extended {
            return Err("the fifth chain equation unexpectedly failed".to_string());
        }
        Ok(format!(
            "replayed the chain at {triple:?}: {} named elements, {} verified memberships (extended)",
            chain.elements.len(),
            chain.steps.len()
        ))
    });

    family_facts(run, "example51", &capped);

    run.check("example51/named-terms-satisfy-chain", || chain_terms_hold(&fx));
}
