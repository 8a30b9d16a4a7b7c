//! Acceptance gate: ten end-to-end criteria, one test each, covering the
//! headline reproductions (the sharp distributivity boundary, the tolerance
//! identity refutation), the term-existence matrix, the probe round-trip,
//! the identity batteries, the structural facts and the brute-force oracle
//! comparison.
//!
//! Each test prints exactly one `criterion N PASS: ...` or
//! `criterion N FAIL: ...` line (run with
//! `cargo test --test acceptance -- --nocapture` to see the PASS lines) and
//! panics when its criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relkit_core::{
    directed_equations, directed_from_jonsson, enumerate_relations, equation_holds, eval_expr,
    eval_term, find_all_term_systems, find_term_system, fixture, free_algebra, gen_identity,
    generated_relation, preorder_lattice, preset, probe_free_identity, replace_unknowns,
    BinaryRelation, CheckMode, Checker, ClosureBudget, El, FiniteAlgebra, Fixture, Operation,
    ProbeOutcome, Sort,
};

// ---------------------------------------------------------------------------
// Reporting harness
// ---------------------------------------------------------------------------

/// Runs one criterion body, enforces its wall-clock limit, prints the single
/// report line and panics on failure.
fn verdict(
    criterion: u32,
    limit: Option<Duration>,
    body: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let mut outcome = body();
    let elapsed = start.elapsed();
    if let Some(cap) = limit {
        if outcome.is_ok() && elapsed > cap {
            outcome = Err(format!(
                "all checks passed, but the run took {elapsed:.2?} (limit {cap:?})"
            ));
        }
    }
    match outcome {
        Ok(detail) => println!("criterion {criterion} PASS [{elapsed:.2?}]: {detail}"),
        Err(reason) => {
            println!("criterion {criterion} FAIL [{elapsed:.2?}]: {reason}");
            panic!("acceptance criterion {criterion} failed: {reason}");
        }
    }
}

fn err_string(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn bundled(name: &str) -> Result<Fixture, String> {
    fixture(name).ok_or_else(|| format!("bundled fixture `{name}` is missing"))
}

fn named_relation(fx: &Fixture, name: &str) -> Result<BinaryRelation, String> {
    fx.relation(name)
        .cloned()
        .ok_or_else(|| format!("fixture `{}` has no relation `{name}`", fx.algebra.name()))
}

fn named_element(fx: &Fixture, name: &str) -> Result<El, String> {
    fx.element(name)
        .ok_or_else(|| format!("fixture `{}` has no element `{name}`", fx.algebra.name()))
}

// ---------------------------------------------------------------------------
// Criterion 1: the tolerance identity fails on the 15-element algebra at the
// named pair (x, z), which enters the left side through the midpoint y.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_tolerance_identity_refuted_at_the_named_pair() {
    verdict(1, Some(Duration::from_secs(5)), || {
        let fx = bundled("example51")?;
        let budget = ClosureBudget::default();
        let stmt = gen_identity("id", None).map_err(err_string)?;
        let alpha = named_relation(&fx, "alpha")?;
        let beta = named_relation(&fx, "beta")?;
        let theta = named_relation(&fx, "theta")?;
        let (x, y, z) = (
            named_element(&fx, "x")?,
            named_element(&fx, "y")?,
            named_element(&fx, "z")?,
        );

        // (x, z) lies in the left side a & (b o H): alpha relates the pair
        // and y is a composition midpoint.
        if !alpha.contains(x, z) {
            return Err(format!("alpha does not relate the witness pair ({x}, {z})"));
        }
        if !(beta.contains(x, y) && theta.contains(y, z)) {
            return Err(format!("{y} is not a beta/theta midpoint for ({x}, {z})"));
        }

        // ..and the right side misses it, so the exact pair (x, z) violates
        // the inclusion.
        let bindings = [
            ("a".to_string(), alpha),
            ("b".to_string(), beta),
            ("H".to_string(), theta),
        ];
        let rhs = eval_expr(&fx.algebra, &stmt.rhs, &bindings, &budget).map_err(err_string)?;
        if rhs.contains(x, z) {
            return Err(format!(
                "({x}, {z}) unexpectedly lies in the right-hand side"
            ));
        }

        // The checker agrees the statement fails under this binding, and its
        // first reported pair joins the alpha-beta class of x to that of z.
        let out = Checker::new(&fx.algebra)
            .check_fixed(&stmt, &bindings)
            .map_err(err_string)?;
        if out.holds {
            return Err(format!("`{stmt}` unexpectedly held under the fixed binding"));
        }
        let ce = out
            .counterexample
            .as_ref()
            .ok_or("the failed check reported no counterexample")?;
        let (x1, z1) = (named_element(&fx, "x1")?, named_element(&fx, "z1")?);
        let offenders = [(x1, z1), (x1, z), (x, z1), (x, z)];
        if !offenders.contains(&ce.pair) {
            return Err(format!(
                "first reported pair {:?} is outside the violating pairs {offenders:?}",
                ce.pair
            ));
        }
        Ok(format!(
            "`{stmt}` fails: ({x}, {z}) crosses the left side via the midpoint {y} \
             and misses the right side (first reported pair {:?})",
            ce.pair
        ))
    });
}

// ---------------------------------------------------------------------------
// Criterion 2: on the seven-element algebra the 2-distributive law fails
// exactly at the bit-vector pair (1,1,0)/(0,1,1) under the kernel
// congruences, while the 3-distributive law survives an exhaustive check
// over all congruence triples.
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_distributivity_boundary_is_sharp() {
    verdict(2, Some(Duration::from_secs(30)), || {
        let fx = bundled("mitschke_B")?;
        let checker = Checker::new(&fx.algebra);
        let bindings = [
            ("a".to_string(), named_relation(&fx, "alpha")?),
            ("b".to_string(), named_relation(&fx, "beta")?),
            ("c".to_string(), named_relation(&fx, "gamma")?),
        ];

        // Elements are 3-bit codes, so (1,1,0) is 6 and (0,1,1) is 3.
        let two = gen_identity("jonsson", Some(2)).map_err(err_string)?;
        let out = checker.check_fixed(&two, &bindings).map_err(err_string)?;
        let ce = out
            .counterexample
            .as_ref()
            .ok_or("the 2-distributive law unexpectedly held")?;
        if ce.pair != (6, 3) {
            return Err(format!(
                "2-distributivity counterexample at {:?}, expected (6, 3)",
                ce.pair
            ));
        }

        let three = gen_identity("jonsson", Some(3)).map_err(err_string)?;
        let out = checker
            .check(&three, CheckMode::Exhaustive)
            .map_err(err_string)?;
        if let Some(ce) = &out.counterexample {
            return Err(format!(
                "the 3-distributive law failed at {:?} under some congruence triple",
                ce.pair
            ));
        }
        if !out.holds || out.truncated {
            return Err("the exhaustive 3-distributivity check did not complete".to_string());
        }
        if out.bindings_tested != 512 {
            return Err(format!(
                "exhaustive check covered {} congruence triples, expected 8^3 = 512",
                out.bindings_tested
            ));
        }
        Ok(format!(
            "`{two}` fails exactly at (6, 3) = the codes of (1,1,0), (0,1,1); \
             `{three}` holds over all 512 congruence triples"
        ))
    });
}

// ---------------------------------------------------------------------------
// Criterion 3: the term-existence matrix on the two-element difference
// algebra and its near-unanimity expansion, every answer backed by a
// completed free-algebra search within the stated size bounds.
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_term_existence_matrix_is_exact() {
    verdict(3, Some(Duration::from_secs(120)), || {
        let impl2 = bundled("impl2")?.algebra;
        let inu2 = bundled("inu2")?.algebra;
        let budget = ClosureBudget::default();

        // Size bounds that keep "exhaustive" honest at desk scale.
        for alg in [&impl2, &inu2] {
            let f3 = free_algebra(alg, 3, &budget).map_err(err_string)?;
            if !f3.complete() || f3.len() > 128 {
                return Err(format!(
                    "rank-3 free algebra of {} has {} elements (bound 128)",
                    alg.name(),
                    f3.len()
                ));
            }
        }
        let f4 = free_algebra(&impl2, 4, &budget).map_err(err_string)?;
        if !f4.complete() || f4.len() > 1 << 15 {
            return Err(format!(
                "rank-4 free algebra of impl2 has {} elements (bound 2^15)",
                f4.len()
            ));
        }

        let expectations: [(&FiniteAlgebra, &[(&str, bool)]); 2] = [
            (
                &impl2,
                &[
                    ("jonsson3", true),
                    ("gumm2", true),
                    ("hm3", true),
                    ("majority", false),
                    ("maltsev", false),
                    ("nu4", false),
                ],
            ),
            (
                &inu2,
                &[
                    ("jonsson3", true),
                    ("gumm2", true),
                    ("hm3", true),
                    ("majority", false),
                    ("maltsev", false),
                    ("nu4", true),
                ],
            ),
        ];

        let mut cells = 0usize;
        for (alg, row) in expectations {
            for &(preset_name, want_found) in row {
                let spec = preset(preset_name).map_err(err_string)?;
                let found = find_term_system(alg, &spec, &budget).map_err(err_string)?;
                match (found, want_found) {
                    (Some(sys), true) => {
                        if let Some(&index) = sys.indices.iter().find(|&&i| i >= 1 << 15) {
                            return Err(format!(
                                "{}/{preset_name}: solution index {index} exceeds the 2^15 bound",
                                alg.name()
                            ));
                        }
                    }
                    (None, false) => {}
                    (Some(sys), false) => {
                        return Err(format!(
                            "{}/{preset_name}: unexpected solution {:?}",
                            alg.name(),
                            sys.assignments
                                .iter()
                                .map(|(n, t)| format!("{n} = {t}"))
                                .collect::<Vec<_>>()
                        ));
                    }
                    (None, true) => {
                        return Err(format!(
                            "{}/{preset_name}: no solution found by the exhaustive search",
                            alg.name()
                        ));
                    }
                }
                cells += 1;
            }
        }
        Ok(format!(
            "all {cells} matrix cells exact: both algebras have jonsson3/gumm2/hm3 systems and \
             no majority or maltsev term; nu4 exists only on the near-unanimity expansion"
        ))
    });
}

// ---------------------------------------------------------------------------
// Criterion 4: the free-algebra probe round-trip — it builds a verified
// majority term on the median algebra and refutes one on the difference
// algebra.
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_probe_round_trip() {
    verdict(4, None, || {
        let median2 = bundled("median2")?.algebra;
        let impl2 = bundled("impl2")?.algebra;
        let budget = ClosureBudget::default();

        let majority = match probe_free_identity(&median2, &budget).map_err(err_string)? {
            ProbeOutcome::MajorityTerm { majority, .. } => majority,
            ProbeOutcome::NoMajorityTerm { witness_pair, .. } => {
                return Err(format!(
                    "probe unexpectedly failed on the median algebra at {witness_pair:?}"
                ));
            }
        };
        // The extracted term must satisfy all three majority equations
        // m(x,x,y) = x, m(x,y,x) = x, m(y,x,x) = x over the algebra.
        let n = median2.size();
        for a in 0..n {
            for b in 0..n {
                for pattern in [[a, a, b], [a, b, a], [b, a, a]] {
                    let got = eval_term(&median2, &majority, &pattern).map_err(err_string)?;
                    if got != a {
                        return Err(format!(
                            "extracted term gives {got} on {pattern:?}, expected {a}"
                        ));
                    }
                }
            }
        }

        match probe_free_identity(&impl2, &budget).map_err(err_string)? {
            ProbeOutcome::NoMajorityTerm { .. } => {}
            ProbeOutcome::MajorityTerm { majority, .. } => {
                return Err(format!(
                    "probe unexpectedly built the majority term {majority} on the \
                     difference algebra"
                ));
            }
        }
        Ok(format!(
            "probe extracts the verified majority term {majority} on the median algebra \
             and refutes a majority term on the difference algebra"
        ))
    });
}

// ---------------------------------------------------------------------------
// Criteria 5 and 6 share one battery runner: every family instance must hold
// on both large fixtures in generated(2) mode, each over at least 500
// bindings or the complete binding space, with zero counterexamples.
// ---------------------------------------------------------------------------

const GENERATED_K: usize = 2;
const MAX_BINDINGS: u64 = 600;
const MIN_BINDINGS: u64 = 500;

fn generated_battery(families: &[(&str, Option<usize>)]) -> Result<String, String> {
    let mut checks = 0usize;
    let mut bindings_total = 0u64;
    for fixture_name in ["mitschke_B", "example51"] {
        let fx = bundled(fixture_name)?;
        let checker = Checker::new(&fx.algebra).with_max_bindings(MAX_BINDINGS);
        for &(family, level) in families {
            let stmt = gen_identity(family, level).map_err(err_string)?;
            let out = checker
                .check(&stmt, CheckMode::Generated { k: GENERATED_K })
                .map_err(err_string)?;
            if let Some(ce) = &out.counterexample {
                return Err(format!(
                    "`{stmt}` refuted on {fixture_name} at pair {:?}",
                    ce.pair
                ));
            }
            if !out.holds {
                return Err(format!("`{stmt}` did not hold on {fixture_name}"));
            }
            let exhausted = !out.truncated
                && out
                    .total_bindings
                    .is_some_and(|total| total == u128::from(out.bindings_tested));
            if out.bindings_tested < MIN_BINDINGS && !exhausted {
                return Err(format!(
                    "`{stmt}` on {fixture_name}: only {} bindings tested \
                     (wanted >= {MIN_BINDINGS} or the whole space)",
                    out.bindings_tested
                ));
            }
            checks += 1;
            bindings_total += out.bindings_tested;
        }
    }
    Ok(format!(
        "{checks} generated(2) checks held with zero counterexamples \
         ({bindings_total} bindings in total, each run >= 500 or its complete space)"
    ))
}

#[test]
fn criterion_05_distributivity_consequences_hold_on_both_fixtures() {
    verdict(5, None, || {
        let families: &[(&str, Option<usize>)] = &[
            ("dist3-3a", None),
            ("dist3-3b", None),
            ("dist3-3c", None),
            ("gumm-3ga", None),
            ("gumm-3gb", None),
            ("gumm-3gc", None),
            ("cor3-3dd", None),
        ];
        generated_battery(families)
    });
}

#[test]
fn criterion_06_permutability_consequences_hold_and_the_mono_unary_refutation() {
    verdict(6, None, || {
        let families: &[(&str, Option<usize>)] = &[
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
        let battery = generated_battery(families)?;

        // The length-2 composition-absorption identity R o R <= R must fail
        // on the mono-unary fixture with its bundled relation.
        let fx = bundled("unary3")?;
        let stmt = gen_identity("nperm-nra", Some(2)).map_err(err_string)?;
        let out = Checker::new(&fx.algebra)
            .check_fixed(&stmt, &[("R".to_string(), named_relation(&fx, "R")?)])
            .map_err(err_string)?;
        let ce = out
            .counterexample
            .as_ref()
            .ok_or("`R o R <= R` unexpectedly held on the mono-unary fixture")?;
        if ce.pair != (0, 2) || ce.midpoint != Some(1) {
            return Err(format!(
                "`{stmt}` fails at {:?} via {:?}, expected (0, 2) via Some(1)",
                ce.pair, ce.midpoint
            ));
        }
        Ok(format!(
            "{battery}; `{stmt}` fails on the mono-unary fixture at (0, 2) via the midpoint 1"
        ))
    });
}

// ---------------------------------------------------------------------------
// Criterion 7: structural facts about the mono-unary fixture.
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_mono_unary_fixture_facts() {
    verdict(7, None, || {
        let fx = bundled("unary3")?;
        let budget = ClosureBudget::default();

        let cons = enumerate_relations(&fx.algebra, Sort::Congruence, &budget, 64)
            .map_err(err_string)?;
        if cons.len() != 3 {
            return Err(format!("found {} congruences, expected 3", cons.len()));
        }
        for (i, a) in cons.iter().enumerate() {
            for b in &cons[i + 1..] {
                if a.compose(b).map_err(err_string)? != b.compose(a).map_err(err_string)? {
                    return Err("a congruence pair fails to permute".to_string());
                }
            }
        }

        let r = named_relation(&fx, "R")?;
        if !r.is_reflexive() || !r.is_admissible(&fx.algebra, &budget).map_err(err_string)? {
            return Err("the bundled R is not reflexive admissible".to_string());
        }
        let rr = r.compose(&r).map_err(err_string)?;
        if rr == r {
            return Err("R o R = R, so R is unexpectedly transitive".to_string());
        }
        Ok(
            "exactly 3 congruences, all pairs permute; R is reflexive admissible \
             with R o R strictly above R"
                .to_string(),
        )
    });
}

// ---------------------------------------------------------------------------
// Criterion 8: the lattice of admissible preorders of the seven-element
// algebra is distributive, by an exhaustive triple scan.
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_preorder_lattice_is_distributive() {
    verdict(8, None, || {
        let fx = bundled("mitschke_B")?;
        let budget = ClosureBudget::default();
        let lattice = preorder_lattice(&fx.algebra, &budget, 4096).map_err(err_string)?;
        let count = lattice.relations.len();
        if count >= 4096 {
            return Err(format!(
                "enumeration hit the {count}-relation cap, so the triple scan is not exhaustive"
            ));
        }
        if !lattice.distributive {
            return Err(format!(
                "distributivity fails at the triple {:?}",
                lattice.distributive_failure
            ));
        }
        Ok(format!(
            "the lattice of all {count} admissible preorders is distributive \
             (exhaustive scan of {} triples)",
            count * count * count
        ))
    });
}

// ---------------------------------------------------------------------------
// Criterion 9: every two-term chain solution transfers to directed terms
// satisfying all five directed equations, on both chain-bearing fixtures.
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_directed_terms_from_every_chain_solution() {
    verdict(9, None, || {
        let budget = ClosureBudget::default();
        let spec = preset("jonsson3").map_err(err_string)?;
        let directed = directed_equations();
        let mut counts = Vec::new();
        for name in ["impl2", "mitschke_B"] {
            let alg = bundled(name)?.algebra;
            let solutions =
                find_all_term_systems(&alg, &spec, &budget).map_err(err_string)?;
            if solutions.is_empty() {
                return Err(format!("no two-term chain solutions on {name}"));
            }
            for sys in &solutions {
                let (d1, d2) =
                    directed_from_jonsson(&sys.assignments[0].1, &sys.assignments[1].1)
                        .map_err(err_string)?;
                let assignments = [("d1".to_string(), d1), ("d2".to_string(), d2)];
                for (lhs, rhs) in &directed {
                    let l = replace_unknowns(lhs, &assignments).map_err(err_string)?;
                    let r = replace_unknowns(rhs, &assignments).map_err(err_string)?;
                    if !equation_holds(&alg, &l, &r).map_err(err_string)? {
                        return Err(format!(
                            "derived terms on {name} break the equation {lhs} = {rhs}"
                        ));
                    }
                }
            }
            counts.push(format!("{name}: {}", solutions.len()));
        }
        Ok(format!(
            "every chain solution ({}) yields directed terms satisfying all five \
             directed equations",
            counts.join(", ")
        ))
    });
}

// ---------------------------------------------------------------------------
// Criterion 10: on random small algebras, relation generation and
// enumeration agree with a brute-force filter over all reflexive matrices.
// ---------------------------------------------------------------------------

/// All relations of the sort on `alg`, found by filtering every reflexive
/// 0/1 matrix (2^(n^2 - n) candidates).
fn brute_force_relations(
    alg: &FiniteAlgebra,
    sort: Sort,
    budget: &ClosureBudget,
) -> Result<Vec<BinaryRelation>, String> {
    let n = alg.size();
    let off_diagonal: Vec<(El, El)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b)
        .collect();
    let need = sort.flags();
    let mut out = Vec::new();
    for mask in 0u32..1 << off_diagonal.len() {
        let pairs: Vec<(El, El)> = off_diagonal
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let rel = BinaryRelation::from_pairs(n, &pairs).map_err(err_string)?;
        let keep = rel.is_admissible(alg, budget).map_err(err_string)?
            && (!need.symmetric || rel.is_symmetric())
            && (!need.transitive || rel.is_transitive());
        if keep {
            out.push(rel);
        }
    }
    Ok(out)
}

/// The least relation of the brute-force family containing `seeds`.
fn brute_force_generated(
    family: &[BinaryRelation],
    seeds: &[(El, El)],
    n: usize,
) -> Result<BinaryRelation, String> {
    let mut least = BinaryRelation::full(n);
    for rel in family {
        if seeds.iter().all(|&(a, b)| rel.contains(a, b)) {
            least = least.meet(rel).map_err(err_string)?;
        }
    }
    Ok(least)
}

fn pair_sets(relations: &[BinaryRelation]) -> BTreeSet<Vec<(El, El)>> {
    relations.iter().map(|r| r.pairs()).collect()
}

#[test]
fn criterion_10_generation_matches_the_brute_force_oracle() {
    verdict(10, Some(Duration::from_secs(300)), || {
        let budget = ClosureBudget::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0x52454C4B49541031);
        let mut generation_checks = 0usize;
        for case in 0..100 {
            let n = rng.random_range(1..=3usize);
            let op_count = rng.random_range(1..=2usize);
            let mut ops = Vec::new();
            for index in 0..op_count {
                let arity = rng.random_range(1..=2usize);
                let table: Vec<El> = (0..n.pow(arity as u32))
                    .map(|_| rng.random_range(0..n))
                    .collect();
                ops.push(
                    Operation::new(format!("f{index}"), arity, n, table).map_err(err_string)?,
                );
            }
            let alg = FiniteAlgebra::new(format!("random-{case}"), n, ops).map_err(err_string)?;

            for sort in [Sort::Admissible, Sort::Tolerance, Sort::Congruence] {
                let brute = brute_force_relations(&alg, sort, &budget)?;
                let listed =
                    enumerate_relations(&alg, sort, &budget, 4096).map_err(err_string)?;
                if pair_sets(&listed) != pair_sets(&brute) {
                    return Err(format!(
                        "case {case} ({}): enumeration found {} relations, brute force {}",
                        sort.keyword(),
                        listed.len(),
                        brute.len()
                    ));
                }

                // Principal relations from every seed pair, plus one random
                // two-pair seed set, must match the least brute-force member.
                let mut seed_sets: Vec<Vec<(El, El)>> = (0..n)
                    .flat_map(|a| (0..n).map(move |b| vec![(a, b)]))
                    .collect();
                seed_sets.push(vec![
                    (rng.random_range(0..n), rng.random_range(0..n)),
                    (rng.random_range(0..n), rng.random_range(0..n)),
                ]);
                for seeds in seed_sets {
                    let generated = generated_relation(&alg, &seeds, sort, &budget)
                        .map_err(err_string)?
                        .relation;
                    let least = brute_force_generated(&brute, &seeds, n)?;
                    if generated != least {
                        return Err(format!(
                            "case {case} ({}): generated relation from {seeds:?} has {} pairs, \
                             the least brute-force member has {}",
                            sort.keyword(),
                            generated.pair_count(),
                            least.pair_count()
                        ));
                    }
                    generation_checks += 1;
                }
            }
        }
        Ok(format!(
            "100 random algebras: enumeration matches the brute-force filter for all three \
             sorts, and {generation_checks} generated relations equal their least \
             brute-force supersets"
        ))
    });
}
