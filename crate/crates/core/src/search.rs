//! Searching free algebras for term systems, and derived term
//! constructions.
//!
//! A [`TermSystemSpec`] names a handful of unknown operation symbols and a
//! list of equations they must satisfy. Because an equation holds in the
//! variety generated by a finite algebra exactly when it holds in the
//! algebra itself, and because the elements of the free algebra of rank `r`
//! are precisely the `r`-ary term operations, the search space for each
//! unknown is one free algebra; an element's value tuple doubles as the
//! operation table of the corresponding term operation.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::{
    equation_holds, equation_holds_ext, eval_term, free_algebra, free_algebra_scan,
    AlgebraError, ClosureBudget, El, ExtraOps, FiniteAlgebra, FreeAlgebra, Term, Visit,
};
use crate::rel::{BinaryRelation, RelError};

/// Failures while searching for or assembling term systems.
#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error("unknown term-system preset `{0}`")]
    UnknownPreset(String),
    #[error("preset `{name}` needs a parameter of at least {min}, got {got}")]
    ParamTooSmall {
        name: String,
        min: usize,
        got: usize,
    },
    #[error("search produced a candidate failing term-level re-verification: {0}")]
    Unsound(String),
    #[error("witness chain precondition failed: {0}")]
    ChainPrecondition(String),
    #[error("witness chain step does not hold: {0}")]
    ChainBroken(String),
}

/// A named system of equations over unknown operation symbols.
#[derive(Debug, Clone)]
pub struct TermSystemSpec {
    pub name: String,
    /// Unknown symbols with arities, in search order.
    pub unknowns: Vec<(String, usize)>,
    /// Equations over variables and the unknowns.
    pub equations: Vec<(Term, Term)>,
}

/// A solution: a realizing term per unknown, in spec order, re-verified on
/// the algebra at the term level.
#[derive(Debug, Clone)]
pub struct TermSystem {
    /// `(unknown name, realizing term)` in spec order.
    pub assignments: Vec<(String, Term)>,
    /// Discovery indices of the realizing terms in their free algebras.
    pub indices: Vec<usize>,
}

fn vx(i: usize) -> Term {
    Term::var(i)
}

fn app(sym: &str, args: Vec<Term>) -> Term {
    Term::app(sym, args)
}

/// The built-in specs. `hm<N>` is the chain of `N - 1` terms witnessing
/// N-permutability; `nu<K>` the K-ary near-unanimity condition; `jonsson3`
/// the two-term chain for 3-distributivity; `gumm2` the same minus its last
/// equation; `djonsson2` the two directed terms.
pub fn preset(name: &str) -> Result<TermSystemSpec, SearchError> {
    let (x, y, z) = (vx(0), vx(1), vx(2));
    let spec = |name: &str, unknowns: Vec<(&str, usize)>, equations| TermSystemSpec {
        name: name.to_string(),
        unknowns: unknowns
            .into_iter()
            .map(|(s, a)| (s.to_string(), a))
            .collect(),
        equations,
    };
    match name {
        "majority" => Ok(spec(
            name,
            vec![("m", 3)],
            vec![
                (app("m", vec![x.clone(), x.clone(), y.clone()]), x.clone()),
                (app("m", vec![x.clone(), y.clone(), x.clone()]), x.clone()),
                (app("m", vec![y.clone(), x.clone(), x.clone()]), x.clone()),
            ],
        )),
        "maltsev" => Ok(spec(
            name,
            vec![("p", 3)],
            vec![
                (app("p", vec![x.clone(), y.clone(), y.clone()]), x.clone()),
                (app("p", vec![x.clone(), x.clone(), y.clone()]), y.clone()),
            ],
        )),
        "jonsson3" | "gumm2" => {
            let mut equations = vec![
                // x = j1(x,x,z)
                (x.clone(), app("j1", vec![x.clone(), x.clone(), z.clone()])),
                // j1(x,z,z) = j2(x,z,z)
                (
                    app("j1", vec![x.clone(), z.clone(), z.clone()]),
                    app("j2", vec![x.clone(), z.clone(), z.clone()]),
                ),
                // j2(x,x,z) = z
                (app("j2", vec![x.clone(), x.clone(), z.clone()]), z.clone()),
                // x = j1(x,y,x)
                (x.clone(), app("j1", vec![x.clone(), y.clone(), x.clone()])),
            ];
            if name == "jonsson3" {
                // j2(z,y,z) = z
                equations.push((app("j2", vec![z.clone(), y.clone(), z.clone()]), z.clone()));
            }
            Ok(spec(name, vec![("j1", 3), ("j2", 3)], equations))
        }
        "djonsson2" => Ok(spec(
            name,
            vec![("d1", 3), ("d2", 3)],
            directed_equations(),
        )),
        _ => {
            if let Some(rest) = name.strip_prefix("hm") {
                let n: usize = rest
                    .parse()
                    .map_err(|_| SearchError::UnknownPreset(name.to_string()))?;
                if n < 2 {
                    return Err(SearchError::ParamTooSmall {
                        name: name.to_string(),
                        min: 2,
                        got: n,
                    });
                }
                let t = |i: usize, a: Term, b: Term, c: Term| app(&format!("t{i}"), vec![a, b, c]);
                let mut equations = vec![(x.clone(), t(1, x.clone(), y.clone(), y.clone()))];
                for i in 1..n - 1 {
                    equations.push((
                        t(i, x.clone(), x.clone(), y.clone()),
                        t(i + 1, x.clone(), y.clone(), y.clone()),
                    ));
                }
                equations.push((t(n - 1, x.clone(), x.clone(), y.clone()), y.clone()));
                let unknowns = (1..n).map(|i| (format!("t{i}"), 3)).collect();
                Ok(TermSystemSpec {
                    name: name.to_string(),
                    unknowns,
                    equations,
                })
            } else if let Some(rest) = name.strip_prefix("nu") {
                let k: usize = rest
                    .parse()
                    .map_err(|_| SearchError::UnknownPreset(name.to_string()))?;
                if k < 3 {
                    return Err(SearchError::ParamTooSmall {
                        name: name.to_string(),
                        min: 3,
                        got: k,
                    });
                }
                let equations = (0..k)
                    .map(|slot| {
                        let args = (0..k)
                            .map(|p| if p == slot { y.clone() } else { x.clone() })
                            .collect();
                        (app("u", args), x.clone())
                    })
                    .collect();
                Ok(spec(name, vec![("u", k)], equations))
            } else {
                Err(SearchError::UnknownPreset(name.to_string()))
            }
        }
    }
}

/// The defining equations of two directed terms, over symbols `d1`, `d2`.
pub fn directed_equations() -> Vec<(Term, Term)> {
    let (x, y, z) = (vx(0), vx(1), vx(2));
    vec![
        (x.clone(), app("d1", vec![x.clone(), x.clone(), z.clone()])),
        (
            app("d1", vec![x.clone(), z.clone(), z.clone()]),
            app("d2", vec![x.clone(), x.clone(), z.clone()]),
        ),
        (app("d2", vec![x.clone(), z.clone(), z.clone()]), z.clone()),
        (x.clone(), app("d1", vec![x.clone(), y.clone(), x.clone()])),
        (app("d2", vec![x.clone(), y.clone(), x.clone()]), x.clone()),
    ]
}

/// Unknown symbols (by spec index) appearing in a term.
fn unknowns_in(term: &Term, spec: &TermSystemSpec, out: &mut Vec<usize>) {
    if let Term::App(symbol, args) = term {
        if let Some(i) = spec.unknowns.iter().position(|(s, _)| s == symbol) {
            if !out.contains(&i) {
                out.push(i);
            }
        }
        for a in args {
            unknowns_in(a, spec, out);
        }
    }
}

/// Substitutes realizing terms for unknown symbols, bottom-up.
pub fn replace_unknowns(
    term: &Term,
    assignments: &[(String, Term)],
) -> Result<Term, AlgebraError> {
    match term {
        Term::Var(_) => Ok(term.clone()),
        Term::App(symbol, args) => {
            let replaced = args
                .iter()
                .map(|a| replace_unknowns(a, assignments))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some((_, body)) = assignments.iter().find(|(s, _)| s == symbol) {
                body.substitute(&replaced)
            } else {
                Ok(Term::app(symbol.clone(), replaced))
            }
        }
    }
}

/// Tests the given equations with unknowns interpreted by tables.
fn equations_hold_with_tables(
    alg: &FiniteAlgebra,
    equations: &[&(Term, Term)],
    tables: &[(String, usize, Vec<El>)],
) -> Result<bool, AlgebraError> {
    let mut extra = ExtraOps::new();
    for (symbol, arity, table) in tables {
        extra.push(symbol.clone(), *arity, table);
    }
    for (lhs, rhs) in equations {
        if !equation_holds_ext(alg, lhs, rhs, Some(&extra))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn tuple_to_table(tuple: &[u8]) -> Vec<El> {
    tuple.iter().map(|&v| v as El).collect()
}

/// Verifies a full assignment at the term level and packages it.
fn verified_system(
    alg: &FiniteAlgebra,
    spec: &TermSystemSpec,
    frees: &HashMap<usize, FreeAlgebra>,
    choice: &[usize],
) -> Result<TermSystem, SearchError> {
    let assignments: Vec<(String, Term)> = spec
        .unknowns
        .iter()
        .zip(choice)
        .map(|((name, arity), &idx)| (name.clone(), frees[arity].witness_term(alg, idx)))
        .collect();
    for (lhs, rhs) in &spec.equations {
        let l = replace_unknowns(lhs, &assignments)?;
        let r = replace_unknowns(rhs, &assignments)?;
        if !equation_holds(alg, &l, &r)? {
            return Err(SearchError::Unsound(format!(
                "{} = {} fails for {}",
                lhs, rhs, spec.name
            )));
        }
    }
    Ok(TermSystem {
        assignments,
        indices: choice.to_vec(),
    })
}

/// Searches the free algebras for terms satisfying the system
/// specification. Returns the first solution in discovery order
/// (lexicographically least element indices, unknowns in declaration
/// order), re-verified at the term level.
///
/// With a single unknown the free algebra is scanned lazily and the search
/// stops at the first satisfying element, so a hit that appears early costs
/// only a prefix of the closure.
pub fn find_term_system(
    alg: &FiniteAlgebra,
    spec: &TermSystemSpec,
    budget: &ClosureBudget,
) -> Result<Option<TermSystem>, SearchError> {
    let mut out = search(alg, spec, budget, true)?;
    Ok(out.pop())
}

/// Every solution of the system specification, in lexicographic order of
/// element indices.
pub fn find_all_term_systems(
    alg: &FiniteAlgebra,
    spec: &TermSystemSpec,
    budget: &ClosureBudget,
) -> Result<Vec<TermSystem>, SearchError> {
    search(alg, spec, budget, false)
}

fn search(
    alg: &FiniteAlgebra,
    spec: &TermSystemSpec,
    budget: &ClosureBudget,
    first_only: bool,
) -> Result<Vec<TermSystem>, SearchError> {
    // Equations mentioning no unknown must hold outright.
    let mut eq_unknowns: Vec<Vec<usize>> = Vec::with_capacity(spec.equations.len());
    for (lhs, rhs) in &spec.equations {
        let mut us = Vec::new();
        unknowns_in(lhs, spec, &mut us);
        unknowns_in(rhs, spec, &mut us);
        us.sort_unstable();
        eq_unknowns.push(us);
    }
    for ((lhs, rhs), us) in spec.equations.iter().zip(&eq_unknowns) {
        if us.is_empty() && !equation_holds(alg, lhs, rhs)? {
            return Ok(Vec::new());
        }
    }

    if spec.unknowns.len() == 1 && first_only {
        return lazy_single_unknown(alg, spec, budget);
    }

    // One full free algebra per distinct arity.
    let mut frees: HashMap<usize, FreeAlgebra> = HashMap::new();
    for &(_, arity) in &spec.unknowns {
        if let std::collections::hash_map::Entry::Vacant(e) = frees.entry(arity) {
            e.insert(free_algebra(alg, arity, budget)?);
        }
    }

    // Prefilter: for each unknown, keep the elements satisfying all
    // equations that mention this unknown alone.
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(spec.unknowns.len());
    for (u, (name, arity)) in spec.unknowns.iter().enumerate() {
        let solo: Vec<&(Term, Term)> = spec
            .equations
            .iter()
            .zip(&eq_unknowns)
            .filter(|(_, us)| us.as_slice() == [u])
            .map(|(eq, _)| eq)
            .collect();
        let free = &frees[arity];
        let mut keep = Vec::new();
        for idx in 0..free.len() {
            let tables = [(name.clone(), *arity, tuple_to_table(free.tuple(idx)))];
            if equations_hold_with_tables(alg, &solo, &tables)? {
                keep.push(idx);
            }
        }
        candidates.push(keep);
    }

    // Depth-first assignment in spec order; at each depth test the
    // equations newly covered by the just-assigned unknown.
    let mut solutions = Vec::new();
    let mut choice: Vec<usize> = Vec::with_capacity(spec.unknowns.len());
    let mut tables: Vec<(String, usize, Vec<El>)> = Vec::with_capacity(spec.unknowns.len());
    dfs(
        alg,
        spec,
        &frees,
        &candidates,
        &eq_unknowns,
        &mut choice,
        &mut tables,
        first_only,
        &mut solutions,
    )?;
    solutions
        .iter()
        .map(|choice| verified_system(alg, spec, &frees, choice))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    alg: &FiniteAlgebra,
    spec: &TermSystemSpec,
    frees: &HashMap<usize, FreeAlgebra>,
    candidates: &[Vec<usize>],
    eq_unknowns: &[Vec<usize>],
    choice: &mut Vec<usize>,
    tables: &mut Vec<(String, usize, Vec<El>)>,
    first_only: bool,
    solutions: &mut Vec<Vec<usize>>,
) -> Result<bool, SearchError> {
    let depth = choice.len();
    if depth == spec.unknowns.len() {
        solutions.push(choice.clone());
        return Ok(first_only);
    }
    let (name, arity) = &spec.unknowns[depth];
    // Equations testable exactly now: they mention this unknown and none
    // later. Solo equations were handled by the prefilter.
    let new_eqs: Vec<&(Term, Term)> = spec
        .equations
        .iter()
        .zip(eq_unknowns)
        .filter(|(_, us)| us.contains(&depth) && us.len() > 1 && us.iter().all(|&u| u <= depth))
        .map(|(eq, _)| eq)
        .collect();
    for &idx in &candidates[depth] {
        tables.push((name.clone(), *arity, tuple_to_table(frees[arity].tuple(idx))));
        let ok = equations_hold_with_tables(alg, &new_eqs, tables)?;
        if ok {
            choice.push(idx);
            let stop = dfs(
                alg, spec, frees, candidates, eq_unknowns, choice, tables, first_only, solutions,
            )?;
            choice.pop();
            if stop {
                tables.pop();
                return Ok(true);
            }
        }
        tables.pop();
    }
    Ok(false)
}

/// Lazy scan for a single unknown: stop the free-algebra closure at the
/// first element whose value tuple, read as an operation table, satisfies
/// every equation.
fn lazy_single_unknown(
    alg: &FiniteAlgebra,
    spec: &TermSystemSpec,
    budget: &ClosureBudget,
) -> Result<Vec<TermSystem>, SearchError> {
    let (name, arity) = &spec.unknowns[0];
    let all: Vec<&(Term, Term)> = spec.equations.iter().collect();
    let mut found: Option<usize> = None;
    let mut scan_error: Option<AlgebraError> = None;
    let free = free_algebra_scan(alg, *arity, budget, |idx, tuple| {
        let tables = [(name.clone(), *arity, tuple_to_table(tuple))];
        match equations_hold_with_tables(alg, &all, &tables) {
            Ok(true) => {
                found = Some(idx);
                Visit::Stop
            }
            Ok(false) => Visit::Continue,
            Err(e) => {
                scan_error = Some(e);
                Visit::Stop
            }
        }
    })?;
    if let Some(e) = scan_error {
        return Err(e.into());
    }
    // A scan that returned without finding and without an error has, by
    // construction, completed the closure: a "none" answer is exhaustive.
    debug_assert!(found.is_some() || free.complete());
    match found {
        Some(idx) => {
            let mut frees = HashMap::new();
            frees.insert(*arity, free);
            Ok(vec![verified_system(alg, spec, &frees, &[idx])?])
        }
        None => Ok(Vec::new()),
    }
}

/// The two directed terms built from a pair of terms satisfying the
/// 3-distributivity chain: `d1(x,y,z) = j1(j1(x,y,z),y,z)` and
/// `d2(x,y,z) = j2(j2(x,z,z), j2(x,y,z), z)`.
pub fn directed_from_jonsson(j1: &Term, j2: &Term) -> Result<(Term, Term), AlgebraError> {
    let d1 = j1.substitute(&[j1.clone(), vx(1), vx(2)])?;
    let d2 = j2.substitute(&[
        j2.substitute(&[vx(0), vx(2), vx(2)])?,
        j2.clone(),
        vx(2),
    ])?;
    Ok((d1, d2))
}

/// The majority term determined by a 5-ary transfer term `w` satisfying
/// the four transfer equations:
/// `m(x,y,z) = w(w(x,y,z,y,z), w(x,y,z,z,y), y, z, w(x,z,y,y,z))`.
pub fn majority_from_transfer(w: &Term) -> Result<Term, AlgebraError> {
    let w1 = w.substitute(&[vx(0), vx(1), vx(2), vx(1), vx(2)])?;
    let w2 = w.substitute(&[vx(0), vx(1), vx(2), vx(2), vx(1)])?;
    let w3 = w.substitute(&[vx(0), vx(2), vx(1), vx(1), vx(2)])?;
    w.substitute(&[w1, w2, vx(1), vx(2), w3])
}

/// One verified step of a witness chain: the pair `(from, to)` lies in
/// every named relation.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub from: El,
    pub to: El,
    pub relations: Vec<String>,
}

/// The concrete elements and memberships produced by the two-term chain
/// argument at a triple `a R c`, `a S b`, `b T c`.
#[derive(Debug, Clone)]
pub struct WitnessChain {
    /// `e`, `f`, `g`, `g•` by name.
    pub elements: Vec<(String, El)>,
    pub steps: Vec<ChainStep>,
    /// True when the last chain equation holds too, enabling the four
    /// additional R-steps through `g` and `g•` and the `e R g` step.
    pub extended: bool,
}

/// Evaluates the element chain `e, f, g, g•` for the triple `(a, b, c)`
/// and verifies every claimed membership.
///
/// Preconditions checked: each named relation is reflexive and admissible;
/// `(a,c)` is in the first relation, `(a,b)` in the second, `(b,c)` in the
/// third; and `j1`, `j2` satisfy the four chain equations (the fifth is
/// detected and unlocks the extended steps).
pub fn witness_chain(
    alg: &FiniteAlgebra,
    relations: &[(String, BinaryRelation)],
    triple: (El, El, El),
    j1: &Term,
    j2: &Term,
    budget: &ClosureBudget,
) -> Result<WitnessChain, SearchError> {
    let [(rn, r), (sn, s), (tn, t)] = relations else {
        return Err(SearchError::ChainPrecondition(format!(
            "expected exactly three relations, got {}",
            relations.len()
        )));
    };
    let (rn, sn, tn) = (rn.as_str(), sn.as_str(), tn.as_str());
    for (name, rel) in relations {
        let flags = rel.classify(alg, budget)?;
        if !flags.reflexive || !flags.admissible {
            return Err(SearchError::ChainPrecondition(format!(
                "relation {name} is not reflexive admissible"
            )));
        }
    }
    let (a, b, c) = triple;
    for (pair, rel, label) in [
        ((a, c), r, format!("({a},{c}) in {rn}")),
        ((a, b), s, format!("({a},{b}) in {sn}")),
        ((b, c), t, format!("({b},{c}) in {tn}")),
    ] {
        if !rel.contains(pair.0, pair.1) {
            return Err(SearchError::ChainPrecondition(label));
        }
    }
    let assignments = [("j1".to_string(), j1.clone()), ("j2".to_string(), j2.clone())];
    let chain_eqs = preset("gumm2").expect("built-in preset").equations;
    for (lhs, rhs) in &chain_eqs {
        let l = replace_unknowns(lhs, &assignments)?;
        let rr = replace_unknowns(rhs, &assignments)?;
        if !equation_holds(alg, &l, &rr)? {
            return Err(SearchError::ChainPrecondition(format!(
                "terms do not satisfy {lhs} = {rhs}"
            )));
        }
    }
    let (y, z) = (vx(1), vx(2));
    let fifth_l = app("j2", vec![z.clone(), y.clone(), z.clone()]);
    let extended = equation_holds(
        alg,
        &replace_unknowns(&fifth_l, &assignments)?,
        &replace_unknowns(&z, &assignments)?,
    )?;

    let ev = |term: &Term, env: &[El]| eval_term(alg, term, env);
    let j1_at = |p: El, q: El, w: El| -> Result<El, AlgebraError> { ev(j1, &[p, q, w]) };
    let j2_at = |p: El, q: El, w: El| -> Result<El, AlgebraError> { ev(j2, &[p, q, w]) };

    let e = j1_at(j1_at(a, b, c)?, b, c)?;
    let f = j2_at(j2_at(a, c, c)?, c, c)?;
    // The chain equations force the two derivations of `f` to agree.
    let f_alt = j1_at(j1_at(a, c, c)?, c, c)?;
    if f != f_alt {
        return Err(SearchError::ChainBroken(format!(
            "the two expressions for f disagree: {f} vs {f_alt}"
        )));
    }
    let g = j2_at(j2_at(a, c, c)?, j2_at(b, c, c)?, c)?;
    let g_bullet = j2_at(j2_at(a, c, c)?, j2_at(a, b, c)?, c)?;

    let mut steps: Vec<(El, El, Vec<&str>)> = vec![
        (e, c, vec![rn]),
        (f, c, vec![rn]),
        (a, e, vec![rn, sn]),
        (e, f, vec![rn, tn]),
        (f, g, vec![tn]),
        (g, c, vec![sn]),
        (f, g_bullet, vec![sn]),
        (g_bullet, c, vec![tn]),
    ];
    if extended {
        steps.push((f, g, vec![rn]));
        steps.push((g, c, vec![rn]));
        steps.push((f, g_bullet, vec![rn]));
        steps.push((g_bullet, c, vec![rn]));
        steps.push((e, g, vec![rn]));
    }
    let mut verified = Vec::with_capacity(steps.len());
    for (from, to, names) in steps {
        for &name in &names {
            let rel = if name == rn {
                r
            } else if name == sn {
                s
            } else {
                t
            };
            if !rel.contains(from, to) {
                return Err(SearchError::ChainBroken(format!(
                    "({from},{to}) is not in {name}"
                )));
            }
        }
        verified.push(ChainStep {
            from,
            to,
            relations: names.into_iter().map(str::to_string).collect(),
        });
    }
    Ok(WitnessChain {
        elements: vec![
            ("e".to_string(), e),
            ("f".to_string(), f),
            ("g".to_string(), g),
            ("g•".to_string(), g_bullet),
        ],
        steps: verified,
        extended,
    })
}
