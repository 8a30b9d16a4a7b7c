//! Probing a finitely generated variety for a majority term via the
//! tolerance identity on its rank-3 free algebra.
//!
//! The identity `a&(b o H) <= (a&b) o (a&H) o (a&b)` — `a`, `b`
//! congruences, `H` a tolerance — holds throughout a variety exactly when
//! the variety has a majority term. The probe evaluates it at the
//! canonical relations of the rank-3 free algebra over generators
//! `x, y, z`: the congruences collapsing `x` with `z` and `x` with `y`,
//! and the tolerance generated by `(y, z)`. Failure certifies that no
//! majority term exists, with the pair `(x, z)` as witness. Success finds
//! midpoints, replays the tolerance derivation of the midpoint pair into
//! a 5-ary transfer term, and assembles from it an explicit majority
//! term, re-verified on the base algebra.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::{
    equation_holds, free_algebra, AlgebraError, ClosureBudget, El, FiniteAlgebra, FreeAlgebra,
    Term,
};
use crate::rel::{generated_relation, Derivation, DerivationLog, RelError, Sort};

/// Failures of the majority-term probe.
#[derive(Debug, Error)]
pub enum ProbeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rel(#[from] RelError),
    /// An invariant of the construction failed — a bug, not an input error.
    #[error("probe invariant violated: {0}")]
    Internal(String),
}

/// Result of the probe: either a verified majority term or a concrete
/// witness that none exists in the variety.
#[derive(Debug, Clone)]
pub enum ProbeOutcome {
    /// The identity holds at the canonical relations and the construction
    /// went through.
    MajorityTerm {
        /// 5-ary term `w` realizing the two midpoints as
        /// `w(x,y,z,y,z)` and `w(x,y,z,z,y)`.
        transfer: Term,
        /// The induced ternary majority term, verified on the algebra.
        majority: Term,
        /// Free-algebra indices of the chosen midpoints.
        midpoints: (El, El),
        free_size: usize,
    },
    /// The identity fails on the free algebra at the pair of the first
    /// and third generators, so the variety has no majority term.
    NoMajorityTerm {
        free_size: usize,
        witness_pair: (El, El),
    },
}

/// Runs the probe on the variety generated by `alg`.
pub fn probe_free_identity(
    alg: &FiniteAlgebra,
    budget: &ClosureBudget,
) -> Result<ProbeOutcome, ProbeError> {
    let free = free_algebra(alg, 3, budget)?;
    let fa = free.to_algebra(alg, budget)?;
    let generators = free.generators();
    let (x, y, z) = (generators[0], generators[1], generators[2]);

    let alpha = generated_relation(&fa, &[(x, z)], Sort::Congruence, budget)?.relation;
    let beta = generated_relation(&fa, &[(x, y)], Sort::Congruence, budget)?.relation;
    let theta = generated_relation(&fa, &[(y, z)], Sort::Tolerance, budget)?;

    let ab = alpha.meet(&beta)?;
    let at = alpha.meet(&theta.relation)?;
    let rhs = ab.compose(&at)?.compose(&ab)?;
    // (x,z) is always in the left side: it generates `a`, and `x b y H z`.
    if !rhs.contains(x, z) {
        return Ok(ProbeOutcome::NoMajorityTerm {
            free_size: free.len(),
            witness_pair: (x, z),
        });
    }

    // First midpoint pair in element order.
    let mut midpoints = None;
    'outer: for p in 0..fa.size() {
        if !ab.contains(x, p) {
            continue;
        }
        for q in 0..fa.size() {
            if at.contains(p, q) && ab.contains(q, z) {
                midpoints = Some((p, q));
                break 'outer;
            }
        }
    }
    let Some((j1i, j2i)) = midpoints else {
        return Err(ProbeError::Internal(
            "membership held but no midpoint pair found".to_string(),
        ));
    };

    // Replay the tolerance derivation of (j1i, j2i) into a 5-ary term `w`
    // whose last two arguments carry the two orientations of the seed:
    // substituting (x,y,z,y,z) yields the first midpoint, (x,y,z,z,y) the
    // second.
    let mut memo = HashMap::new();
    let w = transfer_term(alg, &free, &theta.log, (y, z), (j1i, j2i), &mut memo)?;

    let first = |t: &Term| t.substitute(&[v(0), v(1), v(2), v(1), v(2)]);
    let second = |t: &Term| t.substitute(&[v(0), v(1), v(2), v(2), v(1)]);
    if free.realize(alg, &first(&w)?)? != Some(j1i) {
        return Err(ProbeError::Internal(
            "transfer term does not realize the first midpoint".to_string(),
        ));
    }
    if free.realize(alg, &second(&w)?)? != Some(j2i) {
        return Err(ProbeError::Internal(
            "transfer term does not realize the second midpoint".to_string(),
        ));
    }

    // The membership constraints translate into four equations for `w`.
    let transfer_equations = [
        (v(0), w.substitute(&[v(0), v(0), v(2), v(0), v(2)])?),
        (w.substitute(&[v(0), v(0), v(2), v(2), v(0)])?, v(2)),
        (v(0), w.substitute(&[v(0), v(1), v(0), v(1), v(0)])?),
        (w.substitute(&[v(0), v(1), v(0), v(0), v(1)])?, v(0)),
    ];
    for (lhs, rhs) in &transfer_equations {
        if !equation_holds(alg, lhs, rhs)? {
            return Err(ProbeError::Internal(format!(
                "transfer equation {lhs} = {rhs} fails"
            )));
        }
    }

    let majority = crate::search::majority_from_transfer(&w)?;
    let (p, q) = (v(0), v(1));
    let majority_equations = [
        (majority.substitute(&[p.clone(), p.clone(), q.clone()])?, p.clone()),
        (majority.substitute(&[p.clone(), q.clone(), p.clone()])?, p.clone()),
        (majority.substitute(&[q.clone(), p.clone(), p.clone()])?, p.clone()),
    ];
    for (lhs, rhs) in &majority_equations {
        if !equation_holds(alg, lhs, rhs)? {
            return Err(ProbeError::Internal(format!(
                "majority equation {lhs} = {rhs} fails"
            )));
        }
    }

    Ok(ProbeOutcome::MajorityTerm {
        transfer: w,
        majority,
        midpoints: (j1i, j2i),
        free_size: free.len(),
    })
}

fn v(i: usize) -> Term {
    Term::var(i)
}

/// 5-ary term for a pair of the tolerance log: evaluates to the pair's
/// first element under `(x,y,z,y,z)` and to its second under
/// `(x,y,z,z,y)`.
fn transfer_term(
    alg: &FiniteAlgebra,
    free: &FreeAlgebra,
    log: &DerivationLog,
    seed: (El, El),
    pair: (El, El),
    memo: &mut HashMap<(El, El), Term>,
) -> Result<Term, ProbeError> {
    if let Some(t) = memo.get(&pair) {
        return Ok(t.clone());
    }
    let derivation = log.derivation_of(pair).ok_or_else(|| {
        ProbeError::Internal(format!("pair {pair:?} missing from the tolerance log"))
    })?;
    let term = match derivation {
        Derivation::Seed => {
            if pair != seed {
                return Err(ProbeError::Internal(format!(
                    "unexpected seed {pair:?} in the tolerance log"
                )));
            }
            // The seed (y, z) is the fourth variable: y under one
            // orientation, z under the other.
            v(3)
        }
        Derivation::Diagonal => free.witness_term(alg, pair.0),
        Derivation::Symmetry { of } => {
            let inner = transfer_term(alg, free, log, seed, *of, memo)?;
            swap_orientation(&inner)
        }
        Derivation::Op { symbol, args } => {
            let arg_terms = args
                .iter()
                .map(|&p| transfer_term(alg, free, log, seed, p, memo))
                .collect::<Result<Vec<_>, _>>()?;
            Term::app(symbol.clone(), arg_terms)
        }
        Derivation::Transitivity { .. } => {
            return Err(ProbeError::Internal(
                "tolerance log contains a transitivity step".to_string(),
            ));
        }
    };
    memo.insert(pair, term.clone());
    Ok(term)
}

/// Swaps the fourth and fifth variables, flipping the seed orientation.
fn swap_orientation(term: &Term) -> Term {
    match term {
        Term::Var(3) => v(4),
        Term::Var(4) => v(3),
        Term::Var(i) => v(*i),
        Term::App(symbol, args) => {
            Term::app(symbol.clone(), args.iter().map(swap_orientation).collect())
        }
    }
}
