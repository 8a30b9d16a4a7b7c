//! Deciding relation identities on a finite algebra.
//!
//! A [`Checker`] quantifies a parsed [`Statement`] over bindings of its
//! declared variables and reports either that every tested binding satisfies
//! the claim or a fully concrete [`Counterexample`]. Three quantification
//! strategies are provided: exhaustive enumeration of all relations of each
//! sort, the budget-friendly `generated` mode restricted to relations with
//! few generating pairs, and seeded random sampling. A fourth entry point
//! checks one caller-supplied binding.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{ClosureBudget, El, FiniteAlgebra};
use crate::rel::{
    enumerate_relations, generated_relation, join_relations, BinaryRelation, RelError, Sort,
};

use super::ast::{Connective, Expr, Statement};
use super::eval::{eval_expr, EvalError};

/// How to quantify over the declared relation variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every relation of each declared sort.
    Exhaustive,
    /// Relations generated by at most `k` off-diagonal pairs: the diagonal,
    /// all principal relations, and joins of up to `k` distinct principals.
    Generated { k: usize },
    /// `trials` independent bindings of randomly generated relations,
    /// reproducible from `seed`.
    Sampled { trials: u64, seed: u64 },
}

/// Which inclusion a counterexample violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    LhsNotSubsetOfRhs,
    RhsNotSubsetOfLhs,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::LhsNotSubsetOfRhs => write!(f, "left side is not below the right side"),
            Violation::RhsNotSubsetOfLhs => write!(f, "right side is not below the left side"),
        }
    }
}

/// One variable of a counterexample binding.
#[derive(Debug, Clone)]
pub struct BoundRelation {
    pub name: String,
    pub sort: Sort,
    /// Generating pairs when the relation was produced from seeds.
    pub seeds: Option<Vec<(El, El)>>,
    pub relation: BinaryRelation,
}

/// A concrete refutation: a binding plus a pair present on one side of the
/// claim and absent from the other.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub binding: Vec<BoundRelation>,
    /// First offending pair in row-major order.
    pub pair: (El, El),
    /// When the containing side is (a meet over) a composition, the first
    /// intermediate element witnessing the pair's membership there.
    pub midpoint: Option<El>,
    pub violation: Violation,
}

/// The verdict for one statement under one quantification strategy.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub holds: bool,
    pub bindings_tested: u64,
    /// Size of the full binding space, when it is enumerable.
    pub total_bindings: Option<u128>,
    /// True when a binding cap stopped the search before the space was done.
    pub truncated: bool,
    pub counterexample: Option<Counterexample>,
}

/// Failures while checking a statement.
#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error("no binding supplied for declared variable `{0}`")]
    MissingBinding(String),
    #[error("binding supplied for undeclared variable `{0}`")]
    ExtraBinding(String),
    #[error("relation bound to `{name}` is not a {sort}: it fails {missing}")]
    SortViolation {
        name: String,
        sort: Sort,
        missing: &'static str,
    },
}

type CandidateSet = Rc<Vec<(BinaryRelation, Option<Vec<(El, El)>>)>>;

/// Statement checker over one algebra, caching candidate relation sets
/// across calls so a suite of identities shares the enumeration work.
pub struct Checker<'a> {
    alg: &'a FiniteAlgebra,
    budget: ClosureBudget,
    max_bindings: Option<u64>,
    relation_limit: usize,
    exhaustive: RefCell<HashMap<Sort, CandidateSet>>,
    generated: RefCell<HashMap<(Sort, usize), CandidateSet>>,
}

impl<'a> Checker<'a> {
    pub fn new(alg: &'a FiniteAlgebra) -> Checker<'a> {
        Checker {
            alg,
            budget: ClosureBudget::default(),
            max_bindings: None,
            relation_limit: 100_000,
            exhaustive: RefCell::new(HashMap::new()),
            generated: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_budget(mut self, budget: ClosureBudget) -> Self {
        self.budget = budget;
        self
    }

    /// Caps the number of bindings tested per `check` call; hitting the cap
    /// marks the outcome `truncated` instead of failing.
    pub fn with_max_bindings(mut self, cap: u64) -> Self {
        self.max_bindings = Some(cap);
        self
    }

    /// Caps exhaustive relation enumeration (error past the limit).
    pub fn with_relation_limit(mut self, limit: usize) -> Self {
        self.relation_limit = limit;
        self
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.alg
    }

    pub fn budget(&self) -> &ClosureBudget {
        &self.budget
    }

    fn exhaustive_candidates(&self, sort: Sort) -> Result<CandidateSet, CheckError> {
        if let Some(set) = self.exhaustive.borrow().get(&sort) {
            return Ok(Rc::clone(set));
        }
        let rels = enumerate_relations(self.alg, sort, &self.budget, self.relation_limit)?;
        let set: CandidateSet = Rc::new(rels.into_iter().map(|r| (r, None)).collect());
        self.exhaustive.borrow_mut().insert(sort, Rc::clone(&set));
        Ok(set)
    }

    /// The diagonal, the distinct principal relations of the sort (by
    /// row-major seed pair, first generator kept on duplicates), and joins
    /// of `j = 2..=k` distinct principals in combination order.
    fn generated_candidates(&self, sort: Sort, k: usize) -> Result<CandidateSet, CheckError> {
        let k = k.max(1);
        if let Some(set) = self.generated.borrow().get(&(sort, k)) {
            return Ok(Rc::clone(set));
        }
        let n = self.alg.size();
        let mut out: Vec<(BinaryRelation, Option<Vec<(El, El)>>)> = Vec::new();
        let mut seen: HashSet<BinaryRelation> = HashSet::new();
        let mut push = |rel: BinaryRelation,
                        seeds: Vec<(El, El)>,
                        out: &mut Vec<(BinaryRelation, Option<Vec<(El, El)>>)>| {
            if seen.insert(rel.clone()) {
                out.push((rel, Some(seeds)));
            }
        };
        push(BinaryRelation::diagonal(n), Vec::new(), &mut out);
        let mut principals: Vec<(BinaryRelation, (El, El))> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let gen = generated_relation(self.alg, &[(a, b)], sort, &self.budget)?;
                if !principals.iter().any(|(r, _)| *r == gen.relation) {
                    principals.push((gen.relation.clone(), (a, b)));
                }
                push(gen.relation, vec![(a, b)], &mut out);
            }
        }
        let p = principals.len();
        for j in 2..=k {
            if j > p {
                break;
            }
            let mut combo: Vec<usize> = (0..j).collect();
            loop {
                let mut seeds: Vec<(El, El)> = combo.iter().map(|&i| principals[i].1).collect();
                seeds.sort_unstable();
                let mut joined = principals[combo[0]].0.clone();
                for &i in &combo[1..] {
                    joined = join_relations(self.alg, &joined, &principals[i].0, sort, &self.budget)?;
                }
                push(joined, seeds, &mut out);
                // Next j-combination of {0, .., p-1} in lexicographic order.
                let mut pos = j;
                let advanced = loop {
                    if pos == 0 {
                        break false;
                    }
                    pos -= 1;
                    if combo[pos] + 1 <= p - (j - pos) {
                        combo[pos] += 1;
                        for q in pos + 1..j {
                            combo[q] = combo[q - 1] + 1;
                        }
                        break true;
                    }
                };
                if !advanced {
                    break;
                }
            }
        }
        let set: CandidateSet = Rc::new(out);
        self.generated
            .borrow_mut()
            .insert((sort, k), Rc::clone(&set));
        Ok(set)
    }

    /// One random relation of the sort: one or two uniformly random
    /// off-diagonal generator pairs, closed.
    fn random_candidate(
        &self,
        sort: Sort,
        rng: &mut ChaCha8Rng,
    ) -> Result<(BinaryRelation, Vec<(El, El)>), CheckError> {
        let n = self.alg.size();
        if n < 2 {
            return Ok((BinaryRelation::diagonal(n), Vec::new()));
        }
        let count = rng.random_range(1..=2usize);
        let mut seeds = Vec::with_capacity(count);
        for _ in 0..count {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n);
            while b == a {
                b = rng.random_range(0..n);
            }
            seeds.push((a, b));
        }
        let gen = generated_relation(self.alg, &seeds, sort, &self.budget)?;
        Ok((gen.relation, seeds))
    }

    /// Evaluates both sides under one binding; `Some` on violation.
    fn test_binding(
        &self,
        stmt: &Statement,
        bindings: &[(String, BinaryRelation)],
    ) -> Result<Option<((El, El), Option<El>, Violation)>, CheckError> {
        let lhs = eval_expr(self.alg, &stmt.lhs, bindings, &self.budget)?;
        let rhs = eval_expr(self.alg, &stmt.rhs, bindings, &self.budget)?;
        if let Some(pair) = first_missing(&lhs, &rhs) {
            let mid = midpoint(self.alg, &stmt.lhs, bindings, &self.budget, pair)?;
            return Ok(Some((pair, mid, Violation::LhsNotSubsetOfRhs)));
        }
        if stmt.connective == Connective::Equal {
            if let Some(pair) = first_missing(&rhs, &lhs) {
                let mid = midpoint(self.alg, &stmt.rhs, bindings, &self.budget, pair)?;
                return Ok(Some((pair, mid, Violation::RhsNotSubsetOfLhs)));
            }
        }
        Ok(None)
    }

    fn outcome_for_violation(
        &self,
        stmt: &Statement,
        bindings: Vec<(String, BinaryRelation)>,
        seeds: Vec<Option<Vec<(El, El)>>>,
        hit: ((El, El), Option<El>, Violation),
        bindings_tested: u64,
        total_bindings: Option<u128>,
    ) -> CheckOutcome {
        let (pair, midpoint, violation) = hit;
        let binding = bindings
            .into_iter()
            .zip(seeds)
            .map(|((name, relation), seeds)| {
                let sort = stmt.sort_of(&name).expect("binding name was declared");
                BoundRelation {
                    name,
                    sort,
                    seeds,
                    relation,
                }
            })
            .collect();
        CheckOutcome {
            holds: false,
            bindings_tested,
            total_bindings,
            truncated: false,
            counterexample: Some(Counterexample {
                binding,
                pair,
                midpoint,
                violation,
            }),
        }
    }

    /// Quantifies the statement over bindings drawn per `mode`. The binding
    /// odometer runs in declaration order with the last variable varying
    /// fastest; the first violated binding stops the search.
    pub fn check(&self, stmt: &Statement, mode: CheckMode) -> Result<CheckOutcome, CheckError> {
        match mode {
            CheckMode::Exhaustive | CheckMode::Generated { .. } => {
                let sets: Vec<CandidateSet> = stmt
                    .decls
                    .iter()
                    .map(|(_, sort)| match mode {
                        CheckMode::Exhaustive => self.exhaustive_candidates(*sort),
                        CheckMode::Generated { k } => self.generated_candidates(*sort, k),
                        CheckMode::Sampled { .. } => unreachable!(),
                    })
                    .collect::<Result<_, _>>()?;
                self.check_enumerated(stmt, &sets)
            }
            CheckMode::Sampled { trials, seed } => self.check_sampled(stmt, trials, seed),
        }
    }

    fn check_enumerated(
        &self,
        stmt: &Statement,
        sets: &[CandidateSet],
    ) -> Result<CheckOutcome, CheckError> {
        let total: u128 = sets.iter().map(|s| s.len() as u128).product();
        if sets.iter().any(|s| s.is_empty()) {
            return Ok(CheckOutcome {
                holds: true,
                bindings_tested: 0,
                total_bindings: Some(0),
                truncated: false,
                counterexample: None,
            });
        }
        let mut idx = vec![0usize; sets.len()];
        let mut tested: u64 = 0;
        let mut truncated = false;
        loop {
            let bindings: Vec<(String, BinaryRelation)> = stmt
                .decls
                .iter()
                .enumerate()
                .map(|(slot, (name, _))| (name.clone(), sets[slot][idx[slot]].0.clone()))
                .collect();
            tested += 1;
            if let Some(hit) = self.test_binding(stmt, &bindings)? {
                let seeds = idx
                    .iter()
                    .enumerate()
                    .map(|(slot, &i)| sets[slot][i].1.clone())
                    .collect();
                return Ok(self.outcome_for_violation(
                    stmt,
                    bindings,
                    seeds,
                    hit,
                    tested,
                    Some(total),
                ));
            }
            if let Some(cap) = self.max_bindings {
                if tested >= cap && (tested as u128) < total {
                    truncated = true;
                    break;
                }
            }
            if !advance_mixed(&mut idx, sets) {
                break;
            }
        }
        Ok(CheckOutcome {
            holds: true,
            bindings_tested: tested,
            total_bindings: Some(total),
            truncated,
            counterexample: None,
        })
    }

    fn check_sampled(
        &self,
        stmt: &Statement,
        trials: u64,
        seed: u64,
    ) -> Result<CheckOutcome, CheckError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tested: u64 = 0;
        for _ in 0..trials {
            let mut bindings: Vec<(String, BinaryRelation)> = Vec::with_capacity(stmt.decls.len());
            let mut seeds: Vec<Option<Vec<(El, El)>>> = Vec::with_capacity(stmt.decls.len());
            for (name, sort) in &stmt.decls {
                let (rel, pair_seeds) = self.random_candidate(*sort, &mut rng)?;
                bindings.push((name.clone(), rel));
                seeds.push(Some(pair_seeds));
            }
            tested += 1;
            if let Some(hit) = self.test_binding(stmt, &bindings)? {
                return Ok(self.outcome_for_violation(stmt, bindings, seeds, hit, tested, None));
            }
        }
        Ok(CheckOutcome {
            holds: true,
            bindings_tested: tested,
            total_bindings: None,
            truncated: false,
            counterexample: None,
        })
    }

    /// Checks the statement under one caller-supplied binding, after
    /// verifying each bound relation actually has its declared sort.
    pub fn check_fixed(
        &self,
        stmt: &Statement,
        bindings: &[(String, BinaryRelation)],
    ) -> Result<CheckOutcome, CheckError> {
        for (name, _) in bindings {
            if stmt.sort_of(name).is_none() {
                return Err(CheckError::ExtraBinding(name.clone()));
            }
        }
        let mut ordered: Vec<(String, BinaryRelation)> = Vec::with_capacity(stmt.decls.len());
        for (name, sort) in &stmt.decls {
            let rel = bindings
                .iter()
                .find(|(b, _)| b == name)
                .map(|(_, r)| r.clone())
                .ok_or_else(|| CheckError::MissingBinding(name.clone()))?;
            let flags = rel.classify(self.alg, &self.budget)?;
            if !flags.satisfies(*sort) {
                let need = sort.flags();
                let missing = if need.reflexive && !flags.reflexive {
                    "reflexivity"
                } else if need.admissible && !flags.admissible {
                    "admissibility"
                } else if need.symmetric && !flags.symmetric {
                    "symmetry"
                } else {
                    "transitivity"
                };
                return Err(CheckError::SortViolation {
                    name: name.clone(),
                    sort: *sort,
                    missing,
                });
            }
            ordered.push((name.clone(), rel));
        }
        let seeds = vec![None; ordered.len()];
        match self.test_binding(stmt, &ordered)? {
            Some(hit) => Ok(self.outcome_for_violation(stmt, ordered, seeds, hit, 1, Some(1))),
            None => Ok(CheckOutcome {
                holds: true,
                bindings_tested: 1,
                total_bindings: Some(1),
                truncated: false,
                counterexample: None,
            }),
        }
    }
}

/// Mixed-radix odometer over candidate-set sizes, last slot fastest.
fn advance_mixed(idx: &mut [usize], sets: &[CandidateSet]) -> bool {
    for (slot, i) in idx.iter_mut().enumerate().rev() {
        *i += 1;
        if *i < sets[slot].len() {
            return true;
        }
        *i = 0;
    }
    false
}

/// First pair of `sub` missing from `sup`, in row-major order.
fn first_missing(sub: &BinaryRelation, sup: &BinaryRelation) -> Option<(El, El)> {
    sub.pairs().into_iter().find(|&(a, b)| !sup.contains(a, b))
}

/// Midpoint extraction: descend through meets that contain exactly one
/// composition, then split the composition after its first factor and find
/// the first intermediate element joining the two halves at `pair`.
fn midpoint(
    alg: &FiniteAlgebra,
    expr: &Expr,
    bindings: &[(String, BinaryRelation)],
    budget: &ClosureBudget,
    pair: (El, El),
) -> Result<Option<El>, EvalError> {
    let mut cur = expr;
    loop {
        match cur {
            Expr::Meet(parts) => {
                let mut composes = parts.iter().filter(|p| matches!(p, Expr::Compose(_)));
                match (composes.next(), composes.next()) {
                    (Some(c), None) => cur = c,
                    _ => return Ok(None),
                }
            }
            Expr::Compose(parts) => {
                let first = eval_expr(alg, &parts[0], bindings, budget)?;
                let rest = eval_expr(alg, &Expr::compose(parts[1..].to_vec()), bindings, budget)?;
                let (a, c) = pair;
                for b in first.row_elements(a) {
                    if rest.contains(b, c) {
                        return Ok(Some(b));
                    }
                }
                return Ok(None);
            }
            _ => return Ok(None),
        }
    }
}
