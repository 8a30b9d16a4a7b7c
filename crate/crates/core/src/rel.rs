//! Reflexive binary relations on a finite universe, stored as bit
//! matrices, together with the relation calculus (meet, raw union,
//! composition, converse, powers, transitive closure), honest
//! classification against an algebra, sort-respecting relation generation
//! with derivation logs, exhaustive enumeration, and the lattice of
//! admissible preorders.
//!
//! All relations here are reflexive by convention: every constructor adds
//! the diagonal. "Admissible" means the relation is a subuniverse of the
//! square of the algebra, i.e. closed under the componentwise action of
//! every operation.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::algebra::{AlgebraError, ClosureBudget, El, FiniteAlgebra};

/// Errors raised by relation construction, generation and enumeration.
#[derive(Debug, Error)]
pub enum RelError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("relations over universes of size {a} and {b} cannot be combined")]
    SizeMismatch { a: usize, b: usize },
    #[error("pair element {element} is outside the universe 0..{size}")]
    PairOutOfRange { element: usize, size: usize },
    #[error("relation enumeration exceeded the limit of {limit} relations")]
    TooManyRelations { limit: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// The three relation sorts the identity language quantifies over,
/// ordered from weakest to strongest closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    /// Reflexive and admissible (compatible) relations.
    Admissible,
    /// Reflexive, symmetric, admissible relations.
    Tolerance,
    /// Congruences: reflexive, symmetric, transitive, admissible.
    Congruence,
}

impl Sort {
    /// The declaration keyword used by the identity language.
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Admissible => "rel",
            Sort::Tolerance => "tol",
            Sort::Congruence => "cong",
        }
    }

    pub fn from_keyword(kw: &str) -> Option<Sort> {
        match kw {
            "rel" => Some(Sort::Admissible),
            "tol" => Some(Sort::Tolerance),
            "cong" => Some(Sort::Congruence),
            _ => None,
        }
    }

    /// The flags guaranteed for relations generated at this sort.
    pub fn flags(self) -> SortFlags {
        match self {
            Sort::Admissible => SortFlags {
                reflexive: true,
                admissible: true,
                symmetric: false,
                transitive: false,
            },
            Sort::Tolerance => SortFlags {
                reflexive: true,
                admissible: true,
                symmetric: true,
                transitive: false,
            },
            Sort::Congruence => SortFlags {
                reflexive: true,
                admissible: true,
                symmetric: true,
                transitive: true,
            },
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Verified structural properties of a relation. A set flag means the
/// property is known to hold (by construction or by checking); a clear
/// flag carries no information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SortFlags {
    pub reflexive: bool,
    pub admissible: bool,
    pub symmetric: bool,
    pub transitive: bool,
}

impl SortFlags {
    /// Does a relation with these (verified) flags satisfy the sort?
    pub fn satisfies(&self, sort: Sort) -> bool {
        let need = sort.flags();
        (!need.reflexive || self.reflexive)
            && (!need.admissible || self.admissible)
            && (!need.symmetric || self.symmetric)
            && (!need.transitive || self.transitive)
    }
}

/// A reflexive binary relation on `{0, .., n-1}` as a row-major bit matrix.
#[derive(Clone)]
pub struct BinaryRelation {
    n: usize,
    wpr: usize,
    bits: Vec<u64>,
    /// Conservative, verified-by-construction property flags.
    pub flags: SortFlags,
}

impl PartialEq for BinaryRelation {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}

impl Eq for BinaryRelation {}

impl Hash for BinaryRelation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.bits.hash(state);
    }
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryRelation(n={}, pairs={:?})", self.n, self.pairs())
    }
}

impl BinaryRelation {
    /// The diagonal (equality) relation.
    pub fn diagonal(n: usize) -> BinaryRelation {
        let wpr = n.div_ceil(64);
        let mut rel = BinaryRelation {
            n,
            wpr,
            bits: vec![0u64; n * wpr],
            flags: SortFlags {
                reflexive: true,
                admissible: true,
                symmetric: true,
                transitive: true,
            },
        };
        for a in 0..n {
            rel.insert(a, a);
        }
        rel
    }

    /// The full relation.
    pub fn full(n: usize) -> BinaryRelation {
        let mut rel = BinaryRelation::diagonal(n);
        for a in 0..n {
            for b in 0..n {
                rel.insert(a, b);
            }
        }
        rel
    }

    /// The reflexive relation with the given extra pairs. Flags record
    /// reflexivity and cheaply checked symmetry/transitivity; admissibility
    /// is left unclaimed (use [`BinaryRelation::classify`]).
    pub fn from_pairs(n: usize, pairs: &[(El, El)]) -> Result<BinaryRelation, RelError> {
        let mut rel = BinaryRelation::diagonal(n);
        for &(a, b) in pairs {
            if a >= n {
                return Err(RelError::PairOutOfRange { element: a, size: n });
            }
            if b >= n {
                return Err(RelError::PairOutOfRange { element: b, size: n });
            }
            rel.insert(a, b);
        }
        rel.flags = SortFlags {
            reflexive: true,
            admissible: false,
            symmetric: rel.is_symmetric(),
            transitive: rel.is_transitive(),
        };
        Ok(rel)
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    fn insert(&mut self, a: El, b: El) {
        self.bits[a * self.wpr + b / 64] |= 1u64 << (b % 64);
    }

    pub fn contains(&self, a: El, b: El) -> bool {
        a < self.n && b < self.n && self.bits[a * self.wpr + b / 64] >> (b % 64) & 1 == 1
    }

    fn row(&self, a: El) -> &[u64] {
        &self.bits[a * self.wpr..(a + 1) * self.wpr]
    }

    /// Elements related to `a`, ascending.
    pub fn row_elements(&self, a: El) -> Vec<El> {
        let mut out = Vec::new();
        for (w, &word) in self.row(a).iter().enumerate() {
            let mut bitsleft = word;
            while bitsleft != 0 {
                let b = w * 64 + bitsleft.trailing_zeros() as usize;
                if b < self.n {
                    out.push(b);
                }
                bitsleft &= bitsleft - 1;
            }
        }
        out
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> Vec<(El, El)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.row_elements(a) {
                out.push((a, b));
            }
        }
        out
    }

    /// Pairs off the diagonal, row-major.
    pub fn off_diagonal_pairs(&self) -> Vec<(El, El)> {
        self.pairs().into_iter().filter(|&(a, b)| a != b).collect()
    }

    pub fn pair_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn check_size(&self, other: &BinaryRelation) -> Result<(), RelError> {
        if self.n != other.n {
            return Err(RelError::SizeMismatch {
                a: self.n,
                b: other.n,
            });
        }
        Ok(())
    }

    /// Intersection. Preserves all four properties.
    pub fn meet(&self, other: &BinaryRelation) -> Result<BinaryRelation, RelError> {
        self.check_size(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a & b)
            .collect();
        Ok(BinaryRelation {
            n: self.n,
            wpr: self.wpr,
            bits,
            flags: SortFlags {
                reflexive: self.flags.reflexive && other.flags.reflexive,
                admissible: self.flags.admissible && other.flags.admissible,
                symmetric: self.flags.symmetric && other.flags.symmetric,
                transitive: self.flags.transitive && other.flags.transitive,
            },
        })
    }

    /// Set-theoretic union, **not** closed under anything: preserves only
    /// reflexivity and symmetry. Intended as input to generation.
    pub fn union_raw(&self, other: &BinaryRelation) -> Result<BinaryRelation, RelError> {
        self.check_size(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a | b)
            .collect();
        Ok(BinaryRelation {
            n: self.n,
            wpr: self.wpr,
            bits,
            flags: SortFlags {
                reflexive: self.flags.reflexive || other.flags.reflexive,
                admissible: false,
                symmetric: self.flags.symmetric && other.flags.symmetric,
                transitive: false,
            },
        })
    }

    /// Relational composition `self o other`: pairs `(a,c)` such that
    /// `a self b other c` for some `b`. Preserves reflexivity and
    /// admissibility.
    pub fn compose(&self, other: &BinaryRelation) -> Result<BinaryRelation, RelError> {
        self.check_size(other)?;
        let mut bits = vec![0u64; self.n * self.wpr];
        for a in 0..self.n {
            let out_row = a * self.wpr;
            for b in self.row_elements(a) {
                let src = other.row(b);
                for w in 0..self.wpr {
                    bits[out_row + w] |= src[w];
                }
            }
        }
        Ok(BinaryRelation {
            n: self.n,
            wpr: self.wpr,
            bits,
            flags: SortFlags {
                reflexive: self.flags.reflexive && other.flags.reflexive,
                admissible: self.flags.admissible && other.flags.admissible,
                symmetric: false,
                transitive: false,
            },
        })
    }

    /// `k`-fold relational composition of `self` with itself (`k >= 1`).
    pub fn power(&self, k: usize) -> Result<BinaryRelation, RelError> {
        assert!(k >= 1, "relational power needs at least one factor");
        let mut out = self.clone();
        for _ in 1..k {
            let sym = out.flags.symmetric && self.flags.symmetric;
            out = out.compose(self)?;
            out.flags.symmetric = sym;
        }
        Ok(out)
    }

    /// Converse relation. Preserves all four properties.
    pub fn converse(&self) -> BinaryRelation {
        let mut out = BinaryRelation {
            n: self.n,
            wpr: self.wpr,
            bits: vec![0u64; self.n * self.wpr],
            flags: self.flags,
        };
        for a in 0..self.n {
            for b in self.row_elements(a) {
                out.insert(b, a);
            }
        }
        out
    }

    /// Transitive closure (for the reflexive relations used here this is
    /// also the reflexive-transitive closure). Preserves reflexivity,
    /// symmetry and admissibility; the result is transitive.
    pub fn star(&self) -> BinaryRelation {
        let mut bits = self.bits.clone();
        for k in 0..self.n {
            for a in 0..self.n {
                if bits[a * self.wpr + k / 64] >> (k % 64) & 1 == 1 {
                    let (head, tail) = if a < k {
                        let (h, t) = bits.split_at_mut(k * self.wpr);
                        (&mut h[a * self.wpr..(a + 1) * self.wpr], &t[..self.wpr])
                    } else if a > k {
                        let (h, t) = bits.split_at_mut(a * self.wpr);
                        (
                            &mut t[..self.wpr],
                            &h[k * self.wpr..(k + 1) * self.wpr],
                        )
                    } else {
                        continue;
                    };
                    for w in 0..self.wpr {
                        head[w] |= tail[w];
                    }
                }
            }
        }
        BinaryRelation {
            n: self.n,
            wpr: self.wpr,
            bits,
            flags: SortFlags {
                reflexive: self.flags.reflexive,
                admissible: self.flags.admissible,
                symmetric: self.flags.symmetric,
                transitive: true,
            },
        }
    }

    pub fn is_subset_of(&self, other: &BinaryRelation) -> Result<bool, RelError> {
        self.check_size(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & !b == 0))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|a| self.row_elements(a).into_iter().all(|b| self.contains(b, a)))
    }

    pub fn is_transitive(&self) -> bool {
        match self.compose(self) {
            Ok(sq) => sq.is_subset_of(self).unwrap_or(false),
            Err(_) => false,
        }
    }

    /// Checks closure under the componentwise action of every operation,
    /// counting applications against the budget.
    pub fn is_admissible(
        &self,
        alg: &FiniteAlgebra,
        budget: &ClosureBudget,
    ) -> Result<bool, RelError> {
        if alg.size() != self.n {
            return Err(RelError::SizeMismatch {
                a: alg.size(),
                b: self.n,
            });
        }
        let pairs = self.pairs();
        let mut applications: u64 = 0;
        for op in alg.ops() {
            let r = op.arity();
            if r == 0 {
                continue;
            }
            let mut idxs = vec![0usize; r];
            let mut firsts = vec![0usize; r];
            let mut seconds = vec![0usize; r];
            loop {
                applications += 1;
                if applications > budget.max_applications {
                    return Err(RelError::Algebra(AlgebraError::WorkBudgetExceeded {
                        max_applications: budget.max_applications,
                    }));
                }
                for (s, &i) in idxs.iter().enumerate() {
                    firsts[s] = pairs[i].0;
                    seconds[s] = pairs[i].1;
                }
                let a = op.apply(self.n, &firsts);
                let b = op.apply(self.n, &seconds);
                if !self.contains(a, b) {
                    return Ok(false);
                }
                let more = if op.is_symmetric() {
                    advance_sorted(&mut idxs, pairs.len())
                } else {
                    advance(&mut idxs, pairs.len())
                };
                if !more {
                    break;
                }
            }
        }
        Ok(true)
    }

    /// Fully verified flags for this relation over `alg`.
    pub fn classify(
        &self,
        alg: &FiniteAlgebra,
        budget: &ClosureBudget,
    ) -> Result<SortFlags, RelError> {
        Ok(SortFlags {
            reflexive: self.is_reflexive(),
            admissible: self.is_admissible(alg, budget)?,
            symmetric: self.is_symmetric(),
            transitive: self.is_transitive(),
        })
    }
}

/// Odometer step with the last position varying fastest; false on wrap.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Odometer over non-decreasing index tuples below `limit`.
fn advance_sorted(idxs: &mut [usize], limit: usize) -> bool {
    let r = idxs.len();
    for p in (0..r).rev() {
        if idxs[p] + 1 < limit {
            let v = idxs[p] + 1;
            for slot in idxs.iter_mut().skip(p) {
                *slot = v;
            }
            return true;
        }
    }
    false
}

/// One step in the derivation of a generated relation. Every referenced
/// pair occurs earlier in the log; only the first derivation of a pair is
/// recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    /// A supplied generator pair.
    Seed,
    /// A diagonal pair, present by reflexivity.
    Diagonal,
    /// Obtained by flipping the earlier pair (the argument).
    Symmetry { of: (El, El) },
    /// Obtained from `left = (a,b)` and `right = (b,c)`.
    Transitivity { left: (El, El), right: (El, El) },
    /// Componentwise operation application to earlier pairs.
    Op { symbol: String, args: Vec<(El, El)> },
}

/// Derivation log of a generated relation: every pair of the result, in
/// derivation order, each with the first derivation that produced it.
#[derive(Debug, Clone, Default)]
pub struct DerivationLog {
    entries: Vec<((El, El), Derivation)>,
    index: HashMap<(El, El), usize>,
}

impl DerivationLog {
    fn push(&mut self, pair: (El, El), derivation: Derivation) {
        self.index.insert(pair, self.entries.len());
        self.entries.push((pair, derivation));
    }

    pub fn entries(&self) -> &[((El, El), Derivation)] {
        &self.entries
    }

    pub fn derivation_of(&self, pair: (El, El)) -> Option<&Derivation> {
        self.index.get(&pair).map(|&i| &self.entries[i].1)
    }

    pub fn position_of(&self, pair: (El, El)) -> Option<usize> {
        self.index.get(&pair).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A generated relation together with its derivation log.
#[derive(Debug, Clone)]
pub struct GeneratedRelation {
    pub relation: BinaryRelation,
    pub log: DerivationLog,
}

struct GenState {
    rel: BinaryRelation,
    pairs: Vec<(El, El)>,
    log: DerivationLog,
    queue: VecDeque<(El, El)>,
}

impl GenState {
    fn add(&mut self, pair: (El, El), derivation: Derivation) {
        if !self.rel.contains(pair.0, pair.1) {
            self.rel.insert(pair.0, pair.1);
            self.pairs.push(pair);
            self.log.push(pair, derivation);
            self.queue.push_back(pair);
        }
    }

    /// Drains the queue, adding symmetric and transitive consequences as
    /// the sort requires. New pairs are enqueued in turn.
    fn saturate(&mut self, sort: Sort) {
        while let Some((a, b)) = self.queue.pop_front() {
            if sort != Sort::Admissible && a != b && !self.rel.contains(b, a) {
                self.add((b, a), Derivation::Symmetry { of: (a, b) });
            }
            if sort == Sort::Congruence {
                for c in self.rel.row_elements(b) {
                    if !self.rel.contains(a, c) {
                        self.add(
                            (a, c),
                            Derivation::Transitivity {
                                left: (a, b),
                                right: (b, c),
                            },
                        );
                    }
                }
                for r in 0..self.rel.n {
                    if self.rel.contains(r, a) && !self.rel.contains(r, b) {
                        self.add(
                            (r, b),
                            Derivation::Transitivity {
                                left: (r, a),
                                right: (a, b),
                            },
                        );
                    }
                }
            }
        }
    }
}

/// The least relation of the given sort containing `seeds`: the diagonal
/// and the seeds, closed under the componentwise action of every operation
/// and under the symmetry/transitivity the sort demands, with a derivation
/// log recording the first derivation of every pair.
///
/// Deterministic: the diagonal in element order, seeds in the given order,
/// then rounds over operations in declaration order with argument tuples in
/// odometer order over the pairs discovered so far (sorted tuples only for
/// symmetric tables), symmetry/transitivity saturation running after every
/// addition.
pub fn generated_relation(
    alg: &FiniteAlgebra,
    seeds: &[(El, El)],
    sort: Sort,
    budget: &ClosureBudget,
) -> Result<GeneratedRelation, RelError> {
    let n = alg.size();
    for &(a, b) in seeds {
        if a >= n {
            return Err(RelError::PairOutOfRange { element: a, size: n });
        }
        if b >= n {
            return Err(RelError::PairOutOfRange { element: b, size: n });
        }
    }
    let mut state = GenState {
        rel: BinaryRelation {
            n,
            wpr: n.div_ceil(64),
            bits: vec![0u64; n * n.div_ceil(64)],
            flags: sort.flags(),
        },
        pairs: Vec::new(),
        log: DerivationLog::default(),
        queue: VecDeque::new(),
    };
    for d in 0..n {
        state.add((d, d), Derivation::Diagonal);
    }
    for &s in seeds {
        state.add(s, Derivation::Seed);
    }
    state.saturate(sort);

    let mut applications: u64 = 0;
    let mut processed = 0usize;
    loop {
        let cur = state.pairs.len();
        if processed == cur {
            break;
        }
        for op in alg.ops() {
            let r = op.arity();
            if r == 0 {
                continue;
            }
            let mut idxs = vec![0usize; r];
            let mut firsts = vec![0usize; r];
            let mut seconds = vec![0usize; r];
            loop {
                if idxs.iter().copied().max().unwrap_or(0) >= processed {
                    applications += 1;
                    if applications > budget.max_applications {
                        return Err(RelError::Algebra(AlgebraError::WorkBudgetExceeded {
                            max_applications: budget.max_applications,
                        }));
                    }
                    for (s, &i) in idxs.iter().enumerate() {
                        firsts[s] = state.pairs[i].0;
                        seconds[s] = state.pairs[i].1;
                    }
                    let a = op.apply(n, &firsts);
                    let b = op.apply(n, &seconds);
                    if !state.rel.contains(a, b) {
                        state.add(
                            (a, b),
                            Derivation::Op {
                                symbol: op.symbol().to_string(),
                                args: idxs.iter().map(|&i| state.pairs[i]).collect(),
                            },
                        );
                        state.saturate(sort);
                    }
                }
                let more = if op.is_symmetric() {
                    advance_sorted(&mut idxs, cur)
                } else {
                    advance(&mut idxs, cur)
                };
                if !more {
                    break;
                }
            }
        }
        processed = cur;
    }

    Ok(GeneratedRelation {
        relation: state.rel,
        log: state.log,
    })
}

/// Least relation of the sort containing both arguments.
pub fn join_relations(
    alg: &FiniteAlgebra,
    a: &BinaryRelation,
    b: &BinaryRelation,
    sort: Sort,
    budget: &ClosureBudget,
) -> Result<BinaryRelation, RelError> {
    let union = a.union_raw(b)?;
    Ok(generated_relation(alg, &union.off_diagonal_pairs(), sort, budget)?.relation)
}

/// Every relation of the given sort on the algebra, as the join-closure of
/// the principal (single-seed) relations. Deterministic order: the
/// diagonal, the distinct principal relations by row-major seed pair, then
/// joins as they are discovered. Errors out cleanly past `limit`.
pub fn enumerate_relations(
    alg: &FiniteAlgebra,
    sort: Sort,
    budget: &ClosureBudget,
    limit: usize,
) -> Result<Vec<BinaryRelation>, RelError> {
    let n = alg.size();
    let mut out: Vec<BinaryRelation> = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut push = |rel: BinaryRelation, out: &mut Vec<BinaryRelation>| -> Result<bool, RelError> {
        if seen.contains_key(&rel.bits) {
            return Ok(false);
        }
        if out.len() >= limit {
            return Err(RelError::TooManyRelations { limit });
        }
        seen.insert(rel.bits.clone(), out.len());
        out.push(rel);
        Ok(true)
    };
    push(BinaryRelation::diagonal(n), &mut out)?;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let gen = generated_relation(alg, &[(a, b)], sort, budget)?;
            push(gen.relation, &mut out)?;
        }
    }
    let mut i = 1usize;
    while i < out.len() {
        for j in 1..i {
            let joined = join_relations(alg, &out[i], &out[j], sort, budget)?;
            push(joined, &mut out)?;
        }
        i += 1;
    }
    Ok(out)
}

/// The lattice of admissible preorders (reflexive, transitive, admissible
/// relations) of the algebra, with exhaustively checked distributivity and
/// modularity. Failures carry the indices of the first bad triple.
#[derive(Debug, Clone)]
pub struct PreorderLattice {
    pub relations: Vec<BinaryRelation>,
    pub distributive: bool,
    pub modular: bool,
    pub distributive_failure: Option<(usize, usize, usize)>,
    pub modular_failure: Option<(usize, usize, usize)>,
}

/// Least admissible preorder containing the seeds.
fn preorder_closure(
    alg: &FiniteAlgebra,
    seeds: &[(El, El)],
    budget: &ClosureBudget,
) -> Result<BinaryRelation, RelError> {
    // The transitive closure of an admissible relation is admissible, so
    // one generation pass followed by one transitive closure is the least
    // admissible preorder above the seeds.
    Ok(generated_relation(alg, seeds, Sort::Admissible, budget)?
        .relation
        .star())
}

/// Enumerates all admissible preorders and checks the lattice laws.
pub fn preorder_lattice(
    alg: &FiniteAlgebra,
    budget: &ClosureBudget,
    limit: usize,
) -> Result<PreorderLattice, RelError> {
    let n = alg.size();
    let mut relations: Vec<BinaryRelation> = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut push = |rel: BinaryRelation,
                    relations: &mut Vec<BinaryRelation>|
     -> Result<Option<usize>, RelError> {
        if let Some(&i) = seen.get(&rel.bits) {
            return Ok(Some(i));
        }
        if relations.len() >= limit {
            return Err(RelError::TooManyRelations { limit });
        }
        seen.insert(rel.bits.clone(), relations.len());
        relations.push(rel);
        Ok(None)
    };
    push(BinaryRelation::diagonal(n), &mut relations)?;
    for a in 0..n {
        for b in 0..n {
            if a != b {
                push(preorder_closure(alg, &[(a, b)], budget)?, &mut relations)?;
            }
        }
    }
    let mut i = 1usize;
    while i < relations.len() {
        for j in 1..i {
            let union = relations[i].union_raw(&relations[j])?;
            let joined = preorder_closure(alg, &union.off_diagonal_pairs(), budget)?;
            push(joined, &mut relations)?;
        }
        i += 1;
    }

    let m = relations.len();
    let mut join = vec![0usize; m * m];
    let mut meet = vec![0usize; m * m];
    for a in 0..m {
        join[a * m + a] = a;
        meet[a * m + a] = a;
        for b in 0..a {
            let union = relations[a].union_raw(&relations[b])?;
            let joined = preorder_closure(alg, &union.off_diagonal_pairs(), budget)?;
            let ji = *seen.get(&joined.bits).ok_or_else(|| {
                RelError::Internal("join of admissible preorders escaped the enumeration".into())
            })?;
            join[a * m + b] = ji;
            join[b * m + a] = ji;
            let met = relations[a].meet(&relations[b])?;
            let mi = *seen.get(&met.bits).ok_or_else(|| {
                RelError::Internal("meet of admissible preorders escaped the enumeration".into())
            })?;
            meet[a * m + b] = mi;
            meet[b * m + a] = mi;
        }
    }

    let mut distributive_failure = None;
    let mut modular_failure = None;
    'dist: for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let lhs = meet[a * m + join[b * m + c]];
                let rhs = join[meet[a * m + b] * m + meet[a * m + c]];
                if lhs != rhs {
                    distributive_failure = Some((a, b, c));
                    break 'dist;
                }
            }
        }
    }
    'modl: for a in 0..m {
        for c in 0..m {
            if meet[a * m + c] != a {
                continue;
            }
            for b in 0..m {
                let lhs = join[a * m + meet[b * m + c]];
                let rhs = meet[join[a * m + b] * m + c];
                if lhs != rhs {
                    modular_failure = Some((a, b, c));
                    break 'modl;
                }
            }
        }
    }

    Ok(PreorderLattice {
        relations,
        distributive: distributive_failure.is_none(),
        modular: modular_failure.is_none(),
        distributive_failure,
        modular_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Operation;

    fn unary3() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "unary3",
            3,
            vec![Operation::new("g", 1, 3, vec![1, 2, 2]).unwrap()],
        )
        .unwrap()
    }

    fn median2() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "median2",
            2,
            vec![Operation::new("m", 3, 2, vec![0, 0, 0, 1, 0, 1, 1, 1]).unwrap()],
        )
        .unwrap()
    }

    fn budget() -> ClosureBudget {
        ClosureBudget::default()
    }

    fn r_unary3() -> BinaryRelation {
        BinaryRelation::from_pairs(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn pair_membership_and_listing() {
        let r = r_unary3();
        assert!(r.contains(0, 0) && r.contains(1, 1) && r.contains(2, 2));
        assert!(r.contains(0, 1) && r.contains(1, 2));
        assert!(!r.contains(0, 2) && !r.contains(1, 0));
        assert_eq!(r.pairs(), vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]);
        assert_eq!(r.off_diagonal_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn composition_finds_two_step_paths() {
        let r = r_unary3();
        let rr = r.compose(&r).unwrap();
        assert!(rr.contains(0, 2));
        assert!(!r.contains(0, 2));
        assert_ne!(rr, r);
    }

    #[test]
    fn star_is_transitive_closure() {
        let r = r_unary3();
        let s = r.star();
        let expected = BinaryRelation::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(s, expected);
        assert!(s.is_transitive());
        // For a reflexive relation on n elements, n-1 compositions reach
        // the transitive closure.
        assert_eq!(s, r.power(2).unwrap());
        assert_eq!(s.star(), s);
    }

    #[test]
    fn converse_flips_pairs_and_is_involutive() {
        let r = r_unary3();
        let c = r.converse();
        assert!(c.contains(1, 0) && c.contains(2, 1));
        assert!(!c.contains(0, 1));
        assert_eq!(c.converse(), r);
    }

    #[test]
    fn admissibility_of_the_unary3_relation() {
        let alg = unary3();
        let r = r_unary3();
        // g maps (0,1) to (1,2) and (1,2) to (2,2): closed.
        assert!(r.is_admissible(&alg, &budget()).unwrap());
        let bad = BinaryRelation::from_pairs(3, &[(0, 1)]).unwrap();
        // g maps (0,1) to (1,2), which is missing: not closed.
        assert!(!bad.is_admissible(&alg, &budget()).unwrap());
        let flags = r.classify(&alg, &budget()).unwrap();
        assert!(flags.reflexive && flags.admissible);
        assert!(!flags.symmetric && !flags.transitive);
    }

    #[test]
    fn congruence_generation_on_unary3() {
        let alg = unary3();
        // (1,2) generates the congruence with blocks {0}, {1,2}.
        let small = generated_relation(&alg, &[(1, 2)], Sort::Congruence, &budget()).unwrap();
        let expected = BinaryRelation::from_pairs(3, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(small.relation, expected);
        // (0,1) propagates through g and transitivity to the full relation.
        let big = generated_relation(&alg, &[(0, 1)], Sort::Congruence, &budget()).unwrap();
        assert_eq!(big.relation, BinaryRelation::full(3));
    }

    #[test]
    fn derivation_log_references_only_earlier_pairs() {
        let alg = median2();
        let gen = generated_relation(&alg, &[(0, 1)], Sort::Tolerance, &budget()).unwrap();
        for (pos, (pair, derivation)) in gen.log.entries().iter().enumerate() {
            assert_eq!(gen.log.position_of(*pair), Some(pos));
            let earlier = |p: (El, El)| gen.log.position_of(p).is_some_and(|q| q < pos);
            match derivation {
                Derivation::Seed | Derivation::Diagonal => {}
                Derivation::Symmetry { of } => assert!(earlier(*of)),
                Derivation::Transitivity { left, right } => {
                    assert!(earlier(*left) && earlier(*right))
                }
                Derivation::Op { args, .. } => assert!(args.iter().all(|&p| earlier(p))),
            }
        }
    }

    #[test]
    fn tolerance_generation_is_symmetric_but_need_not_be_transitive() {
        let alg = unary3();
        let gen = generated_relation(&alg, &[(0, 1)], Sort::Tolerance, &budget()).unwrap();
        assert!(gen.relation.is_symmetric());
        assert!(gen.relation.is_admissible(&alg, &budget()).unwrap());
        assert!(!gen.relation.is_transitive());
    }

    #[test]
    fn congruences_of_unary3_are_exactly_three_and_permute() {
        let alg = unary3();
        let congs = enumerate_relations(&alg, Sort::Congruence, &budget(), 1000).unwrap();
        assert_eq!(congs.len(), 3);
        assert_eq!(congs[0], BinaryRelation::diagonal(3));
        assert_eq!(congs[1], BinaryRelation::full(3));
        assert_eq!(
            congs[2],
            BinaryRelation::from_pairs(3, &[(1, 2), (2, 1)]).unwrap()
        );
        for a in &congs {
            for b in &congs {
                assert_eq!(a.compose(b).unwrap(), b.compose(a).unwrap());
            }
        }
    }

    /// Naive oracle: filter all reflexive bit matrices for the sort axioms.
    fn oracle_relations(alg: &FiniteAlgebra, sort: Sort) -> Vec<BinaryRelation> {
        let n = alg.size();
        let cells: Vec<(El, El)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b)
            .collect();
        let mut out = Vec::new();
        for mask in 0u32..1 << cells.len() {
            let pairs: Vec<(El, El)> = cells
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let rel = BinaryRelation::from_pairs(n, &pairs).unwrap();
            let ok = match sort {
                Sort::Admissible => rel.is_admissible(alg, &budget()).unwrap(),
                Sort::Tolerance => {
                    rel.is_symmetric() && rel.is_admissible(alg, &budget()).unwrap()
                }
                Sort::Congruence => {
                    rel.is_symmetric()
                        && rel.is_transitive()
                        && rel.is_admissible(alg, &budget()).unwrap()
                }
            };
            if ok {
                out.push(rel);
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_the_naive_oracle_on_unary3() {
        let alg = unary3();
        for sort in [Sort::Admissible, Sort::Tolerance, Sort::Congruence] {
            let fast = enumerate_relations(&alg, sort, &budget(), 100_000).unwrap();
            let slow = oracle_relations(&alg, sort);
            let mut fast_keys: Vec<Vec<(El, El)>> = fast.iter().map(|r| r.pairs()).collect();
            let mut slow_keys: Vec<Vec<(El, El)>> = slow.iter().map(|r| r.pairs()).collect();
            fast_keys.sort();
            slow_keys.sort();
            assert_eq!(fast_keys, slow_keys, "sort {sort:?}");
        }
    }

    #[test]
    fn generated_relation_is_least_in_its_sort() {
        let alg = unary3();
        for sort in [Sort::Admissible, Sort::Tolerance, Sort::Congruence] {
            let all = oracle_relations(&alg, sort);
            for seeds in [vec![(0usize, 1usize)], vec![(2, 0)], vec![(0, 1), (2, 1)]] {
                let gen = generated_relation(&alg, &seeds, sort, &budget()).unwrap();
                // Contains the seeds and is one of the oracle relations.
                assert!(seeds.iter().all(|&(a, b)| gen.relation.contains(a, b)));
                assert!(all.iter().any(|r| *r == gen.relation));
                // Least: included in every sort relation containing the seeds.
                for r in &all {
                    if seeds.iter().all(|&(a, b)| r.contains(a, b)) {
                        assert!(gen.relation.is_subset_of(r).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_limit_is_a_clean_error() {
        let alg = unary3();
        let err = enumerate_relations(&alg, Sort::Admissible, &budget(), 2).unwrap_err();
        assert!(matches!(err, RelError::TooManyRelations { limit: 2 }));
    }

    #[test]
    fn preorder_lattice_on_unary3_is_consistent() {
        let alg = unary3();
        let lat = preorder_lattice(&alg, &budget(), 100_000).unwrap();
        assert!(!lat.relations.is_empty());
        // Every member is a reflexive transitive admissible relation.
        for r in &lat.relations {
            assert!(r.is_reflexive());
            assert!(r.is_transitive());
            assert!(r.is_admissible(&alg, &budget()).unwrap());
        }
        // The diagonal and the full relation are members.
        assert!(lat.relations.contains(&BinaryRelation::diagonal(3)));
        assert!(lat.relations.contains(&BinaryRelation::full(3)));
    }

    #[test]
    fn flags_propagate_conservatively() {
        let alg = unary3();
        let cong = generated_relation(&alg, &[(1, 2)], Sort::Congruence, &budget())
            .unwrap()
            .relation;
        assert!(cong.flags.reflexive && cong.flags.admissible);
        assert!(cong.flags.symmetric && cong.flags.transitive);
        let composed = cong.compose(&cong).unwrap();
        assert!(composed.flags.reflexive && composed.flags.admissible);
        assert!(!composed.flags.symmetric && !composed.flags.transitive);
        let met = cong.meet(&cong).unwrap();
        assert!(met.flags.symmetric && met.flags.transitive);
        let union = cong.union_raw(&cong).unwrap();
        assert!(union.flags.reflexive && union.flags.symmetric);
        assert!(!union.flags.admissible);
    }
}
