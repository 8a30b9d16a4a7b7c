//! Finite algebras: operation tables, terms, equations, generated
//! subuniverses, and free algebras of finite rank.
//!
//! An algebra is a finite universe `{0, .., size-1}` together with total
//! operations given by flat tables indexed with the **last argument varying
//! fastest**: the table entry for arguments `(a_1, .., a_r)` sits at index
//! `((a_1 * n + a_2) * n + a_3) * n + ..`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// An element of a finite universe, always in `0..size`.
pub type El = usize;

/// Errors raised by algebra construction, evaluation and closure.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("algebra must have at least one element")]
    EmptyUniverse,
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("operation `{symbol}` expects a table of length {expected}, got {actual}")]
    BadTableLength {
        symbol: String,
        expected: usize,
        actual: usize,
    },
    #[error("operation `{symbol}` has table entry {value}, outside the universe 0..{size}")]
    TableEntryOutOfRange {
        symbol: String,
        value: usize,
        size: usize,
    },
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("operation `{symbol}` applied to {actual} arguments, expects {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        actual: usize,
    },
    #[error("element {element} is outside the universe 0..{size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("substitution supplies {supplied} terms but variable x{index} occurs")]
    SubstitutionTooShort { supplied: usize, index: usize },
    #[error("closure over vectors supports universes of at most 256 elements, got {size}")]
    UniverseTooWide { size: usize },
    #[error(
        "free algebra of rank {rank} over {size} elements needs tuples of length {tuple_len}, \
         over the element budget {max_elements}"
    )]
    RankTooLarge {
        rank: usize,
        size: usize,
        tuple_len: u128,
        max_elements: usize,
    },
    #[error("closure exceeded its element budget of {max_elements} elements")]
    ElementBudgetExceeded { max_elements: usize },
    #[error("closure exceeded its work budget of {max_applications} operation applications")]
    WorkBudgetExceeded { max_applications: u64 },
    #[error("closure is incomplete; {0} requires a completed closure")]
    ClosureIncomplete(&'static str),
}

/// Resource limits for closure computations.
///
/// `max_elements` bounds how many distinct elements a closure may collect
/// (and, for free algebras, how long the ambient tuples may be);
/// `max_applications` bounds the number of operation applications performed.
/// Exceeding either limit is a clean error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureBudget {
    pub max_elements: usize,
    pub max_applications: u64,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget {
            max_elements: 1 << 20,
            max_applications: 100_000_000,
        }
    }
}

/// A finitary operation on a finite universe, stored as a flat table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    symbol: String,
    arity: usize,
    table: Vec<El>,
    symmetric: bool,
}

impl Operation {
    /// Builds an operation over a universe of `size` elements, validating
    /// the table length (`size^arity`) and the range of every entry.
    pub fn new(
        symbol: impl Into<String>,
        arity: usize,
        size: usize,
        table: Vec<El>,
    ) -> Result<Operation, AlgebraError> {
        let symbol = symbol.into();
        let expected = size.checked_pow(arity as u32).ok_or_else(|| {
            AlgebraError::BadTableLength {
                symbol: symbol.clone(),
                expected: usize::MAX,
                actual: table.len(),
            }
        })?;
        if table.len() != expected {
            return Err(AlgebraError::BadTableLength {
                symbol,
                expected,
                actual: table.len(),
            });
        }
        if let Some(&value) = table.iter().find(|&&v| v >= size) {
            return Err(AlgebraError::TableEntryOutOfRange {
                symbol,
                value,
                size,
            });
        }
        let symmetric = table_is_symmetric(arity, size, &table);
        Ok(Operation {
            symbol,
            arity,
            table,
            symmetric,
        })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[El] {
        &self.table
    }

    /// True when the table is invariant under every permutation of the
    /// arguments. Closure computations exploit this to enumerate only
    /// sorted argument tuples.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Applies the operation; `args` must already be in range.
    pub fn apply(&self, size: usize, args: &[El]) -> El {
        debug_assert_eq!(args.len(), self.arity);
        let mut idx = 0usize;
        for &a in args {
            debug_assert!(a < size);
            idx = idx * size + a;
        }
        self.table[idx]
    }
}

/// A table is symmetric iff it is invariant under adjacent transpositions.
fn table_is_symmetric(arity: usize, size: usize, table: &[El]) -> bool {
    if arity < 2 {
        return true;
    }
    let mut args = vec![0usize; arity];
    loop {
        let idx = flatten(size, &args);
        for p in 0..arity - 1 {
            args.swap(p, p + 1);
            let swapped = flatten(size, &args);
            args.swap(p, p + 1);
            if table[idx] != table[swapped] {
                return false;
            }
        }
        if !advance(&mut args, size) {
            return true;
        }
    }
}

fn flatten(size: usize, args: &[usize]) -> usize {
    let mut idx = 0usize;
    for &a in args {
        idx = idx * size + a;
    }
    idx
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

/// A finite algebra: a universe `{0, .., size-1}` and a list of operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    ops: Vec<Operation>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        size: usize,
        ops: Vec<Operation>,
    ) -> Result<FiniteAlgebra, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyUniverse);
        }
        for (i, op) in ops.iter().enumerate() {
            if ops[..i].iter().any(|o| o.symbol == op.symbol) {
                return Err(AlgebraError::DuplicateSymbol(op.symbol.clone()));
            }
            if op.table.len() != size.pow(op.arity as u32) {
                return Err(AlgebraError::BadTableLength {
                    symbol: op.symbol.clone(),
                    expected: size.pow(op.arity as u32),
                    actual: op.table.len(),
                });
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            size,
            ops,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op(&self, symbol: &str) -> Option<&Operation> {
        self.ops.iter().find(|o| o.symbol == symbol)
    }

    /// Returns the same algebra with its operations listed in a different
    /// order. Useful for order-independence tests.
    pub fn with_op_order(&self, order: &[usize]) -> FiniteAlgebra {
        let ops = order.iter().map(|&i| self.ops[i].clone()).collect();
        FiniteAlgebra {
            name: self.name.clone(),
            size: self.size,
            ops,
        }
    }
}

/// A term over an algebra's signature (plus, possibly, extra symbols):
/// a variable `x{i}` or an application of a symbol to argument terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    /// Largest variable index occurring in the term, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    /// Number of variable slots the term needs: `max_var + 1`.
    pub fn var_count(&self) -> usize {
        self.max_var().map_or(0, |m| m + 1)
    }

    /// Replaces variable `x{i}` by `subs[i]` everywhere.
    pub fn substitute(&self, subs: &[Term]) -> Result<Term, AlgebraError> {
        match self {
            Term::Var(i) => subs.get(*i).cloned().ok_or(AlgebraError::SubstitutionTooShort {
                supplied: subs.len(),
                index: *i,
            }),
            Term::App(symbol, args) => {
                let args = args
                    .iter()
                    .map(|a| a.substitute(subs))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::App(symbol.clone(), args))
            }
        }
    }

    /// Number of nodes, a rough size measure for reporting.
    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::node_count).sum::<usize>(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => match i {
                0 => write!(f, "x"),
                1 => write!(f, "y"),
                2 => write!(f, "z"),
                _ => write!(f, "x{i}"),
            },
            Term::App(symbol, args) => {
                write!(f, "{symbol}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Extra operation interpretations, used to evaluate terms that mention
/// symbols not present in the algebra (term-search unknowns). Tables use
/// the same last-argument-fastest layout as [`Operation`].
#[derive(Debug, Clone, Default)]
pub struct ExtraOps<'a> {
    pub ops: Vec<(String, usize, &'a [El])>,
}

impl<'a> ExtraOps<'a> {
    pub fn new() -> Self {
        ExtraOps { ops: Vec::new() }
    }

    pub fn push(&mut self, symbol: impl Into<String>, arity: usize, table: &'a [El]) {
        self.ops.push((symbol.into(), arity, table));
    }

    fn lookup(&self, symbol: &str) -> Option<(usize, &'a [El])> {
        self.ops
            .iter()
            .find(|(s, _, _)| s == symbol)
            .map(|&(_, arity, table)| (arity, table))
    }
}

/// Evaluates `term` in `alg` under the assignment `env` (variable `x{i}`
/// takes the value `env[i]`).
pub fn eval_term(alg: &FiniteAlgebra, term: &Term, env: &[El]) -> Result<El, AlgebraError> {
    eval_term_ext(alg, term, env, None)
}

/// Like [`eval_term`], but additional symbols may be supplied by `extra`.
/// Extra tables shadow algebra operations of the same name, so a search
/// unknown keeps its meaning even when a basic operation shares its symbol.
pub fn eval_term_ext(
    alg: &FiniteAlgebra,
    term: &Term,
    env: &[El],
    extra: Option<&ExtraOps<'_>>,
) -> Result<El, AlgebraError> {
    match term {
        Term::Var(i) => {
            let &value = env.get(*i).ok_or(AlgebraError::SubstitutionTooShort {
                supplied: env.len(),
                index: *i,
            })?;
            if value >= alg.size {
                return Err(AlgebraError::ElementOutOfRange {
                    element: value,
                    size: alg.size,
                });
            }
            Ok(value)
        }
        Term::App(symbol, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term_ext(alg, a, env, extra))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some((arity, table)) = extra.and_then(|e| e.lookup(symbol)) {
                if arity != vals.len() {
                    return Err(AlgebraError::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: arity,
                        actual: vals.len(),
                    });
                }
                Ok(table[flatten(alg.size, &vals)])
            } else if let Some(op) = alg.op(symbol) {
                if op.arity != vals.len() {
                    return Err(AlgebraError::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: op.arity,
                        actual: vals.len(),
                    });
                }
                Ok(op.apply(alg.size, &vals))
            } else {
                Err(AlgebraError::UnknownSymbol(symbol.clone()))
            }
        }
    }
}

/// Decides whether `lhs = rhs` holds under **every** assignment of the
/// variables, by exhaustive enumeration. For an algebra generating a
/// variety this decides validity of the equation throughout the variety.
pub fn equation_holds(
    alg: &FiniteAlgebra,
    lhs: &Term,
    rhs: &Term,
) -> Result<bool, AlgebraError> {
    Ok(first_equation_failure_ext(alg, lhs, rhs, None)?.is_none())
}

/// [`equation_holds`] with extra operation interpretations.
pub fn equation_holds_ext(
    alg: &FiniteAlgebra,
    lhs: &Term,
    rhs: &Term,
    extra: Option<&ExtraOps<'_>>,
) -> Result<bool, AlgebraError> {
    Ok(first_equation_failure_ext(alg, lhs, rhs, extra)?.is_none())
}

/// First assignment (odometer order, last variable fastest) violating
/// `lhs = rhs`, or `None` when the equation holds identically.
pub fn first_equation_failure_ext(
    alg: &FiniteAlgebra,
    lhs: &Term,
    rhs: &Term,
    extra: Option<&ExtraOps<'_>>,
) -> Result<Option<Vec<El>>, AlgebraError> {
    let nvars = lhs.var_count().max(rhs.var_count());
    let mut env = vec![0usize; nvars];
    loop {
        if eval_term_ext(alg, lhs, &env, extra)? != eval_term_ext(alg, rhs, &env, extra)? {
            return Ok(Some(env));
        }
        if nvars == 0 || !advance(&mut env, alg.size) {
            return Ok(None);
        }
    }
}

/// How an element of a closure came to be: a generating seed, a nullary
/// constant, or an operation applied to earlier elements.
#[derive(Debug, Clone)]
enum Provenance {
    Seed(Term),
    Derived { op: usize, args: Vec<usize> },
}

/// Whether a closure visitor wants to keep going.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
}

/// The result of a closure run over fixed-width vectors.
#[derive(Debug, Clone)]
pub struct ClosureRun {
    elements: Vec<Vec<u8>>,
    provenance: Vec<Provenance>,
    complete: bool,
    applications: u64,
}

impl ClosureRun {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, idx: usize) -> &[u8] {
        &self.elements[idx]
    }

    pub fn elements(&self) -> &[Vec<u8>] {
        &self.elements
    }

    /// True when the closure reached a fixpoint (no visitor stop).
    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn applications(&self) -> u64 {
        self.applications
    }

    /// Reconstructs a witness term for element `idx` over the generators:
    /// seeds carry their own terms, derived elements expand recursively.
    pub fn witness_term(&self, alg: &FiniteAlgebra, idx: usize) -> Term {
        let mut memo: HashMap<usize, Term> = HashMap::new();
        self.witness_memo(alg, idx, &mut memo)
    }

    fn witness_memo(&self, alg: &FiniteAlgebra, idx: usize, memo: &mut HashMap<usize, Term>) -> Term {
        if let Some(t) = memo.get(&idx) {
            return t.clone();
        }
        let term = match &self.provenance[idx] {
            Provenance::Seed(t) => t.clone(),
            Provenance::Derived { op, args } => {
                let children = args
                    .iter()
                    .map(|&a| self.witness_memo(alg, a, memo))
                    .collect();
                Term::App(alg.ops[*op].symbol.clone(), children)
            }
        };
        memo.insert(idx, term.clone());
        term
    }
}

/// Closes a seed set of width-`width` vectors under the componentwise
/// action of the algebra's operations. Deterministic: seeds in the given
/// order, then rounds over operations in declaration order, argument
/// tuples in odometer order (sorted tuples only for symmetric tables),
/// keeping the first derivation of each element.
///
/// `visit` is called once per new element in discovery order and may stop
/// the run early, which yields `complete() == false`.
pub(crate) fn close_vectors<F>(
    alg: &FiniteAlgebra,
    width: usize,
    seeds: &[(Vec<u8>, Term)],
    budget: &ClosureBudget,
    mut visit: F,
) -> Result<ClosureRun, AlgebraError>
where
    F: FnMut(usize, &[u8]) -> Visit,
{
    if alg.size > 256 {
        return Err(AlgebraError::UniverseTooWide { size: alg.size });
    }
    let n = alg.size;
    let mut elements: Vec<Vec<u8>> = Vec::new();
    let mut provenance: Vec<Provenance> = Vec::new();
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut applications: u64 = 0;
    let mut stopped = false;

    macro_rules! add {
        ($tuple:expr, $prov:expr) => {{
            let tuple: Vec<u8> = $tuple;
            if !index.contains_key(&tuple) {
                if elements.len() >= budget.max_elements {
                    return Err(AlgebraError::ElementBudgetExceeded {
                        max_elements: budget.max_elements,
                    });
                }
                let idx = elements.len();
                index.insert(tuple.clone(), idx);
                elements.push(tuple);
                provenance.push($prov);
                if let Visit::Stop = visit(idx, &elements[idx]) {
                    stopped = true;
                }
            }
        }};
    }

    for (tuple, witness) in seeds {
        debug_assert_eq!(tuple.len(), width);
        add!(tuple.clone(), Provenance::Seed(witness.clone()));
        if stopped {
            break;
        }
    }

    // Nullary operations contribute their constant immediately.
    for (op_i, op) in alg.ops.iter().enumerate() {
        if stopped {
            break;
        }
        if op.arity == 0 {
            let c = op.table[0] as u8;
            add!(vec![c; width], Provenance::Derived { op: op_i, args: vec![] });
        }
    }

    let mut processed = 0usize;
    while !stopped {
        let cur = elements.len();
        if processed == cur {
            break;
        }
        'ops: for (op_i, op) in alg.ops.iter().enumerate() {
            let r = op.arity;
            if r == 0 {
                continue;
            }
            let mut idxs = vec![0usize; r];
            loop {
                let fresh = idxs.iter().copied().max().unwrap_or(0) >= processed;
                if fresh {
                    applications += 1;
                    if applications > budget.max_applications {
                        return Err(AlgebraError::WorkBudgetExceeded {
                            max_applications: budget.max_applications,
                        });
                    }
                    let out = {
                        let mut out = vec![0u8; width];
                        for (w, slot) in out.iter_mut().enumerate() {
                            let mut ti = 0usize;
                            for &i in &idxs {
                                ti = ti * n + elements[i][w] as usize;
                            }
                            *slot = op.table[ti] as u8;
                        }
                        out
                    };
                    add!(out, Provenance::Derived { op: op_i, args: idxs.clone() });
                    if stopped {
                        break 'ops;
                    }
                }
                let more = if op.symmetric {
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

    Ok(ClosureRun {
        elements,
        provenance,
        complete: !stopped,
        applications,
    })
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

/// The subuniverse generated by a set of elements, with witness terms over
/// the generators (`x{i}` denotes the `i`-th generator).
#[derive(Debug, Clone)]
pub struct Subuniverse {
    run: ClosureRun,
}

impl Subuniverse {
    /// Elements in discovery order (generators first).
    pub fn elements(&self) -> Vec<El> {
        self.run.elements.iter().map(|t| t[0] as El).collect()
    }

    pub fn len(&self) -> usize {
        self.run.len()
    }

    pub fn is_empty(&self) -> bool {
        self.run.is_empty()
    }

    pub fn contains(&self, e: El) -> bool {
        self.run.elements.iter().any(|t| t[0] as El == e)
    }

    /// Term over the generators producing the `idx`-th discovered element.
    pub fn witness_term(&self, alg: &FiniteAlgebra, idx: usize) -> Term {
        self.run.witness_term(alg, idx)
    }
}

/// Closes `generators` under the operations of `alg`.
pub fn subuniverse_closure(
    alg: &FiniteAlgebra,
    generators: &[El],
    budget: &ClosureBudget,
) -> Result<Subuniverse, AlgebraError> {
    for &g in generators {
        if g >= alg.size {
            return Err(AlgebraError::ElementOutOfRange {
                element: g,
                size: alg.size,
            });
        }
    }
    let seeds: Vec<(Vec<u8>, Term)> = generators
        .iter()
        .enumerate()
        .map(|(i, &g)| (vec![g as u8], Term::Var(i)))
        .collect();
    let run = close_vectors(alg, 1, &seeds, budget, |_, _| Visit::Continue)?;
    Ok(Subuniverse { run })
}

/// The free algebra of rank `k` in the variety generated by a finite
/// algebra, realised concretely: elements are the term functions
/// `{0,..,n-1}^k -> {0,..,n-1}` stored as value tuples over all `n^k`
/// assignments (assignments enumerated with the last variable fastest),
/// generated from the `k` projections.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    rank: usize,
    base_size: usize,
    run: ClosureRun,
    index: HashMap<Vec<u8>, usize>,
    generators: Vec<usize>,
}

impl FreeAlgebra {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.run.len()
    }

    pub fn is_empty(&self) -> bool {
        self.run.is_empty()
    }

    /// True when the closure ran to a fixpoint; lazily stopped scans leave
    /// this false and then only a prefix of the universe is present.
    pub fn complete(&self) -> bool {
        self.run.complete()
    }

    pub fn applications(&self) -> u64 {
        self.run.applications()
    }

    /// Value tuple of the `idx`-th element over all assignments.
    pub fn tuple(&self, idx: usize) -> &[u8] {
        self.run.element(idx)
    }

    pub fn index_of(&self, tuple: &[u8]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Indices of the generator projections (in variable order).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Witness term over the rank variables for the `idx`-th element.
    pub fn witness_term(&self, alg: &FiniteAlgebra, idx: usize) -> Term {
        self.run.witness_term(alg, idx)
    }

    /// Evaluates a term (over at most `rank` variables) into the free
    /// algebra by pointwise evaluation; `None` when the resulting function
    /// was not discovered (possible only for incomplete scans).
    pub fn realize(&self, alg: &FiniteAlgebra, term: &Term) -> Result<Option<usize>, AlgebraError> {
        let tuple = self.eval_tuple(alg, term)?;
        Ok(self.index_of(&tuple))
    }

    /// Pointwise evaluation of a term into a raw value tuple.
    pub fn eval_tuple(&self, alg: &FiniteAlgebra, term: &Term) -> Result<Vec<u8>, AlgebraError> {
        let n = self.base_size;
        let width = self.run.element(0).len();
        let mut out = vec![0u8; width];
        let mut env = vec![0usize; self.rank];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut a = j;
            for p in (0..self.rank).rev() {
                env[p] = a % n;
                a /= n;
            }
            *slot = eval_term(alg, term, &env)? as u8;
        }
        Ok(out)
    }

    /// Materialises the free algebra as a [`FiniteAlgebra`] whose elements
    /// are the discovery indices. Requires a completed closure.
    pub fn to_algebra(
        &self,
        alg: &FiniteAlgebra,
        budget: &ClosureBudget,
    ) -> Result<FiniteAlgebra, AlgebraError> {
        if !self.complete() {
            return Err(AlgebraError::ClosureIncomplete("to_algebra"));
        }
        let m = self.len();
        let n = alg.size;
        let width = self.run.element(0).len();
        let mut applications: u64 = 0;
        let mut ops = Vec::with_capacity(alg.ops.len());
        for op in &alg.ops {
            let r = op.arity;
            let entries = m.checked_pow(r as u32).ok_or(AlgebraError::ElementBudgetExceeded {
                max_elements: budget.max_elements,
            })?;
            let mut table = Vec::with_capacity(entries);
            let mut idxs = vec![0usize; r];
            loop {
                applications += 1;
                if applications > budget.max_applications {
                    return Err(AlgebraError::WorkBudgetExceeded {
                        max_applications: budget.max_applications,
                    });
                }
                let mut out = vec![0u8; width];
                for (w, slot) in out.iter_mut().enumerate() {
                    let mut ti = 0usize;
                    for &i in &idxs {
                        ti = ti * n + self.run.element(i)[w] as usize;
                    }
                    *slot = op.table[ti] as u8;
                }
                let target = self
                    .index_of(&out)
                    .ok_or(AlgebraError::ClosureIncomplete("to_algebra"))?;
                table.push(target);
                if r == 0 || !advance(&mut idxs, m) {
                    break;
                }
            }
            ops.push(Operation::new(op.symbol.clone(), r, m, table)?);
        }
        FiniteAlgebra::new(format!("free({},{})", alg.name, self.rank), m, ops)
    }
}

/// Builds the full free algebra of rank `k` (see [`FreeAlgebra`]).
pub fn free_algebra(
    alg: &FiniteAlgebra,
    rank: usize,
    budget: &ClosureBudget,
) -> Result<FreeAlgebra, AlgebraError> {
    free_algebra_scan(alg, rank, budget, |_, _| Visit::Continue)
}

/// Builds the free algebra of rank `k`, calling `visit` on each element in
/// discovery order. Stopping early returns the partial prefix with
/// `complete() == false`; term searches use this to stop at the first hit.
pub fn free_algebra_scan<F>(
    alg: &FiniteAlgebra,
    rank: usize,
    budget: &ClosureBudget,
    visit: F,
) -> Result<FreeAlgebra, AlgebraError>
where
    F: FnMut(usize, &[u8]) -> Visit,
{
    let n = alg.size;
    let tuple_len = (n as u128)
        .checked_pow(rank as u32)
        .unwrap_or(u128::MAX);
    if tuple_len > budget.max_elements as u128 {
        return Err(AlgebraError::RankTooLarge {
            rank,
            size: n,
            tuple_len,
            max_elements: budget.max_elements,
        });
    }
    let width = tuple_len as usize;
    let mut seeds = Vec::with_capacity(rank);
    for p in 0..rank {
        let mut tuple = vec![0u8; width];
        for (j, slot) in tuple.iter_mut().enumerate() {
            let mut a = j;
            let mut digit = 0usize;
            for q in (0..rank).rev() {
                let v = a % n;
                a /= n;
                if q == p {
                    digit = v;
                }
            }
            *slot = digit as u8;
        }
        seeds.push((tuple, Term::Var(p)));
    }
    let run = close_vectors(alg, width, &seeds, budget, visit)?;
    let mut index = HashMap::with_capacity(run.len());
    for (i, t) in run.elements().iter().enumerate() {
        index.insert(t.clone(), i);
    }
    let generators = seeds
        .iter()
        .map(|(t, _)| index[t])
        .collect();
    Ok(FreeAlgebra {
        rank,
        base_size: n,
        run,
        index,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-element algebra with the single binary operation `i(x,y) = x & !y`.
    fn impl2() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "impl2",
            2,
            vec![Operation::new("i", 2, 2, vec![0, 0, 1, 0]).unwrap()],
        )
        .unwrap()
    }

    /// Two-element algebra with the ternary majority operation.
    fn median2() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "median2",
            2,
            vec![Operation::new("m", 3, 2, vec![0, 0, 0, 1, 0, 1, 1, 1]).unwrap()],
        )
        .unwrap()
    }

    /// Three-element mono-unary algebra, g = [1, 2, 2].
    fn unary3() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "unary3",
            3,
            vec![Operation::new("g", 1, 3, vec![1, 2, 2]).unwrap()],
        )
        .unwrap()
    }

    fn j1() -> Term {
        // x * (y + z) written with i alone: i(x, i(i(x, i(y,z)), z))
        Term::app(
            "i",
            vec![
                Term::var(0),
                Term::app(
                    "i",
                    vec![
                        Term::app(
                            "i",
                            vec![Term::var(0), Term::app("i", vec![Term::var(1), Term::var(2)])],
                        ),
                        Term::var(2),
                    ],
                ),
            ],
        )
    }

    fn j2() -> Term {
        // z * (!y + x) = i(z, i(y, x))
        Term::app(
            "i",
            vec![Term::var(2), Term::app("i", vec![Term::var(1), Term::var(0)])],
        )
    }

    #[test]
    fn operation_validation_rejects_bad_tables() {
        assert!(matches!(
            Operation::new("f", 2, 2, vec![0, 1, 0]),
            Err(AlgebraError::BadTableLength { .. })
        ));
        assert!(matches!(
            Operation::new("f", 1, 2, vec![0, 2]),
            Err(AlgebraError::TableEntryOutOfRange { .. })
        ));
    }

    #[test]
    fn op_table_last_argument_varies_fastest() {
        let alg = impl2();
        let i = alg.op("i").unwrap();
        // i(x,y) = x & !y: rows (0,0),(0,1),(1,0),(1,1) -> 0,0,1,0
        assert_eq!(i.apply(2, &[0, 0]), 0);
        assert_eq!(i.apply(2, &[0, 1]), 0);
        assert_eq!(i.apply(2, &[1, 0]), 1);
        assert_eq!(i.apply(2, &[1, 1]), 0);
    }

    #[test]
    fn symmetric_table_detection() {
        let alg = impl2();
        assert!(!alg.op("i").unwrap().is_symmetric());
        let m = median2();
        assert!(m.op("m").unwrap().is_symmetric());
    }

    #[test]
    fn term_evaluation_and_display() {
        let alg = impl2();
        let t = Term::app("i", vec![Term::var(0), Term::app("i", vec![Term::var(1), Term::var(2)])]);
        // x * (!y + z) at (1,1,0): i(1, i(1,0)) = i(1,1) = 0
        assert_eq!(eval_term(&alg, &t, &[1, 1, 0]).unwrap(), 0);
        // at (1,0,0): i(1, i(0,0)) = i(1,0) = 1
        assert_eq!(eval_term(&alg, &t, &[1, 0, 0]).unwrap(), 1);
        assert_eq!(t.to_string(), "i(x,i(y,z))");
    }

    #[test]
    fn jonsson_pair_equations_hold_on_impl2() {
        let alg = impl2();
        let (j1, j2) = (j1(), j2());
        let x = Term::var(0);
        let z = Term::var(2);
        // x = j1(x,x,z)
        let lhs = j1.substitute(&[x.clone(), x.clone(), z.clone()]).unwrap();
        assert!(equation_holds(&alg, &x, &lhs).unwrap());
        // j1(x,z,z) = j2(x,z,z)
        let l = j1.substitute(&[x.clone(), z.clone(), z.clone()]).unwrap();
        let r = j2.substitute(&[x.clone(), z.clone(), z.clone()]).unwrap();
        assert!(equation_holds(&alg, &l, &r).unwrap());
        // j2(x,x,z) = z
        let l = j2.substitute(&[x.clone(), x.clone(), z.clone()]).unwrap();
        assert!(equation_holds(&alg, &l, &z).unwrap());
        // x = j1(x,y,x)
        let l = j1.substitute(&[x.clone(), Term::var(1), x.clone()]).unwrap();
        assert!(equation_holds(&alg, &x, &l).unwrap());
        // j2(x,y,x) = x
        let l = j2.substitute(&[x.clone(), Term::var(1), x.clone()]).unwrap();
        assert!(equation_holds(&alg, &l, &x).unwrap());
    }

    #[test]
    fn equation_failure_reports_first_assignment() {
        let alg = impl2();
        // x = y fails first at (0,1) in odometer order.
        let fail = first_equation_failure_ext(&alg, &Term::var(0), &Term::var(1), None)
            .unwrap()
            .unwrap();
        assert_eq!(fail, vec![0, 1]);
    }

    #[test]
    fn subuniverse_closure_collects_orbit_with_witnesses() {
        let alg = unary3();
        let sub = subuniverse_closure(&alg, &[0], &ClosureBudget::default()).unwrap();
        assert_eq!(sub.elements(), vec![0, 1, 2]);
        assert_eq!(sub.witness_term(&alg, 0), Term::var(0));
        assert_eq!(sub.witness_term(&alg, 1), Term::app("g", vec![Term::var(0)]));
        assert_eq!(
            sub.witness_term(&alg, 2),
            Term::app("g", vec![Term::app("g", vec![Term::var(0)])])
        );
    }

    /// Independent oracle for the free algebra sizes over impl2: term
    /// functions there are exactly the functions lying below a projection,
    /// counted by inclusion-exclusion over which projections dominate.
    fn below_projection_count(k: u32) -> u128 {
        let mut total: i128 = 0;
        let mut binom: i128 = 1;
        for j in 1..=k {
            binom = binom * (k as i128 - j as i128 + 1) / j as i128;
            let rows = 1u32 << (k - j);
            let count = 1i128 << rows.min(100);
            let sign = if j % 2 == 1 { 1 } else { -1 };
            total += sign * binom * count;
        }
        total as u128
    }

    #[test]
    fn free_algebra_rank1_over_impl2() {
        let alg = impl2();
        let f = free_algebra(&alg, 1, &ClosureBudget::default()).unwrap();
        assert!(f.complete());
        assert_eq!(f.len(), 2);
        // Discovery order: the generator x = (0,1), then i(x,x) = (0,0).
        assert_eq!(f.tuple(0), &[0, 1]);
        assert_eq!(f.tuple(1), &[0, 0]);
        assert_eq!(
            f.witness_term(&alg, 1),
            Term::app("i", vec![Term::var(0), Term::var(0)])
        );
    }

    #[test]
    fn free_algebra_sizes_over_impl2_match_projection_oracle() {
        let alg = impl2();
        for k in 1..=4usize {
            let f = free_algebra(&alg, k, &ClosureBudget::default()).unwrap();
            assert!(f.complete());
            assert_eq!(
                f.len() as u128,
                below_projection_count(k as u32),
                "free algebra of rank {k}"
            );
        }
        // Frozen values: 2, 6, 38, 942.
        assert_eq!(below_projection_count(1), 2);
        assert_eq!(below_projection_count(2), 6);
        assert_eq!(below_projection_count(3), 38);
        assert_eq!(below_projection_count(4), 942);
    }

    #[test]
    fn free_algebra_rank3_over_median_is_four_elements() {
        let alg = median2();
        let f = free_algebra(&alg, 3, &ClosureBudget::default()).unwrap();
        assert_eq!(f.len(), 4);
        // x, y, z, and the median itself.
        assert_eq!(
            f.witness_term(&alg, 3),
            Term::app("m", vec![Term::var(0), Term::var(1), Term::var(2)])
        );
    }

    #[test]
    fn free_algebra_realize_agrees_with_equation_validity() {
        let alg = impl2();
        let f = free_algebra(&alg, 3, &ClosureBudget::default()).unwrap();
        let (j1, j2) = (j1(), j2());
        // j1(x,z,z) and j2(x,z,z) are the same term function.
        let z = Term::var(2);
        let l = j1.substitute(&[Term::var(0), z.clone(), z.clone()]).unwrap();
        let r = j2.substitute(&[Term::var(0), z.clone(), z.clone()]).unwrap();
        let li = f.realize(&alg, &l).unwrap().unwrap();
        let ri = f.realize(&alg, &r).unwrap().unwrap();
        assert_eq!(li, ri);
        // x and z are distinct term functions.
        let xi = f.realize(&alg, &Term::var(0)).unwrap().unwrap();
        let zi = f.realize(&alg, &Term::var(2)).unwrap().unwrap();
        assert_ne!(xi, zi);
    }

    #[test]
    fn rank_guard_refuses_oversized_tuples() {
        let alg = impl2();
        let err = free_algebra(&alg, 21, &ClosureBudget::default()).unwrap_err();
        assert!(matches!(err, AlgebraError::RankTooLarge { .. }));
    }

    #[test]
    fn work_budget_is_enforced() {
        let alg = impl2();
        let tight = ClosureBudget {
            max_elements: 1 << 20,
            max_applications: 50,
        };
        let err = free_algebra(&alg, 3, &tight).unwrap_err();
        assert!(matches!(err, AlgebraError::WorkBudgetExceeded { .. }));
    }

    #[test]
    fn element_budget_is_enforced() {
        let alg = impl2();
        let tight = ClosureBudget {
            max_elements: 10,
            max_applications: 100_000_000,
        };
        let err = free_algebra(&alg, 3, &tight).unwrap_err();
        assert!(matches!(err, AlgebraError::ElementBudgetExceeded { .. }));
    }

    #[test]
    fn lazy_scan_stops_early_and_reports_incomplete() {
        let alg = impl2();
        let mut seen = 0usize;
        let f = free_algebra_scan(&alg, 3, &ClosureBudget::default(), |idx, _| {
            seen += 1;
            if idx >= 4 {
                Visit::Stop
            } else {
                Visit::Continue
            }
        })
        .unwrap();
        assert!(!f.complete());
        assert_eq!(f.len(), 5);
        assert_eq!(seen, 5);
    }

    #[test]
    fn to_algebra_materialises_tables() {
        let alg = impl2();
        let f = free_algebra(&alg, 1, &ClosureBudget::default()).unwrap();
        let fa = f.to_algebra(&alg, &ClosureBudget::default()).unwrap();
        assert_eq!(fa.size(), 2);
        let i = fa.op("i").unwrap();
        // Element 0 is x, element 1 is the bottom constant function.
        // i(x, x) = bottom, i(x, bottom) = x, i(bottom, _) = bottom.
        assert_eq!(i.apply(2, &[0, 0]), 1);
        assert_eq!(i.apply(2, &[0, 1]), 0);
        assert_eq!(i.apply(2, &[1, 0]), 1);
        assert_eq!(i.apply(2, &[1, 1]), 1);
    }

    #[test]
    fn substitution_builds_directed_terms() {
        let j1 = j1();
        // d1 = j1(j1(x,y,z), y, z)
        let d1 = j1
            .substitute(&[j1.clone(), Term::var(1), Term::var(2)])
            .unwrap();
        assert!(d1.node_count() > j1.node_count());
        let alg = impl2();
        // x = d1(x,x,z)
        let l = d1
            .substitute(&[Term::var(0), Term::var(0), Term::var(2)])
            .unwrap();
        assert!(equation_holds(&alg, &Term::var(0), &l).unwrap());
    }

    #[test]
    fn op_reorder_preserves_generated_universe() {
        let alg = FiniteAlgebra::new(
            "two-ops",
            2,
            vec![
                Operation::new("i", 2, 2, vec![0, 0, 1, 0]).unwrap(),
                Operation::new("m", 3, 2, vec![0, 0, 0, 1, 0, 1, 1, 1]).unwrap(),
            ],
        )
        .unwrap();
        let reordered = alg.with_op_order(&[1, 0]);
        let f1 = free_algebra(&alg, 2, &ClosureBudget::default()).unwrap();
        let f2 = free_algebra(&reordered, 2, &ClosureBudget::default()).unwrap();
        assert_eq!(f1.len(), f2.len());
        let mut a: Vec<_> = f1.elements_sorted();
        let mut b: Vec<_> = f2.elements_sorted();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

#[cfg(test)]
impl FreeAlgebra {
    fn elements_sorted(&self) -> Vec<Vec<u8>> {
        self.run.elements().to_vec()
    }
}
