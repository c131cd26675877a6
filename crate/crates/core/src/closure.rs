//! Lie-bracket closure of a gate set's Hamiltonians.
//!
//! Starting from the gate generators, new frame elements are formed as
//! `i[E_J, E_K]` in breadth-first, older-pairs-first order and kept only
//! when they raise the real rank of the span. Every element records the
//! compound index it was derived from, rendered as e.g. `[[1 2] 3]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;

use crate::basis::{real_vec, QunitSpace};
use crate::error::{invalid, Error, Result};
use crate::gateset::GateSet;
use crate::linalg::{commutator_h, HermitianOperator};

pub const DEFAULT_MAX_DEPTH: usize = 8;
/// Rank threshold per unit of dimension, applied to unit-norm candidates.
pub const RANK_TOL: f64 = 1e-8;

/// Derivation tree of a frame element: a gate id or a nested commutator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CompoundIndex {
    Leaf(usize),
    Bracket(Box<CompoundIndex>, Box<CompoundIndex>),
}

impl CompoundIndex {
    pub fn bracket(left: CompoundIndex, right: CompoundIndex) -> Self {
        Self::Bracket(Box::new(left), Box::new(right))
    }

    /// Nesting depth; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Self::Leaf(_) => 0,
            Self::Bracket(j, k) => 1 + j.depth().max(k.depth()),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            Self::Leaf(k) => vec![*k],
            Self::Bracket(j, k) => {
                let mut v = j.leaves();
                v.extend(k.leaves());
                v
            }
        }
    }
}

impl fmt::Display for CompoundIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Leaf(k) => write!(f, "{k}"),
            Self::Bracket(j, k) => write!(f, "[{j} {k}]"),
        }
    }
}

impl FromStr for CompoundIndex {
    type Err = Error;

    /// Parses `index ::= integer | "[" index " " index "]"`.
    fn from_str(s: &str) -> Result<Self> {
        fn parse(b: &[u8], pos: &mut usize) -> Result<CompoundIndex> {
            match b.get(*pos) {
                Some(b'[') => {
                    *pos += 1;
                    let left = parse(b, pos)?;
                    if b.get(*pos) != Some(&b' ') {
                        return invalid(format!("expected ' ' at offset {pos}"));
                    }
                    *pos += 1;
                    let right = parse(b, pos)?;
                    if b.get(*pos) != Some(&b']') {
                        return invalid(format!("expected ']' at offset {pos}"));
                    }
                    *pos += 1;
                    Ok(CompoundIndex::bracket(left, right))
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = *pos;
                    while b.get(*pos).is_some_and(u8::is_ascii_digit) {
                        *pos += 1;
                    }
                    let text = std::str::from_utf8(&b[start..*pos]).expect("ascii digits");
                    text.parse().map(CompoundIndex::Leaf).map_err(|e| Error::InvalidInput(format!("bad gate index {text}: {e}")))
                }
                _ => invalid(format!("unexpected input at offset {pos}")),
            }
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let idx = parse(bytes, &mut pos)?;
        if pos != bytes.len() {
            return invalid(format!("trailing input at offset {pos}"));
        }
        Ok(idx)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketElement {
    pub index: CompoundIndex,
    pub value: HermitianOperator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitReason {
    MaxDepth,
    MaxElements,
}

impl LimitReason {
    pub fn code(&self) -> &'static str {
        match self {
            Self::MaxDepth => "max-depth",
            Self::MaxElements => "max-elements",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub space: QunitSpace,
    /// Rank-increasing selection in acceptance order.
    pub frame: Vec<BracketElement>,
    /// Real dimension of the span of the frame.
    pub algebra_dim: usize,
    /// Real dimension of the span of the traceless projections.
    pub traceless_dim: usize,
    pub universal: bool,
    pub stalled: bool,
    pub limit: Option<LimitReason>,
}

impl ClosureResult {
    pub fn values(&self) -> Vec<HermitianOperator> {
        self.frame.iter().map(|e| e.value.clone()).collect()
    }
}

/// Incremental orthonormal basis of a real span (Gram-Schmidt with one
/// reorthogonalization pass).
struct SpanTracker {
    basis: Vec<DVector<f64>>,
    tol: f64,
}

impl SpanTracker {
    fn new(tol: f64) -> Self {
        Self { basis: Vec::new(), tol }
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds `v` if its component outside the span, relative to `reference`, exceeds the threshold.
    fn try_insert(&mut self, mut v: DVector<f64>, reference: f64) -> bool {
        if reference <= 0.0 {
            return false;
        }
        v /= reference;
        for _ in 0..2 {
            for q in &self.basis {
                let proj = q.dot(&v);
                v.axpy(-proj, q, 1.0);
            }
        }
        let r = v.norm();
        if r > self.tol {
            self.basis.push(v / r);
            true
        } else {
            false
        }
    }
}

struct Closure {
    space: QunitSpace,
    frame: Vec<BracketElement>,
    full: SpanTracker,
    traceless: SpanTracker,
    all_traceless: bool,
    tol: f64,
}

impl Closure {
    fn offer(&mut self, index: CompoundIndex, value: HermitianOperator) -> bool {
        let norm = value.frobenius_norm();
        if !self.full.try_insert(real_vec(&value), norm) {
            return false;
        }
        let projected = value.traceless_part();
        self.traceless.try_insert(real_vec(&projected), norm);
        if value.trace().abs() / norm > self.tol {
            self.all_traceless = false;
        }
        self.frame.push(BracketElement { index, value });
        true
    }

    fn complete(&self) -> bool {
        let n2 = self.space.basis_len();
        self.full.rank() == n2 || (self.traceless.rank() == n2 - 1 && self.all_traceless)
    }
}

/// Breadth-first bracket closure.
///
/// Generators enter first (those raising the rank), then each round tries
/// every pair `(a, b)`, `a < b`, that involves an element added in the
/// previous round, in lexicographic order. Stops at full rank, when a round
/// adds nothing, or at the depth/element caps (`max_elements = None` means
/// `4 n^{2k}`). Hitting a cap is reported through `limit`, not as an error.
pub fn bracket_closure(
    generators: &[(usize, HermitianOperator)],
    space: QunitSpace,
    max_depth: usize,
    max_elements: Option<usize>,
) -> Result<ClosureResult> {
    if generators.is_empty() {
        return invalid("no generators");
    }
    if let Some((id, g)) = generators.iter().find(|(_, g)| g.dim() != space.dim()) {
        return invalid(format!("generator {id} has dim {}, space needs {}", g.dim(), space.dim()));
    }
    let max_elements = max_elements.unwrap_or(4 * space.basis_len());
    let tol = RANK_TOL * space.dim() as f64;
    let mut st = Closure {
        space,
        frame: Vec::new(),
        full: SpanTracker::new(tol),
        traceless: SpanTracker::new(tol),
        all_traceless: true,
        tol,
    };

    let mut limit = None;
    for (id, g) in generators {
        if st.frame.len() >= max_elements {
            limit = Some(LimitReason::MaxElements);
            break;
        }
        st.offer(CompoundIndex::Leaf(*id), g.clone());
    }

    let mut depth_skipped = false;
    let mut tried_upto = 0;
    'rounds: while limit.is_none() && !st.complete() {
        let m = st.frame.len();
        if m == tried_upto {
            break;
        }
        for a in 0..m {
            for b in (a + 1).max(tried_upto)..m {
                let depth = 1 + st.frame[a].index.depth().max(st.frame[b].index.depth());
                if depth > max_depth {
                    depth_skipped = true;
                    continue;
                }
                if st.frame.len() >= max_elements {
                    limit = Some(LimitReason::MaxElements);
                    break 'rounds;
                }
                let value = commutator_h(&st.frame[a].value, &st.frame[b].value)?;
                let index = CompoundIndex::bracket(st.frame[a].index.clone(), st.frame[b].index.clone());
                if st.offer(index, value) && st.complete() {
                    break 'rounds;
                }
            }
        }
        tried_upto = m;
    }

    let universal = st.traceless.rank() == space.basis_len() - 1;
    if universal {
        limit = None;
    } else if limit.is_none() && depth_skipped {
        limit = Some(LimitReason::MaxDepth);
    }
    Ok(ClosureResult {
        space,
        algebra_dim: st.full.rank(),
        traceless_dim: st.traceless.rank(),
        frame: st.frame,
        universal,
        stalled: !universal,
        limit,
    })
}

/// Recursively evaluates a compound index against a gate set's embedded generators.
pub fn evaluate_index(index: &CompoundIndex, gateset: &GateSet, max_depth: usize) -> Result<HermitianOperator> {
    let depth = index.depth();
    if depth > max_depth {
        return Err(Error::ResourceLimit(format!("index {index} has depth {depth} > {max_depth}")));
    }
    fn eval(index: &CompoundIndex, gateset: &GateSet) -> Result<HermitianOperator> {
        match index {
            CompoundIndex::Leaf(k) => gateset.embedded(*k).cloned(),
            CompoundIndex::Bracket(j, k) => commutator_h(&eval(j, gateset)?, &eval(k, gateset)?),
        }
    }
    eval(index, gateset)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalityReport {
    pub algebra_dim: usize,
    pub traceless_dim: usize,
    /// `n^{2k} - 1`.
    pub target_traceless_dim: usize,
    /// `n^{2k}`.
    pub target_full_dim: usize,
    pub universal: bool,
    pub stalled: bool,
    pub limit: Option<LimitReason>,
    pub labels: Vec<String>,
    pub max_depth_used: usize,
}

pub fn universality_report(result: &ClosureResult, space: QunitSpace) -> UniversalityReport {
    UniversalityReport {
        algebra_dim: result.algebra_dim,
        traceless_dim: result.traceless_dim,
        target_traceless_dim: space.basis_len() - 1,
        target_full_dim: space.basis_len(),
        universal: result.universal,
        stalled: result.stalled,
        limit: result.limit,
        labels: result.frame.iter().map(|e| e.index.to_string()).collect(),
        max_depth_used: result.frame.iter().map(|e| e.index.depth()).max().unwrap_or(0),
    }
}
