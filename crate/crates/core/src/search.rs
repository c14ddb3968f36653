//! Exhaustive branch-and-prune search over bounded windows of structure
//! constants.
//!
//! Each edge `e = vw` with `v < w` carries the free parameter `t_e = α(v, e)`
//! ranging over `[−B, deg(e) + B]`, and `α(w, e) = deg(e) − t_e`. Edges are
//! assigned vertex by vertex, highest degree first, so local matrices are
//! completed early. A partial assignment is pruned at a vertex `x` when
//!
//! * every edge at `x` is assigned and `M_x` has the wrong number of
//!   positive eigenvalues for the mode;
//! * the principal submatrix of `M_x` on the assigned edges already has two
//!   positive eigenvalues (interlacing);
//! * `M_x` with every unassigned diagonal entry at its minimum has two
//!   positive eigenvalues, which raising diagonal entries cannot undo;
//! * in tropical mode, `M_x` with every unassigned diagonal entry at its
//!   maximum has no positive eigenvalue.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::complex::{DeltaComplex2, EdgeId, VertexId};
use crate::inertia::inertia_of_integer;
use crate::blowup::{robustify, BlowupError};
use crate::recognizer::{find_decomposition, verify_decomposition, Contractibility, Decomposition, VerificationReport};
use crate::tropical::{classify, local_matrix_entries, StructureConstants, Verdict, WeakTropicalSurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// Every local matrix has exactly one positive eigenvalue.
    Tropical,
    /// Every local matrix has at most one positive eigenvalue.
    AtMostOne,
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Tropical => "tropical",
            SearchMode::AtMostOne => "at-most-one",
        }
    }

    fn accepts(self, n_plus: usize) -> bool {
        match self {
            SearchMode::Tropical => n_plus == 1,
            SearchMode::AtMostOne => n_plus <= 1,
        }
    }

    fn accepts_verdict(self, v: Verdict) -> bool {
        match self {
            SearchMode::Tropical => v == Verdict::Tropical,
            SearchMode::AtMostOne => v.at_most_one_positive(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub complex: DeltaComplex2,
    pub bound: u32,
    pub mode: SearchMode,
    /// Emit every witness in the window instead of stopping at the first.
    pub enumerate_all: bool,
    /// Sort witnesses by `t` in edge order; otherwise they are reported in
    /// the order the workers finish.
    pub deterministic: bool,
    pub threads: usize,
}

impl SearchSpec {
    pub fn new(complex: DeltaComplex2, bound: u32, mode: SearchMode) -> Self {
        SearchSpec { complex, bound, mode, enumerate_all: false, deterministic: true, threads: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub witnesses: Vec<StructureConstants>,
    /// Every assignment in the window was covered.
    pub exhausted: bool,
    pub nodes_explored: u64,
    pub prunes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PruneRule {
    CompleteVertex,
    Interlacing,
    MinimalDiagonal,
    MaximalDiagonal,
}

/// Receives every pruned partial assignment.
pub trait SearchObserver {
    /// `assigned` lists `(edge, t_e)` for the assigned edges in search order.
    fn pruned(&mut self, assigned: &[(EdgeId, i64)], vertex: VertexId, rule: PruneRule);
}

struct Local {
    edges: Vec<EdgeId>,
    /// Whether the vertex is the lower endpoint of each edge.
    lower: Vec<bool>,
    /// `M_x` with zero diagonal, row-major.
    off: Vec<i64>,
}

struct Engine<'a> {
    complex: &'a DeltaComplex2,
    bound: i64,
    mode: SearchMode,
    enumerate_all: bool,
    order: Vec<EdgeId>,
    pos: Vec<usize>,
    degree: Vec<i64>,
    locals: Vec<Local>,
}

struct State {
    t: Vec<i64>,
    nodes: u64,
    prunes: u64,
    witnesses: Vec<Vec<i64>>,
    stop: bool,
    buf: Vec<i64>,
    sub: Vec<i64>,
}

impl State {
    fn new(edges: usize) -> Self {
        State { t: vec![0; edges], nodes: 0, prunes: 0, witnesses: Vec::new(), stop: false, buf: Vec::new(), sub: Vec::new() }
    }
}

/// Edge order: vertices by descending degree (ties by id), each contributing
/// its still unassigned edges in ascending id.
pub fn edge_order(c: &DeltaComplex2) -> Vec<EdgeId> {
    let mut vertices: Vec<VertexId> = (0..c.vertex_count()).collect();
    vertices.sort_by_key(|&v| (std::cmp::Reverse(c.edges_at(v).len()), v));
    let mut taken = vec![false; c.edge_count()];
    let mut order = Vec::with_capacity(c.edge_count());
    for v in vertices {
        for &e in c.edges_at(v) {
            if !taken[e] {
                taken[e] = true;
                order.push(e);
            }
        }
    }
    order
}

impl<'a> Engine<'a> {
    fn new(spec: &'a SearchSpec) -> Self {
        let c = &spec.complex;
        let order = edge_order(c);
        let mut pos = vec![0; c.edge_count()];
        for (i, &e) in order.iter().enumerate() {
            pos[e] = i;
        }
        let zero = StructureConstants::from_pairs(vec![[0, 0]; c.edge_count()]);
        let locals = (0..c.vertex_count())
            .map(|x| {
                let (edges, off) = local_matrix_entries(c, &zero, x);
                let lower = edges.iter().map(|&e| c.edges()[e].v == x).collect();
                Local { edges, lower, off }
            })
            .collect();
        Engine {
            complex: c,
            bound: i64::from(spec.bound),
            mode: spec.mode,
            enumerate_all: spec.enumerate_all,
            order,
            pos,
            degree: (0..c.edge_count()).map(|e| c.facets_of_edge(e).len() as i64).collect(),
            locals,
        }
    }

    fn window(&self, e: EdgeId) -> std::ops::RangeInclusive<i64> {
        -self.bound..=self.degree[e] + self.bound
    }

    /// Checks vertex `x` when the first `assigned` edges of the order are set.
    fn check(&self, st: &mut State, x: VertexId, assigned: usize, label: bool) -> Option<PruneRule> {
        let local = &self.locals[x];
        let n = local.edges.len();
        st.buf.clear();
        st.buf.extend_from_slice(&local.off);
        let mut known = 0;
        for (i, &e) in local.edges.iter().enumerate() {
            if self.pos[e] < assigned {
                known += 1;
                st.buf[i * n + i] = if local.lower[i] { st.t[e] - self.degree[e] } else { -st.t[e] };
            }
        }
        if known == n {
            let n_plus = inertia_of_integer(n, &st.buf).n_plus;
            return (!self.mode.accepts(n_plus)).then_some(PruneRule::CompleteVertex);
        }
        for (i, &e) in local.edges.iter().enumerate() {
            if self.pos[e] >= assigned {
                st.buf[i * n + i] = -(self.degree[e] + self.bound);
            }
        }
        // Interlacing on the assigned block is implied by this bound, so it is
        // only evaluated to name the rule for an observer.
        if inertia_of_integer(n, &st.buf).n_plus >= 2 {
            if label && known >= 2 {
                st.sub.clear();
                for i in (0..n).filter(|&i| self.pos[local.edges[i]] < assigned) {
                    for j in (0..n).filter(|&j| self.pos[local.edges[j]] < assigned) {
                        st.sub.push(st.buf[i * n + j]);
                    }
                }
                if inertia_of_integer(known, &st.sub).n_plus >= 2 {
                    return Some(PruneRule::Interlacing);
                }
            }
            return Some(PruneRule::MinimalDiagonal);
        }
        if self.mode == SearchMode::Tropical {
            for (i, &e) in local.edges.iter().enumerate() {
                if self.pos[e] >= assigned {
                    st.buf[i * n + i] = self.bound;
                }
            }
            if inertia_of_integer(n, &st.buf).n_plus == 0 {
                return Some(PruneRule::MaximalDiagonal);
            }
        }
        None
    }

    /// Whether assigning the edge at `depth` keeps both endpoints viable.
    fn viable(&self, st: &mut State, depth: usize, observer: &mut Option<&mut dyn SearchObserver>) -> bool {
        let edge = self.complex.edges()[self.order[depth]];
        for x in [edge.v, edge.w] {
            if let Some(rule) = self.check(st, x, depth + 1, observer.is_some()) {
                st.prunes += 1;
                if let Some(obs) = observer.as_deref_mut() {
                    let assigned: Vec<(EdgeId, i64)> =
                        self.order[..=depth].iter().map(|&e| (e, st.t[e])).collect();
                    obs.pruned(&assigned, x, rule);
                }
                return false;
            }
        }
        true
    }

    fn accept_leaf(&self, st: &mut State) {
        let alpha = StructureConstants::from_lower_values(self.complex, &st.t);
        let verdict = classify(self.complex, &alpha).verdict;
        assert!(self.mode.accepts_verdict(verdict), "search emitted an invalid witness");
        st.witnesses.push(st.t.clone());
        if !self.enumerate_all {
            st.stop = true;
        }
    }

    fn dfs(&self, st: &mut State, depth: usize, observer: &mut Option<&mut dyn SearchObserver>, cancel: &dyn Fn() -> bool) {
        st.nodes += 1;
        if depth == self.order.len() {
            self.accept_leaf(st);
            return;
        }
        if cancel() {
            st.stop = true;
            return;
        }
        let e = self.order[depth];
        for value in self.window(e) {
            st.t[e] = value;
            if self.viable(st, depth, observer) {
                self.dfs(st, depth + 1, observer, cancel);
                if st.stop {
                    return;
                }
            }
        }
    }

    /// Viable prefixes of length `k`, in search order.
    fn prefixes(&self, st: &mut State, k: usize) -> Vec<Vec<i64>> {
        fn go(engine: &Engine, st: &mut State, depth: usize, k: usize, out: &mut Vec<Vec<i64>>) {
            st.nodes += 1;
            if depth == k {
                out.push(engine.order[..k].iter().map(|&e| st.t[e]).collect());
                return;
            }
            let e = engine.order[depth];
            for value in engine.window(e) {
                st.t[e] = value;
                if engine.viable(st, depth, &mut None) {
                    go(engine, st, depth + 1, k, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, st, 0, k, &mut out);
        // prefix leaves are counted again as task roots
        st.nodes -= out.len() as u64;
        out
    }
}

fn finish(spec: &SearchSpec, mut witnesses: Vec<Vec<i64>>, exhausted: bool, nodes: u64, prunes: u64, start: Instant) -> SearchOutcome {
    if spec.deterministic {
        witnesses.sort();
    }
    SearchOutcome {
        witnesses: witnesses.iter().map(|t| StructureConstants::from_lower_values(&spec.complex, t)).collect(),
        exhausted,
        nodes_explored: nodes,
        prunes,
        elapsed: start.elapsed(),
    }
}

/// Runs the search single-threaded, reporting every prune to `observer`.
pub fn search_observed(spec: &SearchSpec, observer: &mut dyn SearchObserver) -> SearchOutcome {
    let start = Instant::now();
    let engine = Engine::new(spec);
    let mut st = State::new(spec.complex.edge_count());
    engine.dfs(&mut st, 0, &mut Some(observer), &|| false);
    let exhausted = spec.enumerate_all || st.witnesses.is_empty();
    finish(spec, st.witnesses, exhausted, st.nodes, st.prunes, start)
}

pub fn search(spec: &SearchSpec) -> SearchOutcome {
    let start = Instant::now();
    let engine = Engine::new(spec);
    let split = engine.order.len().min(2);
    let mut root = State::new(spec.complex.edge_count());
    let tasks = engine.prefixes(&mut root, split);

    // lowest task index holding a witness, when stopping at the first
    let found = AtomicUsize::new(usize::MAX);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, State)>> = Mutex::new(Vec::new());
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= tasks.len() {
            break;
        }
        if !spec.enumerate_all && i > found.load(Ordering::SeqCst) {
            continue;
        }
        let mut st = State::new(spec.complex.edge_count());
        for (k, &value) in tasks[i].iter().enumerate() {
            st.t[engine.order[k]] = value;
        }
        let cancel = || !spec.enumerate_all && found.load(Ordering::Relaxed) < i;
        engine.dfs(&mut st, split, &mut None, &cancel);
        if !spec.enumerate_all && !st.witnesses.is_empty() {
            found.fetch_min(i, Ordering::SeqCst);
        }
        results.lock().unwrap().push((i, st));
    };
    let threads = spec.threads.max(1).min(tasks.len().max(1));
    if threads == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(worker);
            }
        });
    }

    let mut results = results.into_inner().unwrap();
    let (mut nodes, mut prunes) = (root.nodes, root.prunes);
    for (_, st) in &results {
        nodes += st.nodes;
        prunes += st.prunes;
    }
    let witnesses: Vec<Vec<i64>> = if spec.enumerate_all {
        if spec.deterministic {
            results.sort_by_key(|(i, _)| *i);
        }
        results.into_iter().flat_map(|(_, st)| st.witnesses).collect()
    } else {
        results
            .into_iter()
            .filter(|(_, st)| !st.witnesses.is_empty())
            .min_by_key(|(i, _)| *i)
            .map(|(_, st)| st.witnesses)
            .unwrap_or_default()
    };
    let exhausted = spec.enumerate_all || witnesses.is_empty();
    finish(spec, witnesses, exhausted, nodes, prunes, start)
}

/// Whether the recognizer certified the complex as a hyperbolic manifold with
/// fins and ornaments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Valid decomposition, `χ(Σ) < 0`, every fin collapsible.
    Hyperbolic,
    /// Valid decomposition that is not hyperbolic, or has a fin whose
    /// contractibility was not decided.
    NotApplicable(String),
    /// No valid decomposition was found.
    NoDecomposition,
}

/// Outcome of re-checking an at-most-one witness through its blow-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustifyCheck {
    pub blowups: usize,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub bound: u32,
    pub decomposition: Option<Decomposition>,
    pub verification: Option<VerificationReport>,
    pub certificate: Certificate,
    pub tropical: SearchOutcome,
    pub at_most_one: SearchOutcome,
    pub robustified: Vec<RobustifyCheck>,
    /// Set when a certificate coexists with a witness, or a blow-up chain
    /// fails to produce a tropical surface. Either indicates a bug.
    pub inconsistency: Option<String>,
}

impl ObstructionReport {
    pub fn is_consistent(&self) -> bool {
        self.inconsistency.is_none()
    }
}

/// Runs the recognizer and both searches at bound `B`, cross-checking them.
pub fn obstruction_report(c: &DeltaComplex2, bound: u32, threads: usize) -> ObstructionReport {
    let decomposition = find_decomposition(c);
    let verification = decomposition.as_ref().and_then(|d| verify_decomposition(c, d).ok());
    let certificate = match &verification {
        None => Certificate::NoDecomposition,
        Some(r) if !r.is_valid() => Certificate::NoDecomposition,
        Some(r) if !r.hyperbolic => {
            Certificate::NotApplicable(format!("euler characteristic of sigma is {}", r.sigma_euler))
        }
        Some(r) => match r.fins.iter().find(|f| f.contractibility != Contractibility::Certified) {
            Some(f) => Certificate::NotApplicable(format!("fin {} not certified contractible", f.index)),
            None => Certificate::Hyperbolic,
        },
    };

    let run = |mode| {
        let mut spec = SearchSpec::new(c.clone(), bound, mode);
        spec.threads = threads;
        search(&spec)
    };
    let tropical = run(SearchMode::Tropical);
    let at_most_one = run(SearchMode::AtMostOne);

    let mut robustified = Vec::new();
    let mut problems = Vec::new();
    for alpha in &at_most_one.witnesses {
        let check = match WeakTropicalSurface::new(c.clone(), alpha.clone())
            .map_err(BlowupError::from)
            .and_then(|w| robustify(&w))
        {
            Ok((out, records)) => {
                RobustifyCheck { blowups: records.len(), verdict: Some(out.classify().verdict), error: None }
            }
            Err(e) => RobustifyCheck { blowups: 0, verdict: None, error: Some(e.to_string()) },
        };
        if check.verdict != Some(Verdict::Tropical) {
            problems.push("blow-up of an at-most-one witness is not tropical".to_string());
        }
        robustified.push(check);
    }
    if certificate == Certificate::Hyperbolic {
        if !tropical.witnesses.is_empty() {
            problems.push("tropical witness on a certified hyperbolic complex".to_string());
        }
        if !at_most_one.witnesses.is_empty() {
            problems.push("at-most-one witness on a certified hyperbolic complex".to_string());
        }
    }
    ObstructionReport {
        bound,
        decomposition,
        verification,
        certificate,
        tropical,
        at_most_one,
        robustified,
        inconsistency: (!problems.is_empty()).then(|| problems.join("; ")),
    }
}
