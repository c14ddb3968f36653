//! Finite regular Δ-complexes of dimension at most two, and the line-oriented
//! fixture format used to exchange them.
//!
//! A [`DeltaComplex2`] stores its edges and facets explicitly. Facets carry
//! their three edge ids, so parallel edges and facets with identical vertex
//! triples (the pillow sphere) are represented faithfully.
//!
//! After construction all ids are dense: vertices are `0..vertex_count`,
//! edges and facets are numbered in the order of their original ids. Every
//! edge is stored with `v < w`, and every facet with ascending vertices and
//! edges in the slot order `(e01, e02, e12)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FacetId = usize;

/// Header line of every fixture.
pub const FORMAT_HEADER: &str = "tropsurf 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("not regular: {0}")]
    NonRegular(String),
    #[error("incoherent incidence: {0}")]
    IncoherentIncidence(String),
    #[error("complex is not connected: {0}")]
    Disconnected(String),
    #[error("unknown {kind} id {id}")]
    UnknownId { kind: &'static str, id: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub v: VertexId,
    pub w: VertexId,
}

impl Edge {
    pub fn endpoints(&self) -> [VertexId; 2] {
        [self.v, self.w]
    }

    pub fn has_endpoint(&self, x: VertexId) -> bool {
        self.v == x || self.w == x
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: VertexId) -> Option<VertexId> {
        if self.v == x {
            Some(self.w)
        } else if self.w == x {
            Some(self.v)
        } else {
            None
        }
    }
}

/// A 2-simplex with ascending vertices and edges in slot order `(e01, e02, e12)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Facet {
    pub vertices: [VertexId; 3],
    pub edges: [EdgeId; 3],
}

const SLOT_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

impl Facet {
    pub fn contains_vertex(&self, x: VertexId) -> bool {
        self.vertices.contains(&x)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// The facet's own edge joining `a` and `b`.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        SLOT_PAIRS.iter().zip(self.edges).find_map(|(&(i, j), e)| {
            let (p, q) = (self.vertices[i], self.vertices[j]);
            ((p == a && q == b) || (p == b && q == a)).then_some(e)
        })
    }

    /// The vertex of the facet that is not an endpoint of its edge `e`.
    pub fn opposite_vertex(&self, e: EdgeId) -> Option<VertexId> {
        let slot = self.edges.iter().position(|&x| x == e)?;
        Some(self.vertices[2 - slot])
    }

    /// The two facet edges at vertex `x`, in slot order.
    pub fn edges_at(&self, x: VertexId) -> Option<[EdgeId; 2]> {
        let i = self.vertices.iter().position(|&y| y == x)?;
        let at: Vec<EdgeId> = SLOT_PAIRS
            .iter()
            .zip(self.edges)
            .filter(|((a, b), _)| *a == i || *b == i)
            .map(|(_, e)| e)
            .collect();
        Some([at[0], at[1]])
    }

    /// Coefficient of edge slot `k` in the simplicial boundary of the facet.
    pub fn boundary_sign(slot: usize) -> i64 {
        if slot == 1 {
            -1
        } else {
            1
        }
    }
}

/// Original (possibly sparse) ids recorded at build time.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdMap {
    pub edges: Vec<u64>,
    pub facets: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaComplex2 {
    vertex_count: usize,
    edges: Vec<Edge>,
    facets: Vec<Facet>,
    edge_facets: Vec<Vec<FacetId>>,
    vertex_edges: Vec<Vec<EdgeId>>,
    vertex_facets: Vec<Vec<FacetId>>,
    ids: IdMap,
}

/// The star of an edge: its incident facets and their opposite vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStar {
    pub edge: EdgeId,
    pub endpoints: (VertexId, VertexId),
    pub incident_facets: Vec<FacetId>,
    pub opposite_vertices: Vec<VertexId>,
    /// `(1, …, 1, −α(v,e), −α(w,e))`, present once structure constants are attached.
    pub quotient_vector: Option<Vec<i64>>,
}

impl EdgeStar {
    pub fn degree(&self) -> usize {
        self.incident_facets.len()
    }
}

impl DeltaComplex2 {
    /// Builds and validates a complex from dense ids.
    ///
    /// Facets are given as `(vertices, edges)` with edge `k` joining the
    /// vertices of slot pair `k` of `(01, 02, 12)`.
    pub fn new(
        vertex_count: usize,
        edges: Vec<(VertexId, VertexId)>,
        facets: Vec<([VertexId; 3], [EdgeId; 3])>,
    ) -> Result<Self, ComplexError> {
        let ids = IdMap {
            edges: (0..edges.len() as u64).collect(),
            facets: (0..facets.len() as u64).collect(),
        };
        Self::build(vertex_count, edges, facets, ids)
    }

    fn build(
        vertex_count: usize,
        raw_edges: Vec<(VertexId, VertexId)>,
        raw_facets: Vec<([VertexId; 3], [EdgeId; 3])>,
        ids: IdMap,
    ) -> Result<Self, ComplexError> {
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (k, &(a, b)) in raw_edges.iter().enumerate() {
            for x in [a, b] {
                if x >= vertex_count {
                    return Err(ComplexError::UnknownId { kind: "vertex", id: x as u64 });
                }
            }
            if a == b {
                return Err(ComplexError::NonRegular(format!(
                    "edge {} has both endpoints equal to {a}",
                    ids.edges[k]
                )));
            }
            edges.push(Edge { v: a.min(b), w: a.max(b) });
        }

        let mut facets = Vec::with_capacity(raw_facets.len());
        for (k, &(vs, es)) in raw_facets.iter().enumerate() {
            let fid = ids.facets[k];
            for &x in &vs {
                if x >= vertex_count {
                    return Err(ComplexError::UnknownId { kind: "vertex", id: x as u64 });
                }
            }
            for &e in &es {
                if e >= edges.len() {
                    return Err(ComplexError::UnknownId { kind: "edge", id: e as u64 });
                }
            }
            if vs[0] == vs[1] || vs[0] == vs[2] || vs[1] == vs[2] {
                return Err(ComplexError::NonRegular(format!(
                    "facet {fid} repeats a vertex in ({}, {}, {})",
                    vs[0], vs[1], vs[2]
                )));
            }
            if es[0] == es[1] || es[0] == es[2] || es[1] == es[2] {
                return Err(ComplexError::NonRegular(format!("facet {fid} repeats an edge")));
            }
            for (slot, &(i, j)) in SLOT_PAIRS.iter().enumerate() {
                let edge = edges[es[slot]];
                let (p, q) = (vs[i].min(vs[j]), vs[i].max(vs[j]));
                if edge.v != p || edge.w != q {
                    return Err(ComplexError::IncoherentIncidence(format!(
                        "facet {fid}: edge {} joins {} and {}, expected {} and {}",
                        ids.edges[es[slot]], edge.v, edge.w, vs[i], vs[j]
                    )));
                }
            }
            let mut sorted = vs;
            sorted.sort_unstable();
            let mut slots = [0; 3];
            for (slot, &(i, j)) in SLOT_PAIRS.iter().enumerate() {
                let (a, b) = (sorted[i], sorted[j]);
                let pos = SLOT_PAIRS
                    .iter()
                    .position(|&(x, y)| {
                        (vs[x] == a && vs[y] == b) || (vs[x] == b && vs[y] == a)
                    })
                    .expect("slot pairs cover every vertex pair");
                slots[slot] = es[pos];
            }
            facets.push(Facet { vertices: sorted, edges: slots });
        }

        let mut edge_facets = vec![Vec::new(); edges.len()];
        let mut vertex_edges = vec![Vec::new(); vertex_count];
        let mut vertex_facets = vec![Vec::new(); vertex_count];
        for (eid, e) in edges.iter().enumerate() {
            vertex_edges[e.v].push(eid);
            vertex_edges[e.w].push(eid);
        }
        for (fid, f) in facets.iter().enumerate() {
            for &e in &f.edges {
                edge_facets[e].push(fid);
            }
            for &x in &f.vertices {
                vertex_facets[x].push(fid);
            }
        }

        let complex = DeltaComplex2 {
            vertex_count,
            edges,
            facets,
            edge_facets,
            vertex_edges,
            vertex_facets,
            ids,
        };
        complex.check_connected()?;
        Ok(complex)
    }

    fn check_connected(&self) -> Result<(), ComplexError> {
        if self.vertex_count == 0 {
            return Err(ComplexError::Disconnected("the complex has no vertices".into()));
        }
        if let Some(x) = (0..self.vertex_count).find(|&x| self.vertex_edges[x].is_empty()) {
            return Err(ComplexError::Disconnected(format!("vertex {x} lies on no edge")));
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &e in &self.vertex_edges[x] {
                let y = self.edges[e].other(x).expect("incident edge");
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(x) => Err(ComplexError::Disconnected(format!(
                "vertex {x} is not reachable from vertex 0"
            ))),
            None => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge, ComplexError> {
        self.edges.get(e).ok_or(ComplexError::UnknownId { kind: "edge", id: e as u64 })
    }

    pub fn facet(&self, f: FacetId) -> Result<&Facet, ComplexError> {
        self.facets.get(f).ok_or(ComplexError::UnknownId { kind: "facet", id: f as u64 })
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), ComplexError> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(ComplexError::UnknownId { kind: "vertex", id: v as u64 })
        }
    }

    pub fn id_map(&self) -> &IdMap {
        &self.ids
    }

    /// Facets containing edge `e`, ascending.
    pub fn facets_of_edge(&self, e: EdgeId) -> &[FacetId] {
        &self.edge_facets[e]
    }

    /// Edges with endpoint `v`, ascending.
    pub fn edges_at(&self, v: VertexId) -> &[EdgeId] {
        &self.vertex_edges[v]
    }

    /// Facets with vertex `v`, ascending.
    pub fn facets_at(&self, v: VertexId) -> &[FacetId] {
        &self.vertex_facets[v]
    }

    /// Number of facets containing `e`.
    pub fn edge_degree(&self, e: EdgeId) -> Result<usize, ComplexError> {
        self.edge(e)?;
        Ok(self.edge_facets[e].len())
    }

    /// Number of edges at `v`.
    pub fn vertex_degree(&self, v: VertexId) -> usize {
        self.vertex_edges[v].len()
    }

    pub fn edge_star(&self, e: EdgeId) -> Result<EdgeStar, ComplexError> {
        let edge = *self.edge(e)?;
        let incident = self.edge_facets[e].clone();
        let opposite = incident
            .iter()
            .map(|&f| self.facets[f].opposite_vertex(e).expect("facet contains the edge"))
            .collect();
        Ok(EdgeStar {
            edge: e,
            endpoints: (edge.v, edge.w),
            incident_facets: incident,
            opposite_vertices: opposite,
            quotient_vector: None,
        })
    }

    /// Renders the complex in the fixture format.
    pub fn to_fixture(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{FORMAT_HEADER}").unwrap();
        writeln!(out, "vertices {}", self.vertex_count).unwrap();
        for (k, e) in self.edges.iter().enumerate() {
            writeln!(out, "edge {k} {} {}", e.v, e.w).unwrap();
        }
        for (k, f) in self.facets.iter().enumerate() {
            let [a, b, c] = f.vertices;
            let [x, y, z] = f.edges;
            writeln!(out, "facet {k} {a} {b} {c} {x} {y} {z}").unwrap();
        }
        out
    }
}

/// One `alpha <eid> <vid> <int>` line, with the edge already mapped to its dense id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaEntry {
    pub edge: EdgeId,
    pub vertex: VertexId,
    pub value: i64,
    pub line: usize,
}

/// One `cover …` line of a serialized covering map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverEntry {
    pub kind: CoverKind,
    pub new_id: usize,
    pub base_id: usize,
    pub sheet: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverKind {
    Vertex,
    Edge,
    Facet,
}

impl CoverKind {
    pub fn keyword(self) -> &'static str {
        match self {
            CoverKind::Vertex => "cover",
            CoverKind::Edge => "cover-edge",
            CoverKind::Facet => "cover-facet",
        }
    }
}

/// A parsed fixture file.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub complex: DeltaComplex2,
    pub alpha: Vec<AlphaEntry>,
    pub cover: Vec<CoverEntry>,
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ComplexError> {
    tok.parse().map_err(|_| ComplexError::Syntax {
        line,
        message: format!("expected {what}, found `{tok}`"),
    })
}

fn expect_arity(toks: &[&str], n: usize, line: usize) -> Result<(), ComplexError> {
    if toks.len() == n {
        Ok(())
    } else {
        Err(ComplexError::Syntax {
            line,
            message: format!("`{}` takes {} fields, found {}", toks[0], n - 1, toks.len() - 1),
        })
    }
}

impl Fixture {
    pub fn parse(raw: &str) -> Result<Self, ComplexError> {
        let mut lines = raw
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        match lines.next() {
            Some((_, l)) if l.split_whitespace().collect::<Vec<_>>() == ["tropsurf", "1"] => {}
            Some((n, l)) => {
                return Err(ComplexError::Syntax {
                    line: n,
                    message: format!("expected header `{FORMAT_HEADER}`, found `{l}`"),
                })
            }
            None => {
                return Err(ComplexError::Syntax { line: 1, message: "empty input".into() })
            }
        }

        let mut vertex_count = None;
        let mut edges: BTreeMap<u64, (usize, VertexId, VertexId)> = BTreeMap::new();
        let mut facets: BTreeMap<u64, (usize, [VertexId; 3], [u64; 3])> = BTreeMap::new();
        let mut raw_alpha = Vec::new();
        let mut raw_cover = Vec::new();

        for (n, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks[0] {
                "vertices" => {
                    expect_arity(&toks, 2, n)?;
                    if vertex_count.is_some() {
                        return Err(ComplexError::Syntax { line: n, message: "repeated `vertices`".into() });
                    }
                    vertex_count = Some(parse_num::<usize>(toks[1], n, "a vertex count")?);
                }
                "edge" => {
                    expect_arity(&toks, 4, n)?;
                    let id = parse_num(toks[1], n, "an edge id")?;
                    let v = parse_num(toks[2], n, "a vertex id")?;
                    let w = parse_num(toks[3], n, "a vertex id")?;
                    if edges.insert(id, (n, v, w)).is_some() {
                        return Err(ComplexError::Syntax { line: n, message: format!("duplicate edge id {id}") });
                    }
                }
                "facet" => {
                    expect_arity(&toks, 8, n)?;
                    let id = parse_num(toks[1], n, "a facet id")?;
                    let mut vs = [0; 3];
                    let mut es = [0; 3];
                    for k in 0..3 {
                        vs[k] = parse_num(toks[2 + k], n, "a vertex id")?;
                        es[k] = parse_num(toks[5 + k], n, "an edge id")?;
                    }
                    if facets.insert(id, (n, vs, es)).is_some() {
                        return Err(ComplexError::Syntax { line: n, message: format!("duplicate facet id {id}") });
                    }
                }
                "alpha" => {
                    expect_arity(&toks, 4, n)?;
                    let e: u64 = parse_num(toks[1], n, "an edge id")?;
                    let v: usize = parse_num(toks[2], n, "a vertex id")?;
                    let a: i64 = parse_num(toks[3], n, "an integer")?;
                    raw_alpha.push((n, e, v, a));
                }
                kw @ ("cover" | "cover-edge" | "cover-facet") => {
                    expect_arity(&toks, 4, n)?;
                    let kind = match kw {
                        "cover" => CoverKind::Vertex,
                        "cover-edge" => CoverKind::Edge,
                        _ => CoverKind::Facet,
                    };
                    let new_id = parse_num(toks[1], n, "an id")?;
                    let base_id = parse_num(toks[2], n, "an id")?;
                    let sheet: u8 = parse_num(toks[3], n, "a sheet")?;
                    if sheet > 1 {
                        return Err(ComplexError::Syntax { line: n, message: "sheet must be 0 or 1".into() });
                    }
                    raw_cover.push(CoverEntry { kind, new_id, base_id, sheet });
                }
                other => {
                    return Err(ComplexError::Syntax {
                        line: n,
                        message: format!("unknown record `{other}`"),
                    })
                }
            }
        }

        let vertex_count = vertex_count.ok_or(ComplexError::Syntax {
            line: 1,
            message: "missing `vertices` line".into(),
        })?;
        let edge_index: HashMap<u64, usize> =
            edges.keys().enumerate().map(|(k, &id)| (id, k)).collect();
        let lookup_edge = |id: u64| {
            edge_index
                .get(&id)
                .copied()
                .ok_or(ComplexError::UnknownId { kind: "edge", id })
        };

        let ids = IdMap {
            edges: edges.keys().copied().collect(),
            facets: facets.keys().copied().collect(),
        };
        let dense_edges = edges.values().map(|&(_, v, w)| (v, w)).collect();
        let mut dense_facets = Vec::with_capacity(facets.len());
        for &(_, vs, es) in facets.values() {
            dense_facets.push((vs, [lookup_edge(es[0])?, lookup_edge(es[1])?, lookup_edge(es[2])?]));
        }
        let complex = DeltaComplex2::build(vertex_count, dense_edges, dense_facets, ids)?;

        let mut alpha = Vec::with_capacity(raw_alpha.len());
        for (line, e, v, value) in raw_alpha {
            let edge = lookup_edge(e)?;
            complex.check_vertex(v)?;
            alpha.push(AlphaEntry { edge, vertex: v, value, line });
        }
        Ok(Fixture { complex, alpha, cover: raw_cover })
    }
}

/// Parses a fixture and returns only its complex.
pub fn build_complex(raw: &str) -> Result<DeltaComplex2, ComplexError> {
    Fixture::parse(raw).map(|f| f.complex)
}

/// A subcomplex as membership masks over the simplices of a complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    pub vertices: Vec<bool>,
    pub edges: Vec<bool>,
    pub facets: Vec<bool>,
}

impl Subcomplex {
    pub fn empty(c: &DeltaComplex2) -> Self {
        Subcomplex {
            vertices: vec![false; c.vertex_count()],
            edges: vec![false; c.edge_count()],
            facets: vec![false; c.facet_count()],
        }
    }

    pub fn full(c: &DeltaComplex2) -> Self {
        Subcomplex {
            vertices: vec![true; c.vertex_count()],
            edges: vec![true; c.edge_count()],
            facets: vec![true; c.facet_count()],
        }
    }

    /// The closure of the given simplices.
    pub fn closure(
        c: &DeltaComplex2,
        vertices: &[VertexId],
        edges: &[EdgeId],
        facets: &[FacetId],
    ) -> Result<Self, ComplexError> {
        let mut s = Subcomplex::empty(c);
        for &f in facets {
            let facet = c.facet(f)?;
            s.facets[f] = true;
            for &e in &facet.edges {
                s.edges[e] = true;
            }
            for &x in &facet.vertices {
                s.vertices[x] = true;
            }
        }
        for &e in edges {
            let edge = c.edge(e)?;
            s.edges[e] = true;
            s.vertices[edge.v] = true;
            s.vertices[edge.w] = true;
        }
        for &x in vertices {
            c.check_vertex(x)?;
            s.vertices[x] = true;
        }
        Ok(s)
    }

    pub fn of_facets(c: &DeltaComplex2, facets: &[FacetId]) -> Result<Self, ComplexError> {
        Self::closure(c, &[], &[], facets)
    }

    pub fn union(&self, other: &Self) -> Self {
        let or = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(x, y)| *x || *y).collect();
        Subcomplex {
            vertices: or(&self.vertices, &other.vertices),
            edges: or(&self.edges, &other.edges),
            facets: or(&self.facets, &other.facets),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let and = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(x, y)| *x && *y).collect();
        Subcomplex {
            vertices: and(&self.vertices, &other.vertices),
            edges: and(&self.edges, &other.edges),
            facets: and(&self.facets, &other.facets),
        }
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        ids_of(&self.vertices)
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        ids_of(&self.edges)
    }

    pub fn facet_ids(&self) -> Vec<FacetId> {
        ids_of(&self.facets)
    }

    pub fn is_empty(&self) -> bool {
        !self.vertices.iter().any(|&b| b)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let count = |m: &[bool]| m.iter().filter(|&&b| b).count() as i64;
        count(&self.vertices) - count(&self.edges) + count(&self.facets)
    }
}

fn ids_of(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}
