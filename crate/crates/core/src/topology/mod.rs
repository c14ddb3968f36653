//! Euler characteristic, rational Betti numbers, vertex links, connectivity
//! and orientability.

mod cover;

pub use cover::{orientation_double_cover, DoubleCover};

use std::collections::VecDeque;

use thiserror::Error;

use crate::complex::{ComplexError, DeltaComplex2, EdgeId, Facet, FacetId, VertexId};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("facet set is not a closed surface")]
    NotASurface,
    #[error("decomposition is not verified: {0}")]
    NotVerifiedDecomposition(String),
    #[error("the surface part is already orientable")]
    AlreadyOrientable,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

pub fn euler_characteristic(c: &DeltaComplex2) -> i64 {
    c.vertex_count() as i64 - c.edge_count() as i64 + c.facet_count() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologySummary {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
    /// Rank of the boundary map from edges to vertices.
    pub r1: usize,
    /// Rank of the boundary map from facets to edges.
    pub r2: usize,
}

impl CohomologySummary {
    pub fn euler_characteristic(&self) -> i64 {
        self.b0 as i64 - self.b1 as i64 + self.b2 as i64
    }
}

/// Rows of the boundary map `∂₂`, one per facet, over the edges.
pub(crate) fn facet_boundary_rows(c: &DeltaComplex2) -> Vec<Vec<i64>> {
    c.facets()
        .iter()
        .map(|f| {
            let mut row = vec![0; c.edge_count()];
            for (slot, &e) in f.edges.iter().enumerate() {
                row[e] += Facet::boundary_sign(slot);
            }
            row
        })
        .collect()
}

/// Rows of `∂₁`, one per edge `v → w`, over the vertices.
pub(crate) fn edge_boundary_rows(c: &DeltaComplex2) -> Vec<Vec<i64>> {
    c.edges()
        .iter()
        .map(|e| {
            let mut row = vec![0; c.vertex_count()];
            row[e.w] += 1;
            row[e.v] -= 1;
            row
        })
        .collect()
}

pub fn betti_numbers(c: &DeltaComplex2) -> CohomologySummary {
    let r1 = linalg::rank(&edge_boundary_rows(c), c.vertex_count());
    let r2 = linalg::rank(&facet_boundary_rows(c), c.edge_count());
    CohomologySummary {
        b0: c.vertex_count() - r1,
        b1: c.edge_count() - r1 - r2,
        b2: c.facet_count() - r2,
        r1,
        r2,
    }
}

/// The link of a vertex: one node per incident edge, one arc per facet corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkGraph {
    pub vertex: VertexId,
    /// Incident edges in ascending id; node `i` is `nodes[i]`.
    pub nodes: Vec<EdgeId>,
    /// `(i, j, f)`: facet `f` has its corner at the vertex between nodes `i < j`.
    pub arcs: Vec<(usize, usize, FacetId)>,
}

impl LinkGraph {
    pub fn node_degree(&self, i: usize) -> usize {
        self.arcs.iter().filter(|&&(a, b, _)| a == i || b == i).count()
    }

    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut count = self.nodes.len();
        for &(a, b, _) in &self.arcs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// A single cycle: connected and every node of degree 2.
    pub fn is_cycle(&self) -> bool {
        !self.nodes.is_empty()
            && self.is_connected()
            && (0..self.nodes.len()).all(|i| self.node_degree(i) == 2)
    }
}

fn link_within(c: &DeltaComplex2, v: VertexId, keep: impl Fn(FacetId) -> bool) -> LinkGraph {
    let mut nodes: Vec<EdgeId> = Vec::new();
    let mut arcs = Vec::new();
    let facets: Vec<FacetId> = c.facets_at(v).iter().copied().filter(|&f| keep(f)).collect();
    for &f in &facets {
        nodes.extend(c.facets()[f].edges_at(v).expect("corner at v"));
    }
    nodes.sort_unstable();
    nodes.dedup();
    for &f in &facets {
        let [a, b] = c.facets()[f].edges_at(v).expect("corner at v");
        let i = nodes.binary_search(&a).unwrap();
        let j = nodes.binary_search(&b).unwrap();
        arcs.push((i.min(j), i.max(j), f));
    }
    LinkGraph { vertex: v, nodes, arcs }
}

pub fn vertex_link(c: &DeltaComplex2, v: VertexId) -> Result<LinkGraph, ComplexError> {
    c.check_vertex(v)?;
    let mut link = link_within(c, v, |_| true);
    // edges at v in no facet are isolated nodes
    for &e in c.edges_at(v) {
        if let Err(pos) = link.nodes.binary_search(&e) {
            link.nodes.insert(pos, e);
            for arc in &mut link.arcs {
                if arc.0 >= pos {
                    arc.0 += 1;
                }
                if arc.1 >= pos {
                    arc.1 += 1;
                }
            }
        }
    }
    Ok(link)
}

pub fn is_locally_connected_codim1(c: &DeltaComplex2) -> bool {
    (0..c.vertex_count()).all(|v| vertex_link(c, v).expect("valid vertex").is_connected())
}

/// Facets connected across shared edges, and every edge in some facet.
pub fn is_connected_codim1(c: &DeltaComplex2) -> bool {
    if c.facet_count() == 0 || (0..c.edge_count()).any(|e| c.facets_of_edge(e).is_empty()) {
        return false;
    }
    let all: Vec<FacetId> = (0..c.facet_count()).collect();
    facet_components(c, &all, |_| true).len() == 1
}

/// Components of `facets` under adjacency across edges accepted by `cross`.
pub(crate) fn facet_components(
    c: &DeltaComplex2,
    facets: &[FacetId],
    cross: impl Fn(EdgeId) -> bool,
) -> Vec<Vec<FacetId>> {
    let mut member = vec![false; c.facet_count()];
    for &f in facets {
        member[f] = true;
    }
    let mut seen = vec![false; c.facet_count()];
    let mut out = Vec::new();
    for &start in facets {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            for &e in &c.facets()[f].edges {
                if !cross(e) {
                    continue;
                }
                for &g in c.facets_of_edge(e) {
                    if member[g] && !seen[g] {
                        seen[g] = true;
                        comp.push(g);
                        stack.push(g);
                    }
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Whether the subcomplex generated by `facets` is a closed connected surface.
pub fn is_closed_surface(c: &DeltaComplex2, facets: &[FacetId]) -> bool {
    if facets.is_empty() || facets.iter().any(|&f| f >= c.facet_count()) {
        return false;
    }
    let mut member = vec![false; c.facet_count()];
    for &f in facets {
        member[f] = true;
    }
    let mut degree = vec![0usize; c.edge_count()];
    let mut vertices = vec![false; c.vertex_count()];
    for (f, facet) in c.facets().iter().enumerate() {
        if member[f] {
            for &e in &facet.edges {
                degree[e] += 1;
            }
            for &x in &facet.vertices {
                vertices[x] = true;
            }
        }
    }
    if degree.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let links_are_cycles = (0..c.vertex_count())
        .filter(|&v| vertices[v])
        .all(|v| link_within(c, v, |f| member[f]).is_cycle());
    links_are_cycles && facet_components(c, facets, |_| true).len() == 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orientation {
    /// `signs[f]` is `+1` when facet `f` keeps the orientation of its
    /// ascending vertex order and `−1` when reversed; `0` outside the surface.
    Orientable { signs: Vec<i8> },
    /// A closed chain of facets, each adjacent to the next, along which the
    /// propagated orientation returns reversed.
    NonOrientable { witness: Vec<FacetId> },
}

impl Orientation {
    pub fn is_orientable(&self) -> bool {
        matches!(self, Orientation::Orientable { .. })
    }
}

/// Sign of edge `e` in the oriented boundary of facet `f` with sign `s`.
fn induced(c: &DeltaComplex2, f: FacetId, e: EdgeId, s: i8) -> i8 {
    let slot = c.facets()[f].edges.iter().position(|&x| x == e).expect("edge of facet");
    s * Facet::boundary_sign(slot) as i8
}

/// The other facet of `facets` on an edge of degree two within the set.
fn across(c: &DeltaComplex2, member: &[bool], f: FacetId, e: EdgeId) -> FacetId {
    *c.facets_of_edge(e)
        .iter()
        .find(|&&g| g != f && member[g])
        .expect("surface edges have degree two")
}

/// Spanning-tree orientation of a closed surface by breadth-first propagation,
/// returned with the BFS parent of every facet.
pub(crate) fn propagate(c: &DeltaComplex2, facets: &[FacetId]) -> (Vec<i8>, Vec<Option<FacetId>>) {
    let mut member = vec![false; c.facet_count()];
    for &f in facets {
        member[f] = true;
    }
    let mut signs = vec![0i8; c.facet_count()];
    let mut parent = vec![None; c.facet_count()];
    let root = *facets.iter().min().expect("nonempty");
    signs[root] = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &e in &c.facets()[f].edges {
            let g = across(c, &member, f, e);
            if signs[g] == 0 {
                signs[g] = -induced(c, f, e, signs[f]) * induced(c, g, e, 1);
                parent[g] = Some(f);
                queue.push_back(g);
            }
        }
    }
    (signs, parent)
}

/// Whether the two facets on surface edge `e` induce opposite orientations.
pub(crate) fn coherent_across(c: &DeltaComplex2, signs: &[i8], f: FacetId, g: FacetId, e: EdgeId) -> bool {
    induced(c, f, e, signs[f]) == -induced(c, g, e, signs[g])
}

pub fn orientability(c: &DeltaComplex2, facets: &[FacetId]) -> Result<Orientation, TopologyError> {
    if !is_closed_surface(c, facets) {
        return Err(TopologyError::NotASurface);
    }
    let mut member = vec![false; c.facet_count()];
    for &f in facets {
        member[f] = true;
    }
    let (signs, parent) = propagate(c, facets);
    let mut sorted = facets.to_vec();
    sorted.sort_unstable();
    for &f in &sorted {
        for &e in &c.facets()[f].edges {
            let g = across(c, &member, f, e);
            if !coherent_across(c, &signs, f, g, e) {
                return Ok(Orientation::NonOrientable { witness: tree_cycle(&parent, f, g) });
            }
        }
    }
    Ok(Orientation::Orientable { signs })
}

/// The tree path from `f` up to the common ancestor and back down to `g`.
fn tree_cycle(parent: &[Option<FacetId>], f: FacetId, g: FacetId) -> Vec<FacetId> {
    let chain = |mut x: FacetId| {
        let mut out = vec![x];
        while let Some(p) = parent[x] {
            out.push(p);
            x = p;
        }
        out
    };
    let (a, b) = (chain(f), chain(g));
    let common = a.iter().find(|x| b.contains(x)).copied().expect("same tree");
    let mut cycle: Vec<FacetId> = a.iter().copied().take_while(|&x| x != common).collect();
    cycle.push(common);
    let down: Vec<FacetId> = b.iter().copied().take_while(|&x| x != common).collect();
    cycle.extend(down.into_iter().rev());
    cycle
}
