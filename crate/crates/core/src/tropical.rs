//! Structure constants, local intersection matrices and classification.

use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{AlphaEntry, ComplexError, DeltaComplex2, EdgeId, EdgeStar, VertexId};
use crate::inertia::{inertia_of_integer, Inertia, SymmetricRationalMatrix};

/// Structure constants, stored per edge as `[α(v, e), α(w, e)]` for the
/// stored endpoints `v < w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructureConstants {
    values: Vec<[i64; 2]>,
}

impl StructureConstants {
    pub fn from_pairs(values: Vec<[i64; 2]>) -> Self {
        StructureConstants { values }
    }

    /// Constants from the free parameters `t_e = α(v, e)` at the lower
    /// endpoint, with `α(w, e) = deg(e) − t_e`.
    pub fn from_lower_values(c: &DeltaComplex2, t: &[i64]) -> Self {
        let values = t
            .iter()
            .enumerate()
            .map(|(e, &x)| [x, c.facets_of_edge(e).len() as i64 - x])
            .collect();
        StructureConstants { values }
    }

    pub fn lower_values(&self) -> Vec<i64> {
        self.values.iter().map(|p| p[0]).collect()
    }

    pub fn pairs(&self) -> &[[i64; 2]] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `α(x, e)`, or `None` when `x` is not an endpoint of `e`.
    pub fn get(&self, c: &DeltaComplex2, e: EdgeId, x: VertexId) -> Option<i64> {
        let edge = c.edges().get(e)?;
        if edge.v == x {
            Some(self.values[e][0])
        } else if edge.w == x {
            Some(self.values[e][1])
        } else {
            None
        }
    }

    pub fn set(&mut self, c: &DeltaComplex2, e: EdgeId, x: VertexId, value: i64) {
        let edge = c.edges()[e];
        let slot = if edge.v == x { 0 } else { 1 };
        debug_assert!(edge.has_endpoint(x));
        self.values[e][slot] = value;
    }

    /// `α(w, e)` where `w` is the endpoint of `e` other than `x`.
    pub fn far(&self, c: &DeltaComplex2, e: EdgeId, x: VertexId) -> i64 {
        let edge = c.edges()[e];
        if edge.v == x {
            self.values[e][1]
        } else {
            self.values[e][0]
        }
    }

    pub fn push(&mut self, pair: [i64; 2]) {
        self.values.push(pair);
    }

    /// `alpha <eid> <vid> <int>` lines, two per edge, in edge order.
    pub fn to_alpha_lines(&self, c: &DeltaComplex2) -> String {
        let mut out = String::new();
        for (e, edge) in c.edges().iter().enumerate() {
            writeln!(out, "alpha {e} {} {}", edge.v, self.values[e][0]).unwrap();
            writeln!(out, "alpha {e} {} {}", edge.w, self.values[e][1]).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeViolation {
    pub edge: EdgeId,
    pub v: VertexId,
    pub w: VertexId,
    pub alpha_v: i64,
    pub alpha_w: i64,
    pub degree: usize,
}

impl std::fmt::Display for EdgeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "edge {}: alpha({}) + alpha({}) = {} + {} != degree {}",
            self.edge, self.v, self.w, self.alpha_v, self.alpha_w, self.degree
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropicalError {
    #[error("missing alpha for edge {edge} at vertex {vertex}")]
    MissingAlpha { edge: EdgeId, vertex: VertexId },
    #[error("line {line}: duplicate alpha for edge {edge} at vertex {vertex}")]
    DuplicateAlpha { edge: EdgeId, vertex: VertexId, line: usize },
    #[error("line {line}: vertex {vertex} is not an endpoint of edge {edge}")]
    NotAnEndpoint { edge: EdgeId, vertex: VertexId, line: usize },
    #[error("constraint violated on {} edge(s): {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    ConstraintViolated(Vec<EdgeViolation>),
    #[error("edge {0} does not have degree 2")]
    NotDegreeTwo(EdgeId),
    #[error("expected constants for {expected} edges, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Edges where `α(v, e) + α(w, e) ≠ deg(e)`.
pub fn constraint_violations(c: &DeltaComplex2, alpha: &StructureConstants) -> Vec<EdgeViolation> {
    c.edges()
        .iter()
        .enumerate()
        .filter_map(|(e, edge)| {
            let [a, b] = alpha.pairs()[e];
            let degree = c.facets_of_edge(e).len();
            (a + b != degree as i64).then_some(EdgeViolation {
                edge: e,
                v: edge.v,
                w: edge.w,
                alpha_v: a,
                alpha_w: b,
                degree,
            })
        })
        .collect()
}

/// A complex with structure constants satisfying `α(v,e) + α(w,e) = deg(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakTropicalSurface {
    complex: DeltaComplex2,
    alpha: StructureConstants,
}

impl WeakTropicalSurface {
    pub fn new(complex: DeltaComplex2, alpha: StructureConstants) -> Result<Self, TropicalError> {
        if alpha.len() != complex.edge_count() {
            return Err(TropicalError::WrongLength {
                expected: complex.edge_count(),
                found: alpha.len(),
            });
        }
        let violations = constraint_violations(&complex, &alpha);
        if !violations.is_empty() {
            return Err(TropicalError::ConstraintViolated(violations));
        }
        Ok(WeakTropicalSurface { complex, alpha })
    }

    pub fn complex(&self) -> &DeltaComplex2 {
        &self.complex
    }

    pub fn alpha(&self) -> &StructureConstants {
        &self.alpha
    }

    pub fn into_parts(self) -> (DeltaComplex2, StructureConstants) {
        (self.complex, self.alpha)
    }

    /// The edge star with its quotient vector `(1, …, 1, −α(v,e), −α(w,e))`.
    pub fn edge_star(&self, e: EdgeId) -> Result<EdgeStar, ComplexError> {
        let mut star = self.complex.edge_star(e)?;
        let [a, b] = self.alpha.pairs()[e];
        let mut q = vec![1; star.degree()];
        q.extend([-a, -b]);
        star.quotient_vector = Some(q);
        Ok(star)
    }

    pub fn local_matrix(&self, v: VertexId) -> Result<LocalMatrix, ComplexError> {
        local_matrix(&self.complex, &self.alpha, v)
    }

    pub fn classify(&self) -> Classification {
        classify(&self.complex, &self.alpha)
    }

    /// Fixture text including the `alpha` lines.
    pub fn to_fixture(&self) -> String {
        let mut s = self.complex.to_fixture();
        s.push_str(&self.alpha.to_alpha_lines(&self.complex));
        s
    }
}

/// Validates `alpha` fixture lines against a complex.
pub fn attach_constants(
    complex: DeltaComplex2,
    entries: &[AlphaEntry],
) -> Result<WeakTropicalSurface, TropicalError> {
    let mut seen: Vec<[Option<i64>; 2]> = vec![[None, None]; complex.edge_count()];
    for a in entries {
        let edge = complex.edge(a.edge)?;
        let slot = if edge.v == a.vertex {
            0
        } else if edge.w == a.vertex {
            1
        } else {
            return Err(TropicalError::NotAnEndpoint { edge: a.edge, vertex: a.vertex, line: a.line });
        };
        if seen[a.edge][slot].replace(a.value).is_some() {
            return Err(TropicalError::DuplicateAlpha { edge: a.edge, vertex: a.vertex, line: a.line });
        }
    }
    let mut values = Vec::with_capacity(seen.len());
    for (e, pair) in seen.iter().enumerate() {
        let edge = complex.edges()[e];
        match pair {
            [Some(a), Some(b)] => values.push([*a, *b]),
            [None, _] => return Err(TropicalError::MissingAlpha { edge: e, vertex: edge.v }),
            [_, None] => return Err(TropicalError::MissingAlpha { edge: e, vertex: edge.w }),
        }
    }
    WeakTropicalSurface::new(complex, StructureConstants::from_pairs(values))
}

/// All structure constants equal to 1 on a complex whose edges all have degree 2.
pub fn all_ones(complex: DeltaComplex2) -> Result<WeakTropicalSurface, TropicalError> {
    if let Some(e) = (0..complex.edge_count()).find(|&e| complex.facets_of_edge(e).len() != 2) {
        return Err(TropicalError::NotDegreeTwo(e));
    }
    let alpha = StructureConstants::from_pairs(vec![[1, 1]; complex.edge_count()]);
    WeakTropicalSurface::new(complex, alpha)
}

/// The local intersection matrix at a vertex, rows indexed by `edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMatrix {
    pub vertex: VertexId,
    pub edges: Vec<EdgeId>,
    pub matrix: SymmetricRationalMatrix,
}

/// Row-major integer entries of `M_v`, rows in ascending edge id.
///
/// Off-diagonal entries count facets containing both edges; the diagonal
/// entry for `e` is `−α(w, e)` with `w` the far endpoint.
pub fn local_matrix_entries(
    c: &DeltaComplex2,
    alpha: &StructureConstants,
    v: VertexId,
) -> (Vec<EdgeId>, Vec<i64>) {
    let edges = c.edges_at(v).to_vec();
    let n = edges.len();
    let mut m = vec![0i64; n * n];
    for (i, &e) in edges.iter().enumerate() {
        m[i * n + i] = -alpha.far(c, e, v);
    }
    for &f in c.facets_at(v) {
        let [a, b] = c.facets()[f].edges_at(v).expect("facet contains the vertex");
        let i = edges.binary_search(&a).expect("facet edge at v");
        let j = edges.binary_search(&b).expect("facet edge at v");
        m[i * n + j] += 1;
        m[j * n + i] += 1;
    }
    (edges, m)
}

pub fn local_matrix(
    c: &DeltaComplex2,
    alpha: &StructureConstants,
    v: VertexId,
) -> Result<LocalMatrix, ComplexError> {
    c.check_vertex(v)?;
    let (edges, m) = local_matrix_entries(c, alpha, v);
    let n = edges.len();
    let rows: Vec<Vec<i64>> = (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect();
    let matrix = SymmetricRationalMatrix::from_integer_rows(&rows).expect("M_v is symmetric");
    Ok(LocalMatrix { vertex: v, edges, matrix })
}

/// Inertia of `M_v`.
pub fn local_inertia(c: &DeltaComplex2, alpha: &StructureConstants, v: VertexId) -> Inertia {
    let (edges, m) = local_matrix_entries(c, alpha, v);
    inertia_of_integer(edges.len(), &m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    /// Some edge violates `α(v,e) + α(w,e) = deg(e)`.
    NotWeak,
    /// Weak, but some `M_v` has at least two positive eigenvalues.
    WeakOnly,
    /// Every `M_v` has at most one positive eigenvalue, and some has none.
    DegenerationCompatible,
    /// Every `M_v` has exactly one positive eigenvalue.
    Tropical,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::NotWeak => "NotWeak",
            Verdict::WeakOnly => "WeakOnly",
            Verdict::DegenerationCompatible => "DegenerationCompatible",
            Verdict::Tropical => "Tropical",
        }
    }

    /// Every `M_v` has at most one positive eigenvalue.
    pub fn at_most_one_positive(self) -> bool {
        matches!(self, Verdict::DegenerationCompatible | Verdict::Tropical)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexInertia {
    pub vertex: VertexId,
    pub degree: usize,
    pub inertia: Inertia,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub vertices: Vec<VertexInertia>,
    pub violations: Vec<EdgeViolation>,
}

pub fn classify(c: &DeltaComplex2, alpha: &StructureConstants) -> Classification {
    let violations = constraint_violations(c, alpha);
    let vertices: Vec<VertexInertia> = (0..c.vertex_count())
        .map(|v| VertexInertia {
            vertex: v,
            degree: c.vertex_degree(v),
            inertia: local_inertia(c, alpha, v),
        })
        .collect();
    let verdict = if !violations.is_empty() {
        Verdict::NotWeak
    } else if vertices.iter().any(|x| x.inertia.n_plus >= 2) {
        Verdict::WeakOnly
    } else if vertices.iter().all(|x| x.inertia.n_plus == 1) {
        Verdict::Tropical
    } else {
        Verdict::DegenerationCompatible
    };
    Classification { verdict, vertices, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, Fixture};
    use crate::inertia::inertia;

    fn load(raw: &str) -> DeltaComplex2 {
        build_complex(raw).unwrap()
    }

    const OCTAHEDRON: &str = include_str!("../fixtures/octahedron.trs");
    const ICOSAHEDRON: &str = include_str!("../fixtures/icosahedron.trs");
    const PILLOW: &str = include_str!("../fixtures/pillow.trs");
    const TORUS7: &str = include_str!("../fixtures/torus7.trs");
    const TORUS7_ONES: &str = include_str!("../fixtures/torus7_ones.trs");
    const TRIANGLE: &str = include_str!("../fixtures/triangle.trs");
    const TORUS_FIN: &str = include_str!("../fixtures/torus_fin.trs");
    const GENUS2: &str = include_str!("../fixtures/genus2.trs");

    fn entries(c: &DeltaComplex2, alpha: &StructureConstants) -> Vec<AlphaEntry> {
        let fx = Fixture::parse(&format!("{}{}", c.to_fixture(), alpha.to_alpha_lines(c))).unwrap();
        fx.alpha
    }

    #[test]
    fn torus_alpha_lines_attach() {
        let fx = Fixture::parse(TORUS7_ONES).unwrap();
        let w = attach_constants(fx.complex, &fx.alpha).unwrap();
        assert!(w.alpha().pairs().iter().all(|p| *p == [1, 1]));
        assert_eq!(w.classify().verdict, Verdict::Tropical);
    }

    #[test]
    fn octahedron_constraint_violation_is_reported() {
        let c = load(OCTAHEDRON);
        let mut alpha = StructureConstants::from_pairs(vec![[1, 1]; c.edge_count()]);
        alpha.values[3] = [2, 1];
        let err = attach_constants(c.clone(), &entries(&c, &alpha)).unwrap_err();
        match err {
            TropicalError::ConstraintViolated(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!((v[0].edge, v[0].alpha_v, v[0].alpha_w, v[0].degree), (3, 2, 1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        // every violated edge is listed
        alpha.values[5] = [0, 0];
        assert_eq!(classify(&c, &alpha).violations.len(), 2);
        assert_eq!(classify(&c, &alpha).verdict, Verdict::NotWeak);
    }

    #[test]
    fn missing_and_duplicate_alpha() {
        let c = load(TRIANGLE);
        let alpha = StructureConstants::from_pairs(vec![[1, 0]; 3]);
        let mut e = entries(&c, &alpha);
        let dup = e[0];
        e.push(dup);
        assert!(matches!(attach_constants(c.clone(), &e), Err(TropicalError::DuplicateAlpha { .. })));
        let e = entries(&c, &alpha)[1..].to_vec();
        assert_eq!(
            attach_constants(c.clone(), &e),
            Err(TropicalError::MissingAlpha { edge: 0, vertex: 0 })
        );
        let bad = vec![AlphaEntry { edge: 2, vertex: 0, value: 1, line: 9 }];
        assert!(matches!(attach_constants(c, &bad), Err(TropicalError::NotAnEndpoint { .. })));
    }

    #[test]
    fn lone_triangle_with_one_zero_constants_is_weak() {
        let c = load(TRIANGLE);
        let alpha = StructureConstants::from_pairs(vec![[1, 0]; 3]);
        assert!(attach_constants(c.clone(), &entries(&c, &alpha)).is_ok());
    }

    #[test]
    fn all_ones_requires_degree_two() {
        assert!(all_ones(load(OCTAHEDRON)).is_ok());
        assert!(all_ones(load(TORUS7)).is_ok());
        assert_eq!(all_ones(load(TORUS_FIN)), Err(TropicalError::NotDegreeTwo(0)));
    }

    #[test]
    fn icosahedron_matrix_is_the_five_cycle() {
        let w = all_ones(load(ICOSAHEDRON)).unwrap();
        for v in 0..12 {
            let m = w.local_matrix(v).unwrap();
            let rows = m.matrix.to_integer_rows().unwrap();
            assert_eq!(rows.len(), 5);
            for (i, row) in rows.iter().enumerate() {
                assert_eq!(row[i], -1);
                assert_eq!(row.iter().filter(|&&x| x == 1).count(), 2);
                assert_eq!(row.iter().sum::<i64>(), 1);
            }
            assert_eq!(inertia(&m.matrix).n_plus, 1);
        }
    }

    #[test]
    fn pillow_matrix_counts_both_facets() {
        let w = all_ones(load(PILLOW)).unwrap();
        for v in 0..3 {
            let rows = w.local_matrix(v).unwrap().matrix.to_integer_rows().unwrap();
            assert_eq!(rows, vec![vec![-1, 2], vec![2, -1]]);
        }
        assert_eq!(w.classify().verdict, Verdict::Tropical);
    }

    #[test]
    fn lone_triangle_zero_far_constants() {
        let c = load(TRIANGLE);
        // vertex 0: α(1, e01) = 0 and α(2, e02) = 0
        let alpha = StructureConstants::from_pairs(vec![[1, 0], [1, 0], [1, 0]]);
        let m = local_matrix(&c, &alpha, 0).unwrap();
        assert_eq!(m.matrix.to_integer_rows().unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(local_matrix(&c, &alpha, 7), Err(ComplexError::UnknownId { .. })));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(all_ones(load(TORUS7)).unwrap().classify().verdict, Verdict::Tropical);
        assert_eq!(all_ones(load(OCTAHEDRON)).unwrap().classify().verdict, Verdict::Tropical);
        let g = all_ones(load(GENUS2)).unwrap().classify();
        assert_ne!(g.verdict, Verdict::Tropical);
        assert!(g.vertices.iter().any(|x| x.degree >= 7 && x.inertia.n_plus >= 2));
        for x in &g.vertices {
            // all-ones vertex of degree m: tropical exactly when m ≤ 6
            assert_eq!(x.inertia.n_plus == 1, x.degree <= 6, "vertex {}", x.vertex);
        }
    }

    #[test]
    fn quotient_vector_sums_to_zero_exactly_when_weak() {
        let c = load(TORUS_FIN);
        let alpha = StructureConstants::from_lower_values(&c, &vec![1; c.edge_count()]);
        let w = WeakTropicalSurface::new(c.clone(), alpha).unwrap();
        for e in 0..c.edge_count() {
            let q = w.edge_star(e).unwrap().quotient_vector.unwrap();
            assert_eq!(q.iter().sum::<i64>(), 0);
            assert_eq!(q.len(), c.facets_of_edge(e).len() + 2);
        }
        let bad = StructureConstants::from_pairs(vec![[1, 1]; c.edge_count()]);
        let violated: Vec<EdgeId> = constraint_violations(&c, &bad).iter().map(|v| v.edge).collect();
        let unbalanced: Vec<EdgeId> = (0..c.edge_count())
            .filter(|&e| 2 != c.facets_of_edge(e).len())
            .collect();
        assert_eq!(violated, unbalanced);
    }
}
