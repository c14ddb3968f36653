//! Linear functions, sections of the quotient by constants, and their
//! classes in first cohomology.
//!
//! A vertex potential `h` is linear when every edge `e = vw` with opposite
//! vertices `o₁, …, o_d` satisfies
//!
//! ```text
//! h(o₁) + … + h(o_d) = α(v, e)·h(v) + α(w, e)·h(w).
//! ```
//!
//! A section of the quotient sheaf is an integer 1-cochain `g`, stored per
//! edge as `g(v → w)` for its endpoints `v < w`, which is a simplicial cocycle
//! and satisfies `Σ g(v → oᵢ) = α(w, e)·g(v → w)` on every edge, where
//! `g(v → oᵢ)` is read on the edge of the `i`-th facet joining `v` and `oᵢ`.
//! Locally such a `g` is the difference cochain of a linear potential, which
//! is defined only up to an additive constant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::complex::{ComplexError, DeltaComplex2, EdgeId, FacetId, VertexId};
use crate::linalg::{self, q, QVec, ZVec};
use crate::topology::{edge_boundary_rows, facet_boundary_rows, is_connected_codim1};
use crate::tropical::{StructureConstants, Verdict, WeakTropicalSurface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("cochain is not a cocycle on facet {0}")]
    NotACocycle(FacetId),
    #[error("expected {expected} values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `g(from → other end of e)` in terms of the stored value on `e`.
pub fn oriented(c: &DeltaComplex2, g: &[BigInt], e: EdgeId, from: VertexId) -> BigInt {
    if c.edges()[e].v == from {
        g[e].clone()
    } else {
        -g[e].clone()
    }
}

/// Coefficients over edges of `Σ g(from → oᵢ) − α(to, e)·g(from → to)`.
fn balancing_row(c: &DeltaComplex2, alpha: &StructureConstants, e: EdgeId, from: VertexId) -> Vec<i64> {
    let edge = c.edges()[e];
    let to = edge.other(from).expect("endpoint");
    let sign = |x: EdgeId| if c.edges()[x].v == from { 1 } else { -1 };
    let mut row = vec![0i64; c.edge_count()];
    for &f in c.facets_of_edge(e) {
        let facet = &c.facets()[f];
        let o = facet.opposite_vertex(e).expect("facet on e");
        let side = facet.edge_between(from, o).expect("facet edge");
        row[side] += sign(side);
    }
    row[e] -= alpha.get(c, e, to).expect("endpoint") * sign(e);
    row
}

/// The value of `Σ g(from → oᵢ) − α(to, e)·g(from → to)`.
pub fn balancing_residual(
    c: &DeltaComplex2,
    alpha: &StructureConstants,
    g: &[BigInt],
    e: EdgeId,
    from: VertexId,
) -> BigInt {
    balancing_row(c, alpha, e, from)
        .iter()
        .zip(g)
        .map(|(&a, x)| BigInt::from(a) * x)
        .sum()
}

fn section_rows(c: &DeltaComplex2, alpha: &StructureConstants) -> Vec<Vec<i64>> {
    let mut rows = facet_boundary_rows(c);
    for (e, edge) in c.edges().iter().enumerate() {
        rows.push(balancing_row(c, alpha, e, edge.v));
    }
    rows
}

fn potential_rows(c: &DeltaComplex2, alpha: &StructureConstants) -> Vec<Vec<i64>> {
    (0..c.edge_count()).map(|e| potential_row(c, alpha, e)).collect()
}

/// Whether a potential satisfies the balancing law on edge `e`.
pub fn is_balanced_at(c: &DeltaComplex2, alpha: &StructureConstants, h: &[BigRational], e: EdgeId) -> bool {
    potential_row(c, alpha, e)
        .iter().zip(h).map(|(&a, x)| q(a) * x).sum::<BigRational>().is_zero()
}

fn potential_row(c: &DeltaComplex2, alpha: &StructureConstants, e: EdgeId) -> Vec<i64> {
    let edge = c.edges()[e];
    let mut row = vec![0i64; c.vertex_count()];
    for &f in c.facets_of_edge(e) {
        row[c.facets()[f].opposite_vertex(e).expect("facet on e")] += 1;
    }
    let [a, b] = alpha.pairs()[e];
    row[edge.v] -= a;
    row[edge.w] -= b;
    row
}

/// A basis of linear potentials modulo constants, normalized by `h(0) = 0`
/// and read off the reduced echelon form.
pub fn global_linear_functions(w: &WeakTropicalSurface) -> Vec<QVec> {
    let c = w.complex();
    let mut rows = potential_rows(c, w.alpha());
    let mut pin = vec![0; c.vertex_count()];
    pin[0] = 1;
    rows.push(pin);
    linalg::rational_kernel(&linalg::to_q_rows(&rows), c.vertex_count())
}

/// A basis of `H¹(Δ, ℚ)`: cocycles completing the coboundaries, chosen
/// greedily from the echelon basis of the cocycle space.
pub fn cohomology_basis(c: &DeltaComplex2) -> Vec<QVec> {
    let n = c.edge_count();
    let mut span = coboundary_basis(c);
    let base = span.len();
    let cocycles = linalg::rational_kernel(&linalg::to_q_rows(&facet_boundary_rows(c)), n);
    for z in cocycles {
        span.push(z);
        if linalg::rank_q(&span, n) < span.len() {
            span.pop();
        }
    }
    span.split_off(base)
}

fn coboundary_basis(c: &DeltaComplex2) -> Vec<QVec> {
    // columns of the edge boundary matrix are the coboundaries of vertices
    let rows = edge_boundary_rows(c);
    let mut out: Vec<QVec> = Vec::new();
    for x in 0..c.vertex_count() {
        out.push(rows.iter().map(|r| q(r[x])).collect());
        if linalg::rank_q(&out, c.edge_count()) < out.len() {
            out.pop();
        }
    }
    out
}

/// Coordinates of the class of a cocycle in [`cohomology_basis`].
pub fn class_in_h1(c: &DeltaComplex2, g: &[BigInt]) -> Result<QVec, SheafError> {
    if g.len() != c.edge_count() {
        return Err(SheafError::WrongLength { expected: c.edge_count(), found: g.len() });
    }
    for (f, row) in facet_boundary_rows(c).iter().enumerate() {
        let s: BigInt = row.iter().zip(g).map(|(&a, x)| BigInt::from(a) * x).sum();
        if !s.is_zero() {
            return Err(SheafError::NotACocycle(f));
        }
    }
    let h1 = cohomology_basis(c);
    let k = h1.len();
    let mut columns = h1;
    columns.extend(coboundary_basis(c));
    let rhs: QVec = g.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let coords = linalg::solve_in_span(&columns, &rhs).expect("cocycles lie in the span");
    Ok(coords[..k].to_vec())
}

/// `g(v0 → v1), g(v0 → v2)` on a facet with ascending vertices.
pub fn restrict_to_facet(c: &DeltaComplex2, s: FacetId, g: &[BigInt]) -> Result<[BigInt; 2], SheafError> {
    let facet = c.facet(s)?;
    if g.len() != c.edge_count() {
        return Err(SheafError::WrongLength { expected: c.edge_count(), found: g.len() });
    }
    Ok([g[facet.edges[0]].clone(), g[facet.edges[1]].clone()])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafSummary {
    /// Rank of linear functions modulo constants.
    pub linear_rank: usize,
    /// Rank of the sections of the quotient sheaf.
    pub sections_rank: usize,
    /// Rank of the image of the sections in `H¹(Δ, ℚ)`.
    pub image_rank: usize,
    pub b1: usize,
    pub linear_basis: Vec<QVec>,
    /// Saturated integer basis in Hermite normal form, one value per edge.
    pub section_basis: Vec<ZVec>,
    /// Classes of the basis sections in `H¹(Δ, ℚ)`.
    pub classes: Vec<QVec>,
}

impl SheafSummary {
    /// `rank H⁰(𝒟) = rank(linear mod constants) + rank(image in H¹)`.
    pub fn is_exact(&self) -> bool {
        self.sections_rank == self.linear_rank + self.image_rank
    }
}

pub fn sections_of_d(w: &WeakTropicalSurface) -> SheafSummary {
    let c = w.complex();
    let rows = section_rows(c, w.alpha());
    let section_basis = linalg::integer_kernel(&linalg::to_q_rows(&rows), c.edge_count());
    let linear_basis = global_linear_functions(w);
    let classes: Vec<QVec> = section_basis
        .iter()
        .map(|g| class_in_h1(c, g).expect("sections are cocycles"))
        .collect();
    let b1 = cohomology_basis(c).len();
    let image_rank = linalg::rank_q(&classes, b1);
    SheafSummary {
        linear_rank: linear_basis.len(),
        sections_rank: section_basis.len(),
        image_rank,
        b1,
        linear_basis,
        section_basis,
        classes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludedFacet {
    pub facet: FacetId,
    /// Dimension of the solutions of the local system.
    pub solution_dimension: usize,
    pub constant_forced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllButOneReport {
    pub edge: EdgeId,
    pub degree: usize,
    /// `c` with `𝐞₁ = c₂𝐞₂ + … + c_{d+2}𝐞_{d+2}` in the quotient lattice.
    pub dependency: Vec<i64>,
    pub excluded: Vec<ExcludedFacet>,
}

impl AllButOneReport {
    pub fn constant_forced(&self) -> bool {
        self.excluded.iter().all(|x| x.constant_forced)
    }
}

/// Checks on the star of `e` that a linear function constant on all facets
/// but one is constant.
///
/// Unknowns are the values at `o₁, …, o_d, v, w`, one per vertex of the
/// local complex. For each excluded facet `j` the system is the balancing
/// law together with equality of all values other than `o_j`.
pub fn check_all_but_one(w: &WeakTropicalSurface, e: EdgeId) -> Result<AllButOneReport, SheafError> {
    let c = w.complex();
    let star = c.edge_star(e)?;
    let d = star.degree();
    let [av, aw] = w.alpha().pairs()[e];
    let n = d + 2;
    let mut balance = vec![1i64; d];
    balance.extend([-av, -aw]);

    let mut excluded = Vec::with_capacity(d);
    for (j, &facet) in star.incident_facets.iter().enumerate() {
        let mut rows = vec![balance.clone()];
        let rest: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        for pair in rest.windows(2) {
            let mut row = vec![0i64; n];
            row[pair[0]] = 1;
            row[pair[1]] = -1;
            rows.push(row);
        }
        let kernel = linalg::rational_kernel(&linalg::to_q_rows(&rows), n);
        let constant_forced = kernel.len() == 1 && kernel[0].iter().all(|x| *x == kernel[0][0]);
        excluded.push(ExcludedFacet { facet, solution_dimension: kernel.len(), constant_forced });
    }
    let mut dependency = vec![-1i64; d.saturating_sub(1)];
    dependency.extend([av, aw]);
    Ok(AllButOneReport { edge: e, degree: d, dependency, excluded })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaxPrinciple {
    HypothesisNotMet(String),
    /// The principle holds; `interior_maximum` records whether the maximum
    /// was attained at a vertex of the set.
    Holds { interior_maximum: bool },
    /// A nonconstant balanced potential with an interior maximum.
    Counterexample { vertex: VertexId },
}

/// Probes the maximum principle on the union of open stars of `vertices`.
///
/// `h` gives a value for every vertex; only the closure of the union is read.
pub fn max_principle_probe(w: &WeakTropicalSurface, vertices: &[VertexId], h: &[BigRational]) -> MaxPrinciple {
    let c = w.complex();
    if w.classify().verdict != Verdict::Tropical {
        return MaxPrinciple::HypothesisNotMet("structure is not tropical".into());
    }
    if !is_connected_codim1(c) {
        return MaxPrinciple::HypothesisNotMet("not connected through codimension 1".into());
    }
    if h.len() != c.vertex_count() || vertices.is_empty() || vertices.iter().any(|&v| v >= c.vertex_count()) {
        return MaxPrinciple::HypothesisNotMet("vertex set or potential out of range".into());
    }
    let mut inside = vec![false; c.vertex_count()];
    for &v in vertices {
        inside[v] = true;
    }
    // the set is connected through its edges
    let mut seen = vec![false; c.vertex_count()];
    let mut stack = vec![vertices[0]];
    seen[vertices[0]] = true;
    while let Some(x) = stack.pop() {
        for &e in c.edges_at(x) {
            let y = c.edges()[e].other(x).unwrap();
            if inside[y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if vertices.iter().any(|&v| !seen[v]) {
        return MaxPrinciple::HypothesisNotMet("vertex set is not connected".into());
    }
    let interior_edges: Vec<EdgeId> = (0..c.edge_count())
        .filter(|&e| inside[c.edges()[e].v] || inside[c.edges()[e].w])
        .collect();
    if let Some(&e) = interior_edges.iter().find(|&&e| !is_balanced_at(c, w.alpha(), h, e)) {
        return MaxPrinciple::HypothesisNotMet(format!("potential is not balanced on edge {e}"));
    }
    let mut closure = inside.clone();
    for &e in &interior_edges {
        let edge = c.edges()[e];
        closure[edge.v] = true;
        closure[edge.w] = true;
        for &f in c.facets_of_edge(e) {
            for &x in &c.facets()[f].vertices {
                closure[x] = true;
            }
        }
    }
    let closure_vertices: Vec<VertexId> = (0..c.vertex_count()).filter(|&x| closure[x]).collect();
    let max = closure_vertices.iter().map(|&x| &h[x]).max().expect("nonempty");
    let Some(&at) = vertices.iter().find(|&&v| &h[v] == max) else {
        return MaxPrinciple::Holds { interior_maximum: false };
    };
    if closure_vertices.iter().all(|&x| &h[x] == max) {
        MaxPrinciple::Holds { interior_maximum: true }
    } else {
        MaxPrinciple::Counterexample { vertex: at }
    }
}

/// The coboundary `g(v → w) = h(w) − h(v)` of an integer potential.
pub fn coboundary(c: &DeltaComplex2, h: &[BigInt]) -> ZVec {
    c.edges().iter().map(|e| &h[e.w] - &h[e.v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::tropical::all_ones;

    fn load(name: &str) -> DeltaComplex2 {
        let path = format!("{}/fixtures/{name}.trs", env!("CARGO_MANIFEST_DIR"));
        build_complex(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn ints(v: &[i64]) -> ZVec {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn octahedron_has_no_sections() {
        let s = sections_of_d(&all_ones(load("octahedron")).unwrap());
        assert_eq!((s.linear_rank, s.sections_rank, s.image_rank, s.b1), (0, 0, 0, 0));
    }

    #[test]
    fn torus_sections_meet_the_codimension_bound() {
        let s = sections_of_d(&all_ones(load("torus7")).unwrap());
        assert_eq!(s.linear_rank, 0);
        assert_eq!(s.b1, 2);
        assert!(s.image_rank + 1 >= s.b1);
        assert!(s.is_exact());
        for class in &s.classes {
            assert!(class.iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn lone_triangle_has_no_sections() {
        let c = load("triangle");
        for t in -3..=3i64 {
            for u in -3..=3i64 {
                for r in -3..=3i64 {
                    let alpha = StructureConstants::from_lower_values(&c, &[t, u, r]);
                    let w = WeakTropicalSurface::new(c.clone(), alpha).unwrap();
                    let s = sections_of_d(&w);
                    assert_eq!((s.linear_rank, s.sections_rank), (0, 0), "t = {t}, {u}, {r}");
                }
            }
        }
    }

    #[test]
    fn balancing_from_the_far_endpoint_is_implied() {
        for name in ["torus7", "pillow", "klein8"] {
            let w = all_ones(load(name)).unwrap();
            let c = w.complex();
            for g in sections_of_d(&w).section_basis {
                for (e, edge) in c.edges().iter().enumerate() {
                    assert!(balancing_residual(c, w.alpha(), &g, e, edge.v).is_zero());
                    assert!(balancing_residual(c, w.alpha(), &g, e, edge.w).is_zero());
                }
            }
        }
    }

    #[test]
    fn coboundaries_have_zero_class() {
        let c = load("genus2");
        let h = ints(&[3, -1, 4, 1, -5, 9, 2, -6, 5, 3]);
        let g = coboundary(&c, &h);
        assert!(class_in_h1(&c, &g).unwrap().iter().all(|x| x.is_zero()));
        assert_eq!(cohomology_basis(&c).len(), 4);
        let zero = vec![BigInt::zero(); c.edge_count()];
        assert!(class_in_h1(&c, &zero).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn non_cocycles_are_rejected() {
        let c = load("triangle");
        assert_eq!(class_in_h1(&c, &ints(&[1, 0, 0])), Err(SheafError::NotACocycle(0)));
    }

    #[test]
    fn restriction_reads_two_edges() {
        let c = load("octahedron");
        let zero = vec![BigInt::zero(); c.edge_count()];
        assert_eq!(restrict_to_facet(&c, 0, &zero).unwrap(), [BigInt::zero(), BigInt::zero()]);
        assert!(matches!(restrict_to_facet(&c, 99, &zero), Err(SheafError::Complex(_))));
    }

    #[test]
    fn all_but_one() {
        let w = all_ones(load("torus7")).unwrap();
        let r = check_all_but_one(&w, 0).unwrap();
        assert_eq!(r.degree, 2);
        assert_eq!(r.dependency, vec![-1, 1, 1]);
        assert!(r.constant_forced());

        let c = load("torus_fin");
        let alpha = StructureConstants::from_lower_values(&c, &vec![1; c.edge_count()]);
        let w = WeakTropicalSurface::new(c, alpha).unwrap();
        let r = check_all_but_one(&w, 0).unwrap();
        assert_eq!((r.degree, r.excluded.len()), (3, 3));
        assert!(r.constant_forced());
        assert_eq!(r.dependency, vec![-1, -1, 1, 2]);
        // a degree-1 edge of the fin
        let e = (0..w.complex().edge_count()).find(|&e| w.complex().facets_of_edge(e).len() == 1).unwrap();
        let r = check_all_but_one(&w, e).unwrap();
        assert_eq!(r.degree, 1);
        assert!(r.constant_forced());
    }

    #[test]
    fn maximum_principle() {
        let w = all_ones(load("octahedron")).unwrap();
        let h = vec![q(0); 6];
        assert_eq!(max_principle_probe(&w, &[0, 2], &h), MaxPrinciple::Holds { interior_maximum: true });
        // an unbalanced bump is outside the hypothesis
        let mut bump = h.clone();
        bump[0] = q(1);
        assert!(matches!(max_principle_probe(&w, &[0], &bump), MaxPrinciple::HypothesisNotMet(_)));
        // non-tropical structure
        let g = all_ones(load("genus2")).unwrap();
        assert!(matches!(
            max_principle_probe(&g, &[0], &vec![q(0); 10]),
            MaxPrinciple::HypothesisNotMet(_)
        ));
        // disconnected set: 0 and 1 are antipodal in the octahedron
        assert!(matches!(max_principle_probe(&w, &[0, 1], &h), MaxPrinciple::HypothesisNotMet(_)));
    }
}
