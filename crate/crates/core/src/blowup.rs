//! Attaching triangles to repair vertices whose local matrix has no positive
//! eigenvalue.

use std::fmt;

use thiserror::Error;

use crate::complex::{ComplexError, DeltaComplex2, EdgeId, FacetId, VertexId};
use crate::inertia::Inertia;
use crate::tropical::{local_inertia, StructureConstants, TropicalError, Verdict, WeakTropicalSurface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("vertex {vertex} has {n_plus} positive eigenvalue(s); expected none")]
    NotSemidefiniteAtVertex { vertex: VertexId, n_plus: usize },
    #[error("edge {edge} does not contain vertex {vertex}")]
    NotIncident { vertex: VertexId, edge: EdgeId },
    #[error("vertex {vertex} has {n_plus} positive eigenvalues; at most one is allowed")]
    PreconditionViolated { vertex: VertexId, n_plus: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

/// One attached triangle `(v, w, u)` on the edge `e = vw`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowupRecord {
    pub vertex: VertexId,
    pub edge: EdgeId,
    pub far: VertexId,
    pub new_vertex: VertexId,
    /// The new edge from `vertex` to `new_vertex`.
    pub edge_v: EdgeId,
    /// The new edge from `far` to `new_vertex`.
    pub edge_w: EdgeId,
    pub facet: FacetId,
    /// `α(w, e)`, unchanged.
    pub alpha_far_e: i64,
    /// `α(v, e) + 1`.
    pub alpha_vertex_e: i64,
    /// `α(w, e_w) = 0`.
    pub alpha_far_ew: i64,
    /// `α(u, e_w) = 1`.
    pub alpha_new_ew: i64,
    /// `α(v, e_v) = 2`.
    pub alpha_vertex_ev: i64,
    /// `α(u, e_v) = −1`.
    pub alpha_new_ev: i64,
    pub inertia_new: Inertia,
    pub inertia_vertex_before: Inertia,
    pub inertia_vertex_after: Inertia,
    pub inertia_far_before: Inertia,
    pub inertia_far_after: Inertia,
}

impl fmt::Display for BlowupRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "blowup v={} e={} w={} u'={} e_v'={} e_w'={} f={} n_plus(u')={} n_plus(v')={} n_plus(w')={}",
            self.vertex,
            self.edge,
            self.far,
            self.new_vertex,
            self.edge_v,
            self.edge_w,
            self.facet,
            self.inertia_new.n_plus,
            self.inertia_vertex_after.n_plus,
            self.inertia_far_after.n_plus,
        )
    }
}

/// Glues a triangle onto `e` at the semidefinite vertex `v`.
///
/// The new vertex, edges and facet take the next free ids, with the edge to
/// `w` numbered before the edge to `v`.
pub fn blow_up_at(
    surface: &WeakTropicalSurface,
    v: VertexId,
    e: EdgeId,
) -> Result<(WeakTropicalSurface, BlowupRecord), BlowupError> {
    let c = surface.complex();
    let alpha = surface.alpha();
    c.check_vertex(v)?;
    let edge = *c.edge(e)?;
    let Some(w) = edge.other(v) else {
        return Err(BlowupError::NotIncident { vertex: v, edge: e });
    };
    let before_v = local_inertia(c, alpha, v);
    if before_v.n_plus != 0 {
        return Err(BlowupError::NotSemidefiniteAtVertex { vertex: v, n_plus: before_v.n_plus });
    }
    let before_w = local_inertia(c, alpha, w);

    let u = c.vertex_count();
    let edge_w = c.edge_count();
    let edge_v = edge_w + 1;
    let facet = c.facet_count();
    let mut edges: Vec<(VertexId, VertexId)> = c.edges().iter().map(|x| (x.v, x.w)).collect();
    edges.push((w, u));
    edges.push((v, u));
    let mut facets: Vec<([VertexId; 3], [EdgeId; 3])> =
        c.facets().iter().map(|f| (f.vertices, f.edges)).collect();
    facets.push(([v, w, u], [e, edge_v, edge_w]));
    let complex = DeltaComplex2::new(u + 1, edges, facets)?;

    let alpha_v_e = alpha.get(c, e, v).expect("endpoint");
    let alpha_w_e = alpha.get(c, e, w).expect("endpoint");
    let mut next = alpha.clone();
    next.set(c, e, v, alpha_v_e + 1);
    // both new edges have the new vertex as their larger endpoint
    next.push([0, 1]);
    next.push([2, -1]);
    let out = WeakTropicalSurface::new(complex, next)?;

    let oc = out.complex();
    let record = BlowupRecord {
        vertex: v,
        edge: e,
        far: w,
        new_vertex: u,
        edge_v,
        edge_w,
        facet,
        alpha_far_e: alpha_w_e,
        alpha_vertex_e: alpha_v_e + 1,
        alpha_far_ew: 0,
        alpha_new_ew: 1,
        alpha_vertex_ev: 2,
        alpha_new_ev: -1,
        inertia_new: local_inertia(oc, out.alpha(), u),
        inertia_vertex_before: before_v,
        inertia_vertex_after: local_inertia(oc, out.alpha(), v),
        inertia_far_before: before_w,
        inertia_far_after: local_inertia(oc, out.alpha(), w),
    };
    Ok((out, record))
}

/// Blows up every vertex with no positive eigenvalue, in ascending order,
/// each along its lowest-id edge.
pub fn robustify(
    surface: &WeakTropicalSurface,
) -> Result<(WeakTropicalSurface, Vec<BlowupRecord>), BlowupError> {
    let classification = surface.classify();
    if let Some(x) = classification.vertices.iter().find(|x| x.inertia.n_plus >= 2) {
        return Err(BlowupError::PreconditionViolated { vertex: x.vertex, n_plus: x.inertia.n_plus });
    }
    let pending: Vec<VertexId> = classification
        .vertices
        .iter()
        .filter(|x| x.inertia.n_plus == 0)
        .map(|x| x.vertex)
        .collect();
    let mut current = surface.clone();
    let mut records = Vec::with_capacity(pending.len());
    for v in pending {
        let e = current.complex().edges_at(v)[0];
        let (next, record) = blow_up_at(&current, v, e)?;
        assert_eq!(record.inertia_new.n_plus, 1);
        assert_eq!(record.inertia_vertex_after.n_plus, 1);
        assert_eq!(record.inertia_far_after, record.inertia_far_before.with_extra_negative());
        current = next;
        records.push(record);
    }
    debug_assert_eq!(current.classify().verdict, Verdict::Tropical);
    Ok((current, records))
}

/// Constants after a blow-up, recomputed from scratch for auditing.
pub fn expected_constants(
    c: &DeltaComplex2,
    alpha: &StructureConstants,
    record: &BlowupRecord,
) -> Vec<[i64; 2]> {
    let mut out = alpha.pairs().to_vec();
    let edge = c.edges()[record.edge];
    let slot = usize::from(edge.v != record.vertex);
    out[record.edge][slot] += 1;
    out.push([record.alpha_far_ew, record.alpha_new_ew]);
    out.push([record.alpha_vertex_ev, record.alpha_new_ev]);
    out
}
