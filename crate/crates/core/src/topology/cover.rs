use std::fmt::Write as _;

use crate::complex::{CoverKind, DeltaComplex2, EdgeId, FacetId, VertexId};
use crate::recognizer::{verify_decomposition, Decomposition, Ornaments};
use crate::tropical::StructureConstants;

use super::{coherent_across, orientability, propagate, TopologyError};

/// An orientation double cover. Every simplex `x` of the base has the two
/// lifts `2x` and `2x + 1`; the low bit is the sheet.
#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub complex: DeltaComplex2,
    pub alpha: Option<StructureConstants>,
    pub decomposition: Decomposition,
}

impl DoubleCover {
    pub fn base_vertex(&self, v: VertexId) -> (VertexId, u8) {
        (v / 2, (v % 2) as u8)
    }

    pub fn base_edge(&self, e: EdgeId) -> (EdgeId, u8) {
        (e / 2, (e % 2) as u8)
    }

    pub fn base_facet(&self, f: FacetId) -> (FacetId, u8) {
        (f / 2, (f % 2) as u8)
    }

    /// `cover`, `cover-edge` and `cover-facet` lines of the covering map.
    pub fn cover_lines(&self) -> String {
        let c = &self.complex;
        let mut out = String::new();
        for (kind, n) in [
            (CoverKind::Vertex, c.vertex_count()),
            (CoverKind::Edge, c.edge_count()),
            (CoverKind::Facet, c.facet_count()),
        ] {
            for x in 0..n {
                writeln!(out, "{} {x} {} {}", kind.keyword(), x / 2, x % 2).unwrap();
            }
        }
        out
    }

    /// The cover as a fixture, with pulled-back constants and the covering map.
    pub fn to_fixture(&self) -> String {
        let mut s = self.complex.to_fixture();
        if let Some(a) = &self.alpha {
            s.push_str(&a.to_alpha_lines(&self.complex));
        }
        s.push_str(&self.cover_lines());
        s
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Index of `(facet, sheet, position)` for the three corners or edge slots.
fn key(f: FacetId, sheet: usize, pos: usize) -> usize {
    (f * 2 + sheet) * 3 + pos
}

/// Builds the orientation double cover of a manifold with fins.
///
/// `Σ` is doubled by its orientation double cover; each fin, being
/// contractible, lifts to two disjoint copies attached along the two lifts of
/// its path. Fin `k` lifts to fins `2k` and `2k + 1` (0-based).
pub fn orientation_double_cover(
    c: &DeltaComplex2,
    alpha: Option<&StructureConstants>,
    d: &Decomposition,
) -> Result<DoubleCover, TopologyError> {
    let report = verify_decomposition(c, d)
        .map_err(|e| TopologyError::NotVerifiedDecomposition(e.to_string()))?;
    if !report.is_valid() {
        let msg: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(TopologyError::NotVerifiedDecomposition(msg.join("; ")));
    }
    if !d.ornaments.is_empty() {
        return Err(TopologyError::NotVerifiedDecomposition("ornaments must be empty".into()));
    }
    let sigma = d.sigma_subcomplex(c)?;
    let sigma_facets = sigma.facet_ids();
    if orientability(c, &sigma_facets)?.is_orientable() {
        return Err(TopologyError::AlreadyOrientable);
    }
    let (signs, _) = propagate(c, &sigma_facets);

    let facets = c.facets();
    let mut corners = UnionFind::new(facets.len() * 6);
    let mut slots = UnionFind::new(facets.len() * 6);
    for e in sigma.edge_ids() {
        let on: Vec<FacetId> = c.facets_of_edge(e).iter().copied().filter(|&f| sigma.facets[f]).collect();
        let [f, g] = [on[0], on[1]];
        let twist = !coherent_across(c, &signs, f, g, e);
        let slot = |h: FacetId| facets[h].edges.iter().position(|&x| x == e).unwrap();
        let corner = |h: FacetId, x: VertexId| facets[h].vertices.iter().position(|&y| y == x).unwrap();
        for i in 0..2 {
            let j = if twist { 1 - i } else { i };
            slots.union(key(f, i, slot(f)), key(g, j, slot(g)));
            for x in c.edges()[e].endpoints() {
                corners.union(key(f, i, corner(f, x)), key(g, j, corner(g, x)));
            }
        }
    }

    // Σ lifts: sheet 0 is the class met by sheet 0 of the lowest Σ facet.
    let mut vertex_lift = vec![usize::MAX; facets.len() * 6];
    let mut edge_lift = vec![usize::MAX; facets.len() * 6];
    for v in sigma.vertex_ids() {
        let at: Vec<FacetId> = c.facets_at(v).iter().copied().filter(|&f| sigma.facets[f]).collect();
        let corner = |h: FacetId| facets[h].vertices.iter().position(|&y| y == v).unwrap();
        let zero = corners.find(key(at[0], 0, corner(at[0])));
        for &f in &at {
            for i in 0..2 {
                let k = key(f, i, corner(f));
                let sheet = usize::from(corners.find(k) != zero);
                vertex_lift[k] = 2 * v + sheet;
            }
        }
        debug_assert!(at.iter().any(|&f| corners.find(key(f, 1, corner(f))) != zero));
    }
    for e in sigma.edge_ids() {
        let on: Vec<FacetId> = c.facets_of_edge(e).iter().copied().filter(|&f| sigma.facets[f]).collect();
        let slot = |h: FacetId| facets[h].edges.iter().position(|&x| x == e).unwrap();
        let zero = slots.find(key(on[0], 0, slot(on[0])));
        for &f in &on {
            for i in 0..2 {
                let k = key(f, i, slot(f));
                edge_lift[k] = 2 * e + usize::from(slots.find(k) != zero);
            }
        }
    }

    let mut new_edges = vec![(usize::MAX, usize::MAX); 2 * c.edge_count()];
    let mut new_facets = vec![([0; 3], [0; 3]); 2 * c.facet_count()];
    for &f in &sigma_facets {
        for i in 0..2 {
            let vs: [VertexId; 3] = std::array::from_fn(|p| vertex_lift[key(f, i, p)]);
            let es: [EdgeId; 3] = std::array::from_fn(|p| edge_lift[key(f, i, p)]);
            for (slot, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
                new_edges[es[slot]] = (vs[a], vs[b]);
            }
            new_facets[2 * f + i] = (vs, es);
        }
    }

    for (k, fin) in report.fins.iter().enumerate() {
        let path = fin.path.as_ref().expect("verified fins have paths");
        // lifts of the path, trivialized from sheet s of the first edge
        let mut vmap = vec![[usize::MAX; 2]; c.vertex_count()];
        let mut emap = vec![[usize::MAX; 2]; c.edge_count()];
        let lifts_of = |e: EdgeId, x: VertexId| -> Vec<(EdgeId, VertexId, VertexId)> {
            let mut out = Vec::new();
            for &g in c.facets_of_edge(e).iter().filter(|&&g| sigma.facets[g]) {
                let slot = facets[g].edges.iter().position(|&y| y == e).unwrap();
                let other = c.edges()[e].other(x).unwrap();
                let cx = facets[g].vertices.iter().position(|&y| y == x).unwrap();
                let co = facets[g].vertices.iter().position(|&y| y == other).unwrap();
                for i in 0..2 {
                    out.push((edge_lift[key(g, i, slot)], vertex_lift[key(g, i, cx)], vertex_lift[key(g, i, co)]));
                }
            }
            out
        };
        for s in 0..2 {
            let mut at = path[0];
            for (step, &e) in fin.path_edges.iter().enumerate() {
                let lifts = lifts_of(e, at);
                let start = if step == 0 {
                    lifts.iter().find(|l| l.0 % 2 == s).copied()
                } else {
                    lifts.iter().find(|l| l.1 == vmap[at][s]).copied()
                }
                .expect("path lifts");
                vmap[at][s] = start.1;
                emap[e][s] = start.0;
                at = path[step + 1];
                vmap[at][s] = start.2;
            }
        }
        for &f in &d.fins[k] {
            for s in 0..2 {
                let vs: [VertexId; 3] = std::array::from_fn(|p| {
                    let x = facets[f].vertices[p];
                    if sigma.vertices[x] { vmap[x][s] } else { 2 * x + s }
                });
                let es: [EdgeId; 3] = std::array::from_fn(|p| {
                    let e = facets[f].edges[p];
                    if sigma.edges[e] { emap[e][s] } else { 2 * e + s }
                });
                for (slot, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
                    new_edges[es[slot]] = (vs[a], vs[b]);
                }
                new_facets[2 * f + s] = (vs, es);
            }
        }
    }

    let complex = DeltaComplex2::new(2 * c.vertex_count(), new_edges, new_facets)?;
    let alpha = alpha.map(|a| {
        StructureConstants::from_pairs(a.pairs().iter().flat_map(|&p| [p, p]).collect())
    });
    let decomposition = Decomposition {
        sigma: sigma_facets.iter().flat_map(|&f| [2 * f, 2 * f + 1]).collect(),
        fins: d
            .fins
            .iter()
            .flat_map(|fin| (0..2).map(move |s| fin.iter().map(|&f| 2 * f + s).collect::<Vec<_>>()))
            .collect(),
        ornaments: Ornaments::default(),
    };
    Ok(DoubleCover { complex, alpha, decomposition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, Fixture};
    use crate::recognizer::find_decomposition;
    use crate::topology::{betti_numbers, euler_characteristic, is_closed_surface};
    use crate::tropical::{classify, WeakTropicalSurface};

    fn load(name: &str) -> DeltaComplex2 {
        let path = format!("{}/fixtures/{name}.trs", env!("CARGO_MANIFEST_DIR"));
        build_complex(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn whole(c: &DeltaComplex2) -> Decomposition {
        Decomposition { sigma: (0..c.facet_count()).collect(), fins: vec![], ornaments: Ornaments::default() }
    }

    fn check_cover(c: &DeltaComplex2, cover: &DoubleCover) {
        let t = &cover.complex;
        assert_eq!(t.vertex_count(), 2 * c.vertex_count());
        assert_eq!(t.edge_count(), 2 * c.edge_count());
        assert_eq!(t.facet_count(), 2 * c.facet_count());
        assert_eq!(euler_characteristic(t), 2 * euler_characteristic(c));
        // the projection is simplicial
        for (f, facet) in t.facets().iter().enumerate() {
            let base = &c.facets()[cover.base_facet(f).0];
            let vs = facet.vertices.map(|v| cover.base_vertex(v).0);
            let es = facet.edges.map(|e| cover.base_edge(e).0);
            assert_eq!(vs, base.vertices);
            assert_eq!(es, base.edges);
        }
        let lifted = &cover.decomposition.sigma;
        assert!(is_closed_surface(t, lifted));
        assert!(orientability(t, lifted).unwrap().is_orientable());
        assert!(verify_decomposition(t, &cover.decomposition).unwrap().is_valid());
    }

    #[test]
    fn surfaces_lift_to_orientable_covers() {
        for (name, chi) in [("klein8", 0), ("rp2_6", 2), ("nonorientable3", -2)] {
            let c = load(name);
            let cover = orientation_double_cover(&c, None, &whole(&c)).unwrap();
            check_cover(&c, &cover);
            assert_eq!(euler_characteristic(&cover.complex), chi);
            assert_eq!(betti_numbers(&cover.complex).b2, 1);
        }
    }

    #[test]
    fn fins_lift_to_pairs() {
        for name in ["klein8_fin", "nonorientable3_fin"] {
            let c = load(name);
            let d = find_decomposition(&c).unwrap();
            assert_eq!(d.fins.len(), 1);
            let cover = orientation_double_cover(&c, None, &d).unwrap();
            check_cover(&c, &cover);
            assert_eq!(cover.decomposition.fins.len(), 2);
            let r = verify_decomposition(&cover.complex, &cover.decomposition).unwrap();
            let [a, b] = [&r.fins[0], &r.fins[1]];
            assert!(a.path.as_ref().unwrap().iter().all(|x| !b.path.as_ref().unwrap().contains(x)));
        }
    }

    #[test]
    fn constants_pull_back() {
        let c = load("nonorientable3_fin");
        let d = find_decomposition(&c).unwrap();
        let t: Vec<i64> = (0..c.edge_count()).map(|e| (e % 3) as i64 - 1).collect();
        let alpha = StructureConstants::from_lower_values(&c, &t);
        let w = WeakTropicalSurface::new(c.clone(), alpha.clone()).unwrap();
        let cover = orientation_double_cover(&c, Some(&alpha), &d).unwrap();
        let lifted = cover.alpha.clone().unwrap();
        assert!(WeakTropicalSurface::new(cover.complex.clone(), lifted.clone()).is_ok());
        // local matrices are unchanged by a covering
        let base = w.classify();
        let top = classify(&cover.complex, &lifted);
        for (v, x) in top.vertices.iter().enumerate() {
            assert_eq!(x.inertia, base.vertices[cover.base_vertex(v).0].inertia);
        }
        assert_eq!(top.verdict, base.verdict);
    }

    #[test]
    fn serialized_cover_parses() {
        let c = load("klein8");
        let cover = orientation_double_cover(&c, None, &whole(&c)).unwrap();
        let fx = Fixture::parse(&cover.to_fixture()).unwrap();
        assert_eq!(fx.complex, cover.complex);
        assert_eq!(fx.cover.len(), 2 * (c.vertex_count() + c.edge_count() + c.facet_count()));
    }

    #[test]
    fn refusals() {
        let c = load("torus7");
        assert_eq!(
            orientation_double_cover(&c, None, &whole(&c)).unwrap_err(),
            TopologyError::AlreadyOrientable
        );
        let c = load("klein8_fin");
        assert!(matches!(
            orientation_double_cover(&c, None, &whole(&c)),
            Err(TopologyError::NotVerifiedDecomposition(_))
        ));
        let c = load("two_tori");
        let d = find_decomposition(&c).unwrap();
        assert!(matches!(
            orientation_double_cover(&c, None, &d),
            Err(TopologyError::NotVerifiedDecomposition(_))
        ));
    }
}
