//! Manifold-with-fins-and-ornaments decompositions: file format,
//! verification and a heuristic search.
//!
//! A decomposition names a closed surface `Σ` by its facets, an ordered list
//! of fins by their facets, and an ornament subcomplex by any mix of facets,
//! edges and vertices. Every part is taken as the closure of what it names.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{ComplexError, DeltaComplex2, EdgeId, FacetId, Subcomplex, VertexId};
use crate::topology::{facet_components, is_closed_surface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Ornament generators.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ornaments {
    pub facets: Vec<FacetId>,
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

impl Ornaments {
    pub fn is_empty(&self) -> bool {
        self.facets.is_empty() && self.edges.is_empty() && self.vertices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub sigma: Vec<FacetId>,
    pub fins: Vec<Vec<FacetId>>,
    pub ornaments: Ornaments,
}

impl Decomposition {
    pub fn sigma_subcomplex(&self, c: &DeltaComplex2) -> Result<Subcomplex, ComplexError> {
        Subcomplex::of_facets(c, &self.sigma)
    }

    pub fn fin_subcomplex(&self, c: &DeltaComplex2, i: usize) -> Result<Subcomplex, ComplexError> {
        Subcomplex::of_facets(c, &self.fins[i])
    }

    pub fn ornament_subcomplex(&self, c: &DeltaComplex2) -> Result<Subcomplex, ComplexError> {
        let o = &self.ornaments;
        Subcomplex::closure(c, &o.vertices, &o.edges, &o.facets)
    }

    /// Parses `sigma`, `fin <k>` and `ornament` lines. Fin indices start at 1
    /// and must be contiguous; ornament tokens are `f<id>`, `e<id>`, `v<id>`
    /// or a bare facet id.
    pub fn parse(raw: &str) -> Result<Self, DecompositionError> {
        let mut sigma: Option<Vec<FacetId>> = None;
        let mut fins: Vec<(usize, Vec<FacetId>)> = Vec::new();
        let mut ornaments = Ornaments::default();
        for (i, line) in raw.lines().enumerate() {
            let line_no = i + 1;
            let toks: Vec<&str> = line.split('#').next().unwrap_or("").split_whitespace().collect();
            let Some(&head) = toks.first() else { continue };
            let syntax = |message: String| DecompositionError::Syntax { line: line_no, message };
            let num = |t: &str| t.parse::<usize>().map_err(|_| syntax(format!("expected an id, found `{t}`")));
            match head {
                "sigma" => {
                    if sigma.is_some() {
                        return Err(syntax("repeated `sigma` line".into()));
                    }
                    sigma = Some(toks[1..].iter().map(|t| num(t)).collect::<Result<_, _>>()?);
                }
                "fin" => {
                    let k = num(toks.get(1).ok_or_else(|| syntax("`fin` needs an index".into()))?)?;
                    let ids = toks[2..].iter().map(|t| num(t)).collect::<Result<_, _>>()?;
                    fins.push((k, ids));
                }
                "ornament" => {
                    for t in &toks[1..] {
                        let (kind, rest) = match t.as_bytes()[0] {
                            b'f' | b'e' | b'v' => (t.as_bytes()[0], &t[1..]),
                            _ => (b'f', &t[..]),
                        };
                        let id = num(rest)?;
                        match kind {
                            b'f' => ornaments.facets.push(id),
                            b'e' => ornaments.edges.push(id),
                            _ => ornaments.vertices.push(id),
                        }
                    }
                }
                other => return Err(syntax(format!("unknown record `{other}`"))),
            }
        }
        let sigma = sigma.ok_or_else(|| DecompositionError::Syntax {
            line: raw.lines().count().max(1),
            message: "missing `sigma` line".into(),
        })?;
        fins.sort_by_key(|(k, _)| *k);
        for (pos, (k, _)) in fins.iter().enumerate() {
            if *k != pos + 1 {
                return Err(DecompositionError::NotSubcomplex(format!(
                    "fin indices must be 1..{} without gaps or repeats",
                    fins.len()
                )));
            }
        }
        Ok(Decomposition { sigma, fins: fins.into_iter().map(|(_, f)| f).collect(), ornaments })
    }

    pub fn serialize(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        writeln!(out, "sigma {}", join(&self.sigma)).unwrap();
        for (i, f) in self.fins.iter().enumerate() {
            writeln!(out, "fin {} {}", i + 1, join(f)).unwrap();
        }
        if !self.ornaments.is_empty() {
            let o = &self.ornaments;
            let toks: Vec<String> = o
                .facets
                .iter()
                .map(|x| format!("f{x}"))
                .chain(o.edges.iter().map(|x| format!("e{x}")))
                .chain(o.vertices.iter().map(|x| format!("v{x}")))
                .collect();
            writeln!(out, "ornament {}", toks.join(" ")).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contractibility {
    /// Collapses to a point by free faces and has Euler characteristic 1.
    Certified,
    /// The greedy collapse got stuck; contractibility is not decided.
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Simplices of the complex covered by no part.
    NotCovered { vertices: Vec<VertexId>, edges: Vec<EdgeId>, facets: Vec<FacetId> },
    SigmaNotClosedSurface,
    /// The fin meets `Σ` in something other than a simple path with an edge.
    FinNotOnPath { fin: usize },
    /// The fin meets `Σ` in a single vertex.
    DegeneratePath { fin: usize, vertex: VertexId },
    /// A later fin meets an earlier one away from the ends of its path.
    FinOverlap { fin: usize, earlier: usize },
    /// The ornaments meet the rest in more than finitely many points.
    OrnamentContact { edges: Vec<EdgeId>, facets: Vec<FacetId> },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotCovered { vertices, edges, facets } => write!(
                f,
                "not covered: vertices {vertices:?}, edges {edges:?}, facets {facets:?}"
            ),
            Violation::SigmaNotClosedSurface => f.write_str("sigma is not a closed connected surface"),
            Violation::FinNotOnPath { fin } => write!(f, "fin {fin} does not meet sigma in a path"),
            Violation::DegeneratePath { fin, vertex } => {
                write!(f, "fin {fin} meets sigma only in vertex {vertex}")
            }
            Violation::FinOverlap { fin, earlier } => {
                write!(f, "fin {fin} meets fin {earlier} away from its path endpoints")
            }
            Violation::OrnamentContact { edges, facets } => {
                write!(f, "ornaments share edges {edges:?} and facets {facets:?} with the rest")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinReport {
    /// 1-based fin index.
    pub index: usize,
    /// Vertices of `F ∩ Σ` in path order, starting at the smaller endpoint.
    pub path: Option<Vec<VertexId>>,
    pub path_edges: Vec<EdgeId>,
    pub euler_characteristic: i64,
    pub contractibility: Contractibility,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
    pub fins: Vec<FinReport>,
    pub sigma_euler: i64,
    pub hyperbolic: bool,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

enum PathShape {
    Path(Vec<VertexId>, Vec<EdgeId>),
    Point(VertexId),
    Other,
}

fn path_shape(c: &DeltaComplex2, s: &Subcomplex) -> PathShape {
    let vertices = s.vertex_ids();
    let edges = s.edge_ids();
    if s.facets.iter().any(|&b| b) {
        return PathShape::Other;
    }
    if edges.is_empty() {
        return match vertices.as_slice() {
            [x] => PathShape::Point(*x),
            _ => PathShape::Other,
        };
    }
    if edges.len() + 1 != vertices.len() {
        return PathShape::Other;
    }
    let degree = |x: VertexId| edges.iter().filter(|&&e| c.edges()[e].has_endpoint(x)).count();
    if vertices.iter().any(|&x| degree(x) > 2) {
        return PathShape::Other;
    }
    let Some(&start) = vertices.iter().find(|&&x| degree(x) == 1) else {
        return PathShape::Other;
    };
    let mut order = vec![start];
    let mut used = Vec::new();
    let mut at = start;
    while let Some(&e) = edges.iter().find(|&&e| !used.contains(&e) && c.edges()[e].has_endpoint(at)) {
        used.push(e);
        at = c.edges()[e].other(at).unwrap();
        order.push(at);
    }
    if order.len() == vertices.len() {
        PathShape::Path(order, used)
    } else {
        PathShape::Other
    }
}

/// Greedy elementary collapses by free faces.
fn collapses_to_point(c: &DeltaComplex2, s: &Subcomplex) -> bool {
    let mut s = s.clone();
    loop {
        let mut progressed = false;
        for e in 0..c.edge_count() {
            if !s.edges[e] {
                continue;
            }
            let cofaces: Vec<FacetId> =
                c.facets_of_edge(e).iter().copied().filter(|&f| s.facets[f]).collect();
            if cofaces.len() == 1 {
                s.edges[e] = false;
                s.facets[cofaces[0]] = false;
                progressed = true;
            }
        }
        for v in 0..c.vertex_count() {
            if !s.vertices[v] {
                continue;
            }
            let cofaces: Vec<EdgeId> = c.edges_at(v).iter().copied().filter(|&e| s.edges[e]).collect();
            if cofaces.len() == 1 {
                s.vertices[v] = false;
                s.edges[cofaces[0]] = false;
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    !s.facets.iter().any(|&b| b)
        && !s.edges.iter().any(|&b| b)
        && s.vertices.iter().filter(|&&b| b).count() == 1
}

fn check_ids(c: &DeltaComplex2, d: &Decomposition) -> Result<(), DecompositionError> {
    if d.sigma.is_empty() {
        return Err(DecompositionError::NotSubcomplex("sigma names no facets".into()));
    }
    if let Some(i) = d.fins.iter().position(|f| f.is_empty()) {
        return Err(DecompositionError::NotSubcomplex(format!("fin {} names no facets", i + 1)));
    }
    for &f in d.sigma.iter().chain(d.fins.iter().flatten()).chain(&d.ornaments.facets) {
        c.facet(f)?;
    }
    for &e in &d.ornaments.edges {
        c.edge(e)?;
    }
    for &v in &d.ornaments.vertices {
        c.check_vertex(v)?;
    }
    Ok(())
}

pub fn verify_decomposition(
    c: &DeltaComplex2,
    d: &Decomposition,
) -> Result<VerificationReport, DecompositionError> {
    check_ids(c, d)?;
    let sigma = d.sigma_subcomplex(c)?;
    let fins: Vec<Subcomplex> = (0..d.fins.len()).map(|i| d.fin_subcomplex(c, i)).collect::<Result<_, _>>()?;
    let ornaments = d.ornament_subcomplex(c)?;
    let mut violations = Vec::new();

    let core = fins.iter().fold(sigma.clone(), |acc, f| acc.union(f));
    let everything = core.union(&ornaments);
    let missing = |m: &[bool]| m.iter().enumerate().filter(|(_, b)| !**b).map(|(i, _)| i).collect::<Vec<_>>();
    let (mv, me, mf) = (missing(&everything.vertices), missing(&everything.edges), missing(&everything.facets));
    if !(mv.is_empty() && me.is_empty() && mf.is_empty()) {
        violations.push(Violation::NotCovered { vertices: mv, edges: me, facets: mf });
    }

    if !is_closed_surface(c, &sigma.facet_ids()) {
        violations.push(Violation::SigmaNotClosedSurface);
    }

    let mut reports = Vec::new();
    let mut endpoints: Vec<Option<[VertexId; 2]>> = Vec::new();
    for (i, fin) in fins.iter().enumerate() {
        let meet = fin.intersection(&sigma);
        let (path, path_edges) = match path_shape(c, &meet) {
            PathShape::Path(p, e) => (Some(p), e),
            PathShape::Point(x) => {
                violations.push(Violation::DegeneratePath { fin: i + 1, vertex: x });
                (None, Vec::new())
            }
            PathShape::Other => {
                violations.push(Violation::FinNotOnPath { fin: i + 1 });
                (None, Vec::new())
            }
        };
        endpoints.push(path.as_ref().map(|p| [p[0], *p.last().unwrap()]));
        let euler = fin.euler_characteristic();
        let contractibility = if euler == 1 && collapses_to_point(c, fin) {
            Contractibility::Certified
        } else {
            Contractibility::Unverified
        };
        reports.push(FinReport { index: i + 1, path, path_edges, euler_characteristic: euler, contractibility });
    }

    for i in 0..fins.len() {
        let Some(ends) = endpoints[i] else { continue };
        for j in 0..i {
            let meet = fins[j].intersection(&fins[i]);
            let outside = meet.edges.iter().any(|&b| b)
                || meet.facets.iter().any(|&b| b)
                || meet.vertex_ids().iter().any(|x| !ends.contains(x));
            if outside {
                violations.push(Violation::FinOverlap { fin: i + 1, earlier: j + 1 });
            }
        }
    }

    let contact = ornaments.intersection(&core);
    let (ce, cf) = (contact.edge_ids(), contact.facet_ids());
    if !(ce.is_empty() && cf.is_empty()) {
        violations.push(Violation::OrnamentContact { edges: ce, facets: cf });
    }

    let sigma_euler = sigma.euler_characteristic();
    Ok(VerificationReport { violations, fins: reports, sigma_euler, hyperbolic: sigma_euler < 0 })
}

/// Searches for a decomposition; `None` when the heuristic finds no valid one.
///
/// `Σ` is the largest closed-surface component of the facets glued across
/// degree-2 edges (lowest facet id breaks ties). The remaining simplices are
/// grouped by shared simplices outside `Σ` and by shared edges of `Σ`; groups
/// meeting `Σ` in edges become fins, the others ornaments. Fins are ordered
/// so that each meets earlier ones only at the ends of its path.
pub fn find_decomposition(c: &DeltaComplex2) -> Option<Decomposition> {
    let all: Vec<FacetId> = (0..c.facet_count()).collect();
    let mut candidates: Vec<Vec<FacetId>> = facet_components(c, &all, |e| c.facets_of_edge(e).len() == 2)
        .into_iter()
        .filter(|comp| is_closed_surface(c, comp))
        .collect();
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let sigma_facets = candidates.into_iter().next()?;
    let sigma = Subcomplex::of_facets(c, &sigma_facets).ok()?;

    // elements outside Σ: facets, then edges lying in no facet and not in Σ
    let rest_facets: Vec<FacetId> = all.iter().copied().filter(|&f| !sigma.facets[f]).collect();
    let loose_edges: Vec<EdgeId> = (0..c.edge_count())
        .filter(|&e| !sigma.edges[e] && c.facets_of_edge(e).is_empty())
        .collect();
    let n = rest_facets.len() + loose_edges.len();
    let element = |k: usize| -> Subcomplex {
        if k < rest_facets.len() {
            Subcomplex::of_facets(c, &[rest_facets[k]]).unwrap()
        } else {
            Subcomplex::closure(c, &[], &[loose_edges[k - rest_facets.len()]], &[]).unwrap()
        }
    };
    let closures: Vec<Subcomplex> = (0..n).map(element).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..n {
        for b in a + 1..n {
            let meet = closures[a].intersection(&closures[b]);
            let joined = meet.edges.iter().any(|&x| x)
                || meet.vertex_ids().iter().any(|&v| !sigma.vertices[v]);
            if joined {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for k in 0..n {
        let r = find(&mut parent, k);
        match root_of[r] {
            Some(g) => groups[g].push(k),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![k]);
            }
        }
    }

    let mut fins: Vec<Vec<FacetId>> = Vec::new();
    let mut ornaments = Ornaments::default();
    for g in &groups {
        let closure = g.iter().fold(Subcomplex::empty(c), |acc, &k| acc.union(&closures[k]));
        let touches_sigma_edge = closure.intersection(&sigma).edges.iter().any(|&b| b);
        let has_loose = g.iter().any(|&k| k >= rest_facets.len());
        if touches_sigma_edge {
            if has_loose {
                return None;
            }
            fins.push(g.iter().map(|&k| rest_facets[k]).collect());
        } else {
            for &k in g {
                if k < rest_facets.len() {
                    ornaments.facets.push(rest_facets[k]);
                } else {
                    ornaments.edges.push(loose_edges[k - rest_facets.len()]);
                }
            }
        }
    }
    ornaments.facets.sort_unstable();
    ornaments.edges.sort_unstable();

    let fins = order_fins(c, &sigma, fins)?;
    let d = Decomposition { sigma: sigma_facets, fins, ornaments };
    verify_decomposition(c, &d).ok()?.is_valid().then_some(d)
}

/// Orders fins so each meets earlier fins only at its path endpoints.
fn order_fins(c: &DeltaComplex2, sigma: &Subcomplex, fins: Vec<Vec<FacetId>>) -> Option<Vec<Vec<FacetId>>> {
    let subs: Vec<Subcomplex> = fins.iter().map(|f| Subcomplex::of_facets(c, f).unwrap()).collect();
    let ends: Vec<Option<[VertexId; 2]>> = subs
        .iter()
        .map(|s| match path_shape(c, &s.intersection(sigma)) {
            PathShape::Path(p, _) => Some([p[0], *p.last().unwrap()]),
            _ => None,
        })
        .collect();
    // may_follow(a, b): fin b may come after fin a
    let may_follow = |a: usize, b: usize| {
        let meet = subs[a].intersection(&subs[b]);
        let Some(e) = ends[b] else { return false };
        !meet.edges.iter().any(|&x| x)
            && !meet.facets.iter().any(|&x| x)
            && meet.vertex_ids().iter().all(|x| e.contains(x))
    };
    let n = fins.len();
    let mut before: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            match (may_follow(a, b), may_follow(b, a)) {
                (true, true) => {}
                (true, false) => {
                    before[b].insert(a);
                }
                (false, true) => {
                    before[a].insert(b);
                }
                (false, false) => return None,
            }
        }
    }
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&k| !placed[k] && before[k].iter().all(|&j| placed[j]))?;
        placed[next] = true;
        order.push(next);
    }
    let mut fins = fins;
    Some(order.into_iter().map(|k| std::mem::take(&mut fins[k])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    fn load(name: &str) -> DeltaComplex2 {
        let path = format!("{}/fixtures/{name}.trs", env!("CARGO_MANIFEST_DIR"));
        build_complex(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn decomposition(sigma: std::ops::Range<usize>, fins: &[&[usize]]) -> Decomposition {
        Decomposition {
            sigma: sigma.collect(),
            fins: fins.iter().map(|f| f.to_vec()).collect(),
            ornaments: Ornaments::default(),
        }
    }

    #[test]
    fn genus_two_alone_is_hyperbolic() {
        let c = load("genus2");
        let r = verify_decomposition(&c, &decomposition(0..24, &[])).unwrap();
        assert!(r.is_valid());
        assert!(r.hyperbolic);
        assert_eq!(r.sigma_euler, -2);
    }

    #[test]
    fn torus_with_a_fin() {
        let c = load("torus_fin");
        let r = verify_decomposition(&c, &decomposition(0..14, &[&[14]])).unwrap();
        assert!(r.is_valid(), "{:?}", r.violations);
        assert!(!r.hyperbolic);
        assert_eq!(r.fins[0].contractibility, Contractibility::Certified);
        assert_eq!(r.fins[0].path, Some(vec![0, 1]));
    }

    #[test]
    fn strip_meeting_in_two_edges_is_not_a_fin() {
        let c = load("torus_strip");
        let r = verify_decomposition(&c, &decomposition(0..14, &[&[14, 15]])).unwrap();
        assert!(r.violations.contains(&Violation::FinNotOnPath { fin: 1 }));
    }

    #[test]
    fn fin_order_matters() {
        let c = load("torus_two_fins");
        let fan: &[usize] = &[14, 15];
        let tri: &[usize] = &[16];
        // the fan meets the triangle at vertex 1, inside the fan's path 0-1-2
        let bad = verify_decomposition(&c, &decomposition(0..14, &[tri, fan])).unwrap();
        assert_eq!(bad.violations, vec![Violation::FinOverlap { fin: 2, earlier: 1 }]);
        let good = verify_decomposition(&c, &decomposition(0..14, &[fan, tri])).unwrap();
        assert!(good.is_valid(), "{:?}", good.violations);
        assert_eq!(good.fins[0].path, Some(vec![0, 1, 2]));
        assert!(good.fins.iter().all(|f| f.contractibility == Contractibility::Certified));
    }

    #[test]
    fn point_contact_is_flagged_separately() {
        let c = load("two_tori");
        let d = Decomposition {
            sigma: (0..14).collect(),
            fins: vec![(14..28).collect()],
            ornaments: Ornaments::default(),
        };
        let r = verify_decomposition(&c, &d).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::DegeneratePath { fin: 1, vertex: 6 })));
        // a torus fin is not collapsible
        assert_eq!(r.fins[0].contractibility, Contractibility::Unverified);
    }

    #[test]
    fn uncovered_and_unknown() {
        let c = load("torus_fin");
        let r = verify_decomposition(&c, &decomposition(0..14, &[])).unwrap();
        assert_eq!(
            r.violations,
            vec![Violation::NotCovered { vertices: vec![7], edges: vec![6, 12], facets: vec![14] }]
        );
        assert!(matches!(
            verify_decomposition(&c, &decomposition(0..40, &[])),
            Err(DecompositionError::Complex(ComplexError::UnknownId { .. }))
        ));
    }

    #[test]
    fn heuristic_finds_expected_decompositions() {
        let d = find_decomposition(&load("genus2")).unwrap();
        assert_eq!(d, decomposition(0..24, &[]));
        let d = find_decomposition(&load("torus_fin")).unwrap();
        assert_eq!(d, decomposition(0..14, &[&[14]]));
        let d = find_decomposition(&load("torus_two_fins")).unwrap();
        assert_eq!(d, decomposition(0..14, &[&[14, 15], &[16]]));
        let d = find_decomposition(&load("two_tori")).unwrap();
        assert_eq!(d.sigma, (0..14).collect::<Vec<_>>());
        assert!(d.fins.is_empty());
        assert_eq!(d.ornaments.facets, (14..28).collect::<Vec<_>>());
        assert_eq!(find_decomposition(&load("torus_strip")), None);
        assert_eq!(find_decomposition(&load("triangle")), None);
    }

    #[test]
    fn file_format_round_trips() {
        let text = "# decomposition\nsigma 0 1 2\nfin 2 5\nfin 1 3 4\nornament f7 e2 v1 9\n";
        let d = Decomposition::parse(text).unwrap();
        assert_eq!(d.fins, vec![vec![3, 4], vec![5]]);
        assert_eq!(d.ornaments, Ornaments { facets: vec![7, 9], edges: vec![2], vertices: vec![1] });
        assert_eq!(Decomposition::parse(&d.serialize()).unwrap(), d);
        assert!(matches!(Decomposition::parse("fin 1 2\n"), Err(DecompositionError::Syntax { .. })));
        assert!(matches!(
            Decomposition::parse("sigma 0\nfin 2 1\n"),
            Err(DecompositionError::NotSubcomplex(_))
        ));
        assert!(matches!(
            Decomposition::parse("sigma 0\nsigma x\n"),
            Err(DecompositionError::Syntax { line: 2, .. })
        ));
    }
}
