//! Helpers shared by integration tests: fixture loading, an exhaustive
//! generator of small complexes and a rational rank independent of the
//! library's elimination code.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use tropsurf::{build_complex, DeltaComplex2};

pub fn fixture_path_str(name: &str) -> String {
    format!("{}/fixtures/{name}.trs", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path_str(name)).unwrap()
}

pub fn fixture(name: &str) -> DeltaComplex2 {
    build_complex(&fixture_text(name)).unwrap()
}

pub const FIXTURES: &[&str] = &[
    "genus2",
    "genus2_fin",
    "icosahedron",
    "klein8",
    "klein8_fin",
    "nonorientable3",
    "nonorientable3_fin",
    "octahedron",
    "octahedron_fin",
    "pillow",
    "pillow_fin",
    "rp2_6",
    "square",
    "torus7",
    "torus7_ones",
    "torus_fin",
    "torus_strip",
    "torus_two_fins",
    "triangle",
    "two_tori",
    "wedge",
];

/// A small complex under construction: endpoint pairs `u < v` and facets as
/// triples of edge indices.
#[derive(Clone)]
struct Draft {
    n: usize,
    edges: Vec<(usize, usize)>,
    facets: Vec<[usize; 3]>,
}

impl Draft {
    fn edge_between(&self, a: usize, b: usize) -> Vec<usize> {
        let key = (a.min(b), a.max(b));
        (0..self.edges.len()).filter(|&i| self.edges[i] == key).collect()
    }

    fn canonical(&self) -> Vec<usize> {
        // vertices are only permuted within classes of an isomorphism invariant
        let mut key: Vec<(usize, usize)> = vec![(0, 0); self.n];
        for &(u, v) in &self.edges {
            key[u].0 += 1;
            key[v].0 += 1;
        }
        for f in &self.facets {
            for x in self.facet_vertices(f) {
                key[x].1 += 1;
            }
        }
        let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for x in 0..self.n {
            classes.entry(key[x]).or_default().push(x);
        }
        let groups: Vec<Vec<usize>> = classes.into_values().collect();
        let mut best: Option<Vec<usize>> = None;
        let mut perm = vec![0usize; self.n];
        self.permute(&groups, 0, 0, &mut perm, &mut best);
        best.unwrap()
    }

    fn facet_vertices(&self, f: &[usize; 3]) -> Vec<usize> {
        let mut vs: Vec<usize> = f.iter().flat_map(|&e| [self.edges[e].0, self.edges[e].1]).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    fn permute(&self, groups: &[Vec<usize>], g: usize, next: usize, perm: &mut [usize], best: &mut Option<Vec<usize>>) {
        if g == groups.len() {
            let code = self.encode(perm);
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        let group = &groups[g];
        let mut order = group.clone();
        heap_permutations(&mut order, group.len(), &mut |o: &[usize]| {
            for (i, &x) in o.iter().enumerate() {
                perm[x] = next + i;
            }
            self.permute(groups, g + 1, next + group.len(), perm, best);
        });
    }

    /// Encoding under a vertex relabelling, minimized over the orderings of
    /// parallel edges.
    fn encode(&self, perm: &[usize]) -> Vec<usize> {
        let mapped: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
            .collect();
        let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, &p) in mapped.iter().enumerate() {
            by_pair.entry(p).or_default().push(i);
        }
        let pairs: Vec<((usize, usize), Vec<usize>)> = by_pair.into_iter().collect();
        let mut best: Option<Vec<usize>> = None;
        let mut index = vec![0usize; self.edges.len()];
        self.order_parallel(&pairs, 0, 0, &mut index, &mut best);
        let mut code: Vec<usize> = pairs.iter().flat_map(|((a, b), es)| [*a, *b, es.len()]).collect();
        code.push(usize::MAX);
        code.extend(best.unwrap());
        code
    }

    fn order_parallel(
        &self,
        pairs: &[((usize, usize), Vec<usize>)],
        k: usize,
        next: usize,
        index: &mut [usize],
        best: &mut Option<Vec<usize>>,
    ) {
        if k == pairs.len() {
            let mut fs: Vec<[usize; 3]> = self
                .facets
                .iter()
                .map(|f| {
                    let mut t = [index[f[0]], index[f[1]], index[f[2]]];
                    t.sort();
                    t
                })
                .collect();
            fs.sort();
            let code: Vec<usize> = fs.into_iter().flatten().collect();
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        let mut group = pairs[k].1.clone();
        let len = group.len();
        heap_permutations(&mut group, len, &mut |o: &[usize]| {
            for (i, &e) in o.iter().enumerate() {
                index[e] = next + i;
            }
            self.order_parallel(pairs, k + 1, next + len, index, best);
        });
    }

    fn build(&self) -> DeltaComplex2 {
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let vs = self.facet_vertices(f);
                let find = |a: usize, b: usize| *f.iter().find(|&&e| self.edges[e] == (a, b)).unwrap();
                ([vs[0], vs[1], vs[2]], [find(vs[0], vs[1]), find(vs[0], vs[2]), find(vs[1], vs[2])])
            })
            .collect();
        DeltaComplex2::new(self.n, self.edges.clone(), facets).unwrap()
    }
}

fn heap_permutations(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Every connected complex with at most `max_edges` edges and `max_facets`
/// facets, up to isomorphism, with at most two facets on any edge triple.
pub fn small_complexes(max_edges: usize, max_facets: usize) -> Vec<DeltaComplex2> {
    let start = Draft { n: 2, edges: vec![(0, 1)], facets: vec![] };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(start.canonical());
    let mut frontier = vec![start];
    let mut out = Vec::new();
    while let Some(d) = frontier.pop() {
        for next in grow(&d, max_edges, max_facets) {
            if seen.insert(next.canonical()) {
                frontier.push(next);
            }
        }
        out.push(d);
    }
    let mut built: Vec<(Vec<usize>, DeltaComplex2)> = out.iter().map(|d| (d.canonical(), d.build())).collect();
    built.sort_by(|a, b| a.0.cmp(&b.0));
    built.into_iter().map(|(_, c)| c).collect()
}

fn grow(d: &Draft, max_edges: usize, max_facets: usize) -> Vec<Draft> {
    let mut out = Vec::new();
    // a loose edge, possibly to a new vertex
    if d.edges.len() < max_edges {
        for a in 0..d.n {
            for b in a + 1..=d.n {
                let mut x = d.clone();
                if b == d.n {
                    x.n += 1;
                }
                x.edges.push((a, b));
                out.push(x);
            }
        }
    }
    if d.facets.len() >= max_facets {
        return out;
    }
    // a facet on vertices a < b < c, up to two of them new
    for a in 0..d.n {
        for b in a + 1..=d.n {
            for c in b + 1..=d.n + 1 {
                let fresh = c < d.n || (c == d.n && b < d.n) || (b == d.n && c == d.n + 1);
                if !fresh {
                    continue;
                }
                let n = d.n.max(c + 1);
                let sides = [(a, b), (a, c), (b, c)];
                let options: Vec<Vec<Option<usize>>> = sides
                    .iter()
                    .map(|&(x, y)| {
                        let mut o: Vec<Option<usize>> =
                            if y < d.n { d.edge_between(x, y).into_iter().map(Some).collect() } else { vec![] };
                        o.push(None);
                        o
                    })
                    .collect();
                for i in &options[0] {
                    for j in &options[1] {
                        for k in &options[2] {
                            let mut x = d.clone();
                            x.n = n;
                            let mut tri = [0usize; 3];
                            for (slot, (choice, &(p, q))) in [i, j, k].into_iter().zip(sides.iter()).enumerate() {
                                tri[slot] = match choice {
                                    Some(e) => *e,
                                    None => {
                                        x.edges.push((p, q));
                                        x.edges.len() - 1
                                    }
                                };
                            }
                            if x.edges.len() > max_edges {
                                continue;
                            }
                            let mut sorted = tri;
                            sorted.sort();
                            let copies = x
                                .facets
                                .iter()
                                .filter(|f| {
                                    let mut s = **f;
                                    s.sort();
                                    s == sorted
                                })
                                .count();
                            if copies >= 2 {
                                continue;
                            }
                            x.facets.push(tri);
                            out.push(x);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Rank over ℚ by plain fraction Gaussian elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &pivot;
                for k in col..cols {
                    let delta = &factor * &m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn int_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
}

pub fn abs_max(rows: &[Vec<BigRational>]) -> BigRational {
    rows.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}
