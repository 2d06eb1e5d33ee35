//! The incidence graph `D(4,q)`, its point collinearity graph `Γ(4,q)`, and
//! the group `G` of matrices `g(t,u,v,w)` realizing `Γ(4,q)` as a Cayley
//! graph.
//!
//! Vertex indexing is positional base `q`: the point `P(p1,p2,p3,p4)` gets
//! index `p1 + p2 q + p3 q² + p4 q³` (field elements read by their index).
//! In `D(4,q)` the lines follow the points, offset by `q⁴`. Cayley vertices
//! `g(t,u,v,w)` are indexed the same way from `(t,u,v,w)`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::ff::{Fe, Field};
use crate::{Error, Result};

/// Largest `q` accepted by the graph builders unless overridden.
pub const DEFAULT_MAX_GRAPH_Q: u32 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point(pub [Fe; 4]);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Line(pub [Fe; 4]);

/// `P ~ L` iff `p2 + l2 = p1 l1`, `p3 + l3 = p1 l2` and `p4 + l4 = p2 l1`.
pub fn incident(field: &Field, point: &Point, line: &Line) -> bool {
    let [p1, p2, p3, p4] = point.0;
    let [l1, l2, l3, l4] = line.0;
    field.add(p2, l2) == field.mul(p1, l1)
        && field.add(p3, l3) == field.mul(p1, l2)
        && field.add(p4, l4) == field.mul(p2, l1)
}

/// Adjacency in `Γ(4,q)`: distinct points on a common line.
pub fn collinear(field: &Field, a: &Point, b: &Point) -> bool {
    let [p1, p2, p3, p4] = a.0;
    let [r1, r2, r3, r4] = b.0;
    let d1 = field.sub(p1, r1);
    let d2 = field.sub(p2, r2);
    !d1.is_zero()
        && field.mul(d1, field.sub(p4, r4)) == field.square(d2)
        && field.sub(p3, r3) == field.sub(field.mul(p2, r1), field.mul(p1, r2))
}

/// The line through `point` with first coordinate `l1`.
pub fn line_through(field: &Field, point: &Point, l1: Fe) -> Line {
    let [p1, p2, p3, p4] = point.0;
    let l2 = field.sub(field.mul(p1, l1), p2);
    let l3 = field.sub(field.mul(p1, l2), p3);
    let l4 = field.sub(field.mul(p2, l1), p4);
    Line([l1, l2, l3, l4])
}

/// The point on `line` with first coordinate `p1`.
pub fn point_on(field: &Field, line: &Line, p1: Fe) -> Point {
    let [l1, l2, l3, l4] = line.0;
    let p2 = field.sub(field.mul(p1, l1), l2);
    let p3 = field.sub(field.mul(p1, l2), l3);
    let p4 = field.sub(field.mul(p2, l1), l4);
    Point([p1, p2, p3, p4])
}

pub fn encode(field: &Field, coords: [Fe; 4]) -> u32 {
    let q = field.order();
    coords.iter().rev().fold(0, |acc, c| acc * q + c.index())
}

pub fn decode(field: &Field, index: u32) -> [Fe; 4] {
    let q = field.order();
    let mut x = index;
    core::array::from_fn(|_| {
        let c = field.element(x % q).expect("digit below q");
        x /= q;
        c
    })
}

/// `g(t,u,v,w)`, the 5×5 unipotent matrix
/// `[[1,t,u,v+tu,w],[0,1,0,-u,0],[0,0,1,t,0],[0,0,0,1,0],[0,0,0,0,1]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    pub t: Fe,
    pub u: Fe,
    pub v: Fe,
    pub w: Fe,
}

impl GroupElem {
    pub const IDENTITY: GroupElem = GroupElem {
        t: Fe::ZERO,
        u: Fe::ZERO,
        v: Fe::ZERO,
        w: Fe::ZERO,
    };

    pub fn new(t: Fe, u: Fe, v: Fe, w: Fe) -> Self {
        GroupElem { t, u, v, w }
    }

    pub fn coords(&self) -> [Fe; 4] {
        [self.t, self.u, self.v, self.w]
    }

    pub fn index(&self, field: &Field) -> u32 {
        encode(field, self.coords())
    }

    pub fn from_index(field: &Field, index: u32) -> Self {
        let [t, u, v, w] = decode(field, index);
        GroupElem { t, u, v, w }
    }

    /// `g(t,u,v,w) g(t',u',v',w') = g(t+t', u+u', v+v'-2tu', w+w')`.
    pub fn mul(&self, field: &Field, other: &GroupElem) -> GroupElem {
        let twice = field.add(self.t, self.t);
        GroupElem {
            t: field.add(self.t, other.t),
            u: field.add(self.u, other.u),
            v: field.sub(field.add(self.v, other.v), field.mul(twice, other.u)),
            w: field.add(self.w, other.w),
        }
    }

    /// `g(t,u,v,w)^{-1} = g(-t, -u, -v-2tu, -w)`.
    pub fn inverse(&self, field: &Field) -> GroupElem {
        let twice = field.add(self.t, self.t);
        GroupElem {
            t: field.neg(self.t),
            u: field.neg(self.u),
            v: field.neg(field.add(self.v, field.mul(twice, self.u))),
            w: field.neg(self.w),
        }
    }

    /// `[g, h] = g^{-1} h^{-1} g h`.
    pub fn commutator(&self, field: &Field, other: &GroupElem) -> GroupElem {
        self.inverse(field)
            .mul(field, &other.inverse(field))
            .mul(field, self)
            .mul(field, other)
    }

    pub fn to_matrix(&self, field: &Field) -> [[Fe; 5]; 5] {
        let GroupElem { t, u, v, w } = *self;
        let (o, i) = (Fe::ZERO, Fe::ONE);
        [
            [i, t, u, field.add(v, field.mul(t, u)), w],
            [o, i, o, field.neg(u), o],
            [o, o, i, t, o],
            [o, o, o, i, o],
            [o, o, o, o, i],
        ]
    }

    /// Inverse of [`GroupElem::to_matrix`]; `None` if the matrix is not of
    /// that shape.
    pub fn from_matrix(field: &Field, m: &[[Fe; 5]; 5]) -> Option<GroupElem> {
        let g = GroupElem {
            t: m[0][1],
            u: m[0][2],
            v: field.sub(m[0][3], field.mul(m[0][1], m[0][2])),
            w: m[0][4],
        };
        (g.to_matrix(field) == *m).then_some(g)
    }

    /// The right action `P ↦ P g` on `(1, p1, p2, p3, p4)`.
    pub fn act(&self, field: &Field, point: &Point) -> Point {
        let [p1, p2, p3, p4] = point.0;
        let GroupElem { t, u, v, w } = *self;
        let p3_new = field.add(
            field.add(field.add(v, field.mul(t, u)), field.neg(field.mul(p1, u))),
            field.add(field.mul(p2, t), p3),
        );
        Point([field.add(t, p1), field.add(u, p2), p3_new, field.add(w, p4)])
    }

    /// `P(0,0,0,0) g = P(t, u, v + tu, w)`, the orbit bijection `G → points`.
    pub fn orbit_point(&self, field: &Field) -> Point {
        self.act(field, &Point([Fe::ZERO; 4]))
    }
}

/// Plain 5×5 matrix product over `F_q`.
pub fn matrix_mul(field: &Field, a: &[[Fe; 5]; 5], b: &[[Fe; 5]; 5]) -> [[Fe; 5]; 5] {
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            (0..5).fold(Fe::ZERO, |acc, k| {
                field.add(acc, field.mul(a[i][k], b[k][j]))
            })
        })
    })
}

/// `S = {g(t, rt, -rt², r²t) : r, t ∈ F, t ≠ 0}`.
pub fn connection_set(field: &Field) -> Vec<GroupElem> {
    let mut out = Vec::with_capacity((field.order() * (field.order() - 1)) as usize);
    for t in field.nonzero_elements() {
        for r in field.elements() {
            let rt = field.mul(r, t);
            out.push(GroupElem {
                t,
                u: rt,
                v: field.neg(field.mul(rt, t)),
                w: field.mul(rt, r),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    /// The bipartite point/line graph `D(4,q)`.
    D4,
    /// The point collinearity graph `Γ(4,q)`.
    Gamma4,
    /// `Cay(G, S)` on the group indices.
    Cayley,
}

impl GraphKind {
    pub fn label(self) -> &'static str {
        match self {
            GraphKind::D4 => "D4",
            GraphKind::Gamma4 => "GAMMA4",
            GraphKind::Cayley => "CAYLEY4",
        }
    }
}

/// Undirected simple graph in compressed adjacency form with sorted
/// neighbor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    kind: GraphKind,
    q: u32,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    fn from_lists(kind: GraphKind, q: u32, lists: impl Iterator<Item = Vec<u32>>) -> Graph {
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        for mut list in lists {
            list.sort_unstable();
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Graph {
            kind,
            q,
            offsets,
            targets,
        }
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_bipartite_by_construction(&self) -> bool {
        self.kind == GraphKind::D4
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// The common degree, if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        (0..self.vertex_count())
            .all(|v| self.degree(v) == d)
            .then_some(d)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v as usize > u)
                .map(move |&v| (u as u32, v))
        })
    }

    /// Symmetric, loop-free and without repeated neighbors.
    pub fn is_simple_undirected(&self) -> bool {
        (0..self.vertex_count()).all(|u| {
            let nbrs = self.neighbors(u);
            nbrs.windows(2).all(|w| w[0] < w[1])
                && nbrs
                    .iter()
                    .all(|&v| v as usize != u && self.has_edge(v as usize, u))
        })
    }

    /// Relabels vertices with `map` (old index → new index).
    pub fn relabel(&self, map: &[u32]) -> Graph {
        let mut lists = vec![Vec::new(); self.vertex_count()];
        for u in 0..self.vertex_count() {
            lists[map[u] as usize] = self.neighbors(u).iter().map(|&v| map[v as usize]).collect();
        }
        Graph::from_lists(self.kind, self.q, lists.into_iter())
    }
}

/// Builds the graphs with a configurable size bound.
#[derive(Clone, Copy, Debug)]
pub struct GraphBuilder<'a> {
    field: &'a Field,
    max_q: u32,
}

impl<'a> GraphBuilder<'a> {
    pub fn new(field: &'a Field) -> Self {
        GraphBuilder {
            field,
            max_q: DEFAULT_MAX_GRAPH_Q,
        }
    }

    pub fn max_q(mut self, max_q: u32) -> Self {
        self.max_q = max_q;
        self
    }

    fn check(&self) -> Result<u32> {
        let q = self.field.order();
        if q > self.max_q {
            return Err(Error::TooLarge {
                order: q as u64,
                bound: self.max_q as u64,
            });
        }
        Ok(q)
    }

    pub fn d4(&self) -> Result<Graph> {
        let q = self.check()?;
        let field = self.field;
        let n = q.pow(4);
        let point_lists = (0..n).map(|i| {
            let point = Point(decode(field, i));
            field
                .elements()
                .map(|l1| n + encode(field, line_through(field, &point, l1).0))
                .collect()
        });
        let line_lists = (0..n).map(|i| {
            let line = Line(decode(field, i));
            field
                .elements()
                .map(|p1| encode(field, point_on(field, &line, p1).0))
                .collect()
        });
        Ok(Graph::from_lists(
            GraphKind::D4,
            q,
            point_lists.chain(line_lists),
        ))
    }

    pub fn gamma(&self) -> Result<Graph> {
        let q = self.check()?;
        let field = self.field;
        let lists = (0..q.pow(4)).map(|i| {
            let [p1, p2, p3, p4] = decode(field, i);
            let mut nbrs = Vec::with_capacity((q * (q - 1)) as usize);
            for r1 in field.elements().filter(|&r1| r1 != p1) {
                let d1 = field.sub(p1, r1);
                for r2 in field.elements() {
                    let d2 = field.sub(p2, r2);
                    let r4 = field.sub(p4, field.div(field.square(d2), d1).expect("d1 != 0"));
                    let r3 = field.sub(p3, field.sub(field.mul(p2, r1), field.mul(p1, r2)));
                    nbrs.push(encode(field, [r1, r2, r3, r4]));
                }
            }
            nbrs
        });
        Ok(Graph::from_lists(GraphKind::Gamma4, q, lists))
    }

    /// `Cay(G, S)`: `g ~ s g` for `s ∈ S`.
    pub fn cayley(&self) -> Result<Graph> {
        let q = self.check()?;
        let field = self.field;
        let s = connection_set(field);
        let lists = (0..q.pow(4)).map(|i| {
            let g = GroupElem::from_index(field, i);
            s.iter().map(|h| h.mul(field, &g).index(field)).collect()
        });
        Ok(Graph::from_lists(GraphKind::Cayley, q, lists))
    }
}

pub fn build_d4(field: &Field) -> Result<Graph> {
    GraphBuilder::new(field).d4()
}

pub fn build_gamma(field: &Field) -> Result<Graph> {
    GraphBuilder::new(field).gamma()
}

pub fn build_cayley(field: &Field) -> Result<Graph> {
    GraphBuilder::new(field).cayley()
}

/// Maps Cayley vertex `g` to the `Γ(4,q)` index of `P(0,0,0,0) g`.
pub fn orbit_relabeling(field: &Field) -> Vec<u32> {
    (0..field.order().pow(4))
        .map(|i| encode(field, GroupElem::from_index(field, i).orbit_point(field).0))
        .collect()
}

/// True when the orbit map is a graph isomorphism `Cay(G,S) → Γ(4,q)`.
pub fn cayley_matches_gamma(field: &Field, cayley: &Graph, gamma: &Graph) -> bool {
    let map = orbit_relabeling(field);
    let mut seen = vec![false; map.len()];
    let bijective = map
        .iter()
        .all(|&m| !core::mem::replace(&mut seen[m as usize], true));
    bijective
        && cayley.relabel(&map).targets == gamma.targets
        && cayley.relabel(&map).offsets == gamma.offsets
}

/// Sizes of the connected components, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

pub fn connected_components(graph: &Graph) -> Components {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in graph.neighbors(u) {
                if !core::mem::replace(&mut seen[v as usize], true) {
                    queue.push_back(v as usize);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Components { sizes }
}

/// Length of a shortest cycle, or `None` for a forest. BFS from every vertex.
pub fn girth(graph: &Graph) -> Option<usize> {
    let n = graph.vertex_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut touched = Vec::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for &v in graph.neighbors(u) {
                let v = v as usize;
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    touched.push(v);
                    queue.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}
