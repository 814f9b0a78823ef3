//! Simple undirected graphs over dense vertex indices `0..n`.

use thiserror::Error;

use crate::bitset::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not triangle-free (triangle {0:?})")]
    NotTriangleFree([usize; 3]),
    #[error("vertex sets overlap at vertex {0}")]
    Overlap(usize),
    #[error("vertex set over universe {got} does not match graph on {n} vertices")]
    UniverseMismatch { got: usize, n: usize },
}

/// Simple undirected graph; `adj[v]` holds the neighbors of `v`.
///
/// Immutable once built: every constructor checks symmetry and the
/// absence of loops.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs collapse.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![VertexSet::empty(n); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self { n, adj })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![VertexSet::empty(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| {
                let mut row = VertexSet::full(n);
                row.remove(v);
                row
            })
            .collect();
        Self { n, adj }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes `i -- i+5`.
    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Self::new(10, edges).expect("valid Petersen graph")
    }

    /// Graph with exactly the given rows. Used by decoders that already
    /// produce symmetric rows; the invariants are still checked.
    pub(crate) fn from_rows(adj: Vec<VertexSet>) -> Result<Self, GraphError> {
        let n = adj.len();
        for (v, row) in adj.iter().enumerate() {
            if row.universe() != n {
                return Err(GraphError::UniverseMismatch {
                    got: row.universe(),
                    n,
                });
            }
            if row.contains(v) {
                return Err(GraphError::SelfLoop(v));
            }
            for u in row {
                assert!(adj[u].contains(v), "asymmetric rows at ({v},{u})");
            }
        }
        Ok(Self { n, adj })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, vertices: I) -> VertexSet {
        VertexSet::from_vertices(self.n, vertices)
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<(), GraphError> {
        if set.universe() != self.n {
            return Err(GraphError::UniverseMismatch {
                got: set.universe(),
                n: self.n,
            });
        }
        Ok(())
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let edges = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v]));
        Self::new(self.n, edges).expect("permutation of a valid graph")
    }

    /// Subgraph induced on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut edges = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    edges.push((i, j));
                }
            }
        }
        Self::new(vertices.len(), edges).expect("induced subgraph")
    }

    /// First triangle `u < v < w` in lexicographic order, if any.
    pub fn find_triangle(&self) -> Option<[usize; 3]> {
        for u in 0..self.n {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                let common = self.adj[u].intersection(&self.adj[v]);
                if let Some(w) = common.iter().find(|&w| w > v) {
                    return Some([u, v, w]);
                }
            }
        }
        None
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    pub(crate) fn require_triangle_free(&self) -> Result<(), GraphError> {
        match self.find_triangle() {
            Some(t) => Err(GraphError::NotTriangleFree(t)),
            None => Ok(()),
        }
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.adj[v].is_disjoint(set))
    }

    /// Vertices adjacent to every member of `set`; all vertices when `set` is empty.
    pub fn common_neighbors(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::full(self.n);
        for v in set {
            out.intersect_with(&self.adj[v]);
        }
        out
    }

    /// Triangle-free and every non-adjacent pair has a common neighbor.
    pub fn is_maximal_triangle_free(&self) -> bool {
        if !self.is_triangle_free() {
            return false;
        }
        (0..self.n).all(|u| {
            ((u + 1)..self.n).all(|v| self.has_edge(u, v) || !self.adj[u].is_disjoint(&self.adj[v]))
        })
    }

    /// `N(u) \ {v} == N(v) \ {u}`.
    pub fn are_twins(&self, u: usize, v: usize) -> bool {
        let mut nu = self.adj[u].clone();
        nu.remove(v);
        let mut nv = self.adj[v].clone();
        nv.remove(u);
        nu == nv
    }

    pub fn is_twin_free(&self) -> bool {
        (0..self.n).all(|u| ((u + 1)..self.n).all(|v| !self.are_twins(u, v)))
    }

    /// Independent set of size at least `floor(sqrt(n))` in a triangle-free graph.
    ///
    /// If some vertex has degree `>= floor(sqrt(n))` its neighborhood is
    /// returned (lowest such vertex). Otherwise vertices are greedily colored
    /// in ascending order with the least free color and the largest color
    /// class is returned (lowest color on ties).
    pub fn greedy_large_independent_set(&self) -> Result<VertexSet, GraphError> {
        self.require_triangle_free()?;
        if self.n == 0 {
            return Ok(VertexSet::empty(0));
        }
        let root = self.n.isqrt();
        if let Some(v) = (0..self.n).find(|&v| self.degree(v) >= root) {
            return Ok(self.adj[v].clone());
        }
        let mut classes: Vec<VertexSet> = Vec::new();
        for v in 0..self.n {
            let c = (0..)
                .find(|&c| c >= classes.len() || classes[c].is_disjoint(&self.adj[v]))
                .expect("some color is free");
            if c == classes.len() {
                classes.push(VertexSet::empty(self.n));
            }
            classes[c].insert(v);
        }
        let mut best = 0;
        for (c, class) in classes.iter().enumerate() {
            if class.len() > classes[best].len() {
                best = c;
            }
        }
        Ok(classes.swap_remove(best))
    }
}

/// Cross edges between two disjoint vertex sets of a host graph.
#[derive(Debug, Clone)]
pub struct BipartiteView<'g> {
    host: &'g Graph,
    a: VertexSet,
    b: VertexSet,
}

impl<'g> BipartiteView<'g> {
    pub fn new(host: &'g Graph, a: VertexSet, b: VertexSet) -> Result<Self, GraphError> {
        host.check_set(&a)?;
        host.check_set(&b)?;
        if let Some(v) = a.intersection(&b).first() {
            return Err(GraphError::Overlap(v));
        }
        Ok(Self { host, a, b })
    }

    pub fn host(&self) -> &'g Graph {
        self.host
    }

    pub fn a(&self) -> &VertexSet {
        &self.a
    }

    pub fn b(&self) -> &VertexSet {
        &self.b
    }

    /// `N(v) ∩ A`.
    pub fn neighbors_in_a(&self, v: usize) -> VertexSet {
        self.host.neighbors(v).intersection(&self.a)
    }

    /// `N(v) ∩ B`.
    pub fn neighbors_in_b(&self, v: usize) -> VertexSet {
        self.host.neighbors(v).intersection(&self.b)
    }

    pub fn cross_edge_count(&self) -> usize {
        self.a
            .iter()
            .map(|v| self.host.neighbors(v).intersection_len(&self.b))
            .sum()
    }

    /// Same host and sides with A and B exchanged.
    pub fn flipped(&self) -> BipartiteView<'g> {
        BipartiteView {
            host: self.host,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// Convenience: `B` vertices of the view described by neighborhoods into `A`.
///
/// Vertices `0..a_size` form A; vertex `a_size + i` is the i-th B vertex,
/// adjacent to the A vertices listed in `neighborhoods[i]`.
pub fn bipartite_from_neighborhoods(a_size: usize, neighborhoods: &[Vec<usize>]) -> Graph {
    let n = a_size + neighborhoods.len();
    let mut edges = Vec::new();
    for (i, nb) in neighborhoods.iter().enumerate() {
        for &a in nb {
            assert!(a < a_size, "neighbor {a} outside A");
            edges.push((a, a_size + i));
        }
    }
    Graph::new(n, edges).expect("bipartite construction")
}
