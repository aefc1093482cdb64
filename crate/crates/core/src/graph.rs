//! Simple undirected graphs on dense vertex indices, and their metric structure.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
}

/// An edge `{u, v}` stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Edge> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(Edge { u: a.min(b), v: a.max(b) })
    }

    pub fn endpoints(&self) -> [usize; 2] {
        [self.u, self.v]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// A strictly increasing set of vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Membership mask over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    /// Vertices of `0..n` not in the set.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mask = self.mask(n);
        VertexSet((0..n).filter(|&v| !mask[v]).collect())
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(v: [usize; N]) -> Self {
        v.into_iter().collect()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        Graph { n, adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list, rejecting loops, repeats and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            adj[a].push(b);
            adj[b].push(a);
            m += 1;
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(v.min(w[0]), v.max(w[0])));
            }
        }
        Ok(Graph { n, adj, m })
    }

    /// Like [`Graph::from_edges`] but silently skips edges already present.
    pub(crate) fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        list.sort_unstable();
        list.dedup();
        Graph::from_edges(n, list)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| Edge { u, v }))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().map(|e| (e.u, e.v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` if every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Average degree as the exact fraction `2m / n`, returned as `(2m, n)`.
    pub fn average_degree_fraction(&self) -> (usize, usize) {
        (2 * self.m, self.n)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || components(self).len() == 1
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The isomorphic copy in which vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: perm.len() });
        }
        Graph::from_edges(self.n, self.edges().map(|e| (perm[e.u], perm[e.v])))
    }

    /// The graph with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut edges = self.edge_list();
        edges.push((u, v));
        Graph::from_edges(self.n, edges)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn check_edge(&self, e: Edge) -> Result<()> {
        if self.has_edge(e.u, e.v) {
            Ok(())
        } else {
            Err(Error::NotAnEdge(e.u, e.v))
        }
    }

    /// Number of edges joining the disjoint sets `a` and `b` (given as masks).
    pub fn edges_between(&self, a: &[bool], b: &[bool]) -> usize {
        (0..self.n).filter(|&u| a[u]).map(|u| self.adj[u].iter().filter(|&&w| b[w]).count()).sum()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges=[", self.n, self.m)?;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "])")
    }
}

pub fn degree_sequence(g: &Graph) -> Vec<usize> {
    (0..g.n()).map(|v| g.degree(v)).collect()
}

/// Multi-source BFS; `None` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, sources: &VertexSet) -> Result<Vec<Option<usize>>> {
    if sources.is_empty() {
        return Err(Error::EmptySet);
    }
    sources.check_range(g.n())?;
    Ok(bfs_from(g, sources.as_slice(), usize::MAX))
}

/// BFS truncated at `limit` (vertices farther away are left as `None`).
pub(crate) fn bfs_from(g: &Graph, sources: &[usize], limit: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        if du >= limit {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `{v : dist(u, v) ≤ k}`.
pub fn ball(g: &Graph, u: usize, k: usize) -> Result<VertexSet> {
    g.check_vertex(u)?;
    let dist = bfs_from(g, &[u], k);
    Ok((0..g.n()).filter(|&v| dist[v].is_some_and(|d| d <= k)).collect())
}

/// Minimum distance over the four endpoint pairs of `e` and `f`.
pub fn edge_distance(g: &Graph, e: Edge, f: Edge) -> Result<Option<usize>> {
    g.check_edge(e)?;
    g.check_edge(f)?;
    let dist = bfs_from(g, &e.endpoints(), usize::MAX);
    Ok(match (dist[f.u], dist[f.v]) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    })
}

/// `|E(S, V∖S)|` for a nonempty proper subset `S`.
pub fn edge_boundary(g: &Graph, s: &VertexSet) -> Result<usize> {
    s.check_range(g.n())?;
    if s.is_empty() || s.len() >= g.n() {
        return Err(Error::TrivialCut);
    }
    let mask = s.mask(g.n());
    Ok(s.iter().map(|u| g.neighbors(u).iter().filter(|&&w| !mask[w]).count()).sum())
}

/// Connected components, each sorted, listed by smallest vertex.
pub fn components(g: &Graph) -> Vec<VertexSet> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        out.push(VertexSet::from(comp));
    }
    out
}

/// The unique cycle of a connected unicyclic graph together with its pendant trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicyclicDecomposition {
    /// Cycle vertices `v_1 … v_r` in cyclic order, starting at the smallest one.
    pub cycle: Vec<usize>,
    /// `trees[i]` is the component of `G − E(C)` containing `cycle[i]`.
    pub trees: Vec<VertexSet>,
}

impl UnicyclicDecomposition {
    /// Pendant-tree sizes `w_i`, aligned with `cycle`.
    pub fn weights(&self) -> Vec<usize> {
        self.trees.iter().map(VertexSet::len).collect()
    }
}

pub fn unicyclic_decompose(g: &Graph) -> Result<UnicyclicDecomposition> {
    let n = g.n();
    if g.m() != n {
        return Err(Error::NotUnicyclic(format!("m = {} but n = {}", g.m(), n)));
    }
    if !g.is_connected() {
        return Err(Error::NotUnicyclic("graph is disconnected".into()));
    }
    // Peel leaves until only the cycle remains.
    let mut deg: Vec<usize> = degree_sequence(g);
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = stack.pop() {
        removed[v] = true;
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let on_cycle: Vec<bool> = removed.iter().map(|r| !r).collect();
    let start = on_cycle.iter().position(|&c| c).expect("unicyclic graph has a cycle");
    let mut cycle = vec![start];
    let mut prev = None;
    let mut cur = start;
    loop {
        let next = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| on_cycle[w] && Some(w) != prev)
            .expect("cycle vertex has two cycle neighbours");
        if next == start {
            break;
        }
        cycle.push(next);
        prev = Some(cur);
        cur = next;
    }
    let trees = cycle
        .iter()
        .map(|&root| {
            let mut comp = vec![root];
            let mut stack = vec![root];
            let mut seen = vec![false; n];
            seen[root] = true;
            while let Some(u) = stack.pop() {
                for &w in g.neighbors(u) {
                    if !seen[w] && !on_cycle[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            VertexSet::from(comp)
        })
        .collect();
    Ok(UnicyclicDecomposition { cycle, trees })
}

/// `U_0 … U_{k+1}`: vertices at distance exactly `i` from `seed`, for `i = 0..=depth+1`.
pub fn layered_sets(g: &Graph, seed: &VertexSet, depth: usize) -> Result<Vec<VertexSet>> {
    let dist = bfs_distances(g, seed)?;
    let mut layers = vec![Vec::new(); depth + 2];
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = *d {
            if d <= depth + 1 {
                layers[d].push(v);
            }
        }
    }
    Ok(layers.into_iter().map(VertexSet::from).collect())
}
