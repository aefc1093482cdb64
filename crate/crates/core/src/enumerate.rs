//! Isomorphism-class enumeration of trees, unicyclic graphs and small general graphs.

use std::collections::BTreeMap;

use crate::canon::{canonical_graph, graph_code, unicyclic_code, GraphCode};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_TREE_N: usize = 14;
pub const MAX_UNICYCLIC_N: usize = 11;
pub const MAX_GENERAL_N: usize = 9;

/// Rooted unlabeled trees stored as a catalogue: each entry lists its child ids in
/// non-increasing order, so every multiset of children appears once.
struct Catalogue {
    size: Vec<usize>,
    children: Vec<Vec<usize>>,
    by_size: Vec<Vec<usize>>,
}

impl Catalogue {
    fn new(max: usize) -> Catalogue {
        let mut cat = Catalogue { size: Vec::new(), children: Vec::new(), by_size: vec![Vec::new(); max + 1] };
        for k in 1..=max {
            let mut found = Vec::new();
            cat.multisets(k - 1, usize::MAX, k - 1, &mut Vec::new(), &mut found);
            for kids in found {
                let id = cat.size.len();
                cat.size.push(k);
                cat.children.push(kids);
                cat.by_size[k].push(id);
            }
        }
        cat
    }

    /// Multisets of catalogue ids with total size `remaining`, ids `≤ max_id`, each part of size `≤ cap`.
    fn multisets(&self, remaining: usize, max_id: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for id in (0..self.size.len().min(max_id.saturating_add(1))).rev() {
            let s = self.size[id];
            if s > remaining || s > cap {
                continue;
            }
            cur.push(id);
            self.multisets(remaining - s, id, cap, cur, out);
            cur.pop();
        }
    }

    /// Writes the tree `id` into `edges`, with its root at vertex `root`; returns the next free vertex.
    fn emit(&self, id: usize, root: usize, mut next: usize, edges: &mut Vec<(usize, usize)>) -> usize {
        for &c in &self.children[id] {
            let v = next;
            edges.push((root, v));
            next = self.emit(c, v, next + 1, edges);
        }
        next
    }
}

/// All trees on `n` vertices, one per isomorphism class (`1 ≤ n ≤ 14`).
///
/// Built from centroid-rooted forms: a single centroid whose branches all have fewer than
/// `n/2` vertices, or two centroids joined by an edge splitting the tree in halves.
pub fn enumerate_trees(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n == 0 {
        return Err(Error::param("trees need n ≥ 1"));
    }
    if n > MAX_TREE_N {
        return Err(Error::CapExceeded { what: "tree enumeration", n, cap: MAX_TREE_N });
    }
    let cat = Catalogue::new(n);
    let mut shapes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut roots = Vec::new();
    cat.multisets(n - 1, usize::MAX, (n - 1) / 2, &mut Vec::new(), &mut roots);
    for kids in roots {
        let mut edges = Vec::with_capacity(n - 1);
        let mut next = 1;
        for c in kids {
            let v = next;
            edges.push((0, v));
            next = cat.emit(c, v, next + 1, &mut edges);
        }
        shapes.push(edges);
    }
    if n.is_multiple_of(2) && n >= 2 {
        let half = &cat.by_size[n / 2];
        for (i, &a) in half.iter().enumerate() {
            for &b in &half[..=i] {
                let mut edges = vec![(0, n / 2)];
                cat.emit(a, 0, 1, &mut edges);
                cat.emit(b, n / 2, n / 2 + 1, &mut edges);
                shapes.push(edges);
            }
        }
    }
    Ok(shapes.into_iter().map(move |e| Graph::from_edges(n, e).expect("catalogue emits valid trees")))
}

/// All connected unicyclic graphs on `n` vertices up to isomorphism (`3 ≤ n ≤ 11`), in canonical-code order.
pub fn enumerate_unicyclic(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n < 3 {
        return Err(Error::param("unicyclic graphs need n ≥ 3"));
    }
    if n > MAX_UNICYCLIC_N {
        return Err(Error::CapExceeded { what: "unicyclic enumeration", n, cap: MAX_UNICYCLIC_N });
    }
    let mut classes: BTreeMap<String, Graph> = BTreeMap::new();
    for t in enumerate_trees(n)? {
        for u in 0..n {
            for v in (u + 1)..n {
                if t.has_edge(u, v) {
                    continue;
                }
                let g = t.with_edge(u, v)?;
                classes.entry(unicyclic_code(&g)?).or_insert(g);
            }
        }
    }
    Ok(classes.into_values())
}

/// All graphs on `n` vertices up to isomorphism (`n ≤ 9`), as canonical representatives.
pub fn enumerate_all_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n > MAX_GENERAL_N {
        return Err(Error::CapExceeded { what: "graph enumeration", n, cap: MAX_GENERAL_N });
    }
    let mut level: BTreeMap<GraphCode, Graph> = BTreeMap::new();
    let g0 = Graph::empty(0);
    level.insert(graph_code(&g0), g0);
    for k in 1..=n {
        let mut next: BTreeMap<GraphCode, Graph> = BTreeMap::new();
        for g in level.values() {
            let base = g.edge_list();
            for mask in 0u32..(1u32 << (k - 1)) {
                let mut edges = base.clone();
                edges.extend((0..k - 1).filter(|&i| mask >> i & 1 == 1).map(|i| (i, k - 1)));
                let h = Graph::from_edges(k, edges)?;
                let code = graph_code(&h);
                next.entry(code).or_insert_with(|| canonical_graph(&h));
            }
        }
        level = next;
    }
    Ok(level.into_values())
}

/// Connected graphs on `n` vertices up to isomorphism (`1 ≤ n ≤ 9`).
pub fn enumerate_connected_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n == 0 {
        return Err(Error::param("connected graphs need n ≥ 1"));
    }
    Ok(enumerate_all_graphs(n)?.filter(Graph::is_connected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tree_counts() {
        let got: Vec<usize> = (1..=10).map(|n| enumerate_trees(n).unwrap().count()).collect();
        assert_eq!(got, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
    }

    #[test]
    fn caps() {
        assert!(matches!(enumerate_trees(15), Err(Error::CapExceeded { .. })));
        assert!(matches!(enumerate_unicyclic(12), Err(Error::CapExceeded { .. })));
        assert!(enumerate_unicyclic(2).is_err());
        assert!(matches!(enumerate_all_graphs(10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn small_general_counts() {
        let all: Vec<usize> = (1..=6).map(|n| enumerate_all_graphs(n).unwrap().count()).collect();
        assert_eq!(all, vec![1, 2, 4, 11, 34, 156]);
        let conn: Vec<usize> = (1..=6).map(|n| enumerate_connected_graphs(n).unwrap().count()).collect();
        assert_eq!(conn, vec![1, 1, 2, 6, 21, 112]);
    }
}
