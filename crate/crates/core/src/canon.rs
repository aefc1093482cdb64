//! Canonical forms: AHU codes for trees, cycle-of-trees codes for unicyclic graphs, and an
//! individualization–refinement canonical labelling for small general graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{unicyclic_decompose, Graph};

/// AHU parenthesis code of the subtree rooted at `root`, restricted to `allowed` vertices.
pub(crate) fn rooted_code(g: &Graph, root: usize, allowed: &dyn Fn(usize) -> bool) -> String {
    fn go(g: &Graph, v: usize, parent: usize, allowed: &dyn Fn(usize) -> bool) -> String {
        let mut kids: Vec<String> =
            g.neighbors(v).iter().filter(|&&w| w != parent && allowed(w)).map(|&w| go(g, w, v, allowed)).collect();
        kids.sort_unstable();
        let mut s = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
        s.push('(');
        kids.iter().for_each(|k| s.push_str(k));
        s.push(')');
        s
    }
    go(g, root, usize::MAX, allowed)
}

/// Sizes of the components of `T − v`, for every vertex `v` of the tree `t`.
pub(crate) fn branch_sizes(t: &Graph) -> Vec<Vec<usize>> {
    let n = t.n();
    // Root at 0, compute subtree sizes.
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in t.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &u in order.iter().rev() {
        if parent[u] != usize::MAX {
            size[parent[u]] += size[u];
        }
    }
    (0..n)
        .map(|v| t.neighbors(v).iter().map(|&w| if parent[w] == v { size[w] } else { n - size[v] }).collect())
        .collect()
}

pub(crate) fn check_tree(t: &Graph) -> Result<()> {
    if t.n() == 0 || t.m() + 1 != t.n() || !t.is_connected() {
        return Err(Error::NotATree(format!("n = {}, m = {}", t.n(), t.m())));
    }
    Ok(())
}

/// The centroid vertices of a tree (one, or two adjacent ones), ascending.
pub fn tree_centroids(t: &Graph) -> Result<Vec<usize>> {
    check_tree(t)?;
    let n = t.n();
    Ok(branch_sizes(t)
        .iter()
        .enumerate()
        .filter(|(_, sizes)| sizes.iter().all(|&s| 2 * s <= n))
        .map(|(v, _)| v)
        .collect())
}

/// Canonical code of a free tree: equal iff the trees are isomorphic.
pub fn tree_code(t: &Graph) -> Result<String> {
    let cents = tree_centroids(t)?;
    Ok(match cents.as_slice() {
        [c] => format!("U{}", rooted_code(t, *c, &|_| true)),
        [a, b] => {
            let (a, b) = (*a, *b);
            let ca = rooted_code(t, a, &|w| w != b);
            let cb = rooted_code(t, b, &|w| w != a);
            let (lo, hi) = if ca <= cb { (ca, cb) } else { (cb, ca) };
            format!("B{lo}{hi}")
        }
        _ => unreachable!("a tree has one or two centroids"),
    })
}

/// Automorphism group order of a free tree.
pub fn tree_automorphisms(t: &Graph) -> Result<u128> {
    fn rooted(g: &Graph, v: usize, parent: usize, avoid: usize) -> (String, u128) {
        let mut kids: Vec<(String, u128)> =
            g.neighbors(v).iter().filter(|&&w| w != parent && w != avoid).map(|&w| rooted(g, w, v, avoid)).collect();
        kids.sort();
        let mut aut: u128 = kids.iter().map(|k| k.1).product();
        let mut i = 0;
        while i < kids.len() {
            let j = (i..kids.len()).find(|&j| kids[j].0 != kids[i].0).unwrap_or(kids.len());
            aut *= (1..=(j - i) as u128).product::<u128>();
            i = j;
        }
        let code = format!("({})", kids.iter().map(|k| k.0.as_str()).collect::<String>());
        (code, aut)
    }
    let cents = tree_centroids(t)?;
    Ok(match cents.as_slice() {
        [c] => rooted(t, *c, usize::MAX, usize::MAX).1,
        [a, b] => {
            let (ca, aa) = rooted(t, *a, usize::MAX, *b);
            let (cb, ab) = rooted(t, *b, usize::MAX, *a);
            aa * ab * if ca == cb { 2 } else { 1 }
        }
        _ => unreachable!(),
    })
}

/// Canonical code of a connected unicyclic graph: the pendant-tree codes around the cycle,
/// minimised over rotations and reflections.
pub fn unicyclic_code(g: &Graph) -> Result<String> {
    let dec = unicyclic_decompose(g)?;
    let on_cycle: Vec<bool> = {
        let mut m = vec![false; g.n()];
        dec.cycle.iter().for_each(|&v| m[v] = true);
        m
    };
    let codes: Vec<String> = dec.cycle.iter().map(|&v| rooted_code(g, v, &|w| !on_cycle[w])).collect();
    let r = codes.len();
    let mut best: Option<Vec<&str>> = None;
    for start in 0..r {
        for dir in [1isize, -1] {
            let seq: Vec<&str> = (0..r)
                .map(|i| codes[((start as isize + dir * i as isize).rem_euclid(r as isize)) as usize].as_str())
                .collect();
            if best.as_ref().is_none_or(|b| seq < *b) {
                best = Some(seq);
            }
        }
    }
    Ok(format!("C{}", best.unwrap().join("|")))
}

/// Upper-triangle adjacency bits under a canonical labelling; equal iff isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GraphCode {
    pub n: usize,
    pub bits: Vec<u64>,
}

impl GraphCode {
    fn under(g: &Graph, position: &[usize]) -> GraphCode {
        let n = g.n();
        let mut vertex_at = vec![0; n];
        for (v, &p) in position.iter().enumerate() {
            vertex_at[p] = v;
        }
        let total = n * n.saturating_sub(1) / 2;
        let mut bits = vec![0u64; total.div_ceil(64)];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if g.has_edge(vertex_at[i], vertex_at[j]) {
                    bits[k / 64] |= 1u64 << (63 - k % 64);
                }
                k += 1;
            }
        }
        GraphCode { n, bits }
    }

    /// Hex string form, for reports.
    pub fn to_hex(&self) -> String {
        let mut s = format!("{}:", self.n);
        for w in &self.bits {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }
}

type Cells = Vec<Vec<usize>>;

/// Splits cells by neighbour counts into other cells until the partition is equitable.
fn refine(g: &Graph, mut cells: Cells) -> Cells {
    let n = g.n();
    let mut cell_of = vec![0usize; n];
    'outer: loop {
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        for s in 0..cells.len() {
            let mut count = vec![0usize; n];
            for &u in &cells[s] {
                for &w in g.neighbors(u) {
                    count[w] += 1;
                }
            }
            for c in 0..cells.len() {
                if cells[c].len() < 2 {
                    continue;
                }
                let first = count[cells[c][0]];
                if cells[c].iter().all(|&v| count[v] == first) {
                    continue;
                }
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for &v in &cells[c] {
                    groups.entry(count[v]).or_default().push(v);
                }
                let pieces: Vec<Vec<usize>> = groups.into_values().collect();
                cells.splice(c..=c, pieces);
                continue 'outer;
            }
        }
        return cells;
    }
}

fn are_twins(g: &Graph, u: usize, v: usize) -> bool {
    let a = g.neighbors(u).iter().filter(|&&x| x != v);
    let b = g.neighbors(v).iter().filter(|&&x| x != u);
    a.eq(b)
}

fn search(g: &Graph, cells: Cells, best: &mut Option<(GraphCode, Vec<usize>)>) {
    let cells = refine(g, cells);
    match cells.iter().position(|c| c.len() > 1) {
        None => {
            let mut position = vec![0; g.n()];
            for (i, c) in cells.iter().enumerate() {
                position[c[0]] = i;
            }
            let code = GraphCode::under(g, &position);
            if best.as_ref().is_none_or(|(b, _)| code > *b) {
                *best = Some((code, position));
            }
        }
        Some(target) => {
            let mut tried: Vec<usize> = Vec::new();
            for &v in &cells[target] {
                // Swapping twins is an automorphism fixing the current partition.
                if tried.iter().any(|&u| are_twins(g, u, v)) {
                    continue;
                }
                tried.push(v);
                let mut next = cells.clone();
                let rest: Vec<usize> = cells[target].iter().copied().filter(|&w| w != v).collect();
                next.splice(target..=target, [vec![v], rest]);
                search(g, next, best);
            }
        }
    }
}

/// Canonical code together with the labelling `position[v]` that realises it.
pub fn canonical_labeling(g: &Graph) -> (GraphCode, Vec<usize>) {
    if g.n() == 0 {
        return (GraphCode { n: 0, bits: Vec::new() }, Vec::new());
    }
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n() {
        by_degree.entry(g.degree(v)).or_default().push(v);
    }
    let mut best = None;
    search(g, by_degree.into_values().collect(), &mut best);
    best.expect("search visits at least one leaf")
}

pub fn graph_code(g: &Graph) -> GraphCode {
    canonical_labeling(g).0
}

/// The canonical representative: `g` relabelled by its canonical labelling.
pub fn canonical_graph(g: &Graph) -> Graph {
    let (_, position) = canonical_labeling(g);
    g.relabel(&position).expect("a labelling is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, petersen, random_tree, star, star_plus, Seed};
    use rand::seq::SliceRandom;

    fn shuffled(g: &Graph, seed: u64) -> Graph {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut Seed(seed).rng());
        g.relabel(&perm).unwrap()
    }

    #[test]
    fn tree_codes_are_invariant() {
        for seed in 0..30 {
            let t = random_tree(11, Seed(seed)).unwrap();
            assert_eq!(tree_code(&t).unwrap(), tree_code(&shuffled(&t, seed + 100)).unwrap());
        }
        assert_ne!(tree_code(&path(5).unwrap()).unwrap(), tree_code(&star(5).unwrap()).unwrap());
        assert!(tree_code(&cycle(4).unwrap()).is_err());
    }

    #[test]
    fn tree_automorphism_counts() {
        assert_eq!(tree_automorphisms(&star(5).unwrap()).unwrap(), 24);
        assert_eq!(tree_automorphisms(&path(6).unwrap()).unwrap(), 2);
        assert_eq!(tree_automorphisms(&path(5).unwrap()).unwrap(), 2);
        assert_eq!(tree_automorphisms(&path(1).unwrap()).unwrap(), 1);
    }

    #[test]
    fn unicyclic_codes() {
        let a = star_plus(7).unwrap();
        assert_eq!(unicyclic_code(&a).unwrap(), unicyclic_code(&shuffled(&a, 4)).unwrap());
        assert_ne!(unicyclic_code(&a).unwrap(), unicyclic_code(&cycle(7).unwrap()).unwrap());
        // Mirror images around the cycle are identified.
        let left = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 5)]).unwrap();
        let right = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (0, 5)]).unwrap();
        assert_eq!(unicyclic_code(&left).unwrap(), unicyclic_code(&right).unwrap());
    }

    #[test]
    fn graph_codes_are_invariant() {
        for g in [petersen(), complete(6).unwrap(), Graph::empty(7), cycle(8).unwrap(), star_plus(8).unwrap()] {
            for seed in 0..5 {
                assert_eq!(graph_code(&g), graph_code(&shuffled(&g, seed)));
            }
        }
        assert_ne!(
            graph_code(&cycle(6).unwrap()),
            graph_code(&Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap())
        );
    }

    #[test]
    fn canonical_graph_is_isomorphic_copy() {
        let g = petersen();
        let c = canonical_graph(&g);
        assert_eq!(c.m(), g.m());
        assert_eq!(graph_code(&c), graph_code(&g));
        assert_eq!(canonical_graph(&shuffled(&g, 9)), c);
    }
}
