//! Constructors for the graph families used throughout the crate.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::adjacency_spectrum;

pub use crate::enumerate::{enumerate_all_graphs, enumerate_connected_graphs, enumerate_trees, enumerate_unicyclic};

/// Seed for the pseudorandom generators. Equal seeds give bit-identical graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

impl Seed {
    pub const DEFAULT: Seed = Seed(0x5E_ED0F_E16E);

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Star `S_n`; vertex 0 is the centre.
pub fn star(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::param("star needs n ≥ 1"));
    }
    Graph::from_edges(n, (1..n).map(|v| (0, v)))
}

pub fn path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::param("path needs n ≥ 1"));
    }
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param("cycle needs n ≥ 3"));
    }
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::param("complete graph needs n ≥ 1"));
    }
    Graph::from_edges(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))))
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a < 1 || b < 1 {
        return Err(Error::param("complete bipartite graph needs both parts nonempty"));
    }
    Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
}

/// Complete multipartite graph with the given part sizes.
pub fn complete_multipartite(parts: &[usize]) -> Result<Graph> {
    let n: usize = parts.iter().sum();
    let mut part_of = Vec::with_capacity(n);
    for (i, &p) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(i, p));
    }
    Graph::from_edges(
        n,
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).filter(|&(u, v)| part_of[u] != part_of[v]),
    )
}

/// `S_n⁺`: the star with the extra edge between leaves 1 and 2.
pub fn star_plus(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param("star_plus needs n ≥ 3"));
    }
    Graph::from_edges(n, (1..n).map(|v| (0, v)).chain([(1, 2)]))
}

/// `i ~ i ± s (mod n)` for each offset `s` in `1..=n/2`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    if offsets.is_empty() || offsets.iter().any(|&s| s == 0 || 2 * s > n) {
        return Err(Error::param(format!("circulant offsets must lie in 1..={} (got {offsets:?})", n / 2)));
    }
    Graph::from_edges_dedup(n, offsets.iter().flat_map(|&s| (0..n).map(move |i| (i, (i + s) % n))))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("Petersen graph is simple")
}

/// The Heawood graph, LCF notation `[5, −5]^7`.
pub fn heawood() -> Graph {
    let rim = (0..14).map(|i| (i, (i + 1) % 14));
    let chords = (0..14).step_by(2).map(|i| (i, (i + 5) % 14));
    Graph::from_edges(14, rim.chain(chords)).expect("Heawood graph is simple")
}

/// Configuration-model random `d`-regular graph, rejecting pairings with loops or repeated edges.
pub fn random_regular(n: usize, d: usize, seed: Seed) -> Result<Graph> {
    const MAX_ATTEMPTS: usize = 100_000;
    if d >= n || (n * d) % 2 == 1 {
        return Err(Error::param(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut rng = seed.rng();
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..MAX_ATTEMPTS {
        points.shuffle(&mut rng);
        let mut pairs: Vec<(usize, usize)> = points.chunks_exact(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        if pairs.iter().any(|&(a, b)| a == b) {
            continue;
        }
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0] == w[1] {
                continue 'attempt;
            }
        }
        return Graph::from_edges(n, pairs);
    }
    Err(Error::AttemptsExhausted(MAX_ATTEMPTS))
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("edge probability must lie in [0, 1]"));
    }
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Uniform labelled tree decoded from a random Prüfer sequence.
pub fn random_tree(n: usize, seed: Seed) -> Result<Graph> {
    if n < 2 {
        return Graph::from_edges(n, []);
    }
    let mut rng = seed.rng();
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    Graph::from_edges(n, prufer_decode(&seq, n))
}

/// Edges of the labelled tree on `n` vertices with Prüfer sequence `seq` (length `n − 2`).
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(std::cmp::Reverse).collect();
    for &x in seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("Prüfer decoding always has a leaf");
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(std::cmp::Reverse(x));
        }
    }
    let a = leaves.pop().unwrap().0;
    let b = leaves.pop().unwrap().0;
    edges.push((a, b));
    edges
}

/// `H ∘ K̄_{m−1}`: attach `m − 1` pendant leaves to every vertex of `h`.
///
/// Vertices `0..N` are those of `h`; the `r`-th leaf of vertex `i` (`1 ≤ r ≤ m − 1`) is
/// `r·N + i`, so the leaves come in blocks `u^(1), …, u^(m−1)`, each ordered like `h`.
pub fn corona(h: &Graph, m: usize) -> Result<Graph> {
    if m < 2 {
        return Err(Error::param("corona needs m ≥ 2"));
    }
    let big_n = h.n();
    let leaves = (1..m).flat_map(|r| (0..big_n).map(move |i| (i, r * big_n + i)));
    Graph::from_edges(m * big_n, h.edge_list().into_iter().chain(leaves))
}

/// Numerically verified Ramanujan data for a regular graph.
#[derive(Debug, Clone, PartialEq)]
pub struct RamanujanCheck {
    pub degree: usize,
    pub bipartite: bool,
    /// Largest `|μ|` over adjacency eigenvalues other than `±d`.
    pub max_nontrivial: f64,
    pub bound: f64,
}

impl RamanujanCheck {
    pub fn holds(&self) -> bool {
        self.max_nontrivial <= self.bound + TOL.eig_abs
    }
}

/// Checks that `g` is connected and `d`-regular, and measures its nontrivial adjacency spectrum.
pub fn ramanujan_check(g: &Graph) -> Result<RamanujanCheck> {
    let d = g.regular_degree().ok_or_else(|| Error::hypothesis("graph is not regular"))?;
    if !g.is_connected() {
        return Err(Error::hypothesis("graph is not connected"));
    }
    let spec = adjacency_spectrum(g)?;
    let df = d as f64;
    let max_nontrivial = spec
        .values()
        .iter()
        .filter(|&&mu| (mu - df).abs() > TOL.eig_abs && (mu + df).abs() > TOL.eig_abs)
        .map(|mu| mu.abs())
        .fold(0.0, f64::max);
    Ok(RamanujanCheck { degree: d, bipartite: g.is_bipartite(), max_nontrivial, bound: 2.0 * (df - 1.0).sqrt() })
}

/// A small named Ramanujan graph and its degree, verified numerically on construction.
///
/// Names: `petersen`, `heawood`, `K<q>,<q>` for `q ≤ 9`, `K<n>` (complete).
pub fn known_ramanujan(name: &str) -> Result<(Graph, usize)> {
    let unknown = || Error::Unknown { kind: "Ramanujan graph", name: name.to_string() };
    let lower = name.to_ascii_lowercase();
    let g = match lower.as_str() {
        "petersen" => petersen(),
        "heawood" => heawood(),
        other => {
            let rest = other.strip_prefix('k').ok_or_else(unknown)?;
            match rest.split_once(',') {
                Some((a, b)) => {
                    let a: usize = a.parse().map_err(|_| unknown())?;
                    let b: usize = b.parse().map_err(|_| unknown())?;
                    if a != b || !(1..=9).contains(&a) {
                        return Err(unknown());
                    }
                    complete_bipartite(a, a)?
                }
                None => {
                    let n: usize = rest.parse().map_err(|_| unknown())?;
                    if n < 2 {
                        return Err(unknown());
                    }
                    complete(n)?
                }
            }
        }
    };
    let check = ramanujan_check(&g)?;
    if !check.holds() {
        return Err(Error::Violated(format!(
            "{name}: nontrivial eigenvalue {} exceeds 2√(d−1) = {}",
            check.max_nontrivial, check.bound
        )));
    }
    Ok((g, check.degree))
}
