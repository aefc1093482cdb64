//! Test-vector bounds for regular graphs: paired edge vectors, the `λ_2` versus `λ_n` comparison,
//! higher-eigenvalue subspace bounds, sine-weighted vertex vectors and the negative adjacency
//! spectrum of Ramanujan graphs.

use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::generators::ramanujan_check;
use crate::graph::{bfs_from, edge_distance, Edge, Graph};
use crate::linalg::{adjacency_form, adjacency_spectrum, dot, laplacian_energy, laplacian_spectrum, norm_sq, Spectrum};

fn regular(g: &Graph, min_d: usize) -> Result<usize> {
    let d = g.regular_degree().ok_or_else(|| Error::hypothesis("graph is not regular"))?;
    if d < min_d {
        return Err(Error::hypothesis(format!("degree {d} is below {min_d}")));
    }
    Ok(d)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Per-side layer data around one edge: `sizes[i] = |U_i|` for `i ≤ k+1`, `up[i] = e(U_i, U_{i+1})` for `i ≤ k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideLayers {
    pub sizes: Vec<usize>,
    pub up: Vec<usize>,
}

impl SideLayers {
    fn build(g: &Graph, e: Edge, k: usize) -> Result<(SideLayers, Vec<Option<usize>>)> {
        let dist = bfs_from(g, &e.endpoints(), k + 1);
        let mut sizes = vec![0; k + 2];
        let mut up = vec![0; k + 1];
        for v in 0..g.n() {
            let Some(i) = dist[v] else { continue };
            sizes[i] += 1;
            if i <= k {
                up[i] += g.neighbors(v).iter().filter(|&&w| dist[w] == Some(i + 1)).count();
            }
        }
        if let Some(i) = sizes[..=k].iter().position(|&c| c == 0) {
            return Err(Error::hypothesis(format!("layer {i} around edge {e} is empty")));
        }
        Ok((SideLayers { sizes, up }, dist))
    }

    /// `t_i = e(U_i, U_{i+1}) / |U_i|`.
    pub fn t(&self) -> Vec<f64> {
        self.up.iter().zip(&self.sizes).map(|(&e, &s)| e as f64 / s as f64).collect()
    }
}

/// The two edge-anchored test vectors and every scalar of their Rayleigh quotients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVectorPair {
    pub d: usize,
    pub k: usize,
    pub e: Edge,
    pub f: Edge,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub beta: f64,
    pub u: SideLayers,
    pub v: SideLayers,
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub z0: f64,
    pub z1: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

impl TestVectorPair {
    /// `φ(x)`, an upper bound for `λ_2`.
    pub fn phi_x(&self) -> f64 {
        let b2 = self.beta * self.beta;
        (self.x0 + b2 * self.x1) / (self.z0 + b2 * self.z1)
    }

    /// `φ(y)`, a lower bound for `λ_n`.
    pub fn phi_y(&self) -> f64 {
        let b2 = self.beta * self.beta;
        (self.y0 + b2 * self.y1) / (self.z0 + b2 * self.z1)
    }

    /// `4(d−1)^{3/2}/(k+1)`.
    pub fn slack(&self) -> f64 {
        4.0 * (self.d as f64 - 1.0).powf(1.5) / (self.k as f64 + 1.0)
    }

    /// `D₋²φ(y) + slack − D₊²φ(x)`; non-negative by the two side claims.
    pub fn pair_margin(&self) -> f64 {
        self.d_minus.powi(2) * self.phi_y() + self.slack() - self.d_plus.powi(2) * self.phi_x()
    }

    /// Vertices where `x` (equivalently `y`) is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.x.len()).filter(|&v| self.x[v] != 0.0).collect()
    }
}

/// `(X, Y, Z)` for one side with layer data `side` and weights `w_i = (d−1)^{−i/2}`.
fn side_forms(side: &SideLayers, d: usize, k: usize) -> (f64, f64, f64) {
    let q = d as f64 - 1.0;
    let dm2 = (q.sqrt() - 1.0).powi(2);
    let dp2 = (q.sqrt() + 1.0).powi(2);
    let t = side.t();
    let mut x = 0.0;
    let mut y = 0.0;
    for i in 0..k {
        let base = t[i] * side.sizes[i] as f64 / q.powi(i as i32 + 1);
        x += base * dm2;
        y += base * dp2;
    }
    let boundary = t[k] * side.sizes[k] as f64 / q.powi(k as i32);
    x += boundary;
    y += boundary;
    let z = (0..=k).map(|i| side.sizes[i] as f64 / q.powi(i as i32)).sum();
    (x, y, z)
}

/// Builds the pair `x` (for `λ_2`) and `y` (for `λ_n`) around edges `e`, `f` at distance `≥ 2k+2`
/// and checks the block formulas against the directly evaluated forms.
pub fn build_pair_vectors(g: &Graph, e: Edge, f: Edge, k: usize) -> Result<TestVectorPair> {
    let d = regular(g, 2)?;
    if let Some(dist) = edge_distance(g, e, f)? {
        if dist < 2 * k + 2 {
            return Err(Error::hypothesis(format!("edges {e} and {f} are at distance {dist} < {}", 2 * k + 2)));
        }
    }
    let (u, du) = SideLayers::build(g, e, k)?;
    let (v, dv) = SideLayers::build(g, f, k)?;
    let q = d as f64 - 1.0;
    let w = |i: usize| q.powf(-(i as f64) / 2.0);
    let sign = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mass = |side: &SideLayers| (0..=k).map(|i| side.sizes[i] as f64 * w(i)).sum::<f64>();
    let beta = mass(&u) / mass(&v);

    let n = g.n();
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    for a in 0..n {
        match (du[a].filter(|&i| i <= k), dv[a].filter(|&j| j <= k)) {
            (Some(_), Some(_)) => {
                return Err(Error::hypothesis(format!("layers around {e} and {f} overlap at vertex {a}")));
            }
            (Some(i), None) => {
                x[a] = w(i);
                y[a] = sign(i) * w(i);
            }
            (None, Some(j)) => {
                x[a] = -beta * w(j);
                y[a] = -beta * sign(j) * w(j);
            }
            (None, None) => {}
        }
    }

    let (x0, y0, z0) = side_forms(&u, d, k);
    let (x1, y1, z1) = side_forms(&v, d, k);
    let pair = TestVectorPair {
        d,
        k,
        e,
        f,
        t: u.t(),
        s: v.t(),
        x,
        y,
        beta,
        u,
        v,
        x0,
        x1,
        y0,
        y1,
        z0,
        z1,
        d_plus: q.sqrt() + 1.0,
        d_minus: q.sqrt() - 1.0,
    };

    let b2 = beta * beta;
    let checks = [
        ("xᵀLx", laplacian_energy(g, &pair.x)?, x0 + b2 * x1),
        ("yᵀLy", laplacian_energy(g, &pair.y)?, y0 + b2 * y1),
        ("‖x‖²", norm_sq(&pair.x), z0 + b2 * z1),
        ("‖y‖²", norm_sq(&pair.y), z0 + b2 * z1),
    ];
    for (what, direct, block) in checks {
        if !rel_close(direct, block, TOL.identity_rel) {
            return Err(Error::Violated(format!("{what}: direct {direct} vs block formula {block}")));
        }
    }
    let sum: f64 = pair.x.iter().sum();
    if sum.abs() > TOL.identity_rel * norm_sq(&pair.x).sqrt().max(1.0) {
        return Err(Error::Violated(format!("x is not orthogonal to 1 (sum {sum:e})")));
    }
    if !(beta > 0.0) {
        return Err(Error::Violated(format!("balancing scalar {beta} is not positive")));
    }
    Ok(pair)
}

/// One side's claim: `D₊²X − D₋²Y ≤ 4(d−1)^{3/2} Z/(k+1)`, with the boundary identity value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideClaim {
    pub lhs: f64,
    pub rhs: f64,
    /// `4√(d−1)·t_k|U_k|/(d−1)^k`, which `lhs` must equal.
    pub boundary: f64,
}

impl SideClaim {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + TOL.inequality && rel_close(self.lhs, self.boundary, 1e-9)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma41Check {
    pub lambda2: f64,
    pub lambda_n: f64,
    /// `D₋²λ_n + 4(d−1)^{3/2}/(k+1) − D₊²λ_2`.
    pub margin: f64,
    pub phi_x: f64,
    pub phi_y: f64,
    pub claim_u: SideClaim,
    pub claim_v: SideClaim,
}

impl Lemma41Check {
    pub fn holds(&self) -> bool {
        self.margin >= -TOL.inequality
            && self.claim_u.holds()
            && self.claim_v.holds()
            && self.lambda2 <= self.phi_x + TOL.eig_abs
            && self.lambda_n >= self.phi_y - TOL.eig_abs
    }
}

fn side_claim(pair: &TestVectorPair, side: &SideLayers, xs: f64, ys: f64, zs: f64) -> SideClaim {
    let q = pair.d as f64 - 1.0;
    let k = pair.k;
    let tk = side.up[k] as f64 / side.sizes[k] as f64;
    SideClaim {
        lhs: pair.d_plus.powi(2) * xs - pair.d_minus.powi(2) * ys,
        rhs: pair.slack() * zs,
        boundary: 4.0 * q.sqrt() * tk * side.sizes[k] as f64 / q.powi(k as i32),
    }
}

/// The comparison with a precomputed Laplacian spectrum of `g`.
pub fn check_lemma41_with(g: &Graph, spec: &Spectrum, e: Edge, f: Edge, k: usize) -> Result<Lemma41Check> {
    if !g.is_connected() {
        return Err(Error::hypothesis("graph is not connected"));
    }
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let pair = build_pair_vectors(g, e, f, k)?;
    let lambda2 = spec.lambda(2);
    let lambda_n = spec.max();
    Ok(Lemma41Check {
        lambda2,
        lambda_n,
        margin: pair.d_minus.powi(2) * lambda_n + pair.slack() - pair.d_plus.powi(2) * lambda2,
        phi_x: pair.phi_x(),
        phi_y: pair.phi_y(),
        claim_u: side_claim(&pair, &pair.u, pair.x0, pair.y0, pair.z0),
        claim_v: side_claim(&pair, &pair.v, pair.x1, pair.y1, pair.z1),
    })
}

pub fn check_lemma41(g: &Graph, e: Edge, f: Edge, k: usize) -> Result<Lemma41Check> {
    check_lemma41_with(g, &laplacian_spectrum(g)?, e, f, k)
}

/// A pair of edges at the largest edge distance in `g` (ties broken by edge order).
///
/// `None` for the distance means the edges lie in different components.
pub fn farthest_edge_pair(g: &Graph) -> Option<(Edge, Edge, Option<usize>)> {
    let edges: Vec<Edge> = g.edges().collect();
    let mut best: Option<(Edge, Edge, Option<usize>)> = None;
    let key = |d: Option<usize>| d.unwrap_or(usize::MAX);
    for (i, &e) in edges.iter().enumerate() {
        let dist = bfs_from(g, &e.endpoints(), usize::MAX);
        for &f in &edges[i + 1..] {
            let df = match (dist[f.u], dist[f.v]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            if best.is_none_or(|(_, _, bd)| key(df) > key(bd)) {
                best = Some((e, f, df));
            }
        }
    }
    best
}

/// Largest `k ≥ 1` allowed by an edge distance (`2k + 2 ≤ dist`), if any.
pub fn k_for_distance(dist: Option<usize>) -> Option<usize> {
    match dist {
        None => Some(usize::MAX),
        Some(d) if d >= 4 => Some((d - 2) / 2),
        Some(_) => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Verdict {
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
    /// The witnessing edge pair; `None` when the graph is disconnected and the bound is trivial.
    pub pair: Option<(Edge, Edge)>,
    pub strict_required: bool,
}

impl Theorem3Verdict {
    pub fn holds(&self) -> bool {
        if self.strict_required {
            self.margin > TOL.strict_gap
        } else {
            self.margin >= -TOL.inequality
        }
    }
}

/// `(d−2√(d−1))/(d+2√(d−1)) + 4/((k+1)√(d−1))`.
pub fn theorem3_bound(d: usize, k: usize) -> f64 {
    let df = d as f64;
    let r = (df - 1.0).sqrt();
    (df - 2.0 * r) / (df + 2.0 * r) + 4.0 / ((k as f64 + 1.0) * r)
}

/// First edge pair (in edge order) at distance at least `min_dist`.
pub fn find_edge_pair(g: &Graph, min_dist: usize) -> Option<(Edge, Edge)> {
    let edges: Vec<Edge> = g.edges().collect();
    for (i, &e) in edges.iter().enumerate() {
        let dist = bfs_from(g, &e.endpoints(), min_dist);
        let far = |v: usize| dist[v].is_none_or(|x| x >= min_dist);
        if let Some(&f) = edges[i + 1..].iter().find(|f| far(f.u) && far(f.v)) {
            return Some((e, f));
        }
    }
    None
}

pub fn check_theorem3_with(g: &Graph, spec: &Spectrum, k: usize) -> Result<Theorem3Verdict> {
    let d = regular(g, 2)?;
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let bound = theorem3_bound(d, k);
    let strict_required = d >= 3;
    if !g.is_connected() {
        return Ok(Theorem3Verdict { ratio: 0.0, bound, margin: bound, pair: None, strict_required });
    }
    let (e, f) = find_edge_pair(g, 2 * k + 2)
        .ok_or_else(|| Error::hypothesis(format!("no two edges at distance ≥ {}", 2 * k + 2)))?;
    let ratio = spec.lambda(2) / spec.max();
    Ok(Theorem3Verdict { ratio, bound, margin: bound - ratio, pair: Some((e, f)), strict_required })
}

pub fn check_theorem3(g: &Graph, k: usize) -> Result<Theorem3Verdict> {
    check_theorem3_with(g, &laplacian_spectrum(g)?, k)
}

/// Edges or vertices whose pairwise distances are all at least `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistantFamily<T> {
    pub members: Vec<T>,
    pub threshold: usize,
}

impl<T> DistantFamily<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn greedy_family<T: Copy>(
    g: &Graph,
    candidates: impl Iterator<Item = T>,
    anchors: impl Fn(&T) -> Vec<usize>,
    threshold: usize,
    want: Option<usize>,
) -> Result<DistantFamily<T>> {
    // near[v]: distance from v to the closest anchor chosen so far, when below the threshold
    let mut near: Vec<Option<usize>> = vec![None; g.n()];
    let mut members = Vec::new();
    for c in candidates {
        let a = anchors(&c);
        if a.iter().any(|&v| near[v].is_some_and(|x| x < threshold)) {
            continue;
        }
        let dist = bfs_from(g, &a, threshold.saturating_sub(1));
        for (v, dv) in dist.into_iter().enumerate() {
            if let Some(dv) = dv {
                near[v] = Some(near[v].map_or(dv, |x| x.min(dv)));
            }
        }
        members.push(c);
    }
    for (i, m) in members.iter().enumerate() {
        let dist = bfs_from(g, &anchors(m), usize::MAX);
        for other in &members[i + 1..] {
            if anchors(other).iter().any(|&v| dist[v].is_some_and(|x| x < threshold)) {
                return Err(Error::Violated("greedy family failed BFS re-verification".into()));
            }
        }
    }
    if let Some(w) = want {
        if members.len() < w {
            return Err(Error::hypothesis(format!(
                "only {} members pairwise at distance ≥ {threshold}, need {w}",
                members.len()
            )));
        }
    }
    Ok(DistantFamily { members, threshold })
}

/// Greedy maximal set of edges, in edge order, with pairwise edge distance `≥ threshold`.
pub fn find_distant_edges(g: &Graph, threshold: usize, want: Option<usize>) -> Result<DistantFamily<Edge>> {
    greedy_family(g, g.edges(), |e| e.endpoints().to_vec(), threshold, want)
}

/// Greedy maximal set of vertices, in index order, with pairwise distance `≥ threshold`.
pub fn find_distant_vertices(g: &Graph, threshold: usize, want: Option<usize>) -> Result<DistantFamily<usize>> {
    greedy_family(g, 0..g.n(), |&v| vec![v], threshold, want)
}

/// Upper bound on the number of edges within distance `2k+2` of a fixed edge in a `d`-regular graph.
pub fn edge_neighbourhood_cap(d: usize, k: usize) -> f64 {
    let df = d as f64;
    let geo: f64 = (0..=2 * k + 1).map(|i| (df - 1.0).powi(i as i32)).sum();
    2.0 * df * (1.0 + df * geo)
}

/// `n(d−2)/(4d)·(d−1)^{−(2k+2)}`: size guaranteed for a maximal edge family at threshold `2k+2`.
pub fn edge_family_floor(n: usize, d: usize, k: usize) -> f64 {
    let df = d as f64;
    n as f64 * (df - 2.0) / (4.0 * df) * (df - 1.0).powi(-(2 * k as i32 + 2))
}

/// `n(d−2)/(d(d−1)^{4k})`: size guaranteed for a maximal vertex family at threshold `4k`.
pub fn vertex_family_floor(n: usize, d: usize, k: usize) -> f64 {
    let df = d as f64;
    n as f64 * (df - 2.0) / df * (df - 1.0).powi(-(4 * k as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairBound {
    pub e: Edge,
    pub f: Edge,
    pub phi_x: f64,
    pub phi_y: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem4a {
    pub s: usize,
    pub k: usize,
    pub pairs: Vec<PairBound>,
    /// The `s−1` pairs with smallest `φ(x_t)`.
    pub low: Vec<usize>,
    /// The `s−1` pairs with largest `φ(y_t)`.
    pub high: Vec<usize>,
    pub w: usize,
    pub lambda_s1: f64,
    pub lambda_ns1: f64,
    /// `D₋²λ_{n−s+1} + 4(d−1)^{3/2}/(k+1) − D₊²λ_{s+1}`.
    pub margin: f64,
    pub supports_separated: bool,
}

impl Theorem4a {
    pub fn holds(&self) -> bool {
        let w = &self.pairs[self.w];
        self.margin >= -TOL.inequality
            && self.supports_separated
            && self.pairs.iter().all(|p| p.margin >= -TOL.inequality)
            && self.lambda_s1 <= w.phi_x + TOL.eig_abs
            && self.lambda_ns1 >= w.phi_y - TOL.eig_abs
    }
}

/// True when the supports are pairwise disjoint and no edge joins two of them.
fn supports_separated(g: &Graph, supports: &[Vec<usize>]) -> bool {
    let mut owner = vec![usize::MAX; g.n()];
    for (t, s) in supports.iter().enumerate() {
        for &v in s {
            if owner[v] != usize::MAX {
                return false;
            }
            owner[v] = t;
        }
    }
    g.edges().all(|e| owner[e.u] == owner[e.v] || owner[e.u] == usize::MAX || owner[e.v] == usize::MAX)
}

fn indices_by(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

pub fn check_theorem4a_with(g: &Graph, spec: &Spectrum, s: usize, k: usize) -> Result<Theorem4a> {
    let d = regular(g, 3)?;
    if s == 0 || k == 0 {
        return Err(Error::param("s and k must be positive"));
    }
    let need = 4 * s - 2;
    let family = find_distant_edges(g, 2 * k + 2, Some(need))?;
    let chosen = &family.members[..need];
    let built: Vec<TestVectorPair> =
        chosen.chunks(2).map(|c| build_pair_vectors(g, c[0], c[1], k)).collect::<Result<_>>()?;
    let pairs: Vec<PairBound> = built
        .iter()
        .map(|p| PairBound { e: p.e, f: p.f, phi_x: p.phi_x(), phi_y: p.phi_y(), margin: p.pair_margin() })
        .collect();
    let supports: Vec<Vec<usize>> = built.iter().map(TestVectorPair::support).collect();

    let px: Vec<f64> = pairs.iter().map(|p| p.phi_x).collect();
    let py: Vec<f64> = pairs.iter().map(|p| p.phi_y).collect();
    let low: Vec<usize> = indices_by(&px)[..s - 1].to_vec();
    let high: Vec<usize> = indices_by(&py).into_iter().rev().take(s - 1).collect();
    let w = (0..pairs.len())
        .find(|t| !low.contains(t) && !high.contains(t))
        .ok_or_else(|| Error::Violated("no pair left outside the two selected index sets".into()))?;

    let n = g.n();
    let q = d as f64 - 1.0;
    let dp2 = (q.sqrt() + 1.0).powi(2);
    let dm2 = (q.sqrt() - 1.0).powi(2);
    let lambda_s1 = spec.lambda(s + 1);
    let lambda_ns1 = spec.lambda(n - s + 1);
    Ok(Theorem4a {
        s,
        k,
        margin: dm2 * lambda_ns1 + built[0].slack() - dp2 * lambda_s1,
        supports_separated: supports_separated(g, &supports),
        pairs,
        low,
        high,
        w,
        lambda_s1,
        lambda_ns1,
    })
}

pub fn check_theorem4a(g: &Graph, s: usize, k: usize) -> Result<Theorem4a> {
    check_theorem4a_with(g, &laplacian_spectrum(g)?, s, k)
}

/// `x_i = sin(iα)/(d−1)^{i/2}` for `i = 0..=2k`, `α = π/(2k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineSequence {
    pub d: usize,
    pub k: usize,
    pub alpha: f64,
    pub values: Vec<f64>,
}

impl SineSequence {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if d < 2 || k == 0 {
            return Err(Error::param("need d ≥ 2 and k ≥ 1"));
        }
        let alpha = std::f64::consts::PI / (2 * k) as f64;
        let q = d as f64 - 1.0;
        let mut values: Vec<f64> = (0..=2 * k).map(|i| (i as f64 * alpha).sin() / q.powf(i as f64 / 2.0)).collect();
        // sin(π) is not exactly zero in floating point
        values[2 * k] = 0.0;
        Ok(SineSequence { d, k, alpha, values })
    }

    pub fn m_plus(&self) -> f64 {
        (self.d as f64 - 1.0).sqrt() + 2.0
    }

    pub fn m_minus(&self) -> f64 {
        (self.d as f64 - 1.0).sqrt() - 2.0
    }

    /// Largest `|x_{i−1} + (d−1)x_{i+1} − 2√(d−1)cos α·x_i|` over `1 ≤ i ≤ 2k−1`.
    pub fn recurrence_residual(&self) -> f64 {
        let q = self.d as f64 - 1.0;
        let x = &self.values;
        (1..2 * self.k)
            .map(|i| (x[i - 1] + q * x[i + 1] - 2.0 * q.sqrt() * self.alpha.cos() * x[i]).abs())
            .fold(0.0, f64::max)
    }

    /// `x_{i+1}/x_i ≤ 2/√(d−1)` for `1 ≤ i ≤ 2k−1`.
    pub fn ratio_bound_holds(&self) -> bool {
        let cap = 2.0 / (self.d as f64 - 1.0).sqrt();
        (1..2 * self.k).all(|i| self.values[i + 1] <= cap * self.values[i] * (1.0 + 1e-12))
    }

    /// `x_1 ≥ … ≥ x_{2k−1} > 0` and `x_0 = x_{2k} = 0`.
    pub fn is_monotone(&self) -> bool {
        let x = &self.values;
        x[0] == 0.0
            && x[2 * self.k] == 0.0
            && (1..2 * self.k).all(|i| x[i] > 0.0)
            && (1..2 * self.k - 1).all(|i| x[i] >= x[i + 1])
    }
}

/// Layer statistics around one anchor vertex, `i = 0..=2k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexLayers {
    pub anchor: usize,
    pub n: Vec<usize>,
    /// Ordered adjacent pairs from layer `i` back to `i−1`, inside `i`, and out to `i+1`.
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl VertexLayers {
    fn build(g: &Graph, anchor: usize, k: usize) -> (VertexLayers, Vec<Option<usize>>) {
        let top = 2 * k;
        let dist = bfs_from(g, &[anchor], top + 1);
        let mut layers =
            VertexLayers { anchor, n: vec![0; top + 1], a: vec![0; top + 1], b: vec![0; top + 1], c: vec![0; top + 1] };
        for u in 0..g.n() {
            let Some(i) = dist[u].filter(|&i| i <= top) else { continue };
            layers.n[i] += 1;
            for &w in g.neighbors(u) {
                match dist[w] {
                    Some(j) if j + 1 == i => layers.a[i] += 1,
                    Some(j) if j == i => layers.b[i] += 1,
                    Some(j) if j == i + 1 => layers.c[i] += 1,
                    _ => {}
                }
            }
        }
        (layers, dist)
    }

    /// `a+b+c = d·n_i` and `a ≥ n_i` for `1 ≤ i ≤ 2k−1`.
    pub fn constraints_hold(&self, d: usize) -> bool {
        let top = self.n.len() - 1;
        (1..top).all(|i| self.a[i] + self.b[i] + self.c[i] == d * self.n[i] && self.a[i] >= self.n[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSine {
    pub layers: VertexLayers,
    pub x_ax: f64,
    pub y_ay: f64,
    pub norm_sq: f64,
    /// `M₊xᵀAx − M₋yᵀAy − 4(d−1)cos α‖x‖²`.
    pub local_margin: f64,
    /// Difference between the direct forms and the layer-count sum.
    pub identity_error: f64,
}

impl LocalSine {
    pub fn psi_x(&self) -> f64 {
        self.x_ax / self.norm_sq
    }

    pub fn psi_y(&self) -> f64 {
        self.y_ay / self.norm_sq
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem4b {
    pub s: usize,
    pub k: usize,
    pub sequence: SineSequence,
    pub anchors: Vec<usize>,
    pub locals: Vec<LocalSine>,
    /// The `s` anchors with largest `ψ(x_ℓ)`.
    pub top_x: Vec<usize>,
    /// The `s−1` anchors with smallest `ψ(y_ℓ)`.
    pub bottom_y: Vec<usize>,
    pub w: usize,
    pub mu_s1: f64,
    pub mu_ns1: f64,
    /// `M₊μ_{s+1} − M₋μ_{n−s+1} − 4(d−1)cos(π/(2k))`.
    pub margin: f64,
    pub supports_separated: bool,
    /// `k = 1`: only the `i = 1` layer carries weight.
    pub boundary_case: bool,
}

impl Theorem4b {
    pub fn holds(&self) -> bool {
        let d = self.sequence.d;
        let w = &self.locals[self.w];
        let scale = |x: f64| TOL.inequality * x.abs().max(1.0);
        self.margin >= -TOL.inequality
            && self.supports_separated
            && self.sequence.is_monotone()
            && self.sequence.ratio_bound_holds()
            && self.locals.iter().all(|l| {
                l.layers.constraints_hold(d) && l.local_margin >= -scale(l.norm_sq) && l.identity_error <= scale(l.x_ax)
            })
            && self.mu_s1 >= w.psi_x() - TOL.eig_abs
            && self.mu_ns1 <= w.psi_y() + TOL.eig_abs
    }
}

fn local_sine(g: &Graph, seq: &SineSequence, anchor: usize) -> (LocalSine, Vec<usize>) {
    let k = seq.k;
    let (layers, dist) = VertexLayers::build(g, anchor, k);
    let n = g.n();
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    for v in 0..n {
        if let Some(i) = dist[v].filter(|&i| i <= 2 * k) {
            x[v] = seq.values[i];
            y[v] = if i % 2 == 0 { seq.values[i] } else { -seq.values[i] };
        }
    }
    let q = seq.d as f64 - 1.0;
    let xv = &seq.values;
    let x_ax = adjacency_form(g, &x);
    let y_ay = adjacency_form(g, &y);
    let nn = norm_sq(&x);
    let lhs = seq.m_plus() * x_ax - seq.m_minus() * y_ay;
    let layered: f64 = (1..2 * k)
        .map(|i| {
            let (a, b, c) = (layers.a[i] as f64, layers.b[i] as f64, layers.c[i] as f64);
            (2.0 * q.sqrt() * a * xv[i - 1] + 4.0 * b * xv[i] + 2.0 * q.sqrt() * c * xv[i + 1]) * xv[i]
        })
        .sum();
    let support = (0..n).filter(|&v| x[v] != 0.0).collect();
    let local = LocalSine {
        layers,
        x_ax,
        y_ay,
        norm_sq: nn,
        local_margin: lhs - 4.0 * q * seq.alpha.cos() * nn,
        identity_error: (lhs - layered).abs(),
    };
    (local, support)
}

/// Adjacency-spectrum check with a precomputed adjacency spectrum of `g`.
pub fn check_theorem4b_with(g: &Graph, adj: &Spectrum, s: usize, k: usize) -> Result<Theorem4b> {
    let d = regular(g, 5)?;
    if s == 0 || k == 0 {
        return Err(Error::param("s and k must be positive"));
    }
    let seq = SineSequence::new(d, k)?;
    let family = find_distant_vertices(g, 4 * k, Some(2 * s + 1))?;
    let anchors = family.members[..2 * s + 1].to_vec();
    let (locals, supports): (Vec<LocalSine>, Vec<Vec<usize>>) = anchors.iter().map(|&a| local_sine(g, &seq, a)).unzip();

    let px: Vec<f64> = locals.iter().map(LocalSine::psi_x).collect();
    let py: Vec<f64> = locals.iter().map(LocalSine::psi_y).collect();
    let top_x: Vec<usize> = indices_by(&px).into_iter().rev().take(s).collect();
    let bottom_y: Vec<usize> = indices_by(&py)[..s - 1].to_vec();
    let w = (0..anchors.len())
        .find(|l| !top_x.contains(l) && !bottom_y.contains(l))
        .ok_or_else(|| Error::Violated("no anchor left outside the two selected index sets".into()))?;

    let n = g.n();
    let mu_s1 = adj.mu(s + 1);
    let mu_ns1 = adj.mu(n - s + 1);
    let q = d as f64 - 1.0;
    Ok(Theorem4b {
        s,
        k,
        margin: seq.m_plus() * mu_s1 - seq.m_minus() * mu_ns1 - 4.0 * q * seq.alpha.cos(),
        supports_separated: supports_separated(g, &supports),
        boundary_case: k == 1,
        sequence: seq,
        anchors,
        locals,
        top_x,
        bottom_y,
        w,
        mu_s1,
        mu_ns1,
    })
}

pub fn check_theorem4b(g: &Graph, s: usize, k: usize) -> Result<Theorem4b> {
    check_theorem4b_with(g, &adjacency_spectrum(g)?, s, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Edge families and the Laplacian comparison, any `d ≥ 3`.
    A,
    /// Vertex families and sine vectors, `d ≥ 6`.
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub step: String,
    pub value: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem5Outcome {
    pub variant: Variant,
    pub d: usize,
    pub n: usize,
    pub epsilon: f64,
    pub eta: f64,
    /// `M_d` (variant a) or `N_d` (variant b).
    pub constant: f64,
    pub k: usize,
    pub family_size: usize,
    /// Covering-argument lower bound on the family size.
    pub family_floor: f64,
    pub s: usize,
    /// Adjacency eigenvalues below `−2√(d−1) + ε`.
    pub count: usize,
    /// False when the family is too small for `s ≥ 1`; the chain then validates the mechanism only.
    pub completed: bool,
    pub chain: Vec<ChainStep>,
}

impl Theorem5Outcome {
    pub fn holds(&self) -> bool {
        self.chain.iter().all(|c| c.ok)
    }

    pub fn chain_json(&self) -> String {
        serde_json::to_string(self).expect("outcome serializes")
    }
}

/// `M_d = 4(d−1)^{3/2}/(d−2√(d−1))`.
pub fn m_d(d: usize) -> f64 {
    let q = d as f64 - 1.0;
    4.0 * q.powf(1.5) / (d as f64 - 2.0 * q.sqrt())
}

/// `N_d = π√((d−1)/(2(√(d−1)−2)))`.
pub fn n_d(d: usize) -> f64 {
    let q = d as f64 - 1.0;
    std::f64::consts::PI * (q / (2.0 * (q.sqrt() - 2.0))).sqrt()
}

/// Follows the counting argument on a concrete Ramanujan graph and records every step.
pub fn theorem5_pipeline(g: &Graph, epsilon: f64, variant: Variant) -> Result<Theorem5Outcome> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::param(format!("ε = {epsilon} is outside (0, 1]")));
    }
    let check = ramanujan_check(g)?;
    if !check.holds() {
        return Err(Error::hypothesis(format!(
            "not Ramanujan: nontrivial |μ| {} > {}",
            check.max_nontrivial, check.bound
        )));
    }
    let d = check.degree;
    let min_d = match variant {
        Variant::A => 3,
        Variant::B => 6,
    };
    if d < min_d {
        return Err(Error::hypothesis(format!("degree {d} is below {min_d}")));
    }
    let n = g.n();
    let eta = epsilon / 2.0;
    let q = d as f64 - 1.0;
    let mut chain = Vec::new();
    let mut step = |name: &str, value: f64, ok: bool| chain.push(ChainStep { step: name.to_string(), value, ok });

    let (constant, k, family_size, family_floor, s) = match variant {
        Variant::A => {
            let c = m_d(d);
            let k = (c / eta).ceil() as usize;
            step("M_d", c, true);
            step("k = ceil(M_d/eta)", k as f64, true);
            let slack = 4.0 * q.powf(1.5) / ((k as f64 + 1.0) * (d as f64 - 2.0 * q.sqrt()));
            step("slack/(d-2sqrt(d-1)) <= eta", slack, slack <= eta + 1e-12);
            let fam = find_distant_edges(g, 2 * k + 2, None)?;
            let floor = edge_family_floor(n, d, k);
            step("family size", fam.len() as f64, fam.len() as f64 >= floor);
            step("covering floor n(d-2)/(4d)(d-1)^-(2k+2)", floor, true);
            step("log10 n_1", (16.0 * d as f64 / (d as f64 - 2.0)).log10() + (2 * k + 2) as f64 * q.log10(), true);
            (c, k, fam.len(), floor, (fam.len() + 2) / 4)
        }
        Variant::B => {
            let c = n_d(d);
            let k = (c / eta.sqrt()).ceil() as usize;
            let lhs = 4.0 * q / (q.sqrt() - 2.0) * (1.0 - (std::f64::consts::PI / (2 * k) as f64).cos());
            step("N_d", c, true);
            step("k = ceil(N_d/sqrt(eta))", k as f64, true);
            step("4(d-1)/(sqrt(d-1)-2)(1-cos(pi/2k)) <= eta", lhs, lhs <= eta + 1e-12);
            let fam = find_distant_vertices(g, 4 * k, None)?;
            let floor = vertex_family_floor(n, d, k);
            step("family size", fam.len() as f64, fam.len() as f64 >= floor);
            step("covering floor n(d-2)/(d(d-1)^4k)", floor, true);
            step("log10 n_2", (4.0 * d as f64 / (d as f64 - 2.0)).log10() + (4 * k) as f64 * q.log10(), true);
            (c, k, fam.len(), floor, fam.len().saturating_sub(1) / 2)
        }
    };
    step("s", s as f64, true);

    let adj = adjacency_spectrum(g)?;
    let threshold = -2.0 * q.sqrt() + epsilon;
    let count = adj.values().iter().filter(|&&mu| mu < threshold).count();
    let completed = s >= 1;
    if completed {
        let mu = adj.mu(n - s + 1);
        step("mu_{n-s+1} < -2sqrt(d-1)+eps", mu, mu < threshold);
        step("count >= s", count as f64, count >= s);
    } else {
        step("family too small for s >= 1; mechanism validated only", family_size as f64, true);
    }
    step("count below -2sqrt(d-1)+eps", count as f64, true);
    Ok(Theorem5Outcome {
        variant,
        d,
        n,
        epsilon,
        eta,
        constant,
        k,
        family_size,
        family_floor,
        s,
        count,
        completed,
        chain,
    })
}

/// `⟨x, 1⟩` relative to `‖x‖`.
pub fn orthogonality_defect(x: &[f64]) -> f64 {
    let ones = vec![1.0; x.len()];
    dot(x, &ones).abs() / norm_sq(x).sqrt().max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        circulant, complete, complete_bipartite, cycle, heawood, path, petersen, random_regular, Seed,
    };

    fn edge(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn cycle_pair_by_hand() {
        let g = cycle(12).unwrap();
        let p = build_pair_vectors(&g, edge(0, 1), edge(6, 7), 1).unwrap();
        assert_eq!(p.u.sizes[..2], [2, 2]);
        assert_eq!(p.v.sizes[..2], [2, 2]);
        assert!((p.beta - 1.0).abs() < 1e-15);
        assert!(p.x.iter().all(|&v| v == 0.0 || v.abs() == 1.0));
        assert_eq!(p.support().len(), 8);
        assert!(orthogonality_defect(&p.x) < 1e-12);
    }

    #[test]
    fn too_close_is_rejected() {
        let g = cycle(12).unwrap();
        assert!(build_pair_vectors(&g, edge(0, 1), edge(4, 5), 1).unwrap_err().is_hypothesis());
        assert!(build_pair_vectors(&petersen(), edge(0, 1), edge(2, 3), 1).is_err());
    }

    #[test]
    fn cycles_satisfy_lemma() {
        for n in [12, 17, 30] {
            let g = cycle(n).unwrap();
            let (e, f, dist) = farthest_edge_pair(&g).unwrap();
            let k = k_for_distance(dist).unwrap();
            let c = check_lemma41(&g, e, f, k).unwrap();
            assert!(c.holds(), "C_{n}: {c:?}");
            let lambda2 = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
            assert!((c.lambda2 - lambda2).abs() < 1e-9);
        }
    }

    #[test]
    fn random_cubic_and_circulant() {
        let g = random_regular(60, 3, Seed(4)).unwrap();
        let (e, f, dist) = farthest_edge_pair(&g).unwrap();
        if let Some(k) = k_for_distance(dist) {
            assert!(check_lemma41(&g, e, f, k).unwrap().holds());
        }
        let g = circulant(80, &[1, 2, 3]).unwrap();
        let (e, f, dist) = farthest_edge_pair(&g).unwrap();
        let k = k_for_distance(dist).unwrap();
        let c = check_lemma41(&g, e, f, k).unwrap();
        assert!(c.holds());
        assert!(rel_close(c.claim_u.lhs, c.claim_u.boundary, 1e-12));
    }

    #[test]
    fn boundary_identity_constant() {
        for d in 2..20 {
            let r = (d as f64 - 1.0).sqrt();
            assert!(((r + 1.0).powi(2) - (r - 1.0).powi(2) - 4.0 * r).abs() < 1e-12);
        }
    }

    #[test]
    fn theorem3_cases() {
        let two_k4 =
            Graph::from_edges(8, (0..4).flat_map(|a| (a + 1..4).flat_map(move |b| [(a, b), (a + 4, b + 4)]))).unwrap();
        let v = check_theorem3(&two_k4, 1).unwrap();
        assert!(v.holds() && v.pair.is_none() && v.ratio == 0.0);
        assert!(check_theorem3(&petersen(), 1).unwrap_err().is_hypothesis());
        let g = circulant(90, &[1, 2]).unwrap();
        let (_, _, dist) = farthest_edge_pair(&g).unwrap();
        let v = check_theorem3(&g, k_for_distance(dist).unwrap()).unwrap();
        assert!(v.holds(), "{v:?}");
    }

    #[test]
    fn distant_families() {
        let c12 = cycle(12).unwrap();
        assert_eq!(find_distant_edges(&c12, 4, None).unwrap().len(), 2);
        assert_eq!(find_distant_vertices(&c12, 4, None).unwrap().members, vec![0, 4, 8]);
        assert_eq!(find_distant_vertices(&path(9).unwrap(), 4, None).unwrap().members, vec![0, 4, 8]);
        assert_eq!(find_distant_edges(&complete(4).unwrap(), 2, None).unwrap().len(), 1);
        assert!(find_distant_edges(&c12, 4, Some(3)).unwrap_err().is_hypothesis());
    }

    #[test]
    fn covering_bounds_hold() {
        let g = random_regular(200, 3, Seed(1)).unwrap();
        for k in 1..4 {
            let fam = find_distant_edges(&g, 2 * k + 2, None).unwrap();
            assert!(fam.len() as f64 >= g.m() as f64 / edge_neighbourhood_cap(3, k));
            assert!(fam.len() as f64 >= edge_family_floor(200, 3, k));
            let fam = find_distant_vertices(&g, 4 * k, None).unwrap();
            assert!(fam.len() as f64 >= vertex_family_floor(200, 3, k));
        }
    }

    #[test]
    fn theorem4a_small() {
        let g = circulant(160, &[1, 2, 3]).unwrap();
        for s in 1..=2 {
            let t = check_theorem4a(&g, s, 2).unwrap();
            assert!(t.holds(), "{t:?}");
            assert_eq!(t.pairs.len(), 2 * s - 1);
        }
    }

    #[test]
    fn sine_sequence_facts() {
        for d in 5..=12 {
            for k in 1..=50 {
                let seq = SineSequence::new(d, k).unwrap();
                assert!(seq.is_monotone(), "d={d} k={k}");
                assert!(seq.ratio_bound_holds(), "d={d} k={k}");
                assert!(seq.recurrence_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn theorem4b_small() {
        let g = circulant(120, &[1, 2, 3]).unwrap();
        for (s, k) in [(1, 1), (1, 3), (2, 2)] {
            let t = check_theorem4b(&g, s, k).unwrap();
            assert!(t.holds(), "s={s} k={k}: {t:?}");
            assert_eq!(t.boundary_case, k == 1);
        }
        let g = random_regular(60, 5, Seed(9)).unwrap();
        let t = check_theorem4b(&g, 1, 1).unwrap();
        assert!(t.holds());
        assert!(t.sequence.alpha.cos().abs() < 1e-15);
    }

    #[test]
    fn theorem5_desk_scale() {
        for d in 3..=6 {
            let o = theorem5_pipeline(&complete_bipartite(d, d).unwrap(), 1.0, Variant::A).unwrap();
            assert_eq!(o.count, 1);
            assert!(o.holds() && !o.completed);
        }
        let o = theorem5_pipeline(&petersen(), 1.0, Variant::A).unwrap();
        assert_eq!(o.count, 4);
        let o = theorem5_pipeline(&heawood(), 1.0, Variant::A).unwrap();
        assert_eq!(o.count, 1);
        assert!(o.chain_json().contains("\"k\""));
        let o = theorem5_pipeline(&complete_bipartite(6, 6).unwrap(), 0.5, Variant::B).unwrap();
        assert!(o.holds());
        assert!(theorem5_pipeline(&petersen(), 1.0, Variant::B).unwrap_err().is_hypothesis());
        assert!(theorem5_pipeline(&petersen(), 1.5, Variant::A).is_err());
        assert!(theorem5_pipeline(&cycle(8).unwrap().with_edge(0, 4).unwrap(), 1.0, Variant::A).is_err());
    }
}
