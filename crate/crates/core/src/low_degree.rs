//! Average degree at most two: disconnection below 2, the cut bound, `λ_n ≥ Δ+1`, cyclic
//! intervals, the large-pendant-tree lemma, and the exhaustive unicyclic sweep.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::unicyclic_code;
use crate::config::TOL;
use crate::enumerate::enumerate_unicyclic;
use crate::error::{Error, Result};
use crate::generators::star_plus;
use crate::graph::{components, edge_boundary, unicyclic_decompose, Graph, VertexSet};
use crate::linalg::{eigenratio_of, laplacian_energy, laplacian_spectrum, norm_sq, Spectrum};
use crate::report::{InstanceRecord, Status, VerificationReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVerdict {
    pub n: usize,
    pub m: usize,
    pub components: usize,
    pub lambda2: f64,
}

/// Average degree `d < 2` on `n > 2/(2−d)` vertices forces a disconnected graph and `λ_2 = 0`.
pub fn check_prop_d_less_2(g: &Graph) -> Result<SparseVerdict> {
    let (n, m) = (g.n(), g.m());
    // d = 2m/n; n > 2/(2−d) ⟺ 2n − 2m > 2.
    if m >= n || 2 * n <= 2 * m + 2 {
        return Err(Error::hypothesis(format!("need m < n − 1, got n = {n}, m = {m}")));
    }
    let comps = components(g).len();
    if comps < 2 {
        return Err(Error::Violated("graph with m < n − 1 is connected".into()));
    }
    let lambda2 = laplacian_spectrum(g)?.lambda(2);
    if lambda2.abs() > TOL.eig_abs {
        return Err(Error::Violated(format!("disconnected graph has λ_2 = {lambda2}")));
    }
    Ok(SparseVerdict { n, m, components: comps, lambda2 })
}

/// A vertex set with its boundary and the resulting upper bound on `λ_2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutWitness {
    pub set: VertexSet,
    pub boundary: usize,
    /// `n|∂S| / (|S|(n−|S|))`.
    pub bound: f64,
    /// Rayleigh quotient of the vector equal to `n−|S|` on `S` and `−|S|` off it.
    pub rayleigh: f64,
}

pub fn cut_bound(g: &Graph, s: &VertexSet) -> Result<CutWitness> {
    let n = g.n();
    if s.is_empty() || s.len() >= n {
        return Err(Error::TrivialCut);
    }
    let boundary = edge_boundary(g, s)?;
    let (a, b) = (s.len() as f64, (n - s.len()) as f64);
    let bound = n as f64 * boundary as f64 / (a * b);
    let mask = s.mask(n);
    let x: Vec<f64> = mask.iter().map(|&inside| if inside { b } else { -a }).collect();
    let rayleigh = laplacian_energy(g, &x)? / norm_sq(&x);
    if (rayleigh - bound).abs() > TOL.identity_rel * bound.max(1.0) {
        return Err(Error::Violated(format!("cut vector quotient {rayleigh} differs from {bound}")));
    }
    Ok(CutWitness { set: s.clone(), boundary, bound, rayleigh })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxDegreeBound {
    pub max_degree: usize,
    pub bound: f64,
    pub lambda_n: f64,
}

/// `λ_n ≥ Δ + 1` for connected graphs, checked against `spec`.
pub fn maxdeg_bound_with(g: &Graph, spec: &Spectrum) -> Result<MaxDegreeBound> {
    if g.n() < 2 || !g.is_connected() {
        return Err(Error::hypothesis("graph must be connected with at least two vertices"));
    }
    let max_degree = g.max_degree();
    let bound = (max_degree + 1) as f64;
    let lambda_n = spec.max();
    if lambda_n < bound - TOL.inequality {
        return Err(Error::Violated(format!("λ_n = {lambda_n} < Δ + 1 = {bound}")));
    }
    Ok(MaxDegreeBound { max_degree, bound, lambda_n })
}

pub fn maxdeg_bound(g: &Graph) -> Result<MaxDegreeBound> {
    maxdeg_bound_with(g, &laplacian_spectrum(g)?)
}

/// A cyclic run of consecutive indices and its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicInterval {
    pub indices: Vec<usize>,
    pub sum: f64,
    /// Which of the three constructions produced it: prefix, complement of prefix, or single term.
    pub case: u8,
}

/// A cyclic interval whose weight lies in `[total/3, total/2]`, provided every weight is below half the total.
pub fn cyclic_interval(weights: &[f64]) -> Result<CyclicInterval> {
    if weights.is_empty() || weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(Error::param("weights must be positive and finite"));
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| 2.0 * w >= total) {
        return Err(Error::hypothesis("some weight is at least half the total"));
    }
    let r = weights.len();
    let mut prefix = 0.0;
    let mut j = 0;
    while 3.0 * prefix < total {
        prefix += weights[j];
        j += 1;
    }
    let (indices, sum, case): (Vec<usize>, f64, u8) = if 2.0 * prefix <= total {
        ((0..j).collect(), prefix, 1)
    } else if 3.0 * prefix <= 2.0 * total {
        ((j..r).collect(), total - prefix, 2)
    } else {
        (vec![j - 1], weights[j - 1], 3)
    };
    Ok(CyclicInterval { indices, sum, case })
}

/// Output of the descent into a pendant tree holding at least half the vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeTreeVerdict {
    pub ratio: f64,
    pub bound: f64,
    /// 1 if the descent left the cycle vertex, 2 if it stopped there.
    pub case: u8,
    pub stop_vertex: usize,
    /// Number of children of the stop vertex.
    pub children: usize,
    pub cut: CutWitness,
    /// `n / (a(n−a)(t+c))` with `c = 2` or `3` by case.
    pub chain_value: f64,
}

pub fn large_tree_bound_with(g: &Graph, spec: &Spectrum) -> Result<LargeTreeVerdict> {
    let n = g.n();
    let dec = unicyclic_decompose(g).map_err(|e| Error::hypothesis(e.to_string()))?;
    let weights = dec.weights();
    let j0 = (0..weights.len())
        .find(|&i| 2 * weights[i] >= n)
        .ok_or_else(|| Error::hypothesis("no pendant tree holds half the vertices"))?;
    let root = dec.cycle[j0];
    let in_tree = dec.trees[j0].mask(n);

    // Parent pointers and subtree sizes inside T_{j0}.
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &w in g.neighbors(u) {
            if in_tree[w] && w != root && parent[w] == usize::MAX && w != parent[u] {
                parent[w] = u;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut size = vec![0usize; n];
    for &u in order.iter().rev() {
        size[u] += 1;
        if u != root {
            size[parent[u]] += size[u];
        }
    }
    let children =
        |u: usize| -> Vec<usize> { g.neighbors(u).iter().copied().filter(|&w| in_tree[w] && parent[w] == u).collect() };

    let mut u = root;
    while let Some(c) = children(u).into_iter().find(|&c| 2 * size[c] > n) {
        u = c;
    }
    let kids = children(u);
    let c1 = *kids
        .iter()
        .max_by_key(|&&c| (size[c], std::cmp::Reverse(c)))
        .ok_or_else(|| Error::Violated("descent stopped at a leaf".into()))?;
    let s: VertexSet = order
        .iter()
        .copied()
        .filter(|&w| {
            let mut x = w;
            while x != root && x != c1 {
                x = parent[x];
            }
            x == c1
        })
        .collect();
    let cut = cut_bound(g, &s)?;
    if cut.boundary != 1 {
        return Err(Error::Violated(format!("descent cut has boundary {}", cut.boundary)));
    }
    let t = kids.len();
    let (case, extra) = if u == root { (2u8, 3usize) } else { (1u8, 2usize) };
    if g.degree(u) + 1 != t + extra {
        return Err(Error::Violated(format!("stop vertex degree {} does not match case {case}", g.degree(u))));
    }
    let a = s.len() as f64;
    let nf = n as f64;
    let chain_value = nf / (a * (nf - a) * (t + extra) as f64);
    let bound = 2.0 / nf;
    let lambda2 = spec.lambda(2);
    let lambda_n = spec.max();
    if lambda2 > cut.bound + TOL.inequality {
        return Err(Error::Violated(format!("λ_2 = {lambda2} exceeds cut bound {}", cut.bound)));
    }
    if lambda_n < (t + extra) as f64 - TOL.inequality {
        return Err(Error::Violated(format!("λ_n = {lambda_n} < {}", t + extra)));
    }
    if chain_value > bound + TOL.ratio {
        return Err(Error::Violated(format!("chain value {chain_value} exceeds 2/n")));
    }
    let ratio = lambda2 / lambda_n;
    if ratio > bound + TOL.ratio {
        return Err(Error::Violated(format!("ratio {ratio} exceeds 2/n")));
    }
    Ok(LargeTreeVerdict { ratio, bound, case, stop_vertex: u, children: t, cut, chain_value })
}

pub fn large_tree_bound(g: &Graph) -> Result<LargeTreeVerdict> {
    large_tree_bound_with(g, &laplacian_spectrum(g)?)
}

/// Which argument covers a connected unicyclic graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum UnicyclicBranch {
    Cycle { lambda2: f64, closed_form: f64 },
    LargeTree(LargeTreeVerdict),
    Interval { interval: CyclicInterval, cut: CutWitness, lambda_n: f64 },
}

/// Replays the argument for one connected unicyclic graph and returns its branch.
pub fn theorem2_branch(g: &Graph, spec: &Spectrum) -> Result<UnicyclicBranch> {
    let n = g.n();
    let dec = unicyclic_decompose(g)?;
    if dec.cycle.len() == n {
        let closed_form = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        let lambda2 = spec.lambda(2);
        if (lambda2 - closed_form).abs() > TOL.ratio {
            return Err(Error::Violated(format!("λ_2(C_{n}) = {lambda2}, expected {closed_form}")));
        }
        return Ok(UnicyclicBranch::Cycle { lambda2, closed_form });
    }
    let md = maxdeg_bound_with(g, spec)?;
    if md.max_degree < 3 {
        return Err(Error::Violated("non-cycle unicyclic graph with Δ < 3".into()));
    }
    let weights = dec.weights();
    if weights.iter().any(|&w| 2 * w >= n) {
        return Ok(UnicyclicBranch::LargeTree(large_tree_bound_with(g, spec)?));
    }
    let wf: Vec<f64> = weights.iter().map(|&w| w as f64).collect();
    let interval = cyclic_interval(&wf)?;
    let s: VertexSet = interval.indices.iter().flat_map(|&i| dec.trees[i].iter()).collect();
    let cut = cut_bound(g, &s)?;
    if cut.boundary != 2 {
        return Err(Error::Violated(format!("interval cut has boundary {}", cut.boundary)));
    }
    if cut.bound > 9.0 / n as f64 + TOL.ratio {
        return Err(Error::Violated(format!("interval cut bound {} exceeds 9/n", cut.bound)));
    }
    if spec.lambda(2) > cut.bound + TOL.inequality {
        return Err(Error::Violated("λ_2 exceeds the interval cut bound".into()));
    }
    Ok(UnicyclicBranch::Interval { interval, cut, lambda_n: md.lambda_n })
}

pub const THEOREM2_MIN_N: usize = 6;

/// Every connected unicyclic graph on `n` vertices against `λ_2/λ_n ≤ 9/(4n)`.
///
/// For `n < 6` the bound is not claimed; those graphs are recorded as not applicable.
pub fn verify_theorem2(n: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let graphs: Vec<Graph> = enumerate_unicyclic(n)?.collect();
    let bound = 9.0 / (4.0 * n as f64);
    let applies = n >= THEOREM2_MIN_N;
    let rows: Vec<(InstanceRecord, f64, String)> = graphs
        .par_iter()
        .map(|g| -> Result<(InstanceRecord, f64, String)> {
            let code = unicyclic_code(g)?;
            let spec = laplacian_spectrum(g)?;
            let ratio = eigenratio_of(g, &spec)?;
            let id = format!("n{n}:{code}");
            if !applies {
                let r = InstanceRecord::not_applicable(id, format!("n < 6; ratio {ratio:.12}"));
                return Ok((r, ratio, code));
            }
            let rec = InstanceRecord::upper(id, ratio, bound, TOL.ratio);
            let rec = match theorem2_branch(g, &spec) {
                Ok(UnicyclicBranch::Cycle { .. }) => rec.with_detail("cycle"),
                Ok(UnicyclicBranch::LargeTree(v)) => rec.with_detail(format!("large tree, case {}", v.case)),
                Ok(UnicyclicBranch::Interval { interval, .. }) => {
                    rec.with_detail(format!("interval case {}, |S| = {}", interval.case, interval.sum))
                }
                Err(e) => rec.fail_with(e.to_string()),
            };
            Ok((rec, ratio, code))
        })
        .collect::<Result<_>>()?;

    let mut report = VerificationReport::new(format!("unicyclic-n{n}"));
    let extremal = rows.iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|(_, r, c)| (*r, c.clone()));
    for (rec, _, _) in rows {
        report.push(rec);
    }
    let sp = star_plus(n)?;
    let sp_ratio = eigenratio_of(&sp, &laplacian_spectrum(&sp)?)?;
    let target = 1.0 / n as f64;
    let diff = (sp_ratio - target).abs();
    report.push(InstanceRecord {
        id: format!("n{n}:star_plus_ratio"),
        status: if diff <= TOL.ratio { Status::Pass } else { Status::Fail },
        quantity: sp_ratio,
        bound: target,
        margin: TOL.ratio - diff,
        detail: "λ_2/λ_n of S_n⁺ equals 1/n".into(),
    });
    if let Some((r, code)) = extremal {
        let is_sp = code == unicyclic_code(&sp)?;
        report.note(format!("max ratio {r:.12} (n·ratio = {:.6}) at {code}; star_plus: {is_sp}", r * n as f64));
    }
    report.set_wall_time(start.elapsed());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, star};

    #[test]
    fn sparse_graphs_are_disconnected() {
        let forest = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let v = check_prop_d_less_2(&forest).unwrap();
        assert_eq!(v.components, 2);
        assert!(check_prop_d_less_2(&path(6).unwrap()).unwrap_err().is_hypothesis());
    }

    #[test]
    fn cut_examples() {
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(cut_bound(&two, &VertexSet::from([0, 1, 2])).unwrap().bound, 0.0);
        let k = complete(7).unwrap();
        assert!((cut_bound(&k, &VertexSet::singleton(3)).unwrap().bound - 7.0).abs() < 1e-12);
        let c = cut_bound(&cycle(6).unwrap(), &VertexSet::from([0, 1, 2])).unwrap();
        assert!((c.bound - 4.0 / 3.0).abs() < 1e-12);
        assert!(cut_bound(&k, &VertexSet::new()).is_err());
        assert!(cut_bound(&k, &(0..7).collect()).is_err());
    }

    #[test]
    fn maxdeg_examples() {
        let s = maxdeg_bound(&star(6).unwrap()).unwrap();
        assert!((s.lambda_n - 6.0).abs() < 1e-9 && s.bound == 6.0);
        assert!(maxdeg_bound(&path(5).unwrap()).unwrap().lambda_n >= 3.0);
        assert!(maxdeg_bound(&Graph::empty(3)).is_err());
    }

    #[test]
    fn interval_examples() {
        let i = cyclic_interval(&[1.0; 4]).unwrap();
        assert_eq!(i.sum, 2.0);
        let i = cyclic_interval(&[1.0; 6]).unwrap();
        assert!(i.sum == 2.0 || i.sum == 3.0);
        assert_eq!(cyclic_interval(&[3.0, 4.5, 1.0, 1.5]).unwrap().case, 3);
        assert_eq!(cyclic_interval(&[1.0, 3.5, 1.0, 1.0, 1.0, 1.0]).unwrap().case, 2);
        assert!(cyclic_interval(&[5.0, 1.0, 1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(cyclic_interval(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn large_tree_examples() {
        let v = large_tree_bound(&star_plus(6).unwrap()).unwrap();
        assert!((v.ratio - 1.0 / 6.0).abs() < 1e-9);
        assert_eq!(v.case, 2);
        // Triangle with a long tail.
        for n in 6..=12 {
            let mut edges = vec![(0, 1), (1, 2), (2, 0)];
            edges.extend((2..n - 1).map(|i| (i, i + 1)));
            let g = Graph::from_edges(n, edges).unwrap();
            let v = large_tree_bound(&g).unwrap();
            assert!(v.ratio <= 2.0 / n as f64);
            assert_eq!(v.case, if n == 6 { 2 } else { 1 });
        }
        assert!(large_tree_bound(&cycle(8).unwrap()).unwrap_err().is_hypothesis());
    }

    #[test]
    fn small_sweeps() {
        let r = verify_theorem2(6).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.summary().instances, 13 + 1);
        let r = verify_theorem2(4).unwrap();
        assert_eq!(r.summary().hypothesis_not_met, 2);
    }
}
