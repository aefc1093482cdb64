//! Vertex expansion: the two-set separation inequality, brute-force `C`-expander certification,
//! the eigenratio criterion for expansion and an exact Hamilton cycle search.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::graph_code;
use crate::config::TOL;
use crate::enumerate::enumerate_connected_graphs;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::linalg::{laplacian_spectrum, Spectrum};
use crate::report::{InstanceRecord, Status, VerificationReport};

/// Largest graph certified by exhaustive subset enumeration.
pub const MAX_EXPANDER_N: usize = 20;
/// Largest graph handed to the Hamilton cycle search.
pub const MAX_HAMILTON_N: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaemersCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `|X||Y|/((n−|X|)(n−|Y|)) ≤ ((λ_n−λ_2)/(λ_n+λ_2))²` for disjoint, non-adjacent `X`, `Y`.
pub fn haemers_check_with(g: &Graph, spec: &Spectrum, x: &VertexSet, y: &VertexSet) -> Result<HaemersCheck> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    let n = g.n();
    x.iter().chain(y.iter()).try_for_each(|v| g.check_vertex(v))?;
    if !x.is_disjoint(y) {
        return Err(Error::param("X and Y overlap"));
    }
    if g.edges_between(&x.mask(n), &y.mask(n)) > 0 {
        return Err(Error::hypothesis("X and Y are joined by an edge"));
    }
    let (a, b) = (x.len() as f64, y.len() as f64);
    let nf = n as f64;
    let lhs = a * b / ((nf - a) * (nf - b));
    let (l2, ln) = (spec.lambda(2).max(0.0), spec.max());
    let rhs = ((ln - l2) / (ln + l2)).powi(2);
    Ok(HaemersCheck { lhs, rhs, pass: lhs <= rhs + TOL.inequality })
}

pub fn haemers_check(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<HaemersCheck> {
    haemers_check_with(g, &laplacian_spectrum(g)?, x, y)
}

/// `N(X)`: vertices outside `X` with a neighbour in `X`.
pub fn neighborhood(g: &Graph, x: &VertexSet) -> VertexSet {
    let inside = x.mask(g.n());
    let mut out = vec![false; g.n()];
    for u in x.iter().filter(|&u| u < g.n()) {
        for &w in g.neighbors(u) {
            out[w] = !inside[w];
        }
    }
    (0..g.n()).filter(|&v| out[v]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderVerdict {
    pub c: f64,
    /// `n/(2C)`.
    pub threshold: f64,
    pub cond_a: bool,
    /// Smallest (then lexicographically first) `X` with `|N(X)| < C|X|`.
    pub witness_a: Option<VertexSet>,
    pub cond_b: bool,
    /// Disjoint `X`, `Y` of the minimal admissible size with no edge between them.
    pub witness_b: Option<(VertexSet, VertexSet)>,
}

impl ExpanderVerdict {
    pub fn pass(&self) -> bool {
        self.cond_a && self.cond_b
    }
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect()
}

fn nbhd_mask(adj: &[u32], x: u32) -> u32 {
    let mut m = 0;
    let mut rest = x;
    while rest != 0 {
        m |= adj[rest.trailing_zeros() as usize];
        rest &= rest - 1;
    }
    m & !x
}

fn to_set(mask: u32) -> VertexSet {
    (0..32).filter(|&v| mask >> v & 1 == 1).collect()
}

/// `r`-subsets of `0..n` as bitmasks, in lexicographic order of their sorted elements.
fn subsets(n: usize, r: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, r: usize, cur: u32, out: &mut Vec<u32>) {
        if r == 0 {
            out.push(cur);
            return;
        }
        for v in start..=n - r {
            rec(v + 1, n, r - 1, cur | 1 << v, out);
        }
    }
    let mut out = Vec::new();
    if r <= n {
        rec(0, n, r, 0, &mut out);
    }
    out
}

/// Brute-force check of both expansion conditions.
///
/// Condition (b) is decided on pairs of the minimal admissible size `⌈n/(2C)⌉`: any edgeless
/// pair of larger sets shrinks to one of that size. `full` enumerates every admissible `X`.
pub fn c_expander_check_mode(g: &Graph, c: f64, full: bool) -> Result<ExpanderVerdict> {
    let n = g.n();
    if n < 3 {
        return Err(Error::param("expansion needs n ≥ 3"));
    }
    if n > MAX_EXPANDER_N {
        return Err(Error::CapExceeded { what: "exhaustive expander check", n, cap: MAX_EXPANDER_N });
    }
    if !(c > 0.0) {
        return Err(Error::param(format!("C = {c} must be positive")));
    }
    let adj = masks(g);
    let threshold = n as f64 / (2.0 * c);

    let mut witness_a = None;
    'a: for r in (1..=n).take_while(|&r| (r as f64) < threshold) {
        for x in subsets(n, r) {
            if (nbhd_mask(&adj, x).count_ones() as f64) < c * r as f64 {
                witness_a = Some(to_set(x));
                break 'a;
            }
        }
    }

    let h = (1..=n).find(|&r| r as f64 >= threshold).unwrap_or(n + 1);
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut witness_b = None;
    if 2 * h <= n {
        let sizes: Vec<usize> = if full { (h..=n - h).collect() } else { vec![h] };
        'b: for r in sizes {
            for x in subsets(n, r) {
                let rest = all & !x & !nbhd_mask(&adj, x);
                if rest.count_ones() as usize >= h {
                    // the h lowest vertices of the non-neighbourhood
                    let mut y = 0u32;
                    let mut left = rest;
                    for _ in 0..h {
                        y |= left & left.wrapping_neg();
                        left &= left - 1;
                    }
                    witness_b = Some((to_set(x), to_set(y)));
                    break 'b;
                }
            }
        }
    }
    Ok(ExpanderVerdict { c, threshold, cond_a: witness_a.is_none(), witness_a, cond_b: witness_b.is_none(), witness_b })
}

pub fn c_expander_check(g: &Graph, c: f64) -> Result<ExpanderVerdict> {
    c_expander_check_mode(g, c, false)
}

/// `f(r) = ((1−r)/(1+r))²`.
pub fn f_ratio(r: f64) -> f64 {
    ((1.0 - r) / (1.0 + r)).powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma74Verdict {
    pub ratio: f64,
    /// `f(λ_2/λ_n)`.
    pub f_r0: f64,
    /// `f((C−1)/C) = 1/(2C−1)²`.
    pub f_threshold: f64,
    /// `f(r_0) < f((C−1)/C) ≤ (C−1)/((C+1)(2C−1))` and the closed form of `f((C−1)/C)`.
    pub chain_ok: bool,
    pub verdict: ExpanderVerdict,
}

impl Lemma74Verdict {
    pub fn holds(&self) -> bool {
        self.chain_ok && self.verdict.pass()
    }
}

pub fn check_lemma74_with(g: &Graph, spec: &Spectrum, c: f64) -> Result<Lemma74Verdict> {
    if c < 2.0 {
        return Err(Error::param(format!("C = {c} is below 2")));
    }
    if g.n() < 3 {
        return Err(Error::param("expansion needs n ≥ 3"));
    }
    if g.m() == 0 {
        return Err(Error::hypothesis("graph has no edges"));
    }
    let ratio = if g.is_connected() { spec.lambda(2) / spec.max() } else { 0.0 };
    // ratios within round-off of the threshold cannot witness the strict inequality
    if ratio <= 1.0 - 1.0 / c + TOL.ratio {
        return Err(Error::hypothesis(format!("ratio {ratio} is not above 1 − 1/C")));
    }
    let f_r0 = f_ratio(ratio);
    let f_threshold = f_ratio((c - 1.0) / c);
    let closed = 1.0 / (2.0 * c - 1.0).powi(2);
    let chain_ok = f_r0 < f_threshold
        && (f_threshold - closed).abs() <= 1e-12 * closed
        && closed <= (c - 1.0) / ((c + 1.0) * (2.0 * c - 1.0)) + 1e-15;
    let verdict = c_expander_check(g, c)?;
    Ok(Lemma74Verdict { ratio, f_r0, f_threshold, chain_ok, verdict })
}

pub fn check_lemma74(g: &Graph, c: f64) -> Result<Lemma74Verdict> {
    check_lemma74_with(g, &laplacian_spectrum(g)?, c)
}

/// A Hamilton cycle as a vertex sequence (starting at 0), or `None` if there is none.
pub fn hamiltonian(g: &Graph) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    if n < 3 {
        return Err(Error::param("Hamilton cycles need n ≥ 3"));
    }
    if n > MAX_HAMILTON_N {
        return Err(Error::CapExceeded { what: "Hamilton cycle search", n, cap: MAX_HAMILTON_N });
    }
    if (0..n).any(|v| g.degree(v) < 2) || !g.is_connected() {
        return Ok(None);
    }
    let adj = masks(g);
    let mut path = vec![0usize];
    let found = extend(&adj, n, 1, &mut path);
    if !found {
        return Ok(None);
    }
    for i in 0..n {
        let (a, b) = (path[i], path[(i + 1) % n]);
        if !g.has_edge(a, b) {
            return Err(Error::Violated(format!("reported cycle uses non-edge {a}-{b}")));
        }
    }
    let mut seen = vec![false; n];
    for &v in &path {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Violated(format!("reported cycle repeats vertex {v}")));
        }
    }
    Ok(Some(path))
}

fn extend(adj: &[u32], n: usize, visited: u32, path: &mut Vec<usize>) -> bool {
    let cur = *path.last().unwrap();
    if path.len() == n {
        return adj[cur] & 1 == 1;
    }
    let free = ((1u32 << n) - 1) & !visited;
    // every unvisited vertex needs two usable neighbours among the free ones, `cur` and 0
    let ends = 1u32 << cur | 1;
    let mut rest = free;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (adj[v] & (free | ends)).count_ones() < 2 {
            return false;
        }
    }
    let mut next = adj[cur] & free;
    while next != 0 {
        let v = next.trailing_zeros() as usize;
        next &= next - 1;
        path.push(v);
        if extend(adj, n, visited | 1 << v, path) {
            return true;
        }
        path.pop();
    }
    false
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub code: String,
    pub ratio: f64,
    /// Expander status for each requested `C`, in order.
    pub expander: Vec<bool>,
    pub hamiltonian: Option<bool>,
}

fn sweep_rows(n: usize, cs: &[f64], with_hamilton: bool) -> Result<Vec<(SweepRow, Vec<Option<Lemma74Verdict>>)>> {
    let graphs: Vec<Graph> = enumerate_connected_graphs(n)?.collect();
    graphs
        .par_iter()
        .map(|g| {
            let spec = laplacian_spectrum(g)?;
            let ratio = if g.m() == 0 { 0.0 } else { spec.lambda(2) / spec.max() };
            let mut expander = Vec::new();
            let mut lemma = Vec::new();
            for &c in cs {
                expander.push(c_expander_check(g, c)?.pass());
                lemma.push(match check_lemma74_with(g, &spec, c) {
                    Ok(v) => Some(v),
                    Err(e) if e.is_hypothesis() => None,
                    Err(e) => return Err(e),
                });
            }
            let hamiltonian = if with_hamilton { Some(hamiltonian(g)?.is_some()) } else { None };
            Ok((SweepRow { n, code: graph_code(g).to_hex(), ratio, expander, hamiltonian }, lemma))
        })
        .collect()
}

/// All connected graphs on `3..=n_max` vertices: eigenratio criterion for expansion at each `C`,
/// with an observational table of Hamiltonicity against the eigenratio.
pub fn expander_sweep(n_max: usize, cs: &[f64], with_hamilton: bool) -> Result<(VerificationReport, Vec<SweepRow>)> {
    let start = Instant::now();
    let mut report = VerificationReport::new(format!("expander-n{n_max}"));
    let mut rows = Vec::new();
    for n in 3..=n_max {
        let mut table: BTreeMap<&str, usize> = BTreeMap::new();
        let mut non_ham = (f64::INFINITY, f64::NEG_INFINITY);
        for (row, lemma) in sweep_rows(n, cs, with_hamilton)? {
            for (&c, v) in cs.iter().zip(&lemma) {
                let id = format!("n{n}:{}:C{c}", row.code);
                let rec = match v {
                    None => InstanceRecord::not_applicable(id, format!("ratio {:.12} not above 1 − 1/C", row.ratio)),
                    Some(v) => {
                        let rec = InstanceRecord::lower(id, v.ratio, 1.0 - 1.0 / c, 0.0);
                        if v.holds() {
                            rec.with_detail("expander certified")
                        } else {
                            rec.fail_with(format!("{:?}", v.verdict))
                        }
                    }
                };
                *table
                    .entry(if rec.status == Status::HypothesisNotMet { "skipped" } else { "checked" })
                    .or_default() += 1;
                report.push(rec);
            }
            if row.hamiltonian == Some(false) {
                non_ham = (non_ham.0.min(row.ratio), non_ham.1.max(row.ratio));
                *table.entry("non-hamiltonian").or_default() += 1;
            }
            for (&c, &e) in cs.iter().zip(&row.expander) {
                if e && row.hamiltonian == Some(false) {
                    report.note(format!("n={n} {}: non-Hamiltonian {c}-expander", row.code));
                }
            }
            *table.entry("graphs").or_default() += 1;
            rows.push(row);
        }
        let counts: Vec<String> = table.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut line = format!("n={n}: {}", counts.join(" "));
        if with_hamilton && non_ham.0.is_finite() {
            line.push_str(&format!("; non-Hamiltonian ratio range [{:.12}, {:.12}]", non_ham.0, non_ham.1));
        }
        report.note(line);
    }
    report.set_wall_time(start.elapsed());
    Ok((report, rows))
}

/// Largest enumerated order for the Hamiltonicity sweep.
pub const MAX_GHMAIN_N: usize = crate::enumerate::MAX_GENERAL_N;

/// `C ∈ {2, 3, 4}` sweep with Hamiltonicity over all connected graphs up to `n_max` vertices.
pub fn ghmain_sweep(n_max: usize) -> Result<VerificationReport> {
    if n_max > MAX_GHMAIN_N {
        return Err(Error::CapExceeded { what: "connected graph enumeration", n: n_max, cap: MAX_GHMAIN_N });
    }
    let mut report = expander_sweep(n_max, &[2.0, 3.0, 4.0], true)?.0;
    report.suite = format!("ghmain-n{n_max}");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, complete_multipartite, cycle, path, petersen, star, Seed};
    use rand::seq::SliceRandom;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn haemers_examples() {
        let c6 = cycle(6).unwrap();
        let h = haemers_check(&c6, &vs(&[0]), &vs(&[3])).unwrap();
        assert!((h.lhs - 1.0 / 25.0).abs() < 1e-15);
        assert!((h.rhs - 9.0 / 25.0).abs() < 1e-9);
        assert!(h.pass);
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let h = haemers_check(&two, &vs(&[0, 1, 2]), &vs(&[3, 4, 5])).unwrap();
        assert!((h.rhs - 1.0).abs() < 1e-12 && h.pass);
        assert!(haemers_check(&c6, &vs(&[0]), &vs(&[1])).unwrap_err().is_hypothesis());
        assert!(haemers_check(&c6, &vs(&[0]), &vs(&[0])).is_err());
    }

    #[test]
    fn neighborhood_examples() {
        let c6 = cycle(6).unwrap();
        assert_eq!(neighborhood(&c6, &vs(&[0, 1])), vs(&[2, 5]));
        assert!(neighborhood(&c6, &vs(&[0, 1, 2, 3, 4, 5])).is_empty());
        let k5 = complete(5).unwrap();
        assert_eq!(neighborhood(&k5, &vs(&[1, 3])), vs(&[0, 2, 4]));
    }

    #[test]
    fn expander_examples() {
        for n in 3..10 {
            assert!(c_expander_check(&complete(n).unwrap(), 2.0).unwrap().pass());
        }
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let v = c_expander_check(&two, 2.0).unwrap();
        assert!(!v.cond_b);
        let (x, y) = v.witness_b.unwrap();
        assert_eq!(two.edges_between(&x.mask(6), &y.mask(6)), 0);
        let p8 = path(8).unwrap();
        let v = c_expander_check(&p8, 2.0).unwrap();
        assert!(!v.cond_a);
        let x = v.witness_a.unwrap();
        assert!((neighborhood(&p8, &x).len() as f64) < 2.0 * x.len() as f64);
        assert_eq!(x, vs(&[0]));
    }

    #[test]
    fn full_mode_agrees() {
        for g in [path(9).unwrap(), cycle(10).unwrap(), petersen(), star(7).unwrap()] {
            for c in [1.0, 2.0, 3.0] {
                let a = c_expander_check_mode(&g, c, false).unwrap();
                let b = c_expander_check_mode(&g, c, true).unwrap();
                assert_eq!(a.pass(), b.pass());
            }
        }
    }

    #[test]
    fn verdict_is_relabeling_invariant() {
        let mut rng = Seed(3).rng();
        for g in [petersen(), path(10).unwrap(), complete_multipartite(&[2, 2, 2]).unwrap()] {
            let base = c_expander_check(&g, 2.0).unwrap();
            for _ in 0..5 {
                let mut perm: Vec<usize> = (0..g.n()).collect();
                perm.shuffle(&mut rng);
                let v = c_expander_check(&g.relabel(&perm).unwrap(), 2.0).unwrap();
                assert_eq!((v.cond_a, v.cond_b), (base.cond_a, base.cond_b));
            }
        }
    }

    #[test]
    fn lemma74_examples() {
        assert!(check_lemma74(&complete(6).unwrap(), 2.0).unwrap().holds());
        let k222 = complete_multipartite(&[2, 2, 2]).unwrap();
        let v = check_lemma74(&k222, 2.0).unwrap();
        assert!((v.ratio - 4.0 / 6.0).abs() < 1e-9);
        assert!(v.holds());
        assert!(check_lemma74(&path(5).unwrap(), 2.0).unwrap_err().is_hypothesis());
        for c in [2.0, 3.0, 7.5] {
            assert!((f_ratio((c - 1.0) / c) - 1.0 / (2.0 * c - 1.0).powi(2)).abs() < 1e-15);
        }
    }

    #[test]
    fn hamilton_examples() {
        let c7 = cycle(7).unwrap();
        let h = hamiltonian(&c7).unwrap().unwrap();
        assert_eq!(h.len(), 7);
        assert!(hamiltonian(&star(4).unwrap()).unwrap().is_none());
        assert!(hamiltonian(&petersen()).unwrap().is_none());
        assert!(hamiltonian(&complete(8).unwrap()).unwrap().is_some());
        assert!(hamiltonian(&complete(19).unwrap()).is_err());
    }

    #[test]
    fn small_sweep_table() {
        let r = ghmain_sweep(5).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.summary().instances, 3 * (2 + 6 + 21));
        assert!(r.notes.iter().any(|n| n.starts_with("n=5")));
    }
}
