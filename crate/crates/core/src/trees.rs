//! Trees: centroid data, the three-block test space with its quadratic `p_s`, the star
//! submatrix lower bound on `λ_n`, and the exhaustive `λ_2/λ_n ≤ 1/n` sweep.

use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{branch_sizes, check_tree, tree_code};
use crate::config::TOL;
use crate::enumerate::enumerate_trees;
use crate::error::{Error, Result};
use crate::generators::star;
use crate::graph::Graph;
use crate::linalg::{
    dot, eigen_decomposition, eigenratio_of, eigenvalues, laplacian, laplacian_energy, laplacian_spectrum, norm_sq,
    Spectrum, SymMatrix,
};
use crate::report::{InstanceRecord, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentroidData {
    pub n: usize,
    pub v: usize,
    pub d: usize,
    /// Component sizes of `T − v`, descending.
    pub sizes: Vec<usize>,
    pub s: usize,
    pub t: usize,
}

/// Centroid with the smallest index.
pub fn centroid(tree: &Graph) -> Result<CentroidData> {
    check_tree(tree)?;
    let n = tree.n();
    let sizes = branch_sizes(tree);
    let v = (0..n).find(|&v| sizes[v].iter().all(|&s| 2 * s <= n)).expect("every tree has a centroid");
    centroid_from(tree, v, sizes[v].clone())
}

/// Centroid data for a chosen vertex, which must be a centroid.
pub fn centroid_at(tree: &Graph, v: usize) -> Result<CentroidData> {
    check_tree(tree)?;
    tree.check_vertex(v)?;
    let sizes = branch_sizes(tree).swap_remove(v);
    if sizes.iter().any(|&s| 2 * s > tree.n()) {
        return Err(Error::param(format!("vertex {v} is not a centroid")));
    }
    centroid_from(tree, v, sizes)
}

fn centroid_from(tree: &Graph, v: usize, mut sizes: Vec<usize>) -> Result<CentroidData> {
    let n = tree.n();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let s = sizes.first().copied().unwrap_or(0);
    Ok(CentroidData { n, v, d: tree.degree(v), sizes, s, t: n.saturating_sub(s + 1) })
}

/// `(st, −[dst + (d−1)s + t], (d−1)n)` with `t = n − s − 1`.
pub fn p_s_coefficients(n: i64, d: i64, s: i64) -> [i64; 3] {
    let t = n - s - 1;
    [s * t, -(d * s * t + (d - 1) * s + t), (d - 1) * n]
}

/// Smaller positive root of `ax² + bx + c` with `a > 0`, `c > 0`, via the cancellation-free form.
pub fn smaller_positive_root(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && c > 0.0) {
        return Err(Error::param("need a > 0 and c > 0"));
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 || b >= 0.0 {
        return Err(Error::param("quadratic has no positive real roots"));
    }
    let q = -0.5 * (b - disc.sqrt());
    Ok((c / q).min(q / a))
}

fn check_window(n: usize, d: usize, s: usize) -> Result<()> {
    if n < 4 || d < 2 || d + 2 > n || d * s < n - 1 || 2 * s > n || s + 2 > n {
        return Err(Error::param(format!("(n, d, s) = ({n}, {d}, {s}) outside 2 ≤ d ≤ n−2, (n−1)/d ≤ s ≤ n/2")));
    }
    Ok(())
}

/// `ρ(s)`: the smaller positive root of `p_s`.
pub fn rho_s(n: usize, d: usize, s: usize) -> Result<f64> {
    check_window(n, d, s)?;
    let [a, b, c] = p_s_coefficients(n as i64, d as i64, s as i64);
    debug_assert!(c > 0);
    smaller_positive_root(a as f64, b as f64, c as f64)
}

/// `g(s) = n² p_s((d+1)/n)` evaluated exactly.
pub fn g_exact(n: i64, d: i64, s: Ratio<i64>) -> Ratio<i64> {
    let nn = Ratio::from_integer(n);
    let dd = Ratio::from_integer(d);
    let one = Ratio::from_integer(1);
    let t = nn - s - one;
    let x = (dd + one) / nn;
    let p = s * t * x * x - (dd * s * t + (dd - one) * s + t) * x + (dd - one) * nn;
    nn * nn * p
}

/// The expanded quadratic form of `g(s)`.
pub fn g_expanded(n: i64, d: i64, s: Ratio<i64>) -> Ratio<i64> {
    let r = Ratio::from_integer;
    r((d + 1) * (d * n - d - 1)) * s * s - r((d + 1) * (d * n * n - d * n + d - 3 * n + 1)) * s
        + r(n * (d * n * n - d * n + d - n * n - n + 1))
}

/// `E(d)` from the right endpoint.
pub fn e_poly(n: i64, d: i64) -> i64 {
    let e = d - 2;
    (n * n - n + 2) * e * e + (n * n - 6 * n + 8) * e + (2 * n * n - 9 * n + 6)
}

/// `(g((n−1)/d), g(n/2))` from their closed forms, both checked negative and against direct evaluation.
pub fn g_endpoints(n: usize, d: usize) -> Result<(f64, f64)> {
    if n < 4 || d < 2 || d + 2 > n {
        return Err(Error::param(format!("need n ≥ 4 and 2 ≤ d ≤ n−2, got n = {n}, d = {d}")));
    }
    let (ni, di) = (n as i64, d as i64);
    let left = Ratio::new((di - 1) * (di - ni + 1) * (di * ni * ni - di * ni + di - ni + 1), di * di);
    let right = Ratio::new(-ni * e_poly(ni, di), 4);
    for (s, closed) in [(Ratio::new(ni - 1, di), left), (Ratio::new(ni, 2), right)] {
        if g_exact(ni, di, s) != closed || g_expanded(ni, di, s) != closed {
            return Err(Error::Violated(format!("g endpoint closed form mismatch at n = {n}, d = {d}, s = {s}")));
        }
    }
    let zero = Ratio::from_integer(0);
    if left >= zero || right >= zero {
        return Err(Error::Violated(format!("g endpoint not negative at n = {n}, d = {d}")));
    }
    let f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
    Ok((f(left), f(right)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeBlock {
    pub centroid: CentroidData,
    pub coefficients: [i64; 3],
    pub rho: f64,
    /// Middle eigenvalue of `D^{-1/2} M D^{-1/2}` from the dense solver.
    pub mu2_numeric: f64,
    /// `‖A u‖` for `u = D^{1/2}·1`.
    pub kernel_residual: f64,
    /// Rayleigh quotient on `T` of the block vector built from the `μ_2` eigenvector.
    pub block_rayleigh: f64,
    pub lambda2: f64,
    pub upper: f64,
}

/// The `3 × 3` pair `(M, D)` for centroid data.
pub fn pencil(c: &CentroidData) -> (SymMatrix, [f64; 3]) {
    let d = c.d as f64;
    let m = SymMatrix::from_rows(&[vec![d, -1.0, -(d - 1.0)], vec![-1.0, 1.0, 0.0], vec![-(d - 1.0), 0.0, d - 1.0]])
        .expect("symmetric by construction");
    (m, [1.0, c.s as f64, c.t as f64])
}

pub fn three_block_bound_with(tree: &Graph, spec: &Spectrum) -> Result<ThreeBlock> {
    let c = centroid(tree)?;
    let n = c.n;
    if c.d + 1 >= n {
        return Err(Error::hypothesis("star: the centroid is adjacent to every vertex"));
    }
    check_window(n, c.d, c.s)?;
    let rho = rho_s(n, c.d, c.s)?;
    let (m, diag) = pencil(&c);
    let scale: Vec<f64> = diag.iter().map(|x| x.sqrt()).collect();
    let mut a = SymMatrix::zeros(3);
    for i in 0..3 {
        for j in 0..=i {
            a.set(i, j, m.get(i, j) / (scale[i] * scale[j]));
        }
    }
    let kernel_residual = norm_sq(&a.mul_vec(&scale)?).sqrt();
    let eig = eigen_decomposition(&a)?;
    let mu2_numeric = eig.spectrum.lambda(2);
    if (mu2_numeric - rho).abs() > TOL.ratio * rho.max(1.0) {
        return Err(Error::Violated(format!("pencil middle eigenvalue {mu2_numeric} differs from ρ(s) = {rho}")));
    }
    if kernel_residual > 1e-12 * a.frobenius_norm() {
        return Err(Error::Violated(format!("A·u = {kernel_residual}, expected 0")));
    }
    // Pull the μ_2 eigenvector back to a vector on T: coordinates (c, a, b) on v, C_1, the rest.
    let z = &eig.vectors[1];
    let y: Vec<f64> = (0..3).map(|i| z[i] / scale[i]).collect();
    let big = largest_branch(tree, &c);
    let x: Vec<f64> = (0..n)
        .map(|u| {
            if u == c.v {
                y[0]
            } else if big[u] {
                y[1]
            } else {
                y[2]
            }
        })
        .collect();
    let sum: f64 = x.iter().sum();
    if sum.abs() > 1e-10 * norm_sq(&x).sqrt() * n as f64 {
        return Err(Error::Violated("block vector is not orthogonal to 1".into()));
    }
    let block_rayleigh = laplacian_energy(tree, &x)? / norm_sq(&x);
    if (block_rayleigh - rho).abs() > TOL.ratio * rho.max(1.0) {
        return Err(Error::Violated(format!("block vector quotient {block_rayleigh} differs from ρ(s) = {rho}")));
    }
    let lambda2 = spec.lambda(2);
    let upper = (c.d + 1) as f64 / n as f64;
    if lambda2 > rho + TOL.ratio {
        return Err(Error::Violated(format!("λ_2 = {lambda2} > ρ(s) = {rho}")));
    }
    if rho >= upper {
        return Err(Error::Violated(format!("ρ(s) = {rho} ≥ (d+1)/n = {upper}")));
    }
    let coefficients = p_s_coefficients(n as i64, c.d as i64, c.s as i64);
    Ok(ThreeBlock { centroid: c, coefficients, rho, mu2_numeric, kernel_residual, block_rayleigh, lambda2, upper })
}

pub fn three_block_bound(tree: &Graph) -> Result<ThreeBlock> {
    three_block_bound_with(tree, &laplacian_spectrum(tree)?)
}

/// Membership mask of the largest component of `T − v` (smallest-index neighbour on ties).
fn largest_branch(tree: &Graph, c: &CentroidData) -> Vec<bool> {
    let n = tree.n();
    let mut best: Option<Vec<bool>> = None;
    let mut best_size = 0;
    for &w in tree.neighbors(c.v) {
        let mut mask = vec![false; n];
        let mut stack = vec![w];
        mask[w] = true;
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &x in tree.neighbors(u) {
                if x != c.v && !mask[x] {
                    mask[x] = true;
                    stack.push(x);
                }
            }
        }
        if size > best_size {
            best_size = size;
            best = Some(mask);
        }
    }
    best.unwrap_or_else(|| vec![false; n])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarSubmatrix {
    pub v: usize,
    pub d: usize,
    /// Diagonal excess over the star Laplacian at each neighbour.
    pub excess: Vec<usize>,
    pub lambda_max_h: f64,
    pub lambda_n: f64,
}

/// `λ_n(T) ≥ λ_max(H) ≥ d+1` for `H` the principal submatrix on the centroid and its neighbours.
pub fn star_submatrix_bound_with(tree: &Graph, spec: &Spectrum) -> Result<StarSubmatrix> {
    let c = centroid(tree)?;
    let mut idx = vec![c.v];
    idx.extend_from_slice(tree.neighbors(c.v));
    let h = laplacian(tree).principal_submatrix(&idx);
    let k = idx.len();
    let mut excess = Vec::with_capacity(k - 1);
    for i in 0..k {
        for j in 0..i {
            let want = if j == 0 { -1.0 } else { 0.0 };
            if h.get(i, j) != want {
                return Err(Error::Violated(format!("H[{i}][{j}] = {}, expected {want}", h.get(i, j))));
            }
        }
        if i > 0 {
            let e = h.get(i, i) - 1.0;
            if e < 0.0 || e.fract() != 0.0 {
                return Err(Error::Violated(format!("diagonal excess {e} is not a non-negative integer")));
            }
            excess.push(e as usize);
        }
    }
    if h.get(0, 0) != c.d as f64 {
        return Err(Error::Violated("H[0][0] differs from deg(v)".into()));
    }
    let lambda_max_h = eigenvalues(&h)?.max();
    let lambda_n = spec.max();
    if lambda_max_h < (c.d + 1) as f64 - TOL.inequality || lambda_n < lambda_max_h - TOL.inequality {
        return Err(Error::Violated(format!(
            "interlacing chain fails: λ_n = {lambda_n}, λ_max(H) = {lambda_max_h}, d+1 = {}",
            c.d + 1
        )));
    }
    Ok(StarSubmatrix { v: c.v, d: c.d, excess, lambda_max_h, lambda_n })
}

pub fn star_submatrix_bound(tree: &Graph) -> Result<StarSubmatrix> {
    star_submatrix_bound_with(tree, &laplacian_spectrum(tree)?)
}

pub const MAX_THEOREM6_N: usize = 12;

/// Every free tree on `n` vertices against `λ_2/λ_n ≤ 1/n`, equality only at the star.
pub fn verify_theorem6(n: usize) -> Result<VerificationReport> {
    if !(3..=MAX_THEOREM6_N).contains(&n) {
        return Err(Error::CapExceeded { what: "tree sweep", n, cap: MAX_THEOREM6_N });
    }
    let start = Instant::now();
    let star_code = tree_code(&star(n)?)?;
    let bound = 1.0 / n as f64;
    let trees: Vec<Graph> = enumerate_trees(n)?.collect();
    let records: Vec<InstanceRecord> = trees
        .par_iter()
        .map(|t| -> Result<InstanceRecord> {
            let code = tree_code(t)?;
            let spec = laplacian_spectrum(t)?;
            let ratio = eigenratio_of(t, &spec)?;
            let rec = InstanceRecord::upper(format!("n{n}:{code}"), ratio, bound, TOL.ratio);
            if code == star_code {
                return Ok(if (ratio - bound).abs() > TOL.ratio {
                    rec.fail_with("star ratio differs from 1/n")
                } else {
                    rec.with_detail("star")
                });
            }
            if bound - ratio <= TOL.ratio {
                return Ok(rec.fail_with("non-star tree attains 1/n"));
            }
            let chain =
                three_block_bound_with(t, &spec).and_then(|tb| star_submatrix_bound_with(t, &spec).map(|sb| (tb, sb)));
            Ok(match chain {
                Ok((tb, sb)) => rec.with_detail(format!(
                    "d={} s={} rho={:.12} lambda2={:.12} lambda_n={:.12}",
                    tb.centroid.d, tb.centroid.s, tb.rho, tb.lambda2, sb.lambda_n
                )),
                Err(e) => rec.fail_with(e.to_string()),
            })
        })
        .collect::<Result<_>>()?;
    let mut report = VerificationReport::new(format!("trees-n{n}"));
    for r in records {
        report.push(r);
    }
    report.note(format!("{} trees on {n} vertices", trees.len()));
    report.set_wall_time(start.elapsed());
    Ok(report)
}

/// `det(M − xD)` as cubic coefficients `[c0, c1, c2, c3]`, expanded symbolically over the integers.
pub fn pencil_determinant(d: i64, s: i64, t: i64) -> [i64; 4] {
    // Entries as linear polynomials a + b·x.
    type P = [i64; 4];
    let lin = |a: i64, b: i64| -> P { [a, b, 0, 0] };
    let mul = |p: P, q: P| -> P {
        let mut r = [0; 4];
        for i in 0..4 {
            for j in 0..4 - i {
                r[i + j] += p[i] * q[j];
            }
        }
        r
    };
    let add = |p: P, q: P| -> P { [p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]] };
    let neg = |p: P| -> P { p.map(|c| -c) };
    let m = [
        [lin(d, -1), lin(-1, 0), lin(-(d - 1), 0)],
        [lin(-1, 0), lin(1, -s), lin(0, 0)],
        [lin(-(d - 1), 0), lin(0, 0), lin(d - 1, -t)],
    ];
    let minor =
        |r1: usize, r2: usize, c1: usize, c2: usize| add(mul(m[r1][c1], m[r2][c2]), neg(mul(m[r1][c2], m[r2][c1])));
    let t0 = mul(m[0][0], minor(1, 2, 1, 2));
    let t1 = neg(mul(m[0][1], minor(1, 2, 0, 2)));
    let t2 = mul(m[0][2], minor(1, 2, 0, 1));
    add(add(t0, t1), t2)
}

/// Inner product of the block vector with `1`, for tests on arbitrary coordinates.
pub fn block_sum(c: &CentroidData, y: [f64; 3]) -> f64 {
    dot(&[1.0, c.s as f64, c.t as f64], &y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{path, random_tree, Seed};

    fn broom() -> Graph {
        // Path 0-1-2-3 with three extra leaves on vertex 3.
        Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (3, 5), (3, 6)]).unwrap()
    }

    fn spider() -> Graph {
        Graph::from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap()
    }

    #[test]
    fn centroid_examples() {
        let c = centroid(&path(5).unwrap()).unwrap();
        assert_eq!((c.v, c.sizes.clone()), (2, vec![2, 2]));
        let c = centroid(&star(6).unwrap()).unwrap();
        assert_eq!((c.v, c.sizes), (0, vec![1; 5]));
        // Oracle: the only vertex whose branches are all ≤ n/2.
        let b = broom();
        let by_hand: Vec<usize> = (0..7)
            .filter(|&v| {
                let g2 = Graph::from_edges(7, b.edge_list().into_iter().filter(|&(x, y)| x != v && y != v)).unwrap();
                crate::graph::components(&g2).iter().filter(|c| !c.contains(v)).all(|c| 2 * c.len() <= 7)
            })
            .collect();
        assert_eq!(by_hand, vec![3]);
        assert_eq!(centroid(&b).unwrap().v, 3);
        assert!(centroid(&crate::generators::cycle(4).unwrap()).is_err());
    }

    #[test]
    fn bicentroid_tie() {
        let p = path(6).unwrap();
        assert_eq!(centroid(&p).unwrap().v, 2);
        let other = centroid_at(&p, 3).unwrap();
        assert_eq!(other.s, 3);
        assert!(centroid_at(&p, 1).is_err());
        let spec = laplacian_spectrum(&p).unwrap();
        assert!(three_block_bound_with(&p, &spec).is_ok());
    }

    #[test]
    fn quadratic_root_oracle() {
        let [a, b, c] = p_s_coefficients(6, 2, 2);
        assert_eq!([a, b, c], [6, -17, 6]);
        let r = smaller_positive_root(a as f64, b as f64, c as f64).unwrap();
        assert!((r - (17.0 - 145f64.sqrt()) / 12.0).abs() < 1e-15);
        assert!(rho_s(6, 2, 2).is_err());
        for n in 4..=30usize {
            for d in 2..=n - 2 {
                for s in (n - 1).div_ceil(d)..=n / 2 {
                    let [_, _, c] = p_s_coefficients(n as i64, d as i64, s as i64);
                    assert!(c > 0);
                    let r = rho_s(n, d, s).unwrap();
                    assert!(r > 0.0 && r < (d + 1) as f64 / n as f64);
                }
            }
        }
    }

    #[test]
    fn determinant_expansion_is_exact() {
        for n in 4..=50i64 {
            for d in 2..=n - 2 {
                for s in (n - 1 + d - 1) / d..=n / 2 {
                    let t = n - s - 1;
                    let got = pencil_determinant(d, s, t);
                    let want = [0, -(d - 1) * n, d * s * t + (d - 1) * s + t, -s * t];
                    assert_eq!(got, want, "n={n} d={d} s={s}");
                }
            }
        }
    }

    #[test]
    fn g_endpoint_examples() {
        let (l, r) = g_endpoints(6, 3).unwrap();
        assert!(l < 0.0 && r < 0.0);
        for n in 4..=40 {
            for d in 2..=n - 2 {
                g_endpoints(n, d).unwrap();
            }
        }
        assert!(g_endpoints(6, 5).is_err());
    }

    #[test]
    fn three_block_examples() {
        let p4 = path(4).unwrap();
        let tb = three_block_bound(&p4).unwrap();
        assert!((tb.lambda2 - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!(tb.lambda2 <= tb.rho + 1e-12);
        let tb = three_block_bound(&spider()).unwrap();
        assert!(tb.kernel_residual < 1e-12);
        assert!(three_block_bound(&star(6).unwrap()).unwrap_err().is_hypothesis());
    }

    #[test]
    fn star_submatrix_examples() {
        let sb = star_submatrix_bound(&star(7).unwrap()).unwrap();
        assert!((sb.lambda_max_h - 7.0).abs() < 1e-9);
        let sb = star_submatrix_bound(&path(5).unwrap()).unwrap();
        assert_eq!(sb.excess, vec![1, 1]);
        assert!(sb.lambda_max_h >= 3.0);
        for seed in 0..40 {
            let t = random_tree(12, Seed(seed)).unwrap();
            let sb = star_submatrix_bound(&t).unwrap();
            assert!(sb.lambda_n >= sb.lambda_max_h - 1e-9);
        }
    }

    #[test]
    fn small_sweeps() {
        let r = verify_theorem6(3).unwrap();
        assert_eq!(r.summary().pass, 1);
        let r = verify_theorem6(7).unwrap();
        assert_eq!(r.summary().instances, 11);
        assert!(r.all_pass());
        assert_eq!(r.records.iter().filter(|x| x.detail == "star").count(), 1);
    }

    #[test]
    fn block_sum_of_kernel_vector() {
        let c = centroid(&spider()).unwrap();
        assert_eq!(block_sum(&c, [1.0, 1.0, 1.0]), 7.0);
    }
}
