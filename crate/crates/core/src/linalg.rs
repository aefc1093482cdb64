//! Dense symmetric matrices and a cyclic Jacobi eigensolver.
//!
//! Every analytic spectrum in the crate is checked against [`eigenvalues`]. The solver is
//! the classical cyclic-by-row Jacobi method: sweep over all off-diagonal pairs, annihilate
//! each with a plane rotation, and stop once the off-diagonal Frobenius norm is a tiny
//! fraction of the full norm. It is slow (O(n³) per sweep) but very accurate, and every
//! matrix in this crate is small enough for it.

use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Real symmetric matrix in packed lower-triangular storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * (n + 1) / 2] }
    }

    /// Builds from a full row-major matrix, which must be symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = SymMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for j in 0..=i {
                if (rows[i][j] - rows[j][i]).abs() > 0.0 {
                    return Err(Error::param(format!("matrix not symmetric at ({i}, {j})")));
                }
                m.set(i, j, rows[i][j]);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[packed(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[packed(i, j)] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        self.data[packed(i, j)] += value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.get(i, j);
                s += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        s.sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            for j in 0..=i {
                let a = self.get(i, j);
                out[i] += a * v[j];
                if i != j {
                    out[j] += a * v[i];
                }
            }
        }
        Ok(out)
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        Ok(dot(&self.mul_vec(v)?, v))
    }

    /// The principal submatrix on `indices` (in the given order).
    pub fn principal_submatrix(&self, indices: &[usize]) -> SymMatrix {
        let mut sub = SymMatrix::zeros(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().take(a + 1) {
                sub.set(a, b, self.get(i, j));
            }
        }
        sub
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// Ascending eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
    /// Off-diagonal Frobenius norm left when the solver stopped; every reported eigenvalue is
    /// within this distance of a true one.
    pub residual_bound: f64,
}

impl Spectrum {
    /// Wraps values known analytically; they are sorted here.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Spectrum { values, residual_bound: 0.0 }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `λ_i` with the 1-based index used for Laplacian spectra (ascending).
    pub fn lambda(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `μ_i` with the 1-based index used for adjacency spectra (descending).
    pub fn mu(&self, i: usize) -> f64 {
        self.values[self.values.len() - i]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Each eigenvalue paired with its nearest integer when it lies within `integer_snap`.
    pub fn snapped(&self) -> Vec<(f64, Option<i64>)> {
        self.values
            .iter()
            .map(|&x| {
                let r = x.round();
                (x, ((x - r).abs() <= TOL.integer_snap).then_some(r as i64))
            })
            .collect()
    }

    /// Multiplicity of the integer eigenvalue `k` (after snapping).
    pub fn integer_multiplicity(&self, k: i64) -> usize {
        self.snapped().iter().filter(|(_, s)| *s == Some(k)).count()
    }

    /// Number of eigenvalues within `tol` of `x`.
    pub fn multiplicity_near(&self, x: f64, tol: f64) -> usize {
        self.values.iter().filter(|&&v| (v - x).abs() <= tol).count()
    }

    /// Largest deviation between the sorted lists, or `None` if their lengths differ.
    pub fn multiset_distance(&self, other: &Spectrum) -> Option<f64> {
        (self.len() == other.len())
            .then(|| self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// Eigen-decomposition: ascending eigenvalues and, column by column, matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub spectrum: Spectrum,
    /// `vectors[k]` is the eigenvector for `spectrum.values()[k]`.
    pub vectors: Vec<Vec<f64>>,
}

pub fn laplacian(g: &Graph) -> SymMatrix {
    let mut l = SymMatrix::zeros(g.n());
    for v in 0..g.n() {
        l.set(v, v, g.degree(v) as f64);
    }
    for e in g.edges() {
        l.set(e.u, e.v, -1.0);
    }
    l
}

pub fn adjacency(g: &Graph) -> SymMatrix {
    let mut a = SymMatrix::zeros(g.n());
    for e in g.edges() {
        a.set(e.u, e.v, 1.0);
    }
    a
}

pub fn eigenvalues(m: &SymMatrix) -> Result<Spectrum> {
    jacobi(m, false).map(|e| e.spectrum)
}

pub fn eigen_decomposition(m: &SymMatrix) -> Result<Eigen> {
    jacobi(m, true)
}

fn jacobi(m: &SymMatrix, want_vectors: bool) -> Result<Eigen> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::param("eigenvalues of an empty matrix"));
    }
    for i in 0..n {
        for j in 0..=i {
            if !m.get(i, j).is_finite() {
                return Err(Error::NonFinite(i, j));
            }
        }
    }
    // Full row-major working copy; rotations touch two rows and two columns.
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = m.get(i, j);
        }
    }
    let mut v = if want_vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    } else {
        Vec::new()
    };

    let target = TOL.eig_rel_offdiag * m.frobenius_norm();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..i {
                s += a[i * n + j] * a[i * n + j];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut off = off_norm(&a);
    let mut sweeps = 0;
    while off > target {
        if sweeps == TOL.max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Skip entries that are already negligible next to both diagonal entries.
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                if want_vectors {
                    for r in 0..n {
                        let vrp = v[r * n + p];
                        let vrq = v[r * n + q];
                        v[r * n + p] = vrp - s * (vrq + tau * vrp);
                        v[r * n + q] = vrq + s * (vrp - tau * vrq);
                    }
                }
            }
        }
        off = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors =
        if want_vectors { order.iter().map(|&k| (0..n).map(|r| v[r * n + k]).collect()).collect() } else { Vec::new() };
    Ok(Eigen { spectrum: Spectrum { values, residual_bound: off }, vectors })
}

/// `vᵀMv / vᵀv`.
pub fn rayleigh(m: &SymMatrix, v: &[f64]) -> Result<f64> {
    let nn = norm_sq(v);
    if v.len() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), got: v.len() });
    }
    if nn == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(m.quadratic_form(v)? / nn)
}

/// `Σ_{uv ∈ E} (v_u − v_v)²`, which equals `vᵀ L v`.
pub fn laplacian_energy(g: &Graph, v: &[f64]) -> Result<f64> {
    if v.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: v.len() });
    }
    Ok(g.edges().map(|e| (v[e.u] - v[e.v]).powi(2)).sum())
}

/// Adjacency quadratic form `vᵀ A v = 2 Σ_{uv ∈ E} v_u v_v`.
pub fn adjacency_form(g: &Graph, v: &[f64]) -> f64 {
    2.0 * g.edges().map(|e| v[e.u] * v[e.v]).sum::<f64>()
}

pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum> {
    eigenvalues(&laplacian(g))
}

pub fn adjacency_spectrum(g: &Graph) -> Result<Spectrum> {
    eigenvalues(&adjacency(g))
}

/// `λ_2 / λ_n` from a Laplacian spectrum; 0 when the graph is disconnected.
pub fn eigenratio_of(g: &Graph, spec: &Spectrum) -> Result<f64> {
    if g.n() < 2 {
        return Err(Error::param("eigenratio needs at least two vertices"));
    }
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    if !g.is_connected() {
        return Ok(0.0);
    }
    Ok(spec.lambda(2) / spec.lambda(g.n()))
}

pub fn eigenratio(g: &Graph) -> Result<f64> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    eigenratio_of(g, &laplacian_spectrum(g)?)
}

/// Outcome of the solver sanity checks on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HealthReport {
    pub trace_error: f64,
    pub min_eigenvalue: f64,
    /// `max_i |λ_i(L) − (d − μ_{n+1−i}(A))|`, only for regular graphs.
    pub duality_error: Option<f64>,
}

impl HealthReport {
    pub fn ok(&self) -> bool {
        let scale = 1.0f64.max(self.trace_error.abs());
        self.trace_error <= 1e-8 * scale
            && self.min_eigenvalue >= -TOL.eig_abs
            && self.duality_error.is_none_or(|e| e <= TOL.eig_abs)
    }
}

/// Trace identity, positive semidefiniteness and (for regular graphs) the `λ = d − μ` duality.
pub fn health_check(g: &Graph, lap: &Spectrum, adj: Option<&Spectrum>) -> Result<HealthReport> {
    let two_m = 2.0 * g.m() as f64;
    let trace_error = (lap.sum() - two_m).abs() / two_m.max(1.0);
    let duality_error = match (g.regular_degree(), adj) {
        (Some(d), Some(a)) => {
            let n = g.n();
            Some((1..=n).map(|i| (lap.lambda(i) - (d as f64 - a.mu(i))).abs()).fold(0.0, f64::max))
        }
        (Some(_), None) => {
            let a = adjacency_spectrum(g)?;
            return health_check(g, lap, Some(&a));
        }
        _ => None,
    };
    Ok(HealthReport { trace_error, min_eigenvalue: lap.min(), duality_error })
}
