//! Spectrum of the corona `H ∘ K̄_{m−1}` and the counterexample pipeline built on it.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::generators::{corona, ramanujan_check};
use crate::graph::Graph;
use crate::linalg::{eigenratio_of, eigenvalues, laplacian_spectrum, Spectrum, SymMatrix};

/// Roots of `x² − (m+λ)x + λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaPair {
    pub m: usize,
    pub lambda: f64,
    pub theta_minus: f64,
    pub theta_plus: f64,
}

pub fn theta_pair(m: usize, lambda: f64) -> Result<ThetaPair> {
    if m < 2 {
        return Err(Error::param(format!("pendant block needs m ≥ 2, got {m}")));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::param(format!("λ must be a finite non-negative number, got {lambda}")));
    }
    let b = m as f64 + lambda;
    let root = (b * b - 4.0 * lambda).sqrt();
    let theta_plus = (b + root) / 2.0;
    // Rationalized so that small λ does not cancel.
    let theta_minus = 2.0 * lambda / (b + root);
    Ok(ThetaPair { m, lambda, theta_minus, theta_plus })
}

/// The `m × m` block `A_m(λ)`: `λ+m−1` in the corner, `−1` along the first row and column, identity elsewhere.
pub fn pendant_block_matrix(m: usize, lambda: f64) -> Result<SymMatrix> {
    theta_pair(m, lambda)?;
    let mut a = SymMatrix::zeros(m);
    a.set(0, 0, lambda + (m - 1) as f64);
    for i in 1..m {
        a.set(i, i, 1.0);
        a.set(i, 0, -1.0);
    }
    Ok(a)
}

/// `{1^(m−2), θ−, θ+}`.
pub fn pendant_block_spectrum(m: usize, lambda: f64) -> Result<Spectrum> {
    let t = theta_pair(m, lambda)?;
    let mut v = vec![1.0; m - 2];
    v.push(t.theta_minus);
    v.push(t.theta_plus);
    Ok(Spectrum::from_values(v))
}

/// Analytic corona spectrum, kept as the image pair of every base eigenvalue plus the eigenvalue-1 block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoronaSpectrum {
    pub m: usize,
    pub pairs: Vec<ThetaPair>,
    pub ones: usize,
}

impl CoronaSpectrum {
    pub fn to_spectrum(&self) -> Spectrum {
        let mut v = vec![1.0; self.ones];
        for p in &self.pairs {
            v.push(p.theta_minus);
            v.push(p.theta_plus);
        }
        Spectrum::from_values(v)
    }

    /// `θ−(λ_2(H))`, the second-smallest corona eigenvalue when `H` is connected.
    pub fn lambda2(&self) -> f64 {
        self.pairs[1].theta_minus
    }

    /// `θ+(λ_N(H))`, the largest corona eigenvalue.
    pub fn lambda_max(&self) -> f64 {
        self.pairs[self.pairs.len() - 1].theta_plus
    }
}

pub fn corona_spectrum_pairs(spec_h: &Spectrum, m: usize) -> Result<CoronaSpectrum> {
    if spec_h.is_empty() || spec_h.min().abs() > TOL.eig_abs {
        return Err(Error::param("base spectrum must be a Laplacian spectrum starting at 0"));
    }
    let pairs = spec_h.values().iter().map(|&l| theta_pair(m, l.max(0.0))).collect::<Result<Vec<_>>>()?;
    Ok(CoronaSpectrum { m, ones: spec_h.len() * (m - 2), pairs })
}

pub fn corona_spectrum_analytic(spec_h: &Spectrum, m: usize) -> Result<Spectrum> {
    Ok(corona_spectrum_pairs(spec_h, m)?.to_spectrum())
}

/// `q − 2√(q−1)`.
pub fn alpha_q(q: usize) -> Result<f64> {
    if q < 3 {
        return Err(Error::param(format!("α_q needs q ≥ 3, got {q}")));
    }
    Ok(q as f64 - 2.0 * ((q - 1) as f64).sqrt())
}

/// `2 + (q−2)/m` as an exact fraction.
pub fn d_qm(q: usize, m: usize) -> Ratio<u64> {
    Ratio::from_integer(2) + Ratio::new((q - 2) as u64, m as u64)
}

/// `(d − 2√(d−1))/(d + 2√(d−1))`, evaluated as `((d−2)/(√(d−1)+1)²)²` to avoid cancellation near `d = 2`.
pub fn alon_boppana_ratio(d: Ratio<u64>) -> f64 {
    let excess = d - Ratio::from_integer(2);
    let e = *excess.numer() as f64 / *excess.denom() as f64;
    let r = (1.0 + e).sqrt() + 1.0;
    (e / (r * r)).powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub q: usize,
    pub m: usize,
    pub d_numer: u64,
    pub d_denom: u64,
    pub r: f64,
    pub b: f64,
}

impl RatioBounds {
    pub fn d(&self) -> f64 {
        self.d_numer as f64 / self.d_denom as f64
    }

    pub fn epsilon(&self) -> f64 {
        (self.r - self.b) / 2.0
    }
}

fn check_q(q: usize) -> Result<()> {
    if !(3..=9).contains(&q) {
        return Err(Error::param(format!(
            "q must lie in 3..=9 (the corona gadget beats the bound only for q < 10), got {q}"
        )));
    }
    Ok(())
}

/// `R = θ−(α_q)/θ+(2q)` and the Alon–Boppana-type ratio `B` at `d = 2 + (q−2)/m`.
pub fn ratio_bounds(q: usize, m: usize) -> Result<RatioBounds> {
    check_q(q)?;
    let lo = theta_pair(m, alpha_q(q)?)?.theta_minus;
    let hi = theta_pair(m, 2.0 * q as f64)?.theta_plus;
    let d = d_qm(q, m);
    Ok(RatioBounds { q, m, d_numer: *d.numer(), d_denom: *d.denom(), r: lo / hi, b: alon_boppana_ratio(d) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub q: usize,
    pub m_max: usize,
    pub m0: usize,
    pub rows: Vec<RatioBounds>,
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,R,B,R_minus_B\n");
        for r in &self.rows {
            s.push_str(&format!("{},{:.17e},{:.17e},{:.17e}\n", r.m, r.r, r.b, r.r - r.b));
        }
        s
    }
}

/// Least `m₀ ≥ 2` with `R_{q,m} > B_{q,m}` for every `m ∈ [m₀, m_max]`.
pub fn scan_m0(q: usize, m_max: usize) -> Result<ScanTable> {
    check_q(q)?;
    if m_max < 2 {
        return Err(Error::param("m_max must be at least 2"));
    }
    let rows: Vec<RatioBounds> = (2..=m_max).into_par_iter().map(|m| ratio_bounds(q, m)).collect::<Result<_>>()?;
    let tail = rows.iter().rev().take_while(|r| r.r > r.b).count();
    if tail == 0 {
        return Err(Error::Violated(format!("R ≤ B at m = {m_max} for q = {q}")));
    }
    Ok(ScanTable { q, m_max, m0: m_max + 1 - tail, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleCertificate {
    pub q: usize,
    pub m: usize,
    pub d_numer: u64,
    pub d_denom: u64,
    pub r: f64,
    pub b: f64,
    pub epsilon: f64,
    pub base: String,
    pub n: usize,
    /// Numerical `λ_2/λ_n` of the corona.
    pub ratio: f64,
    /// `θ−(λ_2(H))/θ+(2q)` from the base graph's actual spectrum.
    pub base_bound: f64,
}

/// Re-verifies the base hypotheses, builds `base ∘ K̄_{m−1}` and certifies `λ_2/λ_n > B + ε`.
pub fn verify_counterexample(q: usize, m: usize, base: &Graph, base_id: &str) -> Result<CounterexampleCertificate> {
    check_q(q)?;
    let rc = ramanujan_check(base)?;
    if rc.degree != q {
        return Err(Error::hypothesis(format!("base is {}-regular, expected {q}", rc.degree)));
    }
    if !rc.bipartite {
        return Err(Error::hypothesis("base graph is not bipartite"));
    }
    if !rc.holds() {
        return Err(Error::hypothesis(format!(
            "base is not Ramanujan: nontrivial |μ| = {} > {}",
            rc.max_nontrivial, rc.bound
        )));
    }
    let bounds = ratio_bounds(q, m)?;
    let g = corona(base, m)?;
    let ratio = eigenratio_of(&g, &laplacian_spectrum(&g)?)?;
    let base_spec = laplacian_spectrum(base)?;
    let base_bound = theta_pair(m, base_spec.lambda(2))?.theta_minus / theta_pair(m, 2.0 * q as f64)?.theta_plus;
    let cert = CounterexampleCertificate {
        q,
        m,
        d_numer: bounds.d_numer,
        d_denom: bounds.d_denom,
        r: bounds.r,
        b: bounds.b,
        epsilon: bounds.epsilon(),
        base: base_id.to_string(),
        n: g.n(),
        ratio,
        base_bound,
    };
    if cert.r <= cert.b {
        return Err(Error::Violated(format!("R = {} ≤ B = {} at q = {q}, m = {m}", cert.r, cert.b)));
    }
    if ratio < base_bound - TOL.inequality || ratio < cert.r - TOL.inequality {
        return Err(Error::Violated(format!("corona ratio {ratio} below θ-bound {base_bound} / R = {}", cert.r)));
    }
    if ratio <= cert.b + cert.epsilon {
        return Err(Error::Violated(format!("corona ratio {ratio} ≤ B + ε = {}", cert.b + cert.epsilon)));
    }
    Ok(cert)
}

/// Largest deviation between the analytic and numerical corona spectra, and the eigenvalue-1
/// multiplicity observed numerically.
pub fn corona_spectrum_check(h: &Graph, m: usize) -> Result<(f64, usize, Spectrum)> {
    let analytic = corona_spectrum_analytic(&laplacian_spectrum(h)?, m)?;
    let g = corona(h, m)?;
    let numeric = laplacian_spectrum(&g)?;
    let dist = numeric.multiset_distance(&analytic).expect("corona has mN vertices");
    Ok((dist, numeric.integer_multiplicity(1), numeric))
}

/// Eigenvalues of `A_m(λ)` from the dense solver.
pub fn pendant_block_numeric(m: usize, lambda: f64) -> Result<Spectrum> {
    eigenvalues(&pendant_block_matrix(m, lambda)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, complete_bipartite, cycle, heawood, path, petersen};

    #[test]
    fn theta_examples() {
        let t = theta_pair(5, 0.0).unwrap();
        assert_eq!((t.theta_minus, t.theta_plus), (0.0, 5.0));
        let t = theta_pair(3, 1.0).unwrap();
        assert!((t.theta_minus - (2.0 - 3f64.sqrt())).abs() < 1e-14);
        assert!((t.theta_plus - (2.0 + 3f64.sqrt())).abs() < 1e-14);
        for m in 2..=10 {
            let (a, b) = (theta_pair(m, 1.0).unwrap(), theta_pair(m, 2.0).unwrap());
            assert!(a.theta_minus < b.theta_minus && a.theta_plus < b.theta_plus);
            assert!(0.0 < a.theta_minus && a.theta_minus < 1.0 && a.theta_plus > 1.0);
        }
        assert!(theta_pair(1, 0.0).is_err());
        assert!(theta_pair(3, -0.5).is_err());
    }

    #[test]
    fn vieta_grid() {
        for m in 2..=50 {
            for k in 0..=40 {
                let lambda = 2.0 * m as f64 * k as f64 / 40.0;
                let t = theta_pair(m, lambda).unwrap();
                let sum = m as f64 + lambda;
                assert!((t.theta_minus + t.theta_plus - sum).abs() <= 1e-12 * sum);
                assert!((t.theta_minus * t.theta_plus - lambda).abs() <= 1e-12 * lambda.max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn pendant_block() {
        assert_eq!(pendant_block_spectrum(2, 0.0).unwrap().values(), &[0.0, 2.0]);
        assert_eq!(pendant_block_spectrum(4, 0.0).unwrap().values(), &[0.0, 1.0, 1.0, 4.0]);
        let analytic = pendant_block_spectrum(5, 3.0).unwrap();
        let numeric = pendant_block_numeric(5, 3.0).unwrap();
        assert!(analytic.multiset_distance(&numeric).unwrap() <= 1e-10);
    }

    #[test]
    fn corona_of_an_edge_is_p4() {
        let analytic = corona_spectrum_analytic(&laplacian_spectrum(&complete(2).unwrap()).unwrap(), 2).unwrap();
        let p4 = laplacian_spectrum(&path(4).unwrap()).unwrap();
        assert!(analytic.multiset_distance(&p4).unwrap() < 1e-10);
        assert!((analytic.lambda(3) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn analytic_matches_numeric() {
        let bases =
            [complete(2).unwrap(), path(3).unwrap(), cycle(4).unwrap(), complete_bipartite(3, 3).unwrap(), heawood()];
        for h in &bases {
            for m in [2, 3, 5] {
                let (dist, ones, _) = corona_spectrum_check(h, m).unwrap();
                assert!(dist <= 1e-8, "distance {dist}");
                assert_eq!(ones, h.n() * (m - 2));
            }
        }
    }

    #[test]
    fn extreme_eigenvalues_are_theta_images() {
        let h = complete_bipartite(3, 3).unwrap();
        let spec = laplacian_spectrum(&h).unwrap();
        for m in 3..=6 {
            let cs = corona_spectrum_pairs(&spec, m).unwrap();
            let full = cs.to_spectrum();
            assert!((full.lambda(2) - cs.lambda2()).abs() < 1e-12);
            assert!((full.max() - cs.lambda_max()).abs() < 1e-12);
            assert!((cs.lambda2() - theta_pair(m, spec.lambda(2)).unwrap().theta_minus).abs() < 1e-15);
        }
    }

    #[test]
    fn alpha_values() {
        assert!((alpha_q(3).unwrap() - 0.171572875).abs() < 1e-9);
        assert!((alpha_q(10).unwrap() - 4.0).abs() < 1e-12);
        assert!(alpha_q(2).is_err());
    }

    #[test]
    fn boppana_ratio_forms_agree() {
        for q in 3..=9 {
            for m in [2, 3, 7, 40] {
                let d = d_qm(q, m);
                let df = *d.numer() as f64 / *d.denom() as f64;
                let direct = (df - 2.0 * (df - 1.0).sqrt()) / (df + 2.0 * (df - 1.0).sqrt());
                assert!((alon_boppana_ratio(d) - direct).abs() < 1e-12);
            }
        }
        assert_eq!(alon_boppana_ratio(Ratio::from_integer(2)), 0.0);
        assert_eq!(d_qm(5, 3), Ratio::new(3, 1));
        assert_eq!(d_qm(3, 4), Ratio::new(9, 4));
    }

    #[test]
    fn scan_window() {
        assert!(scan_m0(10, 100).is_err());
        assert!(scan_m0(2, 100).is_err());
        let t = scan_m0(9, 2000).unwrap();
        assert!(t.rows.iter().filter(|r| r.m >= t.m0).all(|r| r.r > r.b));
        let t3 = scan_m0(3, 10_000).unwrap();
        let last = t3.rows.last().unwrap();
        let m = last.m as f64;
        let predicted = (alpha_q(3).unwrap() - 1.0 / 16.0) / (m * m);
        assert!(((last.r - last.b) / predicted - 1.0).abs() < 0.05);
    }

    #[test]
    fn petersen_is_rejected_as_base() {
        let e = verify_counterexample(3, 10, &petersen(), "petersen").unwrap_err();
        assert!(e.is_hypothesis());
        assert!(verify_counterexample(3, 10, &cycle(6).unwrap(), "c6").unwrap_err().is_hypothesis());
    }
}
