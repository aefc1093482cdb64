//! Numerical tolerances shared by the solver and every bound check.

/// All tolerances in one place. `Tolerances::default()` is what the library uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this times `‖M‖_F`.
    pub eig_rel_offdiag: f64,
    /// Sweep cap for the Jacobi solver.
    pub max_sweeps: usize,
    /// Absolute slack for comparing eigenvalues of integer matrices.
    pub eig_abs: f64,
    /// Distance to the nearest integer under which an eigenvalue counts as that integer.
    pub integer_snap: f64,
    /// Slack allowed on the "≤" side of every inequality check.
    pub inequality: f64,
    /// Slack for ratios compared against closed forms (e.g. `1/n`).
    pub ratio: f64,
    /// Relative slack for algebraic identities evaluated two ways.
    pub identity_rel: f64,
    /// Required positive gap for strict inequalities.
    pub strict_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eig_rel_offdiag: 1e-12,
            max_sweeps: 200,
            eig_abs: 1e-8,
            integer_snap: 1e-9,
            inequality: 1e-8,
            ratio: 1e-9,
            identity_rel: 1e-10,
            strict_gap: 1e-10,
        }
    }
}

pub const TOL: Tolerances = Tolerances {
    eig_rel_offdiag: 1e-12,
    max_sweeps: 200,
    eig_abs: 1e-8,
    integer_snap: 1e-9,
    inequality: 1e-8,
    ratio: 1e-9,
    identity_rel: 1e-10,
    strict_gap: 1e-10,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn const_matches_default() {
        assert_eq!(TOL, Tolerances::default());
    }
}
