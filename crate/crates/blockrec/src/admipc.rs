//! The increasing-penalty ADMM solver for the trace-penalized
//! decomposition
//!
//! ```text
//! minimize   Tr(L) + rho * ||S||_1
//! subject to π_Ω(L + S) = π_Ω(D),  diag(S) = 0,  |S_ij| <= 1,
//!            L PSD,  L >= 0 entrywise,
//! ```
//!
//! split as X = L with the (X, S) block constrained to the feasible set
//! φ = { π_Ω(X + S) = π_Ω(D), X >= 0, diag(S) = 0, |S_ij| <= 1 }.
//!
//! Each iteration minimizes the augmented Lagrangian over (X, S) ∈ φ in
//! closed form (an entrywise shrink-and-clamp), then over L ⪰ 0 via one
//! eigenvalue-thresholded PSD projection, then takes a dual ascent step.
//! The penalty grows geometrically to a cap, which keeps the early
//! projections cheap: only eigenvalues above 1/μ matter.

use ndarray::Array2;

use crate::mat::{DenseSymMatrix, ObservationMask};
use crate::netgen::ObservedGraph;
use crate::spectral::{psd_project_shifted, spectral_norm, SpectralBackend};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Sparsity weight; the standard choice is 1/sqrt(n).
    pub rho: f64,
    /// Initial penalty; `None` computes 1.25 / ||π_Ω(D)||_2 at solve time.
    pub mu0: Option<f64>,
    /// Penalty growth factor per iteration.
    pub kappa: f64,
    /// Penalty cap.
    pub mu_bar: f64,
    /// Relative tolerance of the primal/dual stopping conditions.
    pub eps_r: f64,
    pub max_iter: usize,
    pub backend: SpectralBackend,
}

impl SolverConfig {
    /// Defaults for an n-node instance.
    pub fn for_nodes(n: usize) -> Self {
        Self {
            rho: 1.0 / (n as f64).sqrt(),
            mu0: None,
            kappa: 1.2,
            mu_bar: 1e7,
            eps_r: 5e-4,
            max_iter: 500,
            backend: SpectralBackend::default(),
        }
    }
}

/// Solver state after iteration k.
#[derive(Debug, Clone)]
pub struct Iterate {
    pub l: DenseSymMatrix,
    pub x: DenseSymMatrix,
    pub s: DenseSymMatrix,
    pub y: DenseSymMatrix,
    pub mu: f64,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterReached,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub l: DenseSymMatrix,
    pub s: DenseSymMatrix,
    pub iterations: usize,
    pub eig_calls: usize,
    pub primal_residuals: Vec<f64>,
    pub dual_residuals: Vec<f64>,
    pub status: SolveStatus,
}

/// Builds the starting iterate: L₀ = 0 and
/// Y₀ = π_Ω(D) / max(‖π_Ω(D)‖₂, ρ⁻¹‖π_Ω(D)‖_∞), with X and S zeroed
/// (they are overwritten before first use). Validates that D is binary
/// on the mask with a unit diagonal.
pub fn initialize(d: &DenseSymMatrix, mask: &ObservationMask, cfg: &SolverConfig) -> Result<Iterate> {
    let n = d.n();
    if n != mask.n() {
        return Err(Error::DimensionMismatch { expected: n, got: mask.n() });
    }
    for i in 0..n {
        if d.get(i, i) != 1.0 {
            return Err(Error::Validation(format!(
                "diagonal entry ({i}, {i}) = {} must be 1",
                d.get(i, i)
            )));
        }
    }
    for &(i, j) in mask.off_diagonal_pairs() {
        let v = d.get(i, j);
        if v != 0.0 && v != 1.0 {
            return Err(Error::Validation(format!(
                "observed entry ({i}, {j}) = {v} is not binary"
            )));
        }
    }
    let d_obs = d.project_mask(mask)?;
    let norm2 = spectral_norm(&d_obs);
    let (mu, denom) = if norm2 == 0.0 {
        // unreachable for valid inputs (the diagonal alone has norm 1)
        (1.25, (1.0f64).max(1.0 / cfg.rho))
    } else {
        let denom = norm2.max(d_obs.inf_norm() / cfg.rho);
        (cfg.mu0.unwrap_or(1.25 / norm2), denom)
    };
    Ok(Iterate {
        l: DenseSymMatrix::zeros(n),
        x: DenseSymMatrix::zeros(n),
        s: DenseSymMatrix::zeros(n),
        y: d_obs.scaled(1.0 / denom),
        mu,
        k: 0,
    })
}

/// Scalar proximal step of c·|t|: shrink toward zero by c.
#[inline]
fn shrink(t: f64, c: f64) -> f64 {
    t.signum() * (t.abs() - c).max(0.0)
}

/// Closed-form minimizer of the (X, S) subproblem at the current
/// iterate. With Q = L - Y/μ:
///
/// - on observed off-diagonal pairs, S is the shrink of (D - Q) by ρ/μ
///   clamped into [-1, D_ij], and X = D - S;
/// - on the diagonal, S = 0 and X = D = 1;
/// - off the mask, S = 0 and X = max(Q, 0).
///
/// The result lies in φ exactly.
pub fn update_xs(
    it: &Iterate,
    d: &DenseSymMatrix,
    mask: &ObservationMask,
    rho: f64,
) -> (DenseSymMatrix, DenseSymMatrix) {
    let n = d.n();
    let mu = it.mu;
    let shrink_level = rho / mu;
    let inv_mu = 1.0 / mu;

    let mut s = Array2::zeros((n, n));
    let mut x = Array2::zeros((n, n));
    // start from the unobserved-entry rule everywhere off-diagonal...
    for i in 0..n {
        for j in (i + 1)..n {
            let q = it.l.get(i, j) - inv_mu * it.y.get(i, j);
            let v = q.max(0.0);
            x[(i, j)] = v;
            x[(j, i)] = v;
        }
        x[(i, i)] = 1.0; // diagonal is observed with D_ii = 1 and S_ii = 0
    }
    // ...then overwrite the observed pairs
    for &(i, j) in mask.off_diagonal_pairs() {
        let q = it.l.get(i, j) - inv_mu * it.y.get(i, j);
        let d_ij = d.get(i, j);
        let s_ij = shrink(d_ij - q, shrink_level).clamp(-1.0, d_ij);
        s[(i, j)] = s_ij;
        s[(j, i)] = s_ij;
        let x_ij = d_ij - s_ij;
        x[(i, j)] = x_ij;
        x[(j, i)] = x_ij;
    }
    (
        DenseSymMatrix::from_symmetric_unchecked(x),
        DenseSymMatrix::from_symmetric_unchecked(s),
    )
}

/// PSD-cone step: L = projection of (X + Y/μ - μ⁻¹ I) onto the PSD cone,
/// computed by thresholding the eigenvalues of X + Y/μ at 1/μ.
pub fn update_l(
    x_new: &DenseSymMatrix,
    y: &DenseSymMatrix,
    mu: f64,
    backend: &SpectralBackend,
) -> Result<(DenseSymMatrix, usize)> {
    let q = DenseSymMatrix::from_symmetric_unchecked(
        x_new.as_array() + &(y.as_array() * (1.0 / mu)),
    );
    psd_project_shifted(&q, 1.0 / mu, backend)
}

/// Dual ascent: Y' = Y + μ (X' - L').
pub fn update_dual(
    y: &DenseSymMatrix,
    mu: f64,
    x_new: &DenseSymMatrix,
    l_new: &DenseSymMatrix,
) -> DenseSymMatrix {
    DenseSymMatrix::from_symmetric_unchecked(
        y.as_array() + &((x_new.as_array() - l_new.as_array()) * mu),
    )
}

/// Geometric penalty growth capped at μ̄.
pub fn update_penalty(mu: f64, cfg: &SolverConfig) -> f64 {
    (cfg.kappa * mu).min(cfg.mu_bar)
}

/// Primal/dual stopping test:
/// ‖L' - X'‖_F ≤ ε_r max(‖L'‖_F, ‖X'‖_F) and
/// μ ‖L' - L‖_F / ‖π_Ω(D)‖_F ≤ ε_r ‖Y'‖_F.
/// Returns the two residual left-hand sides alongside the verdict.
pub fn check_convergence(
    l_prev: &DenseSymMatrix,
    l_new: &DenseSymMatrix,
    x_new: &DenseSymMatrix,
    y_new: &DenseSymMatrix,
    mu: f64,
    d_obs_fro: f64,
    eps_r: f64,
) -> (bool, f64, f64) {
    let primal = (l_new - x_new).frobenius_norm();
    let tol_p = eps_r * l_new.frobenius_norm().max(x_new.frobenius_norm());
    let dual = mu * (l_new - l_prev).frobenius_norm() / d_obs_fro;
    let tol_d = eps_r * y_new.frobenius_norm();
    (primal <= tol_p && dual <= tol_d, primal, dual)
}

/// Largest violation of the feasible set φ by (X, S): the constraint
/// residual on observed entries (measured as X - (D - S), which the
/// closed-form update satisfies exactly), negative parts of X, diagonal
/// entries of S, and the excess of |S| over 1 off the diagonal.
pub fn check_feasibility(
    x: &DenseSymMatrix,
    s: &DenseSymMatrix,
    d: &DenseSymMatrix,
    mask: &ObservationMask,
) -> f64 {
    let n = d.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        worst = worst.max((x.get(i, i) - (d.get(i, i) - s.get(i, i))).abs());
        worst = worst.max(s.get(i, i).abs());
    }
    for &(i, j) in mask.off_diagonal_pairs() {
        worst = worst.max((x.get(i, j) - (d.get(i, j) - s.get(i, j))).abs());
    }
    for i in 0..n {
        for j in 0..n {
            worst = worst.max(-x.get(i, j));
            if i != j {
                worst = worst.max(s.get(i, j).abs() - 1.0);
            }
        }
    }
    worst.max(0.0)
}

/// Runs the solver on an observed graph until the stopping conditions
/// hold or `max_iter` is reached.
pub fn solve(graph: &ObservedGraph, cfg: &SolverConfig) -> Result<SolveResult> {
    let (d, mask) = graph.to_dense();
    let mut it = initialize(&d, &mask, cfg)?;
    let d_obs_fro = d.frobenius_norm(); // d is zero off the mask already
    let mut primal_residuals = Vec::new();
    let mut dual_residuals = Vec::new();
    let mut eig_calls = 0usize;
    let mut status = SolveStatus::MaxIterReached;

    while it.k < cfg.max_iter {
        let (x_new, s_new) = update_xs(&it, &d, &mask, cfg.rho);
        let (l_new, calls) = update_l(&x_new, &it.y, it.mu, &cfg.backend).map_err(|e| match e {
            Error::Spectral { message, residual } => Error::Spectral {
                message: format!("iteration {} (mu = {:.3e}): {message}", it.k, it.mu),
                residual,
            },
            other => other,
        })?;
        eig_calls += calls;
        let y_new = update_dual(&it.y, it.mu, &x_new, &l_new);
        let (converged, primal, dual) =
            check_convergence(&it.l, &l_new, &x_new, &y_new, it.mu, d_obs_fro, cfg.eps_r);
        primal_residuals.push(primal);
        dual_residuals.push(dual);
        let mu_next = update_penalty(it.mu, cfg);
        it = Iterate {
            l: l_new,
            x: x_new,
            s: s_new,
            y: y_new,
            mu: mu_next,
            k: it.k + 1,
        };
        if converged {
            status = SolveStatus::Converged;
            break;
        }
    }

    Ok(SolveResult {
        l: it.l,
        s: it.s,
        iterations: it.k,
        eig_calls,
        primal_residuals,
        dual_residuals,
        status,
    })
}
