//! Majorant chain, heuristic geometric fit, and the verified radius.
//!
//! The chain goes: per-order majorants gamma_k of both parametrisations, a
//! least-squares geometric envelope C M^k proposing a candidate radius 1/M,
//! a quadratic bound A on the one-dimensional majorant of the nonlinearity,
//! and the shrink iteration that certifies `r <= Omega / (4 A_{2r})`. The
//! certified inequality is checked in the multiplicative form
//! `4 A r <= Omega`, which needs no division and is verified with the upper
//! bound of the left side against the lower bound of Omega.

use crate::index::mindex_count;
use crate::scalar::Scalar;
use crate::series::PolySeries;
use crate::solver::{solve_stable, solve_unstable, ManifoldParam, SolveError, VectorField};
use thiserror::Error;

/// Shrink factor of the radius iteration.
const SHRINK_FACTOR: f64 = 0.95;
/// Engineering guard on the number of shrinks.
const MAX_SHRINKS: usize = 10_000;
/// Candidate radius when the coefficient tail is empty (polynomial
/// manifolds, F = 0).
const DEGENERATE_RADIUS_CAP: f64 = 1.0;
/// Keeps the geometric tail sum strictly convergent when the analytic
/// domain clamp binds.
const ANALYTIC_CLAMP_MARGIN: f64 = 0.999;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("fewer than two nonzero majorant coefficients in the fit window")]
    DegenerateWindow,
    #[error("analytic tail bound diverges: ratio {ratio} >= 1 (raise rho or shrink the radius)")]
    TailDiverges { ratio: f64 },
    #[error("radius iteration did not certify within {0} shrinks")]
    MaxIterationsExceeded(usize),
    #[error("divisor bound is not positive")]
    NonpositiveOmega,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Per-order majorant data feeding the fit and the domination checks.
#[derive(Debug, Clone)]
pub struct MajorantData {
    /// gamma_k for k = 2..=n1 (index 0 is k = 2).
    pub gamma: Vec<f64>,
    /// c-hat_k for k = 2..=rho (upper bounds in interval mode).
    pub c_hat: Vec<f64>,
    pub rho: u32,
    /// delta_k for k = 2..=n1, from the one-dimensional recursion.
    pub delta: Vec<f64>,
    /// Start of the fit window: floor(n1 / 2).
    pub fit_window_start: u32,
    pub n1: u32,
}

impl MajorantData {
    pub fn gamma_at(&self, k: u32) -> f64 {
        self.gamma[(k - 2) as usize]
    }

    pub fn delta_at(&self, k: u32) -> f64 {
        self.delta[(k - 2) as usize]
    }
}

/// The verified output: radius, heuristic envelope, and the quantities the
/// radius inequality was checked with.
#[derive(Debug, Clone)]
pub struct Certificate<S: Scalar> {
    pub n1: u32,
    /// Verified convergence radius of the parametrisations.
    pub r_theta: f64,
    /// Heuristic envelope gamma_k <= c_fit * m_fit^k on the fit window.
    pub c_fit: f64,
    pub m_fit: f64,
    /// Certified uniform small-divisor bound.
    pub omega: S,
    /// Quadratic bound A_{2 r_theta}.
    pub a_bound: S,
    pub shrink_iterations: usize,
}

impl<S: Scalar> Certificate<S> {
    pub fn mode(&self) -> &'static str {
        S::MODE
    }

    /// Tail bound on either parametrisation at parameter norm `zeta_norm`:
    /// `r (|zeta|/r)^(n1+1) (1 - |zeta|/r)^(-1)`, applied as a componentwise
    /// box. Infinite at and beyond the radius.
    pub fn remainder_bound(&self, zeta_norm: f64) -> f64 {
        assert!(zeta_norm >= 0.0, "parameter norm must be non-negative");
        if zeta_norm >= self.r_theta {
            return f64::INFINITY;
        }
        let ratio = zeta_norm / self.r_theta;
        self.r_theta * ratio.powi(self.n1 as i32 + 1) / (1.0 - ratio)
    }
}

/// Everything produced by one certification run.
#[derive(Debug, Clone)]
pub struct Certification<S: Scalar> {
    pub stable: ManifoldParam<S>,
    pub unstable: ManifoldParam<S>,
    pub majorants: MajorantData,
    pub certificate: Certificate<S>,
}

/// gamma_k = alpha-hat_k + beta-hat_k, where each hat is the sum over
/// indices of one order of the componentwise maximum absolute coefficient.
/// Interval coefficients contribute their upper absolute bound.
pub fn joint_majorant<S: Scalar>(
    stable: &ManifoldParam<S>,
    unstable: &ManifoldParam<S>,
) -> Vec<f64> {
    let n1 = stable.order().min(unstable.order());
    let mut gamma = vec![0.0; (n1 - 1) as usize];
    for param in [stable, unstable] {
        let mut hat = vec![0.0; (n1 - 1) as usize];
        for (m, row) in param.tables() {
            let k = m.order();
            if !(2..=n1).contains(&k) {
                continue;
            }
            let best = row.iter().map(|c| c.abs_upper()).fold(0.0, f64::max);
            hat[(k - 2) as usize] += best;
        }
        for (g, h) in gamma.iter_mut().zip(hat) {
            *g += h;
        }
    }
    gamma
}

/// Ordinary least squares of `log gamma_k` against `(1, k)` over the window
/// `floor(n1/2) < k <= n1`, zeros skipped, then C inflated until
/// `gamma_k <= C M^k` holds on the whole window.
pub fn fit_geometric_bound(gamma: &[f64], n1: u32) -> Result<(f64, f64), CertError> {
    let n0 = n1 / 2;
    let window: Vec<(f64, f64)> = (n0 + 1..=n1)
        .filter_map(|k| {
            let g = gamma[(k - 2) as usize];
            (g > 0.0).then(|| (k as f64, g.ln()))
        })
        .collect();
    if window.len() < 2 {
        return Err(CertError::DegenerateWindow);
    }

    let n = window.len() as f64;
    let sx: f64 = window.iter().map(|(x, _)| x).sum();
    let sy: f64 = window.iter().map(|(_, y)| y).sum();
    let sxx: f64 = window.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = window.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sxx * sy - sx * sxy) / denom;

    let m = slope.exp();
    let mut c = intercept.exp();
    for k in n0 + 1..=n1 {
        let g = gamma[(k - 2) as usize];
        if g > 0.0 {
            let needed = g / m.powi(k as i32);
            if needed > c {
                c = needed;
            }
        }
    }
    Ok((c, m))
}

/// c-hat_k = sum over indices of order k of the componentwise maximum
/// absolute coefficient of the nonlinearity, for k = 2..=rho. Sums are
/// rounded upward: these feed the certified quadratic bound.
pub fn fhat_coeffs<S: Scalar>(vf: &VectorField<S>, rho: u32) -> Vec<f64> {
    use crate::interval::Interval;
    let mut c_hat = vec![Interval::ZERO; (rho.max(1) - 1) as usize];
    let mut keys: std::collections::BTreeSet<crate::index::MultiIndex> =
        std::collections::BTreeSet::new();
    for fi in vf.nonlinearity() {
        for (m, _) in fi.terms() {
            keys.insert(m.clone());
        }
    }
    for m in keys {
        let k = m.order();
        if !(2..=rho).contains(&k) {
            continue;
        }
        let best = vf
            .nonlinearity()
            .iter()
            .map(|fi| fi.coefficient(&m).abs_upper())
            .fold(0.0, f64::max);
        let slot = &mut c_hat[(k - 2) as usize];
        *slot = *slot + Interval::point(best);
    }
    c_hat.into_iter().map(|iv| iv.hi()).collect()
}

/// The quadratic bound `A_{s''} = sum_{k=2}^rho c-hat_k (s'')^{k-2} + tail`,
/// with the tail a closed geometric majorant of the Cauchy estimate (zero
/// for polynomial fields without analytic data).
pub fn quadratic_bound<S: Scalar>(
    vf: &VectorField<S>,
    s_outer: f64,
    rho: u32,
) -> Result<S, CertError> {
    let c_hat = fhat_coeffs(vf, rho);
    let s = S::from_f64(s_outer);
    let mut a = S::zero();
    for (idx, &ck) in c_hat.iter().enumerate() {
        if ck == 0.0 {
            continue;
        }
        let k = idx as u32 + 2;
        a = a + S::from_f64(ck) * s.powi(k - 2);
    }

    if let Some(bound) = vf.analytic() {
        let d = vf.dim();
        let s_prime = bound.radius;
        let t = s_outer / s_prime;
        let step_ratio = t * (rho as f64 + 1.0 + d as f64) / (rho as f64 + 2.0);
        if step_ratio >= 1.0 || !step_ratio.is_finite() || s_outer >= s_prime {
            return Err(CertError::TailDiverges { ratio: step_ratio });
        }
        // sum_{k > rho} N_d(k) t^{k-2} <= N_d(rho+1) t^{rho-1} / (1 - q)
        let t_s = S::from_f64(s_outer)
            .checked_div(S::from_f64(s_prime))
            .expect("s' > 0");
        let q = t_s * S::from_f64((rho as f64 + 1.0 + d as f64) / (rho as f64 + 2.0));
        let geom = S::one() - q;
        let count = S::from_int(mindex_count(d, rho + 1) as i64);
        let lead = S::from_f64(bound.norm)
            .checked_div(S::from_f64(s_prime) * S::from_f64(s_prime))
            .expect("s' > 0");
        let tail = (lead * count * t_s.powi(rho - 1))
            .checked_div(geom)
            .ok_or(CertError::TailDiverges { ratio: step_ratio })?;
        a = a + tail;
    }
    Ok(a)
}

/// Shrink `r` by 0.95 until `4 A_{2r} r <= Omega` holds (verified with
/// outward rounding in interval mode); returns the certified radius and the
/// number of shrinks. When the field carries an analytic bound the start is
/// first clamped so `2r` stays inside the valid tail domain.
pub fn verify_radius<S: Scalar>(
    vf: &VectorField<S>,
    r_candidate: f64,
    rho: u32,
) -> Result<(f64, usize), CertError> {
    assert!(r_candidate > 0.0, "candidate radius must be positive");
    let omega = vf.spectrum().omega();
    if omega.lower() <= 0.0 || omega.lower().is_nan() {
        return Err(CertError::NonpositiveOmega);
    }

    let mut r = r_candidate;
    if let Some(bound) = vf.analytic() {
        let d = vf.dim();
        let ratio_cap = (rho as f64 + 2.0) / (rho as f64 + 1.0 + d as f64);
        let s_max = bound.radius * ratio_cap.min(1.0) * ANALYTIC_CLAMP_MARGIN;
        if 2.0 * r > s_max {
            r = s_max / 2.0;
        }
    }

    for iterations in 0..=MAX_SHRINKS {
        let a = quadratic_bound(vf, 2.0 * r, rho)?;
        let lhs = S::from_int(4) * a * S::from_f64(r);
        if lhs.upper() <= omega.lower() {
            return Ok((r, iterations));
        }
        r *= SHRINK_FACTOR;
    }
    Err(CertError::MaxIterationsExceeded(MAX_SHRINKS))
}

/// delta_k from the one-dimensional recursion
/// `delta_k = [F-hat(omega + sigma^{[k-1]})]_k / (Omega k)`, for k = 2..=n.
/// `c_hat` is indexed from k = 2.
pub fn sigma_coeffs(c_hat: &[f64], omega: f64, n: u32) -> Vec<f64> {
    assert!(omega > 0.0, "divisor bound must be positive");
    let rho = c_hat.len() as u32 + 1; // highest order with a coefficient
    let mut sigma = PolySeries::<f64>::zero(1, n);
    let mut delta = Vec::with_capacity((n.max(1) - 1) as usize);
    for k in 2..=n {
        // u = omega + sigma^{[k-1]} as a 1-d series truncated at k
        let mut u = PolySeries::monomial(1, k, crate::index::MultiIndex::new(vec![1]), 1.0);
        for (m, c) in sigma.terms() {
            u.add_term(m.clone(), *c);
        }
        let mut slice_k = 0.0;
        let mut power = u.clone();
        for j in 2..=rho.min(k) {
            power = crate::series::series_multiply(&power, &u, k);
            let ck = c_hat[(j - 2) as usize];
            if ck != 0.0 {
                slice_k += ck * power.coefficient(&crate::index::MultiIndex::new(vec![k]));
            }
        }
        let dk = slice_k / (omega * k as f64);
        delta.push(dk);
        if dk != 0.0 {
            sigma.add_term(crate::index::MultiIndex::new(vec![k]), dk);
        }
    }
    delta
}

/// Effective tail order: the requested override, or the polynomial degree,
/// never below 2. Polynomial-only fields are never cut below their degree.
fn effective_rho<S: Scalar>(vf: &VectorField<S>, rho: Option<u32>) -> u32 {
    let deg = vf.degree().unwrap_or(2);
    let requested = rho.unwrap_or(deg);
    if vf.analytic().is_some() {
        requested.max(2)
    } else {
        requested.max(deg).max(2)
    }
}

/// Run the whole chain: solve both sides, build majorants, fit the envelope,
/// and certify the radius.
pub fn build_certificate<S: Scalar>(
    vf: &VectorField<S>,
    n1: u32,
    rho: Option<u32>,
) -> Result<Certification<S>, CertError> {
    let stable = solve_stable(vf, n1)?;
    let unstable = solve_unstable(vf, n1)?;
    certify_with_params(vf, stable, unstable, rho)
}

/// Certification taking already-solved parametrisations.
pub fn certify_with_params<S: Scalar>(
    vf: &VectorField<S>,
    stable: ManifoldParam<S>,
    unstable: ManifoldParam<S>,
    rho: Option<u32>,
) -> Result<Certification<S>, CertError> {
    let n1 = stable.order().min(unstable.order());
    let gamma = joint_majorant(&stable, &unstable);
    let (c_fit, m_fit, r_candidate) = match fit_geometric_bound(&gamma, n1) {
        Ok((c, m)) => (c, m, 1.0 / m),
        Err(CertError::DegenerateWindow) => {
            // polynomial manifold: flat envelope over all computed orders
            let c = gamma.iter().cloned().fold(0.0, f64::max);
            (c, 1.0, DEGENERATE_RADIUS_CAP)
        }
        Err(e) => return Err(e),
    };

    let rho_eff = effective_rho(vf, rho);
    let (r_theta, shrink_iterations) = verify_radius(vf, r_candidate, rho_eff)?;
    let a_bound = quadratic_bound(vf, 2.0 * r_theta, rho_eff)?;
    let omega = vf.spectrum().omega();

    let c_hat = fhat_coeffs(vf, rho_eff);
    let delta = sigma_coeffs(&c_hat, omega.lower(), n1);
    let majorants = MajorantData {
        gamma,
        c_hat,
        rho: rho_eff,
        delta,
        fit_window_start: n1 / 2,
        n1,
    };

    Ok(Certification {
        stable,
        unstable,
        majorants,
        certificate: Certificate {
            n1,
            r_theta,
            c_fit,
            m_fit,
            omega,
            a_bound,
            shrink_iterations,
        },
    })
}
