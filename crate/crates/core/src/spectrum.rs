//! Validation of the diagonal linear part and the uniform small-divisor
//! bound.
//!
//! Eigenvalues are accepted only when no relation `m . lambda = lambda_i`
//! (resp. `m . mu = mu_i`) exists among the finitely many orders that could
//! produce one. In interval mode every excluded relation must be excluded by
//! a zero-free interval, otherwise verification is inconclusive.

use crate::index::{multi_indices, IndexClass, MultiIndex};
use crate::scalar::Scalar;
use thiserror::Error;

/// Enumeration ceiling for the redundant divisor scan in [`omega_global`].
const OMEGA_SCAN_ORDER: u32 = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("eigenvalue list is empty")]
    EmptyList,
    #[error("eigenvalues out of order: expected ascending values, got {0} before {1}")]
    OrderingViolation(f64, f64),
    #[error("sign violation: {0} on the {1} side")]
    SignViolation(f64, &'static str),
    #[error("resonance detected on the {side} side: m = {relation} reproduces eigenvalue #{index}")]
    ResonanceDetected {
        side: &'static str,
        relation: MultiIndex,
        /// Position in the ascending eigenvalue list (0-based).
        index: usize,
    },
    #[error(
        "inconclusive interval on the {side} side: m = {relation} vs eigenvalue #{index} straddles zero"
    )]
    InconclusiveInterval {
        side: &'static str,
        relation: MultiIndex,
        index: usize,
    },
    #[error("no small divisor is defined for the mixed index {0}")]
    MixedIndexDivisor(MultiIndex),
    #[error("computed divisor bound is not positive")]
    NonpositiveOmega,
}

/// Verified diagonal linear part: ascending stable eigenvalues (most negative
/// first), ascending unstable eigenvalues, and the derived constants.
#[derive(Debug, Clone)]
pub struct Spectrum<S: Scalar> {
    lambda: Vec<f64>,
    mu: Vec<f64>,
    n_const: u32,
    omega: S,
}

impl<S: Scalar> Spectrum<S> {
    /// Stable eigenvalues, ascending: lambda_{d_s}, ..., lambda_1.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Unstable eigenvalues, ascending: mu_1, ..., mu_{d_u}.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn d_s(&self) -> usize {
        self.lambda.len()
    }

    pub fn d_u(&self) -> usize {
        self.mu.len()
    }

    pub fn dim(&self) -> usize {
        self.lambda.len() + self.mu.len()
    }

    /// max(ceil(lambda_{d_s}/lambda_1), ceil(mu_{d_u}/mu_1)).
    pub fn n_const(&self) -> u32 {
        self.n_const
    }

    /// Certified uniform bound: |m.(lambda,mu) - nu| >= Omega |m| for every
    /// pure index of order >= 2 and every eigenvalue nu.
    pub fn omega(&self) -> S {
        self.omega
    }

    /// Diagonal entry i (0-based) of the linear part.
    pub fn diag(&self, i: usize) -> f64 {
        if i < self.lambda.len() {
            self.lambda[i]
        } else {
            self.mu[i - self.lambda.len()]
        }
    }
}

fn ratio_ceil(extreme: f64, closest: f64) -> u32 {
    (extreme / closest).ceil().max(1.0) as u32
}

/// m . values in the scalar type (exact promotion of each factor).
fn dot<S: Scalar>(m: &[u32], values: &[f64]) -> S {
    let mut acc = S::zero();
    for (&e, &v) in m.iter().zip(values) {
        if e > 0 {
            acc = acc + S::from_int(e as i64) * S::from_f64(v);
        }
    }
    acc
}

fn check_side<S: Scalar>(
    side: &'static str,
    values: &[f64],
    up_to: u32,
) -> Result<(), SpectrumError> {
    for k in 2..=up_to {
        for m in multi_indices(values.len(), k) {
            let combo: S = dot(m.exponents(), values);
            for (i, &v) in values.iter().enumerate() {
                let diff = combo - S::from_f64(v);
                let lo = diff.lower();
                let hi = diff.upper();
                if lo == 0.0 && hi == 0.0 {
                    return Err(SpectrumError::ResonanceDetected {
                        side,
                        relation: m,
                        index: i,
                    });
                }
                if lo <= 0.0 && hi >= 0.0 {
                    return Err(SpectrumError::InconclusiveInterval {
                        side,
                        relation: m,
                        index: i,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Validate ordering and signs, exclude every resonance up to the finite
/// rational-independence order of each side, and populate N and Omega.
pub fn verify_spectrum<S: Scalar>(lambda: &[f64], mu: &[f64]) -> Result<Spectrum<S>, SpectrumError> {
    if lambda.is_empty() || mu.is_empty() {
        return Err(SpectrumError::EmptyList);
    }
    for w in lambda.windows(2) {
        if w[0] > w[1] {
            return Err(SpectrumError::OrderingViolation(w[0], w[1]));
        }
    }
    for w in mu.windows(2) {
        if w[0] > w[1] {
            return Err(SpectrumError::OrderingViolation(w[0], w[1]));
        }
    }
    if let Some(&bad) = lambda.iter().find(|&&v| v >= 0.0 || !v.is_finite()) {
        return Err(SpectrumError::SignViolation(bad, "stable"));
    }
    if let Some(&bad) = mu.iter().find(|&&v| v <= 0.0 || !v.is_finite()) {
        return Err(SpectrumError::SignViolation(bad, "unstable"));
    }

    let a_s = ratio_ceil(lambda[0], lambda[lambda.len() - 1]);
    let a_u = ratio_ceil(mu[mu.len() - 1], mu[0]);
    check_side::<S>("stable", lambda, a_s)?;
    check_side::<S>("unstable", mu, a_u)?;

    let mut spectrum = Spectrum {
        lambda: lambda.to_vec(),
        mu: mu.to_vec(),
        n_const: a_s.max(a_u),
        omega: S::zero(),
    };
    spectrum.omega = omega_global(&spectrum)?;
    Ok(spectrum)
}

/// Small divisor for a pure index: `m_s . lambda - diag_i` on the stable
/// side, `m_u . mu - diag_i` on the unstable side. `i` is 0-based over the
/// full diagonal.
pub fn small_divisor<S: Scalar>(
    spectrum: &Spectrum<S>,
    m: &MultiIndex,
    i: usize,
) -> Result<S, SpectrumError> {
    let d_s = spectrum.d_s();
    assert_eq!(m.dim(), spectrum.dim());
    assert!(i < spectrum.dim());
    let combo = match m.classify(d_s) {
        IndexClass::Stable => dot::<S>(&m.exponents()[..d_s], &spectrum.lambda),
        IndexClass::Unstable => dot::<S>(&m.exponents()[d_s..], &spectrum.mu),
        IndexClass::Mixed => return Err(SpectrumError::MixedIndexDivisor(m.clone())),
    };
    Ok(combo - S::from_f64(spectrum.diag(i)))
}

/// Divisor for a side-local index of the stable recursion.
pub fn stable_divisor<S: Scalar>(spectrum: &Spectrum<S>, m_s: &MultiIndex, i: usize) -> S {
    dot::<S>(m_s.exponents(), &spectrum.lambda) - S::from_f64(spectrum.diag(i))
}

/// Divisor for a side-local index of the unstable recursion.
pub fn unstable_divisor<S: Scalar>(spectrum: &Spectrum<S>, m_u: &MultiIndex, i: usize) -> S {
    dot::<S>(m_u.exponents(), &spectrum.mu) - S::from_f64(spectrum.diag(i))
}

/// Omega(k) = min(|k lambda_1 - lambda_{d_s}|, |k mu_1 - mu_{d_u}|).
pub fn omega_of<S: Scalar>(spectrum: &Spectrum<S>, k: u32) -> f64 {
    let lambda = &spectrum.lambda;
    let mu = &spectrum.mu;
    let a = (k as f64 * lambda[lambda.len() - 1] - lambda[0]).abs();
    let b = (k as f64 * mu[0] - mu[mu.len() - 1]).abs();
    a.min(b)
}

fn omega_of_scalar<S: Scalar>(spectrum: &Spectrum<S>, k: u32) -> S {
    let lambda = &spectrum.lambda;
    let mu = &spectrum.mu;
    let a = S::from_int(k as i64) * S::from_f64(lambda[lambda.len() - 1])
        - S::from_f64(lambda[0]);
    let b =
        S::from_int(k as i64) * S::from_f64(mu[0]) - S::from_f64(mu[mu.len() - 1]);
    a.abs().min(b.abs())
}

/// The uniform divisor bound: explicit minimum over low orders combined with
/// Omega(N_eff)/N_eff, with N_eff = max(N, 2), plus a redundant enumeration
/// of all divisor ratios up to order 200.
pub fn omega_global<S: Scalar>(spectrum: &Spectrum<S>) -> Result<S, SpectrumError> {
    let n_eff = spectrum.n_const.max(2);
    let mut best = omega_of_scalar(spectrum, n_eff)
        .checked_div(S::from_int(n_eff as i64))
        .expect("N_eff is nonzero");

    let d_s = spectrum.d_s();
    let d = spectrum.dim();
    for k in 2..=OMEGA_SCAN_ORDER.max(n_eff.saturating_sub(1)) {
        let explicit = k < n_eff; // part of the defining minimum
        let scanned = k <= OMEGA_SCAN_ORDER; // redundant safety net
        if !explicit && !scanned {
            break;
        }
        for m_s in multi_indices(d_s, k) {
            let combo = dot::<S>(m_s.exponents(), &spectrum.lambda);
            for i in 0..d {
                let diff = (combo - S::from_f64(spectrum.diag(i))).abs();
                best = best.min(diff.checked_div(S::from_int(k as i64)).unwrap());
            }
        }
        for m_u in multi_indices(spectrum.d_u(), k) {
            let combo = dot::<S>(m_u.exponents(), &spectrum.mu);
            for i in 0..d {
                let diff = (combo - S::from_f64(spectrum.diag(i))).abs();
                best = best.min(diff.checked_div(S::from_int(k as i64)).unwrap());
            }
        }
    }

    if best.lower() <= 0.0 {
        return Err(SpectrumError::NonpositiveOmega);
    }
    Ok(best)
}
