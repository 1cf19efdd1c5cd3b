//! Order-by-order computation of the manifold parametrisations and the
//! normal-form tail.
//!
//! The stable parametrisation is the map `(xi, 0) + phi(xi)` whose
//! coefficients solve, level by level,
//! `alpha_{i,m} = [F_i((xi,0) + phi^{[k-1]}(xi))]_m / (lambda.m - diag_i)`.
//! Coefficients at order k depend only on orders below k because the
//! nonlinearity has no constant or linear terms, so each level is read off
//! from a composition truncated at that level. The unstable side mirrors
//! this with `(0, eta) + psi(eta)`.

use crate::index::{multi_indices, IndexClass, MultiIndex};
use crate::scalar::Scalar;
use crate::series::{compose_truncated, filter, series_multiply, PolySeries};
use crate::spectrum::{stable_divisor, unstable_divisor, Spectrum, SpectrumError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("truncation order {got} is below the admissible minimum {min}")]
    OrderTooSmall { got: u32, min: u32 },
    #[error(
        "inconclusive interval: divisor for m = {relation}, component {component} straddles zero"
    )]
    InconclusiveInterval {
        relation: MultiIndex,
        component: usize,
    },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Optional analytic tail data: a radius s' and a bound on the sup norm of
/// the nonlinearity on the ball of that radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBound {
    pub radius: f64,
    pub norm: f64,
}

/// The system `dz = Lambda z + F(z)` with diagonal verified linear part and
/// polynomial nonlinearity (plus an optional analytic tail bound).
#[derive(Debug, Clone)]
pub struct VectorField<S: Scalar> {
    spectrum: Spectrum<S>,
    f: Vec<PolySeries<S>>,
    analytic: Option<AnalyticBound>,
}

impl<S: Scalar> VectorField<S> {
    /// Assemble a vector field; every component of `f` must be O(z^2) and
    /// dimensioned like the spectrum.
    pub fn new(
        spectrum: Spectrum<S>,
        f: Vec<PolySeries<S>>,
        analytic: Option<AnalyticBound>,
    ) -> Self {
        let d = spectrum.dim();
        assert_eq!(f.len(), d, "one nonlinearity component per dimension");
        for fi in &f {
            assert_eq!(fi.dim(), d);
            assert!(
                fi.min_order().is_none_or(|o| o >= 2),
                "nonlinearity must be O(z^2)"
            );
        }
        if let Some(a) = analytic {
            assert!(a.radius > 0.0 && a.norm >= 0.0);
        }
        VectorField {
            spectrum,
            f,
            analytic,
        }
    }

    pub fn spectrum(&self) -> &Spectrum<S> {
        &self.spectrum
    }

    pub fn nonlinearity(&self) -> &[PolySeries<S>] {
        &self.f
    }

    pub fn analytic(&self) -> Option<AnalyticBound> {
        self.analytic
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    /// Degree of the polynomial part (None for F = 0).
    pub fn degree(&self) -> Option<u32> {
        self.f.iter().filter_map(|s| s.degree()).max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Stable,
    Unstable,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Stable => "stable",
            Side::Unstable => "unstable",
        }
    }
}

/// Coefficient table of one manifold parametrisation up to order n1. Keys
/// are side-local multi-indices (dimension d_s or d_u); values hold all d
/// ambient components, explicit zeros included.
#[derive(Debug, Clone)]
pub struct ManifoldParam<S: Scalar> {
    side: Side,
    order: u32,
    param_dim: usize,
    ambient_dim: usize,
    coeffs: BTreeMap<MultiIndex, Vec<S>>,
}

impl<S: Scalar> ManifoldParam<S> {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn param_dim(&self) -> usize {
        self.param_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// alpha_{i,m} (stable side) or beta_{i,m} (unstable side); zero for
    /// absent keys.
    pub fn coefficient(&self, component: usize, m: &MultiIndex) -> S {
        self.coeffs
            .get(m)
            .map(|v| v[component])
            .unwrap_or_else(S::zero)
    }

    pub fn tables(&self) -> impl Iterator<Item = (&MultiIndex, &[S])> {
        self.coeffs.iter().map(|(m, v)| (m, v.as_slice()))
    }

    /// The parametrisation components as side-local series (nonlinear part
    /// only, no identity block).
    pub fn component_series(&self, trunc: u32) -> Vec<PolySeries<S>> {
        let mut out = vec![PolySeries::zero(self.param_dim, trunc); self.ambient_dim];
        for (m, v) in &self.coeffs {
            for (i, &c) in v.iter().enumerate() {
                out[i].add_term(m.clone(), c);
            }
        }
        out
    }

    /// Point on the manifold for a side-local parameter value: identity in
    /// the side's block plus the parametrisation series.
    pub fn eval_point(&self, t: &[S], d_s: usize) -> Vec<S> {
        assert_eq!(t.len(), self.param_dim);
        let series = self.component_series(self.order);
        let mut z: Vec<S> = series.iter().map(|s| s.eval(t)).collect();
        let offset = match self.side {
            Side::Stable => 0,
            Side::Unstable => d_s,
        };
        for (j, &tj) in t.iter().enumerate() {
            z[offset + j] = z[offset + j] + tj;
        }
        z
    }
}

/// Identity-plus-parametrisation inner map for the chosen side, as ambient
/// components in the side-local variables.
fn identity_block<S: Scalar>(side: Side, d_s: usize, d_u: usize, trunc: u32) -> Vec<PolySeries<S>> {
    let d = d_s + d_u;
    let (param_dim, offset) = match side {
        Side::Stable => (d_s, 0),
        Side::Unstable => (d_u, d_s),
    };
    (0..d)
        .map(|i| {
            if i >= offset && i < offset + param_dim {
                PolySeries::monomial(param_dim, trunc, MultiIndex::unit(param_dim, i - offset), S::one())
            } else {
                PolySeries::zero(param_dim, trunc)
            }
        })
        .collect()
}

fn solve_side<S: Scalar>(
    vf: &VectorField<S>,
    side: Side,
    n1: u32,
) -> Result<ManifoldParam<S>, SolveError> {
    let spectrum = vf.spectrum();
    let min_order = spectrum.n_const();
    if n1 < min_order {
        return Err(SolveError::OrderTooSmall {
            got: n1,
            min: min_order,
        });
    }
    let d_s = spectrum.d_s();
    let d_u = spectrum.d_u();
    let d = d_s + d_u;
    let param_dim = match side {
        Side::Stable => d_s,
        Side::Unstable => d_u,
    };

    let mut inner = identity_block::<S>(side, d_s, d_u, n1);
    let mut coeffs: BTreeMap<MultiIndex, Vec<S>> = BTreeMap::new();

    for k in 2..=n1 {
        // only the order-k slice of the composition is consumed here, and it
        // is final because F has no linear part
        let composed = compose_truncated(vf.nonlinearity(), &inner, k);
        for m in multi_indices(param_dim, k) {
            let mut row = Vec::with_capacity(d);
            for (i, comp) in composed.iter().enumerate() {
                let numerator = comp.coefficient(&m);
                let divisor = match side {
                    Side::Stable => stable_divisor(spectrum, &m, i),
                    Side::Unstable => unstable_divisor(spectrum, &m, i),
                };
                let mut value =
                    numerator
                        .checked_div(divisor)
                        .ok_or_else(|| SolveError::InconclusiveInterval {
                            relation: m.clone(),
                            component: i,
                        })?;
                if value.is_zero() {
                    value = S::zero(); // canonical zero, not -0.0
                } else {
                    inner[i].add_term(m.clone(), value);
                }
                row.push(value);
            }
            coeffs.insert(m, row);
        }
    }

    Ok(ManifoldParam {
        side,
        order: n1,
        param_dim,
        ambient_dim: d,
        coeffs,
    })
}

/// Stable-side coefficients alpha up to order n1.
pub fn solve_stable<S: Scalar>(vf: &VectorField<S>, n1: u32) -> Result<ManifoldParam<S>, SolveError> {
    solve_side(vf, Side::Stable, n1)
}

/// Unstable-side coefficients beta up to order n1.
pub fn solve_unstable<S: Scalar>(
    vf: &VectorField<S>,
    n1: u32,
) -> Result<ManifoldParam<S>, SolveError> {
    solve_side(vf, Side::Unstable, n1)
}

/// Defect of the invariance equation, truncated at the parametrisation's
/// order: the diagonal operator applied to the parametrisation minus the
/// composed nonlinearity. All coefficients vanish up to rounding; this is
/// the correctness oracle for the solver.
pub fn invariance_residual<S: Scalar>(
    vf: &VectorField<S>,
    param: &ManifoldParam<S>,
) -> Vec<PolySeries<S>> {
    let spectrum = vf.spectrum();
    let d_s = spectrum.d_s();
    let d_u = spectrum.d_u();
    let n1 = param.order();
    let series = param.component_series(n1);

    let mut inner = identity_block::<S>(param.side(), d_s, d_u, n1);
    for (i, s) in series.iter().enumerate() {
        inner[i] = inner[i].add(s);
    }
    let composed = compose_truncated(vf.nonlinearity(), &inner, n1);

    series
        .iter()
        .zip(composed)
        .enumerate()
        .map(|(i, (phi_i, comp_i))| {
            // the diagonal operator scales each monomial by its divisor
            let mut lhs = PolySeries::zero(param.param_dim(), n1);
            for (m, c) in phi_i.terms() {
                let divisor = match param.side() {
                    Side::Stable => stable_divisor(spectrum, m, i),
                    Side::Unstable => unstable_divisor(spectrum, m, i),
                };
                lhs.add_term(m.clone(), *c * divisor);
            }
            lhs.sub(&comp_i)
        })
        .collect()
}

/// Mixed-index tail of the pulled-back vector field, everything of order up
/// to `n`. Keys are full-dimensional indices with at least one exponent on
/// each side.
#[derive(Debug, Clone)]
pub struct NormalFormTail<S: Scalar> {
    order: u32,
    dim: usize,
    coeffs: BTreeMap<MultiIndex, Vec<S>>,
}

impl<S: Scalar> NormalFormTail<S> {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficient(&self, component: usize, m: &MultiIndex) -> S {
        self.coeffs
            .get(m)
            .map(|v| v[component])
            .unwrap_or_else(S::zero)
    }

    pub fn tables(&self) -> impl Iterator<Item = (&MultiIndex, &[S])> {
        self.coeffs.iter().map(|(m, v)| (m, v.as_slice()))
    }

    pub fn component_series(&self) -> Vec<PolySeries<S>> {
        let mut out = vec![PolySeries::zero(self.dim, self.order); self.dim];
        for (m, v) in &self.coeffs {
            for (i, &c) in v.iter().enumerate() {
                out[i].add_term(m.clone(), c);
            }
        }
        out
    }
}

/// Solve `g_m = [[F(Theta)]_U - D(phi + psi) G^{[|m|-1]}]_m` order by order.
pub fn normal_form_tail<S: Scalar>(
    vf: &VectorField<S>,
    stable: &ManifoldParam<S>,
    unstable: &ManifoldParam<S>,
    n: u32,
) -> Result<NormalFormTail<S>, SolveError> {
    if stable.order() < n || unstable.order() < n {
        return Err(SolveError::OrderTooSmall {
            got: stable.order().min(unstable.order()),
            min: n,
        });
    }
    let spectrum = vf.spectrum();
    let d_s = spectrum.d_s();
    let d = spectrum.dim();

    // Theta(zeta) = (xi, eta) + phi(xi) + psi(eta) in the full variable space
    let phi: Vec<PolySeries<S>> = stable
        .component_series(n)
        .into_iter()
        .map(|s| s.embedded(d, 0))
        .collect();
    let psi: Vec<PolySeries<S>> = unstable
        .component_series(n)
        .into_iter()
        .map(|s| s.embedded(d, d_s))
        .collect();
    let mut theta = Vec::with_capacity(d);
    for i in 0..d {
        let mut t = PolySeries::monomial(d, n, MultiIndex::unit(d, i), S::one());
        t = t.add(&phi[i]).add(&psi[i]);
        theta.push(t);
    }

    let composed = compose_truncated(vf.nonlinearity(), &theta, n);
    let mixed: Vec<PolySeries<S>> = composed
        .iter()
        .map(|c| filter(c, d_s, IndexClass::Mixed))
        .collect();

    // rows of D(phi + psi)
    let mut jacobian: Vec<Vec<PolySeries<S>>> = Vec::with_capacity(d);
    for i in 0..d {
        let sum = phi[i].add(&psi[i]);
        jacobian.push((0..d).map(|j| sum.differentiate(j)).collect());
    }

    let mut g: Vec<PolySeries<S>> = vec![PolySeries::zero(d, n); d];
    let mut coeffs: BTreeMap<MultiIndex, Vec<S>> = BTreeMap::new();
    for k in 2..=n {
        for i in 0..d {
            // order-k slice of row_i(D(phi+psi)) . G^{[k-1]}
            let mut correction = PolySeries::zero(d, k);
            for j in 0..d {
                correction = correction.add(&series_multiply(&jacobian[i][j], &g[j], k));
            }
            let slice = mixed[i].order_slice(k).sub(&correction.order_slice(k));
            for (m, c) in slice.terms() {
                debug_assert_eq!(m.classify(d_s), IndexClass::Mixed);
                coeffs
                    .entry(m.clone())
                    .or_insert_with(|| vec![S::zero(); d])[i] = *c;
                g[i].add_term(m.clone(), *c);
            }
        }
    }

    Ok(NormalFormTail {
        order: n,
        dim: d,
        coeffs,
    })
}
