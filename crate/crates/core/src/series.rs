//! Truncated multivariate power series over an abstract scalar.
//!
//! Series are sparse maps from [`MultiIndex`] to coefficients, graded order
//! by order. Absent keys mean zero; no stored key exceeds the truncation
//! order (terms of order exactly `n` are retained, strictly above `n`
//! discarded). Values are immutable after construction as far as callers are
//! concerned; all operations return fresh series.

use crate::index::{multi_indices, IndexClass, MultiIndex};
use crate::interval::Interval;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct PolySeries<S: Scalar> {
    dim: usize,
    trunc: u32,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> PolySeries<S> {
    pub fn zero(dim: usize, trunc: u32) -> Self {
        PolySeries {
            dim,
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(dim: usize, trunc: u32, m: MultiIndex, c: S) -> Self {
        assert_eq!(m.dim(), dim, "exponent vector has wrong dimension");
        let mut s = Self::zero(dim, trunc);
        s.add_term(m, c);
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest stored order, or `None` for the zero series.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().map(|m| m.order())
    }

    /// Smallest stored order, or `None` for the zero series.
    pub fn min_order(&self) -> Option<u32> {
        self.coeffs.keys().next().map(|m| m.order())
    }

    pub fn coefficient(&self, m: &MultiIndex) -> S {
        self.coeffs.get(m).copied().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    /// Accumulate a term, dropping it if it is beyond the truncation order.
    /// Exact zeros are pruned; interval coefficients with nonzero width stay.
    pub fn add_term(&mut self, m: MultiIndex, c: S) {
        debug_assert_eq!(m.dim(), self.dim);
        if m.order() > self.trunc || c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn set_trunc(&mut self, trunc: u32) {
        self.trunc = trunc;
        self.coeffs.retain(|m, _| m.order() <= trunc);
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "series dimension mismatch");
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        out.coeffs.retain(|m, _| m.order() <= out.trunc);
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: S) -> Self {
        let mut out = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), *c * k);
        }
        out
    }

    /// The order-`k` slice as a standalone series.
    pub fn order_slice(&self, k: u32) -> Self {
        let mut out = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.coeffs {
            if m.order() == k {
                out.coeffs.insert(m.clone(), *c);
            }
        }
        out
    }

    /// Partial derivative with respect to variable `j`.
    pub fn differentiate(&self, j: usize) -> Self {
        let mut out = Self::zero(self.dim, self.trunc);
        for (m, c) in &self.coeffs {
            if let Some(dm) = m.decremented(j) {
                let factor = S::from_int(m.exponents()[j] as i64);
                out.add_term(dm, *c * factor);
            }
        }
        out
    }

    /// Re-key into a larger variable space with this series' variables placed
    /// at `offset`.
    pub fn embedded(&self, dim: usize, offset: usize) -> Self {
        assert!(offset + self.dim <= dim);
        let mut out = Self::zero(dim, self.trunc);
        for (m, c) in &self.coeffs {
            out.coeffs.insert(m.embedded(dim, offset), *c);
        }
        out
    }

    /// Evaluate at a point of the scalar type (plain substitution).
    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.dim);
        let mut acc = S::zero();
        for (m, c) in &self.coeffs {
            let mut term = *c;
            for (j, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term * point[j].powi(e);
                }
            }
            acc = acc + term;
        }
        acc
    }
}

/// Cauchy product with every term of order above `n` discarded. Agrees with
/// exact polynomial multiplication followed by truncation.
pub fn series_multiply<S: Scalar>(a: &PolySeries<S>, b: &PolySeries<S>, n: u32) -> PolySeries<S> {
    assert_eq!(a.dim, b.dim, "series dimension mismatch");
    let mut out = PolySeries::zero(a.dim, n);
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return out;
    }
    let b_min = b.min_order().unwrap_or(0);
    for (ma, ca) in &a.coeffs {
        if ma.order() + b_min > n {
            break; // graded order: everything after is too high
        }
        for (mb, cb) in &b.coeffs {
            if ma.order() + mb.order() > n {
                break;
            }
            out.add_term(ma.add(mb), *ca * *cb);
        }
    }
    out
}

/// Integer power with truncation at order `n`.
pub fn series_pow<S: Scalar>(a: &PolySeries<S>, e: u32, n: u32) -> PolySeries<S> {
    let mut acc = PolySeries::monomial(a.dim, n, MultiIndex::zero(a.dim), S::one());
    for _ in 0..e {
        acc = series_multiply(&acc, a, n);
    }
    acc
}

/// Composition `F o inner` truncated at order `n`, exact on retained orders.
///
/// `f` is a vector of series in `inner.len()` variables; `inner` is a vector
/// of series in a common variable space with no constant terms. Each
/// component of `f` must be O(z^2). Monomials of `f` are substituted one by
/// one using cached powers of the inner components.
pub fn compose_truncated<S: Scalar>(
    f: &[PolySeries<S>],
    inner: &[PolySeries<S>],
    n: u32,
) -> Vec<PolySeries<S>> {
    let nvars = inner.len();
    let inner_dim = inner.first().map_or(0, |s| s.dim);
    for fi in f {
        assert_eq!(fi.dim, nvars, "series dimension mismatch");
        assert!(
            fi.min_order().is_none_or(|o| o >= 2),
            "outer series must have no terms of order < 2"
        );
    }
    for s in inner {
        assert_eq!(s.dim, inner_dim, "series dimension mismatch");
        assert!(
            s.min_order().is_none_or(|o| o >= 1),
            "inner series must have no constant term"
        );
    }

    // powers[j][e] = inner[j]^e, built up to the largest exponent any
    // monomial of f uses for variable j
    let mut max_exp = vec![0u32; nvars];
    for fi in f {
        for (m, _) in fi.terms() {
            for (j, &e) in m.exponents().iter().enumerate() {
                max_exp[j] = max_exp[j].max(e);
            }
        }
    }
    let one = PolySeries::monomial(inner_dim, n, MultiIndex::zero(inner_dim), S::one());
    let mut powers: Vec<Vec<PolySeries<S>>> = Vec::with_capacity(nvars);
    for (j, s) in inner.iter().enumerate() {
        let mut col = vec![one.clone()];
        for e in 1..=max_exp[j] {
            let p = series_multiply(&col[(e - 1) as usize], s, n);
            col.push(p);
        }
        powers.push(col);
    }

    // substitute each distinct monomial once, then distribute coefficients
    let mut products: BTreeMap<MultiIndex, PolySeries<S>> = BTreeMap::new();
    for fi in f {
        for (m, _) in fi.terms() {
            products.entry(m.clone()).or_insert_with(|| {
                let mut prod = one.clone();
                for (j, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        prod = series_multiply(&prod, &powers[j][e as usize], n);
                    }
                }
                prod
            });
        }
    }

    f.iter()
        .map(|fi| {
            let mut out = PolySeries::zero(inner_dim, n);
            for (m, c) in fi.terms() {
                let prod = &products[m];
                for (pm, pc) in prod.terms() {
                    out.add_term(pm.clone(), *c * *pc);
                }
            }
            out
        })
        .collect()
}

/// Keep exactly the coefficients whose index classifies into `class` under
/// the split at `d_s`. Idempotent.
pub fn filter<S: Scalar>(s: &PolySeries<S>, d_s: usize, class: IndexClass) -> PolySeries<S> {
    let mut out = PolySeries::zero(s.dim, s.trunc);
    for (m, c) in &s.coeffs {
        if m.classify(d_s) == class {
            out.coeffs.insert(m.clone(), *c);
        }
    }
    out
}

/// Interval vector guaranteed to contain the range of the polynomial over
/// the box (naive monomial-wise evaluation).
pub fn eval_enclosure<S: Scalar>(s: &PolySeries<S>, r#box: &[Interval]) -> Interval {
    assert_eq!(r#box.len(), s.dim);
    let mut acc = Interval::ZERO;
    for (m, c) in &s.coeffs {
        let mut term = c.to_interval();
        for (j, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                term = term * r#box[j].powi(e);
            }
        }
        acc = acc + term;
    }
    acc
}

/// All multi-indices of order `k` in `dim` variables, as series keys.
pub fn order_indices(dim: usize, k: u32) -> Vec<MultiIndex> {
    multi_indices(dim, k)
}
