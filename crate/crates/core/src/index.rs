//! Multi-indices and their stable/unstable/mixed classification.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial. Ordered graded-lexicographically, so a
/// `BTreeMap` keyed by `MultiIndex` iterates order by order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

/// Partition of the indices of order >= 2: pure stable, pure unstable, mixed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum IndexClass {
    /// No unstable exponents.
    Stable,
    /// No stable exponents.
    Unstable,
    /// At least one exponent on each side.
    Mixed,
}

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> MultiIndex {
        MultiIndex { exps }
    }

    pub fn zero(dim: usize) -> MultiIndex {
        MultiIndex {
            exps: vec![0; dim],
        }
    }

    /// The i-th unit index e_i.
    pub fn unit(dim: usize, i: usize) -> MultiIndex {
        let mut exps = vec![0; dim];
        exps[i] = 1;
        MultiIndex { exps }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Total degree |m|.
    pub fn order(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// |m_s|: total degree of the first `d_s` exponents.
    pub fn order_stable(&self, d_s: usize) -> u32 {
        self.exps[..d_s].iter().sum()
    }

    /// |m_u|: total degree of the remaining exponents.
    pub fn order_unstable(&self, d_s: usize) -> u32 {
        self.exps[d_s..].iter().sum()
    }

    /// Classify with respect to the stable/unstable split at `d_s`. Total and
    /// exclusive for |m| >= 2; an all-zero index lands in `Stable`.
    pub fn classify(&self, d_s: usize) -> IndexClass {
        let mu = self.order_unstable(d_s);
        let ms = self.order_stable(d_s);
        if ms >= 1 && mu >= 1 {
            IndexClass::Mixed
        } else if mu == 0 {
            IndexClass::Stable
        } else {
            IndexClass::Unstable
        }
    }

    /// Index with the j-th exponent reduced by one (derivative shift).
    pub fn decremented(&self, j: usize) -> Option<MultiIndex> {
        if self.exps[j] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[j] -= 1;
        Some(MultiIndex { exps })
    }

    /// Embed into a larger space: exponents placed at `offset`, zeros
    /// elsewhere.
    pub fn embedded(&self, dim: usize, offset: usize) -> MultiIndex {
        let mut exps = vec![0; dim];
        exps[offset..offset + self.exps.len()].copy_from_slice(&self.exps);
        MultiIndex { exps }
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{:?}", self.exps)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of d-dimensional multi-indices of order k: binom(k+d-1, d-1).
pub fn mindex_count(d: usize, k: u32) -> u64 {
    assert!(d >= 1, "dimension must be positive");
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for j in 1..=(d as u128 - 1) {
        num *= k as u128 + j;
        den *= j;
    }
    (num / den) as u64
}

/// All multi-indices of the given dimension and order, in lexicographic
/// order of exponents (hence sorted as `MultiIndex`).
pub fn multi_indices(dim: usize, order: u32) -> Vec<MultiIndex> {
    fn rec(dim: usize, order: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if dim == 1 {
            prefix.push(order);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=order {
            prefix.push(e);
            rec(dim - 1, order - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(mindex_count(dim, order) as usize);
    rec(dim, order, &mut Vec::with_capacity(dim), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn count_matches_examples() {
        assert_eq!(mindex_count(1, 7), 1);
        assert_eq!(mindex_count(2, 2), 3); // (2,0),(1,1),(0,2)
        // exhaustive enumeration oracle for d=3, k=2
        let mut n = 0;
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    if a + b + c == 2 {
                        n += 1;
                    }
                }
            }
        }
        assert_eq!(n, 6);
        assert_eq!(mindex_count(3, 2), 6);
    }

    #[test]
    fn enumeration_agrees_with_count() {
        for d in 1..=4usize {
            for k in 0..=6u32 {
                let all = multi_indices(d, k);
                assert_eq!(all.len() as u64, mindex_count(d, k));
                assert!(all.iter().all(|m| m.order() == k));
                let mut sorted = all.clone();
                sorted.sort();
                assert_eq!(sorted, all);
            }
        }
    }

    #[test]
    fn classification_examples() {
        let ds = 1;
        assert_eq!(MultiIndex::new(vec![2, 0]).classify(ds), IndexClass::Stable);
        assert_eq!(MultiIndex::new(vec![1, 1]).classify(ds), IndexClass::Mixed);
        assert_eq!(
            MultiIndex::new(vec![0, 2]).classify(ds),
            IndexClass::Unstable
        );
    }

    proptest! {
        #[test]
        fn classification_is_total_and_exclusive(
            exps in proptest::collection::vec(0u32..5, 2..6),
            split in 1usize..5,
        ) {
            let m = MultiIndex::new(exps);
            prop_assume!(m.order() >= 2);
            let ds = split.min(m.dim() - 1);
            let class = m.classify(ds);
            let ms = m.order_stable(ds);
            let mu = m.order_unstable(ds);
            let expect = if ms >= 1 && mu >= 1 {
                IndexClass::Mixed
            } else if mu == 0 {
                IndexClass::Stable
            } else {
                IndexClass::Unstable
            };
            prop_assert_eq!(class, expect);
            // exactly one class matches
            let matches = [IndexClass::Stable, IndexClass::Unstable, IndexClass::Mixed]
                .iter()
                .filter(|&&c| c == class)
                .count();
            prop_assert_eq!(matches, 1);
        }

        #[test]
        fn graded_order_sorts_by_degree_first(
            a in proptest::collection::vec(0u32..5, 3),
            b in proptest::collection::vec(0u32..5, 3),
        ) {
            let ma = MultiIndex::new(a);
            let mb = MultiIndex::new(b);
            if ma.order() < mb.order() {
                prop_assert!(ma < mb);
            }
        }
    }
}
