use alloc::vec;
use alloc::vec::Vec;

use crate::money::{Money, MAX_VALUE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValuationError {
    #[error("value table has {got} entries, expected m+1 = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("v(0) = {0}, valuations must be normalized")]
    NotNormalized(Money),
    #[error("monotone chain violated: v({next}) = {next_value} < v({index}) = {value}")]
    ChainViolation {
        index: usize,
        value: Money,
        next: usize,
        next_value: Money,
    },
    #[error("spike index {k} outside 1..={m}")]
    BadSpikeIndex { k: usize, m: usize },
    #[error("v({index}) = {value} exceeds the maximum value {MAX_VALUE}")]
    ValueTooLarge { index: usize, value: Money },
    #[error("index {t} outside 0..={m}")]
    BadIndex { t: usize, m: usize },
    #[error("spike height must be in 1..={MAX_VALUE}, got {0}")]
    BadHeight(Money),
}

/// A bidder's private type: `v(0..=m)` plus the spike index `k`.
///
/// Removing index `k`, the table is non-decreasing in `t`; `v(k)` may be
/// anything. `v(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Valuation {
    values: Vec<Money>,
    spike: usize,
}

impl Valuation {
    pub fn new(m: usize, values: Vec<Money>, k: usize) -> Result<Self, ValuationError> {
        if values.len() != m + 1 {
            return Err(ValuationError::LengthMismatch {
                expected: m + 1,
                got: values.len(),
            });
        }
        if k == 0 || k > m {
            return Err(ValuationError::BadSpikeIndex { k, m });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v > MAX_VALUE) {
            return Err(ValuationError::ValueTooLarge { index, value });
        }
        if values[0] != 0 {
            return Err(ValuationError::NotNormalized(values[0]));
        }
        let mut prev: Option<usize> = None;
        for t in (1..=m).filter(|&t| t != k) {
            if let Some(p) = prev {
                if values[t] < values[p] {
                    return Err(ValuationError::ChainViolation {
                        index: p,
                        value: values[p],
                        next: t,
                        next_value: values[t],
                    });
                }
            }
            prev = Some(t);
        }
        Ok(Self { values, spike: k })
    }

    /// The valuation that is zero everywhere.
    pub fn zero(m: usize, k: usize) -> Result<Self, ValuationError> {
        Self::new(m, vec![0; m + 1], k)
    }

    pub fn m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn spike(&self) -> usize {
        self.spike
    }

    pub fn values(&self) -> &[Money] {
        &self.values
    }

    /// Unmetered table read. Panics when `t > m`.
    pub fn at(&self, t: usize) -> Money {
        self.values[t]
    }

    pub fn get(&self, t: usize) -> Option<Money> {
        self.values.get(t).copied()
    }

    /// `(t*, v(t*))` maximizing `v`; ties go to the larger `t`.
    pub fn global_max(&self) -> (usize, Money) {
        let mut best = (0, self.values[0]);
        for (t, &v) in self.values.iter().enumerate().skip(1) {
            if v >= best.1 {
                best = (t, v);
            }
        }
        best
    }

    /// Chain positions `1..=m` with the spike removed, in increasing order.
    pub fn chain_positions(&self) -> impl Iterator<Item = usize> + '_ {
        let k = self.spike;
        (1..=self.m()).filter(move |&t| t != k)
    }

    /// Every entry multiplied by `factor`. `None` on overflow past
    /// [`MAX_VALUE`].
    pub fn scaled(&self, factor: Money) -> Option<Self> {
        let values = self
            .values
            .iter()
            .map(|&v| v.checked_mul(factor).filter(|&x| x <= MAX_VALUE))
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            values,
            spike: self.spike,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn accepts_spec_examples() {
        let v = Valuation::new(4, vec![0, 1, 5, 2, 3], 2).unwrap();
        assert_eq!(v.m(), 4);
        assert_eq!(v.spike(), 2);
        assert!(Valuation::new(1, vec![0, 7], 1).is_ok());
    }

    #[test]
    fn reports_first_chain_violation() {
        let err = Valuation::new(3, vec![0, 5, 1, 2], 3).unwrap_err();
        assert_eq!(
            err,
            ValuationError::ChainViolation {
                index: 1,
                value: 5,
                next: 2,
                next_value: 1
            }
        );
    }

    #[test]
    fn rejects_malformed_tables() {
        assert_eq!(
            Valuation::new(2, vec![1, 1, 1], 1).unwrap_err(),
            ValuationError::NotNormalized(1)
        );
        assert_eq!(
            Valuation::new(2, vec![0, 1, 1], 3).unwrap_err(),
            ValuationError::BadSpikeIndex { k: 3, m: 2 }
        );
        assert_eq!(
            Valuation::new(2, vec![0, 1, 1], 0).unwrap_err(),
            ValuationError::BadSpikeIndex { k: 0, m: 2 }
        );
        assert!(matches!(
            Valuation::new(2, vec![0, 1], 1).unwrap_err(),
            ValuationError::LengthMismatch {
                expected: 3,
                got: 2
            }
        ));
        assert!(matches!(
            Valuation::new(1, vec![0, MAX_VALUE + 1], 1).unwrap_err(),
            ValuationError::ValueTooLarge { index: 1, .. }
        ));
        assert!(Valuation::new(0, vec![0], 1).is_err());
    }

    #[test]
    fn spike_at_either_end() {
        // k = m: chain ends at v(m-1).
        assert!(Valuation::new(3, vec![0, 1, 2, 0], 3).is_ok());
        // k = 1: chain starts at v(2).
        assert!(Valuation::new(3, vec![0, 9, 2, 3], 1).is_ok());
        assert!(Valuation::new(3, vec![0, 9, 3, 2], 1).is_err());
    }

    #[test]
    fn spike_at_m_can_sit_below_the_chain() {
        let v = Valuation::new(3, vec![0, 2, 210, 143], 3).unwrap();
        assert_eq!(v.global_max(), (2, 210));
    }

    #[test]
    fn global_max_breaks_ties_upward() {
        let v = Valuation::new(4, vec![0, 1, 5, 2, 3], 2).unwrap();
        assert_eq!(v.global_max(), (2, 5));
        let v = Valuation::new(2, vec![0, 1, 1], 1).unwrap();
        assert_eq!(v.global_max(), (2, 1));
        let v = Valuation::zero(5, 3).unwrap();
        assert_eq!(v.global_max(), (5, 0));
    }

    /// Direct statement of the three invariants, independent of `new`.
    fn satisfies_invariants(m: usize, values: &[Money], k: usize) -> bool {
        if values.len() != m + 1 || k < 1 || k > m || values[0] != 0 {
            return false;
        }
        let chain: Vec<Money> = (1..=m).filter(|&t| t != k).map(|t| values[t]).collect();
        chain.windows(2).all(|w| w[0] <= w[1])
    }

    proptest! {
        #[test]
        fn validator_matches_direct_definition(
            m in 1usize..7,
            raw in proptest::collection::vec(0u64..5, 1..9),
            k in 0usize..8,
        ) {
            let accepted = Valuation::new(m, raw.clone(), k).is_ok();
            prop_assert_eq!(accepted, satisfies_invariants(m, &raw, k));
        }

        #[test]
        fn maximum_is_top_of_chain_or_spike(
            m in 1usize..30,
            vmax in 0u64..1000,
            seed in any::<u64>(),
        ) {
            let v = crate::valuations::gen_random(m, vmax, seed);
            let (t, best) = v.global_max();
            // With k = m the chain tops out at m - 1.
            let top = if v.spike() == m { m - 1 } else { m };
            prop_assert_eq!(best, v.at(top).max(v.at(v.spike())));
            prop_assert_eq!(v.at(t), best);
        }
    }
}
