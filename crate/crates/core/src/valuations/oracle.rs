use crate::money::Money;

use super::{Valuation, ValuationError};

/// Black-box access to a valuation that counts every value query.
///
/// The spike index is readable for free: it is part of what the bidder knows
/// about himself when he builds a report.
#[derive(Debug)]
pub struct MeteredOracle<'a> {
    valuation: &'a Valuation,
    queries: u64,
}

impl<'a> MeteredOracle<'a> {
    pub fn new(valuation: &'a Valuation) -> Self {
        Self {
            valuation,
            queries: 0,
        }
    }

    pub fn m(&self) -> usize {
        self.valuation.m()
    }

    pub fn spike(&self) -> usize {
        self.valuation.spike()
    }

    /// Queries `v(t)`, charging exactly one query when `t` is in range.
    pub fn value(&mut self, t: usize) -> Result<Money, ValuationError> {
        let v = self.valuation.get(t).ok_or(ValuationError::BadIndex {
            t,
            m: self.valuation.m(),
        })?;
        self.queries += 1;
        Ok(v)
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn counts_each_query_once() {
        let v = Valuation::new(4, vec![0, 1, 5, 2, 3], 2).unwrap();
        let mut o = MeteredOracle::new(&v);
        assert_eq!(o.queries(), 0);
        assert_eq!(o.value(2).unwrap(), 5);
        assert_eq!(o.queries(), 1);
        assert_eq!(o.value(0).unwrap(), 0);
        assert_eq!(o.value(0).unwrap(), 0);
        assert_eq!(o.queries(), 3);
        assert_eq!(o.spike(), 2);
        assert_eq!(o.queries(), 3);
    }

    #[test]
    fn out_of_range_is_an_error_and_free() {
        let v = Valuation::zero(3, 1).unwrap();
        let mut o = MeteredOracle::new(&v);
        assert_eq!(o.value(4), Err(ValuationError::BadIndex { t: 4, m: 3 }));
        assert_eq!(o.queries(), 0);
    }
}
