use alloc::vec::Vec;

use crate::money::{Epsilon, Money, RoundingGrid};

use super::{MeteredOracle, ValuationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("spike index {k} outside 1..={m}")]
    BadSpike { k: usize, m: usize },
    #[error("breakpoint index {t} outside 1..={m}")]
    BreakpointOutOfRange { t: usize, m: usize },
    #[error("breakpoint at the spike index {0}")]
    BreakpointAtSpike(usize),
    #[error("breakpoint indices must strictly increase (at {0})")]
    UnorderedBreakpoints(usize),
    #[error("breakpoint levels must be nonzero and strictly increase (at index {0})")]
    NonIncreasingLevels(usize),
    #[error("value {value} is not on the (1+{eps}) rounding grid")]
    OffGrid { value: Money, eps: Epsilon },
}

/// The FPTAS message of one bidder: the rounded monotone chain as a step
/// function (one entry per level change) plus the rounded spike.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactReport {
    m: usize,
    eps: Epsilon,
    breakpoints: Vec<(usize, Money)>,
    spike: (usize, Money),
}

impl CompactReport {
    /// Validates a report received from outside (e.g. parsed from JSON).
    pub fn new(
        m: usize,
        eps: Epsilon,
        breakpoints: Vec<(usize, Money)>,
        spike: (usize, Money),
    ) -> Result<Self, ReportError> {
        if spike.0 == 0 || spike.0 > m {
            return Err(ReportError::BadSpike { k: spike.0, m });
        }
        let mut grid = RoundingGrid::new(eps);
        let mut prev: Option<(usize, Money)> = None;
        for &(t, level) in &breakpoints {
            if t == 0 || t > m {
                return Err(ReportError::BreakpointOutOfRange { t, m });
            }
            if t == spike.0 {
                return Err(ReportError::BreakpointAtSpike(t));
            }
            if let Some((pt, pl)) = prev {
                if t <= pt {
                    return Err(ReportError::UnorderedBreakpoints(t));
                }
                if level <= pl {
                    return Err(ReportError::NonIncreasingLevels(t));
                }
            }
            if level == 0 {
                return Err(ReportError::NonIncreasingLevels(t));
            }
            if !grid.contains(level) {
                return Err(ReportError::OffGrid { value: level, eps });
            }
            prev = Some((t, level));
        }
        if !grid.contains(spike.1) {
            return Err(ReportError::OffGrid {
                value: spike.1,
                eps,
            });
        }
        Ok(Self {
            m,
            eps,
            breakpoints,
            spike,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eps(&self) -> Epsilon {
        self.eps
    }

    pub fn breakpoints(&self) -> &[(usize, Money)] {
        &self.breakpoints
    }

    pub fn spike(&self) -> (usize, Money) {
        self.spike
    }

    /// Step evaluation: the spike's level at `k`, otherwise the level of the
    /// last breakpoint `<= t` (0 before the first one).
    pub fn value(&self, t: usize) -> Result<Money, ValuationError> {
        if t > self.m {
            return Err(ValuationError::BadIndex { t, m: self.m });
        }
        if t == self.spike.0 {
            return Ok(self.spike.1);
        }
        let idx = self.breakpoints.partition_point(|&(bt, _)| bt <= t);
        Ok(if idx == 0 {
            0
        } else {
            self.breakpoints[idx - 1].1
        })
    }

    /// Distinct rounded levels on the chain, counting level 0 when the chain
    /// starts there.
    pub fn distinct_levels(&self) -> usize {
        let first_chain = if self.spike.0 == 1 { 2 } else { 1 };
        if first_chain > self.m {
            return 0;
        }
        let zero_level = self
            .breakpoints
            .first()
            .is_none_or(|&(t, _)| t != first_chain);
        self.breakpoints.len() + usize::from(zero_level)
    }

    /// Upper bound on the oracle queries [`compactify`] spends on this report.
    pub fn query_bound(&self) -> u64 {
        query_bound(self.m, self.distinct_levels())
    }
}

pub fn ceil_log2(m: usize) -> u32 {
    if m <= 1 {
        0
    } else {
        usize::BITS - (m - 1).leading_zeros()
    }
}

/// `(B + 1) * (ceil(log2 m) + 2) + 2`.
pub fn query_bound(m: usize, levels: usize) -> u64 {
    (levels as u64 + 1) * (u64::from(ceil_log2(m)) + 2) + 2
}

/// Builds the compact report by binary-searching each level boundary of the
/// rounded chain, then rounding the spike. Returns the report and the number
/// of oracle queries it spent.
///
/// Probes never land on the spike: the search runs over chain positions,
/// i.e. `1..=m` with `k` removed.
pub fn compactify(oracle: &mut MeteredOracle<'_>, eps: Epsilon) -> (CompactReport, u64) {
    let start = oracle.queries();
    let m = oracle.m();
    let k = oracle.spike();
    let mut grid = RoundingGrid::new(eps);
    let n = m - 1;
    let position = |j: usize| if j + 1 < k { j + 1 } else { j + 2 };
    let mut level_at = |oracle: &mut MeteredOracle<'_>, j: usize| -> Money {
        let v = oracle
            .value(position(j))
            .expect("chain positions are in range");
        grid.round_down(v)
    };

    let mut breakpoints = Vec::new();
    if n > 0 {
        let mut current = 0;
        let mut level = level_at(oracle, 0);
        if level > 0 {
            breakpoints.push((position(0), level));
        }
        loop {
            // First chain slot after `current` whose level exceeds `level`.
            let (mut lo, mut hi) = (current + 1, n);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if level_at(oracle, mid) > level {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            if lo == n {
                break;
            }
            current = lo;
            level = level_at(oracle, lo);
            breakpoints.push((position(lo), level));
        }
    }

    let spike_value = oracle.value(k).expect("spike index is in range");
    let spike = (k, grid.round_down(spike_value));
    let report = CompactReport {
        m,
        eps,
        breakpoints,
        spike,
    };
    (report, oracle.queries() - start)
}
