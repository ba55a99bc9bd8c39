use alloc::vec::Vec;

use crate::money::{Epsilon, Money, Rational};
use crate::valuations::{compactify, CompactReport, MeteredOracle};

use super::{Allocation, MechanismError, Outcome};

/// Allocations worth evaluating on two compact reports.
///
/// The reported welfare `r1(t) + r2(m - t)` is piecewise constant, with
/// bidder 1's part changing only at his breakpoints and at `k1, k1 + 1`, and
/// bidder 2's part non-increasing in `t` away from `m - k2`. So the maximum
/// over all `t` is attained on bidder 1's change points or at `m - k2` /
/// `m - k2 + 1`. Bidder 2's breakpoints are included for symmetry.
pub fn candidate_allocations(r1: &CompactReport, r2: &CompactReport) -> Vec<usize> {
    let m = r1.m();
    let (k1, _) = r1.spike();
    let (k2, _) = r2.spike();
    let mut ts: Vec<usize> =
        Vec::with_capacity(r1.breakpoints().len() + r2.breakpoints().len() + 6);
    ts.extend([0, m, k1, k1 + 1, m - k2, m - k2 + 1]);
    ts.extend(r1.breakpoints().iter().map(|&(t, _)| t));
    ts.extend(r2.breakpoints().iter().map(|&(s, _)| m - s));
    ts.retain(|&t| t <= m);
    ts.sort_unstable();
    ts.dedup();
    ts
}

/// Exhaustive search over [`candidate_allocations`] using reported values
/// only. Returns the chosen allocation and its *reported* welfare; ties go
/// to the smaller `t`.
pub fn fptas(
    r1: &CompactReport,
    r2: &CompactReport,
) -> Result<(Allocation, Money), MechanismError> {
    let m = r1.m();
    if r2.m() != m {
        return Err(MechanismError::MismatchedM(m, r2.m()));
    }
    if r1.eps() != r2.eps() {
        return Err(MechanismError::MismatchedEps(r1.eps(), r2.eps()));
    }
    let mut best: Option<(usize, Money)> = None;
    for t in candidate_allocations(r1, r2) {
        let w = r1.value(t)? + r2.value(m - t)?;
        if best.is_none_or(|(_, b)| w > b) {
            best = Some((t, w));
        }
    }
    let (t, w) = best.expect("0 is always a candidate");
    Ok((Allocation::new(t, m).unwrap(), w))
}

/// Result of running the FPTAS end to end through metered oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptasRun {
    pub allocation: Allocation,
    pub reported_welfare: Money,
    pub queries: u64,
}

/// Both bidders compactify, then [`fptas`] runs on the two reports.
pub fn fptas_from_oracles(
    o1: &mut MeteredOracle<'_>,
    o2: &mut MeteredOracle<'_>,
    eps: Epsilon,
) -> Result<FptasRun, MechanismError> {
    if o1.m() != o2.m() {
        return Err(MechanismError::MismatchedM(o1.m(), o2.m()));
    }
    let (r1, q1) = compactify(o1, eps);
    let (r2, q2) = compactify(o2, eps);
    let (allocation, reported_welfare) = fptas(&r1, &r2)?;
    Ok(FptasRun {
        allocation,
        reported_welfare,
        queries: q1 + q2,
    })
}

/// FPTAS allocation with VCG payments computed at the approximate
/// allocation. Not truthful: the harness finds profitable misreports.
pub fn naive_vcg_fptas(
    o1: &mut MeteredOracle<'_>,
    o2: &mut MeteredOracle<'_>,
    eps: Epsilon,
) -> Result<Outcome, MechanismError> {
    let run = fptas_from_oracles(o1, o2, eps)?;
    let t = run.allocation.t();
    let m = run.allocation.m();
    let x1 = o1.value(t)?;
    let x2 = o2.value(m - t)?;
    Ok(Outcome {
        allocation: run.allocation,
        payments: [
            Rational::from_integer(i128::from(x2)),
            Rational::from_integer(i128::from(x1)),
        ],
        welfare: x1 + x2,
    })
}
