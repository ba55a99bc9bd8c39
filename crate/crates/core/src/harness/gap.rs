use crate::mechanisms::{affine_maximizer, brute_force_opt, AffineMaximizerSpec};
use crate::money::Money;
use crate::valuations::{spike_instance, Valuation};

use super::HarnessError;

/// A spike instance on which a non-full-range maximizer collapses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapDemo {
    pub m: usize,
    /// The allocation `(missing, m - missing)` absent from the range.
    pub missing: usize,
    pub v1: Valuation,
    pub v2: Valuation,
    pub chosen: usize,
    pub mir_welfare: Money,
    pub opt_welfare: Money,
}

/// Builds the spike instance at an allocation missing from `spec`'s range
/// (the smallest interior one if any, else an endpoint) and runs the
/// maximizer on it. Its welfare is 0; the optimum is `2 * height` (or
/// `height` at an endpoint).
pub fn range_gap_demo(
    spec: &AffineMaximizerSpec,
    m: usize,
    height: Money,
) -> Result<GapDemo, HarnessError> {
    let missing = |t: &usize| spec.range().binary_search(t).is_err();
    let t = (1..m)
        .find(missing)
        .or_else(|| [0, m].into_iter().find(missing))
        .ok_or(HarnessError::FullRange)?;
    let (v1, v2) = spike_instance(m, t, height)?;
    let outcome = affine_maximizer(spec, &v1, &v2)?;
    let (_, opt_welfare) = brute_force_opt(&v1, &v2)?;
    Ok(GapDemo {
        m,
        missing: t,
        chosen: outcome.allocation.t(),
        mir_welfare: outcome.welfare,
        v1,
        v2,
        opt_welfare,
    })
}
