use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::money::{Money, Rational};
use crate::valuations::{MeteredOracle, Valuation};

use super::{same_m, Allocation, MechanismError, Outcome};

/// Welfare-maximizing allocation by scanning all `m + 1` allocations; ties go
/// to the smaller `t`.
pub fn brute_force_opt(
    v1: &Valuation,
    v2: &Valuation,
) -> Result<(Allocation, Money), MechanismError> {
    let m = same_m(v1, v2)?;
    let mut best = (0, v1.at(0) + v2.at(m));
    for t in 1..=m {
        let w = v1.at(t) + v2.at(m - t);
        if w > best.1 {
            best = (t, w);
        }
    }
    Ok((Allocation::new(best.0, m).unwrap(), best.1))
}

/// The exact solver through black-box access: reads every value of both
/// bidders, `2(m + 1)` queries in total.
pub fn brute_force_from_oracles(
    o1: &mut MeteredOracle<'_>,
    o2: &mut MeteredOracle<'_>,
) -> Result<(Allocation, Money, u64), MechanismError> {
    let m = o1.m();
    if o2.m() != m {
        return Err(MechanismError::MismatchedM(m, o2.m()));
    }
    let before = o1.queries() + o2.queries();
    let first: Vec<Money> = (0..=m).map(|t| o1.value(t)).collect::<Result<_, _>>()?;
    let second: Vec<Money> = (0..=m).map(|t| o2.value(t)).collect::<Result<_, _>>()?;
    let mut best = (0, first[0] + second[m]);
    for t in 1..=m {
        let w = first[t] + second[m - t];
        if w > best.1 {
            best = (t, w);
        }
    }
    let queries = o1.queries() + o2.queries() - before;
    Ok((Allocation::new(best.0, m).unwrap(), best.1, queries))
}

/// VCG: optimal allocation, and each bidder is paid the other's realized
/// value, so every bidder's utility equals the optimal welfare.
pub fn vcg(v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError> {
    let (allocation, welfare) = brute_force_opt(v1, v2)?;
    let t = allocation.t();
    let m = allocation.m();
    Ok(Outcome {
        allocation,
        payments: [
            Rational::from_integer(i128::from(v2.at(m - t))),
            Rational::from_integer(i128::from(v1.at(t))),
        ],
        welfare,
    })
}

/// Range, bidder weights and per-allocation constants of an affine maximizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMaximizerSpec {
    range: Vec<usize>,
    weights: [Rational; 2],
    constants: BTreeMap<usize, Rational>,
}

impl AffineMaximizerSpec {
    /// `range` is deduplicated and sorted; `constants` must be keyed by
    /// exactly the range.
    pub fn new(
        mut range: Vec<usize>,
        weights: [Rational; 2],
        constants: BTreeMap<usize, Rational>,
    ) -> Result<Self, MechanismError> {
        range.sort_unstable();
        range.dedup();
        if range.is_empty() {
            return Err(MechanismError::EmptyRange);
        }
        let zero = Rational::from_integer(0);
        if weights.iter().any(|w| *w < zero) || weights.iter().all(|w| *w == zero) {
            return Err(MechanismError::BadWeights);
        }
        if constants.len() != range.len() || !range.iter().all(|t| constants.contains_key(t)) {
            return Err(MechanismError::ConstantsMismatch);
        }
        Ok(Self {
            range,
            weights,
            constants,
        })
    }

    /// Maximal-in-range: unit weights, zero constants.
    pub fn maximal_in_range(range: Vec<usize>) -> Result<Self, MechanismError> {
        let constants = range
            .iter()
            .map(|&t| (t, Rational::from_integer(0)))
            .collect();
        Self::new(range, [Rational::from_integer(1); 2], constants)
    }

    pub fn full_range(m: usize) -> Self {
        Self::maximal_in_range((0..=m).collect()).expect("non-empty range")
    }

    pub fn range(&self) -> &[usize] {
        &self.range
    }

    pub fn weights(&self) -> [Rational; 2] {
        self.weights
    }

    pub fn constants(&self) -> &BTreeMap<usize, Rational> {
        &self.constants
    }

    pub fn constant(&self, t: usize) -> Rational {
        self.constants[&t]
    }

    /// Whether the range contains every allocation of an `m`-item auction.
    pub fn is_full_range(&self, m: usize) -> bool {
        (0..=m).all(|t| self.range.binary_search(&t).is_ok())
    }

    /// `w1 v1(t) + w2 v2(m - t) + c_t`.
    pub fn objective(&self, v1: &Valuation, v2: &Valuation, t: usize) -> Rational {
        let m = v1.m();
        self.weights[0] * Rational::from_integer(i128::from(v1.at(t)))
            + self.weights[1] * Rational::from_integer(i128::from(v2.at(m - t)))
            + self.constant(t)
    }
}

/// Affine maximizer with weighted-VCG payments. Bidder 1 is paid
/// `(w2 v2(m - t) + c_t) / w1` (symmetrically for bidder 2); a zero-weight
/// bidder is paid nothing.
pub fn affine_maximizer(
    spec: &AffineMaximizerSpec,
    v1: &Valuation,
    v2: &Valuation,
) -> Result<Outcome, MechanismError> {
    let m = same_m(v1, v2)?;
    if let Some(&t) = spec.range.iter().find(|&&t| t > m) {
        return Err(MechanismError::RangeOutOfBounds { t, m });
    }
    let mut best: Option<(usize, Rational)> = None;
    for &t in &spec.range {
        let score = spec.objective(v1, v2, t);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((t, score));
        }
    }
    let (t, _) = best.expect("range is non-empty");
    let [w1, w2] = spec.weights;
    let zero = Rational::from_integer(0);
    let c = spec.constant(t);
    let x1 = Rational::from_integer(i128::from(v1.at(t)));
    let x2 = Rational::from_integer(i128::from(v2.at(m - t)));
    let pay1 = if w1 > zero { (w2 * x2 + c) / w1 } else { zero };
    let pay2 = if w2 > zero { (w1 * x1 + c) / w2 } else { zero };
    let allocation = Allocation::new(t, m).unwrap();
    Ok(Outcome {
        allocation,
        payments: [pay1, pay2],
        welfare: allocation.welfare(v1, v2),
    })
}
