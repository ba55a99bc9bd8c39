use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::mechanisms::Mechanism;
use crate::valuations::Valuation;

use super::diffcon::{solve, Constraint};
use super::HarnessError;

/// Prices bidder 1 faces for each bundle size `t = 0..=m`, as induced by a
/// fixed opponent report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceMenu {
    prices: Vec<i128>,
}

impl PriceMenu {
    pub fn new(prices: Vec<i128>) -> Self {
        Self { prices }
    }

    pub fn prices(&self) -> &[i128] {
        &self.prices
    }

    /// Profit of taking `t` items at this menu.
    pub fn profit(&self, v1: &Valuation, t: usize) -> i128 {
        i128::from(v1.at(t)) - self.prices[t]
    }

    /// Whether picking `t` maximizes `v1(s) - price(s)`.
    pub fn rationalizes(&self, v1: &Valuation, t: usize) -> bool {
        let chosen = self.profit(v1, t);
        (0..self.prices.len()).all(|s| self.profit(v1, s) <= chosen)
    }
}

/// One revealed-preference constraint
/// `price(chosen) - price(alternative) <= v1(chosen) - v1(alternative)`,
/// contributed by probe number `probe`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MenuConstraint {
    pub chosen: usize,
    pub alternative: usize,
    pub bound: i128,
    pub probe: usize,
}

/// A cycle of constraints whose bounds sum to a negative number: no menu
/// can explain the observed choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub cycle: Vec<MenuConstraint>,
    pub total: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MenuVerdict {
    Feasible(PriceMenu),
    Inconsistent(Inconsistency),
}

impl MenuVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, MenuVerdict::Feasible(_))
    }
}

/// Runs `mech` on each probe against `v2_fixed` and asks whether a single
/// price menu explains all of bidder 1's outcomes.
pub fn extract_price_menu(
    mech: &dyn Mechanism,
    v2_fixed: &Valuation,
    probes: &[Valuation],
) -> Result<MenuVerdict, HarnessError> {
    let m = v2_fixed.m();
    let mut observations = Vec::with_capacity(probes.len());
    for p in probes {
        if p.m() != m {
            return Err(HarnessError::MismatchedM(p.m(), m));
        }
        let outcome = mech.run(p, v2_fixed)?;
        observations.push((p.clone(), outcome.allocation.t()));
    }
    Ok(menu_from_choices(m, &observations))
}

/// The difference-constraint core of [`extract_price_menu`], on explicit
/// `(probe, chosen t)` pairs.
///
/// A feasible menu is normalized so the smallest chosen `t` costs 0; bundles
/// never chosen are priced out above every probe's value.
pub fn menu_from_choices(m: usize, observations: &[(Valuation, usize)]) -> MenuVerdict {
    // Tightest bound per (alternative -> chosen) edge.
    let mut tightest: BTreeMap<(usize, usize), MenuConstraint> = BTreeMap::new();
    for (probe, (v1, chosen)) in observations.iter().enumerate() {
        let chosen = *chosen;
        for alternative in (0..=m).filter(|&s| s != chosen) {
            let bound = i128::from(v1.at(chosen)) - i128::from(v1.at(alternative));
            let c = MenuConstraint {
                chosen,
                alternative,
                bound,
                probe,
            };
            tightest
                .entry((alternative, chosen))
                .and_modify(|e| {
                    if bound < e.bound {
                        *e = c;
                    }
                })
                .or_insert(c);
        }
    }
    let menu_constraints: Vec<MenuConstraint> = tightest.into_values().collect();
    let edges: Vec<Constraint<i128>> = menu_constraints
        .iter()
        .map(|c| Constraint {
            from: c.alternative,
            to: c.chosen,
            bound: c.bound,
        })
        .collect();

    match solve(m + 1, &edges, 0i128) {
        Err(cycle) => {
            let cycle: Vec<MenuConstraint> =
                cycle.into_iter().map(|i| menu_constraints[i]).collect();
            let total = cycle.iter().map(|c| c.bound).sum();
            MenuVerdict::Inconsistent(Inconsistency { cycle, total })
        }
        Ok(mut prices) => {
            let mut chosen: Vec<usize> = observations.iter().map(|&(_, t)| t).collect();
            chosen.sort_unstable();
            chosen.dedup();
            if let Some(&base) = chosen.first() {
                let shift = prices[base];
                prices.iter_mut().for_each(|p| *p -= shift);
                let top_price = chosen.iter().map(|&t| prices[t]).max().unwrap();
                let top_value = observations
                    .iter()
                    .flat_map(|(v, _)| v.values().iter().copied())
                    .max()
                    .unwrap_or(0);
                let priced_out = top_price + i128::from(top_value) + 1;
                for (t, p) in prices.iter_mut().enumerate() {
                    if chosen.binary_search(&t).is_err() {
                        *p = priced_out;
                    }
                }
            }
            MenuVerdict::Feasible(PriceMenu { prices })
        }
    }
}
