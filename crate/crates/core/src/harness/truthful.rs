use alloc::string::String;
use alloc::vec::Vec;

use crate::mechanisms::{Bidder, Mechanism, MechanismError, Outcome, RandomizedMechanism};
use crate::money::{Money, Rational};
use crate::rng;
use crate::valuations::{gen_random_with, Valuation};

use super::grid::{enumerate_valuations, grid_size};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every (opponent report, true type, misreport) triple of the grid.
    Exhaustive,
    /// `trials` random triples per bidder, from independent streams of `seed`.
    Sampled { seed: u64, trials: u64 },
}

/// Instance space and search mode of a truthfulness check.
#[derive(Debug, Clone)]
pub struct TruthCheck {
    pub m: usize,
    pub vmax: Money,
    pub mode: CheckMode,
    /// Largest per-bidder grid the exhaustive mode will enumerate.
    pub max_grid: usize,
}

impl TruthCheck {
    pub const DEFAULT_MAX_GRID: usize = 64;

    pub fn exhaustive(m: usize, vmax: Money) -> Self {
        Self {
            m,
            vmax,
            mode: CheckMode::Exhaustive,
            max_grid: Self::DEFAULT_MAX_GRID,
        }
    }

    pub fn sampled(m: usize, vmax: Money, seed: u64, trials: u64) -> Self {
        Self {
            m,
            vmax,
            mode: CheckMode::Sampled { seed, trials },
            max_grid: Self::DEFAULT_MAX_GRID,
        }
    }
}

/// A profitable misreport: with the others reporting `v1`/`v2` as given,
/// `deviator` (whose true type is his entry in the instance) does strictly
/// better reporting `misreport`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationWitness {
    pub mechanism: String,
    pub v1: Valuation,
    pub v2: Valuation,
    pub deviator: Bidder,
    pub misreport: Valuation,
    pub utility_truth: Rational,
    pub utility_lie: Rational,
}

impl DeviationWitness {
    pub fn truth(&self) -> &Valuation {
        match self.deviator {
            Bidder::One => &self.v1,
            Bidder::Two => &self.v2,
        }
    }

    pub fn gain(&self) -> Rational {
        self.utility_lie - self.utility_truth
    }
}

fn run_as(
    mech: &dyn Mechanism,
    bidder: Bidder,
    own: &Valuation,
    other: &Valuation,
) -> Result<Outcome, MechanismError> {
    match bidder {
        Bidder::One => mech.run(own, other),
        Bidder::Two => mech.run(other, own),
    }
}

/// Re-executes a witness; `true` when the lie still strictly beats the truth.
pub fn replay(mech: &dyn Mechanism, w: &DeviationWitness) -> Result<bool, MechanismError> {
    let b = w.deviator;
    let other = match b {
        Bidder::One => &w.v2,
        Bidder::Two => &w.v1,
    };
    let truth = w.truth();
    let honest = run_as(mech, b, truth, other)?.utility(b, truth);
    let lying = run_as(mech, b, &w.misreport, other)?.utility(b, truth);
    Ok(lying > honest && honest == w.utility_truth && lying == w.utility_lie)
}

fn witness(
    mech: &dyn Mechanism,
    b: Bidder,
    truth: &Valuation,
    other: &Valuation,
    lie: &Valuation,
    utility_truth: Rational,
    utility_lie: Rational,
) -> DeviationWitness {
    let (v1, v2) = match b {
        Bidder::One => (truth.clone(), other.clone()),
        Bidder::Two => (other.clone(), truth.clone()),
    };
    DeviationWitness {
        mechanism: mech.name(),
        v1,
        v2,
        deviator: b,
        misreport: lie.clone(),
        utility_truth,
        utility_lie,
    }
}

/// Searches for profitable unilateral misreports. Utilities are
/// `v_true(share) + payment`. In exhaustive mode an empty result certifies
/// dominant-strategy truthfulness over the whole grid.
pub fn check_truthful(
    mech: &dyn Mechanism,
    cfg: &TruthCheck,
) -> Result<Vec<DeviationWitness>, HarnessError> {
    match cfg.mode {
        CheckMode::Exhaustive => exhaustive(mech, cfg),
        CheckMode::Sampled { seed, trials } => sampled(mech, cfg, seed, trials),
    }
}

fn exhaustive(
    mech: &dyn Mechanism,
    cfg: &TruthCheck,
) -> Result<Vec<DeviationWitness>, HarnessError> {
    let size = grid_size(cfg.m, cfg.vmax);
    if size > cfg.max_grid as u128 {
        return Err(HarnessError::GridTooLarge {
            size,
            cap: cfg.max_grid,
        });
    }
    let grid = enumerate_valuations(cfg.m, cfg.vmax);
    let n = grid.len();
    // outcomes[i * n + j] = f(grid[i], grid[j]).
    let mut outcomes = Vec::with_capacity(n * n);
    for a in &grid {
        for b in &grid {
            outcomes.push(mech.run(a, b)?);
        }
    }
    let at = |b: Bidder, own: usize, other: usize| -> &Outcome {
        match b {
            Bidder::One => &outcomes[own * n + other],
            Bidder::Two => &outcomes[other * n + own],
        }
    };

    let mut found = Vec::new();
    for b in Bidder::BOTH {
        for other in 0..n {
            for truth in 0..n {
                let honest = at(b, truth, other).utility(b, &grid[truth]);
                for lie in (0..n).filter(|&l| l != truth) {
                    let lying = at(b, lie, other).utility(b, &grid[truth]);
                    if lying > honest {
                        found.push(witness(
                            mech,
                            b,
                            &grid[truth],
                            &grid[other],
                            &grid[lie],
                            honest,
                            lying,
                        ));
                    }
                }
            }
        }
    }
    Ok(found)
}

fn sampled(
    mech: &dyn Mechanism,
    cfg: &TruthCheck,
    seed: u64,
    trials: u64,
) -> Result<Vec<DeviationWitness>, HarnessError> {
    let mut found = Vec::new();
    for trial in 0..trials {
        let mut r = rng::stream(seed, trial);
        let truth = gen_random_with(&mut r, cfg.m, cfg.vmax);
        let other = gen_random_with(&mut r, cfg.m, cfg.vmax);
        let lie = gen_random_with(&mut r, cfg.m, cfg.vmax);
        if lie == truth {
            continue;
        }
        for b in Bidder::BOTH {
            let honest = run_as(mech, b, &truth, &other)?.utility(b, &truth);
            let lying = run_as(mech, b, &lie, &other)?.utility(b, &truth);
            if lying > honest {
                found.push(witness(mech, b, &truth, &other, &lie, honest, lying));
            }
        }
    }
    Ok(found)
}

/// Universal truthfulness: every realization of the distribution must be
/// truthful on its own.
pub fn check_universally_truthful(
    mech: &dyn RandomizedMechanism,
    cfg: &TruthCheck,
) -> Result<Vec<DeviationWitness>, HarnessError> {
    let mut found = Vec::new();
    for realization in mech.realizations() {
        found.extend(check_truthful(realization.as_ref(), cfg)?);
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::{
        Allocation, Deterministic, Dictator, NaiveVcgFptas, RandomDictator, Vcg,
    };
    use crate::money::Epsilon;
    use alloc::boxed::Box;
    use alloc::format;

    /// The chosen bidder gets the worse of `v(k)` and `v(m)`.
    struct ArgminDictator(Bidder);

    impl Mechanism for ArgminDictator {
        fn name(&self) -> String {
            format!("argmin-dictator[{}]", self.0.number())
        }

        fn run(&self, v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError> {
            let v = if self.0 == Bidder::One { v1 } else { v2 };
            let t = [v.spike(), v.m()]
                .into_iter()
                .min_by_key(|&t| v.at(t))
                .unwrap();
            let a = Allocation::giving(self.0, t, v.m()).unwrap();
            Ok(Outcome::without_payments(a, v1, v2))
        }
    }

    struct ArgminRandom;

    impl RandomizedMechanism for ArgminRandom {
        fn name(&self) -> String {
            "argmin-dictator".into()
        }

        fn realizations(&self) -> Vec<Box<dyn Mechanism + '_>> {
            Bidder::BOTH
                .into_iter()
                .map(|b| Box::new(ArgminDictator(b)) as Box<dyn Mechanism>)
                .collect()
        }
    }

    #[test]
    fn vcg_is_truthful_on_small_grid() {
        let found = check_truthful(&Vcg, &TruthCheck::exhaustive(2, 2)).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn dictator_coins_are_truthful() {
        let cfg = TruthCheck::exhaustive(2, 3);
        assert!(check_universally_truthful(&RandomDictator, &cfg)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn argmin_dictator_is_caught() {
        let cfg = TruthCheck::exhaustive(2, 2);
        let found = check_universally_truthful(&ArgminRandom, &cfg).unwrap();
        assert!(!found.is_empty());
        for w in &found {
            let b = w.deviator;
            assert!(replay(&ArgminDictator(b), w).unwrap());
        }
    }

    #[test]
    fn deterministic_wrapper_reduces_to_check_truthful() {
        let cfg = TruthCheck::exhaustive(2, 2);
        assert!(check_universally_truthful(&Deterministic(Vcg), &cfg)
            .unwrap()
            .is_empty());
        let d = Dictator(crate::mechanisms::Coin::new(Bidder::Two));
        assert!(check_universally_truthful(&Deterministic(d), &cfg)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn grid_cap_is_enforced() {
        let err = check_truthful(&Vcg, &TruthCheck::exhaustive(4, 3)).unwrap_err();
        assert!(matches!(err, HarnessError::GridTooLarge { cap: 64, .. }));
    }

    #[test]
    fn witnesses_replay() {
        // With eps = 1 every value in 0..=2 sits on the grid and the rule is
        // exact; eps = 2 rounds 2 down to 1.
        assert!(
            check_truthful(&NaiveVcgFptas(Epsilon::ONE), &TruthCheck::exhaustive(3, 2))
                .unwrap()
                .is_empty()
        );
        let mech = NaiveVcgFptas(Epsilon::new(2, 1).unwrap());
        let found = check_truthful(&mech, &TruthCheck::exhaustive(3, 2)).unwrap();
        assert!(!found.is_empty());
        for w in &found {
            assert!(w.gain() > Rational::from_integer(0));
            assert!(replay(&mech, w).unwrap());
        }
    }

    #[test]
    fn sampled_mode_is_deterministic() {
        let mech = NaiveVcgFptas(Epsilon::ONE);
        let cfg = TruthCheck::sampled(6, 20, 9, 400);
        let a = check_truthful(&mech, &cfg).unwrap();
        let b = check_truthful(&mech, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(check_truthful(&Vcg, &cfg).unwrap().is_empty());
    }
}
