//! Allocation rules and payment schemes for two-bidder extended multi-unit
//! auctions.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::money::Epsilon;
use crate::valuations::{MeteredOracle, Valuation, ValuationError};

mod dictator;
mod exact;
mod fptas;
mod outcome;

pub use dictator::random_dictator;
pub use exact::{
    affine_maximizer, brute_force_from_oracles, brute_force_opt, vcg, AffineMaximizerSpec,
};
pub use fptas::{candidate_allocations, fptas, fptas_from_oracles, naive_vcg_fptas, FptasRun};
pub use outcome::{Allocation, Bidder, Coin, Outcome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MechanismError {
    #[error("bidders disagree on the number of items ({0} vs {1})")]
    MismatchedM(usize, usize),
    #[error("reports use different eps ({0} vs {1})")]
    MismatchedEps(Epsilon, Epsilon),
    #[error("affine maximizer range is empty")]
    EmptyRange,
    #[error("range element {t} exceeds m = {m}")]
    RangeOutOfBounds { t: usize, m: usize },
    #[error("weights must be non-negative and not both zero")]
    BadWeights,
    #[error("constants must be keyed by exactly the range")]
    ConstantsMismatch,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

pub(crate) fn same_m(v1: &Valuation, v2: &Valuation) -> Result<usize, MechanismError> {
    if v1.m() != v2.m() {
        return Err(MechanismError::MismatchedM(v1.m(), v2.m()));
    }
    Ok(v1.m())
}

/// A deterministic direct-revelation mechanism: reports in, outcome out.
pub trait Mechanism {
    fn name(&self) -> String;
    fn run(&self, v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError>;
}

/// A probability distribution over deterministic mechanisms, given by its
/// realizations (equally likely).
pub trait RandomizedMechanism {
    fn name(&self) -> String;
    fn realizations(&self) -> Vec<Box<dyn Mechanism + '_>>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Vcg;

impl Mechanism for Vcg {
    fn name(&self) -> String {
        "vcg".into()
    }

    fn run(&self, v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError> {
        vcg(v1, v2)
    }
}

#[derive(Debug, Clone)]
pub struct AffineMaximizer(pub AffineMaximizerSpec);

impl Mechanism for AffineMaximizer {
    fn name(&self) -> String {
        "affine".into()
    }

    fn run(&self, v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError> {
        affine_maximizer(&self.0, v1, v2)
    }
}

/// The random dictator with its coin fixed.
#[derive(Debug, Clone, Copy)]
pub struct Dictator(pub Coin);

impl Mechanism for Dictator {
    fn name(&self) -> String {
        format!("random-dictator[coin={}]", self.0.chosen.number())
    }

    fn run(&self, v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError> {
        random_dictator(v1, v2, self.0)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RandomDictator;

impl RandomizedMechanism for RandomDictator {
    fn name(&self) -> String {
        "random-dictator".into()
    }

    fn realizations(&self) -> Vec<Box<dyn Mechanism + '_>> {
        Bidder::BOTH
            .into_iter()
            .map(|b| Box::new(Dictator(Coin::new(b))) as Box<dyn Mechanism>)
            .collect()
    }
}

/// A deterministic mechanism seen as a one-coin distribution.
pub struct Deterministic<M>(pub M);

impl<M: Mechanism> RandomizedMechanism for Deterministic<M> {
    fn name(&self) -> String {
        self.0.name()
    }

    fn realizations(&self) -> Vec<Box<dyn Mechanism + '_>> {
        vec![Box::new(&self.0)]
    }
}

impl<M: Mechanism + ?Sized> Mechanism for &M {
    fn name(&self) -> String {
        (**self).name()
    }

    fn run(&self, v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError> {
        (**self).run(v1, v2)
    }
}

/// The FPTAS allocation rule on its own (no payments).
#[derive(Debug, Clone, Copy)]
pub struct FptasRule(pub Epsilon);

impl Mechanism for FptasRule {
    fn name(&self) -> String {
        format!("fptas[eps={}]", self.0)
    }

    fn run(&self, v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError> {
        let run = fptas_from_oracles(
            &mut MeteredOracle::new(v1),
            &mut MeteredOracle::new(v2),
            self.0,
        )?;
        Ok(Outcome::without_payments(run.allocation, v1, v2))
    }
}

/// FPTAS allocation with VCG payments at that allocation.
#[derive(Debug, Clone, Copy)]
pub struct NaiveVcgFptas(pub Epsilon);

impl Mechanism for NaiveVcgFptas {
    fn name(&self) -> String {
        format!("fptas-naive-vcg[eps={}]", self.0)
    }

    fn run(&self, v1: &Valuation, v2: &Valuation) -> Result<Outcome, MechanismError> {
        naive_vcg_fptas(
            &mut MeteredOracle::new(v1),
            &mut MeteredOracle::new(v2),
            self.0,
        )
    }
}
