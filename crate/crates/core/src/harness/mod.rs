//! Executable checks of the mechanisms' claimed properties: truthfulness
//! search, revealed price menus, affine-maximizer fitting, range-gap
//! witnesses, and query / ratio experiments.

pub mod diffcon;
mod experiment;
mod fit;
mod gap;
mod grid;
mod menu;
mod truthful;

pub use experiment::{
    instance_for, instance_ratio, query_growth_experiment, query_growth_row, ratio_experiment,
    Algorithm, ExperimentRecord, QueryGrowthRow, RatioMechanism, RatioSummary,
};
pub use fit::{fit_affine_maximizer, AffineFit, FitVerdict, Observation, MAX_FIT_CONSTRAINTS};
pub use gap::{range_gap_demo, GapDemo};
pub use grid::{enumerate_valuations, grid_size};
pub use menu::{
    extract_price_menu, menu_from_choices, Inconsistency, MenuConstraint, MenuVerdict, PriceMenu,
};
pub use truthful::{
    check_truthful, check_universally_truthful, replay, CheckMode, DeviationWitness, TruthCheck,
};

use crate::mechanisms::MechanismError;
use crate::valuations::ValuationError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("exhaustive grid has {size} valuations per bidder, cap is {cap}")]
    GridTooLarge { size: u128, cap: usize },
    #[error("fit needs {constraints} constraints, cap is {cap}")]
    ScaleTooLarge { constraints: usize, cap: usize },
    #[error("the range is full; no allocation is missing")]
    FullRange,
    #[error("valuation has m = {0}, expected {1}")]
    MismatchedM(usize, usize),
    #[error(transparent)]
    Mechanism(#[from] MechanismError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}
