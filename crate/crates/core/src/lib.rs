//! Extended multi-unit auctions with two bidders.
//!
//! `m` identical items are always fully allocated as `(t, m - t)`. Each bidder
//! holds an *almost monotone* valuation: non-decreasing in the number of items
//! except at a single private spike index `k`, whose value is unconstrained.
//!
//! The crate is split into three layers:
//!
//! - [`valuations`]: validated value tables, metered black-box access, random
//!   and adversarial generators, and the `(1+eps)` compact report used by the
//!   FPTAS.
//! - [`mechanisms`]: brute-force optimum, VCG, affine maximizers, the FPTAS,
//!   the random-dictator mechanism and a deliberately manipulable
//!   FPTAS-plus-VCG combination.
//! - [`harness`]: exhaustive and sampled truthfulness checks, price-menu
//!   extraction, affine-maximizer fitting, range-gap witnesses and the
//!   query-growth / approximation-ratio experiments.
//!
//! Everything here is `no_std` with `alloc`; file formats and the CLI live in
//! the `mdlab` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod harness;
pub mod mechanisms;
pub mod money;
pub mod rng;
pub mod valuations;

pub use mechanisms::{
    affine_maximizer, brute_force_from_oracles, brute_force_opt, fptas, fptas_from_oracles,
    naive_vcg_fptas, random_dictator, vcg, AffineMaximizerSpec, Allocation, Bidder, Coin,
    Mechanism, MechanismError, Outcome,
};
pub use money::{Epsilon, EpsilonError, Money, Rational, RoundingGrid, MAX_VALUE};
pub use valuations::{
    compactify, gen_random, spike_instance, CompactReport, MeteredOracle, Valuation, ValuationError,
};
