//! Valuations of extended multi-unit auctions and the bidder-side FPTAS report.

mod compact;
mod generate;
mod oracle;
mod valuation;

pub use compact::{ceil_log2, compactify, query_bound, CompactReport, ReportError};
pub use generate::{gen_random, gen_random_with, spike_instance};
pub use oracle::MeteredOracle;
pub use valuation::{Valuation, ValuationError};
