use rand::Rng;

use crate::money::{Money, Rational};
use crate::valuations::Valuation;

/// One of the two bidders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bidder {
    One,
    Two,
}

impl Bidder {
    pub const BOTH: [Bidder; 2] = [Bidder::One, Bidder::Two];

    /// 1-based index as used in reports and file formats.
    pub fn number(self) -> u8 {
        match self {
            Bidder::One => 1,
            Bidder::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Bidder::One),
            2 => Some(Bidder::Two),
            _ => None,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Bidder::One => Bidder::Two,
            Bidder::Two => Bidder::One,
        }
    }

    fn slot(self) -> usize {
        usize::from(self.number() - 1)
    }
}

/// An allocation of all `m` items: `t` to bidder 1, `m - t` to bidder 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    t: usize,
    m: usize,
}

impl Allocation {
    pub fn new(t: usize, m: usize) -> Option<Self> {
        (t <= m).then_some(Self { t, m })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Items received by `bidder`.
    pub fn share(&self, bidder: Bidder) -> usize {
        match bidder {
            Bidder::One => self.t,
            Bidder::Two => self.m - self.t,
        }
    }

    /// Bundle of `bidder` when bidder `bidder` receives `items`.
    pub fn giving(bidder: Bidder, items: usize, m: usize) -> Option<Self> {
        match bidder {
            Bidder::One => Self::new(items, m),
            Bidder::Two => m.checked_sub(items).map(|t| Self { t, m }),
        }
    }

    pub fn welfare(&self, v1: &Valuation, v2: &Valuation) -> Money {
        v1.at(self.t) + v2.at(self.m - self.t)
    }
}

/// The random bit of the dictator mechanism: which bidder gets to choose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coin {
    pub chosen: Bidder,
}

impl Coin {
    pub fn new(chosen: Bidder) -> Self {
        Self { chosen }
    }

    /// Uniform over the two bidders.
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let chosen = if rng.gen_bool(0.5) {
            Bidder::One
        } else {
            Bidder::Two
        };
        Self { chosen }
    }
}

/// Allocation plus payments. Payments are made *to* the bidders (positive =
/// received), so a bidder's utility is `v(share) + payment`.
///
/// `welfare` is the welfare of the allocation under the valuations the
/// mechanism was run on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub allocation: Allocation,
    pub payments: [Rational; 2],
    pub welfare: Money,
}

impl Outcome {
    pub fn without_payments(allocation: Allocation, v1: &Valuation, v2: &Valuation) -> Self {
        Self {
            allocation,
            payments: [Rational::from_integer(0); 2],
            welfare: allocation.welfare(v1, v2),
        }
    }

    pub fn payment(&self, bidder: Bidder) -> Rational {
        self.payments[bidder.slot()]
    }

    /// Utility of `bidder` whose true valuation is `truth`.
    pub fn utility(&self, bidder: Bidder, truth: &Valuation) -> Rational {
        let value = truth.at(self.allocation.share(bidder));
        Rational::from_integer(i128::from(value)) + self.payment(bidder)
    }
}
