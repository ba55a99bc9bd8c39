//! Integer money, exact rationals, and the `(1+eps)` rounding grid.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

/// A non-negative amount of money. All bidder values are integral.
pub type Money = u64;

/// Largest admissible table entry. Keeps welfare sums and signed payments
/// inside 64 bits.
pub const MAX_VALUE: Money = 1 << 62;

/// Exact signed rational used for payments, weights and ratios.
pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EpsilonError {
    #[error("eps must be a positive rational, got {num}/{den}")]
    NotPositive { num: u64, den: u64 },
    #[error("cannot parse eps from {0:?}; expected `num/den` or an integer")]
    Parse(alloc::string::String),
}

/// Approximation parameter `eps = num/den > 0`, kept in lowest terms so that
/// structural equality is value equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self, EpsilonError> {
        if num == 0 || den == 0 {
            return Err(EpsilonError::NotPositive { num, den });
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub const ONE: Epsilon = Epsilon { num: 1, den: 1 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_rational(&self) -> Rational {
        Rational::new(i128::from(self.num), i128::from(self.den))
    }

    /// `1 + eps` as an exact rational.
    pub fn one_plus(&self) -> Rational {
        Rational::from_integer(1) + self.as_rational()
    }

    /// Exact test of `achieved * (1 + eps) >= target`.
    pub fn covers(&self, achieved: Money, target: Money) -> bool {
        let lhs = u128::from(achieved) * (u128::from(self.num) + u128::from(self.den));
        let rhs = u128::from(target) * u128::from(self.den);
        lhs >= rhs
    }

    /// Exact test of `lower * (1 + eps) > value`, the strict side of the
    /// rounding sandwich.
    pub fn strictly_covers(&self, lower: Money, value: Money) -> bool {
        let lhs = u128::from(lower) * (u128::from(self.num) + u128::from(self.den));
        let rhs = u128::from(value) * u128::from(self.den);
        lhs > rhs
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = EpsilonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EpsilonError::Parse(s.into());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<u64>().map_err(|_| bad())?,
                d.trim().parse::<u64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<u64>().map_err(|_| bad())?, 1),
        };
        Epsilon::new(num, den)
    }
}

/// Integer levels `1 = g_0 < g_1 < ...` with `g_{i+1} = ceil(g_i * (1 + eps))`.
///
/// Rounding `x` down to the largest level `<= x` lands strictly above
/// `x / (1 + eps)`: if `g_i <= x < g_{i+1}` then `x <= g_{i+1} - 1 < g_i (1+eps)`.
/// For integral `eps` the levels are exactly the powers of `1 + eps`.
///
/// The grid grows lazily, so tiny `eps` values only pay for the range they
/// actually touch.
#[derive(Debug, Clone)]
pub struct RoundingGrid {
    eps: Epsilon,
    levels: Vec<u128>,
}

impl RoundingGrid {
    pub fn new(eps: Epsilon) -> Self {
        Self {
            eps,
            levels: vec![1],
        }
    }

    pub fn eps(&self) -> Epsilon {
        self.eps
    }

    fn next_level(&self, g: u128) -> u128 {
        let num = u128::from(self.eps.num) + u128::from(self.eps.den);
        let den = u128::from(self.eps.den);
        // g < 2^64 and num < 2^65 while extending, so this cannot overflow.
        (g * num).div_ceil(den)
    }

    fn extend_past(&mut self, x: Money) {
        let x = u128::from(x);
        while *self.levels.last().expect("grid is never empty") <= x {
            let last = *self.levels.last().unwrap();
            let next = self.next_level(last);
            self.levels.push(next);
        }
    }

    /// Largest grid level `<= x`; `0` maps to `0`.
    pub fn round_down(&mut self, x: Money) -> Money {
        if x == 0 {
            return 0;
        }
        self.extend_past(x);
        let idx = self.levels.partition_point(|&g| g <= u128::from(x));
        // levels[0] = 1 <= x, so idx >= 1.
        self.levels[idx - 1] as Money
    }

    /// Whether `x` is `0` or a grid level.
    pub fn contains(&mut self, x: Money) -> bool {
        x == 0 || self.round_down(x) == x
    }

    /// Number of nonzero levels `<= x`.
    pub fn levels_up_to(&mut self, x: Money) -> usize {
        if x == 0 {
            return 0;
        }
        self.extend_past(x);
        self.levels.partition_point(|&g| g <= u128::from(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_reduced() {
        assert_eq!(Epsilon::new(2, 2).unwrap(), Epsilon::ONE);
        assert_eq!(
            "4/8".parse::<Epsilon>().unwrap(),
            Epsilon::new(1, 2).unwrap()
        );
        assert_eq!("3".parse::<Epsilon>().unwrap(), Epsilon::new(3, 1).unwrap());
        assert!("0/1".parse::<Epsilon>().is_err());
        assert!("1/0".parse::<Epsilon>().is_err());
        assert!("x".parse::<Epsilon>().is_err());
    }

    #[test]
    fn integral_eps_gives_exact_powers() {
        let mut g = RoundingGrid::new(Epsilon::ONE);
        assert_eq!(g.round_down(1), 1);
        assert_eq!(g.round_down(3), 2);
        assert_eq!(g.round_down(5), 4);
        assert_eq!(g.round_down(100), 64);
        assert_eq!(g.round_down(1_000_000), 524_288);
        let mut g3 = RoundingGrid::new(Epsilon::new(2, 1).unwrap());
        assert_eq!(g3.round_down(26), 9);
        assert_eq!(g3.round_down(27), 27);
    }

    #[test]
    fn half_and_tenth_grid_are_strict() {
        // The floor-of-powers grid rounds 984 to 656 = 984 / 1.5 and 33 to 30 = 33 / 1.1.
        let half = Epsilon::new(1, 2).unwrap();
        let mut g = RoundingGrid::new(half);
        assert!(half.strictly_covers(g.round_down(984), 984));
        let tenth = Epsilon::new(1, 10).unwrap();
        let mut g = RoundingGrid::new(tenth);
        assert!(tenth.strictly_covers(g.round_down(33), 33));
    }

    #[test]
    fn sandwich_holds_exhaustively_for_small_values() {
        for eps in ["2", "1", "1/2", "1/10", "1/1000", "7/3"] {
            let eps: Epsilon = eps.parse().unwrap();
            let mut g = RoundingGrid::new(eps);
            for x in 1..=20_000u64 {
                let r = g.round_down(x);
                assert!(r <= x);
                assert!(eps.strictly_covers(r, x), "eps={eps} x={x} r={r}");
            }
        }
    }

    #[test]
    fn grid_handles_max_value_and_huge_eps() {
        let mut g = RoundingGrid::new(Epsilon::new(u64::MAX, 1).unwrap());
        assert_eq!(g.round_down(MAX_VALUE), 1);
        let mut g = RoundingGrid::new(Epsilon::ONE);
        assert_eq!(g.round_down(MAX_VALUE), MAX_VALUE);
        assert_eq!(g.levels_up_to(MAX_VALUE), 63);
    }
}
