use crate::valuations::Valuation;

use super::{same_m, Allocation, Bidder, Coin, MechanismError, Outcome};

/// The coin's bidder takes his favourite bundle (`argmax(v(m), v(k))`, ties
/// to `m`); the other bidder gets the rest. No payments.
pub fn random_dictator(
    v1: &Valuation,
    v2: &Valuation,
    coin: Coin,
) -> Result<Outcome, MechanismError> {
    let m = same_m(v1, v2)?;
    let chooser = match coin.chosen {
        Bidder::One => v1,
        Bidder::Two => v2,
    };
    let (items, _) = chooser.global_max();
    let allocation = Allocation::giving(coin.chosen, items, m).expect("items <= m");
    Ok(Outcome::without_payments(allocation, v1, v2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::brute_force_opt;
    use crate::money::Rational;
    use crate::valuations::gen_random;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn example_coins() {
        let v1 = Valuation::new(4, vec![0, 1, 5, 2, 3], 2).unwrap();
        let v2 = Valuation::new(4, vec![0, 2, 3, 4, 6], 4).unwrap();
        let one = random_dictator(&v1, &v2, Coin::new(Bidder::One)).unwrap();
        assert_eq!((one.allocation.t(), one.welfare), (2, 8));
        let two = random_dictator(&v1, &v2, Coin::new(Bidder::Two)).unwrap();
        assert_eq!((two.allocation.t(), two.welfare), (0, 6));
        let (_, opt) = brute_force_opt(&v1, &v2).unwrap();
        assert!(one.welfare + two.welfare >= opt);
        assert_eq!(one.payments, [Rational::from_integer(0); 2]);
    }

    #[test]
    fn tightness_instance() {
        let v = Valuation::new(2, vec![0, 1, 1], 1).unwrap();
        let a = random_dictator(&v, &v, Coin::new(Bidder::One)).unwrap();
        let b = random_dictator(&v, &v, Coin::new(Bidder::Two)).unwrap();
        assert_eq!(a.welfare, 1);
        assert_eq!(b.welfare, 1);
        assert_eq!(brute_force_opt(&v, &v).unwrap().1, 2);
    }

    proptest! {
        #[test]
        fn two_coins_cover_the_optimum(m in 1usize..80, vmax in 0u64..10_000, seed in any::<u64>()) {
            let v1 = gen_random(m, vmax, seed);
            let v2 = gen_random(m, vmax, seed.rotate_left(17));
            let w: u64 = Bidder::BOTH
                .iter()
                .map(|&b| random_dictator(&v1, &v2, Coin::new(b)).unwrap().welfare)
                .sum();
            prop_assert!(w >= brute_force_opt(&v1, &v2).unwrap().1);
        }

        #[test]
        fn chooser_gets_his_maximum(m in 1usize..80, seed in any::<u64>()) {
            let v1 = gen_random(m, 500, seed);
            let v2 = gen_random(m, 500, seed ^ 0xff);
            for b in Bidder::BOTH {
                let o = random_dictator(&v1, &v2, Coin::new(b)).unwrap();
                let truth = if b == Bidder::One { &v1 } else { &v2 };
                let best = *truth.values().iter().max().unwrap();
                prop_assert_eq!(o.utility(b, truth), Rational::from_integer(i128::from(best)));
            }
        }
    }
}
