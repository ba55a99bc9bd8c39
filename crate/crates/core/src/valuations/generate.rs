use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::money::{Money, MAX_VALUE};
use crate::rng;

use super::{Valuation, ValuationError};

/// Seeded random valuation; see [`gen_random_with`].
pub fn gen_random(m: usize, vmax: Money, seed: u64) -> Valuation {
    gen_random_with(&mut rng::stream(seed, 0), m, vmax)
}

/// Draws `k` uniformly from `1..=m`, the chain as sorted i.i.d. uniforms on
/// `[0, vmax]`, and `v(k)` uniformly on `[0, vmax]`.
///
/// Panics if `m == 0` or `vmax > MAX_VALUE`.
pub fn gen_random_with<R: Rng + ?Sized>(rng: &mut R, m: usize, vmax: Money) -> Valuation {
    assert!(m >= 1, "need at least one item");
    assert!(vmax <= MAX_VALUE, "vmax above MAX_VALUE");
    let k = rng.gen_range(1..=m);
    let mut chain: Vec<Money> = (0..m - 1).map(|_| rng.gen_range(0..=vmax)).collect();
    chain.sort_unstable();
    let spike_value = rng.gen_range(0..=vmax);

    let mut values = Vec::with_capacity(m + 1);
    values.push(0);
    let mut chain = chain.into_iter();
    for t in 1..=m {
        if t == k {
            values.push(spike_value);
        } else {
            values.push(chain.next().expect("chain has m-1 entries"));
        }
    }
    Valuation::new(m, values, k).expect("generator output is almost monotone")
}

/// The gap witness for a range missing `(t, m - t)`: both bidders are zero
/// except `v1(t) = v2(m - t) = height`.
///
/// A spike that would land on index 0 is dropped (normalization), so for
/// `t ∈ {0, m}` the optimum is `height` rather than `2 * height`.
pub fn spike_instance(
    m: usize,
    t: usize,
    height: Money,
) -> Result<(Valuation, Valuation), ValuationError> {
    if m == 0 || t > m {
        return Err(ValuationError::BadIndex { t, m });
    }
    if height == 0 || height > MAX_VALUE {
        return Err(ValuationError::BadHeight(height));
    }
    let one_side = |at: usize| -> Result<Valuation, ValuationError> {
        let mut values = vec![0; m + 1];
        if at == 0 {
            return Valuation::new(m, values, 1);
        }
        values[at] = height;
        Valuation::new(m, values, at)
    };
    Ok((one_side(t)?, one_side(m - t)?))
}
