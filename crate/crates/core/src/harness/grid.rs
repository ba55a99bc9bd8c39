use alloc::vec;
use alloc::vec::Vec;

use crate::money::Money;
use crate::valuations::Valuation;

/// Number of valid `(values, k)` pairs with entries in `0..=vmax` for `m`
/// items: `m * C(m - 1 + vmax, m - 1) * (vmax + 1)`. Saturates.
pub fn grid_size(m: usize, vmax: Money) -> u128 {
    if m == 0 {
        return 0;
    }
    let chain = multichoose(vmax as u128 + 1, m as u128 - 1);
    chain
        .saturating_mul(vmax as u128 + 1)
        .saturating_mul(m as u128)
}

/// Non-decreasing sequences of length `len` over `kinds` symbols.
fn multichoose(kinds: u128, len: u128) -> u128 {
    // C(kinds + len - 1, len), accumulated exactly: c_i = c_{i-1} * (kinds - 1 + i) / i.
    let mut c: u128 = 1;
    for i in 1..=len {
        c = match c.checked_mul(kinds - 1 + i) {
            Some(x) => x / i,
            None => return u128::MAX,
        };
    }
    c
}

/// Every valid valuation on `m` items with values in `0..=vmax`, ordered by
/// spike index, then chain (lexicographic), then spike value.
pub fn enumerate_valuations(m: usize, vmax: Money) -> Vec<Valuation> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut chains = Vec::new();
    let mut current = Vec::with_capacity(m - 1);
    non_decreasing(m - 1, 0, vmax, &mut current, &mut chains);
    for k in 1..=m {
        for chain in &chains {
            for spike in 0..=vmax {
                let mut values = vec![0; m + 1];
                let mut it = chain.iter();
                for (t, slot) in values.iter_mut().enumerate().skip(1) {
                    *slot = if t == k { spike } else { *it.next().unwrap() };
                }
                out.push(Valuation::new(m, values, k).expect("enumerated tables are valid"));
            }
        }
    }
    out
}

fn non_decreasing(
    len: usize,
    floor: Money,
    vmax: Money,
    current: &mut Vec<Money>,
    out: &mut Vec<Vec<Money>>,
) {
    if current.len() == len {
        out.push(current.clone());
        return;
    }
    for x in floor..=vmax {
        current.push(x);
        non_decreasing(len, x, vmax, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn size_matches_enumeration() {
        for m in 1..=4 {
            for vmax in 0..=3 {
                let all = enumerate_valuations(m, vmax);
                assert_eq!(all.len() as u128, grid_size(m, vmax), "m={m} vmax={vmax}");
                let distinct: BTreeSet<_> = all
                    .iter()
                    .map(|v| (v.values().to_vec(), v.spike()))
                    .collect();
                assert_eq!(distinct.len(), all.len());
            }
        }
        assert_eq!(grid_size(3, 2), 54);
    }

    #[test]
    fn enumeration_is_complete() {
        // Brute force over all tables in 0..=2 for m = 3.
        let mut expected = 0;
        for a in 0..=2 {
            for b in 0..=2 {
                for c in 0..=2 {
                    for k in 1..=3 {
                        if Valuation::new(3, vec![0, a, b, c], k).is_ok() {
                            expected += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(enumerate_valuations(3, 2).len(), expected);
    }

    #[test]
    fn huge_grids_saturate() {
        assert_eq!(grid_size(200, 1_000_000), u128::MAX);
    }
}
