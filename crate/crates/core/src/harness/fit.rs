//! Exact affine-maximizer fitting.
//!
//! Weights are normalized to `w1 = λ`, `w2 = 1 - λ` with `λ ∈ [0, 1]`. For a
//! fixed `λ`, "every observed choice maximizes `w·v + c` over the range, with
//! ties going to the smaller `t`" is a system of difference constraints on
//! the constants, strict towards smaller alternatives. Strictness is carried
//! as a symbolic infinitesimal. A violating cycle has weight `α + βλ`, which
//! cuts the admissible `λ` interval; the search stops at a feasible `λ` or an
//! empty interval.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Add;

use crate::mechanisms::{AffineMaximizerSpec, MechanismError};
use crate::money::Rational;
use crate::valuations::Valuation;

use super::diffcon::{solve, Constraint};
use super::HarnessError;

/// Largest number of pairwise constraints the fitter accepts.
pub const MAX_FIT_CONSTRAINTS: usize = 200_000;

/// An observed run of some allocation rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub v1: Valuation,
    pub v2: Valuation,
    pub chosen: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFit {
    pub weights: [Rational; 2],
    pub constants: BTreeMap<usize, Rational>,
}

impl AffineFit {
    pub fn to_spec(&self) -> Result<AffineMaximizerSpec, MechanismError> {
        AffineMaximizerSpec::new(
            self.constants.keys().copied().collect(),
            self.weights,
            self.constants.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitVerdict {
    Feasible(AffineFit),
    Infeasible,
}

/// `value + strict·δ` for an infinitesimal `δ > 0`, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Lex {
    value: Rational,
    strict: i64,
}

impl Add for Lex {
    type Output = Lex;
    fn add(self, o: Lex) -> Lex {
        Lex {
            value: self.value + o.value,
            strict: self.strict + o.strict,
        }
    }
}

/// `c[to] - c[from] <= alpha + beta·λ`, minus δ when strict.
#[derive(Debug, Clone, Copy)]
struct Linear {
    from: usize,
    to: usize,
    alpha: Rational,
    beta: Rational,
    strict: bool,
}

#[derive(Debug, Clone, Copy)]
struct Bound {
    at: Rational,
    open: bool,
}

pub fn fit_affine_maximizer(
    observations: &[Observation],
    range_hint: &[usize],
) -> Result<FitVerdict, HarnessError> {
    let mut range = range_hint.to_vec();
    range.sort_unstable();
    range.dedup();
    if range.is_empty() {
        return Err(MechanismError::EmptyRange.into());
    }
    let Some(m) = observations.first().map(|o| o.v1.m()) else {
        // Nothing observed: unit weights and zero constants explain it.
        return Ok(FitVerdict::Feasible(unit_fit(&range)));
    };
    let needed = observations.len().saturating_mul(range.len());
    if needed > MAX_FIT_CONSTRAINTS {
        return Err(HarnessError::ScaleTooLarge {
            constraints: needed,
            cap: MAX_FIT_CONSTRAINTS,
        });
    }
    if let Some(&t) = range.iter().find(|&&t| t > m) {
        return Err(MechanismError::RangeOutOfBounds { t, m }.into());
    }

    let slot = |t: usize| range.binary_search(&t).ok();
    let mut edges = Vec::new();
    for o in observations {
        for v in [&o.v1, &o.v2] {
            if v.m() != m {
                return Err(HarnessError::MismatchedM(v.m(), m));
            }
        }
        let Some(chosen) = slot(o.chosen) else {
            return Ok(FitVerdict::Infeasible);
        };
        let own = |t: usize| Rational::from_integer(i128::from(o.v1.at(t)));
        let theirs = |t: usize| Rational::from_integer(i128::from(o.v2.at(m - t)));
        for (i, &s) in range.iter().enumerate().filter(|&(i, _)| i != chosen) {
            // λ(v1(t*) - v1(s)) + (1 - λ)(v2(m-t*) - v2(m-s)).
            let a = own(o.chosen) - own(s);
            let b = theirs(o.chosen) - theirs(s);
            edges.push(Linear {
                from: chosen,
                to: i,
                alpha: b,
                beta: a - b,
                strict: s < o.chosen,
            });
        }
    }

    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    let mut lo = Bound {
        at: zero,
        open: false,
    };
    let mut hi = Bound {
        at: one,
        open: false,
    };
    loop {
        let lambda = if lo.at == hi.at {
            lo.at
        } else {
            (lo.at + hi.at) / Rational::from_integer(2)
        };
        let system: Vec<Constraint<Lex>> = edges
            .iter()
            .map(|e| Constraint {
                from: e.from,
                to: e.to,
                bound: Lex {
                    value: e.alpha + e.beta * lambda,
                    strict: -i64::from(e.strict),
                },
            })
            .collect();
        let zero_lex = Lex {
            value: zero,
            strict: 0,
        };
        match solve(range.len(), &system, zero_lex) {
            Ok(potentials) => {
                let constants = materialize(&range, &system, &potentials);
                return Ok(FitVerdict::Feasible(AffineFit {
                    weights: [lambda, one - lambda],
                    constants,
                }));
            }
            Err(cycle) => {
                let alpha: Rational = cycle.iter().map(|&i| edges[i].alpha).sum();
                let beta: Rational = cycle.iter().map(|&i| edges[i].beta).sum();
                let strict = cycle.iter().any(|&i| edges[i].strict);
                // Need alpha + beta·λ >= 0, or > 0 when strict.
                match beta.cmp(&zero) {
                    Ordering::Equal => return Ok(FitVerdict::Infeasible),
                    Ordering::Greater => {
                        let cut = Bound {
                            at: -alpha / beta,
                            open: strict,
                        };
                        if cut.at > lo.at || (cut.at == lo.at && cut.open) {
                            lo = cut;
                        }
                    }
                    Ordering::Less => {
                        let cut = Bound {
                            at: -alpha / beta,
                            open: strict,
                        };
                        if cut.at < hi.at || (cut.at == hi.at && cut.open) {
                            hi = cut;
                        }
                    }
                }
                let empty = lo.at > hi.at || (lo.at == hi.at && (lo.open || hi.open));
                if empty {
                    return Ok(FitVerdict::Infeasible);
                }
            }
        }
    }
}

fn unit_fit(range: &[usize]) -> AffineFit {
    AffineFit {
        weights: [Rational::from_integer(1); 2],
        constants: range
            .iter()
            .map(|&t| (t, Rational::from_integer(0)))
            .collect(),
    }
}

/// Picks a concrete δ small enough for every edge and returns
/// `c_t = value + strict·δ`.
fn materialize(
    range: &[usize],
    system: &[Constraint<Lex>],
    potentials: &[Lex],
) -> BTreeMap<usize, Rational> {
    let mut delta = Rational::from_integer(1);
    for c in system {
        let diff_value = potentials[c.to].value - potentials[c.from].value;
        let diff_strict = potentials[c.to].strict - potentials[c.from].strict;
        let gap = c.bound.value - diff_value;
        let excess = diff_strict - c.bound.strict;
        if gap > Rational::from_integer(0) && excess > 0 {
            let limit = gap / Rational::from_integer(i128::from(excess));
            if limit < delta {
                delta = limit;
            }
        }
    }
    range
        .iter()
        .zip(potentials)
        .map(|(&t, p)| {
            (
                t,
                p.value + delta * Rational::from_integer(i128::from(p.strict)),
            )
        })
        .collect()
}
