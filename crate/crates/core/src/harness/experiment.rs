use alloc::vec::Vec;

use crate::mechanisms::{
    brute_force_from_oracles, brute_force_opt, fptas_from_oracles, random_dictator, Bidder, Coin,
    MechanismError,
};
use crate::money::{Epsilon, Money, Rational};
use crate::rng;
use crate::valuations::{compactify, gen_random_with, MeteredOracle, Valuation};

use super::HarnessError;

/// Both bidders of instance `index` in the stream of `seed`.
pub fn instance_for(seed: u64, index: u64, m: usize, vmax: Money) -> (Valuation, Valuation) {
    let mut r = rng::stream(seed, index);
    let v1 = gen_random_with(&mut r, m, vmax);
    let v2 = gen_random_with(&mut r, m, vmax);
    (v1, v2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Exact,
    Fptas,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Fptas => "fptas",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub m: usize,
    pub eps: Epsilon,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub queries: u64,
    pub welfare: Money,
    pub opt_welfare: Money,
}

impl ExperimentRecord {
    /// `opt / welfare`; 1 when both are zero, `None` when only welfare is.
    pub fn ratio(&self) -> Option<f64> {
        match (self.opt_welfare, self.welfare) {
            (0, 0) => Some(1.0),
            (_, 0) => None,
            (opt, w) => Some(opt as f64 / w as f64),
        }
    }
}

/// One `m` of the query-growth table, with the compactify bound that applies
/// to the FPTAS row.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryGrowthRow {
    pub exact: ExperimentRecord,
    pub fptas: ExperimentRecord,
    /// Distinct rounded levels of each bidder's chain.
    pub levels: [usize; 2],
    pub fptas_bound: u64,
}

/// Runs the exact solver and the FPTAS, both through metered oracles, on
/// instance `index` of `seed` with `m` items.
pub fn query_growth_row(
    index: u64,
    m: usize,
    eps: Epsilon,
    vmax: Money,
    seed: u64,
) -> Result<QueryGrowthRow, HarnessError> {
    let (v1, v2) = instance_for(seed, index, m, vmax);
    let (_, opt, exact_queries) =
        brute_force_from_oracles(&mut MeteredOracle::new(&v1), &mut MeteredOracle::new(&v2))?;
    let run = fptas_from_oracles(
        &mut MeteredOracle::new(&v1),
        &mut MeteredOracle::new(&v2),
        eps,
    )?;

    let (r1, _) = compactify(&mut MeteredOracle::new(&v1), eps);
    let (r2, _) = compactify(&mut MeteredOracle::new(&v2), eps);
    let levels = [r1.distinct_levels(), r2.distinct_levels()];

    let record = |algorithm, queries, welfare| ExperimentRecord {
        m,
        eps,
        seed,
        algorithm,
        queries,
        welfare,
        opt_welfare: opt,
    };
    Ok(QueryGrowthRow {
        exact: record(Algorithm::Exact, exact_queries, opt),
        fptas: record(
            Algorithm::Fptas,
            run.queries,
            run.allocation.welfare(&v1, &v2),
        ),
        levels,
        fptas_bound: r1.query_bound() + r2.query_bound(),
    })
}

/// Exact vs. FPTAS query counts over `m_list`, two records per `m`, in
/// input order. Instance `i` uses stream `i` of `seed`.
pub fn query_growth_experiment(
    m_list: &[usize],
    eps: Epsilon,
    vmax: Money,
    seed: u64,
) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let mut out = Vec::with_capacity(2 * m_list.len());
    for (i, &m) in m_list.iter().enumerate() {
        let row = query_growth_row(i as u64, m, eps, vmax, seed)?;
        out.push(row.exact);
        out.push(row.fptas);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioMechanism {
    Fptas(Epsilon),
    /// Expected welfare over both coins, computed exactly.
    RandomDictator,
}

impl RatioMechanism {
    /// Proven worst-case ratio: `1 + eps` or 2.
    pub fn bound(&self) -> Rational {
        match self {
            RatioMechanism::Fptas(eps) => eps.one_plus(),
            RatioMechanism::RandomDictator => Rational::from_integer(2),
        }
    }
}

/// `OPT / welfare` on one instance, exactly. `None` means the mechanism got
/// zero welfare against a positive optimum; `OPT = 0` counts as ratio 1.
pub fn instance_ratio(
    mech: RatioMechanism,
    v1: &Valuation,
    v2: &Valuation,
) -> Result<Option<Rational>, MechanismError> {
    let (_, opt) = brute_force_opt(v1, v2)?;
    if opt == 0 {
        return Ok(Some(Rational::from_integer(1)));
    }
    // ratio = opt * scale / achieved
    let (achieved, scale) = match mech {
        RatioMechanism::Fptas(eps) => {
            let run = fptas_from_oracles(
                &mut MeteredOracle::new(v1),
                &mut MeteredOracle::new(v2),
                eps,
            )?;
            (run.allocation.welfare(v1, v2), 1)
        }
        RatioMechanism::RandomDictator => {
            let mut both = 0;
            for b in Bidder::BOTH {
                both += random_dictator(v1, v2, Coin::new(b))?.welfare;
            }
            (both, 2)
        }
    };
    if achieved == 0 {
        return Ok(None);
    }
    Ok(Some(Rational::new(
        i128::from(opt) * scale,
        i128::from(achieved),
    )))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioSummary {
    pub trials: u64,
    pub min: Option<Rational>,
    pub max: Option<Rational>,
    pub mean: Option<f64>,
    /// Instances with zero welfare against a positive optimum.
    pub unbounded: u64,
}

impl RatioSummary {
    pub fn summarize<I: IntoIterator<Item = Option<Rational>>>(ratios: I) -> Self {
        let mut s = RatioSummary {
            trials: 0,
            min: None,
            max: None,
            mean: None,
            unbounded: 0,
        };
        let mut sum = 0.0;
        let mut finite = 0u64;
        for r in ratios {
            s.trials += 1;
            let Some(r) = r else {
                s.unbounded += 1;
                continue;
            };
            s.min = Some(s.min.map_or(r, |x| x.min(r)));
            s.max = Some(s.max.map_or(r, |x| x.max(r)));
            sum += *r.numer() as f64 / *r.denom() as f64;
            finite += 1;
        }
        if finite > 0 {
            s.mean = Some(sum / finite as f64);
        }
        s
    }

    /// No unbounded instance and every ratio `<= bound`.
    pub fn within(&self, bound: Rational) -> bool {
        self.unbounded == 0 && self.max.is_none_or(|m| m <= bound)
    }
}

/// Ratios of `mech` against the brute-force optimum on `instances` seeded
/// random instances.
pub fn ratio_experiment(
    mech: RatioMechanism,
    instances: u64,
    m: usize,
    vmax: Money,
    seed: u64,
) -> Result<RatioSummary, HarnessError> {
    let ratios = (0..instances)
        .map(|i| {
            let (v1, v2) = instance_for(seed, i, m, vmax);
            instance_ratio(mech, &v1, &v2)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatioSummary::summarize(ratios))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn exact_solver_reads_both_tables() {
        let recs = query_growth_experiment(&[8], Epsilon::ONE, 1_000_000, 3).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].algorithm, Algorithm::Exact);
        assert_eq!(recs[0].queries, 18);
        assert_eq!(recs[0].ratio(), Some(1.0));
        assert!(recs[1].queries <= 2 * ((21 + 1) * (3 + 2) + 2));
    }

    #[test]
    fn records_are_reproducible() {
        let a = query_growth_experiment(&[4, 64, 1000], Epsilon::new(1, 2).unwrap(), 10_000, 11)
            .unwrap();
        let b = query_growth_experiment(&[4, 64, 1000], Epsilon::new(1, 2).unwrap(), 10_000, 11)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dictator_tightness() {
        let v = Valuation::new(2, vec![0, 1, 1], 1).unwrap();
        let r = instance_ratio(RatioMechanism::RandomDictator, &v, &v).unwrap();
        assert_eq!(r, Some(Rational::from_integer(2)));
    }

    #[test]
    fn zero_instance_ratio_is_one() {
        let z = Valuation::zero(3, 2).unwrap();
        for mech in [
            RatioMechanism::RandomDictator,
            RatioMechanism::Fptas(Epsilon::ONE),
        ] {
            assert_eq!(
                instance_ratio(mech, &z, &z).unwrap(),
                Some(Rational::from_integer(1))
            );
        }
    }

    #[test]
    fn empty_summary() {
        let s = ratio_experiment(RatioMechanism::Fptas(Epsilon::ONE), 0, 10, 10, 1).unwrap();
        assert_eq!(s.trials, 0);
        assert_eq!(s.max, None);
        assert_eq!(s.mean, None);
        assert!(s.within(Rational::from_integer(1)));
    }

    #[test]
    fn fptas_ratio_on_hundred_item_instances() {
        let s =
            ratio_experiment(RatioMechanism::Fptas(Epsilon::ONE), 1000, 100, 1_000_000, 4).unwrap();
        assert_eq!(s.trials, 1000);
        assert!(s.within(Rational::from_integer(2)));
        let s = ratio_experiment(RatioMechanism::RandomDictator, 500, 100, 1_000_000, 4).unwrap();
        assert!(s.within(Rational::from_integer(2)));
    }

    #[test]
    fn unbounded_summaries_fail_any_bound() {
        let s = RatioSummary::summarize([Some(Rational::from_integer(1)), None]);
        assert_eq!(s.unbounded, 1);
        assert!(!s.within(Rational::from_integer(1000)));
    }
}
