//! JSON and CSV encodings of instances, reports, outcomes, affine specs,
//! witnesses and experiment records.
//!
//! Rationals are written as JSON integers when integral and as `"num/den"`
//! strings otherwise; both forms are accepted on input.

use std::collections::BTreeMap;
use std::io::Write;

use mdlab_core::harness::{DeviationWitness, ExperimentRecord, GapDemo, RatioSummary};
use mdlab_core::mechanisms::{AffineMaximizerSpec, MechanismError, Outcome};
use mdlab_core::valuations::ReportError;
use mdlab_core::{
    CompactReport, Epsilon, EpsilonError, Money, Rational, Valuation, ValuationError,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected exactly two bidders, found {0}")]
    BidderCount(usize),
    #[error("bidder {bidder}: {source}")]
    Valuation {
        bidder: usize,
        source: ValuationError,
    },
    #[error("invalid report: {0}")]
    Report(#[from] ReportError),
    #[error("invalid eps: {0}")]
    Epsilon(#[from] EpsilonError),
    #[error("invalid rational {0}")]
    Rational(String),
    #[error("constant key {0:?} is not an allocation index")]
    ConstantKey(String),
    #[error("invalid affine spec: {0}")]
    Affine(#[from] MechanismError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub fn rational_to_json(r: &Rational) -> Value {
    if r.is_integer() {
        // Integral payments are bounded by a few multiples of MAX_VALUE and
        // always fit i64; fall back to the string form otherwise.
        if let Ok(n) = i64::try_from(*r.numer()) {
            return json!(n);
        }
    }
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn rational_from_json(v: &Value) -> Result<Rational, FormatError> {
    let bad = || FormatError::Rational(v.to_string());
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|n| Rational::from_integer(i128::from(n)))
            .ok_or_else(bad),
        Value::String(s) => parse_rational(s).ok_or_else(bad),
        _ => Err(bad()),
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i128>().ok()?,
            d.trim().parse::<i128>().ok()?,
        ),
        None => (s.trim().parse::<i128>().ok()?, 1),
    };
    (d != 0).then(|| Rational::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidderJson {
    pub values: Vec<Money>,
    pub k: usize,
}

impl BidderJson {
    pub fn from_valuation(v: &Valuation) -> Self {
        Self {
            values: v.values().to_vec(),
            k: v.spike(),
        }
    }

    pub fn to_valuation(&self, m: usize) -> Result<Valuation, ValuationError> {
        Valuation::new(m, self.values.clone(), self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub m: usize,
    pub bidders: Vec<BidderJson>,
}

impl InstanceJson {
    pub fn new(v1: &Valuation, v2: &Valuation) -> Self {
        Self {
            m: v1.m(),
            bidders: vec![
                BidderJson::from_valuation(v1),
                BidderJson::from_valuation(v2),
            ],
        }
    }

    pub fn parse(text: &str) -> Result<(Valuation, Valuation), FormatError> {
        let file: InstanceJson = serde_json::from_str(text)?;
        file.to_valuations()
    }

    pub fn to_valuations(&self) -> Result<(Valuation, Valuation), FormatError> {
        if self.bidders.len() != 2 {
            return Err(FormatError::BidderCount(self.bidders.len()));
        }
        let get = |i: usize| {
            self.bidders[i]
                .to_valuation(self.m)
                .map_err(|source| FormatError::Valuation {
                    bidder: i + 1,
                    source,
                })
        };
        Ok((get(0)?, get(1)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub m: usize,
    pub eps: [u64; 2],
    pub breakpoints: Vec<(usize, Money)>,
    pub spike: (usize, Money),
}

impl ReportJson {
    pub fn new(r: &CompactReport) -> Self {
        Self {
            m: r.m(),
            eps: [r.eps().num(), r.eps().den()],
            breakpoints: r.breakpoints().to_vec(),
            spike: r.spike(),
        }
    }

    pub fn parse(text: &str) -> Result<CompactReport, FormatError> {
        let file: ReportJson = serde_json::from_str(text)?;
        file.to_report()
    }

    pub fn to_report(&self) -> Result<CompactReport, FormatError> {
        let eps = Epsilon::new(self.eps[0], self.eps[1])?;
        Ok(CompactReport::new(
            self.m,
            eps,
            self.breakpoints.clone(),
            self.spike,
        )?)
    }
}

pub fn outcome_to_json(o: &Outcome) -> Value {
    json!({
        "t": o.allocation.t(),
        "payments": [rational_to_json(&o.payments[0]), rational_to_json(&o.payments[1])],
        "welfare": o.welfare,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineJson {
    range: Vec<usize>,
    w: [Value; 2],
    c: BTreeMap<String, Value>,
}

pub fn affine_spec_from_json(text: &str) -> Result<AffineMaximizerSpec, FormatError> {
    let file: AffineJson = serde_json::from_str(text)?;
    let weights = [
        rational_from_json(&file.w[0])?,
        rational_from_json(&file.w[1])?,
    ];
    let mut constants = BTreeMap::new();
    for (key, value) in &file.c {
        let t = key
            .parse::<usize>()
            .map_err(|_| FormatError::ConstantKey(key.clone()))?;
        constants.insert(t, rational_from_json(value)?);
    }
    Ok(AffineMaximizerSpec::new(file.range, weights, constants)?)
}

pub fn affine_spec_to_json(spec: &AffineMaximizerSpec) -> Value {
    let [w1, w2] = spec.weights();
    let c: serde_json::Map<String, Value> = spec
        .constants()
        .iter()
        .map(|(t, c)| (t.to_string(), rational_to_json(c)))
        .collect();
    json!({
        "range": spec.range(),
        "w": [rational_to_json(&w1), rational_to_json(&w2)],
        "c": c,
    })
}

pub fn witness_to_json(w: &DeviationWitness) -> Value {
    json!({
        "mechanism": w.mechanism,
        "instance": InstanceJson::new(&w.v1, &w.v2),
        "deviator": w.deviator.number(),
        "misreport": BidderJson::from_valuation(&w.misreport),
        "utility_truth": rational_to_json(&w.utility_truth),
        "utility_lie": rational_to_json(&w.utility_lie),
    })
}

pub fn gap_to_json(spec: &AffineMaximizerSpec, height: Money, g: &GapDemo) -> Value {
    json!({
        "gap": {
            "m": g.m,
            "range": spec.range(),
            "missing": g.missing,
            "H": height,
            "chosen": g.chosen,
            "mir_welfare": g.mir_welfare,
            "opt_welfare": g.opt_welfare,
            "instance": InstanceJson::new(&g.v1, &g.v2),
        }
    })
}

pub fn summary_to_json(mechanism: &str, bound: Rational, s: &RatioSummary) -> Value {
    let opt = |r: &Option<Rational>| r.as_ref().map_or(Value::Null, rational_to_json);
    json!({
        "mechanism": mechanism,
        "trials": s.trials,
        "min": opt(&s.min),
        "mean": s.mean,
        "max": opt(&s.max),
        "unbounded": s.unbounded,
        "bound": rational_to_json(&bound),
        "within_bound": s.within(bound),
    })
}

/// Flat row shared by the JSON-lines and CSV record encodings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub m: usize,
    pub eps: String,
    pub seed: u64,
    pub alg: String,
    pub queries: u64,
    pub welfare: Money,
    pub opt: Money,
    pub ratio: Option<f64>,
}

impl From<&ExperimentRecord> for RecordRow {
    fn from(r: &ExperimentRecord) -> Self {
        Self {
            m: r.m,
            eps: r.eps.to_string(),
            seed: r.seed,
            alg: r.algorithm.name().into(),
            queries: r.queries,
            welfare: r.welfare,
            opt: r.opt_welfare,
            ratio: r.ratio(),
        }
    }
}

pub const CSV_HEADER: &str = "m,eps,seed,alg,queries,welfare,opt,ratio";

pub fn write_jsonl<W: Write>(out: &mut W, records: &[ExperimentRecord]) -> Result<(), FormatError> {
    for r in records {
        serde_json::to_writer(&mut *out, &RecordRow::from(r))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes the fixed header even when `records` is empty.
pub fn write_csv<W: Write>(out: &mut W, records: &[ExperimentRecord]) -> Result<(), FormatError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(RecordRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}
