//! JSON files for instances, cost oracles and mechanisms.
//!
//! Exact numbers are written as strings (`"3"`, `"5/6"`); readers also accept
//! JSON numbers, converted exactly from their decimal text. Costs may be `"inf"`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cost::{format_rational, parse_rational, CostValue, Rational};
use crate::envelope::MixturePair;
use crate::error::{Error, Result};
use crate::instance::{
    AdditiveCostMatrix, DeterministicMechanism, Instance, OutcomeSpace, RandomizedMechanism, ReportingRelation,
};
use crate::oracle::GeneralInstance;
use crate::submodular::chain::ChainDistribution;
use crate::submodular::oracle::{AdditiveOracle, CostOracle, OverheadOracle, TableOracle};

/// Provenance of a generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Value,
}

/// Which combinatorial cost a file describes.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleSpec {
    /// The file's cost matrix, summed over types.
    Additive,
    /// Cost matrix plus a fixed charge when some type leaves the lowest outcome.
    Overhead(Rational),
    /// All `m^n` values in index order, type 0 fastest.
    Table(Vec<CostValue>),
}

impl OracleSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            OracleSpec::Additive => "additive",
            OracleSpec::Overhead(_) => "additive_plus_overhead",
            OracleSpec::Table(_) => "table",
        }
    }

    pub fn build(&self, instance: &Instance) -> Result<Box<dyn CostOracle>> {
        Ok(match self {
            OracleSpec::Additive => Box::new(AdditiveOracle::new(instance.costs().clone())),
            OracleSpec::Overhead(c0) => Box::new(OverheadOracle::new(instance.costs().clone(), c0.clone())?),
            OracleSpec::Table(values) => Box::new(TableOracle::new(instance.n(), instance.m(), values.clone())?),
        })
    }

    fn to_json(&self) -> Value {
        match self {
            OracleSpec::Additive => json!({ "kind": "additive" }),
            OracleSpec::Overhead(c0) => json!({ "kind": "additive_plus_overhead", "overhead": format_rational(c0) }),
            OracleSpec::Table(values) => json!({
                "kind": "table",
                "values": values.iter().map(cost_json).collect::<Vec<_>>(),
            }),
        }
    }

    fn from_json(value: &Value) -> Result<Self> {
        let kind = value.get("kind").and_then(Value::as_str).ok_or_else(|| bad("oracle needs a \"kind\""))?;
        match kind {
            "additive" => Ok(OracleSpec::Additive),
            "additive_plus_overhead" => {
                let c0 = value.get("overhead").ok_or_else(|| bad("overhead oracle needs \"overhead\""))?;
                Ok(OracleSpec::Overhead(rational_from(c0)?))
            }
            "table" => {
                let values = array(value.get("values"), "values")?
                    .iter()
                    .map(cost_from)
                    .collect::<Result<_>>()?;
                Ok(OracleSpec::Table(values))
            }
            other => Err(bad(&format!("unknown oracle kind {other:?}"))),
        }
    }
}

/// Everything an instance file can carry.
#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub instance: Instance,
    pub meta: Option<Meta>,
    pub oracle: Option<OracleSpec>,
}

impl InstanceFile {
    pub fn plain(instance: Instance) -> Self {
        Self {
            instance,
            meta: None,
            oracle: None,
        }
    }

    pub fn oracle_spec(&self) -> OracleSpec {
        self.oracle.clone().unwrap_or(OracleSpec::Additive)
    }

    pub fn to_json(&self) -> Value {
        let inst = &self.instance;
        let mut out = json!({
            "outcomes": inst.outcomes().utilities().iter().map(format_rational).collect::<Vec<_>>(),
            "relation": relation_json(inst.relation()),
            "costs": costs_json(inst.costs()),
        });
        if let Some(meta) = &self.meta {
            out["meta"] = serde_json::to_value(meta).expect("meta serializes");
        }
        if let Some(oracle) = &self.oracle {
            out["oracle"] = oracle.to_json();
        }
        out
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("values serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        if value.get("utilities").is_some() {
            return Err(bad("per-type utilities need the brute-force oracle, not a common-utility solver"));
        }
        let outcomes = array(value.get("outcomes"), "outcomes")?
            .iter()
            .map(rational_from)
            .collect::<Result<Vec<_>>>()?;
        let costs = parse_costs(&value)?;
        let relation = parse_relation(&value, costs.n_rows())?;
        let instance = Instance::new(OutcomeSpace::new(outcomes), relation, costs)?;
        let meta = value.get("meta").map(|m| serde_json::from_value(m.clone())).transpose()?;
        let oracle = value.get("oracle").map(OracleSpec::from_json).transpose()?;
        Ok(Self { instance, meta, oracle })
    }
}

/// An instance where every type ranks outcomes by its own utility row.
/// Only the brute-force oracles accept these.
#[derive(Clone, Debug)]
pub struct PerTypeFile {
    pub instance: GeneralInstance,
    pub meta: Option<Meta>,
}

impl PerTypeFile {
    pub fn to_json(&self) -> Value {
        let inst = &self.instance;
        let mut out = json!({
            "utilities": inst.utilities.iter()
                .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "relation": relation_json(&inst.relation),
            "costs": costs_json(&inst.costs),
        });
        if let Some(meta) = &self.meta {
            out["meta"] = serde_json::to_value(meta).expect("meta serializes");
        }
        out
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("values serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let utilities = array(value.get("utilities"), "utilities")?
            .iter()
            .map(|row| array(Some(row), "utility row")?.iter().map(rational_from).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let costs = parse_costs(&value)?;
        let relation = parse_relation(&value, costs.n_rows())?;
        let meta = value.get("meta").map(|m| serde_json::from_value(m.clone())).transpose()?;
        Ok(Self {
            instance: GeneralInstance::new(utilities, relation, costs)?,
            meta,
        })
    }
}

/// Either kind of instance file, told apart by a top-level `"utilities"` key.
#[derive(Clone, Debug)]
pub enum AnyInstanceFile {
    Common(InstanceFile),
    PerType(PerTypeFile),
}

impl AnyInstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        if value.get("utilities").is_some() {
            PerTypeFile::parse(text).map(AnyInstanceFile::PerType)
        } else {
            InstanceFile::parse(text).map(AnyInstanceFile::Common)
        }
    }
}

/// A mechanism file: deterministic, exact randomized, or a chain over outcome vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum MechanismFile {
    Deterministic(DeterministicMechanism),
    Randomized {
        mechanism: RandomizedMechanism,
        support: Option<Vec<MixturePair>>,
    },
    Chain(ChainDistribution),
}

impl MechanismFile {
    /// The per-type outcome distributions.
    pub fn as_randomized(&self, m: usize) -> RandomizedMechanism {
        match self {
            MechanismFile::Deterministic(d) => RandomizedMechanism::point_mass(d, m),
            MechanismFile::Randomized { mechanism, .. } => mechanism.clone(),
            MechanismFile::Chain(c) => RandomizedMechanism::from_f64_rows(&c.marginals(m)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            MechanismFile::Deterministic(d) => json!({ "kind": "deterministic", "assignment": d.assignment }),
            MechanismFile::Randomized { mechanism, support } => {
                let rows: Vec<Vec<Value>> = mechanism
                    .rows()
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|p| {
                                if mechanism.is_approximate() {
                                    json!(crate::cost::to_f64(p))
                                } else {
                                    json!(format_rational(p))
                                }
                            })
                            .collect()
                    })
                    .collect();
                let mut out = json!({ "kind": "randomized", "rows": rows });
                if let Some(support) = support {
                    out["support"] = support
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            json!({ "type": i, "lower": p.lower, "upper": p.upper, "alpha": format_rational(&p.alpha) })
                        })
                        .collect();
                }
                out
            }
            MechanismFile::Chain(c) => json!({
                "kind": "chain",
                "support": c.support.iter()
                    .map(|(v, p)| json!({ "vector": v, "prob": p }))
                    .collect::<Vec<_>>(),
            }),
        }
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("values serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let kind = match value.get("kind").and_then(Value::as_str) {
            Some(k) => k,
            // a bare chain file carries only its support
            None if value.get("support").is_some() => "chain",
            None => return Err(bad("mechanism needs a \"kind\"")),
        };
        match kind {
            "deterministic" => {
                let assignment: Vec<usize> = serde_json::from_value(
                    value.get("assignment").cloned().ok_or_else(|| bad("missing \"assignment\""))?,
                )?;
                Ok(MechanismFile::Deterministic(DeterministicMechanism::new(assignment)))
            }
            "randomized" => {
                let rows = array(value.get("rows"), "rows")?
                    .iter()
                    .map(|row| array(Some(row), "row")?.iter().map(rational_from).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let support = match value.get("support") {
                    None => None,
                    Some(s) => Some(
                        array(Some(s), "support")?
                            .iter()
                            .map(|p| {
                                let index = |key: &str| {
                                    p.get(key)
                                        .and_then(Value::as_u64)
                                        .map(|v| v as usize)
                                        .ok_or_else(|| bad(&format!("support entry needs {key:?}")))
                                };
                                Ok(MixturePair {
                                    lower: index("lower")?,
                                    upper: index("upper")?,
                                    alpha: rational_from(p.get("alpha").ok_or_else(|| bad("missing alpha"))?)?,
                                })
                            })
                            .collect::<Result<Vec<_>>>()?,
                    ),
                };
                Ok(MechanismFile::Randomized {
                    mechanism: RandomizedMechanism::new(rows),
                    support,
                })
            }
            "chain" => {
                let support = array(value.get("support"), "support")?
                    .iter()
                    .map(|e| {
                        let vector: Vec<usize> = serde_json::from_value(
                            e.get("vector").cloned().ok_or_else(|| bad("chain entry needs \"vector\""))?,
                        )?;
                        let prob = e.get("prob").and_then(Value::as_f64).ok_or_else(|| bad("chain entry needs \"prob\""))?;
                        Ok((vector, prob))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(MechanismFile::Chain(ChainDistribution { support }))
            }
            other => Err(bad(&format!("unknown mechanism kind {other:?}"))),
        }
    }
}

fn relation_json(relation: &ReportingRelation) -> Value {
    json!(relation.pairs().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>())
}

fn costs_json(costs: &AdditiveCostMatrix) -> Value {
    json!(costs
        .rows()
        .iter()
        .map(|row| row.iter().map(cost_json).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn parse_costs(value: &Value) -> Result<AdditiveCostMatrix> {
    let rows = array(value.get("costs"), "costs")?
        .iter()
        .map(|row| array(Some(row), "cost row")?.iter().map(cost_from).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(AdditiveCostMatrix::new(rows))
}

fn parse_relation(value: &Value, n: usize) -> Result<ReportingRelation> {
    let pairs = array(value.get("relation"), "relation")?
        .iter()
        .map(|p| {
            let pair: [usize; 2] =
                serde_json::from_value(p.clone()).map_err(|_| bad("relation entries are [i, i'] pairs of indices"))?;
            Ok((pair[0], pair[1]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReportingRelation::new(n, pairs))
}

fn bad(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}

fn array<'a>(value: Option<&'a Value>, what: &str) -> Result<&'a Vec<Value>> {
    value
        .and_then(Value::as_array)
        .ok_or_else(|| bad(&format!("{what} must be an array")))
}

fn rational_from(value: &Value) -> Result<Rational> {
    match value {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(bad(&format!("expected a number, got {other}"))),
    }
}

fn cost_from(value: &Value) -> Result<CostValue> {
    match value {
        Value::String(s) if s.trim().eq_ignore_ascii_case("inf") => Ok(CostValue::Infinite),
        other => Ok(CostValue::Finite(rational_from(other)?)),
    }
}

fn cost_json(value: &CostValue) -> Value {
    match value {
        CostValue::Finite(v) => json!(format_rational(v)),
        CostValue::Infinite => json!("inf"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{int, ratio};
    use crate::generators::gap_instance;

    #[test]
    fn gap_instance_round_trip() {
        let file = InstanceFile {
            instance: gap_instance(),
            meta: Some(Meta {
                generator: "gap".into(),
                seed: None,
                params: json!({}),
            }),
            oracle: None,
        };
        let text = file.to_string_pretty();
        let back = InstanceFile::parse(&text).unwrap();
        assert_eq!(back.instance, file.instance);
        assert_eq!(back.meta, file.meta);
        assert_eq!(back.to_string_pretty(), text);
    }

    #[test]
    fn numbers_and_strings() {
        let text = r#"{"outcomes":[0, "1/2", 1.5], "relation":[[0,0]], "costs":[[1, "inf", "2/3"]]}"#;
        let file = InstanceFile::parse(text).unwrap();
        assert_eq!(file.instance.outcomes().utility(1), &ratio(1, 2));
        assert_eq!(file.instance.outcomes().utility(2), &ratio(3, 2));
        assert_eq!(file.instance.cost(0, 1), &CostValue::Infinite);
        assert!(InstanceFile::parse(r#"{"outcomes":[0],"relation":[[0]],"costs":[[1]]}"#).is_err());
    }

    #[test]
    fn oracle_specs() {
        let mut file = InstanceFile::plain(gap_instance());
        file.oracle = Some(OracleSpec::Overhead(int(3)));
        let back = InstanceFile::parse(&file.to_string_pretty()).unwrap();
        assert_eq!(back.oracle, file.oracle);
        let oracle = back.oracle_spec().build(&back.instance).unwrap();
        assert_eq!(oracle.name(), "additive_plus_overhead");
    }

    #[test]
    fn per_type_round_trip() {
        use crate::cnf::CnfFormula;
        use crate::generators::{minsat_reduction_single_peaked, ReductionParams};
        let f = CnfFormula::from_signed(1, &[&[1], &[-1]]).unwrap();
        let file = PerTypeFile {
            instance: minsat_reduction_single_peaked(&f, &ReductionParams::defaults(&f)).unwrap(),
            meta: None,
        };
        let text = file.to_string_pretty();
        match AnyInstanceFile::parse(&text).unwrap() {
            AnyInstanceFile::PerType(back) => assert_eq!(back.to_string_pretty(), text),
            AnyInstanceFile::Common(_) => panic!("read as a common-utility instance"),
        }
        assert!(InstanceFile::parse(&text).is_err());
    }

    #[test]
    fn mechanisms_round_trip() {
        let det = MechanismFile::Deterministic(DeterministicMechanism::new(vec![1, 0, 2]));
        assert_eq!(MechanismFile::parse(&det.to_string_pretty()).unwrap(), det);
        let rand = MechanismFile::Randomized {
            mechanism: RandomizedMechanism::new(vec![vec![ratio(1, 2), ratio(1, 2)]]),
            support: Some(vec![MixturePair {
                lower: 0,
                upper: 1,
                alpha: ratio(1, 2),
            }]),
        };
        assert_eq!(MechanismFile::parse(&rand.to_string_pretty()).unwrap(), rand);
        let chain = MechanismFile::Chain(ChainDistribution {
            support: vec![(vec![1, 1], 0.25), (vec![0, 1], 0.75)],
        });
        assert_eq!(MechanismFile::parse(&chain.to_string_pretty()).unwrap(), chain);
        let bare = MechanismFile::parse(r#"{"support":[{"vector":[0],"prob":1.0}]}"#).unwrap();
        assert!(matches!(bare, MechanismFile::Chain(_)));
    }
}
