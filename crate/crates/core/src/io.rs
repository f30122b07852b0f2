//! JSON file format for fields and ADM samples, and number formatting.
//!
//! A field is stored as
//!
//! ```json
//! {
//!   "metric": {"kind": "explicit", "d": [[0, 1], [1, 0]]},
//!   "measure": "uniform",
//!   "target": {"kind": "euclidean", "dim": 1},
//!   "values": [[0], [1]]
//! }
//! ```
//!
//! `metric` may instead be `{"kind": "euclidean" | "sup", "points": [...]}`;
//! `measure` is an array or `"uniform"`; `target` is one of
//! `euclidean`/`sup` (with `dim`), `finite` (with `d`) or `hamming` (with
//! `len`). Values are real arrays, integer indices or 0/1 arrays to match.
//! Unknown keys are rejected, so a metric given both as `d` and `points` is
//! an error. Output always uses an explicit metric, an explicit measure and
//! the key order above.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::adm::{AdmSample, EmpiricalAdm};
use crate::error::{Error, Result};
use crate::field::{uniform_measure, MMField};
use crate::lipschitz::{OnePointCandidate, RealFunction};
use crate::metric::FiniteMetric;
use crate::target::{TargetPoint, TargetSpace};

/// Significant digits used for printed numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal string of `round_sig(x)`.
pub fn format_number(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else {
        r.to_string()
    }
}

/// Rounds every float in a JSON value to [`SIGNIFICANT_DIGITS`] digits.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Json { line: e.line(), column: e.column(), message: e.to_string() }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum MetricDoc {
    Explicit { d: Vec<Vec<f64>> },
    Euclidean { points: Vec<Vec<f64>> },
    Sup { points: Vec<Vec<f64>> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum UniformTag {
    Uniform,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum MeasureDoc {
    Uniform(UniformTag),
    Weights(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum TargetDoc {
    Euclidean { dim: usize },
    Sup { dim: usize },
    Finite { d: Vec<Vec<f64>> },
    Hamming { len: usize },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDoc {
    metric: MetricDoc,
    measure: MeasureDoc,
    target: TargetDoc,
    values: Vec<Value>,
}

fn target_from_doc(doc: TargetDoc) -> Result<TargetSpace> {
    Ok(match doc {
        TargetDoc::Euclidean { dim } => TargetSpace::Euclidean { dim },
        TargetDoc::Sup { dim } => TargetSpace::Sup { dim },
        TargetDoc::Finite { d } => TargetSpace::finite(FiniteMetric::from_rows(d)?, crate::DEFAULT_TOL)?,
        TargetDoc::Hamming { len } => TargetSpace::Hamming { len },
    })
}

fn target_to_doc(t: &TargetSpace) -> TargetDoc {
    match t {
        TargetSpace::Euclidean { dim } => TargetDoc::Euclidean { dim: *dim },
        TargetSpace::Sup { dim } => TargetDoc::Sup { dim: *dim },
        TargetSpace::Finite(m) => TargetDoc::Finite { d: m.rows() },
        TargetSpace::Hamming { len } => TargetDoc::Hamming { len: *len },
    }
}

/// Reads one target point in the representation used by `target`.
pub fn point_from_json(target: &TargetSpace, v: &Value) -> Result<TargetPoint> {
    let bad = || Error::BadTargetPoint(v.to_string());
    let p = match target {
        TargetSpace::Euclidean { .. } | TargetSpace::Sup { .. } => TargetPoint::Vector(
            v.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_f64().ok_or_else(bad))
                .collect::<Result<_>>()?,
        ),
        TargetSpace::Finite(_) => TargetPoint::Index(v.as_u64().ok_or_else(bad)? as usize),
        TargetSpace::Hamming { .. } => TargetPoint::Bits(
            v.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| match x {
                    Value::Bool(b) => Ok(*b),
                    _ => match x.as_u64() {
                        Some(0) => Ok(false),
                        Some(1) => Ok(true),
                        _ => Err(bad()),
                    },
                })
                .collect::<Result<_>>()?,
        ),
    };
    target.check_point(&p)?;
    Ok(p)
}

pub fn point_to_json(p: &TargetPoint) -> Value {
    match p {
        TargetPoint::Vector(v) => Value::from(v.clone()),
        TargetPoint::Index(i) => Value::from(*i),
        TargetPoint::Bits(bits) => Value::from(bits.iter().map(|&b| u8::from(b)).collect::<Vec<_>>()),
    }
}

fn field_from_doc(doc: FieldDoc) -> Result<MMField> {
    let metric = metric_from_doc(doc.metric)?;
    let measure = match doc.measure {
        MeasureDoc::Uniform(_) => uniform_measure(metric.len()),
        MeasureDoc::Weights(w) => w,
    };
    let target = target_from_doc(doc.target)?;
    let values = doc.values.iter().map(|v| point_from_json(&target, v)).collect::<Result<Vec<_>>>()?;
    MMField::new(metric, measure, target, values)
}

/// Parses a field. Syntax and schema errors carry a line and column.
///
/// The result has consistent shapes but is not checked for the Lipschitz
/// condition; see [`validate_field`](crate::validate_field).
pub fn parse_field(text: &str) -> Result<MMField> {
    let doc: FieldDoc = serde_json::from_str(text).map_err(json_error)?;
    field_from_doc(doc)
}

/// The canonical JSON value of a field.
pub fn field_to_value(field: &MMField) -> Value {
    let doc = FieldDoc {
        metric: MetricDoc::Explicit { d: field.metric().rows() },
        measure: MeasureDoc::Weights(field.measure().to_vec()),
        target: target_to_doc(field.target()),
        values: field.values().iter().map(point_to_json).collect(),
    };
    serde_json::to_value(doc).expect("field documents always serialize")
}

/// Pretty-printed canonical JSON, without rounding.
pub fn field_to_json(field: &MMField) -> String {
    serde_json::to_string_pretty(&field_to_value(field)).expect("values always serialize")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleDoc {
    draw: u64,
    points: Vec<usize>,
    r: Vec<Vec<f64>>,
    b: Vec<Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AdmDoc {
    n: usize,
    seed: u64,
    target: TargetDoc,
    samples: Vec<SampleDoc>,
}

/// JSON dump of an empirical ADM distribution, for caching.
pub fn adm_to_json(d: &EmpiricalAdm) -> String {
    let doc = AdmDoc {
        n: d.n,
        seed: d.seed,
        target: target_to_doc(&d.target),
        samples: d
            .samples
            .iter()
            .map(|s| SampleDoc {
                draw: s.draw,
                points: s.points.clone(),
                r: s.r.rows(),
                b: s.b.iter().map(point_to_json).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("ADM documents always serialize")
}

pub fn parse_adm(text: &str) -> Result<EmpiricalAdm> {
    let doc: AdmDoc = serde_json::from_str(text).map_err(json_error)?;
    let target = target_from_doc(doc.target)?;
    let samples = doc
        .samples
        .into_iter()
        .map(|s| {
            let r = FiniteMetric::from_rows(s.r)?;
            if r.len() != doc.n || s.b.len() != doc.n || s.points.len() != doc.n {
                return Err(Error::DimensionMismatch { what: "ADM sample", got: r.len(), expected: doc.n });
            }
            let b = s.b.iter().map(|v| point_from_json(&target, v)).collect::<Result<_>>()?;
            Ok(AdmSample { r, b, points: s.points, seed: doc.seed, draw: s.draw })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalAdm { n: doc.n, samples, target, seed: doc.seed })
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MetricInput {
    Doc(MetricDoc),
    Points(Vec<Vec<f64>>),
}

fn metric_from_doc(doc: MetricDoc) -> Result<FiniteMetric> {
    match doc {
        MetricDoc::Explicit { d } => FiniteMetric::from_rows(d),
        MetricDoc::Euclidean { points } => FiniteMetric::euclidean(&points),
        MetricDoc::Sup { points } => FiniteMetric::sup_norm(&points),
    }
}

/// Parses a metric given as a `metric` object of the field format or as a
/// bare array of points in the Euclidean plane, space, etc.
pub fn parse_metric(text: &str) -> Result<FiniteMetric> {
    match serde_json::from_str(text).map_err(json_error)? {
        MetricInput::Doc(doc) => metric_from_doc(doc),
        MetricInput::Points(points) => FiniteMetric::euclidean(&points),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateDoc {
    f: Vec<f64>,
    b: Value,
}

/// Parses a one-point candidate `{"f": [...], "b": <target point>}`.
pub fn parse_candidate(text: &str, target: &TargetSpace) -> Result<OnePointCandidate> {
    let doc: CandidateDoc = serde_json::from_str(text).map_err(json_error)?;
    Ok(OnePointCandidate { f: RealFunction::new(doc.f), b: point_from_json(target, &doc.b)? })
}

/// Parses a JSON matrix `[[...], ...]`.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    serde_json::from_str(text).map_err(json_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adm::adm_sample;
    use crate::testutil::worked_pair;

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_number(123456.7890123456), "123456.789012");
        assert_eq!(format_number(0.1 + 0.2), "0.3");
    }

    #[test]
    fn parses_the_documented_example() {
        let f = parse_field(
            r#"{"metric": {"kind": "explicit", "d": [[0, 1], [1, 0]]},
                "measure": "uniform",
                "target": {"kind": "euclidean", "dim": 1},
                "values": [[0], [1]]}"#,
        )
        .unwrap();
        assert_eq!(f, worked_pair().0);
    }

    #[test]
    fn point_clouds_and_other_targets() {
        let f = parse_field(
            r#"{"metric": {"kind": "sup", "points": [[0, 0], [1, 3]]},
                "measure": [0.25, 0.75],
                "target": {"kind": "hamming", "len": 2},
                "values": [[0, 1], [true, true]]}"#,
        )
        .unwrap();
        assert_eq!(f.metric().get(0, 1), 3.0);
        assert_eq!(f.values()[0], TargetPoint::Bits(vec![false, true]));

        let g = parse_field(
            r#"{"metric": {"kind": "euclidean", "points": [[0, 0], [3, 4]]},
                "measure": "uniform",
                "target": {"kind": "finite", "d": [[0, 2], [2, 0]]},
                "values": [0, 1]}"#,
        )
        .unwrap();
        assert_eq!(g.metric().get(0, 1), 5.0);
        assert_eq!(g.values()[1], TargetPoint::Index(1));
    }

    #[test]
    fn rejects_ambiguous_and_malformed_input() {
        let both = r#"{"metric": {"kind": "explicit", "d": [[0]], "points": [[0]]},
            "measure": "uniform", "target": {"kind": "euclidean", "dim": 1}, "values": [[0]]}"#;
        assert!(matches!(parse_field(both), Err(Error::Json { .. })));

        match parse_field("{\n  \"metric\": [1,\n}") {
            Err(Error::Json { line, column, .. }) => assert_eq!((line, column), (2, 14)),
            other => panic!("{other:?}"),
        }

        let bad_value = r#"{"metric": {"kind": "explicit", "d": [[0]]},
            "measure": "uniform", "target": {"kind": "euclidean", "dim": 2}, "values": [[0]]}"#;
        assert!(matches!(parse_field(bad_value), Err(Error::BadTargetPoint(_))));
    }

    #[test]
    fn canonical_output_round_trips() {
        let (fx, _) = worked_pair();
        let text = field_to_json(&fx);
        assert_eq!(parse_field(&text).unwrap(), fx);
        let value = field_to_value(&fx);
        let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["metric", "measure", "target", "values"]);
    }

    #[test]
    fn metrics_and_candidates() {
        assert_eq!(parse_metric("[[0, 0], [3, 4]]").unwrap().get(0, 1), 5.0);
        assert_eq!(parse_metric(r#"{"kind": "sup", "points": [[0, 0], [3, 4]]}"#).unwrap().get(0, 1), 4.0);
        assert!(matches!(parse_metric("[[0, 0], [3, 4]"), Err(Error::Json { .. })));
        let c = parse_candidate(r#"{"f": [1, 2], "b": [0.5]}"#, &TargetSpace::real_line()).unwrap();
        assert_eq!(c.b, TargetPoint::real(0.5));
        assert!(parse_candidate(r#"{"f": [1], "b": 3}"#, &TargetSpace::real_line()).is_err());
    }

    #[test]
    fn adm_round_trip() {
        let (fx, _) = worked_pair();
        let d = adm_sample(&fx, 3, 5, 2).unwrap();
        assert_eq!(parse_adm(&adm_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn json_rounding() {
        let mut v = serde_json::json!({"a": [1.0 / 3.0, 2], "b": {"c": 0.1 + 0.2}});
        round_json(&mut v);
        assert_eq!(v.to_string(), r#"{"a":[0.333333333333,2],"b":{"c":0.3}}"#);
    }
}
