//! JSON encodings.
//!
//! Scalars: `RationalQ` as `"p/q"` (or `"n"`), `GaussianQi` as
//! `{"re": "p/q", "im": "p/q"}`, `FloatR` as a number, `FloatC` as
//! `{"re": x, "im": y}`. Matrices: `{"field": code, "entries": [[s, s], [s, s]]}`
//! in row-major order. Object keys are emitted sorted, so exact-field output is
//! byte-stable.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::classify::{SpectralVerdict, Verdict};
use crate::error::{Error, Result};
use crate::kcomm::fixtures::Fixture;
use crate::mat2::Mat2;
use crate::preserver::{CampaignReport, Decomposition, HSpec, MapTable, PairFailure, PairVerdict, ShiftVerdict};
use crate::sandwich::{IdentityOutcome, Pair, SandwichSystem};
use crate::scalar::{FieldKind, FieldTag, Scalar};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))
}

fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s, "1"),
            };
            let num = BigInt::from_str(num).map_err(|_| parse_err(format!("bad rational `{s}`")))?;
            let den = BigInt::from_str(den).map_err(|_| parse_err(format!("bad rational `{s}`")))?;
            if den.is_zero() {
                return Err(parse_err(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(num, den))
        }
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(BigInt::from(n.as_i64().unwrap_or(0)))),
        other => Err(parse_err(format!("expected a rational string, got {other}"))),
    }
}

fn float_from_json(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| parse_err(format!("expected a number, got {v}")))
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(q) => Value::String(q.to_string()),
        Scalar::Gaussian(z) => json!({"re": z.re().to_string(), "im": z.im().to_string()}),
        Scalar::Real(x) => json!(x),
        Scalar::Complex(z) => json!({"re": z.re, "im": z.im}),
    }
}

pub fn scalar_from_json(v: &Value, kind: FieldKind) -> Result<Scalar> {
    match kind {
        FieldKind::RationalQ => Ok(Scalar::Rational(rational_from_json(v)?)),
        FieldKind::GaussianQi => match v {
            Value::Object(o) => {
                let re = o.get("re").map(rational_from_json).transpose()?.unwrap_or_else(BigRational::zero);
                let im = o.get("im").map(rational_from_json).transpose()?.unwrap_or_else(BigRational::zero);
                Scalar::gaussian(kind, re, im)
            }
            // a bare rational is accepted as a real Gaussian rational
            other => Ok(Scalar::from_rational(kind, &rational_from_json(other)?)),
        },
        FieldKind::FloatR => Ok(Scalar::Real(float_from_json(v)?)),
        FieldKind::FloatC => match v {
            Value::Object(o) => {
                let re = o.get("re").map(float_from_json).transpose()?.unwrap_or(0.0);
                let im = o.get("im").map(float_from_json).transpose()?.unwrap_or(0.0);
                Ok(Scalar::Complex(Complex64::new(re, im)))
            }
            other => Ok(Scalar::Complex(Complex64::new(float_from_json(other)?, 0.0))),
        },
    }
}

pub fn field_from_json(v: &Value) -> Result<FieldKind> {
    v.as_str()
        .ok_or_else(|| parse_err("field must be a string"))?
        .parse()
}

fn tolerance_from(obj: &Map<String, Value>, field: FieldTag) -> Result<FieldTag> {
    match obj.get("tolerance") {
        Some(t) => Ok(field.with_tolerance(float_from_json(t)?)),
        None => Ok(field),
    }
}

pub fn mat_to_json(m: &Mat2) -> Value {
    let e = m.entries();
    json!({
        "field": m.kind().code(),
        "entries": [
            [scalar_to_json(&e[0][0]), scalar_to_json(&e[0][1])],
            [scalar_to_json(&e[1][0]), scalar_to_json(&e[1][1])],
        ],
    })
}

/// Accepts a matrix object, or a bare `[[s, s], [s, s]]` array when `ctx`
/// supplies the field. A matrix object's own `field` wins over `ctx`.
pub fn mat_from_json(v: &Value, ctx: Option<FieldTag>) -> Result<Mat2> {
    let (field, rows) = match v {
        Value::Object(o) => {
            let field = match (o.get("field"), ctx) {
                (Some(f), ctx) => {
                    let kind = field_from_json(f)?;
                    match ctx {
                        Some(c) if c.kind == kind => c,
                        _ => FieldTag::new(kind),
                    }
                }
                (None, Some(c)) => c,
                (None, None) => return Err(parse_err("matrix has no field")),
            };
            let field = tolerance_from(o, field)?;
            let rows = o.get("entries").ok_or_else(|| parse_err("matrix has no entries"))?;
            (field, rows)
        }
        Value::Array(_) => (ctx.ok_or_else(|| parse_err("bare matrix needs a field"))?, v),
        other => return Err(parse_err(format!("expected a matrix, got {other}"))),
    };
    let rows = rows
        .as_array()
        .filter(|r| r.len() == 2)
        .ok_or_else(|| parse_err("entries must be a 2x2 array"))?;
    let mut cells = Vec::with_capacity(4);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| parse_err("entries must be a 2x2 array"))?;
        for s in row {
            cells.push(scalar_from_json(s, field.kind)?);
        }
    }
    let [a, b, c, d]: [Scalar; 4] = cells.try_into().map_err(|_| parse_err("entries must be a 2x2 array"))?;
    Mat2::new(field, [[a, b], [c, d]])
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    let mut o = Map::new();
    o.insert("holds".into(), Value::Bool(v.holds));
    if let Some(w) = &v.witness {
        o.insert("witness".into(), mat_to_json(w));
    }
    if let Some(d) = &v.detail {
        o.insert("detail".into(), mat_to_json(d));
    }
    Value::Object(o)
}

pub fn spectral_verdict_to_json(v: &SpectralVerdict) -> Value {
    let mut out = verdict_to_json(&v.verdict);
    let o = out.as_object_mut().expect("verdict is an object");
    o.insert("discriminant".into(), scalar_to_json(&v.discriminant));
    if let Some(split) = &v.split {
        o.insert("lambda".into(), scalar_to_json(&split.lambda));
        o.insert("nilpotent".into(), mat_to_json(&split.nilpotent));
    }
    out
}

pub fn table_to_json(t: &MapTable) -> Value {
    let entries: Vec<Value> = t
        .entries
        .iter()
        .map(|(a, b)| json!({"in": mat_to_json(a), "out": mat_to_json(b)}))
        .collect();
    let mut o = Map::new();
    o.insert("field".into(), json!(t.field.kind.code()));
    o.insert("k".into(), json!(t.k));
    o.insert("entries".into(), Value::Array(entries));
    if !t.label.is_empty() {
        o.insert("label".into(), json!(t.label));
    }
    if !t.field.kind.is_exact() {
        o.insert("tolerance".into(), json!(t.field.tolerance));
    }
    Value::Object(o)
}

/// `default` fills in `field`/`k` when the document omits them.
pub fn table_from_json(v: &Value, default: Option<FieldTag>, default_k: Option<u32>) -> Result<MapTable> {
    let o = v.as_object().ok_or_else(|| parse_err("map table must be an object"))?;
    let field = match (o.get("field"), default) {
        (Some(f), d) => {
            let kind = field_from_json(f)?;
            match d {
                Some(d) if d.kind == kind => d,
                _ => FieldTag::new(kind),
            }
        }
        (None, Some(d)) => d,
        (None, None) => return Err(parse_err("map table has no field")),
    };
    let field = tolerance_from(o, field)?;
    let k = match (o.get("k"), default_k) {
        (Some(k), _) => k
            .as_u64()
            .and_then(|k| u32::try_from(k).ok())
            .ok_or_else(|| parse_err("k must be a nonnegative integer"))?,
        (None, Some(k)) => k,
        (None, None) => return Err(parse_err("map table has no k")),
    };
    let rows = o
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("map table needs an entries array"))?;
    let mut entries = Vec::with_capacity(rows.len());
    for row in rows {
        let a = row.get("in").ok_or_else(|| parse_err("entry without `in`"))?;
        let b = row.get("out").ok_or_else(|| parse_err("entry without `out`"))?;
        entries.push((mat_from_json(a, Some(field))?, mat_from_json(b, Some(field))?));
    }
    let label = o.get("label").and_then(Value::as_str).unwrap_or_default();
    MapTable::new(field, k, entries, label)
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    let h: Vec<Value> = d
        .h
        .iter()
        .map(|(a, v)| json!({"in": mat_to_json(a), "value": scalar_to_json(v)}))
        .collect();
    json!({
        "lambda": scalar_to_json(&d.lambda),
        "h": h,
        "verified_pairs": d.verified_pairs,
    })
}

/// Parses `zero`, `trace`, `det`/`determinant`, `random` or a table
/// `[{"in": matrix, "value": scalar}, ...]`.
pub fn hspec_from_json(v: &Value, field: FieldTag, seed: u64) -> Result<HSpec> {
    match v {
        Value::String(s) => match s.as_str() {
            "zero" => Ok(HSpec::Zero),
            "trace" => Ok(HSpec::Trace),
            "det" | "determinant" => Ok(HSpec::Determinant),
            "random" => Ok(HSpec::Random { seed }),
            other => Err(parse_err(format!("unknown h rule `{other}`"))),
        },
        Value::Array(rows) => {
            let mut table = Vec::with_capacity(rows.len());
            for row in rows {
                let a = row.get("in").ok_or_else(|| parse_err("h entry without `in`"))?;
                let val = row.get("value").ok_or_else(|| parse_err("h entry without `value`"))?;
                table.push((mat_from_json(a, Some(field))?, scalar_from_json(val, field.kind)?));
            }
            Ok(HSpec::Table(table))
        }
        other => Err(parse_err(format!("bad h specification {other}"))),
    }
}

pub fn pair_failure_to_json(f: &PairFailure) -> Value {
    json!({
        "a": mat_to_json(&f.a),
        "b": mat_to_json(&f.b),
        "mapped": mat_to_json(&f.mapped),
        "original": mat_to_json(&f.original),
    })
}

pub fn pair_verdict_to_json(v: &PairVerdict) -> Value {
    let mut o = Map::new();
    o.insert("holds".into(), Value::Bool(v.holds));
    o.insert("checked".into(), json!(v.checked));
    if let Some(f) = &v.failure {
        o.insert("failure".into(), pair_failure_to_json(f));
    }
    Value::Object(o)
}

pub fn shift_verdict_to_json(v: &ShiftVerdict) -> Value {
    let mut o = Map::new();
    o.insert("holds".into(), Value::Bool(v.holds));
    o.insert("residues".into(), Value::Array(v.residues.iter().map(mat_to_json).collect()));
    if let Some(i) = v.failing {
        o.insert("failing".into(), json!(i));
    }
    Value::Object(o)
}

fn pairs_from_json(v: Option<&Value>, ctx: Option<FieldTag>, side: &str) -> Result<Vec<Pair>> {
    let rows = v
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(format!("sandwich system needs a `{side}` array")))?;
    rows.iter()
        .map(|p| {
            let p = p
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| parse_err("each sandwich term is a [A, B] pair"))?;
            Ok((mat_from_json(&p[0], ctx)?, mat_from_json(&p[1], ctx)?))
        })
        .collect()
}

pub fn system_from_json(v: &Value, ctx: Option<FieldTag>) -> Result<SandwichSystem> {
    let o = v.as_object().ok_or_else(|| parse_err("sandwich system must be an object"))?;
    let ctx = match o.get("field") {
        Some(f) => Some(FieldTag::new(field_from_json(f)?)),
        None => ctx,
    };
    let left = pairs_from_json(o.get("left"), ctx, "left")?;
    let right = pairs_from_json(o.get("right"), ctx, "right")?;
    SandwichSystem::new(left, right)
}

pub fn system_to_json(s: &SandwichSystem) -> Value {
    let side = |ps: &[Pair]| -> Value {
        Value::Array(
            ps.iter()
                .map(|(a, b)| json!([mat_to_json(a), mat_to_json(b)]))
                .collect(),
        )
    };
    json!({"left": side(&s.left), "right": side(&s.right)})
}

pub fn identity_outcome_to_json(o: &IdentityOutcome) -> Value {
    match o {
        IdentityOutcome::NotAnIdentity {
            witness,
            left,
            right,
        } => json!({
            "holds": false,
            "witness": mat_to_json(witness),
            "left": mat_to_json(left),
            "right": mat_to_json(right),
        }),
        IdentityOutcome::Coefficients { mode, coefficients } => json!({
            "holds": true,
            "mode": mode.code(),
            "coefficients": coefficients
                .iter()
                .map(|row| row.iter().map(scalar_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
    }
}

pub fn report_to_json(r: &CampaignReport) -> Value {
    json!({
        "field": r.field.kind.code(),
        "k": r.k,
        "trials": r.trials,
        "seed": r.seed,
        "valid_cases": r.valid_cases,
        "roundtrips": r.roundtrips,
        "lambdas": r.lambdas.iter().map(scalar_to_json).collect::<Vec<_>>(),
        "perturbed_cases": r.perturbed_cases,
        "rejections": r.rejections,
        "accepted_impostors": r.accepted_impostors,
        "rejection_codes": r.rejection_codes,
        "anomalies": r.anomalies,
    })
}

pub fn fixture_to_json(f: &Fixture) -> Value {
    json!({
        "name": f.name,
        "k": f.k,
        "a": mat_to_json(&f.a),
        "b": mat_to_json(&f.b),
        "bracket": mat_to_json(&f.expected),
    })
}

pub fn fixture_from_json(v: &Value) -> Result<Fixture> {
    let get = |key: &str| v.get(key).ok_or_else(|| parse_err(format!("fixture without `{key}`")));
    Ok(Fixture {
        name: get("name")?.as_str().unwrap_or_default().to_string(),
        k: get("k")?
            .as_u64()
            .and_then(|k| u32::try_from(k).ok())
            .ok_or_else(|| parse_err("fixture k must be an integer"))?,
        a: mat_from_json(get("a")?, None)?,
        b: mat_from_json(get("b")?, None)?,
        expected: mat_from_json(get("bracket")?, None)?,
    })
}

/// `{"error": code, "message": ...}` plus any structured evidence the error carries.
pub fn error_to_json(e: &Error) -> Value {
    let mut o = Map::new();
    o.insert("error".into(), json!(e.code()));
    o.insert("message".into(), json!(e.to_string()));
    match e {
        Error::NotTheoremForm { stage, residue } => {
            o.insert("stage".into(), json!(stage.code()));
            o.insert("residue".into(), mat_to_json(residue));
        }
        Error::LambdaNotRootOfUnity {
            lambda,
            order,
            power,
        } => {
            o.insert("lambda".into(), scalar_to_json(lambda));
            o.insert("order".into(), json!(order));
            o.insert("power".into(), scalar_to_json(power));
        }
        Error::PreservationFailed(f) => {
            o.insert("failure".into(), pair_failure_to_json(f));
        }
        Error::NotScalarPlusNilpotent { discriminant } => {
            o.insert("discriminant".into(), scalar_to_json(discriminant));
        }
        Error::ProbeSetIncomplete { missing } => {
            o.insert("missing".into(), Value::Array(missing.iter().map(mat_to_json).collect()));
        }
        Error::InputNotInTable(m) | Error::DuplicateInput(m) => {
            o.insert("input".into(), mat_to_json(m));
        }
        _ => {}
    }
    Value::Object(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        let k = FieldKind::RationalQ;
        assert_eq!(scalar_from_json(&json!("2/4"), k).unwrap(), Scalar::ratio(k, 1, 2));
        assert_eq!(scalar_from_json(&json!("-3"), k).unwrap(), Scalar::from_i64(k, -3));
        assert_eq!(scalar_from_json(&json!(7), k).unwrap(), Scalar::from_i64(k, 7));
        assert!(scalar_from_json(&json!("1/0"), k).is_err());
        assert!(scalar_from_json(&json!(0.5), k).is_err());
        assert_eq!(scalar_to_json(&Scalar::ratio(k, -6, 10)), json!("-3/5"));
    }

    #[test]
    fn gaussian_objects() {
        let k = FieldKind::GaussianQi;
        let z = scalar_from_json(&json!({"re": "1/2", "im": "-1"}), k).unwrap();
        assert_eq!(scalar_to_json(&z), json!({"im": "-1", "re": "1/2"}));
    }

    #[test]
    fn matrix_forms() {
        let m = mat_from_json(&json!({"field": "Q", "entries": [["1", "1/2"], ["0", "-2"]]}), None).unwrap();
        assert_eq!(m.get(0, 1), &Scalar::ratio(FieldKind::RationalQ, 1, 2));
        let bare = mat_from_json(&json!([["1", "1/2"], ["0", "-2"]]), Some(FieldTag::rational())).unwrap();
        assert_eq!(m, bare);
        assert!(mat_from_json(&json!([["1"], ["0", "-2"]]), Some(FieldTag::rational())).is_err());
        assert!(mat_from_json(&json!([["1", "0"], ["0", "1"]]), None).is_err());

        let c = mat_from_json(&json!({"field": "C64", "tolerance": 1e-3, "entries": [[1.0, {"re": 0, "im": 1}], [0, 0]]}), None).unwrap();
        assert_eq!(c.field().tolerance, 1e-3);
    }

    #[test]
    fn output_is_canonical() {
        let m = Mat2::unit(FieldTag::rational(), 0, 1);
        let text = to_canonical_string(&mat_to_json(&m));
        let again = to_canonical_string(&parse(&text).unwrap());
        assert_eq!(text, again);
        assert!(text.find("\"entries\"").unwrap() < text.find("\"field\"").unwrap());
    }
}
