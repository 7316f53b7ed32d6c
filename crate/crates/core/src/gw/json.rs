//! JSON encoding of GW elements.
//!
//! `{"field": {"kind": "Q"}, "terms": [{"coeff": 2, "class": -3}, ...]}`.
//! Rational classes are squarefree integers; F_p classes are `"1"` or
//! `"ns"`; real classes are `"+"` or `"-"`. Terms are sorted by class.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use super::form::{normal_form, QuadForm};
use super::{invariants, GWElement, GwError};
use crate::field::{Field, FpClass, RatClass, RealClass, SquareClass};

fn field_json(f: Field) -> Value {
    match f {
        Field::Rational => json!({"kind": "Q"}),
        Field::Finite(p) => json!({"kind": "Fp", "p": p}),
        Field::RealClosed => json!({"kind": "R"}),
    }
}

pub(crate) fn class_json(a: &SquareClass) -> Value {
    match a {
        SquareClass::Rational(r) => Value::Number(Number::from_str(&r.value().to_string()).unwrap()),
        _ => Value::String(a.encoding()),
    }
}

pub fn to_json(x: &GWElement) -> Value {
    let terms: Vec<Value> = x.terms().map(|(a, c)| json!({"coeff": c, "class": class_json(a)})).collect();
    json!({"field": field_json(x.field()), "terms": terms})
}

fn bad(msg: &str) -> GwError {
    GwError::Json(msg.into())
}

fn parse_field(v: &Value) -> Result<Field, GwError> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("field.kind missing"))?;
    match kind {
        "Q" => Ok(Field::Rational),
        "R" => Ok(Field::RealClosed),
        "Fp" => {
            let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("field.p missing"))?;
            Ok(Field::finite(p)?)
        }
        _ => Err(bad("unknown field kind")),
    }
}

fn parse_class(field: Field, v: &Value) -> Result<SquareClass, GwError> {
    match field {
        Field::Rational => {
            let text = match v {
                Value::Number(n) => n.to_string(),
                Value::String(s) => s.clone(),
                _ => return Err(bad("rational class must be an integer")),
            };
            let n = BigInt::from_str(&text).map_err(|_| bad("rational class must be an integer"))?;
            let c = RatClass::of_integer(&n)?;
            if c.value() != n {
                return Err(bad("rational class must be squarefree"));
            }
            Ok(SquareClass::Rational(c))
        }
        Field::Finite(_) => match v.as_str() {
            Some("1") => Ok(SquareClass::Finite(FpClass::One)),
            Some("ns") => Ok(SquareClass::Finite(FpClass::NonSquare)),
            _ => Err(bad("F_p class must be \"1\" or \"ns\"")),
        },
        Field::RealClosed => match v.as_str() {
            Some("+") => Ok(SquareClass::Real(RealClass::Pos)),
            Some("-") => Ok(SquareClass::Real(RealClass::Neg)),
            _ => Err(bad("real class must be \"+\" or \"-\"")),
        },
    }
}

pub fn from_json(v: &Value) -> Result<GWElement, GwError> {
    let field = parse_field(v.get("field").ok_or_else(|| bad("field missing"))?)?;
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms missing"))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let c = t.get("coeff").and_then(Value::as_i64).ok_or_else(|| bad("coeff must be an integer"))?;
        let a = parse_class(field, t.get("class").ok_or_else(|| bad("class missing"))?)?;
        out.push((a, c));
    }
    GWElement::from_terms(field, out)
}

/// Invariants of an element: rank, discriminant, signature (if any), the
/// number of hyperbolic planes and the anisotropic part of its normal form,
/// and the Hasse invariants of that anisotropic part over Q.
pub fn invariants_json(x: &GWElement) -> Value {
    let nf = normal_form(x);
    let mut m = Map::new();
    m.insert("rank".into(), json!(x.rank()));
    m.insert("disc".into(), class_json(&x.disc()));
    m.insert("signature".into(), x.signature().map_or(Value::Null, |s| json!(s)));
    m.insert("hyperbolic".into(), json!(nf.hyperbolic));
    m.insert("anisotropic".into(), Value::Array(nf.anisotropic.iter().map(class_json).collect()));
    if x.field() == Field::Rational {
        let hasse: Vec<Value> = match QuadForm::new(x.field(), nf.anisotropic.clone()) {
            Ok(a) => invariants(&a).hasse.iter().map(|(v, s)| json!({"place": v.to_string(), "sign": s})).collect(),
            Err(_) => Vec::new(),
        };
        m.insert("hasse".into(), Value::Array(hasse));
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::rat_class;

    #[test]
    fn encoding_shape() {
        let x = GWElement::from_terms(Field::Rational, [(rat_class(-3), 2), (rat_class(1), -1)]).unwrap();
        let v = to_json(&x);
        assert_eq!(v.to_string(), r#"{"field":{"kind":"Q"},"terms":[{"class":-3,"coeff":2},{"class":1,"coeff":-1}]}"#);
        assert_eq!(from_json(&v).unwrap(), x);
    }

    #[test]
    fn rejects_malformed() {
        let v: Value = serde_json::from_str(r#"{"field":{"kind":"Q"},"terms":[{"coeff":1,"class":12}]}"#).unwrap();
        assert!(from_json(&v).is_err());
        let v: Value = serde_json::from_str(r#"{"field":{"kind":"Fp","p":9},"terms":[]}"#).unwrap();
        assert!(from_json(&v).is_err());
    }
}
