//! JSON formats for operator specs, completion certificates, and
//! classification reports.
//!
//! Coefficients are exact: a complex coefficient is a two-element
//! array `[re, im]`, where each component is an integer literal, an
//! exact decimal (number or string, e.g. `-0.5` or `"0.5"`), a
//! rational string `"p/q"`, or a two-integer array `[num, den]`. A
//! bare component is accepted as a real coefficient. Inexact entries
//! (nonzero-radius balls) are written as `{"mid": coeff, "rad":
//! component}` and read back as enclosing disks.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Number, Value};

use crate::browder::OperatorClass;
use crate::completion::{
    CompletionCertificate, CompletionKind, DimensionCheck, LeftDecomposition, RightDecomposition,
};
use crate::error::{CoreError, Result};
use crate::fredholm::ExtNat;
use crate::linalg::ball::BallMatrix;
use crate::num::ball::Ball;
use crate::num::gaussian::GaussianRational;
use crate::op::bet::{BetOperator, RankOne};
use crate::op::vector::{BlockVector, ExpPolyVector, Tail};
use crate::poly::roots::AlgebraicNumber;
use crate::symbol::{LaurentSymbol, MatrixSymbol};
use crate::tri::TriState;

fn parse_err(msg: impl Into<String>) -> CoreError {
    CoreError::Parse(msg.into())
}

/// Parse an exact rational: integer, `p/q`, or a terminating decimal
/// with optional exponent.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| parse_err(format!("bad rational numerator '{num}'")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| parse_err(format!("bad rational denominator '{den}'")))?;
        if d.is_zero() {
            return Err(parse_err(format!("zero denominator in '{s}'")));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || parse_err(format!("bad decimal literal '{s}'"));
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, i64::from_str(e).map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad());
    }
    let n = BigInt::from_str(&digits).map_err(|_| bad())?;
    let shift = exp10 - frac_part.len() as i64;
    let pow = BigInt::from(10).pow(shift.unsigned_abs() as u32);
    Ok(if shift >= 0 {
        BigRational::from_integer(n * pow)
    } else {
        BigRational::new(n, pow)
    })
}

fn number_value(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal"))
}

fn component_to_value(x: &BigRational) -> Value {
    if x.denom().is_one() {
        number_value(x.numer())
    } else {
        Value::Array(vec![number_value(x.numer()), number_value(x.denom())])
    }
}

fn value_to_component(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_decimal(&n.to_string()),
        Value::String(s) => parse_rational(s),
        Value::Array(parts) if parts.len() == 2 => {
            let num = match &parts[0] {
                Value::Number(n) => BigInt::from_str(&n.to_string())
                    .map_err(|_| parse_err("rational pair entries must be integers"))?,
                other => return Err(parse_err(format!("bad numerator {other}"))),
            };
            let den = match &parts[1] {
                Value::Number(n) => BigInt::from_str(&n.to_string())
                    .map_err(|_| parse_err("rational pair entries must be integers"))?,
                other => return Err(parse_err(format!("bad denominator {other}"))),
            };
            if den.is_zero() {
                return Err(parse_err("zero denominator in rational pair"));
            }
            Ok(BigRational::new(num, den))
        }
        other => Err(parse_err(format!("bad rational component {other}"))),
    }
}

fn coeff_to_value(x: &GaussianRational) -> Value {
    Value::Array(vec![component_to_value(&x.re), component_to_value(&x.im)])
}

fn value_to_coeff(v: &Value) -> Result<GaussianRational> {
    if let Value::Array(parts) = v {
        if parts.len() == 2 {
            // Either [re, im] or a [num, den] component; integer pairs
            // are read as rationals only when both entries are bare
            // integers is ambiguous, so pairs of numbers mean [re, im]
            // unless nested.
            if let (Ok(re), Ok(im)) = (value_to_component(&parts[0]), value_to_component(&parts[1]))
            {
                return Ok(GaussianRational::new(re, im));
            }
        }
    }
    value_to_component(v).map(GaussianRational::from_real)
}

fn ball_to_value(b: &Ball) -> Value {
    if b.is_exact() {
        coeff_to_value(&b.mid)
    } else {
        let mut m = Map::new();
        m.insert("mid".into(), coeff_to_value(&b.mid));
        m.insert("rad".into(), component_to_value(&b.rad));
        Value::Object(m)
    }
}

fn value_to_ball(v: &Value) -> Result<Ball> {
    if let Value::Object(m) = v {
        let mid = value_to_coeff(
            m.get("mid")
                .ok_or_else(|| parse_err("ball without 'mid'"))?,
        )?;
        let rad = value_to_component(
            m.get("rad")
                .ok_or_else(|| parse_err("ball without 'rad'"))?,
        )?;
        if rad.is_negative() {
            return Err(parse_err("negative ball radius"));
        }
        return Ok(Ball::new(mid, rad));
    }
    Ok(Ball::exact(value_to_coeff(v)?))
}

fn root_to_value(root: &AlgebraicNumber) -> Result<Value> {
    match root {
        AlgebraicNumber::Exact(v) => Ok(coeff_to_value(v)),
        AlgebraicNumber::Isolated(_) => Err(CoreError::Unsupported(
            "tail root is not an exact rational; this vector has no faithful JSON form".into(),
        )),
    }
}

fn vector_to_value(x: &ExpPolyVector) -> Result<Value> {
    let head = x.head.iter().map(ball_to_value).collect();
    let mut tails = Vec::new();
    for t in &x.tails {
        let mut m = Map::new();
        m.insert("root".into(), root_to_value(&t.root)?);
        m.insert(
            "poly".into(),
            Value::Array(t.poly.iter().map(ball_to_value).collect()),
        );
        tails.push(Value::Object(m));
    }
    let mut m = Map::new();
    m.insert("head".into(), Value::Array(head));
    m.insert("tails".into(), Value::Array(tails));
    Ok(Value::Object(m))
}

fn value_to_vector(v: &Value) -> Result<ExpPolyVector> {
    let m = match v {
        Value::Object(m) => m,
        other => {
            return Err(parse_err(format!(
                "vector spec must be an object, got {other}"
            )))
        }
    };
    let head = match m.get("head") {
        Some(Value::Array(items)) => items
            .iter()
            .map(value_to_ball)
            .collect::<Result<Vec<_>>>()?,
        Some(other) => return Err(parse_err(format!("'head' must be an array, got {other}"))),
        None => Vec::new(),
    };
    let mut tails = Vec::new();
    match m.get("tails") {
        Some(Value::Array(items)) => {
            for item in items {
                let t = match item {
                    Value::Object(t) => t,
                    other => return Err(parse_err(format!("tail must be an object, got {other}"))),
                };
                let root = value_to_coeff(
                    t.get("root")
                        .ok_or_else(|| parse_err("tail without 'root'"))?,
                )?;
                let poly = match t.get("poly") {
                    Some(Value::Array(cs)) => {
                        cs.iter().map(value_to_ball).collect::<Result<Vec<_>>>()?
                    }
                    Some(other) => {
                        return Err(parse_err(format!("'poly' must be an array, got {other}")))
                    }
                    None => return Err(parse_err("tail without 'poly'")),
                };
                tails.push(Tail::checked(AlgebraicNumber::exact(root), poly)?);
            }
        }
        Some(other) => return Err(parse_err(format!("'tails' must be an array, got {other}"))),
        None => {}
    }
    let mut x = ExpPolyVector { head, tails };
    x.normalize();
    Ok(x)
}

fn symbol_to_value(p: &LaurentSymbol) -> Value {
    let mut m = Map::new();
    for (d, c) in p.iter() {
        m.insert(d.to_string(), coeff_to_value(c));
    }
    Value::Object(m)
}

fn value_to_symbol(v: &Value) -> Result<LaurentSymbol> {
    let m = match v {
        Value::Object(m) => m,
        other => return Err(parse_err(format!("symbol must be an object, got {other}"))),
    };
    let mut p = LaurentSymbol::zero();
    for (key, val) in m {
        let d = i64::from_str(key)
            .map_err(|_| parse_err(format!("symbol exponent '{key}' is not an integer")))?;
        let c = value_to_coeff(val)?;
        let cur = p.coeff(d);
        p.set(d, &cur + &c);
    }
    Ok(p)
}

/// Serialize a one-component operator as an operator-spec document.
pub fn operator_to_value(t: &BetOperator) -> Result<Value> {
    if t.dim() != 1 {
        return Err(CoreError::Unsupported(
            "operator specs describe one-component operators only".into(),
        ));
    }
    let mut pert = Vec::new();
    for r in &t.perturbation {
        let mut m = Map::new();
        m.insert("u".into(), vector_to_value(&r.u.parts[0])?);
        m.insert("v".into(), vector_to_value(&r.v.parts[0])?);
        pert.push(Value::Object(m));
    }
    let mut m = Map::new();
    m.insert("symbol".into(), symbol_to_value(t.symbol.at(0, 0)));
    m.insert("perturbation".into(), Value::Array(pert));
    Ok(Value::Object(m))
}

pub fn value_to_operator(v: &Value) -> Result<BetOperator> {
    let m = match v {
        Value::Object(m) => m,
        other => {
            return Err(parse_err(format!(
                "operator spec must be an object, got {other}"
            )))
        }
    };
    let symbol = value_to_symbol(
        m.get("symbol")
            .ok_or_else(|| parse_err("operator spec without 'symbol'"))?,
    )?;
    let mut perturbation = Vec::new();
    match m.get("perturbation") {
        Some(Value::Array(items)) => {
            for item in items {
                let r = match item {
                    Value::Object(r) => r,
                    other => {
                        return Err(parse_err(format!(
                            "perturbation entry must be an object, got {other}"
                        )))
                    }
                };
                let u = value_to_vector(
                    r.get("u")
                        .ok_or_else(|| parse_err("rank-one without 'u'"))?,
                )?;
                let vv = value_to_vector(
                    r.get("v")
                        .ok_or_else(|| parse_err("rank-one without 'v'"))?,
                )?;
                perturbation.push(RankOne {
                    u: BlockVector::scalar(u),
                    v: BlockVector::scalar(vv),
                });
            }
        }
        Some(other) => {
            return Err(parse_err(format!(
                "'perturbation' must be an array, got {other}"
            )))
        }
        None => {}
    }
    BetOperator::new(MatrixSymbol::scalar(symbol), perturbation)
}

pub fn operator_spec_to_json(t: &BetOperator) -> Result<String> {
    Ok(serde_json::to_string_pretty(&operator_to_value(t)?).expect("valid value") + "\n")
}

pub fn parse_operator_spec(text: &str) -> Result<BetOperator> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    value_to_operator(&v)
}

fn matrix_to_value(m: &BallMatrix) -> Value {
    let mut rows = Vec::new();
    for i in 0..m.rows {
        rows.push(Value::Array(
            (0..m.cols).map(|j| ball_to_value(m.at(i, j))).collect(),
        ));
    }
    let mut o = Map::new();
    o.insert("rows".into(), Value::from(m.rows as u64));
    o.insert("cols".into(), Value::from(m.cols as u64));
    o.insert("entries".into(), Value::Array(rows));
    Value::Object(o)
}

fn value_to_matrix(v: &Value) -> Result<BallMatrix> {
    let o = match v {
        Value::Object(o) => o,
        other => return Err(parse_err(format!("matrix must be an object, got {other}"))),
    };
    let rows = get_u64(o, "rows")? as usize;
    let cols = get_u64(o, "cols")? as usize;
    let entries = match o.get("entries") {
        Some(Value::Array(r)) => r,
        _ => return Err(parse_err("matrix without 'entries' array")),
    };
    if entries.len() != rows {
        return Err(parse_err("matrix row count mismatch"));
    }
    let mut m = BallMatrix::zero(rows, cols);
    for (i, row) in entries.iter().enumerate() {
        let row = match row {
            Value::Array(r) if r.len() == cols => r,
            _ => return Err(parse_err("matrix column count mismatch")),
        };
        for (j, e) in row.iter().enumerate() {
            *m.at_mut(i, j) = value_to_ball(e)?;
        }
    }
    Ok(m)
}

fn extnat_to_value(x: &ExtNat) -> Value {
    match x {
        ExtNat::Finite(n) => {
            let mut m = Map::new();
            m.insert("finite".into(), Value::from(*n));
            Value::Object(m)
        }
        ExtNat::Infinite => Value::String("infinite".into()),
        ExtNat::ExceedsCap(c) => {
            let mut m = Map::new();
            m.insert("exceeds_cap".into(), Value::from(*c));
            Value::Object(m)
        }
    }
}

fn value_to_extnat(v: &Value) -> Result<ExtNat> {
    match v {
        Value::String(s) if s == "infinite" => Ok(ExtNat::Infinite),
        Value::Object(m) => {
            if let Some(n) = m.get("finite") {
                return Ok(ExtNat::Finite(
                    n.as_u64().ok_or_else(|| parse_err("bad finite count"))?,
                ));
            }
            if let Some(c) = m.get("exceeds_cap") {
                return Ok(ExtNat::ExceedsCap(
                    c.as_u64().ok_or_else(|| parse_err("bad cap"))?,
                ));
            }
            Err(parse_err("unknown dimension value"))
        }
        other => Err(parse_err(format!("bad dimension value {other}"))),
    }
}

fn vectors_to_value(xs: &[ExpPolyVector]) -> Result<Value> {
    Ok(Value::Array(
        xs.iter().map(vector_to_value).collect::<Result<Vec<_>>>()?,
    ))
}

fn value_to_vectors(v: &Value) -> Result<Vec<ExpPolyVector>> {
    match v {
        Value::Array(items) => items.iter().map(value_to_vector).collect(),
        other => Err(parse_err(format!(
            "expected an array of vectors, got {other}"
        ))),
    }
}

fn get_u64(m: &Map<String, Value>, key: &str) -> Result<u64> {
    m.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err(format!("missing or non-integer '{key}'")))
}

fn get_bool(m: &Map<String, Value>, key: &str) -> Result<bool> {
    m.get(key)
        .and_then(Value::as_bool)
        .ok_or_else(|| parse_err(format!("missing or non-boolean '{key}'")))
}

fn get<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| parse_err(format!("missing '{key}'")))
}

/// Serialize a completion certificate, embedding the three operators
/// so that verification can re-derive everything.
pub fn certificate_to_json(cert: &CompletionCertificate) -> Result<String> {
    let mut left = Map::new();
    left.insert("p".into(), Value::from(cert.left.p));
    left.insert("x1_basis".into(), vectors_to_value(&cert.left.x1_basis)?);
    left.insert("a1_matrix".into(), matrix_to_value(&cert.left.a1_matrix));
    left.insert("a2_injective".into(), Value::Bool(cert.left.a2_injective));
    left.insert(
        "a2_closed_range".into(),
        Value::Bool(cert.left.a2_closed_range),
    );
    let mut right = Map::new();
    right.insert("q".into(), Value::from(cert.right.q));
    right.insert(
        "complement_basis".into(),
        vectors_to_value(&cert.right.complement_basis)?,
    );
    right.insert("b2_matrix".into(), matrix_to_value(&cert.right.b2_matrix));
    right.insert(
        "b1_surjective".into(),
        Value::Bool(cert.right.b1_surjective),
    );
    right.insert(
        "b1_closed_range".into(),
        Value::Bool(cert.right.b1_closed_range),
    );
    let checks = cert
        .dimension_checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), Value::String(c.name.clone()));
            m.insert("lhs".into(), extnat_to_value(&c.lhs));
            m.insert("rhs".into(), extnat_to_value(&c.rhs));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert(
        "kind".into(),
        Value::String(
            match cert.kind {
                CompletionKind::Browder => "browder",
                CompletionKind::InvertibleC => "invertible_C",
            }
            .into(),
        ),
    );
    m.insert("a".into(), operator_to_value(&cert.a)?);
    m.insert("b".into(), operator_to_value(&cert.b)?);
    m.insert("c".into(), operator_to_value(&cert.c)?);
    m.insert("left".into(), Value::Object(left));
    m.insert("right".into(), Value::Object(right));
    m.insert(
        "corner_col_basis".into(),
        vectors_to_value(&cert.corner_col_basis)?,
    );
    m.insert(
        "corner_row_basis".into(),
        vectors_to_value(&cert.corner_row_basis)?,
    );
    m.insert("corner_matrix".into(), matrix_to_value(&cert.corner_matrix));
    m.insert("dimension_checks".into(), Value::Array(checks));
    Ok(serde_json::to_string_pretty(&Value::Object(m)).expect("valid value") + "\n")
}

pub fn parse_certificate(text: &str) -> Result<CompletionCertificate> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    let m = match &v {
        Value::Object(m) => m,
        other => {
            return Err(parse_err(format!(
                "certificate must be an object, got {other}"
            )))
        }
    };
    let kind = match get(m, "kind")? {
        Value::String(s) if s == "browder" => CompletionKind::Browder,
        Value::String(s) if s == "invertible_C" => CompletionKind::InvertibleC,
        other => return Err(parse_err(format!("unknown certificate kind {other}"))),
    };
    let left = match get(m, "left")? {
        Value::Object(l) => LeftDecomposition {
            p: get_u64(l, "p")?,
            x1_basis: value_to_vectors(get(l, "x1_basis")?)?,
            a1_matrix: value_to_matrix(get(l, "a1_matrix")?)?,
            a2_injective: get_bool(l, "a2_injective")?,
            a2_closed_range: get_bool(l, "a2_closed_range")?,
        },
        other => return Err(parse_err(format!("'left' must be an object, got {other}"))),
    };
    let right = match get(m, "right")? {
        Value::Object(r) => RightDecomposition {
            q: get_u64(r, "q")?,
            complement_basis: value_to_vectors(get(r, "complement_basis")?)?,
            b2_matrix: value_to_matrix(get(r, "b2_matrix")?)?,
            b1_surjective: get_bool(r, "b1_surjective")?,
            b1_closed_range: get_bool(r, "b1_closed_range")?,
        },
        other => return Err(parse_err(format!("'right' must be an object, got {other}"))),
    };
    let checks = match get(m, "dimension_checks")? {
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                Value::Object(c) => Ok(DimensionCheck {
                    name: match get(c, "name")? {
                        Value::String(s) => s.clone(),
                        other => return Err(parse_err(format!("bad check name {other}"))),
                    },
                    lhs: value_to_extnat(get(c, "lhs")?)?,
                    rhs: value_to_extnat(get(c, "rhs")?)?,
                }),
                other => Err(parse_err(format!("bad dimension check {other}"))),
            })
            .collect::<Result<Vec<_>>>()?,
        other => {
            return Err(parse_err(format!(
                "'dimension_checks' must be an array, got {other}"
            )))
        }
    };
    Ok(CompletionCertificate {
        kind,
        a: value_to_operator(get(m, "a")?)?,
        b: value_to_operator(get(m, "b")?)?,
        c: value_to_operator(get(m, "c")?)?,
        left,
        right,
        corner_col_basis: value_to_vectors(get(m, "corner_col_basis")?)?,
        corner_row_basis: value_to_vectors(get(m, "corner_row_basis")?)?,
        corner_matrix: value_to_matrix(get(m, "corner_matrix")?)?,
        dimension_checks: checks,
    })
}

fn tri_value(t: TriState) -> Value {
    Value::String(t.to_string())
}

/// Deterministic JSON report of a classification at a point.
pub fn classification_report(lambda: &GaussianRational, class: &OperatorClass) -> String {
    let mut flags = BTreeMap::new();
    for (name, t) in [
        ("invertible", class.invertible),
        ("left_invertible", class.left_invertible),
        ("right_invertible", class.right_invertible),
        ("fredholm", class.fredholm),
        ("weyl", class.weyl),
        ("left_semi_fredholm", class.left_semi_fredholm),
        ("right_semi_fredholm", class.right_semi_fredholm),
        ("browder", class.browder),
        ("left_semi_browder", class.left_semi_browder),
        ("right_semi_browder", class.right_semi_browder),
        ("closed_range", class.closed_range),
    ] {
        flags.insert(name.to_string(), tri_value(t));
    }
    let decided = flags.values().all(|v| v.as_str() != Some("undecided"));
    let mut m = Map::new();
    m.insert("lambda".into(), coeff_to_value(lambda));
    m.insert("alpha".into(), extnat_to_value(&class.alpha));
    m.insert("beta".into(), extnat_to_value(&class.beta));
    m.insert(
        "index".into(),
        class.index.map(Value::from).unwrap_or(Value::Null),
    );
    m.insert("ascent".into(), extnat_to_value(&class.ascent));
    m.insert("descent".into(), extnat_to_value(&class.descent));
    m.insert("flags".into(), Value::Object(flags.into_iter().collect()));
    m.insert("decided".into(), Value::Bool(decided));
    serde_json::to_string_pretty(&Value::Object(m)).expect("valid value") + "\n"
}

/// Whether every flag in the report is decided (drives the CLI exit
/// code).
pub fn class_is_decided(class: &OperatorClass) -> bool {
    [
        class.invertible,
        class.left_invertible,
        class.right_invertible,
        class.fredholm,
        class.weyl,
        class.left_semi_fredholm,
        class.right_semi_fredholm,
        class.browder,
        class.left_semi_browder,
        class.right_semi_browder,
        class.closed_range,
    ]
    .iter()
    .all(|t| t.is_decided())
}
