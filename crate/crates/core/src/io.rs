//! JSON formats for games and profiles.
//!
//! A game is `{"u1": [[..]], "u2": [[..]], "partition": [[..]]}` with
//! optional `"row_labels"` and `"col_labels"`. A profile is either
//! `{"sigma1": [..], "sigma2": [..]}` or `{"p": [[..]]}`.
//!
//! Numeric entries may be JSON numbers, read as exact decimals, or strings
//! of the form `"p/q"`. Writers emit integers as numbers and every other
//! rational as a `"p/q"` string, so files round-trip exactly.

use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::game::{validate_game, Game, Matrix, RawGame};
use crate::num::{format_rational, parse_decimal, parse_fraction, Field, Rational};
use crate::profile::{CorrelatedProfile, MixedProfile};

/// A profile as stored in a file, always exact.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileFile {
    Mixed(MixedProfile<Rational>),
    Correlated(CorrelatedProfile<Rational>),
}

fn parse_entry(v: &Value, at: &str) -> Result<Rational> {
    match v {
        Value::Number(n) => parse_decimal(&n.to_string()),
        Value::String(s) => parse_fraction(s),
        other => Err(Error::Parse(format!("{at}: expected a number or \"p/q\", found {other}"))),
    }
    .map_err(|e| match e {
        Error::Parse(msg) if !msg.starts_with(at) => Error::Parse(format!("{at}: {msg}")),
        e => e,
    })
}

fn parse_vector(v: &Value, at: &str) -> Result<Vec<Rational>> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("{at}: expected an array")))?;
    items.iter().enumerate().map(|(i, x)| parse_entry(x, &format!("{at}[{i}]"))).collect()
}

fn parse_table(v: &Value, at: &str) -> Result<Vec<Vec<Rational>>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse(format!("{at}: expected an array of rows")))?;
    rows.iter().enumerate().map(|(i, row)| parse_vector(row, &format!("{at}[{i}]"))).collect()
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing field \"{key}\"")))
}

fn parse_labels(obj: &Map<String, Value>, key: &str) -> Result<Option<Vec<String>>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(items)) => items
            .iter()
            .map(|x| {
                x.as_str().map(str::to_string).ok_or_else(|| Error::Parse(format!("{key}: labels must be strings")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(_) => Err(Error::Parse(format!("{key}: expected an array of strings"))),
    }
}

fn parse_object(text: &str) -> Result<Map<String, Value>> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(obj)) => Ok(obj),
        Ok(_) => Err(Error::Parse("expected a JSON object".into())),
        Err(e) => Err(Error::Parse(format!("invalid JSON: {e}"))),
    }
}

pub fn parse_game(text: &str) -> Result<Game> {
    let obj = parse_object(text)?;
    let cells = field(&obj, "partition")?
        .as_array()
        .ok_or_else(|| Error::Parse("partition: expected an array of arrays".into()))?;
    let partition = cells
        .iter()
        .map(|cell| {
            cell.as_array()
                .and_then(|rows| rows.iter().map(|r| r.as_u64().map(|r| r as usize)).collect::<Option<Vec<_>>>())
                .ok_or_else(|| Error::Parse("partition: cells must be arrays of row indices".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_game(RawGame {
        u1: parse_table(field(&obj, "u1")?, "u1")?,
        u2: parse_table(field(&obj, "u2")?, "u2")?,
        partition,
        row_labels: parse_labels(&obj, "row_labels")?,
        col_labels: parse_labels(&obj, "col_labels")?,
    })
}

pub fn parse_profile(text: &str) -> Result<ProfileFile> {
    let obj = parse_object(text)?;
    match (obj.get("p"), obj.get("sigma1"), obj.get("sigma2")) {
        (Some(p), None, None) => Ok(ProfileFile::Correlated(CorrelatedProfile::from_rows(parse_table(p, "p")?)?)),
        (None, Some(s1), Some(s2)) => {
            Ok(ProfileFile::Mixed(MixedProfile::new(parse_vector(s1, "sigma1")?, parse_vector(s2, "sigma2")?)?))
        }
        _ => Err(Error::Parse("a profile has either \"p\" or both \"sigma1\" and \"sigma2\"".into())),
    }
}

/// An integer as a JSON number, anything else as `"p/q"`; float values
/// become plain numbers.
pub fn scalar_value<F: Field>(x: &F) -> Value {
    match x.to_scalar() {
        crate::num::Scalar::Exact(r) if r.is_integer() => {
            Value::Number(Number::from_str(&r.numer().to_string()).expect("integers are valid JSON numbers"))
        }
        crate::num::Scalar::Exact(r) => Value::String(format_rational(&r)),
        crate::num::Scalar::Float(f) => Number::from_f64(f).map_or(Value::Null, Value::Number),
    }
}

pub fn vector_value<F: Field>(v: &[F]) -> Value {
    Value::Array(v.iter().map(scalar_value).collect())
}

pub fn matrix_value<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array((0..m.rows()).map(|r| vector_value(m.row(r))).collect())
}

pub fn game_value(game: &Game) -> Value {
    let mut obj = Map::new();
    obj.insert("u1".into(), matrix_value(game.u1()));
    obj.insert("u2".into(), matrix_value(game.u2()));
    obj.insert("partition".into(), serde_json::to_value(game.partition().cells()).expect("plain data"));
    if let Some(l) = game.row_labels() {
        obj.insert("row_labels".into(), serde_json::to_value(l).expect("plain data"));
    }
    if let Some(l) = game.col_labels() {
        obj.insert("col_labels".into(), serde_json::to_value(l).expect("plain data"));
    }
    Value::Object(obj)
}

pub fn mixed_value<F: Field>(profile: &MixedProfile<F>) -> Value {
    let mut obj = Map::new();
    obj.insert("sigma1".into(), vector_value(profile.sigma1()));
    obj.insert("sigma2".into(), vector_value(profile.sigma2()));
    Value::Object(obj)
}

pub fn correlated_value<F: Field>(profile: &CorrelatedProfile<F>) -> Value {
    let mut obj = Map::new();
    obj.insert("p".into(), matrix_value(profile.matrix()));
    Value::Object(obj)
}

pub fn game_to_json(game: &Game) -> String {
    serde_json::to_string_pretty(&game_value(game)).expect("values serialize")
}
