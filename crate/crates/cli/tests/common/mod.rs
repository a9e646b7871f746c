//! Helpers shared by the CLI test targets: running the binary and checking
//! JSON against the shipped schemas.
//!
//! The schema checker covers the keywords the schemas use: `type`, `enum`,
//! `const`, `properties`, `required`, `additionalProperties`, `items`,
//! `minimum`, `oneOf`, `anyOf` and `$ref` (local pointers and sibling
//! files). Any other keyword is reported as an error rather than ignored.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slpelim"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn load(file: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(file)).unwrap_or_else(|e| panic!("{file}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{file}: {e}"))
}

const KNOWN: &[&str] = &[
    "$schema", "title", "description", "$defs", "type", "enum", "const", "properties", "required",
    "additionalProperties", "items", "minimum", "oneOf", "anyOf", "$ref",
];

fn pointer<'a>(doc: &'a Value, frag: &str) -> &'a Value {
    doc.pointer(frag).unwrap_or_else(|| panic!("dangling $ref fragment {frag}"))
}

fn type_ok(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        other => panic!("unknown type {other}"),
    }
}

fn check(schema: &Value, doc: &Value, v: &Value, at: &str, errs: &mut Vec<String>) {
    let obj = schema.as_object().expect("schema is an object");
    for k in obj.keys() {
        assert!(KNOWN.contains(&k.as_str()), "unsupported schema keyword {k}");
    }
    if let Some(r) = obj.get("$ref").and_then(Value::as_str) {
        let (file, frag) = r.split_once('#').unwrap_or((r, ""));
        if file.is_empty() {
            check(pointer(doc, frag), doc, v, at, errs);
        } else {
            let other = load(file);
            let target = if frag.is_empty() { other.clone() } else { pointer(&other, frag).clone() };
            check(&target, &other, v, at, errs);
        }
    }
    if let Some(t) = obj.get("type") {
        let ok = match t {
            Value::String(s) => type_ok(s, v),
            Value::Array(ts) => ts.iter().any(|s| type_ok(s.as_str().unwrap(), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            errs.push(format!("{at}: expected type {t}, got {v}"));
            return;
        }
    }
    if let Some(e) = obj.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            errs.push(format!("{at}: {v} not in {e:?}"));
        }
    }
    if let Some(c) = obj.get("const") {
        if c != v {
            errs.push(format!("{at}: {v} != {c}"));
        }
    }
    if let (Some(m), Some(x)) = (obj.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < m {
            errs.push(format!("{at}: {x} < {m}"));
        }
    }
    if let Some(map) = v.as_object() {
        let props = obj.get("properties").and_then(Value::as_object);
        if let Some(req) = obj.get("required").and_then(Value::as_array) {
            for r in req {
                if !map.contains_key(r.as_str().unwrap()) {
                    errs.push(format!("{at}: missing {r}"));
                }
            }
        }
        for (k, x) in map {
            let path = format!("{at}/{k}");
            match props.and_then(|p| p.get(k)) {
                Some(s) => check(s, doc, x, &path, errs),
                None => match obj.get("additionalProperties") {
                    Some(Value::Bool(false)) => errs.push(format!("{path}: unexpected property")),
                    Some(s @ Value::Object(_)) => check(s, doc, x, &path, errs),
                    _ => {}
                },
            }
        }
    }
    if let (Some(items), Some(arr)) = (obj.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            check(items, doc, x, &format!("{at}/{i}"), errs);
        }
    }
    for (key, want_one) in [("oneOf", true), ("anyOf", false)] {
        if let Some(alts) = obj.get(key).and_then(Value::as_array) {
            let hits = alts
                .iter()
                .filter(|s| {
                    let mut e = Vec::new();
                    check(s, doc, v, at, &mut e);
                    e.is_empty()
                })
                .count();
            if (want_one && hits != 1) || hits == 0 {
                errs.push(format!("{at}: {hits} alternatives of {key} match"));
            }
        }
    }
}

/// Errors of `value` against `schemas/<file>`; empty when valid.
pub fn validate(file: &str, value: &Value) -> Vec<String> {
    let schema = load(file);
    let mut errs = Vec::new();
    check(&schema, &schema, value, "", &mut errs);
    errs
}

pub fn assert_valid(file: &str, text: &str) {
    let value: Value = serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    let errs = validate(file, &value);
    assert!(errs.is_empty(), "{file}: {errs:#?}");
}
