//! JSON and plain-text rendering of verdicts.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use sdcat::{Answer, Evidence, Result, Verdict};

use crate::files::Files;

/// Renders evidence; maps are written to `cert_path` first.
pub fn evidence(e: &Evidence, cert_path: &Path, files: &mut Files) -> Result<Value> {
    let mut v = Map::new();
    v.insert("kind".into(), json!(e.kind()));
    v.insert("text".into(), json!(e.describe()));
    match e {
        Evidence::Map(f) => {
            let p = files.write_map(f, cert_path)?;
            v.insert("path".into(), json!(p.display().to_string()));
        }
        Evidence::Window(n) | Evidence::Period(n) => {
            v.insert("value".into(), json!(n));
        }
        Evidence::Word(a, w) => {
            v.insert("word".into(), json!(a.render(w)));
        }
        Evidence::Pumping { alphabet, prefix, cycle } => {
            v.insert("prefix".into(), json!(alphabet.render(prefix)));
            v.insert("cycle".into(), json!(alphabet.render(cycle)));
        }
        Evidence::PeriodicPair(a, x, y) => {
            v.insert("left".into(), json!(x.render(a)));
            v.insert("right".into(), json!(y.render(a)));
        }
        Evidence::AsymptoticPair(a, x, y) => {
            v.insert("left".into(), json!(x.render(a)));
            v.insert("right".into(), json!(y.render(a)));
        }
        Evidence::Periodic(a, x) => {
            v.insert("point".into(), json!(x.render(a)));
        }
        Evidence::Strong(s) => {
            let (sa, ta) = (&s.source_alphabet, &s.target_alphabet);
            v.insert("p".into(), json!(s.p));
            v.insert("u".into(), json!(ta.render(&s.u)));
            v.insert("v".into(), json!(ta.render(&s.v)));
            let cases: Vec<Value> = s
                .cases
                .iter()
                .map(|c| {
                    json!({
                        "left": ta.render(&c.left),
                        "right": ta.render(&c.right),
                        "g_left": sa.render(&c.g_left),
                        "g_right": sa.render(&c.g_right),
                        "w": ta.render(&c.w),
                    })
                })
                .collect();
            v.insert("cases".into(), Value::Array(cases));
        }
        Evidence::Object(_) | Evidence::Text(_) => {}
    }
    Ok(Value::Object(v))
}

pub fn verdict(v: &Verdict, cert_path: &Path, files: &mut Files) -> Result<Value> {
    let certificate = match &v.certificate {
        Some(e) => evidence(e, cert_path, files)?,
        None => Value::Null,
    };
    let witness = match &v.witness {
        Some(e) => evidence(e, &crate::files::sibling(cert_path, ".witness.bmap"), files)?,
        None => Value::Null,
    };
    Ok(json!({
        "verdict": v.answer.as_str(),
        "certificate": certificate,
        "witness": witness,
        "bound_used": v.bound_used,
        "note": v.note,
    }))
}

pub fn exit_code(a: Answer) -> u8 {
    match a {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Undecided => 2,
    }
}

/// Adds the fields every report carries.
pub fn finish(mut body: Value, argv: &[String], files: &Files, started: std::time::Instant) -> Value {
    let written: Vec<String> = files.written.iter().map(|p: &PathBuf| p.display().to_string()).collect();
    if let Value::Object(m) = &mut body {
        m.insert("command".into(), json!(argv));
        m.insert("outputs".into(), json!(written));
        m.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
    }
    body
}

/// Flat `key: value` lines for humans.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = v {
        for (k, val) in m {
            if k == "command" || val.is_null() {
                continue;
            }
            match val {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                Value::Object(inner) if inner.contains_key("kind") => {
                    if let Some(Value::String(t)) = inner.get("text") {
                        out.push_str(&format!("{k}: {t}\n"));
                    }
                    if let Some(Value::String(p)) = inner.get("path") {
                        out.push_str(&format!("{k}_path: {p}\n"));
                    }
                }
                _ => out.push_str(&format!("{k}: {val}\n")),
            }
        }
    }
    out
}
