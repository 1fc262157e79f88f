//! Reading inputs: config files, tree specs, bundles and artifacts.

use lks_cluster::SkewLksGraph;
use lks_config::ConfigWitness;
use lks_core::{parse_q, RootedTree, TreeFile, Q};
use serde_json::Value;

use crate::Failure;

const SUBCOMMANDS: [&str; 9] = ["fine-partition", "find-config", "embed", "scan", "extremal", "bistar", "ramsey", "synthesize", "validate-lks"];

/// Replaces `--config FILE` by the file's keys as flags, inserted right after
/// the subcommand so that explicit flags (later on the line) override them.
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or("--config needs a file")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let obj: serde_json::Map<String, Value> = serde_json::from_str(&text).map_err(|e| format!("config {path}: {e}"))?;
    let mut flags = Vec::new();
    for (key, val) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        match val {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => flags.extend([flag, s]),
            Value::Number(n) => flags.extend([flag, n.to_string()]),
            Value::Array(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string())).collect();
                flags.extend([flag, parts.join(",")]);
            }
            Value::Object(_) => return Err(format!("config key {key}: nested objects are not flags")),
        }
    }
    let at = rest.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())).map_or(rest.len(), |i| i + 1);
    rest.splice(at..at, flags);
    Ok(rest)
}

pub fn rational(s: &str) -> Result<Q, Failure> {
    parse_q(s).map_err(|e| Failure::Usage(format!("bad rational {s:?}: {e}")))
}

/// Parses a JSON file; CLI artifacts are unwrapped to their `result`.
pub fn load_json(path: &str) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    Ok(match v {
        Value::Object(mut o) if o.contains_key("run") && o.contains_key("result") => o.remove("result").expect("checked"),
        v => v,
    })
}

fn digits(s: &str) -> Option<usize> {
    (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())).then(|| s.parse().ok()).flatten()
}

/// `P<n>` path, `S<n>` star on `n` vertices, `B<a>.<b>` bistar, or a file.
pub fn tree(spec: &str) -> Result<RootedTree, Failure> {
    if let Some(n) = spec.strip_prefix('P').and_then(digits) {
        return if n >= 1 { Ok(RootedTree::path(n)) } else { Err(Failure::Usage("P0 is empty".into())) };
    }
    if let Some(n) = spec.strip_prefix('S').and_then(digits) {
        return if n >= 1 { Ok(RootedTree::star(n)) } else { Err(Failure::Usage("S0 is empty".into())) };
    }
    if let Some((a, b)) = spec.strip_prefix('B').and_then(|s| s.split_once('.')) {
        if let (Some(a), Some(b)) = (digits(a), digits(b)) {
            return Ok(RootedTree::bistar(a, b));
        }
    }
    let v = load_json(spec)?;
    tree_from_value(&v).ok_or_else(|| Failure::Usage(format!("{spec}: no tree found")))?
}

/// A tree stored directly or under a `tree` key.
pub fn tree_from_value(v: &Value) -> Option<Result<RootedTree, Failure>> {
    let t = if v.get("parent").is_some() { v } else { v.get("tree")? };
    Some(
        serde_json::from_value::<TreeFile>(t.clone())
            .map_err(|e| Failure::Usage(format!("tree file: {e}")))
            .and_then(|f| RootedTree::from_file(&f).map_err(|e| Failure::Usage(format!("tree file: {e}")))),
    )
}

/// A bundle stored directly or under a `bundle` key.
pub fn bundle(v: &Value) -> Result<SkewLksGraph, Failure> {
    let b = if v.get("host").is_some() { v } else { v.get("bundle").ok_or_else(|| Failure::Usage("no bundle found".into()))? };
    SkewLksGraph::from_json(&b.to_string()).map_err(|e| Failure::Usage(format!("bundle: {e}")))
}

pub fn witness(v: &Value) -> Option<Result<ConfigWitness, Failure>> {
    let w = if v.get("config").is_some() && v.get("M").is_some() { v } else { v.get("witness")? };
    Some(serde_json::from_value(w.clone()).map_err(|e| Failure::Usage(format!("witness: {e}"))))
}
