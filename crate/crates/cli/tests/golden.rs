//! Golden-file, schema and exit-status tests for the binary.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the expected files.

mod common;

use std::fs;
use std::path::Path;

use common::{golden_dir, run, GOLDEN};
use serde_json::Value;

fn schema_for(verb: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schema")
        .join(format!("{verb}.schema.json"));
    let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&schema).expect("schema compiles")
}

fn assert_valid(verb: &str, doc: &Value) {
    let schema = schema_for(verb);
    let errors: Vec<String> = match schema.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(errors.is_empty(), "{verb} document violates its schema: {errors:?}");
}

/// Statement-level shape of the DOT documents we emit.
fn assert_well_formed_dot(text: &str) {
    let statement = regex::Regex::new(
        r#"^  (rankdir=BT;|node \[shape=box\];|\{ rank=same; (n\d+; )+\} // order \d+\^\d+|n\d+ \[label="(\\.|[^"\\])*"(, xlabel="(\\.|[^"\\])*")?\];|n\d+ -- n\d+( \[style=dashed, constraint=false\])?;)$"#,
    )
    .unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.first(), Some(&"graph fusion {"));
    assert_eq!(lines.last(), Some(&"}"));
    let mut declared = std::collections::BTreeSet::new();
    for line in &lines[1..lines.len() - 1] {
        assert!(statement.is_match(line), "malformed DOT statement: {line}");
        if let Some(rest) = line.trim().strip_prefix('n') {
            if rest.contains("[label=") {
                declared.insert(rest.split(' ').next().unwrap().to_string());
            }
        }
    }
    let edge = regex::Regex::new(r"n(\d+) -- n(\d+)").unwrap();
    for c in edge.captures_iter(text) {
        assert!(declared.contains(&c[1]) && declared.contains(&c[2]), "edge to undeclared node");
    }
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let dir = golden_dir();
    let mut mismatches = Vec::new();
    for (name, args) in GOLDEN {
        let out = run(args);
        assert!(out.status.success(), "{name} exited with {:?}", out.status.code());
        assert!(out.stderr.is_empty(), "{name} wrote to stderr");
        let ext = if args.contains(&"json") {
            "json"
        } else if args.contains(&"dot") {
            "dot"
        } else {
            "txt"
        };
        let path = dir.join(format!("{name}.{ext}"));
        if update {
            fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected = fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if expected != out.stdout {
            mismatches.push(name);
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches: {mismatches:?}");
}

#[test]
fn json_documents_validate_against_published_schemas() {
    for (name, args) in GOLDEN {
        if !args.contains(&"json") {
            continue;
        }
        let out = run(args);
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_valid(args[0], &doc);
    }
    for args in [
        &["equiv", "Z(2)", "S(3)", "-p", "2", "--format", "json"][..],
        &["equiv", "D(10)", "AGL(1,5)", "-p", "5", "--format", "json"],
        &["essential", "S(4)", "-p", "2", "--format", "json"],
        &["alperin", "A(4)", "-p", "3", "--format", "json"],
        &["ccp", "A(4)", "-p", "2", "--format", "json"],
        &["torsion", "Z(2)xZ(2)xZ(2)xZ(12)", "-p", "2", "--format", "json"],
    ] {
        let out = run(args);
        assert!(out.status.success());
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_valid(args[0], &doc);
    }
}

#[test]
fn dot_documents_are_well_formed() {
    for args in [
        &["fusion", "S(4)", "-p", "2", "--format", "dot"][..],
        &["fusion", "D(8)", "-p", "2", "--format", "dot"],
        &["fusion", "A(5)", "-p", "2", "--format", "dot"],
        &["fusion", "Z(3)", "-p", "2", "--format", "dot"],
        &["essential", "S(4)", "-p", "2", "--format", "dot"],
    ] {
        let out = run(args);
        assert!(out.status.success());
        assert_well_formed_dot(std::str::from_utf8(&out.stdout).unwrap());
    }
}

#[test]
fn worked_cli_examples() {
    let out = run(&["torsion", "Z(2)xZ(2)xZ(2)xZ(12)", "-p", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "(2,2,2,4)\n");

    let out = run(&["equiv", "A(4)", "D(12)", "-p", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["equivalent"], false);
    assert_eq!(v["refuted_by"], "cc_p");

    let out = run(&["fusion", "S(4)", "-p", "2", "--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 10);
    assert_eq!(dot.matches("xlabel=").count(), 7);
}

#[test]
fn exit_statuses() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["equiv", "Z(3)", "S(3)", "-p", "3"]), Some(0));
    assert_eq!(code(&["info", "Q(8)"]), Some(2));
    assert_eq!(code(&["info", "S(3"]), Some(2));
    assert_eq!(code(&["fusion", "S(3)"]), Some(2));
    assert_eq!(code(&["fusion", "S(3)", "-p", "4"]), Some(2));
    assert_eq!(code(&["info", "S(3)", "--format", "dot"]), Some(2));
    assert_eq!(code(&["bogus"]), Some(2));
    assert_eq!(code(&["info", "S(8)"]), Some(3));
    assert_eq!(code(&["info", "S(4)", "--cap-order", "10"]), Some(3));
    assert_eq!(code(&["torsion", "S(3)"]), Some(1));

    let out = run(&["info", "S(8)"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr).unwrap().contains("cap"));
}

#[test]
fn cap_from_environment() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_fusionscope"))
        .args(["info", "S(4)"])
        .env("FUSIONSCOPE_CAP_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_fusionscope"))
        .args(["info", "S(4)", "--cap-order", "100"])
        .env("FUSIONSCOPE_CAP_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn schemas_reject_malformed_documents() {
    let schema = schema_for("equiv");
    let good = serde_json::json!({"equivalent": false, "refuted_by": "cc_p", "detail": {"left": "2", "right": "4"}, "witness": null});
    assert!(schema.is_valid(&good));
    let mut bad = good.clone();
    bad["refuted_by"] = "order".into();
    assert!(!schema.is_valid(&bad));
    let mut bad = good;
    bad.as_object_mut().unwrap().remove("witness");
    assert!(!schema.is_valid(&bad));
    let schema = schema_for("torsion");
    assert!(!schema.is_valid(&serde_json::json!([{"p": 2, "n": {"0": 1}}])));
}
