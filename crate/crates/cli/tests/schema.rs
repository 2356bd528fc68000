//! Every machine-readable artifact validates against its published JSON
//! schema in docs/schema/.

use std::path::PathBuf;
use std::process::Command;

fn schema(name: &str) -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schema")
        .join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    serde_json::from_str(&text).expect("schema file parses")
}

fn artifact(args: &[&str]) -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_mutau"))
        .args(args)
        .env_remove("MUTAU_GROEBNER_BUDGET")
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout parses as JSON")
}

fn assert_valid(schema_file: &str, args: &[&str]) {
    let validator =
        jsonschema::validator_for(&schema(schema_file)).expect("schema compiles");
    let instance = artifact(args);
    let errors: Vec<String> = validator
        .iter_errors(&instance)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(
        errors.is_empty(),
        "artifact of {args:?} violates {schema_file}:\n{}",
        errors.join("\n")
    );
}

#[test]
fn invariants_artifacts_validate() {
    assert_valid(
        "invariants.schema.json",
        &["invariants", "--ring", "char=0; vars=x,y", "x^3+y^4"],
    );
    assert_valid(
        "invariants.schema.json",
        &[
            "invariants",
            "--ring",
            "char=3; vars=x,y",
            "x^3+y^4",
            "--field-extension",
            "2",
            "--trials",
            "2",
        ],
    );
}

#[test]
fn bound_table_artifact_validates() {
    assert_valid("bound-table.schema.json", &["bound-table", "6", "--format", "json"]);
}

#[test]
fn hfun_artifacts_validate() {
    assert_valid(
        "hfun.schema.json",
        &["hfun", "--s", "3/2", "--d", "2", "--format", "json"],
    );
    assert_valid(
        "hfun.schema.json",
        &[
            "hfun", "--s", "1", "--d", "3", "--deriv", "--mc", "1000", "--fmax",
            "--grid", "8", "--format", "json",
        ],
    );
}

#[test]
fn hk_artifact_validates() {
    assert_valid(
        "hk.schema.json",
        &["hk", "--ring", "char=2; vars=x,y", "x^2, y^3", "--emax", "2"],
    );
}

#[test]
fn hs_artifact_validates() {
    assert_valid(
        "hs.schema.json",
        &[
            "hs", "--ring", "char=2; vars=x,y", "x, y", "--s", "1/2", "--emax",
            "2", "--es", "--thresholds",
        ],
    );
}

#[test]
fn family_artifact_validates() {
    assert_valid(
        "family.schema.json",
        &[
            "family", "--n", "5", "--d", "2", "--trials", "2", "--seed", "1",
            "--format", "json",
        ],
    );
}

#[test]
fn conjectures_artifact_validates() {
    let dir = tempfile::tempdir().expect("tempdir");
    let corpus = dir.path().join("corpus.txt");
    std::fs::write(
        &corpus,
        "char=0; vars=x,y\nx^3+y^4\nx^2\nchar=5; vars=x,y\nx^5+y^6\n",
    )
    .expect("write corpus");
    assert_valid(
        "conjectures.schema.json",
        &["conjectures", corpus.to_str().expect("utf8 path")],
    );
}
