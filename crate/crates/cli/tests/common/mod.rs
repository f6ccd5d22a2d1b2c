#![allow(dead_code)]

use std::path::PathBuf;

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;
use toricstack_cli::Invocation;

pub fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn schema(name: &str) -> JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::options()
        .with_draft(Draft::Draft7)
        .compile(&value)
        .expect("schema compiles")
}

/// Problems reported by `schema` for `instance`, one string each.
pub fn schema_errors(schema: &JSONSchema, instance: &Value) -> Vec<String> {
    match schema.validate(instance) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    }
}

pub fn run(args: &[&str]) -> Invocation {
    let mut argv = vec!["toricstack"];
    argv.extend_from_slice(args);
    toricstack_cli::run(argv)
}

/// Runs with `--json` and parses the report.
pub fn run_json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let out = run(&argv);
    let report = serde_json::from_str(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: report is not JSON ({e}): {}", out.stdout));
    (out.exit_code, report)
}

pub const DATA_FIXTURES: &[&str] = &[
    "affine_line_mod3.json",
    "large_entries.json",
    "parity_b0.json",
    "parity_b1.json",
    "parity_b2.json",
    "projective_plane.json",
    "roots_2_3.json",
    "single_ray_plane.json",
    "weighted_root_gerbe.json",
];

pub const INVALID_DATA_FIXTURES: &[&str] = &["invalid_dependent_cone.json", "invalid_zero_root.json"];

pub const MORPHISM_FIXTURES: &[&str] = &[
    "morphism_conic.json",
    "morphism_duple1.json",
    "morphism_duple2.json",
    "morphism_duple2_flipped.json",
    "morphism_duple2_scaled.json",
    "morphism_duple3.json",
    "morphism_duple4.json",
    "morphism_duple5.json",
    "morphism_duplicated.json",
    "morphism_incomplete_source.json",
    "morphism_root_target.json",
];

/// One invocation of every command, each with its expected exit code.
pub fn command_matrix() -> Vec<(Vec<String>, i32)> {
    let f = fixture;
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["validate".into(), f("weighted_root_gerbe.json")], 0),
        (vec!["validate".into(), f("morphism_duple2.json")], 0),
        (vec!["validate".into(), f("invalid_zero_root.json")], 1),
        (vec!["build".into(), f("weighted_root_gerbe.json")], 0),
        (vec!["build".into(), f("single_ray_plane.json")], 0),
        (vec!["build".into(), f("large_entries.json")], 0),
        (vec!["pic".into(), f("weighted_root_gerbe.json")], 0),
        (vec!["pic".into(), f("projective_plane.json")], 0),
        (vec!["stabilizer".into(), f("weighted_root_gerbe.json")], 0),
        (vec!["stabilizer".into(), f("affine_line_mod3.json"), "--cone".into(), "0".into()], 0),
        (vec!["stabilizer".into(), f("single_ray_plane.json"), "--cone".into(), "".into()], 0),
        (vec!["rigidify".into(), f("roots_2_3.json")], 0),
        (vec!["split".into(), f("single_ray_plane.json")], 0),
        (vec!["classify".into(), f("parity_b0.json"), f("parity_b2.json")], 0),
        (vec!["classify".into(), f("parity_b0.json"), f("parity_b1.json")], 2),
        (vec!["canonicalize".into(), f("roots_2_3.json")], 0),
        (vec!["morphism".into(), "check".into(), f("morphism_duple3.json")], 0),
        (vec!["morphism".into(), "check".into(), f("morphism_duplicated.json")], 2),
        (vec!["morphism".into(), "check".into(), f("morphism_conic.json")], 3),
        (vec!["morphism".into(), "check".into(), f("morphism_root_target.json")], 2),
        (vec!["morphism".into(), "check".into(), f("morphism_incomplete_source.json")], 1),
        (
            vec!["morphism".into(), "iso".into(), f("morphism_duple2_flipped.json"), f("morphism_duple2.json")],
            0,
        ),
        (
            vec!["morphism".into(), "iso".into(), f("morphism_duple2_scaled.json"), f("morphism_duple2.json")],
            2,
        ),
    ];
    cases
}
