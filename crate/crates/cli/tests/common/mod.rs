#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// Golden-file commands: file stem and arguments.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("torsion_z2_cubed_z12", &["torsion", "Z(2)xZ(2)xZ(2)xZ(12)", "-p", "2"]),
    ("torsion_all_primes_json", &["torsion", "Z(6) x Z(4)", "--format", "json"]),
    ("equiv_a4_d12_json", &["equiv", "A(4)", "D(12)", "-p", "2", "--format", "json"]),
    ("equiv_d10_agl5", &["equiv", "D(10)", "AGL(1,5)", "-p", "5"]),
    ("equiv_s3z4_dic12z2_p2_json", &["equiv", "S(3) x Z(4)", "Dic(12) x Z(2)", "-p", "2", "--format", "json"]),
    ("equiv_z2_s3_oracle", &["equiv", "Z(2)", "S(3)", "-p", "2", "--oracle"]),
    ("fusion_s4_dot", &["fusion", "S(4)", "-p", "2", "--format", "dot"]),
    ("fusion_s4_json", &["fusion", "S(4)", "-p", "2", "--format", "json"]),
    ("fusion_d8_text", &["fusion", "D(8)", "-p", "2"]),
    ("essential_s4_dot", &["essential", "S(4)", "-p", "2", "--format", "dot"]),
    ("info_a5", &["info", "A(5)"]),
    ("info_dic12_json", &["info", "Dic(12)", "--format", "json"]),
    ("sylow_s4_json", &["sylow", "S(4)", "-p", "2", "--format", "json"]),
    ("pnilpotent_a4_p2", &["pnilpotent", "A(4)", "-p", "2"]),
    ("pnilpotent_a4_p3_json", &["pnilpotent", "A(4)", "-p", "3", "--format", "json"]),
    ("nilpotent_d8_json", &["nilpotent", "D(8)", "--format", "json"]),
    ("ccp_d12", &["ccp", "D(12)", "-p", "2"]),
    ("invariants_s4_json", &["invariants", "S(4)", "-p", "2", "--format", "json"]),
    ("alperin_s4_text", &["alperin", "S(4)", "-p", "2"]),
    ("alperin_s4_json", &["alperin", "S(4)", "-p", "2", "--source", "3", "--format", "json"]),
    ("stableh1_s4_json", &["stableh1", "S(4)", "-p", "2", "--format", "json"]),
];

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionscope"))
        .args(args)
        .env_remove("FUSIONSCOPE_CAP_ORDER")
        .output()
        .expect("binary runs")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}
