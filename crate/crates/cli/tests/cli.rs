use std::path::PathBuf;
use std::process::Command as Proc;

use preproj_cli::{run, Command, Format, RunConfig, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_INPUT, EXIT_PASS};
use preproj_core::algebra::{FDAlgebra, Presented};
use preproj_core::construction::{BuildOptions, ConstructionInput, Registry};
use preproj_core::error::Error;
use preproj_core::field::Fp;
use preproj_core::groebner::GroebnerBounds;
use preproj_core::io::{parse_input, read_input, Parsed};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn field() -> Fp {
    Fp::new(32003).unwrap()
}

#[test]
fn a2_fixture_parses_to_a_presentation() {
    let Parsed::Presentation(p) = read_input(&fixture("a2.json"), field()).unwrap() else { panic!() };
    assert_eq!(p.quiver.num_vertices(), 2);
    assert_eq!(p.quiver.arrows.len(), 1);
}

#[test]
fn three_cycle_fixture_parses_to_a_potential() {
    let Parsed::Potential(qp) = read_input(&fixture("qp_3cycle.json"), field()).unwrap() else { panic!() };
    assert_eq!(qp.potential.len(), 1);
}

#[test]
fn non_parallel_relation_is_rejected_with_a_position() {
    match read_input(&fixture("bad_nonparallel.json"), field()) {
        Err(Error::Parse { line, column, msg }) => {
            assert!(line > 1 && column > 0);
            assert!(msg.contains("not parallel"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
    let cfg = RunConfig::new(Command::Build, fixture("bad_nonparallel.json"), 2);
    assert_eq!(run(&cfg).code, EXIT_INPUT);
}

#[test]
fn certify_exit_codes() {
    let pass = RunConfig::new(Command::Certify, fixture("pi2_a2.json"), 2);
    assert_eq!(run(&pass).code, EXIT_PASS);
    let wrong_d = RunConfig::new(Command::Certify, fixture("pi2_a2.json"), 5);
    let out = run(&wrong_d);
    assert_eq!(out.code, EXIT_FAIL);
    let report: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(report["verdicts"]["stably_cy"], "fail");
    assert_eq!(report["witnesses"]["stably_cy"]["hypothesis"], true);
}

#[test]
fn truncated_build_is_indeterminate() {
    let mut cfg = RunConfig::new(Command::Build, fixture("a2.json"), 2);
    cfg.max_degree = 1;
    assert_eq!(run(&cfg).code, EXIT_INDETERMINATE);
}

#[test]
fn rationals_and_small_d_are_input_errors() {
    let mut cfg = RunConfig::new(Command::Build, fixture("a2.json"), 2);
    cfg.field = 0;
    assert_eq!(run(&cfg).code, EXIT_INPUT);
    let cfg = RunConfig::new(Command::Build, fixture("a2.json"), 1);
    assert_eq!(run(&cfg).code, EXIT_INPUT);
}

#[test]
fn built_algebras_round_trip() {
    let registry = Registry::default();
    for (name, d, construction) in
        [("a3.json", 2, "double-quiver"), ("a3_rad2.json", 3, "keller-qp"), ("a2_tensor_a2.json", 3, "tensor")]
    {
        let mut cfg = RunConfig::new(Command::Build, fixture(name), d);
        cfg.construction = construction.into();
        let out = run(&cfg);
        assert_eq!(out.code, EXIT_PASS, "{}", out.output);
        let Parsed::Algebra(back) = parse_input(&out.output, field()).unwrap() else { panic!() };
        let Parsed::Presentation(p) = read_input(&fixture(name), field()).unwrap() else { panic!() };
        let input = ConstructionInput::Presentation(Presented::new(&p, GroebnerBounds::default()).unwrap());
        let opts = BuildOptions { d, bounds: GroebnerBounds::default(), max_degree: 64 };
        let pi: FDAlgebra = registry.build(construction, &input, &opts).unwrap();
        assert_eq!(back, pi);
    }
}

#[test]
fn reports_are_deterministic() {
    let mut cfg = RunConfig::new(Command::Reconstruct, fixture("a3_rad2.json"), 3);
    cfg.seed = 7;
    let mut build = RunConfig::new(Command::Build, fixture("a3_rad2.json"), 3);
    build.construction = "keller-qp".into();
    let dir = tempdir("determinism");
    let pi = dir.join("pi.json");
    std::fs::write(&pi, run(&build).output).unwrap();
    cfg.input = pi;
    let a = run(&cfg);
    let b = run(&cfg);
    assert_eq!(a.code, EXIT_PASS, "{}", a.output);
    assert_eq!(a.output, b.output);
    cfg.format = Format::Text;
    assert_eq!(run(&cfg).output, run(&cfg).output);
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("preproj-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn cache_does_not_change_results() {
    let dir = tempdir("cache");
    let plain = run(&RunConfig::new(Command::Certify, fixture("pi2_a2.json"), 2));
    let mut cached = RunConfig::new(Command::Certify, fixture("pi2_a2.json"), 2);
    cached.cache_dir = Some(dir.clone());
    let first = run(&cached);
    assert!(std::fs::read_dir(&dir).unwrap().count() > 0);
    let second = run(&cached);
    assert_eq!(plain.output, first.output);
    assert_eq!(first.output, second.output);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_preproj");
    let status = |args: &[&str]| Proc::new(bin).args(args).output().unwrap().status.code().unwrap();
    let pi = fixture("pi2_a2.json");
    let pi = pi.to_str().unwrap();
    assert_eq!(status(&["certify", pi, "--d", "2", "--no-cache"]), 0);
    assert_eq!(status(&["certify", pi, "--d", "5"]), 1);
    let graded = fixture("graded_a2.json");
    assert_eq!(status(&["certify", graded.to_str().unwrap(), "--d", "3"]), 1);
    let a2 = fixture("a2.json");
    assert_eq!(status(&["build", a2.to_str().unwrap(), "--max-degree", "1"]), 2);
    assert_eq!(status(&["build", a2.to_str().unwrap(), "--construction", "nope"]), 3);
    assert_eq!(status(&["build", "/nonexistent.json"]), 3);
}
