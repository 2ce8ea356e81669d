//! End-to-end runs of the installed binary. Exit codes are the contract
//! under test: 0 pass, 1 assurance failure, 2 infrastructure, 64 usage.

use pq_assure_core::pkix::ParameterSet;
use pq_assure_core::substrate::expand_seed;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pq-assure"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .env_remove("PQ_ASSURE_BRIDGE")
        .output()
        .expect("spawn pq-assure")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// One corpus shared by every test that only reads it.
fn shared_corpus() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap().keep();
        let out = run_in(&dir, &["gen-corpus", "--corpus", "corpus"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        dir
    })
}

#[test]
fn validate_registry_is_clean_on_the_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["validate-registry"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("17 requirements"), "{text}");
    assert!(text.contains("validation: clean"), "{text}");
}

#[test]
fn gen_corpus_reports_48_verified_artifacts() {
    let dir = shared_corpus();
    assert!(dir.join("corpus/manifest.jsonl").exists());
    assert!(dir.join("corpus/valid/openssl").is_dir());
    assert!(dir.join("corpus/mutated").is_dir());
}

#[test]
fn evaluate_strict_passes_with_27_blocks() {
    let dir = shared_corpus();
    let out = run_in(
        dir,
        &["evaluate", "--mode", "strict", "--corpus", "corpus", "--out", "strict-out"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("dispositions: 21 pass / 0 warn / 27 block / 0 error"), "{text}");
    assert!(text.contains("result: PASS"), "{text}");
    for file in [
        "extended_registry_summary_strict.json",
        "policy_summary_strict.json",
        "certificate_spki_coverage_strict.json",
        "private_key_coverage_strict.json",
    ] {
        assert!(dir.join("strict-out").join(file).exists(), "{file}");
    }
}

#[test]
fn evaluate_defaults_to_deployable_mode() {
    let dir = shared_corpus();
    let out = run_in(dir, &["evaluate", "--corpus", "corpus", "--out", "dep-out"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("mode: deployable"), "{text}");
    assert!(text.contains("dispositions: 21 pass / 1 warn / 26 block / 0 error"), "{text}");
}

#[test]
fn gate_pack_evaluates_only_its_stage() {
    let dir = shared_corpus();
    let out = run_in(
        dir,
        &[
            "gate-pack",
            "--pack",
            "import-private-key",
            "--mode",
            "strict",
            "--corpus",
            "corpus",
            "--out",
            "pack-out",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("owner artifact-importer"), "{text}");
    assert!(text.contains("requirements in pack: 7"), "{text}");
    assert!(text.contains("artifacts: 14 = 7 valid + 7 invalid"), "{text}");
    let written = dir.join("pack-out/gate_pack_import-private-key_strict.json");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(written).unwrap()).unwrap();
    assert_eq!(json["owner"], "artifact-importer");
    assert_eq!(json["run"]["per_requirement"].as_object().unwrap().len(), 7);
}

#[test]
fn coverage_emits_the_surface_report() {
    let dir = shared_corpus();
    let out = run_in(
        dir,
        &[
            "coverage",
            "--surface",
            "certificate-spki",
            "--mode",
            "strict",
            "--corpus",
            "corpus",
            "--out",
            "cov-out",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("coverage: 10/10 requirements, 0 open gap(s)"), "{text}");
    assert!(dir.join("cov-out/certificate_spki_coverage_strict.json").exists());
}

#[test]
fn workflow_emits_the_seven_views() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["workflow", "--out", "views"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    for file in [
        "policy_matrix.csv",
        "stage_owner_summary.json",
        "operator_gate_matrix.json",
        "operator_gate_matrix.csv",
        "operator_readiness_summary.json",
        "reference_workflow.json",
        "reference_workflow.md",
    ] {
        assert!(dir.path().join("views").join(file).exists(), "{file}");
    }
}

#[test]
fn bridge_check_verdicts_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let seed: Vec<u8> = (0..64).map(|i| (i * 3 + 5) as u8).collect();
    let expanded = expand_seed(ParameterSet::MlKem512, &seed).unwrap();
    let seed_hex = hex::encode(&seed);
    let good = hex::encode(&expanded);

    let out = run_in(
        dir.path(),
        &[
            "bridge-check",
            "--param-set",
            "ML-KEM-512",
            "--seed-hex",
            &seed_hex,
            "--expanded-hex",
            &good,
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("verdict: consistent"));

    let mut bad = expanded.clone();
    bad[0] ^= 0x01;
    let out = run_in(
        dir.path(),
        &[
            "bridge-check",
            "--param-set",
            "ML-KEM-512",
            "--seed-hex",
            &seed_hex,
            "--expanded-hex",
            &hex::encode(&bad),
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("verdict: mismatch"));

    let out = run_in(
        dir.path(),
        &[
            "bridge-check",
            "--param-set",
            "ML-KEM-512",
            "--seed-hex",
            &seed_hex,
            "--expanded-hex",
            &good,
            "--bridge",
            "/nonexistent/bridge",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("verdict: bridge failure"));
}

#[test]
fn missing_bridge_makes_evaluate_infrastructure_fail() {
    let dir = shared_corpus();
    let out = run_in(
        dir,
        &[
            "evaluate",
            "--mode",
            "strict",
            "--corpus",
            "corpus",
            "--out",
            "broken-out",
            "--bridge",
            "/nonexistent/bridge",
        ],
    );
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
}

#[test]
fn explicit_registry_path_must_exist() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["validate-registry", "--registry", "no-such-file.json"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run_in(dir.path(), &["evaluate", "--mode", "lenient"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run_in(dir.path(), &["coverage", "--surface", "everything"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn replay_runs_the_whole_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["replay", "--corpus", "corpus", "--out", "results"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("result: PASS"), "{text}");
    assert!(dir.path().join("results/environment.txt").exists());
    assert!(dir.path().join("results/reference_workflow.md").exists());
    let env_text = std::fs::read_to_string(dir.path().join("results/environment.txt")).unwrap();
    assert!(env_text.starts_with("tool: pq-assure "), "{env_text}");
}
