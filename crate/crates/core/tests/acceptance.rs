//! Acceptance gate. One test per criterion; each prints a single
//! "PASS - criterion N" / "FAIL - criterion N" line (visible with
//! --nocapture, and always on failure).

use pq_assure_core::corpus::{generate_corpus, verify_manifest, ManifestEntry, Validity};
use pq_assure_core::evaluate::{
    coverage_report, evaluate_corpus, success_criteria, Disposition, RunSummary, Surface,
};
use pq_assure_core::fsio::hash_tree;
use pq_assure_core::mlkem::{
    byte_decode12, byte_encode12, check_ek_canonical, check_expanded_hash, CanonicalityVerdict,
    HashVerdict, MlKemLayout, N, POLY_BYTES, Q,
};
use pq_assure_core::pkix::ParameterSet;
use pq_assure_core::registry::{
    builtin_registry, validate_registry, DetectorKind, GatePack, Mode, NormativeStrength, Owner,
    Stage,
};
use pq_assure_core::replay::run_replay;
use pq_assure_core::substrate::{Substrate, SubstrateVerdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha3::{Digest, Sha3_256};
use std::collections::BTreeMap;
use std::panic::AssertUnwindSafe;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

fn criterion(n: usize, label: &str, body: impl FnOnce()) {
    match std::panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("PASS - criterion {n}: {label}"),
        Err(payload) => {
            println!("FAIL - criterion {n}: {label}");
            std::panic::resume_unwind(payload);
        }
    }
}

/// Corpus generated once and shared read-only by the criteria.
fn fixture() -> &'static (PathBuf, Vec<ManifestEntry>) {
    static FIX: OnceLock<(PathBuf, Vec<ManifestEntry>)> = OnceLock::new();
    FIX.get_or_init(|| {
        let root = tempfile::tempdir().unwrap().keep();
        let entries = generate_corpus(&root).unwrap();
        (root, entries)
    })
}

fn run(mode: Mode) -> RunSummary {
    let (root, entries) = fixture();
    let registry = builtin_registry();
    evaluate_corpus(root, entries, &registry, mode, &Substrate::Structural)
}

fn count_by<K: Ord, T>(items: impl Iterator<Item = T>, key: impl Fn(&T) -> K) -> BTreeMap<K, usize> {
    let mut map = BTreeMap::new();
    for item in items {
        *map.entry(key(&item)).or_insert(0) += 1;
    }
    map
}

#[test]
fn criterion_1_registry_topology() {
    criterion(1, "registry topology", || {
        let registry = builtin_registry();
        assert!(validate_registry(&registry).is_clean());
        assert_eq!(registry.requirements.len(), 17);

        let owners = count_by(registry.requirements.iter(), |r| r.owner);
        assert_eq!(owners.get(&Owner::CaPreissuance), Some(&10));
        assert_eq!(owners.get(&Owner::ArtifactImporter), Some(&7));
        assert_eq!(owners.get(&Owner::RuntimeConsumer), None);

        let packs = count_by(registry.requirements.iter(), |r| r.gate_pack);
        assert_eq!(packs[&GatePack::CaCertificateProfile], 5);
        assert_eq!(packs[&GatePack::CaSpkiPublicKey], 5);
        assert_eq!(packs[&GatePack::ImportPrivateKey], 7);

        let kinds = count_by(registry.requirements.iter(), |r| r.detector_kind);
        assert_eq!(kinds[&DetectorKind::Structural], 10);
        assert_eq!(kinds[&DetectorKind::Policy], 4);
        assert_eq!(kinds[&DetectorKind::ImportCrypto], 3);

        let strengths = count_by(registry.requirements.iter(), |r| r.normative_strength);
        assert_eq!(strengths[&NormativeStrength::Must], 15);
        assert_eq!(strengths[&NormativeStrength::Should], 2);

        let warns: Vec<String> = registry.warn_set(Mode::Deployable).into_iter().collect();
        assert_eq!(warns, ["MLKEM-SPKI-ENCODE-DECODE-IDENTITY"]);
        assert!(registry.warn_set(Mode::Strict).is_empty());
    });
}

#[test]
fn criterion_2_corpus_parity() {
    criterion(2, "corpus parity", || {
        let (root, entries) = fixture();
        assert_eq!(entries.len(), 48);

        let validity = count_by(entries.iter(), |e| e.validity);
        assert_eq!(validity[&Validity::Valid], 21);
        assert_eq!(validity[&Validity::Invalid], 27);

        let stages = count_by(entries.iter(), |e| e.stage);
        assert_eq!(stages[&Stage::CertificateProfile], 14);
        assert_eq!(stages[&Stage::SpkiPublicKey], 20);
        assert_eq!(stages[&Stage::PrivateKeyImport], 14);

        let invalid_stages = count_by(
            entries.iter().filter(|e| e.validity == Validity::Invalid),
            |e| e.stage,
        );
        assert_eq!(invalid_stages[&Stage::CertificateProfile], 7);
        assert_eq!(invalid_stages[&Stage::SpkiPublicKey], 13);
        assert_eq!(invalid_stages[&Stage::PrivateKeyImport], 7);

        let families = count_by(
            entries.iter().filter_map(|e| e.fault_family),
            |family| family.name(),
        );
        let expected: BTreeMap<&str, usize> = [
            ("encoding/container", 8),
            ("size/shape", 7),
            ("inter-field-consistency", 5),
            ("profile/usage-policy", 4),
            ("field-domain", 1),
            ("algorithm-policy", 1),
            ("import-validation", 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(families, expected);

        let report = verify_manifest(&root.join("manifest.jsonl")).unwrap();
        assert_eq!(report.checked, 48);
        assert!(report.is_clean());
    });
}

#[test]
fn criterion_3_strict_run() {
    criterion(3, "strict run", || {
        let summary = run(Mode::Strict);
        assert_eq!(summary.totals.block, 27);
        assert_eq!(summary.totals.warn, 0);
        assert_eq!(summary.totals.pass, 21);
        assert_eq!(summary.totals.false_positives, 0);
        assert!(summary.errors.is_empty());
        for report in &summary.reports {
            if report.validity == Validity::Invalid {
                assert!(report.expected_met, "{}", report.artifact_id);
            }
            assert!(report.unexpected.is_empty(), "{}", report.artifact_id);
        }
        assert!(success_criteria(&summary).passed());
    });
}

#[test]
fn criterion_4_deployable_run() {
    criterion(4, "deployable run", || {
        let strict = run(Mode::Strict);
        let deployable = run(Mode::Deployable);
        assert_eq!(deployable.totals.block, 26);
        assert_eq!(deployable.totals.warn, 1);
        assert_eq!(deployable.totals.pass, 21);

        let warned: Vec<&str> = deployable
            .reports
            .iter()
            .filter(|r| r.disposition == Disposition::Warn)
            .map(|r| r.artifact_id.as_str())
            .collect();
        assert_eq!(warned, ["der-mut-mlkem768-spki-unreduced-byteencode12-pub"]);

        assert_eq!(strict.reports.len(), deployable.reports.len());
        for (a, b) in strict.reports.iter().zip(&deployable.reports) {
            assert_eq!(a.artifact_id, b.artifact_id);
            let a_bytes = serde_json::to_vec(&a.findings).unwrap();
            let b_bytes = serde_json::to_vec(&b.findings).unwrap();
            assert_eq!(a_bytes, b_bytes, "finding bytes differ on {}", a.artifact_id);
        }
        assert!(success_criteria(&deployable).passed());
    });
}

#[test]
fn criterion_5_importer_closure() {
    criterion(5, "importer closure", || {
        let registry = builtin_registry();
        for mode in Mode::ALL {
            let summary = run(mode);
            let report = coverage_report(&summary, Surface::PrivateKey, &registry);
            assert_eq!(report.requirement_count, 7, "{}", mode.name());
            assert_eq!(report.detected_count, 7, "{}", mode.name());
            assert!(report.open_gaps.is_empty(), "{}", mode.name());
        }
    });
}

#[test]
fn criterion_6_redundancy_semantics() {
    criterion(6, "redundancy semantics", || {
        let summary = run(Mode::Strict);
        for id in [
            "der-mut-mldsa44-cert-signature-aid-null",
            "der-mut-mldsa44-cert-signature-aid-octet-params",
        ] {
            let report = summary
                .reports
                .iter()
                .find(|r| r.artifact_id == id)
                .unwrap_or_else(|| panic!("{id} missing from run"));
            assert_eq!(report.findings.len(), 2, "{id}");
            let unique: std::collections::BTreeSet<&str> = report
                .findings
                .iter()
                .map(|f| f.requirement_id.as_str())
                .collect();
            assert_eq!(unique.len(), 1, "{id}");
            assert_eq!(report.redundant_count, 1, "{id}");
        }
    });
}

#[test]
fn criterion_7_codec_properties() {
    criterion(7, "codec properties", || {
        bijection_over_random_blocks();
        boundary_lanes_round_trip();
        canonicality_flips_on_raised_lane();
        expanded_hash_locality();
    });
}

/// decode12 then encode12 reproduces 10,000 seeded random blocks, and the
/// decoded lanes re-encode to the same coefficients.
fn bijection_over_random_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1257_3329);
    for round in 0..10_000 {
        let mut block = vec![0u8; POLY_BYTES];
        rng.fill(&mut block[..]);
        let coeffs = byte_decode12(&block).unwrap();
        assert_eq!(coeffs.len(), N);
        assert!(coeffs.iter().all(|&c| c < 4096), "round {round}");
        let back = byte_encode12(&coeffs).unwrap();
        assert_eq!(back, block, "round {round}");
    }
}

fn boundary_lanes_round_trip() {
    for v in [0u16, 3328, 3329, 4095] {
        let coeffs = vec![v; N];
        let block = byte_encode12(&coeffs).unwrap();
        assert_eq!(byte_decode12(&block).unwrap(), coeffs, "lane {v}");
    }
    let mixed: Vec<u16> = (0..N)
        .map(|i| [0u16, 3328, 3329, 4095][i % 4])
        .collect();
    let block = byte_encode12(&mixed).unwrap();
    assert_eq!(byte_decode12(&block).unwrap(), mixed);
}

/// Any single lane raised into [q, 4096) breaks canonicality, and the
/// verdict names that lane.
fn canonicality_flips_on_raised_lane() {
    use proptest::prelude::*;
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

    let layout = MlKemLayout::from_k(2).unwrap();
    let lanes = layout.k * N;
    let config = Config {
        cases: 512,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config,
        TestRng::from_seed(RngAlgorithm::ChaCha, &[11u8; 32]),
    );
    let strategy = (
        proptest::collection::vec(0u16..Q, lanes),
        proptest::collection::vec(proptest::num::u8::ANY, 32),
        0..lanes,
        Q..4096u16,
    );
    runner
        .run(&strategy, |(coeffs, rho, index, raised)| {
            let mut ek = Vec::with_capacity(layout.ek_len());
            for poly in coeffs.chunks(N) {
                ek.extend_from_slice(&byte_encode12(poly).unwrap());
            }
            ek.extend_from_slice(&rho);
            prop_assert_eq!(
                check_ek_canonical(&ek, layout).unwrap(),
                CanonicalityVerdict::Canonical
            );

            let mut mutated = coeffs.clone();
            mutated[index] = raised;
            let mut bad = Vec::with_capacity(layout.ek_len());
            for poly in mutated.chunks(N) {
                bad.extend_from_slice(&byte_encode12(poly).unwrap());
            }
            bad.extend_from_slice(&rho);
            prop_assert_eq!(
                check_ek_canonical(&bad, layout).unwrap(),
                CanonicalityVerdict::NonCanonical {
                    first_index: index,
                    violations: 1
                }
            );
            Ok(())
        })
        .unwrap();
}

/// The hash verdict ignores dk_pke and z bytes and flips on any h_ek byte.
fn expanded_hash_locality() {
    use proptest::prelude::*;
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

    let layout = MlKemLayout::from_k(2).unwrap();
    let config = Config {
        cases: 512,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config,
        TestRng::from_seed(RngAlgorithm::ChaCha, &[23u8; 32]),
    );
    let strategy = (
        proptest::collection::vec(proptest::num::u8::ANY, layout.dk_pke_span().len()),
        proptest::collection::vec(proptest::num::u8::ANY, layout.ek_len()),
        proptest::collection::vec(proptest::num::u8::ANY, 32),
        proptest::num::usize::ANY,
        1..=255u8,
    );
    runner
        .run(&strategy, |(dk_pke, ek, z, index, xor)| {
            let h_ek: Vec<u8> = Sha3_256::digest(&ek).to_vec();
            let mut dk = Vec::with_capacity(layout.dk_len());
            dk.extend_from_slice(&dk_pke);
            dk.extend_from_slice(&ek);
            dk.extend_from_slice(&h_ek);
            dk.extend_from_slice(&z);
            prop_assert_eq!(check_expanded_hash(&dk, layout).unwrap(), HashVerdict::Consistent);

            let mut hit_dk_pke = dk.clone();
            let i = layout.dk_pke_span().start + index % layout.dk_pke_span().len();
            hit_dk_pke[i] ^= xor;
            prop_assert_eq!(
                check_expanded_hash(&hit_dk_pke, layout).unwrap(),
                HashVerdict::Consistent
            );

            let mut hit_z = dk.clone();
            let i = layout.z_span().start + index % 32;
            hit_z[i] ^= xor;
            prop_assert_eq!(check_expanded_hash(&hit_z, layout).unwrap(), HashVerdict::Consistent);

            let mut hit_h = dk;
            let i = layout.h_ek_span().start + index % 32;
            hit_h[i] ^= xor;
            prop_assert_eq!(check_expanded_hash(&hit_h, layout).unwrap(), HashVerdict::Mismatch);
            Ok(())
        })
        .unwrap();
}

#[test]
fn criterion_8_determinism() {
    criterion(8, "determinism", || {
        let registry = builtin_registry();
        let root_a = tempfile::tempdir().unwrap();
        let corpus_a = root_a.path().join("corpus");
        let out_a = root_a.path().join("results");
        run_replay(&corpus_a, &out_a, &registry, &Substrate::Structural).unwrap();
        let first = (hash_tree(&corpus_a).unwrap(), hash_tree(&out_a).unwrap());

        run_replay(&corpus_a, &out_a, &registry, &Substrate::Structural).unwrap();
        let second = (hash_tree(&corpus_a).unwrap(), hash_tree(&out_a).unwrap());
        assert_eq!(first, second, "re-running over the same tree changed bytes");

        let root_b = tempfile::tempdir().unwrap();
        let corpus_b = root_b.path().join("corpus");
        let out_b = root_b.path().join("results");
        run_replay(&corpus_b, &out_b, &registry, &Substrate::Structural).unwrap();
        let fresh = (hash_tree(&corpus_b).unwrap(), hash_tree(&out_b).unwrap());
        assert_eq!(first, fresh, "a fresh replay produced different bytes");
    });
}

fn write_stub(dir: &Path, name: &str, exit_code: u8) -> PathBuf {
    use std::os::unix::fs::PermissionsExt;
    let path = dir.join(name);
    std::fs::write(&path, format!("#!/bin/sh\nexit {exit_code}\n")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

#[test]
fn criterion_9_bridge_protocol() {
    criterion(9, "bridge protocol", || {
        let dir = tempfile::tempdir().unwrap();
        let seed = [0u8; 64];
        let expanded = [0u8; 1632];

        let verdict = |path: PathBuf| {
            Substrate::Bridge(path).check_consistency(ParameterSet::MlKem512, &seed, &expanded)
        };
        assert_eq!(verdict(write_stub(dir.path(), "ok", 0)), SubstrateVerdict::Consistent);
        assert_eq!(verdict(write_stub(dir.path(), "no", 1)), SubstrateVerdict::Mismatch);
        assert!(matches!(
            verdict(write_stub(dir.path(), "boom", 2)),
            SubstrateVerdict::Failure { .. }
        ));
        assert!(matches!(
            verdict(dir.path().join("missing")),
            SubstrateVerdict::Failure { .. }
        ));

        // A both-form valid key needs the consistency answer; with the
        // substrate failing, the run must fail rather than pass it.
        let (root, entries) = fixture();
        let registry = builtin_registry();
        let broken = Substrate::Bridge(write_stub(dir.path(), "always-fail", 2));
        let summary = evaluate_corpus(root, entries, &registry, Mode::Strict, &broken);
        let error_ids: Vec<&str> = summary.errors.iter().map(|e| e.artifact_id.as_str()).collect();
        assert!(error_ids.contains(&"openssl-mldsa44-ee-key"), "{error_ids:?}");
        assert!(error_ids.contains(&"openssl-mlkem512-ee-key"), "{error_ids:?}");
        for report in &summary.reports {
            if report.artifact_id == "openssl-mldsa44-ee-key"
                || report.artifact_id == "openssl-mlkem512-ee-key"
            {
                assert_eq!(report.disposition, Disposition::Error, "{}", report.artifact_id);
            }
        }
        assert!(!success_criteria(&summary).passed());
    });
}
