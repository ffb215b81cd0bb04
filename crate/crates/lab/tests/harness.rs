use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

use adlv_lab::checkers::{registry, twin_ids};
use adlv_lab::grid::GridRef;
use adlv_lab::{replay, run_checker, run_suite, CheckReport, CheckerConfig, LabError, Status, Suite, SweepMode};

fn small(id: &str) -> CheckerConfig {
    let mut c = CheckerConfig::new(id);
    c.grid = GridRef::Named("small".into());
    c
}

fn suite_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("suites").join(name)
}

#[test]
fn reports_are_byte_identical() {
    for id in ["orth.3", "semi.1", "type-I"] {
        let a = run_checker(&small(id)).unwrap().to_json();
        let b = run_checker(&small(id)).unwrap().to_json();
        assert_eq!(a, b, "{id}");
    }
    let mut cfg = small("R1.1");
    cfg.mode = SweepMode::Sampled;
    cfg.seed = 7;
    assert_eq!(run_checker(&cfg).unwrap().to_json(), run_checker(&cfg).unwrap().to_json());
}

#[test]
fn passing_report_has_empty_counterexample_list() {
    let r = run_checker(&small("commute")).unwrap();
    assert_eq!(r.status, Status::Pass);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    assert_eq!(v["schema"], "adlv-report/1");
}

#[test]
fn counterexamples_replay_after_round_trip() {
    for id in ["anti.1.printed", "commute~negate", "c-set~negate", "orth.2~drop"] {
        let r = run_checker(&small(id)).unwrap();
        assert_eq!(r.status, Status::Fail, "{id}");
        assert!(!r.counterexamples.is_empty());
        let back: CheckReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(replay(&back).unwrap().iter().all(|&b| b), "{id}");
    }
}

#[test]
fn replay_rejects_a_foreign_witness() {
    let mut r = run_checker(&small("anti.1.printed")).unwrap();
    r.counterexamples.truncate(1);
    r.counterexamples[0].witness = serde_json::json!({"no": "such witness"});
    assert_eq!(replay(&r).unwrap(), vec![false]);
}

#[test]
fn empty_suite_succeeds() {
    let s = Suite::parse(r#"{"name": "empty", "checks": []}"#).unwrap();
    let r = run_suite(&s).unwrap();
    assert!(r.ok);
    assert!(r.reports.is_empty());
    assert_eq!(r.instances_checked, 0);
}

#[test]
fn unknown_lemma_is_an_error() {
    assert!(matches!(run_checker(&CheckerConfig::new("no-such-lemma")), Err(LabError::UnknownLemma(_))));
    assert!(matches!(run_checker(&CheckerConfig::new("commute~sideways")), Err(LabError::UnknownLemma(_))));
    assert!(Suite::parse("{ not json").is_err());
}

#[test]
fn suite_with_a_falsified_checker_fails() {
    let s = Suite::parse(r#"{"name": "self-test", "grid": "small", "checks": [{"lemma_id": "commute~negate"}]}"#).unwrap();
    let r = run_suite(&s).unwrap();
    assert!(!r.ok);
    assert!(r.reports[0].counterexample_count >= 1);
}

#[test]
fn registry_ids_are_unique_and_quoted() {
    let ids: BTreeSet<&str> = registry().iter().map(|c| c.id).collect();
    assert_eq!(ids.len(), registry().len());
    assert!(registry().iter().all(|c| !c.quote.is_empty()));
}

#[test]
fn shipped_suites_cover_the_registry() {
    let default = Suite::load(&suite_path("default.json")).unwrap();
    let listed: BTreeSet<String> = default.checks.iter().map(|c| c.lemma_id.clone()).collect();
    for c in registry() {
        assert!(listed.contains(c.id), "{} missing from default.json", c.id);
    }
    let mutation = Suite::load(&suite_path("mutation.json")).unwrap();
    let listed: BTreeSet<String> = mutation.checks.iter().map(|c| c.lemma_id.clone()).collect();
    assert_eq!(listed, twin_ids().into_iter().collect());
}

#[test]
fn cli_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_adlv");
    let ok = Command::new(bin).args(["check", "commute", "--grid", "small"]).output().unwrap();
    assert!(ok.status.success());
    let fail = Command::new(bin).args(["check", "commute~negate", "--grid", "small"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let unknown = Command::new(bin).args(["check", "no-such-lemma"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let adm = Command::new(bin).args(["adm", "--type", "A1", "--lambda", "1"]).output().unwrap();
    assert!(adm.status.success());
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]

    #[test]
    fn sampling_is_seeded_and_bounded(seed in 0u64..1_000_000, rate in 0.05f64..0.9) {
        let full = run_checker(&small("semi.3")).unwrap();
        let mut cfg = small("semi.3");
        cfg.mode = SweepMode::Sampled;
        cfg.seed = seed;
        cfg.sample_rate = rate;
        let a = run_checker(&cfg).unwrap();
        proptest::prop_assert_eq!(a.to_json(), run_checker(&cfg).unwrap().to_json());
        proptest::prop_assert!(a.instances_checked <= full.instances_checked);
        proptest::prop_assert!(a.hits <= full.hits);
    }
}
