use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXCHANGE: &str = "isr-matrix v1 2 2 rational\n1 2 1\n2 1 1\n";
const IDENTITY2: &str = "isr-matrix v1 2 2 rational\n1 1 1\n2 2 1\n";
const PATH4: &str = "isr-matrix v1 4 4 rational\n1 2 1\n2 1 1\n2 3 1\n3 2 1\n3 4 1\n4 3 1\n";

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn isr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isr"))
        .args(args)
        .env_remove("ISR_COLOR")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--output", "structured"];
    all.extend_from_slice(args);
    let o = isr(&all);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

#[test]
fn exchange_reduces_to_one_over_lambda() {
    let d = Dir::new();
    let h = d.file("p.txt", EXCHANGE);
    let o = isr(&["reduce", s(&h), "-s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 / λ"), "{}", stdout(&o));

    let (code, v) = structured(&["reduce", s(&h), "-s", "1", "--lambda", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["reduction"][0][0], "1 / λ");
    assert_eq!(v["results"]["evaluations"][0]["value"][0][0], "0.5");
    assert_eq!(v["mode"], "exact");
}

#[test]
fn shift_on_complement_spectrum_is_numeric_regime() {
    let d = Dir::new();
    let h = d.file("p.txt", EXCHANGE);
    let (code, v) = structured(&["reduce", s(&h), "-s", "1", "--lambda", "0"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "numeric-regime");
    assert_eq!(v["error"]["kind"], "singular-shift");
}

#[test]
fn spectrum_of_exchange() {
    let d = Dir::new();
    let h = d.file("p.txt", EXCHANGE);
    let (code, v) = structured(&["spectrum", s(&h), "-s", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["identity_holds"], true);
    assert_eq!(v["results"]["reduced_spectrum"], serde_json::json!([-1.0, 1.0]));
    let (code, v) = structured(&["--mode", "float", "spectrum", s(&h), "-s", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["reduced_spectrum"].as_array().unwrap().len(), 2);
}

#[test]
fn identity_and_end_swap_are_certified() {
    let d = Dir::new();
    let h = d.file("p4.txt", PATH4);
    for t in [IDENTITY2, EXCHANGE] {
        let t = d.file("t.txt", t);
        for mode in ["exact", "float"] {
            let (code, v) = structured(&["--mode", mode, "detect", s(&h), "-s", "1,4", "-t", s(&t)]);
            assert_eq!(code, 0, "{v}");
            assert_eq!(v["results"]["certified"], true);
        }
    }
}

#[test]
fn non_symmetry_is_rejected() {
    let d = Dir::new();
    let h = d.file("p4.txt", PATH4);
    let t = d.file("t.txt", "isr-matrix v1 2 2 rational\n1 1 1\n2 2 2\n");
    let (code, v) = structured(&["detect", s(&h), "-s", "1,3", "-t", s(&t)]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["certified"], false);
    assert_eq!(v["error"]["kind"], "not-latent-symmetry");
}

#[test]
fn commutant_of_path_ends() {
    let d = Dir::new();
    let h = d.file("p4.txt", PATH4);
    let (code, v) = structured(&["detect", s(&h), "-s", "1,4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["dimension"], 2);
}

#[test]
fn lift_writes_the_exchange_matrix() {
    let d = Dir::new();
    let h = d.file("p.txt", EXCHANGE);
    let q = d.path("q.txt");
    let o = isr(&["lift", s(&h), "-s", "1,2", "-t", s(&h), "--write-q", s(&q)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let written = std::fs::read_to_string(&q).unwrap();
    assert_eq!(
        isr_core::io::read_matrix(&written).unwrap(),
        isr_core::io::read_matrix(EXCHANGE).unwrap()
    );
}

#[test]
fn verify_replays_a_lift_report() {
    let d = Dir::new();
    let h = d.file("p4.txt", PATH4);
    let t = d.file("t.txt", EXCHANGE);
    for mode in ["exact", "float"] {
        let (code, lifted) = structured(&["--mode", mode, "lift", s(&h), "-s", "1,4", "-t", s(&t)]);
        assert_eq!(code, 0, "{lifted}");
        let report = d.file("lift.json", &serde_json::to_string(&lifted).unwrap());
        let (code, verified) = structured(&["--mode", mode, "verify", s(&h), "-s", "1,4", "-t", s(&t), "--q", s(&report)]);
        assert_eq!(code, 0, "{verified}");
        let before = lifted["results"]["verification"]["residuals"].as_array().unwrap();
        let after = verified["results"]["residuals"].as_array().unwrap();
        assert_eq!(before.len(), after.len());
        for (a, b) in before.iter().zip(after) {
            assert_eq!(a["name"], b["name"]);
            let (x, y) = (a["value"].as_f64().unwrap(), b["value"].as_f64().unwrap());
            assert!((x - y).abs() <= 1e-12, "{}: {x} vs {y}", a["name"]);
        }
    }
}

#[test]
fn perturbed_q_fails_verification() {
    let d = Dir::new();
    let h = d.file("p.txt", EXCHANGE);
    let q = d.file("q.txt", "isr-matrix v1 2 2 float\n1 2 1.0\n2 1 1.0\n1 1 1e-6\n");
    let (code, v) = structured(&["verify", s(&h), "-s", "1,2", "-t", s(&h), "--q", s(&q)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "verification-failed");
    assert_eq!(v["mode"], "float");
}

#[test]
fn reports_are_deterministic_apart_from_timings() {
    let d = Dir::new();
    let h = d.file("p4.txt", PATH4);
    let t = d.file("t.txt", EXCHANGE);
    let run = || {
        let (_, mut v) = structured(&["--mode", "float", "lift", s(&h), "-s", "1,4", "-t", s(&t)]);
        assert!(v["timings"]["total_ms"].is_number());
        v.as_object_mut().unwrap().remove("timings");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn malformed_input_is_an_input_error() {
    let d = Dir::new();
    let bad = d.file("bad.txt", "isr-matrix v1 2 2 rational\n1 2 x\n");
    let (code, v) = structured(&["reduce", s(&bad), "-s", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert!(v["error"]["message"].as_str().unwrap().contains("line 2"));

    let h = d.file("p.txt", EXCHANGE);
    let (code, v) = structured(&["reduce", s(&h), "-s", "3"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "invalid-subset");

    let o = isr(&["reduce", s(&d.path("missing.txt")), "-s", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = isr(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_normal_candidate_cannot_be_lifted() {
    let d = Dir::new();
    let h = d.file("p.txt", "isr-matrix v1 2 2 rational\n");
    let t = d.file("t.txt", "isr-matrix v1 2 2 rational\n1 1 1\n1 2 1\n2 2 1\n");
    let (code, v) = structured(&["lift", s(&h), "-s", "1,2", "-t", s(&t)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "not-normal");
}

#[test]
fn cospectral_pairs_of_a_path() {
    let d = Dir::new();
    let g = d.file("p3.txt", "isr-graph v1 3\n1 2\n2 3\n");
    let (code, v) = structured(&["cospectral", s(&g)]);
    assert_eq!(code, 0);
    let pairs = v["results"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0]["pair"], serde_json::json!([1, 3]));
    assert_eq!(pairs[0]["kind"], "automorphic");
    let (_, v) = structured(&["cospectral", s(&g), "--search-limit", "2"]);
    assert_eq!(v["results"]["pairs"][0]["kind"], "skipped");
}

#[test]
fn eigenvector_classes() {
    let d = Dir::new();
    let h = d.file("p4.txt", PATH4);
    let t = d.file("t.txt", EXCHANGE);
    let (code, v) = structured(&["eigvecs", s(&h), "-s", "1,4", "-t", s(&t), "--strict"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["falsified"], false);
    assert_eq!(v["results"]["entries"].as_array().unwrap().len(), 4);

    let zero = d.file("z.txt", "isr-matrix v1 2 2 rational\n");
    let one = d.file("one.txt", "isr-matrix v1 1 1 rational\n1 1 1\n");
    let (code, v) = structured(&["eigvecs", s(&zero), "-s", "1", "-t", s(&one), "--strict"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "degenerate-spectrum");
}

#[test]
fn color_only_on_request() {
    let d = Dir::new();
    let bad = d.file("bad.txt", "nonsense\n");
    let plain = isr(&["reduce", s(&bad), "-s", "1"]);
    assert!(!String::from_utf8_lossy(&plain.stderr).contains('\x1b'));
    let colored = Command::new(env!("CARGO_BIN_EXE_isr"))
        .args(["reduce", s(&bad), "-s", "1"])
        .env("ISR_COLOR", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&colored.stderr).contains('\x1b'));
}

#[test]
fn full_subset_prints_h() {
    let d = Dir::new();
    let h = d.file("p4.txt", PATH4);
    let (code, v) = structured(&["reduce", s(&h), "-s", "1-4"]);
    assert_eq!(code, 0);
    let rows = v["results"]["reduction"].as_array().unwrap();
    assert_eq!(rows[0], serde_json::json!(["0", "1", "0", "0"]));
    assert_eq!(rows[2], serde_json::json!(["0", "1", "0", "1"]));
}

#[test]
fn planted_instances_lift_and_verify() {
    use isr_core::generate::{planted_instance, rng, PlantedKind};
    use isr_core::io::{format_index_set, write_matrix};

    let d = Dir::new();
    for (k, kind) in [PlantedKind::Permutation, PlantedKind::Involution, PlantedKind::DiagonalUnitary]
        .into_iter()
        .enumerate()
    {
        let inst = planted_instance(9, 4, kind, &mut rng(k as u64 + 40));
        let h = d.file("h.txt", &write_matrix(&inst.h));
        let t = d.file("t.txt", &write_matrix(&inst.t));
        let q0 = d.file("q0.txt", &write_matrix(&inst.q0));
        let subset = format_index_set(&inst.subset);

        let (code, v) = structured(&["lift", s(&h), "-s", &subset, "-t", s(&t)]);
        assert_eq!(code, 0, "{v}");
        for r in v["results"]["verification"]["residuals"].as_array().unwrap() {
            assert!(r["value"].as_f64().unwrap() <= 1e-10, "{r}");
        }
        let (code, v) = structured(&["detect", s(&h), "-s", &subset, "-t", s(&t)]);
        assert_eq!(code, 0, "{v}");
        let (code, v) = structured(&["verify", s(&h), "-s", &subset, "-t", s(&t), "--q", s(&q0)]);
        assert_eq!(code, 0, "{v}");
    }
}
