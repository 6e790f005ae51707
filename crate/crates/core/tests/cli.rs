use std::path::{Path, PathBuf};

use primfilt::certify::{self, CertificateFile};
use tempfile::TempDir;

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> i32 {
    certify::run(std::iter::once("primfilt").chain(args.iter().copied()))
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Work {
        Work { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }
}

#[test]
fn generated_families_verify_like_direct_generation() {
    let w = Work::new();
    let (fam, a, b) = (s(&w.path("fam.json")), s(&w.path("a.json")), s(&w.path("b.json")));
    assert_eq!(run(&["generate", "--type", "A1", "--out", &fam]), 0);
    let common = ["--samples", "3", "--seed", "7"];
    assert_eq!(run(&[&["verify", "--type", "A1", "--out", &a][..], &common].concat()), 0);
    assert_eq!(run(&[&["verify", "--families", &fam, "--out", &b][..], &common].concat()), 0);
    assert_eq!(w.read("a.json"), w.read("b.json"));
}

#[test]
fn recheck_reproduces_every_certificate() {
    let w = Work::new();
    let certs = s(&w.path("c.json"));
    assert_eq!(run(&["verify", "--type", "A1xA1", "--k-min", "0", "--k-max", "1", "--samples", "2", "--out", &certs]), 0);
    assert_eq!(run(&["recheck", "--certs", &certs]), 0);

    let mut file = CertificateFile::from_json(&w.read("c.json")).unwrap();
    let first = &mut file.certificates[0];
    first.detail.push_str(" (edited)");
    std::fs::write(w.path("c.json"), file.to_json()).unwrap();
    assert_eq!(run(&["recheck", "--certs", &certs]), 1);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let w = Work::new();
    std::fs::write(w.path("run.toml"), "types = [\"B2\"]\nk_min = 0\nk_max = 1\nsamples = 2\nseed = 5\n").unwrap();
    let out = s(&w.path("c.json"));
    assert_eq!(run(&["verify", "--config", &s(&w.path("run.toml")), "--type", "A1", "--out", &out]), 0);
    let file = CertificateFile::from_json(&w.read("c.json")).unwrap();
    assert_eq!(file.arrangements, ["A1"]);
    assert_eq!(file.seed, 5);
    assert!(file.certificates.iter().all(|c| c.arrangement == "A1"));

    std::fs::write(w.path("bad.toml"), "typo = 1\n").unwrap();
    assert_eq!(run(&["verify", "--config", &s(&w.path("bad.toml"))]), 2);
}

#[test]
fn report_lists_failures_first_and_shows_constants() {
    let w = Work::new();
    let certs = s(&w.path("c.json"));
    assert_eq!(run(&["verify", "--type", "A1", "--k-min", "0", "--k-max", "1", "--samples", "2", "--out", &certs]), 0);
    let mut file = CertificateFile::from_json(&w.read("c.json")).unwrap();
    let last = file.certificates.len() - 1;
    file.certificates[last].verdict = certify::Verdict::Fail;
    file.certificates[last].detail = "forced".into();
    let failed_id = file.certificates[last].id.clone();
    std::fs::write(w.path("c.json"), file.to_json()).unwrap();

    assert_eq!(run(&["report", "--certs", &certs, "--format", "tsv", "--out", &s(&w.path("r.tsv"))]), 0);
    let tsv = w.read("r.tsv");
    let first_row = tsv.lines().nth(2).unwrap();
    assert!(first_row.starts_with("FAIL\t") && first_row.contains(&failed_id), "{first_row}");
    assert!(tsv.lines().any(|l| l.starts_with("A1\tk=1\t") && l.ends_with("constant=1")), "{tsv}");

    assert_eq!(run(&["report", "--certs", &certs, "--out", &s(&w.path("r.md"))]), 0);
    assert!(w.read("r.md").contains("1 failed"));
}

#[test]
fn empty_certificate_file_gives_empty_tables() {
    let w = Work::new();
    let file = CertificateFile {
        schema: certify::SCHEMA,
        tool_version: certify::TOOL_VERSION.into(),
        seed: 42,
        arrangements: vec![],
        certificates: vec![],
    };
    std::fs::write(w.path("e.json"), file.to_json()).unwrap();
    assert_eq!(run(&["report", "--certs", &s(&w.path("e.json")), "--out", &s(&w.path("e.md"))]), 0);
    let md = w.read("e.md");
    assert!(md.contains("0 certificates, 0 failed"));
    assert!(md.contains("| status | id |"));
    assert!(!md.contains("Timing"));
}

#[test]
fn bad_invocations_exit_two() {
    let w = Work::new();
    assert_eq!(run(&["verify", "--type", "Z9"]), 2);
    assert_eq!(run(&["verify", "--type", "A1", "--k-min", "2", "--k-max", "1"]), 2);
    assert_eq!(run(&["frobnicate"]), 2);
    assert_eq!(run(&["report", "--certs", &s(&w.path("missing.json"))]), 2);
    std::fs::write(w.path("v9.json"), r#"{"schema":9,"tool_version":"x","seed":1,"arrangements":[],"certificates":[]}"#).unwrap();
    assert_eq!(run(&["recheck", "--certs", &s(&w.path("v9.json"))]), 2);
}
