use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// Every shipped job with its exit code. A job file missing here fails the
/// golden test, so new jobs must be registered.
const JOBS: &[(&str, i32)] = &[
    ("affine-pipeline", 0),
    ("b1-bigrading", 0),
    ("b1-ce", 0),
    ("b1-etale", 0),
    ("b1-relations", 0),
    ("b1-split", 0),
    ("b1-squared-etale", 1),
    ("b1-squared-split", 1),
    ("bogus-relations", 1),
    ("e1-ce", 0),
    ("e1-cohomology", 0),
    ("e1-etale", 0),
    ("e1-quasi-iso", 0),
    ("e1-relations", 0),
    ("e2-cohomology", 0),
    ("e2-quasi-iso", 1),
    ("e2-relations", 0),
    ("e4-bigrading", 0),
    ("e4-ce", 0),
    ("e4-cohomology", 0),
    ("e4-embedding-etale", 0),
    ("e4-embedding-morphism", 0),
    ("e4-heq", 0),
    ("e4-quasi-iso", 0),
    ("e4-transfer", 0),
    ("e5-chart-morphism", 0),
    ("e5-chart-pipeline", 0),
    ("e5-quasi-iso", 0),
    ("e5-reduce", 0),
    ("e5-step1", 0),
    ("koszul-euler", 0),
    ("koszul-tube", 0),
    ("line-into-plane-quasi-iso", 1),
    ("line-iso-quasi-iso", 0),
];

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn linfty(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linfty"))
        .args(args)
        .current_dir(crate_dir())
        .output()
        .expect("binary runs")
}

fn run_job(name: &str, format: &str) -> Output {
    let job = format!("jobs/{name}.json");
    linfty(&["run", "--input", &job, "--format", format, "--no-timing"])
}

fn compare(golden: &Path, actual: &[u8]) -> Result<(), String> {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(golden, actual).unwrap();
        return Ok(());
    }
    let want = fs::read(golden).map_err(|e| format!("{}: {e}", golden.display()))?;
    if want != actual {
        return Err(format!(
            "{} differs:\n{}",
            golden.display(),
            String::from_utf8_lossy(actual)
        ));
    }
    Ok(())
}

#[test]
fn every_job_matches_its_golden_report() {
    let mut shipped: Vec<String> = fs::read_dir(crate_dir().join("jobs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    shipped.sort();
    let listed: Vec<&str> = JOBS.iter().map(|(n, _)| *n).collect();
    assert_eq!(shipped, listed);

    let mut errors = Vec::new();
    for (name, code) in JOBS {
        for (format, ext) in [("json", "json"), ("text", "txt")] {
            let out = run_job(name, format);
            if out.status.code() != Some(*code) {
                errors.push(format!(
                    "{name} ({format}): exit {:?}, expected {code}; stderr {}",
                    out.status.code(),
                    String::from_utf8_lossy(&out.stderr)
                ));
            }
            let golden = crate_dir().join("golden").join(format!("{name}.{ext}"));
            if let Err(e) = compare(&golden, &out.stdout) {
                errors.push(e);
            }
        }
    }
    assert!(errors.is_empty(), "{}", errors.join("\n"));
}

#[test]
fn failing_reports_carry_witnesses() {
    for (name, code) in JOBS.iter().filter(|(_, c)| *c == 1) {
        let out = run_job(name, "json");
        assert_eq!(out.status.code(), Some(*code));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["verdict"], "fail");
        for c in v["checks"].as_array().unwrap() {
            if c["verdict"] == "fail" {
                assert!(c["witness"].is_object(), "{name}: {c}");
            }
        }
    }
}

#[test]
fn shipped_fixtures_are_canonical() {
    for dir in ["fixtures", "jobs"] {
        for e in fs::read_dir(crate_dir().join(dir)).unwrap() {
            let p = e.unwrap().path();
            let rel = format!("{dir}/{}", p.file_name().unwrap().to_string_lossy());
            let out = linfty(&["canon", "--input", &rel]);
            assert_eq!(out.status.code(), Some(0), "{rel}");
            assert_eq!(out.stdout, fs::read(&p).unwrap(), "{rel} is not canonical");
        }
    }
}

#[test]
fn reports_differ_only_in_timing() {
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["timing_ms"].is_u64());
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let a = strip(linfty(&["run", "--input", "jobs/e4-heq.json", "--format", "json"]));
    let b = strip(linfty(&["run", "--input", "jobs/e4-heq.json", "--format", "json"]));
    assert_eq!(a, b);
}

#[test]
fn direct_invocation_matches_the_job() {
    let direct = linfty(&[
        "transfer",
        "--input",
        "fixtures/e4.json",
        "--contraction",
        "fixtures/e4-eta.json",
        "--format",
        "json",
        "--no-timing",
    ]);
    assert_eq!(direct.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&direct.stdout).unwrap();
    let phi: Vec<&str> = v["data"]["phi"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(phi.contains(&"φ₂(h,h) = -m"));
    assert_eq!(v["data"]["mu"][0], "μ₂(h,h) = c");
}

fn scratch(name: &str, text: &str) -> String {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn input_error(args: &[&str]) -> String {
    let out = linfty(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn input_errors_exit_with_two() {
    assert!(input_error(&["frobnicate", "--input", "fixtures/e1.json"]).contains("UnknownCommand"));
    assert!(input_error(&["check-relations", "--input", "fixtures/missing.json"]).contains("cannot read"));
    assert!(input_error(&["transfer", "--input", "fixtures/e4.json"]).contains("--contraction"));
    assert!(input_error(&["check-relations", "--input", "fixtures/e5-morphism.json"]).contains("expected a structure"));

    let odd = scratch(
        "odd.json",
        r#"{"version":"linfty/1","kind":"structure","space":[{"degree":1,"basis":["a"]},{"degree":3,"basis":["c"]}],"ops":[{"inputs":["a","a"],"output":{"c":"1"}}]}"#,
    );
    assert!(input_error(&["check-relations", "--input", &odd]).contains("NonCanonicalWord"));

    let deg = scratch(
        "degree.json",
        r#"{"version":"linfty/1","kind":"structure","space":[{"degree":2,"basis":["h"]},{"degree":4,"basis":["m"]}],"ops":[{"inputs":["h","h"],"output":{"m":"1"}}]}"#,
    );
    let msg = input_error(&["check-relations", "--input", &deg]);
    assert!(msg.contains("DegreeRuleViolation") && msg.contains("(h,h) → m"), "{msg}");

    let extra = scratch(
        "extra.json",
        r#"{"version":"linfty/1","kind":"structure","space":[],"ops":[],"note":"x"}"#,
    );
    assert!(input_error(&["ce", "--input", &extra]).contains("SchemaError"));

    let version = scratch("version.json", r#"{"version":"linfty/0","kind":"structure","space":[],"ops":[]}"#);
    assert!(input_error(&["ce", "--input", &version]).contains("version"));
}
