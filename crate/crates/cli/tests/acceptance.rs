//! Acceptance criterion 9: two identical sweep invocations produce
//! byte-identical output files.

use std::path::Path;
use std::process::Command;

fn run_sweep(out_dir: &Path) -> Vec<u8> {
    let output = Command::new(env!("CARGO_BIN_EXE_mcfword"))
        .args([
            "sweep",
            "--n",
            "100",
            "--algos",
            "all",
            "--seed",
            "7",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    output.stdout
}

#[test]
fn criterion_9_sweep_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let stdout_a = run_sweep(&a);
    let stdout_b = run_sweep(&b);

    // the summary table (everything before the path echo lines) must agree
    let table = |bytes: &[u8]| {
        String::from_utf8(bytes.to_vec())
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("wrote "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(table(&stdout_a), table(&stdout_b));

    let mut names: Vec<String> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 14, "13 .dat files plus the stats table: {names:?}");
    for name in &names {
        let bytes_a = std::fs::read(a.join(name)).unwrap();
        let bytes_b = std::fs::read(b.join(name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "file {name} differs between reruns");
    }
    println!(
        "[acceptance] criterion 9 (byte-identical reruns): PASS - {} files compared",
        names.len()
    );
}
