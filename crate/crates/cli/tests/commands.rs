use std::path::PathBuf;
use std::process::{Command, Output};

fn fugal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fugal")).args(args).output().expect("binary runs")
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

const CASES: &[(&str, &[&str], i32)] = &[
    ("run-xor", &["run", "xor", "101"], 0),
    ("run-blink", &["run", "blink", "tick,tick,hold"], 0),
    ("compose-id-xor", &["compose", "id", "xor", "--run", "101"], 0),
    ("compose-xor-delay", &["compose", "xor", "delay"], 0),
    ("compose-check", &["compose", "xor", "delay", "--check", "4"], 0),
    ("fugal-nonfugal", &["fugal", "check", "nonfugal"], 1),
    ("fugal-parity", &["fugal", "check", "parity"], 0),
    ("fugal-extend-xor", &["fugal", "extend", "xor", "--len", "2"], 0),
    ("adjunction-parity", &["adjunction", "roundtrip", "parity-set", "--monoid", "z2"], 0),
    ("guitart-translate-flip", &["guitart", "translate", "flip"], 0),
    ("guitart-sigma-nonfugal", &["guitart", "sigma", "nonfugal"], 1),
    ("guitart-compose-flip", &["guitart", "compose", "flip", "flip"], 0),
    ("guitart-verify-flip", &["guitart", "verify", "flip", "flip"], 0),
    ("kleisli-lift-xor", &["kleisli", "lift", "xor"], 0),
    ("kleisli-expand-coin", &["kleisli", "expand", "coin"], 0),
    ("kleisli-run-coin", &["kleisli", "run", "coin", "look,flip,look", "--from", "h"], 0),
    ("rel-ran-moore", &["rel", "ran", "step", "watch"], 0),
    ("rel-ran-mealy", &["rel", "ran", "step", "watch", "--mode", "mealy"], 0),
    ("rel-terminal", &["rel", "verify-terminal", "step", "watch"], 0),
    ("rel-not-terminal", &["rel", "verify-terminal", "step", "watch", "--candidate", "watch"], 1),
    ("cat-ran-swap", &["cat", "ran", "swap", "obs"], 0),
    ("cat-machine-swap", &["cat", "machine", "swap-monad", "obs"], 0),
    ("intertwiner-loop", &["intertwiner", "check", "xor-loop"], 0),
    ("intertwiner-swap", &["intertwiner", "check", "xor-swap"], 1),
    ("intertwiner-paste", &["intertwiner", "compose", "xor-loop", "xor-loop"], 0),
    ("laws-seed-0", &["laws", "--seed", "0"], 0),
    ("show-xor", &["show", "xor"], 0),
];

/// Set `FUGAL_BLESS=1` to rewrite the golden files from the current binary.
#[test]
fn golden_outputs() {
    let bless = std::env::var_os("FUGAL_BLESS").is_some();
    for (name, args, code) in CASES {
        let out = fugal(args);
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert_eq!(out.status.code(), Some(*code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = golden_dir().join(format!("{name}.out"));
        if bless {
            std::fs::write(&path, &stdout).unwrap();
        } else {
            let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
            assert_eq!(stdout, want, "{name}");
        }
    }
}

#[test]
fn compose_runs_the_pipeline() {
    assert_eq!(fugal(&["compose", "id", "xor", "--run", "101"]).stdout, b"110\n");
}

#[test]
fn printed_counterexamples_replay() {
    let dir = std::env::temp_dir().join(format!("fugal-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, args, code) in CASES.iter().filter(|c| c.2 == 1) {
        let out = fugal(args);
        assert_eq!(out.status.code(), Some(*code));
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        let again = fugal(&["recheck", path.to_str().unwrap()]);
        assert_eq!(again.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&again.stdout));
        assert!(String::from_utf8_lossy(&again.stdout).starts_with("reproduced"));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn nonfugal_witness_is_the_unit_pair() {
    let out = fugal(&["fugal", "check", "nonfugal"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"witness\": \"(*,1,1)\""));
    assert_eq!(String::from_utf8_lossy(&out.stderr), "fugal: fails at (*,1,1)\n");
}

#[test]
fn a_tampered_counterexample_is_not_reproduced() {
    let out = fugal(&["fugal", "check", "nonfugal"]);
    let text = String::from_utf8(out.stdout).unwrap().replace("(*,1,1)", "(*,g,g)");
    let path = std::env::temp_dir().join(format!("fugal-tampered-{}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let again = fugal(&["recheck", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(1));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn bad_input_exits_with_two() {
    let dir = std::env::temp_dir().join(format!("fugal-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let out = fugal(&["show", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error at 1:1"));
    assert!(out.stdout.is_empty());

    for args in [
        &["no-such-command"][..],
        &["run", "xor"],
        &["run", "no-such-document", "1"],
        &["run", "xor", "102"],
        &["run", "coin", "flip"],
        &["fugal", "check", "step"],
        &["compose", "xor", "blink"],
    ] {
        let out = fugal(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn files_may_import_corpus_entries() {
    let dir = std::env::temp_dir().join(format!("fugal-import-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    std::fs::write(
        &path,
        r#"{"kind":"monoid-machine","imports":["i2.json"],"states":["*"],"input":"i2","output":"i2",
            "rows":[["*","1","*","1"],["*","a","*","1"]]}"#,
    )
    .unwrap();
    let out = fugal(&["fugal", "check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::remove_dir_all(&dir).unwrap();
}
