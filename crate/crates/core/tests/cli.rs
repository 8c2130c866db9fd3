use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn chromalg(cache: &std::path::Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chromalg")).env("CHROMALG_CACHE", cache).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let o = chromalg(dir.path(), &["zeta", "denom", "--k", "4"]);
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("120\n", Some(0)));

    let o = chromalg(dir.path(), &["landweber", "classify", "--algebra", &data("e1_p3.json")]);
    assert_eq!(stdout(&o).trim(), r#"{"n":0,"N":1,"label":"Z^0 ∩ U^2"}"#);

    let o = chromalg(dir.path(), &["hopf", "check", "--input", &data("corrupted.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(chromalg(dir.path(), &["hopf", "check", "--input", &data("bp_p3.json")]).status.code(), Some(0));
}

#[test]
fn exit_codes_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["frobnicate"][..], &["zeta", "denom"], &["zeta", "denom", "--k", "x"]] {
        let o = chromalg(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(err["error"]["kind"], "usage");
    }
    let o = chromalg(dir.path(), &["landweber", "classify", "--algebra", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = chromalg(dir.path(), &["landweber", "classify", "--builtin", "bp-mod-i1"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "not_landweber_exact");
    assert_eq!(chromalg(dir.path(), &["landweber", "check", "--builtin", "bp1"]).status.code(), Some(1));
    assert_eq!(chromalg(dir.path(), &["hopf", "invariant", "--max-degree", "8", "--ideal", "v1"]).status.code(), Some(1));
    assert_eq!(chromalg(dir.path(), &["hopf", "invariant", "--max-degree", "8", "--ideal", "3,v1"]).status.code(), Some(0));
    assert_eq!(chromalg(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn json_output_is_graded_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["zeta", "denom", "--k", "12", "--json"][..],
        &["landweber", "height", "--builtin", "e2", "--json"],
        &["fgl", "height", "--law", "honda", "--n", "2", "--json"],
        &["comod", "ext", "--t-max", "8", "--json"],
        &["compare", "--left", "k-model", "--right", &data("e1_p3.json"), "--json"],
    ] {
        let o = chromalg(dir.path(), args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["grading"], "algebraic", "{args:?}");
        let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
}

#[test]
fn cache_hits_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["comod", "ext", "--t-max", "12", "--json"];
    let first = chromalg(dir.path(), &args);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = chromalg(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    let fresh = chromalg(dir.path(), &["comod", "ext", "--t-max", "12", "--json", "--no-cache"]);
    assert_eq!(first.stdout, fresh.stdout);
}

#[test]
fn charts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ext.svg");
    let args = ["comod", "ext", "--t-max", "12", "--chart", path.to_str().unwrap()];
    assert_eq!(chromalg(dir.path(), &args).status.code(), Some(0));
    let a = std::fs::read_to_string(&path).unwrap();
    chromalg(dir.path(), &args);
    assert_eq!(a, std::fs::read_to_string(&path).unwrap());
    assert!(a.starts_with("<svg") && a.contains(">9</text>"));
    let svg = chromalg(dir.path(), &["comod", "ext", "--t-max", "12", "--svg"]);
    assert_eq!(stdout(&svg), a);
}

#[test]
fn generator_choice_does_not_change_ext() {
    let dir = tempfile::tempdir().unwrap();
    let run = |g: &str| chromalg(dir.path(), &["comod", "ext", "--t-max", "12", "--generators", g, "--json"]).stdout;
    assert_eq!(run("hazewinkel"), run("araki"));
    for g in ["hazewinkel", "araki"] {
        let o = chromalg(dir.path(), &["hopf", "invariant", "--generators", g, "--ideal", "3,v1,v2"]);
        assert_eq!(o.status.code(), Some(0), "{g}");
    }
}
