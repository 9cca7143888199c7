use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flipcenter"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_solve_validate() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let sol = dir.path().join("sol.json");
    assert_eq!(code(&run(&["gen", "--n", "7", "--m", "3", "--seed", "4", "-o", s(&inst)])), 0);
    let out = run(&["solve", s(&inst), "-o", s(&sol)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&run(&["validate", s(&inst), s(&sol)])), 0);

    // same answer through the external-solver path, in both file formats
    let me = env!("CARGO_BIN_EXE_flipcenter");
    let reference = std::fs::read(&sol).unwrap();
    for extra in [&[][..], &["--solver-xor"][..]] {
        let via = dir.path().join("via.json");
        let cmd = format!("{me} sat {{}}");
        let mut args = vec!["solve", s(&inst), "--solver-cmd", &cmd, "-o", s(&via)];
        args.extend_from_slice(extra);
        let out = bin().args(&args).env("FLIPCENTER_CACHE_DIR", dir.path()).output().unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(code(&run(&["validate", s(&inst), s(&via)])), 0);
        assert_eq!(objective(&std::fs::read(&via).unwrap()), objective(&reference));
    }

    // tampered objective is rejected
    let text = String::from_utf8(reference).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, text.replace("\"objective\":", "\"objective\":1")).unwrap();
    assert_ne!(code(&run(&["validate", s(&inst), s(&bad)])), 0);
}

fn objective(bytes: &[u8]) -> u64 {
    let text = std::str::from_utf8(bytes).unwrap();
    let at = text.find("\"objective\":").unwrap() + "\"objective\":".len();
    text[at..].trim_start().chars().take_while(char::is_ascii_digit).collect::<String>().parse().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    assert_eq!(code(&run(&["gen", "--n", "6", "--m", "3", "--seed", "1", "-o", s(&inst)])), 0);

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&run(&["solve", s(&junk)])), 1);
    assert_eq!(code(&run(&["solve", s(&dir.path().join("missing.json"))])), 1);
    assert_eq!(code(&run(&["solve", s(&inst), "--strategy", "bogus"])), 1);

    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "strategy = exact\nnot a setting\n").unwrap();
    assert_eq!(code(&run(&["solve", s(&inst), "--config", s(&cfg)])), 1);

    let out = run(&["encode", s(&inst), "--distances", "0,0,0"]);
    assert_eq!(code(&out), 2);
    let out = run(&["encode", s(&inst), "--distances", "3,3,3"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("p cnf "));

    // a solver that cannot be started leaves the answer undecided
    let out = run(&["solve", s(&inst), "--solver-cmd", "/nonexistent/solver"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn config_file_drives_the_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    assert_eq!(code(&run(&["gen", "--n", "8", "--m", "3", "--seed", "2", "-o", s(&inst)])), 0);
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# quick run\nstrategy = heuristic\nlimit = 8\n").unwrap();
    let sol = dir.path().join("sol.json");
    assert_eq!(code(&run(&["solve", s(&inst), "--config", s(&cfg), "-o", s(&sol)])), 0);
    assert_eq!(code(&run(&["validate", s(&inst), s(&sol)])), 0);

    let svg = dir.path().join("pages");
    assert_eq!(code(&run(&["render", s(&inst), "--solution", s(&sol), "--pages", s(&svg)])), 0);
    assert!(std::fs::read_dir(&svg).unwrap().count() >= 1);
}
