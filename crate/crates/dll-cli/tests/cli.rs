//! End-to-end runs of the `dll` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use dll_core::syntax::parse_term;

fn dll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dll")).args(args).output().unwrap()
}

fn dll_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dll"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn derived_axioms_pipe_into_check() {
    for args in [
        &["axiom", "cC1", "p", "q", "--derive"][..],
        &["axiom", "dAb2", "p", "q /\\ r", "--derive"],
    ] {
        let proof = dll(args);
        assert_eq!(code(&proof), 0);
        let checked = dll_stdin(&["check", "-", "--cut-free"], &stdout(&proof));
        assert_eq!(code(&checked), 0, "{}", String::from_utf8_lossy(&checked.stderr));
        assert!(stdout(&checked).starts_with("OK "));
    }
}

#[test]
fn distributivity_is_exhausted_with_a_countermodel() {
    let goal = stdout(&dll(&["axiom", "cD1", "p", "q", "r"]));
    let out = dll(&["prove", goal.trim(), "--depth", "20"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.starts_with("EXHAUSTED"), "{text}");
    assert!(text.contains("DEADEND "));
    assert!(text.contains("COUNTERMODEL on m3"));
}

#[test]
fn report_confirms_every_part() {
    let out = dll(&["report", "--limit", "5"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("search EXHAUSTED"));
}

#[test]
fn translation_of_a_conjunction() {
    let out = dll(&["translate", "p /\\ q", "--pre"]);
    assert_eq!(code(&out), 0);
    let expected = parse_term("fdia (wbox (fdia (wbox p)) cap wbox (fdia (wbox q)))").unwrap();
    assert_eq!(parse_term(stdout(&out).trim()).unwrap(), expected);
    let suc = dll(&["translate", "p", "--suc"]);
    assert_eq!(stdout(&suc).trim(), "fbox wdia p");
}

#[test]
fn proved_goals_print_checkable_proofs() {
    let out = dll(&["prove", "wbox p cap wbox q |- wbox q cap wbox p"]);
    assert_eq!(code(&out), 0);
    let checked = dll_stdin(&["check", "-"], &stdout(&out));
    assert_eq!(code(&checked), 0);
}

#[test]
fn semantics_exit_codes_and_pool_size() {
    assert_eq!(code(&dll(&["semantics", "p |- q"])), 1);
    assert_eq!(code(&dll(&["semantics", "fdia wbox p |- fbox wdia p"])), 0);
    let cd1 = stdout(&dll(&["axiom", "cD1", "p", "q", "r"]));
    let small = Command::new(env!("CARGO_BIN_EXE_dll"))
        .args(["semantics", cd1.trim()])
        .env("DLL_POOL_MAX", "4")
        .output()
        .unwrap();
    assert_eq!(code(&small), 0, "distributive lattices only below five elements");
    let m3 = dll(&["semantics", cd1.trim(), "--lattice", "m3"]);
    assert_eq!(code(&m3), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&dll(&["nonsense"])), 2);
    assert_eq!(code(&dll(&["translate", "p /\\"])), 2);
    assert_eq!(code(&dll(&["axiom", "cZ9", "p"])), 2);
    assert_eq!(code(&dll(&["check", "/nonexistent/file.proof"])), 2);
    let bad = dll_stdin(&["check", "-"], "(Id \"p |- q\")");
    assert_eq!(code(&bad), 1);
}

#[test]
fn corpus_passes() {
    let out = dll(&["corpus"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn render_and_reconstruct() {
    let id = dll_stdin(&["render", "-"], "(Id \"p |- p\")");
    assert_eq!(stdout(&id), "Id: p |- p\n");
    let tex = dll_stdin(&["render", "-", "--format", "latex"], "(Top_right \"I |- T\")");
    assert!(stdout(&tex).contains("\\AxiomC{}"));
    let skel = "(? \"wbox p |- wbox p\" (? \"p |- p\"))";
    let rebuilt = dll_stdin(&["reconstruct", "-"], skel);
    assert_eq!(code(&rebuilt), 0);
    assert_eq!(code(&dll_stdin(&["check", "-"], &stdout(&rebuilt))), 0);
}

#[test]
fn cutelim_removes_a_spliced_cut() {
    let proof = "(Cut_L \"fdia wbox p |- fdia wbox p\"
  (BDia_left \"fdia wbox p |- fdia wbox p\" (BDia_right \"* wbox p |- fdia wbox p\" (WBox_left \"wbox p |- wbox p\" (WBox_right \"wbox p |- o p\" (Id \"p |- p\")))))
  (BDia_left \"fdia wbox p |- fdia wbox p\" (BDia_right \"* wbox p |- fdia wbox p\" (WBox_left \"wbox p |- wbox p\" (WBox_right \"wbox p |- o p\" (Id \"p |- p\"))))))";
    assert_eq!(code(&dll_stdin(&["check", "-"], proof)), 0);
    let out = dll_stdin(&["cutelim", "-"], proof);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&dll_stdin(&["check", "-", "--cut-free"], &stdout(&out))), 0);
}
