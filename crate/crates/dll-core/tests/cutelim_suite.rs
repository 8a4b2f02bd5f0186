//! Cut elimination over golden derivations with cuts spliced in.

use std::fs;
use std::path::PathBuf;

use dll_core::cutelim::{cut_sites, eliminate_cuts, subformula_violation, DEFAULT_BUDGET};
use dll_core::kernel::{apply, check, is_cut_free, parse_proof, Derivation, Direction};
use dll_core::syntax::Sort;
use dll_core::translate::identity_term;

fn golden() -> Vec<(String, Derivation)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut names: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    names
        .into_iter()
        .map(|p| {
            let d = parse_proof(&fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), d)
        })
        .collect()
}

fn cut(l: Derivation, r: Derivation) -> Derivation {
    let t = l.conclusion.right.as_term().unwrap();
    let rule = if t.sort() == Sort::L { "Cut_L" } else { "Cut_P" };
    apply(rule, Direction::Forward, vec![l, r], &[]).unwrap()
}

/// Cuts against identities: below the root on the right, on the left, and
/// at the deepest inner node whose succedent is a formula.
fn spliced(d: &Derivation) -> Vec<Derivation> {
    let mut out = Vec::new();
    if let Some(t) = d.conclusion.right.as_term() {
        out.push(cut(d.clone(), identity_term(t)));
    }
    if let Some(t) = d.conclusion.left.as_term() {
        out.push(cut(identity_term(t), d.clone()));
    }
    let inner = d
        .nodes()
        .into_iter()
        .filter(|(p, n)| !p.is_empty() && n.premises.len() == 1 && n.conclusion.right.as_term().is_some())
        .max_by_key(|(p, _)| p.len());
    if let Some((path, n)) = inner {
        let t = n.conclusion.right.as_term().unwrap();
        out.push(d.replace_at(&path, cut(n.clone(), identity_term(t))).unwrap());
    }
    out
}

#[test]
fn spliced_golden_proofs_eliminate() {
    let mut count = 0;
    for (name, d) in golden() {
        for s in spliced(&d) {
            assert!(check(&s, false).is_ok(), "{name}: splice is invalid");
            assert!(!cut_sites(&s).is_empty());
            let out = eliminate_cuts(&s, DEFAULT_BUDGET).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(check(&out, false).is_ok(), "{name}: output is invalid");
            assert!(is_cut_free(&out), "{name}");
            assert_eq!(out.conclusion, s.conclusion, "{name}");
            assert_eq!(subformula_violation(&out), None, "{name}");
            count += 1;
        }
    }
    assert!(count >= 50, "{count}");
}

#[test]
fn cuts_between_searched_proofs_eliminate() {
    use dll_core::search::{backward_search, SearchConfig, SearchOutcome};
    use dll_core::syntax::parse_sequent;
    let prove = |s: &str| match backward_search(&parse_sequent(s).unwrap(), &SearchConfig::default()) {
        SearchOutcome::Proved(d, _) => d,
        other => panic!("{s}: {other:?}"),
    };
    for (a, b, c) in [
        ("wbox p cap wbox q", "wbox q cap wbox p", "wbox p cap wbox q"),
        ("wdia p cupop wdia q", "wdia q cupop wdia p", "wdia p cupop wdia q"),
        ("fdia (wbox p cap wbox q)", "fdia (wbox q cap wbox p)", "fdia wbox p"),
        ("p", "fbox wdia p", "fbox wdia p"),
    ] {
        let d1 = prove(&format!("{a} |- {b}"));
        let d2 = prove(&format!("{b} |- {c}"));
        let d = cut(d1, d2);
        assert!(check(&d, false).is_ok());
        let out = eliminate_cuts(&d, DEFAULT_BUDGET).unwrap();
        assert!(check(&out, false).is_ok() && is_cut_free(&out));
        assert_eq!(out.conclusion, d.conclusion);
        assert_eq!(subformula_violation(&out), None, "{a} |- {c}");
    }
}
