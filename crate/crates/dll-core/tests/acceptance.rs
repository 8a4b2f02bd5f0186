//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any criterion fails.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dll_core::calculus::builtin_rules;
use dll_core::cutelim::{eliminate_cuts, subformula_violation, DEFAULT_BUDGET};
use dll_core::kernel::{apply, check, is_cut_free, parse_proof, step, weaken, Derivation, Direction};
use dll_core::search::{backward_search, deadlock_report, SearchConfig, SearchOutcome};
use dll_core::semantics::{
    consequence_equiv_check, countermodel, default_pool, formula_valid, heterogenize, rule_sound,
    rule_sound_exhaustive, FiniteLattice,
};
use dll_core::syntax::{parse_formula, parse_sequent, parse_term, Formula, Sort, Structure, Term};
use dll_core::translate::{axiom_sequent, identity_derivation, identity_term, translate_sequent, AxiomName};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn golden() -> Vec<(String, Derivation)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let d = parse_proof(&fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, d)
        })
        .collect()
}

fn golden_corpus() -> Verdict {
    let mut expected: Vec<String> = [
        "identity_top",
        "identity_bot",
        "identity_atom",
        "identity_and",
        "cC1",
        "cA1",
        "cA2",
    ]
    .map(String::from)
    .to_vec();
    for law in ["cI1", "cI2", "cAb1", "cAb2"] {
        for case in ["top", "bot", "atom", "and", "or"] {
            expected.push(format!("{law}_{case}"));
        }
    }
    let corpus = golden();
    let missing: Vec<&String> = expected
        .iter()
        .filter(|n| !corpus.iter().any(|(m, _)| m == *n))
        .collect();
    let failed: Vec<&str> = corpus
        .iter()
        .filter(|(_, d)| !check(d, false).is_ok() || !d.hypotheses().is_empty())
        .map(|(n, _)| n.as_str())
        .collect();
    verdict(
        missing.is_empty() && failed.is_empty(),
        format!("{} trees, missing {missing:?}, failing {failed:?}", corpus.len()),
    )
}

fn identity_theorem() -> Verdict {
    let t = Instant::now();
    let formulas = Formula::enumerate(&["p", "q", "r"], 6);
    let bad: Vec<String> = formulas
        .iter()
        .filter(|a| {
            let d = identity_derivation(a);
            !(check(&d, false).is_ok() && is_cut_free(&d) && d.conclusion == translate_sequent(a, a))
        })
        .map(|a| a.to_string())
        .collect();
    let el = t.elapsed();
    verdict(
        bad.is_empty() && el < Duration::from_secs(60),
        format!(
            "{} formulas, {} failures {:?}, {el:.1?}",
            formulas.len(),
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn rule_soundness() -> Verdict {
    let lattices = [
        FiniteLattice::chain(2),
        FiniteLattice::chain(3),
        FiniteLattice::m3(),
        FiniteLattice::n5(),
    ];
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for r in builtin_rules() {
        for l in &lattices {
            if let Err(e) = rule_sound_exhaustive(r, l) {
                failures.push(format!("{}: {}", r.name, e.detail));
            }
            if let Err(e) = rule_sound(r, &heterogenize(l), 50, &mut rng) {
                failures.push(format!("{} (instance): {}", r.name, e.detail));
            }
        }
    }
    let invertible = builtin_rules().iter().filter(|r| r.invertible).count();
    verdict(
        failures.is_empty(),
        format!(
            "{} rules ({invertible} invertible, converse checked) x {} lattices, failures {:?}",
            builtin_rules().len(),
            lattices.len(),
            failures
        ),
    )
}

fn distributivity() -> Verdict {
    let t = Instant::now();
    let ps = ["p", "q", "r"].map(|a| parse_formula(a).unwrap());
    let goal = axiom_sequent(AxiomName::CD1, &ps).unwrap();
    let cfg = SearchConfig {
        max_nodes: 1_000_000,
        ..SearchConfig::with_depth(20)
    };
    let outcome = backward_search(&goal, &cfg);
    let exhausted = matches!(outcome, SearchOutcome::Exhausted(..));
    let report = deadlock_report(&goal, &cfg);
    let shapes =
        ["q", "r"].map(|x| parse_sequent(&format!("o p |- wdia fbox wdia p capop wdia fbox wdia {x}")).unwrap());
    let has_shapes = shapes.iter().all(|s| report.iter().any(|d| &d.sequent == s));
    let cm = countermodel(&goal, &default_pool(Some(5)));
    let m3 = cm.as_ref().is_some_and(|(l, _)| l.name == "m3");
    let el = t.elapsed();
    verdict(
        exhausted && has_shapes && m3 && el < Duration::from_secs(120),
        format!(
            "search {} ({} nodes), {} dead ends, case shapes {}, countermodel {}, {el:.1?}",
            if exhausted { "exhausted" } else { "NOT exhausted" },
            outcome.stats().nodes,
            report.len(),
            if has_shapes { "present" } else { "MISSING" },
            cm.map_or("none".to_string(), |(l, _)| l.name)
        ),
    )
}

fn consequence_equivalence() -> Verdict {
    let t = Instant::now();
    let pool = default_pool(Some(5));
    let formulas = Formula::enumerate(&["p", "q", "r"], 3);
    let mut pairs = 0;
    let mut bad = Vec::new();
    for a in &formulas {
        for b in &formulas {
            pairs += 1;
            if !consequence_equiv_check(a, b, &pool) {
                bad.push(format!("{a} |- {b}"));
            }
        }
    }
    let el = t.elapsed();
    verdict(
        bad.is_empty() && el < Duration::from_secs(180),
        format!(
            "{pairs} pairs over {} lattices, {} disagreements {:?}, {el:.1?}",
            pool.len(),
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn cut(l: Derivation, r: Derivation) -> Derivation {
    let t = l.conclusion.right.as_term().expect("cut formula").clone();
    let rule = if t.sort() == Sort::L { "Cut_L" } else { "Cut_P" };
    apply(rule, Direction::Forward, vec![l, r], &[]).expect("well-formed cut")
}

fn id(s: &str) -> Derivation {
    identity_term(&parse_term(s).unwrap())
}

fn leaf(s: &str) -> Structure {
    Structure::Leaf(parse_term(s).unwrap())
}

/// The reduction figures instantiated with small closed premises.
fn figures() -> Vec<(String, Derivation)> {
    let cap_left = {
        let pi3 = weaken("W_left", id("wbox p").premises[0].clone(), leaf("wbox q")).unwrap();
        let l = apply("Cap_right", Direction::Forward, vec![id("wbox p"), id("wbox q")], &[]).unwrap();
        cut(l, step("Cap_left", pi3).unwrap())
    };
    let cup_pop = {
        let w = weaken("W_right", id("wdia p"), leaf("wdia q")).unwrap();
        let l = step("Cup_right", w).unwrap();
        let r = apply("Cup_left", Direction::Forward, vec![id("wdia p"), id("wdia q")], &[]).unwrap();
        cut(l, r)
    };
    let self_cut = {
        let a = parse_formula("p /\\ q").unwrap();
        let d = identity_derivation(&a);
        let left = d.conclusion.left.as_term().unwrap().clone();
        cut(identity_term(&left), d)
    };
    vec![
        ("atomic".into(), cut(id("p"), id("p"))),
        ("top".into(), cut(id("T").premises[0].clone(), id("T"))),
        ("bot".into(), cut(id("F"), id("F").premises[0].clone())),
        ("cap".into(), cap_left),
        ("cup".into(), cup_pop),
        ("wdia".into(), cut(id("wdia p").premises[0].clone(), id("wdia p"))),
        ("wbox".into(), cut(id("wbox p"), id("wbox p").premises[0].clone())),
        (
            "fdia".into(),
            cut(id("fdia wbox p").premises[0].clone(), id("fdia wbox p")),
        ),
        (
            "fbox".into(),
            cut(id("fbox wdia p"), id("fbox wdia p").premises[0].clone()),
        ),
        ("self-cut p/\\q".into(), self_cut),
    ]
}

/// Cuts against identities below the root on either side and at the
/// deepest unary node whose succedent is a formula.
fn splices(name: &str, d: &Derivation) -> Vec<(String, Derivation)> {
    let mut out = Vec::new();
    if let Some(t) = d.conclusion.right.as_term() {
        out.push((format!("{name}/root-right"), cut(d.clone(), identity_term(t))));
    }
    if let Some(t) = d.conclusion.left.as_term() {
        out.push((format!("{name}/root-left"), cut(identity_term(t), d.clone())));
    }
    let inner = d
        .nodes()
        .into_iter()
        .filter(|(p, n)| !p.is_empty() && n.premises.len() == 1 && n.conclusion.right.as_term().is_some())
        .max_by_key(|(p, _)| p.len());
    if let Some((path, n)) = inner {
        let t: &Term = n.conclusion.right.as_term().unwrap();
        out.push((
            format!("{name}/inner"),
            d.replace_at(&path, cut(n.clone(), identity_term(t))).unwrap(),
        ));
    }
    out
}

fn cut_elimination() -> Verdict {
    let mut suite = figures();
    for (name, d) in golden() {
        suite.extend(splices(&name, &d));
    }
    let mut bad = Vec::new();
    for (name, d) in &suite {
        assert!(check(d, false).is_ok(), "{name}: suite member does not check");
        let ok = match eliminate_cuts(d, DEFAULT_BUDGET) {
            Ok(out) => {
                check(&out, false).is_ok()
                    && is_cut_free(&out)
                    && out.conclusion == d.conclusion
                    && subformula_violation(&out).is_none()
            }
            Err(_) => false,
        };
        if !ok {
            bad.push(name.clone());
        }
    }
    verdict(
        bad.is_empty() && suite.len() >= 50,
        format!("{} derivations, failures {bad:?}", suite.len()),
    )
}

fn conservativity() -> Verdict {
    let t = Instant::now();
    let pool = default_pool(Some(5));
    let formulas = Formula::enumerate(&["p", "q"], 4);
    let cfg = SearchConfig::with_depth(40);
    let (mut pairs, mut unsound, mut gaps) = (0, Vec::new(), Vec::new());
    for a in &formulas {
        for b in &formulas {
            if a.size() + b.size() > 5 {
                continue;
            }
            pairs += 1;
            let valid = pool.iter().all(|l| formula_valid(a, b, l));
            let proved = backward_search(&translate_sequent(a, b), &cfg).is_proved();
            if proved && !valid {
                unsound.push(format!("{a} |- {b}"));
            }
            if valid && !proved {
                gaps.push(format!("{a} |- {b}"));
            }
        }
    }
    verdict(
        unsound.is_empty() && gaps.is_empty(),
        format!(
            "{pairs} sequents, proved-but-invalid {unsound:?}, valid-but-unproved {gaps:?}, {:.1?}",
            t.elapsed()
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("golden corpus", golden_corpus),
        ("identity theorem", identity_theorem),
        ("rule soundness", rule_soundness),
        ("distributivity fails", distributivity),
        ("consequence equivalence", consequence_equivalence),
        ("cut elimination", cut_elimination),
        ("conservativity", conservativity),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|w| name.contains(w.as_str())) {
            continue;
        }
        let v = f();
        all &= v.pass;
        println!(
            "criterion {} {name}: {} ({})",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
