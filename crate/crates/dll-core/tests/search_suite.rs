//! Search agrees with the kernel and with finite models.

use std::fs;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dll_core::kernel::{check, is_cut_free, parse_proof};
use dll_core::search::{backward_search, SearchConfig, SearchOutcome};
use dll_core::semantics::{countermodel, default_pool, heterogenize, sequent_valid};
use dll_core::syntax::random::random_sequent;
use dll_core::syntax::{Formula, Sequent};
use dll_core::translate::{axiom_sequent, AxiomName};

fn params(n: AxiomName, pool: &[Formula]) -> Vec<Vec<Formula>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n.arity() {
        out = out
            .into_iter()
            .flat_map(|ps| {
                pool.iter().map(move |f| {
                    let mut ps = ps.clone();
                    ps.push(f.clone());
                    ps
                })
            })
            .collect();
    }
    out
}

fn assert_coherent(goal: &Sequent, cfg: &SearchConfig, pool: &[dll_core::semantics::FiniteLattice]) -> bool {
    match backward_search(goal, cfg) {
        SearchOutcome::Proved(d, _) => {
            assert_eq!(&d.conclusion, goal);
            let r = check(&d, false);
            assert!(r.is_ok(), "{goal}: {r:?}");
            assert!(is_cut_free(&d), "{goal}");
            if let Some((l, v)) = countermodel(goal, pool) {
                panic!("{goal} proved but fails on {} under {v:?}", l.name);
            }
            true
        }
        _ => false,
    }
}

#[test]
fn random_goals_are_never_proved_and_falsified() {
    let pool = default_pool(Some(4));
    let cfg = SearchConfig {
        max_nodes: 2_000,
        ..SearchConfig::with_depth(10)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut proved = 0;
    for _ in 0..200 {
        let goal = random_sequent(&mut rng, 3, &["p", "q"]);
        if assert_coherent(&goal, &cfg, &pool) {
            proved += 1;
        }
    }
    assert!(proved > 10, "only {proved} random goals proved");
}

#[test]
fn every_axiom_but_distributivity_is_derivable() {
    let pool = default_pool(Some(4));
    let cfg = SearchConfig::with_depth(40);
    let atoms = Formula::enumerate(&["p", "q", "r"], 1);
    let mut goals = 0;
    for n in AxiomName::ALL {
        if n == AxiomName::CD1 {
            continue;
        }
        for ps in params(n, &atoms) {
            let goal = axiom_sequent(n, &ps).unwrap();
            assert!(assert_coherent(&goal, &cfg, &pool), "{} {ps:?} not proved", n.name());
            goals += 1;
        }
    }
    assert!(goals > 100, "{goals}");
}

#[test]
fn kernel_checked_end_sequents_hold_in_every_model() {
    let algebras: Vec<_> = default_pool(Some(5)).iter().map(heterogenize).collect();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut ends: Vec<Sequent> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let d = parse_proof(&fs::read_to_string(e.unwrap().path()).unwrap()).unwrap();
            assert!(check(&d, false).is_ok());
            d.conclusion
        })
        .collect();
    let cfg = SearchConfig {
        max_nodes: 2_000,
        ..SearchConfig::with_depth(10)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    while ends.len() < 120 {
        let goal = random_sequent(&mut rng, 3, &["p", "q", "r"]);
        if let SearchOutcome::Proved(d, _) = backward_search(&goal, &cfg) {
            ends.push(d.conclusion);
        }
    }
    for s in &ends {
        for h in &algebras {
            assert!(sequent_valid(s, h), "{s} fails on a model");
        }
    }
}
