//! Property tests over randomly generated syntax, displays and translations.

use std::collections::HashSet;

use proptest::prelude::*;

use dll_core::calculus::{builtin_rules, instantiate, lookup, match_rule};
use dll_core::kernel::{check, display_at, invert_chain, Direction};
use dll_core::syntax::{
    parse_sequent, parse_term, polarity_at, structure_at, structure_paths, Formula, Path, Polarity, Sequent, Side,
    Sort, Structure, Term,
};
use dll_core::translate::{ell, rr, tau_pre, tau_suc};
use dll_core::ParseError;

const SORTS: [Sort; 3] = [Sort::L, Sort::P, Sort::Pop];

fn idx(s: Sort) -> usize {
    match s {
        Sort::L => 0,
        Sort::P => 1,
        Sort::Pop => 2,
    }
}

/// Well-sorted terms of each sort with at most `depth` nested constructors.
/// `P` and `Pop` terms need at least one constructor.
fn terms(depth: usize) -> [BoxedStrategy<Term>; 3] {
    let atoms = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Term::atom),
        1 => Just(Term::Top),
        1 => Just(Term::Bot),
    ]
    .boxed();
    let mut level: [Option<BoxedStrategy<Term>>; 3] = [Some(atoms.clone()), None, None];
    for _ in 0..depth {
        let l = level[0].clone().expect("L terms at every level");
        let (p, pop) = (level[1].clone(), level[2].clone());
        let mut next_l = vec![(3, atoms.clone())];
        if let Some(p) = &p {
            next_l.push((1, p.clone().prop_map(Term::bdia).boxed()));
        }
        if let Some(pop) = &pop {
            next_l.push((1, pop.clone().prop_map(Term::bbox).boxed()));
        }
        let binary = |s: Sort, inner: &Option<BoxedStrategy<Term>>, lift: BoxedStrategy<Term>| {
            let mut opts = vec![(2, lift)];
            if let Some(x) = inner {
                opts.push((
                    1,
                    (x.clone(), x.clone())
                        .prop_map(move |(a, b)| Term::cap(s, a, b))
                        .boxed(),
                ));
                opts.push((
                    1,
                    (x.clone(), x.clone())
                        .prop_map(move |(a, b)| Term::cup(s, a, b))
                        .boxed(),
                ));
            }
            prop::strategy::Union::new_weighted(opts).boxed()
        };
        let next_p = binary(Sort::P, &p, l.clone().prop_map(Term::wbox).boxed());
        let next_pop = binary(Sort::Pop, &pop, l.prop_map(Term::wdia).boxed());
        level = [
            Some(prop::strategy::Union::new_weighted(next_l).boxed()),
            Some(next_p),
            Some(next_pop),
        ];
    }
    level.map(|s| s.expect("depth >= 1"))
}

/// Well-sorted, well-positioned structures of `sort` at polarity `pol`.
fn structure(sort: Sort, pol: Polarity, depth: usize) -> BoxedStrategy<Structure> {
    let t = terms(2)[idx(sort)].clone().prop_map(Structure::Leaf);
    let mut opts: Vec<(u32, BoxedStrategy<Structure>)> = vec![(3, t.boxed())];
    if sort == Sort::L {
        opts.push((1, Just(Structure::I).boxed()));
    } else {
        opts.push((1, Just(Structure::SCirc(sort)).boxed()));
    }
    if depth > 0 {
        let d = depth - 1;
        match sort {
            Sort::L => {
                let under = if pol == Polarity::Precedent { Sort::P } else { Sort::Pop };
                opts.push((2, structure(under, pol, d).prop_map(Structure::bullet).boxed()));
            }
            _ => {
                let circ_pol = if sort == Sort::P {
                    Polarity::Succedent
                } else {
                    Polarity::Precedent
                };
                if pol == circ_pol {
                    opts.push((
                        2,
                        structure(Sort::L, pol, d)
                            .prop_map(move |s| Structure::circ(sort, s))
                            .boxed(),
                    ));
                }
                opts.push((
                    2,
                    (structure(sort, pol, d), structure(sort, pol, d))
                        .prop_map(move |(a, b)| Structure::dot(sort, a, b))
                        .boxed(),
                ));
                opts.push((
                    2,
                    (structure(sort, pol.flip(), d), structure(sort, pol, d))
                        .prop_map(move |(a, b)| Structure::sup(sort, a, b))
                        .boxed(),
                ));
            }
        }
    }
    prop::strategy::Union::new_weighted(opts).boxed()
}

fn sequent(depth: usize) -> impl Strategy<Value = Sequent> {
    prop::sample::select(SORTS.to_vec()).prop_flat_map(move |s| {
        (
            structure(s, Polarity::Precedent, depth),
            structure(s, Polarity::Succedent, depth),
        )
            .prop_map(|(l, r)| Sequent::new(l, r))
    })
}

fn any_term(depth: usize) -> impl Strategy<Value = Term> {
    let [l, p, pop] = terms(depth);
    prop_oneof![l, p, pop]
}

/// A term of sort `s` wrapped in a constructor that expects another sort.
fn ill_sorted() -> impl Strategy<Value = String> {
    (any_term(4), 0usize..4).prop_map(|(t, k)| {
        let s = t.sort();
        let wrong_unary = match s {
            Sort::L => ["fdia", "fbox"],
            Sort::P => ["wbox", "fbox"],
            Sort::Pop => ["wdia", "fdia"],
        };
        let other = match s {
            Sort::L | Sort::Pop => "wbox p",
            Sort::P => "wdia p",
        };
        match k {
            0 | 1 => format!("{} ({t})", wrong_unary[k]),
            2 => format!("({t}) cap {other}"),
            _ if s == Sort::L => format!("({t}) cup ({t})"),
            _ => format!("{other} cup ({t})"),
        }
    })
}

fn swap(s: &Sequent) -> Sequent {
    Sequent::new(s.right.clone(), s.left.clone())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn terms_round_trip(t in any_term(8)) {
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t.clone());
        prop_assert_eq!(t.check_sort().unwrap(), t.sort());
    }

    #[test]
    fn sequents_round_trip(s in sequent(4)) {
        prop_assert_eq!(parse_sequent(&s.to_string()).unwrap(), s.clone());
        prop_assert_eq!(s.check_sort().unwrap(), s.sort());
    }

    #[test]
    fn ill_sorted_input_is_a_sort_error(text in ill_sorted()) {
        let r = parse_term(&text);
        prop_assert!(matches!(r, Err(ParseError::Sort(_))), "{} gave {:?}", text, r);
    }

    #[test]
    fn polarity_flips_across_the_turnstile(s in sequent(4), pick in any::<prop::sample::Index>()) {
        let paths = structure_paths(&s);
        let p = &paths[pick.index(paths.len())];
        let mirrored = Path {
            side: match p.side { Side::Left => Side::Right, Side::Right => Side::Left },
            steps: p.steps.clone(),
        };
        prop_assert_eq!(polarity_at(&swap(&s), &mirrored).unwrap(), polarity_at(&s, p).unwrap().flip());
    }

    #[test]
    fn every_substructure_can_be_displayed(s in sequent(6)) {
        prop_assume!(s.is_well_positioned());
        for p in structure_paths(&s) {
            let target = structure_at(&s, &p).unwrap().clone();
            let d = display_at(&s, &p).unwrap_or_else(|e| panic!("{s} at {p}: {e}"));
            prop_assert!(check(&d, true).is_ok());
            prop_assert_eq!(d.hypotheses(), vec![&s]);
            let shown = &d.conclusion;
            prop_assert!(shown.left == target || shown.right == target, "{} at {}: shows {}", s, p, shown);
            let back = invert_chain(&d).unwrap();
            prop_assert!(check(&back, true).is_ok());
            prop_assert_eq!(&back.conclusion, &s);
        }
    }
}

#[test]
fn translations_agree_and_are_injective() {
    for a in Formula::enumerate(&["p", "q", "r"], 5) {
        assert_eq!(ell(&a), tau_pre(&a), "{a}");
        assert_eq!(rr(&a), tau_suc(&a), "{a}");
    }
    let small = Formula::enumerate(&["p", "q", "r"], 4);
    let pre: HashSet<Term> = small.iter().map(tau_pre).collect();
    let suc: HashSet<Term> = small.iter().map(tau_suc).collect();
    assert_eq!(pre.len(), small.len());
    assert_eq!(suc.len(), small.len());
}

/// Every node of the golden corpus: the match of its conclusion instantiates
/// back to it, and is unique.
#[test]
fn match_instantiate_adjunction_on_the_corpus() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut nodes = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(e.unwrap().path()).unwrap();
        let d = dll_core::kernel::parse_proof(&text).unwrap();
        for (_, n) in d.nodes() {
            let r = lookup(n.rule).unwrap();
            if n.direction == Direction::Backward || !r.premise_only.is_empty() {
                continue;
            }
            let subs = match_rule(r, &n.conclusion);
            assert_eq!(subs.len(), 1, "{} at {}", n.rule, n.conclusion);
            let (prem, concl) = instantiate(r, &subs[0]).unwrap();
            assert_eq!(concl, n.conclusion);
            let found: Vec<&Sequent> = n.premises.iter().map(|p| &p.conclusion).collect();
            assert_eq!(prem.iter().collect::<Vec<_>>(), found, "{}", n.rule);
            nodes += 1;
        }
    }
    assert!(nodes > 500);
    assert_eq!(builtin_rules().len(), 35);
}
