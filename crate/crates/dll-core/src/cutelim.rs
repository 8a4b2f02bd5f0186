//! Principal cut reductions and a cut-elimination driver.
//!
//! The driver works on the topmost-leftmost cut. Its premises are cut-free,
//! so the cut formula can be traced upward through each premise: every rule
//! schema names its parametric parts by structure variables, and an
//! occurrence inside a variable is followed to the same variable in the
//! premises. Traced occurrences are replaced by the other side of the cut;
//! where the formula is introduced, a principal cut is left behind and
//! reduced at once. Weakened occurrences simply disappear.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::calculus::{self, SPat, SeqPat};
use crate::kernel::{apply, step, step_back, ApplyError, Derivation, Direction};
use crate::syntax::{replace_structure, Path, Side, Sort, Structure, Term};

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutKind {
    Principal,
    LeftParametric,
    RightParametric,
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutKind::Principal => "principal",
            CutKind::LeftParametric => "left-parametric",
            CutKind::RightParametric => "right-parametric",
        })
    }
}

/// A cut node addressed by its tree path (premise indices from the root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSite {
    pub path: Vec<usize>,
    pub kind: CutKind,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CutError {
    #[error("no derivation node at {0:?}")]
    Path(Vec<usize>),
    #[error("the node at {0:?} is not a cut")]
    NotACut(Vec<usize>),
    #[error("the cut at {0:?} is not principal")]
    NotPrincipal(Vec<usize>),
    #[error("no reduction for a cut between {0} and {1}")]
    NoReduction(String, String),
    #[error("budget of {budget} steps exceeded")]
    BudgetExceeded { budget: usize, partial: Box<Derivation> },
    #[error("ill-formed rewrite: {0}")]
    Apply(#[from] ApplyError),
}

pub fn is_cut(d: &Derivation) -> bool {
    calculus::lookup(d.rule).is_some_and(|r| r.group == calculus::RuleGroup::Cut)
}

/// The cut term of a cut node.
pub fn cut_term(d: &Derivation) -> Option<&Term> {
    if !is_cut(d) {
        return None;
    }
    d.premises[0].conclusion.right.as_term()
}

pub fn classify_cut(d: &Derivation, path: &[usize]) -> Result<CutSite, CutError> {
    let node = d.at(path).ok_or_else(|| CutError::Path(path.to_vec()))?;
    if !is_cut(node) {
        return Err(CutError::NotACut(path.to_vec()));
    }
    let kind = if !introduces(&node.premises[0], Side::Right) {
        CutKind::LeftParametric
    } else if !introduces(&node.premises[1], Side::Left) {
        CutKind::RightParametric
    } else {
        CutKind::Principal
    };
    Ok(CutSite {
        path: path.to_vec(),
        kind,
    })
}

/// Every cut node, in pre-order.
pub fn cut_sites(d: &Derivation) -> Vec<CutSite> {
    d.nodes()
        .into_iter()
        .filter(|(_, n)| is_cut(n))
        .map(|(p, _)| classify_cut(d, &p).expect("path from nodes()"))
        .collect()
}

/// Replaces the principal cut at `path` by its reduct.
pub fn reduce_principal(d: &Derivation, path: &[usize]) -> Result<Derivation, CutError> {
    let site = classify_cut(d, path)?;
    if site.kind != CutKind::Principal {
        return Err(CutError::NotPrincipal(path.to_vec()));
    }
    let node = d.at(path).expect("classified");
    let reduct = reduce_pair(&node.premises[0], &node.premises[1])?;
    Ok(d.replace_at(path, reduct).expect("classified"))
}

/// Cut-free derivation of the same end-sequent, or the partial result when
/// `budget` rewriting steps do not suffice.
pub fn eliminate_cuts(d: &Derivation, budget: usize) -> Result<Derivation, CutError> {
    eliminate_cuts_logged(d, budget).0
}

/// `eliminate_cuts` together with one log line per principal reduction and
/// per traced premise.
pub fn eliminate_cuts_logged(d: &Derivation, budget: usize) -> (Result<Derivation, CutError>, Vec<String>) {
    let mut e = Eliminator {
        budget,
        steps: 0,
        log: Vec::new(),
    };
    let out = match e.elim(d) {
        Ok(r) => Ok(r),
        Err(Stop::Budget(partial)) => Err(CutError::BudgetExceeded {
            budget,
            partial: Box::new(partial),
        }),
        Err(Stop::Fail(err)) => Err(err),
    };
    (out, e.log)
}

/// The first term of `d` that is not a subterm of its end-sequent.
pub fn subformula_violation(d: &Derivation) -> Option<Term> {
    let end: HashSet<&Term> = d.conclusion.subterms().into_iter().collect();
    d.nodes()
        .into_iter()
        .flat_map(|(_, n)| n.conclusion.subterms())
        .find(|t| !end.contains(t))
        .cloned()
}

// ---------------------------------------------------------------------------
// Occurrence tracing

/// Where a conclusion position falls in a rule's conclusion pattern.
enum Loc {
    /// Inside structure variable `var`, at `rest` below it.
    Var(usize, Vec<usize>),
    /// On a node the rule itself builds.
    Fixed,
}

fn roles(schema: &calculus::RuleSchema, dir: Direction) -> (Vec<&SeqPat>, &SeqPat) {
    match dir {
        Direction::Forward => (schema.premises.iter().collect(), &schema.conclusion),
        Direction::Backward => (vec![&schema.conclusion], &schema.premises[0]),
    }
}

fn side_pat(p: &SeqPat, side: Side) -> &SPat {
    match side {
        Side::Left => &p.left,
        Side::Right => &p.right,
    }
}

fn locate(pat: &SPat, steps: &[usize]) -> Loc {
    if let SPat::Var(i) = pat {
        return Loc::Var(*i, steps.to_vec());
    }
    let Some((&k, rest)) = steps.split_first() else {
        return Loc::Fixed;
    };
    match (pat, k) {
        (SPat::Bullet(a) | SPat::Circ(_, a), 0) => locate(a, rest),
        (SPat::Dot(_, a, _) | SPat::Sup(_, a, _), 0) => locate(a, rest),
        (SPat::Dot(_, _, b) | SPat::Sup(_, _, b), 1) => locate(b, rest),
        _ => Loc::Fixed,
    }
}

fn var_paths(pat: &SPat, var: usize, here: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    match pat {
        SPat::Var(i) if *i == var => out.push(here.clone()),
        SPat::Bullet(a) | SPat::Circ(_, a) => {
            here.push(0);
            var_paths(a, var, here, out);
            here.pop();
        }
        SPat::Dot(_, a, b) | SPat::Sup(_, a, b) => {
            for (k, c) in [a, b].into_iter().enumerate() {
                here.push(k);
                var_paths(c, var, here, out);
                here.pop();
            }
        }
        _ => {}
    }
}

/// How the rule at `d` treats the occurrence at `pos` of its conclusion.
enum Trace {
    Principal,
    Weakened,
    /// Ancestors as (premise index, position).
    Parametric(Vec<(usize, Path)>),
}

fn trace(d: &Derivation, pos: &Path) -> Trace {
    let Some(schema) = calculus::lookup(d.rule) else {
        return Trace::Weakened;
    };
    let (prems, concl) = roles(schema, d.direction);
    match locate(side_pat(concl, pos.side), &pos.steps) {
        Loc::Fixed => Trace::Principal,
        Loc::Var(v, rest) => {
            let mut out = Vec::new();
            for (k, p) in prems.iter().enumerate() {
                for side in [Side::Left, Side::Right] {
                    let mut found = Vec::new();
                    var_paths(side_pat(p, side), v, &mut Vec::new(), &mut found);
                    for mut steps in found {
                        steps.extend_from_slice(&rest);
                        out.push((k, Path { side, steps }));
                    }
                }
            }
            if out.is_empty() {
                Trace::Weakened
            } else {
                Trace::Parametric(out)
            }
        }
    }
}

/// True when the last rule of `d` builds the whole `side` of its conclusion
/// as a formula.
fn introduces(d: &Derivation, side: Side) -> bool {
    d.conclusion.side(side).as_term().is_some() && matches!(trace(d, &Path::root(side)), Trace::Principal)
}

// ---------------------------------------------------------------------------
// Principal reductions

fn cut_rule(t: &Term) -> &'static str {
    if t.sort() == Sort::L {
        "Cut_L"
    } else {
        "Cut_P"
    }
}

fn cut(l: Derivation, r: Derivation) -> Result<Derivation, ApplyError> {
    let t = l
        .conclusion
        .right
        .as_term()
        .expect("cut premise ends in a formula")
        .clone();
    apply(cut_rule(&t), Direction::Forward, vec![l, r], &[])
}

fn chain(mut d: Derivation, steps: &[(&str, bool)]) -> Result<Derivation, ApplyError> {
    for &(rule, forward) in steps {
        d = if forward { step(rule, d)? } else { step_back(rule, d)? };
    }
    Ok(d)
}

/// Reduct of a cut between `l` and `r`, both principal on the cut formula.
fn reduce_pair(l: &Derivation, r: &Derivation) -> Result<Derivation, CutError> {
    let p = |d: &Derivation, i: usize| d.premises[i].clone();
    let out = match (l.rule, r.rule) {
        ("Id", "Id") => l.clone(),
        ("Top_right", "Top_left") => p(r, 0),
        ("Bot_right", "Bot_left") => p(l, 0),
        ("Cap_right", "Cap_left") => {
            // S;T |- s cap t and s cap t |- U, from S |- s, T |- t, s;t |- U.
            let t_side = cut(p(l, 1), step("D_P_left", p(r, 0))?)?;
            let s_first = chain(t_side, &[("D_P_left", false), ("E_left", true), ("D_P_left", true)])?;
            let joined = cut(p(l, 0), s_first)?;
            chain(joined, &[("D_P_left", false), ("E_left", true)])?
        }
        ("Cup_right", "Cup_left") => {
            // S |- s cup t and s cup t |- S';T', from S |- s;t, s |- S', t |- T'.
            let t_side = cut(step("D_P_right", p(l, 0))?, p(r, 1))?;
            let s_first = chain(t_side, &[("D_P_right", false), ("E_right", true), ("D_P_right", true)])?;
            let joined = cut(s_first, p(r, 0))?;
            chain(joined, &[("D_P_right", false), ("E_right", true)])?
        }
        ("WDia_right", "WDia_left") => {
            let inner = cut(p(l, 0), step("D_PL_right", p(r, 0))?)?;
            step_back("D_PL_right", inner)?
        }
        ("WBox_left", "WBox_right") => {
            let inner = cut(step("D_PL_left", p(l, 0))?, p(r, 0))?;
            step_back("D_PL_left", inner)?
        }
        ("BDia_right", "BDia_left") => {
            let inner = cut(p(l, 0), step_back("D_PL_left", p(r, 0))?)?;
            step("D_PL_left", inner)?
        }
        ("BBox_left", "BBox_right") => {
            let inner = cut(step_back("D_PL_right", p(l, 0))?, p(r, 0))?;
            step("D_PL_right", inner)?
        }
        _ => return Err(CutError::NoReduction(l.label(), r.label())),
    };
    let before = l.conclusion.right.as_term().map_or(0, Term::size);
    debug_assert!(
        cut_sizes(&out).iter().all(|&s| s < before),
        "a principal step must only leave smaller cuts"
    );
    Ok(out)
}

fn cut_sizes(d: &Derivation) -> Vec<usize> {
    d.nodes()
        .into_iter()
        .filter_map(|(_, n)| cut_term(n))
        .map(Term::size)
        .collect()
}

// ---------------------------------------------------------------------------
// Driver

enum Stop {
    Budget(Derivation),
    Fail(CutError),
}

impl From<ApplyError> for Stop {
    fn from(e: ApplyError) -> Stop {
        Stop::Fail(e.into())
    }
}

impl From<CutError> for Stop {
    fn from(e: CutError) -> Stop {
        Stop::Fail(e)
    }
}

struct Eliminator {
    budget: usize,
    steps: usize,
    log: Vec<String>,
}

impl Eliminator {
    fn tick(&mut self) -> bool {
        self.steps += 1;
        self.steps <= self.budget
    }

    /// Post-order, so every cut is reduced after the cuts above it.
    fn elim(&mut self, d: &Derivation) -> Result<Derivation, Stop> {
        let mut premises = Vec::with_capacity(d.premises.len());
        for (i, p) in d.premises.iter().enumerate() {
            match self.elim(p) {
                Ok(q) => premises.push(q),
                Err(Stop::Budget(partial)) => {
                    let mut out = d.clone();
                    out.premises = premises;
                    out.premises.push(partial);
                    out.premises.extend(d.premises[i + 1..].iter().cloned());
                    return Err(Stop::Budget(out));
                }
                Err(e) => return Err(e),
            }
        }
        let mut here = d.clone();
        here.premises = premises;
        if !is_cut(&here) {
            return Ok(here);
        }
        let snapshot = here.clone();
        self.reduce_cut(here).map_err(|e| match e {
            Stop::Budget(_) => Stop::Budget(snapshot),
            e => e,
        })
    }

    /// Eliminates a cut whose premises are cut-free.
    fn reduce_cut(&mut self, d: Derivation) -> Result<Derivation, Stop> {
        let [l, r]: [Derivation; 2] = d.premises.try_into().expect("cuts are binary");
        let sub = r.conclusion.right.clone();
        self.log
            .push(format!("trace {} into the left premise", l.conclusion.right));
        let r_ref = &r;
        self.substitute(&l, &[Path::root(Side::Right)], &sub, &mut |me, dl| {
            me.close_left(dl, r_ref)
        })
    }

    /// `dl` introduces the cut formula on its right; trace it through `r`.
    fn close_left(&mut self, dl: Derivation, r: &Derivation) -> Result<Derivation, Stop> {
        if introduces(r, Side::Left) {
            return self.principal(dl, r.clone());
        }
        let sub = dl.conclusion.left.clone();
        self.log
            .push(format!("trace {} into the right premise", dl.conclusion.right));
        let dl_ref = &dl;
        self.substitute(r, &[Path::root(Side::Left)], &sub, &mut |me, er| {
            me.principal(dl_ref.clone(), er)
        })
    }

    fn principal(&mut self, l: Derivation, r: Derivation) -> Result<Derivation, Stop> {
        if !self.tick() {
            return Err(Stop::Budget(l));
        }
        self.log
            .push(format!("principal {} / {} on {}", l.rule, r.rule, l.conclusion.right));
        let reduct = reduce_pair(&l, &r)?;
        self.elim(&reduct)
    }

    /// Replaces the occurrences at `positions` in `d` by `sub`, tracing them
    /// upward. A node introducing one of them is handed to `close` after its
    /// other occurrences are replaced.
    fn substitute(
        &mut self,
        d: &Derivation,
        positions: &[Path],
        sub: &Structure,
        close: &mut dyn FnMut(&mut Self, Derivation) -> Result<Derivation, Stop>,
    ) -> Result<Derivation, Stop> {
        if !self.tick() {
            return Err(Stop::Budget(d.clone()));
        }
        let mut principal = None;
        let mut rest = Vec::new();
        let mut per_premise: Vec<Vec<Path>> = vec![Vec::new(); d.premises.len()];
        for pos in positions {
            match trace(d, pos) {
                Trace::Principal => {
                    debug_assert!(principal.is_none(), "one introduction per node");
                    principal = Some(pos.clone());
                }
                Trace::Weakened => rest.push(pos.clone()),
                Trace::Parametric(anc) => {
                    rest.push(pos.clone());
                    for (k, p) in anc {
                        per_premise[k].push(p);
                    }
                }
            }
        }
        let mut out = d.clone();
        for (k, ps) in per_premise.iter().enumerate() {
            if !ps.is_empty() {
                out.premises[k] = self.substitute(&d.premises[k], ps, sub, close)?;
            }
        }
        for pos in &rest {
            out.conclusion = replace_structure(&out.conclusion, pos, sub.clone()).expect("traced position exists");
        }
        if principal.is_some() {
            close(self, out)
        } else {
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, is_cut_free, weaken};
    use crate::syntax::{parse_formula, parse_sequent, parse_term};
    use crate::translate::{identity_derivation, identity_term, tau_pre};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn id(s: &str) -> Derivation {
        identity_term(&t(s))
    }

    fn valid(d: &Derivation) {
        let report = check(d, false);
        assert!(report.is_ok(), "{report:?}");
    }

    fn eliminated(d: &Derivation) -> Derivation {
        valid(d);
        let out = eliminate_cuts(d, DEFAULT_BUDGET).unwrap();
        valid(&out);
        assert!(is_cut_free(&out));
        assert_eq!(out.conclusion, d.conclusion);
        assert_eq!(subformula_violation(&out), None);
        out
    }

    #[test]
    fn atomic_cut_vanishes() {
        let d = cut(id("p"), id("p")).unwrap();
        assert_eq!(classify_cut(&d, &[]).unwrap().kind, CutKind::Principal);
        let r = reduce_principal(&d, &[]).unwrap();
        assert_eq!(r.rule, "Id");
        assert_eq!(r.size(), 1);
    }

    #[test]
    fn top_cut_returns_the_premise() {
        let pi1 = id("T");
        let d = cut(id("T").premises[0].clone(), pi1.clone()).unwrap();
        assert_eq!(d.premises[0].rule, "Top_right");
        assert_eq!(classify_cut(&d, &[]).unwrap().kind, CutKind::Principal);
        assert_eq!(reduce_principal(&d, &[]).unwrap(), pi1.premises[0]);
    }

    #[test]
    fn cap_figure_yields_two_smaller_cuts() {
        let left = apply("Cap_right", Direction::Forward, vec![id("wbox p"), id("wbox q")], &[]).unwrap();
        let pi3 = weaken("W_left", id("wbox p").premises[0].clone(), Structure::Leaf(t("wbox q"))).unwrap();
        let right = step("Cap_left", pi3).unwrap();
        let d = cut(left, right).unwrap();
        assert_eq!(d.conclusion, parse_sequent("wbox p ; wbox q |- o p").unwrap());
        assert_eq!(classify_cut(&d, &[]).unwrap().kind, CutKind::Principal);
        let r = reduce_principal(&d, &[]).unwrap();
        valid(&r);
        // E, D_P~, Cut on s, D_P, E, D_P~, Cut on t, D_P along the spine.
        let spine: Vec<String> = std::iter::successors(Some(&r), |n| n.premises.last())
            .take(8)
            .map(|n| n.label())
            .collect();
        assert_eq!(
            spine,
            [
                "E_left",
                "D_P_left~",
                "Cut_P",
                "D_P_left",
                "E_left",
                "D_P_left~",
                "Cut_P",
                "D_P_left"
            ]
        );
        assert_eq!(cut_sizes(&r), vec![2, 2]);
        eliminated(&d);
    }

    #[test]
    fn every_connective_has_a_principal_reduction() {
        let cases = [
            (id("T").premises[0].clone(), id("T")),
            (id("F"), id("F").premises[0].clone()),
            (id("fdia wbox p").premises[0].clone(), id("fdia wbox p")),
            (id("fbox wdia p"), id("fbox wdia p").premises[0].clone()),
            (id("wbox p"), id("wbox p").premises[0].clone()),
            (id("wdia p").premises[0].clone(), id("wdia p")),
        ];
        for (l, r) in cases {
            let d = cut(l, r).unwrap();
            valid(&d);
            let site = classify_cut(&d, &[]).unwrap();
            assert_eq!(site.kind, CutKind::Principal, "{}", d.conclusion);
            let red = reduce_principal(&d, &[]).unwrap();
            valid(&red);
            assert_eq!(red.conclusion, d.conclusion);
            eliminated(&d);
        }
    }

    #[test]
    fn weakened_premise_is_left_parametric() {
        let left = weaken("W_left", id("wbox p"), Structure::Leaf(t("wbox q"))).unwrap();
        let d = cut(left, id("wbox p")).unwrap();
        assert_eq!(classify_cut(&d, &[]).unwrap().kind, CutKind::LeftParametric);
        assert!(matches!(reduce_principal(&d, &[]), Err(CutError::NotPrincipal(_))));
        let d = cut(id("wbox p").premises[0].premises[0].clone(), id("p")).unwrap();
        assert!(matches!(classify_cut(&d, &[0]), Err(CutError::NotACut(_))));
        eliminated(
            &cut(
                weaken("W_left", id("wbox p"), Structure::Leaf(t("wbox q"))).unwrap(),
                id("wbox p"),
            )
            .unwrap(),
        );
    }

    #[test]
    fn self_cut_on_a_translated_identity() {
        let a = parse_formula("p /\\ q").unwrap();
        let tr = tau_pre(&a);
        let d = cut(id(&tr.to_string()), identity_derivation(&a)).unwrap();
        assert_eq!(d.conclusion.left.as_term(), Some(&tr));
        let out = eliminated(&d);
        assert!(out.size() <= identity_derivation(&a).size() * 4);
    }

    #[test]
    fn cut_free_input_is_unchanged() {
        let d = identity_derivation(&parse_formula("p \\/ (q /\\ T)").unwrap());
        assert_eq!(eliminate_cuts(&d, DEFAULT_BUDGET).unwrap(), d);
        assert!(cut_sites(&d).is_empty());
    }

    #[test]
    fn nested_and_parametric_cuts() {
        for s in ["p /\\ q", "p \\/ q", "(p /\\ q) \\/ T", "F /\\ (p \\/ q)"] {
            let a = parse_formula(s).unwrap();
            let d = identity_derivation(&a);
            let right = d.conclusion.right.as_term().unwrap().clone();
            let left = d.conclusion.left.as_term().unwrap().clone();
            let once = cut(d.clone(), identity_term(&right)).unwrap();
            let twice = cut(identity_term(&left), once.clone()).unwrap();
            eliminated(&once);
            eliminated(&twice);
        }
    }

    #[test]
    fn budget_exhaustion_returns_a_valid_partial_derivation() {
        let a = parse_formula("(p /\\ q) \\/ r").unwrap();
        let d = identity_derivation(&a);
        let right = d.conclusion.right.as_term().unwrap().clone();
        let d = cut(d, identity_term(&right)).unwrap();
        match eliminate_cuts(&d, 3) {
            Err(CutError::BudgetExceeded { partial, .. }) => {
                valid(&partial);
                assert_eq!(partial.conclusion, d.conclusion);
            }
            other => panic!("{other:?}"),
        }
    }
}
