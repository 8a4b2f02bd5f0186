//! Rebuilds checked derivations from skeletons: trees of sequents whose
//! inference labels may be missing or may stand for several rule steps.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::calculus;
use crate::kernel::{check_step, expansions, infer_rules, Derivation, Direction, Skeleton};
use crate::syntax::Sequent;

/// Longest chain of rule steps inserted for one skeleton inference.
pub const MAX_BRIDGE: usize = 4;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("no rule closes the leaf `{0}`")]
    Leaf(String),
    #[error("no chain of at most {MAX_BRIDGE} steps reaches `{conclusion}` from {premises:?}")]
    Gap { conclusion: String, premises: Vec<String> },
}

/// Resolves every inference of `skel`. Leaves are closed by zero-premise
/// rules or by `close`; inferences are justified by the labelled rule, any
/// single rule, or a short chain found by backward breadth-first search.
pub fn reconstruct(
    skel: &Skeleton,
    close: &mut dyn FnMut(&Sequent) -> Option<Derivation>,
) -> Result<Derivation, ReconstructError> {
    let kids = skel
        .children
        .iter()
        .map(|k| reconstruct(k, close))
        .collect::<Result<Vec<_>, _>>()?;
    let goal = &skel.conclusion;
    if kids.is_empty() {
        if let Some(d) = labelled(skel, &[]) {
            return Ok(d);
        }
        if let Some((rule, dir)) = infer_rules(&[], goal).first() {
            return Ok(Derivation::node(rule, *dir, goal.clone(), vec![]));
        }
        return close(goal).ok_or_else(|| ReconstructError::Leaf(goal.to_string()));
    }
    if kids.len() == 1 && kids[0].conclusion == *goal {
        return Ok(kids.into_iter().next().unwrap());
    }
    if let Some(d) = labelled(skel, &kids) {
        return Ok(d);
    }
    let prem: Vec<&Sequent> = kids.iter().map(|k| &k.conclusion).collect();
    if let Some((rule, dir)) = infer_rules(&prem, goal).first() {
        return Ok(Derivation::node(rule, *dir, goal.clone(), kids));
    }
    bridge(goal, kids)
}

fn labelled(skel: &Skeleton, kids: &[Derivation]) -> Option<Derivation> {
    let (name, dir) = match skel.label.strip_suffix('~') {
        Some(n) => (n, Direction::Backward),
        None => (skel.label.as_str(), Direction::Forward),
    };
    let schema = calculus::lookup(name)?;
    let prem: Vec<&Sequent> = kids.iter().map(|k| &k.conclusion).collect();
    check_step(schema.name, dir, &prem, &skel.conclusion).ok()?;
    Some(Derivation::node(
        schema.name,
        dir,
        skel.conclusion.clone(),
        kids.to_vec(),
    ))
}

/// Backward breadth-first search from `goal`: unary expansions extend the
/// frontier; an expansion whose premises are exactly the children closes it.
fn bridge(goal: &Sequent, kids: Vec<Derivation>) -> Result<Derivation, ReconstructError> {
    let targets: Vec<&Sequent> = kids.iter().map(|k| &k.conclusion).collect();
    // parent[s] = (rule, dir, sequent below s)
    let mut parent: HashMap<Sequent, (&'static str, Direction, Sequent)> = HashMap::new();
    let mut queue = VecDeque::from([(goal.clone(), 0usize)]);
    let mut seen = std::collections::HashSet::from([goal.clone()]);
    while let Some((s, depth)) = queue.pop_front() {
        if depth >= MAX_BRIDGE {
            continue;
        }
        for e in expansions(&s) {
            let ps: Vec<&Sequent> = e.premises.iter().collect();
            if ps == targets {
                let mut d = Derivation::node(e.rule, e.direction, s.clone(), kids);
                let mut cur = s;
                while let Some((rule, dir, below)) = parent.get(&cur) {
                    d = Derivation::node(rule, *dir, below.clone(), vec![d]);
                    cur = below.clone();
                }
                return Ok(d);
            }
            if e.premises.len() == 1 {
                let p = e.premises.into_iter().next().unwrap();
                if seen.insert(p.clone()) {
                    parent.insert(p.clone(), (e.rule, e.direction, s.clone()));
                    queue.push_back((p, depth + 1));
                }
            }
        }
    }
    Err(ReconstructError::Gap {
        conclusion: goal.to_string(),
        premises: targets.iter().map(|s| s.to_string()).collect(),
    })
}
