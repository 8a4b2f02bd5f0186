//! Bounded backward proof search in the cut-free fragment.
//!
//! The search space is an and-or graph over sequents. Every sequent is
//! expanded at most once (the visited set is keyed by [`LoopKey`]), nodes are
//! expanded breadth-first from the goal, and provability propagates upward as
//! soon as all premises of some expansion are proved. A node is proved only
//! after its premises, so proofs extracted from the graph are well-founded.
//!
//! Pruning:
//! * a sequent whose whole side is a term introduced by an invertible rule
//!   gets that expansion only;
//! * weakening keeps a single term, or leaves a sequent some introduction
//!   rule matches; `IW` and its dual only expose `T` or `F`;
//! * contraction only duplicates a side that is not a `;` chain and faces a
//!   binary term whose rule needs `;`, at most `contraction_cap` times on
//!   the discovering branch;
//! * unit insertion (the backward reading of `SCirc`) is never tried.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::calculus::{self, Binding, RuleGroup, Substitution};
use crate::kernel::{self, expansions, Derivation, Direction};
use crate::syntax::{Sequent, Sort, Structure, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopKey {
    Exact,
    /// Top-level `;` chains on each side compared as multisets.
    ModuloAE,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Largest backward distance from the goal at which nodes are expanded.
    pub max_depth: usize,
    pub max_nodes: usize,
    /// Rules tried, in this order; rules not listed are never used.
    pub rule_order: Vec<&'static str>,
    pub loop_key: LoopKey,
    pub contraction_cap: usize,
    /// Analytic cut on subterms of the goal.
    pub allow_cut: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 20,
            max_nodes: 1_000_000,
            rule_order: calculus::builtin_rules().iter().map(|r| r.name).collect(),
            loop_key: LoopKey::ModuloAE,
            contraction_cap: 2,
            allow_cut: false,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(max_depth: usize) -> SearchConfig {
        SearchConfig {
            max_depth,
            ..SearchConfig::default()
        }
    }
}

/// Last structural move before a dead end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Residuation,
    Exchange,
    Weakening,
    Contraction,
    /// Reached from the goal by operational rules only.
    None,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Residuation => "Residuation",
            Family::Exchange => "Exchange",
            Family::Weakening => "Weakening",
            Family::Contraction => "Contraction",
            Family::None => "None",
        };
        f.write_str(s)
    }
}

fn family_of(rule: &str) -> Option<Family> {
    Some(match rule {
        "D_PL_left" | "D_PL_right" | "D_P_left" | "D_P_right" => Family::Residuation,
        "E_left" | "E_right" | "A_left" | "A_right" | "SCirc_left" | "SCirc_right" => Family::Exchange,
        "W_left" | "W_right" | "IW" | "IW_dual" => Family::Weakening,
        "C_left" | "C_right" => Family::Contraction,
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeadEnd {
    pub sequent: Sequent,
    pub family: Family,
    /// Unprovable in the explored graph even if every node left unexpanded
    /// by the depth bound were provable.
    pub refuted: bool,
}

impl fmt::Display for DeadEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DEADEND {} {}", self.sequent, self.family)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub expanded: usize,
    /// Nodes discovered beyond `max_depth` and left unexpanded.
    pub depth_cut: usize,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Proved(Derivation, SearchStats),
    /// No proof within the bounds. Dead ends are unproved sequents with a
    /// displayed term that the search reached by a structural move.
    Exhausted(Vec<DeadEnd>, SearchStats),
    ResourceOut(SearchStats),
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(..))
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Proved(_, s) | SearchOutcome::Exhausted(_, s) | SearchOutcome::ResourceOut(s) => s,
        }
    }
}

type NodeId = usize;

#[derive(Clone, Debug)]
enum Step {
    Rule(&'static str, Direction),
    /// Exchange and associativity steps from the node down to its premise.
    Bridge(Derivation),
    /// A rule applied to an exchange/associativity variant of the node.
    Via(Derivation, &'static str, Direction),
}

#[derive(Debug)]
struct Edge {
    step: Step,
    premises: Vec<NodeId>,
}

#[derive(Debug)]
struct Node {
    seq: Sequent,
    depth: usize,
    contractions: usize,
    family: Family,
    /// Discovered by a structural rule.
    structural_entry: bool,
    edges: Vec<Edge>,
    expanded: bool,
    proof: Option<usize>,
    parents: Vec<(NodeId, usize)>,
}

struct Graph<'a> {
    cfg: &'a SearchConfig,
    nodes: Vec<Node>,
    index: HashMap<Sequent, NodeId>,
    by_key: HashMap<Sequent, NodeId>,
    queue: VecDeque<NodeId>,
    cut_terms: Vec<Term>,
    stats: SearchStats,
}

pub fn backward_search(goal: &Sequent, cfg: &SearchConfig) -> SearchOutcome {
    let mut g = Graph {
        cfg,
        nodes: Vec::new(),
        index: HashMap::new(),
        by_key: HashMap::new(),
        queue: VecDeque::new(),
        cut_terms: if cfg.allow_cut { goal_subterms(goal) } else { Vec::new() },
        stats: SearchStats::default(),
    };
    let root = g.intern(goal.clone(), 0, 0, Family::None, false);
    while let Some(id) = g.queue.pop_front() {
        if g.nodes[root].proof.is_some() {
            break;
        }
        if g.nodes.len() >= cfg.max_nodes {
            g.stats.nodes = g.nodes.len();
            return SearchOutcome::ResourceOut(g.stats);
        }
        g.expand(id);
    }
    g.stats.nodes = g.nodes.len();
    if g.nodes[root].proof.is_some() {
        let h = g.heights();
        let d = g.extract(root, &h);
        debug_assert!(kernel::check(&d, false).is_ok());
        return SearchOutcome::Proved(d, g.stats);
    }
    let dead = g.dead_ends();
    SearchOutcome::Exhausted(dead, g.stats)
}

/// Refuted dead ends of an exhausted search. The depth bound is raised in
/// steps of 10, up to four times `cfg.max_depth`, until no node is left
/// unexpanded. Empty when the goal is proved or the node budget runs out.
pub fn deadlock_report(goal: &Sequent, cfg: &SearchConfig) -> Vec<DeadEnd> {
    let mut c = cfg.clone();
    loop {
        match backward_search(goal, &c) {
            SearchOutcome::Exhausted(d, stats) => {
                if stats.depth_cut == 0 || c.max_depth >= 4 * cfg.max_depth {
                    return d.into_iter().filter(|e| e.refuted).collect();
                }
                c.max_depth += 10;
            }
            _ => return Vec::new(),
        }
    }
}

fn goal_subterms(goal: &Sequent) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for t in goal.subterms() {
        if !out.contains(t) {
            out.push(t.clone());
        }
    }
    out
}

impl Graph<'_> {
    fn key(&self, s: &Sequent) -> Sequent {
        match self.cfg.loop_key {
            LoopKey::Exact => s.clone(),
            LoopKey::ModuloAE => Sequent {
                left: normalize_chain(&s.left),
                right: normalize_chain(&s.right),
            },
        }
    }

    fn intern(&mut self, seq: Sequent, depth: usize, contractions: usize, family: Family, structural: bool) -> NodeId {
        if let Some(&id) = self.index.get(&seq) {
            return id;
        }
        let key = self.key(&seq);
        let alias = match self.by_key.get(&key) {
            Some(&rep) if self.cfg.loop_key == LoopKey::ModuloAE => {
                ae_bridge(&seq, &self.nodes[rep].seq).map(|d| (rep, d))
            }
            _ => None,
        };
        let id = self.nodes.len();
        self.nodes.push(Node {
            seq: seq.clone(),
            depth,
            contractions,
            family,
            structural_entry: structural,
            edges: Vec::new(),
            expanded: false,
            proof: None,
            parents: Vec::new(),
        });
        self.index.insert(seq, id);
        match alias {
            Some((rep, bridge)) => {
                self.nodes[id].expanded = true;
                self.add_edge(id, Step::Bridge(bridge), vec![rep]);
            }
            None => {
                self.by_key.entry(key).or_insert(id);
                if depth <= self.cfg.max_depth {
                    self.queue.push_back(id);
                } else {
                    self.stats.depth_cut += 1;
                }
            }
        }
        id
    }

    fn add_edge(&mut self, from: NodeId, step: Step, premises: Vec<NodeId>) {
        let e = self.nodes[from].edges.len();
        for &p in &premises {
            self.nodes[p].parents.push((from, e));
        }
        self.nodes[from].edges.push(Edge { step, premises });
        self.try_prove(from, e);
    }

    fn try_prove(&mut self, from: NodeId, e: usize) {
        let mut work = vec![(from, e)];
        while let Some((n, e)) = work.pop() {
            if self.nodes[n].proof.is_some() {
                continue;
            }
            if self.nodes[n].edges[e]
                .premises
                .iter()
                .all(|&p| self.nodes[p].proof.is_some())
            {
                self.nodes[n].proof = Some(e);
                work.extend(self.nodes[n].parents.iter().copied());
            }
        }
    }

    fn expand(&mut self, id: NodeId) {
        if self.nodes[id].expanded || self.nodes[id].proof.is_some() {
            return;
        }
        self.nodes[id].expanded = true;
        self.stats.expanded += 1;
        let seq = self.nodes[id].seq.clone();
        let (depth, used, fam) = (self.nodes[id].depth, self.nodes[id].contractions, self.nodes[id].family);
        let variants = match self.cfg.loop_key {
            LoopKey::Exact => vec![(seq.clone(), Derivation::hyp(seq.clone()))],
            LoopKey::ModuloAE => ae_variants(&seq),
        };
        let steps: Vec<_> = variants
            .into_iter()
            .flat_map(|(v, bridge)| {
                let direct = v == seq;
                self.candidates(&v, used).into_iter().map(move |(rule, dir, p)| {
                    let step = if direct {
                        Step::Rule(rule, dir)
                    } else {
                        Step::Via(bridge.clone(), rule, dir)
                    };
                    (rule, step, p)
                })
            })
            .collect();
        for (rule, step, premises) in steps {
            let structural = family_of(rule);
            let family = structural.unwrap_or(fam);
            let c = used + usize::from(structural == Some(Family::Contraction));
            let ids = premises
                .into_iter()
                .map(|p| self.intern(p, depth + 1, c, family, structural.is_some()))
                .collect();
            self.add_edge(id, step, ids);
            if self.nodes[id].proof.is_some() {
                return;
            }
        }
    }

    /// Backward steps from `s` after pruning, in `rule_order`.
    fn candidates(&self, s: &Sequent, contractions: usize) -> Vec<(&'static str, Direction, Vec<Sequent>)> {
        let all = expansions(s);
        let rank = |r: &str| self.cfg.rule_order.iter().position(|x| *x == r);
        let mut out: Vec<(usize, &'static str, Direction, Vec<Sequent>)> = Vec::new();
        // Invertible introductions on a displayed term are applied alone.
        if let Some(e) = all.iter().find(|e| {
            e.direction == Direction::Forward
                && calculus::lookup(e.rule).is_some_and(|r| r.group == RuleGroup::OperationalIntro)
                && calculus::is_semantically_invertible(e.rule)
                && rank(e.rule).is_some()
        }) {
            return vec![(e.rule, e.direction, e.premises.clone())];
        }
        for e in all {
            let Some(k) = rank(e.rule) else { continue };
            let ae = self.cfg.loop_key == LoopKey::ModuloAE;
            let keep = match (e.rule, e.direction) {
                ("E_left" | "E_right" | "A_left" | "A_right", _) => !ae,
                ("SCirc_left" | "SCirc_right", Direction::Backward) => false,
                ("W_left", _) => weakening_ok(&e.premises[0], &e.premises[0].left),
                ("W_right", _) => weakening_ok(&e.premises[0], &e.premises[0].right),
                ("IW", _) => matches!(e.premises[0].right, Structure::Leaf(Term::Top)),
                ("IW_dual", _) => matches!(e.premises[0].left, Structure::Leaf(Term::Bot)),
                ("C_left", _) => {
                    contractions < self.cfg.contraction_cap
                        && needs_dot(&s.right, true)
                        && !matches!(s.left, Structure::Dot(..))
                }
                ("C_right", _) => {
                    contractions < self.cfg.contraction_cap
                        && needs_dot(&s.left, false)
                        && !matches!(s.right, Structure::Dot(..))
                }
                _ => true,
            };
            if keep {
                out.push((k, e.rule, e.direction, e.premises));
            }
        }
        if self.cfg.allow_cut {
            out.extend(
                self.cuts(s)
                    .into_iter()
                    .filter_map(|(r, p)| Some((rank(r)?, r, Direction::Forward, p))),
            );
        }
        out.sort_by_key(|c| c.0);
        out.into_iter().map(|(_, r, d, p)| (r, d, p)).collect()
    }

    fn cuts(&self, s: &Sequent) -> Vec<(&'static str, Vec<Sequent>)> {
        let sort = s.sort();
        let name = if sort == Sort::L { "Cut_L" } else { "Cut_P" };
        let schema = calculus::lookup(name).expect("cut rules exist");
        let var = if sort == Sort::L { "A" } else { "s" };
        let (x, y) = if sort == Sort::L { ("X", "Y") } else { ("S", "T") };
        self.cut_terms
            .iter()
            .filter(|t| t.sort() == sort)
            .filter_map(|t| {
                let mut sub = Substitution::empty(schema);
                sub.set(schema, x, Binding::Struct(s.left.clone()))
                    .set(schema, y, Binding::Struct(s.right.clone()))
                    .set(schema, var, Binding::Term(t.clone()));
                calculus::instantiate(schema, &sub).ok().map(|(p, _)| (schema.name, p))
            })
            .collect()
    }

    /// Least proof height of every node over the explored graph.
    fn heights(&self) -> Vec<Option<usize>> {
        let cost = |step: &Step| match step {
            Step::Rule(..) => 1,
            Step::Bridge(d) => d.height(),
            Step::Via(d, ..) => d.height() + 1,
        };
        let mut h: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for (i, n) in self.nodes.iter().enumerate() {
                if n.proof.is_none() {
                    continue;
                }
                for e in &n.edges {
                    let best = e
                        .premises
                        .iter()
                        .try_fold(0, |m, &p| h[p].map(|x| m.max(x)))
                        .map(|m| m + cost(&e.step));
                    if let Some(b) = best {
                        if h[i].is_none_or(|x| b < x) {
                            h[i] = Some(b);
                            changed = true;
                        }
                    }
                }
            }
        }
        h
    }

    /// A proof of least height; ties go to the earliest expansion.
    fn extract(&self, id: NodeId, h: &[Option<usize>]) -> Derivation {
        let n = &self.nodes[id];
        let target = h[id].expect("extracting a proved node");
        let e = n
            .edges
            .iter()
            .find(|e| {
                let step = match &e.step {
                    Step::Rule(..) => 1,
                    Step::Bridge(d) => d.height(),
                    Step::Via(d, ..) => d.height() + 1,
                };
                e.premises
                    .iter()
                    .try_fold(0, |m, &p| h[p].map(|x| m.max(x)))
                    .map(|m| m + step)
                    == Some(target)
            })
            .expect("some expansion attains the least height");
        let kids: Vec<Derivation> = e.premises.iter().map(|&p| self.extract(p, h)).collect();
        match &e.step {
            Step::Rule(rule, dir) => Derivation::node(rule, *dir, n.seq.clone(), kids),
            Step::Bridge(d) => {
                let mut kids = kids.into_iter();
                d.plug(&mut |_| kids.next())
            }
            Step::Via(bridge, rule, dir) => {
                let v = bridge.hypotheses()[0].clone();
                let inner = Derivation::node(rule, *dir, v, kids);
                bridge.plug(&mut |_| Some(inner.clone()))
            }
        }
    }

    /// Nodes that stay unproved even if every unexpanded node were
    /// provable: their failure does not depend on the depth bound.
    fn refuted(&self) -> Vec<bool> {
        let mut ok: Vec<bool> = self.nodes.iter().map(|n| !n.expanded || n.proof.is_some()).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for (i, n) in self.nodes.iter().enumerate() {
                if !ok[i] && n.edges.iter().any(|e| e.premises.iter().all(|&p| ok[p])) {
                    ok[i] = true;
                    changed = true;
                }
            }
        }
        ok.into_iter().map(|b| !b).collect()
    }

    fn dead_ends(&self) -> Vec<DeadEnd> {
        let refuted = self.refuted();
        let mut out: Vec<DeadEnd> = self
            .nodes
            .iter()
            .zip(refuted)
            .filter(|(n, _)| {
                n.expanded
                    && n.proof.is_none()
                    && n.structural_entry
                    && n.edges.iter().all(|e| !matches!(e.step, Step::Bridge(_)))
                    && (matches!(n.seq.left, Structure::Leaf(_)) || matches!(n.seq.right, Structure::Leaf(_)))
            })
            .map(|(n, refuted)| DeadEnd {
                sequent: n.seq.clone(),
                family: n.family,
                refuted,
            })
            .collect();
        out.sort_by_cached_key(|d| (d.family, d.sequent.size(), d.sequent.to_string()));
        out
    }
}

/// Weakening keeps `kept` on the weakened side of `premise`.
fn weakening_ok(premise: &Sequent, kept: &Structure) -> bool {
    if matches!(kept, Structure::Leaf(_)) {
        return true;
    }
    calculus::builtin_rules().iter().any(|r| {
        matches!(r.group, RuleGroup::OperationalIntro | RuleGroup::Identity)
            && !calculus::match_rule(r, premise).is_empty()
    })
}

/// The side opposite `s` must be a `;` for the rule introducing `s`:
/// a meet on the right or a join on the left.
fn needs_dot(s: &Structure, right: bool) -> bool {
    match s {
        Structure::Leaf(Term::Cap(..)) => right,
        Structure::Leaf(Term::Cup(..)) => !right,
        _ => false,
    }
}

fn normalize_chain(s: &Structure) -> Structure {
    let Structure::Dot(k, ..) = s else { return s.clone() };
    let mut parts = Vec::new();
    flatten(s, *k, &mut parts);
    parts.sort();
    let mut it = parts.into_iter();
    let first = it.next().expect("a chain has parts");
    it.fold(first, |acc, p| Structure::dot(*k, acc, p))
}

fn flatten(s: &Structure, k: Sort, out: &mut Vec<Structure>) {
    match s {
        Structure::Dot(j, a, b) if *j == k => {
            flatten(a, k, out);
            flatten(b, k, out);
        }
        _ => out.push(s.clone()),
    }
}

type AeParents = HashMap<Sequent, Option<(Sequent, &'static str, Direction)>>;

/// Sequents reachable from `from` by exchange and associativity, with
/// breadth-first parent links; stops early at `target` or after `limit`.
fn ae_closure(from: &Sequent, target: Option<&Sequent>, limit: usize) -> AeParents {
    let rules = ["E_left", "E_right", "A_left", "A_right"];
    let mut parent: AeParents = HashMap::from([(from.clone(), None)]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(s) = queue.pop_front() {
        if Some(&s) == target || parent.len() > limit {
            break;
        }
        for rule in rules {
            let schema = calculus::lookup(rule).expect("structural rules exist");
            let mut next = Vec::new();
            for sub in calculus::match_rule(schema, &s) {
                if let Ok((p, _)) = calculus::instantiate(schema, &sub) {
                    next.push((p[0].clone(), Direction::Forward));
                }
            }
            if schema.invertible {
                if let Some(sub) = calculus::match_premise(schema, 0, &s) {
                    if let Ok((_, c)) = calculus::instantiate(schema, &sub) {
                        next.push((c, Direction::Backward));
                    }
                }
            }
            for (p, dir) in next {
                if !parent.contains_key(&p) {
                    parent.insert(p.clone(), Some((s.clone(), rule, dir)));
                    queue.push_back(p);
                }
            }
        }
    }
    parent
}

/// Derivation of the root of `parent` with the single hypothesis `to`.
fn bridge_to(parent: &AeParents, to: &Sequent) -> Option<Derivation> {
    parent.get(to)?;
    let mut d = Derivation::hyp(to.clone());
    let mut cur = to.clone();
    while let Some(Some((below, rule, dir))) = parent.get(&cur) {
        d = Derivation::node(rule, *dir, below.clone(), vec![d]);
        cur = below.clone();
    }
    Some(d)
}

/// Derivation of `from` with the single hypothesis `to`, made of exchange and
/// associativity steps.
fn ae_bridge(from: &Sequent, to: &Sequent) -> Option<Derivation> {
    bridge_to(&ae_closure(from, Some(to), AE_LIMIT), to)
}

/// Every reordering of the top-level chains of `s` with its bridge, `s`
/// itself first.
fn ae_variants(s: &Sequent) -> Vec<(Sequent, Derivation)> {
    let parent = ae_closure(s, None, AE_LIMIT);
    let mut vs: Vec<&Sequent> = parent.keys().collect();
    vs.sort();
    let mut out = vec![(s.clone(), Derivation::hyp(s.clone()))];
    out.extend(
        vs.into_iter()
            .filter(|v| *v != s)
            .filter_map(|v| Some((v.clone(), bridge_to(&parent, v)?))),
    );
    out
}

const AE_LIMIT: usize = 2_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent, Formula};
    use crate::translate::{axiom_sequent, translate_sequent, AxiomName};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn cd1() -> Sequent {
        axiom_sequent(AxiomName::CD1, &[f("p"), f("q"), f("r")]).unwrap()
    }

    #[test]
    fn proves_translated_top() {
        let goal = translate_sequent(&f("T"), &f("T"));
        let out = backward_search(&goal, &SearchConfig::with_depth(12));
        let SearchOutcome::Proved(d, _) = out else {
            panic!("{out:?}")
        };
        assert!(kernel::check(&d, false).is_ok());
        assert!(kernel::is_cut_free(&d));
    }

    #[test]
    fn proves_commutation_within_twenty() {
        let goal = axiom_sequent(AxiomName::CC1, &[f("p"), f("q")]).unwrap();
        let SearchOutcome::Proved(d, _) = backward_search(&goal, &SearchConfig::with_depth(20)) else {
            panic!()
        };
        assert!(kernel::check(&d, false).is_ok());
        assert!(d.height() <= 20);
    }

    #[test]
    fn both_loop_keys_prove_and_agree_on_failure() {
        for key in [LoopKey::Exact, LoopKey::ModuloAE] {
            let cfg = SearchConfig {
                loop_key: key,
                ..SearchConfig::with_depth(30)
            };
            let goal = axiom_sequent(AxiomName::CA1, &[f("p"), f("q"), f("r")]).unwrap();
            let SearchOutcome::Proved(d, _) = backward_search(&goal, &cfg) else {
                panic!("{key:?}")
            };
            assert!(kernel::check(&d, false).is_ok());
            assert!(!backward_search(&translate_sequent(&f("p"), &f("q")), &cfg).is_proved());
        }
    }

    #[test]
    fn search_is_deterministic() {
        let goal = axiom_sequent(AxiomName::DAb1, &[f("p"), f("q")]).unwrap();
        let a = backward_search(&goal, &SearchConfig::default());
        let b = backward_search(&goal, &SearchConfig::default());
        match (a, b) {
            (SearchOutcome::Proved(x, s), SearchOutcome::Proved(y, t)) => {
                assert_eq!(x, y);
                assert_eq!(s, t);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn distributivity_is_exhausted() {
        let out = backward_search(&cd1(), &SearchConfig::with_depth(20));
        assert!(matches!(out, SearchOutcome::Exhausted(..)), "{out:?}");
    }

    #[test]
    fn distributivity_report_isolates_each_disjunct() {
        let report = deadlock_report(&cd1(), &SearchConfig::with_depth(20));
        let lines: Vec<String> = report.iter().map(|d| d.sequent.to_string()).collect();
        for b in ["q", "r"] {
            let want = format!("o p |- wdia fbox wdia p capop wdia fbox wdia {b}");
            assert!(lines.contains(&want), "{want}");
        }
        assert!(report.iter().all(|d| d.refuted));
        assert!(report.iter().any(|d| d.family == Family::Weakening));
    }

    #[test]
    fn proved_goals_have_empty_reports() {
        let goal = axiom_sequent(AxiomName::HAndE1, &[f("p"), f("q")]).unwrap();
        assert!(deadlock_report(&goal, &SearchConfig::default()).is_empty());
    }

    #[test]
    fn contraction_cap_shrinks_the_frontier() {
        let count = |cap| {
            let cfg = SearchConfig {
                contraction_cap: cap,
                ..SearchConfig::with_depth(20)
            };
            match backward_search(&cd1(), &cfg) {
                SearchOutcome::Exhausted(d, _) => d.len(),
                other => panic!("{other:?}"),
            }
        };
        assert!(count(0) < count(2));
    }

    #[test]
    fn analytic_cut_is_opt_in() {
        let goal = parse_sequent("wbox p |- o p").unwrap();
        let cfg = SearchConfig {
            allow_cut: true,
            ..SearchConfig::with_depth(4)
        };
        let SearchOutcome::Proved(d, _) = backward_search(&goal, &cfg) else {
            panic!()
        };
        assert!(kernel::check(&d, false).is_ok());
    }

    #[test]
    fn node_budget_gives_resource_out() {
        let cfg = SearchConfig {
            max_nodes: 50,
            ..SearchConfig::with_depth(20)
        };
        assert!(matches!(backward_search(&cd1(), &cfg), SearchOutcome::ResourceOut(_)));
    }

    #[test]
    fn ae_keys_merge_with_a_bridge() {
        let a = parse_sequent("wbox p ; (wbox q ; wbox r) |- o s").unwrap();
        let b = parse_sequent("(wbox r ; wbox p) ; wbox q |- o s").unwrap();
        let d = ae_bridge(&a, &b).unwrap();
        assert_eq!(d.hypotheses(), vec![&b]);
        assert!(kernel::check(&d, true).is_ok());
    }
}
