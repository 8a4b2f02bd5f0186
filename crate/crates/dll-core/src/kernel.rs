//! Derivations, the local proof checker, the display engine and the
//! proof-file format.

use std::fmt;

use thiserror::Error;

use crate::calculus::{self, Binding, RuleSchema, Substitution};
use crate::error::{InstantiateError, PathError, ProofFileError};
use crate::syntax::{self, parse_sequent, Path, Sequent, Side, Sort, Structure};

/// Rule name used for unproved leaves of partial derivations.
pub const HYP: &str = "HYP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    /// Conclusion is an instance of the schema's premise; only for invertible rules.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: &'static str,
    pub premises: Vec<Derivation>,
    pub direction: Direction,
}

impl Derivation {
    pub fn hyp(s: Sequent) -> Derivation {
        Derivation {
            conclusion: s,
            rule: HYP,
            premises: Vec::new(),
            direction: Direction::Forward,
        }
    }

    pub fn node(
        rule: &'static str,
        direction: Direction,
        conclusion: Sequent,
        premises: Vec<Derivation>,
    ) -> Derivation {
        Derivation {
            conclusion,
            rule,
            premises,
            direction,
        }
    }

    pub fn is_hyp(&self) -> bool {
        self.rule == HYP
    }

    /// Rule label as written in proof files.
    pub fn label(&self) -> String {
        match self.direction {
            Direction::Forward => self.rule.to_string(),
            Direction::Backward => format!("{}~", self.rule),
        }
    }

    /// Number of inferences (hypotheses excluded).
    pub fn size(&self) -> usize {
        usize::from(!self.is_hyp()) + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Length of the longest branch, counted in inferences.
    pub fn height(&self) -> usize {
        if self.is_hyp() {
            return 0;
        }
        1 + self.premises.iter().map(|p| p.height()).max().unwrap_or(0)
    }

    /// Node at a tree path (premise indices from the root).
    pub fn at(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.at(rest),
        }
    }

    /// Replaces the node at `path`.
    pub fn replace_at(&self, path: &[usize], new: Derivation) -> Option<Derivation> {
        match path.split_first() {
            None => Some(new),
            Some((&i, rest)) => {
                let mut out = self.clone();
                let child = out.premises.get(i)?.replace_at(rest, new)?;
                out.premises[i] = child;
                Some(out)
            }
        }
    }

    /// Hypothesis leaves, left to right.
    pub fn hypotheses(&self) -> Vec<&Sequent> {
        if self.is_hyp() {
            return vec![&self.conclusion];
        }
        self.premises.iter().flat_map(|p| p.hypotheses()).collect()
    }

    /// Replaces every hypothesis whose sequent `f` can close.
    pub fn plug(&self, f: &mut dyn FnMut(&Sequent) -> Option<Derivation>) -> Derivation {
        if self.is_hyp() {
            return f(&self.conclusion).unwrap_or_else(|| self.clone());
        }
        let mut out = self.clone();
        out.premises = self.premises.iter().map(|p| p.plug(f)).collect();
        out
    }

    /// Every node in pre-order with its tree path.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &Derivation)> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a Derivation, here: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Derivation)>) {
            out.push((here.clone(), d));
            for (i, p) in d.premises.iter().enumerate() {
                here.push(i);
                go(p, here, out);
                here.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

// ---------------------------------------------------------------------------
// Checking

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: String,
    pub message: String,
    pub expected: Vec<Sequent>,
    pub found: Vec<Sequent>,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at node [{}] ({}): {}", path.join("."), self.rule, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "\n  expected premises:")?;
            for s in &self.expected {
                write!(f, "\n    {s}")?;
            }
        }
        if !self.found.is_empty() {
            write!(f, "\n  found premises:")?;
            for s in &self.found {
                write!(f, "\n    {s}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckReport {
    Ok,
    Failed(CheckFailure),
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckReport::Ok)
    }
}

/// Patterns playing the premise and conclusion roles for a node read in
/// `dir`: a backward node swaps the schema's single premise and conclusion.
fn roles(schema: &RuleSchema, dir: Direction) -> (Vec<&calculus::SeqPat>, &calculus::SeqPat) {
    match dir {
        Direction::Forward => (schema.premises.iter().collect(), &schema.conclusion),
        Direction::Backward => (vec![&schema.conclusion], &schema.premises[0]),
    }
}

/// Checks one inference: `premises` over `conclusion` by `rule` read in `dir`.
/// Returns the joint substitution on success.
pub fn check_step(
    rule: &str,
    dir: Direction,
    premises: &[&Sequent],
    conclusion: &Sequent,
) -> Result<Substitution, (String, Vec<Sequent>)> {
    let schema = calculus::lookup(rule).ok_or_else(|| (format!("unknown rule {rule}"), vec![]))?;
    if dir == Direction::Backward && !schema.invertible {
        return Err((format!("{rule} is not invertible"), vec![]));
    }
    if let Err(e) = conclusion.check_sort() {
        return Err((format!("ill-sorted conclusion: {e}"), vec![]));
    }
    let (prem_pats, concl_pat) = roles(schema, dir);
    let mut sub = Substitution::empty(schema);
    if !calculus::match_seq_into(schema, concl_pat, conclusion, &mut sub) {
        return Err(("conclusion does not match the rule".into(), vec![]));
    }
    // Expected premises where determined by the conclusion alone.
    let expected = |sub: &Substitution| -> Vec<Sequent> {
        prem_pats
            .iter()
            .filter_map(|p| calculus::instantiate_seq(schema, p, sub).ok())
            .collect()
    };
    if premises.len() != prem_pats.len() {
        return Err((
            format!("expected {} premises, found {}", prem_pats.len(), premises.len()),
            expected(&sub),
        ));
    }
    let before = sub.clone();
    for (p, s) in prem_pats.iter().zip(premises) {
        if !calculus::match_seq_into(schema, p, s, &mut sub) {
            let mut probe = before.clone();
            // Complete premise-only variables from whatever premises do match.
            for (p2, s2) in prem_pats.iter().zip(premises) {
                let mut trial = probe.clone();
                if calculus::match_seq_into(schema, p2, s2, &mut trial) {
                    probe = trial;
                }
            }
            return Err(("premises do not match the rule instance".into(), expected(&probe)));
        }
    }
    Ok(sub)
}

pub fn check(d: &Derivation, allow_hypotheses: bool) -> CheckReport {
    fn go(d: &Derivation, allow: bool, path: &mut Vec<usize>) -> Option<CheckFailure> {
        let fail = |message: String, expected: Vec<Sequent>, path: &Vec<usize>| CheckFailure {
            path: path.clone(),
            rule: d.label(),
            message,
            expected,
            found: d.premises.iter().map(|p| p.conclusion.clone()).collect(),
        };
        if d.is_hyp() {
            if !d.premises.is_empty() {
                return Some(fail("hypothesis with premises".into(), vec![], path));
            }
            if let Err(e) = d.conclusion.check_sort() {
                return Some(fail(format!("ill-sorted hypothesis: {e}"), vec![], path));
            }
            return (!allow).then(|| fail("unproved hypothesis".into(), vec![], path));
        }
        let prem: Vec<&Sequent> = d.premises.iter().map(|p| &p.conclusion).collect();
        if let Err((message, expected)) = check_step(d.rule, d.direction, &prem, &d.conclusion) {
            return Some(fail(message, expected, path));
        }
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            if let Some(f) = go(p, allow, path) {
                return Some(f);
            }
            path.pop();
        }
        None
    }
    match go(d, allow_hypotheses, &mut Vec::new()) {
        None => CheckReport::Ok,
        Some(f) => CheckReport::Failed(f),
    }
}

pub fn is_cut_free(d: &Derivation) -> bool {
    d.rule != "Cut_L" && d.rule != "Cut_P" && d.premises.iter().all(is_cut_free)
}

// ---------------------------------------------------------------------------
// Building derivations

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ApplyError {
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error("{rule}: premise {index} `{premise}` does not match")]
    NoMatch {
        rule: &'static str,
        index: usize,
        premise: String,
    },
    #[error("{rule}: expected {expected} premises, got {found}")]
    Arity {
        rule: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
}

/// Applies `rule` below `premises`, computing the conclusion. Variables that
/// the premises do not determine (fresh structures) are taken from `extra`.
pub fn apply(
    rule: &str,
    dir: Direction,
    premises: Vec<Derivation>,
    extra: &[(&str, Binding)],
) -> Result<Derivation, ApplyError> {
    let schema = calculus::lookup(rule).ok_or_else(|| ApplyError::UnknownRule(rule.into()))?;
    if dir == Direction::Backward && !schema.invertible {
        return Err(ApplyError::NotInvertible(schema.name));
    }
    let (prem_pats, concl_pat) = roles(schema, dir);
    if prem_pats.len() != premises.len() {
        return Err(ApplyError::Arity {
            rule: schema.name,
            expected: prem_pats.len(),
            found: premises.len(),
        });
    }
    let mut sub = Substitution::empty(schema);
    for (name, b) in extra {
        sub.set(schema, name, b.clone());
    }
    for (i, (p, d)) in prem_pats.iter().zip(&premises).enumerate() {
        if !calculus::match_seq_into(schema, p, &d.conclusion, &mut sub) {
            return Err(ApplyError::NoMatch {
                rule: schema.name,
                index: i,
                premise: d.conclusion.to_string(),
            });
        }
    }
    let conclusion = calculus::instantiate_seq(schema, concl_pat, &sub)?;
    Ok(Derivation::node(schema.name, dir, conclusion, premises))
}

/// `apply` with a single premise and no extra bindings.
pub fn step(rule: &str, d: Derivation) -> Result<Derivation, ApplyError> {
    apply(rule, Direction::Forward, vec![d], &[])
}

/// Backward reading of an invertible rule below `d`.
pub fn step_back(rule: &str, d: Derivation) -> Result<Derivation, ApplyError> {
    apply(rule, Direction::Backward, vec![d], &[])
}

/// Weakening below `d`, adding `u` as the fresh structure.
pub fn weaken(rule: &str, d: Derivation, u: Structure) -> Result<Derivation, ApplyError> {
    let var = if rule.starts_with("IW") { "Y" } else { "U" };
    apply(rule, Direction::Forward, vec![d], &[(var, Binding::Struct(u))])
}

/// Every rule reading (name, direction) that justifies the inference.
pub fn infer_rules(premises: &[&Sequent], conclusion: &Sequent) -> Vec<(&'static str, Direction)> {
    let mut out = Vec::new();
    for r in calculus::builtin_rules() {
        if check_step(r.name, Direction::Forward, premises, conclusion).is_ok() {
            out.push((r.name, Direction::Forward));
        }
        if r.invertible && check_step(r.name, Direction::Backward, premises, conclusion).is_ok() {
            out.push((r.name, Direction::Backward));
        }
    }
    out
}

/// A backward reading of one rule instance: `premises` over the sequent the
/// expansion was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub rule: &'static str,
    pub direction: Direction,
    pub premises: Vec<Sequent>,
}

/// Every rule instance, in rule-table order, whose conclusion is `s` and
/// whose premises are determined by `s`. Cuts never qualify.
pub fn expansions(s: &Sequent) -> Vec<Expansion> {
    let mut out = Vec::new();
    for schema in calculus::builtin_rules() {
        if schema.is_cut() {
            continue;
        }
        for sub in calculus::match_rule(schema, s) {
            let prem: Result<Vec<_>, _> = schema
                .premises
                .iter()
                .map(|p| calculus::instantiate_seq(schema, p, &sub))
                .collect();
            if let Ok(premises) = prem {
                out.push(Expansion {
                    rule: schema.name,
                    direction: Direction::Forward,
                    premises,
                });
            }
        }
        if schema.invertible {
            if let Some(sub) = calculus::match_premise(schema, 0, s) {
                if let Ok(p) = calculus::instantiate_seq(schema, &schema.conclusion, &sub) {
                    out.push(Expansion {
                        rule: schema.name,
                        direction: Direction::Backward,
                        premises: vec![p],
                    });
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Display engine

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DisplayError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("path {0} ends inside an operational term")]
    NotStructure(String),
    #[error("no display rule peels `{0}` on this side")]
    Blocked(String),
}

/// Derivation made of display rules and exchange whose single hypothesis is
/// `s` and whose conclusion has the structure at `path` as a whole side.
pub fn display_at(s: &Sequent, path: &Path) -> Result<Derivation, DisplayError> {
    match syntax::node_at(s, path)? {
        syntax::NodeRef::Structure(_) => {}
        syntax::NodeRef::Term(_) => return Err(DisplayError::NotStructure(path.to_string())),
    }
    let mut d = Derivation::hyp(s.clone());
    let mut side = path.side;
    let mut steps: Vec<usize> = path.steps.clone();
    let bug = |e: ApplyError| panic!("display step failed on a well-positioned sequent: {e}");
    while let Some((&i, rest)) = steps.split_first() {
        let rest = rest.to_vec();
        let cur = d.conclusion.side(side).clone();
        // A bullet over Pop on the left, a bullet over P on the right, and
        // the mirror cases for `o` have no display rule.
        let blocked = match (side, &cur) {
            (Side::Left, Structure::Bullet(a)) => a.sort() != Sort::P,
            (Side::Right, Structure::Bullet(a)) => a.sort() != Sort::Pop,
            (Side::Left, Structure::Circ(s, _)) => *s != Sort::Pop,
            (Side::Right, Structure::Circ(s, _)) => *s != Sort::P,
            _ => false,
        };
        if blocked {
            return Err(DisplayError::Blocked(cur.to_string()));
        }
        match (side, &cur) {
            (_, Structure::Leaf(_)) => return Err(DisplayError::NotStructure(path.to_string())),
            (Side::Left, Structure::Bullet(_)) => {
                d = step_back("D_PL_left", d).unwrap_or_else(bug);
                steps = rest;
            }
            (Side::Left, Structure::Circ(..)) => {
                d = step("D_PL_right", d).unwrap_or_else(bug);
                steps = rest;
            }
            (Side::Left, Structure::Dot(..)) => {
                if i == 0 {
                    d = step("E_left", d).unwrap_or_else(bug);
                }
                d = step("D_P_left", d).unwrap_or_else(bug);
                steps = rest;
            }
            (Side::Left, Structure::Sup(..)) => {
                // T > S |- U  becomes  S |- T ; U
                d = step_back("D_P_right", d).unwrap_or_else(bug);
                if i == 0 {
                    side = Side::Right;
                    steps = std::iter::once(0).chain(rest).collect();
                } else {
                    steps = rest;
                }
            }
            (Side::Right, Structure::Bullet(_)) => {
                d = step_back("D_PL_right", d).unwrap_or_else(bug);
                steps = rest;
            }
            (Side::Right, Structure::Circ(..)) => {
                d = step("D_PL_left", d).unwrap_or_else(bug);
                steps = rest;
            }
            (Side::Right, Structure::Dot(..)) => {
                if i == 0 {
                    d = step("E_right", d).unwrap_or_else(bug);
                }
                // S |- T ; U  becomes  T > S |- U
                d = step("D_P_right", d).unwrap_or_else(bug);
                steps = rest;
            }
            (Side::Right, Structure::Sup(..)) => {
                // T |- S > U  becomes  S ; T |- U
                d = step_back("D_P_left", d).unwrap_or_else(bug);
                if i == 0 {
                    side = Side::Left;
                    steps = std::iter::once(0).chain(rest).collect();
                } else {
                    steps = rest;
                }
            }
            (_, Structure::I | Structure::SCirc(_)) => unreachable!("path checked by node_at"),
        }
    }
    Ok(d)
}

/// Inverts a unary chain of display and exchange steps: the result has the
/// chain's conclusion as its hypothesis and the chain's hypothesis as its
/// conclusion. `None` if some step is not reversible.
pub fn invert_chain(d: &Derivation) -> Option<Derivation> {
    let mut steps = Vec::new();
    let mut cur = d;
    while !cur.is_hyp() {
        if cur.premises.len() != 1 {
            return None;
        }
        steps.push((cur.rule, cur.direction));
        cur = &cur.premises[0];
    }
    let mut out = Derivation::hyp(d.conclusion.clone());
    for (rule, dir) in steps {
        let schema = calculus::lookup(rule)?;
        out = if matches!(rule, "E_left" | "E_right") {
            step(rule, out).ok()?
        } else if schema.invertible {
            let flipped = match dir {
                Direction::Forward => Direction::Backward,
                Direction::Backward => Direction::Forward,
            };
            apply(rule, flipped, vec![out], &[]).ok()?
        } else {
            return None;
        };
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Proof files

/// Serializes `d` as an indented s-expression.
pub fn write_proof(d: &Derivation) -> String {
    let mut out = String::new();
    fn go(d: &Derivation, indent: usize, out: &mut String) {
        out.push_str(&" ".repeat(indent));
        out.push('(');
        out.push_str(&d.label());
        out.push_str(" \"");
        out.push_str(&d.conclusion.to_string());
        out.push('"');
        for p in &d.premises {
            out.push('\n');
            go(p, indent + 2, out);
        }
        out.push(')');
    }
    go(d, 0, &mut out);
    out.push('\n');
    out
}

/// Reads a proof file. Text after `#` up to the end of a line is a comment.
pub fn parse_proof(text: &str) -> Result<Derivation, ProofFileError> {
    to_derivation(parse_skeleton(text)?)
}

/// A proof-file tree whose labels are not yet resolved to rules. The label
/// `?` marks an inference whose rule is unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub label: String,
    pub conclusion: Sequent,
    pub children: Vec<Skeleton>,
}

/// Reads a proof file without resolving rule names.
pub fn parse_skeleton(text: &str) -> Result<Skeleton, ProofFileError> {
    let mut r = Reader { text, pos: 0 };
    let d = r.node()?;
    r.skip_ws();
    if r.pos != text.len() {
        return Err(r.err("trailing input after proof"));
    }
    Ok(d)
}

fn to_derivation(s: Skeleton) -> Result<Derivation, ProofFileError> {
    let premises = s
        .children
        .into_iter()
        .map(to_derivation)
        .collect::<Result<Vec<_>, _>>()?;
    if s.label == HYP {
        if !premises.is_empty() {
            return Err(ProofFileError::Syntax {
                offset: 0,
                message: "HYP takes no premises".into(),
            });
        }
        return Ok(Derivation::hyp(s.conclusion));
    }
    let (name, direction) = match s.label.strip_suffix('~') {
        Some(n) => (n, Direction::Backward),
        None => (s.label.as_str(), Direction::Forward),
    };
    let schema = calculus::lookup(name).ok_or_else(|| ProofFileError::UnknownRule(s.label.clone()))?;
    Ok(Derivation::node(schema.name, direction, s.conclusion, premises))
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn err(&self, message: &str) -> ProofFileError {
        ProofFileError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' => self.pos += 1,
                b'#' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ProofFileError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn node(&mut self) -> Result<Skeleton, ProofFileError> {
        self.expect(b'(')?;
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || b"_~?".contains(&bytes[self.pos])) {
            self.pos += 1;
        }
        let label = self.text[start..self.pos].to_string();
        if label.is_empty() {
            return Err(self.err("expected a rule name"));
        }
        let conclusion = self.quoted()?;
        let mut children = Vec::new();
        while self.peek() == Some(b'(') {
            children.push(self.node()?);
        }
        self.expect(b')')?;
        Ok(Skeleton {
            label,
            conclusion,
            children,
        })
    }

    fn quoted(&mut self) -> Result<Sequent, ProofFileError> {
        self.expect(b'"')?;
        let start = self.pos;
        let end = self.text[start..]
            .find('"')
            .map(|i| start + i)
            .ok_or_else(|| self.err("unterminated string"))?;
        self.pos = end + 1;
        let body = &self.text[start..end];
        parse_sequent(body).map_err(|source| ProofFileError::Sequent {
            text: body.into(),
            source,
        })
    }
}
