//! Translations of lattice formulas into the multi-type language and
//! generators for derivations of translated sequents.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::calculus::Binding;
use crate::kernel::{apply, step, weaken, Derivation, Direction};
use crate::syntax::{Formula, Sequent, Sort, Structure, Term};

// ---------------------------------------------------------------------------
// Translations

/// Precedent translation: `p` to `fdia wbox p`, binary connectives through
/// `fdia (wbox _ cap wbox _)` and `fdia (wbox _ cup wbox _)`.
pub fn tau_pre(a: &Formula) -> Term {
    match a {
        Formula::Atom(n) => Term::bdia(Term::wbox(Term::Atom(n.clone()))),
        Formula::Top => Term::bdia(Term::wbox(Term::Top)),
        Formula::Bot => Term::bdia(Term::wbox(Term::Bot)),
        Formula::And(x, y) => Term::bdia(Term::cap(Sort::P, Term::wbox(tau_pre(x)), Term::wbox(tau_pre(y)))),
        Formula::Or(x, y) => Term::bdia(Term::cup(Sort::P, Term::wbox(tau_pre(x)), Term::wbox(tau_pre(y)))),
    }
}

/// Succedent translation, the order dual of [`tau_pre`].
pub fn tau_suc(a: &Formula) -> Term {
    match a {
        Formula::Atom(n) => Term::bbox(Term::wdia(Term::Atom(n.clone()))),
        Formula::Top => Term::bbox(Term::wdia(Term::Top)),
        Formula::Bot => Term::bbox(Term::wdia(Term::Bot)),
        Formula::And(x, y) => Term::bbox(Term::cap(Sort::Pop, Term::wdia(tau_suc(x)), Term::wdia(tau_suc(y)))),
        Formula::Or(x, y) => Term::bbox(Term::cup(Sort::Pop, Term::wdia(tau_suc(x)), Term::wdia(tau_suc(y)))),
    }
}

/// Terms of the algebraic language of heterogeneous algebras.
#[derive(Clone, Debug)]
enum Alg {
    Atom(String),
    Top,
    Bot,
    Gamma(Box<Alg>),
    Iota(Box<Alg>),
    ELeft(Box<Alg>),
    ERight(Box<Alg>),
    /// Meet and join of the down-set algebra.
    DCap(Box<Alg>, Box<Alg>),
    DCup(Box<Alg>, Box<Alg>),
    /// Meet and join of the up-set algebra.
    ECap(Box<Alg>, Box<Alg>),
    ECup(Box<Alg>, Box<Alg>),
}

fn alg_left(a: &Formula) -> Alg {
    let g = |x: Alg| Alg::Gamma(Box::new(x));
    let el = |x: Alg| Box::new(Alg::ELeft(Box::new(x)));
    match a {
        Formula::Atom(n) => g(*el(Alg::Atom(n.to_string()))),
        Formula::Top => g(*el(Alg::Top)),
        Formula::Bot => g(*el(Alg::Bot)),
        Formula::And(x, y) => g(Alg::DCap(el(alg_left(x)), el(alg_left(y)))),
        Formula::Or(x, y) => g(Alg::DCup(el(alg_left(x)), el(alg_left(y)))),
    }
}

fn alg_right(a: &Formula) -> Alg {
    let i = |x: Alg| Alg::Iota(Box::new(x));
    let er = |x: Alg| Box::new(Alg::ERight(Box::new(x)));
    match a {
        Formula::Atom(n) => i(*er(Alg::Atom(n.to_string()))),
        Formula::Top => i(*er(Alg::Top)),
        Formula::Bot => i(*er(Alg::Bot)),
        Formula::And(x, y) => i(Alg::ECap(er(alg_right(x)), er(alg_right(y)))),
        Formula::Or(x, y) => i(Alg::ECup(er(alg_right(x)), er(alg_right(y)))),
    }
}

fn alg_to_term(a: &Alg) -> Term {
    match a {
        Alg::Atom(n) => Term::atom(n),
        Alg::Top => Term::Top,
        Alg::Bot => Term::Bot,
        Alg::Gamma(x) => Term::bdia(alg_to_term(x)),
        Alg::Iota(x) => Term::bbox(alg_to_term(x)),
        Alg::ELeft(x) => Term::wbox(alg_to_term(x)),
        Alg::ERight(x) => Term::wdia(alg_to_term(x)),
        Alg::DCap(x, y) => Term::cap(Sort::P, alg_to_term(x), alg_to_term(y)),
        Alg::DCup(x, y) => Term::cup(Sort::P, alg_to_term(x), alg_to_term(y)),
        Alg::ECap(x, y) => Term::cap(Sort::Pop, alg_to_term(x), alg_to_term(y)),
        Alg::ECup(x, y) => Term::cup(Sort::Pop, alg_to_term(x), alg_to_term(y)),
    }
}

/// Left translation into the algebraic language, read through the symbol
/// map gamma to `fdia`, e_l to `wbox`, iota to `fbox`, e_r to `wdia`.
pub fn ell(a: &Formula) -> Term {
    alg_to_term(&alg_left(a))
}

/// Right translation, read through the same symbol map.
pub fn rr(a: &Formula) -> Term {
    alg_to_term(&alg_right(a))
}

/// Inverse of [`tau_pre`] on its image.
pub fn untranslate_pre(t: &Term) -> Option<Formula> {
    let Term::BDia(inner) = t else { return None };
    match &**inner {
        Term::WBox(x) => match &**x {
            Term::Atom(n) => Some(Formula::Atom(n.clone())),
            Term::Top => Some(Formula::Top),
            Term::Bot => Some(Formula::Bot),
            _ => None,
        },
        Term::Cap(Sort::P, x, y) | Term::Cup(Sort::P, x, y) => {
            let (Term::WBox(x), Term::WBox(y)) = (&**x, &**y) else {
                return None;
            };
            let (a, b) = (untranslate_pre(x)?, untranslate_pre(y)?);
            Some(match &**inner {
                Term::Cap(..) => Formula::and(a, b),
                _ => Formula::or(a, b),
            })
        }
        _ => None,
    }
}

/// Inverse of [`tau_suc`] on its image.
pub fn untranslate_suc(t: &Term) -> Option<Formula> {
    let Term::BBox(inner) = t else { return None };
    match &**inner {
        Term::WDia(x) => match &**x {
            Term::Atom(n) => Some(Formula::Atom(n.clone())),
            Term::Top => Some(Formula::Top),
            Term::Bot => Some(Formula::Bot),
            _ => None,
        },
        Term::Cap(Sort::Pop, x, y) | Term::Cup(Sort::Pop, x, y) => {
            let (Term::WDia(x), Term::WDia(y)) = (&**x, &**y) else {
                return None;
            };
            let (a, b) = (untranslate_suc(x)?, untranslate_suc(y)?);
            Some(match &**inner {
                Term::Cap(..) => Formula::and(a, b),
                _ => Formula::or(a, b),
            })
        }
        _ => None,
    }
}

/// The translated sequent `a^tau |- b_tau`.
pub fn translate_sequent(a: &Formula, b: &Formula) -> Sequent {
    Sequent::new(tau_pre(a), tau_suc(b))
}

/// Recovers `(a, b)` from a translated sequent.
pub fn untranslate_sequent(s: &Sequent) -> Option<(Formula, Formula)> {
    Some((
        untranslate_pre(s.left.as_term()?)?,
        untranslate_suc(s.right.as_term()?)?,
    ))
}

// ---------------------------------------------------------------------------
// Identity derivations

fn ok(r: Result<Derivation, crate::kernel::ApplyError>) -> Derivation {
    r.unwrap_or_else(|e| panic!("generator produced an invalid step: {e}"))
}

fn axiom(rule: &str, extra: &[(&str, Binding)]) -> Derivation {
    ok(apply(rule, Direction::Forward, vec![], extra))
}

fn id_atom(name: &Term) -> Derivation {
    axiom("Id", &[("p", Binding::Term(name.clone()))])
}

/// `T |- T` from the two unit rules.
fn top_top() -> Derivation {
    ok(step("Top_left", axiom("Top_right", &[])))
}

/// `F |- F` from the two unit rules.
fn bot_bot() -> Derivation {
    ok(step("Bot_right", axiom("Bot_left", &[])))
}

fn chain(d: Derivation, rules: &[&str]) -> Derivation {
    rules.iter().fold(d, |d, r| ok(step(r, d)))
}

/// Closes an L-sequent `X |- A_tau`-style premise into `fdia .. |- fbox ..`
/// by the common seven-step tail used for the base cases.
const BASE_TAIL: [&str; 6] = [
    "WBox_right",
    "D_PL_left",
    "BDia_left",
    "WDia_right",
    "D_PL_right",
    "BBox_left",
];

/// Cut-free derivation of `tau_pre(a) |- tau_suc(a)`.
pub fn identity_derivation(a: &Formula) -> Derivation {
    match a {
        Formula::Atom(n) => chain(id_atom(&Term::Atom(n.clone())), &BASE_TAIL),
        Formula::Top => chain(top_top(), &BASE_TAIL),
        Formula::Bot => chain(bot_bot(), &BASE_TAIL),
        Formula::And(b, c) => {
            let (bp, cp) = (tau_pre(b), tau_pre(c));
            let left = branch_and(identity_derivation(b), &Term::wbox(cp.clone()), false);
            let right = branch_and(identity_derivation(c), &Term::wbox(bp.clone()), true);
            let joined = ok(apply("Cap_right", Direction::Forward, vec![left, right], &[]));
            chain(joined, &["C_left", "D_PL_right", "BBox_left"])
        }
        Formula::Or(b, c) => {
            let (bs, cs) = (tau_suc(b), tau_suc(c));
            let left = branch_or(identity_derivation(b), &Term::wdia(cs.clone()), false);
            let right = branch_or(identity_derivation(c), &Term::wdia(bs.clone()), true);
            let joined = ok(apply("Cup_left", Direction::Forward, vec![left, right], &[]));
            chain(joined, &["C_right", "D_PL_left", "BDia_left"])
        }
    }
}

/// From `B^tau |- B_tau`: `wbox B^tau`, weaken by `other` (then exchange if
/// `swap`), introduce the cap and close to `o fdia (..) |- wdia B_tau`.
fn branch_and(hyp: Derivation, other: &Term, swap: bool) -> Derivation {
    let d = ok(step("WBox_right", hyp));
    let mut d = ok(weaken("W_left", d, Structure::Leaf(other.clone())));
    if swap {
        d = ok(step("E_left", d));
    }
    chain(d, &["Cap_left", "D_PL_left", "BDia_left", "WDia_right"])
}

/// Order dual of [`branch_and`].
fn branch_or(hyp: Derivation, other: &Term, swap: bool) -> Derivation {
    let d = ok(step("WDia_right", hyp));
    let mut d = ok(weaken("W_right", d, Structure::Leaf(other.clone())));
    if swap {
        d = ok(step("E_right", d));
    }
    chain(d, &["Cup_right", "D_PL_right", "BBox_left", "WBox_right"])
}

/// Cut-free derivation of `t |- t` for any term.
pub fn identity_term(t: &Term) -> Derivation {
    match t {
        Term::Atom(_) => id_atom(t),
        Term::Top => top_top(),
        Term::Bot => bot_bot(),
        Term::BDia(a) => chain(identity_term(a), &["BDia_right", "BDia_left"]),
        Term::BBox(a) => chain(identity_term(a), &["BBox_right", "BBox_left"]),
        Term::WBox(a) => chain(identity_term(a), &["WBox_right", "WBox_left"]),
        Term::WDia(a) => chain(identity_term(a), &["WDia_right", "WDia_left"]),
        Term::Cap(_, a, b) => {
            let d = ok(apply(
                "Cap_right",
                Direction::Forward,
                vec![identity_term(a), identity_term(b)],
                &[],
            ));
            ok(step("Cap_left", d))
        }
        Term::Cup(_, a, b) => {
            let d = ok(apply(
                "Cup_left",
                Direction::Forward,
                vec![identity_term(a), identity_term(b)],
                &[],
            ));
            ok(step("Cup_right", d))
        }
    }
}

/// Closes hypotheses that are identities: `t |- t` for a term `t`, or a
/// translated identity `A^tau |- A_tau`.
pub fn close_identity(s: &Sequent) -> Option<Derivation> {
    if let (Some(l), Some(r)) = (s.left.as_term(), s.right.as_term()) {
        if l == r {
            return Some(identity_term(l));
        }
    }
    let (a, b) = untranslate_sequent(s)?;
    (a == b).then(|| identity_derivation(&a))
}

// ---------------------------------------------------------------------------
// Scripts
//
// A script lists rule labels from the root upwards. A rule with several
// premises is followed by `[s1, s2]`, one script per premise. `id` closes the
// current goal with [`close_identity`].

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("script syntax: {0}")]
    Syntax(String),
    #[error("{rule} does not apply backward to `{goal}`")]
    NoStep { rule: String, goal: String },
    #[error("`{0}` is not an identity")]
    NotIdentity(String),
    #[error("script ends at open goal `{0}`")]
    Open(String),
}

fn script_tokens(script: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for word in script.split_whitespace() {
        let mut rest = word;
        while !rest.is_empty() {
            match rest.find(['[', ']', ',']) {
                Some(0) => {
                    out.push(&rest[..1]);
                    rest = &rest[1..];
                }
                Some(i) => {
                    out.push(&rest[..i]);
                    rest = &rest[i..];
                }
                None => {
                    out.push(rest);
                    rest = "";
                }
            }
        }
    }
    out
}

/// Builds a derivation of `goal` by replaying `script` backward.
pub fn run_script(script: &str, goal: &Sequent) -> Result<Derivation, ScriptError> {
    let toks = script_tokens(script);
    let mut pos = 0;
    let d = run_tokens(&toks, &mut pos, goal)?;
    if pos != toks.len() {
        return Err(ScriptError::Syntax(format!("unexpected `{}`", toks[pos])));
    }
    Ok(d)
}

fn run_tokens(toks: &[&str], pos: &mut usize, goal: &Sequent) -> Result<Derivation, ScriptError> {
    let Some(&tok) = toks.get(*pos) else {
        return Err(ScriptError::Open(goal.to_string()));
    };
    *pos += 1;
    if tok == "id" {
        return close_identity(goal).ok_or_else(|| ScriptError::NotIdentity(goal.to_string()));
    }
    if matches!(tok, "[" | "]" | ",") {
        return Err(ScriptError::Syntax(format!("unexpected `{tok}`")));
    }
    let (name, dir) = match tok.strip_suffix('~') {
        Some(n) => (n, Direction::Backward),
        None => (tok, Direction::Forward),
    };
    let e = crate::kernel::expansions(goal)
        .into_iter()
        .find(|e| e.rule == name && e.direction == dir)
        .ok_or_else(|| ScriptError::NoStep {
            rule: tok.to_string(),
            goal: goal.to_string(),
        })?;
    let premises = match e.premises.len() {
        0 => vec![],
        1 => vec![run_tokens(toks, pos, &e.premises[0])?],
        n => {
            let mut out = Vec::with_capacity(n);
            for (i, p) in e.premises.iter().enumerate() {
                let want = if i == 0 { "[" } else { "," };
                if toks.get(*pos) != Some(&want) {
                    return Err(ScriptError::Syntax(format!("{tok} needs {n} branches")));
                }
                *pos += 1;
                out.push(run_tokens(toks, pos, p)?);
            }
            if toks.get(*pos) != Some(&"]") {
                return Err(ScriptError::Syntax(format!("{tok} needs {n} branches")));
            }
            *pos += 1;
            out
        }
    };
    Ok(Derivation::node(e.rule, dir, goal.clone(), premises))
}

/// The script replaying `d`. Proper subtrees equal to the generated identity
/// derivation of their conclusion are abbreviated to `id`.
pub fn script_of(d: &Derivation) -> String {
    fn go(d: &Derivation, root: bool, out: &mut Vec<String>) {
        if !root && close_identity(&d.conclusion).as_ref() == Some(d) {
            out.push("id".into());
            return;
        }
        out.push(d.label());
        match d.premises.len() {
            0 => {}
            1 => go(&d.premises[0], false, out),
            _ => {
                for (i, p) in d.premises.iter().enumerate() {
                    out.push(if i == 0 { "[".into() } else { ",".into() });
                    go(p, false, out);
                }
                out.push("]".into());
            }
        }
    }
    let mut out = Vec::new();
    go(d, true, &mut out);
    out.join(" ").replace("[ ", "[").replace(" ,", ",").replace(" ]", "]")
}

// ---------------------------------------------------------------------------
// Axioms

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomName {
    CC1,
    CC2,
    DC1,
    DC2,
    CA1,
    CA2,
    DA1,
    DA2,
    CI1,
    CI2,
    DI1,
    DI2,
    CAb1,
    CAb2,
    DAb1,
    DAb2,
    HId,
    HBotA,
    HATop,
    HOrI1,
    HOrI2,
    HAndE1,
    HAndE2,
    CD1,
}

impl AxiomName {
    pub const ALL: [AxiomName; 24] = [
        AxiomName::CC1,
        AxiomName::CC2,
        AxiomName::DC1,
        AxiomName::DC2,
        AxiomName::CA1,
        AxiomName::CA2,
        AxiomName::DA1,
        AxiomName::DA2,
        AxiomName::CI1,
        AxiomName::CI2,
        AxiomName::DI1,
        AxiomName::DI2,
        AxiomName::CAb1,
        AxiomName::CAb2,
        AxiomName::DAb1,
        AxiomName::DAb2,
        AxiomName::HId,
        AxiomName::HBotA,
        AxiomName::HATop,
        AxiomName::HOrI1,
        AxiomName::HOrI2,
        AxiomName::HAndE1,
        AxiomName::HAndE2,
        AxiomName::CD1,
    ];

    pub fn name(self) -> &'static str {
        use AxiomName::*;
        match self {
            CC1 => "cC1",
            CC2 => "cC2",
            DC1 => "dC1",
            DC2 => "dC2",
            CA1 => "cA1",
            CA2 => "cA2",
            DA1 => "dA1",
            DA2 => "dA2",
            CI1 => "cI1",
            CI2 => "cI2",
            DI1 => "dI1",
            DI2 => "dI2",
            CAb1 => "cAb1",
            CAb2 => "cAb2",
            DAb1 => "dAb1",
            DAb2 => "dAb2",
            HId => "H_id",
            HBotA => "H_botA",
            HATop => "H_Atop",
            HOrI1 => "H_orI1",
            HOrI2 => "H_orI2",
            HAndE1 => "H_andE1",
            HAndE2 => "H_andE2",
            CD1 => "cD1",
        }
    }

    pub fn arity(self) -> usize {
        use AxiomName::*;
        match self {
            CA1 | CA2 | DA1 | DA2 | CD1 => 3,
            CI1 | CI2 | DI1 | DI2 | HId | HBotA | HATop => 1,
            _ => 2,
        }
    }

    /// The two sides of the axiom as formulas.
    pub fn formulas(self, params: &[Formula]) -> Result<(Formula, Formula), AxiomError> {
        use AxiomName::*;
        if params.len() != self.arity() {
            return Err(AxiomError::Arity {
                axiom: self.name(),
                expected: self.arity(),
                found: params.len(),
            });
        }
        let p = |i: usize| params[i].clone();
        let and = Formula::and;
        let or = Formula::or;
        Ok(match self {
            CC1 => (and(p(0), p(1)), and(p(1), p(0))),
            CC2 => (and(p(1), p(0)), and(p(0), p(1))),
            DC1 => (or(p(0), p(1)), or(p(1), p(0))),
            DC2 => (or(p(1), p(0)), or(p(0), p(1))),
            CA1 => (and(p(0), and(p(1), p(2))), and(and(p(0), p(1)), p(2))),
            CA2 => (and(and(p(0), p(1)), p(2)), and(p(0), and(p(1), p(2)))),
            DA1 => (or(p(0), or(p(1), p(2))), or(or(p(0), p(1)), p(2))),
            DA2 => (or(or(p(0), p(1)), p(2)), or(p(0), or(p(1), p(2)))),
            CI1 => (and(p(0), Formula::Top), p(0)),
            CI2 => (p(0), and(p(0), Formula::Top)),
            DI1 => (or(p(0), Formula::Bot), p(0)),
            DI2 => (p(0), or(p(0), Formula::Bot)),
            CAb1 => (and(p(0), or(p(0), p(1))), p(0)),
            CAb2 => (p(0), and(p(0), or(p(0), p(1)))),
            DAb1 => (or(p(0), and(p(0), p(1))), p(0)),
            DAb2 => (p(0), or(p(0), and(p(0), p(1)))),
            HId => (p(0), p(0)),
            HBotA => (Formula::Bot, p(0)),
            HATop => (p(0), Formula::Top),
            HOrI1 => (p(0), or(p(0), p(1))),
            HOrI2 => (p(1), or(p(0), p(1))),
            HAndE1 => (and(p(0), p(1)), p(0)),
            HAndE2 => (and(p(0), p(1)), p(1)),
            CD1 => (and(p(0), or(p(1), p(2))), or(and(p(0), p(1)), and(p(0), p(2)))),
        })
    }

    /// The order dual under the duality transform, if it is another axiom.
    pub fn dual(self) -> Option<AxiomName> {
        use AxiomName::*;
        Some(match self {
            CC1 => DC1,
            CC2 => DC2,
            CA1 => DA2,
            CA2 => DA1,
            CI1 => DI2,
            CI2 => DI1,
            CAb1 => DAb2,
            CAb2 => DAb1,
            DC1 => CC1,
            DC2 => CC2,
            DA1 => CA2,
            DA2 => CA1,
            DI1 => CI2,
            DI2 => CI1,
            DAb1 => CAb2,
            DAb2 => CAb1,
            _ => return None,
        })
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomName {
    type Err = AxiomError;
    fn from_str(s: &str) -> Result<AxiomName, AxiomError> {
        AxiomName::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| AxiomError::Unknown(s.to_string()))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AxiomError {
    #[error("unknown axiom `{0}`")]
    Unknown(String),
    #[error("{axiom} takes {expected} formula parameters, got {found}")]
    Arity {
        axiom: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0} is not derivable and has no generator")]
    Unsupported(&'static str),
}

/// The translated sequent of an axiom instance.
pub fn axiom_sequent(n: AxiomName, params: &[Formula]) -> Result<Sequent, AxiomError> {
    let (a, b) = n.formulas(params)?;
    Ok(translate_sequent(&a, &b))
}

// ---------------------------------------------------------------------------
// Axiom derivations

// Scripts of the printed trees. The identity and absorption families share
// their scripts when A is a constant or an atom; the second absorption and
// identity laws differ only in the right conjunct.
const S_CC1: &str = "BBox_left D_PL_right C_left Cap_right [WDia_right BDia_left D_PL_left Cap_left E_left W_left WBox_right id, WDia_right BDia_left D_PL_left Cap_left W_left WBox_right id]";
const S_CA1: &str = "BBox_left D_PL_right C_left Cap_right [WDia_right BBox_left D_PL_right C_left Cap_right [WDia_right BDia_left D_PL_left Cap_left W_left WBox_right id, WDia_right BDia_left D_PL_left Cap_left E_left W_left WBox_right BDia_left D_PL_left Cap_left W_left WBox_right id], WDia_right BDia_left D_PL_left Cap_left E_left W_left WBox_right BDia_left D_PL_left Cap_left E_left W_left WBox_right id]";
const S_CA2: &str = "BBox_left D_PL_right C_left Cap_right [WDia_right BDia_left D_PL_left Cap_left W_left WBox_right BDia_left D_PL_left Cap_left W_left WBox_right id, WDia_right BBox_left D_PL_right C_left Cap_right [WDia_right BDia_left D_PL_left Cap_left W_left WBox_right BDia_left D_PL_left Cap_left E_left W_left WBox_right id, WDia_right BDia_left D_PL_left Cap_left E_left W_left WBox_right id]]";
const S_C1_BASE: &str =
    "BDia_left D_PL_left Cap_left W_left WBox_right BDia_left D_PL_left WBox_right BBox_left D_PL_right WDia_right id";
const S_C1_AND: &str = "BBox_left D_PL_right C_left Cap_right [D_PL_right~ BDia_left D_PL_left Cap_left W_left WBox_right BDia_left D_PL_left Cap_left W_left WBox_right D_PL_right WDia_right id, D_PL_right~ BDia_left D_PL_left Cap_left W_left WBox_right BDia_left D_PL_left Cap_left E_left W_left WBox_right D_PL_right WDia_right id]";
const S_C1_OR: &str = "BDia_left D_PL_left Cap_left W_left WBox_right BDia_left D_PL_left C_right Cup_left [D_PL_left~ BBox_left D_PL_right Cup_right W_right WDia_right D_PL_left WBox_right id, D_PL_left~ BBox_left D_PL_right Cup_right E_right W_right WDia_right D_PL_left WBox_right id]";
const S_CI2_TOP: &str = "BDia_left D_PL_left WBox_right BBox_left D_PL_right C_left Cap_right [WDia_right BBox_left D_PL_right WDia_right id, WDia_right BBox_left D_PL_right WDia_right id]";
const S_CI2_BASE: &str = "BDia_left D_PL_left WBox_right BBox_left D_PL_right C_left Cap_right [WDia_right BBox_left D_PL_right WDia_right id, WDia_right BBox_left D_PL_right WDia_right IW Top_right]";
const S_CI2_AND: &str = "BBox_left D_PL_right C_left Cap_right [WDia_right BBox_left D_PL_right C_left Cap_right [D_PL_right~ BDia_left D_PL_left Cap_left W_left WBox_right D_PL_right WDia_right id, D_PL_right~ BDia_left D_PL_left Cap_left E_left W_left WBox_right D_PL_right WDia_right id], WDia_right BBox_left D_PL_right WDia_right IW Top_right]";
const S_CI2_OR: &str = "BBox_left D_PL_right C_left Cap_right [D_PL_right~ BDia_left D_PL_left C_right Cup_left [WBox_right D_PL_right WDia_right BBox_left D_PL_right Cup_right W_right WDia_right id, WBox_right D_PL_right WDia_right BBox_left D_PL_right Cup_right E_right W_right WDia_right id], WDia_right BBox_left D_PL_right WDia_right IW Top_right]";
const S_CAB2_BASE: &str = "BBox_left D_PL_right C_left Cap_right [WDia_right id, WDia_right BBox_left D_PL_right Cup_right W_right WDia_right id]";
const S_CAB2_AND: &str = "BBox_left D_PL_right C_left Cap_right [WDia_right BBox_left D_PL_right C_left Cap_right [D_PL_right~ BDia_left D_PL_left Cap_left W_left WBox_right D_PL_right WDia_right id, D_PL_right~ BDia_left D_PL_left Cap_left E_left W_left WBox_right D_PL_right WDia_right id], WDia_right BBox_left D_PL_right Cup_right W_right WDia_right BBox_left D_PL_right C_left Cap_right [D_PL_right~ BDia_left D_PL_left Cap_left W_left WBox_right D_PL_right WDia_right id, D_PL_right~ BDia_left D_PL_left Cap_left E_left W_left WBox_right D_PL_right WDia_right id]]";
const S_CAB2_OR: &str = "BBox_left D_PL_right C_left Cap_right [D_PL_right~ BDia_left D_PL_left C_right Cup_left [WBox_right D_PL_right WDia_right BBox_left D_PL_right Cup_right W_right WDia_right id, WBox_right D_PL_right WDia_right BBox_left D_PL_right Cup_right E_right W_right WDia_right id], WDia_right BBox_left D_PL_right Cup_right W_right D_PL_right~ BDia_left D_PL_left C_right Cup_left [WBox_right D_PL_right WDia_right BBox_left D_PL_right Cup_right W_right WDia_right id, WBox_right D_PL_right WDia_right BBox_left D_PL_right Cup_right E_right W_right WDia_right id]]";
const S_H_BOT_A: &str = "BDia_left D_PL_left WBox_right IW_dual Bot_left";
const S_H_A_TOP: &str = "BBox_left D_PL_right WDia_right IW Top_right";
const S_H_OR_I1: &str = "BBox_left D_PL_right Cup_right W_right WDia_right id";
const S_H_OR_I2: &str = "BBox_left D_PL_right Cup_right E_right W_right WDia_right id";
const S_H_AND_E1: &str = "BDia_left D_PL_left Cap_left W_left WBox_right id";
const S_H_AND_E2: &str = "BDia_left D_PL_left Cap_left E_left W_left WBox_right id";

fn script_for(n: AxiomName, a: &Formula) -> Option<&'static str> {
    use AxiomName::*;
    let case = |base: &'static str, and: &'static str, or: &'static str| match a {
        Formula::And(..) => and,
        Formula::Or(..) => or,
        _ => base,
    };
    Some(match n {
        // cC2 is cC1 with its parameters swapped.
        CC1 | CC2 => S_CC1,
        CA1 => S_CA1,
        CA2 => S_CA2,
        CI1 | CAb1 => case(S_C1_BASE, S_C1_AND, S_C1_OR),
        CI2 if *a == Formula::Top => S_CI2_TOP,
        CI2 => case(S_CI2_BASE, S_CI2_AND, S_CI2_OR),
        CAb2 => case(S_CAB2_BASE, S_CAB2_AND, S_CAB2_OR),
        HBotA => S_H_BOT_A,
        HATop => S_H_A_TOP,
        HOrI1 => S_H_OR_I1,
        HOrI2 => S_H_OR_I2,
        HAndE1 => S_H_AND_E1,
        HAndE2 => S_H_AND_E2,
        _ => return None,
    })
}

/// Cut-free derivation of the translated axiom instance. The c-laws replay
/// the printed trees, the d-laws are order duals of c-law derivations.
pub fn axiom_derivation(n: AxiomName, params: &[Formula]) -> Result<Derivation, AxiomError> {
    use AxiomName::*;
    let goal = axiom_sequent(n, params)?;
    let d = match n {
        CD1 => return Err(AxiomError::Unsupported(n.name())),
        HId => identity_derivation(&params[0]),
        DC1 | DC2 | DA1 | DA2 | DI1 | DI2 | DAb1 | DAb2 => {
            let c = n.dual().expect("d-laws have duals");
            let dual_params: Vec<Formula> = params.iter().map(dual_formula).collect();
            permutations(dual_params.len())
                .into_iter()
                .map(|perm| perm.iter().map(|&i| dual_params[i].clone()).collect::<Vec<_>>())
                .find(|ps| axiom_sequent(c, ps).is_ok_and(|s| dual_sequent(&s) == goal))
                .map(|ps| dual_derivation(&axiom_derivation(c, &ps).expect("c-law derivation")))
                .expect("every d-law is the dual of a c-law instance")
        }
        _ => run(script_for(n, &params[0]).expect("script"), &goal),
    };
    debug_assert_eq!(d.conclusion, goal);
    Ok(d)
}

fn run(script: &str, goal: &Sequent) -> Derivation {
    run_script(script, goal).unwrap_or_else(|e| panic!("axiom script failed: {e}"))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Order duality

/// Swaps conjunction with disjunction and top with bottom.
pub fn dual_formula(a: &Formula) -> Formula {
    match a {
        Formula::Atom(_) => a.clone(),
        Formula::Top => Formula::Bot,
        Formula::Bot => Formula::Top,
        Formula::And(x, y) => Formula::or(dual_formula(x), dual_formula(y)),
        Formula::Or(x, y) => Formula::and(dual_formula(x), dual_formula(y)),
    }
}

/// Swaps `fdia`/`fbox`, `wbox`/`wdia`, the P connectives with the dual Pop
/// connectives and the constants. `dual_term(tau_pre(a)) == tau_suc(dual_formula(a))`.
pub fn dual_term(t: &Term) -> Term {
    match t {
        Term::Atom(_) => t.clone(),
        Term::Top => Term::Bot,
        Term::Bot => Term::Top,
        Term::BDia(a) => Term::bbox(dual_term(a)),
        Term::BBox(a) => Term::bdia(dual_term(a)),
        Term::WBox(a) => Term::wdia(dual_term(a)),
        Term::WDia(a) => Term::wbox(dual_term(a)),
        Term::Cap(s, a, b) => Term::cup(s.dual(), dual_term(a), dual_term(b)),
        Term::Cup(s, a, b) => Term::cap(s.dual(), dual_term(a), dual_term(b)),
    }
}

pub fn dual_structure(s: &Structure) -> Structure {
    match s {
        Structure::Leaf(t) => Structure::Leaf(dual_term(t)),
        Structure::I => Structure::I,
        Structure::SCirc(k) => Structure::SCirc(k.dual()),
        Structure::Bullet(a) => Structure::bullet(dual_structure(a)),
        Structure::Circ(k, a) => Structure::circ(k.dual(), dual_structure(a)),
        Structure::Dot(k, a, b) => Structure::dot(k.dual(), dual_structure(a), dual_structure(b)),
        Structure::Sup(k, a, b) => Structure::sup(k.dual(), dual_structure(a), dual_structure(b)),
    }
}

/// `X |- Y` becomes `dual(Y) |- dual(X)`.
pub fn dual_sequent(s: &Sequent) -> Sequent {
    Sequent::new(dual_structure(&s.right), dual_structure(&s.left))
}

/// The rule whose instances are the duals of `rule`'s instances.
pub fn dual_rule(rule: &'static str) -> &'static str {
    const PAIRS: [(&str, &str); 16] = [
        ("D_PL_left", "D_PL_right"),
        ("D_P_left", "D_P_right"),
        ("SCirc_left", "SCirc_right"),
        ("E_left", "E_right"),
        ("A_left", "A_right"),
        ("W_left", "W_right"),
        ("C_left", "C_right"),
        ("Cap_left", "Cup_right"),
        ("Cap_right", "Cup_left"),
        ("Top_left", "Bot_right"),
        ("Top_right", "Bot_left"),
        ("IW", "IW_dual"),
        ("WDia_left", "WBox_left"),
        ("WDia_right", "WBox_right"),
        ("BBox_left", "BDia_left"),
        ("BBox_right", "BDia_right"),
    ];
    for (a, b) in PAIRS {
        if rule == a {
            return b;
        }
        if rule == b {
            return a;
        }
    }
    rule
}

/// Dualizes every sequent and rule of `d`. Binary rules swap their premises
/// when the dual rule lists them in the opposite order.
pub fn dual_derivation(d: &Derivation) -> Derivation {
    let rule = if d.is_hyp() { d.rule } else { dual_rule(d.rule) };
    let mut premises: Vec<Derivation> = d.premises.iter().map(dual_derivation).collect();
    let conclusion = dual_sequent(&d.conclusion);
    if premises.len() == 2 && !d.is_hyp() {
        let ps: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
        if crate::kernel::check_step(rule, d.direction, &ps, &conclusion).is_err() {
            premises.swap(0, 1);
        }
    }
    Derivation {
        conclusion,
        rule,
        premises,
        direction: d.direction,
    }
}
