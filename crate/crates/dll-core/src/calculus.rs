//! The rule set as data. Each rule is a schema over sorted metavariables;
//! matching is purely syntactic.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{InstantiateError, SortError};
use crate::syntax::{Sequent, Sort, Structure, Term};

/// What a metavariable ranges over. `*Uniform` kinds range over P or Pop,
/// with one sort shared by every uniform variable of a rule instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetaKind {
    StructL,
    StructP,
    StructPop,
    StructUniform,
    TermL,
    TermP,
    TermPop,
    TermUniform,
    AtomVar,
}

impl MetaKind {
    pub fn is_term(self) -> bool {
        matches!(
            self,
            MetaKind::TermL | MetaKind::TermP | MetaKind::TermPop | MetaKind::TermUniform | MetaKind::AtomVar
        )
    }

    pub fn is_uniform(self) -> bool {
        matches!(self, MetaKind::StructUniform | MetaKind::TermUniform)
    }

    pub fn fixed_sort(self) -> Option<Sort> {
        match self {
            MetaKind::StructL | MetaKind::TermL | MetaKind::AtomVar => Some(Sort::L),
            MetaKind::StructP | MetaKind::TermP => Some(Sort::P),
            MetaKind::StructPop | MetaKind::TermPop => Some(Sort::Pop),
            MetaKind::StructUniform | MetaKind::TermUniform => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaVar {
    pub name: &'static str,
    pub kind: MetaKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SortPat {
    Fixed(Sort),
    Uniform,
}

/// Term patterns. Variables index into the schema's `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TPat {
    Var(usize),
    Top,
    Bot,
    BDia(Box<TPat>),
    BBox(Box<TPat>),
    WBox(Box<TPat>),
    WDia(Box<TPat>),
    Cap(SortPat, Box<TPat>, Box<TPat>),
    Cup(SortPat, Box<TPat>, Box<TPat>),
}

/// Structure patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SPat {
    Var(usize),
    Leaf(TPat),
    I,
    Bullet(Box<SPat>),
    Circ(SortPat, Box<SPat>),
    SCirc(SortPat),
    Dot(SortPat, Box<SPat>, Box<SPat>),
    Sup(SortPat, Box<SPat>, Box<SPat>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqPat {
    pub left: SPat,
    pub right: SPat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleGroup {
    Display,
    Structural,
    OperationalIntro,
    Identity,
    Cut,
}

#[derive(Clone, Debug)]
pub struct RuleSchema {
    pub name: &'static str,
    pub vars: Vec<MetaVar>,
    pub premises: Vec<SeqPat>,
    pub conclusion: SeqPat,
    pub invertible: bool,
    pub group: RuleGroup,
    /// Variables that occur in the conclusion only.
    pub fresh_in_conclusion: Vec<usize>,
    /// Variables that occur in premises only (the cut term).
    pub premise_only: Vec<usize>,
}

impl RuleSchema {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn is_cut(&self) -> bool {
        self.group == RuleGroup::Cut
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    /// Side of the conclusion holding an introduced operational term, if any.
    pub fn principal_side(&self) -> Option<crate::syntax::Side> {
        use crate::syntax::Side;
        if !matches!(self.group, RuleGroup::OperationalIntro | RuleGroup::Identity) {
            return None;
        }
        let is_intro = |p: &SPat| matches!(p, SPat::Leaf(t) if !matches!(t, TPat::Var(_)));
        if is_intro(&self.conclusion.left) {
            Some(Side::Left)
        } else if is_intro(&self.conclusion.right) {
            Some(Side::Right)
        } else {
            None
        }
    }
}

/// A value bound to a metavariable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binding {
    Struct(Structure),
    Term(Term),
}

/// Bindings indexed like the schema's `vars`, plus the resolved uniform sort.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Substitution {
    pub values: Vec<Option<Binding>>,
    pub uniform: Option<Sort>,
}

impl Substitution {
    pub fn empty(schema: &RuleSchema) -> Substitution {
        Substitution {
            values: vec![None; schema.vars.len()],
            uniform: None,
        }
    }

    pub fn get(&self, i: usize) -> Option<&Binding> {
        self.values.get(i).and_then(|b| b.as_ref())
    }

    pub fn by_name<'a>(&'a self, schema: &RuleSchema, name: &str) -> Option<&'a Binding> {
        schema.var_index(name).and_then(|i| self.get(i))
    }

    pub fn set(&mut self, schema: &RuleSchema, name: &str, b: Binding) -> &mut Self {
        let i = schema
            .var_index(name)
            .unwrap_or_else(|| panic!("{} has no variable {name}", schema.name));
        self.values[i] = Some(b);
        if schema.vars[i].kind.is_uniform() {
            self.uniform = Some(binding_sort(&self.values[i].clone().unwrap()));
        }
        self
    }
}

fn binding_sort(b: &Binding) -> Sort {
    match b {
        Binding::Struct(s) => s.sort(),
        Binding::Term(t) => t.sort(),
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Struct(s) => write!(f, "{s}"),
            Binding::Term(t) => write!(f, "{t}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Rule table

struct Builder {
    vars: Vec<MetaVar>,
}

impl Builder {
    fn new(vars: &[(&'static str, MetaKind)]) -> Builder {
        Builder {
            vars: vars.iter().map(|&(name, kind)| MetaVar { name, kind }).collect(),
        }
    }
    fn i(&self, name: &str) -> usize {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .expect("declared variable")
    }
    fn s(&self, name: &str) -> SPat {
        SPat::Var(self.i(name))
    }
    fn t(&self, name: &str) -> TPat {
        TPat::Var(self.i(name))
    }
    fn leaf(&self, name: &str) -> SPat {
        SPat::Leaf(self.t(name))
    }
}

fn seq(left: SPat, right: SPat) -> SeqPat {
    SeqPat { left, right }
}
fn dot(a: SPat, b: SPat) -> SPat {
    SPat::Dot(SortPat::Uniform, Box::new(a), Box::new(b))
}
fn sup(a: SPat, b: SPat) -> SPat {
    SPat::Sup(SortPat::Uniform, Box::new(a), Box::new(b))
}
fn circ(sort: Sort, a: SPat) -> SPat {
    SPat::Circ(SortPat::Fixed(sort), Box::new(a))
}
fn bullet(a: SPat) -> SPat {
    SPat::Bullet(Box::new(a))
}

fn mk(
    name: &'static str,
    b: Builder,
    premises: Vec<SeqPat>,
    conclusion: SeqPat,
    invertible: bool,
    group: RuleGroup,
) -> RuleSchema {
    let mut in_prem = vec![false; b.vars.len()];
    let mut in_concl = vec![false; b.vars.len()];
    for p in &premises {
        mark_seq(p, &mut in_prem);
    }
    mark_seq(&conclusion, &mut in_concl);
    let fresh_in_conclusion = if premises.is_empty() {
        Vec::new()
    } else {
        (0..b.vars.len()).filter(|&i| in_concl[i] && !in_prem[i]).collect()
    };
    let premise_only = (0..b.vars.len()).filter(|&i| in_prem[i] && !in_concl[i]).collect();
    RuleSchema {
        name,
        vars: b.vars,
        premises,
        conclusion,
        invertible,
        group,
        fresh_in_conclusion,
        premise_only,
    }
}

fn mark_seq(p: &SeqPat, seen: &mut [bool]) {
    mark_s(&p.left, seen);
    mark_s(&p.right, seen);
}

fn mark_s(p: &SPat, seen: &mut [bool]) {
    match p {
        SPat::Var(i) => seen[*i] = true,
        SPat::Leaf(t) => mark_t(t, seen),
        SPat::I | SPat::SCirc(_) => {}
        SPat::Bullet(a) | SPat::Circ(_, a) => mark_s(a, seen),
        SPat::Dot(_, a, b) | SPat::Sup(_, a, b) => {
            mark_s(a, seen);
            mark_s(b, seen);
        }
    }
}

fn mark_t(p: &TPat, seen: &mut [bool]) {
    match p {
        TPat::Var(i) => seen[*i] = true,
        TPat::Top | TPat::Bot => {}
        TPat::BDia(a) | TPat::BBox(a) | TPat::WBox(a) | TPat::WDia(a) => mark_t(a, seen),
        TPat::Cap(_, a, b) | TPat::Cup(_, a, b) => {
            mark_t(a, seen);
            mark_t(b, seen);
        }
    }
}

fn build_rules() -> Vec<RuleSchema> {
    use MetaKind::*;
    use RuleGroup::*;
    let u3 = || Builder::new(&[("S", StructUniform), ("T", StructUniform), ("U", StructUniform)]);
    let mut rules = Vec::new();

    // Multi-type display rules.
    let b = Builder::new(&[("G", StructP), ("X", StructL)]);
    rules.push(mk(
        "D_PL_left",
        Builder::new(&[("G", StructP), ("X", StructL)]),
        vec![seq(b.s("G"), circ(Sort::P, b.s("X")))],
        seq(bullet(b.s("G")), b.s("X")),
        true,
        Display,
    ));
    let b = Builder::new(&[("X", StructL), ("Pi", StructPop)]);
    rules.push(mk(
        "D_PL_right",
        Builder::new(&[("X", StructL), ("Pi", StructPop)]),
        vec![seq(circ(Sort::Pop, b.s("X")), b.s("Pi"))],
        seq(b.s("X"), bullet(b.s("Pi"))),
        true,
        Display,
    ));

    // Pure P / Pop display rules.
    let b = u3();
    rules.push(mk(
        "D_P_left",
        u3(),
        vec![seq(dot(b.s("S"), b.s("T")), b.s("U"))],
        seq(b.s("T"), sup(b.s("S"), b.s("U"))),
        true,
        Display,
    ));
    rules.push(mk(
        "D_P_right",
        u3(),
        vec![seq(b.s("S"), dot(b.s("T"), b.s("U")))],
        seq(sup(b.s("T"), b.s("S")), b.s("U")),
        true,
        Display,
    ));

    // Structural rules.
    let u2 = || Builder::new(&[("S", StructUniform), ("T", StructUniform)]);
    let b = u2();
    let sc = SPat::SCirc(SortPat::Uniform);
    rules.push(mk(
        "SCirc_left",
        u2(),
        vec![seq(b.s("S"), b.s("T"))],
        seq(dot(b.s("S"), sc.clone()), b.s("T")),
        true,
        Structural,
    ));
    rules.push(mk(
        "SCirc_right",
        u2(),
        vec![seq(b.s("S"), b.s("T"))],
        seq(b.s("S"), dot(b.s("T"), sc)),
        true,
        Structural,
    ));
    let b = u3();
    rules.push(mk(
        "E_left",
        u3(),
        vec![seq(dot(b.s("S"), b.s("T")), b.s("U"))],
        seq(dot(b.s("T"), b.s("S")), b.s("U")),
        false,
        Structural,
    ));
    rules.push(mk(
        "E_right",
        u3(),
        vec![seq(b.s("S"), dot(b.s("T"), b.s("U")))],
        seq(b.s("S"), dot(b.s("U"), b.s("T"))),
        false,
        Structural,
    ));
    let u4 = || {
        Builder::new(&[
            ("S", StructUniform),
            ("T", StructUniform),
            ("U", StructUniform),
            ("V", StructUniform),
        ])
    };
    let b = u4();
    rules.push(mk(
        "A_left",
        u4(),
        vec![seq(dot(dot(b.s("S"), b.s("T")), b.s("U")), b.s("V"))],
        seq(dot(b.s("S"), dot(b.s("T"), b.s("U"))), b.s("V")),
        true,
        Structural,
    ));
    rules.push(mk(
        "A_right",
        u4(),
        vec![seq(b.s("S"), dot(dot(b.s("T"), b.s("U")), b.s("V")))],
        seq(b.s("S"), dot(b.s("T"), dot(b.s("U"), b.s("V")))),
        true,
        Structural,
    ));
    let b = u3();
    rules.push(mk(
        "W_left",
        u3(),
        vec![seq(b.s("S"), b.s("T"))],
        seq(dot(b.s("S"), b.s("U")), b.s("T")),
        false,
        Structural,
    ));
    rules.push(mk(
        "W_right",
        u3(),
        vec![seq(b.s("S"), b.s("T"))],
        seq(b.s("S"), dot(b.s("T"), b.s("U"))),
        false,
        Structural,
    ));
    let b = u2();
    rules.push(mk(
        "C_left",
        u2(),
        vec![seq(dot(b.s("S"), b.s("S")), b.s("T"))],
        seq(b.s("S"), b.s("T")),
        false,
        Structural,
    ));
    rules.push(mk(
        "C_right",
        u2(),
        vec![seq(b.s("S"), dot(b.s("T"), b.s("T")))],
        seq(b.s("S"), b.s("T")),
        false,
        Structural,
    ));

    // Uniform cut.
    let cut_p = || Builder::new(&[("S", StructUniform), ("T", StructUniform), ("s", TermUniform)]);
    let b = cut_p();
    rules.push(mk(
        "Cut_P",
        cut_p(),
        vec![seq(b.s("S"), b.leaf("s")), seq(b.leaf("s"), b.s("T"))],
        seq(b.s("S"), b.s("T")),
        false,
        Cut,
    ));

    // Operational rules for the uniform lattice connectives.
    let ops = || {
        Builder::new(&[
            ("S", StructUniform),
            ("T", StructUniform),
            ("s", TermUniform),
            ("t", TermUniform),
        ])
    };
    let b = ops();
    let cap = |b: &Builder| SPat::Leaf(TPat::Cap(SortPat::Uniform, Box::new(b.t("s")), Box::new(b.t("t"))));
    let cup = |b: &Builder| SPat::Leaf(TPat::Cup(SortPat::Uniform, Box::new(b.t("s")), Box::new(b.t("t"))));
    rules.push(mk(
        "Cap_left",
        ops(),
        vec![seq(dot(b.leaf("s"), b.leaf("t")), b.s("S"))],
        seq(cap(&b), b.s("S")),
        false,
        OperationalIntro,
    ));
    rules.push(mk(
        "Cap_right",
        ops(),
        vec![seq(b.s("S"), b.leaf("s")), seq(b.s("T"), b.leaf("t"))],
        seq(dot(b.s("S"), b.s("T")), cap(&b)),
        false,
        OperationalIntro,
    ));
    rules.push(mk(
        "Cup_left",
        ops(),
        vec![seq(b.leaf("s"), b.s("S")), seq(b.leaf("t"), b.s("T"))],
        seq(cup(&b), dot(b.s("S"), b.s("T"))),
        false,
        OperationalIntro,
    ));
    rules.push(mk(
        "Cup_right",
        ops(),
        vec![seq(b.s("S"), dot(b.leaf("s"), b.leaf("t")))],
        seq(b.s("S"), cup(&b)),
        false,
        OperationalIntro,
    ));

    // Pure L rules.
    let b = Builder::new(&[("p", AtomVar)]);
    rules.push(mk(
        "Id",
        Builder::new(&[("p", AtomVar)]),
        vec![],
        seq(b.leaf("p"), b.leaf("p")),
        false,
        Identity,
    ));
    let cut_l = || Builder::new(&[("X", StructL), ("Y", StructL), ("A", TermL)]);
    let b = cut_l();
    rules.push(mk(
        "Cut_L",
        cut_l(),
        vec![seq(b.s("X"), b.leaf("A")), seq(b.leaf("A"), b.s("Y"))],
        seq(b.s("X"), b.s("Y")),
        false,
        Cut,
    ));
    let x = || Builder::new(&[("X", StructL)]);
    let b = x();
    rules.push(mk(
        "Top_left",
        x(),
        vec![seq(SPat::I, b.s("X"))],
        seq(SPat::Leaf(TPat::Top), b.s("X")),
        false,
        OperationalIntro,
    ));
    rules.push(mk(
        "Top_right",
        Builder::new(&[]),
        vec![],
        seq(SPat::I, SPat::Leaf(TPat::Top)),
        false,
        OperationalIntro,
    ));
    rules.push(mk(
        "Bot_left",
        Builder::new(&[]),
        vec![],
        seq(SPat::Leaf(TPat::Bot), SPat::I),
        false,
        OperationalIntro,
    ));
    rules.push(mk(
        "Bot_right",
        x(),
        vec![seq(b.s("X"), SPat::I)],
        seq(b.s("X"), SPat::Leaf(TPat::Bot)),
        false,
        OperationalIntro,
    ));
    let xy = || Builder::new(&[("X", StructL), ("Y", StructL)]);
    let b = xy();
    rules.push(mk(
        "IW",
        xy(),
        vec![seq(SPat::I, b.s("X"))],
        seq(b.s("Y"), b.s("X")),
        false,
        Structural,
    ));
    rules.push(mk(
        "IW_dual",
        xy(),
        vec![seq(b.s("X"), SPat::I)],
        seq(b.s("X"), b.s("Y")),
        false,
        Structural,
    ));

    // Multi-type operational rules.
    let b = Builder::new(&[("A", TermL), ("Pi", StructPop)]);
    rules.push(mk(
        "WDia_left",
        Builder::new(&[("A", TermL), ("Pi", StructPop)]),
        vec![seq(circ(Sort::Pop, b.leaf("A")), b.s("Pi"))],
        seq(SPat::Leaf(TPat::WDia(Box::new(b.t("A")))), b.s("Pi")),
        false,
        OperationalIntro,
    ));
    let b = Builder::new(&[("X", StructL), ("A", TermL)]);
    rules.push(mk(
        "WDia_right",
        Builder::new(&[("X", StructL), ("A", TermL)]),
        vec![seq(b.s("X"), b.leaf("A"))],
        seq(circ(Sort::Pop, b.s("X")), SPat::Leaf(TPat::WDia(Box::new(b.t("A"))))),
        false,
        OperationalIntro,
    ));
    let b = Builder::new(&[("X", StructL), ("xi", TermPop)]);
    rules.push(mk(
        "BBox_left",
        Builder::new(&[("X", StructL), ("xi", TermPop)]),
        vec![seq(b.s("X"), bullet(b.leaf("xi")))],
        seq(b.s("X"), SPat::Leaf(TPat::BBox(Box::new(b.t("xi"))))),
        false,
        OperationalIntro,
    ));
    let b = Builder::new(&[("xi", TermPop), ("Pi", StructPop)]);
    rules.push(mk(
        "BBox_right",
        Builder::new(&[("xi", TermPop), ("Pi", StructPop)]),
        vec![seq(b.leaf("xi"), b.s("Pi"))],
        seq(SPat::Leaf(TPat::BBox(Box::new(b.t("xi")))), bullet(b.s("Pi"))),
        false,
        OperationalIntro,
    ));
    let b = Builder::new(&[("al", TermP), ("X", StructL)]);
    rules.push(mk(
        "BDia_left",
        Builder::new(&[("al", TermP), ("X", StructL)]),
        vec![seq(bullet(b.leaf("al")), b.s("X"))],
        seq(SPat::Leaf(TPat::BDia(Box::new(b.t("al")))), b.s("X")),
        false,
        OperationalIntro,
    ));
    let b = Builder::new(&[("G", StructP), ("al", TermP)]);
    rules.push(mk(
        "BDia_right",
        Builder::new(&[("G", StructP), ("al", TermP)]),
        vec![seq(b.s("G"), b.leaf("al"))],
        seq(bullet(b.s("G")), SPat::Leaf(TPat::BDia(Box::new(b.t("al"))))),
        false,
        OperationalIntro,
    ));
    let b = Builder::new(&[("G", StructP), ("A", TermL)]);
    rules.push(mk(
        "WBox_left",
        Builder::new(&[("G", StructP), ("A", TermL)]),
        vec![seq(b.s("G"), circ(Sort::P, b.leaf("A")))],
        seq(b.s("G"), SPat::Leaf(TPat::WBox(Box::new(b.t("A"))))),
        false,
        OperationalIntro,
    ));
    let b = Builder::new(&[("A", TermL), ("X", StructL)]);
    rules.push(mk(
        "WBox_right",
        Builder::new(&[("A", TermL), ("X", StructL)]),
        vec![seq(b.leaf("A"), b.s("X"))],
        seq(SPat::Leaf(TPat::WBox(Box::new(b.t("A")))), circ(Sort::P, b.s("X"))),
        false,
        OperationalIntro,
    ));
    rules
}

/// The complete rule inventory, one schema per rule name.
pub fn builtin_rules() -> &'static [RuleSchema] {
    static RULES: OnceLock<Vec<RuleSchema>> = OnceLock::new();
    RULES.get_or_init(build_rules)
}

pub fn lookup(name: &str) -> Option<&'static RuleSchema> {
    builtin_rules().iter().find(|r| r.name == name)
}

/// Rules whose premise is derivable whenever the conclusion is; operational
/// rules in this list have a structural counterpart with the same reading.
pub fn is_semantically_invertible(name: &str) -> bool {
    matches!(
        name,
        "BDia_left" | "BBox_left" | "WDia_left" | "WBox_left" | "Cap_left" | "Cup_right" | "Top_left" | "Bot_right"
    ) || lookup(name).is_some_and(|r| r.invertible)
}

// ---------------------------------------------------------------------------
// Matching

fn check_sort_pat(sp: SortPat, actual: Sort, sub: &mut Substitution) -> bool {
    match sp {
        SortPat::Fixed(s) => s == actual,
        SortPat::Uniform => uniform(actual, sub),
    }
}

fn uniform(actual: Sort, sub: &mut Substitution) -> bool {
    if actual == Sort::L {
        return false;
    }
    match sub.uniform {
        Some(u) => u == actual,
        None => {
            sub.uniform = Some(actual);
            true
        }
    }
}

fn bind(schema: &RuleSchema, i: usize, value: Binding, sub: &mut Substitution) -> bool {
    let kind = schema.vars[i].kind;
    let sort = binding_sort(&value);
    match (kind.is_term(), &value) {
        (true, Binding::Term(t)) => {
            if kind == MetaKind::AtomVar && !matches!(t, Term::Atom(_)) {
                return false;
            }
        }
        (false, Binding::Struct(_)) => {}
        _ => return false,
    }
    match kind.fixed_sort() {
        Some(s) if s != sort => return false,
        None if !uniform(sort, sub) => return false,
        _ => {}
    }
    match &sub.values[i] {
        Some(existing) => *existing == value,
        None => {
            sub.values[i] = Some(value);
            true
        }
    }
}

fn match_t(schema: &RuleSchema, p: &TPat, t: &Term, sub: &mut Substitution) -> bool {
    match (p, t) {
        (TPat::Var(i), _) => bind(schema, *i, Binding::Term(t.clone()), sub),
        (TPat::Top, Term::Top) | (TPat::Bot, Term::Bot) => true,
        (TPat::BDia(a), Term::BDia(x))
        | (TPat::BBox(a), Term::BBox(x))
        | (TPat::WBox(a), Term::WBox(x))
        | (TPat::WDia(a), Term::WDia(x)) => match_t(schema, a, x, sub),
        (TPat::Cap(sp, a, b), Term::Cap(s, x, y)) | (TPat::Cup(sp, a, b), Term::Cup(s, x, y)) => {
            check_sort_pat(*sp, *s, sub) && match_t(schema, a, x, sub) && match_t(schema, b, y, sub)
        }
        _ => false,
    }
}

fn match_s(schema: &RuleSchema, p: &SPat, s: &Structure, sub: &mut Substitution) -> bool {
    match (p, s) {
        (SPat::Var(i), _) => bind(schema, *i, Binding::Struct(s.clone()), sub),
        (SPat::Leaf(tp), Structure::Leaf(t)) => match_t(schema, tp, t, sub),
        (SPat::I, Structure::I) => true,
        (SPat::Bullet(a), Structure::Bullet(x)) => match_s(schema, a, x, sub),
        (SPat::Circ(sp, a), Structure::Circ(s, x)) => check_sort_pat(*sp, *s, sub) && match_s(schema, a, x, sub),
        (SPat::SCirc(sp), Structure::SCirc(s)) => check_sort_pat(*sp, *s, sub),
        (SPat::Dot(sp, a, b), Structure::Dot(s, x, y)) | (SPat::Sup(sp, a, b), Structure::Sup(s, x, y)) => {
            check_sort_pat(*sp, *s, sub) && match_s(schema, a, x, sub) && match_s(schema, b, y, sub)
        }
        _ => false,
    }
}

/// Extends `sub` so that `pat` instantiates to `s`. On failure `sub` may be
/// partially extended; callers clone before trying alternatives.
pub fn match_seq_into(schema: &RuleSchema, pat: &SeqPat, s: &Sequent, sub: &mut Substitution) -> bool {
    match_s(schema, &pat.left, &s.left, sub) && match_s(schema, &pat.right, &s.right, sub)
}

/// All substitutions instantiating the schema's conclusion to `conclusion`.
/// Matching is syntactic and patterns are rigid, so there is at most one.
pub fn match_rule(schema: &RuleSchema, conclusion: &Sequent) -> Vec<Substitution> {
    let mut sub = Substitution::empty(schema);
    if match_seq_into(schema, &schema.conclusion, conclusion, &mut sub) {
        vec![sub]
    } else {
        vec![]
    }
}

/// Matches the schema's premise pattern `i` against `s` (used for backward
/// readings of invertible rules).
pub fn match_premise(schema: &RuleSchema, i: usize, s: &Sequent) -> Option<Substitution> {
    let mut sub = Substitution::empty(schema);
    match_seq_into(schema, &schema.premises[i], s, &mut sub).then_some(sub)
}

// ---------------------------------------------------------------------------
// Instantiation

fn inst_sort(sp: SortPat, sub: &Substitution) -> Result<Sort, InstantiateError> {
    match sp {
        SortPat::Fixed(s) => Ok(s),
        SortPat::Uniform => sub
            .uniform
            .ok_or_else(|| InstantiateError::Unbound("uniform sort".into())),
    }
}

fn inst_t(schema: &RuleSchema, p: &TPat, sub: &Substitution) -> Result<Term, InstantiateError> {
    Ok(match p {
        TPat::Var(i) => match sub.get(*i) {
            Some(Binding::Term(t)) => t.clone(),
            Some(_) => {
                return Err(InstantiateError::Kind {
                    var: schema.vars[*i].name.into(),
                })
            }
            None => return Err(InstantiateError::Unbound(schema.vars[*i].name.into())),
        },
        TPat::Top => Term::Top,
        TPat::Bot => Term::Bot,
        TPat::BDia(a) => Term::BDia(Arc::new(inst_t(schema, a, sub)?)),
        TPat::BBox(a) => Term::BBox(Arc::new(inst_t(schema, a, sub)?)),
        TPat::WBox(a) => Term::WBox(Arc::new(inst_t(schema, a, sub)?)),
        TPat::WDia(a) => Term::WDia(Arc::new(inst_t(schema, a, sub)?)),
        TPat::Cap(sp, a, b) => Term::cap(inst_sort(*sp, sub)?, inst_t(schema, a, sub)?, inst_t(schema, b, sub)?),
        TPat::Cup(sp, a, b) => Term::cup(inst_sort(*sp, sub)?, inst_t(schema, a, sub)?, inst_t(schema, b, sub)?),
    })
}

fn inst_s(schema: &RuleSchema, p: &SPat, sub: &Substitution) -> Result<Structure, InstantiateError> {
    Ok(match p {
        SPat::Var(i) => match sub.get(*i) {
            Some(Binding::Struct(s)) => s.clone(),
            Some(_) => {
                return Err(InstantiateError::Kind {
                    var: schema.vars[*i].name.into(),
                })
            }
            None => return Err(InstantiateError::Unbound(schema.vars[*i].name.into())),
        },
        SPat::Leaf(t) => Structure::Leaf(inst_t(schema, t, sub)?),
        SPat::I => Structure::I,
        SPat::Bullet(a) => Structure::bullet(inst_s(schema, a, sub)?),
        SPat::Circ(sp, a) => Structure::circ(inst_sort(*sp, sub)?, inst_s(schema, a, sub)?),
        SPat::SCirc(sp) => Structure::SCirc(inst_sort(*sp, sub)?),
        SPat::Dot(sp, a, b) => Structure::dot(inst_sort(*sp, sub)?, inst_s(schema, a, sub)?, inst_s(schema, b, sub)?),
        SPat::Sup(sp, a, b) => Structure::sup(inst_sort(*sp, sub)?, inst_s(schema, a, sub)?, inst_s(schema, b, sub)?),
    })
}

pub fn instantiate_seq(schema: &RuleSchema, pat: &SeqPat, sub: &Substitution) -> Result<Sequent, InstantiateError> {
    let s = Sequent {
        left: inst_s(schema, &pat.left, sub)?,
        right: inst_s(schema, &pat.right, sub)?,
    };
    s.check_sort()?;
    Ok(s)
}

/// Premises and conclusion of the rule instance determined by `sub`.
pub fn instantiate(schema: &RuleSchema, sub: &Substitution) -> Result<(Vec<Sequent>, Sequent), InstantiateError> {
    let mut sub = sub.clone();
    // Kind and sort discipline on every bound variable.
    for (i, v) in schema.vars.iter().enumerate() {
        if let Some(b) = sub.values[i].clone() {
            let mut probe = sub.clone();
            probe.values[i] = None;
            if !bind(schema, i, b.clone(), &mut probe) {
                let found = binding_sort(&b);
                return Err(match v.kind.fixed_sort() {
                    Some(expected) if expected != found => SortError::new(b.to_string(), expected, found).into(),
                    _ => InstantiateError::Kind { var: v.name.into() },
                });
            }
            sub.uniform = probe.uniform;
        }
    }
    let premises = schema
        .premises
        .iter()
        .map(|p| instantiate_seq(schema, p, &sub))
        .collect::<Result<Vec<_>, _>>()?;
    let conclusion = instantiate_seq(schema, &schema.conclusion, &sub)?;
    Ok((premises, conclusion))
}
