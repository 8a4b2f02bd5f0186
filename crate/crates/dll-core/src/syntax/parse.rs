//! ASCII front end. Parsing is two-phase: a precedence parser builds an
//! untyped tree, then sorts are inferred with a union-find over the sort
//! variables of `o`, `S0`, `;` and `>`. A connected group of such nodes with
//! no sorted term leaf takes sort P unless one of its nodes is written with
//! the explicit Pop spelling (`oop`, `S0op`).

use super::{Formula, Sequent, Sort, Structure, Term};
use crate::error::{ParseError, SortError, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Top,
    Bot,
    Unit,
    SCirc { op: bool },
    WBox,
    WDia,
    FDia,
    FBox,
    Circ { op: bool },
    Bullet,
    Cap,
    Cup,
    CapOp,
    CupOp,
    Semi,
    Sup,
    Turnstile,
    And,
    Or,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &str| text[i..].starts_with(s);
        let tok = if two("|-") {
            i += 2;
            Tok::Turnstile
        } else if two("/\\") {
            i += 2;
            Tok::And
        } else if two("\\/") {
            i += 2;
            Tok::Or
        } else if c == b'(' {
            i += 1;
            Tok::LParen
        } else if c == b')' {
            i += 1;
            Tok::RParen
        } else if c == b'*' {
            i += 1;
            Tok::Bullet
        } else if c == b';' {
            i += 1;
            Tok::Semi
        } else if c == b'>' {
            i += 1;
            Tok::Sup
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            match &text[start..i] {
                "T" => Tok::Top,
                "F" => Tok::Bot,
                "I" => Tok::Unit,
                "S0" => Tok::SCirc { op: false },
                "S0op" => Tok::SCirc { op: true },
                "wbox" => Tok::WBox,
                "wdia" => Tok::WDia,
                "fdia" => Tok::FDia,
                "fbox" => Tok::FBox,
                "o" => Tok::Circ { op: false },
                "oop" => Tok::Circ { op: true },
                "cap" => Tok::Cap,
                "cup" => Tok::Cup,
                "capop" => Tok::CapOp,
                "cupop" => Tok::CupOp,
                "sup" => Tok::Sup,
                word if word.as_bytes()[0].is_ascii_lowercase() => Tok::Name(word.to_string()),
                word => {
                    return Err(SyntaxError {
                        offset: start,
                        message: format!("`{word}` is not an atom name (atoms start lowercase)"),
                    })
                }
            }
        } else {
            return Err(SyntaxError {
                offset: start,
                message: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
            });
        };
        out.push(Spanned { tok, start, end: i });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum UnOp {
    WBox,
    WDia,
    FDia,
    FBox,
    Circ { op: bool },
    Bullet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BinOp {
    Cap,
    Cup,
    CapOp,
    CupOp,
    Dot,
    Sup,
}

#[derive(Clone, Debug)]
enum RawKind {
    Name(String),
    Top,
    Bot,
    Unit,
    SCirc { op: bool },
    Un(UnOp, Box<Raw>),
    Bin(BinOp, Box<Raw>, Box<Raw>),
}

#[derive(Clone, Debug)]
struct Raw {
    kind: RawKind,
    start: usize,
    end: usize,
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Parser<'a>, SyntaxError> {
        Ok(Parser {
            text,
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|s| s.start).unwrap_or(self.text.len())
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Spanned {
        let s = self.toks[self.pos].clone();
        self.pos += 1;
        s
    }

    fn expect_end(&self) -> Result<(), SyntaxError> {
        if self.pos < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    // sup := dot ('>' sup)?
    fn sup(&mut self) -> Result<Raw, SyntaxError> {
        let lhs = self.dot()?;
        if self.peek() == Some(&Tok::Sup) {
            self.bump();
            let rhs = self.sup()?;
            return Ok(bin(BinOp::Sup, lhs, rhs));
        }
        Ok(lhs)
    }

    // dot := capl (';' capl)*
    fn dot(&mut self) -> Result<Raw, SyntaxError> {
        let mut lhs = self.capl()?;
        while self.peek() == Some(&Tok::Semi) {
            self.bump();
            let rhs = self.capl()?;
            lhs = bin(BinOp::Dot, lhs, rhs);
        }
        Ok(lhs)
    }

    fn capl(&mut self) -> Result<Raw, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Cap) => BinOp::Cap,
                Some(Tok::Cup) => BinOp::Cup,
                Some(Tok::CapOp) => BinOp::CapOp,
                Some(Tok::CupOp) => BinOp::CupOp,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Raw, SyntaxError> {
        let op = match self.peek() {
            Some(Tok::WBox) => UnOp::WBox,
            Some(Tok::WDia) => UnOp::WDia,
            Some(Tok::FDia) => UnOp::FDia,
            Some(Tok::FBox) => UnOp::FBox,
            Some(Tok::Circ { op }) => UnOp::Circ { op: *op },
            Some(Tok::Bullet) => UnOp::Bullet,
            _ => return self.atom(),
        };
        let start = self.bump().start;
        let arg = self.unary()?;
        let end = arg.end;
        Ok(Raw {
            kind: RawKind::Un(op, Box::new(arg)),
            start,
            end,
        })
    }

    fn atom(&mut self) -> Result<Raw, SyntaxError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        let kind = match tok {
            Tok::Name(n) => RawKind::Name(n),
            Tok::Top => RawKind::Top,
            Tok::Bot => RawKind::Bot,
            Tok::Unit => RawKind::Unit,
            Tok::SCirc { op } => RawKind::SCirc { op },
            Tok::LParen => {
                let start = self.bump().start;
                let mut inner = self.sup()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                let end = self.bump().end;
                inner.start = start;
                inner.end = end;
                return Ok(inner);
            }
            other => return self.err(format!("unexpected token {other:?}")),
        };
        let s = self.bump();
        Ok(Raw {
            kind,
            start: s.start,
            end: s.end,
        })
    }

    // Formula grammar: or := and ('\/' and)* ; and := fatom ('/\' fatom)*
    fn formula_or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.formula_and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.formula_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn formula_and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.formula_atom()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.formula_atom()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn formula_atom(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Name(n)) => {
                self.bump();
                Ok(Formula::atom(&n))
            }
            Some(Tok::Top) => {
                self.bump();
                Ok(Formula::Top)
            }
            Some(Tok::Bot) => {
                self.bump();
                Ok(Formula::Bot)
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula_or()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(f)
            }
            Some(other) => self.err(format!("unexpected token {other:?} in formula")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn bin(op: BinOp, a: Raw, b: Raw) -> Raw {
    let (start, end) = (a.start, b.end);
    Raw {
        kind: RawKind::Bin(op, Box::new(a), Box::new(b)),
        start,
        end,
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text)?;
    let f = p.formula_or()?;
    p.expect_end()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.sup()?;
    p.expect_end()?;
    to_term(text, &raw)
}

pub fn parse_structure(text: &str) -> Result<Structure, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.sup()?;
    p.expect_end()?;
    let mut inf = Infer::new(text);
    let pre = inf.build(&raw)?;
    inf.finish()?;
    Ok(inf.resolve(&pre))
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let lhs = p.sup()?;
    if p.peek() != Some(&Tok::Turnstile) {
        return Err(p.err::<()>("expected `|-`").unwrap_err().into());
    }
    p.bump();
    let rhs = p.sup()?;
    p.expect_end()?;
    let mut inf = Infer::new(text);
    let l = inf.build(&lhs)?;
    let r = inf.build(&rhs)?;
    let (ls, rs) = (inf.sort_of(&l), inf.sort_of(&r));
    inf.unify(ls, rs, &rhs)?;
    inf.finish()?;
    Ok(Sequent {
        left: inf.resolve(&l),
        right: inf.resolve(&r),
    })
}

fn is_term_kind(raw: &Raw) -> bool {
    match &raw.kind {
        RawKind::Name(_) | RawKind::Top | RawKind::Bot => true,
        RawKind::Un(op, _) => matches!(op, UnOp::WBox | UnOp::WDia | UnOp::FDia | UnOp::FBox),
        RawKind::Bin(op, _, _) => matches!(op, BinOp::Cap | BinOp::Cup | BinOp::CapOp | BinOp::CupOp),
        _ => false,
    }
}

fn to_term(text: &str, raw: &Raw) -> Result<Term, ParseError> {
    let here = || text[raw.start..raw.end].to_string();
    let want = |t: &Term, sub: &Raw, s: Sort| -> Result<(), ParseError> {
        if t.sort() == s {
            Ok(())
        } else {
            Err(SortError::new(text[sub.start..sub.end].to_string(), s, t.sort()).into())
        }
    };
    Ok(match &raw.kind {
        RawKind::Name(n) => Term::atom(n),
        RawKind::Top => Term::Top,
        RawKind::Bot => Term::Bot,
        RawKind::Un(op, a) => {
            if !is_term_kind(a) {
                return Err(SyntaxError {
                    offset: a.start,
                    message: format!(
                        "expected an operational term, found structure `{}`",
                        &text[a.start..a.end]
                    ),
                }
                .into());
            }
            let t = to_term(text, a)?;
            match op {
                UnOp::WBox => {
                    want(&t, a, Sort::L)?;
                    Term::wbox(t)
                }
                UnOp::WDia => {
                    want(&t, a, Sort::L)?;
                    Term::wdia(t)
                }
                UnOp::FDia => {
                    want(&t, a, Sort::P)?;
                    Term::bdia(t)
                }
                UnOp::FBox => {
                    want(&t, a, Sort::Pop)?;
                    Term::bbox(t)
                }
                _ => unreachable!("structural unary handled by caller"),
            }
        }
        RawKind::Bin(op, a, b) => {
            for side in [a, b] {
                if !is_term_kind(side) {
                    return Err(SyntaxError {
                        offset: side.start,
                        message: format!(
                            "expected an operational term, found structure `{}`",
                            &text[side.start..side.end]
                        ),
                    }
                    .into());
                }
            }
            let ta = to_term(text, a)?;
            let tb = to_term(text, b)?;
            let sort = match op {
                BinOp::CapOp | BinOp::CupOp => Sort::Pop,
                _ => {
                    if ta.sort() == Sort::L {
                        return Err(SortError::new(text[a.start..a.end].to_string(), Sort::P, Sort::L).into());
                    }
                    ta.sort()
                }
            };
            want(&ta, a, sort)?;
            want(&tb, b, sort)?;
            match op {
                BinOp::Cap | BinOp::CapOp => Term::cap(sort, ta, tb),
                BinOp::Cup | BinOp::CupOp => Term::cup(sort, ta, tb),
                _ => unreachable!(),
            }
        }
        _ => {
            return Err(SyntaxError {
                offset: raw.start,
                message: format!("expected an operational term, found `{}`", here()),
            }
            .into())
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SortVal {
    Fixed(Sort),
    Var(usize),
}

enum Pre {
    Leaf(Term),
    Unit,
    Bullet(Box<Pre>),
    Circ(usize, Box<Pre>),
    SCirc(usize),
    Dot(usize, Box<Pre>, Box<Pre>),
    Sup(usize, Box<Pre>, Box<Pre>),
}

struct Infer<'a> {
    text: &'a str,
    parent: Vec<usize>,
    fixed: Vec<Option<Sort>>,
    // span of a node carrying each variable, for diagnostics
    spans: Vec<(usize, usize)>,
}

impl<'a> Infer<'a> {
    fn new(text: &'a str) -> Infer<'a> {
        Infer {
            text,
            parent: Vec::new(),
            fixed: Vec::new(),
            spans: Vec::new(),
        }
    }

    fn fresh(&mut self, raw: &Raw) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.fixed.push(None);
        self.spans.push((raw.start, raw.end));
        id
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = v;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn current(&mut self, v: SortVal) -> SortVal {
        match v {
            SortVal::Fixed(_) => v,
            SortVal::Var(id) => {
                let r = self.find(id);
                match self.fixed[r] {
                    Some(s) => SortVal::Fixed(s),
                    None => SortVal::Var(r),
                }
            }
        }
    }

    fn unify(&mut self, a: SortVal, b: SortVal, at: &Raw) -> Result<(), SortError> {
        match (self.current(a), self.current(b)) {
            (SortVal::Fixed(x), SortVal::Fixed(y)) => {
                if x != y {
                    return Err(SortError::new(self.text[at.start..at.end].to_string(), x, y));
                }
            }
            (SortVal::Fixed(x), SortVal::Var(v)) | (SortVal::Var(v), SortVal::Fixed(x)) => {
                self.fixed[v] = Some(x);
            }
            (SortVal::Var(x), SortVal::Var(y)) => {
                if x != y {
                    self.parent[x] = y;
                }
            }
        }
        Ok(())
    }

    fn sort_of(&self, p: &Pre) -> SortVal {
        match p {
            Pre::Leaf(t) => SortVal::Fixed(t.sort()),
            Pre::Unit | Pre::Bullet(_) => SortVal::Fixed(Sort::L),
            Pre::Circ(v, _) | Pre::SCirc(v) | Pre::Dot(v, _, _) | Pre::Sup(v, _, _) => SortVal::Var(*v),
        }
    }

    fn build(&mut self, raw: &Raw) -> Result<Pre, ParseError> {
        if is_term_kind(raw) {
            return Ok(Pre::Leaf(to_term(self.text, raw)?));
        }
        Ok(match &raw.kind {
            RawKind::Unit => Pre::Unit,
            RawKind::SCirc { op } => {
                let v = self.fresh(raw);
                if *op {
                    self.fixed[v] = Some(Sort::Pop);
                }
                Pre::SCirc(v)
            }
            RawKind::Un(UnOp::Bullet, a) => {
                let inner = self.build(a)?;
                if self.sort_of(&inner) == SortVal::Fixed(Sort::L) {
                    return Err(SortError::new(self.text[a.start..a.end].to_string(), Sort::P, Sort::L).into());
                }
                Pre::Bullet(Box::new(inner))
            }
            RawKind::Un(UnOp::Circ { op }, a) => {
                let inner = self.build(a)?;
                let s = self.sort_of(&inner);
                self.unify(s, SortVal::Fixed(Sort::L), a)?;
                let v = self.fresh(raw);
                if *op {
                    self.fixed[v] = Some(Sort::Pop);
                }
                Pre::Circ(v, Box::new(inner))
            }
            RawKind::Bin(op @ (BinOp::Dot | BinOp::Sup), a, b) => {
                let pa = self.build(a)?;
                let pb = self.build(b)?;
                let v = self.fresh(raw);
                let (sa, sb) = (self.sort_of(&pa), self.sort_of(&pb));
                self.unify(SortVal::Var(v), sa, a)?;
                self.unify(SortVal::Var(v), sb, b)?;
                if *op == BinOp::Dot {
                    Pre::Dot(v, Box::new(pa), Box::new(pb))
                } else {
                    Pre::Sup(v, Box::new(pa), Box::new(pb))
                }
            }
            _ => unreachable!("term kinds handled above"),
        })
    }

    /// Rejects groups that were forced to L and defaults free groups to P.
    fn finish(&mut self) -> Result<(), SortError> {
        for v in 0..self.parent.len() {
            let r = self.find(v);
            match self.fixed[r] {
                Some(Sort::L) => {
                    let (s, e) = self.spans[v];
                    return Err(SortError::new(self.text[s..e].to_string(), Sort::P, Sort::L));
                }
                Some(_) => {}
                None => self.fixed[r] = Some(Sort::P),
            }
        }
        Ok(())
    }

    fn resolve(&mut self, p: &Pre) -> Structure {
        let mut sort = |v: usize| {
            let r = self.find(v);
            self.fixed[r].expect("finish() fixes every group")
        };
        match p {
            Pre::Leaf(t) => Structure::Leaf(t.clone()),
            Pre::Unit => Structure::I,
            Pre::Bullet(a) => Structure::bullet(self.resolve(a)),
            Pre::Circ(v, a) => {
                let s = sort(*v);
                Structure::circ(s, self.resolve(a))
            }
            Pre::SCirc(v) => Structure::SCirc(sort(*v)),
            Pre::Dot(v, a, b) => {
                let s = sort(*v);
                Structure::dot(s, self.resolve(a), self.resolve(b))
            }
            Pre::Sup(v, a, b) => {
                let s = sort(*v);
                Structure::sup(s, self.resolve(a), self.resolve(b))
            }
        }
    }
}
