//! Printers producing text accepted by the parser. Output is minimally
//! parenthesized; `parse(print(x)) == x` for every well-sorted `x`.

use std::fmt::{self, Write};

use super::{Formula, Sequent, Sort, Structure, Term};

// Binding strength: higher binds tighter.
const PREC_SUP: u8 = 1;
const PREC_DOT: u8 = 2;
const PREC_CAP: u8 = 3;
const PREC_UNARY: u8 = 4;

pub(super) fn write_formula(f: &mut fmt::Formatter<'_>, a: &Formula, ctx: u8) -> fmt::Result {
    // ctx: 0 top, 1 inside an Or operand (right), 2 inside an And operand
    match a {
        Formula::Atom(n) => f.write_str(n),
        Formula::Top => f.write_str("T"),
        Formula::Bot => f.write_str("F"),
        Formula::Or(x, y) => {
            let paren = ctx >= 1;
            if paren {
                f.write_char('(')?;
            }
            write_formula(f, x, 0)?;
            f.write_str(" \\/ ")?;
            write_formula(f, y, 1)?;
            if paren {
                f.write_char(')')?;
            }
            Ok(())
        }
        Formula::And(x, y) => {
            let paren = ctx >= 2;
            if paren {
                f.write_char('(')?;
            }
            write_formula(f, x, 1)?;
            f.write_str(" /\\ ")?;
            write_formula(f, y, 2)?;
            if paren {
                f.write_char(')')?;
            }
            Ok(())
        }
    }
}

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Cap(..) | Term::Cup(..) => PREC_CAP,
        _ => PREC_UNARY,
    }
}

/// Writes `t` in a context that needs at least binding strength `min`.
pub(super) fn write_term(f: &mut impl Write, t: &Term, min: u8) -> fmt::Result {
    let paren = term_prec(t) < min;
    if paren {
        f.write_char('(')?;
    }
    match t {
        Term::Atom(n) => f.write_str(n)?,
        Term::Top => f.write_str("T")?,
        Term::Bot => f.write_str("F")?,
        Term::BDia(a) => unary(f, "fdia", a)?,
        Term::BBox(a) => unary(f, "fbox", a)?,
        Term::WBox(a) => unary(f, "wbox", a)?,
        Term::WDia(a) => unary(f, "wdia", a)?,
        Term::Cap(s, a, b) | Term::Cup(s, a, b) => {
            let word = match (t, s) {
                (Term::Cap(..), Sort::Pop) => "capop",
                (Term::Cap(..), _) => "cap",
                (_, Sort::Pop) => "cupop",
                _ => "cup",
            };
            write_term(f, a, PREC_CAP)?;
            write!(f, " {word} ")?;
            write_term(f, b, PREC_UNARY)?;
        }
    }
    if paren {
        f.write_char(')')?;
    }
    Ok(())
}

fn unary(f: &mut impl Write, word: &str, a: &Term) -> fmt::Result {
    write!(f, "{word} ")?;
    write_term(f, a, PREC_UNARY)
}

/// True when the connected group of P/Pop nodes rooted at `s` has a sorted
/// term leaf, so the parser can recover its sort without help.
fn group_has_term(s: &Structure) -> bool {
    match s {
        Structure::Leaf(_) => true,
        Structure::Dot(_, a, b) | Structure::Sup(_, a, b) => group_has_term(a) || group_has_term(b),
        _ => false,
    }
}

/// Whether a group rooted at the given structures must spell its `o` and
/// `S0` nodes with the explicit Pop form.
pub fn needs_op_marker(roots: &[&Structure]) -> bool {
    roots.first().map(|s| s.sort()) == Some(Sort::Pop) && !roots.iter().any(|s| group_has_term(s))
}

fn struct_prec(s: &Structure) -> u8 {
    match s {
        Structure::Leaf(t) => term_prec(t),
        Structure::Dot(..) => PREC_DOT,
        Structure::Sup(..) => PREC_SUP,
        _ => PREC_UNARY,
    }
}

fn write_struct(f: &mut impl Write, s: &Structure, min: u8, mark: bool) -> fmt::Result {
    if let Structure::Leaf(t) = s {
        return write_term(f, t, min);
    }
    let paren = struct_prec(s) < min;
    if paren {
        f.write_char('(')?;
    }
    match s {
        Structure::Leaf(_) => unreachable!(),
        Structure::I => f.write_str("I")?,
        Structure::SCirc(_) => f.write_str(if mark { "S0op" } else { "S0" })?,
        Structure::Bullet(a) => {
            f.write_str("* ")?;
            let inner = needs_op_marker(&[a]);
            write_struct(f, a, PREC_UNARY, inner)?;
        }
        Structure::Circ(_, a) => {
            f.write_str(if mark { "oop " } else { "o " })?;
            write_struct(f, a, PREC_UNARY, false)?;
        }
        Structure::Dot(_, a, b) => {
            write_struct(f, a, PREC_DOT, mark)?;
            f.write_str(" ; ")?;
            write_struct(f, b, PREC_DOT + 1, mark)?;
        }
        Structure::Sup(_, a, b) => {
            write_struct(f, a, PREC_SUP + 1, mark)?;
            f.write_str(" > ")?;
            write_struct(f, b, PREC_SUP, mark)?;
        }
    }
    if paren {
        f.write_char(')')?;
    }
    Ok(())
}

/// Display adapter for a structure printed on its own (not as one side of a
/// sequent, where the group spans both sides).
pub struct StructDisplay<'a> {
    s: &'a Structure,
    mark: bool,
}

impl<'a> StructDisplay<'a> {
    pub fn standalone(s: &'a Structure) -> StructDisplay<'a> {
        StructDisplay {
            s,
            mark: needs_op_marker(&[s]),
        }
    }
}

impl fmt::Display for StructDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_struct(f, self.s, PREC_SUP, self.mark)
    }
}

pub(super) fn write_sequent(f: &mut fmt::Formatter<'_>, s: &Sequent) -> fmt::Result {
    let mark = needs_op_marker(&[&s.left, &s.right]);
    write_struct(f, &s.left, PREC_SUP, mark)?;
    f.write_str(" |- ")?;
    write_struct(f, &s.right, PREC_SUP, mark)
}

#[cfg(test)]
mod tests {
    use crate::syntax::*;

    #[test]
    fn bullet_over_binary_term_is_parenthesized() {
        let t = Term::cap(Sort::P, Term::wbox(Term::atom("p")), Term::wbox(Term::atom("q")));
        let s = Structure::bullet(Structure::Leaf(t));
        assert_eq!(s.to_string(), "* (wbox p cap wbox q)");
    }

    #[test]
    fn formula_printing_is_minimal() {
        for text in [
            "p /\\ q \\/ r",
            "p /\\ (q \\/ r)",
            "(p \\/ q) /\\ r",
            "p \\/ (q \\/ r)",
            "p /\\ q /\\ r",
        ] {
            assert_eq!(parse_formula(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn pop_groups_without_terms_use_the_explicit_spelling() {
        let s = Sequent::new(
            Structure::circ(Sort::Pop, Structure::Leaf(Term::atom("p"))),
            Structure::SCirc(Sort::Pop),
        );
        assert_eq!(s.to_string(), "oop p |- S0op");
        assert_eq!(parse_sequent(&s.to_string()).unwrap(), s);
    }
}
