//! Text and LaTeX rendering of derivations.

use std::fmt::Write;

use crate::kernel::Derivation;
use crate::syntax::{Sequent, Sort, Structure, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
}

pub fn render(d: &Derivation, format: Format) -> String {
    match format {
        Format::Text => render_text(d),
        Format::Latex => render_latex(d),
    }
}

/// One line per node, `label: sequent`, premises indented by two spaces.
pub fn render_text(d: &Derivation) -> String {
    fn go(d: &Derivation, depth: usize, out: &mut String) {
        let _ = writeln!(out, "{:indent$}{}: {}", "", d.label(), d.conclusion, indent = 2 * depth);
        for p in &d.premises {
            go(p, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(d, 0, &mut out);
    out
}

/// A complete document typesetting `d` with `bussproofs`.
pub fn render_latex(d: &Derivation) -> String {
    let mut out = String::new();
    out.push_str("\\documentclass{article}\n\\usepackage{amssymb}\n\\usepackage{bussproofs}\n");
    out.push_str("\\usepackage[landscape,margin=1cm]{geometry}\n\\pagestyle{empty}\n\\begin{document}\n");
    out.push_str("\\begin{prooftree}\n");
    tree(d, &mut out);
    out.push_str("\\end{prooftree}\n\\end{document}\n");
    out
}

fn tree(d: &Derivation, out: &mut String) {
    for p in &d.premises {
        tree(p, out);
    }
    let seq = latex_sequent(&d.conclusion);
    if d.is_hyp() {
        let _ = writeln!(out, "\\AxiomC{{{seq}}}");
        return;
    }
    if d.premises.is_empty() {
        out.push_str("\\AxiomC{}\n");
    }
    let label = d.label().replace('_', "\\_").replace('~', "$^{-1}$");
    let _ = writeln!(out, "\\RightLabel{{\\scriptsize {label}}}");
    let inf = match d.premises.len() {
        0 | 1 => "UnaryInfC",
        2 => "BinaryInfC",
        _ => "TrinaryInfC",
    };
    let _ = writeln!(out, "\\{inf}{{{seq}}}");
}

pub fn latex_sequent(s: &Sequent) -> String {
    format!("${} \\vdash {}$", latex_structure(&s.left), latex_structure(&s.right))
}

fn op(sort: Sort) -> &'static str {
    if sort == Sort::Pop {
        "^{\\mathrm{op}}"
    } else {
        ""
    }
}

pub fn latex_structure(s: &Structure) -> String {
    let arg = |a: &Structure| match a {
        Structure::Dot(..) | Structure::Sup(..) => format!("({})", latex_structure(a)),
        _ => latex_structure(a),
    };
    match s {
        Structure::Leaf(t) => latex_term(t),
        Structure::I => "\\mathrm{I}".into(),
        Structure::Bullet(a) => format!("\\bullet {}", arg(a)),
        Structure::Circ(srt, a) => format!("\\circ{} {}", op(*srt), arg(a)),
        Structure::SCirc(srt) => format!("\\circledcirc{}", op(*srt)),
        Structure::Dot(_, a, b) => format!("{} \\,;\\, {}", arg(a), arg(b)),
        Structure::Sup(_, a, b) => format!("{} > {}", arg(a), arg(b)),
    }
}

pub fn latex_term(t: &Term) -> String {
    let arg = |a: &Term| match a {
        Term::Cap(..) | Term::Cup(..) => format!("({})", latex_term(a)),
        _ => latex_term(a),
    };
    match t {
        Term::Atom(n) => n.to_string(),
        Term::Top => "\\top".into(),
        Term::Bot => "\\bot".into(),
        Term::BDia(a) => format!("\\blacklozenge {}", arg(a)),
        Term::BBox(a) => format!("\\blacksquare {}", arg(a)),
        Term::WBox(a) => format!("\\Box {}", arg(a)),
        Term::WDia(a) => format!("\\Diamond {}", arg(a)),
        Term::Cap(srt, a, b) => format!("{} \\cap{} {}", arg(a), op(*srt), arg(b)),
        Term::Cup(srt, a, b) => format!("{} \\cup{} {}", arg(a), op(*srt), arg(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::syntax::parse_term;
    use crate::translate::{identity_derivation, identity_term};

    #[test]
    fn id_leaf_is_one_line() {
        let d = identity_term(&parse_term("p").unwrap());
        assert_eq!(render_text(&d), "Id: p |- p\n");
    }

    #[test]
    fn text_indents_premises() {
        let d = identity_term(&parse_term("wbox p").unwrap());
        assert_eq!(
            render_text(&d),
            "WBox_left: wbox p |- wbox p\n  WBox_right: wbox p |- o p\n    Id: p |- p\n"
        );
    }

    #[test]
    fn latex_axioms_are_leaf_styled() {
        let d = identity_term(&parse_term("T").unwrap());
        let tex = render_latex(&d);
        assert!(tex
            .contains("\\AxiomC{}\n\\RightLabel{\\scriptsize Top\\_right}\n\\UnaryInfC{$\\mathrm{I} \\vdash \\top$}"));
        assert!(tex.contains("\\begin{prooftree}") && tex.ends_with("\\end{document}\n"));
    }

    #[test]
    fn latex_inference_count_matches_size() {
        let d = identity_derivation(&parse_formula("p /\\ (q \\/ r)").unwrap());
        let tex = render_latex(&d);
        let infs = tex.matches("InfC{").count();
        assert_eq!(infs, d.size());
        assert!(tex.contains("BinaryInfC"));
    }
}
