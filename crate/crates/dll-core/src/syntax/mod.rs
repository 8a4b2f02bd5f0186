//! Abstract syntax for single-type lattice formulas and the three-sorted
//! display language, together with parsing, printing, sort inference and
//! signed positions.

mod parse;
mod print;
pub mod random;

use std::fmt;
use std::sync::Arc;

pub use parse::{parse_formula, parse_sequent, parse_structure, parse_term};
pub use print::{needs_op_marker, StructDisplay};

use crate::error::{PathError, SortError};

/// The three syntactic types. `Pop` is the order dual of `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    L,
    P,
    Pop,
}

impl Sort {
    /// The partner sort under order duality; `L` is self-dual.
    pub fn dual(self) -> Sort {
        match self {
            Sort::L => Sort::L,
            Sort::P => Sort::Pop,
            Sort::Pop => Sort::P,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::L => "L",
            Sort::P => "P",
            Sort::Pop => "Pop",
        })
    }
}

/// Formulas of lattice logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Arc<str>>) {
        match self {
            Formula::Atom(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// All formulas over `atoms` (plus the two constants) of size at most `max_size`.
    pub fn enumerate(atoms: &[&str], max_size: usize) -> Vec<Formula> {
        let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
        if max_size == 0 {
            return Vec::new();
        }
        by_size[1] = atoms.iter().map(|a| Formula::atom(a)).collect();
        by_size[1].push(Formula::Top);
        by_size[1].push(Formula::Bot);
        for n in 2..=max_size {
            let mut here = Vec::new();
            for left in 1..n - 1 {
                let right = n - 1 - left;
                for a in &by_size[left] {
                    for b in &by_size[right] {
                        here.push(Formula::and(a.clone(), b.clone()));
                        here.push(Formula::or(a.clone(), b.clone()));
                    }
                }
            }
            by_size[n] = here;
        }
        by_size.into_iter().flatten().collect()
    }
}

/// Operational terms. The sort of a `Cap`/`Cup` is carried explicitly and is
/// `P` or `Pop`; every other constructor fixes its sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Atom(Arc<str>),
    Top,
    Bot,
    /// `fdia`: P to L.
    BDia(Arc<Term>),
    /// `fbox`: Pop to L.
    BBox(Arc<Term>),
    /// `wbox`: L to P.
    WBox(Arc<Term>),
    /// `wdia`: L to Pop.
    WDia(Arc<Term>),
    Cap(Sort, Arc<Term>, Arc<Term>),
    Cup(Sort, Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Arc::from(name))
    }
    pub fn bdia(t: Term) -> Term {
        Term::BDia(Arc::new(t))
    }
    pub fn bbox(t: Term) -> Term {
        Term::BBox(Arc::new(t))
    }
    pub fn wbox(t: Term) -> Term {
        Term::WBox(Arc::new(t))
    }
    pub fn wdia(t: Term) -> Term {
        Term::WDia(Arc::new(t))
    }
    pub fn cap(sort: Sort, a: Term, b: Term) -> Term {
        Term::Cap(sort, Arc::new(a), Arc::new(b))
    }
    pub fn cup(sort: Sort, a: Term, b: Term) -> Term {
        Term::Cup(sort, Arc::new(a), Arc::new(b))
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Atom(_) | Term::Top | Term::Bot | Term::BDia(_) | Term::BBox(_) => Sort::L,
            Term::WBox(_) => Sort::P,
            Term::WDia(_) => Sort::Pop,
            Term::Cap(s, _, _) | Term::Cup(s, _, _) => *s,
        }
    }

    /// Checks the sorting table recursively and returns the sort.
    pub fn check_sort(&self) -> Result<Sort, SortError> {
        let expect = |t: &Term, want: Sort| -> Result<(), SortError> {
            let found = t.check_sort()?;
            if found == want {
                Ok(())
            } else {
                Err(SortError::new(t.to_string(), want, found))
            }
        };
        match self {
            Term::Atom(_) | Term::Top | Term::Bot => {}
            Term::BDia(a) => expect(a, Sort::P)?,
            Term::BBox(a) => expect(a, Sort::Pop)?,
            Term::WBox(a) | Term::WDia(a) => expect(a, Sort::L)?,
            Term::Cap(s, a, b) | Term::Cup(s, a, b) => {
                if *s == Sort::L {
                    return Err(SortError::new(self.to_string(), Sort::P, Sort::L));
                }
                expect(a, *s)?;
                expect(b, *s)?;
            }
        }
        Ok(self.sort())
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Atom(_) | Term::Top | Term::Bot => vec![],
            Term::BDia(a) | Term::BBox(a) | Term::WBox(a) | Term::WDia(a) => vec![a],
            Term::Cap(_, a, b) | Term::Cup(_, a, b) => vec![a, b],
        }
    }

    /// Number of connectives and leaves.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Every subterm, including `self`, in pre-order.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = vec![self];
        for c in self.children() {
            out.extend(c.subterms());
        }
        out
    }

    pub fn atoms(&self, out: &mut Vec<Arc<str>>) {
        if let Term::Atom(n) = self {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        for c in self.children() {
            c.atoms(out);
        }
    }
}

/// Structures. `Bullet` takes a `P` or `Pop` argument and the distinction is
/// read off the argument's sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Structure {
    Leaf(Term),
    /// Structural unit of type L.
    I,
    /// `*`: P or Pop to L.
    Bullet(Arc<Structure>),
    /// `o`: L to the carried sort (P or Pop).
    Circ(Sort, Arc<Structure>),
    /// `S0`: structural constant of the carried sort.
    SCirc(Sort),
    /// `;`
    Dot(Sort, Arc<Structure>, Arc<Structure>),
    /// `>`: first coordinate is negative.
    Sup(Sort, Arc<Structure>, Arc<Structure>),
}

impl From<Term> for Structure {
    fn from(t: Term) -> Structure {
        Structure::Leaf(t)
    }
}

impl Structure {
    pub fn bullet(s: Structure) -> Structure {
        Structure::Bullet(Arc::new(s))
    }
    pub fn circ(sort: Sort, s: Structure) -> Structure {
        Structure::Circ(sort, Arc::new(s))
    }
    pub fn dot(sort: Sort, a: Structure, b: Structure) -> Structure {
        Structure::Dot(sort, Arc::new(a), Arc::new(b))
    }
    pub fn sup(sort: Sort, a: Structure, b: Structure) -> Structure {
        Structure::Sup(sort, Arc::new(a), Arc::new(b))
    }
    /// `;` with the sort read off the first argument.
    pub fn dot_of(a: Structure, b: Structure) -> Structure {
        let s = a.sort();
        Structure::dot(s, a, b)
    }

    pub fn sort(&self) -> Sort {
        match self {
            Structure::Leaf(t) => t.sort(),
            Structure::I | Structure::Bullet(_) => Sort::L,
            Structure::Circ(s, _) | Structure::SCirc(s) => *s,
            Structure::Dot(s, _, _) | Structure::Sup(s, _, _) => *s,
        }
    }

    pub fn check_sort(&self) -> Result<Sort, SortError> {
        let expect = |x: &Structure, want: Sort| -> Result<(), SortError> {
            let found = x.check_sort()?;
            if found == want {
                Ok(())
            } else {
                Err(SortError::new(x.to_string(), want, found))
            }
        };
        match self {
            Structure::Leaf(t) => {
                t.check_sort()?;
            }
            Structure::I => {}
            Structure::Bullet(a) => {
                let found = a.check_sort()?;
                if found == Sort::L {
                    return Err(SortError::new(a.to_string(), Sort::P, Sort::L));
                }
            }
            Structure::Circ(s, a) => {
                if *s == Sort::L {
                    return Err(SortError::new(self.to_string(), Sort::P, Sort::L));
                }
                expect(a, Sort::L)?;
            }
            Structure::SCirc(s) => {
                if *s == Sort::L {
                    return Err(SortError::new(self.to_string(), Sort::P, Sort::L));
                }
            }
            Structure::Dot(s, a, b) | Structure::Sup(s, a, b) => {
                if *s == Sort::L {
                    return Err(SortError::new(self.to_string(), Sort::P, Sort::L));
                }
                expect(a, *s)?;
                expect(b, *s)?;
            }
        }
        Ok(self.sort())
    }

    /// Immediate structural children; a leaf has none.
    pub fn children(&self) -> Vec<&Structure> {
        match self {
            Structure::Leaf(_) | Structure::I | Structure::SCirc(_) => vec![],
            Structure::Bullet(a) | Structure::Circ(_, a) => vec![a],
            Structure::Dot(_, a, b) | Structure::Sup(_, a, b) => vec![a, b],
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Structure::Leaf(t) => Some(t),
            _ => None,
        }
    }

    /// Height counting both structural and operational constructors.
    pub fn depth(&self) -> usize {
        match self {
            Structure::Leaf(t) => t.depth(),
            _ => self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Structure::Leaf(t) => t.size(),
            _ => 1 + self.children().iter().map(|c| c.size()).sum::<usize>(),
        }
    }

    /// All terms occurring as leaves, left to right.
    pub fn leaves(&self) -> Vec<&Term> {
        match self {
            Structure::Leaf(t) => vec![t],
            _ => self.children().into_iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    pub fn atoms(&self, out: &mut Vec<Arc<str>>) {
        for t in self.leaves() {
            t.atoms(out);
        }
    }
}

/// A sequent. Both sides have the same sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub left: Structure,
    pub right: Structure,
}

impl Sequent {
    pub fn new(left: impl Into<Structure>, right: impl Into<Structure>) -> Sequent {
        Sequent {
            left: left.into(),
            right: right.into(),
        }
    }

    pub fn sort(&self) -> Sort {
        self.left.sort()
    }

    pub fn check_sort(&self) -> Result<Sort, SortError> {
        let l = self.left.check_sort()?;
        let r = self.right.check_sort()?;
        if l != r {
            return Err(SortError::new(self.right.to_string(), l, r));
        }
        Ok(l)
    }

    pub fn side(&self, side: Side) -> &Structure {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn atoms(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.left.atoms(&mut out);
        self.right.atoms(&mut out);
        out
    }

    pub fn size(&self) -> usize {
        self.left.size() + self.right.size()
    }

    /// Every operational term occurring anywhere in the sequent, with subterms.
    pub fn subterms(&self) -> Vec<&Term> {
        self.left
            .leaves()
            .into_iter()
            .chain(self.right.leaves())
            .flat_map(|t| t.subterms())
            .collect()
    }

    /// True when every `o` and `*` sits where its reading is the intended
    /// one: `o` of sort P in succedent, `o` of sort Pop in precedent, `*` over
    /// P in precedent, `*` over Pop in succedent.
    pub fn is_well_positioned(&self) -> bool {
        fn go(s: &Structure, pol: Polarity) -> bool {
            match s {
                Structure::Leaf(_) | Structure::I | Structure::SCirc(_) => true,
                Structure::Circ(sort, a) => {
                    let ok = match sort {
                        Sort::P => pol == Polarity::Succedent,
                        _ => pol == Polarity::Precedent,
                    };
                    ok && go(a, pol)
                }
                Structure::Bullet(a) => {
                    let ok = match a.sort() {
                        Sort::P => pol == Polarity::Precedent,
                        _ => pol == Polarity::Succedent,
                    };
                    ok && go(a, pol)
                }
                Structure::Dot(_, a, b) => go(a, pol) && go(b, pol),
                Structure::Sup(_, a, b) => go(a, pol.flip()) && go(b, pol),
            }
        }
        go(&self.left, Polarity::Precedent) && go(&self.right, Polarity::Succedent)
    }
}

/// Which side of the turnstile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Signed position of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Precedent,
    Succedent,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Precedent => Polarity::Succedent,
            Polarity::Succedent => Polarity::Precedent,
        }
    }
}

/// Address of a node: the side at the root, then child indices. Indices
/// descend through structures and, below a leaf (index 0), through terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub side: Side,
    pub steps: Vec<usize>,
}

impl Path {
    pub fn root(side: Side) -> Path {
        Path {
            side,
            steps: Vec::new(),
        }
    }

    pub fn child(&self, i: usize) -> Path {
        let mut steps = self.steps.clone();
        steps.push(i);
        Path { side: self.side, steps }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Left => "L",
            Side::Right => "R",
        };
        write!(f, "{side}")?;
        for s in &self.steps {
            write!(f, ".{s}")?;
        }
        Ok(())
    }
}

/// A node reached by a path.
#[derive(Clone, Copy, Debug)]
pub enum NodeRef<'a> {
    Structure(&'a Structure),
    Term(&'a Term),
}

/// Resolves `path` in `s`.
pub fn node_at<'a>(s: &'a Sequent, path: &Path) -> Result<NodeRef<'a>, PathError> {
    let mut cur = NodeRef::Structure(s.side(path.side));
    for (depth, &i) in path.steps.iter().enumerate() {
        let next = match cur {
            NodeRef::Structure(Structure::Leaf(t)) if i == 0 => Some(NodeRef::Term(t)),
            NodeRef::Structure(st) => st.children().get(i).map(|c| NodeRef::Structure(c)),
            NodeRef::Term(t) => t.children().get(i).map(|c| NodeRef::Term(c)),
        };
        cur = next.ok_or_else(|| PathError {
            path: path.to_string(),
            depth,
        })?;
    }
    Ok(cur)
}

/// Polarity of the node at `path`: root left is precedent, root right is
/// succedent, the first coordinate of `>` flips, everything else preserves.
pub fn polarity_at(s: &Sequent, path: &Path) -> Result<Polarity, PathError> {
    node_at(s, path)?;
    let mut pol = match path.side {
        Side::Left => Polarity::Precedent,
        Side::Right => Polarity::Succedent,
    };
    let mut cur = NodeRef::Structure(s.side(path.side));
    for &i in &path.steps {
        match cur {
            NodeRef::Structure(Structure::Sup(_, a, b)) => {
                if i == 0 {
                    pol = pol.flip();
                    cur = NodeRef::Structure(a);
                } else {
                    cur = NodeRef::Structure(b);
                }
            }
            NodeRef::Structure(Structure::Leaf(t)) => cur = NodeRef::Term(t),
            NodeRef::Structure(st) => cur = NodeRef::Structure(st.children()[i]),
            NodeRef::Term(t) => cur = NodeRef::Term(t.children()[i]),
        }
    }
    Ok(pol)
}

/// Every path to a structure node of `s`, in pre-order, left side first.
pub fn structure_paths(s: &Sequent) -> Vec<Path> {
    fn go(st: &Structure, here: Path, out: &mut Vec<Path>) {
        out.push(here.clone());
        for (i, c) in st.children().into_iter().enumerate() {
            go(c, here.child(i), out);
        }
    }
    let mut out = Vec::new();
    go(&s.left, Path::root(Side::Left), &mut out);
    go(&s.right, Path::root(Side::Right), &mut out);
    out
}

/// Structure at `path`, if the path ends on a structure node.
pub fn structure_at<'a>(s: &'a Sequent, path: &Path) -> Option<&'a Structure> {
    match node_at(s, path) {
        Ok(NodeRef::Structure(st)) => Some(st),
        _ => None,
    }
}

/// Replaces the structure at `path` (which must end on a structure node).
pub fn replace_structure(s: &Sequent, path: &Path, new: Structure) -> Option<Sequent> {
    fn go(st: &Structure, steps: &[usize], new: Structure) -> Option<Structure> {
        let Some((&i, rest)) = steps.split_first() else {
            return Some(new);
        };
        Some(match st {
            Structure::Bullet(a) if i == 0 => Structure::bullet(go(a, rest, new)?),
            Structure::Circ(srt, a) if i == 0 => Structure::circ(*srt, go(a, rest, new)?),
            Structure::Dot(srt, a, b) => match i {
                0 => Structure::Dot(*srt, Arc::new(go(a, rest, new)?), b.clone()),
                1 => Structure::Dot(*srt, a.clone(), Arc::new(go(b, rest, new)?)),
                _ => return None,
            },
            Structure::Sup(srt, a, b) => match i {
                0 => Structure::Sup(*srt, Arc::new(go(a, rest, new)?), b.clone()),
                1 => Structure::Sup(*srt, a.clone(), Arc::new(go(b, rest, new)?)),
                _ => return None,
            },
            _ => return None,
        })
    }
    let mut out = s.clone();
    match path.side {
        Side::Left => out.left = go(&s.left, &path.steps, new)?,
        Side::Right => out.right = go(&s.right, &path.steps, new)?,
    }
    Some(out)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(f, self, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_term(f, self, 0)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", StructDisplay::standalone(self))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_sequent(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_counts_small_sizes() {
        let fs = Formula::enumerate(&["p"], 3);
        // size 1: p, T, F; size 3: 2 * 3 * 3
        assert_eq!(fs.len(), 3 + 18);
    }

    #[test]
    fn polarity_flips_only_under_first_sup_coordinate() {
        let s = parse_sequent("o p > o q |- o r").unwrap();
        let p = Path {
            side: Side::Left,
            steps: vec![0],
        };
        assert_eq!(polarity_at(&s, &p).unwrap(), Polarity::Succedent);
        let q = Path {
            side: Side::Left,
            steps: vec![1],
        };
        assert_eq!(polarity_at(&s, &q).unwrap(), Polarity::Precedent);
        let dangling = Path {
            side: Side::Left,
            steps: vec![3],
        };
        assert!(polarity_at(&s, &dangling).is_err());
    }
}
