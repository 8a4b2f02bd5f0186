//! Finite lattices, their representation as heterogeneous algebras, and
//! validity of multi-type sequents.
//!
//! Values of sort L are lattice elements; values of sorts P and Pop are
//! subsets of the carrier as bitmasks. P is ordered by inclusion and Pop by
//! reverse inclusion.

mod lattice;
mod soundness;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use lattice::{enumerate_lattices, FiniteLattice, LatticeError, MAX_ELEMENTS};
pub use soundness::{rule_sound, rule_sound_exhaustive, RuleCounterexample};

use crate::syntax::{Formula, Polarity, Sequent, Sort, Structure, Term};
use crate::translate::{ell, rr};

/// Element index for L, subset bitmask for P and Pop.
pub type Value = u32;

pub type Valuation = BTreeMap<Arc<str>, usize>;

/// Valuation spaces larger than this are sampled instead of enumerated.
pub const EXHAUSTIVE_VALUATIONS: usize = 10_000;

/// A finite lattice `L` with the powersets `D` (inclusion) and `E` (reverse
/// inclusion) of its carrier and the maps `e_l`, `gamma`, `e_r`, `iota`.
#[derive(Clone, Debug)]
pub struct HeterogeneousAlgebra {
    pub lattice: FiniteLattice,
    pub full: Value,
    down: Vec<Value>,
    up: Vec<Value>,
}

pub fn heterogenize(l: &FiniteLattice) -> HeterogeneousAlgebra {
    let n = l.size();
    let set = |f: &dyn Fn(usize) -> bool| (0..n).filter(|&x| f(x)).fold(0, |m, x| m | 1 << x);
    HeterogeneousAlgebra {
        full: (1 << n) - 1,
        down: (0..n).map(|a| set(&|x| l.leq[x][a])).collect(),
        up: (0..n).map(|a| set(&|x| l.leq[a][x])).collect(),
        lattice: l.clone(),
    }
}

impl HeterogeneousAlgebra {
    pub fn n(&self) -> usize {
        self.lattice.size()
    }

    /// Principal down-set.
    pub fn e_ell(&self, a: usize) -> Value {
        self.down[a]
    }

    /// Principal up-set.
    pub fn e_r(&self, a: usize) -> Value {
        self.up[a]
    }

    /// Join of a subset; the empty join is bottom.
    pub fn gamma(&self, s: Value) -> Value {
        let l = &self.lattice;
        (0..self.n())
            .filter(|x| s >> x & 1 == 1)
            .fold(l.bot, |acc, x| l.join[acc][x]) as Value
    }

    /// Meet of a subset; the empty meet is top.
    pub fn iota(&self, s: Value) -> Value {
        let l = &self.lattice;
        (0..self.n())
            .filter(|x| s >> x & 1 == 1)
            .fold(l.top, |acc, x| l.meet[acc][x]) as Value
    }

    /// Number of values of a sort.
    pub fn carrier_size(&self, sort: Sort) -> usize {
        match sort {
            Sort::L => self.n(),
            Sort::P | Sort::Pop => 1 << self.n(),
        }
    }

    pub fn le(&self, sort: Sort, a: Value, b: Value) -> bool {
        match sort {
            Sort::L => self.lattice.leq[a as usize][b as usize],
            Sort::P => a & !b == 0,
            Sort::Pop => b & !a == 0,
        }
    }

    pub fn meet(&self, sort: Sort, a: Value, b: Value) -> Value {
        match sort {
            Sort::L => self.lattice.meet[a as usize][b as usize] as Value,
            Sort::P => a & b,
            Sort::Pop => a | b,
        }
    }

    pub fn join(&self, sort: Sort, a: Value, b: Value) -> Value {
        match sort {
            Sort::L => self.lattice.join[a as usize][b as usize] as Value,
            Sort::P => a | b,
            Sort::Pop => a & b,
        }
    }

    pub fn top(&self, sort: Sort) -> Value {
        match sort {
            Sort::L => self.lattice.top as Value,
            Sort::P => self.full,
            Sort::Pop => 0,
        }
    }

    pub fn bot(&self, sort: Sort) -> Value {
        match sort {
            Sort::L => self.lattice.bot as Value,
            Sort::P => 0,
            Sort::Pop => self.full,
        }
    }

    /// Boolean complement in `D` or `E` (the same set operation for both).
    pub fn neg(&self, a: Value) -> Value {
        self.full & !a
    }

    /// The adjunction, retraction and representation identities linking
    /// `L` with `D` and `E`. Returns the first violated law.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.n();
        let l = &self.lattice;
        let subsets = 0..=self.full;
        for s in subsets.clone() {
            for t in subsets.clone().step_by(3) {
                for u in subsets.clone().step_by(5) {
                    if s & (t | u) != (s & t) | (s & u) {
                        return Err("powerset distributivity".into());
                    }
                }
            }
        }
        for a in 0..n {
            if self.gamma(self.e_ell(a)) as usize != a {
                return Err(format!("gamma . e_l at {}", l.elements[a]));
            }
            if self.iota(self.e_r(a)) as usize != a {
                return Err(format!("iota . e_r at {}", l.elements[a]));
            }
            for s in subsets.clone() {
                if self.le(Sort::L, self.gamma(s), a as Value) != self.le(Sort::P, s, self.e_ell(a)) {
                    return Err(format!("gamma -| e_l at {s:#b}, {}", l.elements[a]));
                }
                if self.le(Sort::Pop, self.e_r(a), s) != self.le(Sort::L, a as Value, self.iota(s)) {
                    return Err(format!("e_r -| iota at {}, {s:#b}", l.elements[a]));
                }
            }
            for b in 0..n {
                let (ea, eb) = (self.e_ell(a), self.e_ell(b));
                let (ra, rb) = (self.e_r(a), self.e_r(b));
                let ok = self.gamma(ea | eb) as usize == l.join[a][b]
                    && self.gamma(ea & eb) as usize == l.meet[a][b]
                    && self.iota(self.meet(Sort::Pop, ra, rb)) as usize == l.meet[a][b]
                    && self.iota(self.join(Sort::Pop, ra, rb)) as usize == l.join[a][b];
                if !ok {
                    return Err(format!("representation of {} and {}", l.elements[a], l.elements[b]));
                }
            }
        }
        let bounds = self.gamma(0) as usize == l.bot
            && self.gamma(self.full) as usize == l.top
            && self.iota(0) as usize == l.top
            && self.iota(self.full) as usize == l.bot;
        if !bounds {
            return Err("representation of the bounds".into());
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Evaluation

fn lookup(v: &Valuation, name: &str) -> usize {
    *v.get(name).unwrap_or_else(|| panic!("valuation misses atom {name}"))
}

pub fn eval_term(t: &Term, h: &HeterogeneousAlgebra, v: &Valuation) -> Value {
    match t {
        Term::Atom(n) => lookup(v, n) as Value,
        Term::Top => h.top(Sort::L),
        Term::Bot => h.bot(Sort::L),
        Term::BDia(a) => h.gamma(eval_term(a, h, v)),
        Term::BBox(a) => h.iota(eval_term(a, h, v)),
        Term::WBox(a) => h.e_ell(eval_term(a, h, v) as usize),
        Term::WDia(a) => h.e_r(eval_term(a, h, v) as usize),
        Term::Cap(s, a, b) => h.meet(*s, eval_term(a, h, v), eval_term(b, h, v)),
        Term::Cup(s, a, b) => h.join(*s, eval_term(a, h, v), eval_term(b, h, v)),
    }
}

/// Structural connectives read as operations by position: `I`, `S0` and `;`
/// are top, top and meet in precedent position and bottom, bottom and join in
/// succedent position; `X > Y` is the residual of the meet in succedent and
/// the co-residual of the join in precedent position. `o` and `*` read as
/// `e_l`/`e_r` and `gamma`/`iota` according to sort.
pub fn eval_structure(s: &Structure, pol: Polarity, h: &HeterogeneousAlgebra, v: &Valuation) -> Value {
    match s {
        Structure::Leaf(t) => eval_term(t, h, v),
        Structure::I => unit(h, Sort::L, pol),
        Structure::SCirc(k) => unit(h, *k, pol),
        Structure::Bullet(a) => {
            let x = eval_structure(a, pol, h, v);
            match a.sort() {
                Sort::P => h.gamma(x),
                _ => h.iota(x),
            }
        }
        Structure::Circ(k, a) => {
            let x = eval_structure(a, pol, h, v) as usize;
            match k {
                Sort::P => h.e_ell(x),
                _ => h.e_r(x),
            }
        }
        Structure::Dot(k, a, b) => {
            let (x, y) = (eval_structure(a, pol, h, v), eval_structure(b, pol, h, v));
            match pol {
                Polarity::Precedent => h.meet(*k, x, y),
                Polarity::Succedent => h.join(*k, x, y),
            }
        }
        Structure::Sup(k, a, b) => {
            let x = h.neg(eval_structure(a, pol.flip(), h, v));
            let y = eval_structure(b, pol, h, v);
            match pol {
                Polarity::Precedent => h.meet(*k, y, x),
                Polarity::Succedent => h.join(*k, x, y),
            }
        }
    }
}

fn unit(h: &HeterogeneousAlgebra, sort: Sort, pol: Polarity) -> Value {
    match pol {
        Polarity::Precedent => h.top(sort),
        Polarity::Succedent => h.bot(sort),
    }
}

pub fn eval_formula(a: &Formula, l: &FiniteLattice, v: &Valuation) -> usize {
    match a {
        Formula::Atom(n) => lookup(v, n),
        Formula::Top => l.top,
        Formula::Bot => l.bot,
        Formula::And(x, y) => l.meet[eval_formula(x, l, v)][eval_formula(y, l, v)],
        Formula::Or(x, y) => l.join[eval_formula(x, l, v)][eval_formula(y, l, v)],
    }
}

/// `s` holds under `v`: the precedent reading is below the succedent reading.
pub fn sequent_holds(s: &Sequent, h: &HeterogeneousAlgebra, v: &Valuation) -> bool {
    let l = eval_structure(&s.left, Polarity::Precedent, h, v);
    let r = eval_structure(&s.right, Polarity::Succedent, h, v);
    h.le(s.sort(), l, r)
}

/// Every valuation of `atoms` into `n` elements, or a seeded sample of
/// [`EXHAUSTIVE_VALUATIONS`] of them when there are more.
pub fn valuations(atoms: &[Arc<str>], n: usize) -> Vec<Valuation> {
    let total = (n as f64).powi(atoms.len() as i32);
    if total > EXHAUSTIVE_VALUATIONS as f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        return (0..EXHAUSTIVE_VALUATIONS)
            .map(|_| atoms.iter().map(|a| (a.clone(), rng.gen_range(0..n))).collect())
            .collect();
    }
    let mut out = vec![Valuation::new()];
    for a in atoms {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |x| {
                    let mut w = v.clone();
                    w.insert(a.clone(), x);
                    w
                })
            })
            .collect();
    }
    out
}

/// A valuation falsifying `s` in `h`, if any.
pub fn falsifier(s: &Sequent, h: &HeterogeneousAlgebra) -> Option<Valuation> {
    valuations(&s.atoms(), h.n())
        .into_iter()
        .find(|v| !sequent_holds(s, h, v))
}

pub fn sequent_valid(s: &Sequent, h: &HeterogeneousAlgebra) -> bool {
    falsifier(s, h).is_none()
}

/// The first lattice of `pool` with a falsifying valuation.
pub fn countermodel(s: &Sequent, pool: &[FiniteLattice]) -> Option<(FiniteLattice, Valuation)> {
    pool.iter()
        .find_map(|l| falsifier(s, &heterogenize(l)).map(|v| (l.clone(), v)))
}

/// `a <= b` under every valuation in `l`.
pub fn formula_valid(a: &Formula, b: &Formula, l: &FiniteLattice) -> bool {
    let mut atoms = a.atoms();
    for x in b.atoms() {
        if !atoms.contains(&x) {
            atoms.push(x);
        }
    }
    valuations(&atoms, l.size())
        .iter()
        .all(|v| l.leq[eval_formula(a, l, v)][eval_formula(b, l, v)])
}

/// Whether lattice consequence `a <= b` agrees with validity of the
/// translated sequent in the heterogeneous algebra, on every pool member.
pub fn consequence_equiv_check(a: &Formula, b: &Formula, pool: &[FiniteLattice]) -> bool {
    let s = Sequent::new(ell(a), rr(b));
    pool.iter()
        .all(|l| formula_valid(a, b, l) == sequent_valid(&s, &heterogenize(l)))
}

/// Lattices with 2 to `max_size` elements; `max_size` defaults to the
/// `DLL_POOL_MAX` environment variable, else 5.
pub fn default_pool(max_size: Option<usize>) -> Vec<FiniteLattice> {
    let n = max_size
        .or_else(|| std::env::var("DLL_POOL_MAX").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(5);
    enumerate_lattices(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent, parse_term};
    use crate::translate::{axiom_sequent, AxiomName};

    fn val(pairs: &[(&str, usize)]) -> Valuation {
        pairs.iter().map(|(a, x)| (Arc::from(*a), *x)).collect()
    }

    #[test]
    fn chain2_maps() {
        let h = heterogenize(&FiniteLattice::chain(2));
        assert_eq!(h.e_ell(1), 0b11);
        assert_eq!(h.e_ell(0), 0b01);
        assert_eq!(h.gamma(0b10), 1);
        assert_eq!(h.iota(0), 1);
    }

    #[test]
    fn m3_atom_joins() {
        let h = heterogenize(&FiniteLattice::m3());
        assert_eq!(h.gamma(0b0110), 4);
        let t = parse_term("fdia (wbox p cap wbox q)").unwrap();
        assert_eq!(eval_term(&t, &h, &val(&[("p", 1), ("q", 2)])), 0);
    }

    #[test]
    fn chain3_adjunction_spot_values() {
        let h = heterogenize(&FiniteLattice::chain(3));
        assert_eq!(h.e_ell(1), 0b011);
        for s in 0..8 {
            assert_eq!(h.gamma(s) <= 1, s & !0b011 == 0);
        }
    }

    #[test]
    fn invariants_hold_on_the_pool() {
        for l in enumerate_lattices(5) {
            heterogenize(&l).check_invariants().unwrap();
        }
    }

    #[test]
    fn display_adjunction_on_chain3() {
        let h = heterogenize(&FiniteLattice::chain(3));
        // Gamma |- o X  iff  * Gamma |- X, for the P-structure Gamma = wbox p.
        for p in 0..3 {
            for x in 0..3 {
                let v = val(&[("p", p), ("x", x)]);
                let a = sequent_holds(&parse_sequent("wbox p |- o x").unwrap(), &h, &v);
                let b = sequent_holds(&parse_sequent("* wbox p |- x").unwrap(), &h, &v);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn empty_unit_in_succedent() {
        let h = heterogenize(&FiniteLattice::chain(3));
        assert_eq!(
            eval_structure(&Structure::SCirc(Sort::P), Polarity::Succedent, &h, &Valuation::new()),
            0
        );
    }

    #[test]
    fn translated_identities_evaluate_to_the_atom() {
        let h = heterogenize(&FiniteLattice::n5());
        for x in 0..5 {
            let v = val(&[("p", x)]);
            assert_eq!(eval_term(&parse_term("fdia wbox p").unwrap(), &h, &v), x as Value);
            assert_eq!(eval_term(&parse_term("fbox wdia p").unwrap(), &h, &v), x as Value);
        }
    }

    #[test]
    fn distributivity_fails_on_m3_only_among_the_diamond_and_chains() {
        let f = |s: &str| parse_formula(s).unwrap();
        let cd1 = axiom_sequent(AxiomName::CD1, &[f("p"), f("q"), f("r")]).unwrap();
        let (l, _) = countermodel(&cd1, &[FiniteLattice::chain(3), FiniteLattice::m3()]).unwrap();
        assert_eq!(l.name, "m3");
        for l in enumerate_lattices(5).iter().filter(|l| l.is_distributive()) {
            assert!(sequent_valid(&cd1, &heterogenize(l)), "{}", l.name);
        }
        let p_q = parse_sequent("p |- q").unwrap();
        let (l, v) = countermodel(&p_q, &enumerate_lattices(5)).unwrap();
        assert_eq!(l.name, "chain2");
        assert_eq!((v["p"], v["q"]), (1, 0));
    }

    #[test]
    fn consequence_examples() {
        let pool = enumerate_lattices(5);
        let f = |s: &str| parse_formula(s).unwrap();
        assert!(consequence_equiv_check(&f("p /\\ q"), &f("p"), &pool));
        assert!(consequence_equiv_check(
            &f("p /\\ (q \\/ r)"),
            &f("p /\\ q \\/ p /\\ r"),
            &pool
        ));
        assert!(consequence_equiv_check(&f("p \\/ q"), &f("p \\/ q"), &pool));
    }
}
