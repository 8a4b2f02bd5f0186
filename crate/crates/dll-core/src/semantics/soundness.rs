//! Rule soundness in heterogeneous algebras, on random syntactic instances
//! and exhaustively over semantic values of the metavariables.

use rand::Rng;

use super::{heterogenize, sequent_valid, FiniteLattice, HeterogeneousAlgebra, Value};
use crate::calculus::{instantiate, Binding, MetaKind, RuleSchema, SPat, SeqPat, SortPat, Substitution, TPat};
use crate::syntax::random::{random_structure, random_term};
use crate::syntax::{Polarity, Sort};

const ATOMS: [&str; 2] = ["p", "q"];

/// Depth of random instances.
pub const INSTANCE_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleCounterexample {
    pub rule: &'static str,
    pub lattice: String,
    /// Human-readable instance or assignment and the failing direction.
    pub detail: String,
}

/// `trials` random instances of `r` over atoms `p`, `q`: whenever every
/// premise is valid in `h` the conclusion is, and for invertible rules
/// conversely.
pub fn rule_sound<R: Rng + ?Sized>(
    r: &RuleSchema,
    h: &HeterogeneousAlgebra,
    trials: usize,
    rng: &mut R,
) -> Result<(), RuleCounterexample> {
    for _ in 0..trials {
        let uniform = if rng.gen_bool(0.5) { Sort::P } else { Sort::Pop };
        let mut sub = Substitution::empty(r);
        for (i, v) in r.vars.iter().enumerate() {
            let sort = v.kind.fixed_sort().unwrap_or(uniform);
            sub.values[i] = Some(match v.kind {
                MetaKind::AtomVar => Binding::Term(crate::syntax::Term::atom(ATOMS[rng.gen_range(0..2)])),
                k if k.is_term() => Binding::Term(random_term(rng, sort, INSTANCE_DEPTH, &ATOMS)),
                _ => Binding::Struct(random_structure(rng, sort, INSTANCE_DEPTH, &ATOMS)),
            });
        }
        if r.vars.iter().any(|v| v.kind.is_uniform()) {
            sub.uniform = Some(uniform);
        }
        let (premises, conclusion) = instantiate(r, &sub).expect("random instances are well-sorted");
        let prem_ok = premises.iter().all(|p| sequent_valid(p, h));
        let concl_ok = sequent_valid(&conclusion, h);
        let fail = |dir: &str| RuleCounterexample {
            rule: r.name,
            lattice: h.lattice.name.clone(),
            detail: format!(
                "{dir}: {} / {}",
                premises.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ; "),
                conclusion
            ),
        };
        if prem_ok && !concl_ok {
            return Err(fail("premises valid, conclusion not"));
        }
        if r.invertible && concl_ok && !prem_ok {
            return Err(fail("conclusion valid, premise not"));
        }
    }
    Ok(())
}

/// Checks `r` on `l` for every assignment of carrier values to its
/// metavariables. A structure variable takes every value of its sort at the
/// polarity where it occurs; term variables of sort P (Pop) range over down-
/// (up-)sets, the values terms can take. Uniform rules are checked at P and
/// at Pop. The check is pointwise (one assignment at a time), which implies
/// the rule preserves validity for instances of any depth.
pub fn rule_sound_exhaustive(r: &RuleSchema, l: &FiniteLattice) -> Result<(), RuleCounterexample> {
    let h = heterogenize(l);
    var_polarities(r);
    let uniform_sorts: &[Sort] = if r.vars.iter().any(|v| v.kind.is_uniform()) || mentions_uniform(r) {
        &[Sort::P, Sort::Pop]
    } else {
        &[Sort::P]
    };
    for &u in uniform_sorts {
        let ranges: Vec<Vec<Value>> = r
            .vars
            .iter()
            .map(|v| {
                let sort = v.kind.fixed_sort().unwrap_or(u);
                let all = 0..h.carrier_size(sort) as Value;
                match (v.kind.is_term(), sort) {
                    (true, Sort::P) => all.filter(|&s| is_down_set(&h, s)).collect(),
                    (true, Sort::Pop) => all.filter(|&s| is_up_set(&h, s)).collect(),
                    _ => all.collect(),
                }
            })
            .collect();
        let ev = Eval { h: &h, uniform: u, r };
        let mut env = vec![0; r.vars.len()];
        let mut failure = None;
        for_each_assignment(&ranges, 0, &mut env, &mut |env| {
            let prem: Vec<bool> = r.premises.iter().map(|p| ev.holds(p, env)).collect();
            let concl = ev.holds(&r.conclusion, env);
            let bad = (prem.iter().all(|&b| b) && !concl) || (r.invertible && concl && prem.iter().any(|&b| !b));
            if bad {
                let asg: Vec<String> = r
                    .vars
                    .iter()
                    .zip(env.iter())
                    .map(|(v, x)| format!("{}={:#b}", v.name, x))
                    .collect();
                failure = Some(format!(
                    "at {u:?}: {} (premises {prem:?}, conclusion {concl})",
                    asg.join(" ")
                ));
                return false;
            }
            true
        });
        if let Some(detail) = failure {
            return Err(RuleCounterexample {
                rule: r.name,
                lattice: l.name.clone(),
                detail,
            });
        }
    }
    Ok(())
}

fn mentions_uniform(r: &RuleSchema) -> bool {
    fn s(p: &SPat) -> bool {
        match p {
            SPat::Var(_) | SPat::I => false,
            SPat::Leaf(t) => tp(t),
            SPat::Bullet(a) => s(a),
            SPat::Circ(sp, a) => *sp == SortPat::Uniform || s(a),
            SPat::SCirc(sp) => *sp == SortPat::Uniform,
            SPat::Dot(sp, a, b) | SPat::Sup(sp, a, b) => *sp == SortPat::Uniform || s(a) || s(b),
        }
    }
    fn tp(p: &TPat) -> bool {
        match p {
            TPat::Var(_) | TPat::Top | TPat::Bot => false,
            TPat::BDia(a) | TPat::BBox(a) | TPat::WBox(a) | TPat::WDia(a) => tp(a),
            TPat::Cap(sp, a, b) | TPat::Cup(sp, a, b) => *sp == SortPat::Uniform || tp(a) || tp(b),
        }
    }
    r.premises
        .iter()
        .chain([&r.conclusion])
        .any(|q| s(&q.left) || s(&q.right))
}

fn is_down_set(h: &HeterogeneousAlgebra, s: Value) -> bool {
    (0..h.n()).all(|x| s >> x & 1 == 0 || h.e_ell(x) & !s == 0)
}

fn is_up_set(h: &HeterogeneousAlgebra, s: Value) -> bool {
    (0..h.n()).all(|x| s >> x & 1 == 0 || h.e_r(x) & !s == 0)
}

/// Polarity of every structure variable.
///
/// Panics if a structure variable occurs at both polarities, which would
/// make independent per-variable values unsound.
fn var_polarities(r: &RuleSchema) -> Vec<Option<Polarity>> {
    fn walk(p: &SPat, pol: Polarity, out: &mut Vec<Option<Polarity>>, rule: &str) {
        match p {
            SPat::Var(i) => {
                assert!(
                    out[*i].is_none_or(|q| q == pol),
                    "{rule}: structure variable at both polarities"
                );
                out[*i] = Some(pol);
            }
            SPat::Leaf(_) | SPat::I | SPat::SCirc(_) => {}
            SPat::Bullet(a) | SPat::Circ(_, a) => walk(a, pol, out, rule),
            SPat::Dot(_, a, b) => {
                walk(a, pol, out, rule);
                walk(b, pol, out, rule);
            }
            SPat::Sup(_, a, b) => {
                walk(a, pol.flip(), out, rule);
                walk(b, pol, out, rule);
            }
        }
    }
    let mut out = vec![None; r.vars.len()];
    for q in r.premises.iter().chain([&r.conclusion]) {
        walk(&q.left, Polarity::Precedent, &mut out, r.name);
        walk(&q.right, Polarity::Succedent, &mut out, r.name);
    }
    out
}

fn for_each_assignment(
    ranges: &[Vec<Value>],
    i: usize,
    env: &mut Vec<Value>,
    f: &mut dyn FnMut(&[Value]) -> bool,
) -> bool {
    if i == ranges.len() {
        return f(env);
    }
    for &x in &ranges[i] {
        env[i] = x;
        if !for_each_assignment(ranges, i + 1, env, f) {
            return false;
        }
    }
    true
}

/// Evaluation of rule patterns under an assignment of values to variables.
struct Eval<'a> {
    h: &'a HeterogeneousAlgebra,
    uniform: Sort,
    r: &'a RuleSchema,
}

impl Eval<'_> {
    fn sort_of(&self, sp: SortPat) -> Sort {
        match sp {
            SortPat::Fixed(s) => s,
            SortPat::Uniform => self.uniform,
        }
    }

    fn var_sort(&self, i: usize) -> Sort {
        self.r.vars[i].kind.fixed_sort().unwrap_or(self.uniform)
    }

    fn spat_sort(&self, p: &SPat) -> Sort {
        match p {
            SPat::Var(i) => self.var_sort(*i),
            SPat::Leaf(t) => self.tpat_sort(t),
            SPat::I | SPat::Bullet(_) => Sort::L,
            SPat::Circ(sp, _) | SPat::SCirc(sp) | SPat::Dot(sp, ..) | SPat::Sup(sp, ..) => self.sort_of(*sp),
        }
    }

    fn tpat_sort(&self, p: &TPat) -> Sort {
        match p {
            TPat::Var(i) => self.var_sort(*i),
            TPat::Top | TPat::Bot | TPat::BDia(_) | TPat::BBox(_) => Sort::L,
            TPat::WBox(_) => Sort::P,
            TPat::WDia(_) => Sort::Pop,
            TPat::Cap(sp, ..) | TPat::Cup(sp, ..) => self.sort_of(*sp),
        }
    }

    fn term(&self, p: &TPat, env: &[Value]) -> Value {
        let h = self.h;
        match p {
            TPat::Var(i) => env[*i],
            TPat::Top => h.top(Sort::L),
            TPat::Bot => h.bot(Sort::L),
            TPat::BDia(a) => h.gamma(self.term(a, env)),
            TPat::BBox(a) => h.iota(self.term(a, env)),
            TPat::WBox(a) => h.e_ell(self.term(a, env) as usize),
            TPat::WDia(a) => h.e_r(self.term(a, env) as usize),
            TPat::Cap(sp, a, b) => h.meet(self.sort_of(*sp), self.term(a, env), self.term(b, env)),
            TPat::Cup(sp, a, b) => h.join(self.sort_of(*sp), self.term(a, env), self.term(b, env)),
        }
    }

    fn structure(&self, p: &SPat, pol: Polarity, env: &[Value]) -> Value {
        let h = self.h;
        let unit = |s: Sort| match pol {
            Polarity::Precedent => h.top(s),
            Polarity::Succedent => h.bot(s),
        };
        match p {
            SPat::Var(i) => env[*i],
            SPat::Leaf(t) => self.term(t, env),
            SPat::I => unit(Sort::L),
            SPat::SCirc(sp) => unit(self.sort_of(*sp)),
            SPat::Bullet(a) => {
                let x = self.structure(a, pol, env);
                match self.spat_sort(a) {
                    Sort::P => h.gamma(x),
                    _ => h.iota(x),
                }
            }
            SPat::Circ(sp, a) => {
                let x = self.structure(a, pol, env) as usize;
                match self.sort_of(*sp) {
                    Sort::P => h.e_ell(x),
                    _ => h.e_r(x),
                }
            }
            SPat::Dot(sp, a, b) => {
                let k = self.sort_of(*sp);
                let (x, y) = (self.structure(a, pol, env), self.structure(b, pol, env));
                match pol {
                    Polarity::Precedent => h.meet(k, x, y),
                    Polarity::Succedent => h.join(k, x, y),
                }
            }
            SPat::Sup(sp, a, b) => {
                let k = self.sort_of(*sp);
                let x = h.neg(self.structure(a, pol.flip(), env));
                let y = self.structure(b, pol, env);
                match pol {
                    Polarity::Precedent => h.meet(k, y, x),
                    Polarity::Succedent => h.join(k, x, y),
                }
            }
        }
    }

    fn holds(&self, q: &SeqPat, env: &[Value]) -> bool {
        let l = self.structure(&q.left, Polarity::Precedent, env);
        let r = self.structure(&q.right, Polarity::Succedent, env);
        self.h.le(self.spat_sort(&q.left), l, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{builtin_rules, lookup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_rule_is_sound_on_the_small_witnesses() {
        for l in [FiniteLattice::chain(2), FiniteLattice::chain(3), FiniteLattice::m3()] {
            for r in builtin_rules() {
                rule_sound_exhaustive(r, &l).unwrap();
            }
        }
    }

    #[test]
    fn random_instances_of_display_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = heterogenize(&FiniteLattice::m3());
        for name in ["D_PL_left", "D_P_right", "W_left", "Cap_right"] {
            rule_sound(lookup(name).unwrap(), &h, 40, &mut rng).unwrap();
        }
    }

    #[test]
    fn an_unsound_schema_is_caught() {
        // Weakening read upside down strengthens the precedent.
        let mut r = lookup("W_left").unwrap().clone();
        std::mem::swap(&mut r.premises[0], &mut r.conclusion);
        r.fresh_in_conclusion.clear();
        assert!(rule_sound_exhaustive(&r, &FiniteLattice::chain(2)).is_err());
    }
}
