//! Seeded generators of well-sorted terms, structures and sequents.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Sequent, Sort, Structure, Term};

/// Random term of `sort` with depth at most `depth` over `atoms`.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, sort: Sort, depth: usize, atoms: &[&str]) -> Term {
    match sort {
        Sort::L => {
            if depth == 0 || rng.gen_bool(0.35) {
                return match rng.gen_range(0..atoms.len() + 2) {
                    0 => Term::Top,
                    1 => Term::Bot,
                    i => Term::atom(atoms[i - 2]),
                };
            }
            if rng.gen_bool(0.5) {
                Term::bdia(random_term(rng, Sort::P, depth - 1, atoms))
            } else {
                Term::bbox(random_term(rng, Sort::Pop, depth - 1, atoms))
            }
        }
        Sort::P | Sort::Pop => {
            let unary = |rng: &mut R, d: usize| {
                let a = random_term(rng, Sort::L, d, atoms);
                if sort == Sort::P {
                    Term::wbox(a)
                } else {
                    Term::wdia(a)
                }
            };
            if depth <= 1 || rng.gen_bool(0.5) {
                return unary(rng, depth.saturating_sub(1));
            }
            let a = random_term(rng, sort, depth - 1, atoms);
            let b = random_term(rng, sort, depth - 1, atoms);
            if rng.gen_bool(0.5) {
                Term::cap(sort, a, b)
            } else {
                Term::cup(sort, a, b)
            }
        }
    }
}

/// Random structure of `sort` with depth at most `depth` over `atoms`.
pub fn random_structure<R: Rng + ?Sized>(rng: &mut R, sort: Sort, depth: usize, atoms: &[&str]) -> Structure {
    if depth == 0 || rng.gen_bool(0.25) {
        return match sort {
            Sort::L if rng.gen_bool(0.2) => Structure::I,
            Sort::P | Sort::Pop if rng.gen_bool(0.15) => Structure::SCirc(sort),
            _ => Structure::Leaf(random_term(rng, sort, depth.min(2), atoms)),
        };
    }
    let d = depth - 1;
    match sort {
        Sort::L => {
            let inner = *[Sort::P, Sort::Pop].choose(rng).unwrap();
            Structure::bullet(random_structure(rng, inner, d, atoms))
        }
        Sort::P | Sort::Pop => match rng.gen_range(0..3) {
            0 => Structure::circ(sort, random_structure(rng, Sort::L, d, atoms)),
            1 => Structure::dot(
                sort,
                random_structure(rng, sort, d, atoms),
                random_structure(rng, sort, d, atoms),
            ),
            _ => Structure::sup(
                sort,
                random_structure(rng, sort, d, atoms),
                random_structure(rng, sort, d, atoms),
            ),
        },
    }
}

/// Random sequent of a random sort.
pub fn random_sequent<R: Rng + ?Sized>(rng: &mut R, depth: usize, atoms: &[&str]) -> Sequent {
    let sort = *[Sort::L, Sort::P, Sort::Pop].choose(rng).unwrap();
    Sequent::new(
        random_structure(rng, sort, depth, atoms),
        random_structure(rng, sort, depth, atoms),
    )
}
