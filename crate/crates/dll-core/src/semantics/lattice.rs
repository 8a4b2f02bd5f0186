//! Finite bounded lattices given by their order relation.

use std::collections::HashSet;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

/// Largest carrier supported: subsets of the carrier are `u32` bitmasks and
/// canonical forms are computed by brute force over permutations.
pub const MAX_ELEMENTS: usize = 7;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("a lattice needs between 1 and {MAX_ELEMENTS} elements, got {0}")]
    Size(usize),
    #[error("the order is not antisymmetric on {0} and {1}")]
    Antisymmetry(String, String),
    #[error("{0} and {1} have no {2}")]
    NoBound(String, String, &'static str),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown lattice `{0}`")]
    UnknownName(String),
    #[error("malformed lattice file: {0}")]
    Json(String),
}

/// `leq[i][j]` iff element i is below element j. `meet`, `join`, `top` and
/// `bot` are computed from `leq` and agree with it.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    pub name: String,
    pub elements: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub top: usize,
    pub bot: usize,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteLattice({}, {} elements)", self.name, self.size())
    }
}

impl FiniteLattice {
    /// Builds a lattice from the reflexive-transitive closure of `pairs`.
    pub fn from_order(
        name: &str,
        elements: Vec<String>,
        pairs: &[(usize, usize)],
    ) -> Result<FiniteLattice, LatticeError> {
        let n = elements.len();
        if n == 0 || n > MAX_ELEMENTS {
            return Err(LatticeError::Size(n));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(LatticeError::Antisymmetry(elements[i].clone(), elements[j].clone()));
                }
            }
        }
        let bound = |i: usize, j: usize, upper: bool| -> Option<usize> {
            let cands: Vec<usize> = (0..n)
                .filter(|&k| {
                    if upper {
                        leq[i][k] && leq[j][k]
                    } else {
                        leq[k][i] && leq[k][j]
                    }
                })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&d| if upper { leq[c][d] } else { leq[d][c] }))
        };
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                meet[i][j] = bound(i, j, false)
                    .ok_or_else(|| LatticeError::NoBound(elements[i].clone(), elements[j].clone(), "meet"))?;
                join[i][j] = bound(i, j, true)
                    .ok_or_else(|| LatticeError::NoBound(elements[i].clone(), elements[j].clone(), "join"))?;
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|i| leq[i][t]))
            .expect("finite lattices are bounded");
        let bot = (0..n)
            .find(|&b| (0..n).all(|i| leq[b][i]))
            .expect("finite lattices are bounded");
        Ok(FiniteLattice {
            name: name.to_string(),
            elements,
            leq,
            meet,
            join,
            top,
            bot,
        })
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> FiniteLattice {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        let els = (0..n).map(|i| i.to_string()).collect();
        FiniteLattice::from_order(&format!("chain{n}"), els, &pairs).expect("chains are lattices")
    }

    /// The diamond: three pairwise incomparable atoms.
    pub fn m3() -> FiniteLattice {
        let els = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        FiniteLattice::from_order("m3", els, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("m3")
    }

    /// The pentagon: `0 < a < c < 1` and `0 < b < 1`.
    pub fn n5() -> FiniteLattice {
        let els = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        FiniteLattice::from_order("n5", els, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).expect("n5")
    }

    /// `chain2`, `chain3`, .., `m3`, `n5`.
    pub fn by_name(name: &str) -> Result<FiniteLattice, LatticeError> {
        match name {
            "m3" => Ok(FiniteLattice::m3()),
            "n5" => Ok(FiniteLattice::n5()),
            _ => match name.strip_prefix("chain").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if (1..=MAX_ELEMENTS).contains(&k) => Ok(FiniteLattice::chain(k)),
                _ => Err(LatticeError::UnknownName(name.to_string())),
            },
        }
    }

    /// Reads `{"name": .., "elements": [..], "leq": [[a, b], ..]}`; the order
    /// is the reflexive-transitive closure of the listed pairs.
    pub fn from_json(text: &str) -> Result<FiniteLattice, LatticeError> {
        #[derive(Deserialize)]
        struct File {
            #[serde(default)]
            name: Option<String>,
            elements: Vec<String>,
            leq: Vec<(String, String)>,
        }
        let f: File = serde_json::from_str(text).map_err(|e| LatticeError::Json(e.to_string()))?;
        let idx = |s: &str| {
            f.elements
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| LatticeError::UnknownElement(s.to_string()))
        };
        let pairs = f
            .leq
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        FiniteLattice::from_order(f.name.as_deref().unwrap_or("file"), f.elements.clone(), &pairs)
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.meet[a][self.join[b][c]] == self.join[self.meet[a][b]][self.meet[a][c]]))
        })
    }

    /// Identity and absorption laws together with the order agreement of
    /// `meet` and `join`.
    pub fn satisfies_lattice_laws(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| {
            self.meet[a][self.top] == a
                && self.join[a][self.bot] == a
                && (0..n).all(|b| {
                    self.meet[a][b] == self.meet[b][a]
                        && self.join[a][b] == self.join[b][a]
                        && self.meet[a][self.join[a][b]] == a
                        && self.join[a][self.meet[a][b]] == a
                        && (self.leq[a][b] == (self.meet[a][b] == a))
                })
        })
    }

    /// Order relation as a bit string under the relabeling `perm`.
    fn code(&self, perm: &[usize]) -> u64 {
        let n = self.size();
        let mut code = 0u64;
        for i in 0..n {
            for j in 0..n {
                code = (code << 1) | u64::from(self.leq[perm[i]][perm[j]]);
            }
        }
        code
    }

    /// Isomorphism invariant: the least order code over all relabelings.
    pub fn canonical_code(&self) -> (usize, u64) {
        let n = self.size();
        let mut best = u64::MAX;
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p| best = best.min(self.code(p)));
        (n, best)
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// All bounded lattices with 2 to `max_size` elements, one per isomorphism
/// class, ordered by size and then by canonical code.
///
/// Candidates are orders on `0..n` with `0` bottom, `n-1` top and every
/// relation `i < j` between inner points satisfying `i < j` as integers;
/// every finite order has such a labeling (a linear extension).
pub fn enumerate_lattices(max_size: usize) -> Vec<FiniteLattice> {
    let max_size = max_size.min(MAX_ELEMENTS);
    let mut out = Vec::new();
    for n in 2..=max_size {
        let inner: Vec<(usize, usize)> = (1..n - 1).flat_map(|i| (i + 1..n - 1).map(move |j| (i, j))).collect();
        let mut seen = HashSet::new();
        let mut found = Vec::new();
        for mask in 0u32..(1 << inner.len()) {
            let mut pairs: Vec<(usize, usize)> = (1..n).map(|i| (0, i)).chain((0..n - 1).map(|i| (i, n - 1))).collect();
            pairs.extend(
                inner
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &p)| p),
            );
            // Only transitively closed masks, so each order is produced once.
            let els = (0..n).map(|i| format!("e{i}")).collect();
            let Ok(l) = FiniteLattice::from_order("", els, &pairs) else {
                continue;
            };
            let closed = inner
                .iter()
                .enumerate()
                .all(|(k, &(i, j))| l.leq[i][j] == (mask >> k & 1 == 1));
            if !closed {
                continue;
            }
            let code = l.canonical_code();
            if seen.insert(code) {
                found.push((code, l));
            }
        }
        found.sort_by_key(|(c, _)| *c);
        for (k, (_, mut l)) in found.into_iter().enumerate() {
            l.name = name_of(&l).unwrap_or_else(|| format!("l{n}_{k}"));
            out.push(l);
        }
    }
    out
}

/// Names of the standard lattices when `l` is isomorphic to one of them.
fn name_of(l: &FiniteLattice) -> Option<String> {
    let code = l.canonical_code();
    let mut named: Vec<FiniteLattice> = (1..=MAX_ELEMENTS).map(FiniteLattice::chain).collect();
    named.push(FiniteLattice::m3());
    named.push(FiniteLattice::n5());
    named.into_iter().find(|m| m.canonical_code() == code).map(|m| m.name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_lattices() {
        assert!(FiniteLattice::m3().satisfies_lattice_laws());
        assert!(FiniteLattice::n5().satisfies_lattice_laws());
        assert!(!FiniteLattice::m3().is_distributive());
        assert!(!FiniteLattice::n5().is_distributive());
        assert!(FiniteLattice::chain(4).is_distributive());
        assert_eq!(FiniteLattice::by_name("chain3").unwrap().size(), 3);
        assert!(FiniteLattice::by_name("z9").is_err());
    }

    #[test]
    fn non_lattices_are_rejected() {
        // Two incomparable maximal elements have no join.
        let els = ["0", "a", "b"].map(String::from).to_vec();
        assert!(matches!(
            FiniteLattice::from_order("v", els, &[(0, 1), (0, 2)]),
            Err(LatticeError::NoBound(..))
        ));
    }

    #[test]
    fn json_round_trip() {
        let l = FiniteLattice::from_json(
            r#"{"name": "v", "elements": ["0","a","b","1"], "leq": [["0","a"],["0","b"],["a","1"],["b","1"]]}"#,
        )
        .unwrap();
        assert_eq!(l.size(), 4);
        assert_eq!(l.join[1][2], 3);
    }

    #[test]
    fn small_pools() {
        assert_eq!(enumerate_lattices(2).len(), 1);
        let pool = enumerate_lattices(5);
        assert!(pool.iter().any(|l| l.name == "m3"));
        assert!(pool.iter().any(|l| l.name == "n5"));
        assert!(pool.iter().all(|l| l.satisfies_lattice_laws()));
    }

    /// Independent count: every relation on `n` points, kept when it is a
    /// partial order in which all pairs have a least upper and a greatest
    /// lower bound, deduplicated by relabeling.
    fn brute_force_count(n: usize) -> usize {
        let off: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let mut classes = HashSet::new();
        for mask in 0u64..(1 << off.len()) {
            let mut r = vec![vec![false; n]; n];
            for (i, row) in r.iter_mut().enumerate() {
                row[i] = true;
            }
            for (k, &(i, j)) in off.iter().enumerate() {
                r[i][j] = mask >> k & 1 == 1;
            }
            let antisym = (0..n).all(|i| (0..n).all(|j| i == j || !(r[i][j] && r[j][i])));
            let trans = (0..n).all(|i| (0..n).all(|j| !r[i][j] || (0..n).all(|k| !r[j][k] || r[i][k])));
            if !antisym || !trans {
                continue;
            }
            let has = |i: usize, j: usize, up: bool| {
                let ub: Vec<usize> = (0..n)
                    .filter(|&k| if up { r[i][k] && r[j][k] } else { r[k][i] && r[k][j] })
                    .collect();
                ub.iter()
                    .any(|&c| ub.iter().all(|&d| if up { r[c][d] } else { r[d][c] }))
            };
            if !(0..n).all(|i| (0..n).all(|j| has(i, j, true) && has(i, j, false))) {
                continue;
            }
            let mut best = u64::MAX;
            let mut perm: Vec<usize> = (0..n).collect();
            permute(&mut perm, 0, &mut |p| {
                let code = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .fold(0u64, |c, (i, j)| c << 1 | u64::from(r[p[i]][p[j]]));
                best = best.min(code);
            });
            classes.insert(best);
        }
        classes.len()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let counts: Vec<usize> = (2..=5).map(brute_force_count).collect();
        assert_eq!(counts, vec![1, 1, 2, 5]);
        for n in 2..=5 {
            let got = enumerate_lattices(5).iter().filter(|l| l.size() == n).count();
            assert_eq!(got, counts[n - 2]);
        }
        assert_eq!(enumerate_lattices(5).len(), 9);
        assert_eq!(enumerate_lattices(6).len(), 9 + 15);
    }
}
