//! Exact widths of finite sets under a partial order.
//!
//! The width is computed with Dilworth's theorem: a minimum chain cover of a
//! transitively closed comparability relation is `n` minus a maximum matching
//! in its split bipartite graph. A maximum antichain is read off a minimum
//! vertex cover of that graph (König). A subset-enumeration oracle for small
//! sets cross-checks the matching route.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::nfa::{Nfa, NfaError};
use crate::order::{Poset, Relation, Word};

pub const DEFAULT_ANTICHAIN_CAP: usize = 4096;
pub const BRUTE_FORCE_CAP: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WidthError {
    #[error("set of {size} elements exceeds the cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("antichain extraction failed verification on {0} elements")]
    ExtractionFailed(usize),
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antichain<T> {
    pub size: usize,
    pub members: Vec<T>,
    /// Set when the matching-based witness failed verification and the
    /// subset search supplied it instead.
    pub fallback: bool,
}

/// Maximum antichain of `items` (duplicates ignored) under the strict order
/// `less`, which must be transitive.
pub fn max_antichain_by<T: Clone + Ord>(
    items: &[T],
    less: impl Fn(&T, &T) -> bool,
    cap: usize,
) -> Result<Antichain<T>, WidthError> {
    let mut elems = items.to_vec();
    elems.sort();
    elems.dedup();
    let n = elems.len();
    if n > cap {
        return Err(WidthError::CapExceeded { size: n, cap });
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| i != j && less(&elems[i], &elems[j])).collect())
        .collect();
    let matching = hopcroft_karp(n, &adj);
    let size = n - matching.size;
    let members = konig_antichain(n, &adj, &matching);
    let ok = members.len() == size
        && members.iter().enumerate().all(|(x, &i)| {
            members[x + 1..]
                .iter()
                .all(|&j| !less(&elems[i], &elems[j]) && !less(&elems[j], &elems[i]))
        });
    if ok {
        return Ok(Antichain {
            size,
            members: members.into_iter().map(|i| elems[i].clone()).collect(),
            fallback: false,
        });
    }
    if n <= BRUTE_FORCE_CAP {
        let comparable = |a: &T, b: &T| less(a, b) || less(b, a);
        let best = brute_force_members(&elems, comparable);
        return Ok(Antichain {
            size: best.len(),
            members: best.into_iter().map(|i| elems[i].clone()).collect(),
            fallback: true,
        });
    }
    Err(WidthError::ExtractionFailed(n))
}

/// Width by exhaustive subset search; for at most [`BRUTE_FORCE_CAP`] elements.
pub fn max_antichain_bruteforce_by<T: Clone + Ord>(
    items: &[T],
    comparable: impl Fn(&T, &T) -> bool,
) -> Result<usize, WidthError> {
    let mut elems = items.to_vec();
    elems.sort();
    elems.dedup();
    if elems.len() > BRUTE_FORCE_CAP {
        return Err(WidthError::CapExceeded {
            size: elems.len(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    Ok(brute_force_members(&elems, comparable).len())
}

fn brute_force_members<T>(elems: &[T], comparable: impl Fn(&T, &T) -> bool) -> Vec<usize> {
    let n = elems.len();
    let mut incomparable = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && !comparable(&elems[i], &elems[j]) {
                incomparable[i] |= 1 << j;
            }
        }
    }
    let mut best = 0u32;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() <= best.count_ones() {
            continue;
        }
        let clique = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .all(|i| mask & !(1 << i) & !incomparable[i] == 0);
        if clique {
            best = mask;
        }
    }
    (0..n).filter(|&i| best >> i & 1 == 1).collect()
}

struct Matching {
    size: usize,
    // left[i] = right vertex matched to left vertex i
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

fn hopcroft_karp(n: usize, adj: &[Vec<usize>]) -> Matching {
    const INF: usize = usize::MAX;
    let mut left: Vec<Option<usize>> = vec![None; n];
    let mut right: Vec<Option<usize>> = vec![None; n];
    let mut dist = vec![INF; n];
    let mut size = 0;

    fn bfs(adj: &[Vec<usize>], left: &[Option<usize>], right: &[Option<usize>], dist: &mut [usize]) -> bool {
        let mut queue = std::collections::VecDeque::new();
        for u in 0..left.len() {
            if left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match right[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        found
    }

    fn dfs(
        u: usize,
        adj: &[Vec<usize>],
        left: &mut [Option<usize>],
        right: &mut [Option<usize>],
        dist: &mut [usize],
    ) -> bool {
        for &v in &adj[u] {
            let free = match right[v] {
                None => true,
                Some(w) => dist[w] == dist[u] + 1 && dfs(w, adj, left, right, dist),
            };
            if free {
                left[u] = Some(v);
                right[v] = Some(u);
                return true;
            }
        }
        dist[u] = INF;
        false
    }

    while bfs(adj, &left, &right, &mut dist) {
        for u in 0..n {
            if left[u].is_none() && dfs(u, adj, &mut left, &mut right, &mut dist) {
                size += 1;
            }
        }
    }
    Matching { size, left, right }
}

// Elements whose left copy is reachable by alternating paths from unmatched
// left vertices while their right copy is not: the complement of a minimum
// vertex cover, restricted to elements with both copies uncovered.
fn konig_antichain(n: usize, adj: &[Vec<usize>], m: &Matching) -> Vec<usize> {
    let mut left_seen = vec![false; n];
    let mut right_seen = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&u| m.left[u].is_none()).collect();
    for &u in &stack {
        left_seen[u] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if m.left[u] == Some(v) || right_seen[v] {
                continue;
            }
            right_seen[v] = true;
            if let Some(w) = m.right[v] {
                if !left_seen[w] {
                    left_seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    (0..n).filter(|&i| left_seen[i] && !right_seen[i]).collect()
}

/// Maximum antichain of a word set under the lexicographic order.
pub fn max_antichain(p: &Poset, ws: &[Word]) -> Result<Antichain<Word>, WidthError> {
    max_antichain_capped(p, ws, DEFAULT_ANTICHAIN_CAP)
}

pub fn max_antichain_capped(p: &Poset, ws: &[Word], cap: usize) -> Result<Antichain<Word>, WidthError> {
    max_antichain_by(ws, |a, b| p.relate(a, b) == Relation::RelatedForward, cap)
}

pub fn max_antichain_bruteforce(p: &Poset, ws: &[Word]) -> Result<usize, WidthError> {
    max_antichain_bruteforce_by(ws, |a, b| p.comparable(a, b))
}

/// One measured slice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthRow<T> {
    /// Word length, or tree height.
    pub n: usize,
    pub slice: usize,
    pub width: usize,
    pub witness: Vec<T>,
}

/// Exact widths per length (or per height), with an empirical growth exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthProfile<T> {
    pub rows: Vec<WidthRow<T>>,
    /// Largest `log2(width) / n` over the measured `n ≥ 1`.
    pub growth_estimate: f64,
}

impl<T> WidthProfile<T> {
    pub fn widths(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.width).collect()
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> WidthProfile<U> {
        WidthProfile {
            rows: self
                .rows
                .into_iter()
                .map(|r| WidthRow {
                    n: r.n,
                    slice: r.slice,
                    width: r.width,
                    witness: r.witness.into_iter().map(&f).collect(),
                })
                .collect(),
            growth_estimate: self.growth_estimate,
        }
    }
}

/// Widths of the given slices under the strict order `less`.
pub fn profile_from_slices<T, F>(slices: Vec<(usize, Vec<T>)>, less: F) -> Result<WidthProfile<T>, WidthError>
where
    T: Clone + Ord + Send + Sync,
    F: Fn(&T, &T) -> bool + Sync,
{
    let rows = slices
        .into_par_iter()
        .map(|(n, items)| {
            let a = max_antichain_by(&items, &less, DEFAULT_ANTICHAIN_CAP)?;
            Ok(WidthRow {
                n,
                slice: items.len(),
                width: a.size,
                witness: a.members,
            })
        })
        .collect::<Result<Vec<_>, WidthError>>()?;
    let growth_estimate = rows
        .iter()
        .filter(|r| r.n > 0 && r.width > 0)
        .map(|r| (r.width as f64).log2() / r.n as f64)
        .fold(0.0, f64::max);
    Ok(WidthProfile {
        rows,
        growth_estimate,
    })
}

/// Widths of the word slices `L(m)_{=n}` for `n = 0..=n_max`.
pub fn width_profile(m: &Nfa, p: &Poset, n_max: usize) -> Result<WidthProfile<Word>, WidthError> {
    let slices = (0..=n_max)
        .map(|n| Ok((n, m.enumerate_slice(n)?.words)))
        .collect::<Result<Vec<_>, NfaError>>()?;
    word_profile(p, slices)
}

/// Widths of precomputed word slices.
pub fn word_profile(p: &Poset, slices: Vec<(usize, Vec<Word>)>) -> Result<WidthProfile<Word>, WidthError> {
    profile_from_slices(slices, |a, b| p.relate(a, b) == Relation::RelatedForward)
}
