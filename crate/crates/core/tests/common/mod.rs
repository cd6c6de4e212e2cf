//! Seeded generators and reference oracles shared by the integration tests.
#![allow(dead_code)]

use lexwidth::cfg::{Cfg, Production, Symbol};
use lexwidth::{Letter, Nfa, Poset, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LETTERS: [&str; 4] = ["a", "b", "c", "d"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random order on the first `n` letters of [`LETTERS`]: a random DAG on a
/// shuffled labeling, closed transitively by the constructor.
pub fn random_poset(rng: &mut impl Rng, n: usize) -> Poset {
    let mut names: Vec<&str> = LETTERS[..n].to_vec();
    let letters = names.clone();
    names.shuffle(rng);
    let density = rng.gen_range(0.0..=1.0);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((names[i], names[j]));
            }
        }
    }
    Poset::new(&letters, &pairs).unwrap()
}

pub fn random_word(rng: &mut impl Rng, p: &Poset, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| Letter(rng.gen_range(0..p.len() as u32))).collect())
}

/// A trimmed NFA with at most `max_states` states over the letters of `p`.
/// Retries until the language is non-empty.
pub fn random_trimmed_nfa(rng: &mut impl Rng, p: &Poset, max_states: usize) -> Nfa {
    loop {
        let n = rng.gen_range(1..=max_states);
        let density = rng.gen_range(0.15..0.6);
        let mut edges = Vec::new();
        for from in 0..n {
            for a in p.letters() {
                for to in 0..n {
                    if rng.gen_bool(density / n as f64 * 1.5) {
                        edges.push((from, a, to));
                    }
                }
            }
        }
        let mut finals: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        finals[rng.gen_range(0..n)] = true;
        let states = (0..n).map(|i| format!("q{i}")).collect();
        let m = Nfa::from_ids(states, p.letter_names().to_vec(), Some(0), finals, edges).trim_bireachable();
        if m.num_states() > 0 {
            return m;
        }
    }
}

/// All words over `p` of length at most `max_len`, shortest first.
pub fn all_words(p: &Poset, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in p.letters() {
                let mut x = w.clone();
                x.push(a);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every partial order on three labeled letters, from all transitive and
/// antisymmetric sets of ordered pairs.
pub fn all_posets3() -> Vec<Poset> {
    let names = ["a", "b", "c"];
    let pairs: Vec<(usize, usize)> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let rel: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x).collect();
        let has = |i, j| rel.contains(&(i, j));
        let antisymmetric = rel.iter().all(|&(i, j)| !has(j, i));
        let transitive = rel.iter().all(|&(i, j)| rel.iter().all(|&(k, l)| k != j || has(i, l)));
        if antisymmetric && transitive {
            let named: Vec<(&str, &str)> = rel.iter().map(|&(i, j)| (names[i], names[j])).collect();
            out.push(Poset::new(&names, &named).unwrap());
        }
    }
    out
}

/// The order read straight off its recursive definition: the empty word is
/// below everything, `a·u ≤ b·v` iff `a < b`, or `a = b` and `u ≤ v`.
pub fn reference_le(p: &Poset, x: &[Letter], y: &[Letter]) -> bool {
    match (x.split_first(), y.split_first()) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some((a, u)), Some((b, v))) => p.lt(*a, *b) || (a == b && reference_le(p, u, v)),
    }
}

pub fn reference_comparable(p: &Poset, x: &Word, y: &Word) -> bool {
    reference_le(p, x, y) || reference_le(p, y, x)
}

/// Largest pairwise incomparable subset, by trying every subset.
pub fn reference_width(p: &Poset, ws: &[Word]) -> usize {
    let mut ws = ws.to_vec();
    ws.sort();
    ws.dedup();
    let n = ws.len();
    assert!(n <= 16);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let members: Vec<&Word> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &ws[i]).collect();
        let ok = members
            .iter()
            .enumerate()
            .all(|(i, x)| members[i + 1..].iter().all(|y| !reference_comparable(p, x, y)));
        if ok {
            best = size;
        }
    }
    best
}

/// A grammar whose nonterminal `i` only mentions nonterminals `j > i`, so
/// the language is finite. Every word has length at most `max_len`.
pub fn random_acyclic_cfg(rng: &mut impl Rng, letters: &[&str], max_len: usize) -> Cfg {
    loop {
        let n = rng.gen_range(1..=3);
        let mut productions = Vec::new();
        for lhs in 0..n {
            for _ in 0..rng.gen_range(1..=3) {
                let len = rng.gen_range(0..=3);
                let rhs = (0..len)
                    .map(|_| {
                        if lhs + 1 < n && rng.gen_bool(0.35) {
                            Symbol::N(rng.gen_range(lhs + 1..n))
                        } else {
                            Symbol::T(Letter(rng.gen_range(0..letters.len() as u32)))
                        }
                    })
                    .collect();
                productions.push(Production { lhs, rhs });
            }
        }
        // Longest yield, filled in from the last nonterminal up.
        let mut longest = vec![0usize; n];
        for a in (0..n).rev() {
            longest[a] = productions
                .iter()
                .filter(|p| p.lhs == a)
                .map(|p| {
                    p.rhs
                        .iter()
                        .map(|s| match *s {
                            Symbol::T(_) => 1,
                            Symbol::N(b) => longest[b],
                        })
                        .sum()
                })
                .max()
                .unwrap_or(0);
        }
        if longest[0] > max_len {
            continue;
        }
        let names = (0..n).map(|i| ["S", "A", "B"][i].to_string()).collect();
        return Cfg::new(letters.iter().map(|s| s.to_string()).collect(), names, 0, productions).unwrap();
    }
}

/// A grammar with up to three nonterminals and arbitrary recursion.
pub fn random_cfg(rng: &mut impl Rng, letters: &[&str]) -> Cfg {
    let n = rng.gen_range(1..=3);
    let mut productions = Vec::new();
    for lhs in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(0..=3);
            let rhs = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        Symbol::N(rng.gen_range(0..n))
                    } else {
                        Symbol::T(Letter(rng.gen_range(0..letters.len() as u32)))
                    }
                })
                .collect();
            productions.push(Production { lhs, rhs });
        }
    }
    let names = (0..n).map(|i| ["S", "A", "B"][i].to_string()).collect();
    Cfg::new(letters.iter().map(|s| s.to_string()).collect(), names, 0, productions).unwrap()
}
