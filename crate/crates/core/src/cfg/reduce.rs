//! Grammar transformations behind the undecidability of chain-ness and
//! exponential antichain growth.

use std::collections::HashSet;

use super::{Cfg, CfgError, Production, Symbol};
use crate::order::{Letter, Poset};

/// Output of a reduction: the grammar, its order, and any fresh letters that
/// had to be renamed (`(wanted, used)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub grammar: Cfg,
    pub poset: Poset,
    pub renamed: Vec<(String, String)>,
}

fn fresh(base: &str, taken: &mut HashSet<String>) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while taken.contains(&name) {
        k += 1;
        name = format!("{base}_{k}");
    }
    taken.insert(name.clone());
    name
}

// Copies `g`'s productions into `out`, shifting nonterminals by `offset` and
// mapping letters through `letters`.
fn embed(g: &Cfg, offset: usize, letters: &[Letter], out: &mut Vec<Production>) {
    out.extend(g.productions().iter().map(|p| Production {
        lhs: p.lhs + offset,
        rhs: p
            .rhs
            .iter()
            .map(|s| match *s {
                Symbol::T(a) => Symbol::T(letters[a.index()]),
                Symbol::N(b) => Symbol::N(b + offset),
            })
            .collect(),
    }));
}

fn letter_map(g: &Cfg, sigma: &[String]) -> Result<Vec<Letter>, CfgError> {
    g.letter_names()
        .iter()
        .map(|n| {
            sigma
                .iter()
                .position(|s| s == n)
                .map(|i| Letter(i as u32))
                .ok_or_else(|| CfgError::UnknownLetter(n.clone()))
        })
        .collect()
}

/// Grammar for `L(g1)·#0 ∪ L(g2)·#1` with `Σ` linearly ordered in
/// declaration order, every letter of `Σ` below `#0` and `#1`, and `#0 ∥ #1`.
/// The result is a chain iff `L(g1) ∩ L(g2) = ∅`.
pub fn reduce_intersection_to_chain<S: AsRef<str>>(g1: &Cfg, g2: &Cfg, sigma: &[S]) -> Result<Reduction, CfgError> {
    let sigma: Vec<String> = sigma.iter().map(|s| s.as_ref().to_string()).collect();
    let map1 = letter_map(g1, &sigma)?;
    let map2 = letter_map(g2, &sigma)?;
    let mut taken: HashSet<String> = sigma.iter().cloned().collect();
    if taken.len() != sigma.len() {
        return Err(CfgError::DuplicateLetter(
            sigma.iter().find(|s| sigma.iter().filter(|t| t == s).count() > 1).cloned().unwrap_or_default(),
        ));
    }
    let zero = fresh("#0", &mut taken);
    let one = fresh("#1", &mut taken);
    let renamed: Vec<(String, String)> = [("#0", &zero), ("#1", &one)]
        .into_iter()
        .filter(|(want, got)| want != got)
        .map(|(want, got)| (want.to_string(), got.clone()))
        .collect();
    let zero_id = Letter(sigma.len() as u32);
    let one_id = Letter(sigma.len() as u32 + 1);

    let start = fresh("S", &mut taken);
    let mut nonterminals = vec![start];
    nonterminals.extend(g1.nonterminal_names().iter().map(|n| fresh(&format!("{n}_1"), &mut taken)));
    nonterminals.extend(g2.nonterminal_names().iter().map(|n| fresh(&format!("{n}_2"), &mut taken)));
    let off1 = 1;
    let off2 = 1 + g1.num_nonterminals();
    let mut productions = vec![
        Production {
            lhs: 0,
            rhs: vec![Symbol::N(off1 + g1.start()), Symbol::T(zero_id)],
        },
        Production {
            lhs: 0,
            rhs: vec![Symbol::N(off2 + g2.start()), Symbol::T(one_id)],
        },
    ];
    embed(g1, off1, &map1, &mut productions);
    embed(g2, off2, &map2, &mut productions);

    let mut letters = sigma.clone();
    letters.push(zero.clone());
    letters.push(one.clone());
    let mut pairs: Vec<(String, String)> = sigma.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    for x in &sigma {
        pairs.push((x.clone(), zero.clone()));
        pairs.push((x.clone(), one.clone()));
    }
    let poset = Poset::new(&letters, &pairs)?;
    let grammar = Cfg::new(letters, nonterminals, 0, productions)?;
    Ok(Reduction {
        grammar,
        poset,
        renamed,
    })
}

/// Grammar for `(L(g)·#0)*` with every letter below `#0`. The result has
/// exponential antichain growth iff `L(g)` is not a chain.
pub fn reduce_chain_to_expantichain(g: &Cfg, p: &Poset) -> Result<Reduction, CfgError> {
    if g.letter_names() != p.letter_names() {
        return Err(CfgError::AlphabetMismatch);
    }
    let mut taken: HashSet<String> = p.letter_names().iter().cloned().collect();
    let zero = fresh("#0", &mut taken);
    let renamed = if zero == "#0" {
        Vec::new()
    } else {
        vec![("#0".to_string(), zero.clone())]
    };
    taken.extend(g.nonterminal_names().iter().cloned());
    let top = fresh("T", &mut taken);
    let zero_id = Letter(p.len() as u32);

    let mut nonterminals = vec![top];
    nonterminals.extend(g.nonterminal_names().iter().cloned());
    let mut productions = vec![
        Production {
            lhs: 0,
            rhs: vec![Symbol::N(1 + g.start()), Symbol::T(zero_id), Symbol::N(0)],
        },
        Production { lhs: 0, rhs: vec![] },
    ];
    let identity: Vec<Letter> = p.letters().collect();
    embed(g, 1, &identity, &mut productions);

    let pairs: Vec<(String, String)> = p
        .letter_names()
        .iter()
        .map(|x| (x.clone(), zero.clone()))
        .collect();
    let poset = p.extend(std::slice::from_ref(&zero), &pairs)?;
    let grammar = Cfg::new(poset.letter_names().to_vec(), nonterminals, 0, productions)?;
    Ok(Reduction {
        grammar,
        poset,
        renamed,
    })
}
