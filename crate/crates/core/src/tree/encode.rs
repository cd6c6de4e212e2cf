//! Words as monadic trees.
//!
//! `a1 a2 … an` becomes `a1(a2(…an(ε)))` with a constant `ε` below every
//! letter; the tree order then agrees with the word order. An NFA becomes an
//! NFTA reading the word from its last letter up.

use super::{Nfta, RankedAlphabet, Rule, Tree, TreeError};
use crate::nfa::Nfa;
use crate::order::{Letter, Poset, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedAutomaton {
    pub nfta: Nfta,
    pub alphabet: RankedAlphabet,
    /// The constant closing every encoded word.
    pub bottom: Letter,
}

/// The monadic tree of `w`; letters keep their indices.
pub fn encode_word(w: &Word, bottom: Letter) -> Tree {
    w.iter()
        .rev()
        .fold(Tree::leaf(bottom), |inner, &a| Tree::node(a, vec![inner]))
}

/// Encodes `m` over the poset `p`: unary symbols for the letters in order,
/// then a fresh bottom constant. `L(result) = { encode_word(w) | w ∈ L(m) }`.
pub fn encode_word_automaton(m: &Nfa, p: &Poset) -> Result<EncodedAutomaton, TreeError> {
    if m.letter_names() != p.letter_names() {
        return Err(TreeError::UnknownSymbol(
            m.letter_names()
                .iter()
                .find(|l| p.letter(l).is_none())
                .cloned()
                .unwrap_or_else(|| "alphabet order".to_string()),
        ));
    }
    let mut bottom_name = "ε".to_string();
    while p.letter(&bottom_name).is_some() {
        bottom_name.push('\'');
    }
    let bottom = Letter(p.len() as u32);
    let pairs: Vec<(String, String)> = p
        .letter_names()
        .iter()
        .map(|x| (bottom_name.clone(), x.clone()))
        .collect();
    let ext = p.extend(&[bottom_name.clone()], &pairs)?;
    let mut symbols: Vec<(String, usize)> = p.letter_names().iter().map(|l| (l.clone(), 1)).collect();
    symbols.push((bottom_name, 0));
    let alphabet = RankedAlphabet::new(&symbols, &ext)?;

    let mut rules: Vec<Rule> = m
        .finals()
        .map(|q| Rule {
            symbol: bottom,
            children: Vec::new(),
            target: q,
        })
        .collect();
    rules.extend(m.transitions().map(|(from, a, to)| Rule {
        symbol: a,
        children: vec![to],
        target: from,
    }));
    let mut finals = vec![false; m.num_states()];
    if let Some(q0) = m.initial() {
        finals[q0] = true;
    }
    let nfta = Nfta::new(symbols, m.state_names().to_vec(), finals, rules)?;
    Ok(EncodedAutomaton {
        nfta,
        alphabet,
        bottom,
    })
}
