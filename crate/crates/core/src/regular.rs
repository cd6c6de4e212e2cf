//! Polynomial versus exponential antichain growth for NFA languages.
//!
//! The language of a trimmed NFA has polynomial antichain growth exactly when
//! the loop language at every state is a chain. Each loop language is tested
//! by intersecting the interleaving of two copies of the loop automaton (the
//! second over a primed copy of the alphabet) with an automaton that accepts
//! shuffles of incomparable word pairs. A non-empty intersection yields an
//! incomparable pair of loops, and pumping that pair gives an explicit
//! exponential antichain.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::nfa::{Nfa, StateId};
use crate::order::{pump_antichain, Letter, Poset, Relation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegularError {
    #[error("automaton alphabet does not match the order's letters")]
    AlphabetMismatch,
    #[error("witness failed verification: {0}")]
    WitnessRejected(String),
}

/// The doubled alphabet `Σ ∪ Σ'`: base letters first, then their primed
/// copies in the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimedAlphabet {
    base: usize,
    names: Vec<String>,
}

impl PrimedAlphabet {
    pub fn new(p: &Poset) -> Self {
        let mut names: Vec<String> = p.letter_names().to_vec();
        for i in 0..p.len() {
            let mut primed = format!("{}'", names[i]);
            while names.contains(&primed) {
                primed.push('\'');
            }
            names.push(primed);
        }
        PrimedAlphabet {
            base: p.len(),
            names,
        }
    }

    pub fn base_len(&self) -> usize {
        self.base
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn prime(&self, a: Letter) -> Letter {
        debug_assert!(a.index() < self.base);
        Letter(a.0 + self.base as u32)
    }

    /// The base letter behind `x`, and whether `x` is primed.
    pub fn split(&self, x: Letter) -> (Letter, bool) {
        if x.index() < self.base {
            (x, false)
        } else {
            (Letter(x.0 - self.base as u32), true)
        }
    }

    /// Interleaves `a1 b1' a2 b2' …`, appending the longer word's tail.
    pub fn perfect_shuffle(&self, w1: &Word, w2: &Word) -> Word {
        let mut out = Vec::with_capacity(w1.len() + w2.len());
        for i in 0..w1.len().max(w2.len()) {
            if let Some(&a) = w1.get(i) {
                out.push(a);
            }
            if let Some(&b) = w2.get(i) {
                out.push(self.prime(b));
            }
        }
        Word::from_letters(out)
    }

    /// Splits a word over the doubled alphabet into its unprimed and primed
    /// subsequences.
    pub fn deinterleave(&self, w: &Word) -> (Word, Word) {
        let mut left = Word::empty();
        let mut right = Word::empty();
        for &x in w.iter() {
            match self.split(x) {
                (a, false) => left.push(a),
                (a, true) => right.push(a),
            }
        }
        (left, right)
    }
}

/// Automaton over `Σ ∪ Σ'` accepting exactly the shuffles that keep the two
/// words in lock-step while they agree and then diverge on an incomparable
/// letter pair.
#[derive(Debug, Clone)]
pub struct IncomparabilityAutomaton {
    pub nfa: Nfa,
    pub alphabet: PrimedAlphabet,
}

impl IncomparabilityAutomaton {
    pub const AGREE: StateId = 0;
    pub const DIVERGED: StateId = 1;

    fn letter_state(a: Letter) -> StateId {
        2 + a.index()
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.nfa.accepts(w)
    }
}

/// Builds the incomparability automaton for `p`.
///
/// States are `s0`, `s1` and one state per letter. From `s0` an unprimed `a`
/// moves to state `a`; from `a` the primed `a'` returns to `s0` and a primed
/// `b'` with `b` incomparable to `a` moves to the accepting sink `s1`.
pub fn build_incomparability_automaton(p: &Poset) -> IncomparabilityAutomaton {
    let alphabet = PrimedAlphabet::new(p);
    let fresh = |base: &str| {
        let mut name = base.to_string();
        while p.letter(&name).is_some() {
            name.push('\'');
        }
        name
    };
    let mut states = vec![fresh("s0"), fresh("s1")];
    states.extend(p.letter_names().iter().cloned());
    let mut edges = Vec::new();
    for a in p.letters() {
        let sa = IncomparabilityAutomaton::letter_state(a);
        edges.push((IncomparabilityAutomaton::AGREE, a, sa));
        edges.push((sa, alphabet.prime(a), IncomparabilityAutomaton::AGREE));
        for b in p.letters() {
            if p.incomparable(a, b) {
                edges.push((sa, alphabet.prime(b), IncomparabilityAutomaton::DIVERGED));
            }
        }
    }
    for x in 0..alphabet.names().len() {
        edges.push((
            IncomparabilityAutomaton::DIVERGED,
            Letter(x as u32),
            IncomparabilityAutomaton::DIVERGED,
        ));
    }
    let mut finals = vec![false; states.len()];
    finals[IncomparabilityAutomaton::DIVERGED] = true;
    let nfa = Nfa::from_ids(
        states,
        alphabet.names().to_vec(),
        Some(IncomparabilityAutomaton::AGREE),
        finals,
        edges,
    );
    IncomparabilityAutomaton { nfa, alphabet }
}

/// Product of two copies of the loop automaton at `q` (unprimed letters
/// drive the first copy, primed letters the second) with the
/// incomparability automaton. Accepting state is `(q, q, s1)`.
pub fn interleave_loop_product(m: &Nfa, q: StateId, b: &IncomparabilityAutomaton) -> Nfa {
    type Triple = (StateId, StateId, StateId);
    let start: Triple = (q, q, IncomparabilityAutomaton::AGREE);
    let mut ids: HashMap<Triple, StateId> = HashMap::from([(start, 0)]);
    let mut triples = vec![start];
    let mut edges = Vec::new();
    let mut i = 0;
    while i < triples.len() {
        let (x, y, s) = triples[i];
        for letter in b.nfa.letters() {
            let b_next = b.nfa.successors(s, letter);
            if b_next.is_empty() {
                continue;
            }
            let (base, primed) = b.alphabet.split(letter);
            let moved = if primed {
                m.successors(y, base)
            } else {
                m.successors(x, base)
            };
            for &c in moved {
                for &s2 in b_next {
                    let t = if primed { (x, c, s2) } else { (c, y, s2) };
                    let id = *ids.entry(t).or_insert_with(|| {
                        triples.push(t);
                        triples.len() - 1
                    });
                    edges.push((i, letter, id));
                }
            }
        }
        i += 1;
    }
    let names = triples
        .iter()
        .map(|&(x, y, s)| format!("({},{},{})", m.state_name(x), m.state_name(y), b.nfa.state_name(s)))
        .collect();
    let finals = triples
        .iter()
        .map(|&t| t == (q, q, IncomparabilityAutomaton::DIVERGED))
        .collect();
    Nfa::from_ids(names, b.alphabet.names().to_vec(), Some(0), finals, edges)
}

/// `None` iff the loop language at `q` is a chain; otherwise an incomparable
/// pair of loops, de-interleaved from a shortest accepted shuffle.
pub fn chain_check_state(m: &Nfa, q: StateId, p: &Poset) -> Option<(Word, Word)> {
    chain_check_with(m, q, p, &build_incomparability_automaton(p))
}

fn chain_check_with(m: &Nfa, q: StateId, p: &Poset, b: &IncomparabilityAutomaton) -> Option<(Word, Word)> {
    let product = interleave_loop_product(m, q, b);
    let shuffle = product.shortest_accepted()?;
    let (w1, w2) = b.alphabet.deinterleave(&shuffle);
    debug_assert_eq!(p.relate(&w1, &w2), Relation::Incomparable);
    Some((w1, w2))
}

/// Data certifying exponential antichain growth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentialWitness {
    pub state: String,
    /// Incomparable loops at `state`.
    pub w1: Word,
    pub w2: Word,
    /// Shortest word from the initial state to `state`.
    pub access: Word,
    /// Shortest word from `state` to a final state.
    pub exit: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every loop language is a chain. `empty_language` marks the degenerate
    /// case of a machine accepting nothing.
    Polynomial { empty_language: bool },
    Exponential(ExponentialWitness),
}

impl Verdict {
    pub fn is_exponential(&self) -> bool {
        matches!(self, Verdict::Exponential(_))
    }

    pub fn witness(&self) -> Option<&ExponentialWitness> {
        match self {
            Verdict::Exponential(w) => Some(w),
            Verdict::Polynomial { .. } => None,
        }
    }
}

impl ExponentialWitness {
    /// Checks the witness against the machine it came from.
    pub fn verify(&self, m: &Nfa, p: &Poset) -> Result<(), RegularError> {
        let reject = |msg: &str| Err(RegularError::WitnessRejected(msg.to_string()));
        if p.relate(&self.w1, &self.w2) != Relation::Incomparable {
            return reject("loop pair is comparable");
        }
        let Some(q) = m.state(&self.state) else {
            return reject("unknown state");
        };
        for w in [&self.w1, &self.w2] {
            if !m.run_from(q, w).contains(&q) {
                return reject("word is not a loop at the witness state");
            }
        }
        let Some(q0) = m.initial() else {
            return reject("machine has no initial state");
        };
        if !m.run_from(q0, &self.access).contains(&q) {
            return reject("access word does not reach the witness state");
        }
        if !m.run_from(q, &self.exit).into_iter().any(|f| m.is_final(f)) {
            return reject("exit word does not reach a final state");
        }
        for w in [&self.w1, &self.w2] {
            if !m.accepts(&Word::join([&self.access, w, &self.exit])) {
                return reject("pumped word is not accepted");
            }
        }
        Ok(())
    }
}

/// Classifies the antichain growth of `L(m)` under `p`.
///
/// States are checked in declaration order; the lowest failing state
/// provides the witness, which is verified before it is returned.
pub fn classify_nfa(m: &Nfa, p: &Poset) -> Result<Verdict, RegularError> {
    if m.letter_names() != p.letter_names() {
        return Err(RegularError::AlphabetMismatch);
    }
    let trimmed = m.trim_bireachable();
    let Some(q0) = trimmed.initial() else {
        return Ok(Verdict::Polynomial {
            empty_language: true,
        });
    };
    let b = build_incomparability_automaton(p);
    let found = (0..trimmed.num_states())
        .into_par_iter()
        .find_map_first(|q| chain_check_with(&trimmed, q, p, &b).map(|pair| (q, pair)));
    let Some((q, (w1, w2))) = found else {
        return Ok(Verdict::Polynomial {
            empty_language: false,
        });
    };
    let access = trimmed
        .shortest_path(q0, |s| s == q)
        .expect("trimmed state is reachable");
    let exit = trimmed
        .shortest_path(q, |s| trimmed.is_final(s))
        .expect("trimmed state is co-reachable");
    let witness = ExponentialWitness {
        state: trimmed.state_name(q).to_string(),
        w1,
        w2,
        access,
        exit,
    };
    witness.verify(m, p)?;
    Ok(Verdict::Exponential(witness))
}

/// `2^k` equal-length accepted words forming an antichain:
/// `access · (w1w2 | w2w1)^k · exit`.
pub fn exponential_family(w: &ExponentialWitness, p: &Poset, k: u32) -> Vec<Word> {
    pump_antichain(p, &w.w1, &w.w2, &w.access, &w.exit, k)
        .expect("witness loops are incomparable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::is_antichain;

    fn word(p: &Poset, s: &str) -> Word {
        p.parse_word(s).unwrap()
    }

    #[test]
    fn primed_names_are_fresh() {
        let p = Poset::trivial(&["a", "a'"]).unwrap();
        let alpha = PrimedAlphabet::new(&p);
        assert_eq!(alpha.names(), &["a", "a'", "a''", "a'''"]);
        assert_eq!(alpha.split(Letter(2)), (Letter(0), true));
        assert_eq!(alpha.prime(Letter(1)), Letter(3));
    }

    #[test]
    fn b_accepts_shuffle_of_diverging_pair() {
        // a < b, a < c, b ∥ c
        let p = Poset::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        let b = build_incomparability_automaton(&p);
        let s = b.alphabet.perfect_shuffle(&word(&p, "ab"), &word(&p, "ac"));
        assert_eq!(b.nfa.run_from(0, &s[..2]), vec![IncomparabilityAutomaton::AGREE]);
        assert_eq!(b.nfa.run_from(0, &s[..3]), vec![IncomparabilityAutomaton::letter_state(p.letter("b").unwrap())]);
        assert!(b.accepts(&s));
    }

    #[test]
    fn b_rejects_equal_and_prefix_pairs() {
        let p = Poset::trivial(&["a", "b"]).unwrap();
        let b = build_incomparability_automaton(&p);
        let same = b.alphabet.perfect_shuffle(&word(&p, "ab"), &word(&p, "ab"));
        assert!(!b.accepts(&same));
        assert_eq!(b.nfa.run_from(0, &same), vec![IncomparabilityAutomaton::AGREE]);
        let prefix = b.alphabet.perfect_shuffle(&word(&p, "a"), &word(&p, "ab"));
        assert!(!b.accepts(&prefix));
        assert!(b.nfa.run_from(0, &prefix).is_empty());
    }

    fn one_state_ab() -> Nfa {
        Nfa::parse("states: q\ninitial: q\nfinal: q\nq a q\nq b q\n", &["a", "b"]).unwrap()
    }

    #[test]
    fn product_nonempty_for_free_letters() {
        let p = Poset::trivial(&["a", "b"]).unwrap();
        let b = build_incomparability_automaton(&p);
        let prod = interleave_loop_product(&one_state_ab(), 0, &b);
        let shuffle = prod.shortest_accepted().unwrap();
        // BFS explores unprimed letters before primed ones
        assert_eq!(b.alphabet.names()[shuffle[0].index()], "a");
        assert_eq!(b.alphabet.names()[shuffle[1].index()], "b'");
        assert_eq!(shuffle.len(), 2);
    }

    #[test]
    fn product_empty_for_total_order() {
        let p = Poset::total(&["a", "b"]).unwrap();
        let b = build_incomparability_automaton(&p);
        assert!(interleave_loop_product(&one_state_ab(), 0, &b).is_empty());
    }

    #[test]
    fn product_empty_without_cycle() {
        let p = Poset::trivial(&["a", "b"]).unwrap();
        let m = Nfa::parse("states: p r\ninitial: p\nfinal: r\np a r\np b r\n", &["a", "b"]).unwrap();
        let b = build_incomparability_automaton(&p);
        assert!(interleave_loop_product(&m, 0, &b).is_empty());
        assert_eq!(chain_check_state(&m, 0, &p), None);
    }

    #[test]
    fn chain_check_examples() {
        let bits = Poset::trivial(&["0", "1"]).unwrap();
        let m = Nfa::parse("states: q\ninitial: q\nfinal: q\nq 0 q\nq 1 q\n", &["0", "1"]).unwrap();
        let (w1, w2) = chain_check_state(&m, 0, &bits).unwrap();
        assert_eq!((bits.render(&w1), bits.render(&w2)), ("0".into(), "1".into()));
        let total = Poset::total(&["a", "b"]).unwrap();
        assert_eq!(chain_check_state(&one_state_ab(), 0, &total), None);
    }

    #[test]
    fn classify_free_letters_is_exponential() {
        let p = Poset::trivial(&["a", "b"]).unwrap();
        let v = classify_nfa(&one_state_ab(), &p).unwrap();
        let w = v.witness().unwrap();
        assert_eq!((p.render(&w.w1), p.render(&w.w2)), ("a".into(), "b".into()));
        assert!(w.access.is_empty() && w.exit.is_empty());
        let fam = exponential_family(w, &p, 3);
        assert_eq!(fam.len(), 8);
        assert!(fam.iter().all(|x| x.len() == 6 && one_state_ab().accepts(x)));
        assert!(is_antichain(&p, &fam));
        assert_eq!(exponential_family(w, &p, 0), vec![Word::empty()]);
    }

    #[test]
    fn classify_astar_bstar_is_polynomial() {
        let p = Poset::total(&["a", "b"]).unwrap();
        let m = Nfa::parse("states: p r\ninitial: p\nfinal: p r\np a p\np b r\nr b r\n", &["a", "b"]).unwrap();
        assert_eq!(
            classify_nfa(&m, &p).unwrap(),
            Verdict::Polynomial { empty_language: false }
        );
    }

    #[test]
    fn classify_post_b_loop() {
        let p = Poset::new(&["a", "b", "0", "1"], &[("a", "b")]).unwrap();
        let m = Nfa::parse(
            "states: s t\ninitial: s\nfinal: t\ns a s\ns b t\nt 0 t\nt 1 t\n",
            p.letter_names(),
        )
        .unwrap();
        let v = classify_nfa(&m, &p).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.state, "t");
        assert_eq!((p.render(&w.w1), p.render(&w.w2)), ("0".into(), "1".into()));
        assert_eq!(p.render(&w.access), "b");
        let fam = exponential_family(w, &p, 2);
        assert_eq!(fam.len(), 4);
        assert!(fam.iter().all(|x| m.accepts(x)));
        assert!(is_antichain(&p, &fam));
    }

    #[test]
    fn classify_empty_language() {
        let p = Poset::trivial(&["a", "b"]).unwrap();
        let m = Nfa::parse("states: p f\ninitial: p\nfinal: f\np a p\n", &["a", "b"]).unwrap();
        assert_eq!(
            classify_nfa(&m, &p).unwrap(),
            Verdict::Polynomial { empty_language: true }
        );
    }

    #[test]
    fn classify_rejects_alphabet_mismatch() {
        let p = Poset::trivial(&["a"]).unwrap();
        assert_eq!(classify_nfa(&one_state_ab(), &p), Err(RegularError::AlphabetMismatch));
    }

    #[test]
    fn verify_rejects_forged_witness() {
        let p = Poset::trivial(&["a", "b"]).unwrap();
        let m = one_state_ab();
        let forged = ExponentialWitness {
            state: "q".into(),
            w1: word(&p, "a"),
            w2: word(&p, "ab"),
            access: Word::empty(),
            exit: Word::empty(),
        };
        assert!(forged.verify(&m, &p).is_err());
    }
}
