//! Nondeterministic finite automata without ε-transitions.
//!
//! States and letters are dense indices in declaration order; names are kept
//! for the text format and for reports. Every traversal visits states and
//! letters in declaration order, so witnesses are reproducible.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::order::{Letter, Word};
use crate::text::{content_lines, keyword, SyntaxError};

pub type StateId = usize;

/// Default maximum word length for slice enumeration.
pub const DEFAULT_SLICE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NfaError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("letter `{0}` declared twice")]
    DuplicateLetter(String),
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("requested length {requested} exceeds the cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    states: Vec<String>,
    letters: Vec<String>,
    // delta[state][letter] = sorted, deduplicated successors
    delta: Vec<Vec<Vec<StateId>>>,
    initial: Option<StateId>,
    finals: Vec<bool>,
}

/// The accepted words of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSlice {
    pub length: usize,
    /// Sorted by letter index.
    pub words: Vec<Word>,
}

impl Nfa {
    /// Builds an automaton from dense ids. Panics on out-of-range ids; use
    /// [`Nfa::from_names`] or [`Nfa::parse`] for untrusted input.
    pub fn from_ids(
        states: Vec<String>,
        letters: Vec<String>,
        initial: Option<StateId>,
        finals: Vec<bool>,
        transitions: impl IntoIterator<Item = (StateId, Letter, StateId)>,
    ) -> Nfa {
        let n = states.len();
        assert_eq!(finals.len(), n, "finals must cover every state");
        assert!(initial.is_none_or(|q| q < n), "initial state out of range");
        let mut delta = vec![vec![Vec::new(); letters.len()]; n];
        for (p, a, q) in transitions {
            assert!(p < n && q < n && a.index() < letters.len());
            delta[p][a.index()].push(q);
        }
        for row in &mut delta {
            for targets in row {
                targets.sort_unstable();
                targets.dedup();
            }
        }
        Nfa {
            states,
            letters,
            delta,
            initial,
            finals,
        }
    }

    pub fn from_names<S: AsRef<str>>(
        states: &[S],
        letters: &[S],
        initial: &str,
        finals: &[S],
        transitions: &[(S, S, S)],
    ) -> Result<Nfa, NfaError> {
        let states: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let letters: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        let state_ix = index_of(&states).map_err(NfaError::DuplicateState)?;
        let letter_ix: HashMap<&str, usize> = letters
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let st = |s: &str| {
            state_ix
                .get(s)
                .copied()
                .ok_or_else(|| NfaError::UnknownState(s.to_string()))
        };
        let initial = st(initial)?;
        let mut fin = vec![false; states.len()];
        for f in finals {
            fin[st(f.as_ref())?] = true;
        }
        let mut edges = Vec::with_capacity(transitions.len());
        for (p, a, q) in transitions {
            let a = *letter_ix
                .get(a.as_ref())
                .ok_or_else(|| NfaError::UnknownLetter(a.as_ref().to_string()))?;
            edges.push((st(p.as_ref())?, Letter(a as u32), st(q.as_ref())?));
        }
        Ok(Nfa::from_ids(states, letters, Some(initial), fin, edges))
    }

    /// Parses the `states:` / `initial:` / `final:` / `p a q` text format
    /// over the given alphabet.
    pub fn parse<S: AsRef<str>>(text: &str, letters: &[S]) -> Result<Nfa, NfaError> {
        let mut states: Option<(usize, Vec<String>)> = None;
        let mut initial: Option<(usize, String)> = None;
        let mut finals: Option<(usize, Vec<String>)> = None;
        let mut transitions: Vec<(usize, [String; 3])> = Vec::new();
        for (line_no, line) in content_lines(text) {
            let dup = |what: &str| SyntaxError::new(line_no, format!("duplicate `{what}:` line"));
            if let Some(rest) = keyword(line, "states") {
                if states.is_some() {
                    return Err(dup("states").into());
                }
                states = Some((line_no, rest.split_whitespace().map(str::to_string).collect()));
            } else if let Some(rest) = keyword(line, "initial") {
                if initial.is_some() {
                    return Err(dup("initial").into());
                }
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 1 {
                    return Err(SyntaxError::new(line_no, "expected exactly one initial state").into());
                }
                initial = Some((line_no, toks[0].to_string()));
            } else if let Some(rest) = keyword(line, "final") {
                if finals.is_some() {
                    return Err(dup("final").into());
                }
                finals = Some((line_no, rest.split_whitespace().map(str::to_string).collect()));
            } else {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(SyntaxError::new(
                        line_no,
                        format!("expected a transition `state letter state`, found `{line}`"),
                    )
                    .into());
                }
                transitions.push((line_no, [toks[0].into(), toks[1].into(), toks[2].into()]));
            }
        }
        let (_, states) = states.ok_or_else(|| SyntaxError::new(1, "missing `states:` line"))?;
        let letters: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        let finals = finals.map(|(_, f)| f).unwrap_or_default();
        let state_ix = index_of(&states).map_err(NfaError::DuplicateState)?;
        let letter_ix = index_of(&letters).map_err(NfaError::DuplicateLetter)?;
        let initial = match initial {
            Some((_, name)) => Some(
                *state_ix
                    .get(name.as_str())
                    .ok_or(NfaError::UnknownState(name))?,
            ),
            None if states.is_empty() => None,
            None => return Err(SyntaxError::new(1, "missing `initial:` line").into()),
        };
        let mut fin = vec![false; states.len()];
        for f in &finals {
            fin[*state_ix
                .get(f.as_str())
                .ok_or_else(|| NfaError::UnknownState(f.clone()))?] = true;
        }
        let mut edges = Vec::with_capacity(transitions.len());
        for (line_no, [p, a, q]) in &transitions {
            let lookup = |s: &String| {
                state_ix.get(s.as_str()).copied().ok_or_else(|| {
                    SyntaxError::new(*line_no, format!("undeclared state `{s}`"))
                })
            };
            let a_ix = letter_ix.get(a.as_str()).copied().ok_or_else(|| {
                SyntaxError::new(*line_no, format!("letter `{a}` is not in the alphabet"))
            })?;
            edges.push((lookup(p)?, Letter(a_ix as u32), lookup(q)?));
        }
        Ok(Nfa::from_ids(states, letters, initial, fin, edges))
    }

    /// One state looping on every letter.
    pub fn universal<S: AsRef<str>>(letters: &[S]) -> Nfa {
        let letters: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        let edges: Vec<_> = (0..letters.len()).map(|a| (0, Letter(a as u32), 0)).collect();
        Nfa::from_ids(vec!["u".into()], letters, Some(0), vec![true], edges)
    }

    /// One non-final state and no transitions.
    pub fn empty_language<S: AsRef<str>>(letters: &[S]) -> Nfa {
        let letters = letters.iter().map(|s| s.as_ref().to_string()).collect();
        Nfa::from_ids(vec!["z".into()], letters, Some(0), vec![false], [])
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letters
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).filter(|&q| self.finals[q])
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.letters.len() as u32).map(Letter)
    }

    pub fn successors(&self, q: StateId, a: Letter) -> &[StateId] {
        &self.delta[q][a.index()]
    }

    /// All transitions ordered by (source, letter, target).
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Letter, StateId)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, ts)| ts.iter().map(move |&q| (p, Letter(a as u32), q)))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions().count()
    }

    /// Set of states reached from `from` by reading `w`.
    pub fn run_from(&self, from: StateId, w: &[Letter]) -> Vec<StateId> {
        let mut current = vec![from];
        for &a in w {
            let mut next: Vec<StateId> = current
                .iter()
                .flat_map(|&q| self.successors(q, a).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                return next;
            }
            current = next;
        }
        current
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        match self.initial {
            Some(q0) => self.run_from(q0, w).into_iter().any(|q| self.finals[q]),
            None => false,
        }
    }

    fn forward_reachable(&self, from: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(p) = stack.pop() {
            for row in &self.delta[p] {
                for &q in row {
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds = vec![Vec::new(); n];
        for (p, _, q) in self.transitions() {
            preds[q].push(p);
        }
        let mut seen = self.finals.clone();
        let mut stack: Vec<StateId> = self.finals().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps only the states reachable from the initial state and
    /// co-reachable to a final state, in their original order. The result
    /// has no states when the language is empty.
    pub fn trim_bireachable(&self) -> Nfa {
        let Some(q0) = self.initial else {
            return self.restrict_to(&vec![false; self.num_states()]);
        };
        let fwd = self.forward_reachable(q0);
        let bwd = self.coreachable();
        let keep: Vec<bool> = fwd.iter().zip(&bwd).map(|(&a, &b)| a && b).collect();
        self.restrict_to(&keep)
    }

    fn restrict_to(&self, keep: &[bool]) -> Nfa {
        let mut remap = vec![None; self.num_states()];
        let mut states = Vec::new();
        for (q, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            remap[q] = Some(states.len());
            states.push(self.states[q].clone());
        }
        let initial = self.initial.and_then(|q| remap[q]);
        if initial.is_none() {
            return Nfa::from_ids(Vec::new(), self.letters.clone(), None, Vec::new(), []);
        }
        let finals = (0..self.num_states())
            .filter(|&q| keep[q])
            .map(|q| self.finals[q])
            .collect();
        let edges: Vec<_> = self
            .transitions()
            .filter_map(|(p, a, q)| Some((remap[p]?, a, remap[q]?)))
            .collect();
        Nfa::from_ids(states, self.letters.clone(), initial, finals, edges)
    }

    /// Same transitions, with `q` as both the initial and the only final state.
    pub fn loop_automaton(&self, q: StateId) -> Result<Nfa, NfaError> {
        if q >= self.num_states() {
            return Err(NfaError::UnknownState(q.to_string()));
        }
        let mut m = self.clone();
        m.initial = Some(q);
        m.finals = vec![false; self.num_states()];
        m.finals[q] = true;
        Ok(m)
    }

    /// Accepted words of length exactly `n`, with the default cap.
    pub fn enumerate_slice(&self, n: usize) -> Result<WordSlice, NfaError> {
        self.enumerate_slice_capped(n, DEFAULT_SLICE_CAP)
    }

    /// Accepted words of length exactly `n`.
    ///
    /// A depth-first walk over state sets, pruned to states that can still
    /// reach a final state in exactly the remaining number of steps, so every
    /// branch ends in an accepted word.
    pub fn enumerate_slice_capped(&self, n: usize, cap: usize) -> Result<WordSlice, NfaError> {
        if n > cap {
            return Err(NfaError::CapExceeded { requested: n, cap });
        }
        let mut words = Vec::new();
        let Some(q0) = self.initial else {
            return Ok(WordSlice { length: n, words });
        };
        let finish = self.finishing_sets(n);
        if finish[n][q0] {
            let mut prefix = Vec::with_capacity(n);
            self.slice_dfs(&[q0], n, &finish, &mut prefix, &mut words);
        }
        Ok(WordSlice { length: n, words })
    }

    // finish[k][q]: some word of length exactly k leads from q to a final state.
    fn finishing_sets(&self, n: usize) -> Vec<Vec<bool>> {
        let mut finish = Vec::with_capacity(n + 1);
        finish.push(self.finals.clone());
        for k in 1..=n {
            let prev: &Vec<bool> = &finish[k - 1];
            let row: Vec<bool> = (0..self.num_states())
                .map(|q| self.delta[q].iter().any(|ts| ts.iter().any(|&t| prev[t])))
                .collect();
            finish.push(row);
        }
        finish
    }

    fn slice_dfs(
        &self,
        current: &[StateId],
        remaining: usize,
        finish: &[Vec<bool>],
        prefix: &mut Vec<Letter>,
        out: &mut Vec<Word>,
    ) {
        if remaining == 0 {
            out.push(Word::from_letters(prefix.clone()));
            return;
        }
        for a in self.letters() {
            let mut next: Vec<StateId> = current
                .iter()
                .flat_map(|&q| self.successors(q, a).iter().copied())
                .filter(|&q| finish[remaining - 1][q])
                .collect();
            if next.is_empty() {
                continue;
            }
            next.sort_unstable();
            next.dedup();
            prefix.push(a);
            self.slice_dfs(&next, remaining - 1, finish, prefix, out);
            prefix.pop();
        }
    }

    /// Standard product over reachable state pairs; accepts the intersection.
    pub fn product_intersect(&self, other: &Nfa) -> Result<Nfa, NfaError> {
        if self.letters != other.letters {
            return Err(NfaError::AlphabetMismatch);
        }
        let (Some(i1), Some(i2)) = (self.initial, other.initial) else {
            return Ok(Nfa::from_ids(Vec::new(), self.letters.clone(), None, Vec::new(), []));
        };
        let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = vec![(i1, i2)];
        ids.insert((i1, i2), 0);
        let mut edges = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in self.letters() {
                for &p2 in self.successors(p, a) {
                    for &q2 in other.successors(q, a) {
                        let id = *ids.entry((p2, q2)).or_insert_with(|| {
                            pairs.push((p2, q2));
                            pairs.len() - 1
                        });
                        edges.push((i, a, id));
                    }
                }
            }
            i += 1;
        }
        let names = pairs
            .iter()
            .map(|&(p, q)| format!("({},{})", self.states[p], other.states[q]))
            .collect();
        let finals = pairs
            .iter()
            .map(|&(p, q)| self.finals[p] && other.finals[q])
            .collect();
        Ok(Nfa::from_ids(names, self.letters.clone(), Some(0), finals, edges))
    }

    /// Shortest word leading from `from` to a state satisfying `target`.
    ///
    /// Breadth-first, expanding states in queue order, letters and successor
    /// states in declaration order.
    pub fn shortest_path(&self, from: StateId, target: impl Fn(StateId) -> bool) -> Option<Word> {
        let n = self.num_states();
        let mut parent: Vec<Option<(StateId, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(p) = queue.pop_front() {
            if target(p) {
                let mut letters = Vec::new();
                let mut cur = p;
                while let Some((prev, a)) = parent[cur] {
                    letters.push(a);
                    cur = prev;
                }
                letters.reverse();
                return Some(Word::from_letters(letters));
            }
            for a in self.letters() {
                for &q in self.successors(p, a) {
                    if !seen[q] {
                        seen[q] = true;
                        parent[q] = Some((p, a));
                        queue.push_back(q);
                    }
                }
            }
        }
        None
    }

    /// A shortest accepted word, or `None` when the language is empty.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let q0 = self.initial?;
        self.shortest_path(q0, |q| self.finals[q])
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }
}

fn index_of(names: &[String]) -> Result<HashMap<&str, usize>, String> {
    let mut ix = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if ix.insert(n.as_str(), i).is_some() {
            return Err(n.clone());
        }
    }
    Ok(ix)
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "states:")?;
        for s in &self.states {
            write!(f, " {s}")?;
        }
        writeln!(f)?;
        if let Some(q0) = self.initial {
            writeln!(f, "initial: {}", self.states[q0])?;
        }
        write!(f, "final:")?;
        for q in self.finals() {
            write!(f, " {}", self.states[q])?;
        }
        writeln!(f)?;
        for (p, a, q) in self.transitions() {
            writeln!(f, "{} {} {}", self.states[p], self.letters[a.index()], self.states[q])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::Poset;

    const AB: [&str; 2] = ["a", "b"];

    fn astar_bstar() -> Nfa {
        Nfa::parse(
            "states: p r\ninitial: p\nfinal: p r\np a p\np b r\nr b r\n",
            &AB,
        )
        .unwrap()
    }

    fn render(ws: &[Word]) -> Vec<String> {
        let p = Poset::trivial(&AB).unwrap();
        ws.iter().map(|w| p.render(w)).collect()
    }

    #[test]
    fn parse_astar_b() {
        let m = Nfa::parse("# a*b\nstates: q0 q1\ninitial: q0\nfinal: q1\nq0 a q0\nq0 b q1\n", &AB).unwrap();
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.num_transitions(), 2);
        assert!(m.accepts(&[Letter(0), Letter(0), Letter(1)]));
        assert!(!m.accepts(&[Letter(1), Letter(0)]));
    }

    #[test]
    fn parse_rejects_undeclared_state() {
        let err = Nfa::parse("states: q0\ninitial: q0\nfinal: q0\nq0 a q9\n", &AB).unwrap_err();
        assert_eq!(err, NfaError::Syntax(SyntaxError::new(4, "undeclared state `q9`")));
        let err = Nfa::parse("states: q0\ninitial: q0\nfinal: q0\nq0 c q0\n", &AB).unwrap_err();
        assert!(matches!(err, NfaError::Syntax(SyntaxError { line: 4, .. })));
        assert!(matches!(
            Nfa::parse("states: q0\ninitial: q1\n", &AB),
            Err(NfaError::UnknownState(_))
        ));
        assert!(matches!(
            Nfa::parse("states: q0\ninitial: q0\nq0 a\n", &AB),
            Err(NfaError::Syntax(SyntaxError { line: 3, .. }))
        ));
    }

    #[test]
    fn parse_empty_finals() {
        let m = Nfa::parse("states: q0\ninitial: q0\nfinal:\nq0 a q0\n", &AB).unwrap();
        assert!(m.is_empty());
        for n in 0..4 {
            assert!(m.enumerate_slice(n).unwrap().words.is_empty());
        }
    }

    #[test]
    fn display_round_trip() {
        let m = astar_bstar();
        let text = m.to_string();
        assert_eq!(text, "states: p r\ninitial: p\nfinal: p r\np a p\np b r\nr b r\n");
        assert_eq!(Nfa::parse(&text, &AB).unwrap(), m);
    }

    #[test]
    fn trim_removes_unreachable_sink() {
        let m = Nfa::parse(
            "states: p r sink dead\ninitial: p\nfinal: r\np a p\np b r\np a sink\nsink a sink\ndead b r\n",
            &AB,
        )
        .unwrap();
        let t = m.trim_bireachable();
        assert_eq!(t.state_names(), &["p", "r"]);
        for n in 0..=6 {
            assert_eq!(m.enumerate_slice(n).unwrap(), t.enumerate_slice(n).unwrap());
        }
    }

    #[test]
    fn trim_is_idempotent_on_trim_machine() {
        let m = astar_bstar();
        assert_eq!(m.trim_bireachable(), m);
    }

    #[test]
    fn trim_with_unreachable_finals_is_empty() {
        let m = Nfa::parse("states: p f\ninitial: p\nfinal: f\np a p\n", &AB).unwrap();
        let t = m.trim_bireachable();
        assert_eq!(t.num_states(), 0);
        assert_eq!(t.initial(), None);
        assert!(t.is_empty());
    }

    #[test]
    fn loop_automaton_examples() {
        let m = astar_bstar();
        let l = m.loop_automaton(0).unwrap();
        assert_eq!(render(&l.enumerate_slice(3).unwrap().words), vec!["aaa"]);
        assert!(l.accepts(&[]));
        let m = Nfa::parse("states: p r\ninitial: p\nfinal: r\np a r\n", &AB).unwrap();
        let l = m.loop_automaton(0).unwrap();
        assert!(l.accepts(&[]));
        for n in 1..4 {
            assert!(l.enumerate_slice(n).unwrap().words.is_empty());
        }
        assert!(m.loop_automaton(7).is_err());
    }

    #[test]
    fn slices() {
        let all = Nfa::universal(&AB);
        assert_eq!(render(&all.enumerate_slice(2).unwrap().words), vec!["aa", "ab", "ba", "bb"]);
        assert_eq!(
            render(&astar_bstar().enumerate_slice(3).unwrap().words),
            vec!["aaa", "aab", "abb", "bbb"]
        );
        assert!(Nfa::empty_language(&AB).enumerate_slice(3).unwrap().words.is_empty());
        assert_eq!(
            all.enumerate_slice(17),
            Err(NfaError::CapExceeded { requested: 17, cap: 16 })
        );
        assert_eq!(all.enumerate_slice_capped(17, 17).unwrap().words.len(), 1 << 17);
    }

    #[test]
    fn product_examples() {
        let astar = Nfa::parse("states: s\ninitial: s\nfinal: s\ns a s\n", &AB).unwrap();
        let all = Nfa::universal(&AB);
        let prod = astar.product_intersect(&all).unwrap();
        for n in 0..=5 {
            assert_eq!(prod.enumerate_slice(n).unwrap(), astar.enumerate_slice(n).unwrap());
        }
        let m = astar_bstar();
        let prod = m.product_intersect(&all).unwrap();
        for n in 0..=5 {
            assert_eq!(prod.enumerate_slice(n).unwrap(), m.enumerate_slice(n).unwrap());
        }
        assert!(m.product_intersect(&Nfa::empty_language(&AB)).unwrap().is_empty());
        assert_eq!(
            m.product_intersect(&Nfa::universal(&["a"])),
            Err(NfaError::AlphabetMismatch)
        );
    }

    #[test]
    fn emptiness_witnesses() {
        assert_eq!(Nfa::universal(&AB).shortest_accepted(), Some(Word::empty()));
        let m = Nfa::parse("states: p f\ninitial: p\nfinal: f\np a p\n", &AB).unwrap();
        assert!(m.is_empty());
        let m = Nfa::parse(
            "states: p f\ninitial: p\nfinal: f\np a p\np b f\nf a f\nf b f\n",
            &AB,
        )
        .unwrap();
        assert_eq!(m.shortest_accepted(), Some(Word::from_letters(vec![Letter(1)])));
    }
}
