//! Context-free grammars over a partially ordered alphabet.
//!
//! Whether a context-free language has exponential antichain growth is
//! undecidable, so [`classify_cfg_bounded`] is a semi-decision: it samples
//! self-embeddings `A ⇒* wAu` up to a derivation depth and reports either a
//! verified witness or `NoWitnessUpTo(depth)`. The module also provides exact
//! length slices, a membership check, and the two reductions used to show
//! undecidability.
//!
//! Text format:
//!
//! ```text
//! nonterminals: S T
//! start: S
//! S -> a S b | T
//! T ->
//! ```
//!
//! An empty right side (or the token `ε`) is the empty word. Tokens that are
//! not declared nonterminals must be letters of the alphabet.

mod embed;
mod reduce;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::nfa::WordSlice;
use crate::order::{Letter, OrderError, Word};
use crate::text::{content_lines, keyword, SyntaxError};

pub use embed::{
    classify_cfg_bounded, default_depth, enumerate_self_embeddings, CfgVerdict, CfgWitness,
    CfgWitnessKind, SelfEmbedding, SpineStep, DEFAULT_EMBEDDING_CAP,
};
pub use reduce::{reduce_chain_to_expantichain, reduce_intersection_to_chain, Reduction};

pub type NontermId = usize;

/// Default maximum length for [`Cfg::slice`].
pub const DEFAULT_CFG_SLICE_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfgError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("nonterminal `{0}` declared twice")]
    DuplicateNonterminal(String),
    #[error("letter `{0}` declared twice")]
    DuplicateLetter(String),
    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("`{0}` is both a letter and a nonterminal")]
    SymbolClash(String),
    #[error("grammar has no nonterminals")]
    NoNonterminals,
    #[error("production refers to a symbol id out of range")]
    BadProduction,
    #[error("grammar generates the empty language")]
    EmptyLanguage,
    #[error("grammar and order are over different alphabets")]
    AlphabetMismatch,
    #[error("requested length {requested} exceeds the cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("enumeration exceeded the cap of {0} results")]
    TooManyResults(usize),
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T(Letter),
    N(NontermId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: NontermId,
    pub rhs: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    letters: Vec<String>,
    nonterminals: Vec<String>,
    start: NontermId,
    productions: Vec<Production>,
    // by_lhs[A] = indices of A's productions, in declaration order
    by_lhs: Vec<Vec<usize>>,
}

impl Cfg {
    pub fn new(
        letters: Vec<String>,
        nonterminals: Vec<String>,
        start: NontermId,
        productions: Vec<Production>,
    ) -> Result<Cfg, CfgError> {
        let mut seen = HashSet::new();
        for l in &letters {
            if !seen.insert(l.as_str()) {
                return Err(CfgError::DuplicateLetter(l.clone()));
            }
        }
        let mut nts = HashSet::new();
        for n in &nonterminals {
            if seen.contains(n.as_str()) {
                return Err(CfgError::SymbolClash(n.clone()));
            }
            if !nts.insert(n.as_str()) {
                return Err(CfgError::DuplicateNonterminal(n.clone()));
            }
        }
        if nonterminals.is_empty() {
            return Err(CfgError::NoNonterminals);
        }
        if start >= nonterminals.len() {
            return Err(CfgError::BadProduction);
        }
        let mut by_lhs = vec![Vec::new(); nonterminals.len()];
        for (i, p) in productions.iter().enumerate() {
            let ok = p.lhs < nonterminals.len()
                && p.rhs.iter().all(|s| match *s {
                    Symbol::T(a) => a.index() < letters.len(),
                    Symbol::N(b) => b < nonterminals.len(),
                });
            if !ok {
                return Err(CfgError::BadProduction);
            }
            by_lhs[p.lhs].push(i);
        }
        Ok(Cfg {
            letters,
            nonterminals,
            start,
            productions,
            by_lhs,
        })
    }

    /// Parses the text format over the given alphabet.
    pub fn parse<S: AsRef<str>>(text: &str, letters: &[S]) -> Result<Cfg, CfgError> {
        let letters: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        let letter_ids: HashMap<&str, Letter> = letters
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), Letter(i as u32)))
            .collect();
        if letter_ids.len() != letters.len() {
            let dup = letters
                .iter()
                .enumerate()
                .find(|(i, l)| letters[..*i].contains(l))
                .map(|(_, l)| l.clone())
                .unwrap_or_default();
            return Err(CfgError::DuplicateLetter(dup));
        }
        let lines: Vec<(usize, &str)> = content_lines(text).collect();

        let mut nonterminals: Vec<String> = Vec::new();
        let mut declared = false;
        for &(line, content) in &lines {
            if let Some(rest) = keyword(content, "nonterminals") {
                declared = true;
                for name in rest.split_whitespace() {
                    if nonterminals.iter().any(|n| n == name) {
                        return Err(SyntaxError::new(line, format!("nonterminal `{name}` declared twice")).into());
                    }
                    if letter_ids.contains_key(name) {
                        return Err(SyntaxError::new(line, format!("`{name}` is both a letter and a nonterminal")).into());
                    }
                    nonterminals.push(name.to_string());
                }
            }
        }
        if !declared {
            // Without a declaration, left-hand sides are the nonterminals.
            for &(_, content) in &lines {
                if let Some((lhs, _)) = content.split_once("->") {
                    let lhs = lhs.trim();
                    if !lhs.is_empty() && !nonterminals.iter().any(|n| n == lhs) {
                        nonterminals.push(lhs.to_string());
                    }
                }
            }
        }
        let nt_ids: HashMap<String, NontermId> = nonterminals
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();

        let mut start = None;
        let mut productions = Vec::new();
        for &(line, content) in &lines {
            if keyword(content, "nonterminals").is_some() {
                continue;
            }
            if let Some(rest) = keyword(content, "start") {
                let id = *nt_ids
                    .get(rest)
                    .ok_or_else(|| SyntaxError::new(line, format!("start symbol `{rest}` is not a nonterminal")))?;
                if start.replace(id).is_some() {
                    return Err(SyntaxError::new(line, "start symbol given twice").into());
                }
                continue;
            }
            let Some((lhs, rhs)) = content.split_once("->") else {
                return Err(SyntaxError::new(line, format!("expected a production `A -> ...`, found `{content}`")).into());
            };
            let lhs = lhs.trim();
            let lhs_id = *nt_ids
                .get(lhs)
                .ok_or_else(|| SyntaxError::new(line, format!("left side `{lhs}` is not a nonterminal")))?;
            for alt in rhs.split('|') {
                let mut body = Vec::new();
                for token in alt.split_whitespace() {
                    if token == "ε" {
                        continue;
                    }
                    if let Some(&n) = nt_ids.get(token) {
                        body.push(Symbol::N(n));
                    } else if let Some(&a) = letter_ids.get(token) {
                        body.push(Symbol::T(a));
                    } else {
                        return Err(SyntaxError::new(line, format!("unknown symbol `{token}`")).into());
                    }
                }
                productions.push(Production { lhs: lhs_id, rhs: body });
            }
        }
        if nonterminals.is_empty() {
            return Err(CfgError::NoNonterminals);
        }
        Cfg::new(letters, nonterminals, start.unwrap_or(0), productions)
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letters
    }

    pub fn nonterminal_names(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn nonterminal_name(&self, a: NontermId) -> &str {
        &self.nonterminals[a]
    }

    pub fn nonterminal(&self, name: &str) -> Option<NontermId> {
        self.nonterminals.iter().position(|n| n == name)
    }

    pub fn num_nonterminals(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn start(&self) -> NontermId {
        self.start
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// `(index, production)` pairs with left side `a`.
    pub fn productions_of(&self, a: NontermId) -> impl Iterator<Item = (usize, &Production)> + '_ {
        self.by_lhs[a].iter().map(move |&i| (i, &self.productions[i]))
    }

    /// Removes non-generating, then unreachable nonterminals. Fails with
    /// [`CfgError::EmptyLanguage`] when the start symbol is non-generating.
    pub fn trim(&self) -> Result<Cfg, CfgError> {
        let n = self.nonterminals.len();
        let mut generating = vec![false; n];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if !generating[p.lhs] && p.rhs.iter().all(|s| matches!(s, Symbol::T(_)) || matches!(s, Symbol::N(b) if generating[*b])) {
                    generating[p.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !generating[self.start] {
            return Err(CfgError::EmptyLanguage);
        }
        let usable = |p: &Production| {
            generating[p.lhs] && p.rhs.iter().all(|s| !matches!(s, Symbol::N(b) if !generating[*b]))
        };
        let mut reachable = vec![false; n];
        reachable[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(a) = stack.pop() {
            for (_, p) in self.productions_of(a) {
                if !usable(p) {
                    continue;
                }
                for s in &p.rhs {
                    if let Symbol::N(b) = *s {
                        if !reachable[b] {
                            reachable[b] = true;
                            stack.push(b);
                        }
                    }
                }
            }
        }
        let mut remap = vec![None; n];
        let mut names = Vec::new();
        for a in 0..n {
            if reachable[a] {
                remap[a] = Some(names.len());
                names.push(self.nonterminals[a].clone());
            }
        }
        let productions = self
            .productions
            .iter()
            .filter(|p| reachable[p.lhs] && usable(p))
            .map(|p| Production {
                lhs: remap[p.lhs].expect("reachable"),
                rhs: p
                    .rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::N(b) => Symbol::N(remap[b].expect("reachable via usable production")),
                        t => t,
                    })
                    .collect(),
            })
            .collect();
        Cfg::new(
            self.letters.clone(),
            names,
            remap[self.start].expect("start is reachable"),
            productions,
        )
    }

    /// Canonical shortest terminal yields, one per generating nonterminal.
    pub fn shortest_yields(&self) -> Vec<Option<Word>> {
        Yields::compute(self).words
    }

    /// Whether `a ⇒* w`.
    pub fn derives(&self, a: NontermId, w: &[Letter]) -> bool {
        let n = w.len();
        let nts = self.nonterminals.len();
        // d[A][i][len]: A ⇒* w[i..i+len]
        let mut d = vec![vec![vec![false; n + 1]; n + 1]; nts];
        for len in 0..=n {
            for i in 0..=n - len {
                loop {
                    let mut changed = false;
                    for p in &self.productions {
                        if !d[p.lhs][i][len] && matches_span(&p.rhs, w, i, i + len, &d) {
                            d[p.lhs][i][len] = true;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
        }
        d[a][0][n]
    }

    /// Whether `w ∈ L(G)`.
    pub fn generates(&self, w: &[Letter]) -> bool {
        self.derives(self.start, w)
    }

    /// Exact `L(G)_{=n}` for `n ≤` [`DEFAULT_CFG_SLICE_CAP`].
    pub fn slice(&self, n: usize) -> Result<WordSlice, CfgError> {
        self.slice_capped(n, DEFAULT_CFG_SLICE_CAP)
    }

    pub fn slice_capped(&self, n: usize, cap: usize) -> Result<WordSlice, CfgError> {
        if n > cap {
            return Err(CfgError::CapExceeded { requested: n, cap });
        }
        Ok(self.slices_upto(n).pop().expect("n + 1 tables"))
    }

    /// `L(G)_{=k}` for every `k ≤ n`, computed bottom-up over
    /// (nonterminal, length).
    pub(crate) fn slices_upto(&self, n: usize) -> Vec<WordSlice> {
        let nts = self.nonterminals.len();
        let mut table: Vec<Vec<BTreeSet<Word>>> = vec![Vec::with_capacity(n + 1); nts];
        for len in 0..=n {
            for row in table.iter_mut() {
                row.push(BTreeSet::new());
            }
            loop {
                let mut fresh: Vec<(NontermId, Word)> = Vec::new();
                for p in &self.productions {
                    let mut out = Vec::new();
                    sequence_words(&p.rhs, len, &table, &mut Word::empty(), &mut out);
                    fresh.extend(
                        out.into_iter()
                            .filter(|w| !table[p.lhs][len].contains(w))
                            .map(|w| (p.lhs, w)),
                    );
                }
                if fresh.is_empty() {
                    break;
                }
                for (a, w) in fresh {
                    table[a][len].insert(w);
                }
            }
        }
        let start = std::mem::take(&mut table[self.start]);
        start
            .into_iter()
            .enumerate()
            .map(|(length, words)| WordSlice {
                length,
                words: words.into_iter().collect(),
            })
            .collect()
    }
}

// Whether the symbol sequence `rhs` derives w[i..j], given all spans shorter
// than j - i and the current state of the span itself.
fn matches_span(rhs: &[Symbol], w: &[Letter], i: usize, j: usize, d: &[Vec<Vec<bool>>]) -> bool {
    let width = j - i;
    let mut reach = vec![false; width + 1];
    reach[0] = true;
    for s in rhs {
        let mut next = vec![false; width + 1];
        for off in 0..=width {
            if !reach[off] {
                continue;
            }
            let pos = i + off;
            match *s {
                Symbol::T(a) => {
                    if pos < j && w[pos] == a {
                        next[off + 1] = true;
                    }
                }
                Symbol::N(b) => {
                    for len in 0..=(j - pos) {
                        if d[b][pos][len] {
                            next[off + len] = true;
                        }
                    }
                }
            }
        }
        reach = next;
        if !reach.iter().any(|&r| r) {
            return false;
        }
    }
    reach[width]
}

// Appends to `out` every word of exactly `len` letters derivable from `rhs`
// using the word sets in `table`.
fn sequence_words(rhs: &[Symbol], len: usize, table: &[Vec<BTreeSet<Word>>], prefix: &mut Word, out: &mut Vec<Word>) {
    let Some((first, rest)) = rhs.split_first() else {
        if len == 0 {
            out.push(prefix.clone());
        }
        return;
    };
    match *first {
        Symbol::T(a) => {
            if len == 0 {
                return;
            }
            let mut next = prefix.clone();
            next.push(a);
            sequence_words(rest, len - 1, table, &mut next, out);
        }
        Symbol::N(b) => {
            for k in 0..=len {
                for w in &table[b][k] {
                    let mut next = prefix.concat(w);
                    sequence_words(rest, len - k, table, &mut next, out);
                }
            }
        }
    }
}

/// Shortest yields with the production that realises each one. A
/// nonterminal's chosen production only mentions nonterminals finalised
/// before it, so expansions terminate.
pub(crate) struct Yields {
    pub(crate) best: Vec<Option<usize>>,
    pub(crate) words: Vec<Option<Word>>,
}

impl Yields {
    pub(crate) fn compute(g: &Cfg) -> Yields {
        let n = g.nonterminals.len();
        let mut best = vec![None; n];
        let mut words: Vec<Option<Word>> = vec![None; n];
        loop {
            // Cheapest ready production per unfinished nonterminal; ties go to
            // the lower nonterminal, then the earlier production.
            let mut pick: Option<(usize, NontermId, usize)> = None;
            for (i, p) in g.productions.iter().enumerate() {
                if words[p.lhs].is_some() {
                    continue;
                }
                let mut len = 0;
                let mut ready = true;
                for s in &p.rhs {
                    match *s {
                        Symbol::T(_) => len += 1,
                        Symbol::N(b) => match &words[b] {
                            Some(w) => len += w.len(),
                            None => {
                                ready = false;
                                break;
                            }
                        },
                    }
                }
                if ready && pick.is_none_or(|(l, a, _)| (len, p.lhs) < (l, a)) {
                    pick = Some((len, p.lhs, i));
                }
            }
            let Some((_, a, i)) = pick else { break };
            best[a] = Some(i);
            words[a] = Some(
                g.productions[i]
                    .rhs
                    .iter()
                    .flat_map(|s| match *s {
                        Symbol::T(x) => vec![x],
                        Symbol::N(b) => words[b].as_ref().expect("ready").to_vec(),
                    })
                    .collect(),
            );
        }
        Yields { best, words }
    }

    /// Terminal yield of a symbol sequence, if every nonterminal generates.
    pub(crate) fn expand(&self, symbols: &[Symbol]) -> Option<Word> {
        let mut out = Word::empty();
        for s in symbols {
            match *s {
                Symbol::T(a) => out.push(a),
                Symbol::N(b) => out = out.concat(self.words[b].as_ref()?),
            }
        }
        Some(out)
    }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nonterminals: {}", self.nonterminals.join(" "))?;
        writeln!(f, "start: {}", self.nonterminals[self.start])?;
        for p in &self.productions {
            write!(f, "{} ->", self.nonterminals[p.lhs])?;
            for s in &p.rhs {
                match *s {
                    Symbol::T(a) => write!(f, " {}", self.letters[a.index()])?,
                    Symbol::N(b) => write!(f, " {}", self.nonterminals[b])?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
