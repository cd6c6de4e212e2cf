//! Partially ordered alphabets and the lexicographic partial order on words.
//!
//! Letters are opaque names; a [`Poset`] interns them as [`Letter`] indices in
//! declaration order and stores the strict order already transitively closed.
//! Two words are related when the shorter one is a prefix of the other, or
//! when the letters at their first differing position are strictly ordered.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{content_lines, keyword, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("letter `{0}` declared twice")]
    DuplicateLetter(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("order relation has a cycle: {}", .0.join(" < "))]
    Cycle(Vec<String>),
    #[error("words `{0}` and `{1}` are not incomparable")]
    NotIncomparable(String, String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Index of a letter in its alphabet's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite word over some alphabet. The empty word is `Word::empty()`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Concatenation of all parts in order.
    pub fn join<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut v = Vec::new();
        for p in parts {
            v.extend_from_slice(&p.0);
        }
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// True if `self` is a (not necessarily strict) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Outcome of comparing two elements under a lexicographic partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// The first element is strictly below the second.
    RelatedForward,
    /// The second element is strictly below the first.
    RelatedBackward,
    Equal,
    Incomparable,
}

impl Relation {
    pub fn is_comparable(self) -> bool {
        self != Relation::Incomparable
    }

    pub fn reverse(self) -> Relation {
        match self {
            Relation::RelatedForward => Relation::RelatedBackward,
            Relation::RelatedBackward => Relation::RelatedForward,
            r => r,
        }
    }
}

/// A finite alphabet with a strict partial order, stored transitively closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    letters: Vec<String>,
    index: HashMap<String, Letter>,
    // lt[a][b] <=> a < b
    lt: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds a poset from letters and generating pairs `(a, b)` meaning `a < b`.
    pub fn new<S: AsRef<str>>(letters: &[S], pairs: &[(S, S)]) -> Result<Poset, OrderError> {
        let mut index = HashMap::with_capacity(letters.len());
        let mut names = Vec::with_capacity(letters.len());
        for (i, l) in letters.iter().enumerate() {
            let l = l.as_ref().to_string();
            if index.insert(l.clone(), Letter(i as u32)).is_some() {
                return Err(OrderError::DuplicateLetter(l));
            }
            names.push(l);
        }
        let n = names.len();
        let mut lt = vec![vec![false; n]; n];
        for (a, b) in pairs {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| OrderError::UnknownLetter(s.to_string()))
            };
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            lt[a.index()][b.index()] = true;
        }
        if let Some(cycle) = find_cycle(&lt) {
            return Err(OrderError::Cycle(
                cycle.into_iter().map(|i| names[i].clone()).collect(),
            ));
        }
        // Floyd-Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if lt[i][k] {
                    let row_k = lt[k].clone();
                    for (dst, src) in lt[i].iter_mut().zip(row_k) {
                        *dst |= src;
                    }
                }
            }
        }
        Ok(Poset {
            letters: names,
            index,
            lt,
        })
    }

    /// The empty order: every pair of distinct letters is incomparable.
    pub fn trivial<S: AsRef<str>>(letters: &[S]) -> Result<Poset, OrderError> {
        Poset::new::<&str>(
            &letters.iter().map(AsRef::as_ref).collect::<Vec<_>>(),
            &[],
        )
    }

    /// The linear order given by declaration order.
    pub fn total<S: AsRef<str>>(letters: &[S]) -> Result<Poset, OrderError> {
        let names: Vec<&str> = letters.iter().map(AsRef::as_ref).collect();
        let pairs: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        Poset::new(&names, &pairs)
    }

    /// Parses the `letters: ...` / `a < b` text format.
    pub fn parse(text: &str) -> Result<Poset, OrderError> {
        let mut letters: Option<Vec<String>> = None;
        let mut pairs = Vec::new();
        for (line_no, line) in content_lines(text) {
            if let Some(rest) = keyword(line, "letters") {
                if letters.is_some() {
                    return Err(SyntaxError::new(line_no, "duplicate `letters:` line").into());
                }
                letters = Some(rest.split_whitespace().map(str::to_string).collect());
                continue;
            }
            if letters.is_none() {
                return Err(SyntaxError::new(line_no, "expected `letters:` first").into());
            }
            let parts: Vec<&str> = line.split('<').map(str::trim).collect();
            if parts.len() < 2 || parts.iter().any(|p| p.is_empty() || p.contains(char::is_whitespace)) {
                return Err(SyntaxError::new(line_no, format!("expected `a < b`, found `{line}`")).into());
            }
            for w in parts.windows(2) {
                pairs.push((w[0].to_string(), w[1].to_string()));
            }
        }
        let letters = letters.ok_or_else(|| SyntaxError::new(1, "missing `letters:` line"))?;
        Poset::new(&letters, &pairs)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letters
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len() as u32).map(Letter)
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.letters[letter.index()]
    }

    /// Strict order `a < b`.
    pub fn lt(&self, a: Letter, b: Letter) -> bool {
        self.lt[a.index()][b.index()]
    }

    pub fn le(&self, a: Letter, b: Letter) -> bool {
        a == b || self.lt(a, b)
    }

    /// Distinct letters with neither `a < b` nor `b < a`.
    pub fn incomparable(&self, a: Letter, b: Letter) -> bool {
        !self.le(a, b) && !self.le(b, a)
    }

    /// All pairs `(a, b)` with `a < b`, closure included.
    pub fn strict_pairs(&self) -> Vec<(Letter, Letter)> {
        let mut out = Vec::new();
        for a in self.letters() {
            for b in self.letters() {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Covering pairs of the order (its Hasse diagram).
    pub fn covers(&self) -> Vec<(Letter, Letter)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !self.letters().any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    pub fn is_total(&self) -> bool {
        self.letters()
            .all(|a| self.letters().all(|b| !self.incomparable(a, b)))
    }

    /// A copy with extra letters and extra generating pairs (by name).
    pub fn extend<S: AsRef<str>>(&self, letters: &[S], pairs: &[(S, S)]) -> Result<Poset, OrderError> {
        let mut names: Vec<String> = self.letters.clone();
        names.extend(letters.iter().map(|s| s.as_ref().to_string()));
        let mut all: Vec<(String, String)> = self
            .strict_pairs()
            .into_iter()
            .map(|(a, b)| (self.name(a).to_string(), self.name(b).to_string()))
            .collect();
        all.extend(
            pairs
                .iter()
                .map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string())),
        );
        Poset::new(&names, &all)
    }

    /// The induced order on `names`, re-indexed in the given order.
    pub fn restrict<S: AsRef<str>>(&self, names: &[S]) -> Result<Poset, OrderError> {
        let mut ids = Vec::with_capacity(names.len());
        for n in names {
            ids.push(
                self.letter(n.as_ref())
                    .ok_or_else(|| OrderError::UnknownLetter(n.as_ref().to_string()))?,
            );
        }
        let mut pairs = Vec::new();
        for &a in &ids {
            for &b in &ids {
                if self.lt(a, b) {
                    pairs.push((self.name(a), self.name(b)));
                }
            }
        }
        let names: Vec<&str> = names.iter().map(AsRef::as_ref).collect();
        Poset::new(&names, &pairs)
    }

    /// Builds a word from letter names.
    pub fn word<S: AsRef<str>>(&self, letters: &[S]) -> Result<Word, OrderError> {
        letters
            .iter()
            .map(|s| {
                self.letter(s.as_ref())
                    .ok_or_else(|| OrderError::UnknownLetter(s.as_ref().to_string()))
            })
            .collect()
    }

    /// Parses a word written as whitespace-separated tokens; a token that is
    /// not itself a letter is split greedily into the longest matching
    /// letters. `""` and `"ε"` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, OrderError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            if let Some(l) = self.letter(token) {
                out.push(l);
                continue;
            }
            let mut rest = token;
            while !rest.is_empty() {
                let best = self
                    .letters()
                    .filter(|&l| rest.starts_with(self.name(l)) && !self.name(l).is_empty())
                    .max_by_key(|&l| self.name(l).len())
                    .ok_or_else(|| OrderError::UnknownLetter(token.to_string()))?;
                out.push(best);
                rest = &rest[self.name(best).len()..];
            }
        }
        Ok(Word(out))
    }

    /// Renders a word: letters concatenated when every letter name is a
    /// single character, space-separated otherwise; `ε` when empty.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.letters.iter().all(|l| l.chars().count() == 1) {
            ""
        } else {
            " "
        };
        w.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(sep)
    }

    /// Letter names of a word.
    pub fn spell(&self, w: &Word) -> Vec<String> {
        w.iter().map(|&l| self.name(l).to_string()).collect()
    }

    /// Compares two words under the lexicographic partial order.
    pub fn relate(&self, w1: &Word, w2: &Word) -> Relation {
        lex_relate(self, w1, w2)
    }

    pub fn comparable(&self, w1: &Word, w2: &Word) -> bool {
        self.relate(w1, w2).is_comparable()
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "letters:")?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        writeln!(f)?;
        for (a, b) in self.covers() {
            writeln!(f, "{} < {}", self.name(a), self.name(b))?;
        }
        Ok(())
    }
}

// Finds a cycle (including self-loops) in the generating relation.
fn find_cycle(adj: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = adj.len();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    let mut stack: Vec<usize> = Vec::new();

    fn dfs(v: usize, adj: &[Vec<bool>], color: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        color[v] = 1;
        stack.push(v);
        for (u, &edge) in adj[v].iter().enumerate() {
            if !edge {
                continue;
            }
            if color[u] == 1 {
                let start = stack.iter().position(|&x| x == u).unwrap();
                let mut cycle = stack[start..].to_vec();
                cycle.push(u);
                return Some(cycle);
            }
            if color[u] == 0 {
                if let Some(c) = dfs(u, adj, color, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        color[v] = 2;
        None
    }

    for v in 0..n {
        if color[v] == 0 {
            if let Some(c) = dfs(v, adj, &mut color, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

/// The lexicographic partial order: the empty word is below everything, and
/// `xw R yw'` iff `x < y`, or `x = y` and `w R w'`.
///
/// Evaluated in one pass: only the first differing position matters.
pub fn lex_relate(p: &Poset, w1: &Word, w2: &Word) -> Relation {
    match w1.iter().zip(w2.iter()).position(|(a, b)| a != b) {
        None => match w1.len().cmp(&w2.len()) {
            std::cmp::Ordering::Less => Relation::RelatedForward,
            std::cmp::Ordering::Greater => Relation::RelatedBackward,
            std::cmp::Ordering::Equal => Relation::Equal,
        },
        Some(i) => {
            let (a, b) = (w1[i], w2[i]);
            if p.lt(a, b) {
                Relation::RelatedForward
            } else if p.lt(b, a) {
                Relation::RelatedBackward
            } else {
                Relation::Incomparable
            }
        }
    }
}

/// True iff all distinct members are pairwise incomparable.
pub fn is_antichain(p: &Poset, ws: &[Word]) -> bool {
    all_pairs(ws, |a, b| a == b || p.relate(a, b) == Relation::Incomparable)
}

/// True iff every pair is in the prefix relation or incomparable.
pub fn is_quasiantichain(p: &Poset, ws: &[Word]) -> bool {
    all_pairs(ws, |a, b| {
        a.is_prefix_of(b) || b.is_prefix_of(a) || p.relate(a, b) == Relation::Incomparable
    })
}

/// True iff every pair is comparable.
pub fn is_chain(p: &Poset, ws: &[Word]) -> bool {
    all_pairs(ws, |a, b| p.comparable(a, b))
}

/// First incomparable pair in the order the words are given.
pub fn find_incomparable<'a>(p: &Poset, ws: &'a [Word]) -> Option<(&'a Word, &'a Word)> {
    for (i, a) in ws.iter().enumerate() {
        for b in &ws[..i] {
            if p.relate(b, a) == Relation::Incomparable {
                return Some((b, a));
            }
        }
    }
    None
}

fn all_pairs(ws: &[Word], ok: impl Fn(&Word, &Word) -> bool) -> bool {
    ws.iter()
        .enumerate()
        .all(|(i, a)| ws[i + 1..].iter().all(|b| ok(a, b)))
}

/// All words `prefix · u1 ⋯ uk · suffix` with each `ui` in `{w1w2, w2w1}`.
///
/// Requires `w1` and `w2` incomparable; the two blocks then have equal length
/// and are themselves incomparable, so the `2^k` results form an antichain of
/// equal-length words. Results are listed with `w1w2` as the 0 choice, most
/// significant choice first.
pub fn pump_antichain(
    p: &Poset,
    w1: &Word,
    w2: &Word,
    prefix: &Word,
    suffix: &Word,
    k: u32,
) -> Result<Vec<Word>, OrderError> {
    if p.relate(w1, w2) != Relation::Incomparable {
        return Err(OrderError::NotIncomparable(p.render(w1), p.render(w2)));
    }
    let x = w1.concat(w2);
    let y = w2.concat(w1);
    let count = 1usize << k;
    let mut out = Vec::with_capacity(count);
    for mask in 0..count {
        let mut v = prefix.letters().to_vec();
        for bit in (0..k).rev() {
            let block = if (mask >> bit) & 1 == 0 { &x } else { &y };
            v.extend_from_slice(block);
        }
        v.extend_from_slice(suffix);
        out.push(Word(v));
    }
    Ok(out)
}
