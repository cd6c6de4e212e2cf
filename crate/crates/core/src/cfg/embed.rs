//! Bounded self-embedding search and the CFG verdict.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use super::{Cfg, CfgError, NontermId, Symbol, Yields};
use crate::order::{is_antichain, Poset, Relation, Word};

/// Default cap on distinct self-embeddings per nonterminal.
pub const DEFAULT_EMBEDDING_CAP: usize = 4096;

// Spine states explored per nonterminal, relative to the result cap.
const EXPLORATION_FACTOR: usize = 16;

/// One derivation step along the spine: apply `production` to the spine
/// nonterminal and continue at `rhs[position]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpineStep {
    pub production: usize,
    pub position: usize,
}

/// `A ⇒* wAu` realised by `steps`, with side branches expanded to their
/// shortest yields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfEmbedding {
    pub nonterminal: NontermId,
    pub left: Word,
    pub right: Word,
    pub depth: usize,
    pub steps: Vec<SpineStep>,
}

impl SelfEmbedding {
    /// Re-derives the embedding step by step.
    pub fn replay(&self, g: &Cfg) -> bool {
        self.depth == self.steps.len()
            && replay_spine(g, self.nonterminal, &self.steps)
                == Some((self.left.clone(), self.nonterminal, self.right.clone()))
    }
}

/// Default derivation depth: `2·|N| + 2`.
pub fn default_depth(g: &Cfg) -> usize {
    2 * g.num_nonterminals() + 2
}

/// All `(w, u)` with `A ⇒* wAu` along spines of at most `depth` steps,
/// deduplicated and kept at their smallest depth, in breadth-first order.
pub fn enumerate_self_embeddings(
    g: &Cfg,
    a: NontermId,
    depth: usize,
    cap: usize,
) -> Result<Vec<SelfEmbedding>, CfgError> {
    let yields = Yields::compute(g);
    let (found, truncated) = explore(g, &yields, a, depth, cap);
    if truncated {
        return Err(CfgError::TooManyResults(cap));
    }
    Ok(found)
}

struct Node {
    at: NontermId,
    left: Word,
    right: Word,
    steps: Vec<SpineStep>,
}

// Breadth-first spine search; the flag reports that a cap cut it short.
fn explore(g: &Cfg, yields: &Yields, a: NontermId, depth: usize, cap: usize) -> (Vec<SelfEmbedding>, bool) {
    let mut found = Vec::new();
    let mut seen: HashSet<(NontermId, Word, Word)> = HashSet::new();
    let mut frontier = vec![Node {
        at: a,
        left: Word::empty(),
        right: Word::empty(),
        steps: Vec::new(),
    }];
    for d in 1..=depth {
        let mut next = Vec::new();
        for node in &frontier {
            for (pi, p) in g.productions_of(node.at) {
                for (pos, s) in p.rhs.iter().enumerate() {
                    let Symbol::N(b) = *s else { continue };
                    let (Some(l), Some(r)) = (yields.expand(&p.rhs[..pos]), yields.expand(&p.rhs[pos + 1..])) else {
                        continue;
                    };
                    let left = node.left.concat(&l);
                    let right = r.concat(&node.right);
                    if !seen.insert((b, left.clone(), right.clone())) {
                        continue;
                    }
                    if seen.len() > cap * EXPLORATION_FACTOR {
                        return (found, true);
                    }
                    let mut steps = node.steps.clone();
                    steps.push(SpineStep {
                        production: pi,
                        position: pos,
                    });
                    if b == a {
                        if found.len() == cap {
                            return (found, true);
                        }
                        found.push(SelfEmbedding {
                            nonterminal: a,
                            left: left.clone(),
                            right: right.clone(),
                            depth: d,
                            steps: steps.clone(),
                        });
                    }
                    next.push(Node {
                        at: b,
                        left,
                        right,
                        steps,
                    });
                }
            }
        }
        frontier = next;
    }
    (found, false)
}

/// Applies spine steps from `from`, expanding side nonterminals through
/// explicit derivations of their shortest yields. Returns `(left, end, right)`
/// with `from ⇒* left·end·right`, or `None` if a step does not apply.
pub(crate) fn replay_spine(g: &Cfg, from: NontermId, steps: &[SpineStep]) -> Option<(Word, NontermId, Word)> {
    let yields = Yields::compute(g);
    let mut left = Word::empty();
    let mut right = Word::empty();
    let mut at = from;
    for step in steps {
        let p = g.productions().get(step.production)?;
        if p.lhs != at {
            return None;
        }
        let Symbol::N(b) = *p.rhs.get(step.position)? else {
            return None;
        };
        let l = derive_all(g, &yields, &p.rhs[..step.position])?;
        let r = derive_all(g, &yields, &p.rhs[step.position + 1..])?;
        left = left.concat(&l);
        right = r.concat(&right);
        at = b;
    }
    Some((left, at, right))
}

// Leftmost derivation of a terminal word from `symbols`, applying each
// nonterminal's shortest-yield production explicitly.
fn derive_all(g: &Cfg, yields: &Yields, symbols: &[Symbol]) -> Option<Word> {
    let mut form: Vec<Symbol> = symbols.to_vec();
    let mut out = Word::empty();
    let mut budget = 1usize << 20;
    while let Some(pos) = form.iter().position(|s| matches!(s, Symbol::N(_))) {
        let Symbol::N(b) = form[pos] else { unreachable!() };
        let p = &g.productions()[yields.best[b]?];
        if p.lhs != b {
            return None;
        }
        form.splice(pos..=pos, p.rhs.iter().copied());
        budget = budget.checked_sub(1)?;
    }
    for s in form {
        if let Symbol::T(a) = s {
            out.push(a);
        }
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfgWitnessKind {
    /// Incomparable `w1 = first.left`, `w2 = second.left` in `L_A`.
    Left,
    /// A fixed `w` with incomparable `first.right`, `second.right` in `R_{A,w}`.
    Right,
}

/// Certificate of exponential antichain growth, relative to the trimmed
/// grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfgWitness {
    pub nonterminal: String,
    pub kind: CfgWitnessKind,
    pub first: SelfEmbedding,
    pub second: SelfEmbedding,
    /// `S ⇒* access_left · A · access_right` via `access_steps`.
    pub access_left: Word,
    pub access_right: Word,
    pub access_steps: Vec<SpineStep>,
    /// `A ⇒* yield_word`.
    pub yield_word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfgVerdict {
    ExponentialWitness(Box<CfgWitness>),
    /// No witness among self-embeddings of depth `≤ depth`. `truncated` marks
    /// a sample cut short by the enumeration cap.
    NoWitnessUpTo {
        depth: usize,
        empty_language: bool,
        truncated: bool,
    },
}

impl CfgVerdict {
    pub fn witness(&self) -> Option<&CfgWitness> {
        match self {
            CfgVerdict::ExponentialWitness(w) => Some(w),
            CfgVerdict::NoWitnessUpTo { .. } => None,
        }
    }
}

impl CfgWitness {
    /// `2^k` words `u · x_1 … x_2k · v · y_2k … y_1 · u′`, where consecutive
    /// embedding pairs are `(first, second)` or `(second, first)`. For the
    /// left kind the `x` blocks differ; for the right kind the `x` are all
    /// `w` and the blocks `u1u2` / `u2u1` on the right differ.
    pub fn family(&self, k: u32) -> Vec<Word> {
        let mut out = Vec::with_capacity(1 << k);
        for choice in 0u64..(1u64 << k) {
            let mut order: Vec<&SelfEmbedding> = Vec::with_capacity(2 * k as usize);
            for bit in (0..k).rev() {
                if choice >> bit & 1 == 0 {
                    order.extend([&self.first, &self.second]);
                } else {
                    order.extend([&self.second, &self.first]);
                }
            }
            let mut w = self.access_left.clone();
            for e in &order {
                w = w.concat(&e.left);
            }
            w = w.concat(&self.yield_word);
            for e in order.iter().rev() {
                w = w.concat(&e.right);
            }
            out.push(w.concat(&self.access_right));
        }
        out
    }

    /// Checks the witness against the grammar it came from, including the
    /// family up to `k`.
    pub fn verify(&self, g: &Cfg, p: &Poset, k: u32) -> Result<(), CfgError> {
        let reject = |msg: &str| Err(CfgError::WitnessRejected(msg.to_string()));
        let t = g.trim()?;
        let Some(a) = t.nonterminal(&self.nonterminal) else {
            return reject("unknown nonterminal");
        };
        for e in [&self.first, &self.second] {
            if e.nonterminal != a || !e.replay(&t) {
                return reject("self-embedding does not replay");
            }
        }
        let pair_ok = match self.kind {
            CfgWitnessKind::Left => p.relate(&self.first.left, &self.second.left) == Relation::Incomparable,
            CfgWitnessKind::Right => {
                self.first.left == self.second.left
                    && p.relate(&self.first.right, &self.second.right) == Relation::Incomparable
            }
        };
        if !pair_ok {
            return reject("witness pair is not incomparable");
        }
        if replay_spine(&t, t.start(), &self.access_steps)
            != Some((self.access_left.clone(), a, self.access_right.clone()))
        {
            return reject("access derivation does not replay");
        }
        if !t.derives(a, &self.yield_word) {
            return reject("yield is not derivable");
        }
        for i in 1..=k {
            let fam = self.family(i);
            if !is_antichain(p, &fam) {
                return reject("family is not an antichain");
            }
            if !fam.iter().all(|w| g.generates(w)) {
                return reject("family word is not generated");
            }
        }
        Ok(())
    }
}

/// Searches for an exponential witness among self-embeddings of depth
/// `≤ depth`. Sound for `ExponentialWitness`; `NoWitnessUpTo` is
/// inconclusive.
pub fn classify_cfg_bounded(g: &Cfg, p: &Poset, depth: usize) -> Result<CfgVerdict, CfgError> {
    if g.letter_names() != p.letter_names() {
        return Err(CfgError::AlphabetMismatch);
    }
    let t = match g.trim() {
        Ok(t) => t,
        Err(CfgError::EmptyLanguage) => {
            return Ok(CfgVerdict::NoWitnessUpTo {
                depth,
                empty_language: true,
                truncated: false,
            })
        }
        Err(e) => return Err(e),
    };
    let yields = Yields::compute(&t);
    let samples: Vec<(Vec<SelfEmbedding>, bool)> = (0..t.num_nonterminals())
        .into_par_iter()
        .map(|a| explore(&t, &yields, a, depth, DEFAULT_EMBEDDING_CAP))
        .collect();
    let truncated = samples.iter().any(|(_, tr)| *tr);

    let left_pair = samples.iter().find_map(|(es, _)| {
        first_incomparable(es, |x, y| p.relate(&x.left, &y.left) == Relation::Incomparable)
            .map(|(x, y)| (CfgWitnessKind::Left, x, y))
    });
    let found = left_pair.or_else(|| {
        samples.iter().find_map(|(es, _)| {
            let mut groups: Vec<Vec<&SelfEmbedding>> = Vec::new();
            let mut index: HashMap<&Word, usize> = HashMap::new();
            for e in es {
                let slot = *index.entry(&e.left).or_insert_with(|| {
                    groups.push(Vec::new());
                    groups.len() - 1
                });
                groups[slot].push(e);
            }
            groups.iter().find_map(|grp| {
                let owned: Vec<SelfEmbedding> = grp.iter().map(|e| (*e).clone()).collect();
                first_incomparable(&owned, |x, y| p.relate(&x.right, &y.right) == Relation::Incomparable)
                    .map(|(x, y)| (CfgWitnessKind::Right, x, y))
            })
        })
    });
    let Some((kind, first, second)) = found else {
        return Ok(CfgVerdict::NoWitnessUpTo {
            depth,
            empty_language: false,
            truncated,
        });
    };
    let a = first.nonterminal;
    let (access_steps, access_left, access_right) = access_path(&t, &yields, a);
    let witness = CfgWitness {
        nonterminal: t.nonterminal_name(a).to_string(),
        kind,
        first,
        second,
        access_left,
        access_right,
        access_steps,
        yield_word: yields.words[a].clone().expect("trimmed nonterminal generates"),
    };
    witness.verify(g, p, 2)?;
    Ok(CfgVerdict::ExponentialWitness(Box::new(witness)))
}

fn first_incomparable(
    es: &[SelfEmbedding],
    incomparable: impl Fn(&SelfEmbedding, &SelfEmbedding) -> bool,
) -> Option<(SelfEmbedding, SelfEmbedding)> {
    for (i, x) in es.iter().enumerate() {
        for y in &es[i + 1..] {
            if incomparable(x, y) {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

// Fewest-step spine from the start symbol to `a`.
fn access_path(g: &Cfg, yields: &Yields, a: NontermId) -> (Vec<SpineStep>, Word, Word) {
    let n = g.num_nonterminals();
    let mut prev: Vec<Option<(NontermId, SpineStep)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[g.start()] = true;
    let mut queue = VecDeque::from([g.start()]);
    while let Some(x) = queue.pop_front() {
        if x == a {
            break;
        }
        for (pi, p) in g.productions_of(x) {
            for (pos, s) in p.rhs.iter().enumerate() {
                if let Symbol::N(b) = *s {
                    if !seen[b] {
                        seen[b] = true;
                        prev[b] = Some((
                            x,
                            SpineStep {
                                production: pi,
                                position: pos,
                            },
                        ));
                        queue.push_back(b);
                    }
                }
            }
        }
    }
    let mut steps = Vec::new();
    let mut at = a;
    while let Some((x, step)) = prev[at] {
        steps.push(step);
        at = x;
    }
    steps.reverse();
    let mut left = Word::empty();
    let mut right = Word::empty();
    for step in &steps {
        let rhs = &g.productions()[step.production].rhs;
        left = left.concat(&yields.expand(&rhs[..step.position]).expect("trimmed"));
        right = yields.expand(&rhs[step.position + 1..]).expect("trimmed").concat(&right);
    }
    (steps, left, right)
}
