//! Bottom-up nondeterministic finite tree automata.
//!
//! Text format:
//!
//! ```text
//! arity: a 0
//! arity: f 2
//! states: q          # optional; otherwise order of first use
//! final: q
//! rule: a() -> q
//! rule: f(q,q) -> q
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{tree_relate, RankedAlphabet, Term, Tree, TreeError, TreeStateId};
use crate::order::{Letter, Relation};
use crate::text::{content_lines, keyword, SyntaxError};
use crate::width::{profile_from_slices, WidthError, WidthProfile};

/// Default maximum height for [`Nfta::enumerate_trees`].
pub const DEFAULT_HEIGHT_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub symbol: Letter,
    pub children: Vec<TreeStateId>,
    pub target: TreeStateId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfta {
    symbols: Vec<String>,
    arities: Vec<usize>,
    states: Vec<String>,
    finals: Vec<bool>,
    rules: Vec<Rule>,
}

impl Nfta {
    pub fn new(
        symbols: Vec<(String, usize)>,
        states: Vec<String>,
        finals: Vec<bool>,
        rules: Vec<Rule>,
    ) -> Result<Nfta, TreeError> {
        for (i, (s, _)) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|(t, _)| t == s) {
                return Err(TreeError::DuplicateSymbol(s.clone()));
            }
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(TreeError::DuplicateState(s.clone()));
            }
        }
        assert_eq!(finals.len(), states.len(), "finals must cover every state");
        let (symbols, arities): (Vec<String>, Vec<usize>) = symbols.into_iter().unzip();
        let mut rules = rules;
        for r in &rules {
            assert!(r.symbol.index() < symbols.len(), "symbol out of range");
            assert!(
                r.target < states.len() && r.children.iter().all(|&c| c < states.len()),
                "state out of range"
            );
            let expected = arities[r.symbol.index()];
            if r.children.len() != expected {
                return Err(TreeError::ArityMismatch {
                    symbol: symbols[r.symbol.index()].clone(),
                    expected,
                    found: r.children.len(),
                });
            }
        }
        let mut seen = std::collections::HashSet::new();
        rules.retain(|r| seen.insert(r.clone()));
        Ok(Nfta {
            symbols,
            arities,
            states,
            finals,
            rules,
        })
    }

    pub fn parse(text: &str) -> Result<Nfta, TreeError> {
        let mut symbols: Vec<(String, usize)> = Vec::new();
        let mut declared_states: Option<Vec<String>> = None;
        let mut used_states: Vec<String> = Vec::new();
        let mut final_names: Vec<(usize, String)> = Vec::new();
        let mut raw_rules: Vec<(usize, String, Vec<String>, String)> = Vec::new();

        for (line, content) in content_lines(text) {
            if let Some(rest) = keyword(content, "arity") {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.is_empty() || !toks.len().is_multiple_of(2) {
                    return Err(SyntaxError::new(line, "expected `arity: symbol n`").into());
                }
                for pair in toks.chunks(2) {
                    let k: usize = pair[1]
                        .parse()
                        .map_err(|_| SyntaxError::new(line, format!("bad arity `{}`", pair[1])))?;
                    if symbols.iter().any(|(s, _)| s == pair[0]) {
                        return Err(SyntaxError::new(line, format!("symbol `{}` declared twice", pair[0])).into());
                    }
                    symbols.push((pair[0].to_string(), k));
                }
            } else if let Some(rest) = keyword(content, "states") {
                if declared_states.is_some() {
                    return Err(SyntaxError::new(line, "states declared twice").into());
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                for (i, s) in names.iter().enumerate() {
                    if names[..i].contains(s) {
                        return Err(SyntaxError::new(line, format!("state `{s}` declared twice")).into());
                    }
                }
                declared_states = Some(names);
            } else if let Some(rest) = keyword(content, "final") {
                for s in rest.split_whitespace() {
                    final_names.push((line, s.to_string()));
                    if !used_states.iter().any(|u| u == s) {
                        used_states.push(s.to_string());
                    }
                }
            } else if let Some(rest) = keyword(content, "rule") {
                let (lhs, target) = rest
                    .split_once("->")
                    .ok_or_else(|| SyntaxError::new(line, "expected `rule: f(q1,...) -> q`"))?;
                let target = target.trim();
                if target.is_empty() || target.contains(char::is_whitespace) {
                    return Err(SyntaxError::new(line, "rule target must be one state").into());
                }
                let lhs = lhs.trim();
                let (name, args) = match lhs.split_once('(') {
                    Some((name, args)) => {
                        let args = args
                            .strip_suffix(')')
                            .ok_or_else(|| SyntaxError::new(line, "missing `)`"))?;
                        let args: Vec<String> = if args.trim().is_empty() {
                            Vec::new()
                        } else {
                            args.split(',').map(|s| s.trim().to_string()).collect()
                        };
                        (name.trim(), args)
                    }
                    None => (lhs, Vec::new()),
                };
                if name.is_empty() || args.iter().any(String::is_empty) {
                    return Err(SyntaxError::new(line, "malformed rule").into());
                }
                for s in args.iter().map(String::as_str).chain([target]) {
                    if !used_states.iter().any(|u| u == s) {
                        used_states.push(s.to_string());
                    }
                }
                raw_rules.push((line, name.to_string(), args, target.to_string()));
            } else {
                return Err(SyntaxError::new(line, format!("unrecognised line `{content}`")).into());
            }
        }

        // Symbols used without an `arity:` line take the arity of first use.
        for (_, name, args, _) in &raw_rules {
            if !symbols.iter().any(|(s, _)| s == name) {
                symbols.push((name.clone(), args.len()));
            }
        }
        let states = match declared_states {
            Some(s) => s,
            None => used_states,
        };
        let state_ix: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let symbol_ix: HashMap<&str, usize> = symbols
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.as_str(), i))
            .collect();
        let st = |line: usize, s: &str| {
            state_ix
                .get(s)
                .copied()
                .ok_or_else(|| TreeError::from(SyntaxError::new(line, format!("undeclared state `{s}`"))))
        };
        let mut finals = vec![false; states.len()];
        for (line, f) in &final_names {
            finals[st(*line, f)?] = true;
        }
        let mut rules = Vec::new();
        for (line, name, args, target) in &raw_rules {
            let sym = symbol_ix[name.as_str()];
            let expected = symbols[sym].1;
            if args.len() != expected {
                return Err(SyntaxError::new(
                    *line,
                    format!("symbol `{name}` has arity {expected} but the rule has {} children", args.len()),
                )
                .into());
            }
            rules.push(Rule {
                symbol: Letter(sym as u32),
                children: args.iter().map(|a| st(*line, a)).collect::<Result<_, _>>()?,
                target: st(*line, target)?,
            });
        }
        Nfta::new(symbols, states, finals, rules)
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.symbols
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: TreeStateId) -> &str {
        &self.states[q]
    }

    pub fn state(&self, name: &str) -> Option<TreeStateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_final(&self, q: TreeStateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = TreeStateId> + '_ {
        (0..self.states.len()).filter(|&q| self.finals[q])
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Whether every symbol has arity at most one.
    pub fn is_monadic(&self) -> bool {
        self.arities.iter().all(|&k| k <= 1)
    }

    /// States reachable at the root of `t`, as a membership vector.
    pub fn run(&self, t: &Tree) -> Vec<bool> {
        self.run_term(&Term::from(t), &[])
    }

    /// States reachable at the root of a context whose hole `xi` is read as
    /// state `holes[i - 1]`.
    pub fn run_term(&self, t: &Term, holes: &[TreeStateId]) -> Vec<bool> {
        let mut out = vec![false; self.states.len()];
        match t {
            Term::Hole(i) => {
                if let Some(&q) = holes.get(usize::from(*i).wrapping_sub(1)) {
                    out[q] = true;
                }
            }
            Term::Node(f, cs) => {
                let child_sets: Vec<Vec<bool>> = cs.iter().map(|c| self.run_term(c, holes)).collect();
                for r in &self.rules {
                    if r.symbol == *f
                        && r.children.len() == cs.len()
                        && r.children.iter().zip(&child_sets).all(|(&q, set)| set[q])
                    {
                        out[r.target] = true;
                    }
                }
            }
        }
        out
    }

    pub fn accepts(&self, t: &Tree) -> bool {
        let reach = self.run(t);
        self.finals().any(|q| reach[q])
    }

    /// States with at least one ground tree.
    pub fn inhabited(&self) -> Vec<bool> {
        let mut inh = vec![false; self.states.len()];
        loop {
            let mut changed = false;
            for r in &self.rules {
                if !inh[r.target] && r.children.iter().all(|&c| inh[c]) {
                    inh[r.target] = true;
                    changed = true;
                }
            }
            if !changed {
                return inh;
            }
        }
    }

    /// Keeps inhabited states that can contribute to an accepted tree, and
    /// the rules among them. State and rule order are preserved.
    pub fn reduce(&self) -> Nfta {
        let inh = self.inhabited();
        let live_rule = |r: &Rule| inh[r.target] && r.children.iter().all(|&c| inh[c]);
        let mut useful: Vec<bool> = (0..self.states.len()).map(|q| self.finals[q] && inh[q]).collect();
        loop {
            let mut changed = false;
            for r in &self.rules {
                if !live_rule(r) || !useful[r.target] {
                    continue;
                }
                for &c in &r.children {
                    if !useful[c] {
                        useful[c] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![None; self.states.len()];
        let mut states = Vec::new();
        let mut finals = Vec::new();
        for q in 0..self.states.len() {
            if useful[q] {
                remap[q] = Some(states.len());
                states.push(self.states[q].clone());
                finals.push(self.finals[q]);
            }
        }
        let rules = self
            .rules
            .iter()
            .filter(|r| live_rule(r) && useful[r.target])
            .map(|r| Rule {
                symbol: r.symbol,
                children: r.children.iter().map(|&c| remap[c].expect("useful")).collect(),
                target: remap[r.target].expect("useful"),
            })
            .collect();
        Nfta {
            symbols: self.symbols.clone(),
            arities: self.arities.clone(),
            states,
            finals,
            rules,
        }
    }

    /// Whether no tree is accepted.
    pub fn is_empty_language(&self) -> bool {
        let inh = self.inhabited();
        !self.finals().any(|q| inh[q])
    }

    /// A minimal-height tree per inhabited state; ties go to the smaller
    /// symbol, then the earlier rule.
    pub fn canonical_inhabitants(&self) -> Vec<Option<Tree>> {
        let mut out: Vec<Option<Tree>> = vec![None; self.states.len()];
        loop {
            let mut pick: Vec<Option<&Rule>> = vec![None; self.states.len()];
            for r in &self.rules {
                if out[r.target].is_some() || !r.children.iter().all(|&c| out[c].is_some()) {
                    continue;
                }
                let slot = &mut pick[r.target];
                if slot.is_none_or(|old| r.symbol < old.symbol) {
                    *slot = Some(r);
                }
            }
            if pick.iter().all(Option::is_none) {
                return out;
            }
            // Every pick in this round has height = round number, since
            // each uses a child finalised in the previous round or none.
            let new: Vec<(usize, Tree)> = pick
                .iter()
                .enumerate()
                .filter_map(|(q, r)| {
                    r.map(|r| {
                        let children = r.children.iter().map(|&c| out[c].clone().expect("ready")).collect();
                        (q, Tree::node(r.symbol, children))
                    })
                })
                .collect();
            for (q, t) in new {
                out[q] = Some(t);
            }
        }
    }

    /// Accepted trees of height exactly `k ≤` [`DEFAULT_HEIGHT_CAP`].
    pub fn enumerate_trees(&self, k: usize) -> Result<Vec<Tree>, TreeError> {
        self.enumerate_trees_capped(k, DEFAULT_HEIGHT_CAP)
    }

    pub fn enumerate_trees_capped(&self, k: usize, cap: usize) -> Result<Vec<Tree>, TreeError> {
        if k > cap {
            return Err(TreeError::CapExceeded { requested: k, cap });
        }
        Ok(self.trees_by_height(k).pop().unwrap_or_default())
    }

    // Accepted trees of each height 1..=k (index h - 1), sorted.
    fn trees_by_height(&self, k: usize) -> Vec<Vec<Tree>> {
        let n = self.states.len();
        // exact[q][h] = trees of height exactly h reaching q
        let mut exact: Vec<Vec<Vec<Tree>>> = vec![vec![Vec::new()]; n];
        let mut accepted = Vec::new();
        for h in 1..=k {
            let mut level: Vec<BTreeSet<Tree>> = vec![BTreeSet::new(); n];
            for r in &self.rules {
                if r.children.is_empty() {
                    if h == 1 {
                        level[r.target].insert(Tree::leaf(r.symbol));
                    }
                    continue;
                }
                // The first child of height h - 1 sits at position i.
                for i in 0..r.children.len() {
                    let choices: Vec<Vec<&Tree>> = r
                        .children
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| {
                            let range = if j < i {
                                1..h.saturating_sub(1)
                            } else if j == i {
                                h - 1..h
                            } else {
                                1..h
                            };
                            range.flat_map(|g| exact[c][g].iter()).collect()
                        })
                        .collect();
                    product(&choices, &mut Vec::new(), &mut |kids| {
                        level[r.target].insert(Tree::node(r.symbol, kids.iter().map(|t| (*t).clone()).collect()));
                    });
                }
            }
            let mut acc = BTreeSet::new();
            for (q, set) in level.into_iter().enumerate() {
                if self.finals[q] {
                    acc.extend(set.iter().cloned());
                }
                exact[q].push(set.into_iter().collect());
            }
            accepted.push(acc.into_iter().collect());
        }
        accepted
    }
}

fn product<'a>(choices: &[Vec<&'a Tree>], acc: &mut Vec<&'a Tree>, emit: &mut impl FnMut(&[&'a Tree])) {
    let Some((first, rest)) = choices.split_first() else {
        emit(acc);
        return;
    };
    for &t in first {
        acc.push(t);
        product(rest, acc, emit);
        acc.pop();
    }
}

/// Exact widths of `L_{=k}` for heights `k = 1..=k_max`.
pub fn tree_width_profile(a: &Nfta, ra: &RankedAlphabet, k_max: usize) -> Result<WidthProfile<Tree>, TreeError> {
    if k_max > DEFAULT_HEIGHT_CAP {
        return Err(TreeError::CapExceeded {
            requested: k_max,
            cap: DEFAULT_HEIGHT_CAP,
        });
    }
    let slices: Vec<(usize, Vec<Tree>)> = a.trees_by_height(k_max).into_iter().enumerate().map(|(i, ts)| (i + 1, ts)).collect();
    profile_from_slices(slices, |x, y| tree_relate(ra, x, y) == Relation::RelatedForward).map_err(|e| match e {
        WidthError::CapExceeded { size, .. } => TreeError::TooManyResults(size),
        other => TreeError::WitnessRejected(other.to_string()),
    })
}

impl fmt::Display for Nfta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, k) in self.symbols.iter().zip(&self.arities) {
            writeln!(f, "arity: {s} {k}")?;
        }
        writeln!(f, "states: {}", self.states.join(" "))?;
        let finals: Vec<&str> = self.finals().map(|q| self.states[q].as_str()).collect();
        if !finals.is_empty() {
            writeln!(f, "final: {}", finals.join(" "))?;
        }
        for r in &self.rules {
            let kids: Vec<&str> = r.children.iter().map(|&c| self.states[c].as_str()).collect();
            writeln!(
                f,
                "rule: {}({}) -> {}",
                self.symbols[r.symbol.index()],
                kids.join(","),
                self.states[r.target]
            )?;
        }
        Ok(())
    }
}
