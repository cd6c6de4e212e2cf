//! Trousers detection, unary loop samples, and the tree growth verdict.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;

use super::{contexts_incomparable, is_tree_antichain, Nfta, RankedAlphabet, Term, Tree, TreeError, TreeStateId};

/// Default cap on unary loop contexts collected per state.
pub const DEFAULT_CONTEXT_CAP: usize = 1 << 16;

/// A binary context `t` with `t[q, q] →* q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trousers {
    pub state: TreeStateId,
    pub context: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeVerdict {
    DoublyExponential {
        state: String,
        trousers: Term,
    },
    /// Unary loops at `state` that stay incomparable under any filling.
    Exponential {
        state: String,
        first: Term,
        second: Term,
    },
    /// No trousers and every sampled loop set of height `≤ bound` is a chain.
    PolynomialUpToBound {
        bound: usize,
        empty_language: bool,
        truncated: bool,
    },
}

// States reachable from a one-hole context with hole state `q`, with the
// rule and child position that first reached each one.
struct OneHole {
    q: TreeStateId,
    reached: Vec<bool>,
    back: Vec<Option<(usize, usize)>>,
}

fn one_hole_closure(a: &Nfta, inh: &[Option<Tree>], q: TreeStateId) -> OneHole {
    let n = a.num_states();
    let mut reached = vec![false; n];
    let mut back = vec![None; n];
    reached[q] = true;
    loop {
        let mut changed = false;
        for (ri, r) in a.rules().iter().enumerate() {
            if reached[r.target] {
                continue;
            }
            let pos = r.children.iter().enumerate().position(|(i, &c)| {
                reached[c]
                    && r.children
                        .iter()
                        .enumerate()
                        .all(|(j, &d)| j == i || inh[d].is_some())
            });
            if let Some(i) = pos {
                reached[r.target] = true;
                back[r.target] = Some((ri, i));
                changed = true;
            }
        }
        if !changed {
            return OneHole { q, reached, back };
        }
    }
}

fn ground(inh: &[Option<Tree>], q: TreeStateId) -> Term {
    Term::from(inh[q].as_ref().expect("sibling states are inhabited"))
}

fn one_hole_context(a: &Nfta, inh: &[Option<Tree>], oh: &OneHole, p: TreeStateId, hole: u8) -> Term {
    if p == oh.q {
        return Term::Hole(hole);
    }
    let (ri, i) = oh.back[p].expect("reached state has a backpointer");
    let r = &a.rules()[ri];
    let children = r
        .children
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            if j == i {
                one_hole_context(a, inh, oh, c, hole)
            } else {
                ground(inh, c)
            }
        })
        .collect();
    Term::Node(r.symbol, children)
}

#[derive(Clone, Copy)]
enum Back2 {
    Split(usize, usize, usize),
    Lift(usize, usize),
}

/// The first state (in declaration order) with a pair of trousers, and a
/// replay-checked context for it.
///
/// Besides the one-hole closure `R1(q)`, the search computes `R2(q)`, the
/// states reachable from a context with two `q`-holes: a rule whose
/// children include two members of `R1(q)`, or one member of `R2(q)`. Then
/// `q` has trousers iff `q ∈ R2(q)`.
pub fn detect_trousers(a: &Nfta) -> Option<Trousers> {
    let inh = a.canonical_inhabitants();
    let n = a.num_states();
    for q in 0..n {
        if inh[q].is_none() {
            continue;
        }
        let oh = one_hole_closure(a, &inh, q);
        let mut back2: Vec<Option<Back2>> = vec![None; n];
        loop {
            let mut changed = false;
            for (ri, r) in a.rules().iter().enumerate() {
                if back2[r.target].is_some() {
                    continue;
                }
                let k = r.children.len();
                let sides_ok = |skip: &[usize]| (0..k).all(|j| skip.contains(&j) || inh[r.children[j]].is_some());
                let mut found = None;
                'split: for i in 0..k {
                    for j in i + 1..k {
                        if oh.reached[r.children[i]] && oh.reached[r.children[j]] && sides_ok(&[i, j]) {
                            found = Some(Back2::Split(ri, i, j));
                            break 'split;
                        }
                    }
                }
                if found.is_none() {
                    found = (0..k)
                        .find(|&i| back2[r.children[i]].is_some() && sides_ok(&[i]))
                        .map(|i| Back2::Lift(ri, i));
                }
                if found.is_some() {
                    back2[r.target] = found;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if back2[q].is_none() {
            continue;
        }
        let context = two_hole_context(a, &inh, &oh, &back2, q);
        let ok = context.hole_count(1) == 1 && context.hole_count(2) == 1 && a.run_term(&context, &[q, q])[q];
        assert!(ok, "trousers context failed replay");
        return Some(Trousers { state: q, context });
    }
    None
}

fn two_hole_context(a: &Nfta, inh: &[Option<Tree>], oh: &OneHole, back2: &[Option<Back2>], p: TreeStateId) -> Term {
    match back2[p].expect("state in R2 has a backpointer") {
        Back2::Split(ri, i, j) => {
            let r = &a.rules()[ri];
            let children = r
                .children
                .iter()
                .enumerate()
                .map(|(k, &c)| match k {
                    _ if k == i => one_hole_context(a, inh, oh, c, 1),
                    _ if k == j => one_hole_context(a, inh, oh, c, 2),
                    _ => ground(inh, c),
                })
                .collect();
            Term::Node(r.symbol, children)
        }
        Back2::Lift(ri, i) => {
            let r = &a.rules()[ri];
            let children = r
                .children
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    if k == i {
                        two_hole_context(a, inh, oh, back2, c)
                    } else {
                        ground(inh, c)
                    }
                })
                .collect();
            Term::Node(r.symbol, children)
        }
    }
}

/// Unary contexts `c` of height `1..=h` with `c[q] →* q`, side subtrees set
/// to canonical inhabitants; sorted by height, then structurally.
pub fn unary_loop_sample(a: &Nfta, q: TreeStateId, h: usize) -> Result<Vec<Term>, TreeError> {
    let inh = a.canonical_inhabitants();
    let (sample, truncated) = loop_contexts(a, &inh, q, h, DEFAULT_CONTEXT_CAP);
    if truncated {
        return Err(TreeError::TooManyResults(DEFAULT_CONTEXT_CAP));
    }
    Ok(sample)
}

fn loop_contexts(a: &Nfta, inh: &[Option<Tree>], q: TreeStateId, h: usize, cap: usize) -> (Vec<Term>, bool) {
    let n = a.num_states();
    let mut sets: Vec<BTreeSet<Term>> = vec![BTreeSet::new(); n];
    sets[q].insert(Term::Hole(1));
    let mut queue = VecDeque::from([(q, Term::Hole(1))]);
    let mut total = 0usize;
    let mut truncated = false;
    'outer: while let Some((p, c)) = queue.pop_front() {
        for r in a.rules() {
            for (i, &child) in r.children.iter().enumerate() {
                if child != p
                    || !r
                        .children
                        .iter()
                        .enumerate()
                        .all(|(j, &d)| j == i || inh[d].is_some())
                {
                    continue;
                }
                let children = r
                    .children
                    .iter()
                    .enumerate()
                    .map(|(j, &d)| if j == i { c.clone() } else { ground(inh, d) })
                    .collect();
                let next = Term::Node(r.symbol, children);
                if next.height() > h || !sets[r.target].insert(next.clone()) {
                    continue;
                }
                total += 1;
                if total > cap {
                    truncated = true;
                    break 'outer;
                }
                queue.push_back((r.target, next));
            }
        }
    }
    let mut out: Vec<Term> = std::mem::take(&mut sets[q])
        .into_iter()
        .filter(|t| *t != Term::Hole(1))
        .collect();
    out.sort_by_cached_key(|t| (t.height(), t.clone()));
    (out, truncated)
}

/// Classifies antichain growth of `L(a)` under the order of `ra`, sampling
/// unary loops up to height `h`.
pub fn classify_nfta(a: &Nfta, ra: &RankedAlphabet, h: usize) -> Result<TreeVerdict, TreeError> {
    check_alphabet(a, ra)?;
    let r = a.reduce();
    if r.finals().next().is_none() {
        return Ok(TreeVerdict::PolynomialUpToBound {
            bound: h,
            empty_language: true,
            truncated: false,
        });
    }
    if let Some(t) = detect_trousers(&r) {
        return Ok(TreeVerdict::DoublyExponential {
            state: r.state_name(t.state).to_string(),
            trousers: t.context,
        });
    }
    let inh = r.canonical_inhabitants();
    let results: Vec<(Option<(Term, Term)>, bool)> = (0..r.num_states())
        .into_par_iter()
        .map(|q| {
            let (sample, truncated) = loop_contexts(&r, &inh, q, h, DEFAULT_CONTEXT_CAP);
            let pair = sample.iter().enumerate().find_map(|(i, c1)| {
                sample[i + 1..]
                    .iter()
                    .find(|c2| contexts_incomparable(ra, c1, c2))
                    .map(|c2| (c1.clone(), c2.clone()))
            });
            (pair, truncated)
        })
        .collect();
    let truncated = results.iter().any(|(_, t)| *t);
    for (q, (pair, _)) in results.into_iter().enumerate() {
        if let Some((first, second)) = pair {
            assert!(
                r.run_term(&first, &[q])[q] && r.run_term(&second, &[q])[q],
                "loop contexts failed replay"
            );
            return Ok(TreeVerdict::Exponential {
                state: r.state_name(q).to_string(),
                first,
                second,
            });
        }
    }
    Ok(TreeVerdict::PolynomialUpToBound {
        bound: h,
        empty_language: false,
        truncated,
    })
}

fn check_alphabet(a: &Nfta, ra: &RankedAlphabet) -> Result<(), TreeError> {
    if ra.len() != a.symbol_names().len() {
        return Err(TreeError::WitnessRejected("ranked alphabet does not match the automaton".into()));
    }
    for (i, (s, &k)) in a.symbol_names().iter().zip(a.arities()).enumerate() {
        match ra.symbol(s) {
            Some(f) if f.index() == i && ra.arity(f) == k => {}
            _ => return Err(TreeError::UnknownSymbol(s.clone())),
        }
    }
    Ok(())
}

/// Incomparable `s1 = t[s, s′]`, `s2 = t[s′, s]` looping on `q`, where `s`
/// is the canonical inhabitant of `q` and `s′ = t[s, s]`.
pub fn incomparable_ground_pair(a: &Nfta, q: TreeStateId, t: &Term) -> (Tree, Tree) {
    let inh = a.canonical_inhabitants();
    let s = inh[q].clone().expect("state is inhabited");
    ground_pair_from(t, &s)
}

fn ground_pair_from(t: &Term, s: &Tree) -> (Tree, Tree) {
    let s2 = t.fill(&[s, s]);
    (t.fill(&[s, &s2]), t.fill(&[&s2, s]))
}

// A unary context from `q` to the lowest final state it reaches.
fn exit_context(a: &Nfta, inh: &[Option<Tree>], q: TreeStateId) -> Option<Term> {
    let oh = one_hole_closure(a, inh, q);
    let f = a.finals().find(|&f| oh.reached[f])?;
    Some(one_hole_context(a, inh, &oh, f, 1))
}

/// Accepted antichains of sizes `2, 4, 16, …` (one per round, each of a
/// single height) built by nesting the trousers context.
pub fn doubly_exponential_family(
    a: &Nfta,
    ra: &RankedAlphabet,
    trousers: &Trousers,
    rounds: usize,
) -> Result<Vec<Vec<Tree>>, TreeError> {
    if rounds > 4 {
        return Err(TreeError::CapExceeded {
            requested: rounds,
            cap: 4,
        });
    }
    let inh = a.canonical_inhabitants();
    let q = trousers.state;
    let t = &trousers.context;
    let s = inh[q].clone().ok_or_else(|| TreeError::WitnessRejected("state is uninhabited".into()))?;
    let exit = exit_context(a, &inh, q).ok_or_else(|| TreeError::WitnessRejected("state reaches no final state".into()))?;

    let (s1, s2) = ground_pair_from(t, &s);
    let mut level = if s1.height() == s2.height() {
        vec![s1, s2]
    } else {
        // Pad the first hole with a tall tree so both candidates share a
        // height, then swap them through the trousers.
        let m1 = t.fill(&[&s, &s]);
        let mut m = s.clone();
        let (x, y) = loop {
            let x = t.fill(&[&m, &s]);
            let y = t.fill(&[&m, &m1]);
            if x.height() == y.height() {
                break (x, y);
            }
            m = t.fill(&[&m, &m]);
        };
        vec![t.fill(&[&x, &y]), t.fill(&[&y, &x])]
    };

    let mut out = Vec::with_capacity(rounds);
    for round in 0..rounds {
        let trees: Vec<Tree> = level.iter().map(|x| exit.fill(&[x])).collect();
        let height = trees[0].height();
        if !trees.iter().all(|x| x.height() == height && a.accepts(x)) || !is_tree_antichain(ra, &trees) {
            return Err(TreeError::WitnessRejected(format!("round {} is not an accepted antichain", round + 1)));
        }
        out.push(trees);
        if round + 1 < rounds {
            level = level
                .iter()
                .flat_map(|x| level.iter().map(move |y| t.fill(&[x, y])))
                .collect();
        }
    }
    Ok(out)
}

/// `2^k` accepted trees `C[b1[b2[…bk[s]]]]` with each block `c1∘c2` or
/// `c2∘c1`, where `C` leads from `q` to a final state.
pub fn exponential_tree_family(
    a: &Nfta,
    ra: &RankedAlphabet,
    q: TreeStateId,
    first: &Term,
    second: &Term,
    k: u32,
) -> Result<Vec<Tree>, TreeError> {
    let inh = a.canonical_inhabitants();
    let s = inh[q].clone().ok_or_else(|| TreeError::WitnessRejected("state is uninhabited".into()))?;
    let exit = exit_context(a, &inh, q).ok_or_else(|| TreeError::WitnessRejected("state reaches no final state".into()))?;
    let x = first.compose(second);
    let y = second.compose(first);
    let mut out = Vec::with_capacity(1 << k);
    for choice in 0u64..(1u64 << k) {
        let mut ctx = exit.clone();
        for bit in (0..k).rev() {
            ctx = ctx.compose(if choice >> bit & 1 == 0 { &x } else { &y });
        }
        out.push(ctx.fill(&[&s]));
    }
    if !out.iter().all(|t| a.accepts(t)) || !is_tree_antichain(ra, &out) {
        return Err(TreeError::WitnessRejected("family is not an accepted antichain".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{Poset, Relation};
    use crate::tree::tree_relate;

    const TROUSERS: &str = "arity: f 2\narity: a 0\nfinal: q\nrule: a() -> q\nrule: f(q,q) -> q\n";

    fn setup(text: &str, pairs: &[(&str, &str)]) -> (Nfta, RankedAlphabet) {
        let a = Nfta::parse(text).unwrap();
        let names: Vec<&str> = a.symbol_names().iter().map(String::as_str).collect();
        let p = Poset::new(&names, pairs).unwrap();
        let ra = RankedAlphabet::for_nfta(&a, &p).unwrap();
        (a, ra)
    }

    #[test]
    fn trousers_found() {
        let (a, ra) = setup(TROUSERS, &[]);
        let t = detect_trousers(&a).unwrap();
        assert_eq!(ra.render_term(&t.context), "f(x1,x2)");
        assert_eq!(t.state, 0);
    }

    #[test]
    fn monadic_has_no_trousers() {
        let (a, _) = setup("arity: g 1 h 1 a 0\nfinal: q\nrule: a() -> q\nrule: g(q) -> q\nrule: h(q) -> q\n", &[]);
        assert!(detect_trousers(&a).is_none());
    }

    #[test]
    fn one_q_hole_is_not_trousers() {
        let (a, _) = setup("arity: f 2 a 0\nfinal: q\nrule: a() -> p\nrule: f(p,q) -> q\nrule: a() -> q\n", &[]);
        assert!(detect_trousers(&a.reduce()).is_none());
    }

    #[test]
    fn nested_trousers_context() {
        // Two q-holes meet only under g, one level above f.
        let (a, ra) = setup(
            "arity: g 1 f 2 a 0\nfinal: q\nrule: a() -> q\nrule: f(q,q) -> p\nrule: g(p) -> q\n",
            &[],
        );
        let t = detect_trousers(&a).unwrap();
        assert_eq!(a.state_name(t.state), "q");
        assert_eq!(ra.render_term(&t.context), "g(f(x1,x2))");
    }

    #[test]
    fn ground_pair_example() {
        let (a, ra) = setup(TROUSERS, &[("a", "f")]);
        let t = detect_trousers(&a).unwrap();
        let (s1, s2) = incomparable_ground_pair(&a, 0, &t.context);
        assert_eq!(ra.render(&s1), "f(a(),f(a(),a()))");
        assert_eq!(ra.render(&s2), "f(f(a(),a()),a())");
        assert_eq!(tree_relate(&ra, &s1, &s2), Relation::Incomparable);
        assert!(a.accepts(&s1) && a.accepts(&s2));
    }

    #[test]
    fn doubly_exponential_sizes() {
        let (a, ra) = setup(TROUSERS, &[("a", "f")]);
        let t = detect_trousers(&a).unwrap();
        let fam = doubly_exponential_family(&a, &ra, &t, 3).unwrap();
        let sizes: Vec<usize> = fam.iter().map(Vec::len).collect();
        assert_eq!(sizes, [2, 4, 16]);
        let heights: Vec<usize> = fam.iter().map(|l| l[0].height()).collect();
        assert!(heights.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn doubly_exponential_with_unbalanced_trousers() {
        let (a, ra) = setup(
            "arity: f 2 g 1 a 0\nfinal: q\nrule: a() -> q\nrule: g(q) -> r\nrule: f(q,r) -> q\n",
            &[("a", "g"), ("g", "f")],
        );
        let t = detect_trousers(&a).unwrap();
        assert_eq!(ra.render_term(&t.context), "f(x1,g(x2))");
        let fam = doubly_exponential_family(&a, &ra, &t, 3).unwrap();
        assert_eq!(fam.iter().map(Vec::len).collect::<Vec<_>>(), [2, 4, 16]);
    }

    #[test]
    fn unary_samples() {
        let (a, ra) = setup("arity: g 1 a 0\nfinal: q\nrule: a() -> q\nrule: g(q) -> q\n", &[]);
        let s = unary_loop_sample(&a, 0, 3).unwrap();
        let shown: Vec<String> = s.iter().map(|t| ra.render_term(t)).collect();
        assert_eq!(shown, ["g(x1)", "g(g(x1))", "g(g(g(x1)))"]);
        let (b, _) = setup("arity: g 1 a 0\nfinal: r\nrule: a() -> q\nrule: g(q) -> r\n", &[]);
        assert!(unary_loop_sample(&b, 0, 4).unwrap().is_empty());
        let (c, _) = setup("arity: g 1 h 1 a 0\nfinal: q\nrule: a() -> q\nrule: g(q) -> q\nrule: h(q) -> q\n", &[]);
        let s = unary_loop_sample(&c, 0, 2).unwrap();
        assert_eq!(s.iter().filter(|t| t.height() == 1).count(), 2);
    }

    #[test]
    fn verdicts() {
        let (a, ra) = setup(TROUSERS, &[]);
        assert!(matches!(classify_nfta(&a, &ra, 4).unwrap(), TreeVerdict::DoublyExponential { .. }));

        let (m, mra) = setup("arity: g 1 h 1 a 0\nfinal: q\nrule: a() -> q\nrule: g(q) -> q\nrule: h(q) -> q\n", &[]);
        let v = classify_nfta(&m, &mra, 4).unwrap();
        let TreeVerdict::Exponential { first, second, .. } = &v else {
            panic!("expected exponential, got {v:?}");
        };
        assert_eq!(mra.render_term(first), "g(x1)");
        assert_eq!(mra.render_term(second), "h(x1)");
        let fam = exponential_tree_family(&m, &mra, 0, first, second, 3).unwrap();
        assert_eq!(fam.len(), 8);

        let (s, sra) = setup("arity: g 1 a 0\nfinal: q\nrule: a() -> q\nrule: g(q) -> q\n", &[]);
        assert_eq!(
            classify_nfta(&s, &sra, 6).unwrap(),
            TreeVerdict::PolynomialUpToBound {
                bound: 6,
                empty_language: false,
                truncated: false
            }
        );
    }

    #[test]
    fn ordered_loops_stay_polynomial() {
        let (m, mra) = setup(
            "arity: g 1 h 1 a 0\nfinal: q\nrule: a() -> q\nrule: g(q) -> q\nrule: h(q) -> q\n",
            &[("g", "h")],
        );
        assert!(matches!(
            classify_nfta(&m, &mra, 5).unwrap(),
            TreeVerdict::PolynomialUpToBound { .. }
        ));
    }
}
