//! Randomized invariants checked against reference oracles.

mod common;

use proptest::prelude::*;
use rand::Rng;

use lexwidth::cfg::classify_cfg_bounded;
use lexwidth::infoflow::{analyze_spec, ChannelSpec, OrderedParty};
use lexwidth::regular::{build_incomparability_automaton, classify_nfa, Verdict};
use lexwidth::tree::{
    detect_trousers, encode_word, encode_word_automaton, tree_relate, Nfta, Rule, Term, TreeStateId,
};
use lexwidth::width::{max_antichain, max_antichain_bruteforce, width_profile};
use lexwidth::{lex_relate, Letter, Nfa, Poset, Relation, Word};

use common::*;

fn poset_and_words(max_len: usize, count: usize) -> impl Strategy<Value = (Poset, Vec<Word>)> {
    (any::<u64>(), 1..=4usize).prop_flat_map(move |(seed, n)| {
        let p = random_poset(&mut rng(seed), n);
        let word = prop::collection::vec(0..n as u32, 0..=max_len)
            .prop_map(|v| Word::from_letters(v.into_iter().map(Letter).collect()));
        (Just(p), prop::collection::vec(word, count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn order_is_a_partial_order((p, ws) in poset_and_words(5, 3)) {
        let (x, y, z) = (&ws[0], &ws[1], &ws[2]);
        prop_assert_eq!(lex_relate(&p, x, x), Relation::Equal);
        let xy = lex_relate(&p, x, y);
        prop_assert_eq!(xy.reverse(), lex_relate(&p, y, x));
        prop_assert_eq!(xy == Relation::Equal, x == y);
        let le = |a: &Word, b: &Word| matches!(lex_relate(&p, a, b), Relation::Equal | Relation::RelatedForward);
        if le(x, y) && le(y, z) {
            prop_assert!(le(x, z));
        }
        prop_assert_eq!(le(x, y), reference_le(&p, x, y));
    }

    #[test]
    fn shuffle_acceptance_is_incomparability((p, ws) in poset_and_words(8, 2)) {
        let b = build_incomparability_automaton(&p);
        let shuffled = b.alphabet.perfect_shuffle(&ws[0], &ws[1]);
        prop_assert_eq!(b.accepts(&shuffled), !reference_comparable(&p, &ws[0], &ws[1]));
    }

    #[test]
    fn matching_width_is_exact((p, ws) in poset_and_words(4, 10)) {
        let a = max_antichain(&p, &ws).unwrap();
        prop_assert_eq!(a.size, reference_width(&p, &ws));
        prop_assert_eq!(a.size, max_antichain_bruteforce(&p, &ws).unwrap());
    }

    #[test]
    fn monadic_encoding_preserves_order((p, ws) in poset_and_words(6, 2)) {
        let names = p.letter_names().to_vec();
        let e = encode_word_automaton(&Nfa::universal(&names), &p).unwrap();
        let (t1, t2) = (encode_word(&ws[0], e.bottom), encode_word(&ws[1], e.bottom));
        prop_assert_eq!(tree_relate(&e.alphabet, &t1, &t2), lex_relate(&p, &ws[0], &ws[1]));
    }

    #[test]
    fn polynomial_widths_stay_polynomial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let p = random_poset(&mut r, n);
        let m = random_trimmed_nfa(&mut r, &p, 3);
        if let Verdict::Polynomial { .. } = classify_nfa(&m, &p).unwrap() {
            let prof = width_profile(&m, &p, 6).unwrap();
            for row in &prof.rows {
                prop_assert!(row.width <= (row.n + 1).pow(m.num_states() as u32));
            }
        }
    }
}

/// States reachable by some context of height `≤ h` with exactly `k` holes
/// (each hole read as state `q`), for `k = 0, 1, 2`.
fn bounded_hole_states(a: &Nfta, q: TreeStateId, h: usize) -> [Vec<bool>; 3] {
    let n = a.num_states();
    let mut reach = [vec![false; n], vec![false; n], vec![false; n]];
    reach[1][q] = true;
    for _ in 0..h {
        let prev = reach.clone();
        for r in a.rules() {
            // Distribute hole counts over the children.
            let mut ways = vec![vec![false; 3]; r.children.len() + 1];
            ways[0][0] = true;
            for (i, &c) in r.children.iter().enumerate() {
                for have in 0..3 {
                    if !ways[i][have] {
                        continue;
                    }
                    for (add, row) in prev.iter().enumerate() {
                        if have + add < 3 && row[c] {
                            ways[i + 1][have + add] = true;
                        }
                    }
                }
            }
            for k in 0..3 {
                if ways[r.children.len()][k] {
                    reach[k][r.target] = true;
                }
            }
        }
    }
    reach
}

fn random_nfta(r: &mut impl Rng) -> Nfta {
    let n = r.gen_range(1..=3);
    let symbols = vec![("a".to_string(), 0), ("g".to_string(), 1), ("f".to_string(), 2)];
    let mut rules = Vec::new();
    for target in 0..n {
        if r.gen_bool(0.5) {
            rules.push(Rule { symbol: Letter(0), children: vec![], target });
        }
        for c in 0..n {
            if r.gen_bool(0.3) {
                rules.push(Rule { symbol: Letter(1), children: vec![c], target });
            }
            for d in 0..n {
                if r.gen_bool(0.12) {
                    rules.push(Rule { symbol: Letter(2), children: vec![c, d], target });
                }
            }
        }
    }
    let finals = (0..n).map(|_| r.gen_bool(0.5)).collect();
    Nfta::new(symbols, (0..n).map(|i| format!("q{i}")).collect(), finals, rules).unwrap()
}

fn holes(t: &Term) -> Vec<u8> {
    match t {
        Term::Hole(i) => vec![*i],
        Term::Node(_, cs) => cs.iter().flat_map(holes).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn trousers_found_iff_bounded_search_finds_one(seed in any::<u64>()) {
        let a = random_nfta(&mut rng(seed)).reduce();
        let bounded = (0..a.num_states()).any(|q| bounded_hole_states(&a, q, 4)[2][q]);
        match detect_trousers(&a) {
            Some(t) => {
                let mut hs = holes(&t.context);
                hs.sort_unstable();
                prop_assert_eq!(hs, vec![1, 2]);
                prop_assert!(a.run_term(&t.context, &[t.state, t.state])[t.state]);
                let h = t.context.height().max(4);
                prop_assert!(bounded_hole_states(&a, t.state, h)[2][t.state]);
            }
            None => prop_assert!(!bounded),
        }
    }

    #[test]
    fn verdict_ignores_order_of_the_ordered_party(seed in any::<u64>(), alice_party in any::<bool>()) {
        let mut r = rng(seed);
        let alice = ["a0", "a1"];
        let bob = ["b0", "b1"];
        let letters = Poset::trivial(&["a0", "a1", "b0", "b1"]).unwrap();
        let m = random_trimmed_nfa(&mut r, &letters, 3);
        let text = nfa_text(&m);
        let party = if alice_party { OrderedParty::Alice } else { OrderedParty::Bob };
        // Spec letters are listed Alice first, so relabel instead of reordering.
        let base = analyze_spec(&ChannelSpec::parse(&text, &alice, &bob, party).unwrap(), 0).unwrap().verdict;
        let swapped_text = match party {
            OrderedParty::Alice => swap_letters(&text, "a0", "a1"),
            OrderedParty::Bob => swap_letters(&text, "b0", "b1"),
        };
        let cs = ChannelSpec::parse(&swapped_text, &alice, &bob, party).unwrap();
        prop_assert_eq!(base, analyze_spec(&cs, 0).unwrap().verdict);
    }

    #[test]
    fn leakage_grows_on_prefix_closed_specs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let letters = Poset::trivial(&["a0", "a1", "b0"]).unwrap();
        let m = random_trimmed_nfa(&mut r, &letters, 3);
        // Every state accepting and able to move: prefix-closed, no dead ends.
        let live = (0..m.num_states()).all(|q| m.letters().any(|a| !m.successors(q, a).is_empty()));
        prop_assume!(live);
        let all_final = Nfa::from_ids(
            m.state_names().to_vec(),
            m.letter_names().to_vec(),
            m.initial(),
            vec![true; m.num_states()],
            m.transitions().collect::<Vec<_>>(),
        );
        for party in [OrderedParty::Alice, OrderedParty::Bob] {
            let cs = ChannelSpec::new(all_final.clone(), &["a0", "a1"], &["b0"], party).unwrap();
            let rep = analyze_spec(&cs, 7).unwrap();
            for w in rep.leakage.windows(2) {
                prop_assert!(w[0].width <= w[1].width, "width fell from {} to {}", w[0].width, w[1].width);
            }
        }
    }

    #[test]
    fn deeper_search_keeps_witnesses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let p = random_poset(&mut r, n);
        let names: Vec<&str> = p.letter_names().iter().map(String::as_str).collect();
        let g = random_cfg(&mut r, &names);
        let Ok(shallow) = classify_cfg_bounded(&g, &p, 3) else { return Ok(()); };
        if shallow.witness().is_some() {
            let deep = classify_cfg_bounded(&g, &p, 5).unwrap();
            prop_assert!(deep.witness().is_some());
        }
    }
}

fn nfa_text(m: &Nfa) -> String {
    let mut s = format!("states: {}\n", m.state_names().join(" "));
    s.push_str(&format!("initial: {}\n", m.state_name(m.initial().unwrap())));
    let finals: Vec<&str> = m.finals().map(|q| m.state_name(q)).collect();
    s.push_str(&format!("final: {}\n", finals.join(" ")));
    for (from, a, to) in m.transitions() {
        s.push_str(&format!("{} {} {}\n", m.state_name(from), m.letter_names()[a.index()], m.state_name(to)));
    }
    s
}

fn swap_letters(text: &str, x: &str, y: &str) -> String {
    text.lines()
        .map(|line| {
            line.split(' ')
                .map(|tok| if tok == x { y } else if tok == y { x } else { tok })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
