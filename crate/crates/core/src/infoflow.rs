//! Covert channels read off a communication specification.
//!
//! Alice emits letters of `Σ_A`, Bob of `Σ_B`, and the specification is a
//! regular language of transcripts. One party's letters are linearly ordered
//! in declaration order; every other pair of letters is incomparable. Sets
//! of transcripts that one deterministic strategy of the other party can
//! realise are then exactly the quasiantichains, so the widths of the
//! length slices measure how many bits Alice can leak. Polynomial growth is
//! `Safe` (logarithmic leakage), exponential growth is `Dangerous` (linear
//! leakage).
//!
//! Bob is the ordered party by default; [`OrderedParty::Alice`] gives the
//! other convention.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::nfa::{Nfa, NfaError};
use crate::order::{OrderError, Poset, Word};
use crate::regular::{classify_nfa, exponential_family, RegularError, Verdict};
use crate::width::{max_antichain, width_profile, WidthError};

/// Lengths measured by [`analyze_spec`] unless told otherwise.
pub const DEFAULT_LEAKAGE_LENGTH: usize = 8;

/// Block count of the transcript family attached to a `Dangerous` report.
pub const WITNESS_BLOCKS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("letter `{0}` belongs to both parties")]
    Overlap(String),
    #[error("specification alphabet must be Alice's letters followed by Bob's")]
    AlphabetMismatch,
    #[error("unknown party `{0}` (expected `alice` or `bob`)")]
    UnknownParty(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Nfa(#[from] NfaError),
    #[error(transparent)]
    Regular(#[from] RegularError),
    #[error(transparent)]
    Width(#[from] WidthError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderedParty {
    Alice,
    #[default]
    Bob,
}

impl FromStr for OrderedParty {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "alice" => Ok(OrderedParty::Alice),
            "bob" => Ok(OrderedParty::Bob),
            _ => Err(FlowError::UnknownParty(s.to_string())),
        }
    }
}

impl fmt::Display for OrderedParty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderedParty::Alice => "alice",
            OrderedParty::Bob => "bob",
        })
    }
}

/// Letters `alice ++ bob`, with the ordered party's letters a chain in
/// declaration order and all other pairs incomparable.
pub fn build_infoflow_order<S: AsRef<str>>(alice: &[S], bob: &[S], party: OrderedParty) -> Result<Poset, FlowError> {
    let a: Vec<&str> = alice.iter().map(AsRef::as_ref).collect();
    let b: Vec<&str> = bob.iter().map(AsRef::as_ref).collect();
    let set: HashSet<&str> = a.iter().copied().collect();
    if let Some(x) = b.iter().find(|x| set.contains(*x)) {
        return Err(FlowError::Overlap(x.to_string()));
    }
    let ordered = match party {
        OrderedParty::Alice => &a,
        OrderedParty::Bob => &b,
    };
    let pairs: Vec<(&str, &str)> = ordered.windows(2).map(|w| (w[0], w[1])).collect();
    let letters: Vec<&str> = a.iter().chain(&b).copied().collect();
    Ok(Poset::new(&letters, &pairs)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSpec {
    pub spec: Nfa,
    pub alice: Vec<String>,
    pub bob: Vec<String>,
    pub ordered_party: OrderedParty,
}

impl ChannelSpec {
    /// `spec` must be over `alice ++ bob` in that order.
    pub fn new<S: AsRef<str>>(spec: Nfa, alice: &[S], bob: &[S], ordered_party: OrderedParty) -> Result<ChannelSpec, FlowError> {
        let alice: Vec<String> = alice.iter().map(|s| s.as_ref().to_string()).collect();
        let bob: Vec<String> = bob.iter().map(|s| s.as_ref().to_string()).collect();
        build_infoflow_order(&alice, &bob, ordered_party)?;
        let all: Vec<&String> = alice.iter().chain(&bob).collect();
        if spec.letter_names().len() != all.len() || spec.letter_names().iter().zip(&all).any(|(x, y)| x != *y) {
            return Err(FlowError::AlphabetMismatch);
        }
        Ok(ChannelSpec {
            spec,
            alice,
            bob,
            ordered_party,
        })
    }

    /// Parses an NFA text over `alice ++ bob`.
    pub fn parse<S: AsRef<str>>(text: &str, alice: &[S], bob: &[S], ordered_party: OrderedParty) -> Result<ChannelSpec, FlowError> {
        let letters: Vec<&str> = alice.iter().chain(bob).map(AsRef::as_ref).collect();
        build_infoflow_order(alice, bob, ordered_party)?;
        let spec = Nfa::parse(text, &letters)?;
        ChannelSpec::new(spec, alice, bob, ordered_party)
    }

    pub fn poset(&self) -> Poset {
        build_infoflow_order(&self.alice, &self.bob, self.ordered_party).expect("checked at construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowVerdict {
    Safe,
    Dangerous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageRow {
    pub n: usize,
    pub width: usize,
    /// `log2(width)`; absent when no transcript has length `n`.
    pub bits: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    pub verdict: FlowVerdict,
    pub underlying: Verdict,
    pub leakage: Vec<LeakageRow>,
    /// Pairwise incomparable accepted transcripts; empty when `Safe`.
    pub witness: Vec<Word>,
}

/// Classifies the channel and measures leakage for lengths `0..=n_max`.
pub fn analyze_spec(cs: &ChannelSpec, n_max: usize) -> Result<FlowReport, FlowError> {
    let p = cs.poset();
    let underlying = classify_nfa(&cs.spec, &p)?;
    let profile = width_profile(&cs.spec, &p, n_max)?;
    let leakage = profile
        .rows
        .iter()
        .map(|r| LeakageRow {
            n: r.n,
            width: r.width,
            bits: bits(r.width),
        })
        .collect();
    let (verdict, witness) = match underlying.witness() {
        Some(w) => (FlowVerdict::Dangerous, exponential_family(w, &p, WITNESS_BLOCKS)),
        None => (FlowVerdict::Safe, Vec::new()),
    };
    Ok(FlowReport {
        verdict,
        underlying,
        leakage,
        witness,
    })
}

/// Bits Alice can pass in transcripts of length `n`: `log2` of the largest
/// consistent set. Equal-length transcripts have no prefix pairs, so this
/// is the width of the slice.
pub fn consistent_set_width(cs: &ChannelSpec, n: usize) -> Result<Option<f64>, FlowError> {
    let slice = cs.spec.enumerate_slice(n)?;
    let a = max_antichain(&cs.poset(), &slice.words)?;
    Ok(bits(a.size))
}

fn bits(width: usize) -> Option<f64> {
    (width > 0).then(|| (width as f64).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::Relation;

    const ALT: &str = "states: s t\ninitial: s\nfinal: s\ns a0 t\ns a1 t\nt b s\n";
    const SINGLE: &str = "states: s t\ninitial: s\nfinal: s\ns a0 t\nt b s\n";
    const SWITCH: &str = "states: p r\ninitial: p\nfinal: p r\np a0 p\np a1 r\nr a1 r\n";

    #[test]
    fn order_construction() {
        let p = build_infoflow_order(&["a0", "a1"], &["b"], OrderedParty::Bob).unwrap();
        assert!(p.strict_pairs().is_empty());
        let q = build_infoflow_order(&["a0", "a1"], &["b0", "b1"], OrderedParty::Alice).unwrap();
        let a0 = q.letter("a0").unwrap();
        let a1 = q.letter("a1").unwrap();
        assert!(q.lt(a0, a1));
        assert!(q.incomparable(q.letter("b0").unwrap(), q.letter("b1").unwrap()));
        assert!(q.incomparable(a0, q.letter("b0").unwrap()));
        assert_eq!(
            build_infoflow_order(&["x"], &["x"], OrderedParty::Bob),
            Err(FlowError::Overlap("x".into()))
        );
    }

    #[test]
    fn alternating_choice_is_dangerous() {
        let cs = ChannelSpec::parse(ALT, &["a0", "a1"], &["b"], OrderedParty::Bob).unwrap();
        let r = analyze_spec(&cs, 8).unwrap();
        assert_eq!(r.verdict, FlowVerdict::Dangerous);
        let w = r.underlying.witness().unwrap();
        let p = cs.poset();
        assert_eq!(p.render(&w.w1), "a0 b");
        assert_eq!(p.render(&w.w2), "a1 b");
        for k in 0..=4 {
            assert_eq!(r.leakage[2 * k].bits, Some(k as f64));
        }
        assert_eq!(r.witness.len(), 8);
        assert_eq!(consistent_set_width(&cs, 4).unwrap(), Some(2.0));
    }

    #[test]
    fn single_message_is_safe() {
        let cs = ChannelSpec::parse(SINGLE, &["a0"], &["b"], OrderedParty::Bob).unwrap();
        let r = analyze_spec(&cs, 6).unwrap();
        assert_eq!(r.verdict, FlowVerdict::Safe);
        assert!(r.witness.is_empty());
        assert!(r.leakage.iter().all(|row| row.bits.is_none_or(|b| b == 0.0)));
        assert_eq!(consistent_set_width(&cs, 6).unwrap(), Some(0.0));
    }

    #[test]
    fn switch_point_is_safe() {
        let cs = ChannelSpec::parse(SWITCH, &["a0", "a1"], &[] as &[&str], OrderedParty::Bob).unwrap();
        let r = analyze_spec(&cs, 8).unwrap();
        assert_eq!(r.verdict, FlowVerdict::Safe);
        let widths: Vec<usize> = r.leakage.iter().map(|row| row.width).collect();
        assert_eq!(widths, (1..=9).collect::<Vec<_>>());
    }

    #[test]
    fn total_order_leaks_nothing() {
        let cs = ChannelSpec::parse(ALT, &["a0", "a1"], &["b"], OrderedParty::Alice).unwrap();
        // a0 < a1 and b alone: every equal-length pair first differs on Alice's letters.
        assert_eq!(consistent_set_width(&cs, 4).unwrap(), Some(0.0));
    }

    #[test]
    fn incomparable_iff_first_difference_not_both_ordered() {
        let p = build_infoflow_order(&["a0", "a1"], &["b0", "b1"], OrderedParty::Bob).unwrap();
        let all = Nfa::universal(p.letter_names()).enumerate_slice(3).unwrap().words;
        let bob: HashSet<&str> = ["b0", "b1"].into();
        for x in &all {
            for y in &all {
                if x == y {
                    continue;
                }
                let i = x.iter().zip(y.iter()).position(|(a, b)| a != b).unwrap();
                let both = bob.contains(p.name(x[i])) && bob.contains(p.name(y[i]));
                assert_eq!(p.relate(x, y) == Relation::Incomparable, !both);
            }
        }
    }

    #[test]
    fn mismatched_alphabet() {
        let m = Nfa::universal(&["b", "a0"]);
        assert_eq!(
            ChannelSpec::new(m, &["a0"], &["b"], OrderedParty::Bob),
            Err(FlowError::AlphabetMismatch)
        );
        assert!("carol".parse::<OrderedParty>().is_err());
        assert_eq!("Alice".parse::<OrderedParty>().unwrap(), OrderedParty::Alice);
    }
}
