//! Antichain growth of languages over partially ordered alphabets.
//!
//! Words are ordered lexicographically from a partial order on letters. The
//! crate classifies how fast the largest antichain among the length-`n` words
//! of a language can grow:
//!
//! - [`regular`] decides polynomial versus exponential growth for NFAs.
//! - [`cfg`] searches context-free grammars for exponential witnesses up to a
//!   derivation depth (the general question is undecidable).
//! - [`tree`] separates doubly exponential, exponential and polynomial growth
//!   for regular tree languages.
//! - [`width`] measures exact widths of finite slices as ground truth.
//! - [`infoflow`] reads a communication specification as a covert channel.

pub mod cfg;
pub mod infoflow;
pub mod nfa;
pub mod order;
pub mod regular;
pub mod text;
pub mod tree;
pub mod width;

pub use nfa::{Nfa, NfaError, StateId, WordSlice};
pub use order::{
    is_antichain, is_chain, is_quasiantichain, lex_relate, pump_antichain, Letter, OrderError,
    Poset, Relation, Word,
};
