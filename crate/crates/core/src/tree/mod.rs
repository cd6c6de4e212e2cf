//! Ranked trees, their lexicographic order, and bottom-up tree automata.
//!
//! `f(t1..tn) ≤ g(s1..sm)` holds when `f < g`, or `f = g` and `ti ≤ si` for
//! every child. Regular tree languages then fall into three growth classes:
//! doubly exponential (some state has a "pair of trousers", a binary context
//! looping on it), exponential (some unary loop set is not a chain), and
//! polynomial. The last class is only claimed up to a sampled height.
//!
//! Heights count nodes on the longest root-to-leaf path, so a constant has
//! height 1 and a hole has height 0.

mod analysis;
mod encode;
mod nfta;

use thiserror::Error;

use crate::order::{Letter, OrderError, Poset, Relation};
use crate::text::SyntaxError;

pub use analysis::{
    classify_nfta, detect_trousers, doubly_exponential_family, exponential_tree_family,
    incomparable_ground_pair, unary_loop_sample, TreeVerdict, Trousers, DEFAULT_CONTEXT_CAP,
};
pub use encode::{encode_word, encode_word_automaton, EncodedAutomaton};
pub use nfta::{tree_width_profile, Nfta, Rule, DEFAULT_HEIGHT_CAP};

pub type TreeStateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{symbol}` has arity {expected} but is used with {found} children")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("requested height {requested} exceeds the cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("enumeration exceeded the cap of {0} results")]
    TooManyResults(usize),
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Function symbols with arities and a partial order, indexed like the
/// automaton they belong to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedAlphabet {
    poset: Poset,
    arities: Vec<usize>,
}

impl RankedAlphabet {
    /// `symbols` pairs names with arities; `p` must order every name.
    pub fn new<S: AsRef<str>>(symbols: &[(S, usize)], p: &Poset) -> Result<RankedAlphabet, TreeError> {
        let names: Vec<&str> = symbols.iter().map(|(s, _)| s.as_ref()).collect();
        for n in &names {
            if p.letter(n).is_none() {
                return Err(TreeError::UnknownSymbol(n.to_string()));
            }
        }
        let poset = p.restrict(&names).map_err(|e| match e {
            OrderError::DuplicateLetter(s) => TreeError::DuplicateSymbol(s),
            e => e.into(),
        })?;
        Ok(RankedAlphabet {
            poset,
            arities: symbols.iter().map(|&(_, k)| k).collect(),
        })
    }

    /// The alphabet of `a`, ordered by `p`.
    pub fn for_nfta(a: &Nfta, p: &Poset) -> Result<RankedAlphabet, TreeError> {
        let symbols: Vec<(&str, usize)> = a
            .symbol_names()
            .iter()
            .zip(a.arities())
            .map(|(s, &k)| (s.as_str(), k))
            .collect();
        RankedAlphabet::new(&symbols, p)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn symbol(&self, name: &str) -> Option<Letter> {
        self.poset.letter(name)
    }

    pub fn name(&self, f: Letter) -> &str {
        self.poset.name(f)
    }

    pub fn arity(&self, f: Letter) -> usize {
        self.arities[f.index()]
    }

    /// Parses `f(a(),g(b))`; a bare name stands for a constant.
    pub fn parse_tree(&self, text: &str) -> Result<Tree, TreeError> {
        let mut parser = TreeParser { text, pos: 0, ra: self };
        let t = parser.tree()?;
        parser.skip_ws();
        if parser.pos != text.len() {
            return Err(SyntaxError::new(1, format!("trailing input at column {}", parser.pos + 1)).into());
        }
        Ok(t)
    }

    pub fn render(&self, t: &Tree) -> String {
        let mut s = String::new();
        self.render_into(&Term::from(t), &mut s);
        s
    }

    /// Renders a context with holes written `x1`, `x2`.
    pub fn render_term(&self, t: &Term) -> String {
        let mut s = String::new();
        self.render_into(t, &mut s);
        s
    }

    fn render_into(&self, t: &Term, out: &mut String) {
        match t {
            Term::Hole(i) => out.push_str(&format!("x{i}")),
            Term::Node(f, cs) => {
                out.push_str(self.name(*f));
                out.push('(');
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.render_into(c, out);
                }
                out.push(')');
            }
        }
    }
}

struct TreeParser<'a> {
    text: &'a str,
    pos: usize,
    ra: &'a RankedAlphabet,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn err(&self, msg: &str) -> TreeError {
        SyntaxError::new(1, format!("{msg} at column {}", self.pos + 1)).into()
    }

    fn tree(&mut self) -> Result<Tree, TreeError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..]
            .find(|c: char| c == '(' || c == ')' || c == ',' || c.is_whitespace())
            .unwrap_or(self.text.len() - start);
        if len == 0 {
            return Err(self.err("expected a symbol"));
        }
        let name = &self.text[start..start + len];
        self.pos += len;
        let f = self
            .ra
            .symbol(name)
            .ok_or_else(|| TreeError::UnknownSymbol(name.to_string()))?;
        self.skip_ws();
        let mut children = Vec::new();
        if self.text[self.pos..].starts_with('(') {
            self.pos += 1;
            self.skip_ws();
            if self.text[self.pos..].starts_with(')') {
                self.pos += 1;
            } else {
                loop {
                    children.push(self.tree()?);
                    self.skip_ws();
                    if self.text[self.pos..].starts_with(',') {
                        self.pos += 1;
                    } else if self.text[self.pos..].starts_with(')') {
                        self.pos += 1;
                        break;
                    } else {
                        return Err(self.err("expected `,` or `)`"));
                    }
                }
            }
        }
        let expected = self.ra.arity(f);
        if children.len() != expected {
            return Err(TreeError::ArityMismatch {
                symbol: name.to_string(),
                expected,
                found: children.len(),
            });
        }
        Ok(Tree { symbol: f, children })
    }
}

/// A ground tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub symbol: Letter,
    pub children: Vec<Tree>,
}

impl Tree {
    pub fn leaf(symbol: Letter) -> Tree {
        Tree {
            symbol,
            children: Vec::new(),
        }
    }

    pub fn node(symbol: Letter, children: Vec<Tree>) -> Tree {
        Tree { symbol, children }
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Tree::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }
}

/// A tree that may contain holes `x1`, `x2`. Contexts are linear: each hole
/// occurs at most once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Hole(u8),
    Node(Letter, Vec<Term>),
}

impl From<&Tree> for Term {
    fn from(t: &Tree) -> Term {
        Term::Node(t.symbol, t.children.iter().map(Term::from).collect())
    }
}

impl Term {
    pub fn height(&self) -> usize {
        match self {
            Term::Hole(_) => 0,
            Term::Node(_, cs) => 1 + cs.iter().map(Term::height).max().unwrap_or(0),
        }
    }

    /// How often hole `i` occurs.
    pub fn hole_count(&self, i: u8) -> usize {
        match self {
            Term::Hole(j) => usize::from(*j == i),
            Term::Node(_, cs) => cs.iter().map(|c| c.hole_count(i)).sum(),
        }
    }

    /// Substitutes `fill[i - 1]` for hole `xi`. Panics on a hole without a
    /// filler.
    pub fn fill(&self, fill: &[&Tree]) -> Tree {
        match self {
            Term::Hole(i) => fill[usize::from(*i) - 1].clone(),
            Term::Node(f, cs) => Tree::node(*f, cs.iter().map(|c| c.fill(fill)).collect()),
        }
    }

    /// Substitutes `inner` for every hole.
    pub fn compose(&self, inner: &Term) -> Term {
        match self {
            Term::Hole(_) => inner.clone(),
            Term::Node(f, cs) => Term::Node(*f, cs.iter().map(|c| c.compose(inner)).collect()),
        }
    }
}

/// `t1 ≤ t2` in the lexicographic tree order.
pub fn tree_le(ra: &RankedAlphabet, t1: &Tree, t2: &Tree) -> bool {
    ra.poset.lt(t1.symbol, t2.symbol)
        || (t1.symbol == t2.symbol && t1.children.iter().zip(&t2.children).all(|(a, b)| tree_le(ra, a, b)))
}

pub fn tree_relate(ra: &RankedAlphabet, t1: &Tree, t2: &Tree) -> Relation {
    if t1 == t2 {
        Relation::Equal
    } else if tree_le(ra, t1, t2) {
        Relation::RelatedForward
    } else if tree_le(ra, t2, t1) {
        Relation::RelatedBackward
    } else {
        Relation::Incomparable
    }
}

pub fn is_tree_antichain(ra: &RankedAlphabet, ts: &[Tree]) -> bool {
    ts.iter()
        .enumerate()
        .all(|(i, a)| ts[i + 1..].iter().all(|b| tree_relate(ra, a, b) == Relation::Incomparable))
}

// Whether some filling of the holes makes `c1 ≤ c2`.
fn possibly_le(ra: &RankedAlphabet, c1: &Term, c2: &Term) -> bool {
    match (c1, c2) {
        (Term::Hole(_), _) | (_, Term::Hole(_)) => true,
        (Term::Node(f, cs), Term::Node(g, ds)) => {
            ra.poset.lt(*f, *g) || (f == g && cs.iter().zip(ds).all(|(a, b)| possibly_le(ra, a, b)))
        }
    }
}

/// Whether `c1[s]` and `c2[s′]` are incomparable for all ground fillings.
pub fn contexts_incomparable(ra: &RankedAlphabet, c1: &Term, c2: &Term) -> bool {
    !possibly_le(ra, c1, c2) && !possibly_le(ra, c2, c1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fab(pairs: &[(&str, &str)]) -> RankedAlphabet {
        let p = Poset::new(&["f", "a", "b"], pairs).unwrap();
        RankedAlphabet::new(&[("f", 2), ("a", 0), ("b", 0)], &p).unwrap()
    }

    fn all_trees(ra: &RankedAlphabet, max_height: usize) -> Vec<Tree> {
        let mut by_height: Vec<Vec<Tree>> = vec![Vec::new()];
        for h in 1..=max_height {
            let lower: Vec<Tree> = by_height.iter().flatten().cloned().collect();
            let mut level = Vec::new();
            for f in ra.poset().letters() {
                match ra.arity(f) {
                    0 if h == 1 => level.push(Tree::leaf(f)),
                    2 => {
                        for x in &lower {
                            for y in &lower {
                                if x.height().max(y.height()) == h - 1 {
                                    level.push(Tree::node(f, vec![x.clone(), y.clone()]));
                                }
                            }
                        }
                    }
                    _ => {}
                }
            }
            by_height.push(level);
        }
        by_height.into_iter().flatten().collect()
    }

    #[test]
    fn parse_and_render() {
        let ra = fab(&[]);
        let t = ra.parse_tree("f(a(), f(a, b()))").unwrap();
        assert_eq!(ra.render(&t), "f(a(),f(a(),b()))");
        assert_eq!(t.height(), 3);
        assert!(matches!(ra.parse_tree("f(a)"), Err(TreeError::ArityMismatch { .. })));
        assert!(matches!(ra.parse_tree("g"), Err(TreeError::UnknownSymbol(_))));
        assert!(ra.parse_tree("a() b").is_err());
    }

    #[test]
    fn relate_examples() {
        let ra = fab(&[("a", "f")]);
        let t = |s| ra.parse_tree(s).unwrap();
        assert_eq!(tree_relate(&ra, &t("a"), &t("f(a,a)")), Relation::RelatedForward);
        let free = fab(&[]);
        let u = |s| free.parse_tree(s).unwrap();
        assert_eq!(tree_relate(&free, &u("f(a,b)"), &u("f(b,a)")), Relation::Incomparable);
        let ab = fab(&[("a", "b")]);
        let v = |s| ab.parse_tree(s).unwrap();
        assert_eq!(tree_relate(&ab, &v("f(a,a)"), &v("f(a,b)")), Relation::RelatedForward);
        assert_eq!(tree_relate(&ab, &v("f(a,b)"), &v("f(a,a)")), Relation::RelatedBackward);
        assert_eq!(tree_relate(&ab, &v("f(a,b)"), &v("f(b,a)")), Relation::Incomparable);
    }

    #[test]
    fn partial_order_laws_exhaustive() {
        for pairs in [vec![], vec![("a", "b")], vec![("a", "b"), ("b", "f")], vec![("f", "a")]] {
            let ra = fab(&pairs);
            let ts = all_trees(&ra, 3);
            assert_eq!(ts.len(), 2 + 4 + (36 - 4));
            for x in &ts {
                assert!(tree_le(&ra, x, x));
                for y in &ts {
                    let r = tree_relate(&ra, x, y);
                    assert_eq!(r.reverse(), tree_relate(&ra, y, x));
                    if x != y {
                        assert!(!(tree_le(&ra, x, y) && tree_le(&ra, y, x)), "antisymmetry");
                    }
                }
            }
            for x in ts.iter().step_by(3) {
                for y in ts.iter().step_by(2) {
                    if !tree_le(&ra, x, y) {
                        continue;
                    }
                    for z in &ts {
                        if tree_le(&ra, y, z) {
                            assert!(tree_le(&ra, x, z), "transitivity");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn context_wildcard() {
        let ra = fab(&[]);
        let a = ra.symbol("a").unwrap();
        let b = ra.symbol("b").unwrap();
        let f = ra.symbol("f").unwrap();
        let c1 = Term::Node(f, vec![Term::Node(a, vec![]), Term::Hole(1)]);
        let c2 = Term::Node(f, vec![Term::Node(b, vec![]), Term::Hole(1)]);
        assert!(contexts_incomparable(&ra, &c1, &c2));
        let c3 = Term::Node(f, vec![Term::Hole(1), Term::Node(b, vec![])]);
        assert!(!contexts_incomparable(&ra, &c1, &c3));
        assert_eq!(c1.height(), 2);
        assert_eq!(Term::Hole(1).height(), 0);
        let filled = c1.fill(&[&Tree::leaf(b)]);
        assert_eq!(ra.render(&filled), "f(a(),b())");
        assert_eq!(ra.render_term(&c1.compose(&c2)), "f(a(),f(b(),x1))");
    }
}
