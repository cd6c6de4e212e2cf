//! `lexwidth`: classify antichain growth of word and tree languages.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lexwidth::cfg::{
    classify_cfg_bounded, default_depth, reduce_chain_to_expantichain, reduce_intersection_to_chain, Cfg,
    CfgVerdict, CfgWitnessKind, Reduction,
};
use lexwidth::infoflow::{analyze_spec, ChannelSpec, FlowVerdict, OrderedParty, DEFAULT_LEAKAGE_LENGTH};
use lexwidth::regular::{classify_nfa, exponential_family, Verdict};
use lexwidth::tree::{
    classify_nfta, detect_trousers, doubly_exponential_family, tree_width_profile, Nfta, RankedAlphabet, TreeVerdict,
};
use lexwidth::width::{width_profile, WidthProfile};
use lexwidth::{Nfa, Poset, Word};

const SCHEMA: u32 = 1;
const FAMILY_BLOCKS: u32 = 3;

#[derive(Parser)]
#[command(name = "lexwidth", version)]
#[command(about = "Antichain growth of languages under lexicographic partial orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide polynomial vs exponential antichain growth of an NFA language
    ClassifyNfa {
        #[arg(long)]
        nfa: PathBuf,
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search a grammar for an exponential witness up to a derivation depth
    ClassifyCfg {
        #[arg(long)]
        cfg: PathBuf,
        #[arg(long)]
        order: PathBuf,
        /// Derivation depth (default 2·|nonterminals| + 2)
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Classify a tree automaton as doubly exponential, exponential or polynomial
    ClassifyNfta {
        #[arg(long)]
        nfta: PathBuf,
        #[arg(long)]
        order: PathBuf,
        /// Height bound for sampled loop contexts
        #[arg(long, default_value_t = 6)]
        height_bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exact widths of the length slices of an NFA language
    Width {
        #[arg(long)]
        nfa: PathBuf,
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exact widths of the height slices of a tree automaton language
    TreeWidth {
        #[arg(long)]
        nfta: PathBuf,
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        max_height: usize,
        #[arg(long)]
        json: bool,
    },
    /// Read a transcript specification as a covert channel from Alice to Bob
    Infoflow {
        /// NFA over Alice's letters followed by Bob's
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',')]
        alice: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        bob: Vec<String>,
        #[arg(long, value_enum, default_value_t = Party::Bob)]
        ordered_party: Party,
        /// Measure leakage for lengths 0..=MAX_LEN
        #[arg(long, default_value_t = DEFAULT_LEAKAGE_LENGTH)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build the grammars used to show undecidability
    Reduce {
        #[arg(long, value_enum)]
        kind: ReduceKind,
        #[arg(long)]
        cfg: Option<PathBuf>,
        #[arg(long)]
        cfg1: Option<PathBuf>,
        #[arg(long)]
        cfg2: Option<PathBuf>,
        /// Alphabet (and, for chain-to-expantichain, its order)
        #[arg(long)]
        order: PathBuf,
        /// Write PREFIX.cfg and PREFIX.ord instead of printing
        #[arg(long)]
        out_prefix: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Party {
    Alice,
    Bob,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    IntersectionToChain,
    ChainToExpantichain,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read `{}`", path.display()))
}

fn load_order(path: &Path) -> Result<Poset> {
    Poset::parse(&read(path)?).with_context(|| format!("invalid order in `{}`", path.display()))
}

fn load_cfg(path: &Path, p: &Poset) -> Result<Cfg> {
    Cfg::parse(&read(path)?, p.letter_names()).with_context(|| format!("invalid grammar in `{}`", path.display()))
}

fn load_nfa(path: &Path, p: &Poset) -> Result<Nfa> {
    Nfa::parse(&read(path)?, p.letter_names()).with_context(|| format!("invalid automaton in `{}`", path.display()))
}

fn load_nfta(path: &Path, order: &Path) -> Result<(Nfta, RankedAlphabet)> {
    let a = Nfta::parse(&read(path)?).with_context(|| format!("invalid tree automaton in `{}`", path.display()))?;
    let p = load_order(order)?;
    let ra = RankedAlphabet::for_nfta(&a, &p).with_context(|| format!("order `{}` does not cover the automaton", order.display()))?;
    Ok((a, ra))
}

fn spell(p: &Poset, w: &Word) -> Value {
    json!(p.spell(w))
}

fn emit(json_out: bool, value: Value, text: impl FnOnce() -> String) -> Result<()> {
    if json_out {
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::ClassifyNfa { nfa, order, json } => {
            let p = load_order(&order)?;
            let m = load_nfa(&nfa, &p)?;
            let verdict = classify_nfa(&m, &p)?;
            let (value, text) = nfa_report(&p, &verdict);
            emit(json, value, || text)
        }
        Command::ClassifyCfg { cfg, order, depth, json } => {
            let p = load_order(&order)?;
            let g = load_cfg(&cfg, &p)?;
            let depth = depth.unwrap_or_else(|| default_depth(&g));
            let verdict = classify_cfg_bounded(&g, &p, depth)?;
            let (value, text) = cfg_report(&p, &verdict);
            emit(json, value, || text)
        }
        Command::ClassifyNfta { nfta, order, height_bound, json } => {
            let (a, ra) = load_nfta(&nfta, &order)?;
            let verdict = classify_nfta(&a, &ra, height_bound)?;
            let (value, text) = nfta_report(&a, &ra, &verdict)?;
            emit(json, value, || text)
        }
        Command::Width { nfa, order, max_len, json } => {
            let p = load_order(&order)?;
            let m = load_nfa(&nfa, &p)?;
            let prof = width_profile(&m, &p, max_len)?;
            let prof = prof.map(|w| p.spell(&w));
            emit(json, profile_json("width", &prof), || profile_text("n", &prof, |w| w.join(" ")))
        }
        Command::TreeWidth { nfta, order, max_height, json } => {
            let (a, ra) = load_nfta(&nfta, &order)?;
            let prof = tree_width_profile(&a, &ra, max_height)?;
            let prof = prof.map(|t| ra.render(&t));
            emit(json, profile_json("tree-width", &prof), || profile_text("height", &prof, Clone::clone))
        }
        Command::Infoflow { spec, alice, bob, ordered_party, max_len, json } => {
            let alice: Vec<String> = alice.into_iter().filter(|s| !s.is_empty()).collect();
            let bob: Vec<String> = bob.into_iter().filter(|s| !s.is_empty()).collect();
            if alice.is_empty() {
                bail!("--alice needs at least one letter");
            }
            let party = match ordered_party {
                Party::Alice => OrderedParty::Alice,
                Party::Bob => OrderedParty::Bob,
            };
            let cs = ChannelSpec::parse(&read(&spec)?, &alice, &bob, party)
                .with_context(|| format!("invalid specification in `{}`", spec.display()))?;
            let report = analyze_spec(&cs, max_len)?;
            let p = cs.poset();
            let (underlying, _) = nfa_report(&p, &report.underlying);
            let verdict = match report.verdict {
                FlowVerdict::Safe => "safe",
                FlowVerdict::Dangerous => "dangerous",
            };
            let value = json!({
                "schema": SCHEMA,
                "command": "infoflow",
                "verdict": verdict,
                "ordered_party": party.to_string(),
                "underlying": underlying,
                "leakage": report.leakage,
                "witness": report.witness.iter().map(|w| spell(&p, w)).collect::<Vec<_>>(),
            });
            emit(json, value, || {
                let mut s = format!("verdict: {verdict}\nordered party: {party}\nleakage:\n");
                for row in &report.leakage {
                    let bits = row.bits.map_or("-".to_string(), |b| format!("{b:.3}"));
                    s.push_str(&format!("  n={:<3} width={:<6} bits={bits}\n", row.n, row.width));
                }
                if !report.witness.is_empty() {
                    s.push_str("witness transcripts:\n");
                    for w in &report.witness {
                        s.push_str(&format!("  {}\n", p.render(w)));
                    }
                }
                s
            })
        }
        Command::Reduce { kind, cfg, cfg1, cfg2, order, out_prefix, json } => {
            let p = load_order(&order)?;
            let r = match kind {
                ReduceKind::IntersectionToChain => {
                    let (Some(c1), Some(c2)) = (cfg1, cfg2) else {
                        bail!("intersection-to-chain needs --cfg1 and --cfg2");
                    };
                    let g1 = load_cfg(&c1, &p)?;
                    let g2 = load_cfg(&c2, &p)?;
                    reduce_intersection_to_chain(&g1, &g2, p.letter_names())?
                }
                ReduceKind::ChainToExpantichain => {
                    let Some(c) = cfg else {
                        bail!("chain-to-expantichain needs --cfg");
                    };
                    let g = load_cfg(&c, &p)?;
                    reduce_chain_to_expantichain(&g, &p)?
                }
            };
            write_reduction(&r, out_prefix.as_deref(), json)
        }
    }
}

fn write_reduction(r: &Reduction, out_prefix: Option<&Path>, json_out: bool) -> Result<()> {
    let grammar = r.grammar.to_string();
    let order = r.poset.to_string();
    let renamed: Vec<Value> = r.renamed.iter().map(|(a, b)| json!({"wanted": a, "used": b})).collect();
    let mut files = Vec::new();
    if let Some(prefix) = out_prefix {
        let cfg_path = prefix.with_extension("cfg");
        let ord_path = prefix.with_extension("ord");
        fs::write(&cfg_path, &grammar).with_context(|| format!("cannot write `{}`", cfg_path.display()))?;
        fs::write(&ord_path, &order).with_context(|| format!("cannot write `{}`", ord_path.display()))?;
        files = vec![cfg_path.display().to_string(), ord_path.display().to_string()];
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "reduce",
        "grammar": grammar,
        "order": order,
        "renamed": renamed,
        "files": files,
    });
    emit(json_out, value, || {
        let mut s = String::new();
        for (want, used) in &r.renamed {
            s.push_str(&format!("# fresh letter {want} renamed to {used}\n"));
        }
        if files.is_empty() {
            s.push_str(&format!("# grammar\n{grammar}# order\n{order}"));
        } else {
            s.push_str(&format!("wrote {}\n", files.join(" and ")));
        }
        s
    })
}

fn nfa_report(p: &Poset, v: &Verdict) -> (Value, String) {
    match v {
        Verdict::Polynomial { empty_language } => (
            json!({
                "schema": SCHEMA,
                "command": "classify-nfa",
                "verdict": "polynomial",
                "empty_language": empty_language,
            }),
            format!(
                "verdict: polynomial{}\n",
                if *empty_language { " (empty language)" } else { "" }
            ),
        ),
        Verdict::Exponential(w) => {
            let family = exponential_family(w, p, FAMILY_BLOCKS);
            let value = json!({
                "schema": SCHEMA,
                "command": "classify-nfa",
                "verdict": "exponential",
                "state": w.state,
                "w1": spell(p, &w.w1),
                "w2": spell(p, &w.w2),
                "u": spell(p, &w.access),
                "v": spell(p, &w.exit),
                "family": family.iter().map(|x| spell(p, x)).collect::<Vec<_>>(),
            });
            let mut s = format!(
                "verdict: exponential\nstate: {}\nincomparable loops: {} | {}\naccess: {}\nexit: {}\nantichain ({} words):\n",
                w.state,
                p.render(&w.w1),
                p.render(&w.w2),
                p.render(&w.access),
                p.render(&w.exit),
                family.len()
            );
            for x in &family {
                s.push_str(&format!("  {}\n", p.render(x)));
            }
            (value, s)
        }
    }
}

fn cfg_report(p: &Poset, v: &CfgVerdict) -> (Value, String) {
    match v {
        CfgVerdict::NoWitnessUpTo { depth, empty_language, truncated } => (
            json!({
                "schema": SCHEMA,
                "command": "classify-cfg",
                "verdict": "no-witness-up-to",
                "depth": depth,
                "empty_language": empty_language,
                "truncated": truncated,
            }),
            format!(
                "verdict: no witness up to depth {depth}{}{}\n",
                if *empty_language { " (empty language)" } else { "" },
                if *truncated { " (sample truncated)" } else { "" }
            ),
        ),
        CfgVerdict::ExponentialWitness(w) => {
            let family = w.family(2);
            let (kind, pair) = match w.kind {
                CfgWitnessKind::Left => (
                    "left",
                    json!({"w1": spell(p, &w.first.left), "w2": spell(p, &w.second.left)}),
                ),
                CfgWitnessKind::Right => (
                    "right",
                    json!({
                        "w": spell(p, &w.first.left),
                        "u1": spell(p, &w.first.right),
                        "u2": spell(p, &w.second.right),
                    }),
                ),
            };
            let value = json!({
                "schema": SCHEMA,
                "command": "classify-cfg",
                "verdict": "exponential",
                "witness": {
                    "nonterminal": w.nonterminal,
                    "kind": kind,
                    "pair": pair,
                    "access_left": spell(p, &w.access_left),
                    "access_right": spell(p, &w.access_right),
                    "yield": spell(p, &w.yield_word),
                    "family": family.iter().map(|x| spell(p, x)).collect::<Vec<_>>(),
                },
            });
            let detail = match w.kind {
                CfgWitnessKind::Left => format!(
                    "incomparable in L_{}: {} | {}",
                    w.nonterminal,
                    p.render(&w.first.left),
                    p.render(&w.second.left)
                ),
                CfgWitnessKind::Right => format!(
                    "for w = {}, incomparable in R: {} | {}",
                    p.render(&w.first.left),
                    p.render(&w.first.right),
                    p.render(&w.second.right)
                ),
            };
            let mut s = format!(
                "verdict: exponential\nnonterminal: {}\n{detail}\naccess: {} _ {}\nyield: {}\nantichain ({} words):\n",
                w.nonterminal,
                p.render(&w.access_left),
                p.render(&w.access_right),
                p.render(&w.yield_word),
                family.len()
            );
            for x in &family {
                s.push_str(&format!("  {}\n", p.render(x)));
            }
            (value, s)
        }
    }
}

fn nfta_report(a: &Nfta, ra: &RankedAlphabet, v: &TreeVerdict) -> Result<(Value, String)> {
    Ok(match v {
        TreeVerdict::DoublyExponential { state, trousers } => {
            let reduced = a.reduce();
            let t = detect_trousers(&reduced).context("trousers vanished on re-detection")?;
            let family = doubly_exponential_family(&reduced, ra, &t, 2)?;
            let sizes: Vec<usize> = family.iter().map(Vec::len).collect();
            let value = json!({
                "schema": SCHEMA,
                "command": "classify-nfta",
                "verdict": "doubly-exponential",
                "witness": {
                    "state": state,
                    "trousers": ra.render_term(trousers),
                    "antichain_sizes": sizes,
                    "antichain": family.last().map(|l| l.iter().map(|t| ra.render(t)).collect::<Vec<_>>()),
                },
            });
            let text = format!(
                "verdict: doubly exponential\nstate: {state}\ntrousers: {}\nantichain sizes: {sizes:?}\n",
                ra.render_term(trousers)
            );
            (value, text)
        }
        TreeVerdict::Exponential { state, first, second } => (
            json!({
                "schema": SCHEMA,
                "command": "classify-nfta",
                "verdict": "exponential",
                "witness": {
                    "state": state,
                    "first": ra.render_term(first),
                    "second": ra.render_term(second),
                },
            }),
            format!(
                "verdict: exponential\nstate: {state}\nincomparable loops: {} | {}\n",
                ra.render_term(first),
                ra.render_term(second)
            ),
        ),
        TreeVerdict::PolynomialUpToBound { bound, empty_language, truncated } => (
            json!({
                "schema": SCHEMA,
                "command": "classify-nfta",
                "verdict": "polynomial-up-to-bound",
                "bound": bound,
                "empty_language": empty_language,
                "truncated": truncated,
            }),
            format!(
                "verdict: polynomial up to height {bound}{}{}\n",
                if *empty_language { " (empty language)" } else { "" },
                if *truncated { " (sample truncated)" } else { "" }
            ),
        ),
    })
}

fn profile_json<T: serde::Serialize>(command: &str, prof: &WidthProfile<T>) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "rows": prof.rows,
        "growth_estimate": prof.growth_estimate,
    })
}

fn profile_text<T>(label: &str, prof: &WidthProfile<T>, show: impl Fn(&T) -> String) -> String {
    let mut s = String::new();
    for r in &prof.rows {
        let witness: Vec<String> = r.witness.iter().take(8).map(&show).collect();
        let more = if r.witness.len() > 8 { " …" } else { "" };
        s.push_str(&format!(
            "{label}={:<3} slice={:<6} width={:<6} {}{more}\n",
            r.n,
            r.slice,
            r.width,
            witness.join(", ")
        ));
    }
    s.push_str(&format!("growth estimate: {:.4} bits per step\n", prof.growth_estimate));
    s
}
